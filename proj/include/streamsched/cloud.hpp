#pragma once

#include <streamsched/parameter_ranges.hpp>
#include <streamsched/workflow.hpp>

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace streamsched {

using vm_id = std::size_t; // global VM identifier, unique across clouds

struct vm_offer {
    vm_id global_id = 0;
    cloud_index cloud = 0;
    std::size_t local_id = 0; // position inside its cloud
    std::string type_name;
    double mips = 0.0;
    double price = 0.0;      // cents per second
    double memory_gb = 0.0;  // carried as metadata only
};

// Dense row-major G x G matrix indexed by (origin cloud, destination cloud).
class cloud_matrix {
public:
    cloud_matrix() = default;
    cloud_matrix(std::size_t clouds, double fill) : n_(clouds), values_(clouds * clouds, fill) {}

    std::size_t clouds() const noexcept { return n_; }
    double operator()(cloud_index from, cloud_index to) const { return values_[from * n_ + to]; }
    double & operator()(cloud_index from, cloud_index to) { return values_[from * n_ + to]; }

    bool operator==(cloud_matrix const &) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

struct network_matrices {
    cloud_matrix latency;       // seconds
    cloud_matrix bandwidth;     // MB/s
    cloud_matrix transfer_cost; // cents per MB
};

struct cloud_offers {
    std::string name;
    std::vector<vm_offer> offers; // global_id and cloud fields are assigned by the environment
};

// Clouds, their VM offers and the inter-cloud network. Immutable after
// construction; the constructor enforces every invariant and assigns global
// ids in cloud-then-row order starting at 0.
class multicloud_env {
public:
    multicloud_env(std::vector<cloud_offers> clouds, network_matrices network);

    std::size_t cloud_count() const noexcept { return names_.size(); }
    std::string const & cloud_name(cloud_index c) const { return names_[c]; }

    std::span<vm_offer const> offers() const noexcept { return offers_; }
    vm_offer const & offer(vm_id id) const;
    std::span<vm_offer const> offers_in(cloud_index c) const;

    double latency(cloud_index from, cloud_index to) const { return network_.latency(from, to); }
    double bandwidth(cloud_index from, cloud_index to) const { return network_.bandwidth(from, to); }
    double transfer_cost(cloud_index from, cloud_index to) const { return network_.transfer_cost(from, to); }
    network_matrices const & network() const noexcept { return network_; }

private:
    std::vector<std::string> names_;
    std::vector<vm_offer> offers_;
    std::vector<std::size_t> cloud_begin_; // cloud_count + 1 offsets into offers_
    network_matrices network_;
};

// The three modelled providers (EC2-like, GCE-like, Azure-like) with their
// published MIPS ratings and per-second prices.
std::vector<cloud_offers> reference_offers();

// Reference offers with a fixed network at the midpoints of the medium bands.
multicloud_env build_reference_environment();

// Reference offers with a network sampled from `ranges`.
multicloud_env build_reference_environment(network_ranges const & ranges, std::uint64_t seed);

// Diagonal latency/bandwidth from the ingress band, off-diagonal from the
// egress band, off-diagonal transfer cost from the cost band, diagonal cost 0.
// Every ordered pair is sampled independently. Throws std::invalid_argument
// when a band has min > max or is negative, or cloud_count == 0.
network_matrices sample_network(network_ranges const & ranges, std::size_t cloud_count, std::uint64_t seed);

struct vm_mapping_row {
    vm_id global_id;
    std::size_t local_id;
    cloud_index cloud;
    double mips;
};

std::vector<vm_mapping_row> global_vm_mapping(multicloud_env const & env);

// {"clouds": [{"name", "offers": [{"type", "mips", "price", "memory_gb"?}]}],
//  "latency": [[...]], "bandwidth": [[...]], "transfer_cost": [[...]]}
nlohmann::json to_json(multicloud_env const & env);
multicloud_env load_environment(nlohmann::json const & document);
multicloud_env load_environment_file(std::string const & path);

} // namespace streamsched
