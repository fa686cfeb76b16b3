#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace streamsched {

using cloud_index = std::size_t;

// One continuously running analytic service.
struct service_spec {
    std::string id;
    double mi = 0.0;     // MI per MB of input
    double lambda = 0.0; // external-source arrival rate, MB/s
    double gamma = 0.0;  // output-to-input proportion
    // Set for unmovable services: the cloud the service is pinned to.
    std::optional<cloud_index> placement_cloud;
    // User maximum-throughput constraint, MB/s.
    std::optional<double> mu;

    bool movable() const noexcept { return !placement_cloud.has_value(); }
};

// share == 1 is replica mode, share < 1 partition mode.
struct edge_spec {
    std::string org;
    std::string dest;
    double share = 1.0;
};

struct stream_workflow {
    std::vector<service_spec> services;
    std::vector<edge_spec> edges;
    double unit_dp_rate = 0.0; // MB/s of the minimum stream unit
};

enum class violation_kind {
    duplicate_id,
    empty_id,
    self_loop,
    dangling_edge,
    cycle,
    nonpositive_mi,
    negative_lambda,
    negative_gamma,
    nonpositive_mu,
    share_out_of_range,
    nonpositive_unit_rate,
    idle_source, // in-degree 0 and lambda == 0
};

struct violation {
    violation_kind kind;
    std::string element; // offending service id, or "org->dest" for edges
    std::string message;
};

struct validation_report {
    std::vector<violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    // True when nothing other than idle sources was reported; schedulers
    // accept such workflows and give idle services one minimal VM.
    bool schedulable() const noexcept;
};

validation_report validate(stream_workflow const & workflow);

// Kahn's algorithm with lexicographic tie-breaking on service id.
// Throws invalid_workflow naming a cycle member.
std::vector<std::string> topological_order(stream_workflow const & workflow);

// Index-based adjacency built once per workflow; the structure every
// algorithm iterates over. Construction throws invalid_workflow unless the
// workflow is schedulable.
class workflow_graph {
public:
    explicit workflow_graph(stream_workflow const & workflow);

    stream_workflow const & workflow() const noexcept { return *workflow_; }
    std::size_t size() const noexcept { return workflow_->services.size(); }

    service_spec const & service(std::size_t index) const { return workflow_->services[index]; }
    edge_spec const & edge(std::size_t index) const { return workflow_->edges[index]; }

    std::size_t edge_origin(std::size_t edge) const { return edge_org_[edge]; }
    std::size_t edge_destination(std::size_t edge) const { return edge_dest_[edge]; }

    // Edge indices entering / leaving a service.
    std::vector<std::size_t> const & in_edges(std::size_t service) const { return in_edges_[service]; }
    std::vector<std::size_t> const & out_edges(std::size_t service) const { return out_edges_[service]; }

    // Service indices, parents first.
    std::vector<std::size_t> const & order() const noexcept { return order_; }

    std::optional<std::size_t> index_of(std::string const & id) const;

    // Number of services on the longest path.
    std::size_t depth() const noexcept { return depth_; }

private:
    stream_workflow const * workflow_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> edge_org_;
    std::vector<std::size_t> edge_dest_;
    std::vector<std::vector<std::size_t>> in_edges_;
    std::vector<std::vector<std::size_t>> out_edges_;
    std::vector<std::size_t> order_;
    std::size_t depth_ = 0;
};

} // namespace streamsched
