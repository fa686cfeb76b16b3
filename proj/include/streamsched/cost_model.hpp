#pragma once

#include <streamsched/cloud.hpp>
#include <streamsched/schedule.hpp>
#include <streamsched/workflow.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace streamsched {

// How the moved volume of an unthrottled inter-cloud edge is computed.
//   edge_share:    the edge's portion (out * share) in both branches
//   paper_literal: the parent's whole output when the transfer factor <= 1
enum class transfer_mode { edge_share, paper_literal };

// Default deployment horizon in seconds.
inline constexpr double default_horizon = 180.0;

// MIPS needed to process one minimum stream unit per second.
inline double unit_mips(service_spec const & service, double unit_dp_rate) noexcept {
    return unit_dp_rate * service.mi;
}

// Whole minimum units per second the VM can process for the service; 0 when
// the VM is below one unit.
std::int64_t units_per_vm(service_spec const & service, vm_offer const & vm, double unit_dp_rate) noexcept;

// Per-VM processing rate in MB/s, always a whole multiple of unit_dp_rate.
// Throws below_unit_error when vm.mips < unit_mips.
double processing_rate(service_spec const & service, vm_offer const & vm, double unit_dp_rate);

// Smallest unit count whose rate covers `alpha` (0 for alpha <= 0).
std::int64_t required_units(double alpha, double unit_dp_rate) noexcept;

// phi >= alpha up to a 1e-8 relative rounding allowance.
bool covers(double phi, double alpha) noexcept;

// Fraction of `volume` (MB/s) an inter-cloud link carries per second:
// volume when volume / bandwidth + latency <= 1, volume / that factor otherwise.
double moved_volume(double volume, double bandwidth, double latency) noexcept;

// Compact per-service view of a schedule: everything the cost model needs.
struct provisioned_service {
    cloud_index cloud = 0;
    std::int64_t units = 0;       // summed whole units over the service's VMs
    double price_per_second = 0.0; // summed VM prices, left fold in VM order
};

std::vector<provisioned_service> summarize(workflow_graph const & graph, schedule const & plan,
                                           multicloud_env const & env);

struct service_rates {
    double in_rate = 0.0;       // MB/s arriving (external + parents' capacity-based output)
    double out_rate = 0.0;      // gamma * in_rate
    double alpha = 0.0;         // required processing rate
    double aggregate_phi = 0.0; // provisioned processing rate
};

struct steady_state {
    std::vector<service_rates> services;
};

// Evaluates the rate propagation in topological order. A parent contributes
// gamma * (its provisioned rate) * share to each child.
steady_state compute_steady_state(workflow_graph const & graph, std::span<provisioned_service const> provisioned);
steady_state compute_steady_state(stream_workflow const & workflow, schedule const & plan,
                                  multicloud_env const & env);

// Single-service views; only the service's parents need provisioning.
// Throw cost_model_error when a parent has no VMs.
double in_stream(workflow_graph const & graph, schedule const & plan, multicloud_env const & env,
                 std::size_t service);
double required_rate(workflow_graph const & graph, schedule const & plan, multicloud_env const & env,
                     std::size_t service);
double out_stream(workflow_graph const & graph, schedule const & plan, multicloud_env const & env,
                  std::size_t service);

struct cost_breakdown {
    double provisioning = 0.0; // cents
    double transfer = 0.0;     // cents

    double total() const noexcept { return provisioning + transfer; }
};

// Fast path shared by the schedule-level functions and the GA fitness.
cost_breakdown evaluate_cost(workflow_graph const & graph, multicloud_env const & env,
                             std::span<provisioned_service const> provisioned, double horizon,
                             transfer_mode mode = transfer_mode::edge_share);

double provisioning_cost(schedule const & plan, multicloud_env const & env, double horizon);
double transfer_cost(schedule const & plan, stream_workflow const & workflow, multicloud_env const & env,
                     double horizon, transfer_mode mode = transfer_mode::edge_share);
double objective(schedule const & plan, stream_workflow const & workflow, multicloud_env const & env,
                 double horizon, transfer_mode mode = transfer_mode::edge_share);
cost_breakdown cost_of(schedule const & plan, stream_workflow const & workflow, multicloud_env const & env,
                       double horizon, transfer_mode mode = transfer_mode::edge_share);

enum class constraint_kind {
    allocation_count, // schedule and workflow sizes differ
    no_vms,
    unknown_vm,
    unknown_cloud,
    mixed_cloud,
    wrong_placement,
    below_unit,
    throughput_deficit,
};

struct constraint_violation {
    constraint_kind kind;
    std::string service;
    std::string message;
};

struct constraint_report {
    std::vector<constraint_violation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

constraint_report check_constraints(schedule const & plan, stream_workflow const & workflow,
                                    multicloud_env const & env);

} // namespace streamsched
