#pragma once

#include <streamsched/cloud.hpp>
#include <streamsched/cost_model.hpp>
#include <streamsched/parameter_ranges.hpp>
#include <streamsched/schedule.hpp>
#include <streamsched/workflow.hpp>

namespace streamsched {

// Relaxed cost floor. Every service is provisioned fractionally at the best
// price per MB/s over all feasible offers of all clouds, ignoring placement
// and VM granularity. Transfer is charged only on edges between unmovable
// services pinned to different clouds, at the cheapest transfer cost, the
// lowest bandwidth and the highest latency of `ranges`. Not achievable in
// general. Throws infeasible_error when a service has no feasible offer.
cost_breakdown lower_bound_breakdown(stream_workflow const & workflow, multicloud_env const & env,
                                     network_ranges const & ranges, double horizon = default_horizon);
double lower_bound_cost(stream_workflow const & workflow, multicloud_env const & env,
                        network_ranges const & ranges, double horizon = default_horizon);

// Offer with the lower-median MIPS over the whole environment, ordered by
// (mips, global_id).
vm_id default_fair_share_reference(multicloud_env const & env);

// Copies of one reference offer for every movable service, on the reference
// offer's cloud; unmovable services use the offer of their placement cloud
// whose MIPS is closest to the reference (ties to the cheaper, then the lower
// id). A movable service the reference cannot serve falls back to the closest
// feasible offer of the reference cloud. Each service gets enough copies to
// cover its required rate, at least one. Throws infeasible_error when a
// service's cloud has no feasible offer.
schedule fair_share_schedule(stream_workflow const & workflow, multicloud_env const & env, vm_id reference);

} // namespace streamsched
