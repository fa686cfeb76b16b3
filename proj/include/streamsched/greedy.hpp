#pragma once

#include <streamsched/cloud.hpp>
#include <streamsched/schedule.hpp>
#include <streamsched/workflow.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace streamsched {

struct greedy_step {
    vm_id vm;
    std::int64_t remaining_units; // after adding vm
};

struct greedy_cloud_evaluation {
    cloud_index cloud = 0;
    bool feasible = false; // false when no offer reaches the unit MIPS
    std::vector<greedy_step> steps;
    double cost = 0.0; // cents per second of the working VM list
};

struct greedy_service_trace {
    std::string service;
    double alpha = 0.0;
    std::int64_t required_units = 0;
    std::vector<greedy_cloud_evaluation> clouds;
    cloud_index chosen_cloud = 0;
    double cost = 0.0;
};

// Services in the order the scheduler visited them.
struct greedy_trace {
    std::vector<greedy_service_trace> services;
};

// Selection score of an offer while `req_units` units are still missing:
//   (floor(mips / unit_mips) / req_units) / price
//   + floor(mips / (unit_mips * dependency_count)) / price   (only when dependency_count > 0)
// A zero price scores +infinity.
double vm_value(vm_offer const & offer, std::int64_t req_units, double unit_mips, std::size_t dependency_count);

// Per-service greedy VM selection minimizing provisioning price. Services are
// visited parents first; for each candidate cloud the offer with the highest
// vm_value is added until the required units are covered, and the cheapest
// cloud's list wins. Services whose required rate is 0 get the cheapest
// feasible VM. Ties on value go to the lower price, then the lower global id.
// Throws infeasible_error when a mandatory cloud has no feasible offer.
schedule greedy_schedule(stream_workflow const & workflow, multicloud_env const & env,
                         greedy_trace * trace = nullptr);

} // namespace streamsched
