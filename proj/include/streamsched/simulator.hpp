#pragma once

#include <streamsched/cloud.hpp>
#include <streamsched/schedule.hpp>
#include <streamsched/workflow.hpp>

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace streamsched {

struct simulation_config {
    std::size_t duration = 180; // ticks of one second
    std::size_t warmup = 120;   // ticks excluded from the averages
    bool record_trace = false;
    bool check = true; // reject constraint-violating schedules up front

    // Throws std::invalid_argument unless warmup < duration.
    void validate() const;
};

struct service_metrics {
    std::string id;
    double arrivals = 0.0;  // mean MB/s
    double processed = 0.0; // mean MB/s
    double dropped = 0.0;   // mean MB/s
    double latency = 0.0;   // mean seconds since the data entered the workflow
};

struct trace_row {
    std::size_t tick = 0;
    std::size_t service = 0;
    double arrivals = 0.0;
    double processed = 0.0;
    double dropped = 0.0;
    double latency = 0.0;
};

struct simulation_metrics {
    std::vector<service_metrics> services; // workflow declaration order
    double latency = 0.0;                  // mean end-to-end seconds
    double provisioning_cost = 0.0;        // cents over the duration
    double transfer_cost = 0.0;            // cents over the duration
    double max_conservation_error = 0.0;   // max |arrivals - processed - dropped| over all ticks
    std::vector<trace_row> trace;          // filled when record_trace is set

    double total_cost() const noexcept { return provisioning_cost + transfer_cost; }
};

// One-second tick loop. Each tick, parents first, a service receives its
// external rate plus what its parents emitted in the previous tick, processes
// up to min(provisioned rate, declared maximum) and drops the rest, then emits
// gamma times the processed volume split across its out-edges by share.
// Inter-cloud edges deliver volume / factor when factor = volume / B + L
// exceeds 1 and add that factor to the carried latency. Throws
// invalid_schedule when `config.check` is set and the schedule violates a
// constraint.
simulation_metrics simulate(stream_workflow const & workflow, schedule const & plan, multicloud_env const & env,
                            simulation_config const & config = {});

// Closed-form fixed point of the tick loop under constant inputs.
struct flow_rates {
    double arrivals = 0.0;
    double capacity = 0.0; // min(provisioned rate, declared maximum)
    double processed = 0.0;
};
std::vector<flow_rates> demand_rates(stream_workflow const & workflow, schedule const & plan,
                                     multicloud_env const & env);

struct steady_state_entry {
    std::string id;
    double simulated = 0.0; // post-warmup mean processed MB/s
    double analytic = 0.0;  // processed MB/s of the demand flow, where only declared maxima drop data
    double in_stream = 0.0; // capacity-based input rate of the cost model
    double relative_difference = 0.0;
    bool binding = false; // demand arrivals exceed the provisioned capacity
    bool flagged = false; // non-binding and off by more than 1e-6 relative
};

struct steady_state_report {
    std::vector<steady_state_entry> services;

    std::vector<std::string> flagged() const;
};

steady_state_report steady_state_check(stream_workflow const & workflow, schedule const & plan,
                                       multicloud_env const & env, simulation_config const & config = {});

// CSV writers.
void write_metrics_header(std::ostream & out);
void write_metrics_row(std::ostream & out, std::string const & label, simulation_metrics const & metrics);
void write_trace(std::ostream & out, stream_workflow const & workflow, std::span<trace_row const> trace);

} // namespace streamsched
