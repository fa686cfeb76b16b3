#include <streamsched/cost_model.hpp>
#include <streamsched/error.hpp>
#include <streamsched/simulator.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace streamsched {

void simulation_config::validate() const {
    if (warmup >= duration) throw std::invalid_argument("warmup must be shorter than the duration");
}

namespace {

struct edge_link {
    bool remote = false;
    double bandwidth = 0.0;
    double latency = 0.0;
    double cost = 0.0;
};

std::vector<double> capacities(workflow_graph const & graph, std::span<provisioned_service const> provisioned) {
    auto const unit = graph.workflow().unit_dp_rate;
    std::vector<double> cap(graph.size());
    for (std::size_t s = 0; s < graph.size(); ++s) {
        cap[s] = static_cast<double>(provisioned[s].units) * unit;
        if (auto const & mu = graph.service(s).mu) cap[s] = std::min(cap[s], *mu);
    }
    return cap;
}

std::vector<edge_link> links(workflow_graph const & graph, std::span<provisioned_service const> provisioned,
                             multicloud_env const & env) {
    std::vector<edge_link> out(graph.workflow().edges.size());
    for (std::size_t e = 0; e < out.size(); ++e) {
        auto const from = provisioned[graph.edge_origin(e)].cloud;
        auto const to = provisioned[graph.edge_destination(e)].cloud;
        if (from == to) continue;
        out[e] = {true, env.bandwidth(from, to), env.latency(from, to), env.transfer_cost(from, to)};
    }
    return out;
}

} // namespace

simulation_metrics simulate(stream_workflow const & workflow, schedule const & plan, multicloud_env const & env,
                            simulation_config const & config) {
    config.validate();
    if (config.check) {
        auto const report = check_constraints(plan, workflow, env);
        if (!report.ok()) throw invalid_schedule(report.violations.front().message);
    }

    workflow_graph const graph(workflow);
    auto const provisioned = summarize(graph, plan, env);
    auto const unit = workflow.unit_dp_rate;
    auto const cap = capacities(graph, provisioned);
    auto const link = links(graph, provisioned, env);
    auto const n = graph.size();
    auto const edges = workflow.edges.size();

    // Volume and latency in flight on each edge, delivered next tick.
    std::vector<double> pending(edges, 0.0);
    std::vector<double> pending_latency(edges, 0.0);
    std::vector<double> next(edges, 0.0);
    std::vector<double> next_latency(edges, 0.0);
    std::vector<double> latency(n, 0.0);

    simulation_metrics metrics;
    metrics.services.resize(n);
    for (std::size_t s = 0; s < n; ++s) metrics.services[s].id = graph.service(s).id;

    double latency_sum = 0.0;
    double transfer_sum = 0.0;
    std::size_t samples = 0;

    for (std::size_t tick = 0; tick < config.duration; ++tick) {
        bool const measured = tick >= config.warmup;
        double tick_transfer = 0.0;
        double tick_latency = 0.0;

        for (auto s : graph.order()) {
            auto const & spec = graph.service(s);
            double arrivals = spec.lambda;
            double inbound = 0.0;
            for (auto e : graph.in_edges(s)) {
                arrivals += pending[e];
                if (pending[e] > 0.0) inbound = std::max(inbound, pending_latency[e]);
            }
            auto const processed = std::min(arrivals, cap[s]);
            auto const dropped = arrivals - processed;
            auto const phi = static_cast<double>(provisioned[s].units) * unit;
            latency[s] = inbound + (phi > 0.0 ? processed / phi : 0.0);

            auto const emitted = spec.gamma * processed;
            for (auto e : graph.out_edges(s)) {
                auto const volume = emitted * graph.edge(e).share;
                if (link[e].remote) {
                    auto const factor = volume / link[e].bandwidth + link[e].latency;
                    next[e] = factor <= 1.0 ? volume : volume / factor;
                    next_latency[e] = latency[s] + factor;
                    tick_transfer += next[e] * link[e].cost;
                } else {
                    next[e] = volume;
                    next_latency[e] = latency[s];
                }
            }

            metrics.max_conservation_error =
                std::max(metrics.max_conservation_error, std::abs(arrivals - processed - dropped));
            if (measured) {
                auto & m = metrics.services[s];
                m.arrivals += arrivals;
                m.processed += processed;
                m.dropped += dropped;
                m.latency += latency[s];
            }
            if (config.record_trace) metrics.trace.push_back({tick, s, arrivals, processed, dropped, latency[s]});
            if (graph.out_edges(s).empty()) tick_latency = std::max(tick_latency, latency[s]);
        }

        std::swap(pending, next);
        std::swap(pending_latency, next_latency);
        if (measured) {
            latency_sum += tick_latency;
            transfer_sum += tick_transfer;
            ++samples;
        }
    }

    auto const count = static_cast<double>(samples);
    for (auto & m : metrics.services) {
        m.arrivals /= count;
        m.processed /= count;
        m.dropped /= count;
        m.latency /= count;
    }
    auto const duration = static_cast<double>(config.duration);
    metrics.latency = latency_sum / count;
    metrics.provisioning_cost = provisioning_cost(plan, env, duration);
    metrics.transfer_cost = duration * (transfer_sum / count);
    return metrics;
}

namespace {

// Steady flow when every service processes min(arrivals, cap[s]).
std::vector<flow_rates> propagate(workflow_graph const & graph, std::span<edge_link const> link,
                                  std::span<double const> cap) {
    std::vector<flow_rates> rates(graph.size());
    for (auto s : graph.order()) {
        auto & r = rates[s];
        r.arrivals = graph.service(s).lambda;
        for (auto e : graph.in_edges(s)) {
            auto const parent = graph.edge_origin(e);
            auto const volume = graph.service(parent).gamma * rates[parent].processed * graph.edge(e).share;
            r.arrivals += link[e].remote ? moved_volume(volume, link[e].bandwidth, link[e].latency) : volume;
        }
        r.capacity = cap[s];
        r.processed = std::min(r.arrivals, r.capacity);
    }
    return rates;
}

} // namespace

std::vector<flow_rates> demand_rates(stream_workflow const & workflow, schedule const & plan,
                                     multicloud_env const & env) {
    workflow_graph const graph(workflow);
    auto const provisioned = summarize(graph, plan, env);
    return propagate(graph, links(graph, provisioned, env), capacities(graph, provisioned));
}

std::vector<std::string> steady_state_report::flagged() const {
    std::vector<std::string> out;
    for (auto const & s : services) {
        if (s.flagged) out.push_back(s.id);
    }
    return out;
}

steady_state_report steady_state_check(stream_workflow const & workflow, schedule const & plan,
                                       multicloud_env const & env, simulation_config const & config) {
    auto run = config;
    run.check = false;
    run.record_trace = false;
    auto const metrics = simulate(workflow, plan, env, run);
    workflow_graph const graph(workflow);
    auto const provisioned = summarize(graph, plan, env);
    auto const link = links(graph, provisioned, env);
    auto const cap = capacities(graph, provisioned);
    // Reference flow: only declared maximum throughputs limit processing.
    std::vector<double> declared(graph.size(), std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < graph.size(); ++s) {
        if (auto const & mu = graph.service(s).mu) declared[s] = *mu;
    }
    auto const rates = propagate(graph, link, declared);
    steady_state_report report;
    report.services.resize(graph.size());
    for (std::size_t s = 0; s < graph.size(); ++s) {
        auto & entry = report.services[s];
        entry.id = graph.service(s).id;
        entry.simulated = metrics.services[s].processed;
        entry.analytic = rates[s].processed;
        entry.in_stream = graph.in_edges(s).empty() ? graph.service(s).lambda : 0.0;
        bool const parents_ready = std::all_of(graph.in_edges(s).begin(), graph.in_edges(s).end(), [&](auto e) {
            return !plan.services[graph.edge_origin(e)].vms.empty();
        });
        if (parents_ready) entry.in_stream = in_stream(graph, plan, env, s);
        entry.relative_difference =
            std::abs(entry.simulated - entry.analytic) / std::max(std::abs(entry.analytic), 1e-12);
        if (entry.analytic == 0.0 && entry.simulated == 0.0) entry.relative_difference = 0.0;
        entry.binding = rates[s].arrivals > cap[s];
        entry.flagged = !entry.binding && entry.relative_difference > 1e-6;
    }
    return report;
}

void write_metrics_header(std::ostream & out) {
    out << "label,latency_s,provisioning_cents,transfer_cents,total_cents,processed_mbps,dropped_mbps\n";
}

void write_metrics_row(std::ostream & out, std::string const & label, simulation_metrics const & metrics) {
    double processed = 0.0;
    double dropped = 0.0;
    for (auto const & s : metrics.services) {
        processed += s.processed;
        dropped += s.dropped;
    }
    auto const precision = out.precision(12);
    out << label << ',' << metrics.latency << ',' << metrics.provisioning_cost << ',' << metrics.transfer_cost << ','
        << metrics.total_cost() << ',' << processed << ',' << dropped << '\n';
    out.precision(precision);
}

void write_trace(std::ostream & out, stream_workflow const & workflow, std::span<trace_row const> trace) {
    out << "tick,service,arrivals,processed,dropped,latency\n";
    auto const precision = out.precision(12);
    for (auto const & row : trace) {
        out << row.tick << ',' << workflow.services[row.service].id << ',' << row.arrivals << ',' << row.processed
            << ',' << row.dropped << ',' << row.latency << '\n';
    }
    out.precision(precision);
}

} // namespace streamsched
