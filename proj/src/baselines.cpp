#include <streamsched/baselines.hpp>
#include <streamsched/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace streamsched {

cost_breakdown lower_bound_breakdown(stream_workflow const & workflow, multicloud_env const & env,
                                     network_ranges const & ranges, double horizon) {
    workflow_graph const graph(workflow);
    auto const unit = workflow.unit_dp_rate;
    auto const n = graph.size();

    std::vector<double> alpha(n, 0.0);
    std::vector<double> out(n, 0.0);
    double price = 0.0;
    for (auto s : graph.order()) {
        auto const & spec = graph.service(s);
        double best = std::numeric_limits<double>::infinity();
        for (auto const & o : env.offers()) {
            auto const units = units_per_vm(spec, o, unit);
            if (units >= 1) best = std::min(best, o.price / (static_cast<double>(units) * unit));
        }
        if (!std::isfinite(best)) throw infeasible_error("no cloud has a feasible offer for " + spec.id);

        double in = spec.lambda;
        for (auto e : graph.in_edges(s)) {
            auto const parent = graph.edge_origin(e);
            in += graph.service(parent).gamma * alpha[parent] * graph.edge(e).share;
        }
        alpha[s] = spec.mu ? *spec.mu : in;
        out[s] = spec.gamma * in;
        price += alpha[s] * best;
    }

    auto const bandwidth = ranges.egress.bandwidth.min;
    auto const latency = ranges.egress.latency.max;
    auto const cost = ranges.transfer_cost.min;
    double per_second = 0.0;
    for (std::size_t e = 0; e < workflow.edges.size(); ++e) {
        auto const org = graph.edge_origin(e);
        auto const dest = graph.edge_destination(e);
        auto const & a = graph.service(org).placement_cloud;
        auto const & b = graph.service(dest).placement_cloud;
        if (!a || !b || *a == *b) continue;
        per_second += moved_volume(out[org] * graph.edge(e).share, bandwidth, latency) * cost;
    }
    return {horizon * price, horizon * per_second};
}

double lower_bound_cost(stream_workflow const & workflow, multicloud_env const & env,
                        network_ranges const & ranges, double horizon) {
    return lower_bound_breakdown(workflow, env, ranges, horizon).total();
}

vm_id default_fair_share_reference(multicloud_env const & env) {
    std::vector<vm_offer const *> sorted;
    for (auto const & o : env.offers()) sorted.push_back(&o);
    std::sort(sorted.begin(), sorted.end(), [](vm_offer const * a, vm_offer const * b) {
        return a->mips != b->mips ? a->mips < b->mips : a->global_id < b->global_id;
    });
    return sorted[(sorted.size() - 1) / 2]->global_id;
}

namespace {

std::optional<vm_id> closest_feasible(service_spec const & spec, multicloud_env const & env, cloud_index cloud,
                                      double mips, double unit) {
    std::optional<vm_id> best;
    for (auto const & o : env.offers_in(cloud)) {
        if (units_per_vm(spec, o, unit) < 1) continue;
        if (!best) {
            best = o.global_id;
            continue;
        }
        auto const & cur = env.offer(*best);
        auto const d = std::abs(o.mips - mips);
        auto const cur_d = std::abs(cur.mips - mips);
        if (d < cur_d || (d == cur_d && o.price < cur.price)) best = o.global_id;
    }
    return best;
}

} // namespace

schedule fair_share_schedule(stream_workflow const & workflow, multicloud_env const & env, vm_id reference) {
    workflow_graph const graph(workflow);
    auto const & ref = env.offer(reference);
    auto const unit = workflow.unit_dp_rate;

    schedule plan;
    plan.services.resize(graph.size());
    for (auto s : graph.order()) {
        auto const & spec = graph.service(s);
        auto const cloud = spec.placement_cloud ? *spec.placement_cloud : ref.cloud;
        if (cloud >= env.cloud_count()) throw infeasible_error(spec.id + " is pinned to an unknown cloud");

        std::optional<vm_id> pick;
        if (!spec.placement_cloud && units_per_vm(spec, ref, unit) >= 1) {
            pick = reference;
        } else {
            pick = closest_feasible(spec, env, cloud, ref.mips, unit);
        }
        if (!pick) throw infeasible_error("no offer on cloud " + env.cloud_name(cloud) + " can serve " + spec.id);

        auto const alpha = required_rate(graph, plan, env, s);
        auto const per_vm = units_per_vm(spec, env.offer(*pick), unit);
        auto const needed = required_units(alpha, unit);
        auto const copies = std::max<std::int64_t>(1, (needed + per_vm - 1) / per_vm);
        plan.services[s] = {cloud, std::vector<vm_id>(static_cast<std::size_t>(copies), *pick)};
    }
    return plan;
}

} // namespace streamsched
