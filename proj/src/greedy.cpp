#include <streamsched/cost_model.hpp>
#include <streamsched/error.hpp>
#include <streamsched/greedy.hpp>

#include <cmath>
#include <limits>

namespace streamsched {

namespace {

std::int64_t whole_units(double mips, double unit) noexcept {
    return static_cast<std::int64_t>(std::floor(mips / unit + 1e-9));
}

// Higher value wins; ties to lower price, then lower id.
bool better(double value, vm_offer const & offer, double best_value, vm_offer const * best) noexcept {
    if (best == nullptr) return true;
    if (value != best_value) return value > best_value;
    if (offer.price != best->price) return offer.price < best->price;
    return offer.global_id < best->global_id;
}

} // namespace

double vm_value(vm_offer const & offer, std::int64_t req_units, double unit_mips, std::size_t dependency_count) {
    if (offer.price <= 0.0) return std::numeric_limits<double>::infinity();
    auto const achieved = static_cast<double>(whole_units(offer.mips, unit_mips));
    double value = (achieved / static_cast<double>(req_units)) / offer.price;
    if (dependency_count > 0) {
        value += static_cast<double>(whole_units(offer.mips, unit_mips * static_cast<double>(dependency_count))) /
                 offer.price;
    }
    return value;
}

schedule greedy_schedule(stream_workflow const & workflow, multicloud_env const & env, greedy_trace * trace) {
    workflow_graph const graph(workflow);
    auto const unit = workflow.unit_dp_rate;

    schedule plan;
    plan.services.resize(graph.size());
    for (auto s : graph.order()) {
        auto const & spec = graph.service(s);
        auto const chi = unit_mips(spec, unit);
        auto const alpha = required_rate(graph, plan, env, s);
        auto const req = required_units(alpha, unit);
        auto const deps = graph.in_edges(s).size();

        if (spec.placement_cloud && *spec.placement_cloud >= env.cloud_count()) {
            throw infeasible_error(spec.id + " is pinned to unknown cloud " + std::to_string(*spec.placement_cloud));
        }

        greedy_service_trace record{spec.id, alpha, req, {}, 0, 0.0};
        double best_cost = std::numeric_limits<double>::infinity();
        std::vector<vm_id> best_list;
        cloud_index best_cloud = 0;

        for (cloud_index c = 0; c < env.cloud_count(); ++c) {
            if (spec.placement_cloud && *spec.placement_cloud != c) continue;

            greedy_cloud_evaluation eval;
            eval.cloud = c;
            std::vector<vm_offer const *> feasible;
            for (auto const & o : env.offers_in(c)) {
                if (units_per_vm(spec, o, unit) >= 1) feasible.push_back(&o);
            }
            if (feasible.empty()) {
                if (trace) record.clouds.push_back(std::move(eval));
                if (spec.placement_cloud) {
                    throw infeasible_error("no offer in cloud " + std::to_string(c) + " reaches the " +
                                           std::to_string(chi) + " MIPS unit of " + spec.id);
                }
                continue;
            }
            eval.feasible = true;

            std::vector<vm_id> working;
            if (req <= 0) {
                vm_offer const * cheapest = nullptr;
                for (auto const * o : feasible) {
                    if (!cheapest || o->price < cheapest->price) cheapest = o;
                }
                working.push_back(cheapest->global_id);
                eval.steps.push_back({cheapest->global_id, 0});
            } else {
                auto remaining = req;
                while (remaining > 0) {
                    vm_offer const * selected = nullptr;
                    double max_value = 0.0;
                    for (auto const * o : feasible) {
                        auto const value = vm_value(*o, remaining, chi, deps);
                        if (better(value, *o, max_value, selected)) {
                            selected = o;
                            max_value = value;
                        }
                    }
                    working.push_back(selected->global_id);
                    remaining -= units_per_vm(spec, *selected, unit);
                    eval.steps.push_back({selected->global_id, remaining});
                }
            }

            double cost = 0.0;
            for (auto id : working) cost += env.offer(id).price;
            eval.cost = cost;
            if (cost < best_cost) {
                best_cost = cost;
                best_list = std::move(working);
                best_cloud = c;
            }
            if (trace) record.clouds.push_back(std::move(eval));
        }

        if (best_list.empty()) throw infeasible_error("no cloud offers a VM reaching the minimum unit of " + spec.id);
        plan.services[s] = {best_cloud, std::move(best_list)};
        if (trace) {
            record.chosen_cloud = best_cloud;
            record.cost = best_cost;
            trace->services.push_back(std::move(record));
        }
    }
    return plan;
}

} // namespace streamsched
