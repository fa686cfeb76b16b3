#include <streamsched/cost_model.hpp>
#include <streamsched/error.hpp>

#include <algorithm>
#include <cmath>

namespace streamsched {

std::int64_t units_per_vm(service_spec const & service, vm_offer const & vm, double unit_dp_rate) noexcept {
    auto const chi = unit_mips(service, unit_dp_rate);
    if (!(chi > 0.0)) return 0;
    return static_cast<std::int64_t>(std::floor(vm.mips / chi + 1e-9));
}

double processing_rate(service_spec const & service, vm_offer const & vm, double unit_dp_rate) {
    auto const units = units_per_vm(service, vm, unit_dp_rate);
    if (units < 1) {
        throw below_unit_error("VM " + vm.type_name + " (" + std::to_string(vm.mips) + " MIPS) is below the " +
                               std::to_string(unit_mips(service, unit_dp_rate)) + " MIPS minimum unit of " +
                               service.id);
    }
    return static_cast<double>(units) * unit_dp_rate;
}

std::int64_t required_units(double alpha, double unit_dp_rate) noexcept {
    if (!(alpha > 0.0)) return 0;
    return static_cast<std::int64_t>(std::ceil(alpha / unit_dp_rate - 1e-9));
}

bool covers(double phi, double alpha) noexcept {
    return phi >= alpha - 1e-8 * std::max(1.0, std::abs(alpha));
}

double moved_volume(double volume, double bandwidth, double latency) noexcept {
    auto const factor = volume / bandwidth + latency;
    return factor <= 1.0 ? volume : volume / factor;
}

std::vector<provisioned_service> summarize(workflow_graph const & graph, schedule const & plan,
                                           multicloud_env const & env) {
    if (plan.services.size() != graph.size()) {
        throw cost_model_error("schedule has " + std::to_string(plan.services.size()) + " allocations for " +
                               std::to_string(graph.size()) + " services");
    }
    auto const unit = graph.workflow().unit_dp_rate;
    std::vector<provisioned_service> out(graph.size());
    for (std::size_t s = 0; s < graph.size(); ++s) {
        auto const & alloc = plan.services[s];
        out[s].cloud = alloc.cloud;
        for (auto id : alloc.vms) {
            auto const & vm = env.offer(id);
            out[s].units += units_per_vm(graph.service(s), vm, unit);
            out[s].price_per_second += vm.price;
        }
    }
    return out;
}

steady_state compute_steady_state(workflow_graph const & graph, std::span<provisioned_service const> provisioned) {
    auto const unit = graph.workflow().unit_dp_rate;
    steady_state state;
    state.services.resize(graph.size());
    for (auto s : graph.order()) {
        auto const & spec = graph.service(s);
        auto & r = state.services[s];
        r.aggregate_phi = static_cast<double>(provisioned[s].units) * unit;
        r.in_rate = spec.lambda;
        for (auto e : graph.in_edges(s)) {
            auto const parent = graph.edge_origin(e);
            r.in_rate += graph.service(parent).gamma * state.services[parent].aggregate_phi * graph.edge(e).share;
        }
        r.alpha = spec.mu ? *spec.mu : r.in_rate;
        r.out_rate = spec.gamma * r.in_rate;
    }
    return state;
}

steady_state compute_steady_state(stream_workflow const & workflow, schedule const & plan,
                                  multicloud_env const & env) {
    workflow_graph const graph(workflow);
    auto const provisioned = summarize(graph, plan, env);
    return compute_steady_state(graph, provisioned);
}

double in_stream(workflow_graph const & graph, schedule const & plan, multicloud_env const & env,
                 std::size_t service) {
    auto const unit = graph.workflow().unit_dp_rate;
    double rate = graph.service(service).lambda;
    for (auto e : graph.in_edges(service)) {
        auto const parent = graph.edge_origin(e);
        if (parent >= plan.services.size() || plan.services[parent].vms.empty()) {
            throw cost_model_error("parent " + graph.service(parent).id + " of " + graph.service(service).id +
                                   " has no provisioned VMs");
        }
        std::int64_t units = 0;
        for (auto id : plan.services[parent].vms) units += units_per_vm(graph.service(parent), env.offer(id), unit);
        rate += graph.service(parent).gamma * (static_cast<double>(units) * unit) * graph.edge(e).share;
    }
    return rate;
}

double required_rate(workflow_graph const & graph, schedule const & plan, multicloud_env const & env,
                     std::size_t service) {
    auto const & spec = graph.service(service);
    auto const in = in_stream(graph, plan, env, service);
    return spec.mu ? *spec.mu : in;
}

double out_stream(workflow_graph const & graph, schedule const & plan, multicloud_env const & env,
                  std::size_t service) {
    return graph.service(service).gamma * in_stream(graph, plan, env, service);
}

cost_breakdown evaluate_cost(workflow_graph const & graph, multicloud_env const & env,
                             std::span<provisioned_service const> provisioned, double horizon, transfer_mode mode) {
    auto const state = compute_steady_state(graph, provisioned);

    double price = 0.0;
    for (auto const & p : provisioned) price += p.price_per_second;

    double per_second = 0.0;
    for (std::size_t s = 0; s < graph.size(); ++s) {
        auto const dest_cloud = provisioned[s].cloud;
        for (auto e : graph.in_edges(s)) {
            auto const parent = graph.edge_origin(e);
            auto const org_cloud = provisioned[parent].cloud;
            if (org_cloud == dest_cloud) continue;
            auto const share = graph.edge(e).share;
            auto const out = state.services[parent].out_rate;
            auto const bandwidth = env.bandwidth(org_cloud, dest_cloud);
            auto const latency = env.latency(org_cloud, dest_cloud);
            auto const volume = out * share;
            auto const factor = volume / bandwidth + latency;
            double moved = 0.0;
            if (factor <= 1.0) {
                moved = mode == transfer_mode::paper_literal ? out : volume;
            } else {
                moved = volume / factor;
            }
            per_second += moved * env.transfer_cost(org_cloud, dest_cloud);
        }
    }
    return {horizon * price, horizon * per_second};
}

double provisioning_cost(schedule const & plan, multicloud_env const & env, double horizon) {
    double price = 0.0;
    for (auto const & alloc : plan.services) {
        double service_price = 0.0;
        for (auto id : alloc.vms) service_price += env.offer(id).price;
        price += service_price;
    }
    return horizon * price;
}

cost_breakdown cost_of(schedule const & plan, stream_workflow const & workflow, multicloud_env const & env,
                       double horizon, transfer_mode mode) {
    workflow_graph const graph(workflow);
    auto const provisioned = summarize(graph, plan, env);
    return evaluate_cost(graph, env, provisioned, horizon, mode);
}

double transfer_cost(schedule const & plan, stream_workflow const & workflow, multicloud_env const & env,
                     double horizon, transfer_mode mode) {
    return cost_of(plan, workflow, env, horizon, mode).transfer;
}

double objective(schedule const & plan, stream_workflow const & workflow, multicloud_env const & env,
                 double horizon, transfer_mode mode) {
    return cost_of(plan, workflow, env, horizon, mode).total();
}

constraint_report check_constraints(schedule const & plan, stream_workflow const & workflow,
                                    multicloud_env const & env) {
    constraint_report report;
    auto add = [&](constraint_kind kind, std::string const & service, std::string message) {
        report.violations.push_back({kind, service, std::move(message)});
    };

    workflow_graph const graph(workflow);
    if (plan.services.size() != graph.size()) {
        add(constraint_kind::allocation_count, "",
            "schedule has " + std::to_string(plan.services.size()) + " allocations for " +
                std::to_string(graph.size()) + " services");
        return report;
    }

    auto const unit = workflow.unit_dp_rate;
    std::vector<provisioned_service> provisioned(graph.size());
    for (std::size_t s = 0; s < graph.size(); ++s) {
        auto const & spec = graph.service(s);
        auto const & alloc = plan.services[s];
        provisioned[s].cloud = alloc.cloud;
        if (alloc.cloud >= env.cloud_count()) {
            add(constraint_kind::unknown_cloud, spec.id, spec.id + " is assigned to unknown cloud " +
                                                             std::to_string(alloc.cloud));
        }
        if (spec.placement_cloud && *spec.placement_cloud != alloc.cloud) {
            add(constraint_kind::wrong_placement, spec.id,
                spec.id + " must run on cloud " + std::to_string(*spec.placement_cloud) + ", not " +
                    std::to_string(alloc.cloud));
        }
        if (alloc.vms.empty()) add(constraint_kind::no_vms, spec.id, spec.id + " has no provisioned VMs");

        bool mixed = false;
        bool below = false;
        for (auto id : alloc.vms) {
            if (id >= env.offers().size()) {
                add(constraint_kind::unknown_vm, spec.id, spec.id + " references unknown VM " + std::to_string(id));
                continue;
            }
            auto const & vm = env.offer(id);
            mixed = mixed || vm.cloud != alloc.cloud;
            auto const units = units_per_vm(spec, vm, unit);
            below = below || units < 1;
            provisioned[s].units += units;
        }
        if (mixed) add(constraint_kind::mixed_cloud, spec.id, spec.id + " mixes VMs from several clouds");
        if (below) add(constraint_kind::below_unit, spec.id, spec.id + " has a VM below its minimum unit MIPS");
    }

    auto const state = compute_steady_state(graph, provisioned);
    for (std::size_t s = 0; s < graph.size(); ++s) {
        auto const & r = state.services[s];
        if (!covers(r.aggregate_phi, r.alpha)) {
            auto const & id = graph.service(s).id;
            add(constraint_kind::throughput_deficit, id,
                id + " provisions " + std::to_string(r.aggregate_phi) + " MB/s for a required " +
                    std::to_string(r.alpha) + " MB/s");
        }
    }
    return report;
}

} // namespace streamsched
