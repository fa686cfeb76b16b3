#include <doctest.h>

#include <streamsched/cost_model.hpp>
#include <streamsched/error.hpp>
#include <streamsched/ga.hpp>
#include <streamsched/greedy.hpp>
#include <streamsched/simulator.hpp>
#include <streamsched/workflow_generator.hpp>

#include <algorithm>
#include <sstream>

using namespace streamsched;

namespace {

service_spec svc(std::string id, double mi, double lambda, double gamma = 1.0) {
    service_spec s;
    s.id = std::move(id);
    s.mi = mi;
    s.lambda = lambda;
    s.gamma = gamma;
    return s;
}

vm_offer vm(double mips, double price) {
    vm_offer o;
    o.type_name = "vm";
    o.mips = mips;
    o.price = price;
    return o;
}

// Offers with 1, 2, 4 and 6 units of 1000 MIPS on two clouds.
multicloud_env small_env(double bandwidth = 100.0, double latency = 0.03) {
    network_matrices net{cloud_matrix(2, latency), cloud_matrix(2, bandwidth), cloud_matrix(2, 0.02)};
    for (cloud_index c = 0; c < 2; ++c) {
        net.transfer_cost(c, c) = 0.0;
        net.latency(c, c) = 0.0007;
        net.bandwidth(c, c) = 800.0;
    }
    std::vector<vm_offer> offers{vm(1000, 0.001), vm(2000, 0.002), vm(4000, 0.004), vm(6000, 0.006)};
    return multicloud_env({{"a", offers}, {"b", offers}}, net);
}

} // namespace

TEST_CASE("config validation") {
    simulation_config c;
    CHECK_NOTHROW(c.validate());
    c.warmup = 180;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("intra-cloud chain reaches the analytic rate") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 3.0, 0.5), svc("B", 1000, 0.0)};
    wf.edges = {{"A", "B"}};
    schedule plan{{{0, {2}}, {0, {1}}}}; // A: 4 MB/s for 3 in, B: 2 MB/s for 1.5 in
    auto const m = simulate(wf, plan, env);
    CHECK(m.services[0].processed == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m.services[1].processed == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(m.services[1].processed == doctest::Approx(demand_rates(wf, plan, env)[1].processed).epsilon(1e-12));
    // The capacity-based estimate assumes A emits its full 4 MB/s.
    CHECK(in_stream(workflow_graph(wf), plan, env, 1) == doctest::Approx(2.0));
    CHECK(m.services[0].dropped == 0.0);
    CHECK(steady_state_check(wf, plan, env).flagged().empty());
}

TEST_CASE("arrivals above capacity are dropped every tick") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 10.0)};
    schedule plan{{{0, {3}}}}; // 6 MB/s
    simulation_config config;
    config.record_trace = true;
    config.check = false;
    auto const m = simulate(wf, plan, env, config);
    REQUIRE(m.trace.size() == 180);
    for (auto const & row : m.trace) {
        CHECK(row.arrivals == 10.0);
        CHECK(row.processed == 6.0);
        CHECK(row.dropped == 4.0);
    }
    CHECK(m.max_conservation_error == 0.0);
    CHECK_THROWS_AS(simulate(wf, plan, env), invalid_schedule);
}

TEST_CASE("saturated co-located chain has latency equal to its depth") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 4.0), svc("B", 1000, 0.0), svc("C", 1000, 0.0)};
    wf.edges = {{"A", "B"}, {"B", "C"}};
    schedule plan{{{0, {2}}, {0, {2}}, {0, {2}}}}; // every service processes exactly 4 of 4
    auto const m = simulate(wf, plan, env);
    CHECK(m.latency == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("declared maximum throughput caps processing") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 8.0)};
    wf.services[0].mu = 5.0;
    schedule plan{{{0, {3}}}}; // 6 MB/s provisioned for a 5 MB/s cap
    auto const m = simulate(wf, plan, env);
    CHECK(m.services[0].processed == doctest::Approx(5.0));
    CHECK(m.services[0].dropped == doctest::Approx(3.0));
}

TEST_CASE("single source throughput is min of rate and capacity") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 2.5)};
    simulation_config config;
    config.check = false;
    auto const slack = simulate(wf, schedule{{{0, {2}}}}, env, config);
    CHECK(slack.services[0].processed == doctest::Approx(2.5));
    auto const tight = simulate(wf, schedule{{{0, {1}}}}, env, config);
    CHECK(tight.services[0].processed == doctest::Approx(2.0));
}

TEST_CASE("under-provisioning flags every starved descendant") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 6.0), svc("B", 1000, 0.0), svc("C", 1000, 0.0)};
    wf.edges = {{"A", "B"}, {"B", "C"}};
    schedule plan{{{0, {1}}, {0, {3}}, {0, {3}}}}; // A starved: 2 of 6
    auto const report = steady_state_check(wf, plan, env);
    CHECK(report.flagged() == std::vector<std::string>{"B", "C"});
    CHECK(report.services[0].binding);
    CHECK_FALSE(report.services[0].flagged);
    CHECK_FALSE(report.services[1].binding);
    CHECK(report.services[1].simulated == doctest::Approx(2.0));
    CHECK(report.services[1].analytic == doctest::Approx(6.0));
    CHECK(report.services[1].in_stream == doctest::Approx(2.0));
}

TEST_CASE("cross-cloud edges throttle delivered volume and add transfer latency") {
    auto const env = small_env(5.0, 0.5); // factor = 6/5 + 0.5 = 1.7
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 6.0), svc("B", 1000, 0.0)};
    wf.edges = {{"A", "B"}};
    schedule plan{{{0, {3}}, {1, {7}}}};
    auto const m = simulate(wf, plan, env);
    CHECK(m.services[1].arrivals == doctest::Approx(6.0 / 1.7).epsilon(1e-12));
    auto const rates = demand_rates(wf, plan, env);
    CHECK(rates[1].arrivals == doctest::Approx(6.0 / 1.7).epsilon(1e-12));
    // A: processing 1 s; B: 1 + 1.7 + (6/1.7)/6.
    CHECK(m.latency == doctest::Approx(1.0 + 1.7 + 1.0 / 1.7).epsilon(1e-12));
    CHECK(m.transfer_cost == doctest::Approx(180.0 * 6.0 / 1.7 * 0.02).epsilon(1e-9));
    CHECK(m.transfer_cost == doctest::Approx(transfer_cost(plan, wf, env, 180.0)).epsilon(1e-9));
    CHECK(steady_state_check(wf, plan, env).flagged().empty());
}

TEST_CASE("exactly provisioned schedule reproduces the cost model objective") {
    auto const env = small_env(200.0, 0.02);
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 6.0, 0.5), svc("B", 1000, 0.0, 2.0), svc("C", 1000, 0.0)};
    wf.edges = {{"A", "B"}, {"B", "C"}};
    schedule plan{{{0, {3}}, {1, {5, 4}}, {0, {3}}}}; // 6, 3, 6 MB/s
    REQUIRE(check_constraints(plan, wf, env).ok());
    auto const m = simulate(wf, plan, env);
    auto const cost = cost_of(plan, wf, env, 180.0);
    CHECK(m.total_cost() == doctest::Approx(cost.total()).epsilon(1e-6));
    CHECK(m.provisioning_cost == doctest::Approx(cost.provisioning).epsilon(1e-12));
    auto const state = compute_steady_state(wf, plan, env);
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(m.services[s].processed == doctest::Approx(state.services[s].in_rate).epsilon(1e-6));
    }
}

TEST_CASE("generated schedules satisfy the fixed point and conservation") {
    for (auto family : {workflow_family::montage, workflow_family::inspiral, workflow_family::epigenomics,
                        workflow_family::cybershake}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto const env = build_reference_environment(network_ranges::from_levels(range_level::medium, range_level::medium), seed);
            auto const wf = generate_workflow(family, supported_sizes(family)[0], {}, seed);
            auto const plan = greedy_schedule(wf, env);
            auto const m = simulate(wf, plan, env);
            CHECK(m.max_conservation_error == 0.0);
            CHECK(steady_state_check(wf, plan, env).flagged().empty());
            // Simulated transfer never exceeds the capacity-based estimate.
            CHECK(m.total_cost() <= objective(plan, wf, env, 180.0) * (1.0 + 1e-9));
            CHECK(m.latency >= 0.0);
        }
    }
}

TEST_CASE("post-warmup metrics are tick-invariant") {
    auto const env = build_reference_environment();
    auto const wf = generate_workflow(workflow_family::cybershake, 30, {}, 2);
    auto const plan = greedy_schedule(wf, env);
    simulation_config config;
    config.record_trace = true;
    auto const m = simulate(wf, plan, env, config);
    workflow_graph const g(wf);
    for (auto const & row : m.trace) {
        if (row.tick < g.depth() + 1) continue;
        auto const & ref = m.trace[(g.depth() + 1) * wf.services.size() + (&row - m.trace.data()) % wf.services.size()];
        CHECK(row.processed == ref.processed);
        CHECK(row.latency == ref.latency);
    }
}

TEST_CASE("depth-one intra-cloud service with slack is sub-second") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 3.0)};
    auto const m = simulate(wf, schedule{{{0, {2}}}}, env);
    CHECK(m.latency == doctest::Approx(0.75));
    CHECK(m.latency < 1.0);
}

TEST_CASE("csv writers") {
    auto const env = small_env();
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A", 1000, 2.0)};
    simulation_config config;
    config.duration = 3;
    config.warmup = 1;
    config.record_trace = true;
    auto const m = simulate(wf, schedule{{{0, {1}}}}, env, config);
    std::ostringstream trace;
    write_trace(trace, wf, m.trace);
    CHECK(trace.str() == "tick,service,arrivals,processed,dropped,latency\n0,A,2,2,0,1\n1,A,2,2,0,1\n2,A,2,2,0,1\n");
    std::ostringstream row;
    write_metrics_header(row);
    write_metrics_row(row, "x", m);
    CHECK(row.str().find("label,latency_s") == 0);
    CHECK(row.str().find("\nx,1,0.006,0,0.006,2,0\n") != std::string::npos);
}
