#include <doctest.h>

#include <streamsched/cloud.hpp>
#include <streamsched/error.hpp>

#include <algorithm>

using namespace streamsched;

namespace {

vm_offer const & find_offer(multicloud_env const & env, std::string const & name) {
    auto const offers = env.offers();
    auto const it = std::find_if(offers.begin(), offers.end(), [&](vm_offer const & o) { return o.type_name == name; });
    REQUIRE(it != offers.end());
    return *it;
}

network_matrices uniform_network(std::size_t g) {
    network_matrices n{cloud_matrix(g, 0.01), cloud_matrix(g, 100.0), cloud_matrix(g, 0.01)};
    for (std::size_t i = 0; i < g; ++i) n.transfer_cost(i, i) = 0.0;
    return n;
}

// The three-cloud, four-offer example used to illustrate the global mapping.
multicloud_env mapping_example() {
    auto offer = [](char const * name, double mips) {
        vm_offer o;
        o.type_name = name;
        o.mips = mips;
        o.price = 0.01;
        return o;
    };
    std::vector<cloud_offers> clouds{
        {"c0", {offer("a", 7000), offer("b", 13000), offer("c", 26000), offer("d", 54000)}},
        {"c1", {offer("a", 5500), offer("b", 11000), offer("c", 22000), offer("d", 44000)}},
        {"c2", {offer("a", 5000), offer("b", 10000), offer("c", 20000), offer("d", 40000)}},
    };
    return multicloud_env(std::move(clouds), uniform_network(3));
}

} // namespace

TEST_CASE("reference environment matches the published offer table") {
    auto const env = build_reference_environment();
    REQUIRE(env.cloud_count() == 3);
    CHECK(env.offers_in(0).size() == 11);
    CHECK(env.offers_in(1).size() == 13);
    CHECK(env.offers_in(2).size() == 16);

    auto const & m4 = find_offer(env, "m4.large");
    CHECK(m4.mips == 7000);
    CHECK(m4.price == doctest::Approx(0.0054).epsilon(1e-12));
    CHECK(m4.global_id == 0);
    auto const & n1 = find_offer(env, "n1-standard-1");
    CHECK(n1.mips == 2750);
    CHECK(n1.price == doctest::Approx(0.0014).epsilon(1e-12));
    auto const & f16 = find_offer(env, "F16");
    CHECK(f16.mips == 40000);
    CHECK(f16.price == doctest::Approx(0.0426).epsilon(1e-12));
}

TEST_CASE("global ids run in cloud then row order") {
    auto const env = build_reference_environment();
    vm_id expected = 0;
    for (cloud_index c = 0; c < env.cloud_count(); ++c) {
        std::size_t local = 0;
        for (auto const & o : env.offers_in(c)) {
            CHECK(o.global_id == expected++);
            CHECK(o.local_id == local++);
            CHECK(o.cloud == c);
        }
    }
}

TEST_CASE("global mapping of the illustrative environment") {
    auto const env = mapping_example();
    auto const rows = global_vm_mapping(env);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].cloud == 0);
    CHECK(rows[0].local_id == 0);
    CHECK(rows[0].mips == 7000);
    CHECK(rows[11].cloud == 2);
    CHECK(rows[11].local_id == 3);
    CHECK(rows[11].mips == 40000);
    for (auto const & r : rows) {
        auto const & o = env.offer(r.global_id);
        CHECK(o.cloud == r.cloud);
        CHECK(o.mips == r.mips);
        CHECK(env.offers_in(r.cloud)[r.local_id].global_id == r.global_id);
    }
}

TEST_CASE("environment invariants are enforced") {
    vm_offer ok;
    ok.type_name = "x";
    ok.mips = 1000;
    ok.price = 0.01;
    SUBCASE("empty cloud") {
        CHECK_THROWS_AS(multicloud_env({{"a", {ok}}, {"b", {}}}, uniform_network(2)), invalid_environment);
    }
    SUBCASE("non-positive mips") {
        auto bad = ok;
        bad.mips = 0;
        CHECK_THROWS_AS(multicloud_env({{"a", {bad}}}, uniform_network(1)), invalid_environment);
    }
    SUBCASE("negative price") {
        auto bad = ok;
        bad.price = -1;
        CHECK_THROWS_AS(multicloud_env({{"a", {bad}}}, uniform_network(1)), invalid_environment);
    }
    SUBCASE("non-zero diagonal cost") {
        auto net = uniform_network(1);
        net.transfer_cost(0, 0) = 0.1;
        CHECK_THROWS_AS(multicloud_env({{"a", {ok}}}, net), invalid_environment);
    }
    SUBCASE("zero bandwidth") {
        auto net = uniform_network(2);
        net.bandwidth(0, 1) = 0.0;
        CHECK_THROWS_AS(multicloud_env({{"a", {ok}}, {"b", {ok}}}, net), invalid_environment);
    }
    SUBCASE("unknown offer id") {
        multicloud_env const env({{"a", {ok}}}, uniform_network(1));
        CHECK_THROWS(env.offer(1));
    }
}

TEST_CASE("sampled networks stay inside their bands") {
    auto const ranges = network_ranges::from_levels(range_level::medium, range_level::low);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto const n = sample_network(ranges, 3, seed);
        for (cloud_index i = 0; i < 3; ++i) {
            for (cloud_index j = 0; j < 3; ++j) {
                if (i == j) {
                    CHECK(n.transfer_cost(i, j) == 0.0);
                    CHECK(ranges.ingress.bandwidth.contains(n.bandwidth(i, j)));
                    CHECK(ranges.ingress.latency.contains(n.latency(i, j)));
                } else {
                    CHECK(n.bandwidth(i, j) >= 122.0);
                    CHECK(n.bandwidth(i, j) <= 218.0);
                    CHECK(ranges.egress.latency.contains(n.latency(i, j)));
                    CHECK(n.transfer_cost(i, j) >= 0.005);
                    CHECK(n.transfer_cost(i, j) <= 0.012);
                }
            }
        }
    }
}

TEST_CASE("sampling is deterministic and rejects bad bands") {
    auto const ranges = network_ranges::from_levels(range_level::high, range_level::high);
    auto const a = sample_network(ranges, 3, 11);
    auto const b = sample_network(ranges, 3, 11);
    CHECK(a.bandwidth == b.bandwidth);
    CHECK(a.latency == b.latency);
    CHECK(a.transfer_cost == b.transfer_cost);
    auto bad = ranges;
    bad.egress.bandwidth = {10.0, 5.0};
    CHECK_THROWS_AS(sample_network(bad, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_network(ranges, 0, 1), std::invalid_argument);
}

TEST_CASE("environment json round trip") {
    auto const env = build_reference_environment(network_ranges::from_levels(range_level::low, range_level::high), 4);
    auto const back = load_environment(to_json(env));
    REQUIRE(back.offers().size() == env.offers().size());
    for (std::size_t i = 0; i < env.offers().size(); ++i) {
        CHECK(back.offer(i).type_name == env.offer(i).type_name);
        CHECK(back.offer(i).mips == env.offer(i).mips);
        CHECK(back.offer(i).price == env.offer(i).price);
        CHECK(back.offer(i).cloud == env.offer(i).cloud);
    }
    CHECK(back.network().bandwidth == env.network().bandwidth);
    CHECK(back.network().latency == env.network().latency);
    CHECK(back.network().transfer_cost == env.network().transfer_cost);
}

TEST_CASE("parameter bands") {
    CHECK(egress_range(range_level::medium).bandwidth.min == 122.0);
    CHECK(egress_range(range_level::medium).bandwidth.max == 218.0);
    CHECK(transfer_cost_range(range_level::low).min == 0.005);
    CHECK(transfer_cost_range(range_level::low).max == 0.012);
    CHECK(processing_requirement_range(range_level::high).min == 2675.0);
    CHECK(processing_requirement_range(range_level::high).max == 4000.0);
    CHECK(movable_percent_range(range_level::low).min == 0.0);
    CHECK(movable_percent_range(range_level::low).max == 34.0);
    CHECK(source_rate_range(range_level::high).min == 8.5);
    CHECK(parse_range_level("med") == std::optional{range_level::medium});
    CHECK(parse_range_level("high") == std::optional{range_level::high});
    CHECK_FALSE(parse_range_level("extreme").has_value());
}
