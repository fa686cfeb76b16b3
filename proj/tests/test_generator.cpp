#include <doctest.h>

#include <streamsched/workflow_generator.hpp>
#include <streamsched/workflow_io.hpp>

#include <algorithm>
#include <set>

using namespace streamsched;

namespace {

constexpr workflow_family all_families[] = {workflow_family::montage, workflow_family::inspiral,
                                            workflow_family::epigenomics, workflow_family::cybershake};

bool is_source(stream_workflow const & wf, std::string const & id) {
    return std::none_of(wf.edges.begin(), wf.edges.end(), [&](edge_spec const & e) { return e.dest == id; });
}

} // namespace

TEST_CASE("supported sizes follow the published table") {
    CHECK(supported_sizes(workflow_family::montage) == std::array<std::size_t, 3>{25, 50, 100});
    CHECK(supported_sizes(workflow_family::inspiral) == std::array<std::size_t, 3>{30, 50, 100});
    CHECK(supported_sizes(workflow_family::epigenomics) == std::array<std::size_t, 3>{24, 46, 100});
    CHECK(supported_sizes(workflow_family::cybershake) == std::array<std::size_t, 3>{30, 50, 100});
    CHECK(node_count(workflow_family::epigenomics, size_class::medium) == 46);
}

TEST_CASE("family names parse case-insensitively") {
    CHECK(parse_workflow_family("CyberShake") == std::optional{workflow_family::cybershake});
    CHECK(parse_workflow_family("montage") == std::optional{workflow_family::montage});
    CHECK_FALSE(parse_workflow_family("ligo").has_value());
}

TEST_CASE("unsupported size is rejected") {
    CHECK_THROWS_AS(build_topology(workflow_family::montage, 26), std::invalid_argument);
    CHECK_THROWS_AS(generate_workflow(workflow_family::cybershake, 24, {}, 1), std::invalid_argument);
}

TEST_CASE("generated workflows validate and have the requested size") {
    for (auto family : all_families) {
        for (auto size : supported_sizes(family)) {
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                auto const wf = generate_workflow(family, size, {}, seed);
                CAPTURE(to_string(family));
                CAPTURE(size);
                CAPTURE(seed);
                REQUIRE(wf.services.size() == size);
                REQUIRE(validate(wf).ok());
                std::set<std::string> ids;
                for (auto const & s : wf.services) ids.insert(s.id);
                REQUIRE(ids.size() == size);
            }
        }
    }
}

TEST_CASE("montage medium ranges bound mi") {
    auto const wf = generate_workflow(workflow_family::montage, 25, {}, 42);
    CHECK(wf.services.size() == 25);
    for (auto const & s : wf.services) {
        CHECK(s.mi >= 1348.0);
        CHECK(s.mi <= 2674.0);
    }
}

TEST_CASE("high source rate bounds lambda of sources only") {
    parameter_levels levels;
    levels.source_rate = range_level::high;
    auto const wf = generate_workflow(workflow_family::cybershake, 30, levels, 7);
    for (auto const & s : wf.services) {
        if (is_source(wf, s.id)) {
            CHECK(s.lambda >= 8.5);
            CHECK(s.lambda <= 12.5);
        } else {
            CHECK(s.lambda == 0.0);
        }
    }
}

TEST_CASE("every level keeps draws inside its band") {
    for (auto level : {range_level::low, range_level::medium, range_level::high}) {
        parameter_levels levels;
        levels.processing_requirement = level;
        levels.output_proportion = level;
        levels.unit_rate = level;
        levels.source_rate = level;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto const wf = generate_workflow(workflow_family::inspiral, 50, levels, seed);
            CHECK(unit_rate_range(level).contains(wf.unit_dp_rate));
            for (auto const & s : wf.services) {
                CHECK(processing_requirement_range(level).contains(s.mi));
                CHECK(output_proportion_range(level).contains(s.gamma));
                if (is_source(wf, s.id)) CHECK(source_rate_range(level).contains(s.lambda));
            }
        }
    }
}

TEST_CASE("movable fraction stays in its band up to one service") {
    for (auto level : {range_level::low, range_level::medium, range_level::high}) {
        parameter_levels levels;
        levels.movable_share = level;
        auto const band = movable_percent_range(level);
        for (auto family : all_families) {
            for (std::uint64_t seed = 0; seed < 30; ++seed) {
                auto const size = supported_sizes(family)[1];
                auto const wf = generate_workflow(family, size, levels, seed);
                auto const movable = static_cast<double>(
                    std::count_if(wf.services.begin(), wf.services.end(), [](auto const & s) { return s.movable(); }));
                auto const n = static_cast<double>(size);
                CHECK(movable >= band.min / 100.0 * n - 1.0);
                CHECK(movable <= band.max / 100.0 * n + 1.0);
                for (auto const & s : wf.services) {
                    if (!s.movable()) CHECK(*s.placement_cloud < 3);
                }
            }
        }
    }
}

TEST_CASE("generation is deterministic per seed") {
    auto const a = generate_workflow(workflow_family::epigenomics, 46, {}, 5);
    auto const b = generate_workflow(workflow_family::epigenomics, 46, {}, 5);
    auto const c = generate_workflow(workflow_family::epigenomics, 46, {}, 6);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(to_json(a).dump() != to_json(c).dump());
}

TEST_CASE("all edges are replica mode") {
    auto const wf = generate_workflow(workflow_family::montage, 100, {}, 3);
    for (auto const & e : wf.edges) CHECK(e.share == 1.0);
}

TEST_CASE("family shapes") {
    SUBCASE("cybershake has two zip sinks fed by many parents") {
        auto const t = build_topology(workflow_family::cybershake, 50);
        std::vector<std::size_t> in(t.ids.size()), out(t.ids.size());
        for (auto [a, b] : t.edges) {
            ++out[a];
            ++in[b];
        }
        auto const sinks = std::count(out.begin(), out.end(), 0U);
        CHECK(sinks == 2);
        CHECK(*std::max_element(in.begin(), in.end()) >= 10);
    }
    SUBCASE("montage funnels into a single sink") {
        auto const t = build_topology(workflow_family::montage, 25);
        std::vector<std::size_t> out(t.ids.size());
        for (auto [a, b] : t.edges) ++out[a];
        CHECK(std::count(out.begin(), out.end(), 0U) == 1);
    }
    SUBCASE("epigenomics ends in one sink") {
        auto const t = build_topology(workflow_family::epigenomics, 100);
        std::vector<std::size_t> out(t.ids.size());
        for (auto [a, b] : t.edges) ++out[a];
        CHECK(std::count(out.begin(), out.end(), 0U) == 1);
    }
}
