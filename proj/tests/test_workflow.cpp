#include <doctest.h>

#include <streamsched/error.hpp>
#include <streamsched/workflow.hpp>
#include <streamsched/workflow_io.hpp>

#include <algorithm>
#include <string>

using namespace streamsched;

namespace {

service_spec svc(std::string id, double lambda = 1.0) {
    service_spec s;
    s.id = std::move(id);
    s.mi = 100.0;
    s.lambda = lambda;
    s.gamma = 1.0;
    return s;
}

stream_workflow chain(std::initializer_list<char const *> ids) {
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    bool first = true;
    for (auto id : ids) {
        wf.services.push_back(svc(id, first ? 1.0 : 0.0));
        first = false;
    }
    for (std::size_t i = 1; i < wf.services.size(); ++i) {
        wf.edges.push_back({wf.services[i - 1].id, wf.services[i].id, 1.0});
    }
    return wf;
}

bool has_kind(validation_report const & r, violation_kind k) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](violation const & v) { return v.kind == k; });
}

} // namespace

TEST_CASE("two-service chain validates") {
    auto const wf = chain({"A", "B"});
    CHECK(validate(wf).ok());
}

TEST_CASE("self-loop is reported with the service id") {
    auto wf = chain({"A"});
    wf.edges.push_back({"A", "A", 1.0});
    auto const r = validate(wf);
    REQUIRE(has_kind(r, violation_kind::self_loop));
    auto const it = std::find_if(r.violations.begin(), r.violations.end(),
                                 [](violation const & v) { return v.kind == violation_kind::self_loop; });
    CHECK(it->message == "self-loop on A");
    CHECK(it->element == "A");
}

TEST_CASE("two-node cycle is reported") {
    auto wf = chain({"A", "B"});
    wf.edges.push_back({"B", "A", 1.0});
    auto const r = validate(wf);
    CHECK(has_kind(r, violation_kind::cycle));
    auto const it = std::find_if(r.violations.begin(), r.violations.end(),
                                 [](violation const & v) { return v.kind == violation_kind::cycle; });
    CHECK(it->message.find("cycle") != std::string::npos);
}

TEST_CASE("field violations are each reported") {
    stream_workflow wf;
    wf.unit_dp_rate = 0.0;
    auto a = svc("A");
    a.mi = 0.0;
    auto b = svc("A");
    b.gamma = -1.0;
    b.lambda = -2.0;
    b.mu = 0.0;
    wf.services = {a, b};
    wf.edges = {{"A", "Z", 1.0}, {"A", "A", 0.0}};
    auto const r = validate(wf);
    CHECK(has_kind(r, violation_kind::nonpositive_unit_rate));
    CHECK(has_kind(r, violation_kind::nonpositive_mi));
    CHECK(has_kind(r, violation_kind::duplicate_id));
    CHECK(has_kind(r, violation_kind::negative_gamma));
    CHECK(has_kind(r, violation_kind::negative_lambda));
    CHECK(has_kind(r, violation_kind::nonpositive_mu));
    CHECK(has_kind(r, violation_kind::dangling_edge));
    CHECK(has_kind(r, violation_kind::share_out_of_range));
    CHECK_FALSE(r.schedulable());
}

TEST_CASE("idle source is reported but schedulable") {
    auto wf = chain({"A", "B"});
    wf.services[0].lambda = 0.0;
    auto const r = validate(wf);
    CHECK(has_kind(r, violation_kind::idle_source));
    CHECK_FALSE(r.ok());
    CHECK(r.schedulable());
    CHECK_NOTHROW(workflow_graph{wf});
}

TEST_CASE("topological order of a diamond") {
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("D", 0), svc("C", 0), svc("B", 0), svc("A")};
    wf.edges = {{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}};
    CHECK(topological_order(wf) == std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("topological order breaks ties lexicographically") {
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("Z"), svc("Y", 0), svc("X", 0), svc("W", 0)};
    wf.edges = {{"Z", "Y"}, {"Z", "X"}, {"Y", "W"}, {"X", "W"}};
    CHECK(topological_order(wf) == std::vector<std::string>{"Z", "X", "Y", "W"});
}

TEST_CASE("single service order") {
    auto const wf = chain({"S"});
    CHECK(topological_order(wf) == std::vector<std::string>{"S"});
}

TEST_CASE("topological order throws naming a cycle member") {
    auto wf = chain({"A", "B", "C"});
    wf.edges.push_back({"C", "B", 1.0});
    try {
        topological_order(wf);
        FAIL("expected invalid_workflow");
    } catch (invalid_workflow const & e) {
        std::string const what = e.what();
        CHECK((what.find('B') != std::string::npos || what.find('C') != std::string::npos));
    }
}

TEST_CASE("workflow graph exposes adjacency and depth") {
    stream_workflow wf;
    wf.unit_dp_rate = 1.0;
    wf.services = {svc("A"), svc("B", 0), svc("C", 0), svc("D", 0)};
    wf.edges = {{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}};
    workflow_graph const g(wf);
    CHECK(g.size() == 4);
    CHECK(g.depth() == 3);
    CHECK(g.in_edges(3).size() == 2);
    CHECK(g.out_edges(0).size() == 2);
    CHECK(g.index_of("C") == std::optional<std::size_t>{2});
    CHECK_FALSE(g.index_of("Q").has_value());
    CHECK(g.edge_origin(2) == 1);
    CHECK(g.edge_destination(2) == 3);
}

TEST_CASE("workflow graph rejects cycles") {
    auto wf = chain({"A", "B"});
    wf.edges.push_back({"B", "A", 1.0});
    CHECK_THROWS_AS(workflow_graph{wf}, invalid_workflow);
}

TEST_CASE("minimal document loads") {
    auto const wf = load_workflow(std::string_view(R"({"unit_dp_rate": 1.0,
        "services": [{"id": "A", "mi": 100, "lambda": 2, "gamma": 0.5, "movable": true}]})"));
    CHECK(wf.services.size() == 1);
    CHECK(wf.edges.empty());
    CHECK(wf.services[0].movable());
}

TEST_CASE("zero share is a schema error") {
    auto const text = std::string_view(R"({"unit_dp_rate": 1.0,
        "services": [{"id": "A", "mi": 100, "lambda": 2, "gamma": 0.5, "movable": true},
                     {"id": "B", "mi": 100, "lambda": 0, "gamma": 0.5, "movable": true}],
        "edges": [{"org": "A", "dest": "B", "share": 0}]})");
    try {
        load_workflow(text);
        FAIL("expected schema_error");
    } catch (schema_error const & e) {
        CHECK(std::string(e.what()).find("share must be in (0,1]") != std::string::npos);
        CHECK(e.path().find("edges[0]") != std::string::npos);
    }
}

TEST_CASE("missing unit rate names the field") {
    try {
        load_workflow(std::string_view(R"({"services": []})"));
        FAIL("expected schema_error");
    } catch (schema_error const & e) {
        CHECK(e.path().find("unit_dp_rate") != std::string::npos);
    }
}

TEST_CASE("unknown fields are rejected") {
    CHECK_THROWS_AS(load_workflow(std::string_view(R"({"unit_dp_rate": 1, "services": [], "extra": 1})")),
                    schema_error);
    CHECK_THROWS_AS(load_workflow(std::string_view(R"({"unit_dp_rate": 1,
        "services": [{"id": "A", "mi": 1, "lambda": 1, "gamma": 1, "movable": true, "colour": 3}]})")),
                    schema_error);
}

TEST_CASE("placement cloud is required exactly for unmovable services") {
    CHECK_THROWS_AS(load_workflow(std::string_view(R"({"unit_dp_rate": 1,
        "services": [{"id": "A", "mi": 1, "lambda": 1, "gamma": 1, "movable": false}]})")),
                    schema_error);
    CHECK_THROWS_AS(load_workflow(std::string_view(R"({"unit_dp_rate": 1,
        "services": [{"id": "A", "mi": 1, "lambda": 1, "gamma": 1, "movable": true, "placement_cloud": 0}]})")),
                    schema_error);
}

TEST_CASE("validation failures surface as schema errors") {
    CHECK_THROWS_AS(load_workflow(std::string_view(R"({"unit_dp_rate": 1,
        "services": [{"id": "A", "mi": 1, "lambda": 1, "gamma": 1, "movable": true}],
        "edges": [{"org": "A", "dest": "A", "share": 1}]})")),
                    schema_error);
    CHECK_THROWS_AS(load_workflow(std::string_view("{not json")), schema_error);
}

TEST_CASE("json round trip preserves every field") {
    stream_workflow wf;
    wf.unit_dp_rate = 0.75;
    auto a = svc("A", 3.5);
    a.placement_cloud = 2;
    auto b = svc("B", 0.0);
    b.mu = 4.25;
    b.gamma = 1.3;
    wf.services = {a, b};
    wf.edges = {{"A", "B", 0.4}};
    auto const back = load_workflow(to_json(wf, {{"seed", 7}}));
    REQUIRE(back.services.size() == 2);
    CHECK(back.unit_dp_rate == 0.75);
    CHECK(back.services[0].placement_cloud == std::optional<cloud_index>{2});
    CHECK(back.services[0].lambda == 3.5);
    CHECK(back.services[1].mu == std::optional<double>{4.25});
    CHECK(back.services[1].gamma == 1.3);
    CHECK(back.edges[0].share == 0.4);
}
