#include <streamsched/error.hpp>
#include <streamsched/workflow_io.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace streamsched {

namespace {

using nlohmann::json;

void reject_unknown(json const & object, std::string const & path, std::initializer_list<std::string_view> allowed) {
    for (auto const & [key, value] : object.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw schema_error(path.empty() ? key : path + "." + key, "unknown field");
    }
}

json const & require(json const & object, std::string const & path, char const * key) {
    auto it = object.find(key);
    auto const field = path.empty() ? std::string(key) : path + "." + key;
    if (it == object.end()) throw schema_error(field, "missing required field");
    return *it;
}

double number(json const & value, std::string const & path) {
    if (!value.is_number()) throw schema_error(path, "expected a number");
    return value.get<double>();
}

std::string text(json const & value, std::string const & path) {
    if (!value.is_string()) throw schema_error(path, "expected a string");
    return value.get<std::string>();
}

service_spec parse_service(json const & node, std::string const & path) {
    if (!node.is_object()) throw schema_error(path, "expected an object");
    reject_unknown(node, path, {"id", "mi", "lambda", "gamma", "movable", "placement_cloud", "mu"});

    service_spec s;
    s.id = text(require(node, path, "id"), path + ".id");
    s.mi = number(require(node, path, "mi"), path + ".mi");
    s.lambda = number(require(node, path, "lambda"), path + ".lambda");
    s.gamma = number(require(node, path, "gamma"), path + ".gamma");
    auto const & movable = require(node, path, "movable");
    if (!movable.is_boolean()) throw schema_error(path + ".movable", "expected a boolean");

    if (!(s.mi > 0.0)) throw schema_error(path + ".mi", "mi must be positive");
    if (!(s.lambda >= 0.0)) throw schema_error(path + ".lambda", "lambda must be >= 0");
    if (!(s.gamma >= 0.0)) throw schema_error(path + ".gamma", "gamma must be >= 0");

    auto placement = node.find("placement_cloud");
    if (movable.get<bool>()) {
        if (placement != node.end()) {
            throw schema_error(path + ".placement_cloud", "movable services must not carry a placement cloud");
        }
    } else {
        if (placement == node.end()) {
            throw schema_error(path + ".placement_cloud", "unmovable services require a placement cloud");
        }
        if (!placement->is_number_unsigned()) {
            throw schema_error(path + ".placement_cloud", "expected a non-negative integer");
        }
        s.placement_cloud = placement->get<cloud_index>();
    }

    if (auto mu = node.find("mu"); mu != node.end() && !mu->is_null()) {
        s.mu = number(*mu, path + ".mu");
        if (!(*s.mu > 0.0)) throw schema_error(path + ".mu", "mu must be positive");
    }
    return s;
}

edge_spec parse_edge(json const & node, std::string const & path) {
    if (!node.is_object()) throw schema_error(path, "expected an object");
    reject_unknown(node, path, {"org", "dest", "share"});
    edge_spec e;
    e.org = text(require(node, path, "org"), path + ".org");
    e.dest = text(require(node, path, "dest"), path + ".dest");
    e.share = number(require(node, path, "share"), path + ".share");
    if (!(e.share > 0.0 && e.share <= 1.0)) throw schema_error(path + ".share", "share must be in (0,1]");
    return e;
}

std::string locate(stream_workflow const & workflow, violation const & v) {
    for (std::size_t i = 0; i < workflow.services.size(); ++i) {
        if (workflow.services[i].id == v.element) return "services[" + std::to_string(i) + "]";
    }
    for (std::size_t i = 0; i < workflow.edges.size(); ++i) {
        auto const & e = workflow.edges[i];
        if (e.org + "->" + e.dest == v.element || (v.kind == violation_kind::self_loop && e.org == v.element)) {
            return "edges[" + std::to_string(i) + "]";
        }
    }
    return v.element;
}

} // namespace

stream_workflow load_workflow(json const & document) {
    if (!document.is_object()) throw schema_error("", "workflow document must be a JSON object");
    reject_unknown(document, "", {"unit_dp_rate", "services", "edges", "metadata"});

    stream_workflow workflow;
    workflow.unit_dp_rate = number(require(document, "", "unit_dp_rate"), "unit_dp_rate");
    if (!(workflow.unit_dp_rate > 0.0)) throw schema_error("unit_dp_rate", "unit_dp_rate must be positive");

    auto const & services = require(document, "", "services");
    if (!services.is_array()) throw schema_error("services", "expected an array");
    for (std::size_t i = 0; i < services.size(); ++i) {
        workflow.services.push_back(parse_service(services[i], "services[" + std::to_string(i) + "]"));
    }

    if (auto edges = document.find("edges"); edges != document.end()) {
        if (!edges->is_array()) throw schema_error("edges", "expected an array");
        for (std::size_t i = 0; i < edges->size(); ++i) {
            workflow.edges.push_back(parse_edge((*edges)[i], "edges[" + std::to_string(i) + "]"));
        }
    }

    auto const report = validate(workflow);
    if (!report.ok()) {
        auto const & first = report.violations.front();
        throw schema_error(locate(workflow, first), first.message);
    }
    return workflow;
}

stream_workflow load_workflow(std::string_view text) {
    json document;
    try {
        document = json::parse(text);
    } catch (json::parse_error const & e) {
        throw schema_error("", std::string("malformed JSON: ") + e.what());
    }
    return load_workflow(document);
}

stream_workflow load_workflow_file(std::string const & path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open workflow file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_workflow(std::string_view(buffer.str()));
}

json to_json(stream_workflow const & workflow, json metadata) {
    json services = json::array();
    for (auto const & s : workflow.services) {
        json node = {{"id", s.id}, {"mi", s.mi}, {"lambda", s.lambda}, {"gamma", s.gamma}, {"movable", s.movable()}};
        if (s.placement_cloud) node["placement_cloud"] = *s.placement_cloud;
        if (s.mu) node["mu"] = *s.mu;
        services.push_back(std::move(node));
    }
    json edges = json::array();
    for (auto const & e : workflow.edges) {
        edges.push_back({{"org", e.org}, {"dest", e.dest}, {"share", e.share}});
    }
    json document = {{"unit_dp_rate", workflow.unit_dp_rate}, {"services", services}, {"edges", edges}};
    if (!metadata.is_null()) document["metadata"] = std::move(metadata);
    return document;
}

} // namespace streamsched
