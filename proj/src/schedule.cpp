#include <streamsched/error.hpp>
#include <streamsched/schedule.hpp>

#include <fstream>
#include <sstream>

namespace streamsched {

nlohmann::json to_json(schedule const & plan, stream_workflow const & workflow) {
    nlohmann::json services = nlohmann::json::array();
    for (std::size_t i = 0; i < plan.services.size(); ++i) {
        auto const & a = plan.services[i];
        services.push_back({{"id", workflow.services.at(i).id}, {"cloud", a.cloud}, {"vms", a.vms}});
    }
    return {{"services", services}};
}

schedule load_schedule(nlohmann::json const & document, stream_workflow const & workflow) {
    if (!document.is_object() || !document.contains("services") || !document["services"].is_array()) {
        throw schema_error("services", "expected {\"services\": [...]}");
    }
    workflow_graph const graph(workflow);
    schedule plan;
    plan.services.resize(workflow.services.size());
    std::vector<bool> seen(workflow.services.size(), false);
    auto const & entries = document["services"];
    for (std::size_t k = 0; k < entries.size(); ++k) {
        auto const path = "services[" + std::to_string(k) + "]";
        auto const & e = entries[k];
        if (!e.is_object() || !e.contains("id") || !e["id"].is_string() || !e.contains("cloud") ||
            !e["cloud"].is_number_unsigned() || !e.contains("vms") || !e["vms"].is_array()) {
            throw schema_error(path, "expected {id, cloud, vms}");
        }
        auto const index = graph.index_of(e["id"].get<std::string>());
        if (!index) throw schema_error(path + ".id", "unknown service " + e["id"].get<std::string>());
        if (seen[*index]) throw schema_error(path + ".id", "service listed twice");
        seen[*index] = true;
        plan.services[*index].cloud = e["cloud"].get<cloud_index>();
        for (auto const & v : e["vms"]) {
            if (!v.is_number_unsigned()) throw schema_error(path + ".vms", "expected VM global ids");
            plan.services[*index].vms.push_back(v.get<vm_id>());
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) throw schema_error("services", "missing allocation for " + workflow.services[i].id);
    }
    return plan;
}

schedule load_schedule_file(std::string const & path, stream_workflow const & workflow) {
    std::ifstream in(path);
    if (!in) throw error("cannot open schedule file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_schedule(nlohmann::json::parse(buffer.str()), workflow);
    } catch (nlohmann::json::parse_error const & e) {
        throw schema_error("", std::string("malformed JSON: ") + e.what());
    }
}

} // namespace streamsched
