#include <streamsched/error.hpp>
#include <streamsched/workflow.hpp>

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_set>

namespace streamsched {

namespace {

struct index_edges {
    std::unordered_map<std::string, std::size_t> index;
    // (org, dest) for edges whose endpoints resolve and differ
    std::vector<std::pair<std::size_t, std::size_t>> resolved;
};

index_edges resolve(stream_workflow const & workflow) {
    index_edges result;
    for (std::size_t i = 0; i < workflow.services.size(); ++i) {
        result.index.emplace(workflow.services[i].id, i);
    }
    for (auto const & e : workflow.edges) {
        auto org = result.index.find(e.org);
        auto dest = result.index.find(e.dest);
        if (org == result.index.end() || dest == result.index.end() || org->second == dest->second) {
            continue;
        }
        result.resolved.emplace_back(org->second, dest->second);
    }
    return result;
}

struct kahn_result {
    std::vector<std::size_t> order;
    std::optional<std::size_t> cycle_member;
};

kahn_result kahn(stream_workflow const & workflow,
                 std::vector<std::pair<std::size_t, std::size_t>> const & edges) {
    auto const n = workflow.services.size();
    std::vector<std::vector<std::size_t>> children(n);
    std::vector<std::vector<std::size_t>> parents(n);
    std::vector<std::size_t> indegree(n, 0);
    for (auto [org, dest] : edges) {
        children[org].push_back(dest);
        parents[dest].push_back(org);
        ++indegree[dest];
    }

    auto by_id = [&](std::size_t a, std::size_t b) {
        auto const & ia = workflow.services[a].id;
        auto const & ib = workflow.services[b].id;
        return ia != ib ? ia > ib : a > b;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(i);
    }

    kahn_result result;
    result.order.reserve(n);
    while (!ready.empty()) {
        auto const next = ready.top();
        ready.pop();
        result.order.push_back(next);
        for (auto child : children[next]) {
            if (--indegree[child] == 0) ready.push(child);
        }
    }

    if (result.order.size() != n) {
        // Every leftover node has a leftover parent; walking parents must revisit a node.
        std::vector<bool> done(n, false);
        for (auto i : result.order) done[i] = true;
        auto node = static_cast<std::size_t>(std::find(done.begin(), done.end(), false) - done.begin());
        std::vector<bool> seen(n, false);
        while (!seen[node]) {
            seen[node] = true;
            for (auto p : parents[node]) {
                if (!done[p]) {
                    node = p;
                    break;
                }
            }
        }
        result.cycle_member = node;
    }
    return result;
}

} // namespace

bool validation_report::schedulable() const noexcept {
    return std::all_of(violations.begin(), violations.end(),
                       [](violation const & v) { return v.kind == violation_kind::idle_source; });
}

validation_report validate(stream_workflow const & workflow) {
    validation_report report;
    auto add = [&](violation_kind kind, std::string element, std::string message) {
        report.violations.push_back({kind, std::move(element), std::move(message)});
    };

    if (!(workflow.unit_dp_rate > 0.0)) {
        add(violation_kind::nonpositive_unit_rate, "unit_dp_rate", "unit_dp_rate must be positive");
    }

    std::unordered_set<std::string> seen;
    for (auto const & s : workflow.services) {
        if (s.id.empty()) add(violation_kind::empty_id, s.id, "service id must not be empty");
        if (!seen.insert(s.id).second) add(violation_kind::duplicate_id, s.id, "duplicate service id " + s.id);
        if (!(s.mi > 0.0)) add(violation_kind::nonpositive_mi, s.id, "mi must be positive on " + s.id);
        if (!(s.lambda >= 0.0)) add(violation_kind::negative_lambda, s.id, "lambda must be >= 0 on " + s.id);
        if (!(s.gamma >= 0.0)) add(violation_kind::negative_gamma, s.id, "gamma must be >= 0 on " + s.id);
        if (s.mu && !(*s.mu > 0.0)) add(violation_kind::nonpositive_mu, s.id, "mu must be positive on " + s.id);
    }

    for (auto const & e : workflow.edges) {
        auto const name = e.org + "->" + e.dest;
        if (e.org == e.dest) add(violation_kind::self_loop, e.org, "self-loop on " + e.org);
        if (!seen.contains(e.org) || !seen.contains(e.dest)) {
            add(violation_kind::dangling_edge, name, "edge " + name + " references an unknown service");
        }
        if (!(e.share > 0.0 && e.share <= 1.0)) {
            add(violation_kind::share_out_of_range, name, "share must be in (0,1] on " + name);
        }
    }

    auto const resolved = resolve(workflow);
    auto const sorted = kahn(workflow, resolved.resolved);
    if (sorted.cycle_member) {
        auto const & id = workflow.services[*sorted.cycle_member].id;
        add(violation_kind::cycle, id, "cycle through " + id);
    }

    std::vector<bool> has_parent(workflow.services.size(), false);
    for (auto [org, dest] : resolved.resolved) has_parent[dest] = true;
    for (std::size_t i = 0; i < workflow.services.size(); ++i) {
        if (!has_parent[i] && workflow.services[i].lambda == 0.0) {
            auto const & id = workflow.services[i].id;
            add(violation_kind::idle_source, id, "source service " + id + " receives no external data");
        }
    }
    return report;
}

std::vector<std::string> topological_order(stream_workflow const & workflow) {
    auto const resolved = resolve(workflow);
    auto const sorted = kahn(workflow, resolved.resolved);
    if (sorted.cycle_member) {
        throw invalid_workflow("cycle detected through service " + workflow.services[*sorted.cycle_member].id);
    }
    std::vector<std::string> ids;
    ids.reserve(sorted.order.size());
    for (auto i : sorted.order) ids.push_back(workflow.services[i].id);
    return ids;
}

workflow_graph::workflow_graph(stream_workflow const & workflow) : workflow_(&workflow) {
    auto const report = validate(workflow);
    if (!report.schedulable()) {
        for (auto const & v : report.violations) {
            if (v.kind != violation_kind::idle_source) throw invalid_workflow(v.message);
        }
    }

    auto const n = workflow.services.size();
    for (std::size_t i = 0; i < n; ++i) index_.emplace(workflow.services[i].id, i);

    in_edges_.resize(n);
    out_edges_.resize(n);
    edge_org_.reserve(workflow.edges.size());
    edge_dest_.reserve(workflow.edges.size());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t e = 0; e < workflow.edges.size(); ++e) {
        auto const org = index_.at(workflow.edges[e].org);
        auto const dest = index_.at(workflow.edges[e].dest);
        edge_org_.push_back(org);
        edge_dest_.push_back(dest);
        out_edges_[org].push_back(e);
        in_edges_[dest].push_back(e);
        pairs.emplace_back(org, dest);
    }
    order_ = kahn(workflow, pairs).order;

    std::vector<std::size_t> level(n, 1);
    for (auto s : order_) {
        for (auto e : in_edges_[s]) level[s] = std::max(level[s], level[edge_org_[e]] + 1);
        depth_ = std::max(depth_, level[s]);
    }
}

std::optional<std::size_t> workflow_graph::index_of(std::string const & id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

} // namespace streamsched
