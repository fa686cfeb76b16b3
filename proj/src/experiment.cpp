#include <streamsched/baselines.hpp>
#include <streamsched/cost_model.hpp>
#include <streamsched/error.hpp>
#include <streamsched/experiment.hpp>
#include <streamsched/greedy.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace streamsched {

parameter scenario_spec::variable() const { return static_cast<parameter>(scenario); }

parameter_levels scenario_spec::levels() const {
    parameter_levels out;
    out[variable()] = level;
    return out;
}

void scenario_spec::validate() const {
    if (scenario < 1 || scenario > 7) throw std::invalid_argument("scenario must be in 1..7");
    if (families.empty() || sizes.empty() || seeds.empty()) {
        throw std::invalid_argument("families, sizes and seeds must be non-empty");
    }
    if (ga_runs == 0) throw std::invalid_argument("ga_runs must be positive");
    ga.validate();
    simulation.validate();
}

scenario_spec default_scenario(int scenario, range_level level, bool full) {
    scenario_spec spec;
    spec.scenario = scenario;
    spec.level = level;
    spec.families = {workflow_family::montage, workflow_family::inspiral, workflow_family::epigenomics,
                     workflow_family::cybershake};
    spec.sizes = {size_class::small, size_class::medium};
    if (full) spec.sizes.push_back(size_class::large);
    auto const seeds = full ? 10U : 5U;
    for (std::uint64_t s = 1; s <= seeds; ++s) spec.seeds.push_back(s);
    return spec;
}

namespace {

std::optional<size_class> parse_size_class(std::string_view text) {
    if (text == "small") return size_class::small;
    if (text == "medium") return size_class::medium;
    if (text == "large") return size_class::large;
    return std::nullopt;
}

template <typename T>
T read_field(nlohmann::json const & value, std::string const & path) {
    try {
        return value.get<T>();
    } catch (nlohmann::json::exception const & e) {
        throw schema_error(path, e.what());
    }
}

void check_keys(nlohmann::json const & object, std::string const & path, std::initializer_list<char const *> keys) {
    if (!object.is_object()) throw schema_error(path, "expected an object");
    for (auto const & item : object.items()) {
        if (std::find_if(keys.begin(), keys.end(), [&](char const * k) { return item.key() == k; }) == keys.end()) {
            throw schema_error(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
        }
    }
}

} // namespace

void apply_config(scenario_spec & spec, nlohmann::json const & config) {
    check_keys(config, "",
               {"families", "sizes", "seeds", "ga_runs", "threads", "fair_share_reference", "simulation", "ga"});
    if (config.contains("families")) {
        spec.families.clear();
        for (auto const & f : read_field<std::vector<std::string>>(config["families"], "families")) {
            auto const family = parse_workflow_family(f);
            if (!family) throw schema_error("families", "unknown workflow family " + f);
            spec.families.push_back(*family);
        }
    }
    if (config.contains("sizes")) {
        spec.sizes.clear();
        for (auto const & s : read_field<std::vector<std::string>>(config["sizes"], "sizes")) {
            auto const size = parse_size_class(s);
            if (!size) throw schema_error("sizes", "unknown size " + s);
            spec.sizes.push_back(*size);
        }
    }
    if (config.contains("seeds")) spec.seeds = read_field<std::vector<std::uint64_t>>(config["seeds"], "seeds");
    if (config.contains("ga_runs")) spec.ga_runs = read_field<std::size_t>(config["ga_runs"], "ga_runs");
    if (config.contains("threads")) spec.threads = read_field<std::size_t>(config["threads"], "threads");
    if (config.contains("fair_share_reference")) {
        spec.fair_share_reference = read_field<vm_id>(config["fair_share_reference"], "fair_share_reference");
    }
    if (config.contains("simulation")) {
        auto const & sim = config["simulation"];
        check_keys(sim, "simulation", {"duration", "warmup"});
        if (sim.contains("duration")) spec.simulation.duration = read_field<std::size_t>(sim["duration"], "simulation.duration");
        if (sim.contains("warmup")) spec.simulation.warmup = read_field<std::size_t>(sim["warmup"], "simulation.warmup");
    }
    if (config.contains("ga")) {
        auto const & ga = config["ga"];
        check_keys(ga, "ga",
                   {"population_size", "generation_limit", "elitism_count", "p_crossover", "p_mutation",
                    "p_replacement", "horizon"});
        auto set = [&](char const * key, auto & field) {
            if (ga.contains(key)) {
                field = read_field<std::decay_t<decltype(field)>>(ga[key], std::string("ga.") + key);
            }
        };
        set("population_size", spec.ga.population_size);
        set("generation_limit", spec.ga.generation_limit);
        set("elitism_count", spec.ga.elitism_count);
        set("p_crossover", spec.ga.p_crossover);
        set("p_mutation", spec.ga.p_mutation);
        set("p_replacement", spec.ga.p_replacement);
        set("horizon", spec.ga.horizon);
    }
}

std::string_view to_string(algorithm a) noexcept {
    switch (a) {
    case algorithm::greedy: return "greedy";
    case algorithm::ga: return "ga";
    case algorithm::fair_share: return "fair_share";
    case algorithm::lower_bound: return "lower_bound";
    }
    return "unknown";
}

std::optional<algorithm> parse_algorithm(std::string_view text) noexcept {
    if (text == "greedy") return algorithm::greedy;
    if (text == "ga") return algorithm::ga;
    if (text == "fair_share" || text == "fair-share") return algorithm::fair_share;
    if (text == "lower_bound" || text == "lower-bound") return algorithm::lower_bound;
    return std::nullopt;
}

stream_workflow cell_workflow(scenario_spec const & spec, workflow_family family, std::size_t size,
                              std::uint64_t seed) {
    return generate_workflow(family, size, spec.levels(), seed);
}

multicloud_env cell_environment(scenario_spec const & spec, std::uint64_t seed) {
    return build_reference_environment(spec.levels().network_bands(), derive_seed(seed, 10));
}

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point start) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

} // namespace

cell_result run_cell(scenario_spec const & spec, workflow_family family, std::size_t size, std::uint64_t seed) {
    cell_result cell;
    cell.workflow = cell_workflow(spec, family, size, seed);
    auto const env = cell_environment(spec, seed);
    auto const horizon = spec.ga.horizon;
    auto const & workflow = cell.workflow;

    auto make_row = [&](algorithm a) {
        result_row row;
        row.scenario = spec.scenario;
        row.level = spec.level;
        row.family = family;
        row.size = size;
        row.algo = a;
        row.seed = seed;
        return row;
    };
    auto fill_costs = [&](result_row & row, schedule const & plan) {
        auto const cost = cost_of(plan, workflow, env, horizon, spec.ga.mode);
        row.provisioning = cost.provisioning;
        row.transfer = cost.transfer;
        row.total = cost.total();
    };
    auto validate_plan = [&](result_row & row, schedule const & plan) {
        auto const report = check_constraints(plan, workflow, env);
        if (!report.ok()) row.error = "constraint_violation";
        return report.ok();
    };

    auto lb = make_row(algorithm::lower_bound);
    double bound = std::numeric_limits<double>::quiet_NaN();
    {
        auto const start = clock_type::now();
        try {
            auto const cost = lower_bound_breakdown(workflow, env, spec.levels().network_bands(), horizon);
            lb.provisioning = cost.provisioning;
            lb.transfer = cost.transfer;
            lb.total = cost.total();
            bound = lb.total;
        } catch (infeasible_error const &) {
            lb.error = "infeasible";
        }
        lb.time_ms = elapsed_ms(start);
    }
    auto relative = [&](double total) { return bound > 0.0 ? (total - bound) / bound * 100.0 : 0.0; };

    auto greedy = make_row(algorithm::greedy);
    {
        auto const start = clock_type::now();
        try {
            cell.greedy = greedy_schedule(workflow, env);
            greedy.time_ms = elapsed_ms(start);
            if (validate_plan(greedy, *cell.greedy)) {
                fill_costs(greedy, *cell.greedy);
                greedy.relative_difference = relative(greedy.total);
                greedy.latency = simulate(workflow, *cell.greedy, env, spec.simulation).latency;
            }
        } catch (infeasible_error const &) {
            greedy.time_ms = elapsed_ms(start);
            greedy.error = "infeasible";
        }
    }

    auto ga = make_row(algorithm::ga);
    if (cell.greedy) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t run = 0; run < spec.ga_runs && ga.error.empty(); ++run) {
            auto config = spec.ga;
            config.seed = derive_seed(seed, 100 + run);
            auto const start = clock_type::now();
            auto result = ga_schedule(workflow, env, config);
            auto const ms = elapsed_ms(start);
            if (!validate_plan(ga, result.plan)) break;

            auto const cost = cost_of(result.plan, workflow, env, horizon, spec.ga.mode);
            ga.provisioning += cost.provisioning;
            ga.transfer += cost.transfer;
            ga.total += cost.total();
            ga.time_ms += ms;
            ga.latency += simulate(workflow, result.plan, env, spec.simulation).latency;
            cell.ga_totals.push_back(cost.total());
            cell.ga_times_ms.push_back(ms);
            cell.ga_logs.push_back(std::move(result.log));
            if (cost.total() < best) {
                best = cost.total();
                cell.ga = std::move(result.plan);
            }
        }
        if (ga.error.empty()) {
            auto const runs = static_cast<double>(spec.ga_runs);
            ga.provisioning /= runs;
            ga.transfer /= runs;
            ga.total /= runs;
            ga.time_ms /= runs;
            ga.latency /= runs;
            ga.relative_difference = relative(ga.total);
        }
    } else {
        ga.error = greedy.error;
    }

    auto fair = make_row(algorithm::fair_share);
    {
        auto const start = clock_type::now();
        try {
            auto const reference = spec.fair_share_reference.value_or(default_fair_share_reference(env));
            cell.fair_share = fair_share_schedule(workflow, env, reference);
            fair.time_ms = elapsed_ms(start);
            if (validate_plan(fair, *cell.fair_share)) {
                fill_costs(fair, *cell.fair_share);
                fair.relative_difference = relative(fair.total);
                fair.latency = simulate(workflow, *cell.fair_share, env, spec.simulation).latency;
            }
        } catch (infeasible_error const &) {
            fair.time_ms = elapsed_ms(start);
            fair.error = "infeasible";
        }
    }

    cell.rows = {greedy, ga, fair, lb};
    return cell;
}

std::vector<result_row> run_scenario(scenario_spec const & spec) {
    spec.validate();
    struct cell_key {
        workflow_family family;
        std::size_t size;
        std::uint64_t seed;
    };
    std::vector<cell_key> cells;
    for (auto family : spec.families) {
        for (auto size : spec.sizes) {
            for (auto seed : spec.seeds) cells.push_back({family, node_count(family, size), seed});
        }
    }

    std::vector<std::vector<result_row>> results(cells.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (auto i = cursor++; i < cells.size(); i = cursor++) {
            results[i] = run_cell(spec, cells[i].family, cells[i].size, cells[i].seed).rows;
        }
    };
    auto const threads = std::max<std::size_t>(1, std::min(spec.threads, cells.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::vector<result_row> rows;
    for (auto & r : results) rows.insert(rows.end(), r.begin(), r.end());
    return rows;
}

bool has_errors(std::span<result_row const> rows) {
    return std::any_of(rows.begin(), rows.end(), [](result_row const & r) { return !r.error.empty(); });
}

namespace {

std::string number(double v) {
    if (std::isnan(v)) return "";
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", v);
    return buffer;
}

std::vector<std::string> split(std::string const & line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(std::string const & text) {
    return text.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(text);
}

} // namespace

void write_results(std::ostream & out, std::span<result_row const> rows, bool include_timing) {
    out << "scenario,range,family,size,algorithm,seed,provisioning_cents,transfer_cents,total_cents,"
           "relative_difference_pct,avg_latency_s,error";
    if (include_timing) out << ",time_ms";
    out << '\n';
    for (auto const & r : rows) {
        bool const ok = r.error.empty();
        auto value = [&](double v) { return ok ? number(v) : std::string(); };
        out << r.scenario << ',' << to_string(r.level) << ',' << to_string(r.family) << ',' << r.size << ','
            << to_string(r.algo) << ',' << r.seed << ',' << value(r.provisioning) << ',' << value(r.transfer) << ','
            << value(r.total) << ',' << value(r.relative_difference) << ','
            << (r.algo == algorithm::lower_bound ? std::string() : value(r.latency)) << ',' << r.error;
        if (include_timing) out << ',' << number(r.time_ms);
        out << '\n';
    }
}

std::vector<result_row> read_results(std::istream & in) {
    std::vector<result_row> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    bool const timing = line.find(",time_ms") != std::string::npos;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        auto const fields = split(line);
        auto const where = "line " + std::to_string(line_number);
        if (fields.size() != (timing ? 13U : 12U)) throw schema_error(where, "unexpected field count");
        result_row r;
        try {
            r.scenario = std::stoi(fields[0]);
            auto const level = parse_range_level(fields[1]);
            auto const family = parse_workflow_family(fields[2]);
            auto const algo = parse_algorithm(fields[4]);
            if (!level || !family || !algo) throw schema_error(where, "unknown range, family or algorithm");
            r.level = *level;
            r.family = *family;
            r.size = std::stoul(fields[3]);
            r.algo = *algo;
            r.seed = std::stoull(fields[5]);
            r.provisioning = parse_number(fields[6]);
            r.transfer = parse_number(fields[7]);
            r.total = parse_number(fields[8]);
            r.relative_difference = parse_number(fields[9]);
            r.latency = parse_number(fields[10]);
            r.error = fields[11];
            r.time_ms = timing ? parse_number(fields[12]) : std::numeric_limits<double>::quiet_NaN();
        } catch (std::logic_error const &) {
            throw schema_error(where, "malformed number");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    auto const mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

std::vector<summary_row> summarize(std::span<result_row const> rows) {
    using key = std::tuple<int, range_level, workflow_family, std::size_t, algorithm>;
    std::vector<key> order;
    std::map<key, std::vector<result_row const *>> groups;
    for (auto const & r : rows) {
        key const k{r.scenario, r.level, r.family, r.size, r.algo};
        auto & group = groups[k];
        if (group.empty()) order.push_back(k);
        group.push_back(&r);
    }

    auto mean = [](std::vector<double> const & v) {
        if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
        double sum = 0.0;
        for (auto x : v) sum += x;
        return sum / static_cast<double>(v.size());
    };

    std::vector<summary_row> out;
    for (auto const & k : order) {
        auto const & group = groups[k];
        summary_row s;
        std::tie(s.scenario, s.level, s.family, s.size, s.algo) = k;
        s.runs = group.size();
        std::vector<double> totals, diffs, latencies, times;
        for (auto const * r : group) {
            if (!std::isnan(r->time_ms)) times.push_back(r->time_ms);
            if (!r->error.empty()) {
                ++s.failures;
                continue;
            }
            totals.push_back(r->total);
            diffs.push_back(r->relative_difference);
            if (!std::isnan(r->latency)) latencies.push_back(r->latency);
        }
        s.median_total = median(totals);
        s.mean_total = mean(totals);
        s.median_relative_difference = median(diffs);
        s.mean_relative_difference = mean(diffs);
        s.mean_latency = s.algo == algorithm::lower_bound ? std::numeric_limits<double>::quiet_NaN()
                                                                       : mean(latencies);
        s.min_time_ms = times.empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : *std::min_element(times.begin(), times.end());
        s.max_time_ms = times.empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : *std::max_element(times.begin(), times.end());
        out.push_back(s);
    }
    return out;
}

void write_summary(std::ostream & out, std::span<summary_row const> rows, bool include_timing) {
    out << "scenario,range,family,size,algorithm,runs,failures,median_total_cents,mean_total_cents,"
           "median_relative_difference_pct,mean_relative_difference_pct,mean_latency_s";
    if (include_timing) out << ",min_time_ms,max_time_ms";
    out << '\n';
    for (auto const & s : rows) {
        out << s.scenario << ',' << to_string(s.level) << ',' << to_string(s.family) << ',' << s.size << ','
            << to_string(s.algo) << ',' << s.runs << ',' << s.failures << ',' << number(s.median_total) << ','
            << number(s.mean_total) << ',' << number(s.median_relative_difference) << ','
            << number(s.mean_relative_difference) << ',' << number(s.mean_latency);
        if (include_timing) out << ',' << number(s.min_time_ms) << ',' << number(s.max_time_ms);
        out << '\n';
    }
}

} // namespace streamsched
