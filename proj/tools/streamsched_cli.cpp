#include <streamsched/baselines.hpp>
#include <streamsched/cost_model.hpp>
#include <streamsched/error.hpp>
#include <streamsched/experiment.hpp>
#include <streamsched/ga.hpp>
#include <streamsched/greedy.hpp>
#include <streamsched/simulator.hpp>
#include <streamsched/workflow_generator.hpp>
#include <streamsched/workflow_io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

using namespace streamsched;

namespace {

constexpr int exit_infeasible = 1;
constexpr int exit_failure = 2;

// Writes to `path`, or stdout when it is empty or "-".
void emit(std::string const & path, std::string const & text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

nlohmann::json read_json(std::string const & path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return nlohmann::json::parse(in);
}

multicloud_env environment_from(std::string const & path) {
    return path.empty() ? build_reference_environment() : load_environment_file(path);
}

range_level level_of(std::string const & text) {
    auto const level = parse_range_level(text);
    if (!level) throw CLI::ValidationError("--range", "expected low, med or high");
    return *level;
}

double milliseconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct common_options {
    std::uint64_t seed = 1;
    std::string out;
};

// ---------------------------------------------------------------------------

struct generate_options {
    std::string family = "montage";
    std::size_t size = 25;
    int scenario = 1;
    std::string range = "medium";
    std::size_t clouds = 3;
};

int run_generate(generate_options const & o, common_options const & c) {
    auto const family = parse_workflow_family(o.family);
    if (!family) throw CLI::ValidationError("--family", "unknown family " + o.family);
    auto spec = default_scenario(o.scenario, level_of(o.range));
    spec.validate();
    auto const wf = generate_workflow(*family, o.size, spec.levels(), c.seed, o.clouds);
    nlohmann::json meta{{"family", to_string(*family)}, {"size", o.size}, {"seed", c.seed},
                        {"scenario", o.scenario}, {"range", to_string(spec.level)}};
    emit(c.out, to_json(wf, meta).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------

struct env_options {
    std::optional<int> scenario;
    std::string range = "medium";
};

int run_env(env_options const & o, common_options const & c) {
    if (!o.scenario) {
        emit(c.out, to_json(build_reference_environment()).dump(2) + "\n");
        return 0;
    }
    auto spec = default_scenario(*o.scenario, level_of(o.range));
    spec.validate();
    emit(c.out, to_json(cell_environment(spec, c.seed)).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------

struct schedule_options {
    std::string workflow;
    std::string env;
    std::string algo = "greedy";
    std::optional<vm_id> fair_share_ref;
    std::string ga_log;
    std::string config;
};

int run_schedule(schedule_options const & o, common_options const & c) {
    auto const wf = load_workflow_file(o.workflow);
    auto const env = environment_from(o.env);
    auto const algo = parse_algorithm(o.algo);
    if (!algo || *algo == algorithm::lower_bound) throw CLI::ValidationError("--algo", "expected greedy, ga or fair-share");

    auto const start = std::chrono::steady_clock::now();
    schedule plan;
    switch (*algo) {
    case algorithm::greedy:
        plan = greedy_schedule(wf, env);
        break;
    case algorithm::ga: {
        scenario_spec spec = default_scenario(1, range_level::medium);
        if (!o.config.empty()) apply_config(spec, read_json(o.config));
        auto config = spec.ga;
        config.seed = c.seed;
        auto const result = ga_schedule(wf, env, config);
        plan = result.plan;
        if (!o.ga_log.empty()) {
            std::ostringstream log;
            write_generation_log(log, result.log);
            emit(o.ga_log, log.str());
        }
        break;
    }
    case algorithm::fair_share:
        plan = fair_share_schedule(wf, env, o.fair_share_ref.value_or(default_fair_share_reference(env)));
        break;
    case algorithm::lower_bound:
        break;
    }
    auto const elapsed = milliseconds_since(start);

    auto const cost = cost_of(plan, wf, env, 180.0);
    std::fprintf(stderr, "%s: provisioning %.6g, transfer %.6g, total %.6g cents, %.3f ms\n",
                 std::string(to_string(*algo)).c_str(), cost.provisioning, cost.transfer, cost.total(), elapsed);
    emit(c.out, to_json(plan, wf).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------

struct simulate_options {
    std::string workflow;
    std::string env;
    std::string schedule;
    std::size_t duration = 180;
    std::size_t warmup = 120;
    std::string trace;
};

int run_simulate(simulate_options const & o, common_options const & c) {
    auto const wf = load_workflow_file(o.workflow);
    auto const env = environment_from(o.env);
    auto const plan = load_schedule_file(o.schedule, wf);
    simulation_config config;
    config.duration = o.duration;
    config.warmup = o.warmup;
    config.record_trace = !o.trace.empty();
    auto const metrics = simulate(wf, plan, env, config);

    std::ostringstream out;
    write_metrics_header(out);
    write_metrics_row(out, "run", metrics);
    emit(c.out, out.str());
    if (!o.trace.empty()) {
        std::ostringstream trace;
        write_trace(trace, wf, metrics.trace);
        emit(o.trace, trace.str());
    }
    for (auto const & id : steady_state_check(wf, plan, env, config).flagged()) {
        std::fprintf(stderr, "warning: %s deviates from the analytic rate\n", id.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct experiment_options {
    int scenario = 1;
    std::string range = "medium";
    bool full = false;
    bool seed_given = false;
    std::string config;
    std::string summary_out;
    std::string timing_out;
    std::optional<vm_id> fair_share_ref;
    std::size_t threads = 1;
    bool allow_infeasible = false;
};

int run_experiment(experiment_options const & o, common_options const & c) {
    auto spec = default_scenario(o.scenario, level_of(o.range), o.full);
    if (!o.config.empty()) apply_config(spec, read_json(o.config));
    if (o.seed_given) spec.seeds = {c.seed};
    if (o.fair_share_ref) spec.fair_share_reference = o.fair_share_ref;
    if (o.threads > 1) spec.threads = o.threads;
    spec.validate();

    auto const rows = run_scenario(spec);
    std::ostringstream results;
    write_results(results, rows);
    emit(c.out, results.str());
    if (!o.timing_out.empty()) {
        std::ostringstream timed;
        write_results(timed, rows, true);
        emit(o.timing_out, timed.str());
    }
    if (!o.summary_out.empty()) {
        std::ostringstream summary;
        write_summary(summary, summarize(rows));
        emit(o.summary_out, summary.str());
    }
    if (has_errors(rows)) {
        std::fprintf(stderr, "some cells failed to schedule\n");
        if (!o.allow_infeasible) return exit_infeasible;
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct compare_options {
    std::string workflow;
    std::string env;
    std::optional<vm_id> fair_share_ref;
    std::size_t ga_runs = 1;
    bool allow_infeasible = false;
};

int run_compare(compare_options const & o, common_options const & c) {
    auto const wf = load_workflow_file(o.workflow);
    auto const env = environment_from(o.env);
    std::ostringstream out;
    out << "algorithm,provisioning_cents,transfer_cents,total_cents,relative_difference_pct,avg_latency_s,time_ms,"
           "error\n";
    // Without sampled bands the lower bound uses the environment's own extremes.
    network_ranges ranges;
    ranges.egress.bandwidth = {std::numeric_limits<double>::infinity(), 0.0};
    ranges.egress.latency = {0.0, 0.0};
    ranges.transfer_cost = {std::numeric_limits<double>::infinity(), 0.0};
    for (cloud_index i = 0; i < env.cloud_count(); ++i) {
        for (cloud_index j = 0; j < env.cloud_count(); ++j) {
            if (i == j) continue;
            ranges.egress.bandwidth.min = std::min(ranges.egress.bandwidth.min, env.bandwidth(i, j));
            ranges.egress.latency.max = std::max(ranges.egress.latency.max, env.latency(i, j));
            ranges.transfer_cost.min = std::min(ranges.transfer_cost.min, env.transfer_cost(i, j));
        }
    }
    double lb = 0.0;
    bool failed = false;
    try {
        lb = lower_bound_cost(wf, env, ranges, 180.0);
    } catch (infeasible_error const &) {
        failed = true;
    }

    char buffer[256];
    auto report = [&](char const * name, auto && produce) {
        try {
            auto const start = std::chrono::steady_clock::now();
            schedule const plan = produce();
            auto const ms = milliseconds_since(start);
            auto const cost = cost_of(plan, wf, env, 180.0);
            auto const latency = simulate(wf, plan, env).latency;
            std::snprintf(buffer, sizeof buffer, "%s,%.10g,%.10g,%.10g,%.10g,%.10g,%.3f,\n", name, cost.provisioning,
                          cost.transfer, cost.total(), lb > 0.0 ? (cost.total() - lb) / lb * 100.0 : 0.0, latency, ms);
            out << buffer;
        } catch (error const & e) {
            failed = true;
            out << name << ",,,,,,," << (dynamic_cast<infeasible_error const *>(&e) ? "infeasible" : "constraint_violation")
                << '\n';
        }
    };
    report("greedy", [&] { return greedy_schedule(wf, env); });
    report("ga", [&] {
        std::optional<ga_result> best;
        for (std::size_t run = 0; run < o.ga_runs; ++run) {
            ga_config config;
            config.seed = derive_seed(c.seed, 100 + run);
            auto result = ga_schedule(wf, env, config);
            if (!best || result.fitness < best->fitness) best = std::move(result);
        }
        return best->plan;
    });
    report("fair_share", [&] {
        return fair_share_schedule(wf, env, o.fair_share_ref.value_or(default_fair_share_reference(env)));
    });
    std::snprintf(buffer, sizeof buffer, "lower_bound,,,%.10g,0,,,\n", lb);
    out << buffer;
    emit(c.out, out.str());
    return failed && !o.allow_infeasible ? exit_infeasible : 0;
}

} // namespace

int main(int argc, char ** argv) {
    CLI::App app{"Cost-driven scheduling of stream workflows on multiple clouds"};
    app.require_subcommand(1);
    common_options common;

    auto add_common = [&](CLI::App * sub) {
        sub->add_option("--seed", common.seed, "random seed")->capture_default_str();
        sub->add_option("--out", common.out, "output file (stdout by default)");
    };

    generate_options gen;
    auto * generate = app.add_subcommand("generate", "generate a synthetic workflow as JSON");
    generate->add_option("--family", gen.family, "montage, inspiral, epigenomics or cybershake")->capture_default_str();
    generate->add_option("--size", gen.size, "node count")->capture_default_str();
    generate->add_option("--scenario", gen.scenario, "parameter 1..7 set to --range")->capture_default_str();
    generate->add_option("--range", gen.range, "low, med or high")->capture_default_str();
    generate->add_option("--clouds", gen.clouds, "clouds for pinned services")->capture_default_str();
    add_common(generate);

    env_options en;
    auto * env = app.add_subcommand("env", "export the reference environment as JSON");
    env->add_option("--scenario", en.scenario, "sample the network of this scenario column");
    env->add_option("--range", en.range, "low, med or high")->capture_default_str();
    add_common(env);

    schedule_options sch;
    auto * sched = app.add_subcommand("schedule", "schedule a workflow");
    sched->add_option("--workflow", sch.workflow, "workflow JSON")->required();
    sched->add_option("--env", sch.env, "environment JSON (reference environment by default)");
    sched->add_option("--algo", sch.algo, "greedy, ga or fair-share")->capture_default_str();
    sched->add_option("--fair-share-ref", sch.fair_share_ref, "global id of the fair-share VM type");
    sched->add_option("--ga-log", sch.ga_log, "write the GA generation log CSV");
    sched->add_option("--config", sch.config, "JSON with a \"ga\" object overriding the GA settings");
    add_common(sched);

    simulate_options sim;
    auto * simulate_cmd = app.add_subcommand("simulate", "simulate a schedule");
    simulate_cmd->add_option("--workflow", sim.workflow, "workflow JSON")->required();
    simulate_cmd->add_option("--schedule", sim.schedule, "schedule JSON")->required();
    simulate_cmd->add_option("--env", sim.env, "environment JSON (reference environment by default)");
    simulate_cmd->add_option("--duration", sim.duration, "seconds")->capture_default_str();
    simulate_cmd->add_option("--warmup", sim.warmup, "seconds excluded from averages")->capture_default_str();
    simulate_cmd->add_option("--trace", sim.trace, "write the per-tick trace CSV");
    add_common(simulate_cmd);

    experiment_options exp;
    auto * experiment = app.add_subcommand("experiment", "run one scenario column and write the results CSV");
    experiment->add_option("--scenario", exp.scenario, "parameter 1..7")->required();
    experiment->add_option("--range", exp.range, "low, med or high")->required();
    experiment->add_flag("--full", exp.full, "all sizes and ten seeds");
    experiment->add_option("--config", exp.config, "JSON overrides");
    experiment->add_option("--summary-out", exp.summary_out, "write per-cell medians");
    experiment->add_option("--timing-out", exp.timing_out, "write results with computational time");
    experiment->add_option("--fair-share-ref", exp.fair_share_ref, "global id of the fair-share VM type");
    experiment->add_option("--threads", exp.threads, "worker threads")->capture_default_str();
    experiment->add_flag("--allow-infeasible", exp.allow_infeasible, "exit 0 even when cells fail");
    auto * seed_option = experiment->add_option("--seed", common.seed, "run a single seed");
    experiment->add_option("--out", common.out, "results CSV (stdout by default)");

    compare_options cmp;
    auto * compare = app.add_subcommand("compare", "run every algorithm on one workflow");
    compare->add_option("--workflow", cmp.workflow, "workflow JSON")->required();
    compare->add_option("--env", cmp.env, "environment JSON (reference environment by default)");
    compare->add_option("--fair-share-ref", cmp.fair_share_ref, "global id of the fair-share VM type");
    compare->add_option("--ga-runs", cmp.ga_runs, "independent GA runs, best kept")->capture_default_str();
    compare->add_flag("--allow-infeasible", cmp.allow_infeasible, "exit 0 even when an algorithm fails");
    add_common(compare);

    CLI11_PARSE(app, argc, argv);
    exp.seed_given = seed_option->count() > 0;

    try {
        if (*generate) return run_generate(gen, common);
        if (*env) return run_env(en, common);
        if (*sched) return run_schedule(sch, common);
        if (*simulate_cmd) return run_simulate(sim, common);
        if (*experiment) return run_experiment(exp, common);
        if (*compare) return run_compare(cmp, common);
    } catch (CLI::Error const & e) {
        return app.exit(e);
    } catch (infeasible_error const & e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return exit_infeasible;
    } catch (std::exception const & e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_failure;
    }
    return 0;
}
