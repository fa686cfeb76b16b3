#pragma once

#include <streamsched/ga.hpp>
#include <streamsched/parameter_ranges.hpp>
#include <streamsched/schedule.hpp>
#include <streamsched/simulator.hpp>
#include <streamsched/workflow_generator.hpp>

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace streamsched {

// One column of the scenario matrix: parameter P<scenario> is set to `level`,
// every other parameter stays medium.
struct scenario_spec {
    int scenario = 1;
    range_level level = range_level::medium;
    std::vector<workflow_family> families;
    std::vector<size_class> sizes;
    std::vector<std::uint64_t> seeds;
    ga_config ga;
    std::size_t ga_runs = 10;
    simulation_config simulation;
    std::optional<vm_id> fair_share_reference; // default_fair_share_reference when unset
    std::size_t threads = 1;

    parameter variable() const;
    parameter_levels levels() const;

    // Throws std::invalid_argument on a scenario outside 1..7, empty lists or
    // ga_runs == 0.
    void validate() const;
};

// All four families, small and medium sizes, seeds 1..5; `full` adds the large
// size and seeds 1..10.
scenario_spec default_scenario(int scenario, range_level level, bool full = false);

// Overrides fields of `spec` from a JSON object with any of: families, sizes,
// seeds, ga_runs, threads, fair_share_reference, simulation {duration,
// warmup}, ga {population_size, generation_limit, elitism_count, p_crossover,
// p_mutation, p_replacement, horizon}. Throws schema_error on unknown fields.
void apply_config(scenario_spec & spec, nlohmann::json const & config);

enum class algorithm { greedy, ga, fair_share, lower_bound };
std::string_view to_string(algorithm a) noexcept;
std::optional<algorithm> parse_algorithm(std::string_view text) noexcept;

struct result_row {
    int scenario = 0;
    range_level level = range_level::medium;
    workflow_family family = workflow_family::montage;
    std::size_t size = 0;
    algorithm algo = algorithm::greedy;
    std::uint64_t seed = 0;
    double provisioning = 0.0;        // cents
    double transfer = 0.0;            // cents
    double total = 0.0;               // cents
    double relative_difference = 0.0; // percent above the lower bound
    double time_ms = 0.0;
    double latency = 0.0; // simulated mean end-to-end seconds
    std::string error;    // non-empty marks an infeasible or rejected cell
};

// Everything produced for one (family, size, seed) cell.
struct cell_result {
    std::vector<result_row> rows; // greedy, ga, fair_share, lower_bound
    stream_workflow workflow;
    std::optional<schedule> greedy;
    std::optional<schedule> ga;         // best of the GA runs
    std::optional<schedule> fair_share;
    std::vector<double> ga_totals;      // one per GA run
    std::vector<double> ga_times_ms;    // one per GA run
    std::vector<std::vector<generation_stats>> ga_logs;
};

// Instance construction shared by the harness and the tests.
stream_workflow cell_workflow(scenario_spec const & spec, workflow_family family, std::size_t size,
                              std::uint64_t seed);
multicloud_env cell_environment(scenario_spec const & spec, std::uint64_t seed);

cell_result run_cell(scenario_spec const & spec, workflow_family family, std::size_t size, std::uint64_t seed);

// Rows of every cell in canonical (family, size, seed, algorithm) order.
std::vector<result_row> run_scenario(scenario_spec const & spec);

bool has_errors(std::span<result_row const> rows);

// Result CSV. Without timing the output is a pure function of the spec.
void write_results(std::ostream & out, std::span<result_row const> rows, bool include_timing = false);
std::vector<result_row> read_results(std::istream & in);

struct summary_row {
    int scenario = 0;
    range_level level = range_level::medium;
    workflow_family family = workflow_family::montage;
    std::size_t size = 0;
    algorithm algo = algorithm::greedy;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double median_total = 0.0;
    double mean_total = 0.0;
    double median_relative_difference = 0.0;
    double mean_relative_difference = 0.0;
    double mean_latency = 0.0;
    double min_time_ms = 0.0;
    double max_time_ms = 0.0;
};

// Groups by (scenario, range, family, size, algorithm) in first-seen order.
std::vector<summary_row> summarize(std::span<result_row const> rows);
void write_summary(std::ostream & out, std::span<summary_row const> rows, bool include_timing = false);

double median(std::vector<double> values);

} // namespace streamsched
