#pragma once

#include <streamsched/cloud.hpp>
#include <streamsched/cost_model.hpp>
#include <streamsched/random.hpp>
#include <streamsched/schedule.hpp>
#include <streamsched/workflow.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace streamsched {

struct ga_config {
    std::size_t population_size = 50;
    std::size_t generation_limit = 50;
    std::size_t elitism_count = 1;
    double p_crossover = 0.8;
    double p_mutation = 0.3;
    double p_replacement = 0.2;
    double horizon = default_horizon; // seconds used by the fitness
    std::uint64_t seed = 0;
    transfer_mode mode = transfer_mode::edge_share;

    // Throws std::invalid_argument on population_size < 2, probabilities
    // outside [0, 1] or elitism_count >= population_size.
    void validate() const;
};

// One individual: per service an ordered list of VM global ids, all from one
// cloud. `summary` caches per-chromosome units/price and is kept in sync by
// every operator; `fitness` is the cached total cost in cents.
struct candidate {
    std::vector<std::vector<vm_id>> chromosomes;
    std::vector<provisioned_service> summary;
    double fitness = std::numeric_limits<double>::quiet_NaN();
};

// Precomputed per-(service, cloud) feasibility tables for one problem instance.
// Holds references: workflow and env must outlive the context.
class ga_context {
public:
    ga_context(stream_workflow const & workflow, multicloud_env const & env, double horizon = default_horizon,
               transfer_mode mode = transfer_mode::edge_share);

    workflow_graph const & graph() const noexcept { return graph_; }
    multicloud_env const & env() const noexcept { return *env_; }
    double horizon() const noexcept { return horizon_; }

    std::int64_t units(std::size_t service, vm_id vm) const { return units_[service * offer_count_ + vm]; }

    // Offers of `cloud` reaching the service's unit MIPS, by ascending id.
    std::span<vm_id const> feasible(std::size_t service, cloud_index cloud) const {
        return feasible_[service * env_->cloud_count() + cloud];
    }

    // Cheapest feasible offer (lowest id on price ties).
    std::optional<vm_id> cheapest(std::size_t service, cloud_index cloud) const;

    // Required units of `service` given the parents' cached summaries.
    std::int64_t required_units_for(std::size_t service, std::span<provisioned_service const> summary) const;

    candidate encode(schedule const & plan) const;
    schedule decode(candidate const & c) const;

    // Recomputes the whole summary from the chromosomes, then the fitness.
    void evaluate(candidate & c) const;
    // Recomputes one chromosome's summary entry.
    void refresh(candidate & c, std::size_t service) const;
    double fitness(candidate const & c) const;

private:
    workflow_graph graph_;
    multicloud_env const * env_;
    double horizon_;
    transfer_mode mode_;
    std::size_t offer_count_;
    std::vector<std::int64_t> units_;
    std::vector<std::vector<vm_id>> feasible_;
};

// Per service, parents first: the placement cloud if unmovable, else a
// uniformly drawn cloud (redrawn while it has no feasible offer); uniformly
// drawn feasible offers are appended until the required rate is covered
// (at least one VM). Throws infeasible_error when no cloud works.
candidate random_candidate(ga_context const & ctx, random_stream & rng);

// Index 0 encodes `seed_plan` (the greedy schedule); the rest are random.
// A slot whose random construction keeps failing duplicates the seed and
// increments `fallbacks`.
std::vector<candidate> initial_population(ga_context const & ctx, ga_config const & config,
                                          schedule const & seed_plan, random_stream & rng,
                                          std::size_t * fallbacks = nullptr);

// Fitness-proportional wheel for minimization: weight = max - fitness + eps,
// eps = 1e-9 * max. Degenerates to uniform when all weights vanish.
class roulette_wheel {
public:
    explicit roulette_wheel(std::span<candidate const> population);
    std::size_t spin(random_stream & rng) const;
    double probability(std::size_t index) const;

private:
    std::vector<double> cumulative_;
};

std::pair<std::size_t, std::size_t> select_parents(std::span<candidate const> population, random_stream & rng);

// Swaps the whole chromosomes at service positions [first, last) and repairs
// both children.
std::pair<candidate, candidate> crossover_at(ga_context const & ctx, candidate const & a, candidate const & b,
                                             std::size_t first, std::size_t last);

// With probability p_crossover draws cuts 0 <= i <= j <= S and calls
// crossover_at; otherwise returns copies of the parents.
std::pair<candidate, candidate> crossover(ga_context const & ctx, candidate const & a, candidate const & b,
                                          random_stream & rng, double p_crossover);

// Each chromosome (parents first) is picked with probability p_mutation; a
// random gene is swapped for a uniformly chosen strictly cheaper offer of the
// same cloud that keeps the service's rate requirement. No such offer leaves
// the chromosome unchanged. Children short of their requirement afterwards are
// repaired.
candidate mutate(ga_context const & ctx, candidate c, random_stream & rng, double p_mutation);

struct replacement_stats {
    std::size_t challenged = 0;
    std::size_t attempts = 0;
    std::size_t replaced = 0;
};

// Candidates with fitness above the population mean are challenged with
// probability p_replacement by up to two random candidates; the first
// strictly fitter challenger takes the slot.
replacement_stats replace_weak(ga_context const & ctx, std::vector<candidate> & population, random_stream & rng,
                               double p_replacement);

// Parents first, appends the cheapest feasible offer of the assigned cloud to
// every chromosome that no longer covers its required rate. Chromosomes that
// are empty, on the wrong placement cloud or on a cloud without feasible
// offers are rebuilt from the cheapest feasible offer of the first usable
// cloud. Idempotent on valid candidates.
candidate repair(ga_context const & ctx, candidate c);

struct generation_stats {
    std::size_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
    double worst = 0.0;
};

struct ga_result {
    schedule plan;
    double fitness = 0.0;
    double seed_fitness = 0.0; // fitness of the greedy seed
    std::vector<generation_stats> log;
    std::size_t fallbacks = 0;
};

// Greedy-seeded genetic search minimizing provisioning + transfer cost.
// Throws infeasible_error when the greedy seed cannot be built.
ga_result ga_schedule(stream_workflow const & workflow, multicloud_env const & env, ga_config const & config);

// CSV with header generation,best,mean,worst.
void write_generation_log(std::ostream & out, std::span<generation_stats const> log);

} // namespace streamsched
