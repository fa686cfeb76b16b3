#include <streamsched/error.hpp>
#include <streamsched/ga.hpp>
#include <streamsched/greedy.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace streamsched {

void ga_config::validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be at least 2");
    if (elitism_count >= population_size) throw std::invalid_argument("elitism_count must be below population_size");
    for (double p : {p_crossover, p_mutation, p_replacement}) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be non-negative");
}

ga_context::ga_context(stream_workflow const & workflow, multicloud_env const & env, double horizon,
                       transfer_mode mode)
    : graph_(workflow), env_(&env), horizon_(horizon), mode_(mode), offer_count_(env.offers().size()) {
    auto const n = graph_.size();
    units_.resize(n * offer_count_);
    feasible_.resize(n * env.cloud_count());
    for (std::size_t s = 0; s < n; ++s) {
        for (auto const & o : env.offers()) {
            auto const u = units_per_vm(graph_.service(s), o, workflow.unit_dp_rate);
            units_[s * offer_count_ + o.global_id] = u;
            if (u >= 1) feasible_[s * env.cloud_count() + o.cloud].push_back(o.global_id);
        }
    }
}

std::optional<vm_id> ga_context::cheapest(std::size_t service, cloud_index cloud) const {
    std::optional<vm_id> best;
    for (auto id : feasible(service, cloud)) {
        if (!best || env_->offer(id).price < env_->offer(*best).price) best = id;
    }
    return best;
}

std::int64_t ga_context::required_units_for(std::size_t service, std::span<provisioned_service const> summary) const {
    auto const & spec = graph_.service(service);
    auto const unit = graph_.workflow().unit_dp_rate;
    if (spec.mu) return required_units(*spec.mu, unit);
    double in = spec.lambda;
    for (auto e : graph_.in_edges(service)) {
        auto const parent = graph_.edge_origin(e);
        in += graph_.service(parent).gamma * (static_cast<double>(summary[parent].units) * unit) * graph_.edge(e).share;
    }
    return required_units(in, unit);
}

candidate ga_context::encode(schedule const & plan) const {
    candidate c;
    c.chromosomes.reserve(plan.services.size());
    for (auto const & alloc : plan.services) c.chromosomes.push_back(alloc.vms);
    c.summary.resize(c.chromosomes.size());
    for (std::size_t s = 0; s < plan.services.size(); ++s) {
        refresh(c, s);
        c.summary[s].cloud = plan.services[s].cloud;
    }
    c.fitness = fitness(c);
    return c;
}

schedule ga_context::decode(candidate const & c) const {
    schedule plan;
    plan.services.reserve(c.chromosomes.size());
    for (std::size_t s = 0; s < c.chromosomes.size(); ++s) {
        auto const cloud = c.chromosomes[s].empty() ? c.summary[s].cloud : env_->offer(c.chromosomes[s].front()).cloud;
        plan.services.push_back({cloud, c.chromosomes[s]});
    }
    return plan;
}

void ga_context::refresh(candidate & c, std::size_t service) const {
    auto & entry = c.summary[service];
    auto const & genes = c.chromosomes[service];
    if (!genes.empty()) entry.cloud = env_->offer(genes.front()).cloud;
    entry.units = 0;
    entry.price_per_second = 0.0;
    for (auto id : genes) {
        entry.units += units(service, id);
        entry.price_per_second += env_->offer(id).price;
    }
}

void ga_context::evaluate(candidate & c) const {
    c.summary.resize(c.chromosomes.size());
    for (std::size_t s = 0; s < c.chromosomes.size(); ++s) refresh(c, s);
    c.fitness = fitness(c);
}

double ga_context::fitness(candidate const & c) const {
    return evaluate_cost(graph_, *env_, c.summary, horizon_, mode_).total();
}

namespace {

void append(ga_context const & ctx, candidate & c, std::size_t service, vm_id id) {
    c.chromosomes[service].push_back(id);
    auto & entry = c.summary[service];
    entry.units += ctx.units(service, id);
    entry.price_per_second += ctx.env().offer(id).price;
}

} // namespace

candidate random_candidate(ga_context const & ctx, random_stream & rng) {
    auto const & graph = ctx.graph();
    auto const clouds = ctx.env().cloud_count();
    candidate c;
    c.chromosomes.resize(graph.size());
    c.summary.resize(graph.size());

    for (auto s : graph.order()) {
        auto const & spec = graph.service(s);
        cloud_index cloud = 0;
        if (spec.placement_cloud) {
            cloud = *spec.placement_cloud;
            if (cloud >= clouds || ctx.feasible(s, cloud).empty()) {
                throw infeasible_error("placement cloud of " + spec.id + " has no feasible offer");
            }
        } else {
            std::vector<cloud_index> open(clouds);
            for (cloud_index k = 0; k < clouds; ++k) open[k] = k;
            for (;;) {
                if (open.empty()) throw infeasible_error("no cloud has a feasible offer for " + spec.id);
                auto const pick = rng.index(open.size());
                cloud = open[pick];
                if (!ctx.feasible(s, cloud).empty()) break;
                open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
            }
        }

        c.summary[s].cloud = cloud;
        auto const options = ctx.feasible(s, cloud);
        auto const req = ctx.required_units_for(s, c.summary);
        do {
            append(ctx, c, s, options[rng.index(options.size())]);
        } while (c.summary[s].units < req);
    }
    c.fitness = ctx.fitness(c);
    return c;
}

std::vector<candidate> initial_population(ga_context const & ctx, ga_config const & config,
                                          schedule const & seed_plan, random_stream & rng,
                                          std::size_t * fallbacks) {
    constexpr int max_attempts = 10;
    std::vector<candidate> population;
    population.reserve(config.population_size);
    population.push_back(ctx.encode(seed_plan));
    while (population.size() < config.population_size) {
        bool built = false;
        for (int attempt = 0; attempt < max_attempts && !built; ++attempt) {
            try {
                population.push_back(random_candidate(ctx, rng));
                built = true;
            } catch (infeasible_error const &) {
            }
        }
        if (!built) {
            population.push_back(population.front());
            if (fallbacks) ++*fallbacks;
        }
    }
    return population;
}

roulette_wheel::roulette_wheel(std::span<candidate const> population) {
    double max_fitness = 0.0;
    for (auto const & c : population) max_fitness = std::max(max_fitness, c.fitness);
    auto const eps = 1e-9 * max_fitness;
    double total = 0.0;
    cumulative_.reserve(population.size());
    for (auto const & c : population) {
        total += max_fitness - c.fitness + eps;
        cumulative_.push_back(total);
    }
    if (!(total > 0.0)) {
        for (std::size_t i = 0; i < cumulative_.size(); ++i) cumulative_[i] = static_cast<double>(i + 1);
    }
}

std::size_t roulette_wheel::spin(random_stream & rng) const {
    auto const x = rng.uniform(0.0, cumulative_.back());
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

double roulette_wheel::probability(std::size_t index) const {
    auto const low = index == 0 ? 0.0 : cumulative_[index - 1];
    return (cumulative_[index] - low) / cumulative_.back();
}

std::pair<std::size_t, std::size_t> select_parents(std::span<candidate const> population, random_stream & rng) {
    roulette_wheel const wheel(population);
    auto const first = wheel.spin(rng);
    return {first, wheel.spin(rng)};
}

candidate repair(ga_context const & ctx, candidate c) {
    auto const & graph = ctx.graph();
    auto const clouds = ctx.env().cloud_count();
    if (c.summary.size() != c.chromosomes.size()) ctx.evaluate(c);

    bool changed = false;
    for (auto s : graph.order()) {
        auto const & spec = graph.service(s);
        auto & genes = c.chromosomes[s];
        auto cloud = c.summary[s].cloud;

        bool usable = !genes.empty() && cloud < clouds && !ctx.feasible(s, cloud).empty() &&
                      (!spec.placement_cloud || *spec.placement_cloud == cloud);
        for (auto id : genes) usable = usable && ctx.env().offer(id).cloud == cloud && ctx.units(s, id) >= 1;
        if (!usable) {
            std::optional<cloud_index> target;
            if (spec.placement_cloud) {
                if (*spec.placement_cloud < clouds && !ctx.feasible(s, *spec.placement_cloud).empty()) {
                    target = *spec.placement_cloud;
                }
            } else {
                for (cloud_index k = 0; k < clouds && !target; ++k) {
                    if (!ctx.feasible(s, k).empty()) target = k;
                }
            }
            if (!target) throw infeasible_error("no feasible cloud for " + spec.id);
            genes.clear();
            c.summary[s] = {*target, 0, 0.0};
            cloud = *target;
            changed = true;
        }

        auto const req = std::max<std::int64_t>(1, ctx.required_units_for(s, c.summary));
        if (c.summary[s].units < req || genes.empty()) {
            auto const fill = *ctx.cheapest(s, cloud);
            while (c.summary[s].units < req || genes.empty()) append(ctx, c, s, fill);
            changed = true;
        }
    }
    if (changed || std::isnan(c.fitness)) c.fitness = ctx.fitness(c);
    return c;
}

std::pair<candidate, candidate> crossover_at(ga_context const & ctx, candidate const & a, candidate const & b,
                                             std::size_t first, std::size_t last) {
    candidate left = a;
    candidate right = b;
    for (auto s = first; s < last && s < left.chromosomes.size(); ++s) {
        std::swap(left.chromosomes[s], right.chromosomes[s]);
        std::swap(left.summary[s], right.summary[s]);
    }
    if (first < last) {
        left.fitness = std::numeric_limits<double>::quiet_NaN();
        right.fitness = std::numeric_limits<double>::quiet_NaN();
    }
    return {repair(ctx, std::move(left)), repair(ctx, std::move(right))};
}

std::pair<candidate, candidate> crossover(ga_context const & ctx, candidate const & a, candidate const & b,
                                          random_stream & rng, double p_crossover) {
    if (!rng.bernoulli(p_crossover)) return {a, b};
    auto const services = a.chromosomes.size();
    auto i = rng.between(0, services);
    auto j = rng.between(0, services);
    if (i > j) std::swap(i, j);
    return crossover_at(ctx, a, b, i, j);
}

candidate mutate(ga_context const & ctx, candidate c, random_stream & rng, double p_mutation) {
    auto const & env = ctx.env();
    bool changed = false;
    for (auto s : ctx.graph().order()) {
        if (!rng.bernoulli(p_mutation)) continue;
        auto & genes = c.chromosomes[s];
        if (genes.empty()) continue;
        auto const position = rng.index(genes.size());
        auto const old = genes[position];
        auto const & old_offer = env.offer(old);
        auto const req = ctx.required_units_for(s, c.summary);
        auto const others = c.summary[s].units - ctx.units(s, old);

        std::vector<vm_id> options;
        for (auto id : ctx.feasible(s, old_offer.cloud)) {
            if (env.offer(id).price < old_offer.price && others + ctx.units(s, id) >= req) options.push_back(id);
        }
        if (options.empty()) continue;
        genes[position] = options[rng.index(options.size())];
        ctx.refresh(c, s);
        changed = true;
    }
    if (!changed) return c;
    // A cheaper offer may carry more units and raise the input of children.
    c.fitness = std::numeric_limits<double>::quiet_NaN();
    return repair(ctx, std::move(c));
}

replacement_stats replace_weak(ga_context const & ctx, std::vector<candidate> & population, random_stream & rng,
                               double p_replacement) {
    replacement_stats stats;
    if (population.empty()) return stats;
    double sum = 0.0;
    for (auto const & c : population) sum += c.fitness;
    auto const mean = sum / static_cast<double>(population.size());
    auto const threshold = mean + 1e-12 * std::abs(mean);

    for (auto & c : population) {
        if (!(c.fitness > threshold)) continue;
        if (!rng.bernoulli(p_replacement)) continue;
        ++stats.challenged;
        for (int attempt = 0; attempt < 2; ++attempt) {
            ++stats.attempts;
            candidate challenger;
            try {
                challenger = random_candidate(ctx, rng);
            } catch (infeasible_error const &) {
                continue;
            }
            if (challenger.fitness < c.fitness) {
                c = std::move(challenger);
                ++stats.replaced;
                break;
            }
        }
    }
    return stats;
}

namespace {

void sort_by_fitness(std::vector<candidate> & population) {
    std::stable_sort(population.begin(), population.end(),
                     [](candidate const & a, candidate const & b) { return a.fitness < b.fitness; });
}

generation_stats describe(std::size_t generation, std::vector<candidate> const & population) {
    generation_stats g{generation, population.front().fitness, 0.0, population.back().fitness};
    for (auto const & c : population) g.mean += c.fitness;
    g.mean /= static_cast<double>(population.size());
    return g;
}

} // namespace

ga_result ga_schedule(stream_workflow const & workflow, multicloud_env const & env, ga_config const & config) {
    config.validate();
    auto const seed_plan = greedy_schedule(workflow, env);
    ga_context const ctx(workflow, env, config.horizon, config.mode);
    random_stream rng(derive_seed(config.seed, 2));

    ga_result result;
    auto population = initial_population(ctx, config, seed_plan, rng, &result.fallbacks);
    result.seed_fitness = population.front().fitness;
    sort_by_fitness(population);
    result.log.push_back(describe(0, population));

    auto const offspring_count = config.population_size - config.elitism_count;
    for (std::size_t generation = 1; generation <= config.generation_limit; ++generation) {
        std::vector<candidate> next(population.begin(),
                                    population.begin() + static_cast<std::ptrdiff_t>(config.elitism_count));

        roulette_wheel const wheel(population);
        std::vector<candidate> offspring;
        offspring.reserve(offspring_count + 1);
        while (offspring.size() < offspring_count) {
            auto const & a = population[wheel.spin(rng)];
            auto const & b = population[wheel.spin(rng)];
            auto children = crossover(ctx, a, b, rng, config.p_crossover);
            offspring.push_back(std::move(children.first));
            if (offspring.size() < offspring_count) offspring.push_back(std::move(children.second));
        }
        for (auto & child : offspring) child = mutate(ctx, std::move(child), rng, config.p_mutation);
        replace_weak(ctx, offspring, rng, config.p_replacement);

        for (auto & child : offspring) next.push_back(std::move(child));
        population = std::move(next);
        sort_by_fitness(population);
        result.log.push_back(describe(generation, population));
    }

    result.plan = ctx.decode(population.front());
    result.fitness = population.front().fitness;
    return result;
}

void write_generation_log(std::ostream & out, std::span<generation_stats const> log) {
    out << "generation,best,mean,worst\n";
    auto const precision = out.precision(17);
    for (auto const & g : log) out << g.generation << ',' << g.best << ',' << g.mean << ',' << g.worst << '\n';
    out.precision(precision);
}

} // namespace streamsched
