#include <streamsched/random.hpp>
#include <streamsched/workflow_generator.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace streamsched {

namespace {

class topology_builder {
public:
    std::size_t add(char const * role) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s_%03zu", role, counters_[role]++);
        topology_.ids.emplace_back(buf);
        return topology_.ids.size() - 1;
    }

    void link(std::size_t org, std::size_t dest) { topology_.edges.emplace_back(org, dest); }

    workflow_topology take() { return std::move(topology_); }

private:
    workflow_topology topology_;
    std::unordered_map<std::string, std::size_t> counters_;
};

// Splits `total` into `parts` near-equal positive pieces, larger ones first.
std::vector<std::size_t> spread(std::size_t total, std::size_t parts) {
    std::vector<std::size_t> out(parts, total / parts);
    for (std::size_t i = 0; i < total % parts; ++i) ++out[i];
    return out;
}

// Projections feed overlap fits, which aggregate into one background model;
// corrected images then fan in to a final mosaic chain.
workflow_topology montage(std::size_t n) {
    auto const projections = std::max<std::size_t>(2, (n - 4) / 4);
    auto const fits = n - 6 - 2 * projections;
    topology_builder b;
    std::vector<std::size_t> project(projections), background(projections);
    for (auto & p : project) p = b.add("mProjectPP");
    std::vector<std::size_t> diff(fits);
    for (auto & d : diff) d = b.add("mDiffFit");
    auto const concat = b.add("mConcatFit");
    auto const model = b.add("mBgModel");
    for (auto & g : background) g = b.add("mBackground");
    auto const table = b.add("mImgtbl");
    auto const add = b.add("mAdd");
    auto const shrink = b.add("mShrink");
    auto const jpeg = b.add("mJPEG");

    for (std::size_t k = 0; k < fits; ++k) {
        auto const a = k % projections;
        auto other = (k + 1 + k / projections) % projections;
        if (other == a) other = (a + 1) % projections;
        b.link(project[a], diff[k]);
        b.link(project[other], diff[k]);
        b.link(diff[k], concat);
    }
    b.link(concat, model);
    for (std::size_t j = 0; j < projections; ++j) {
        b.link(model, background[j]);
        b.link(project[j], background[j]);
        b.link(background[j], table);
    }
    b.link(table, add);
    b.link(add, shrink);
    b.link(shrink, jpeg);
    return b.take();
}

// Groups of parallel template/inspiral pipelines, each closed by a
// coincidence step, a second pipeline stage and a second coincidence step;
// groups merge at the end.
workflow_topology inspiral(std::size_t n) {
    auto const groups = std::max<std::size_t>(2, n / 25);
    auto const tail = (n % 2 == 1) ? std::size_t{1} : std::size_t{2};
    auto const slots = spread((n - tail - 2 * groups) / 2, 2 * groups);

    topology_builder b;
    std::vector<std::size_t> closers;
    for (std::size_t g = 0; g < groups; ++g) {
        auto const first = slots[2 * g];
        auto const second = slots[2 * g + 1];
        std::vector<std::size_t> stage1;
        for (std::size_t i = 0; i < first; ++i) {
            auto const bank = b.add("TmpltBank");
            auto const insp = b.add("Inspiral");
            b.link(bank, insp);
            stage1.push_back(insp);
        }
        auto const thinca = b.add("Thinca");
        for (auto s : stage1) b.link(s, thinca);
        std::vector<std::size_t> stage2;
        for (std::size_t i = 0; i < second; ++i) {
            auto const trig = b.add("TrigBank");
            auto const insp = b.add("Inspiral");
            b.link(thinca, trig);
            b.link(trig, insp);
            stage2.push_back(insp);
        }
        auto const close = b.add("Thinca");
        for (auto s : stage2) b.link(s, close);
        closers.push_back(close);
    }
    auto const merge = b.add("Merge");
    for (auto c : closers) b.link(c, merge);
    if (tail == 2) b.link(merge, b.add("Output"));
    return b.take();
}

// Lanes split their input into parallel four-step chains that merge per
// lane; lane merges feed a global index and pileup step.
workflow_topology epigenomics(std::size_t n) {
    auto const lanes = n <= 30 ? std::size_t{1} : (n <= 60 ? std::size_t{2} : std::size_t{4});
    static constexpr char const * chain_roles[] = {"filterContams", "sol2sanger", "fastq2bfq", "map"};
    topology_builder b;
    std::vector<std::size_t> merges;
    for (auto lane_nodes : spread(n - 2 - 2 * lanes, lanes)) {
        auto const split = b.add("fastQSplit");
        std::vector<std::size_t> ends;
        auto const chains = (lane_nodes + 3) / 4;
        for (auto length : spread(lane_nodes, chains)) {
            auto prev = split;
            for (std::size_t step = 0; step < length; ++step) {
                auto const node = b.add(chain_roles[step]);
                b.link(prev, node);
                prev = node;
            }
            ends.push_back(prev);
        }
        auto const merge = b.add("mapMerge");
        for (auto e : ends) b.link(e, merge);
        merges.push_back(merge);
    }
    auto const index = b.add("maqIndex");
    for (auto m : merges) b.link(m, index);
    b.link(index, b.add("pileup"));
    return b.take();
}

// Strain-tensor extraction fans out to seismogram synthesis; synthesis
// results fan in twice (seismograms and peak values).
workflow_topology cybershake(std::size_t n) {
    auto sites = n <= 60 ? std::size_t{2} : std::size_t{4};
    if ((n - sites - 2) % 2 == 1) ++sites;
    auto const synth_count = (n - sites - 2) / 2;

    topology_builder b;
    std::vector<std::size_t> extract(sites);
    for (auto & e : extract) e = b.add("ExtractSGT");
    std::vector<std::size_t> synth(synth_count), peak(synth_count);
    for (std::size_t j = 0; j < synth_count; ++j) {
        synth[j] = b.add("SeismogramSynthesis");
        peak[j] = b.add("PeakValCalc");
        b.link(extract[j % sites], synth[j]);
        b.link(synth[j], peak[j]);
    }
    auto const zip_seis = b.add("ZipSeis");
    auto const zip_psa = b.add("ZipPSA");
    for (std::size_t j = 0; j < synth_count; ++j) {
        b.link(synth[j], zip_seis);
        b.link(peak[j], zip_psa);
    }
    return b.take();
}

} // namespace

std::string_view to_string(workflow_family family) noexcept {
    switch (family) {
        case workflow_family::montage: return "montage";
        case workflow_family::inspiral: return "inspiral";
        case workflow_family::epigenomics: return "epigenomics";
        case workflow_family::cybershake: return "cybershake";
    }
    return "montage";
}

std::optional<workflow_family> parse_workflow_family(std::string_view text) noexcept {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto f : {workflow_family::montage, workflow_family::inspiral, workflow_family::epigenomics,
                   workflow_family::cybershake}) {
        if (lower == to_string(f)) return f;
    }
    return std::nullopt;
}

std::array<std::size_t, 3> supported_sizes(workflow_family family) noexcept {
    switch (family) {
        case workflow_family::montage: return {25, 50, 100};
        case workflow_family::inspiral: return {30, 50, 100};
        case workflow_family::epigenomics: return {24, 46, 100};
        case workflow_family::cybershake: return {30, 50, 100};
    }
    return {0, 0, 0};
}

std::size_t node_count(workflow_family family, size_class size) noexcept {
    return supported_sizes(family)[static_cast<std::size_t>(size)];
}

workflow_topology build_topology(workflow_family family, std::size_t size) {
    auto const sizes = supported_sizes(family);
    if (std::find(sizes.begin(), sizes.end(), size) == sizes.end()) {
        throw std::invalid_argument("unsupported size " + std::to_string(size) + " for " +
                                    std::string(to_string(family)));
    }
    switch (family) {
        case workflow_family::montage: return montage(size);
        case workflow_family::inspiral: return inspiral(size);
        case workflow_family::epigenomics: return epigenomics(size);
        case workflow_family::cybershake: return cybershake(size);
    }
    return {};
}

stream_workflow generate_workflow(workflow_family family, std::size_t size, parameter_levels const & levels,
                                  std::uint64_t seed, std::size_t cloud_count) {
    if (cloud_count == 0) throw std::invalid_argument("cloud_count must be positive");
    auto const topology = build_topology(family, size);
    random_stream rng(derive_seed(seed, 0));

    stream_workflow workflow;
    auto const unit = unit_rate_range(levels.unit_rate);
    workflow.unit_dp_rate = rng.uniform(unit.min, unit.max);

    std::vector<bool> has_parent(size, false);
    for (auto [org, dest] : topology.edges) has_parent[dest] = true;

    auto const mi = processing_requirement_range(levels.processing_requirement);
    auto const gamma = output_proportion_range(levels.output_proportion);
    auto const lambda = source_rate_range(levels.source_rate);
    workflow.services.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        service_spec s;
        s.id = topology.ids[i];
        s.mi = rng.uniform(mi.min, mi.max);
        s.gamma = rng.uniform(gamma.min, gamma.max);
        s.lambda = has_parent[i] ? 0.0 : rng.uniform(lambda.min, lambda.max);
        workflow.services.push_back(std::move(s));
    }

    auto const percent = movable_percent_range(levels.movable_share);
    auto const movable_count =
        std::min(size, static_cast<std::size_t>(std::lround(rng.uniform(percent.min, percent.max) / 100.0 * size)));
    std::vector<std::size_t> shuffled(size);
    std::iota(shuffled.begin(), shuffled.end(), 0);
    std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
    for (std::size_t k = movable_count; k < size; ++k) {
        workflow.services[shuffled[k]].placement_cloud = rng.index(cloud_count);
    }

    workflow.edges.reserve(topology.edges.size());
    for (auto [org, dest] : topology.edges) {
        workflow.edges.push_back({topology.ids[org], topology.ids[dest], 1.0});
    }
    return workflow;
}

} // namespace streamsched
