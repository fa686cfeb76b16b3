#pragma once

#include <streamsched/parameter_ranges.hpp>
#include <streamsched/workflow.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace streamsched {

enum class workflow_family { montage, inspiral, epigenomics, cybershake };

std::string_view to_string(workflow_family family) noexcept;
std::optional<workflow_family> parse_workflow_family(std::string_view text) noexcept;

enum class size_class { small, medium, large };

// Node counts per family: {small, medium, large}.
std::array<std::size_t, 3> supported_sizes(workflow_family family) noexcept;
std::size_t node_count(workflow_family family, size_class size) noexcept;

// Bare DAG shape of a family, before rates are attached.
struct workflow_topology {
    std::vector<std::string> ids;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Throws std::invalid_argument for sizes outside supported_sizes(family).
workflow_topology build_topology(workflow_family family, std::size_t size);

// Synthetic stream workflow of `size` nodes. Rates come from the bands
// selected in `levels` (P1 external rate, P2 mi, P3 gamma, P4 movable share,
// P7 unit rate). Only in-degree-0 services get external streams; all edges
// are replica mode. Unmovable services are pinned to a uniformly drawn cloud
// in [0, cloud_count). Deterministic for fixed arguments.
stream_workflow generate_workflow(workflow_family family, std::size_t size, parameter_levels const & levels,
                                  std::uint64_t seed, std::size_t cloud_count = 3);

} // namespace streamsched
