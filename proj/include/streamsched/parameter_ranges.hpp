#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace streamsched {

enum class range_level { low, medium, high };

std::string_view to_string(range_level level) noexcept;

// Accepts "low", "medium"/"med", "high".
std::optional<range_level> parse_range_level(std::string_view text) noexcept;

struct value_range {
    double min = 0.0;
    double max = 0.0;

    bool contains(double v) const noexcept { return v >= min && v <= max; }
};

// Experiment parameters P1..P7. Each table row is the published
// low/medium/high band for that parameter.
enum class parameter {
    source_rate = 1,        // P1, MB/s of external sources
    processing_requirement, // P2, MI/MB
    output_proportion,      // P3, gamma
    movable_share,          // P4, percent of movable services
    network,                // P5, bandwidth and latency
    transfer_cost,          // P6, cents/MB
    unit_rate,              // P7, MB/s of the minimum stream unit
};

value_range source_rate_range(range_level level) noexcept;
value_range processing_requirement_range(range_level level) noexcept;
value_range output_proportion_range(range_level level) noexcept;
value_range movable_percent_range(range_level level) noexcept;
value_range unit_rate_range(range_level level) noexcept;
value_range transfer_cost_range(range_level level) noexcept;

struct link_ranges {
    value_range bandwidth; // MB/s
    value_range latency;   // seconds
};

link_ranges ingress_range(range_level level) noexcept;
link_ranges egress_range(range_level level) noexcept;

// Bands used to sample the G x G network matrices.
struct network_ranges {
    link_ranges ingress;
    link_ranges egress;
    value_range transfer_cost;

    static network_ranges from_levels(range_level network, range_level cost) noexcept;
};

// One level per experiment parameter; medium everywhere by default.
struct parameter_levels {
    range_level source_rate = range_level::medium;
    range_level processing_requirement = range_level::medium;
    range_level output_proportion = range_level::medium;
    range_level movable_share = range_level::medium;
    range_level network = range_level::medium;
    range_level transfer_cost = range_level::medium;
    range_level unit_rate = range_level::medium;

    range_level & operator[](parameter p) noexcept;
    range_level operator[](parameter p) const noexcept;

    network_ranges network_bands() const noexcept {
        return network_ranges::from_levels(network, transfer_cost);
    }
};

} // namespace streamsched
