#include <streamsched/parameter_ranges.hpp>

namespace streamsched {

namespace {

value_range pick(range_level level, value_range low, value_range medium, value_range high) noexcept {
    switch (level) {
        case range_level::low: return low;
        case range_level::medium: return medium;
        case range_level::high: return high;
    }
    return medium;
}

} // namespace

std::string_view to_string(range_level level) noexcept {
    switch (level) {
        case range_level::low: return "low";
        case range_level::medium: return "medium";
        case range_level::high: return "high";
    }
    return "medium";
}

std::optional<range_level> parse_range_level(std::string_view text) noexcept {
    if (text == "low") return range_level::low;
    if (text == "medium" || text == "med") return range_level::medium;
    if (text == "high") return range_level::high;
    return std::nullopt;
}

value_range source_rate_range(range_level level) noexcept {
    return pick(level, {0.0013, 4.2}, {4.3, 8.4}, {8.5, 12.5});
}

value_range processing_requirement_range(range_level level) noexcept {
    return pick(level, {20.0, 1347.0}, {1348.0, 2674.0}, {2675.0, 4000.0});
}

value_range output_proportion_range(range_level level) noexcept {
    return pick(level, {0.01, 0.50}, {0.51, 1.0}, {1.01, 1.5});
}

value_range movable_percent_range(range_level level) noexcept {
    return pick(level, {0.0, 34.0}, {35.0, 68.0}, {69.0, 100.0});
}

value_range unit_rate_range(range_level level) noexcept {
    return pick(level, {0.2, 1.0}, {1.1, 2.0}, {2.1, 2.9});
}

value_range transfer_cost_range(range_level level) noexcept {
    return pick(level, {0.005, 0.012}, {0.013, 0.019}, {0.020, 0.025});
}

link_ranges ingress_range(range_level level) noexcept {
    return {pick(level, {302.0, 614.0}, {615.0, 926.0}, {927.0, 1238.0}),
            pick(level, {0.0004, 0.00063}, {0.00064, 0.00086}, {0.00087, 0.0011})};
}

link_ranges egress_range(range_level level) noexcept {
    return {pick(level, {24.0, 121.0}, {122.0, 218.0}, {219.0, 314.0}),
            pick(level, {0.009, 0.020}, {0.021, 0.031}, {0.032, 0.040})};
}

network_ranges network_ranges::from_levels(range_level network, range_level cost) noexcept {
    return {ingress_range(network), egress_range(network), transfer_cost_range(cost)};
}

range_level & parameter_levels::operator[](parameter p) noexcept {
    switch (p) {
        case parameter::source_rate: return source_rate;
        case parameter::processing_requirement: return processing_requirement;
        case parameter::output_proportion: return output_proportion;
        case parameter::movable_share: return movable_share;
        case parameter::network: return network;
        case parameter::transfer_cost: return transfer_cost;
        case parameter::unit_rate: return unit_rate;
    }
    return source_rate;
}

range_level parameter_levels::operator[](parameter p) const noexcept {
    return const_cast<parameter_levels &>(*this)[p];
}

} // namespace streamsched
