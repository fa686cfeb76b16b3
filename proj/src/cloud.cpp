#include <streamsched/cloud.hpp>
#include <streamsched/error.hpp>
#include <streamsched/random.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace streamsched {

namespace {

vm_offer row(char const * type, double mips, double memory_gb, double price) {
    vm_offer o;
    o.type_name = type;
    o.mips = mips;
    o.memory_gb = memory_gb;
    o.price = price;
    return o;
}

void check_band(value_range r, char const * what) {
    if (r.min > r.max || r.min < 0.0) {
        throw std::invalid_argument(std::string("invalid ") + what + " range");
    }
}

} // namespace

multicloud_env::multicloud_env(std::vector<cloud_offers> clouds, network_matrices network)
    : network_(std::move(network)) {
    auto const g = clouds.size();
    if (g == 0) throw invalid_environment("environment needs at least one cloud");
    for (auto const * m : {&network_.latency, &network_.bandwidth, &network_.transfer_cost}) {
        if (m->clouds() != g) throw invalid_environment("network matrices must be " + std::to_string(g) + "x" +
                                                        std::to_string(g));
    }

    cloud_begin_.push_back(0);
    for (cloud_index c = 0; c < g; ++c) {
        if (clouds[c].offers.empty()) {
            throw invalid_environment("cloud " + std::to_string(c) + " (" + clouds[c].name + ") has no VM offers");
        }
        names_.push_back(clouds[c].name);
        for (std::size_t k = 0; k < clouds[c].offers.size(); ++k) {
            auto offer = clouds[c].offers[k];
            if (!(offer.mips > 0.0)) throw invalid_environment("offer " + offer.type_name + " needs mips > 0");
            if (!(offer.price >= 0.0)) throw invalid_environment("offer " + offer.type_name + " needs price >= 0");
            offer.global_id = offers_.size();
            offer.cloud = c;
            offer.local_id = k;
            offers_.push_back(std::move(offer));
        }
        cloud_begin_.push_back(offers_.size());
    }

    for (cloud_index i = 0; i < g; ++i) {
        for (cloud_index j = 0; j < g; ++j) {
            if (!(network_.bandwidth(i, j) > 0.0)) throw invalid_environment("bandwidth must be positive");
            if (!(network_.latency(i, j) >= 0.0)) throw invalid_environment("latency must be non-negative");
            if (!(network_.transfer_cost(i, j) >= 0.0)) throw invalid_environment("transfer cost must be non-negative");
        }
        if (network_.transfer_cost(i, i) != 0.0) throw invalid_environment("intra-cloud transfer cost must be 0");
    }
}

vm_offer const & multicloud_env::offer(vm_id id) const {
    if (id >= offers_.size()) throw invalid_environment("unknown VM id " + std::to_string(id));
    return offers_[id];
}

std::span<vm_offer const> multicloud_env::offers_in(cloud_index c) const {
    if (c >= cloud_count()) throw invalid_environment("unknown cloud " + std::to_string(c));
    return std::span<vm_offer const>(offers_).subspan(cloud_begin_[c], cloud_begin_[c + 1] - cloud_begin_[c]);
}

std::vector<cloud_offers> reference_offers() {
    cloud_offers ec2{"ec2",
                     {
                         row("m4.large", 7000, 8, 0.0054),
                         row("m4.xlarge", 13000, 16, 0.0107),
                         row("m4.2xlarge", 26000, 32, 0.0214),
                         // price cell is blank in the published table; doubled from m4.2xlarge
                         row("m4.4xlarge", 54000, 64, 0.0428),
                         row("m4.10xlarge", 125000, 160, 0.1067),
                         row("m4.16xlarge", 188000, 256, 0.1707),
                         row("c4.large", 8000, 3.75, 0.0054),
                         row("c4.xlarge", 16000, 7.5, 0.0107),
                         row("c4.2xlarge", 31000, 15, 0.0213),
                         row("c4.4xlarge", 62000, 30, 0.0426),
                         row("c4.8xlarge", 132000, 60, 0.0859),
                     }};
    cloud_offers gce{"gce",
                     {
                         row("n1-standard-1", 2750, 3.75, 0.0014),
                         row("n1-standard-2", 5500, 7.5, 0.0027),
                         row("n1-standard-4", 11000, 15, 0.0053),
                         row("n1-standard-8", 22000, 30, 0.0106),
                         row("n1-standard-16", 44000, 60, 0.0212),
                         row("n1-standard-32", 88000, 120, 0.0423),
                         row("n1-standard-64", 176000, 240, 0.0845),
                         row("n1-highcpu-2", 5500, 1.8, 0.002),
                         row("n1-highcpu-4", 11000, 3.6, 0.004),
                         row("n1-highcpu-8", 22000, 7.2, 0.0079),
                         row("n1-highcpu-16", 44000, 14.4, 0.0158),
                         row("n1-highcpu-32", 88000, 28.8, 0.0316),
                         row("n1-highcpu-64", 176000, 57.8, 0.0631),
                     }};
    cloud_offers azure{"azure",
                       {
                           row("D1 v2", 2500, 3.58, 0.0035),
                           row("D2 v2", 5000, 7, 0.0069),
                           row("D3 v2", 10000, 14, 0.0137),
                           row("D4 v2", 20000, 28, 0.0274),
                           row("D5 v2", 40000, 56, 0.052),
                           row("D2 v3", 5000, 8, 0.0054),
                           row("D4 v3", 10000, 16, 0.0107),
                           row("D8 v3", 20000, 32, 0.0214),
                           row("D16 v3", 40000, 64, 0.0427),
                           row("D32 v3", 80000, 128, 0.0854),
                           row("D64 v3", 160000, 256, 0.1707),
                           row("F1", 2500, 2, 0.0027),
                           row("F2", 5000, 4, 0.0054),
                           row("F4", 10000, 8, 0.0107),
                           row("F8", 20000, 16, 0.0213),
                           row("F16", 40000, 32, 0.0426),
                       }};
    return {std::move(ec2), std::move(gce), std::move(azure)};
}

multicloud_env build_reference_environment() {
    auto const ranges = network_ranges::from_levels(range_level::medium, range_level::medium);
    auto mid = [](value_range r) { return (r.min + r.max) / 2.0; };
    network_matrices net{cloud_matrix(3, mid(ranges.egress.latency)), cloud_matrix(3, mid(ranges.egress.bandwidth)),
                         cloud_matrix(3, mid(ranges.transfer_cost))};
    for (cloud_index c = 0; c < 3; ++c) {
        net.latency(c, c) = mid(ranges.ingress.latency);
        net.bandwidth(c, c) = mid(ranges.ingress.bandwidth);
        net.transfer_cost(c, c) = 0.0;
    }
    return multicloud_env(reference_offers(), std::move(net));
}

multicloud_env build_reference_environment(network_ranges const & ranges, std::uint64_t seed) {
    return multicloud_env(reference_offers(), sample_network(ranges, 3, seed));
}

network_matrices sample_network(network_ranges const & ranges, std::size_t cloud_count, std::uint64_t seed) {
    if (cloud_count == 0) throw std::invalid_argument("cloud_count must be positive");
    check_band(ranges.ingress.bandwidth, "ingress bandwidth");
    check_band(ranges.ingress.latency, "ingress latency");
    check_band(ranges.egress.bandwidth, "egress bandwidth");
    check_band(ranges.egress.latency, "egress latency");
    check_band(ranges.transfer_cost, "transfer cost");

    random_stream rng(derive_seed(seed, 1));
    network_matrices net{cloud_matrix(cloud_count, 0.0), cloud_matrix(cloud_count, 0.0),
                         cloud_matrix(cloud_count, 0.0)};
    for (cloud_index i = 0; i < cloud_count; ++i) {
        for (cloud_index j = 0; j < cloud_count; ++j) {
            auto const & link = i == j ? ranges.ingress : ranges.egress;
            net.bandwidth(i, j) = rng.uniform(link.bandwidth.min, link.bandwidth.max);
            net.latency(i, j) = rng.uniform(link.latency.min, link.latency.max);
            net.transfer_cost(i, j) = i == j ? 0.0 : rng.uniform(ranges.transfer_cost.min, ranges.transfer_cost.max);
        }
    }
    return net;
}

std::vector<vm_mapping_row> global_vm_mapping(multicloud_env const & env) {
    std::vector<vm_mapping_row> rows;
    rows.reserve(env.offers().size());
    for (auto const & o : env.offers()) rows.push_back({o.global_id, o.local_id, o.cloud, o.mips});
    return rows;
}

nlohmann::json to_json(multicloud_env const & env) {
    using nlohmann::json;
    json clouds = json::array();
    for (cloud_index c = 0; c < env.cloud_count(); ++c) {
        json offers = json::array();
        for (auto const & o : env.offers_in(c)) {
            offers.push_back({{"type", o.type_name}, {"mips", o.mips}, {"price", o.price}, {"memory_gb", o.memory_gb}});
        }
        clouds.push_back({{"name", env.cloud_name(c)}, {"offers", offers}});
    }
    auto matrix = [&](cloud_matrix const & m) {
        json rows = json::array();
        for (cloud_index i = 0; i < m.clouds(); ++i) {
            json r = json::array();
            for (cloud_index j = 0; j < m.clouds(); ++j) r.push_back(m(i, j));
            rows.push_back(std::move(r));
        }
        return rows;
    };
    return {{"clouds", clouds},
            {"latency", matrix(env.network().latency)},
            {"bandwidth", matrix(env.network().bandwidth)},
            {"transfer_cost", matrix(env.network().transfer_cost)}};
}

multicloud_env load_environment(nlohmann::json const & document) {
    using nlohmann::json;
    if (!document.is_object()) throw schema_error("", "environment document must be a JSON object");
    for (auto const & [key, value] : document.items()) {
        if (key != "clouds" && key != "latency" && key != "bandwidth" && key != "transfer_cost") {
            throw schema_error(key, "unknown field");
        }
    }
    auto field = [&](char const * key) -> json const & {
        auto it = document.find(key);
        if (it == document.end()) throw schema_error(key, "missing required field");
        return *it;
    };

    auto const & clouds_node = field("clouds");
    if (!clouds_node.is_array()) throw schema_error("clouds", "expected an array");
    std::vector<cloud_offers> clouds;
    for (std::size_t c = 0; c < clouds_node.size(); ++c) {
        auto const path = "clouds[" + std::to_string(c) + "]";
        auto const & node = clouds_node[c];
        if (!node.is_object() || !node.contains("offers") || !node["offers"].is_array()) {
            throw schema_error(path, "expected {name, offers: [...]}");
        }
        cloud_offers cloud;
        cloud.name = node.value("name", "cloud" + std::to_string(c));
        for (std::size_t k = 0; k < node["offers"].size(); ++k) {
            auto const & o = node["offers"][k];
            auto const opath = path + ".offers[" + std::to_string(k) + "]";
            if (!o.is_object() || !o.contains("mips") || !o.contains("price") || !o["mips"].is_number() ||
                !o["price"].is_number()) {
                throw schema_error(opath, "expected {type, mips, price}");
            }
            vm_offer offer;
            offer.type_name = o.value("type", "vm" + std::to_string(k));
            offer.mips = o["mips"].get<double>();
            offer.price = o["price"].get<double>();
            offer.memory_gb = o.value("memory_gb", 0.0);
            cloud.offers.push_back(std::move(offer));
        }
        clouds.push_back(std::move(cloud));
    }

    auto matrix = [&](char const * key) {
        auto const & node = field(key);
        auto const g = clouds.size();
        if (!node.is_array() || node.size() != g) throw schema_error(key, "expected a square matrix");
        cloud_matrix m(g, 0.0);
        for (cloud_index i = 0; i < g; ++i) {
            if (!node[i].is_array() || node[i].size() != g) throw schema_error(key, "expected a square matrix");
            for (cloud_index j = 0; j < g; ++j) {
                if (!node[i][j].is_number()) throw schema_error(key, "expected numbers");
                m(i, j) = node[i][j].get<double>();
            }
        }
        return m;
    };
    network_matrices net{matrix("latency"), matrix("bandwidth"), matrix("transfer_cost")};
    return multicloud_env(std::move(clouds), std::move(net));
}

multicloud_env load_environment_file(std::string const & path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open environment file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_environment(nlohmann::json::parse(buffer.str()));
    } catch (nlohmann::json::parse_error const & e) {
        throw schema_error("", std::string("malformed JSON: ") + e.what());
    }
}

} // namespace streamsched
