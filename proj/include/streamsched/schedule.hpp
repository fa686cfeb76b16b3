#pragma once

#include <streamsched/cloud.hpp>
#include <streamsched/workflow.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace streamsched {

// VMs provisioned for one service; repetition allowed.
struct service_allocation {
    cloud_index cloud = 0;
    std::vector<vm_id> vms;

    bool operator==(service_allocation const &) const = default;
};

// Allocation per service, aligned with stream_workflow::services.
struct schedule {
    std::vector<service_allocation> services;

    bool operator==(schedule const &) const = default;
};

// {"services": [{"id", "cloud", "vms": [global ids]}]}
nlohmann::json to_json(schedule const & plan, stream_workflow const & workflow);
// Entries are matched to services by id; every service must appear once.
schedule load_schedule(nlohmann::json const & document, stream_workflow const & workflow);
schedule load_schedule_file(std::string const & path, stream_workflow const & workflow);

} // namespace streamsched
