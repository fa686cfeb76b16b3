#pragma once

#include <stdexcept>
#include <string>

namespace streamsched {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Workflow violates a structural or numeric invariant.
class invalid_workflow : public error {
public:
    using error::error;
};

// Document does not match the expected JSON schema; `path` names the field.
class schema_error : public error {
public:
    schema_error(std::string path, std::string const & message)
        : error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    std::string const & path() const noexcept { return path_; }

private:
    std::string path_;
};

class invalid_environment : public error {
public:
    using error::error;
};

// A VM cannot process even one minimum stream unit for a service.
class below_unit_error : public error {
public:
    using error::error;
};

// No schedule can satisfy the constraints (e.g. no feasible offer in a mandatory cloud).
class infeasible_error : public error {
public:
    using error::error;
};

class cost_model_error : public error {
public:
    using error::error;
};

// Schedule rejected before execution because it violates a constraint.
class invalid_schedule : public error {
public:
    using error::error;
};

} // namespace streamsched
