#pragma once

#include <stdexcept>
#include <string>

namespace griffith {

struct MeshError : std::runtime_error {
    explicit MeshError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ScenarioError : std::runtime_error {
    int line;
    ScenarioError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace griffith
