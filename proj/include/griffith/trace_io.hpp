#pragma once

/// Result persistence: a CSV table per evolution step for plotting, and a
/// lossless JSON variant that reproduces the trace bit-exactly on re-parse.

#include "griffith/evolution.hpp"

#include <string>

namespace griffith {

std::string trace_to_csv(const EvolutionTrace& trace);
std::string trace_to_json(const EvolutionTrace& trace);
EvolutionTrace trace_from_json(const std::string& text, const Mesh& mesh);

std::string audit_to_csv(const AuditReport& report);
std::string convergence_to_csv(const ConvergenceReport& report);

/// Writes base.csv plus the lossless base.json variant.
void write_trace(const EvolutionTrace& trace, const std::string& path_base);
void write_trace(const AuditReport& report, const std::string& path_base);
void write_trace(const ConvergenceReport& report, const std::string& path_base);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace griffith
