#pragma once

#include <json.hpp>

#include <string>

namespace qhom {
namespace jobs {

struct JobResult {
    int exit_code = 0;  // 0 success, 1 domain error, 2 I/O or parse error
    nlohmann::json report;
};

// Dispatches one workbench command. Arguments come as a JSON object with
// file-path keys ("base", "rep", "twist", "fiber", "perturbation") and
// command-specific flags ("all", "name"). Never throws: failures are encoded
// in the exit code with a structured diagnostic in the report.
JobResult run_job(const std::string& command, const nlohmann::json& args);

// Total-dimension cap for complexes built from user input, from the
// environment (TWISTED_CHAINS_MAX_DIM, default 512).
int max_total_dim();

}  // namespace jobs
}  // namespace qhom
