#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "adaptest/engine.hpp"

namespace adaptest {

// Configuration problems are reported all at once, so a bad file is fixed in
// one edit instead of one rerun per mistake.
class config_error : public std::runtime_error {
  public:
    explicit config_error(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

  private:
    std::vector<std::string> issues_;
};

struct run_spec {
    engine_config engine;
    std::string instance_path;
    std::int64_t reps = 100;
    std::int64_t trajectories = 1;
    std::vector<policy_kind> policies;  // compared policies; defaults to all four
};

// Canonical names used in config files, CSV output and the CLI.
const char* policy_name(policy_kind kind);
policy_kind policy_from_name(const std::string& name);
const char* bound_name(bound_kind kind);
bound_kind bound_from_name(const std::string& name);

// Parses the engine block alone.  Unknown keys, type mismatches and range
// violations all become config_error issues, each naming the offending key.
engine_config parse_engine_config(const std::string& json_text);

run_spec parse_run_spec(const std::string& json_text);
run_spec load_run_spec(const std::string& path);

}  // namespace adaptest
