#include "adaptest/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace adaptest {

namespace {

using nlohmann::json;

std::string join_issues(const std::vector<std::string>& issues) {
    std::string msg = "configuration invalid:";
    for (const std::string& issue : issues) msg += "\n  - " + issue;
    return msg;
}

struct issue_list {
    std::vector<std::string> issues;

    void add(std::string issue) { issues.push_back(std::move(issue)); }

    void throw_if_any() const {
        if (!issues.empty()) throw config_error(issues);
    }
};

void check_keys(const json& obj, std::initializer_list<const char*> known,
                const std::string& scope, issue_list& issues) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : known)
            if (item.key() == key) { ok = true; break; }
        if (!ok) issues.add("unknown key '" + scope + item.key() + "'");
    }
}

bool read_number(const json& obj, const std::string& scope, const char* key, double& out,
                 issue_list& issues) {
    if (!obj.contains(key)) return false;
    if (!obj[key].is_number()) {
        issues.add(scope + key + ": expected a number");
        return false;
    }
    out = obj[key].get<double>();
    return true;
}

bool read_integer(const json& obj, const std::string& scope, const char* key, std::int64_t& out,
                  issue_list& issues) {
    if (!obj.contains(key)) return false;
    if (!obj[key].is_number_integer()) {
        issues.add(scope + key + ": expected an integer");
        return false;
    }
    out = obj[key].get<std::int64_t>();
    return true;
}

bool read_bool(const json& obj, const std::string& scope, const char* key, bool& out,
               issue_list& issues) {
    if (!obj.contains(key)) return false;
    if (!obj[key].is_boolean()) {
        issues.add(scope + key + ": expected true or false");
        return false;
    }
    out = obj[key].get<bool>();
    return true;
}

engine_config parse_engine_json(const json& j, const std::string& scope, issue_list& issues) {
    engine_config config;
    if (!j.is_object()) {
        issues.add(scope.empty() ? "engine block must be an object"
                                 : scope + ": must be an object");
        return config;
    }
    check_keys(j,
               {"policy", "bound", "alpha", "delta", "n_init", "epsilon_edge", "max_steps",
                "seed", "stop_on_discovery", "couple_levels", "alpha_investing"},
               scope, issues);

    if (j.contains("policy")) {
        if (!j["policy"].is_string())
            issues.add(scope + "policy: expected a string");
        else {
            try {
                config.policy = policy_from_name(j["policy"].get<std::string>());
            } catch (const std::invalid_argument& e) {
                issues.add(scope + "policy: " + e.what());
            }
        }
    }
    if (j.contains("bound")) {
        if (!j["bound"].is_string())
            issues.add(scope + "bound: expected a string");
        else {
            try {
                config.bound = bound_from_name(j["bound"].get<std::string>());
            } catch (const std::invalid_argument& e) {
                issues.add(scope + "bound: " + e.what());
            }
        }
    }

    if (read_number(j, scope, "alpha", config.alpha, issues) &&
        !(config.alpha > 0.0 && config.alpha < 1.0))
        issues.add(scope + "alpha: must lie in (0,1)");
    if (read_number(j, scope, "delta", config.delta, issues) &&
        !(config.delta > 0.0 && config.delta < 1.0))
        issues.add(scope + "delta: must lie in (0,1)");

    std::int64_t n_init = config.n_init;
    if (read_integer(j, scope, "n_init", n_init, issues) && n_init < 2)
        issues.add(scope + "n_init: must be at least 2");
    config.n_init = static_cast<int>(n_init);

    if (read_number(j, scope, "epsilon_edge", config.epsilon_edge, issues) &&
        config.epsilon_edge < 0.0)
        issues.add(scope + "epsilon_edge: must be non-negative");
    if (read_integer(j, scope, "max_steps", config.max_steps, issues) && config.max_steps < 1)
        issues.add(scope + "max_steps: must be positive");

    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0)
            issues.add(scope + "seed: expected a non-negative integer");
        else
            config.seed = j["seed"].get<std::uint64_t>();
    }
    read_bool(j, scope, "stop_on_discovery", config.stop_on_discovery, issues);
    read_bool(j, scope, "couple_levels", config.couple_levels, issues);

    // Investing defaults follow alpha unless the file pins them explicitly.
    config.investing = alpha_investing_config::defaults_for(config.alpha);
    if (j.contains("alpha_investing")) {
        const json& inv = j["alpha_investing"];
        const std::string inv_scope = scope + "alpha_investing.";
        if (!inv.is_object()) {
            issues.add(scope + "alpha_investing: must be an object");
        } else {
            check_keys(inv, {"initial", "spend_fraction", "payout"}, inv_scope, issues);
            if (read_number(inv, inv_scope, "initial", config.investing.initial, issues) &&
                config.investing.initial < 0.0)
                issues.add(inv_scope + "initial: must be non-negative");
            if (read_number(inv, inv_scope, "spend_fraction", config.investing.spend_fraction,
                            issues) &&
                !(config.investing.spend_fraction > 0.0 && config.investing.spend_fraction < 1.0))
                issues.add(inv_scope + "spend_fraction: must lie in (0,1)");
            if (read_number(inv, inv_scope, "payout", config.investing.payout, issues) &&
                !(config.investing.payout > 0.0 && config.investing.payout <= config.alpha))
                issues.add(inv_scope + "payout: must lie in (0, alpha]");
        }
    }
    return config;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error({std::string("not valid JSON: ") + e.what()});
    }
}

}  // namespace

config_error::config_error(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

const char* policy_name(policy_kind kind) {
    switch (kind) {
        case policy_kind::uniform: return "uniform";
        case policy_kind::action_elimination: return "action_elimination";
        case policy_kind::ucb: return "ucb";
        case policy_kind::lucb: return "lucb";
    }
    return "unknown";
}

policy_kind policy_from_name(const std::string& name) {
    if (name == "uniform") return policy_kind::uniform;
    if (name == "action_elimination") return policy_kind::action_elimination;
    if (name == "ucb") return policy_kind::ucb;
    if (name == "lucb") return policy_kind::lucb;
    throw std::invalid_argument("unknown policy '" + name +
                                "' (expected uniform, action_elimination, ucb or lucb)");
}

const char* bound_name(bound_kind kind) {
    return kind == bound_kind::fixed_sample ? "fixed_sample" : "adaptive_lil";
}

bound_kind bound_from_name(const std::string& name) {
    if (name == "fixed_sample") return bound_kind::fixed_sample;
    if (name == "adaptive_lil") return bound_kind::adaptive_lil;
    throw std::invalid_argument("unknown bound '" + name +
                                "' (expected fixed_sample or adaptive_lil)");
}

engine_config parse_engine_config(const std::string& json_text) {
    issue_list issues;
    const engine_config config = parse_engine_json(parse_text(json_text), "", issues);
    issues.throw_if_any();
    return config;
}

run_spec parse_run_spec(const std::string& json_text) {
    const json j = parse_text(json_text);
    issue_list issues;
    run_spec spec;
    if (!j.is_object()) {
        issues.add("run spec must be a JSON object");
        issues.throw_if_any();
    }
    check_keys(j, {"instance", "reps", "trajectories", "policies", "engine"}, "", issues);

    if (!j.contains("instance") || !j["instance"].is_string())
        issues.add("instance: a path string is required");
    else
        spec.instance_path = j["instance"].get<std::string>();

    if (read_integer(j, "", "reps", spec.reps, issues) && spec.reps < 1)
        issues.add("reps: must be positive");
    if (read_integer(j, "", "trajectories", spec.trajectories, issues) && spec.trajectories < 0)
        issues.add("trajectories: must be non-negative");

    spec.policies = {policy_kind::uniform, policy_kind::action_elimination, policy_kind::ucb,
                     policy_kind::lucb};
    if (j.contains("policies")) {
        if (!j["policies"].is_array() || j["policies"].empty()) {
            issues.add("policies: expected a non-empty array of policy names");
        } else {
            spec.policies.clear();
            for (const auto& entry : j["policies"]) {
                if (!entry.is_string()) {
                    issues.add("policies: entries must be strings");
                    continue;
                }
                try {
                    spec.policies.push_back(policy_from_name(entry.get<std::string>()));
                } catch (const std::invalid_argument& e) {
                    issues.add(std::string("policies: ") + e.what());
                }
            }
        }
    }

    if (j.contains("engine"))
        spec.engine = parse_engine_json(j["engine"], "engine.", issues);

    issues.throw_if_any();
    return spec;
}

run_spec load_run_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error({"cannot open config file '" + path + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_spec(buf.str());
}

}  // namespace adaptest
