#include "adaptest/arms.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace adaptest {

namespace {

using nlohmann::json;

const char* distribution_name(distribution_kind d) {
    return d == distribution_kind::gaussian ? "gaussian" : "bernoulli";
}

distribution_kind distribution_from_name(const std::string& name) {
    if (name == "gaussian") return distribution_kind::gaussian;
    if (name == "bernoulli") return distribution_kind::bernoulli;
    throw std::invalid_argument("unknown distribution '" + name +
                                "' (expected gaussian or bernoulli)");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* key : known)
            if (item.key() == key) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument("unknown key '" + item.key() + "' in " + where);
    }
}

}  // namespace

void problem_instance::validate() const {
    if (arms.size() < 2)
        throw std::invalid_argument("instance needs at least two arms (control plus one challenger)");
    int controls = 0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const arm_spec& a = arms[i];
        if (a.id != static_cast<int>(i))
            throw std::invalid_argument("arm ids must be 0..k in order; position " +
                                        std::to_string(i) + " has id " + std::to_string(a.id));
        if (a.is_control) ++controls;
        if (!(a.sigma > 0.0))
            throw std::invalid_argument("arm " + std::to_string(a.id) + ": sigma must be positive");
        if (a.distribution == distribution_kind::bernoulli) {
            if (a.mean < 0.0 || a.mean > 1.0)
                throw std::invalid_argument("arm " + std::to_string(a.id) +
                                            ": bernoulli mean must lie in [0,1]");
            if (a.sigma != 0.5)
                throw std::invalid_argument("arm " + std::to_string(a.id) +
                                            ": bernoulli arms use sigma = 0.5");
        }
    }
    if (controls != 1)
        throw std::invalid_argument("instance must mark exactly one control arm, found " +
                                    std::to_string(controls));
    if (!arms[0].is_control)
        throw std::invalid_argument("the control arm must have id 0");
}

problem_instance parse_instance_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("instance is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("instance file must contain a JSON object");
    reject_unknown_keys(j, {"label", "arms"}, "instance");
    if (!j.contains("arms") || !j["arms"].is_array())
        throw std::invalid_argument("instance requires an 'arms' array");

    problem_instance instance;
    instance.label = j.value("label", std::string{});
    int next_id = 0;
    for (const auto& entry : j["arms"]) {
        if (!entry.is_object())
            throw std::invalid_argument("each arm must be a JSON object");
        reject_unknown_keys(entry, {"mean", "sigma", "distribution", "is_control"},
                            "arm " + std::to_string(next_id));
        arm_spec a;
        a.id = next_id++;
        if (!entry.contains("mean") || !entry["mean"].is_number())
            throw std::invalid_argument("arm " + std::to_string(a.id) + ": numeric 'mean' is required");
        a.mean = entry["mean"].get<double>();
        a.distribution = distribution_from_name(entry.value("distribution", std::string("gaussian")));
        if (a.distribution == distribution_kind::bernoulli) {
            a.sigma = 0.5;
            if (entry.contains("sigma")) a.sigma = entry["sigma"].get<double>();
        } else {
            if (!entry.contains("sigma") || !entry["sigma"].is_number())
                throw std::invalid_argument("arm " + std::to_string(a.id) +
                                            ": gaussian arms require a numeric 'sigma'");
            a.sigma = entry["sigma"].get<double>();
        }
        a.is_control = entry.value("is_control", false);
        instance.arms.push_back(a);
    }
    instance.validate();
    return instance;
}

problem_instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str());
}

std::string instance_to_json(const problem_instance& instance) {
    json arms = json::array();
    for (const arm_spec& a : instance.arms) {
        json entry;
        entry["mean"] = a.mean;
        entry["sigma"] = a.sigma;
        entry["distribution"] = distribution_name(a.distribution);
        entry["is_control"] = a.is_control;
        arms.push_back(entry);
    }
    json j;
    if (!instance.label.empty()) j["label"] = instance.label;
    j["arms"] = arms;
    return j.dump(2);
}

void record_sample(arm_stats& stats, double value) {
    stats.n += 1;
    stats.sum += value;
}

double empirical_mean(const arm_stats& stats) {
    if (stats.n == 0)
        throw std::invalid_argument("no samples recorded for arm " + std::to_string(stats.arm_id));
    return stats.sum / static_cast<double>(stats.n);
}

std::vector<arm_stats> replay(const std::vector<sample_record>& log, int num_arms) {
    if (num_arms < 1)
        throw std::invalid_argument("replay needs a positive arm count");
    std::vector<arm_stats> stats(static_cast<std::size_t>(num_arms));
    for (int a = 0; a < num_arms; ++a) stats[a].arm_id = a;
    for (const sample_record& rec : log) {
        if (rec.arm_id < 0 || rec.arm_id >= num_arms)
            throw std::invalid_argument("log references arm " + std::to_string(rec.arm_id) +
                                        " outside 0.." + std::to_string(num_arms - 1));
        record_sample(stats[rec.arm_id], rec.value);
    }
    return stats;
}

}  // namespace adaptest
