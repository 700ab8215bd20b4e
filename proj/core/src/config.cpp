#include "boolrc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace boolrc::config {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& section,
                const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError("config: section '" + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key))
            throw ConfigError("config: unknown key '" + section + "." + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

RunConfig defaults() { return RunConfig{}; }

RunConfig from_json(const nlohmann::json& j) {
    check_keys(j, "", {"seed", "task", "reservoir", "kernel_radius", "learner",
                       "noise", "experiment"});
    RunConfig cfg;
    read(j, "seed", cfg.seed);
    read(j, "kernel_radius", cfg.kernel_radius);

    if (j.contains("task")) {
        const auto& t = j.at("task");
        check_keys(t, "task",
                   {"feedback_strength", "decay", "exponent", "delay", "dt",
                    "subsample", "x0", "history_perturbation", "length", "washout",
                    "train_len", "test_len"});
        read(t, "feedback_strength", cfg.task.mg.feedback_strength);
        read(t, "decay", cfg.task.mg.decay);
        read(t, "exponent", cfg.task.mg.exponent);
        read(t, "delay", cfg.task.mg.delay);
        read(t, "dt", cfg.task.mg.dt);
        read(t, "subsample", cfg.task.mg.subsample);
        read(t, "x0", cfg.task.mg.x0);
        read(t, "history_perturbation", cfg.task.mg.history_perturbation);
        read(t, "length", cfg.task.length);
        read(t, "washout", cfg.task.washout);
        read(t, "train_len", cfg.task.train_len);
        read(t, "test_len", cfg.task.test_len);
    }

    if (j.contains("reservoir")) {
        const auto& r = j.at("reservoir");
        check_keys(r, "reservoir",
                   {"grid_side", "alpha", "beta", "gamma", "theta0", "delta_theta",
                    "theta_jitter_std", "beam_waist", "injection_density"});
        read(r, "grid_side", cfg.reservoir.grid_side);
        read(r, "alpha", cfg.reservoir.alpha);
        read(r, "beta", cfg.reservoir.beta);
        read(r, "gamma", cfg.reservoir.gamma);
        read(r, "theta0", cfg.reservoir.theta0);
        read(r, "delta_theta", cfg.reservoir.delta_theta);
        read(r, "theta_jitter_std", cfg.reservoir.theta_jitter_std);
        read(r, "beam_waist", cfg.reservoir.beam_waist);
        read(r, "injection_density", cfg.reservoir.injection_density);
    }

    if (j.contains("learner")) {
        const auto& l = j.at("learner");
        check_keys(l, "learner", {"epochs", "mode", "compare"});
        read(l, "epochs", cfg.learner.epochs);
        if (l.contains("mode")) {
            const auto mode = l.at("mode").get<std::string>();
            if (mode == "greedy")
                cfg.learner.mode = learner::Mode::greedy;
            else if (mode == "markovian")
                cfg.learner.mode = learner::Mode::markovian;
            else
                throw ConfigError("config: learner.mode must be 'greedy' or 'markovian'");
        }
        if (l.contains("compare")) {
            const auto cmp = l.at("compare").get<std::string>();
            if (cmp == "stored")
                cfg.learner.compare = learner::DeltaEpsCompare::stored;
            else if (cmp == "remeasure")
                cfg.learner.compare = learner::DeltaEpsCompare::remeasure;
            else
                throw ConfigError("config: learner.compare must be 'stored' or 'remeasure'");
        }
    }

    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        check_keys(n, "noise", {"sigma_out"});
        read(n, "sigma_out", cfg.noise.sigma_out);
        if (cfg.noise.sigma_out < 0.0)
            throw ConfigError("config: noise.sigma_out must be >= 0");
    }

    if (j.contains("experiment")) {
        const auto& e = j.at("experiment");
        check_keys(e, "experiment",
                   {"minimizers", "shared_initial_weights", "initial_hamming",
                    "repeats", "probe_reps"});
        read(e, "minimizers", cfg.experiment.minimizers);
        read(e, "shared_initial_weights", cfg.experiment.shared_initial_weights);
        read(e, "initial_hamming", cfg.experiment.initial_hamming);
        read(e, "repeats", cfg.experiment.repeats);
        read(e, "probe_reps", cfg.experiment.probe_reps);
        if (cfg.experiment.minimizers < 1)
            throw ConfigError("config: experiment.minimizers must be >= 1");
    }
    return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["kernel_radius"] = cfg.kernel_radius;
    j["task"] = {{"feedback_strength", cfg.task.mg.feedback_strength},
                 {"decay", cfg.task.mg.decay},
                 {"exponent", cfg.task.mg.exponent},
                 {"delay", cfg.task.mg.delay},
                 {"dt", cfg.task.mg.dt},
                 {"subsample", cfg.task.mg.subsample},
                 {"x0", cfg.task.mg.x0},
                 {"history_perturbation", cfg.task.mg.history_perturbation},
                 {"length", cfg.task.length},
                 {"washout", cfg.task.washout},
                 {"train_len", cfg.task.train_len},
                 {"test_len", cfg.task.test_len}};
    j["reservoir"] = {{"grid_side", cfg.reservoir.grid_side},
                      {"alpha", cfg.reservoir.alpha},
                      {"beta", cfg.reservoir.beta},
                      {"gamma", cfg.reservoir.gamma},
                      {"theta0", cfg.reservoir.theta0},
                      {"delta_theta", cfg.reservoir.delta_theta},
                      {"theta_jitter_std", cfg.reservoir.theta_jitter_std},
                      {"beam_waist", cfg.reservoir.beam_waist},
                      {"injection_density", cfg.reservoir.injection_density}};
    j["learner"] = {
        {"epochs", cfg.learner.epochs},
        {"mode", cfg.learner.mode == learner::Mode::greedy ? "greedy" : "markovian"},
        {"compare",
         cfg.learner.compare == learner::DeltaEpsCompare::stored ? "stored" : "remeasure"}};
    j["noise"] = {{"sigma_out", cfg.noise.sigma_out}};
    j["experiment"] = {{"minimizers", cfg.experiment.minimizers},
                       {"shared_initial_weights", cfg.experiment.shared_initial_weights},
                       {"initial_hamming", cfg.experiment.initial_hamming},
                       {"repeats", cfg.experiment.repeats},
                       {"probe_reps", cfg.experiment.probe_reps}};
    return j;
}

RunConfig load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

std::uint64_t config_hash(const RunConfig& cfg) {
    return fnv1a(to_json(cfg).dump());
}

std::uint64_t system_params_hash(const RunConfig& cfg) {
    const auto full = to_json(cfg);
    json sub;
    sub["task"] = full.at("task");
    sub["reservoir"] = full.at("reservoir");
    sub["kernel_radius"] = full.at("kernel_radius");
    return fnv1a(sub.dump());
}

void apply_override(nlohmann::json& j, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value: " + key_value);
    std::string path = key_value.substr(0, eq);
    const std::string value = key_value.substr(eq + 1);

    json* node = &j;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot - pos);
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            break;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

}  // namespace boolrc::config
