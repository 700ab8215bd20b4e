// boolrc: simulator of Boolean evolutionary learning in a noisy analogue
// recurrent network. Subcommands: generate, run, analyze, report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "boolrc/config.hpp"
#include "boolrc/experiments.hpp"
#include "boolrc/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace boolrc;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    std::string states_cache;
    int threads = 1;
};

config::RunConfig resolve_config(const CommonOpts& opts) {
    json j = opts.config_path.empty() ? config::to_json(config::defaults())
                                      : [&] {
                                            std::ifstream in(opts.config_path);
                                            if (!in) throw ConfigError("config not found: " + opts.config_path);
                                            json parsed;
                                            in >> parsed;
                                            return parsed;
                                        }();
    for (const auto& o : opts.overrides) config::apply_override(j, o);
    auto cfg = config::from_json(j);
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    return cfg;
}

void write_json(const std::string& path, const json& j) {
    io::write_text_file(path, j.dump(2) + "\n");
}

json manifest_for(const config::RunConfig& cfg, const std::string& kind) {
    json m;
    m["kind"] = kind;
    m["config"] = config::to_json(cfg);
    m["config_hash"] = config::config_hash(cfg);
    m["system_params_hash"] = config::system_params_hash(cfg);
    m["master_seed"] = cfg.seed;
    return m;
}

experiments::System build_system_cached(const config::RunConfig& cfg,
                                        const std::string& cache_path) {
    const auto params_hash = config::system_params_hash(cfg);
    if (!cache_path.empty() && fs::exists(cache_path)) {
        auto cache = io::load_states_cache(cache_path, cfg.seed, params_hash);
        // Rebuild the cheap parts; reuse the simulated state matrices.
        experiments::System sys;
        sys.params = cfg.reservoir;
        sys.params.seed = derive_seed(cfg.seed, "reservoir");
        const auto raw = task::generate_mackey_glass(cfg.task.mg, cfg.task.length,
                                                     derive_seed(cfg.seed, "task"));
        sys.dataset = task::make_dataset(task::normalize(raw), cfg.task.washout,
                                         cfg.task.train_len, cfg.task.test_len);
        sys.illumination = reservoir::make_illumination(sys.params);
        sys.theta = reservoir::build_theta(sys.params);
        sys.coupling = reservoir::build_coupling(sys.params, cfg.kernel_radius);
        sys.injection = reservoir::build_injection(sys.params);
        sys.train_states = std::move(cache.train);
        sys.test_states = std::move(cache.test);
        sys.train_target = sys.dataset.train_targets();
        if (cfg.task.test_len > 0) sys.test_target = sys.dataset.test_targets();
        return sys;
    }
    auto sys = experiments::build_system(cfg);
    if (!cache_path.empty()) {
        io::StatesCache cache;
        cache.train = sys.train_states;
        cache.test = sys.test_states;
        cache.seed = cfg.seed;
        cache.params_hash = params_hash;
        io::save_states_cache(cache_path, cache);
    }
    return sys;
}

std::string csv_line(std::initializer_list<double> vals) {
    std::string line;
    for (double v : vals) {
        if (!line.empty()) line += ',';
        line += io::format_double(v);
    }
    return line;
}

void write_weights_csv(const std::string& path,
                       const std::vector<learner::BooleanWeights>& weights) {
    std::ofstream out(path);
    out << "minimizer,bits\n";
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out << i << ',';
        for (auto b : weights[i]) out << (b ? '1' : '0');
        out << '\n';
    }
}

int cmd_generate(const CommonOpts& opts) {
    const auto cfg = resolve_config(opts);
    fs::create_directories(opts.out_dir);
    const auto raw = task::generate_mackey_glass(cfg.task.mg, cfg.task.length,
                                                 derive_seed(cfg.seed, "task"));
    const auto ds = task::make_dataset(task::normalize(raw), cfg.task.washout,
                                       cfg.task.train_len, cfg.task.test_len);
    io::write_dataset_csv(opts.out_dir + "/dataset.csv", ds);
    json sidecar;
    sidecar["task"] = config::to_json(cfg)["task"];
    sidecar["seed"] = cfg.seed;
    sidecar["config_hash"] = config::config_hash(cfg);
    write_json(opts.out_dir + "/dataset.json", sidecar);
    std::cout << "wrote " << opts.out_dir << "/dataset.csv (" << ds.u.size()
              << " samples)\n";
    return 0;
}

void summarize_ensemble(const experiments::EnsembleReport& report, json& summary,
                        const std::string& out_dir) {
    summary["exp_fit"] = {{"eps0", report.exp_fit.eps0},
                          {"rate", report.exp_fit.rate},
                          {"r_squared", report.exp_fit.r_squared}};
    summary["minima"] = {{"mean", report.minima.mean},
                         {"std", report.minima.std},
                         {"pair_count", report.minima.distances.size()},
                         {"mean_abs_bit_correlation", report.minima.mean_abs_bit_correlation}};
    summary["mean_k_min"] = report.mean_k_min;
    summary["eps_train"] = report.eps_train;
    summary["eps_test"] = report.eps_test;

    std::ofstream avg(out_dir + "/plots/eps_avg.csv");
    avg << "k,eps_avg\n";
    for (std::size_t k = 0; k < report.avg_accepted_eps.size(); ++k)
        avg << k << ',' << io::format_double(report.avg_accepted_eps[k]) << '\n';
    std::ofstream dist(out_dir + "/plots/minima_distances.csv");
    dist << "pair,hamming\n";
    for (std::size_t i = 0; i < report.minima.distances.size(); ++i)
        dist << i << ',' << report.minima.distances[i] << '\n';
}

void summarize_hamming(const experiments::MasterSlaveReport& report, json& summary,
                       const std::string& out_dir,
                       const std::vector<double>* predicted = nullptr) {
    summary["rate_fit"] = {{"c", report.rate_fit.params.c},
                           {"c_tilde", report.rate_fit.params.c_tilde},
                           {"r_squared", report.rate_fit.r_squared}};
    summary["eps_correlations"] = report.eps_correlations;

    std::ofstream h(out_dir + "/plots/hamming.csv");
    h << "k,h_avg,h_pred\n";
    const auto pred = predicted
                          ? *predicted
                          : analytics::predict_hamming(report.rate_fit.params,
                                                       report.avg_h.front(),
                                                       static_cast<int>(report.avg_h.size()))
                                .h;
    for (std::size_t k = 0; k < report.avg_h.size(); ++k) {
        h << k << ',' << io::format_double(report.avg_h[k]) << ','
          << io::format_double(k < pred.size() ? pred[k] : 0.0) << '\n';
    }
}

int cmd_run(const std::string& kind_in, const CommonOpts& opts) {
    std::string kind = kind_in;
    auto cfg = resolve_config(opts);
    // Figure presets from the hardware experiment's ensemble sizes.
    if (kind == "fig2-greedy") {
        kind = "ensemble";
        cfg.experiment.minimizers = 20;
        cfg.learner.mode = learner::Mode::greedy;
    } else if (kind == "fig2-markovian") {
        kind = "ensemble";
        cfg.experiment.minimizers = 14;
        cfg.learner.mode = learner::Mode::markovian;
    }
    const bool known = kind == "ensemble" || kind == "master-slave" ||
                       kind == "separated-pair" || kind == "inverted-paths";
    if (!known) throw ConfigError("unknown experiment kind: " + kind);

    fs::create_directories(opts.out_dir + "/traces");
    fs::create_directories(opts.out_dir + "/plots");
    const auto system = build_system_cached(cfg, opts.states_cache);

    json summary;
    summary["kind"] = kind;
    std::vector<learner::BooleanWeights> finals;

    if (kind == "ensemble") {
        const auto report = experiments::run_ensemble(system, cfg, 0, opts.threads);
        for (std::size_t i = 0; i < report.traces.size(); ++i) {
            io::write_trace_csv(opts.out_dir + "/traces/trace_" + std::to_string(i) + ".csv",
                                report.traces[i]);
            finals.push_back(report.traces[i].final_weights);
        }
        summarize_ensemble(report, summary, opts.out_dir);
    } else if (kind == "master-slave") {
        const int slaves = std::max(1, cfg.experiment.minimizers - 1);
        const auto report = experiments::run_master_slave(system, cfg, slaves);
        io::write_trace_csv(opts.out_dir + "/traces/trace_master.csv", report.traces[0]);
        for (std::size_t s = 1; s < report.traces.size(); ++s)
            io::write_trace_csv(
                opts.out_dir + "/traces/trace_slave_" + std::to_string(s) + ".csv",
                report.traces[s]);
        summarize_hamming(report, summary, opts.out_dir);
    } else if (kind == "separated-pair") {
        const int h1 = cfg.experiment.initial_hamming > 0
                           ? cfg.experiment.initial_hamming
                           : system.params.node_count() / 4;
        const auto report = experiments::run_separated_pair(system, cfg, h1);
        io::write_trace_csv(opts.out_dir + "/traces/trace_master.csv", report.ms.traces[0]);
        io::write_trace_csv(opts.out_dir + "/traces/trace_slave_1.csv", report.ms.traces[1]);
        summary["h1"] = report.h1;
        summarize_hamming(report.ms, summary, opts.out_dir, &report.predicted_h);
    } else {  // inverted-paths
        const auto report = experiments::run_inverted_paths(system, cfg);
        summary["m"] = report.flip_order.size();
        summary["endpoints_exact"] = report.endpoints_exact;
        summary["noise_scale"] = report.noise_scale;
        summary["classification"] = {
            {"below_noise", report.classification.below_noise},
            {"potentially_independent", report.classification.potentially_independent},
            {"dependent", report.classification.dependent}};
        std::ofstream g(opts.out_dir + "/plots/gradients.csv");
        g << "k,l,grad_a,grad_b,category\n";
        for (std::size_t k = 0; k < report.gradients.size(); ++k) {
            const char* cat =
                report.classification.categories[k] == analytics::Category::below_noise
                    ? "below_noise"
                    : report.classification.categories[k] ==
                              analytics::Category::potentially_independent
                          ? "potentially_independent"
                          : "dependent";
            g << (k + 1) << ',' << report.flip_order[k] << ','
              << io::format_double(report.gradients[k].grad_a) << ','
              << io::format_double(report.gradients[k].grad_b) << ',' << cat << '\n';
        }
        std::ofstream p(opts.out_dir + "/plots/paths.csv");
        p << "k," << "eps_a,eps_b\n";
        for (std::size_t k = 0; k < report.eps_path_a.size(); ++k)
            p << k << ',' << io::format_double(report.eps_path_a[k]) << ','
              << io::format_double(report.eps_path_b[k]) << '\n';
    }

    if (!finals.empty())
        write_weights_csv(opts.out_dir + "/final_weights.csv", finals);
    write_json(opts.out_dir + "/manifest.json", manifest_for(cfg, kind));
    write_json(opts.out_dir + "/summary.json", summary);
    std::cout << "experiment '" << kind << "' written to " << opts.out_dir << '\n';
    return 0;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

int cmd_analyze(const std::string& run_dir) {
    const auto manifest_path = run_dir + "/manifest.json";
    if (!fs::exists(manifest_path))
        throw ConfigError("run dir incomplete: missing " + manifest_path);
    json manifest;
    {
        std::ifstream in(manifest_path);
        in >> manifest;
    }
    const auto cfg = config::from_json(manifest.at("config"));
    if (config::config_hash(cfg) != manifest.at("config_hash").get<std::uint64_t>())
        throw ConfigError("run dir manifest hash mismatch; refusing to analyze");
    const std::string kind = manifest.at("kind");
    const int n = cfg.reservoir.grid_side * cfg.reservoir.grid_side;

    fs::create_directories(run_dir + "/plots");
    json analysis;
    analysis["kind"] = kind;

    if (kind == "ensemble") {
        std::vector<std::vector<double>> accepted;
        for (int i = 0;; ++i) {
            const auto path = run_dir + "/traces/trace_" + std::to_string(i) + ".csv";
            if (!fs::exists(path)) break;
            const auto rows = read_csv(path);
            std::vector<double> eps;
            double current = 0.0;
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const double e = std::stod(rows[r][2]);
                const bool rew = rows[r][3] == "1";
                if (r == 1 || rew) current = e;
                eps.push_back(current);
            }
            accepted.push_back(std::move(eps));
        }
        if (accepted.empty()) throw ConfigError("run dir has no traces");
        std::vector<double> avg(accepted.front().size(), 0.0);
        for (const auto& t : accepted)
            for (std::size_t k = 0; k < avg.size(); ++k)
                avg[k] += t[k] / static_cast<double>(accepted.size());
        const auto fit = analytics::fit_exponential(avg);
        analysis["exp_fit"] = {{"eps0", fit.eps0}, {"rate", fit.rate}, {"r_squared", fit.r_squared}};

        if (fs::exists(run_dir + "/final_weights.csv")) {
            const auto rows = read_csv(run_dir + "/final_weights.csv");
            std::vector<learner::BooleanWeights> minima;
            for (std::size_t r = 1; r < rows.size(); ++r) {
                learner::BooleanWeights w;
                for (char c : rows[r][1]) w.push_back(c == '1');
                minima.push_back(std::move(w));
            }
            if (minima.size() >= 2) {
                const auto stats = analytics::pairwise_minima_stats(minima);
                analysis["minima"] = {{"mean", stats.mean},
                                      {"std", stats.std},
                                      {"pair_count", stats.distances.size()},
                                      {"mean_abs_bit_correlation", stats.mean_abs_bit_correlation}};
                std::ofstream dist(run_dir + "/plots/minima_distances.csv");
                dist << "pair,hamming\n";
                for (std::size_t i = 0; i < stats.distances.size(); ++i)
                    dist << i << ',' << stats.distances[i] << '\n';
            }
        }
    } else if (kind == "master-slave" || kind == "separated-pair") {
        std::vector<std::vector<double>> h_traces;
        for (int s = 1;; ++s) {
            const auto path = run_dir + "/traces/trace_slave_" + std::to_string(s) + ".csv";
            if (!fs::exists(path)) break;
            const auto rows = read_csv(path);
            std::vector<double> h;
            for (std::size_t r = 1; r < rows.size(); ++r)
                if (rows[r].size() >= 7 && !rows[r][6].empty())
                    h.push_back(std::stod(rows[r][6]));
            if (!h.empty()) h_traces.push_back(std::move(h));
        }
        if (h_traces.empty()) throw ConfigError("run dir has no slave Hamming traces");
        const auto mode = cfg.learner.mode == learner::Mode::greedy
                              ? analytics::ExplorationMode::greedy
                              : analytics::ExplorationMode::markovian;
        const auto fit = analytics::fit_rate_model(h_traces, mode, n);
        analysis["rate_fit"] = {{"c", fit.params.c},
                                {"c_tilde", fit.params.c_tilde},
                                {"r_squared", fit.r_squared}};
        std::vector<double> avg(h_traces.front().size(), 0.0);
        for (const auto& t : h_traces)
            for (std::size_t k = 0; k < avg.size(); ++k)
                avg[k] += t[k] / static_cast<double>(h_traces.size());
        const auto pred =
            analytics::predict_hamming(fit.params, avg.front(), static_cast<int>(avg.size()));
        std::ofstream h(run_dir + "/plots/hamming_analyzed.csv");
        h << "k,h_avg,h_pred\n";
        for (std::size_t k = 0; k < avg.size(); ++k)
            h << k << ',' << io::format_double(avg[k]) << ','
              << io::format_double(pred.h[k]) << '\n';
    } else if (kind == "inverted-paths") {
        const auto rows = read_csv(run_dir + "/plots/gradients.csv");
        int below = 0, pot = 0, dep = 0;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r][4] == "below_noise") ++below;
            else if (rows[r][4] == "potentially_independent") ++pot;
            else ++dep;
        }
        analysis["classification"] = {{"below_noise", below},
                                      {"potentially_independent", pot},
                                      {"dependent", dep}};
    }

    write_json(run_dir + "/analysis.json", analysis);
    std::cout << "analysis written to " << run_dir << "/analysis.json\n";
    return 0;
}

int cmd_report(const std::string& run_dir) {
    for (const char* name : {"summary.json", "analysis.json"}) {
        const auto path = run_dir + "/" + name;
        if (fs::exists(path)) {
            std::ifstream in(path);
            json j;
            in >> j;
            std::cout << "== " << name << " ==\n" << j.dump(2) << '\n';
        }
    }
    if (!fs::exists(run_dir + "/summary.json") && !fs::exists(run_dir + "/analysis.json"))
        throw ConfigError("run dir has no summary or analysis: " + run_dir);
    return 0;
}

void add_common(CLI::App* app, CommonOpts& opts) {
    app->add_option("--config", opts.config_path, "JSON configuration file");
    app->add_option("--out", opts.out_dir, "output directory");
    app->add_option("--seed", opts.seed, "master seed (overrides config)");
    app->add_option("--override", opts.overrides, "config override key=value")
        ->take_all();
    app->add_option("--states-cache", opts.states_cache,
                    "state-matrix cache file (reused when the params hash matches)");
    app->add_option("--threads", opts.threads, "parallel minimizers where applicable");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boolean evolutionary learning in a noisy analogue recurrent network"};
    app.require_subcommand(1);

    CommonOpts gen_opts, run_opts;
    std::string kind, analyze_dir, report_dir;

    auto* gen = app.add_subcommand("generate", "generate the prediction dataset");
    add_common(gen, gen_opts);

    auto* run = app.add_subcommand("run", "run an experiment");
    run->add_option("kind", kind,
                    "ensemble | master-slave | separated-pair | inverted-paths | "
                    "fig2-greedy | fig2-markovian")
        ->required();
    add_common(run, run_opts);

    auto* analyze = app.add_subcommand("analyze", "analyze a completed run directory");
    analyze->add_option("run_dir", analyze_dir, "experiment output directory")->required();

    auto* report = app.add_subcommand("report", "print a run's summaries");
    report->add_option("run_dir", report_dir, "experiment output directory")->required();

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_generate(gen_opts);
        if (run->parsed()) return cmd_run(kind, run_opts);
        if (analyze->parsed()) return cmd_analyze(analyze_dir);
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
