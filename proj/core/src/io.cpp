#include "boolrc/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace boolrc::io {

namespace {

constexpr char kCacheMagic[8] = {'B', 'R', 'C', 'S', 'T', 'A', 'T', '1'};

void write_matrix(std::ofstream& out, const reservoir::StateMatrix& m) {
    const std::int64_t rows = m.rows(), cols = m.cols();
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    out.write(reinterpret_cast<const char*>(m.raw().data()),
              static_cast<std::streamsize>(m.raw().size() * sizeof(double)));
}

reservoir::StateMatrix read_matrix(std::ifstream& in) {
    std::int64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    if (!in || rows < 0 || cols < 0) throw GenerationError("states cache: truncated matrix header");
    reservoir::StateMatrix m(static_cast<int>(rows), static_cast<int>(cols));
    in.read(reinterpret_cast<char*>(m.raw_mutable().data()),
            static_cast<std::streamsize>(m.raw().size() * sizeof(double)));
    if (!in) throw GenerationError("states cache: truncated matrix data");
    return m;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(const std::string& path, const learner::LearningTrace& trace) {
    std::ofstream out(path);
    if (!out) throw GenerationError("cannot write trace: " + path);
    out << "k,l,eps,r,eps_min,k_min,hamming_to_ref\n";
    for (const auto& e : trace.epochs) {
        out << e.k << ',' << e.l << ',' << format_double(e.eps) << ','
            << (e.r ? 1 : 0) << ',' << format_double(e.eps_min) << ',' << e.k_min
            << ',';
        if (e.hamming_to_ref >= 0) out << e.hamming_to_ref;
        out << '\n';
    }
}

void write_dataset_csv(const std::string& path, const task::Dataset& dataset) {
    std::ofstream out(path);
    if (!out) throw GenerationError("cannot write dataset: " + path);
    out << "n,u,target\n";
    for (std::size_t n = 0; n < dataset.u.size(); ++n) {
        out << n << ',' << format_double(dataset.u[n]) << ',';
        if (n + 1 < dataset.u.size()) out << format_double(dataset.u[n + 1]);
        out << '\n';
    }
}

void save_states_cache(const std::string& path, const StatesCache& cache) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GenerationError("cannot write states cache: " + path);
    out.write(kCacheMagic, sizeof(kCacheMagic));
    out.write(reinterpret_cast<const char*>(&cache.seed), sizeof(cache.seed));
    out.write(reinterpret_cast<const char*>(&cache.params_hash), sizeof(cache.params_hash));
    write_matrix(out, cache.train);
    write_matrix(out, cache.test);
}

StatesCache load_states_cache(const std::string& path, std::uint64_t expected_seed,
                              std::uint64_t expected_params_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("states cache not found: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
        throw ConfigError("states cache: bad magic in " + path);

    StatesCache cache;
    in.read(reinterpret_cast<char*>(&cache.seed), sizeof(cache.seed));
    in.read(reinterpret_cast<char*>(&cache.params_hash), sizeof(cache.params_hash));
    if (cache.seed != expected_seed || cache.params_hash != expected_params_hash) {
        throw ConfigError("states cache mismatch in " + path + ": cache (seed=" +
                          std::to_string(cache.seed) + ", params_hash=" +
                          std::to_string(cache.params_hash) + ") vs config (seed=" +
                          std::to_string(expected_seed) + ", params_hash=" +
                          std::to_string(expected_params_hash) + ")");
    }
    cache.train = read_matrix(in);
    cache.test = read_matrix(in);
    return cache;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw GenerationError("cannot write file: " + path);
    out << content;
}

}  // namespace boolrc::io
