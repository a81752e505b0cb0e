// Benchmark of the data-parallel sweeps against their serial reference.
// Every work item derives its RNG stream from (seed, index), so the two paths
// must produce identical verdicts; this binary times both and checks that.

#include "leibniz/classifier.hpp"
#include "leibniz/split.hpp"
#include "leibniz/verify_paper.hpp"

#include <chrono>
#include <cstdio>

using namespace leibniz;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

struct SweepResult {
    double elapsed = 0.0;
    std::uint64_t digest = 0;
};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

SweepResult run_split_sweep(RunPolicy policy, std::uint64_t seed) {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.policy = policy;
    SweepResult out;
    auto start = clock_type::now();
    for (const auto& id : default_instances()) {
        auto verdict = split_search(instantiate(id), cfg);
        out.digest = mix(out.digest, static_cast<std::uint64_t>(verdict.kind));
        out.digest = mix(out.digest, static_cast<std::uint64_t>(verdict.restarts));
    }
    out.elapsed = seconds_since(start);
    return out;
}

SweepResult run_iso_sweep(RunPolicy policy, std::uint64_t seed, int conjugates) {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.policy = policy;
    SweepResult out;
    Rng rng(seed, 0xBE9C4);
    auto instances = default_instances();
    auto start = clock_type::now();
    for (int i = 0; i < conjugates; ++i) {
        auto fc = fuzz_case(instances, rng);
        auto res = classify(fc.table, cfg);
        out.digest = mix(out.digest, static_cast<std::uint64_t>(res.index));
        out.digest = mix(out.digest, static_cast<std::uint64_t>(res.witness.restart_index + 2));
    }
    out.elapsed = seconds_since(start);
    return out;
}

SweepResult run_pairwise_sweep(RunPolicy policy, std::uint64_t seed) {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.policy = policy;
    cfg.restarts = 60; // benchmark budget; the acceptance suite runs the full 200
    std::vector<ClassId> instances;
    for (int k : {2, 3, 4, 6, 16, 19, 21, 22, 23, 24, 25}) instances.emplace_back(k);
    instances.emplace_back(5, GaussianRational(2));
    instances.emplace_back(5, GaussianRational(Rational(1, 2)));
    instances.emplace_back(17, GaussianRational(2));
    instances.emplace_back(18, GaussianRational(2));
    SweepResult out;
    auto start = clock_type::now();
    auto report = pairwise_report(instances, cfg);
    out.elapsed = seconds_since(start);
    out.digest = mix(out.digest, report.distinguished);
    out.digest = mix(out.digest, report.probabilistic);
    out.digest = mix(out.digest, report.witnesses_within_family);
    out.digest = mix(out.digest, report.cross_class_witnesses);
    return out;
}

int report_pair(const char* name, const SweepResult& serial, const SweepResult& parallel) {
    bool same = serial.digest == parallel.digest;
    std::printf("%-16s serial %7.2fs   parallel %7.2fs   speedup %4.2fx   verdicts %s\n", name,
                serial.elapsed, parallel.elapsed,
                parallel.elapsed > 0 ? serial.elapsed / parallel.elapsed : 0.0,
                same ? "identical" : "DIFFER");
    return same ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
    std::printf("sweep benchmark, seed %llu\n", static_cast<unsigned long long>(seed));

    int bad = 0;
    bad += report_pair("split-search", run_split_sweep(RunPolicy::serial, seed),
                       run_split_sweep(RunPolicy::parallel, seed));
    bad += report_pair("classify", run_iso_sweep(RunPolicy::serial, seed, 60),
                       run_iso_sweep(RunPolicy::parallel, seed, 60));
    bad += report_pair("pairwise", run_pairwise_sweep(RunPolicy::serial, seed),
                       run_pairwise_sweep(RunPolicy::parallel, seed));
    return bad ? 1 : 0;
}
