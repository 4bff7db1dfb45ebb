#pragma once

#include "mdpgeom/convergence.hpp"
#include "mdpgeom/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mdpgeom {

inline constexpr const char* kVersion = "1.0.0";

/// 64-bit FNV-1a over the SAP indices, each fed as 8 little-endian bytes.
std::uint64_t policy_hash(const Policy& pi);

/// First basis vector (span 1).
Vector basis_v0(std::size_t n);

/// Entries uniform in [-1, 1] from Rng(seed).
Vector random_v0(std::size_t n, std::uint64_t seed);

nlohmann::ordered_json report_to_json(const ConvergenceReport& report);

/// Columns t,span,ratio,greedy_policy_hash; ratio and hash are empty at t = 0,
/// the hash at row t is that of the greedy policy producing v_t.
std::string trace_csv(const ConvergenceReport& report);

struct SweepTrial {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t repaired_rows = 0;
    ConvergenceReport report;
};

struct SweepResult {
    GeneratorSpec spec;
    std::uint64_t seed = 0;
    std::vector<SweepTrial> trials;
};

/// Seed offset used to draw each trial's v0 from the trial seed.
inline constexpr std::uint64_t kV0SeedOffset = 0x9E3779B97F4A7C15ull;

/// Trial k uses model seed seed + k and v0 = random_v0(n, seed + k + kV0SeedOffset).
/// Trials run on up to `threads` workers; results are ordered by trial.
SweepResult run_sweep(const GeneratorSpec& spec, std::size_t trials, std::uint64_t seed, std::size_t threads,
                      std::size_t steps = 0);

/// Writes summary.csv, traces.csv and report.json into dir.
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);

/// MDP_GEOM_THREADS if set and positive, else hardware concurrency (at least 1).
std::size_t sweep_threads_from_env();

} // namespace mdpgeom
