#pragma once

#include "mdpgeom/mdp.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>

namespace mdpgeom {

inline constexpr int kModelSchemaVersion = 1;

/// Shortest decimal that round-trips to the same double.
std::string format_real(double x);

/// Parses a model document and validates it. Throws SyntaxError (with line and
/// column), UnsupportedVersionError or ValidationError.
MdpModel parse_model(std::string_view text);

/// Canonical document: keys schema_version, n, gamma, saps in that order, one
/// SAP per line, reals in shortest round-trip form.
std::string emit_model(const MdpModel& model);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/**
 * Portable random source: std::mt19937_64 (whose output sequence is fixed by
 * the C++ standard) with doubles formed from the top 53 bits.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

inline constexpr const char* kRngName = "mt19937_64, double = (x >> 11) * 2^-53";

struct GeneratorSpec {
    std::size_t n = 3;
    std::size_t saps_per_state = 2;
    double gamma = 0.9;
    double reward_lo = 0.0;
    double reward_hi = 1.0;
    /// Probability that an individual transition entry is zeroed.
    double sparsity = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const GeneratorSpec&) const = default;
};

/// Throws SyntaxError on malformed or out-of-range fields.
void check_generator_spec(const GeneratorSpec& spec);
GeneratorSpec parse_generator_spec(std::string_view text);
std::string emit_generator_spec(const GeneratorSpec& spec);

struct GeneratedModel {
    MdpModel model;
    /// Rows whose entries were all zeroed and got a forced self-loop.
    std::size_t repaired_rows = 0;
};

/**
 * Draw order, for each state s and each of its SAPs in turn: for every column
 * j a weight w_j = 1 - uniform() in (0, 1] and then a zeroing draw
 * (uniform() < sparsity zeroes w_j); then the reward uniform(lo, hi). A row left
 * all-zero gets w_s = 1. Rows are normalized by their sum.
 */
GeneratedModel generate_model(const GeneratorSpec& spec);

} // namespace mdpgeom
