#pragma once

#include <cstdint>
#include <string>

#include "collab/claims.hpp"
#include "collab/grid.hpp"
#include "collab/iterate.hpp"

namespace collab {

/// Declarative run configuration, read from a TOML-style key = value file
/// with [section] headers and # comments. Canonical serialization
/// round-trips losslessly (17 significant digits).
struct RunConfig {
    // [model]
    double p1 = 1.0, p2 = 1.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    std::string claim1_kind = "exponential";  // exponential | numeric
    std::string claim2_kind = "exponential";
    double claim1_rate = 1.0, claim2_rate = 1.0;
    std::string claim1_file, claim2_file;  // two-column CSV (s, cdf) for numeric laws
    double delta = 0.1;
    double a1 = 0.5;
    // [grid]
    double step = 0.02;
    double x_max = 6.0, y_max = 6.0;
    // [iterate]
    std::uint64_t iterations = 20;
    double fixed_point_tol = 1e-6;
    std::string v0_convention = "payoff";  // payoff | paper
    // [simulate]
    std::uint64_t paths = 100000;
    std::uint64_t seed = 1;

    /// Parses the file format; throws std::runtime_error naming the line
    /// and field on malformed input. Unknown keys are an error.
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    std::string serialize() const;
    /// FNV-1a of the canonical serialization; embedded in every output file.
    std::uint64_t hash() const;

    ModelParams make_params() const;
    Grid2D make_grid() const;
    V0Convention make_convention() const;
};

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a(const std::string& data);

}  // namespace collab
