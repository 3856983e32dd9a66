#pragma once

#include <cstdint>

namespace marketeq {

/// Shared numeric knobs. Defaults are the reference values used by the CLI
/// and the test suite; every field can be overridden by CLI flags or a
/// JSON config file.
struct NumericConfig {
    double quad_abs_tol = 1e-10;
    double quad_rel_tol = 1e-9;
    int grid_points = 4096;          // coarse search / classification grids
    double eq_tolerance = 1e-3;      // relative price gap for "equilibrium"
    double rev_tolerance = 1e-6;     // relative revenue slack for "equilibrium"
    double fp_tolerance = 1e-8;      // fixed-point stopping rule
    int max_iterations = 10000;
    double consistency_band = 1e-6;  // dead band for the utility-vs-condition sign check
    long long mc_samples = 1000000;
    std::uint64_t seed = 1729;
    double truncation_quantile = 1.0 - 1e-12;  // upper cut for improper integrals

    /// Throws InvalidParameterError if any tolerance is non-positive or
    /// grid_points < 100.
    void validate() const;
};

}  // namespace marketeq
