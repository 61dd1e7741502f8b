#pragma once

#include <optional>
#include <string>
#include <vector>

#include "duomode/analytic.hpp"
#include "duomode/model.hpp"
#include "duomode/stochastic.hpp"

namespace duomode {

struct GridPoint {
    double gbar, lbar, n;
    MMode mmode;
    double phi;
};

std::string mmode_name(MMode mode);

/// The default verification grid (stable points only): the cross product of
/// gbar in {0, 0.3, 0.5, 0.8, 0.99, 1.2, 3}, lbar in {0, 0.3, 0.5, 0.8, 1,
/// 3, 5}, n in {0, 0.5, 2}, m-mode in {thermal, classical-max, quantum-max},
/// phi in {0, pi/4, pi/2, 2.1}.
std::vector<GridPoint> default_verification_grid();

/// Twelve representative points (both regimes plus the exceptional point)
/// used for the Monte Carlo cross-check.
std::vector<GridPoint> monte_carlo_points();

/// Named scalar projections of a SteadyStateReport; complex correlators
/// contribute their real and imaginary parts separately.
struct FieldComparison {
    std::string field;
    double abs_dev = 0.0;   // worst |analytic - lyapunov|
    double rel_dev = 0.0;   // worst deviation scaled by max(|a|,|b|)
    GridPoint worst_point{};
};

struct EquivalenceResult {
    bool pass = true;
    std::size_t points_checked = 0;
    std::vector<FieldComparison> fields;
    double min_symplectic_eig = 0.0;  // worst physicality margin over the grid
    std::string first_failure;        // empty when pass
};

/// Analytic vs Lyapunov equivalence over a grid: every report field must
/// satisfy |a - b| <= max(abs_tol, rel_tol * max(|a|, |b|)), and the
/// degrees-defined flags must agree.
EquivalenceResult run_equivalence(const std::vector<GridPoint>& grid, double rel_tol = 1e-9,
                                  double abs_tol = 1e-12);

struct McCheckResult {
    bool pass = true;
    GridPoint point{};
    double worst_sigma_dev = 0.0;     // in units of the standard error
    double worst_rel_dev = 0.0;       // relative, entries with |exact| >= 1e-3
    std::string detail;
};

/// Monte Carlo vs analytic covariance at one point: every entry within
/// sigma_gate standard errors and rel_gate relative (the latter only for
/// entries with |exact| >= 1e-3).
McCheckResult run_mc_check(const GridPoint& pt, const SdeConfig& cfg, double sigma_gate = 5.0,
                           double rel_gate = 0.02);

SystemParams params_from_point(const GridPoint& pt, double kappa = 1.0);
ReservoirSpec reservoir_from_point(const GridPoint& pt);

}  // namespace duomode
