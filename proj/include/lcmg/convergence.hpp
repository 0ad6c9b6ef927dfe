#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lcmg/oracle.hpp"
#include "lcmg/spectral.hpp"

namespace lcmg {

struct ChainRunConfig {
    int levels = 0;               // 0 = every chain level
    std::vector<double> lambda_grid;
    int max_moment = 10;          // K
    int certify_radius_cap = 6;   // r cap for ball-isomorphism certification
    std::size_t order_cap = kDefaultOrderCap;
    std::size_t eigen_dim_cap = kDefaultEigenDimCap; // SDF/betti skipped above
    int ball_radius_cap = kDefaultRadiusCap;
    std::size_t ball_size_cap = 1u << 20;
    double continuity_exclusion = 1e-3;
    int threads = 1;              // parallelism across levels
};

struct LevelRecord {
    int level = 0;
    std::string modulus;          // empty for subgroup chains
    std::uint64_t order = 0;      // full quotient order
    bool restricted = false;      // support did not generate; component used
    int certified_radius = -1;    // ball isomorphism against the infinite ball
    bool certified_capped = false;
    double metric_value = 1.0;    // metric_D value at the certify cap
    int word_bound_radius = -1;   // kernel word-length bound, same cap
    std::vector<double> moments;  // k = 0..K
    std::vector<double> sdf;      // on the report grid; empty if skipped
    double betti = std::numeric_limits<double>::quiet_NaN();
    bool sdf_computed = false;
    double oracle_deviation = std::numeric_limits<double>::quiet_NaN();
};

struct ReportCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Per-quotient moments, SDF samples, Betti estimates and agreement
/// diagnostics for one chain experiment.
struct ConvergenceReport {
    std::string model_name;
    std::string element_text;     // the w the run was built from
    int max_moment = 0;
    std::vector<double> grid;
    std::vector<bool> grid_excluded;  // continuity filter mask
    std::vector<double> limit_moments;
    bool oracle_available = false;
    std::vector<double> oracle_sdf;    // empty when no oracle
    std::vector<double> oracle_delta;
    std::vector<LevelRecord> levels;
    std::vector<std::string> warnings;
    std::vector<ReportCheck> checks;

    bool all_pass() const;
    std::vector<double> betti_sequence() const;
};

/// Drops grid points within exclusion_delta of a known or estimated atom of
/// the limit measure (and of lambda = 0, where every finite quotient keeps
/// its kernel atom); returns the kept points.
std::vector<double> continuity_grid(const std::vector<double>& atom_lambdas,
                                    const std::vector<double>& grid,
                                    double exclusion_delta = 1e-3);

/// Runs a quotient chain for w: per level builds z_n, its Cayley lcmg and
/// Markov operator, takes moments, certifies the ball-isomorphism radius
/// against the infinite Cayley ball, eigendecomposes where the dimension
/// allows, and compares against the torus oracle on lattice models.
/// Levels that trip a resource cap are recorded as warnings; the report
/// covers the completed levels.
ConvergenceReport run_chain(const std::shared_ptr<const QuotientChain>& chain,
                            const RingElement& w, const ChainRunConfig& cfg);

std::string report_to_json(const ConvergenceReport& report);
std::string report_to_csv(const ConvergenceReport& report);
std::string report_to_text(const ConvergenceReport& report);

} // namespace lcmg
