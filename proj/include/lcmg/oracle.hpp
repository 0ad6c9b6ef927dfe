#pragma once

#include <vector>

#include "lcmg/ring.hpp"

namespace lcmg {

/// A quadrature result with its grid-refinement error estimate: the
/// difference against the half-resolution grid. Acceptance tolerances must
/// dominate the delta.
struct QuadratureValue {
    double value = 0.0;
    double refinement_delta = 0.0;
};

/// Trigonometric symbol of w over Z^d: w_hat(theta) = sum lambda_g
/// exp(i g.theta). Diagonalizes right multiplication on l2(Z^d).
class TorusSymbol {
public:
    explicit TorusSymbol(const RingElement& w);

    int dim() const { return dim_; }
    Complex evaluate(const double* theta) const;
    /// |w_hat(theta)|^2.
    double squared(const double* theta) const;

    /// Default midpoint-grid resolution per axis: 4096 / 512 / 96 for
    /// dimensions 1 / 2 / 3.
    static int default_grid(int dim);

    /// All values of |w_hat|^2 on the N^d midpoint grid, unsorted.
    std::vector<double> sample_squared(int grid_n) const;

private:
    struct Term {
        std::vector<double> freq;
        Complex coeff;
    };
    int dim_ = 0;
    std::vector<Term> terms_;
};

/// Moment oracle: integral of |w_hat|^{2k} over the torus, by midpoint
/// quadrature (exact for trigonometric polynomials once the grid outresolves
/// the degree). d <= 3, k <= 20.
QuadratureValue torus_moment(const RingElement& w, int k, int grid_n = 0);

/// SDF oracle: F(lambda) = normalized measure of {theta : |w_hat(theta)|^2
/// <= lambda^2}, sampled on the given lambda grid.
std::vector<QuadratureValue> torus_sdf(const RingElement& w,
                                       const std::vector<double>& lambda_grid, int grid_n = 0);

/// Locations (in lambda) where the limit SDF jumps by at least
/// `jump_threshold`, detected as value plateaus stable across a grid
/// refinement. For trigonometric symbols this is nonempty only for
/// essentially monomial w.
std::vector<double> torus_sdf_atoms(const RingElement& w, double jump_threshold = 0.01,
                                    int grid_n = 0);

} // namespace lcmg
