#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "lcmg/graph.hpp"

namespace lcmg {

/// Default cap on the dimension of dense Hermitian eigendecompositions.
inline constexpr std::size_t kDefaultEigenDimCap = 20000;
/// Default cap on walk-moment degree.
inline constexpr int kDefaultMomentCap = 20;

/// Markov-type operator of a finite lcmg: (M f)(u) = sum over in-edges
/// (w, u) of label(w, u) * f(w). Hermitian whenever the graph is
/// self-involutive.
class MarkovOperator {
public:
    explicit MarkovOperator(std::shared_ptr<const Lcmg> graph);

    int dim() const { return graph_->vertex_count(); }
    int basepoint() const { return graph_->basepoint(); }
    const std::shared_ptr<const Lcmg>& graph() const { return graph_; }

    /// Row-sum bound on the operator norm: max over vertices of the summed
    /// absolute values of incident labels.
    double norm_bound() const { return norm_bound_; }

    bool is_hermitian(double tol = kLabelTol) const;
    /// True when every label is exactly real (enables the faster real
    /// symmetric eigensolver).
    bool is_real() const;

    std::vector<Complex> apply(const std::vector<Complex>& f) const;
    Eigen::MatrixXcd dense() const;

private:
    std::shared_ptr<const Lcmg> graph_;
    double norm_bound_ = 0.0;
};

/// <M^k delta_basepoint, delta_basepoint> by k sparse applications.
Complex operator_moment(const MarkovOperator& op, int k, int cap = kDefaultMomentCap);

/// k-th moment of the limit Kesten measure: the weighted closed-walk sum of
/// length k at the identity of the infinite Cayley lcmg, evaluated on the
/// radius-k ball (which contains every length-k walk from the basepoint).
Complex moment_by_walks(const SymmetrizedSupport& sym, int k, int cap = kDefaultMomentCap,
                        int radius_cap = kDefaultRadiusCap,
                        std::size_t size_cap = kDefaultOrderCap);

/// Hermitian operator of dimension |G/K_n| acting as right multiplication by
/// z_n on l2(G/K_n); built over the full (unrestricted) coset enumeration.
/// Throws std::domain_error when z is not self-adjoint.
MarkovOperator quotient_operator(const std::shared_ptr<const QuotientChain>& chain, int level,
                                 const RingElement& z,
                                 std::size_t order_cap = kDefaultOrderCap);

struct SpectralAtom {
    double location = 0.0;
    double mass = 0.0;
};

/// A compactly supported atomic probability measure on the real line:
/// eigenvalue atoms with basepoint masses. Atoms are sorted by location and
/// nearly degenerate eigenvalues (within 1e-9 * norm bound) are merged; raw
/// eigenvalues are retained for diagnostics.
class KestenMeasure {
public:
    KestenMeasure(std::vector<SpectralAtom> atoms, std::vector<double> raw_eigenvalues,
                  double support_bound);

    const std::vector<SpectralAtom>& atoms() const { return atoms_; }
    const std::vector<double>& raw_eigenvalues() const { return raw_; }
    double support_bound() const { return bound_; }
    std::size_t dimension() const { return raw_.size(); }

    double total_mass() const;
    /// Right-continuous CDF: total mass at locations <= t.
    double cdf(double t) const;
    double moment(int k) const;

private:
    std::vector<SpectralAtom> atoms_;
    std::vector<double> raw_;
    std::vector<double> prefix_mass_;
    double bound_ = 0.0;
};

/// Kesten spectral measure of a finite Hermitian Markov operator at a vertex
/// (default: the basepoint), through a dense Hermitian eigendecomposition.
KestenMeasure kesten_measure(const MarkovOperator& op, int at_vertex = -1,
                             std::size_t dim_cap = kDefaultEigenDimCap);

/// Spectral density function of z = w w^*: F(lambda) = measure mass in
/// [0, lambda^2], with the kernel threshold tau = dim * bound * 1e-12
/// deciding which eigenvalues count as zero. betti() = F(0).
class SpectralDensityFunction {
public:
    explicit SpectralDensityFunction(KestenMeasure adjusted_measure);

    double operator()(double lambda) const;
    double betti() const { return betti_; }
    const KestenMeasure& measure() const { return measure_; }

private:
    KestenMeasure measure_;
    double betti_ = 0.0;
};

/// Validates the measure of z = w w^* (atoms below -1e-9 * bound are a
/// numeric error; small negatives are clamped), merges the kernel atoms at
/// zero, and wraps the result for evaluation.
SpectralDensityFunction sdf_from_measure(const KestenMeasure& mu);

inline double betti(const SpectralDensityFunction& sdf) { return sdf.betti(); }

/// Deterministic JSON atom list {support_bound, dimension, atoms:[{location,mass}]}.
std::string measure_to_json(const KestenMeasure& mu);

} // namespace lcmg
