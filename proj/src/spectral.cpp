#include "lcmg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace lcmg {

MarkovOperator::MarkovOperator(std::shared_ptr<const Lcmg> graph) : graph_(std::move(graph)) {
    if (!graph_) throw std::invalid_argument("null lcmg");
    for (int v = 0; v < graph_->vertex_count(); ++v) {
        double incident = 0.0;
        for (const LcmgEdge& e : graph_->out_edges(v)) incident += std::abs(e.label);
        norm_bound_ = std::max(norm_bound_, incident);
        incident = 0.0;
        for (const LcmgEdge& e : graph_->in_edges(v)) incident += std::abs(e.label);
        norm_bound_ = std::max(norm_bound_, incident);
    }
}

bool MarkovOperator::is_hermitian(double tol) const {
    return is_self_involutive(*graph_, tol);
}

bool MarkovOperator::is_real() const {
    for (int v = 0; v < graph_->vertex_count(); ++v)
        for (const LcmgEdge& e : graph_->out_edges(v))
            if (e.label.imag() != 0.0) return false;
    return true;
}

std::vector<Complex> MarkovOperator::apply(const std::vector<Complex>& f) const {
    if (static_cast<int>(f.size()) != dim())
        throw std::invalid_argument("vector dimension mismatch");
    std::vector<Complex> out(f.size(), Complex(0.0, 0.0));
    for (int u = 0; u < dim(); ++u)
        for (const LcmgEdge& e : graph_->in_edges(u))
            out[static_cast<std::size_t>(u)] += e.label * f[static_cast<std::size_t>(e.to)];
    return out;
}

Eigen::MatrixXcd MarkovOperator::dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
    // column x holds M(delta_x): entry (y, x) is the label of edge (x, y)
    for (int x = 0; x < dim(); ++x)
        for (const LcmgEdge& e : graph_->out_edges(x)) m(e.to, x) = e.label;
    return m;
}

Complex operator_moment(const MarkovOperator& op, int k, int cap) {
    if (k < 0) throw std::invalid_argument("negative moment degree");
    if (k > cap)
        throw ResourceError("moment degree " + std::to_string(k) + " exceeds cap " +
                            std::to_string(cap));
    std::vector<Complex> f(static_cast<std::size_t>(op.dim()), Complex(0.0, 0.0));
    f[static_cast<std::size_t>(op.basepoint())] = 1.0;
    for (int i = 0; i < k; ++i) f = op.apply(f);
    return f[static_cast<std::size_t>(op.basepoint())];
}

Complex moment_by_walks(const SymmetrizedSupport& sym, int k, int cap, int radius_cap,
                        std::size_t size_cap) {
    if (k < 0) throw std::invalid_argument("negative moment degree");
    if (k > cap)
        throw ResourceError("moment degree " + std::to_string(k) + " exceeds cap " +
                            std::to_string(cap));
    Ball ball = cayley_ball_infinite(sym, k, std::max(radius_cap, k), size_cap);
    MarkovOperator op(std::make_shared<Lcmg>(std::move(ball.graph)));
    return operator_moment(op, k, cap);
}

MarkovOperator quotient_operator(const std::shared_ptr<const QuotientChain>& chain, int level,
                                 const RingElement& z, std::size_t order_cap) {
    if (!is_self_adjoint(z))
        throw std::domain_error("quotient_operator expects a self-adjoint element");
    SymmetrizedSupport sym = symmetrize(z);
    SymmetrizedSupport proj = project_support(sym, chain, level);
    std::vector<QuotientElement> cosets = chain->enumerate_quotient(level, order_cap);
    std::map<GroupElement, int> index;
    for (std::size_t i = 0; i < cosets.size(); ++i)
        index.emplace(cosets[i].rep, static_cast<int>(i));
    std::vector<std::tuple<int, int, Complex>> edges;
    edges.reserve(cosets.size() * proj.size());
    for (std::size_t i = 0; i < cosets.size(); ++i)
        for (std::size_t s = 0; s < proj.size(); ++s) {
            QuotientElement target =
                chain->quotient_multiply(level, cosets[i], {level, proj.elements()[s]});
            edges.emplace_back(static_cast<int>(i), index.at(target.rep),
                               proj.coefficients()[s]);
        }
    std::vector<std::string> names;
    names.reserve(cosets.size());
    for (const auto& q : cosets) names.push_back(q.rep.str());
    auto graph = std::make_shared<Lcmg>(
        static_cast<int>(cosets.size()), 0, std::move(names), edges,
        "cayley lcmg over " + RingContext::quotient(chain, level).description());
    return MarkovOperator(std::move(graph));
}

KestenMeasure::KestenMeasure(std::vector<SpectralAtom> atoms, std::vector<double> raw,
                             double support_bound)
    : atoms_(std::move(atoms)), raw_(std::move(raw)), bound_(support_bound) {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const SpectralAtom& a, const SpectralAtom& b) { return a.location < b.location; });
    for (const SpectralAtom& a : atoms_)
        if (a.mass < 0.0) throw std::invalid_argument("negative atom mass");
    prefix_mass_.resize(atoms_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        acc += atoms_[i].mass;
        prefix_mass_[i] = acc;
    }
}

double KestenMeasure::total_mass() const {
    return prefix_mass_.empty() ? 0.0 : prefix_mass_.back();
}

double KestenMeasure::cdf(double t) const {
    // last atom with location <= t
    std::size_t lo = 0, hi = atoms_.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (atoms_[mid].location <= t)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo == 0 ? 0.0 : prefix_mass_[lo - 1];
}

double KestenMeasure::moment(int k) const {
    if (k < 0) throw std::invalid_argument("negative moment degree");
    double acc = 0.0;
    for (const SpectralAtom& a : atoms_) acc += a.mass * std::pow(a.location, k);
    return acc;
}

KestenMeasure kesten_measure(const MarkovOperator& op, int at_vertex, std::size_t dim_cap) {
    const int n = op.dim();
    if (static_cast<std::size_t>(n) > dim_cap)
        throw ResourceError("operator dimension " + std::to_string(n) +
                            " exceeds eigensolve cap " + std::to_string(dim_cap));
    int at = at_vertex < 0 ? op.basepoint() : at_vertex;
    if (at >= n) throw std::invalid_argument("vertex index out of range");
    if (!op.is_hermitian(1e-9 * std::max(1.0, op.norm_bound())))
        throw std::domain_error("kesten_measure expects a Hermitian operator "
                                "(self-involutive source graph)");

    std::vector<double> eigenvalues(static_cast<std::size_t>(n));
    std::vector<double> masses(static_cast<std::size_t>(n));
    if (op.is_real()) {
        Eigen::MatrixXd m = op.dense().real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigensolver failed (dim " + std::to_string(n) +
                                     ", norm bound " + format_double(op.norm_bound()) + ")");
        for (int j = 0; j < n; ++j) {
            eigenvalues[static_cast<std::size_t>(j)] = es.eigenvalues()(j);
            double amp = es.eigenvectors()(at, j);
            masses[static_cast<std::size_t>(j)] = amp * amp;
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.dense());
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigensolver failed (dim " + std::to_string(n) +
                                     ", norm bound " + format_double(op.norm_bound()) + ")");
        for (int j = 0; j < n; ++j) {
            eigenvalues[static_cast<std::size_t>(j)] = es.eigenvalues()(j);
            masses[static_cast<std::size_t>(j)] = std::norm(es.eigenvectors()(at, j));
        }
    }

    const double merge_tol = 1e-9 * op.norm_bound();
    std::vector<SpectralAtom> atoms;
    std::size_t i = 0;
    while (i < eigenvalues.size()) {
        std::size_t j = i + 1;
        double mass = masses[i];
        double loc_sum = eigenvalues[i];
        while (j < eigenvalues.size() && eigenvalues[j] - eigenvalues[j - 1] <= merge_tol) {
            mass += masses[j];
            loc_sum += eigenvalues[j];
            ++j;
        }
        atoms.push_back({loc_sum / static_cast<double>(j - i), mass});
        i = j;
    }
    KestenMeasure mu(std::move(atoms), std::move(eigenvalues), op.norm_bound());
    if (std::abs(mu.total_mass() - 1.0) > 1e-9)
        throw std::runtime_error("Kesten measure mass " + format_double(mu.total_mass()) +
                                 " deviates from 1");
    return mu;
}

SpectralDensityFunction::SpectralDensityFunction(KestenMeasure adjusted)
    : measure_(std::move(adjusted)) {
    betti_ = measure_.cdf(0.0);
}

double SpectralDensityFunction::operator()(double lambda) const {
    if (lambda < 0.0) throw std::domain_error("spectral density function needs lambda >= 0");
    return measure_.cdf(lambda * lambda);
}

SpectralDensityFunction sdf_from_measure(const KestenMeasure& mu) {
    const double bound = mu.support_bound();
    const double neg_tol = 1e-9 * bound;
    const double kernel_tol = static_cast<double>(mu.dimension()) * bound * 1e-12;
    std::vector<SpectralAtom> adjusted;
    double kernel_mass = 0.0;
    for (const SpectralAtom& a : mu.atoms()) {
        if (a.location < -neg_tol)
            throw std::runtime_error("atom at " + format_double(a.location) +
                                     " below -1e-9 * bound: measure is not that of w w^*");
        if (a.location <= kernel_tol)
            kernel_mass += a.mass;
        else
            adjusted.push_back(a);
    }
    if (kernel_mass > 0.0) adjusted.insert(adjusted.begin(), {0.0, kernel_mass});
    return SpectralDensityFunction(
        KestenMeasure(std::move(adjusted), mu.raw_eigenvalues(), bound));
}

std::string measure_to_json(const KestenMeasure& mu) {
    nlohmann::ordered_json j;
    j["support_bound"] = mu.support_bound();
    j["dimension"] = mu.dimension();
    j["atoms"] = nlohmann::ordered_json::array();
    for (const SpectralAtom& a : mu.atoms())
        j["atoms"].push_back({{"location", a.location}, {"mass", a.mass}});
    return j.dump(2);
}

} // namespace lcmg
