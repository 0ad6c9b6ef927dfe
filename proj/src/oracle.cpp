#include "lcmg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lcmg {

namespace {

constexpr int kTorusDimCap = 3;
constexpr int kTorusMomentCap = 20;

const IntegerLattice* lattice_model(const RingElement& w) {
    const auto* lattice = dynamic_cast<const IntegerLattice*>(w.context().model.get());
    if (!lattice || w.context().is_quotient())
        throw std::invalid_argument("torus oracle needs an element of C[Z^d]");
    if (lattice->dim() > kTorusDimCap)
        throw ResourceError("torus oracle dimension " + std::to_string(lattice->dim()) +
                            " exceeds cap " + std::to_string(kTorusDimCap));
    return lattice;
}

/// Fraction of sampled values <= t.
double sample_cdf(const std::vector<double>& sorted, double t) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

} // namespace

TorusSymbol::TorusSymbol(const RingElement& w) {
    dim_ = lattice_model(w)->dim();
    for (const auto& [g, c] : w.terms()) {
        Term t;
        t.coeff = c;
        t.freq.reserve(static_cast<std::size_t>(dim_));
        for (std::size_t i = 0; i < g.arity(); ++i) t.freq.push_back(g[i].convert_to<double>());
        terms_.push_back(std::move(t));
    }
}

Complex TorusSymbol::evaluate(const double* theta) const {
    Complex acc(0.0, 0.0);
    for (const Term& t : terms_) {
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) phase += t.freq[static_cast<std::size_t>(i)] * theta[i];
        acc += t.coeff * Complex(std::cos(phase), std::sin(phase));
    }
    return acc;
}

double TorusSymbol::squared(const double* theta) const {
    return std::norm(evaluate(theta));
}

int TorusSymbol::default_grid(int dim) {
    switch (dim) {
        case 1: return 4096;
        case 2: return 512;
        default: return 96;
    }
}

std::vector<double> TorusSymbol::sample_squared(int grid_n) const {
    if (grid_n < 2) throw std::invalid_argument("grid resolution must be >= 2");
    const double step = 2.0 * std::numbers::pi / grid_n;
    std::size_t total = 1;
    for (int i = 0; i < dim_; ++i) total *= static_cast<std::size_t>(grid_n);
    std::vector<double> out;
    out.reserve(total);
    double theta[kTorusDimCap] = {0.0, 0.0, 0.0};
    std::vector<int> idx(static_cast<std::size_t>(dim_), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int i = dim_ - 1; i >= 0; --i) {
            idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % grid_n);
            rem /= static_cast<std::size_t>(grid_n);
        }
        for (int i = 0; i < dim_; ++i)
            theta[i] = step * (idx[static_cast<std::size_t>(i)] + 0.5);
        out.push_back(squared(theta));
    }
    return out;
}

QuadratureValue torus_moment(const RingElement& w, int k, int grid_n) {
    if (k < 0) throw std::invalid_argument("negative moment degree");
    if (k > kTorusMomentCap)
        throw ResourceError("torus moment degree " + std::to_string(k) + " exceeds cap " +
                            std::to_string(kTorusMomentCap));
    TorusSymbol symbol(w);
    if (grid_n == 0) grid_n = TorusSymbol::default_grid(symbol.dim());
    auto integrate = [&](int n) {
        std::vector<double> values = symbol.sample_squared(n);
        double acc = 0.0;
        for (double v : values) acc += std::pow(v, k);
        return acc / static_cast<double>(values.size());
    };
    double fine = integrate(grid_n);
    double coarse = integrate(grid_n / 2);
    return {fine, std::abs(fine - coarse)};
}

std::vector<QuadratureValue> torus_sdf(const RingElement& w,
                                       const std::vector<double>& lambda_grid, int grid_n) {
    for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i)
        if (lambda_grid[i] > lambda_grid[i + 1])
            throw std::invalid_argument("lambda grid must be sorted");
    TorusSymbol symbol(w);
    if (grid_n == 0) grid_n = TorusSymbol::default_grid(symbol.dim());
    std::vector<double> fine = symbol.sample_squared(grid_n);
    std::vector<double> coarse = symbol.sample_squared(grid_n / 2);
    std::sort(fine.begin(), fine.end());
    std::sort(coarse.begin(), coarse.end());
    std::vector<QuadratureValue> out;
    out.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        if (lambda < 0.0) throw std::invalid_argument("lambda grid must be nonnegative");
        double f = sample_cdf(fine, lambda * lambda);
        double c = sample_cdf(coarse, lambda * lambda);
        out.push_back({f, std::abs(f - c)});
    }
    return out;
}

std::vector<double> torus_sdf_atoms(const RingElement& w, double jump_threshold, int grid_n) {
    TorusSymbol symbol(w);
    if (grid_n == 0) grid_n = TorusSymbol::default_grid(symbol.dim());
    auto plateaus = [&](int n) {
        std::vector<double> values = symbol.sample_squared(n);
        std::sort(values.begin(), values.end());
        const double scale = std::max(1.0, values.empty() ? 1.0 : values.back());
        const double tie_tol = 1e-9 * scale;
        std::vector<std::pair<double, double>> found; // (value, fraction)
        std::size_t i = 0;
        while (i < values.size()) {
            std::size_t j = i + 1;
            while (j < values.size() && values[j] - values[j - 1] <= tie_tol) ++j;
            double fraction = static_cast<double>(j - i) / static_cast<double>(values.size());
            if (fraction >= jump_threshold) found.emplace_back(values[i], fraction);
            i = j;
        }
        return found;
    };
    auto fine = plateaus(grid_n);
    auto coarse = plateaus(grid_n / 2);
    std::vector<double> atoms;
    for (const auto& [value, fraction] : fine) {
        for (const auto& [cv, cf] : coarse) {
            if (std::abs(cv - value) <= 1e-6 * std::max(1.0, std::abs(value))) {
                atoms.push_back(std::sqrt(std::max(0.0, value)));
                break;
            }
        }
    }
    return atoms;
}

} // namespace lcmg
