#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

namespace lcmg {

using Complex = std::complex<double>;

/// Absolute per-component tolerance for comparing edge labels and ring
/// coefficients that arise from exact inputs plus conjugation.
inline constexpr double kLabelTol = 1e-12;

inline bool complex_close(Complex a, Complex b, double tol = kLabelTol) {
    return std::abs(a.real() - b.real()) <= tol && std::abs(a.imag() - b.imag()) <= tol;
}

/// |a - b| <= rtol * max(1, |a|, |b|).
inline bool relatively_close(double a, double b, double rtol) {
    return std::abs(a - b) <= rtol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Sums a bag of complex terms in an order that depends only on the term
/// multiset. Real parts are folded in ascending order; imaginary parts are
/// folded as (sum of positives) - (sum of negatives), each ascending.
/// Invariant: conjugating every term conjugates the result bit-exactly, so
/// convolution products of the form w * w^ stay self-adjoint under exact
/// coefficient comparison.
inline Complex canonical_sum(std::vector<Complex> terms) {
    std::vector<double> res;
    std::vector<double> pos;
    std::vector<double> neg;
    res.reserve(terms.size());
    for (const Complex& t : terms) {
        res.push_back(t.real());
        if (t.imag() > 0.0) {
            pos.push_back(t.imag());
        } else if (t.imag() < 0.0) {
            neg.push_back(-t.imag());
        }
    }
    std::sort(res.begin(), res.end());
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    double re = 0.0;
    for (double v : res) re += v;
    double ip = 0.0;
    for (double v : pos) ip += v;
    double in = 0.0;
    for (double v : neg) in += v;
    return {re, ip - in};
}

/// Shortest round-trip decimal form, stable across runs; used by every
/// serializer so outputs are byte-deterministic. Integral values print
/// without an exponent.
inline std::string format_double(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    for (int prec = 1; prec <= 16; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

inline std::string format_complex(Complex z) {
    std::string s = format_double(z.real());
    if (z.imag() != 0.0) {
        s += (z.imag() > 0 ? "+" : "-");
        s += format_double(std::abs(z.imag()));
        s += "i";
    }
    return s;
}

} // namespace lcmg
