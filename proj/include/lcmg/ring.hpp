#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lcmg/group.hpp"
#include "lcmg/numeric.hpp"

namespace lcmg {

/// Default cap on the exponent accepted by power_trace.
inline constexpr int kDefaultPowerCap = 20;

/// Identifies the ring an element lives in: the group ring C[G] (level < 0)
/// or a quotient ring C[G/K_n]. Keys of quotient elements are canonical
/// coset representatives.
struct RingContext {
    std::shared_ptr<const GroupModel> model;
    std::shared_ptr<const QuotientChain> chain; // null at group level
    int level = -1;

    static RingContext group(std::shared_ptr<const GroupModel> m);
    static RingContext quotient(std::shared_ptr<const QuotientChain> c, int lvl);

    bool is_quotient() const { return level >= 0; }
    GroupElement canonical(const GroupElement& g) const;
    GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
    GroupElement inverse(const GroupElement& g) const;
    GroupElement identity() const;

    bool operator==(const RingContext& o) const;
    std::string description() const;

    /// Throws std::invalid_argument when two operands live in different rings.
    void require_same(const RingContext& o) const;
};

/// A finitely supported formal sum over group elements with complex
/// coefficients. The support holds no zero coefficients (pruned at exactly
/// 0.0) and every key is in canonical form.
class RingElement {
public:
    explicit RingElement(RingContext ctx) : ctx_(std::move(ctx)) {}
    RingElement(RingContext ctx, const std::vector<std::pair<GroupElement, Complex>>& terms);

    static RingElement monomial(RingContext ctx, const GroupElement& g, Complex c);
    static RingElement scalar(RingContext ctx, Complex c);

    const RingContext& context() const { return ctx_; }
    const std::map<GroupElement, Complex>& terms() const { return terms_; }
    std::size_t support_size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    Complex coefficient(const GroupElement& g) const;

    RingElement& operator+=(const RingElement& o);
    RingElement& operator-=(const RingElement& o);
    RingElement& operator*=(Complex c);

    friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
    friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
    friend RingElement operator*(Complex c, RingElement a) { return a *= c; }
    friend RingElement operator*(const RingElement& a, const RingElement& b);

    std::string str() const;

private:
    void insert_term(const GroupElement& g, Complex c);

    RingContext ctx_;
    std::map<GroupElement, Complex> terms_;
};

/// (sum lambda_g g)^* = sum conj(lambda_g) g^{-1}.
RingElement involution(const RingElement& x);

/// Exact support comparison: coefficient of g equals conj(coefficient of
/// g^{-1}) bitwise. Pipeline products w * w^ satisfy this exactly because
/// convolution sums are accumulated canonically.
bool is_self_adjoint(const RingElement& x);

/// Coefficient of the identity in x^k; the brute-force moment oracle.
Complex power_trace(const RingElement& x, int k, int cap = kDefaultPowerCap);

/// Canonical projection C[G] -> C[G/K_n]; coefficients of merging cosets
/// are summed. A *-homomorphism.
RingElement project_ring(const std::shared_ptr<const QuotientChain>& chain, int level,
                         const RingElement& x);

/// A finite symmetric subset S with coefficients lambda_s, representing a
/// self-adjoint element z = sum lambda_s s. Coefficients may be zero; the
/// zero-labelled edges they induce are kept in Cayley graphs.
class SymmetrizedSupport {
public:
    SymmetrizedSupport(RingContext ctx,
                       std::vector<std::pair<GroupElement, Complex>> entries);

    const RingContext& context() const { return ctx_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const std::vector<Complex>& coefficients() const { return coefficients_; }

    /// Adds generators with coefficient zero (closed under inverse), for
    /// callers who want the support extended to a generating set without
    /// changing the element it represents.
    SymmetrizedSupport extended_with(const std::vector<GroupElement>& extra) const;

    /// The element sum lambda_s s this support represents.
    RingElement element() const;

private:
    RingContext ctx_;
    std::vector<GroupElement> elements_;   // canonical order, inverse-closed
    std::vector<Complex> coefficients_;    // conjugate-paired with inverses
};

/// Expresses a self-adjoint z as a symmetrized support. Throws
/// std::domain_error naming a violating pair when z is not self-adjoint.
SymmetrizedSupport symmetrize(const RingElement& z);

/// Projects a support to a chain level: cosets merge without repetition and
/// their coefficients are summed; zero merged coefficients are kept.
SymmetrizedSupport project_support(const SymmetrizedSupport& sym,
                                   const std::shared_ptr<const QuotientChain>& chain,
                                   int level);

} // namespace lcmg
