#include "lcmg/ring.hpp"

#include <sstream>
#include <stdexcept>

namespace lcmg {

RingContext RingContext::group(std::shared_ptr<const GroupModel> m) {
    if (!m) throw std::invalid_argument("null group model");
    return {std::move(m), nullptr, -1};
}

RingContext RingContext::quotient(std::shared_ptr<const QuotientChain> c, int lvl) {
    if (!c) throw std::invalid_argument("null quotient chain");
    if (lvl < 0 || lvl >= c->levels())
        throw std::out_of_range("chain level " + std::to_string(lvl) + " out of range [0, " +
                                std::to_string(c->levels()) + ")");
    auto model = c->model();
    return {std::move(model), std::move(c), lvl};
}

GroupElement RingContext::canonical(const GroupElement& g) const {
    if (is_quotient()) return chain->project(level, g).rep;
    model->validate(g);
    return g;
}

GroupElement RingContext::multiply(const GroupElement& a, const GroupElement& b) const {
    return canonical(model->multiply(a, b));
}

GroupElement RingContext::inverse(const GroupElement& g) const {
    return canonical(model->inverse(g));
}

GroupElement RingContext::identity() const {
    return canonical(model->identity());
}

bool RingContext::operator==(const RingContext& o) const {
    return model.get() == o.model.get() && chain.get() == o.chain.get() && level == o.level;
}

std::string RingContext::description() const {
    if (!is_quotient()) return "C[" + model->name() + "]";
    return "C[" + model->name() + " / K_" + std::to_string(level) + "]";
}

void RingContext::require_same(const RingContext& o) const {
    if (!(*this == o))
        throw std::invalid_argument("ring mismatch: " + description() + " vs " +
                                    o.description());
}

RingElement::RingElement(RingContext ctx,
                         const std::vector<std::pair<GroupElement, Complex>>& terms)
    : ctx_(std::move(ctx)) {
    std::map<GroupElement, std::vector<Complex>> acc;
    for (const auto& [g, c] : terms) acc[ctx_.canonical(g)].push_back(c);
    for (const auto& [g, parts] : acc) insert_term(g, canonical_sum(parts));
}

RingElement RingElement::monomial(RingContext ctx, const GroupElement& g, Complex c) {
    RingElement x(std::move(ctx));
    x.insert_term(x.ctx_.canonical(g), c);
    return x;
}

RingElement RingElement::scalar(RingContext ctx, Complex c) {
    RingElement x(std::move(ctx));
    x.insert_term(x.ctx_.identity(), c);
    return x;
}

Complex RingElement::coefficient(const GroupElement& g) const {
    auto it = terms_.find(ctx_.canonical(g));
    return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

void RingElement::insert_term(const GroupElement& g, Complex c) {
    if (c == Complex(0.0, 0.0)) return;
    auto [it, inserted] = terms_.emplace(g, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
    }
}

RingElement& RingElement::operator+=(const RingElement& o) {
    ctx_.require_same(o.ctx_);
    for (const auto& [g, c] : o.terms_) insert_term(g, c);
    return *this;
}

RingElement& RingElement::operator-=(const RingElement& o) {
    ctx_.require_same(o.ctx_);
    for (const auto& [g, c] : o.terms_) insert_term(g, -c);
    return *this;
}

RingElement& RingElement::operator*=(Complex c) {
    if (c == Complex(0.0, 0.0)) {
        terms_.clear();
        return *this;
    }
    std::map<GroupElement, Complex> scaled;
    for (const auto& [g, v] : terms_) {
        Complex p = v * c;
        if (p != Complex(0.0, 0.0)) scaled.emplace(g, p);
    }
    terms_ = std::move(scaled);
    return *this;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    a.context().require_same(b.context());
    std::map<GroupElement, std::vector<Complex>> acc;
    for (const auto& [h, xh] : a.terms())
        for (const auto& [k, yk] : b.terms()) acc[a.context().multiply(h, k)].push_back(xh * yk);
    RingElement out(a.context());
    for (const auto& [g, parts] : acc) out.insert_term(g, canonical_sum(parts));
    return out;
}

std::string RingElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << format_complex(c) << ")*" << g.str();
        first = false;
    }
    return os.str();
}

RingElement involution(const RingElement& x) {
    RingElement out(x.context());
    std::vector<std::pair<GroupElement, Complex>> terms;
    terms.reserve(x.terms().size());
    for (const auto& [g, c] : x.terms())
        terms.emplace_back(x.context().inverse(g), std::conj(c));
    return RingElement(x.context(), terms);
}

bool is_self_adjoint(const RingElement& x) {
    for (const auto& [g, c] : x.terms())
        if (x.coefficient(x.context().inverse(g)) != std::conj(c)) return false;
    return true;
}

Complex power_trace(const RingElement& x, int k, int cap) {
    if (k < 0) throw std::invalid_argument("negative power");
    if (k > cap)
        throw ResourceError("power_trace exponent " + std::to_string(k) + " exceeds cap " +
                            std::to_string(cap));
    RingElement p = RingElement::scalar(x.context(), 1.0);
    for (int i = 0; i < k; ++i) p = p * x;
    return p.coefficient(x.context().identity());
}

RingElement project_ring(const std::shared_ptr<const QuotientChain>& chain, int level,
                         const RingElement& x) {
    if (!chain) throw std::invalid_argument("null quotient chain");
    if (x.context().is_quotient())
        throw std::invalid_argument("project_ring expects an element over the parent group");
    if (x.context().model.get() != chain->model().get())
        throw std::invalid_argument("element and chain use different group models");
    RingContext qctx = RingContext::quotient(chain, level);
    std::vector<std::pair<GroupElement, Complex>> terms;
    terms.reserve(x.terms().size());
    for (const auto& [g, c] : x.terms()) terms.emplace_back(g, c);
    return RingElement(std::move(qctx), terms);
}

SymmetrizedSupport::SymmetrizedSupport(RingContext ctx,
                                       std::vector<std::pair<GroupElement, Complex>> entries)
    : ctx_(std::move(ctx)) {
    std::map<GroupElement, Complex> by_elem;
    for (auto& [g, c] : entries) {
        GroupElement cg = ctx_.canonical(g);
        if (!by_elem.emplace(cg, c).second)
            throw std::invalid_argument("support elements must be pairwise distinct: " +
                                        cg.str() + " repeats");
    }
    for (const auto& [g, c] : by_elem) {
        GroupElement gi = ctx_.inverse(g);
        auto it = by_elem.find(gi);
        if (it == by_elem.end())
            throw std::invalid_argument("support not symmetric: missing inverse of " + g.str());
        if (it->second != std::conj(c))
            throw std::domain_error("coefficients not conjugate-paired at " + g.str() + " / " +
                                    gi.str() + ": " + format_complex(c) + " vs " +
                                    format_complex(it->second));
    }
    for (const auto& [g, c] : by_elem) {
        elements_.push_back(g);
        coefficients_.push_back(c);
    }
}

SymmetrizedSupport SymmetrizedSupport::extended_with(
    const std::vector<GroupElement>& extra) const {
    std::map<GroupElement, Complex> by_elem;
    for (std::size_t i = 0; i < elements_.size(); ++i)
        by_elem.emplace(elements_[i], coefficients_[i]);
    for (const GroupElement& g : extra) {
        GroupElement cg = ctx_.canonical(g);
        by_elem.emplace(cg, Complex(0.0, 0.0));
        by_elem.emplace(ctx_.inverse(cg), Complex(0.0, 0.0));
    }
    std::vector<std::pair<GroupElement, Complex>> entries(by_elem.begin(), by_elem.end());
    return SymmetrizedSupport(ctx_, std::move(entries));
}

RingElement SymmetrizedSupport::element() const {
    std::vector<std::pair<GroupElement, Complex>> terms;
    for (std::size_t i = 0; i < elements_.size(); ++i)
        terms.emplace_back(elements_[i], coefficients_[i]);
    return RingElement(ctx_, terms);
}

SymmetrizedSupport symmetrize(const RingElement& z) {
    for (const auto& [g, c] : z.terms()) {
        Complex ci = z.coefficient(z.context().inverse(g));
        if (ci != std::conj(c))
            throw std::domain_error("element is not self-adjoint: coefficient of " + g.str() +
                                    " is " + format_complex(c) + " but the inverse carries " +
                                    format_complex(ci) + " != its conjugate");
    }
    std::map<GroupElement, Complex> by_elem(z.terms().begin(), z.terms().end());
    for (const auto& [g, c] : z.terms())
        by_elem.emplace(z.context().inverse(g), Complex(0.0, 0.0));
    std::vector<std::pair<GroupElement, Complex>> entries(by_elem.begin(), by_elem.end());
    return SymmetrizedSupport(z.context(), std::move(entries));
}

SymmetrizedSupport project_support(const SymmetrizedSupport& sym,
                                   const std::shared_ptr<const QuotientChain>& chain,
                                   int level) {
    if (!chain) throw std::invalid_argument("null quotient chain");
    if (sym.context().is_quotient())
        throw std::invalid_argument("project_support expects a support over the parent group");
    if (sym.context().model.get() != chain->model().get())
        throw std::invalid_argument("support and chain use different group models");
    RingContext qctx = RingContext::quotient(chain, level);
    std::map<GroupElement, std::vector<Complex>> acc;
    for (std::size_t i = 0; i < sym.size(); ++i)
        acc[qctx.canonical(sym.elements()[i])].push_back(sym.coefficients()[i]);
    std::vector<std::pair<GroupElement, Complex>> entries;
    entries.reserve(acc.size());
    for (const auto& [g, parts] : acc) entries.emplace_back(g, canonical_sum(parts));
    return SymmetrizedSupport(std::move(qctx), std::move(entries));
}

} // namespace lcmg
