#include "lcmg/group.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lcmg {

GroupElement GroupElement::from_ints(std::initializer_list<long long> v) {
    std::vector<Integer> coords;
    coords.reserve(v.size());
    for (long long x : v) coords.emplace_back(x);
    return GroupElement(std::move(coords));
}

bool GroupElement::operator<(const GroupElement& o) const {
    return std::lexicographical_compare(coords_.begin(), coords_.end(),
                                        o.coords_.begin(), o.coords_.end());
}

std::string GroupElement::str() const {
    if (coords_.size() == 1) return coords_[0].str();
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << ',';
        os << coords_[i].str();
    }
    os << ')';
    return os.str();
}

GroupElement GroupModel::identity() const {
    return GroupElement(std::vector<Integer>(arity(), Integer(0)));
}

void GroupModel::validate(const GroupElement& g) const {
    if (g.arity() != arity()) {
        throw std::invalid_argument("element with " + std::to_string(g.arity()) +
                                    " coordinates does not belong to model " + name());
    }
}

bool GroupModel::lookup_generator(const std::string&, GroupElement&) const {
    return false;
}

IntegerLattice::IntegerLattice(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("lattice dimension must be positive");
}

std::string IntegerLattice::name() const {
    return "lattice(" + std::to_string(dim_) + ")";
}

GroupElement IntegerLattice::multiply(const GroupElement& a, const GroupElement& b) const {
    validate(a);
    validate(b);
    std::vector<Integer> c(arity());
    for (std::size_t i = 0; i < arity(); ++i) c[i] = a[i] + b[i];
    return GroupElement(std::move(c));
}

GroupElement IntegerLattice::inverse(const GroupElement& g) const {
    validate(g);
    std::vector<Integer> c(arity());
    for (std::size_t i = 0; i < arity(); ++i) c[i] = -g[i];
    return GroupElement(std::move(c));
}

std::vector<std::string> IntegerLattice::generator_names() const {
    if (dim_ == 1) return {"t"};
    std::vector<std::string> names;
    for (int i = 1; i <= dim_; ++i) names.push_back("t" + std::to_string(i));
    return names;
}

bool IntegerLattice::lookup_generator(const std::string& name, GroupElement& out) const {
    auto unit = [&](int axis) {
        std::vector<Integer> c(arity(), Integer(0));
        c[static_cast<std::size_t>(axis)] = 1;
        out = GroupElement(std::move(c));
        return true;
    };
    if (dim_ == 1 && (name == "t" || name == "t1")) return unit(0);
    if (name.size() >= 2 && name[0] == 't') {
        int axis = 0;
        try {
            axis = std::stoi(name.substr(1));
        } catch (...) {
            return false;
        }
        if (axis >= 1 && axis <= dim_) return unit(axis - 1);
    }
    return false;
}

GroupElement HeisenbergGroup::multiply(const GroupElement& a, const GroupElement& b) const {
    validate(a);
    validate(b);
    return GroupElement({a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]});
}

GroupElement HeisenbergGroup::inverse(const GroupElement& g) const {
    validate(g);
    return GroupElement({-g[0], -g[1], g[0] * g[1] - g[2]});
}

bool HeisenbergGroup::lookup_generator(const std::string& name, GroupElement& out) const {
    if (name == "x") {
        out = GroupElement::from_ints({1, 0, 0});
        return true;
    }
    if (name == "y") {
        out = GroupElement::from_ints({0, 1, 0});
        return true;
    }
    return false;
}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    const int n = static_cast<int>(table_.size());
    if (n == 0) throw std::invalid_argument("empty multiplication table");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("multiplication table is not square");
        for (int v : row)
            if (v < 0 || v >= n)
                throw std::invalid_argument("multiplication table entry out of range");
    }
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) ok = table_[e][i] == i && table_[i][e] == i;
        if (ok) {
            identity_ = e;
            break;
        }
    }
    if (identity_ < 0) throw std::invalid_argument("multiplication table has no identity");
    inverse_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (table_[i][j] == identity_ && table_[j][i] == identity_) {
                inverse_[i] = j;
                break;
            }
        }
        if (inverse_[i] < 0)
            throw std::invalid_argument("element " + std::to_string(i) + " has no inverse");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (table_[table_[i][j]][k] != table_[i][table_[j][k]])
                    throw std::invalid_argument("multiplication table is not associative");
}

std::string FiniteGroup::name() const {
    return "finite(" + std::to_string(table_.size()) + ")";
}

int FiniteGroup::index_of(const GroupElement& g) const {
    validate(g);
    if (g[0] < 0 || g[0] >= order())
        throw std::invalid_argument("finite group index out of range: " + g.str());
    return static_cast<int>(g[0].convert_to<long long>());
}

GroupElement FiniteGroup::multiply(const GroupElement& a, const GroupElement& b) const {
    return GroupElement({Integer(table_[index_of(a)][index_of(b)])});
}

GroupElement FiniteGroup::inverse(const GroupElement& g) const {
    return GroupElement({Integer(inverse_[index_of(g)])});
}

std::vector<std::string> FiniteGroup::generator_names() const {
    std::vector<std::string> names;
    for (int i = 0; i < order(); ++i) names.push_back("g" + std::to_string(i));
    return names;
}

bool FiniteGroup::lookup_generator(const std::string& name, GroupElement& out) const {
    if (name.size() < 2 || name[0] != 'g') return false;
    int idx = 0;
    try {
        idx = std::stoi(name.substr(1));
    } catch (...) {
        return false;
    }
    if (idx < 0 || idx >= order()) return false;
    out = GroupElement({Integer(idx)});
    return true;
}

namespace {

Integer canonical_residue(const Integer& v, const Integer& m) {
    Integer r = v % m;
    if (r < 0) r += m;
    return r;
}

} // namespace

QuotientChain::QuotientChain(std::shared_ptr<const GroupModel> model,
                             std::vector<Integer> moduli)
    : model_(std::move(model)), moduli_(std::move(moduli)) {
    if (!model_) throw std::invalid_argument("null group model");
    if (dynamic_cast<const FiniteGroup*>(model_.get()))
        throw std::invalid_argument("finite groups take explicit subgroup chains");
    if (moduli_.empty()) throw std::invalid_argument("empty modulus schedule");
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
        if (moduli_[i] < 2) throw std::invalid_argument("moduli must be >= 2");
        if (i > 0) {
            if (moduli_[i] <= moduli_[i - 1])
                throw std::invalid_argument("moduli must be strictly increasing");
            if (moduli_[i] % moduli_[i - 1] != 0)
                throw std::invalid_argument("modulus " + moduli_[i].str() +
                                            " is not divisible by " + moduli_[i - 1].str() +
                                            "; nesting K_n >= K_{n+1} would fail");
        }
    }
}

QuotientChain::QuotientChain(std::shared_ptr<const FiniteGroup> model,
                             std::vector<std::vector<int>> subgroups)
    : model_(model), finite_(std::move(model)), subgroups_(std::move(subgroups)) {
    if (!finite_) throw std::invalid_argument("null group model");
    if (subgroups_.empty()) throw std::invalid_argument("empty subgroup chain");
    const int n = finite_->order();
    for (auto& sub : subgroups_) {
        std::sort(sub.begin(), sub.end());
        sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
        if (sub.empty()) throw std::invalid_argument("empty subgroup in chain");
        std::set<int> members(sub.begin(), sub.end());
        if (!members.count(finite_->identity_index()))
            throw std::invalid_argument("subgroup does not contain the identity");
        for (int a : sub) {
            if (a < 0 || a >= n) throw std::invalid_argument("subgroup index out of range");
            if (!members.count(finite_->inv(a)))
                throw std::invalid_argument("subgroup not closed under inverse");
            for (int b : sub)
                if (!members.count(finite_->mul(a, b)))
                    throw std::invalid_argument("subgroup not closed under multiplication");
        }
        for (int g = 0; g < n; ++g)
            for (int k : sub)
                if (!members.count(finite_->mul(finite_->mul(g, k), finite_->inv(g))))
                    throw std::invalid_argument("subgroup is not normal");
        if (n % static_cast<int>(sub.size()) != 0)
            throw std::invalid_argument("subgroup order does not divide group order");
    }
    for (std::size_t i = 1; i < subgroups_.size(); ++i) {
        std::set<int> prev(subgroups_[i - 1].begin(), subgroups_[i - 1].end());
        for (int k : subgroups_[i])
            if (!prev.count(k))
                throw std::invalid_argument("subgroup chain is not nested (K_n >= K_{n+1})");
    }
    coset_rep_.resize(subgroups_.size());
    for (std::size_t lvl = 0; lvl < subgroups_.size(); ++lvl) {
        coset_rep_[lvl].assign(static_cast<std::size_t>(n), -1);
        for (int g = 0; g < n; ++g) {
            int rep = n;
            for (int k : subgroups_[lvl]) rep = std::min(rep, finite_->mul(g, k));
            coset_rep_[lvl][static_cast<std::size_t>(g)] = rep;
        }
    }
}

QuotientChain QuotientChain::powers(std::shared_ptr<const GroupModel> model, unsigned base,
                                    int levels) {
    if (base < 2) throw std::invalid_argument("schedule base must be >= 2");
    if (levels < 1) throw std::invalid_argument("schedule needs at least one level");
    std::vector<Integer> moduli;
    Integer m = 1;
    for (int i = 0; i < levels; ++i) {
        m *= base;
        moduli.push_back(m);
    }
    return QuotientChain(std::move(model), std::move(moduli));
}

int QuotientChain::levels() const {
    return static_cast<int>(is_modular() ? moduli_.size() : subgroups_.size());
}

void QuotientChain::check_level(int level) const {
    if (level < 0 || level >= levels())
        throw std::out_of_range("chain level " + std::to_string(level) + " out of range [0, " +
                                std::to_string(levels()) + ")");
}

Integer QuotientChain::quotient_order(int level) const {
    check_level(level);
    if (is_modular()) {
        Integer order = 1;
        for (std::size_t i = 0; i < model_->arity(); ++i) order *= moduli_[level];
        return order;
    }
    return Integer(finite_->order() / static_cast<int>(subgroups_[level].size()));
}

const Integer& QuotientChain::modulus(int level) const {
    check_level(level);
    if (!is_modular()) throw std::invalid_argument("subgroup chains have no modulus");
    return moduli_[static_cast<std::size_t>(level)];
}

GroupElement QuotientChain::project_rep(int level, const GroupElement& g) const {
    model_->validate(g);
    if (is_modular()) {
        const Integer& m = moduli_[static_cast<std::size_t>(level)];
        std::vector<Integer> c(g.arity());
        for (std::size_t i = 0; i < g.arity(); ++i) c[i] = canonical_residue(g[i], m);
        return GroupElement(std::move(c));
    }
    const int idx = static_cast<int>(g[0].convert_to<long long>());
    if (idx < 0 || idx >= finite_->order())
        throw std::invalid_argument("finite group index out of range: " + g.str());
    return GroupElement({Integer(coset_rep_[static_cast<std::size_t>(level)][idx])});
}

QuotientElement QuotientChain::project(int level, const GroupElement& g) const {
    check_level(level);
    return {level, project_rep(level, g)};
}

QuotientElement QuotientChain::quotient_multiply(int level, const QuotientElement& a,
                                                 const QuotientElement& b) const {
    check_level(level);
    if (a.level != level || b.level != level)
        throw std::invalid_argument("quotient elements from a different chain level");
    return {level, project_rep(level, model_->multiply(a.rep, b.rep))};
}

QuotientElement QuotientChain::quotient_inverse(int level, const QuotientElement& a) const {
    check_level(level);
    if (a.level != level)
        throw std::invalid_argument("quotient element from a different chain level");
    return {level, project_rep(level, model_->inverse(a.rep))};
}

QuotientElement QuotientChain::quotient_identity(int level) const {
    check_level(level);
    return {level, project_rep(level, model_->identity())};
}

std::vector<QuotientElement> QuotientChain::enumerate_quotient(int level,
                                                               std::size_t cap) const {
    check_level(level);
    const Integer order = quotient_order(level);
    if (order > Integer(cap))
        throw ResourceError("quotient order " + order.str() + " exceeds enumeration cap " +
                            std::to_string(cap));
    std::vector<QuotientElement> out;
    out.reserve(order.convert_to<std::size_t>());
    if (is_modular()) {
        const Integer& m = moduli_[static_cast<std::size_t>(level)];
        const std::size_t d = model_->arity();
        std::vector<Integer> cur(d, Integer(0));
        while (true) {
            out.push_back({level, GroupElement(cur)});
            std::size_t i = d;
            while (i > 0) {
                --i;
                cur[i] += 1;
                if (cur[i] < m) break;
                cur[i] = 0;
                if (i == 0) return out;
            }
        }
    }
    const auto& reps = coset_rep_[static_cast<std::size_t>(level)];
    const int id_rep = reps[static_cast<std::size_t>(finite_->identity_index())];
    std::set<int> distinct(reps.begin(), reps.end());
    out.push_back({level, GroupElement({Integer(id_rep)})});
    for (int rep : distinct)
        if (rep != id_rep) out.push_back({level, GroupElement({Integer(rep)})});
    return out;
}

bool QuotientChain::in_kernel(int level, const GroupElement& g) const {
    check_level(level);
    return project_rep(level, g) == project_rep(level, model_->identity());
}

} // namespace lcmg
