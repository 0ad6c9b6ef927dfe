#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <string>
#include <vector>

#include "lcmg/errors.hpp"

namespace lcmg {

using Integer = boost::multiprecision::cpp_int;

/// Default cap on the order of an enumerated finite quotient.
inline constexpr std::size_t kDefaultOrderCap = 20000;

/// A group element in canonical form: a coordinate vector whose meaning is
/// fixed by the owning model. Lattice(d) uses d integers, Heisenberg uses
/// (a, b, c) for the matrix [[1,a,c],[0,1,b],[0,0,1]], finite groups use a
/// single table index. Equality is decidable by comparing representations.
class GroupElement {
public:
    GroupElement() = default;
    explicit GroupElement(std::vector<Integer> coords) : coords_(std::move(coords)) {}
    static GroupElement from_ints(std::initializer_list<long long> v);

    const std::vector<Integer>& coords() const { return coords_; }
    std::size_t arity() const { return coords_.size(); }
    const Integer& operator[](std::size_t i) const { return coords_[i]; }

    bool operator==(const GroupElement& o) const { return coords_ == o.coords_; }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }
    bool operator<(const GroupElement& o) const;

    /// "3" for arity 1, "(1,0,2)" otherwise.
    std::string str() const;

private:
    std::vector<Integer> coords_;
};

/// A concrete residually finite group with exact element arithmetic.
/// The built-in models are a closed set; this interface is the extension
/// point for further families.
class GroupModel {
public:
    virtual ~GroupModel() = default;

    virtual std::string name() const = 0;
    virtual std::size_t arity() const = 0;
    virtual GroupElement multiply(const GroupElement& a, const GroupElement& b) const = 0;
    virtual GroupElement inverse(const GroupElement& g) const = 0;

    GroupElement identity() const;

    /// Throws std::invalid_argument unless g is a canonical element of this model.
    virtual void validate(const GroupElement& g) const;

    /// Names the generator coordinates accepted by the expression parser,
    /// e.g. {"t"} or {"t1","t2"} or {"x","y"}.
    virtual std::vector<std::string> generator_names() const = 0;

    /// The group element for a named generator, if the name is known.
    virtual bool lookup_generator(const std::string& name, GroupElement& out) const;
};

/// Z^d with componentwise addition.
class IntegerLattice final : public GroupModel {
public:
    explicit IntegerLattice(int dim);
    std::string name() const override;
    std::size_t arity() const override { return static_cast<std::size_t>(dim_); }
    GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
    GroupElement inverse(const GroupElement& g) const override;
    std::vector<std::string> generator_names() const override;
    bool lookup_generator(const std::string& name, GroupElement& out) const override;
    int dim() const { return dim_; }

private:
    int dim_;
};

/// Discrete Heisenberg group: triples (a, b, c) encoding upper unitriangular
/// 3x3 integer matrices, (a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2+a1*b2).
class HeisenbergGroup final : public GroupModel {
public:
    std::string name() const override { return "heisenberg"; }
    std::size_t arity() const override { return 3; }
    GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
    GroupElement inverse(const GroupElement& g) const override;
    std::vector<std::string> generator_names() const override { return {"x", "y"}; }
    bool lookup_generator(const std::string& name, GroupElement& out) const override;
};

/// A finite group given by its multiplication table; elements are indices.
/// The table is checked for identity, inverses and associativity.
class FiniteGroup final : public GroupModel {
public:
    explicit FiniteGroup(std::vector<std::vector<int>> table);
    std::string name() const override;
    std::size_t arity() const override { return 1; }
    GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
    GroupElement inverse(const GroupElement& g) const override;
    std::vector<std::string> generator_names() const override;
    bool lookup_generator(const std::string& name, GroupElement& out) const override;

    int order() const { return static_cast<int>(table_.size()); }
    int identity_index() const { return identity_; }
    int mul(int i, int j) const { return table_[i][j]; }
    int inv(int i) const { return inverse_[i]; }

private:
    int index_of(const GroupElement& g) const;

    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_ = -1;
};

/// A coset of a chain level in canonical form: the level index plus the
/// canonical representative. Two cosets are equal iff representations are.
struct QuotientElement {
    int level = -1;
    GroupElement rep;

    bool operator==(const QuotientElement& o) const {
        return level == o.level && rep == o.rep;
    }
    bool operator!=(const QuotientElement& o) const { return !(*this == o); }
    bool operator<(const QuotientElement& o) const {
        if (level != o.level) return level < o.level;
        return rep < o.rep;
    }
};

/// A nested chain of finite index normal subgroups K_0 >= K_1 >= ... with
/// the induced canonical projections. Lattice and Heisenberg chains are
/// given by a divisibility schedule of moduli; finite groups by explicit
/// normal subgroups.
class QuotientChain {
public:
    /// Modular chain: moduli strictly increasing, each dividing the next.
    QuotientChain(std::shared_ptr<const GroupModel> model, std::vector<Integer> moduli);

    /// Subgroup chain for a finite group: each level lists the element
    /// indices of a normal subgroup, nested downwards.
    QuotientChain(std::shared_ptr<const FiniteGroup> model,
                  std::vector<std::vector<int>> subgroups);

    /// Convenience schedule m_n = base^n for n = 1..levels.
    static QuotientChain powers(std::shared_ptr<const GroupModel> model, unsigned base,
                                int levels);

    const std::shared_ptr<const GroupModel>& model() const { return model_; }
    int levels() const;

    /// Order of G/K_n; exact.
    Integer quotient_order(int level) const;

    /// Modulus m_n of a modular chain (throws for subgroup chains).
    const Integer& modulus(int level) const;

    /// Canonical projection pi_n restricted to group elements.
    QuotientElement project(int level, const GroupElement& g) const;

    /// Product of two cosets at a level, in canonical form.
    QuotientElement quotient_multiply(int level, const QuotientElement& a,
                                      const QuotientElement& b) const;
    QuotientElement quotient_inverse(int level, const QuotientElement& a) const;
    QuotientElement quotient_identity(int level) const;

    /// All cosets of level n exactly once, identity coset first, then in
    /// canonical order. Throws ResourceError when the order exceeds cap.
    std::vector<QuotientElement> enumerate_quotient(int level,
                                                    std::size_t cap = kDefaultOrderCap) const;

    bool in_kernel(int level, const GroupElement& g) const;

    bool is_modular() const { return !moduli_.empty(); }

private:
    void check_level(int level) const;
    GroupElement project_rep(int level, const GroupElement& g) const;

    std::shared_ptr<const GroupModel> model_;
    std::vector<Integer> moduli_;                    // modular chains
    std::shared_ptr<const FiniteGroup> finite_;      // subgroup chains
    std::vector<std::vector<int>> subgroups_;        // sorted index lists
    std::vector<std::vector<int>> coset_rep_;        // [level][element] -> rep index
};

} // namespace lcmg
