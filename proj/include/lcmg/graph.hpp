#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lcmg/numeric.hpp"
#include "lcmg/ring.hpp"

namespace lcmg {

/// Default cap on ball radii for infinite Cayley graphs.
inline constexpr int kDefaultRadiusCap = 16;

struct LcmgEdge {
    int to; // neighbour index; the source vertex for entries of in_edges()
    Complex label;
};

/// A labelled connected marked graph: finitely many vertices here (infinite
/// graphs are only ever handled through balls), a basepoint, complex edge
/// labels, at most one directed edge per ordered pair, at most one self-loop
/// per vertex. Vertices unreachable by directed paths from the basepoint sit
/// at distance infinity and are excluded from every ball.
class Lcmg {
public:
    Lcmg(int vertex_count, int basepoint, std::vector<std::string> vertex_names,
         const std::vector<std::tuple<int, int, Complex>>& edges,
         std::string description = "");

    int vertex_count() const { return static_cast<int>(out_.size()); }
    int basepoint() const { return basepoint_; }
    std::size_t edge_count() const { return edge_count_; }
    const std::string& vertex_name(int v) const { return names_[static_cast<std::size_t>(v)]; }
    const std::string& description() const { return description_; }

    /// Out-edges of v sorted by target index.
    const std::vector<LcmgEdge>& out_edges(int v) const { return out_[static_cast<std::size_t>(v)]; }
    /// In-edges of v sorted by source index; LcmgEdge::to holds the source.
    const std::vector<LcmgEdge>& in_edges(int v) const { return in_[static_cast<std::size_t>(v)]; }

    std::optional<Complex> label(int u, int v) const;

    /// Directed BFS distance from the basepoint; -1 where unreachable.
    std::vector<int> distances_from_basepoint() const;
    bool all_reachable() const;

private:
    int basepoint_;
    std::size_t edge_count_ = 0;
    std::vector<std::string> names_;
    std::vector<std::vector<LcmgEdge>> out_;
    std::vector<std::vector<LcmgEdge>> in_;
    std::string description_;
};

/// A ball B(X, v, r) with its provenance.
struct Ball {
    Lcmg graph;
    int radius = 0;
    std::string source;
};

/// Result of building a finite Cayley lcmg. When the projected support does
/// not generate the quotient the graph is restricted to the component of the
/// basepoint and `restricted` is set; the Kesten measure at the basepoint is
/// unaffected by the restriction.
struct CayleyBuild {
    Lcmg graph;
    bool restricted = false;
    std::size_t full_order = 0;
    std::vector<QuotientElement> vertices; // cosets in vertex order
};

/// Cayley lcmg of the projected support over G/K_n: vertex set the cosets,
/// an edge x -> x*s labelled lambda_s per projected generator, basepoint the
/// identity coset. Coefficients of generators whose cosets merge are summed.
CayleyBuild cayley_lcmg_finite(const std::shared_ptr<const QuotientChain>& chain, int level,
                               const SymmetrizedSupport& sym,
                               std::size_t order_cap = kDefaultOrderCap);

/// Exact ball of radius r around the identity in the infinite Cayley lcmg,
/// built by breadth-first expansion; vertices ordered by (BFS layer,
/// canonical element order).
Ball cayley_ball_infinite(const SymmetrizedSupport& sym, int radius,
                          int radius_cap = kDefaultRadiusCap,
                          std::size_t size_cap = kDefaultOrderCap);

/// Group elements of the vertices of cayley_ball_infinite, in vertex order.
std::vector<GroupElement> cayley_ball_elements(const SymmetrizedSupport& sym, int radius,
                                               int radius_cap = kDefaultRadiusCap,
                                               std::size_t size_cap = kDefaultOrderCap);

/// Ball vertices with their word-metric distance from the identity, in
/// vertex order; feeds the kernel-intersection checks behind certification.
std::vector<std::pair<GroupElement, int>> cayley_ball_layers(
    const SymmetrizedSupport& sym, int radius, int radius_cap = kDefaultRadiusCap,
    std::size_t size_cap = kDefaultOrderCap);

/// Full subgraph on the vertices at directed distance <= r from the
/// basepoint, ordered by (distance, original index).
Ball extract_ball(const Lcmg& g, int radius);

struct IsoResult {
    bool isomorphic = false;
    std::vector<int> witness; // a-vertex -> b-vertex when isomorphic
};

/// Basepoint-, edge- and label-preserving bijection between two finite
/// lcmg's; labels compared within an absolute per-component tolerance.
IsoResult lcmg_isomorphic(const Lcmg& a, const Lcmg& b, double tol = kLabelTol);

struct MetricResult {
    double value = 1.0;       // 1/(n*+1); 1 when even the radius-0 balls differ
    int certified_radius = -1; // n*: largest n <= r_max with isomorphic balls
    bool capped = false;       // isomorphism still held at r_max
};

/// The lcmg metric restricted to radii <= r_max: value 1/(n*+1) where n* is
/// the largest radius with isomorphic balls. `capped` distinguishes "agree
/// through r_max" from a resolved distance.
MetricResult metric_D(const Lcmg& a, const Lcmg& b, int r_max, double tol = kLabelTol);

/// Reverses every edge and conjugates its label.
Lcmg graph_involution(const Lcmg& g);

/// True when the graph equals its involution vertex-for-vertex.
bool is_self_involutive(const Lcmg& g, double tol = kLabelTol);

/// Deterministic JSON form {vertices, basepoint, edges:[[u,v,re,im]...]}.
std::string lcmg_to_json(const Lcmg& g);

} // namespace lcmg
