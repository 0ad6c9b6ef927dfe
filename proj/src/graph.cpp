#include "lcmg/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace lcmg {

Lcmg::Lcmg(int vertex_count, int basepoint, std::vector<std::string> vertex_names,
           const std::vector<std::tuple<int, int, Complex>>& edges, std::string description)
    : basepoint_(basepoint), names_(std::move(vertex_names)), description_(std::move(description)) {
    if (vertex_count <= 0) throw std::invalid_argument("lcmg needs at least one vertex");
    if (basepoint < 0 || basepoint >= vertex_count)
        throw std::invalid_argument("basepoint index out of range");
    if (names_.empty()) {
        names_.reserve(static_cast<std::size_t>(vertex_count));
        for (int v = 0; v < vertex_count; ++v) names_.push_back(std::to_string(v));
    }
    if (static_cast<int>(names_.size()) != vertex_count)
        throw std::invalid_argument("vertex name count mismatch");
    out_.resize(static_cast<std::size_t>(vertex_count));
    in_.resize(static_cast<std::size_t>(vertex_count));
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v, l] : edges) {
        if (u < 0 || u >= vertex_count || v < 0 || v >= vertex_count)
            throw std::invalid_argument("edge endpoint out of range");
        if (!seen.emplace(u, v).second)
            throw std::invalid_argument("parallel directed edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ")");
        out_[static_cast<std::size_t>(u)].push_back({v, l});
        in_[static_cast<std::size_t>(v)].push_back({u, l});
        ++edge_count_;
    }
    auto by_to = [](const LcmgEdge& a, const LcmgEdge& b) { return a.to < b.to; };
    for (auto& adj : out_) std::sort(adj.begin(), adj.end(), by_to);
    for (auto& adj : in_) std::sort(adj.begin(), adj.end(), by_to);
}

std::optional<Complex> Lcmg::label(int u, int v) const {
    const auto& adj = out_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const LcmgEdge& e, int t) { return e.to < t; });
    if (it != adj.end() && it->to == v) return it->label;
    return std::nullopt;
}

std::vector<int> Lcmg::distances_from_basepoint() const {
    std::vector<int> dist(out_.size(), -1);
    std::deque<int> queue;
    dist[static_cast<std::size_t>(basepoint_)] = 0;
    queue.push_back(basepoint_);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (const LcmgEdge& e : out_[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(e.to)] < 0) {
                dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(e.to);
            }
        }
    }
    return dist;
}

bool Lcmg::all_reachable() const {
    auto d = distances_from_basepoint();
    return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

CayleyBuild cayley_lcmg_finite(const std::shared_ptr<const QuotientChain>& chain, int level,
                               const SymmetrizedSupport& sym, std::size_t order_cap) {
    SymmetrizedSupport proj = project_support(sym, chain, level);
    std::vector<QuotientElement> cosets = chain->enumerate_quotient(level, order_cap);
    std::map<GroupElement, int> index;
    for (std::size_t i = 0; i < cosets.size(); ++i)
        index.emplace(cosets[i].rep, static_cast<int>(i));

    std::vector<std::tuple<int, int, Complex>> edges;
    edges.reserve(cosets.size() * proj.size());
    for (std::size_t i = 0; i < cosets.size(); ++i) {
        for (std::size_t s = 0; s < proj.size(); ++s) {
            QuotientElement target = chain->quotient_multiply(
                level, cosets[i], {level, proj.elements()[s]});
            edges.emplace_back(static_cast<int>(i), index.at(target.rep),
                               proj.coefficients()[s]);
        }
    }
    std::vector<std::string> names;
    names.reserve(cosets.size());
    for (const auto& q : cosets) names.push_back(q.rep.str());
    Lcmg full(static_cast<int>(cosets.size()), 0, std::move(names), edges,
              "cayley lcmg over " + RingContext::quotient(chain, level).description());

    if (full.all_reachable())
        return {std::move(full), false, cosets.size(), std::move(cosets)};

    // Support does not generate the quotient: keep the basepoint component.
    std::vector<int> dist = full.distances_from_basepoint();
    std::vector<int> keep;
    for (int v = 0; v < full.vertex_count(); ++v)
        if (dist[static_cast<std::size_t>(v)] >= 0) keep.push_back(v);
    std::vector<int> remap(static_cast<std::size_t>(full.vertex_count()), -1);
    std::vector<std::string> sub_names;
    std::vector<QuotientElement> sub_cosets;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        remap[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
        sub_names.push_back(full.vertex_name(keep[i]));
        sub_cosets.push_back(cosets[static_cast<std::size_t>(keep[i])]);
    }
    std::vector<std::tuple<int, int, Complex>> sub_edges;
    for (int u : keep)
        for (const LcmgEdge& e : full.out_edges(u))
            if (remap[static_cast<std::size_t>(e.to)] >= 0)
                sub_edges.emplace_back(remap[static_cast<std::size_t>(u)],
                                       remap[static_cast<std::size_t>(e.to)], e.label);
    Lcmg restricted(static_cast<int>(keep.size()), 0, std::move(sub_names), sub_edges,
                    full.description() + " (restricted to basepoint component)");
    return {std::move(restricted), true, cosets.size(), std::move(sub_cosets)};
}

namespace {

std::vector<std::pair<GroupElement, int>> ball_vertices(const SymmetrizedSupport& sym,
                                                        int radius, int radius_cap,
                                                        std::size_t size_cap) {
    if (sym.context().is_quotient())
        throw std::invalid_argument("infinite Cayley balls need a support over the parent group");
    if (radius < 0) throw std::invalid_argument("negative ball radius");
    if (radius > radius_cap)
        throw ResourceError("ball radius " + std::to_string(radius) + " exceeds cap " +
                            std::to_string(radius_cap));
    const RingContext& ctx = sym.context();
    std::vector<std::pair<GroupElement, int>> order;
    std::set<GroupElement> visited;
    GroupElement id = ctx.identity();
    order.emplace_back(id, 0);
    visited.insert(id);
    std::vector<GroupElement> layer{id};
    for (int r = 1; r <= radius && !layer.empty(); ++r) {
        std::set<GroupElement> next;
        for (const GroupElement& u : layer)
            for (const GroupElement& s : sym.elements()) {
                GroupElement v = ctx.multiply(u, s);
                if (!visited.count(v)) next.insert(v);
            }
        layer.assign(next.begin(), next.end());
        for (const GroupElement& v : layer) {
            visited.insert(v);
            order.emplace_back(v, r);
            if (order.size() > size_cap)
                throw ResourceError("ball size exceeds cap " + std::to_string(size_cap));
        }
    }
    return order;
}

} // namespace

std::vector<GroupElement> cayley_ball_elements(const SymmetrizedSupport& sym, int radius,
                                               int radius_cap, std::size_t size_cap) {
    std::vector<std::pair<GroupElement, int>> layered =
        ball_vertices(sym, radius, radius_cap, size_cap);
    std::vector<GroupElement> out;
    out.reserve(layered.size());
    for (auto& [g, r] : layered) out.push_back(std::move(g));
    return out;
}

std::vector<std::pair<GroupElement, int>> cayley_ball_layers(const SymmetrizedSupport& sym,
                                                             int radius, int radius_cap,
                                                             std::size_t size_cap) {
    return ball_vertices(sym, radius, radius_cap, size_cap);
}

Ball cayley_ball_infinite(const SymmetrizedSupport& sym, int radius, int radius_cap,
                          std::size_t size_cap) {
    const RingContext& ctx = sym.context();
    std::vector<GroupElement> verts = cayley_ball_elements(sym, radius, radius_cap, size_cap);
    std::map<GroupElement, int> index;
    for (std::size_t i = 0; i < verts.size(); ++i)
        index.emplace(verts[i], static_cast<int>(i));
    std::vector<std::tuple<int, int, Complex>> edges;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t s = 0; s < sym.size(); ++s) {
            GroupElement v = ctx.multiply(verts[i], sym.elements()[s]);
            auto it = index.find(v);
            if (it != index.end())
                edges.emplace_back(static_cast<int>(i), it->second, sym.coefficients()[s]);
        }
    std::vector<std::string> names;
    names.reserve(verts.size());
    for (const auto& g : verts) names.push_back(g.str());
    Lcmg graph(static_cast<int>(verts.size()), 0, std::move(names), edges,
               "ball r=" + std::to_string(radius) + " of cayley lcmg over " +
                   ctx.description());
    return {std::move(graph), radius, "cayley lcmg over " + ctx.description() + " at identity"};
}

Ball extract_ball(const Lcmg& g, int radius) {
    if (radius < 0) throw std::invalid_argument("negative ball radius");
    std::vector<int> dist = g.distances_from_basepoint();
    std::vector<int> keep;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (dist[static_cast<std::size_t>(v)] >= 0 && dist[static_cast<std::size_t>(v)] <= radius)
            keep.push_back(v);
    std::stable_sort(keep.begin(), keep.end(), [&](int u, int v) {
        return dist[static_cast<std::size_t>(u)] < dist[static_cast<std::size_t>(v)];
    });
    std::vector<int> remap(static_cast<std::size_t>(g.vertex_count()), -1);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        remap[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
        names.push_back(g.vertex_name(keep[i]));
    }
    std::vector<std::tuple<int, int, Complex>> edges;
    for (int u : keep)
        for (const LcmgEdge& e : g.out_edges(u))
            if (remap[static_cast<std::size_t>(e.to)] >= 0)
                edges.emplace_back(remap[static_cast<std::size_t>(u)],
                                   remap[static_cast<std::size_t>(e.to)], e.label);
    Lcmg ball(static_cast<int>(keep.size()), 0, std::move(names), edges,
              "ball r=" + std::to_string(radius) + " of " +
                  (g.description().empty() ? "lcmg" : g.description()));
    return {std::move(ball), radius, g.description().empty() ? "lcmg" : g.description()};
}

namespace {

/// Backtracking isomorphism search with basepoint pinning. Vertices are
/// processed outward from the basepoint so every non-basepoint reachable
/// vertex has a mapped in-neighbour anchoring its candidate set.
class IsoSearch {
public:
    IsoSearch(const Lcmg& a, const Lcmg& b, double tol)
        : a_(a), b_(b), tol_(tol), da_(a.distances_from_basepoint()),
          db_(b.distances_from_basepoint()) {}

    IsoResult run() {
        const int n = a_.vertex_count();
        if (n != b_.vertex_count() || a_.edge_count() != b_.edge_count()) return {};
        std::vector<std::tuple<int, std::size_t, std::size_t>> sig_a, sig_b;
        for (int v = 0; v < n; ++v) {
            sig_a.emplace_back(da_[static_cast<std::size_t>(v)], a_.out_edges(v).size(),
                               a_.in_edges(v).size());
            sig_b.emplace_back(db_[static_cast<std::size_t>(v)], b_.out_edges(v).size(),
                               b_.in_edges(v).size());
        }
        std::sort(sig_a.begin(), sig_a.end());
        std::sort(sig_b.begin(), sig_b.end());
        if (sig_a != sig_b) return {};

        order_.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) order_[static_cast<std::size_t>(v)] = v;
        std::stable_sort(order_.begin(), order_.end(), [&](int u, int v) {
            auto key = [&](int w) {
                int d = da_[static_cast<std::size_t>(w)];
                return d < 0 ? std::numeric_limits<int>::max() : d;
            };
            return key(u) < key(v);
        });
        map_ab_.assign(static_cast<std::size_t>(n), -1);
        map_ba_.assign(static_cast<std::size_t>(n), -1);
        if (!extend(0)) return {};
        return {true, map_ab_};
    }

private:
    bool labels_close(Complex x, Complex y) const { return complex_close(x, y, tol_); }

    bool feasible(int x, int y) const {
        if (da_[static_cast<std::size_t>(x)] != db_[static_cast<std::size_t>(y)]) return false;
        if (a_.out_edges(x).size() != b_.out_edges(y).size()) return false;
        if (a_.in_edges(x).size() != b_.in_edges(y).size()) return false;
        std::size_t mapped_a = 0;
        for (const LcmgEdge& e : a_.out_edges(x)) {
            int img = e.to == x ? y : map_ab_[static_cast<std::size_t>(e.to)];
            if (img < 0) continue;
            auto l = b_.label(y, img);
            if (!l || !labels_close(*l, e.label)) return false;
            ++mapped_a;
        }
        std::size_t mapped_b = 0;
        for (const LcmgEdge& e : b_.out_edges(y))
            if (e.to == y || map_ba_[static_cast<std::size_t>(e.to)] >= 0) ++mapped_b;
        if (mapped_a != mapped_b) return false;

        mapped_a = 0;
        for (const LcmgEdge& e : a_.in_edges(x)) {
            int img = e.to == x ? y : map_ab_[static_cast<std::size_t>(e.to)];
            if (img < 0) continue;
            auto l = b_.label(img, y);
            if (!l || !labels_close(*l, e.label)) return false;
            ++mapped_a;
        }
        mapped_b = 0;
        for (const LcmgEdge& e : b_.in_edges(y))
            if (e.to == y || map_ba_[static_cast<std::size_t>(e.to)] >= 0) ++mapped_b;
        return mapped_a == mapped_b;
    }

    std::vector<int> candidates(int x) const {
        if (x == a_.basepoint()) return {b_.basepoint()};
        for (const LcmgEdge& e : a_.in_edges(x)) {
            if (e.to == x) continue;
            int anchor = map_ab_[static_cast<std::size_t>(e.to)];
            if (anchor < 0) continue;
            std::vector<int> cands;
            for (const LcmgEdge& f : b_.out_edges(anchor))
                if (f.to != anchor && map_ba_[static_cast<std::size_t>(f.to)] < 0 &&
                    labels_close(f.label, e.label))
                    cands.push_back(f.to);
            return cands;
        }
        for (const LcmgEdge& e : a_.out_edges(x)) {
            if (e.to == x) continue;
            int anchor = map_ab_[static_cast<std::size_t>(e.to)];
            if (anchor < 0) continue;
            std::vector<int> cands;
            for (const LcmgEdge& f : b_.in_edges(anchor))
                if (f.to != anchor && map_ba_[static_cast<std::size_t>(f.to)] < 0 &&
                    labels_close(f.label, e.label))
                    cands.push_back(f.to);
            return cands;
        }
        // No mapped neighbour (unreachable vertex): fall back to a full scan.
        std::vector<int> cands;
        for (int y = 0; y < b_.vertex_count(); ++y)
            if (map_ba_[static_cast<std::size_t>(y)] < 0) cands.push_back(y);
        return cands;
    }

    bool extend(std::size_t pos) {
        if (pos == order_.size()) return true;
        int x = order_[pos];
        for (int y : candidates(x)) {
            if (!feasible(x, y)) continue;
            map_ab_[static_cast<std::size_t>(x)] = y;
            map_ba_[static_cast<std::size_t>(y)] = x;
            if (extend(pos + 1)) return true;
            map_ab_[static_cast<std::size_t>(x)] = -1;
            map_ba_[static_cast<std::size_t>(y)] = -1;
        }
        return false;
    }

    const Lcmg& a_;
    const Lcmg& b_;
    double tol_;
    std::vector<int> da_, db_;
    std::vector<int> order_;
    std::vector<int> map_ab_, map_ba_;
};

} // namespace

IsoResult lcmg_isomorphic(const Lcmg& a, const Lcmg& b, double tol) {
    return IsoSearch(a, b, tol).run();
}

MetricResult metric_D(const Lcmg& a, const Lcmg& b, int r_max, double tol) {
    if (r_max < 0) throw std::invalid_argument("metric_D needs r_max >= 0");
    int certified = -1;
    for (int r = 0; r <= r_max; ++r) {
        Ball ba = extract_ball(a, r);
        Ball bb = extract_ball(b, r);
        if (!lcmg_isomorphic(ba.graph, bb.graph, tol).isomorphic) break;
        certified = r;
    }
    MetricResult res;
    res.certified_radius = certified;
    res.capped = certified == r_max;
    res.value = certified < 0 ? 1.0 : 1.0 / (certified + 1.0);
    return res;
}

Lcmg graph_involution(const Lcmg& g) {
    std::vector<std::tuple<int, int, Complex>> edges;
    edges.reserve(g.edge_count());
    for (int u = 0; u < g.vertex_count(); ++u)
        for (const LcmgEdge& e : g.out_edges(u))
            edges.emplace_back(e.to, u, std::conj(e.label));
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v) names.push_back(g.vertex_name(v));
    return Lcmg(g.vertex_count(), g.basepoint(), std::move(names), edges,
                g.description().empty() ? "" : g.description() + "^*");
}

bool is_self_involutive(const Lcmg& g, double tol) {
    for (int u = 0; u < g.vertex_count(); ++u)
        for (const LcmgEdge& e : g.out_edges(u)) {
            auto back = g.label(e.to, u);
            if (!back || !complex_close(*back, std::conj(e.label), tol)) return false;
        }
    return true;
}

std::string lcmg_to_json(const Lcmg& g) {
    nlohmann::ordered_json j;
    j["vertices"] = nlohmann::ordered_json::array();
    for (int v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(g.vertex_name(v));
    j["basepoint"] = g.basepoint();
    j["edges"] = nlohmann::ordered_json::array();
    for (int u = 0; u < g.vertex_count(); ++u)
        for (const LcmgEdge& e : g.out_edges(u)) {
            nlohmann::ordered_json edge = {u, e.to, e.label.real(), e.label.imag()};
            j["edges"].push_back(edge);
        }
    return j.dump(2);
}

} // namespace lcmg
