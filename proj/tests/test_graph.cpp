#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "lcmg/graph.hpp"

using namespace lcmg;

namespace {

struct ZFixture {
    std::shared_ptr<IntegerLattice> model = std::make_shared<IntegerLattice>(1);
    std::shared_ptr<QuotientChain> chain =
        std::make_shared<QuotientChain>(QuotientChain::powers(model, 2, 10));
    RingContext ctx = RingContext::group(model);

    RingElement z() const {
        RingElement t = RingElement::monomial(ctx, GroupElement::from_ints({1}), 1.0);
        RingElement tinv = RingElement::monomial(ctx, GroupElement::from_ints({-1}), 1.0);
        return RingElement::scalar(ctx, 2.0) - t - tinv;
    }
};

bool witness_is_isomorphism(const Lcmg& a, const Lcmg& b, const std::vector<int>& witness) {
    if (witness.size() != static_cast<std::size_t>(a.vertex_count())) return false;
    std::vector<int> seen(static_cast<std::size_t>(b.vertex_count()), 0);
    for (int img : witness) {
        if (img < 0 || img >= b.vertex_count()) return false;
        if (seen[static_cast<std::size_t>(img)]++) return false;
    }
    if (witness[static_cast<std::size_t>(a.basepoint())] != b.basepoint()) return false;
    std::size_t edges_checked = 0;
    for (int u = 0; u < a.vertex_count(); ++u)
        for (const LcmgEdge& e : a.out_edges(u)) {
            auto l = b.label(witness[static_cast<std::size_t>(u)],
                             witness[static_cast<std::size_t>(e.to)]);
            if (!l || !complex_close(*l, e.label)) return false;
            ++edges_checked;
        }
    return edges_checked == b.edge_count();
}

Lcmg permuted_copy(const Lcmg& g, std::mt19937& rng) {
    std::vector<int> perm(static_cast<std::size_t>(g.vertex_count()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::tuple<int, int, Complex>> edges;
    for (int u = 0; u < g.vertex_count(); ++u)
        for (const LcmgEdge& e : g.out_edges(u))
            edges.emplace_back(perm[static_cast<std::size_t>(u)],
                               perm[static_cast<std::size_t>(e.to)], e.label);
    std::vector<std::string> names(static_cast<std::size_t>(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v)
        names[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = g.vertex_name(v);
    return Lcmg(g.vertex_count(), perm[static_cast<std::size_t>(g.basepoint())],
                std::move(names), edges);
}

Lcmg random_graph(std::mt19937& rng) {
    std::uniform_int_distribution<int> size(3, 8);
    const int n = size(rng);
    const Complex labels[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {2, 0}, {0.5, 0.5}};
    std::uniform_int_distribution<int> pick(0, 5);
    std::vector<std::tuple<int, int, Complex>> edges;
    // spanning path from the basepoint keeps everything reachable
    for (int v = 1; v < n; ++v) edges.emplace_back(v - 1, v, labels[pick(rng)]);
    std::uniform_int_distribution<int> vertex(0, n - 1);
    std::set<std::pair<int, int>> used;
    for (int v = 1; v < n; ++v) used.emplace(v - 1, v);
    for (int extra = 0; extra < n; ++extra) {
        int u = vertex(rng), v = vertex(rng);
        if (used.emplace(u, v).second) edges.emplace_back(u, v, labels[pick(rng)]);
    }
    return Lcmg(n, 0, {}, edges);
}

} // namespace

TEST_CASE("cayley lcmg of 2 - t - t^{-1} mod 4 is the labelled 4-cycle") {
    ZFixture fx;
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 1, symmetrize(fx.z())); // m = 4
    const Lcmg& g = build.graph;
    CHECK_FALSE(build.restricted);
    REQUIRE(g.vertex_count() == 4);
    CHECK(g.basepoint() == 0);
    CHECK(g.edge_count() == 12);
    for (int v = 0; v < 4; ++v) {
        REQUIRE(g.label(v, v).has_value());
        CHECK(*g.label(v, v) == Complex(2.0, 0.0));
        CHECK(*g.label(v, (v + 1) % 4) == Complex(-1.0, 0.0));
        CHECK(*g.label(v, (v + 3) % 4) == Complex(-1.0, 0.0));
    }
}

TEST_CASE("mod 2 the generator cosets merge and labels sum") {
    ZFixture fx;
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 0, symmetrize(fx.z())); // m = 2
    const Lcmg& g = build.graph;
    REQUIRE(g.vertex_count() == 2);
    CHECK(*g.label(0, 0) == Complex(2.0, 0.0));
    CHECK(*g.label(1, 1) == Complex(2.0, 0.0));
    CHECK(*g.label(0, 1) == Complex(-2.0, 0.0));
    CHECK(*g.label(1, 0) == Complex(-2.0, 0.0));
}

TEST_CASE("non-generating support restricts to the basepoint component") {
    ZFixture fx;
    RingElement z = RingElement::scalar(fx.ctx, 1.0); // z = identity
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 2, symmetrize(z)); // m = 8
    CHECK(build.restricted);
    CHECK(build.full_order == 8);
    REQUIRE(build.graph.vertex_count() == 1);
    CHECK(*build.graph.label(0, 0) == Complex(1.0, 0.0));
}

TEST_CASE("infinite Cayley balls over Z are path segments") {
    ZFixture fx;
    Ball ball = cayley_ball_infinite(symmetrize(fx.z()), 2);
    REQUIRE(ball.graph.vertex_count() == 5); // 0, -1, 1, -2, 2
    CHECK(ball.graph.vertex_name(0) == "0");
    CHECK(ball.graph.vertex_name(1) == "-1");
    CHECK(ball.graph.vertex_name(2) == "1");
    CHECK(ball.graph.vertex_name(3) == "-2");
    CHECK(ball.graph.vertex_name(4) == "2");
    CHECK(*ball.graph.label(0, 2) == Complex(-1.0, 0.0));
    CHECK(*ball.graph.label(0, 0) == Complex(2.0, 0.0));

    Ball origin = cayley_ball_infinite(symmetrize(fx.z()), 0);
    CHECK(origin.graph.vertex_count() == 1);
    CHECK(origin.graph.label(0, 0).has_value()); // 1 is in S here

    RingElement no_id = fx.z() - RingElement::scalar(fx.ctx, 2.0);
    Ball bare = cayley_ball_infinite(symmetrize(no_id), 0);
    CHECK(bare.graph.vertex_count() == 1);
    CHECK_FALSE(bare.graph.label(0, 0).has_value());
}

TEST_CASE("heisenberg radius-1 ball has five vertices for the standard generators") {
    auto model = std::make_shared<HeisenbergGroup>();
    RingContext ctx = RingContext::group(model);
    std::vector<std::pair<GroupElement, Complex>> entries = {
        {GroupElement::from_ints({1, 0, 0}), Complex(1.0, 0.0)},
        {GroupElement::from_ints({-1, 0, 0}), Complex(1.0, 0.0)},
        {GroupElement::from_ints({0, 1, 0}), Complex(1.0, 0.0)},
        {GroupElement::from_ints({0, -1, 0}), Complex(1.0, 0.0)},
    };
    SymmetrizedSupport sym(ctx, entries);
    Ball ball = cayley_ball_infinite(sym, 1);
    CHECK(ball.graph.vertex_count() == 5);
}

TEST_CASE("ball radius caps raise resource errors") {
    ZFixture fx;
    CHECK_THROWS_AS(cayley_ball_infinite(symmetrize(fx.z()), 17), ResourceError);
    CHECK_THROWS_AS(cayley_ball_infinite(symmetrize(fx.z()), 5, 16, 3), ResourceError);
}

TEST_CASE("extract_ball takes the full subgraph within directed distance") {
    ZFixture fx;
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 1, symmetrize(fx.z())); // 4-cycle
    Ball b1 = extract_ball(build.graph, 1);
    CHECK(b1.graph.vertex_count() == 3);
    CHECK(b1.graph.edge_count() == 7); // three loops, 0<->1, 0<->3

    Ball whole = extract_ball(build.graph, 2);
    CHECK(whole.graph.vertex_count() == 4);
    CHECK(whole.graph.edge_count() == 12);
    Ball beyond = extract_ball(build.graph, 10);
    CHECK(beyond.graph.vertex_count() == 4);

    Ball b0 = extract_ball(build.graph, 0);
    CHECK(b0.graph.vertex_count() == 1);
    CHECK(*b0.graph.label(0, 0) == Complex(2.0, 0.0));
}

TEST_CASE("isomorphism holds for a graph against itself with identity witness") {
    ZFixture fx;
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 2, symmetrize(fx.z()));
    IsoResult res = lcmg_isomorphic(build.graph, build.graph);
    REQUIRE(res.isomorphic);
    CHECK(witness_is_isomorphism(build.graph, build.graph, res.witness));
}

TEST_CASE("label perturbations beyond tolerance break isomorphism") {
    ZFixture fx;
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 1, symmetrize(fx.z()));
    std::vector<std::string> names;
    for (int v = 0; v < build.graph.vertex_count(); ++v)
        names.push_back(build.graph.vertex_name(v));

    auto perturbed = [&](Complex bump) {
        std::vector<std::tuple<int, int, Complex>> edges;
        for (int u = 0; u < build.graph.vertex_count(); ++u)
            for (const LcmgEdge& e : build.graph.out_edges(u))
                edges.emplace_back(u, e.to,
                                   e.label + ((u == 1 && e.to == 2) ? bump : Complex(0, 0)));
        return Lcmg(build.graph.vertex_count(), 0, names, edges);
    };

    CHECK_FALSE(lcmg_isomorphic(build.graph, perturbed(Complex(1e-6, 0))).isomorphic);
    CHECK(lcmg_isomorphic(build.graph, perturbed(Complex(1e-14, 0))).isomorphic);
}

TEST_CASE("quotient balls agree with the infinite ball once the kernel is long") {
    ZFixture fx;
    SymmetrizedSupport sym = symmetrize(fx.z());
    Ball infinite = cayley_ball_infinite(sym, 3);
    CayleyBuild m16 = cayley_lcmg_finite(fx.chain, 3, sym); // m = 16 > 2*3+1
    Ball quotient = extract_ball(m16.graph, 3);
    IsoResult res = lcmg_isomorphic(infinite.graph, quotient.graph);
    REQUIRE(res.isomorphic);
    CHECK(witness_is_isomorphism(infinite.graph, quotient.graph, res.witness));
}

TEST_CASE("metric_D follows the ball parametrization") {
    ZFixture fx;
    SymmetrizedSupport sym = symmetrize(fx.z());
    CayleyBuild m4 = cayley_lcmg_finite(fx.chain, 1, sym);

    SUBCASE("identical graphs cap out") {
        MetricResult res = metric_D(m4.graph, m4.graph, 5);
        CHECK(res.certified_radius == 5);
        CHECK(res.capped);
        CHECK(res.value == doctest::Approx(1.0 / 6.0));
    }

    SUBCASE("m=4 against the infinite ball resolves at radius 2") {
        Ball infinite = cayley_ball_infinite(sym, 6);
        MetricResult res = metric_D(m4.graph, infinite.graph, 6);
        CHECK(res.certified_radius == 1); // 4 > 2*1+1 but 4 < 2*2+1
        CHECK_FALSE(res.capped);
        CHECK(res.value == doctest::Approx(0.5));
    }

    SUBCASE("basepoint self-loop difference means distance one") {
        Lcmg a(2, 0, {}, {{0, 0, Complex(2, 0)}, {0, 1, Complex(1, 0)}, {1, 0, Complex(1, 0)}});
        Lcmg b(2, 0, {}, {{0, 0, Complex(3, 0)}, {0, 1, Complex(1, 0)}, {1, 0, Complex(1, 0)}});
        MetricResult res = metric_D(a, b, 4);
        CHECK(res.certified_radius == -1);
        CHECK(res.value == 1.0);
    }
}

TEST_CASE("graph involution reverses edges and conjugates labels") {
    Lcmg single(2, 0, {}, {{0, 1, Complex(0.0, 1.0)}});
    Lcmg rev = graph_involution(single);
    REQUIRE(rev.label(1, 0).has_value());
    CHECK(*rev.label(1, 0) == Complex(0.0, -1.0));
    CHECK_FALSE(rev.label(0, 1).has_value());
    CHECK_FALSE(is_self_involutive(single));

    ZFixture fx;
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 1, symmetrize(fx.z()));
    Lcmg fixed = graph_involution(build.graph);
    CHECK(lcmg_isomorphic(build.graph, fixed).isomorphic);
    CHECK(is_self_involutive(build.graph));

    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Lcmg g = random_graph(rng);
        Lcmg twice = graph_involution(graph_involution(g));
        REQUIRE(twice.vertex_count() == g.vertex_count());
        for (int u = 0; u < g.vertex_count(); ++u)
            for (const LcmgEdge& e : g.out_edges(u)) {
                REQUIRE(twice.label(u, e.to).has_value());
                CHECK(*twice.label(u, e.to) == e.label);
            }
        CHECK(twice.edge_count() == g.edge_count());
    }
}

TEST_CASE("every Cayley lcmg of a symmetrized element is self-involutive") {
    std::mt19937 rng(17);
    ZFixture fx;
    std::uniform_int_distribution<long long> coord(-2, 2);
    std::uniform_real_distribution<double> coeff(-1.5, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::pair<GroupElement, Complex>> terms;
        for (int i = 0; i < 3; ++i)
            terms.emplace_back(GroupElement::from_ints({coord(rng)}),
                               Complex(coeff(rng), coeff(rng)));
        RingElement w(fx.ctx, terms);
        RingElement z = w * involution(w);
        SymmetrizedSupport sym = symmetrize(z);
        for (int level = 0; level < 3; ++level) {
            CayleyBuild build = cayley_lcmg_finite(fx.chain, level, sym);
            CHECK(is_self_involutive(build.graph));
        }
        CHECK(is_self_involutive(cayley_ball_infinite(sym, 3).graph));
    }
}

TEST_CASE("isomorphism search survives uniform labels at moderate size") {
    // uniform labels give the backtracker no label anchors at all
    std::mt19937 rng(59);
    for (int trial = 0; trial < 5; ++trial) {
        std::uniform_int_distribution<int> size(20, 40);
        const int n = size(rng);
        std::vector<std::tuple<int, int, Complex>> edges;
        std::set<std::pair<int, int>> used;
        for (int v = 1; v < n; ++v) {
            std::uniform_int_distribution<int> parent(0, v - 1);
            int u = parent(rng);
            edges.emplace_back(u, v, Complex(1, 0));
            edges.emplace_back(v, u, Complex(1, 0));
            used.emplace(u, v);
            used.emplace(v, u);
        }
        std::uniform_int_distribution<int> vertex(0, n - 1);
        for (int extra = 0; extra < n / 2; ++extra) {
            int u = vertex(rng), v = vertex(rng);
            if (u == v) continue;
            if (used.emplace(u, v).second && used.emplace(v, u).second) {
                edges.emplace_back(u, v, Complex(1, 0));
                edges.emplace_back(v, u, Complex(1, 0));
            }
        }
        Lcmg g(n, 0, {}, edges);
        Lcmg h = permuted_copy(g, rng);
        IsoResult res = lcmg_isomorphic(g, h);
        REQUIRE(res.isomorphic);
        CHECK(witness_is_isomorphism(g, h, res.witness));

        // one label bumped out of the alphabet: no bijection can survive
        auto broken = edges;
        std::get<2>(broken[3]) = Complex(7, 0);
        Lcmg gb(n, 0, {}, broken);
        CHECK_FALSE(lcmg_isomorphic(g, gb).isomorphic);
    }
}

TEST_CASE("heisenberg quotient balls certify against the infinite ball") {
    auto model = std::make_shared<HeisenbergGroup>();
    auto chain = std::make_shared<QuotientChain>(QuotientChain::powers(model, 2, 3));
    RingContext ctx = RingContext::group(model);
    RingElement w = RingElement::scalar(ctx, 1.0) -
                    RingElement::monomial(ctx, GroupElement::from_ints({1, 0, 0}), 1.0) -
                    RingElement::monomial(ctx, GroupElement::from_ints({0, 1, 0}), 1.0);
    SymmetrizedSupport sym = symmetrize(w * involution(w));
    Ball infinite = cayley_ball_infinite(sym, 4);
    CayleyBuild m8 = cayley_lcmg_finite(chain, 2, sym); // order 512
    MetricResult metric = metric_D(m8.graph, infinite.graph, 4);
    // kernel words reach length 8, so radii up to 3 certify
    CHECK(metric.certified_radius == 3);
    CHECK_FALSE(metric.capped);
}

TEST_CASE("isomorphism is an equivalence relation on generated fixtures") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 15; ++trial) {
        Lcmg a = random_graph(rng);
        Lcmg b = permuted_copy(a, rng);
        Lcmg c = permuted_copy(b, rng);

        IsoResult aa = lcmg_isomorphic(a, a);
        CHECK(aa.isomorphic); // reflexive

        IsoResult ab = lcmg_isomorphic(a, b);
        REQUIRE(ab.isomorphic);
        CHECK(witness_is_isomorphism(a, b, ab.witness));
        IsoResult ba = lcmg_isomorphic(b, a);
        CHECK(ba.isomorphic); // symmetric

        IsoResult bc = lcmg_isomorphic(b, c);
        REQUIRE(bc.isomorphic);
        IsoResult ac = lcmg_isomorphic(a, c);
        CHECK(ac.isomorphic); // transitive
    }
}

TEST_CASE("lcmg JSON serialization is deterministic") {
    ZFixture fx;
    CayleyBuild build = cayley_lcmg_finite(fx.chain, 0, symmetrize(fx.z())); // m = 2
    const char* expected = R"({
  "vertices": [
    "0",
    "1"
  ],
  "basepoint": 0,
  "edges": [
    [
      0,
      0,
      2.0,
      0.0
    ],
    [
      0,
      1,
      -2.0,
      0.0
    ],
    [
      1,
      0,
      -2.0,
      0.0
    ],
    [
      1,
      1,
      2.0,
      0.0
    ]
  ]
})";
    CHECK(lcmg_to_json(build.graph) == expected);
    CHECK(lcmg_to_json(build.graph) == lcmg_to_json(build.graph));
}

TEST_CASE("certified radii match the kernel word-length bound on Z") {
    ZFixture fx;
    SymmetrizedSupport sym = symmetrize(fx.z());
    const int r_cap = 6;
    Ball infinite = cayley_ball_infinite(sym, r_cap);
    auto layers = cayley_ball_layers(sym, 2 * r_cap + 1, 2 * r_cap + 1);

    for (int level = 0; level < 5; ++level) { // m = 2..32
        CayleyBuild build = cayley_lcmg_finite(fx.chain, level, sym);
        MetricResult metric = metric_D(build.graph, infinite.graph, r_cap);

        int min_len = -1;
        for (const auto& [g, len] : layers) {
            if (len == 0) continue;
            if (fx.chain->in_kernel(level, g)) {
                min_len = len;
                break;
            }
        }
        int bound = min_len < 0 ? r_cap : std::min(r_cap, (min_len - 2) / 2);
        CHECK(metric.certified_radius == bound);

        // for the dyadic integers the bound is m/2 - 1
        long long m = fx.chain->modulus(level).convert_to<long long>();
        CHECK(metric.certified_radius == std::min<long long>(r_cap, m / 2 - 1));
    }
}

TEST_CASE("ball isomorphism radius grows along the chain as in the metric limit") {
    ZFixture fx;
    SymmetrizedSupport sym = symmetrize(fx.z());
    const int r_cap = 6;
    Ball infinite = cayley_ball_infinite(sym, r_cap);
    int previous = -1;
    for (int level = 0; level < 6; ++level) {
        CayleyBuild build = cayley_lcmg_finite(fx.chain, level, sym);
        MetricResult metric = metric_D(build.graph, infinite.graph, r_cap);
        CHECK(metric.certified_radius >= previous);
        previous = metric.certified_radius;
        // metric equivalence: balls agree to r exactly when D <= 1/(r+1)
        for (int r = 0; r <= r_cap; ++r) {
            bool iso = lcmg_isomorphic(extract_ball(build.graph, r).graph,
                                       extract_ball(infinite.graph, r).graph)
                           .isomorphic;
            CHECK(iso == (metric.certified_radius >= r));
            if (iso) CHECK(metric.value <= 1.0 / (r + 1));
        }
    }
    CHECK(previous == r_cap); // deep levels certify everything tested
}
