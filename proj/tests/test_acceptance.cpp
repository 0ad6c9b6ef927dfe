#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "lcmg/config.hpp"
#include "lcmg/convergence.hpp"
#include "lcmg/oracle.hpp"
#include "lcmg/spectral.hpp"

using namespace lcmg;

namespace {

class Criterion {
public:
    Criterion(int number, std::string name, double budget_seconds)
        : number_(number), name_(std::move(name)), budget_(budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    void require(bool condition) {
        CHECK(condition);
        pass_ = pass_ && condition;
    }

    ~Criterion() {
        double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
        bool in_budget = elapsed < budget_;
        CHECK(in_budget);
        bool aborted = std::uncaught_exceptions() > 0;
        std::printf("[ACCEPT] criterion %d (%s): %s (%.2f s, budget %.0f s)\n", number_,
                    name_.c_str(), pass_ && in_budget && !aborted ? "PASS" : "FAIL",
                    elapsed, budget_);
        std::fflush(stdout);
    }

private:
    int number_;
    std::string name_;
    double budget_;
    bool pass_ = true;
    std::chrono::steady_clock::time_point start_;
};

struct ZSetup {
    std::shared_ptr<IntegerLattice> model = std::make_shared<IntegerLattice>(1);
    std::shared_ptr<QuotientChain> chain =
        std::make_shared<QuotientChain>(QuotientChain::powers(model, 2, 10)); // m = 2..1024
    RingContext ctx = RingContext::group(model);

    RingElement w() const {
        return RingElement::scalar(ctx, 1.0) -
               RingElement::monomial(ctx, GroupElement::from_ints({1}), 1.0);
    }
};

struct HeisenbergSetup {
    std::shared_ptr<HeisenbergGroup> model = std::make_shared<HeisenbergGroup>();
    std::shared_ptr<QuotientChain> chain =
        std::make_shared<QuotientChain>(QuotientChain::powers(model, 2, 4)); // m = 2..16
    RingContext ctx = RingContext::group(model);

    RingElement w() const {
        return RingElement::scalar(ctx, 1.0) -
               RingElement::monomial(ctx, GroupElement::from_ints({1, 0, 0}), 1.0) -
               RingElement::monomial(ctx, GroupElement::from_ints({0, 1, 0}), 1.0);
    }
};

constexpr double kCentralBinomials[] = {1,   2,    6,     20,    70,    252,
                                        924, 3432, 12870, 48620, 184756};

void check_moment_stability(Criterion& crit, const ConvergenceReport& report) {
    for (const LevelRecord& rec : report.levels) {
        crit.require(rec.certified_radius == rec.word_bound_radius);
        for (int k = 0; k <= report.max_moment && k <= rec.certified_radius; ++k)
            crit.require(relatively_close(rec.moments[static_cast<std::size_t>(k)],
                                          report.limit_moments[static_cast<std::size_t>(k)],
                                          1e-9));
    }
    crit.require(report.all_pass());
}

} // namespace

TEST_CASE("criterion 1: moment triangle for w = 1 - t on Z") {
    Criterion crit(1, "moment triangle", 5.0);
    ZSetup zs;
    RingElement w = zs.w();
    RingElement z = w * involution(w);
    SymmetrizedSupport sym = symmetrize(z);
    for (int k = 0; k <= 10; ++k) {
        double walks = moment_by_walks(sym, k).real();
        double trace = power_trace(z, k).real();
        crit.require(relatively_close(walks, kCentralBinomials[k], 1e-9));
        crit.require(relatively_close(trace, kCentralBinomials[k], 1e-9));
        crit.require(relatively_close(walks, trace, 1e-9));

        QuadratureValue torus = torus_moment(w, k);
        double scale = std::max(1.0, std::abs(torus.value));
        crit.require(torus.refinement_delta <= 1e-8 * scale);
        crit.require(std::abs(torus.value - walks) <=
                     torus.refinement_delta + 1e-9 * scale);
    }
}

TEST_CASE("criterion 2: moment stability on dyadic Z and Heisenberg chains") {
    Criterion crit(2, "moment stability at certified radii", 60.0);

    ChainRunConfig cfg;
    cfg.max_moment = 6;
    cfg.certify_radius_cap = 6;
    cfg.eigen_dim_cap = 0; // this criterion is about moments, not spectra

    ZSetup zs;
    ConvergenceReport zreport = run_chain(zs.chain, zs.w(), cfg);
    crit.require(zreport.levels.size() == 10);
    check_moment_stability(crit, zreport);
    // dyadic word bound: radius m/2 - 1, capped at 6
    long long m = 1;
    for (const LevelRecord& rec : zreport.levels) {
        m *= 2;
        crit.require(rec.certified_radius == std::min<long long>(6, m / 2 - 1));
    }

    HeisenbergSetup hs;
    ConvergenceReport hreport = run_chain(hs.chain, hs.w(), cfg);
    crit.require(hreport.levels.size() == 4);
    check_moment_stability(crit, hreport);
    // kernel word lengths 2, 4, 8, 16 give radii 0, 1, 3, 6(capped)
    crit.require(hreport.levels[0].certified_radius == 0);
    crit.require(hreport.levels[1].certified_radius == 1);
    crit.require(hreport.levels[2].certified_radius == 3);
    crit.require(hreport.levels[3].certified_radius == 6);
}

TEST_CASE("criterion 3: pointwise SDF convergence to the arcsine law") {
    Criterion crit(3, "SDF convergence with exact limit", 60.0);
    ZSetup zs;
    ChainRunConfig cfg;
    cfg.lambda_grid = linspace(0.05, 2.0, 101);
    cfg.max_moment = 4;
    ConvergenceReport report = run_chain(zs.chain, zs.w(), cfg);
    crit.require(report.levels.size() == 10);
    crit.require(report.oracle_available);
    crit.require(report.all_pass());

    auto arcsine_deviation = [&](const LevelRecord& rec) {
        double dev = 0.0;
        for (std::size_t i = 0; i < report.grid.size(); ++i) {
            double exact = (2.0 / std::numbers::pi) * std::asin(report.grid[i] / 2.0);
            dev = std::max(dev, std::abs(rec.sdf[i] - exact));
        }
        return dev;
    };

    const LevelRecord& m256 = report.levels[7];
    const LevelRecord& m1024 = report.levels[9];
    crit.require(m256.order == 256);
    crit.require(m1024.order == 1024);
    crit.require(m256.sdf_computed);
    crit.require(m1024.sdf_computed);
    crit.require(arcsine_deviation(m256) <= 0.05);
    crit.require(arcsine_deviation(m1024) <= 0.02);
    // the quadrature oracle tells the same story
    crit.require(m256.oracle_deviation <= 0.05);
    crit.require(m1024.oracle_deviation <= 0.02);
}

TEST_CASE("criterion 4: Betti convergence along the chain") {
    Criterion crit(4, "l2-Betti convergence", 60.0);
    ZSetup zs;
    ChainRunConfig cfg;
    cfg.lambda_grid = linspace(0.05, 2.0, 11);
    cfg.max_moment = 4;
    ConvergenceReport report = run_chain(zs.chain, zs.w(), cfg);
    crit.require(report.levels.size() == 10);

    long long m = 1;
    double previous = 1.0;
    for (const LevelRecord& rec : report.levels) {
        m *= 2;
        crit.require(rec.sdf_computed);
        // circulant kernel is the constants: eigenvalue 0 simple
        crit.require(std::abs(rec.betti - 1.0 / static_cast<double>(m)) <= 1e-9);
        crit.require(rec.betti < previous);
        previous = rec.betti;
    }
    crit.require(previous <= 1.0 / 1024.0 + 1e-12); // tends to b2 = 0

    ConvergenceReport zero = run_chain(zs.chain, RingElement(zs.ctx), cfg);
    for (const LevelRecord& rec : zero.levels) crit.require(rec.betti == 1.0);
    ConvergenceReport identity =
        run_chain(zs.chain, RingElement::scalar(zs.ctx, 1.0), cfg);
    for (const LevelRecord& rec : identity.levels) crit.require(rec.betti == 0.0);
    crit.require(zero.levels.size() == 10);
    crit.require(identity.levels.size() == 10);
}

TEST_CASE("criterion 5: structural invariant suite") {
    Criterion crit(5, "structural invariants", 30.0);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coeff(-1.5, 1.5);

    auto random_w = [&](const RingContext& ctx, long long range) {
        std::uniform_int_distribution<long long> coord(-range, range);
        std::vector<std::pair<GroupElement, Complex>> terms;
        for (int i = 0; i < 3; ++i) {
            std::vector<Integer> c;
            for (std::size_t d = 0; d < ctx.model->arity(); ++d) c.emplace_back(coord(rng));
            terms.emplace_back(GroupElement(std::move(c)), Complex(coeff(rng), coeff(rng)));
        }
        return RingElement(ctx, terms);
    };

    ZSetup zs;
    auto hmodel = std::make_shared<HeisenbergGroup>();
    auto hchain = std::make_shared<QuotientChain>(QuotientChain::powers(hmodel, 2, 2));
    RingContext hctx = RingContext::group(hmodel);

    auto exercise = [&](const std::shared_ptr<const QuotientChain>& chain,
                        const RingContext& ctx, int levels, long long range) {
        for (int trial = 0; trial < 6; ++trial) {
            RingElement w = random_w(ctx, range);
            RingElement z = w * involution(w);
            SymmetrizedSupport sym = symmetrize(z); // self-adjointness holds exactly
            for (int level = 0; level < levels; ++level) {
                CayleyBuild build = cayley_lcmg_finite(chain, level, sym);
                crit.require(is_self_involutive(build.graph));

                MarkovOperator op = quotient_operator(chain, level, z);
                Eigen::MatrixXcd mat = op.dense();
                crit.require((mat - mat.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);

                KestenMeasure mu = kesten_measure(op);
                crit.require(std::abs(mu.total_mass() - 1.0) <= 1e-9);
                crit.require(mu.raw_eigenvalues().front() >= -1e-9 * op.norm_bound());

                SpectralDensityFunction sdf = sdf_from_measure(mu);
                double prev = -1.0;
                for (int i = 0; i <= 200; ++i) {
                    double lambda = 3.0 * i / 200.0;
                    double value = sdf(lambda);
                    crit.require(value >= prev && value <= 1.0 + 1e-12);
                    prev = value;
                }
                for (const SpectralAtom& atom : sdf.measure().atoms())
                    crit.require(sdf.measure().cdf(atom.location + 1e-12) ==
                                 doctest::Approx(sdf.measure().cdf(atom.location)));
            }
        }
    };
    exercise(zs.chain, zs.ctx, 3, 3);
    exercise(hchain, hctx, 2, 1);

    // isomorphism is an equivalence relation on generated fixtures
    SymmetrizedSupport sym = symmetrize(zs.w() * involution(zs.w()));
    Ball b3 = cayley_ball_infinite(sym, 3);
    Ball b3_again = cayley_ball_infinite(sym, 3);
    CayleyBuild m16 = cayley_lcmg_finite(zs.chain, 3, sym);
    Ball q3 = extract_ball(m16.graph, 3);
    crit.require(lcmg_isomorphic(b3.graph, b3.graph).isomorphic);
    crit.require(lcmg_isomorphic(b3.graph, b3_again.graph).isomorphic);
    crit.require(lcmg_isomorphic(b3.graph, q3.graph).isomorphic);
    crit.require(lcmg_isomorphic(q3.graph, b3.graph).isomorphic);   // symmetry
    crit.require(lcmg_isomorphic(q3.graph, b3_again.graph).isomorphic); // transitivity
    Ball q2 = extract_ball(m16.graph, 2);
    crit.require(!lcmg_isomorphic(b3.graph, q2.graph).isomorphic);
}

TEST_CASE("criterion 6: metric against the infinite ball along the schedule") {
    Criterion crit(6, "graph metric along the schedule", 10.0);
    ZSetup zs;
    SymmetrizedSupport sym = symmetrize(zs.w() * involution(zs.w()));
    const int r_cap = 7;
    Ball infinite = cayley_ball_infinite(sym, r_cap);

    double previous = 2.0;
    long long m = 1;
    for (int level = 0; level < 6; ++level) { // m = 2..64
        m *= 2;
        CayleyBuild build = cayley_lcmg_finite(zs.chain, level, sym);
        MetricResult metric = metric_D(build.graph, infinite.graph, r_cap);
        crit.require(metric.value <= previous);
        previous = metric.value;
        for (int r = 0; r <= 6; ++r) {
            bool d_small = metric.value <= 1.0 / (r + 1);
            bool bound = m > 2 * r + 1;
            crit.require(d_small == bound);
        }
    }
}
