#include "lcmg/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lcmg {

bool ConvergenceReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ReportCheck& c) { return c.pass; });
}

std::vector<double> ConvergenceReport::betti_sequence() const {
    std::vector<double> out;
    for (const LevelRecord& rec : levels)
        if (rec.sdf_computed) out.push_back(rec.betti);
    return out;
}

std::vector<double> continuity_grid(const std::vector<double>& atom_lambdas,
                                    const std::vector<double>& grid,
                                    double exclusion_delta) {
    std::vector<double> kept;
    kept.reserve(grid.size());
    for (double lambda : grid) {
        bool excluded = std::abs(lambda) < exclusion_delta;
        for (double atom : atom_lambdas)
            if (std::abs(lambda - atom) < exclusion_delta) {
                excluded = true;
                break;
            }
        if (!excluded) kept.push_back(lambda);
    }
    return kept;
}

namespace {

struct SharedRunData {
    std::shared_ptr<const QuotientChain> chain;
    SymmetrizedSupport sym;
    std::shared_ptr<const Lcmg> certify_ball;              // radius = certify cap
    std::vector<std::pair<GroupElement, int>> word_layers; // radius = 2*cap + 1
    const ChainRunConfig* cfg = nullptr;
    std::vector<double> grid;
    std::vector<bool> excluded;
    std::vector<double> oracle_sdf; // empty when unavailable
};

int word_bound_radius(const SharedRunData& shared, int level) {
    // Least word length of a nonidentity kernel element within the scanned
    // ball; the bound certifies r while 2r+1 stays below it.
    int min_len = -1;
    for (const auto& [g, len] : shared.word_layers) {
        if (len == 0) continue;
        if (shared.chain->in_kernel(level, g)) {
            min_len = len;
            break; // layers are scanned in increasing distance
        }
    }
    if (min_len < 0) return shared.cfg->certify_radius_cap;
    if (min_len <= 1) return -1; // a generator already dies in the quotient
    return std::min(shared.cfg->certify_radius_cap, (min_len - 2) / 2);
}

LevelRecord run_level(const SharedRunData& shared, int level) {
    const ChainRunConfig& cfg = *shared.cfg;
    LevelRecord rec;
    rec.level = level;
    if (shared.chain->is_modular()) rec.modulus = shared.chain->modulus(level).str();
    rec.order = shared.chain->quotient_order(level).convert_to<std::uint64_t>();

    CayleyBuild build = cayley_lcmg_finite(shared.chain, level, shared.sym, cfg.order_cap);
    rec.restricted = build.restricted;
    auto graph = std::make_shared<const Lcmg>(std::move(build.graph));
    MarkovOperator op(graph);

    rec.moments.reserve(static_cast<std::size_t>(cfg.max_moment) + 1);
    for (int k = 0; k <= cfg.max_moment; ++k)
        rec.moments.push_back(operator_moment(op, k, cfg.max_moment).real());

    MetricResult metric = metric_D(*graph, *shared.certify_ball, cfg.certify_radius_cap);
    rec.certified_radius = metric.certified_radius;
    rec.certified_capped = metric.capped;
    rec.metric_value = metric.value;
    rec.word_bound_radius = word_bound_radius(shared, level);

    if (static_cast<std::size_t>(op.dim()) <= cfg.eigen_dim_cap) {
        KestenMeasure mu = kesten_measure(op, -1, cfg.eigen_dim_cap);
        SpectralDensityFunction sdf = sdf_from_measure(mu);
        rec.sdf_computed = true;
        rec.betti = sdf.betti();
        rec.sdf.reserve(shared.grid.size());
        for (double lambda : shared.grid) rec.sdf.push_back(sdf(lambda));
        if (!shared.oracle_sdf.empty()) {
            double dev = 0.0;
            for (std::size_t i = 0; i < shared.grid.size(); ++i)
                if (!shared.excluded[i])
                    dev = std::max(dev, std::abs(rec.sdf[i] - shared.oracle_sdf[i]));
            rec.oracle_deviation = dev;
        }
    }
    return rec;
}

void assemble_checks(ConvergenceReport& report, const ChainRunConfig& cfg) {
    // Moment stability per degree: once a level certifies radius >= k its
    // k-th moment must equal the limit walk moment.
    for (int k = 0; k <= cfg.max_moment; ++k) {
        ReportCheck check;
        check.name = "moment-stability k=" + std::to_string(k);
        check.pass = true;
        int used = 0;
        for (const LevelRecord& rec : report.levels) {
            if (rec.certified_radius < k) continue;
            ++used;
            double quotient = rec.moments[static_cast<std::size_t>(k)];
            double limit = report.limit_moments[static_cast<std::size_t>(k)];
            if (!relatively_close(quotient, limit, 1e-9)) {
                check.pass = false;
                check.detail += (check.detail.empty() ? "" : "; ") + std::string("level ") +
                                std::to_string(rec.level) + ": " + format_double(quotient) +
                                " vs " + format_double(limit);
            }
        }
        if (check.pass)
            check.detail = std::to_string(used) + " certified level(s) agree with the limit";
        report.checks.push_back(std::move(check));
    }

    ReportCheck mono{"certified-radius-monotone", true, ""};
    for (std::size_t i = 1; i < report.levels.size(); ++i)
        if (report.levels[i].certified_radius < report.levels[i - 1].certified_radius) {
            mono.pass = false;
            mono.detail += "level " + std::to_string(report.levels[i].level) + " drops to " +
                           std::to_string(report.levels[i].certified_radius) + "; ";
        }
    if (mono.pass) mono.detail = "certified radii nondecreasing across levels";
    report.checks.push_back(std::move(mono));

    ReportCheck bound{"certified-matches-word-bound", true, ""};
    for (const LevelRecord& rec : report.levels)
        if (rec.certified_radius != rec.word_bound_radius) {
            bound.pass = false;
            bound.detail += "level " + std::to_string(rec.level) + ": certified " +
                            std::to_string(rec.certified_radius) + " vs bound " +
                            std::to_string(rec.word_bound_radius) + "; ";
        }
    if (bound.pass) bound.detail = "kernel word-length bound reproduces every certified radius";
    report.checks.push_back(std::move(bound));

    if (report.oracle_available) {
        std::vector<double> devs;
        for (const LevelRecord& rec : report.levels)
            if (rec.sdf_computed && !std::isnan(rec.oracle_deviation))
                devs.push_back(rec.oracle_deviation);
        if (devs.size() >= 3) {
            ReportCheck trend{"sdf-deviation-trend", true, ""};
            double last = devs[devs.size() - 1];
            double earlier = devs[devs.size() - 3];
            trend.pass = last <= earlier + 5e-3;
            trend.detail = "max grid deviation " + format_double(earlier) + " -> " +
                           format_double(last) + " over the last three levels";
            report.checks.push_back(std::move(trend));
        }
    }
}

} // namespace

ConvergenceReport run_chain(const std::shared_ptr<const QuotientChain>& chain,
                            const RingElement& w, const ChainRunConfig& cfg) {
    if (!chain) throw std::invalid_argument("null quotient chain");
    if (w.context().is_quotient())
        throw std::invalid_argument("run_chain expects w over the parent group");
    if (w.context().model.get() != chain->model().get())
        throw std::invalid_argument("element and chain use different group models");
    if (cfg.max_moment < 0 || cfg.max_moment > kDefaultMomentCap)
        throw ResourceError("moment degree cap " + std::to_string(cfg.max_moment) +
                            " outside [0, " + std::to_string(kDefaultMomentCap) + "]");
    const int levels = cfg.levels > 0 ? std::min(cfg.levels, chain->levels()) : chain->levels();

    ConvergenceReport report;
    report.model_name = chain->model()->name();
    report.element_text = w.str();
    report.max_moment = cfg.max_moment;
    report.grid = cfg.lambda_grid;

    RingElement z = w * involution(w);

    SharedRunData shared{chain, symmetrize(z), nullptr, {}, &cfg, cfg.lambda_grid, {}, {}};

    for (int k = 0; k <= cfg.max_moment; ++k)
        report.limit_moments.push_back(
            moment_by_walks(shared.sym, k, cfg.max_moment,
                            std::max(cfg.ball_radius_cap, cfg.max_moment), cfg.ball_size_cap)
                .real());

    Ball certify = cayley_ball_infinite(shared.sym, cfg.certify_radius_cap,
                                        cfg.certify_radius_cap, cfg.ball_size_cap);
    shared.certify_ball = std::make_shared<const Lcmg>(std::move(certify.graph));
    shared.word_layers =
        cayley_ball_layers(shared.sym, 2 * cfg.certify_radius_cap + 1,
                           2 * cfg.certify_radius_cap + 1, cfg.ball_size_cap);

    const auto* lattice = dynamic_cast<const IntegerLattice*>(chain->model().get());
    std::vector<double> atom_lambdas;
    if (lattice && lattice->dim() <= 3 && !w.is_zero()) {
        report.oracle_available = true;
        for (const QuadratureValue& q : torus_sdf(w, cfg.lambda_grid)) {
            report.oracle_sdf.push_back(q.value);
            report.oracle_delta.push_back(q.refinement_delta);
        }
        atom_lambdas = torus_sdf_atoms(w);
        shared.oracle_sdf = report.oracle_sdf;
    }
    report.grid_excluded.assign(report.grid.size(), false);
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        if (std::abs(report.grid[i]) < cfg.continuity_exclusion) report.grid_excluded[i] = true;
        for (double atom : atom_lambdas)
            if (std::abs(report.grid[i] - atom) < cfg.continuity_exclusion)
                report.grid_excluded[i] = true;
    }
    shared.excluded = report.grid_excluded;

    const int threads = std::max(1, cfg.threads);
    std::vector<LevelRecord> records;
    std::vector<std::string> level_warnings(static_cast<std::size_t>(levels));
    std::vector<bool> completed(static_cast<std::size_t>(levels), false);
    std::vector<LevelRecord> slots(static_cast<std::size_t>(levels));
    for (int base = 0; base < levels; base += threads) {
        const int batch = std::min(threads, levels - base);
        std::vector<std::future<LevelRecord>> futures;
        futures.reserve(static_cast<std::size_t>(batch));
        for (int i = 0; i < batch; ++i)
            futures.push_back(std::async(
                batch == 1 ? std::launch::deferred : std::launch::async,
                [&shared, level = base + i] { return run_level(shared, level); }));
        for (int i = 0; i < batch; ++i) {
            const int level = base + i;
            try {
                slots[static_cast<std::size_t>(level)] = futures[static_cast<std::size_t>(i)].get();
                completed[static_cast<std::size_t>(level)] = true;
            } catch (const ResourceError& e) {
                level_warnings[static_cast<std::size_t>(level)] =
                    "level " + std::to_string(level) + " skipped: " + e.what();
            }
        }
    }
    for (int level = 0; level < levels; ++level) {
        if (completed[static_cast<std::size_t>(level)]) {
            if (slots[static_cast<std::size_t>(level)].restricted)
                report.warnings.push_back(
                    "level " + std::to_string(level) +
                    ": support does not generate the quotient; basepoint component used");
            report.levels.push_back(std::move(slots[static_cast<std::size_t>(level)]));
        } else {
            report.warnings.push_back(level_warnings[static_cast<std::size_t>(level)]);
        }
    }

    assemble_checks(report, cfg);
    return report;
}

std::string report_to_json(const ConvergenceReport& report) {
    nlohmann::ordered_json j;
    j["model"] = report.model_name;
    j["element"] = report.element_text;
    j["max_moment"] = report.max_moment;
    j["grid"] = report.grid;
    j["grid_excluded"] = report.grid_excluded;
    j["limit_moments"] = report.limit_moments;
    j["oracle_available"] = report.oracle_available;
    if (report.oracle_available) {
        j["oracle_sdf"] = report.oracle_sdf;
        j["oracle_delta"] = report.oracle_delta;
    }
    j["levels"] = nlohmann::ordered_json::array();
    for (const LevelRecord& rec : report.levels) {
        nlohmann::ordered_json lj;
        lj["level"] = rec.level;
        if (!rec.modulus.empty()) lj["modulus"] = rec.modulus;
        lj["order"] = rec.order;
        lj["restricted"] = rec.restricted;
        lj["certified_radius"] = rec.certified_radius;
        lj["certified_capped"] = rec.certified_capped;
        lj["metric_value"] = rec.metric_value;
        lj["word_bound_radius"] = rec.word_bound_radius;
        lj["moments"] = rec.moments;
        lj["sdf_computed"] = rec.sdf_computed;
        if (rec.sdf_computed) {
            lj["sdf"] = rec.sdf;
            lj["betti"] = rec.betti;
            if (!std::isnan(rec.oracle_deviation)) lj["oracle_deviation"] = rec.oracle_deviation;
        }
        j["levels"].push_back(std::move(lj));
    }
    j["warnings"] = report.warnings;
    j["checks"] = nlohmann::ordered_json::array();
    for (const ReportCheck& c : report.checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["all_pass"] = report.all_pass();
    return j.dump(2);
}

std::string report_to_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    os << "lambda,excluded";
    if (report.oracle_available) os << ",oracle";
    for (const LevelRecord& rec : report.levels)
        if (rec.sdf_computed)
            os << ",F[" << (rec.modulus.empty() ? "level" + std::to_string(rec.level)
                                                : "m=" + rec.modulus)
               << "]";
    os << "\n";
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        os << format_double(report.grid[i]) << "," << (report.grid_excluded[i] ? 1 : 0);
        if (report.oracle_available) os << "," << format_double(report.oracle_sdf[i]);
        for (const LevelRecord& rec : report.levels)
            if (rec.sdf_computed) os << "," << format_double(rec.sdf[i]);
        os << "\n";
    }
    return os.str();
}

namespace {

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string metric_text(const LevelRecord& rec) {
    if (rec.certified_radius < 0) return "1";
    std::string frac = "1/" + std::to_string(rec.certified_radius + 1);
    return rec.certified_capped ? "<=" + frac : frac;
}

} // namespace

std::string report_to_text(const ConvergenceReport& report) {
    std::ostringstream os;
    os << "chain experiment: model " << report.model_name << ", w = " << report.element_text
       << "\n";
    os << "limit moments (walks):";
    for (double m : report.limit_moments) os << " " << format_double(m);
    os << "\n\n";

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"level", "order", "certified", "bound", "metric", "betti", "oracle-dev"});
    for (const LevelRecord& rec : report.levels) {
        std::string label = std::to_string(rec.level);
        if (!rec.modulus.empty()) label += " (m=" + rec.modulus + ")";
        rows.push_back({label, std::to_string(rec.order),
                        std::to_string(rec.certified_radius) +
                            (rec.certified_capped ? "+" : ""),
                        std::to_string(rec.word_bound_radius), metric_text(rec),
                        rec.sdf_computed ? short_number(rec.betti) : "-",
                        rec.sdf_computed && !std::isnan(rec.oracle_deviation)
                            ? short_number(rec.oracle_deviation)
                            : "-"});
    }
    std::vector<std::size_t> widths(rows.front().size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << row[c];
            if (c + 1 < row.size())
                for (std::size_t pad = row[c].size(); pad < widths[c] + 2; ++pad) os << ' ';
        }
        os << "\n";
    }

    std::vector<double> betti = report.betti_sequence();
    if (!betti.empty()) {
        os << "\nbetti:";
        for (double b : betti) os << " " << short_number(b);
        os << "\n";
    }
    for (const std::string& warning : report.warnings) os << "warning: " << warning << "\n";
    os << "\n";
    for (const ReportCheck& c : report.checks)
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail << "\n";
    os << (report.all_pass() ? "ALL CHECKS PASS" : "CHECK FAILURES PRESENT") << "\n";
    return os.str();
}

} // namespace lcmg
