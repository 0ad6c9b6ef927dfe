#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lcmg/config.hpp"
#include "lcmg/convergence.hpp"
#include "lcmg/expr.hpp"
#include "lcmg/graph.hpp"
#include "lcmg/oracle.hpp"
#include "lcmg/spectral.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAcceptance = 2;
constexpr int kExitResource = 3;

struct CommonFlags {
    std::string config_path;
    std::string model;
    std::string w;
    std::string grid;
    std::string out;
    std::string format;
    int levels = -1;
    int k = -1;
    int certify_radius = -1;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--model", flags.model,
                    "model spec, e.g. lattice:1, lattice:2, heisenberg");
    cmd->add_option("--w", flags.w, "ring element expression, e.g. \"1 - t\"");
    cmd->add_option("--grid", flags.grid, "lambda grid min:max:count");
    cmd->add_option("--levels", flags.levels, "number of chain levels to run");
    cmd->add_option("--k", flags.k, "maximum moment degree");
    cmd->add_option("--certify-radius", flags.certify_radius,
                    "ball certification radius cap");
    cmd->add_option("--threads", flags.threads, "parallelism across levels");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--format", flags.format, "stdout format: text, json or csv");
}

json model_flag_to_json(const std::string& flag) {
    json spec;
    auto colon = flag.find(':');
    std::string kind = flag.substr(0, colon);
    spec["model"] = kind;
    if (kind == "lattice") spec["dim"] = colon == std::string::npos
                                             ? 1
                                             : std::stoi(flag.substr(colon + 1));
    return spec;
}

json assemble_config(const CommonFlags& flags) {
    json config = json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw std::invalid_argument("cannot open config file " + flags.config_path);
        in >> config;
    }
    if (!flags.model.empty()) {
        json spec = model_flag_to_json(flags.model);
        if (config.contains("model")) {
            for (auto& [key, value] : spec.items()) config["model"][key] = value;
        } else {
            config["model"] = spec;
        }
    }
    if (!flags.w.empty()) config["w"] = flags.w;
    if (!flags.grid.empty()) {
        std::istringstream gs(flags.grid);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(gs, part, ':')) parts.push_back(part);
        if (parts.size() != 3)
            throw std::invalid_argument("--grid expects min:max:count");
        config["grid"] = {{"min", std::stod(parts[0])},
                          {"max", std::stod(parts[1])},
                          {"count", std::stoi(parts[2])}};
    }
    if (flags.levels >= 0) config["levels"] = flags.levels;
    if (flags.k >= 0) config["k"] = flags.k;
    if (flags.certify_radius >= 0) config["certify_radius"] = flags.certify_radius;
    if (flags.threads >= 0) config["threads"] = flags.threads;
    if (!flags.out.empty()) config["out"] = flags.out;
    if (!flags.format.empty()) config["format"] = flags.format;
    if (!config.contains("threads")) {
        if (const char* env = std::getenv("LCMG_SPECTRA_THREADS")) {
            int t = std::stoi(env);
            if (t >= 1) config["threads"] = t;
        }
    }
    return config;
}

void write_file(const std::string& out_dir, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct MomentRow {
    int k = 0;
    double walks = 0.0;
    double trace = 0.0;
    bool has_torus = false;
    double torus = 0.0;
    double torus_delta = 0.0;
    bool pass = false;
};

int run_moments(const lcmg::Experiment& exp, bool inject_disagreement) {
    lcmg::RingElement z = exp.w * lcmg::involution(exp.w);
    lcmg::SymmetrizedSupport sym = lcmg::symmetrize(z);
    const auto* lattice = dynamic_cast<const lcmg::IntegerLattice*>(exp.model.get());
    const bool has_torus = lattice && lattice->dim() <= 3 && !exp.w.is_zero();

    std::vector<MomentRow> rows;
    bool all_pass = true;
    for (int k = 0; k <= exp.run.max_moment; ++k) {
        MomentRow row;
        row.k = k;
        row.walks = lcmg::moment_by_walks(sym, k, exp.run.max_moment,
                                          std::max(exp.run.ball_radius_cap, k),
                                          exp.run.ball_size_cap)
                        .real();
        if (inject_disagreement && k == std::min(1, exp.run.max_moment)) row.walks += 1e-3;
        row.trace = lcmg::power_trace(z, k, exp.run.max_moment).real();
        row.pass = lcmg::relatively_close(row.walks, row.trace, 1e-9);
        if (has_torus) {
            lcmg::QuadratureValue q = lcmg::torus_moment(exp.w, k);
            row.has_torus = true;
            row.torus = q.value;
            row.torus_delta = q.refinement_delta;
            double scale = std::max({1.0, std::abs(row.walks), std::abs(row.torus)});
            row.pass = row.pass &&
                       std::abs(row.torus - row.walks) <= q.refinement_delta + 1e-9 * scale;
        }
        all_pass = all_pass && row.pass;
        rows.push_back(row);
    }

    std::ostringstream text;
    text << "moments of z = w w^* for w = " << exp.w_text << "\n";
    text << "k,walks,trace";
    if (has_torus) text << ",torus,torus_delta";
    text << ",agree\n";
    for (const MomentRow& row : rows) {
        text << row.k << "," << lcmg::format_double(row.walks) << ","
             << lcmg::format_double(row.trace);
        if (row.has_torus)
            text << "," << lcmg::format_double(row.torus) << ","
                 << lcmg::format_double(row.torus_delta);
        text << "," << (row.pass ? "PASS" : "FAIL") << "\n";
    }
    text << (all_pass ? "oracle triangle: PASS" : "oracle triangle: FAIL") << "\n";

    std::cout << text.str();
    if (!exp.out_dir.empty()) write_file(exp.out_dir, "moments.csv", text.str());
    return all_pass ? kExitOk : kExitAcceptance;
}

int run_converge(const lcmg::Experiment& exp) {
    lcmg::ConvergenceReport report = lcmg::run_chain(exp.chain, exp.w, exp.run);
    report.element_text = exp.w_text;
    if (exp.format == "json")
        std::cout << lcmg::report_to_json(report) << "\n";
    else if (exp.format == "csv")
        std::cout << lcmg::report_to_csv(report);
    else
        std::cout << lcmg::report_to_text(report);
    if (!exp.out_dir.empty()) {
        write_file(exp.out_dir, "report.json", lcmg::report_to_json(report) + "\n");
        write_file(exp.out_dir, "report.csv", lcmg::report_to_csv(report));
        write_file(exp.out_dir, "report.txt", lcmg::report_to_text(report));
    }
    return report.all_pass() ? kExitOk : kExitAcceptance;
}

int run_graph(const lcmg::Experiment& exp, int level, int radius) {
    if (level < 0) level = exp.chain->levels() - 1;
    lcmg::RingElement z = exp.w * lcmg::involution(exp.w);
    lcmg::SymmetrizedSupport sym = lcmg::symmetrize(z);
    lcmg::CayleyBuild build =
        lcmg::cayley_lcmg_finite(exp.chain, level, sym, exp.run.order_cap);
    lcmg::Ball ball = lcmg::cayley_ball_infinite(sym, radius, std::max(radius, 16),
                                                 exp.run.ball_size_cap);
    lcmg::MetricResult metric = lcmg::metric_D(build.graph, ball.graph, radius);

    std::ostringstream text;
    if (build.restricted)
        text << "warning: support does not generate the quotient; "
                "basepoint component used\n";
    if (metric.certified_radius < 0) {
        text << "not isomorphic at any radius; D = 1\n";
    } else if (metric.capped) {
        text << "isomorphic through r=" << metric.certified_radius
             << " (all tested radii); D <= " << lcmg::format_double(metric.value) << "\n";
    } else {
        text << "isomorphic through r=" << metric.certified_radius << " only; D = "
             << lcmg::format_double(metric.value) << "\n";
    }
    std::cout << text.str();
    if (!exp.out_dir.empty()) {
        write_file(exp.out_dir, "quotient_lcmg.json", lcmg::lcmg_to_json(build.graph) + "\n");
        write_file(exp.out_dir, "infinite_ball.json", lcmg::lcmg_to_json(ball.graph) + "\n");
        write_file(exp.out_dir, "graph.txt", text.str());
    }
    return kExitOk;
}

int run_sdf(const lcmg::Experiment& exp, int level) {
    if (level < 0) level = exp.chain->levels() - 1;
    lcmg::RingElement z = exp.w * lcmg::involution(exp.w);
    lcmg::MarkovOperator op =
        lcmg::quotient_operator(exp.chain, level, z, exp.run.order_cap);
    lcmg::KestenMeasure mu = lcmg::kesten_measure(op, -1, exp.run.eigen_dim_cap);
    lcmg::SpectralDensityFunction sdf = lcmg::sdf_from_measure(mu);

    const auto* lattice = dynamic_cast<const lcmg::IntegerLattice*>(exp.model.get());
    const bool has_oracle = lattice && lattice->dim() <= 3 && !exp.w.is_zero();
    std::vector<lcmg::QuadratureValue> oracle;
    if (has_oracle) oracle = lcmg::torus_sdf(exp.w, exp.run.lambda_grid);

    std::ostringstream csv;
    csv << "lambda,F";
    if (has_oracle) csv << ",oracle";
    csv << "\n";
    for (std::size_t i = 0; i < exp.run.lambda_grid.size(); ++i) {
        csv << lcmg::format_double(exp.run.lambda_grid[i]) << ","
            << lcmg::format_double(sdf(exp.run.lambda_grid[i]));
        if (has_oracle) csv << "," << lcmg::format_double(oracle[i].value);
        csv << "\n";
    }
    std::cout << csv.str();
    if (!exp.out_dir.empty()) {
        write_file(exp.out_dir, "sdf.csv", csv.str());
        write_file(exp.out_dir, "atoms.json", lcmg::measure_to_json(mu) + "\n");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kesten spectral measures of Cayley lcmg's over finite quotients"};
    app.require_subcommand(1);

    CommonFlags moments_flags, converge_flags, graph_flags, sdf_flags;
    bool inject_disagreement = false;
    int graph_level = -1, graph_radius = 3, sdf_level = -1;

    CLI::App* moments = app.add_subcommand(
        "moments", "walk / trace / torus moment table for z = w w^*");
    add_common(moments, moments_flags);
    moments->add_flag("--inject-disagreement", inject_disagreement,
                      "perturb one walk moment (test hook for the failure path)")
        ->group("");

    CLI::App* converge = app.add_subcommand(
        "converge", "run a quotient chain and report SDF / Betti convergence");
    add_common(converge, converge_flags);

    CLI::App* graph = app.add_subcommand(
        "graph", "dump Cayley lcmg's and certify ball isomorphism radii");
    add_common(graph, graph_flags);
    graph->add_option("--level", graph_level, "chain level (default: last)");
    graph->add_option("--radius", graph_radius, "metric radius cap");

    CLI::App* sdf = app.add_subcommand("sdf", "spectral density function table at one level");
    add_common(sdf, sdf_flags);
    sdf->add_option("--level", sdf_level, "chain level (default: last)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (moments->parsed())
            return run_moments(lcmg::experiment_from_json(assemble_config(moments_flags)),
                               inject_disagreement);
        if (converge->parsed())
            return run_converge(lcmg::experiment_from_json(assemble_config(converge_flags)));
        if (graph->parsed())
            return run_graph(lcmg::experiment_from_json(assemble_config(graph_flags)),
                             graph_level, graph_radius);
        if (sdf->parsed())
            return run_sdf(lcmg::experiment_from_json(assemble_config(sdf_flags)), sdf_level);
    } catch (const lcmg::ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResource;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
