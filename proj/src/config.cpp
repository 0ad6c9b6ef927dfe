#include "lcmg/config.hpp"

#include <stdexcept>

#include "lcmg/expr.hpp"

namespace lcmg {

std::vector<double> linspace(double min, double max, int count) {
    if (count < 0) throw std::invalid_argument("grid count must be nonnegative");
    if (count == 0) return {};
    if (count == 1) return {min};
    if (max < min) throw std::invalid_argument("grid max below min");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(min + (max - min) * static_cast<double>(i) / (count - 1));
    return out;
}

std::shared_ptr<const GroupModel> model_from_json(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("model"))
        throw std::invalid_argument("model spec needs a \"model\" field");
    const std::string kind = spec.at("model").get<std::string>();
    if (kind == "lattice") {
        int dim = spec.value("dim", 1);
        return std::make_shared<IntegerLattice>(dim);
    }
    if (kind == "heisenberg") return std::make_shared<HeisenbergGroup>();
    if (kind == "finite") {
        if (!spec.contains("table"))
            throw std::invalid_argument("finite model needs a \"table\" field");
        auto table = spec.at("table").get<std::vector<std::vector<int>>>();
        return std::make_shared<FiniteGroup>(std::move(table));
    }
    throw std::invalid_argument("unknown model kind \"" + kind + "\"");
}

std::shared_ptr<const QuotientChain> chain_from_json(
    const std::shared_ptr<const GroupModel>& model, const nlohmann::json& spec) {
    auto finite = std::dynamic_pointer_cast<const FiniteGroup>(model);
    if (finite) {
        if (!spec.contains("subgroups"))
            throw std::invalid_argument("finite model chains need a \"subgroups\" field");
        auto subgroups = spec.at("subgroups").get<std::vector<std::vector<int>>>();
        return std::make_shared<QuotientChain>(finite, std::move(subgroups));
    }
    const std::string schedule = spec.value("schedule", "powers");
    if (schedule == "powers") {
        unsigned base = spec.value("base", 2u);
        int levels = spec.value("levels", 8);
        return std::make_shared<QuotientChain>(
            QuotientChain::powers(model, base, levels));
    }
    if (schedule == "explicit") {
        if (!spec.contains("moduli"))
            throw std::invalid_argument("explicit schedule needs a \"moduli\" field");
        std::vector<Integer> moduli;
        for (const auto& m : spec.at("moduli")) moduli.emplace_back(m.get<long long>());
        return std::make_shared<QuotientChain>(model, std::move(moduli));
    }
    throw std::invalid_argument("unknown schedule \"" + schedule + "\"");
}

RingElement element_from_json(const nlohmann::json& w, const RingContext& ctx) {
    if (w.is_string()) return parse_ring_expression(w.get<std::string>(), ctx);
    if (w.is_array()) {
        std::vector<std::pair<GroupElement, Complex>> terms;
        for (const auto& term : w) {
            double re = term.value("re", 0.0);
            double im = term.value("im", 0.0);
            if (!term.contains("g"))
                throw std::invalid_argument("term list entries need a \"g\" coordinate vector");
            std::vector<Integer> coords;
            for (const auto& c : term.at("g")) coords.emplace_back(c.get<long long>());
            terms.emplace_back(GroupElement(std::move(coords)), Complex(re, im));
        }
        return RingElement(ctx, terms);
    }
    throw std::invalid_argument("\"w\" must be an expression string or a term list");
}

Experiment experiment_from_json(const nlohmann::json& config) {
    if (!config.is_object()) throw std::invalid_argument("config must be a JSON object");
    if (!config.contains("model")) throw std::invalid_argument("config needs a \"model\" spec");
    auto model = model_from_json(config.at("model"));
    nlohmann::json chain_spec = config.at("model");
    // powers schedules grow to cover the requested run depth
    if (chain_spec.value("schedule", "powers") == std::string("powers") &&
        !chain_spec.contains("subgroups")) {
        int requested = config.value("levels", 0);
        if (requested > chain_spec.value("levels", 8))
            chain_spec["levels"] = requested;
    }
    auto chain = chain_from_json(model, chain_spec);
    RingContext ctx = RingContext::group(model);
    if (!config.contains("w")) throw std::invalid_argument("config needs a \"w\" element");
    RingElement w = element_from_json(config.at("w"), ctx);
    std::string w_text = config.at("w").is_string() ? config.at("w").get<std::string>()
                                                    : w.str();

    Experiment exp{std::move(model), std::move(chain), std::move(w), std::move(w_text),
                   {},               "",               "text"};
    const auto grid = config.value("grid", nlohmann::json::object());
    double gmin = grid.value("min", 0.0);
    double gmax = grid.value("max", 2.0);
    int gcount = grid.value("count", 101);
    exp.run.lambda_grid = linspace(gmin, gmax, gcount);
    exp.run.max_moment = config.value("k", 10);
    if (exp.run.max_moment < 0 || exp.run.max_moment > kDefaultMomentCap)
        throw std::invalid_argument("moment degree k outside [0, " +
                                    std::to_string(kDefaultMomentCap) + "]");
    exp.run.levels = config.value("levels", 0);
    if (exp.run.levels < 0) throw std::invalid_argument("negative level count");
    if (exp.run.levels > exp.chain->levels())
        throw std::invalid_argument("levels " + std::to_string(exp.run.levels) +
                                    " exceed the chain's " +
                                    std::to_string(exp.chain->levels()));
    exp.run.certify_radius_cap = config.value("certify_radius", 6);
    if (exp.run.certify_radius_cap < 0)
        throw std::invalid_argument("negative certification radius");
    exp.run.order_cap = config.value("order_cap", kDefaultOrderCap);
    exp.run.eigen_dim_cap = config.value("eigen_dim_cap", kDefaultEigenDimCap);
    exp.run.threads = config.value("threads", 1);
    if (exp.run.threads < 0) throw std::invalid_argument("negative thread count");
    exp.out_dir = config.value("out", "");
    exp.format = config.value("format", "text");
    if (exp.format != "text" && exp.format != "json" && exp.format != "csv")
        throw std::invalid_argument("format must be text, json or csv");
    return exp;
}

} // namespace lcmg
