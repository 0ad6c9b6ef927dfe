#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcmg/convergence.hpp"
#include "lcmg/ring.hpp"

namespace lcmg {

/// A validated experiment: the group model and chain, the element w, and
/// run parameters. Built from a JSON config (plus CLI flag overrides)
/// before any computation starts.
struct Experiment {
    std::shared_ptr<const GroupModel> model;
    std::shared_ptr<const QuotientChain> chain;
    RingElement w;
    std::string w_text; // the expression as configured, for output headers
    ChainRunConfig run;
    std::string out_dir;
    std::string format = "text"; // text | json | csv
};

/// Builds a model from its JSON spec, e.g.
///   {"model":"lattice","dim":2} | {"model":"heisenberg"} |
///   {"model":"finite","table":[[...],...]}
std::shared_ptr<const GroupModel> model_from_json(const nlohmann::json& spec);

/// Builds the chain declared next to the model spec: "schedule":"powers"
/// with "base"/"levels", "schedule":"explicit" with "moduli", or
/// "subgroups" for finite models. Divisibility and nesting are validated.
std::shared_ptr<const QuotientChain> chain_from_json(
    const std::shared_ptr<const GroupModel>& model, const nlohmann::json& spec);

/// Parses w from either an expression string or a JSON term list
/// [{"re":2,"im":0,"g":[0]},...].
RingElement element_from_json(const nlohmann::json& w, const RingContext& ctx);

/// Validates and assembles the whole experiment config.
Experiment experiment_from_json(const nlohmann::json& config);

/// Uniformly spaced lambda grid helper.
std::vector<double> linspace(double min, double max, int count);

} // namespace lcmg
