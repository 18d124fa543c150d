#pragma once

#include <string>

#include "gltl/product.hpp"
#include "gltl/solver.hpp"
#include "gltl/spec_mdp.hpp"

namespace gltl {

// All writers produce deterministic text with a trailing newline.

std::string spec_to_json(const SpecMdp& m);
std::string spec_to_dot(const SpecMdp& m);

std::string env_to_json(const LabeledMdp& env);

std::string product_to_json(const ProductMdp& p);
std::string product_to_dot(const ProductMdp& p);  // throws InvalidArgument at >= 200 states

std::string policy_to_json(const ProductMdp& p, const Policy& pi);
std::string values_to_json(const ProductMdp& p, const ValueFunction& v);
std::string simulation_to_json(const ProductMdp& p, const SimulationReport& r,
                               const SimulationOptions& opt);

/// Human form of a valuation, e.g. "a&!b"; "true" for an empty atom list.
std::string valuation_text(const SpecMdp& m, Valuation v);

}  // namespace gltl
