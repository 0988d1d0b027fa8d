#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prosparse/dictionary.hpp"
#include "prosparse/probability.hpp"
#include "prosparse/recover.hpp"

namespace prosparse {

using json = nlohmann::json;

json complex_to_json(cdouble z);
cdouble complex_from_json(const json& j);

json complex_vector_to_json(const std::vector<cdouble>& v);
std::vector<cdouble> complex_vector_from_json(const json& j);

// {N, M, bandwidth, circulant, psi_scale, nodes: "fourier" | [{re, im}...],
//  phi?: {bandwidth, bands}} - "phi" present only when Phi != identity.
json config_to_json(const DictionaryConfig& config);
DictionaryConfig config_from_json(const json& j);

// {support1, coeffs1, support2, coeffs2}
json signal_to_json(const SparseSignal& x);
SparseSignal signal_from_json(const json& j);

// Input fixture for the CLI: {config, signal?} or {config, y}.
struct Fixture {
  DictionaryConfig config;
  std::optional<SparseSignal> signal;
  std::optional<std::vector<cdouble>> y;
};
json fixture_to_json(const Fixture& f);
Fixture fixture_from_json(const json& j);

json solution_to_json(const Solution& s);
json result_to_json(const RecoveryResult& r);

// {numerator?, denominator?, float, method, error_estimate?}
json probability_to_json(const ExactProbability& p);

}  // namespace prosparse
