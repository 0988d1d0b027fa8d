#include "prosparse/serialization.hpp"

#include "prosparse/errors.hpp"

namespace prosparse {

json complex_to_json(cdouble z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cdouble complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw InvalidInputError("expected a {re, im} object");
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

json complex_vector_to_json(const std::vector<cdouble>& v) {
  json arr = json::array();
  for (const cdouble& z : v) arr.push_back(complex_to_json(z));
  return arr;
}

std::vector<cdouble> complex_vector_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInputError("expected an array of complex values");
  std::vector<cdouble> v;
  v.reserve(j.size());
  for (const json& e : j) v.push_back(complex_from_json(e));
  return v;
}

json config_to_json(const DictionaryConfig& config) {
  json j;
  j["N"] = config.N;
  j["M"] = config.M;
  j["bandwidth"] = config.bandwidth();
  j["circulant"] = config.circulant;
  j["psi_scale"] = config.psi_scale;
  if (config.fourier_nodes)
    j["nodes"] = "fourier";
  else
    j["nodes"] = complex_vector_to_json(config.nodes);
  if (!config.phi.is_identity()) {
    json phi;
    phi["bandwidth"] = config.phi.bandwidth();
    phi["bands"] = complex_vector_to_json(config.phi.storage());
    j["phi"] = phi;
  }
  return j;
}

DictionaryConfig config_from_json(const json& j) {
  const int N = j.at("N").get<int>();
  const int M = j.at("M").get<int>();
  DictionaryConfig config;
  const json& nodes = j.at("nodes");
  if (nodes.is_string() && nodes.get<std::string>() == "fourier") {
    config = build_fourier_frame(N, M);
  } else {
    config = make_vandermonde(N, complex_vector_from_json(nodes));
  }
  if (j.contains("psi_scale")) config.psi_scale = j.at("psi_scale").get<double>();
  if (j.contains("phi")) {
    const json& phi = j.at("phi");
    BandedMatrix m(N, phi.at("bandwidth").get<int>());
    std::vector<cdouble> bands = complex_vector_from_json(phi.at("bands"));
    if (bands.size() != m.storage().size())
      throw InvalidInputError("config: phi band storage has the wrong size");
    m.storage() = std::move(bands);
    config.phi = std::move(m);
  }
  if (j.contains("circulant")) config.circulant = j.at("circulant").get<bool>();
  config.validate();
  return config;
}

namespace {

std::vector<int> int_vector(const json& j) {
  if (!j.is_array()) throw InvalidInputError("expected an integer array");
  return j.get<std::vector<int>>();
}

}  // namespace

json signal_to_json(const SparseSignal& x) {
  json j;
  j["support1"] = x.support1;
  j["coeffs1"] = complex_vector_to_json(x.coeffs1);
  j["support2"] = x.support2;
  j["coeffs2"] = complex_vector_to_json(x.coeffs2);
  return j;
}

SparseSignal signal_from_json(const json& j) {
  SparseSignal x;
  x.support1 = int_vector(j.at("support1"));
  x.coeffs1 = complex_vector_from_json(j.at("coeffs1"));
  x.support2 = int_vector(j.at("support2"));
  x.coeffs2 = complex_vector_from_json(j.at("coeffs2"));
  if (x.support1.size() != x.coeffs1.size() || x.support2.size() != x.coeffs2.size())
    throw InvalidInputError("signal: support/coefficient size mismatch");
  return x;
}

json fixture_to_json(const Fixture& f) {
  json j;
  j["config"] = config_to_json(f.config);
  if (f.signal) j["signal"] = signal_to_json(*f.signal);
  if (f.y) j["y"] = complex_vector_to_json(*f.y);
  return j;
}

Fixture fixture_from_json(const json& j) {
  Fixture f;
  f.config = config_from_json(j.at("config"));
  if (j.contains("signal")) f.signal = signal_from_json(j.at("signal"));
  if (j.contains("y")) f.y = complex_vector_from_json(j.at("y"));
  if (!f.signal && !f.y)
    throw InvalidInputError("fixture: needs a signal or a measurement vector");
  return f;
}

json solution_to_json(const Solution& s) {
  json j = signal_to_json(s.signal);
  j["P"] = s.signal.P();
  j["K"] = s.signal.K();
  j["fit_residual"] = s.fit_residual;
  j["order"] = s.order;
  j["window"] = s.window_start;
  j["via_dual"] = s.via_dual;
  return j;
}

json result_to_json(const RecoveryResult& r) {
  json j;
  j["status"] = (r.status == RecoveryStatus::recovered) ? "recovered" : "no-solution";
  j["windows_tested"] = r.windows_tested;
  j["budget_exhausted"] = r.budget_exhausted;
  json sols = json::array();
  for (const Solution& s : r.solutions) sols.push_back(solution_to_json(s));
  j["solutions"] = std::move(sols);
  return j;
}

json probability_to_json(const ExactProbability& p) {
  json j;
  if (p.numerator) j["numerator"] = p.numerator->get_str();
  if (p.denominator) j["denominator"] = p.denominator->get_str();
  j["float"] = p.float_value;
  j["method"] = to_string(p.method);
  if (p.method == ProbabilityMethod::dft_genfunc) j["error_estimate"] = p.error_estimate;
  return j;
}

}  // namespace prosparse
