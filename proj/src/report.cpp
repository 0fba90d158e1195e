#include "calabi/report.hpp"

#include <cmath>

#include "calabi/error.hpp"

namespace calabi {

json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    throw InvalidParameter("unexpected number '" + s + "' in report");
  }
  return j.get<double>();
}

json profile_json(const SolitonProfile& pr) {
  return json{{"m", pr.m()},         {"kappa", pr.kappa()},        {"lambda", pr.lambda()}, {"mu", pr.mu()},
              {"nu", pr.nu()},       {"a", pr.a()},                {"b", number_json(pr.b())}};
}

SolitonProfile profile_from_json(const json& j) {
  try {
    SolitonProfile::Params p;
    p.m = j.at("m").get<int>();
    p.kappa = j.at("kappa").get<double>();
    p.lambda = j.at("lambda").get<int>();
    p.mu = j.at("mu").get<double>();
    p.nu = j.at("nu").get<double>();
    p.a = j.at("a").get<double>();
    p.b = number_from_json(j.at("b"));
    return SolitonProfile(p);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed profile block: ") + e.what());
  }
}

json certificate_json(const MuRootCertificate& c) {
  return json{{"root", c.root},
              {"lower_bracket", c.lower_bracket},
              {"sign_changes", c.sign_changes},
              {"excess", c.excess},
              {"residual", c.residual}};
}

json verdict_json(const EndpointVerdict& v) {
  return json{{"endpoint", endpoint_name(v.endpoint)},
              {"kind", end_kind_name(v.kind)},
              {"vanishing_order", number_json(v.vanishing_order)},
              {"slope", number_json(v.slope)},
              {"distance", number_json(v.distance)}};
}

json bundle_json(const BundleAdmissibility& b) {
  return json{{"p", b.p}, {"k", b.k}, {"lambda", b.lambda}, {"a_required", b.a_required}, {"admissible", b.admissible}};
}

json classification_json(const std::pair<EndpointVerdict, EndpointVerdict>& ends,
                         const std::optional<BundleAdmissibility>& bundle) {
  json j{{"left", verdict_json(ends.first)}, {"right", verdict_json(ends.second)}};
  j["bundle"] = bundle ? bundle_json(*bundle) : json(nullptr);
  return j;
}

json zeros_json(const std::vector<ZeroPoint>& zeros) {
  json arr = json::array();
  for (const auto& z : zeros) {
    arr.push_back(json{{"sigma", z.sigma}, {"slope", z.slope}, {"fd_slope", z.fd_slope}, {"touching", z.touching}});
  }
  return arr;
}

json aperture_json(const ConeAperture& ap) { return json{{"C", ap.amplitude()}, {"q", ap.exponent()}}; }

json sasaki_json(const EtaEinstein& e, const std::optional<LineBundle>& bundle, const std::optional<ConeAperture>& ap) {
  json j{{"m", e.m()}, {"alpha", e.alpha()}, {"beta", e.beta()}, {"kappa", e.kappa()}};
  if (bundle) {
    j["p"] = bundle->p;
    j["k"] = bundle->k;
  }
  if (ap) j["aperture"] = aperture_json(*ap);
  return j;
}

json eternal_json(const EternalSolution& e) {
  return json{{"q", e.aperture.exponent()},
              {"amplitude", e.aperture.amplitude()},
              {"mu_shrink", e.shrinking.mu},
              {"mu_expand", e.expanding.mu},
              {"translation", e.translation},
              {"amplitude_expand", e.amplitude_expand},
              {"amplitude_mismatch", e.amplitude_mismatch},
              {"continuity_error", e.continuity_error},
              {"continuity_error_raw", e.continuity_error_raw},
              {"normalization", "common kappa = 2p/k on both sides"}};
}

json scalar_json(const ScalarSolitonProfile& pr, double positivity_up_to, double max_residual,
                 bool ricci_specialization) {
  return json{{"m", pr.m()},
              {"kappa", pr.kappa()},
              {"c", pr.c()},
              {"mu", pr.mu()},
              {"c1", pr.c1()},
              {"c2", number_json(pr.c2())},
              {"positivity_up_to", number_json(positivity_up_to)},
              {"max_residual", max_residual},
              {"ricci_specialization", ricci_specialization}};
}

json fullmetric_json(const RadialMetricModel& model, const IdentityResidual& r) {
  return json{{"grid", json::array({model.u_min(), model.u_max(), model.size()})},
              {"max_identity_residual", r.max_residual},
              {"raw_identity_residual", r.raw_residual},
              {"convergence_order_estimate", r.order_estimate}};
}

void CheckList::at_most(const std::string& name, double value, double limit) {
  checks_.push_back({name, value, limit, "<=", value <= limit});
}

void CheckList::at_least(const std::string& name, double value, double limit) {
  checks_.push_back({name, value, limit, ">=", value >= limit});
}

void CheckList::holds(const std::string& name, bool ok) {
  checks_.push_back({name, ok ? 1.0 : 0.0, 1.0, "==", ok});
}

bool CheckList::all_pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<std::string> CheckList::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks_) {
    if (!c.pass) out.push_back(c.name);
  }
  return out;
}

json CheckList::to_json() const {
  json arr = json::array();
  for (const auto& c : checks_) {
    arr.push_back(json{{"name", c.name},
                       {"value", number_json(c.value)},
                       {"relation", c.relation},
                       {"limit", number_json(c.limit)},
                       {"pass", c.pass}});
  }
  return arr;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace calabi
