#pragma once

// JSON blocks for run reports, and a small pass/fail ledger of numeric checks.

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calabi/classifier.hpp"
#include "calabi/flow.hpp"
#include "calabi/fullmetric.hpp"
#include "calabi/mu_solver.hpp"
#include "calabi/scalar_soliton.hpp"

namespace calabi {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

json profile_json(const SolitonProfile& pr);
SolitonProfile profile_from_json(const json& j);

json certificate_json(const MuRootCertificate& c);
json verdict_json(const EndpointVerdict& v);
json bundle_json(const BundleAdmissibility& b);
json classification_json(const std::pair<EndpointVerdict, EndpointVerdict>& ends,
                         const std::optional<BundleAdmissibility>& bundle);
json zeros_json(const std::vector<ZeroPoint>& zeros);
json aperture_json(const ConeAperture& ap);
/// {"m","alpha","beta","kappa"} plus "p","k" and "aperture" when given.
json sasaki_json(const EtaEinstein& e, const std::optional<LineBundle>& bundle, const std::optional<ConeAperture>& ap);
json eternal_json(const EternalSolution& e);
json scalar_json(const ScalarSolitonProfile& pr, double positivity_up_to, double max_residual,
                 bool ricci_specialization);
json fullmetric_json(const RadialMetricModel& model, const IdentityResidual& r);

class CheckList {
 public:
  /// Passes iff value <= limit (NaN fails).
  void at_most(const std::string& name, double value, double limit);
  /// Passes iff value >= limit.
  void at_least(const std::string& name, double value, double limit);
  void holds(const std::string& name, bool ok);

  bool all_pass() const;
  std::vector<std::string> failures() const;
  json to_json() const;

 private:
  struct Check {
    std::string name;
    double value;
    double limit;
    std::string relation;
    bool pass;
  };
  std::vector<Check> checks_;
};

/// Pretty-printed with a trailing newline.
std::string dump_report(const json& j);

/// JSON cannot hold infinities; +-inf map to the strings "inf"/"-inf", NaN to null.
json number_json(double v);
double number_from_json(const json& j);

}  // namespace calabi
