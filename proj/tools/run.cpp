#include "run.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "calabi/error.hpp"
#include "calabi/kernels.hpp"
#include "calabi/sasaki.hpp"

namespace calabi::cli {
namespace {

constexpr double kProbeTime = 1e-6;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double max_scaled_residual(const SolitonProfile& pr, double hi = 1e3, int n = 300) {
  const double lo = std::max(pr.a(), 1e-3);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = lo * std::pow(hi / lo, double(i) / (n - 1));
    worst = std::max(worst, std::abs(ode_residual(pr, s)) / (1.0 + std::abs(pr.kappa()) + std::abs(pr.mu()) * s));
  }
  return worst;
}

void check_zero_slopes(CheckList& checks, const std::vector<ZeroPoint>& zeros) {
  double worst = 0.0;
  for (const auto& z : zeros) worst = std::max(worst, std::abs(z.fd_slope - z.slope));
  checks.at_most("zero_slope_law", worst, 1e-6);
}

int require_int(const std::optional<int>& v, const char* flag) {
  if (!v) throw InvalidParameter(std::string("missing required flag ") + flag);
  return *v;
}

json classification_verdicts(const std::pair<EndpointVerdict, EndpointVerdict>& ends) {
  return json{{"left", end_kind_name(ends.first.kind)}, {"right", end_kind_name(ends.second.kind)}};
}

struct Outcome {
  json body = json::object();
  json verdicts = json::object();
  CheckList checks;
  std::vector<std::pair<std::string, std::string>> files;
};

RadialSolution radial_for(const RunConfig& cfg, const SolitonProfile& pr, double default_s_max) {
  const double sigma0 = cfg.sigma0.value_or(default_sigma0(pr));
  const double s_min = cfg.s_min.value_or(-6.0);
  const double s_max = cfg.s_max.value_or(default_s_max);
  return solve_radial(pr, sigma0, s_min, s_max, cfg.samples);
}

json radial_json(const RadialSolution& sol) {
  return json{{"sigma0", sol.sigma0()},
              {"s_min", sol.s_min()},
              {"s_max", sol.s_max()},
              {"samples", sol.samples().size()},
              {"clipped_low", sol.clipped_low()},
              {"clipped_high", sol.clipped_high()}};
}

// Shared tail of the bundle pipelines: classification, radial data, cone limit.
void bundle_common(const RunConfig& cfg, const SolitonProfile& pr, const BundleAdmissibility& bundle, Outcome& o) {
  o.body["profile"] = profile_json(pr);
  const auto zeros = zero_structure(pr, 1e6);
  o.body["zeros"] = zeros_json(zeros);
  check_zero_slopes(o.checks, zeros);
  o.checks.holds("zero_bounds", zero_bounds_hold(pr, zeros));

  const auto ends = completeness_report(pr);
  o.body["classification"] = classification_json(ends, bundle);
  o.verdicts["classification"] = classification_verdicts(ends);
  o.verdicts["admissible"] = bundle.admissible;

  o.checks.at_most("boundary_value", std::abs(pr.phi(pr.a())), 1e-10);
  o.checks.at_most("boundary_slope", std::abs(pr.phi_prime(pr.a()) - 2.0), 1e-8);
  o.checks.holds("smooth_zero_section", ends.first.kind == EndKind::smooth_zero_section);
  o.checks.at_most("ode_residual", max_scaled_residual(pr), cfg.tol);

  const RadialSolution sol = radial_for(cfg, pr, flow_window_end(pr.mu(), kProbeTime));
  o.body["radial"] = radial_json(sol);
  o.files.emplace_back("profile.csv", radial_csv(sol));

  const SelfSimilarFlow fl = make_flow(pr);
  const AsymptoticEstimate est = asymptotic_coefficient(sol, pr.mu());
  const ConeAperture ap = cone_limit(fl, sol);
  json aj = aperture_json(ap);
  aj["error_estimate"] = est.error_estimate;
  const double t = pr.lambda() == 1 ? kProbeTime : -kProbeTime;
  aj["continuity_error"] = continuity_deviation(fl, sol, ap, t, 81, true);
  aj["continuity_error_raw"] = continuity_deviation(fl, sol, ap, t, 81, false);
  o.body["aperture"] = aj;
  o.body["sasaki"] = sasaki_json(eta_einstein_from_kappa(pr.m(), pr.kappa()), LineBundle(bundle.p, bundle.k), ap);
  o.checks.at_most("aperture_error_estimate", est.error_estimate, 1e-6);
  o.checks.at_most("cone_limit_continuity", aj["continuity_error"].get<double>(), 1e-5);

  if (pr.m() == 1 && pr.kappa() == 4.0) {
    const RadialSolution grid = solve_radial(pr, default_sigma0(pr), -3.0, 3.0, 401);
    const RadialMetricModel model = RadialMetricModel::from_solution(grid, pr.lambda(), pr.mu());
    const IdentityResidual r = soliton_identity_residual(model);
    o.body["fullmetric"] = fullmetric_json(model, r);
    o.checks.at_most("fullmetric_identity", r.max_residual, 1e-6);
  }
}

Outcome cmd_expand_cone(const RunConfig& cfg) {
  Outcome o;
  const int m = cfg.m;
  const double kappa = cfg.kappa.value_or(2.0 * m + 2.0);
  double mu = cfg.mu.value_or(-1.0);
  if (cfg.q) {
    require(*cfg.q > 0.0, "--q must be positive");
    mu = -1.0 / *cfg.q;
  }
  require(kappa > 0.0, "expanding cones need kappa > 0");
  require(mu < 0.0, "expanding solitons need mu < 0");
  const SolitonProfile pr = SolitonProfile::cone(m, kappa, 1, mu);
  o.body["profile"] = profile_json(pr);

  const auto zeros = zero_structure(pr, 1e6);
  o.body["zeros"] = zeros_json(zeros);
  o.checks.holds("no_positive_zero", zeros.empty());
  o.checks.at_most("ode_residual", max_scaled_residual(pr), cfg.tol);

  const auto ends = completeness_report(pr);
  o.body["classification"] = classification_json(ends, std::nullopt);
  o.verdicts["classification"] = classification_verdicts(ends);

  const RadialSolution sol = radial_for(cfg, pr, flow_window_end(mu, kProbeTime));
  o.body["radial"] = radial_json(sol);
  o.files.emplace_back("profile.csv", radial_csv(sol));

  const SelfSimilarFlow fl = make_flow(pr);
  const AsymptoticEstimate est = asymptotic_coefficient(sol, mu);
  const ConeAperture ap = cone_limit(fl, sol);
  json aj = aperture_json(ap);
  aj["error_estimate"] = est.error_estimate;
  aj["continuity_error"] = continuity_deviation(fl, sol, ap, kProbeTime, 81, true);
  aj["continuity_error_raw"] = continuity_deviation(fl, sol, ap, kProbeTime, 81, false);
  o.body["aperture"] = aj;
  o.body["sasaki"] = sasaki_json(eta_einstein_from_kappa(m, kappa), std::nullopt, ap);
  o.checks.at_most("aperture_error_estimate", est.error_estimate, 1e-6);
  o.checks.at_most("cone_limit_continuity", aj["continuity_error"].get<double>(), 1e-5);
  return o;
}

Outcome cmd_shrink_bundle(const RunConfig& cfg) {
  const int m = cfg.m;
  const int p = require_int(cfg.p, "--p");
  const int k = require_int(cfg.k, "--k");
  if (!(k > 0 && k < p)) throw InvalidParameter("shrink-bundle needs 0 < k < p");
  const BundleAdmissibility bundle = bundle_admissibility(p, k, -1);
  const double kappa = 2.0 * p / k;
  const double a = bundle.a_required;
  const MuRootCertificate cert = solve_mu(m, kappa, a);
  const SolitonProfile pr = SolitonProfile::shrinking(m, kappa, a, cert);

  Outcome o;
  o.body["mu_certificate"] = certificate_json(cert);
  o.verdicts["sign_changes"] = cert.sign_changes;
  o.checks.holds("unique_root", cert.sign_changes == 1);
  o.checks.holds("root_above_bracket", cert.excess > 0.0);
  o.checks.at_most("root_residual", cert.residual, 1e-12 * std::max(1.0, cert.residual_scale));
  bundle_common(cfg, pr, bundle, o);
  return o;
}

Outcome cmd_expand_bundle(const RunConfig& cfg) {
  const int m = cfg.m;
  const int p = require_int(cfg.p, "--p");
  const int k = require_int(cfg.k, "--k");
  if (!(k > p && p > 0)) throw InvalidParameter("expand-bundle needs k > p > 0");
  const double mu = cfg.mu.value_or(-1.0);
  require(mu < 0.0, "expanding solitons need mu < 0");
  const BundleAdmissibility bundle = bundle_admissibility(p, k, 1);
  const SolitonProfile pr = SolitonProfile::anchored(m, 2.0 * p / k, 1, mu, bundle.a_required);
  Outcome o;
  bundle_common(cfg, pr, bundle, o);
  return o;
}

std::string flow_slices_csv(const EternalSolution& e) {
  std::string out = "t,r,potential\n";
  const double times[] = {-1e-2, -1e-4, -1e-6, 0.0, 1e-6, 1e-4, 1e-2};
  for (double t : times) {
    for (int i = 0; i <= 20; ++i) {
      const double r = std::exp(-2.0 + 0.2 * i);
      out += fmt(t) + "," + fmt(r) + "," + fmt(eternal_potential(e, t, r)) + "\n";
    }
  }
  return out;
}

Outcome cmd_glue(const RunConfig& cfg) {
  const int p = require_int(cfg.p, "--p");
  const int k = require_int(cfg.k, "--k");
  GlueOptions opt;
  opt.samples = cfg.samples;
  if (cfg.s_min) opt.s_min = *cfg.s_min;
  const EternalSolution e = glue_eternal(cfg.m, p, k, opt);
  Outcome o;
  o.body["mu_certificate"] = certificate_json(e.mu_certificate);
  o.body["shrinking_profile"] = profile_json(e.shrinking.profile);
  o.body["expanding_profile"] = profile_json(e.expanding.profile);
  o.body["eternal"] = eternal_json(e);
  o.body["sasaki"] = sasaki_json(eta_einstein_from_kappa(e.m, e.kappa), LineBundle(p, k), e.aperture);
  o.checks.holds("shared_exponent", 1.0 / e.shrinking.mu == -1.0 / e.expanding.mu);
  o.checks.at_most("amplitude_mismatch", e.amplitude_mismatch, 1e-8);
  o.checks.at_most("continuity_error", e.continuity_error, 1e-5);
  o.verdicts["glued"] = true;
  o.files.emplace_back("profile.csv", radial_csv(e.shrinking_solution));
  o.files.emplace_back("expanding.csv", radial_csv(e.expanding_solution));
  o.files.emplace_back("flow.csv", flow_slices_csv(e));
  return o;
}

Outcome cmd_scalar(const RunConfig& cfg) {
  const int m = cfg.m;
  const double kappa = cfg.kappa.value_or(-2.0);
  const double c = cfg.c.value_or((m + 1) * kappa);
  const double mu = cfg.mu.value_or(-1.0);
  const ScalarSolitonProfile pr(m, kappa, c, mu);
  Outcome o;

  double worst = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double s = 1.01 * std::pow(1e3 / 1.01, i / 399.0);
    worst = std::max(worst, std::abs(scalar_ode_residual(pr, s)));
  }
  o.checks.at_most("boundary_value", std::abs(pr.phi(1.0)), 1e-10);
  o.checks.at_most("boundary_slope", std::abs(pr.phi_prime(1.0)), 1e-10);
  o.checks.at_most("scalar_ode_residual", worst, cfg.tol);

  const bool hypotheses = kappa - c / (m + 1) >= 0.0 && c < 0.0 && mu < 0.0;
  double positivity_up_to = std::nan("");
  if (hypotheses) {
    const bool ok = positivity_certificate(pr, 1e4);
    o.checks.holds("positivity_certificate", ok);
    if (ok) positivity_up_to = 1e4;
  }
  const bool ricci = (kappa == -2.0 || kappa == 2.0) && c == (m + 1) * kappa;
  if (ricci && kappa < 0.0) {
    const RicciSpecialization rs = ricci_specialize(m, kappa);
    const SolitonProfile kr = SolitonProfile::anchored(m, kappa, rs.lambda, mu, 1.0);
    double dev = 0.0;
    for (int i = 0; i < 300; ++i) {
      const double s = 1.01 * std::pow(1e2 / 1.01, i / 299.0);
      dev = std::max(dev, std::abs(pr.phi(s) - kr.phi_tau(s - 1.0)) / std::abs(pr.phi(s)));
    }
    o.checks.at_most("ricci_bridge", dev, 1e-10);
  }
  o.body["scalar"] = scalar_json(pr, positivity_up_to, worst, ricci);
  o.verdicts["gss_hypotheses"] = hypotheses;
  o.verdicts["ricci_specialization"] = ricci;
  return o;
}

// ---- verification suites ----

void suite_core(CheckList& ch, double tol) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double group = 0.0, cov = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const EtaEinstein e = make_eta_einstein(m, -10.0 + 20.0 * U(rng));
    const double f = std::exp(-3.0 + 6.0 * U(rng));
    const EtaEinstein g = d_homothety(e, f);
    group = std::max(group, std::abs(d_homothety(g, 1.0 / f).alpha() - e.alpha()));
    cov = std::max(cov, std::abs(g.kappa() - e.kappa() / f) / (1.0 + std::abs(e.kappa())));
  }
  ch.at_most("core.homothety_group_law", group, 1e-12);
  ch.at_most("core.homothety_kappa_covariance", cov, 1e-12);

  double res = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    // Bounded on [a, 1e3]: mu < 0, or the nu = 0 shrinking profile for mu > 0.
    if (i % 4 == 0) {
      const double kappa = 0.5 + 9.5 * U(rng);
      const double a = kappa / 2.0 * (0.02 + 0.96 * U(rng));
      res = std::max(res, max_scaled_residual(SolitonProfile::shrinking(m, kappa, a, solve_mu(m, kappa, a)), 1e3, 100));
      continue;
    }
    const int lambda = static_cast<int>(rng() % 3) - 1;
    const double kappa = -6.0 + 12.0 * U(rng);
    const double mu = -(0.1 + 4.9 * U(rng));
    const SolitonProfile pr = SolitonProfile::anchored(m, kappa, lambda, mu, 2.0 * U(rng));
    res = std::max(res, max_scaled_residual(pr, 1e3, 100));
  }
  ch.at_most("core.closed_form_residual", res, tol);
}

void suite_mu(CheckList& ch) {
  const MuRootCertificate c = solve_mu(1, 4.0, 1.0);
  ch.at_most("mu.sqrt2_instance", std::abs(c.root - std::sqrt(2.0)), 1e-12);
  ch.holds("mu.sqrt2_sign_changes", c.sign_changes == 1);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  bool unique = true;
  double closure = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const double kappa = 0.1 + 19.9 * U(rng);
    const double a = kappa / 2.0 * (0.01 + 0.98 * U(rng));
    const MuRootCertificate r = solve_mu(m, kappa, a);
    unique = unique && r.sign_changes == 1 && r.excess > 0.0;
    const SolitonProfile pr = SolitonProfile::shrinking(m, kappa, a, r);
    closure = std::max(closure, std::abs(pr.phi(a)));
  }
  ch.holds("mu.uniqueness", unique);
  ch.at_most("mu.boundary_closure", closure, 1e-10);
}

void suite_radial(CheckList& ch) {
  const SolitonProfile lin = SolitonProfile::cone(1, 4.0, 1, -1.0);
  const RadialSolution sol = solve_radial(lin, 1.0, -5.0, 5.0, 1001);
  double dev = 0.0;
  for (const auto& r : sol.samples()) dev = std::max(dev, std::abs(r.sigma / std::exp(2.0 * r.s) - 1.0));
  ch.at_most("radial.linear_exponential", dev, 1e-9);
  ch.at_most("radial.linear_length", std::abs(geodesic_length(lin, 1.0, 4.0) - std::sqrt(2.0)), 1e-10);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const double kappa = 0.5 + 5.0 * U(rng);
    const double a = 0.2 + 2.0 * U(rng);
    const double mu = -(0.2 + 2.0 * U(rng));
    const SolitonProfile pr = SolitonProfile::anchored(m, kappa, 1, mu, a);
    std::vector<double> grid;
    for (int j = 0; j < 60; ++j) grid.push_back(a + 1e-3 + (1e3 - a) * std::pow(j / 59.0, 3));
    const auto o = oracle_integrate_linear(m, kappa, 1, mu, a + 1e-3, pr.phi_tau(1e-3), grid);
    for (std::size_t j = 0; j < grid.size(); ++j) worst = std::max(worst, std::abs(o[j] / pr.phi(grid[j]) - 1.0));
  }
  ch.at_most("radial.oracle_equivalence", worst, 1e-9);
}

void suite_classifier(CheckList& ch) {
  const SolitonProfile sh = SolitonProfile::shrinking(1, 4.0, 1.0, solve_mu(1, 4.0, 1.0));
  ch.holds("classifier.shrinking_extension", extension_check(sh).kind == EndKind::smooth_zero_section);
  const SolitonProfile ex = SolitonProfile::anchored(1, 1.0, 1, -1.0, 0.5);
  ch.holds("classifier.expanding_extension", extension_check(ex).kind == EndKind::smooth_zero_section);
  const SolitonProfile dz = SolitonProfile::anchored(1, -4.0, 1, -1.0, 2.0);
  ch.holds("classifier.double_zero_complete", completeness_report(dz).first.kind == EndKind::complete_end);
  ch.holds("classifier.double_zero_distance", std::isinf(geodesic_length(dz, 0.0, 1.0)));
}

void suite_flow(CheckList& ch) {
  const EternalSolution e = glue_eternal(1, 2, 1);
  ch.at_most("flow.exponent", std::abs(e.aperture.exponent() - 1.0 / std::sqrt(2.0)), 1e-15);
  ch.at_most("flow.amplitude_match", e.amplitude_mismatch, 1e-8);
  ch.at_most("flow.continuity", e.continuity_error, 1e-5);
}

void suite_scalar(CheckList& ch, double tol) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double bc = 0.0, res = 0.0;
  bool pos = true;
  for (int i = 0; i < 50; ++i) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const double c = -(0.1 + 10.0 * U(rng));
    const double kappa = c / (m + 1) + 6.0 * U(rng);
    const double mu = -(0.3 + 4.7 * U(rng));
    const ScalarSolitonProfile pr(m, kappa, c, mu);
    bc = std::max({bc, std::abs(pr.phi(1.0)), std::abs(pr.phi_prime(1.0))});
    for (int j = 0; j < 100; ++j) res = std::max(res, std::abs(scalar_ode_residual(pr, 1.01 * std::pow(1e3 / 1.01, j / 99.0))));
    pos = pos && positivity_certificate(pr, 1e4);
  }
  ch.at_most("scalar.boundary_pair", bc, 1e-10);
  ch.at_most("scalar.ode_residual", res, tol);
  ch.holds("scalar.positivity", pos);
}

void suite_fullmetric(CheckList& ch) {
  const SolitonProfile lin = SolitonProfile::cone(1, 4.0, 1, -1.0);
  const auto lm = RadialMetricModel::from_solution(solve_radial(lin, 1.0, -3.0, 3.0, 401), 1, -1.0);
  ch.at_most("fullmetric.flat", soliton_identity_residual(lm).max_residual, 1e-9);
  const SolitonProfile sh = SolitonProfile::shrinking(1, 4.0, 1.0, solve_mu(1, 4.0, 1.0));
  const auto sm = RadialMetricModel::from_solution(solve_radial(sh, 2.0, -3.0, 3.0, 401), -1, std::sqrt(2.0));
  const IdentityResidual r = soliton_identity_residual(sm);
  ch.at_most("fullmetric.shrinking", r.max_residual, 1e-6);
  ch.at_most("fullmetric.order", std::abs(r.order_estimate - 2.0), 0.1);
  ch.at_least("fullmetric.wrong_mu", soliton_identity_residual(sm.with_mu(std::sqrt(2.0) + 0.1)).max_residual, 1e-2);
}

Outcome cmd_verify_suite(const RunConfig& cfg) {
  static const std::vector<std::string> names = {"core", "mu", "radial", "classifier", "flow", "scalar", "fullmetric"};
  if (cfg.suite != "all" && std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
    throw InvalidParameter("unknown suite '" + cfg.suite + "'");
  }
  require(cfg.tol > 0.0, "--tol must be positive");
  Outcome o;
  auto want = [&](const std::string& n) { return cfg.suite == "all" || cfg.suite == n; };
  if (want("core")) suite_core(o.checks, cfg.tol);
  if (want("mu")) suite_mu(o.checks);
  if (want("radial")) suite_radial(o.checks);
  if (want("classifier")) suite_classifier(o.checks);
  if (want("flow")) suite_flow(o.checks);
  if (want("scalar")) suite_scalar(o.checks, cfg.tol);
  if (want("fullmetric")) suite_fullmetric(o.checks);
  o.body["suite"] = cfg.suite;
  return o;
}

Outcome cmd_verify_report(const RunConfig& cfg) {
  std::ifstream in(cfg.from_report);
  if (!in) throw InvalidParameter("cannot read report '" + cfg.from_report + "'");
  json old;
  try {
    old = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("report is not valid JSON: ") + e.what());
  }
  if (!old.contains("schema") || old["schema"] != kReportSchema || !old.contains("inputs")) {
    throw InvalidParameter("report lacks schema 1 inputs");
  }
  RunConfig again = config_from_json(old["inputs"]);
  again.out.clear();
  if (again.command == "verify" && !again.from_report.empty()) throw InvalidParameter("nested --from-report");
  const RunResult rr = execute(again);
  Outcome o;
  const bool same = rr.report.contains("verdicts") && old.contains("verdicts") && rr.report["verdicts"] == old["verdicts"];
  o.body["from_report"] = cfg.from_report;
  o.body["reproduced_command"] = again.command;
  o.body["original_verdicts"] = old.value("verdicts", json(nullptr));
  o.body["reproduced_verdicts"] = rr.report.value("verdicts", json(nullptr));
  o.checks.holds("verdicts_reproduced", same);
  return o;
}

struct SweepRow {
  int p, k;
  double kappa, a, mu;
  int sign_changes;
  double phi_a, slope;
  EndKind kind;
};

Outcome cmd_sweep(const RunConfig& cfg) {
  const int m = cfg.m;
  const int p_max = cfg.p.value_or(6);
  const int k_max = cfg.k.value_or(p_max - 1);
  require(p_max >= 2 && k_max >= 1, "sweep needs --p >= 2 and --k >= 1");
  std::vector<std::pair<int, int>> pairs;
  for (int p = 2; p <= p_max; ++p) {
    for (int k = 1; k <= std::min(k_max, p - 1); ++k) pairs.emplace_back(p, k);
  }
  std::vector<std::future<SweepRow>> jobs;
  for (auto [p, k] : pairs) {
    jobs.push_back(std::async(std::launch::async, [m, p = p, k = k] {
      const double kappa = 2.0 * p / k;
      const double a = static_cast<double>(p) / k - 1.0;
      const MuRootCertificate c = solve_mu(m, kappa, a);
      const SolitonProfile pr = SolitonProfile::shrinking(m, kappa, a, c);
      return SweepRow{p, k, kappa, a, c.root, c.sign_changes, pr.phi(a), pr.phi_prime(a), extension_check(pr).kind};
    }));
  }
  std::string csv = "m,p,k,kappa,a,mu,sign_changes,phi_a,slope,left_kind\n";
  json rows = json::array();
  bool all_smooth = true, all_unique = true;
  for (auto& j : jobs) {
    const SweepRow r = j.get();
    csv += std::to_string(m) + "," + std::to_string(r.p) + "," + std::to_string(r.k) + "," + fmt(r.kappa) + "," +
           fmt(r.a) + "," + fmt(r.mu) + "," + std::to_string(r.sign_changes) + "," + fmt(r.phi_a) + "," +
           fmt(r.slope) + "," + end_kind_name(r.kind) + "\n";
    rows.push_back(json{{"p", r.p}, {"k", r.k}, {"mu", r.mu}, {"left_kind", end_kind_name(r.kind)}});
    all_smooth = all_smooth && r.kind == EndKind::smooth_zero_section;
    all_unique = all_unique && r.sign_changes == 1;
  }
  Outcome o;
  o.body["sweep"] = rows;
  o.checks.holds("sweep.all_smooth", all_smooth);
  o.checks.holds("sweep.all_unique", all_unique);
  o.verdicts["points"] = rows.size();
  o.files.emplace_back("sweep.csv", csv);
  return o;
}

Outcome dispatch(const RunConfig& cfg) {
  require(cfg.samples >= 2, "--samples must be >= 2");
  require(cfg.tol > 0.0, "--tol must be positive");
  if (cfg.command == "expand-cone") return cmd_expand_cone(cfg);
  if (cfg.command == "shrink-bundle") return cmd_shrink_bundle(cfg);
  if (cfg.command == "expand-bundle") return cmd_expand_bundle(cfg);
  if (cfg.command == "glue") return cmd_glue(cfg);
  if (cfg.command == "scalar") return cmd_scalar(cfg);
  if (cfg.command == "verify") return cfg.from_report.empty() ? cmd_verify_suite(cfg) : cmd_verify_report(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  throw InvalidParameter("unknown command '" + cfg.command + "'");
}

}  // namespace

json config_json(const RunConfig& cfg) {
  json j{{"command", cfg.command}, {"m", cfg.m}};
  auto opt = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  opt("p", cfg.p);
  opt("k", cfg.k);
  opt("kappa", cfg.kappa);
  opt("c", cfg.c);
  opt("mu", cfg.mu);
  opt("q", cfg.q);
  opt("sigma0", cfg.sigma0);
  opt("s_min", cfg.s_min);
  opt("s_max", cfg.s_max);
  j["samples"] = cfg.samples;
  j["tol"] = cfg.tol;
  if (cfg.command == "verify") j["suite"] = cfg.suite;
  if (!cfg.from_report.empty()) j["from_report"] = cfg.from_report;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  try {
    cfg.command = j.at("command").get<std::string>();
    cfg.m = j.at("m").get<int>();
    auto opt_int = [&](const char* key, std::optional<int>& v) {
      if (j.contains(key)) v = j[key].get<int>();
    };
    auto opt_dbl = [&](const char* key, std::optional<double>& v) {
      if (j.contains(key)) v = j[key].get<double>();
    };
    opt_int("p", cfg.p);
    opt_int("k", cfg.k);
    opt_dbl("kappa", cfg.kappa);
    opt_dbl("c", cfg.c);
    opt_dbl("mu", cfg.mu);
    opt_dbl("q", cfg.q);
    opt_dbl("sigma0", cfg.sigma0);
    opt_dbl("s_min", cfg.s_min);
    opt_dbl("s_max", cfg.s_max);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.suite = j.value("suite", cfg.suite);
    cfg.from_report = j.value("from_report", std::string());
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed inputs block: ") + e.what());
  }
  return cfg;
}

RunResult execute(const RunConfig& cfg) {
  RunResult rr;
  try {
    Outcome o = dispatch(cfg);
    json report{{"schema", kReportSchema}, {"command", cfg.command}, {"inputs", config_json(cfg)}};
    for (auto& [key, value] : o.body.items()) report[key] = value;
    report["checks"] = o.checks.to_json();
    o.verdicts["checks_passed"] = o.checks.all_pass();
    o.verdicts["failed_checks"] = o.checks.failures();
    report["verdicts"] = o.verdicts;
    report["meta"] = json{{"program", "calabi"}, {"schema", kReportSchema}, {"kernel", kernels::isa_name(kernels::active_isa())}};
    rr.report = std::move(report);
    rr.files = std::move(o.files);
    if (!o.checks.all_pass()) {
      rr.exit_code = kVerificationFailed;
      std::string names;
      for (const auto& f : o.checks.failures()) names += (names.empty() ? "" : ", ") + f;
      rr.diagnostic = "verification failed: " + names;
    }
  } catch (const InvalidParameter& e) {
    rr.exit_code = kInvalid;
    rr.diagnostic = std::string("invalid parameters: ") + e.what();
  } catch (const NonConvergence& e) {
    rr.exit_code = kNonConvergence;
    rr.diagnostic = std::string("solver did not converge: ") + e.what();
  }
  return rr;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  RunResult rr = execute(cfg);
  if (!rr.diagnostic.empty()) err << "calabi: " << rr.diagnostic << "\n";
  if (rr.report.is_null()) return rr.exit_code;
  if (!cfg.out.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    auto write = [&](const std::string& name, const std::string& text) {
      std::ofstream f(fs::path(cfg.out) / name, std::ios::binary);
      f << text;
      return static_cast<bool>(f);
    };
    bool ok = !ec && write("report.json", dump_report(rr.report));
    for (const auto& [name, text] : rr.files) ok = ok && write(name, text);
    if (!ok) {
      err << "calabi: cannot write to output directory '" << cfg.out << "'\n";
      return kInvalid;
    }
    out << "wrote " << (fs::path(cfg.out) / "report.json").string() << "\n";
  } else {
    out << dump_report(rr.report);
  }
  return rr.exit_code;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kahler-Ricci and scalar soliton profiles in the Calabi ansatz"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "transverse complex dimension")->check(CLI::Range(1, kMaxDimension));
    sub->add_option("--sigma0", cfg.sigma0, "sigma at s = 0");
    sub->add_option("--s-min", cfg.s_min, "left end of the s window");
    sub->add_option("--s-max", cfg.s_max, "right end of the s window");
    sub->add_option("--samples", cfg.samples, "radial samples")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output directory (report.json and CSV files)");
  };

  auto* cone = app.add_subcommand("expand-cone", "expanding soliton on the cone (a = 0, nu = nu0)");
  common(cone);
  cone->add_option("--kappa", cfg.kappa);
  cone->add_option("--mu", cfg.mu);
  cone->add_option("--q", cfg.q, "aperture exponent, sets mu = -1/q");

  auto* shrink = app.add_subcommand("shrink-bundle", "shrinking soliton on L^{-k}, kappa = 2p/k");
  common(shrink);
  shrink->add_option("--p", cfg.p)->required();
  shrink->add_option("--k", cfg.k)->required();

  auto* expand = app.add_subcommand("expand-bundle", "expanding soliton on L^{-k}, kappa = 2p/k");
  common(expand);
  expand->add_option("--p", cfg.p)->required();
  expand->add_option("--k", cfg.k)->required();
  expand->add_option("--mu", cfg.mu);

  auto* glue = app.add_subcommand("glue", "eternal solution from a shrinking and an expanding soliton");
  common(glue);
  glue->add_option("--p", cfg.p)->required();
  glue->add_option("--k", cfg.k)->required();

  auto* scalar = app.add_subcommand("scalar", "gradient scalar soliton on (1, inf)");
  common(scalar);
  scalar->add_option("--kappa", cfg.kappa);
  scalar->add_option("--c", cfg.c);
  scalar->add_option("--mu", cfg.mu);

  auto* verify = app.add_subcommand("verify", "run verification suites or replay a report");
  common(verify);
  verify->add_option("--suite", cfg.suite, "all, core, mu, radial, classifier, flow, scalar, fullmetric");
  verify->add_option("--from-report", cfg.from_report, "report.json to replay");

  auto* sweep = app.add_subcommand("sweep", "shrinking bundle pipeline over 1 <= k < p <= P in parallel");
  common(sweep);
  sweep->add_option("--p", cfg.p, "largest p");
  sweep->add_option("--k", cfg.k, "largest k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "calabi: " << e.what() << "\n";
    return kInvalid;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return run(cfg, out, err);
}

}  // namespace calabi::cli
