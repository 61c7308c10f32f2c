#include "projconst/cli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "projconst/bounds.hpp"
#include "projconst/errors.hpp"
#include "projconst/linalg.hpp"
#include "projconst/minproj.hpp"
#include "projconst/rng.hpp"

namespace projconst {

namespace {

using nlohmann::json;

json log_json(const LogScalar& v) {
  return json{{"log10", v.sign == 0 ? 0.0 : v.log10()},
              {"sci", to_sci_string(v)},
              {"sign", v.sign}};
}

std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

struct ReportBuilder {
  json report;
  bool all_ok = true;
  std::size_t operations = 0;

  explicit ReportBuilder(const std::string& command) {
    report["command"] = command;
    report["inputs"] = json::object();
    report["results"] = json::object();
    report["verdicts"] = json::object();
  }

  void verdict(const std::string& name, bool ok, double margin) {
    report["verdicts"][name] = json{{"margin", margin}, {"ok", ok}};
    all_ok = all_ok && ok;
  }

  void verdict(const std::string& name, const Verdict& v) {
    verdict(name, v.ok, v.margin_log10);
  }

  RunOutcome finish(std::uint64_t seed) {
    report["seed"] = seed;
    // library calls, not wall-clock: the report must be byte-identical
    // across runs with the same config and seed
    report["runtime"] = json{{"operations", operations}};
    return {report, all_ok ? 0 : 1};
  }
};

SearchConfig resolve_search(const std::optional<SpaceConfig>& config,
                            const RunFlags& flags) {
  SearchConfig s;
  if (config) {
    s = config->search;
  } else {
    s.restarts = 4;
    s.max_iters = 80;
    s.tol = 1e-9;
  }
  if (flags.seed) s.seed = *flags.seed;
  if (flags.restarts) s.restarts = *flags.restarts;
  return s;
}

FunctionalFamily resolve_family(const std::optional<SpaceConfig>& config) {
  if (config) return config->family();
  return build_corollary_space(4);
}

void echo_inputs(ReportBuilder& rb, const std::optional<SpaceConfig>& config,
                 const SearchConfig& scfg, const RunFlags& flags) {
  json in;
  in["config"] = config.has_value();
  if (config) {
    in["n"] = config->n;
    in["m"] = config->m;
    in["p"] = config->p;
    json rows = json::array();
    for (const auto& row : config->functionals) {
      json r = json::array();
      for (const auto& e : row) r.push_back(rat_str(e));
      rows.push_back(r);
    }
    in["functionals"] = rows;
    if (config->hyperplane) in["hyperplane"] = vec_json(*config->hyperplane);
    in["witnesses"] = config->witnesses ? config->witnesses->size() : 0;
  }
  in["search"] = json{{"max_iters", scfg.max_iters},
                      {"restarts", scfg.restarts},
                      {"seed", scfg.seed},
                      {"tol", scfg.tol}};
  if (!flags.lemma.empty()) in["lemma"] = flags.lemma;
  rb.report["inputs"] = in;
}

const Vector& require_hyperplane(const std::optional<SpaceConfig>& config,
                                 const char* command) {
  if (!config || !config->hyperplane)
    throw ParseError("/hyperplane", std::string(command) +
                                        " requires a config with a hyperplane");
  return *config->hyperplane;
}

json alpha_json(const AlphaEstimate& a) {
  json t = json::array();
  for (std::size_t i : a.worst_tuple) t.push_back(i);
  return json{{"mode", a.mode == AlphaMode::WitnessCertificate ? "witness"
                                                               : "numeric"},
              {"raw_min", a.raw_min},
              {"value", a.value},
              {"worst_tuple", t}};
}

json beta_json(const BetaEstimate& b) {
  json r;
  r["mode"] = b.mode == BetaMode::NumericSearch ? "numeric" : "certificate";
  r["not_spanning"] = b.not_spanning;
  if (!b.not_spanning) {
    r["value"] = b.value;
    r["worst_pair"] = json::array({b.worst_pair[0], b.worst_pair[1]});
  }
  return r;
}

json ledger_json(const EpsilonLedger& led) {
  return json{{"K", log_json(led.K)},       {"L", log_json(led.L)},
              {"R1", log_json(led.R1)},     {"R2", log_json(led.R2)},
              {"R3", log_json(led.R3)},     {"alpha", led.alpha},
              {"beta", led.beta},           {"eps0", log_json(led.eps0)},
              {"eps1", log_json(led.eps1)}, {"eps2", log_json(led.eps2)},
              {"eps3", log_json(led.eps3)}, {"q", led.q}};
}

void ledger_verdicts(ReportBuilder& rb, const LedgerChecks& checks,
                     const std::string& prefix = "") {
  rb.verdict(prefix + "eps3_ge_eps0", checks.eps3_ge_eps0);
  rb.verdict(prefix + "ordering", checks.ordering);
  rb.verdict(prefix + "k_alpha_gt_4l", checks.k_alpha_gt_4l);
  rb.verdict(prefix + "t0_in_range", checks.t0_in_range);
}

RunOutcome cmd_space(const std::optional<SpaceConfig>& config,
                     const RunFlags& flags) {
  ReportBuilder rb("space");
  SearchConfig scfg = resolve_search(config, flags);
  FunctionalFamily sp = resolve_family(config);
  echo_inputs(rb, config, scfg, flags);

  json duals = json::array();
  double min_dual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sp.m; ++i) {
    Vector row(sp.F.row(i), sp.F.row(i) + sp.n);
    double d = dual_norm(sp, row, scfg);
    ++rb.operations;
    duals.push_back(d);
    min_dual = std::min(min_dual, d);
  }
  rb.report["results"] =
      json{{"dual_norms", duals}, {"m", sp.m},      {"n", sp.n},
           {"p", sp.p},           {"q", sp.q()},    {"two_p", sp.two_p()}};
  rb.verdict("rank_full", true, 0.0);
  rb.verdict("alpha_applicable", sp.m >= 4, static_cast<double>(sp.m) - 4.0);
  rb.verdict("beta_applicable", sp.m >= 3, static_cast<double>(sp.m) - 3.0);
  rb.verdict("dual_norms_positive", min_dual > 0.0, min_dual);
  return rb.finish(scfg.seed);
}

RunOutcome cmd_params(const std::optional<SpaceConfig>& config,
                      const RunFlags& flags) {
  ReportBuilder rb("params");
  SearchConfig scfg = resolve_search(config, flags);
  FunctionalFamily sp = resolve_family(config);
  echo_inputs(rb, config, scfg, flags);

  AlphaEstimate an = alpha_estimate(sp, std::nullopt, scfg);
  ++rb.operations;
  rb.report["results"]["alpha_numeric"] = alpha_json(an);
  if (config && config->witnesses) {
    AlphaEstimate aw = alpha_estimate(sp, config->witnesses, scfg);
    ++rb.operations;
    rb.report["results"]["alpha_witness"] = alpha_json(aw);
    // the witness value certifies alpha from below, the numeric search
    // approaches it from above
    rb.verdict("alpha_witness_le_numeric", aw.value <= an.value + 1e-6,
               an.value - aw.value);
  }
  BetaEstimate bc = beta_estimate(sp, BetaMode::CoefficientCertificate, scfg);
  BetaEstimate bn = beta_estimate(sp, BetaMode::NumericSearch, scfg);
  rb.operations += 2;
  rb.report["results"]["beta_certificate"] = beta_json(bc);
  rb.report["results"]["beta_numeric"] = beta_json(bn);

  rb.verdict("alpha_positive", an.raw_min > 0.0, an.raw_min);
  rb.verdict("beta_spans", !bc.not_spanning, bc.not_spanning ? -1.0 : 1.0);
  if (!bc.not_spanning)
    rb.verdict("beta_numeric_le_certificate",
               bn.value <= bc.value * (1.0 + 1e-6) + 1e-9,
               bc.value - bn.value);
  return rb.finish(scfg.seed);
}

RunOutcome cmd_ledger(const std::optional<SpaceConfig>& config,
                      const RunFlags& flags) {
  ReportBuilder rb("ledger");
  SearchConfig scfg = resolve_search(config, flags);
  FunctionalFamily sp = resolve_family(config);
  echo_inputs(rb, config, scfg, flags);

  std::optional<WitnessMap> wit;
  if (config) wit = config->witnesses;
  AlphaEstimate alpha = alpha_estimate(sp, wit, scfg);
  BetaEstimate beta = beta_estimate(sp, BetaMode::CoefficientCertificate, scfg);
  rb.operations += 2;
  rb.report["results"]["alpha"] = alpha_json(alpha);
  rb.report["results"]["beta"] = beta_json(beta);
  if (beta.not_spanning) {
    rb.verdict("beta_finite", false, -1.0);
    return rb.finish(scfg.seed);
  }
  rb.verdict("beta_finite", true, 1.0);
  EpsilonLedger led =
      compute_ledger(sp.n, sp.m, sp.p, alpha.value, beta.value);
  rb.report["results"]["ledger"] = ledger_json(led);
  ledger_verdicts(rb, ledger_checks(led));
  return rb.finish(scfg.seed);
}

RunOutcome cmd_classify(const std::optional<SpaceConfig>& config,
                        const RunFlags& flags) {
  ReportBuilder rb("classify");
  SearchConfig scfg = resolve_search(config, flags);
  const Vector& hv = require_hyperplane(config, "classify");
  FunctionalFamily sp = config->family();
  echo_inputs(rb, config, scfg, flags);

  Hyperplane f = make_hyperplane(sp, hv, scfg);
  AlphaEstimate alpha = alpha_estimate(sp, config->witnesses, scfg);
  BetaEstimate beta = beta_estimate(sp, BetaMode::CoefficientCertificate, scfg);
  rb.operations += 3;
  if (beta.not_spanning) {
    rb.verdict("beta_finite", false, -1.0);
    return rb.finish(scfg.seed);
  }
  rb.verdict("beta_finite", true, 1.0);
  EpsilonLedger led =
      compute_ledger(sp.n, sp.m, sp.p, alpha.value, beta.value);
  CaseLabel label = classify_hyperplane(sp, f, led, scfg);
  ++rb.operations;
  const char* tag = label.tag == CaseLabel::Tag::NearSingle ? "near_single"
                    : label.tag == CaseLabel::Tag::NearPair ? "near_pair"
                                                            : "generic";
  rb.report["results"] = json{{"K", log_json(led.K)},
                              {"L", log_json(led.L)},
                              {"a0", label.a0},
                              {"achieved_distance", label.achieved_distance},
                              {"k", label.k},
                              {"l", label.l},
                              {"r0", label.r0},
                              {"tag", tag}};
  rb.verdict("distance_attained",
             std::isfinite(label.achieved_distance) &&
                 label.achieved_distance >= 0.0,
             label.achieved_distance);
  if (label.tag == CaseLabel::Tag::NearPair) {
    ExclusivityReport ex = exclusivity_check(
        sp, f, alpha.value, led.K.to_double(), led.L.to_double(), scfg);
    ++rb.operations;
    rb.report["results"]["exclusivity"] =
        json{{"a0", ex.a0},
             {"k", ex.k},
             {"l", ex.l},
             {"pair_distance", ex.pair_distance},
             {"precondition_met", ex.precondition_met},
             {"r0", ex.r0},
             {"single_distance", ex.single_distance},
             {"witness_found", ex.witness_found}};
    if (ex.precondition_met) {
      bool ok = true;
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& pr : ex.pairs) {
        ok = ok && !pr.counterexample;
        margin = std::min(margin, pr.min_residual);
      }
      if (ex.pairs.empty()) margin = 0.0;
      rb.verdict("exclusivity_no_violation", ok, margin);
    }
  }
  return rb.finish(scfg.seed);
}

RunOutcome cmd_minproj(const std::optional<SpaceConfig>& config,
                       const RunFlags& flags) {
  ReportBuilder rb("minproj");
  SearchConfig scfg = resolve_search(config, flags);
  const Vector& hv = require_hyperplane(config, "minproj");
  FunctionalFamily sp = config->family();
  echo_inputs(rb, config, scfg, flags);

  Hyperplane f = make_hyperplane(sp, hv, scfg);
  MinProjResult res = minimal_projection_search(sp, f, scfg);
  SmoothnessReport gap = smoothness_gap_check(sp, res, 100, scfg);
  rb.operations += 3;
  std::size_t evals = 0;
  for (const auto& tr : res.trace) evals += tr.evaluations;
  rb.report["results"] =
      json{{"crude_upper", res.crude_upper},
           {"evaluations", evals},
           {"f", vec_json(res.projection.f.f)},
           {"norm_estimate", res.norm_estimate},
           {"restarts", res.trace.size()},
           {"smoothness", json{{"bound_lemma", gap.bound_lemma},
                               {"bound_sqrt", gap.bound_sqrt},
                               {"eps", gap.eps},
                               {"falsify_min_residual",
                                gap.falsify_min_residual},
                               {"max_abs_fyw", gap.max_abs_fyw},
                               {"ok", gap.ok},
                               {"samples", gap.samples},
                               {"t0", gap.t0},
                               {"w_norm", gap.w_norm}}},
           {"w", vec_json(res.projection.w)}};
  rb.verdict("estimate_ge_one", res.norm_estimate >= 1.0 - 1e-9,
             res.norm_estimate - 1.0);
  rb.verdict("estimate_le_crude",
             res.norm_estimate <= res.crude_upper + 1e-9,
             res.crude_upper - res.norm_estimate);
  rb.verdict("smoothness_gap", gap.ok, gap.falsify_min_residual);
  return rb.finish(scfg.seed);
}

void lemma_funkcjonaly(ReportBuilder& rb, const FunctionalFamily& sp,
                       const SearchConfig& scfg) {
  if (sp.n < 2)
    throw HypothesisViolation("funkcjonaly: the floor needs n >= 2");
  SearchResult res = maxmin_search(sp, std::nullopt, scfg);
  ++rb.operations;
  double floor = 1.0 / (std::sqrt(static_cast<double>(sp.n)) *
                        static_cast<double>(sp.n - 1) *
                        static_cast<double>(sp.m));
  rb.report["results"]["funkcjonaly"] =
      json{{"evaluations", res.evaluations},
           {"floor", floor},
           {"value", res.value},
           {"witness", vec_json(res.point)}};
  rb.verdict("funkcjonaly:floor_met", res.value >= floor * (1.0 - 1e-9),
             res.value - floor);
}

void lemma_objetosc(ReportBuilder& rb, const SearchConfig& scfg) {
  const std::size_t ns[] = {3, 4, 5, 6};
  const double ts[] = {0.05, 0.1, 0.2, 0.5};
  const std::size_t samples = 100000;
  json cells = json::array();
  double slab_margin = std::numeric_limits<double>::infinity();
  double hat_margin = std::numeric_limits<double>::infinity();
  std::uint64_t idx = 0;
  for (std::size_t n : ns) {
    for (double t : ts) {
      CapMeasureSample s =
          cap_measure_mc(n, t, samples, rng::keyed(scfg.seed, 71, idx++));
      ++rb.operations;
      cells.push_back(json{{"estimate", s.estimate},
                           {"n", s.n},
                           {"samples", s.samples},
                           {"std_error", s.std_error},
                           {"t", s.t}});
      slab_margin = std::min(
          slab_margin, t * static_cast<double>(n - 1) + 3.0 * s.std_error -
                           s.estimate);
      // on S^2 the slab measure is exactly t
      if (n == 3)
        hat_margin = std::min(
            hat_margin, 4.0 * s.std_error - std::fabs(s.estimate - t));
    }
  }
  rb.report["results"]["objetosc"] = json{{"cells", cells}};
  rb.verdict("objetosc:slab_bound", slab_margin >= 0.0, slab_margin);
  rb.verdict("objetosc:hat_box", hat_margin >= 0.0, hat_margin);
}

void lemma_modul(ReportBuilder& rb, const SearchConfig& scfg) {
  // the lq norm is cheap, and the closed-form comparison needs a witness
  // within a few thousandths, so search harder than the base config
  SearchConfig mcfg = scfg;
  mcfg.restarts = std::max<std::size_t>(mcfg.restarts, 12);
  mcfg.max_iters = std::max<std::size_t>(mcfg.max_iters, 200);
  const double qs[] = {1.2, 1.5, 2.0};
  const std::size_t dims[] = {2, 3};
  const std::vector<double> ts = {0.2, 0.5, 1.0, 1.5};
  json probes = json::array();
  double margin = std::numeric_limits<double>::infinity();
  double euclid_margin = std::numeric_limits<double>::infinity();
  bool any_violation = false;
  for (double q : qs) {
    for (std::size_t d : dims) {
      auto out = modulus_falsify(NormSpec::lq(q, d), ts, mcfg);
      ++rb.operations;
      for (const auto& pr : out) {
        probes.push_back(json{{"bound", pr.bound},
                              {"d", d},
                              {"delta_upper", pr.delta_upper},
                              {"q", q},
                              {"t", pr.t},
                              {"violation", pr.violation}});
        any_violation = any_violation || pr.violation;
        margin = std::min(margin, pr.delta_upper - pr.bound);
        if (q == 2.0) {
          double closed = 1.0 - std::sqrt(1.0 - pr.t * pr.t / 4.0);
          euclid_margin =
              std::min(euclid_margin, 5e-3 - (pr.delta_upper - closed));
        }
      }
    }
  }
  rb.report["results"]["modul"] = json{{"probes", probes}};
  rb.verdict("modul:no_violation", !any_violation, margin);
  rb.verdict("modul:euclidean_matches_closed_form", euclid_margin >= 0.0,
             euclid_margin);
}

void lemma_modul2(ReportBuilder& rb, const FunctionalFamily& sp,
                  const SearchConfig& scfg) {
  // each quotient evaluation hides a sphere search, so keep this side lean;
  // a looser quotient witness can only widen the margin, never fake a pass
  SearchConfig mcfg = scfg;
  mcfg.restarts = std::min<std::size_t>(mcfg.restarts, 2);
  mcfg.max_iters = std::min<std::size_t>(mcfg.max_iters, 40);
  const std::vector<double> ts = {0.6, 1.2};
  json probes = json::array();
  double margin = std::numeric_limits<double>::infinity();
  bool any_violation = false;
  for (std::uint64_t trial = 0; trial < 2; ++trial) {
    rng::Stream st(mcfg.seed, 91 + trial);
    Vector y = st.normal_vec(sp.n);
    SearchConfig tcfg = mcfg;
    tcfg.seed = rng::keyed(mcfg.seed, 92, trial);
    auto out = modulus_falsify(NormSpec::quotient(sp, {y}), ts, tcfg);
    ++rb.operations;
    for (const auto& pr : out) {
      probes.push_back(json{{"bound", pr.bound},
                            {"delta_upper", pr.delta_upper},
                            {"t", pr.t},
                            {"trial", trial},
                            {"violation", pr.violation}});
      any_violation = any_violation || pr.violation;
      margin = std::min(margin, pr.delta_upper - pr.bound);
    }
  }
  rb.report["results"]["modul2"] = json{{"probes", probes}};
  rb.verdict("modul2:no_violation", !any_violation, margin);
}

void lemma_markov(ReportBuilder& rb, const SearchConfig& scfg) {
  const std::pair<std::size_t, std::size_t> cases[] = {{4, 1}, {6, 3}, {8, 4}};
  json reports = json::array();
  double margin = std::numeric_limits<double>::infinity();
  bool all_ok = true;
  for (auto [d, k] : cases) {
    MarkovReport rep = markov_chain_check(d, k, 300, scfg);
    ++rb.operations;
    reports.push_back(json{{"degree", rep.degree},
                           {"k", rep.k},
                           {"max_ratio", rep.max_ratio},
                           {"ok", rep.ok},
                           {"trials", rep.trials}});
    all_ok = all_ok && rep.ok;
    margin = std::min(margin, 1.0 - rep.max_ratio);
  }
  rb.report["results"]["markov"] = json{{"cases", reports}};
  rb.verdict("markov:bound", all_ok, margin);
}

void lemma_vandermonde(ReportBuilder& rb, const SearchConfig& scfg) {
  json sets = json::array();
  double margin = std::numeric_limits<double>::infinity();
  bool all_ok = true;
  for (std::size_t size = 2; size <= 8; ++size) {
    for (std::uint64_t set = 0; set < 3; ++set) {
      rng::Stream st(scfg.seed, 80 + size * 10 + set);
      std::vector<double> nodes(size);
      // resample until the nodes are separated enough to invert stably
      for (int attempt = 0; attempt < 200; ++attempt) {
        for (auto& x : nodes) x = st.uniform(-1.0, 1.0);
        std::sort(nodes.begin(), nodes.end());
        double gap = 2.0;
        for (std::size_t i = 1; i < size; ++i)
          gap = std::min(gap, nodes[i] - nodes[i - 1]);
        if (gap >= 0.05) break;
      }
      double exact = exact_inf_norm_inverse(vandermonde_matrix(nodes));
      double bound = vandermonde_inverse_norm_bound(nodes);
      ++rb.operations;
      double m = std::log10(bound) - std::log10(exact);
      sets.push_back(json{{"bound", bound},
                          {"exact", exact},
                          {"log10_slack", m},
                          {"nodes", vec_json(nodes)},
                          {"size", size}});
      all_ok = all_ok && exact <= bound * (1.0 + 1e-9);
      margin = std::min(margin, m);
    }
  }
  rb.report["results"]["vandermonde"] = json{{"sets", sets}};
  rb.verdict("vandermonde:inverse_bound", all_ok, margin);
}

void lemma_zawezenie(ReportBuilder& rb, const FunctionalFamily& sp,
                     const SearchConfig& scfg) {
  json trials = json::array();
  double margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    Vector g = rng::Stream(scfg.seed, 101 + trial).normal_vec(sp.n);
    Vector h = rng::Stream(scfg.seed, 201 + trial).normal_vec(sp.n);
    SearchConfig tcfg = scfg;
    tcfg.seed = rng::keyed(scfg.seed, 102, trial);
    double restricted = restricted_dual_norm(sp, g, h, tcfg);
    SearchConfig lcfg = tcfg;
    lcfg.restarts = std::min<std::size_t>(lcfg.restarts, 4);
    auto line = minimize_convex_lowdim(
        [&](const Vector& x) {
          Vector gm = g;
          for (std::size_t i = 0; i < sp.n; ++i) gm[i] -= x[0] * h[i];
          return dual_norm(sp, gm, lcfg);
        },
        1, tcfg);
    rb.operations += 2;
    trials.push_back(json{{"line_min", line.value},
                          {"r", line.point[0]},
                          {"restricted", restricted},
                          {"trial", trial}});
    margin = std::min(margin, restricted - line.value);
  }
  rb.report["results"]["zawezenie"] = json{{"trials", trials}};
  rb.verdict("zawezenie:restriction_keeps_distance", margin >= -1e-7, margin);
}

RunOutcome cmd_verify(const std::optional<SpaceConfig>& config,
                      const RunFlags& flags) {
  static const std::set<std::string> lemmas = {
      "funkcjonaly", "objetosc", "modul",      "modul2",
      "markov",      "vandermonde", "zawezenie"};
  if (!flags.lemma.empty() && !lemmas.count(flags.lemma))
    throw ParseError("/lemma", "unknown lemma: " + flags.lemma);
  ReportBuilder rb("verify");
  SearchConfig scfg = resolve_search(config, flags);
  FunctionalFamily sp = resolve_family(config);
  echo_inputs(rb, config, scfg, flags);

  auto want = [&](const char* name) {
    return flags.lemma.empty() || flags.lemma == name;
  };
  if (want("funkcjonaly")) lemma_funkcjonaly(rb, sp, scfg);
  if (want("objetosc")) lemma_objetosc(rb, scfg);
  if (want("modul")) lemma_modul(rb, scfg);
  if (want("modul2")) lemma_modul2(rb, sp, scfg);
  if (want("markov")) lemma_markov(rb, scfg);
  if (want("vandermonde")) lemma_vandermonde(rb, scfg);
  if (want("zawezenie")) lemma_zawezenie(rb, sp, scfg);
  return rb.finish(scfg.seed);
}

RunOutcome cmd_corollary(const std::optional<SpaceConfig>& config,
                         const RunFlags& flags) {
  ReportBuilder rb("corollary");
  SearchConfig scfg = resolve_search(config, flags);
  const std::size_t n = flags.corollary_n;
  rb.report["inputs"] = json{{"n", n}, {"seed", scfg.seed}};

  FunctionalFamily sp = build_corollary_space(n);
  try {
    CorollaryCertificate cert = corollary_exact_verify(n);
    ++rb.operations;
    std::size_t alpha_records = 0;
    std::size_t beta_records = 0;
    for (const auto& rec : cert.witness_log) {
      if (rec.bullet.rfind("alpha", 0) == 0) ++alpha_records;
      if (rec.bullet.rfind("beta", 0) == 0) ++beta_records;
    }
    rb.report["results"]["certificate"] =
        json{{"alpha_bound", rat_str(cert.alpha_bound)},
             {"alpha_records", alpha_records},
             {"beta_bound", rat_str(cert.beta_bound)},
             {"beta_records", beta_records},
             {"witness_count", cert.witness_log.size()}};
    rb.verdict("certificate_ok", true,
               static_cast<double>(cert.witness_log.size()));
  } catch (const CertificateFailure& e) {
    rb.report["results"]["certificate"] = json{{"error", e.what()}};
    rb.verdict("certificate_ok", false, -1.0);
    return rb.finish(scfg.seed);
  }

  double alpha = 1.0 / (2.0 * static_cast<double>(n));
  double beta = static_cast<double>(n) * static_cast<double>(n);
  EpsilonLedger led = compute_ledger(sp.n, sp.m, sp.p, alpha, beta);
  LogScalar display = corollary_bound(n);
  rb.report["results"]["ledger"] = ledger_json(led);
  rb.report["results"]["display_bound"] = log_json(display);
  rb.report["results"]["m"] = sp.m;
  rb.report["results"]["n"] = sp.n;
  rb.report["results"]["p"] = sp.p;
  ledger_verdicts(rb, ledger_checks(led));
  rb.verdict("eps0_gt_display", display <= led.eps0 && led.eps0.positive(),
             led.eps0.log10() - display.log10());
  return rb.finish(scfg.seed);
}

}  // namespace

FunctionalFamily SpaceConfig::family() const {
  MatrixDense F(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      F.at(i, j) = functionals[i][j].convert_to<double>();
  return FunctionalFamily(p, F);
}

RunOutcome run_suite(const std::string& command,
                     const std::optional<SpaceConfig>& config,
                     const RunFlags& flags) {
  if (command == "space") return cmd_space(config, flags);
  if (command == "params") return cmd_params(config, flags);
  if (command == "ledger") return cmd_ledger(config, flags);
  if (command == "classify") return cmd_classify(config, flags);
  if (command == "minproj") return cmd_minproj(config, flags);
  if (command == "verify") return cmd_verify(config, flags);
  if (command == "corollary") return cmd_corollary(config, flags);
  throw ParseError("<command>", "unknown command: " + command);
}

std::string report_text(const nlohmann::json& report) {
  std::ostringstream os;
  os << "projconst " << report.value("command", std::string("?")) << "\n";
  if (report.contains("results")) {
    for (const auto& [key, val] : report["results"].items()) {
      if (val.is_number() || val.is_boolean() || val.is_string())
        os << "  " << key << " = " << val.dump() << "\n";
      else if (val.is_object() && val.contains("sci"))
        os << "  " << key << " = " << val["sci"].get<std::string>() << "\n";
      else if (val.is_object() && val.contains("alpha_bound"))
        os << "  alpha_bound = " << val["alpha_bound"].get<std::string>()
           << ", beta_bound = " << val["beta_bound"].get<std::string>()
           << "\n";
    }
  }
  if (report.contains("verdicts")) {
    for (const auto& [key, val] : report["verdicts"].items())
      os << "  " << (val["ok"].get<bool>() ? "pass" : "FAIL") << "  " << key
         << " (margin " << val["margin"].dump() << ")\n";
  }
  if (report.contains("seed"))
    os << "  seed " << report["seed"].dump() << ", operations "
       << report["runtime"]["operations"].dump() << "\n";
  return os.str();
}

namespace {

std::string jpath(const std::string& base, std::size_t i) {
  return base + "/" + std::to_string(i);
}

std::size_t req_positive(const json& doc, const char* key) {
  std::string path = std::string("/") + key;
  if (!doc.contains(key)) throw ParseError(path, "missing required field");
  const json& v = doc[key];
  if (!v.is_number_integer())
    throw ParseError(path, "expected a positive integer");
  long long x = v.get<long long>();
  if (x <= 0) throw ParseError(path, "expected a positive integer");
  return static_cast<std::size_t>(x);
}

Rational parse_rat(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(path, "entry must be finite");
    return Rational(d);
  }
  if (v.is_string()) {
    try {
      Rational r(v.get<std::string>());
      return r;
    } catch (const std::exception&) {
      throw ParseError(path, "expected a rational like \"2/3\"");
    }
  }
  throw ParseError(path, "expected a number or a rational string");
}

double parse_entry_double(const json& v, const std::string& path) {
  return parse_rat(v, path).convert_to<double>();
}

}  // namespace

SpaceConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "config must be a JSON object");
  static const std::set<std::string> known = {
      "n", "m", "p", "functionals", "hyperplane", "witnesses", "search"};
  for (const auto& [key, val] : doc.items()) {
    (void)val;
    if (!known.count(key)) throw ParseError("/" + key, "unknown field");
  }

  SpaceConfig cfg;
  cfg.n = req_positive(doc, "n");
  cfg.m = req_positive(doc, "m");
  std::size_t p = req_positive(doc, "p");
  if (p > 64) throw ParseError("/p", "p larger than 64 is not supported");
  cfg.p = static_cast<int>(p);

  if (!doc.contains("functionals"))
    throw ParseError("/functionals", "missing required field");
  const json& rows = doc["functionals"];
  if (!rows.is_array() || rows.size() != cfg.m)
    throw ParseError("/functionals", "expected an array of m rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rpath = jpath("/functionals", i);
    const json& row = rows[i];
    if (!row.is_array() || row.size() != cfg.n)
      throw ParseError(rpath, "expected an array of n entries");
    std::vector<Rational> r(cfg.n);
    for (std::size_t j = 0; j < cfg.n; ++j)
      r[j] = parse_rat(row[j], jpath(rpath, j));
    cfg.functionals.push_back(std::move(r));
  }

  if (doc.contains("hyperplane")) {
    const json& h = doc["hyperplane"];
    if (!h.is_array() || h.size() != cfg.n)
      throw ParseError("/hyperplane", "expected an array of n entries");
    Vector v(cfg.n);
    for (std::size_t j = 0; j < cfg.n; ++j)
      v[j] = parse_entry_double(h[j], jpath("/hyperplane", j));
    cfg.hyperplane = std::move(v);
  }

  if (doc.contains("witnesses")) {
    const json& ws = doc["witnesses"];
    if (!ws.is_array())
      throw ParseError("/witnesses", "expected an array of witness entries");
    WitnessMap map;
    for (std::size_t t = 0; t < ws.size(); ++t) {
      const std::string wpath = jpath("/witnesses", t);
      const json& entry = ws[t];
      if (!entry.is_object() || !entry.contains("tuple") ||
          !entry.contains("v"))
        throw ParseError(wpath, "expected an object with tuple and v");
      const json& tup = entry["tuple"];
      if (!tup.is_array() || tup.size() != 4)
        throw ParseError(wpath + "/tuple", "expected four indices");
      std::array<std::size_t, 4> key{};
      for (std::size_t j = 0; j < 4; ++j) {
        if (!tup[j].is_number_integer() || tup[j].get<long long>() < 0)
          throw ParseError(jpath(wpath + "/tuple", j),
                           "expected a row index");
        key[j] = tup[j].get<std::size_t>();
        if (key[j] >= cfg.m)
          throw ParseError(jpath(wpath + "/tuple", j), "index out of range");
      }
      if (!(key[1] < key[2] && key[2] < key[3]))
        throw ParseError(wpath + "/tuple", "expected j < k < l");
      const json& wv = entry["v"];
      if (!wv.is_array() || wv.size() != cfg.n)
        throw ParseError(wpath + "/v", "expected an array of n entries");
      Vector v(cfg.n);
      for (std::size_t j = 0; j < cfg.n; ++j)
        v[j] = parse_entry_double(wv[j], jpath(wpath + "/v", j));
      map[key] = std::move(v);
    }
    cfg.witnesses = std::move(map);
  }

  if (doc.contains("search")) {
    const json& s = doc["search"];
    if (!s.is_object()) throw ParseError("/search", "expected an object");
    static const std::set<std::string> skeys = {"seed", "restarts",
                                                "max_iters", "tol"};
    for (const auto& [key, val] : s.items()) {
      (void)val;
      if (!skeys.count(key)) throw ParseError("/search/" + key, "unknown field");
    }
    if (s.contains("seed")) {
      if (!s["seed"].is_number_integer() || s["seed"].get<long long>() < 0)
        throw ParseError("/search/seed", "expected a nonnegative integer");
      cfg.search.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("restarts")) {
      if (!s["restarts"].is_number_integer() ||
          s["restarts"].get<long long>() <= 0)
        throw ParseError("/search/restarts", "expected a positive integer");
      cfg.search.restarts = s["restarts"].get<std::size_t>();
    }
    if (s.contains("max_iters")) {
      if (!s["max_iters"].is_number_integer() ||
          s["max_iters"].get<long long>() <= 0)
        throw ParseError("/search/max_iters", "expected a positive integer");
      cfg.search.max_iters = s["max_iters"].get<std::size_t>();
    }
    if (s.contains("tol")) {
      if (!s["tol"].is_number() || s["tol"].get<double>() <= 0.0)
        throw ParseError("/search/tol", "expected a positive number");
      cfg.search.tol = s["tol"].get<double>();
    }
  }

  cfg.family();  // throws RankDeficient or ZeroFunctional on a bad matrix
  return cfg;
}

}  // namespace projconst
