#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cmtheta/boundary.hpp"
#include "cmtheta/errors.hpp"
#include "cmtheta/eta.hpp"
#include "cmtheta/fourier_jacobi.hpp"
#include "cmtheta/io.hpp"
#include "cmtheta/pairing.hpp"
#include "cmtheta/random.hpp"
#include "cmtheta/theta.hpp"

namespace cmtheta {

struct RunConfig {
  Lattice lattice = Lattice::default_cm();
  int r_min = 1;
  int r_max = 3;
  Characteristic ch;
  int quad_n = 64;
  /// Overrides the per-check default tolerance when set.
  std::optional<double> tol;
  std::uint64_t seed = 20240601;
  std::string out;
  /// Subcommand-specific keys.
  std::map<std::string, std::string> extra;

  void validate() const {
    if (r_min < 1) throw ConfigError("r_min must be >= 1");
    if (r_max < r_min) throw ConfigError("r_max must be >= r_min");
    if (quad_n < 4) throw ConfigError("quadrature n must be >= 4, got " + std::to_string(quad_n));
    if (tol && !(*tol > 0)) throw ConfigError("tolerance must be positive");
  }

  double tol_or(double fallback) const { return tol.value_or(fallback); }

  bool has(const std::string& key) const { return extra.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = extra.find(key);
    return it == extra.end() ? fallback : it->second;
  }
  double get_double(const std::string& key, double fallback) const {
    auto it = extra.find(key);
    if (it == extra.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw ConfigError("bad number for " + key + ": " + it->second);
    }
  }
  int get_int(const std::string& key, int fallback) const {
    auto it = extra.find(key);
    if (it == extra.end()) return fallback;
    try {
      return std::stoi(it->second);
    } catch (const std::exception&) {
      throw ConfigError("bad integer for " + key + ": " + it->second);
    }
  }
  Rational get_rational(const std::string& key, Rational fallback) const {
    auto it = extra.find(key);
    if (it == extra.end()) return fallback;
    try {
      return Rational::parse(it->second);
    } catch (const std::exception&) {
      throw ConfigError("bad rational for " + key + ": " + it->second);
    }
  }

  static RunConfig from_key_values(std::map<std::string, std::string> kv) {
    RunConfig c;
    try {
      c.lattice = lattice_from_config(kv);
    } catch (const InvalidLattice& e) {
      throw ConfigError(e.what());
    }
    for (const char* k : {"omega1_re", "omega1_im", "omega2_re", "omega2_im", "beta0_im"}) kv.erase(k);
    auto take = [&](const char* key) -> std::optional<std::string> {
      auto it = kv.find(key);
      if (it == kv.end()) return std::nullopt;
      std::string v = it->second;
      kv.erase(it);
      return v;
    };
    auto to_int = [](const std::string& key, const std::string& v) {
      try {
        std::size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
      } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": " + v);
      }
    };
    try {
      if (auto v = take("r")) c.r_min = c.r_max = to_int("r", *v);
      if (auto v = take("r_min")) c.r_min = to_int("r_min", *v);
      if (auto v = take("r_max")) c.r_max = to_int("r_max", *v);
      if (auto v = take("rho")) c.ch.rho = Rational::parse(*v);
      if (auto v = take("s")) c.ch.s = Rational::parse(*v);
      if (auto v = take("quad_n")) c.quad_n = to_int("quad_n", *v);
      if (auto v = take("tol")) c.tol = std::stod(*v);
      if (auto v = take("seed")) c.seed = std::stoull(*v);
      if (auto v = take("out")) c.out = *v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad config value: ") + e.what());
    }
    c.extra = std::move(kv);
    return c;
  }
};

/// One named check with the claim it tests.
struct CheckLog {
  json checks = json::array();
  bool pass = true;
  std::string first_failure;

  void add(const std::string& name, const std::string& claim, double measured, double bound, bool ok,
           json detail = json::object()) {
    json c{{"name", name}, {"claim", claim}, {"measured", measured}, {"bound", bound}, {"pass", ok}};
    if (!detail.empty()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
    if (!ok && pass) first_failure = name + ": measured " + std::to_string(measured) + " exceeds " + std::to_string(bound);
    pass = pass && ok;
  }
};

struct RunResult {
  int exit_code = 0;
  json report;
  std::string first_failure;
};

namespace harness {

inline const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"theta-eval",      "basis",          "gram",
                                              "eta-apply",       "duality-check",  "bijectivity",
                                              "fj-roundtrip",    "theorem2-check", "orbit-classify",
                                              "no2cone",         "kernel-invariance"};
  return names;
}

inline json config_json(const RunConfig& c) {
  return {{"lattice", to_json(c.lattice)}, {"r_min", c.r_min},       {"r_max", c.r_max},
          {"rho", c.ch.rho.str()},         {"s", c.ch.s.str()},      {"quad_n", c.quad_n},
          {"seed", c.seed},                {"tol", c.tol ? json(*c.tol) : json(nullptr)}};
}

inline LineBundle bundle_at(const RunConfig& c, int r, CurveTag tag) { return LineBundle(c.lattice, r, tag, c.ch); }

inline void theta_eval(const RunConfig& c, CheckLog& log, json& out) {
  cplx u(c.get_double("u_re", 0.0), c.get_double("u_im", 0.0));
  cplx z(c.get_double("z_re", 0.0), c.get_double("z_im", 1.0));
  Rational rho = c.get_rational("theta_rho", c.ch.rho), s = c.get_rational("theta_s", c.ch.s);
  double tol = c.tol_or(1e-14);
  if (!(z.imag() > 0)) throw ConfigError("theta modulus needs Im(z) > 0");
  ThetaWindow w = theta_window(u, z, rho.to_double(), tol);
  cplx value = theta_series_window(u, z, rho.to_double(), s.to_double(), w);
  ThetaWindow wide = w;
  wide.half_width = 2 * w.half_width + 1;
  cplx wider = theta_series_window(u, z, rho.to_double(), s.to_double(), wide);
  double peak = 0.0;
  for (std::int64_t n = w.center - 1; n <= w.center + 1; ++n) {
    double m = static_cast<double>(n) + rho.to_double();
    peak = std::max(peak, std::abs(std::exp(cplx(0.0, pi) * (m * m * z + 2.0 * m * (u + s.to_double())))));
  }
  out["value"] = to_json(value);
  out["window"] = {{"center", w.center}, {"half_width", w.half_width}};
  log.add("truncation soundness", "doubling the window changes the theta sum by less than tol (relative to peak term)",
          std::abs(wider - value) / std::max(peak, 1e-300), tol, std::abs(wider - value) <= tol * peak);
}

inline void basis(const RunConfig& c, CheckLog& log, json& out) {
  Rng rng(c.seed);
  double tol = c.tol_or(1e-9);
  CurveTag tag = c.get("tag", "E") == "Eprime" ? CurveTag::Eprime : CurveTag::E;
  json levels = json::array();
  for (int r = c.r_min; r <= c.r_max; ++r) {
    LineBundle b = bundle_at(c, r, tag);
    std::vector<Section> basis = canonical_basis(b);
    double worst = 0.0;
    for (const auto& f : basis)
      for (int k = 0; k < 100; ++k) {
        cplx u = random_point(c.lattice, rng);
        for (LatticeElem g : {c.lattice.element(1, 0), c.lattice.element(0, 1)}) {
          cplx j = factor_of_automorphy(b, g, u);
          cplx jf = j * f(u);
          worst = std::max(worst, std::abs(f(u + embed(g, tag)) - jf) / (1.0 + std::abs(jf)));
        }
      }
    json sections = json::array();
    for (const auto& f : basis) sections.push_back(to_json(f));
    levels.push_back({{"r", r}, {"mu", b.mu()}, {"sections", sections}});
    log.add("quasi-periodicity r=" + std::to_string(r),
            "basis sections follow the factor of automorphy of their bundle", worst, tol, worst <= tol);
  }
  out["levels"] = levels;
}

inline void gram(const RunConfig& c, CheckLog& log, json& out, std::string& csv) {
  double tol = c.tol_or(1e-7);
  CurveTag tag = c.get("tag", "E") == "Eprime" ? CurveTag::Eprime : CurveTag::E;
  json levels = json::array();
  csv = "r,i,j,re,im\n";
  for (int r = c.r_min; r <= c.r_max; ++r) {
    LineBundle b = bundle_at(c, r, tag);
    Eigen::MatrixXcd g = gram_matrix(b, c.quad_n);
    double expected = theta_norm_closed_form(b);
    double diag = 0.0, off = 0.0, herm = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index k = 0; k < g.cols(); ++k) {
        if (i == k)
          diag = std::max(diag, std::abs(g(i, k) - expected) / expected);
        else
          off = std::max(off, std::abs(g(i, k)) / expected);
        herm = std::max(herm, std::abs(g(i, k) - std::conj(g(k, i))));
      }
    std::string body = to_csv(g);
    std::istringstream lines(body);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) csv += std::to_string(r) + "," + line + "\n";
    levels.push_back({{"r", r}, {"mu", b.mu()}, {"expected_diagonal", expected}, {"gram", to_json(g)}});
    std::string sr = " r=" + std::to_string(r);
    log.add("norm" + sr, "theta basis norm equals |omega2|/(2 sqrt(lambda))", diag, tol, diag <= tol);
    log.add("orthogonality" + sr, "distinct theta basis sections are orthogonal", off, tol, off <= tol);
    log.add("hermitian" + sr, "Gram matrix is Hermitian", herm, 1e-12, herm <= 1e-12);
  }
  out["levels"] = levels;
}

inline Section section_from_config(const RunConfig& c, int r, CurveTag tag) {
  if (c.has("section")) {
    std::ifstream in(c.get("section", ""));
    if (!in) throw ConfigError("cannot open section file " + c.get("section", ""));
    try {
      return section_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad section JSON: ") + e.what());
    }
  }
  LineBundle b = bundle_at(c, r, tag);
  int j = c.get_int("j", 0);
  if (j < 0 || j >= b.mu()) throw ConfigError("basis index j out of range");
  return basis_section(b, j);
}

inline void eta_apply(const RunConfig& c, CheckLog& log, json& out) {
  double tol = c.tol_or(1e-7);
  Section phi = section_from_config(c, c.r_min, CurveTag::Eprime);
  if (phi.tag() != CurveTag::Eprime) throw ConfigError("eta-apply expects a section on Eprime");
  CohomologyClass cls = make_class(eta_prime_dolbeault(phi), c.quad_n);
  // ⟨φ', φ'_k⟩ with φ'_k = check of the k-th basis section of the dual bundle.
  std::vector<Section> dual = canonical_basis(cls.representative.dual);
  double dev = 0.0;
  std::vector<cplx> metric;
  for (std::size_t k = 0; k < dual.size(); ++k) {
    cplx m = hermitian_inner(phi, check_map(dual[k]), c.quad_n);
    metric.push_back(m);
    dev = std::max(dev, std::abs(m - cls.pairings[k]) / (1.0 + std::abs(m)));
  }
  out["input"] = to_json(phi);
  out["dual_bundle"] = to_json(cls.representative.dual);
  out["pairings"] = to_json(cls.pairings);
  log.add("well-formed", "eta'_D(phi') pairs periodically with sections of the dual bundle", 0.0, 0.0, true);
  log.add("metric agreement", "(eta'_D(phi'), basis_k) equals <phi', check(basis_k)>", dev, tol, dev <= tol,
          {{"metric", to_json(metric)}});
}

inline void duality_check(const RunConfig& c, CheckLog& log, json& out) {
  Rng rng(c.seed);
  double tol = c.tol_or(1e-7);
  int trials = c.get_int("trials", 20);
  json levels = json::array();
  for (int r = c.r_min; r <= c.r_max; ++r) {
    LineBundle b = bundle_at(c, r, CurveTag::Eprime);
    std::vector<Section> basis = canonical_basis(b);
    std::vector<std::pair<Section, Section>> pairs;
    for (const auto& p : basis)
      for (const auto& q : basis) pairs.emplace_back(p, q);
    for (int k = 0; k < trials; ++k) pairs.emplace_back(random_combination(b, rng), random_combination(b, rng));
    double worst = 0.0;
    for (const auto& [p, q] : pairs) {
      cplx lhs = hermitian_inner(p, q, c.quad_n);
      cplx rhs = serre_pairing(eta_prime_dolbeault(p), check_map(q), c.quad_n);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
    }
    levels.push_back({{"r", r}, {"pairs", pairs.size()}, {"max_relative_deviation", worst}});
    log.add("duality r=" + std::to_string(r), "<phi1', phi2'> = (eta'_D(phi1'), check(phi2'))", worst, tol,
            worst <= tol);
  }
  out["levels"] = levels;
}

inline void bijectivity(const RunConfig& c, CheckLog& log, json& out) {
  double ratio_bound = c.tol_or(1e-6);
  json levels = json::array();
  for (int r = c.r_min; r <= c.r_max; ++r) {
    LineBundle b = bundle_at(c, r, CurveTag::Eprime);
    TransformMatrix t = transform_matrix(b, c.quad_n);
    double smax = t.singular_values(0), smin = t.singular_values(t.singular_values.size() - 1);
    std::vector<Section> src = canonical_basis(b), dst = canonical_basis(b.conjugate());
    double compat = 0.0;
    for (std::size_t j = 0; j < src.size(); ++j)
      for (std::size_t k = 0; k < dst.size(); ++k)
        compat = std::max(compat, std::abs(t.m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) -
                                           hermitian_inner(src[j], check_map(dst[k]), c.quad_n)));
    json sv = json::array();
    for (Eigen::Index i = 0; i < t.singular_values.size(); ++i) sv.push_back(t.singular_values(i));
    levels.push_back({{"r", r},
                      {"lattice", to_json(c.lattice)},
                      {"rho", c.ch.rho.str()},
                      {"s", c.ch.s.str()},
                      {"n_quadrature", c.quad_n},
                      {"matrix", to_json(t.m)},
                      {"singular_values", sv},
                      {"condition_number", t.condition_number}});
    std::string sr = " r=" + std::to_string(r);
    log.add("bijectivity" + sr, "eta' is a bijection onto H^1 (pairing matrix nonsingular)", smin / smax, ratio_bound,
            smin > ratio_bound * smax);
    log.add("metric compatibility" + sr, "M[j][k] = <basis'_j, check(basis_k)>", compat, 1e-8, compat <= 1e-8);
  }
  out["levels"] = levels;
}

inline void fj_roundtrip(const RunConfig& c, CheckLog& log, json& out) {
  Rng rng(c.seed);
  double tol = c.tol_or(1e-8);
  FJSide side = c.get("side", "Y") == "X" ? FJSide::X : FJSide::Y;
  FJSeries s = random_series(side, c.lattice, c.r_max, rng, 3, c.ch);
  double worst = 0.0, zero = 0.0, beyond = 0.0;
  for (int k = 0; k < 20; ++k) {
    cplx a = random_point(c.lattice, rng);
    for (int r = 1; r <= c.r_max; ++r) {
      const Section& g = s.terms.at(r);
      worst = std::max(worst, std::abs(extract_fj(s, r, a) - g(a)) * pointwise_metric_factor(g.bundle(), a));
    }
    for (int r = -2; r <= 0; ++r) zero = std::max(zero, std::abs(extract_fj(s, r, a)));
    // Measured in the metric of the next level, like the round-trip error.
    double scale = std::exp(-pi * (c.r_max + 1) / c.lattice.b() * std::norm(a));
    beyond = std::max(beyond, std::abs(extract_fj(s, c.r_max + 1, a)) * scale);
  }
  out["series"] = to_json(s);
  log.add("round-trip", "extraction after evaluation recovers the theta coefficients (error in the bundle metric)",
          worst, tol, worst <= tol);
  log.add("cusp condition", "no coefficients at r <= 0", zero, 1e-10, zero <= 1e-10);
  log.add("finite support", "no coefficient beyond r_max (in the bundle metric)", beyond, 1e-10, beyond <= 1e-10);
}

inline std::vector<FJSeries> series_from_config(const RunConfig& c, Rng& rng) {
  if (c.has("series")) {
    std::ifstream in(c.get("series", ""));
    if (!in) throw ConfigError("cannot open series file " + c.get("series", ""));
    try {
      return {fj_series_from_json(json::parse(in))};
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad series JSON: ") + e.what());
    }
  }
  std::string side = c.get("side", "both");
  int terms = c.get_int("terms", 3);
  std::vector<FJSeries> out;
  if (side == "Y" || side == "both") out.push_back(random_series(FJSide::Y, c.lattice, c.r_max, rng, terms, c.ch));
  if (side == "X" || side == "both") out.push_back(random_series(FJSide::X, c.lattice, c.r_max, rng, terms, c.ch));
  if (out.empty()) throw ConfigError("side must be X, Y or both");
  return out;
}

inline void theorem2_check(const RunConfig& c, CheckLog& log, json& out) {
  Rng rng(c.seed);
  double tol = c.tol_or(1e-7);
  json runs = json::array();
  for (const FJSeries& s : series_from_config(c, rng)) {
    int r_max = std::max(c.r_max, s.r_max());
    Theorem2Report rep = theorem2_verify(s, r_max, tol, c.quad_n);
    json j = to_json(rep);
    j["statement"] = s.side == FJSide::Y ? "omega'_r = -eta'(g'_r) for r >= 1; reported classes are those of -P'(f')"
                                         : "omega_r = -eta(g_r) for r >= 1; reported classes are those of -P(f)";
    runs.push_back(j);
    std::string side = std::string(" side=") + to_string(s.side);
    for (const auto& e : rep.levels)
      log.add("boundary class r=" + std::to_string(e.r) + side,
              "boundary coefficient class equals the eta-image of the r-th theta coefficient",
              e.max_pairing_deviation, tol, e.pass);
    for (const auto& v : rep.nonpositive)
      log.add("cusp mode r=" + std::to_string(v.r) + side, "no coefficients at r <= 0", v.max_abs, 1e-10, v.pass);
    for (const auto& v : rep.opposite_type)
      log.add("opposite type r=" + std::to_string(v.r) + side, "opposite-type boundary coefficients vanish",
              v.max_abs, 1e-9, v.pass);
  }
  out["runs"] = runs;
}

struct Witness {
  std::string label;
  NilpotentElement n;
  FlagP2 flag;
  std::optional<OrbitCase> expected;
};

/// One constructed datum per case of the classification table, for β0 = i·b.
inline std::vector<Witness> builtin_witnesses(const RunConfig& c) {
  if (!c.lattice.b_exact()) throw ConfigError("orbit-classify needs an exact beta0");
  GR beta0(Rational(0), *c.lattice.b_exact());
  GR one(1), zero(0);
  return {
      {"order 3, L joins p and Np", {one, zero}, FlagP2::make({zero, zero, one}, {one, zero, zero}), OrbitCase::a},
      {"+beta0, L through p_inf", {zero, beta0}, FlagP2::make({GR(3), GR(1, 1), one}, {zero, one, GR(-1, -1)}),
       OrbitCase::b_plus},
      {"-beta0, p on L_inf", {zero, -beta0}, FlagP2::make({GR(2), one, zero}, {one, GR(-2), GR(5)}),
       OrbitCase::b_minus},
      {"+beta0, L missing p_inf", {zero, beta0}, FlagP2::make({zero, zero, one}, {one, one, zero}), OrbitCase::none},
      {"order 3, not transversal", {one, zero}, FlagP2::make({zero, zero, one}, {zero, one, zero}), OrbitCase::none},
  };
}

inline std::vector<Witness> witnesses_from_config(const RunConfig& c) {
  if (!c.has("flags")) return builtin_witnesses(c);
  std::ifstream in(c.get("flags", ""));
  if (!in) throw ConfigError("cannot open flags file " + c.get("flags", ""));
  std::vector<Witness> out;
  try {
    json j = json::parse(in);
    for (const auto& item : j) {
      Witness w{item.value("label", ""), nilpotent_from_json(item.at("N")), flag_from_json(item.at("flag")), {}};
      if (item.contains("expected")) {
        std::string e = item.at("expected").get<std::string>();
        for (OrbitCase oc : {OrbitCase::a, OrbitCase::b_plus, OrbitCase::b_minus, OrbitCase::none})
          if (e == to_string(oc)) w.expected = oc;
        if (!w.expected) throw ConfigError("unknown orbit case " + e);
      }
      out.push_back(std::move(w));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad flags JSON: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return out;
}

inline void orbit_classify(const RunConfig& c, CheckLog& log, json& out) {
  json items = json::array();
  for (const Witness& w : witnesses_from_config(c)) {
    OrbitCase got = classify_orbit_case(w.n, w.flag);
    OrbitDatum dual = conjugate_dual({w.n, w.flag});
    OrbitCase dual_case = classify_orbit_case(dual.n, dual.flag);
    json item{{"label", w.label},
              {"N", to_json(w.n)},
              {"flag", to_json(w.flag)},
              {"transversal", transversality(w.n, w.flag)},
              {"positive", positivity(w.n, w.flag)},
              {"case", to_string(got)},
              {"conjugate_dual_case", to_string(dual_case)}};
    if (w.expected) {
      item["expected"] = to_string(*w.expected);
      bool ok = got == *w.expected;
      log.add("case " + w.label, "classification follows the orbit case table", ok ? 0.0 : 1.0, 0.0, ok);
    }
    if (got == OrbitCase::b_plus || got == OrbitCase::b_minus) {
      OrbitCase want = got == OrbitCase::b_plus ? OrbitCase::b_minus : OrbitCase::b_plus;
      bool ok = dual_case == want;
      log.add("duality " + w.label, "conjugate-dual exchanges b_plus and b_minus", ok ? 0.0 : 1.0, 0.0, ok);
    }
    items.push_back(std::move(item));
  }
  out["items"] = items;
}

inline void no2cone(const RunConfig& c, CheckLog& log, json& out) {
  std::vector<std::pair<NilpotentElement, NilpotentElement>> pairs;
  if (c.has("alpha1") || c.has("alpha2")) {
    try {
      pairs.push_back({{GR::parse(c.get("alpha1", "0")), GR::parse(c.get("beta1", "0"))},
                       {GR::parse(c.get("alpha2", "0")), GR::parse(c.get("beta2", "0"))}});
    } catch (const ParseError& e) {
      throw ConfigError(e.what());
    }
  } else {
    Rng rng(c.seed);
    int trials = c.get_int("trials", 100);
    for (int k = 0; k < trials; ++k) pairs.push_back(random_commuting_pair(rng));
  }
  json items = json::array();
  int infeasible = 0;
  for (const auto& [n1, n2] : pairs) {
    NoTwoConeReport rep;
    try {
      rep = no_two_cone_check(n1, n2);
    } catch (const InputsProportional& e) {
      throw ConfigError(e.what());
    }
    infeasible += rep.infeasible ? 1 : 0;
    json item = to_json(rep);
    item["N1"] = to_json(n1);
    item["N2"] = to_json(n2);
    items.push_back(std::move(item));
  }
  out["items"] = items;
  auto failed = static_cast<double>(pairs.size() - static_cast<std::size_t>(infeasible));
  log.add("no 2-dimensional cone", "commuting non-proportional pairs admit no common nilpotent orbit", failed, 0.0,
          failed == 0.0);
}

inline void kernel_invariance(const RunConfig& c, CheckLog& log, json& out) {
  Rng rng(c.seed);
  double tol = c.tol_or(1e-9);
  json levels = json::array();
  for (int r = c.r_min; r <= c.r_max; ++r) {
    LineBundle bp = bundle_at(c, r, CurveTag::Eprime);
    Section fp = random_combination(bp, rng);
    Section f = random_combination(bp.conjugate(), rng);
    double inv = 0.0;
    for (int k = 0; k < 10; ++k) {
      cplx z = random_point(c.lattice, rng), zp = random_point(c.lattice, rng);
      LatticeElem a = random_lattice_elem(c.lattice, rng, 1);
      cplx g0 = invariant_kernel(f, fp, z, zp);
      cplx g1 = invariant_kernel(f, fp, z + std::conj(a.value), zp - a.value);
      inv = std::max(inv, std::abs(g1 - g0) / std::max(std::abs(g0), 1e-300));
    }
    DolbeaultForm direct = eta_prime_dolbeault(fp);
    DolbeaultForm pulled = eta_prime_via_pullback(fp);
    double egw = 0.0;
    for (int k = 0; k < 100; ++k) {
      cplx z = random_point(c.lattice, rng);
      egw = std::max(egw, std::abs(direct(z) - pulled(z)));
    }
    levels.push_back({{"r", r}, {"max_relative_deviation", inv}, {"max_pullback_deviation", egw}});
    std::string sr = " r=" + std::to_string(r);
    log.add("kernel invariance" + sr, "f(z) f'(z') exp(2 pi lambda z z') is invariant under (z+conj(a), z'-a)", inv,
            tol, inv <= tol);
    log.add("pullback consistency" + sr, "(0,1)-part of the pulled-back relative form equals eta'_D", egw, 1e-12,
            egw <= 1e-12);
  }
  out["levels"] = levels;
}

}  // namespace harness

/// Runs one pipeline. Exit 0 when every check passes, 1 when one fails,
/// 2 on configuration errors. The report is written to config.out if set.
inline RunResult run_subcommand(const std::string& name, const RunConfig& config) {
  RunResult res;
  CheckLog log;
  json body = json::object();
  std::string csv;
  try {
    config.validate();
    if (name == "theta-eval") harness::theta_eval(config, log, body);
    else if (name == "basis") harness::basis(config, log, body);
    else if (name == "gram") harness::gram(config, log, body, csv);
    else if (name == "eta-apply") harness::eta_apply(config, log, body);
    else if (name == "duality-check") harness::duality_check(config, log, body);
    else if (name == "bijectivity") harness::bijectivity(config, log, body);
    else if (name == "fj-roundtrip") harness::fj_roundtrip(config, log, body);
    else if (name == "theorem2-check") harness::theorem2_check(config, log, body);
    else if (name == "orbit-classify") harness::orbit_classify(config, log, body);
    else if (name == "no2cone") harness::no2cone(config, log, body);
    else if (name == "kernel-invariance") harness::kernel_invariance(config, log, body);
    else throw ConfigError("unknown subcommand " + name);
  } catch (const ConfigError& e) {
    res.exit_code = 2;
    res.first_failure = e.what();
    res.report = {{"subcommand", name}, {"error", e.what()}};
    return res;
  } catch (const error& e) {
    // Library errors raised by bad inputs (lattice, degree, indices).
    res.exit_code = 2;
    res.first_failure = e.what();
    res.report = {{"subcommand", name}, {"error", e.what()}};
    return res;
  }
  res.report = {{"subcommand", name}, {"config", harness::config_json(config)}, {"pass", log.pass},
                {"checks", log.checks}, {"result", body}};
  res.exit_code = log.pass ? 0 : 1;
  res.first_failure = log.first_failure;
  if (!config.out.empty()) {
    std::ofstream os(config.out);
    if (!os) {
      res.exit_code = 2;
      res.first_failure = "cannot write report to " + config.out;
      return res;
    }
    os << res.report.dump(2) << '\n';
    if (!csv.empty()) {
      std::string path = config.out;
      auto dot = path.rfind('.');
      auto slash = path.rfind('/');
      if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) path.resize(dot);
      std::ofstream(path + ".csv") << csv;
    }
  }
  return res;
}

}  // namespace cmtheta
