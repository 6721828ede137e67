#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "cmtheta/boundary.hpp"
#include "cmtheta/errors.hpp"
#include "cmtheta/fourier_jacobi.hpp"
#include "cmtheta/lattice.hpp"
#include "cmtheta/rational.hpp"
#include "cmtheta/theta.hpp"

namespace cmtheta {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Key-value configuration
// ---------------------------------------------------------------------------

/// Parses "key = value" lines (":" also accepted); '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find_first_of("=:");
    if (sep == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, sep));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(sep + 1));
  }
  return out;
}

inline std::map<std::string, std::string> load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_key_values(in);
}

/// Lattice from omega1_re, omega1_im, omega2_re, omega2_im, beta0_im. Values
/// written as plain decimals or p/q are taken exactly; anything else falls
/// back to floating generators. Missing keys keep the default lattice.
inline Lattice lattice_from_config(const std::map<std::string, std::string>& kv) {
  static const char* keys[] = {"omega1_re", "omega1_im", "omega2_re", "omega2_im", "beta0_im"};
  bool any = false;
  for (const char* k : keys) any = any || kv.count(k);
  if (!any) return Lattice::default_cm();
  for (const char* k : keys)
    if (!kv.count(k)) throw ConfigError(std::string("lattice key missing: ") + k);
  try {
    Rational v[5];
    for (int i = 0; i < 5; ++i) v[i] = Rational::parse(kv.at(keys[i]));
    return Lattice(GaussianRational(v[0], v[1]), GaussianRational(v[2], v[3]), v[4]);
  } catch (const ParseError&) {
    double v[5];
    for (int i = 0; i < 5; ++i) {
      try {
        v[i] = std::stod(kv.at(keys[i]));
      } catch (const std::exception&) {
        throw ConfigError(std::string("bad number for ") + keys[i] + ": " + kv.at(keys[i]));
      }
    }
    return Lattice(cplx(v[0], v[1]), cplx(v[2], v[3]), v[4]);
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(to_json(z));
  return a;
}

inline json to_json(const Lattice& lat) {
  json j{{"omega1", to_json(lat.omega1())}, {"omega2", to_json(lat.omega2())}, {"beta0_im", lat.b()}};
  if (lat.is_exact()) {
    const auto& g = *lat.generators_exact();
    j["exact"] = {{"omega1", g[0].str()}, {"omega2", g[1].str()}, {"beta0_im", lat.b_exact()->str()}};
  }
  return j;
}

inline Lattice lattice_from_json(const json& j) {
  if (j.contains("exact")) {
    const json& e = j.at("exact");
    return Lattice(GaussianRational::parse(e.at("omega1").get<std::string>()),
                   GaussianRational::parse(e.at("omega2").get<std::string>()),
                   Rational::parse(e.at("beta0_im").get<std::string>()));
  }
  return Lattice(cplx_from_json(j.at("omega1")), cplx_from_json(j.at("omega2")), j.at("beta0_im").get<double>());
}

inline json to_json(const LineBundle& b) {
  return {{"lattice", to_json(b.lattice())},
          {"level", b.level()},
          {"tag", to_string(b.tag())},
          {"mu", b.mu()},
          {"rho", b.characteristic().rho.str()},
          {"s", b.characteristic().s.str()}};
}

inline LineBundle bundle_from_json(const json& j) {
  std::string tag = j.at("tag").get<std::string>();
  if (tag != "E" && tag != "Eprime") throw ParseError("unknown curve tag " + tag);
  return LineBundle(lattice_from_json(j.at("lattice")), j.at("level").get<int>(),
                    tag == "E" ? CurveTag::E : CurveTag::Eprime,
                    {Rational::parse(j.at("rho").get<std::string>()), Rational::parse(j.at("s").get<std::string>())});
}

inline json to_json(const Section& s) {
  if (!s.has_coeffs()) throw std::invalid_argument("only sections with basis coordinates serialize");
  return {{"bundle", to_json(s.bundle())}, {"coeffs", to_json(s.coeffs())}};
}

inline Section section_from_json(const json& j) {
  LineBundle b = bundle_from_json(j.at("bundle"));
  std::vector<cplx> c;
  for (const auto& z : j.at("coeffs")) c.push_back(cplx_from_json(z));
  return from_coefficients(b, std::move(c));
}

inline json to_json(const FJSeries& s) {
  json terms = json::array();
  for (const auto& [r, g] : s.terms) terms.push_back({{"r", r}, {"section", to_json(g)}});
  return {{"side", to_string(s.side)}, {"beta0_im", s.lattice.b()}, {"lattice", to_json(s.lattice)},
          {"terms", terms}};
}

inline FJSeries fj_series_from_json(const json& j) {
  FJSeries s;
  std::string side = j.at("side").get<std::string>();
  if (side != "X" && side != "Y") throw ParseError("side must be X or Y");
  s.side = side == "X" ? FJSide::X : FJSide::Y;
  s.lattice = lattice_from_json(j.at("lattice"));
  for (const auto& t : j.at("terms")) s.set_term(t.at("r").get<int>(), section_from_json(t.at("section")));
  return s;
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

/// Row-major "i,j,re,im" lines with a header.
inline std::string to_csv(const Eigen::MatrixXcd& m) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) os << i << ',' << k << ',' << m(i, k).real() << ',' << m(i, k).imag() << '\n';
  return os.str();
}

inline json to_json(const Theorem2Report& rep) {
  json levels = json::array();
  for (const auto& e : rep.levels)
    levels.push_back({{"r", e.r},
                      {"pass", e.pass},
                      {"max_pairing_deviation", e.max_pairing_deviation},
                      {"boundary_pairings", to_json(e.cocycle_pairings)},
                      {"eta_pairings", to_json(e.eta_pairings)}});
  auto vanishing = [](const std::vector<VanishingEntry>& v) {
    json a = json::array();
    for (const auto& e : v) a.push_back({{"r", e.r}, {"pass", e.pass}, {"max_abs", e.max_abs}});
    return a;
  };
  return {{"side", to_string(rep.side)},
          {"tol", rep.tol},
          {"pass", rep.pass},
          {"levels", levels},
          {"nonpositive_modes", vanishing(rep.nonpositive)},
          {"opposite_type", vanishing(rep.opposite_type)}};
}

// Exact data of the boundary algebra travels as Gaussian-rational strings.

inline json to_json(const Vec3& v) { return json::array({v[0].str(), v[1].str(), v[2].str()}); }

inline Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("projective coordinates must be 3 strings");
  Vec3 v;
  for (int k = 0; k < 3; ++k) v[k] = GaussianRational::parse(j[k].get<std::string>());
  return v;
}

inline json to_json(const FlagP2& f) { return {{"p", to_json(f.p)}, {"L", to_json(f.L)}}; }

inline FlagP2 flag_from_json(const json& j) {
  try {
    return FlagP2::make(vec3_from_json(j.at("p")), vec3_from_json(j.at("L")));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline json to_json(const NilpotentElement& n) { return {{"alpha", n.alpha.str()}, {"beta", n.beta.str()}}; }

inline NilpotentElement nilpotent_from_json(const json& j) {
  return {GaussianRational::parse(j.at("alpha").get<std::string>()),
          GaussianRational::parse(j.at("beta").get<std::string>())};
}

inline json to_json(const NoTwoConeReport& r) {
  return {{"commuting", r.commuting},
          {"ty_coefficient", r.ty_coefficient.str()},
          {"t2_coefficient", r.t2_coefficient.str()},
          {"infeasible", r.infeasible},
          {"reason", r.reason}};
}

}  // namespace cmtheta
