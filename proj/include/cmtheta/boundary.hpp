#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmtheta/errors.hpp"
#include "cmtheta/lattice.hpp"
#include "cmtheta/rational.hpp"

namespace cmtheta {

using GR = GaussianRational;
using Vec3 = std::array<GR, 3>;
using Mat3 = std::array<Vec3, 3>;

inline Vec3 operator*(const Mat3& m, const Vec3& p) {
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += m[i][j] * p[j];
  return out;
}

/// Row vector times matrix.
inline Vec3 operator*(const Vec3& l, const Mat3& m) {
  Vec3 out{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) out[j] += l[i] * m[i][j];
  return out;
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline GR dot(const Vec3& l, const Vec3& p) { return l[0] * p[0] + l[1] * p[1] + l[2] * p[2]; }

inline Mat3 identity3() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = GR(1);
  return m;
}

/// Divides by the last nonzero coordinate. The zero vector is returned as is.
inline Vec3 normalize_projective(Vec3 v) {
  for (int k = 2; k >= 0; --k)
    if (!v[k].is_zero()) {
      GR d = v[k];
      for (auto& c : v) c = c / d;
      return v;
    }
  return v;
}

inline bool projectively_equal(const Vec3& a, const Vec3& b) {
  return normalize_projective(a) == normalize_projective(b);
}

inline bool is_zero(const Vec3& v) { return v[0].is_zero() && v[1].is_zero() && v[2].is_zero(); }

/// Point p = (x, y, t) of P² and a line L = (u, v, w) through it.
struct FlagP2 {
  Vec3 p;
  Vec3 L;

  bool incident() const { return dot(L, p).is_zero(); }

  static FlagP2 make(Vec3 p, Vec3 L) {
    FlagP2 f{p, L};
    if (is_zero(p) || is_zero(L)) throw std::invalid_argument("flag coordinates must be nonzero");
    if (!f.incident()) throw std::invalid_argument("flag point does not lie on its line");
    return f;
  }
};

/// The upper-triangular nilpotent with rows (0, α, β), (0, 0, ᾱ), (0, 0, 0).
struct NilpotentElement {
  GR alpha;
  GR beta;

  Mat3 matrix() const {
    Mat3 m{};
    m[0][1] = alpha;
    m[0][2] = beta;
    m[1][2] = alpha.conj();
    return m;
  }
  /// Lie-algebra condition β + β̄ = 0.
  bool in_lie_algebra() const { return (beta + beta.conj()).is_zero(); }
  int order() const {
    if (!alpha.is_zero()) return 3;
    return beta.is_zero() ? 1 : 2;
  }
  NilpotentElement operator-() const { return {-alpha, -beta}; }
};

/// Element of the Heisenberg group V: the unipotent matrix
/// [[1, α, β], [0, 1, ᾱ], [0, 0, 1]] with β + β̄ = αᾱ.
struct HeisenbergElement {
  GR alpha;
  GR beta;

  static HeisenbergElement make(GR alpha, GR beta) {
    if (!(beta + beta.conj() == GR(alpha * alpha.conj())))
      throw std::invalid_argument("Heisenberg element needs beta + conj(beta) = |alpha|^2");
    return {alpha, beta};
  }
  static HeisenbergElement identity() { return {GR(0), GR(0)}; }

  Mat3 matrix() const {
    Mat3 m = identity3();
    m[0][1] = alpha;
    m[0][2] = beta;
    m[1][2] = alpha.conj();
    return m;
  }
  Mat3 inverse_matrix() const {
    Mat3 m = identity3();
    m[0][1] = -alpha;
    m[0][2] = alpha * alpha.conj() - beta;
    m[1][2] = -alpha.conj();
    return m;
  }
  HeisenbergElement inverse() const { return {-alpha, beta.conj()}; }

  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;
};

/// Matrix product g2·g1 = (α1 + α2, β1 + β2 + α2·ᾱ1).
inline HeisenbergElement compose(const HeisenbergElement& g2, const HeisenbergElement& g1) {
  return {g1.alpha + g2.alpha, g1.beta + g2.beta + g2.alpha * g1.alpha.conj()};
}

// ---------------------------------------------------------------------------
// Nilpotent orbit conditions
// ---------------------------------------------------------------------------

/// Griffiths transversality N·p ∈ L.
inline bool transversality(const NilpotentElement& n, const FlagP2& x) {
  return dot(x.L, n.matrix() * x.p).is_zero();
}

namespace detail {
/// exp(c·N) = I + cN + c²N²/2, exact since N³ = 0.
inline Mat3 exp_nilpotent(const Mat3& n, const GR& c) {
  Mat3 n2 = n * n;
  Mat3 out = identity3();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] += c * n[i][j] + c * c * n2[i][j] / GR(2);
  return out;
}

/// |y|² − 2·Re(x·t̄) for points, |v|² − 2·Re(w·ū) for lines.
inline Rational outside_form(const Vec3& v) {
  return v[1].norm() - Rational(2) * (v[0] * v[2].conj()).re;
}
}  // namespace detail

inline const std::vector<Rational>& default_positivity_samples() {
  static const std::vector<Rational> ys{Rational(10), Rational(100), Rational(1000)};
  return ys;
}

/// exp(iYN)·X lies in the period domain for every sampled Y: the moved point
/// lies outside the closed ball and the moved line meets the ball. Evaluated
/// exactly.
inline bool positivity(const NilpotentElement& n, const FlagP2& x,
                       const std::vector<Rational>& samples = default_positivity_samples()) {
  Mat3 m = n.matrix();
  for (const Rational& y : samples) {
    GR c(Rational(0), y);
    Vec3 p = detail::exp_nilpotent(m, c) * x.p;
    Vec3 l = x.L * detail::exp_nilpotent(m, -c);
    if (detail::outside_form(p).sign() <= 0 || detail::outside_form(l).sign() <= 0) return false;
  }
  return true;
}

enum class OrbitCase { a, b_plus, b_minus, none };

inline const char* to_string(OrbitCase c) {
  switch (c) {
    case OrbitCase::a: return "a";
    case OrbitCase::b_plus: return "b_plus";
    case OrbitCase::b_minus: return "b_minus";
    case OrbitCase::none: return "none";
  }
  return "none";
}

/// Case by the order of N (and the sign of Im β for order 2), provided the
/// flag satisfies transversality and positivity.
inline OrbitCase classify_orbit_case(const NilpotentElement& n, const FlagP2& x,
                                     const std::vector<Rational>& samples = default_positivity_samples()) {
  if (n.order() == 1 || !transversality(n, x) || !positivity(n, x, samples)) return OrbitCase::none;
  if (n.order() == 3) return OrbitCase::a;
  return n.beta.im.sign() > 0 ? OrbitCase::b_plus : OrbitCase::b_minus;
}

/// Point and line dual to each other under the Hermitian form:
/// (x, y, t) ↦ (−t̄, ȳ, −x̄) on both points and lines.
inline Vec3 polar(const Vec3& v) { return {-v[2].conj(), v[1].conj(), -v[0].conj()}; }

struct OrbitDatum {
  NilpotentElement n;
  FlagP2 flag;
};

/// (N, p, L) ↦ (−N, polar(L), polar(p)). Exchanges the cases b_plus and b_minus.
inline OrbitDatum conjugate_dual(const OrbitDatum& d) {
  return {-d.n, FlagP2{polar(d.flag.L), polar(d.flag.p)}};
}

// ---------------------------------------------------------------------------
// Charts at the boundary components of type b+ and b−
// ---------------------------------------------------------------------------

/// θ is kept as an exact phase numerator P: θ = θ0·exp(2π·P/b).
struct ChartStateBPlus {
  GR phase;
  GR y;
  GR u;
  friend bool operator==(const ChartStateBPlus&, const ChartStateBPlus&) = default;
};

struct ChartStateBMinus {
  GR phase;
  GR x;
  GR t;
  friend bool operator==(const ChartStateBMinus&, const ChartStateBMinus&) = default;
};

inline cplx theta_value(cplx theta0, const GR& phase, double b) {
  return theta0 * std::exp(2.0 * pi * phase.to_complex() / b);
}

/// exp(2π·P1/b) = exp(2π·P2/b) exactly: equal real parts and imaginary
/// parts differing by an integer multiple of b.
inline bool phases_equal(const GR& p1, const GR& p2, const Rational& b) {
  GR d = p1 - p2;
  return d.re.is_zero() && (d.im / b).is_integer();
}

/// (θ, y, u) ↦ (exp(2π(αy + β)/b)·θ, y + ᾱ, u/(1 − αu)).
inline ChartStateBPlus chart_action_bplus(const HeisenbergElement& g, const ChartStateBPlus& s) {
  GR den = GR(1) - g.alpha * s.u;
  if (den.is_zero()) throw ChartSingularity("1 - alpha*u = 0");
  return {s.phase + g.alpha * s.y + g.beta, s.y + g.alpha.conj(), s.u / den};
}

/// (θ, x, t) ↦ (exp(2π(ᾱx + β̄)/b)·θ, x + α, t/(1 + ᾱt)).
inline ChartStateBMinus chart_action_bminus(const HeisenbergElement& g, const ChartStateBMinus& s) {
  GR den = GR(1) + g.alpha.conj() * s.t;
  if (den.is_zero()) throw ChartSingularity("1 + conj(alpha)*t = 0");
  return {s.phase + g.alpha.conj() * s.x + g.beta.conj(), s.x + g.alpha, s.t / den};
}

/// Same action computed from the 3×3 matrices: the flag p = (0, y, 1),
/// L = (u, 1, −y) is moved by g and brought back to x = 0 by the unipotent
/// flow x ↦ x − λβ0·t, w ↦ w + λβ0·u, which multiplies θ by exp(2πiλ).
inline ChartStateBPlus chart_action_bplus_matrix(const HeisenbergElement& g, const ChartStateBPlus& s) {
  Vec3 p = g.matrix() * Vec3{GR(0), s.y, GR(1)};
  Vec3 l = Vec3{s.u, GR(1), -s.y} * g.inverse_matrix();
  if (p[2].is_zero() || l[1].is_zero()) throw ChartSingularity("flag left the chart");
  GR shift = p[0] / p[2];  // λ·β0
  GR w = l[2] + shift * l[0];
  Vec3 pn{GR(0), p[1] / p[2], GR(1)};
  Vec3 ln{l[0] / l[1], GR(1), w / l[1]};
  if (!(ln[2] == -pn[1])) throw std::logic_error("normalized flag left the chart slice");
  return {s.phase + shift, pn[1], ln[0]};
}

/// b− counterpart: flag p = (x, 1, t), L = (1, −x, 0), normalized by
/// x ↦ x + λβ0·t, w ↦ w − λβ0·u.
inline ChartStateBMinus chart_action_bminus_matrix(const HeisenbergElement& g, const ChartStateBMinus& s) {
  Vec3 p = g.matrix() * Vec3{s.x, GR(1), s.t};
  Vec3 l = Vec3{GR(1), -s.x, GR(0)} * g.inverse_matrix();
  if (l[0].is_zero() || p[1].is_zero()) throw ChartSingularity("flag left the chart");
  GR shift = l[2] / l[0];  // λ·β0
  GR x = p[0] + shift * p[2];
  Vec3 pn{x / p[1], GR(1), p[2] / p[1]};
  Vec3 ln{GR(1), l[1] / l[0], GR(0)};
  if (!(ln[1] == -pn[0])) throw std::logic_error("normalized flag left the chart slice");
  return {s.phase + shift, pn[0], pn[2]};
}

/// Case (a) slice p = (x, 0, 1), L = (1, v, −x) and the action of a
/// stabilizer element [[1, α', β'], [0, 1, α'], [0, 0, 1]] (α' integer,
/// β' + β̄' = α'²). Returns (x, v) after renormalizing y back to 0 with the
/// flow of N = [[0,1,0],[0,0,1],[0,0,0]].
struct CaseASlice {
  GR x;
  GR v;
  friend bool operator==(const CaseASlice&, const CaseASlice&) = default;
};

inline CaseASlice case_a_stabilizer_action(const Rational& alpha, const GR& beta, const CaseASlice& s) {
  GR a(alpha);
  if (!alpha.is_integer() || !(beta + beta.conj() == a * a))
    throw std::invalid_argument("case (a) stabilizer needs integer alpha' and beta' + conj(beta') = alpha'^2");
  Mat3 g = identity3();
  g[0][1] = a;
  g[0][2] = beta;
  g[1][2] = a;
  Mat3 gi = identity3();
  gi[0][1] = -a;
  gi[0][2] = a * a - beta;
  gi[1][2] = -a;
  Vec3 p = g * Vec3{s.x, GR(0), GR(1)};
  Vec3 l = Vec3{GR(1), s.v, -s.x} * gi;
  // Flow by λ: p ↦ (x − λy + λ²t/2, y − λt, t), L ↦ (u, λu + v, λ²u/2 + λv + w).
  GR lam = p[1] / p[2];
  Vec3 pn{p[0] - lam * p[1] + lam * lam * p[2] / GR(2), p[1] - lam * p[2], p[2]};
  Vec3 ln{l[0], lam * l[0] + l[1], lam * lam * l[0] / GR(2) + lam * l[1] + l[2]};
  pn = normalize_projective(pn);
  GR u = ln[0];
  for (auto& c : ln) c = c / u;
  if (!(ln[2] == -pn[0])) throw std::logic_error("case (a) flag left the slice");
  return {pn[0], ln[1]};
}

/// 1 + 2·Re(ȳu) + (b/π)·log|θ|·|u|² > 0; the boundary θ = 0 belongs to the
/// neighborhood exactly when u = 0.
inline bool domain_membership_bplus(cplx theta, cplx y, cplx u, double b) {
  if (theta == 0.0) return u == 0.0;
  return 1.0 + 2.0 * (std::conj(y) * u).real() + b / pi * std::log(std::abs(theta)) * std::norm(u) > 0.0;
}

inline bool domain_membership_bminus(cplx theta, cplx x, cplx t, double b) {
  if (theta == 0.0) return t == 0.0;
  return 1.0 + 2.0 * (std::conj(x) * t).real() + b / pi * std::log(std::abs(theta)) * std::norm(t) > 0.0;
}

// ---------------------------------------------------------------------------
// Two-dimensional cones
// ---------------------------------------------------------------------------

struct NoTwoConeReport {
  bool commuting = false;
  /// ᾱ2·β1 − ᾱ1·β2, the coefficient of t² in the common-orbit constraint.
  GR t2_coefficient;
  /// α1·ᾱ2 − ᾱ1·α2, the coefficient of t·y.
  GR ty_coefficient;
  bool infeasible = false;
  std::string reason;
};

/// Real proportionality of (α1, β1) and (α2, β2) as vectors in R⁴.
inline bool real_proportional(const NilpotentElement& a, const NilpotentElement& b) {
  std::array<Rational, 4> x{a.alpha.re, a.alpha.im, a.beta.re, a.beta.im};
  std::array<Rational, 4> y{b.alpha.re, b.alpha.im, b.beta.re, b.beta.im};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!(x[i] * y[j] - x[j] * y[i]).is_zero()) return false;
  return true;
}

/// For commuting, non-proportional N1, N2 the conditions N1·p, N2·p ∈ L
/// leave (α1ᾱ2 − ᾱ1α2)·ty + (ᾱ2β1 − ᾱ1β2)·t² = 0; commutation kills the
/// first coefficient and non-proportionality keeps the second nonzero, so
/// t = 0, which positivity excludes.
inline NoTwoConeReport no_two_cone_check(const NilpotentElement& n1, const NilpotentElement& n2) {
  if (real_proportional(n1, n2)) throw InputsProportional("N1 and N2 are proportional");
  NoTwoConeReport rep;
  rep.ty_coefficient = n1.alpha * n2.alpha.conj() - n1.alpha.conj() * n2.alpha;
  rep.t2_coefficient = n2.alpha.conj() * n1.beta - n1.alpha.conj() * n2.beta;
  rep.commuting = rep.ty_coefficient.is_zero();
  if (!rep.commuting) {
    rep.reason = "N1 and N2 do not commute";
    return rep;
  }
  rep.infeasible = !rep.t2_coefficient.is_zero();
  rep.reason = rep.infeasible ? "constraint forces t = 0, contradicting positivity"
                              : "t^2 coefficient vanishes";
  return rep;
}

}  // namespace cmtheta
