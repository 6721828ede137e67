#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>

#include "cmtheta/errors.hpp"
#include "cmtheta/rational.hpp"

namespace cmtheta {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Which of the two conjugate boundary curves a datum lives on. The curve E
/// sees the lattice through α ↦ conj(α), the curve E' through α ↦ α.
enum class CurveTag { E, Eprime };

inline CurveTag opposite(CurveTag t) { return t == CurveTag::E ? CurveTag::Eprime : CurveTag::E; }
inline const char* to_string(CurveTag t) { return t == CurveTag::E ? "E" : "Eprime"; }

/// A lattice point a·ω1 + b·ω2 with its integer coordinates.
struct LatticeElem {
  std::int64_t a = 0;
  std::int64_t b = 0;
  cplx value{};
};

/// Rank-2 lattice in C, stable under complex conjugation, together with the
/// purely imaginary period β0 = i·b of the cusp variable.
class Lattice {
 public:
  /// Exact construction from Gaussian-rational generators.
  Lattice(GaussianRational omega1, GaussianRational omega2, Rational b)
      : omega1_(omega1.to_complex()),
        omega2_(omega2.to_complex()),
        b_(b.to_double()),
        exact_(std::array{omega1, omega2}),
        b_exact_(b) {
    if (b.sign() <= 0) throw InvalidLattice("beta0 must have positive imaginary part");
    Rational orient = im_mul_conj(omega1, omega2);
    if (orient.sign() <= 0) throw InvalidLattice("Im(omega1/omega2) must be positive");
    for (int k = 0; k < 2; ++k) {
      GaussianRational c = (k == 0 ? omega1 : omega2).conj();
      Rational a = im_mul_conj(c, omega2) / orient;
      Rational bb = -im_mul_conj(c, omega1) / orient;
      if (!a.is_integer() || !bb.is_integer())
        throw InvalidLattice("lattice is not stable under complex conjugation");
      conj_[k] = {a.num(), bb.num()};
    }
  }

  /// Floating construction; conjugation stability is checked to 1e-9.
  Lattice(cplx omega1, cplx omega2, double b) : omega1_(omega1), omega2_(omega2), b_(b) {
    if (!(b > 0)) throw InvalidLattice("beta0 must have positive imaginary part");
    if (!((omega1 / omega2).imag() > 0)) throw InvalidLattice("Im(omega1/omega2) must be positive");
    for (int k = 0; k < 2; ++k) {
      auto [a, bb] = coordinates(std::conj(k == 0 ? omega1 : omega2));
      if (std::abs(a - std::round(a)) > 1e-9 || std::abs(bb - std::round(bb)) > 1e-9)
        throw InvalidLattice("lattice is not stable under complex conjugation");
      conj_[k] = {std::llround(a), std::llround(bb)};
    }
  }

  /// (1+i)·Z[i] with ω1 = i(1+i), ω2 = 1+i and β0 = i.
  static Lattice default_cm() {
    return Lattice(GaussianRational(-1, 1), GaussianRational(1, 1), Rational(1));
  }

  /// Z[i] with ω1 = i, ω2 = 1 and β0 = i.
  static Lattice gaussian_integers() {
    return Lattice(GaussianRational(0, 1), GaussianRational(1, 0), Rational(1));
  }

  cplx omega1() const { return omega1_; }
  cplx omega2() const { return omega2_; }
  cplx beta0() const { return {0.0, b_}; }
  /// b = β0 / i.
  double b() const { return b_; }
  bool is_exact() const { return exact_.has_value(); }
  const std::optional<std::array<GaussianRational, 2>>& generators_exact() const { return exact_; }
  const std::optional<Rational>& b_exact() const { return b_exact_; }

  /// Lebesgue area of the fundamental parallelogram, Im(conj(ω2)·ω1).
  double area() const { return (std::conj(omega2_) * omega1_).imag(); }

  /// Real coordinates (a, b) with z = a·ω1 + b·ω2.
  std::array<double, 2> coordinates(cplx z) const {
    double orient = (omega1_ * std::conj(omega2_)).imag();
    return {(z * std::conj(omega2_)).imag() / orient, -(z * std::conj(omega1_)).imag() / orient};
  }

  LatticeElem element(std::int64_t a, std::int64_t b) const {
    return {a, b, static_cast<double>(a) * omega1_ + static_cast<double>(b) * omega2_};
  }

  /// The lattice point within `tol` (in coordinate units) of z, if any.
  std::optional<LatticeElem> locate(cplx z, double tol = 1e-9) const {
    auto [a, b] = coordinates(z);
    double ra = std::round(a), rb = std::round(b);
    if (std::abs(a - ra) > tol || std::abs(b - rb) > tol) return std::nullopt;
    return element(std::llround(ra), std::llround(rb));
  }

  /// conj(α) as a lattice element, computed from the integer conjugation matrix.
  LatticeElem conjugate(const LatticeElem& e) const {
    return element(e.a * conj_[0][0] + e.b * conj_[1][0], e.a * conj_[0][1] + e.b * conj_[1][1]);
  }

  /// Row k holds the coordinates of conj(ω_{k+1}).
  const std::array<std::array<std::int64_t, 2>, 2>& conjugation_matrix() const { return conj_; }

 private:
  static Rational im_mul_conj(const GaussianRational& x, const GaussianRational& y) {
    return (x * y.conj()).im;
  }

  cplx omega1_;
  cplx omega2_;
  double b_;
  std::optional<std::array<GaussianRational, 2>> exact_;
  std::optional<Rational> b_exact_;
  std::array<std::array<std::int64_t, 2>, 2> conj_{};
};

namespace detail {
inline double snap(double x) {
  double r = std::round(x);
  return std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x)) ? r : x;
}
}  // namespace detail

/// Representative of `point` in the half-open parallelogram
/// {a·ω1 + b·ω2 : a, b ∈ [0, 1)} and the lattice element that was subtracted.
inline std::pair<cplx, LatticeElem> reduce(cplx point, const Lattice& lat) {
  auto [a, b] = lat.coordinates(point);
  auto fa = static_cast<std::int64_t>(std::floor(detail::snap(a)));
  auto fb = static_cast<std::int64_t>(std::floor(detail::snap(b)));
  LatticeElem e = lat.element(fa, fb);
  cplx rep = point - e.value;
  auto [ra, rb] = lat.coordinates(rep);
  if (std::abs(ra) < 1e-12 && std::abs(rb) < 1e-12) rep = 0.0;
  return {rep, e};
}

/// True iff the Euclidean distance from `point` to the lattice is at most tol.
inline bool contains(cplx point, const Lattice& lat, double tol) {
  auto [a, b] = lat.coordinates(point);
  auto fa = static_cast<std::int64_t>(std::floor(a));
  auto fb = static_cast<std::int64_t>(std::floor(b));
  for (std::int64_t da = -1; da <= 2; ++da)
    for (std::int64_t db = -1; db <= 2; ++db)
      if (std::abs(point - lat.element(fa + da, fb + db).value) <= tol) return true;
  return false;
}

/// The translation by which α acts on the curve with the given tag.
inline cplx embed(const LatticeElem& alpha, CurveTag tag) {
  return tag == CurveTag::E ? std::conj(alpha.value) : alpha.value;
}

}  // namespace cmtheta
