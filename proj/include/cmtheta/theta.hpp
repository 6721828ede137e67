#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cmtheta/errors.hpp"
#include "cmtheta/lattice.hpp"
#include "cmtheta/rational.hpp"

namespace cmtheta {

// ---------------------------------------------------------------------------
// Theta series with characteristics
// ---------------------------------------------------------------------------

/// Summation window n ∈ [center − half_width, center + half_width].
struct ThetaWindow {
  std::int64_t center = 0;
  std::int64_t half_width = 0;
};

/// Window for θ(u, z; ρ, s) = Σ exp(πi(n+ρ)²z + 2πi(n+ρ)(u+s)).
///
/// The modulus of the n-th term is P·exp(−π Im z ((n+ρ) − c)²) with
/// c = −Im(u)/Im(z) and P the continuous peak value. The window is centred on
/// the integer nearest c − ρ, so every omitted term has |(n+ρ) − c| ≥ K + 1/2
/// and the omitted mass is below
///   2P·exp(−π Im z (K+½)²) / (1 − exp(−2π Im z (K+½))),
/// which is forced under tol·P.
inline ThetaWindow theta_window(cplx u, cplx z, double rho, double tol) {
  if (!(z.imag() > 0)) throw NonconvergentModulus("Im(z) must be positive");
  if (!(tol > 0)) throw std::invalid_argument("theta tolerance must be positive");
  double y = z.imag();
  double c = -u.imag() / y;
  ThetaWindow w;
  w.center = static_cast<std::int64_t>(std::llround(c - rho));
  for (std::int64_t k = 0;; ++k) {
    double d = static_cast<double>(k) + 0.5;
    double bound = 2.0 * std::exp(-pi * y * d * d) / (1.0 - std::exp(-2.0 * pi * y * d));
    if (bound < tol) {
      w.half_width = k;
      break;
    }
  }
  return w;
}

/// Sums the theta series over an explicit window. `derivative` selects d/du.
inline cplx theta_series_window(cplx u, cplx z, double rho, double s, ThetaWindow w,
                                bool derivative = false) {
  if (!(z.imag() > 0)) throw NonconvergentModulus("Im(z) must be positive");
  const cplx ipi(0.0, pi);
  cplx sum = 0.0;
  for (std::int64_t n = w.center - w.half_width; n <= w.center + w.half_width; ++n) {
    double m = static_cast<double>(n) + rho;
    cplx term = std::exp(ipi * (m * m * z + 2.0 * m * (u + s)));
    sum += derivative ? 2.0 * ipi * m * term : term;
  }
  return sum;
}

/// θ(u, z; ρ, s) with truncation error below tol relative to the largest term.
inline cplx theta_series(cplx u, cplx z, double rho, double s, double tol = 1e-16) {
  return theta_series_window(u, z, rho, s, theta_window(u, z, rho, tol));
}

/// ∂θ/∂u.
inline cplx theta_series_du(cplx u, cplx z, double rho, double s, double tol = 1e-16) {
  ThetaWindow w = theta_window(u, z, rho, tol);
  w.half_width += 1;  // the factor (n+ρ) widens the tail slightly
  return theta_series_window(u, z, rho, s, w, true);
}

// ---------------------------------------------------------------------------
// Line bundles L_r on the CM curves
// ---------------------------------------------------------------------------

/// Theta characteristic (ρ, s); ρ matters modulo μ⁻¹Z and s modulo Z.
struct Characteristic {
  Rational rho{0};
  Rational s{0};
  friend bool operator==(const Characteristic&, const Characteristic&) = default;
};

/// The line bundle of level r whose sections satisfy
///   f(u + ω) = χ(ω) · exp(2πλ(conj(ω)·u + |ω|²/2)) · f(u),   λ = r/b,
/// for every translation ω of the curve. χ is the semicharacter attached to
/// the characteristic of the canonical basis,
///   χ(a·ω1 + b·ω2) = exp(2πi(−s·a + μρ·b − μab/2)).
class LineBundle {
 public:
  LineBundle(Lattice lattice, int level, CurveTag tag = CurveTag::E, Characteristic ch = {})
      : lattice_(std::move(lattice)), level_(level), tag_(tag), ch_(ch) {
    if (level_ < 1) throw IndexOutOfRange("bundle level must be >= 1");
    lambda_ = static_cast<double>(level_) / lattice_.b();
    if (lattice_.is_exact()) {
      Rational mu = Rational(2 * level_) / *lattice_.b_exact() *
                    ((*lattice_.generators_exact())[1].conj() * (*lattice_.generators_exact())[0]).im;
      if (!mu.is_integer())
        throw NonIntegralDegree("2*lambda*Im(conj(omega2)*omega1) = " + mu.str());
      mu_ = mu.num();
    } else {
      double mu = 2.0 * lambda_ * lattice_.area();
      if (std::abs(mu - std::round(mu)) > 1e-9)
        throw NonIntegralDegree("2*lambda*Im(conj(omega2)*omega1) = " + std::to_string(mu));
      mu_ = std::llround(mu);
    }
    if (mu_ <= 0) throw NonIntegralDegree("degree must be positive");
  }

  const Lattice& lattice() const { return lattice_; }
  int level() const { return level_; }
  CurveTag tag() const { return tag_; }
  const Characteristic& characteristic() const { return ch_; }
  /// λ = i·r/β0 = r/b.
  double lambda() const { return lambda_; }
  /// 2πi·r/β0 as the positive real 2πλ.
  double two_pi_lambda() const { return 2.0 * pi * lambda_; }
  std::int64_t mu() const { return mu_; }
  cplx zeta() const { return lattice_.omega2() / std::abs(lattice_.omega2()); }

  /// Phase of χ(a·ω1 + b·ω2) as an exact rational in [0, 1).
  Rational chi_phase(std::int64_t a, std::int64_t b) const {
    Rational mu(mu_);
    return (-ch_.s * Rational(a) + mu * ch_.rho * Rational(b) - mu * Rational(a) * Rational(b) / Rational(2))
        .frac();
  }

  cplx chi(const LatticeElem& w) const {
    double t = 2.0 * pi * chi_phase(w.a, w.b).to_double();
    return {std::cos(t), std::sin(t)};
  }

  /// The bundle on the conjugate curve that receives the check image of this
  /// bundle's sections: its semicharacter is ω ↦ χ(conj(ω)).
  LineBundle conjugate() const {
    const auto& m = lattice_.conjugation_matrix();
    Rational s_new = -chi_phase(m[0][0], m[0][1]);
    Rational rho_new = chi_phase(m[1][0], m[1][1]) / Rational(mu_);
    return LineBundle(lattice_, level_, opposite(tag_), {rho_new.frac(), s_new.frac()});
  }

  /// Same level, curve and semicharacter (characteristics compared modulo
  /// their periods).
  bool same_as(const LineBundle& o) const {
    return level_ == o.level_ && tag_ == o.tag_ && mu_ == o.mu_ &&
           (Rational(mu_) * (ch_.rho - o.ch_.rho)).is_integer() && (ch_.s - o.ch_.s).is_integer() &&
           lattice_.omega1() == o.lattice_.omega1() && lattice_.omega2() == o.lattice_.omega2() &&
           lattice_.b() == o.lattice_.b();
  }

 private:
  Lattice lattice_;
  int level_;
  CurveTag tag_;
  Characteristic ch_;
  double lambda_ = 0;
  std::int64_t mu_ = 0;
};

/// Degree μ = 2λ·Im(conj(ω2)·ω1) of the bundle (integrality is enforced when
/// the bundle is built).
inline std::int64_t degree_mu(const LineBundle& bundle) { return bundle.mu(); }

/// Factor j(α, u) with f(u + embed(α, tag)) = j · f(u) for all sections f.
inline cplx factor_of_automorphy(const LineBundle& bundle, const LatticeElem& alpha, cplx u) {
  const Lattice& lat = bundle.lattice();
  if (!lat.locate(alpha.value)) throw NotInLattice("alpha is not a lattice point");
  auto shift = lat.locate(embed(alpha, bundle.tag()));
  if (!shift) throw NotInLattice("embedded alpha is not a lattice point");
  cplx w = shift->value;
  return bundle.chi(*shift) * std::exp(bundle.two_pi_lambda() * (std::conj(w) * u + 0.5 * std::norm(w)));
}

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

/// A holomorphic section of a LineBundle: an evaluator with its complex
/// derivative, plus coordinates over the canonical theta basis when known.
class Section {
 public:
  using Fn = std::function<cplx(cplx)>;

  Section(LineBundle bundle, std::vector<cplx> coeffs, Fn value, Fn derivative)
      : bundle_(std::move(bundle)),
        coeffs_(std::move(coeffs)),
        value_(std::move(value)),
        derivative_(std::move(derivative)) {}

  static Section zero(const LineBundle& bundle) {
    auto z = [](cplx) { return cplx(0.0); };
    return Section(bundle, std::vector<cplx>(static_cast<std::size_t>(bundle.mu()), 0.0), z, z);
  }

  const LineBundle& bundle() const { return bundle_; }
  CurveTag tag() const { return bundle_.tag(); }
  int level() const { return bundle_.level(); }
  /// Coordinates over the canonical basis; empty when not known.
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  bool has_coeffs() const { return !coeffs_.empty(); }

  cplx operator()(cplx z) const { return value_(z); }
  cplx derivative(cplx z) const { return derivative_(z); }

  friend Section operator+(const Section& a, const Section& b) {
    if (!a.bundle_.same_as(b.bundle_)) throw BundleMismatch("cannot add sections of different bundles");
    std::vector<cplx> c;
    if (a.has_coeffs() && b.has_coeffs()) {
      c = a.coeffs_;
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += b.coeffs_[k];
    }
    auto fa = a.value_, fb = b.value_, da = a.derivative_, db = b.derivative_;
    return Section(a.bundle_, std::move(c), [fa, fb](cplx z) { return fa(z) + fb(z); },
                   [da, db](cplx z) { return da(z) + db(z); });
  }

  friend Section operator*(cplx k, const Section& a) {
    std::vector<cplx> c = a.coeffs_;
    for (auto& x : c) x *= k;
    auto f = a.value_, d = a.derivative_;
    return Section(a.bundle_, std::move(c), [k, f](cplx z) { return k * f(z); },
                   [k, d](cplx z) { return k * d(z); });
  }

 private:
  LineBundle bundle_;
  std::vector<cplx> coeffs_;
  Fn value_;
  Fn derivative_;
};

namespace detail {

/// Shared evaluation data of the canonical basis of one bundle.
struct BasisKernel {
  double pi_lambda;
  cplx zeta_inv2;  // ζ⁻² = (conj(ω2)/|ω2|)²
  cplx scale;      // μ/ω2
  cplx modulus;    // μ·ω1/ω2
  double s;
  std::vector<double> rhos;

  explicit BasisKernel(const LineBundle& b) {
    const Lattice& lat = b.lattice();
    cplx zc = std::conj(lat.omega2()) / std::abs(lat.omega2());
    pi_lambda = pi * b.lambda();
    zeta_inv2 = zc * zc;
    double mu = static_cast<double>(b.mu());
    scale = mu / lat.omega2();
    modulus = mu * lat.omega1() / lat.omega2();
    s = b.characteristic().s.to_double();
    for (std::int64_t j = 0; j < b.mu(); ++j)
      rhos.push_back((b.characteristic().rho + Rational(j, b.mu())).to_double());
  }

  cplx gaussian(cplx u) const { return std::exp(pi_lambda * zeta_inv2 * u * u); }

  cplx value(std::size_t j, cplx u) const {
    return gaussian(u) * theta_series(scale * u, modulus, rhos[j], s);
  }

  cplx derivative(std::size_t j, cplx u) const {
    cplx g = gaussian(u);
    cplx U = scale * u;
    return g * (2.0 * pi_lambda * zeta_inv2 * u * theta_series(U, modulus, rhos[j], s) +
                scale * theta_series_du(U, modulus, rhos[j], s));
  }
};

}  // namespace detail

/// f_{ρ+j/μ, s}(u) = exp(πλζ⁻²u²)·θ(μu/ω2, μω1/ω2; ρ + j/μ, s).
inline Section basis_section(const LineBundle& bundle, std::int64_t j) {
  if (j < 0 || j >= bundle.mu())
    throw IndexOutOfRange("basis index " + std::to_string(j) + " outside [0, " +
                          std::to_string(bundle.mu()) + ")");
  auto kernel = std::make_shared<const detail::BasisKernel>(bundle);
  auto idx = static_cast<std::size_t>(j);
  std::vector<cplx> coeffs(static_cast<std::size_t>(bundle.mu()), 0.0);
  coeffs[idx] = 1.0;
  return Section(bundle, std::move(coeffs), [kernel, idx](cplx u) { return kernel->value(idx, u); },
                 [kernel, idx](cplx u) { return kernel->derivative(idx, u); });
}

/// Basis section for an explicitly given characteristic; the bundle's own
/// characteristic is replaced by (rho, s).
inline Section basis_section(const LineBundle& bundle, std::int64_t j, Rational rho, Rational s) {
  return basis_section(LineBundle(bundle.lattice(), bundle.level(), bundle.tag(), {rho, s}), j);
}

inline std::vector<Section> canonical_basis(const LineBundle& bundle) {
  std::vector<Section> out;
  for (std::int64_t j = 0; j < bundle.mu(); ++j) out.push_back(basis_section(bundle, j));
  return out;
}

/// Σ coeffs[j]·f_j evaluated with one shared Gaussian prefactor.
inline Section from_coefficients(const LineBundle& bundle, std::vector<cplx> coeffs) {
  if (coeffs.size() != static_cast<std::size_t>(bundle.mu()))
    throw IndexOutOfRange("coefficient vector has length " + std::to_string(coeffs.size()) +
                          ", expected " + std::to_string(bundle.mu()));
  auto kernel = std::make_shared<const detail::BasisKernel>(bundle);
  auto c = std::make_shared<const std::vector<cplx>>(coeffs);
  auto value = [kernel, c](cplx u) {
    cplx U = kernel->scale * u;
    cplx sum = 0.0;
    for (std::size_t j = 0; j < c->size(); ++j)
      if ((*c)[j] != 0.0) sum += (*c)[j] * theta_series(U, kernel->modulus, kernel->rhos[j], kernel->s);
    return kernel->gaussian(u) * sum;
  };
  auto derivative = [kernel, c](cplx u) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < c->size(); ++j)
      if ((*c)[j] != 0.0) sum += (*c)[j] * kernel->derivative(j, u);
    return sum;
  };
  return Section(bundle, std::move(coeffs), value, derivative);
}

}  // namespace cmtheta
