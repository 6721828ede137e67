#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmtheta/errors.hpp"
#include "cmtheta/pairing.hpp"
#include "cmtheta/theta.hpp"

namespace cmtheta {

/// φ̌(z) = −conj(φ(−z̄)). Sends H⁰ of a bundle on one curve to H⁰ of
/// `bundle.conjugate()` on the other; antilinear and an involution.
inline Section check_map(const Section& phi) {
  std::vector<cplx> coeffs;  // the image is not expressed over the target basis
  return Section(
      phi.bundle().conjugate(), std::move(coeffs),
      [phi](cplx z) { return -std::conj(phi(-std::conj(z))); },
      [phi](cplx z) { return std::conj(phi.derivative(-std::conj(z))); });
}

namespace detail {
inline DolbeaultForm reflected_form(const Section& phi) {
  double k = phi.bundle().two_pi_lambda();
  return {phi.bundle().conjugate(),
          [phi, k](cplx z) { return -phi(-std::conj(z)) * std::exp(-k * std::norm(z)); }};
}
}  // namespace detail

/// (0,1)-form −φ'(−z̄)·exp(−2πλ|z|²)·dz̄ on E for a section φ' on E'.
inline DolbeaultForm eta_prime_dolbeault(const Section& phi) {
  if (phi.tag() != CurveTag::Eprime) throw BundleMismatch("eta_prime_dolbeault expects a section on E'");
  return detail::reflected_form(phi);
}

/// Mirror of eta_prime_dolbeault: a section on E gives a form on E'.
inline DolbeaultForm eta_dolbeault(const Section& phi) {
  if (phi.tag() != CurveTag::E) throw BundleMismatch("eta_dolbeault expects a section on E");
  return detail::reflected_form(phi);
}

/// Coefficient φ(z')·exp(2πλ·z·z') of the relative one-form φ(z')e^{2πλzz'}dz'.
/// `phi` lives on the curve of z'.
inline cplx eta_relative_kernel(const Section& phi, cplx z, cplx zprime) {
  return phi(zprime) * std::exp(phi.bundle().two_pi_lambda() * z * zprime);
}

/// g(z, z') = f(z)·f'(z')·exp(2πλ·z·z'); invariant under (z, z') ↦ (z + ᾱ, z' − α)
/// when f lives on the conjugate of f'’s bundle.
inline cplx invariant_kernel(const Section& f, const Section& fprime, cplx z, cplx zprime) {
  if (f.level() != fprime.level()) throw BundleMismatch("invariant_kernel needs equal levels");
  return f(z) * fprime(zprime) * std::exp(f.bundle().two_pi_lambda() * z * zprime);
}

/// A smooth map z ↦ S(z) with its Wirtinger derivatives.
struct SmoothMap {
  std::function<cplx(cplx)> value;
  std::function<cplx(cplx)> d_dz;
  std::function<cplx(cplx)> d_dzbar;
};

/// z ↦ −z̄.
inline SmoothMap antiholomorphic_reflection() {
  return {[](cplx z) { return -std::conj(z); }, [](cplx) { return cplx(0.0); },
          [](cplx) { return cplx(-1.0); }};
}

/// (0,1)-part of the pullback of K(z, z')·dz' along z ↦ (z, S(z)):
/// K(z, S(z))·∂S/∂z̄.
inline std::function<cplx(cplx)> pullback_01(std::function<cplx(cplx, cplx)> kernel, SmoothMap section) {
  return [kernel = std::move(kernel), section = std::move(section)](cplx z) {
    return kernel(z, section.value(z)) * section.d_dzbar(z);
  };
}

/// η'(φ') as a relative form, pulled back along (z, −z̄). Agrees with
/// eta_prime_dolbeault.
inline DolbeaultForm eta_prime_via_pullback(const Section& phi) {
  auto kernel = [phi](cplx z, cplx zp) { return eta_relative_kernel(phi, z, zp); };
  return {phi.bundle().conjugate(), pullback_01(kernel, antiholomorphic_reflection())};
}

// ---------------------------------------------------------------------------
// Classes in H¹(L_{−r}) through their Serre pairings
// ---------------------------------------------------------------------------

struct CohomologyClass {
  DolbeaultForm representative;
  /// Pairings against canonical_basis(representative.dual).
  std::vector<cplx> pairings;
};

inline CohomologyClass make_class(DolbeaultForm form, int n = 64, bool validate = true) {
  std::vector<cplx> p = pairing_vector(form, canonical_basis(form.dual), n, validate);
  return {std::move(form), std::move(p)};
}

/// max_k |pa_k − pb_k|.
inline double pairing_deviation(const CohomologyClass& a, const CohomologyClass& b) {
  if (!a.representative.dual.same_as(b.representative.dual))
    throw BundleMismatch("classes live in different cohomology groups");
  double dev = 0.0;
  for (std::size_t k = 0; k < a.pairings.size(); ++k) dev = std::max(dev, std::abs(a.pairings[k] - b.pairings[k]));
  return dev;
}

/// Pairing vectors agree to tol·max(1, ‖a.pairings‖∞).
inline bool class_equal(const CohomologyClass& a, const CohomologyClass& b, double tol) {
  double scale = 1.0;
  for (cplx p : a.pairings) scale = std::max(scale, std::abs(p));
  return pairing_deviation(a, b) <= tol * scale;
}

struct TransformMatrix {
  Eigen::MatrixXcd m;
  Eigen::VectorXd singular_values;
  double condition_number = 0;
};

/// M[j][k] = (η_D(basis_j), basis'_k), where basis_j runs over the canonical
/// basis of `bundle` and basis'_k over that of its conjugate. The η variant
/// is picked from the bundle's curve.
inline TransformMatrix transform_matrix(const LineBundle& bundle, int n = 64) {
  std::vector<Section> src = canonical_basis(bundle);
  std::vector<Section> dst = canonical_basis(bundle.conjugate());
  const auto mu = static_cast<Eigen::Index>(src.size());
  TransformMatrix out;
  out.m.resize(mu, mu);
  for (Eigen::Index j = 0; j < mu; ++j) {
    const Section& s = src[static_cast<std::size_t>(j)];
    DolbeaultForm form = bundle.tag() == CurveTag::Eprime ? eta_prime_dolbeault(s) : eta_dolbeault(s);
    std::vector<cplx> row = pairing_vector(form, dst, n);
    for (Eigen::Index k = 0; k < mu; ++k) out.m(j, k) = row[static_cast<std::size_t>(k)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.m);
  out.singular_values = svd.singularValues();
  double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  double smin = out.singular_values.size() ? out.singular_values(out.singular_values.size() - 1) : 0.0;
  out.condition_number = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace cmtheta
