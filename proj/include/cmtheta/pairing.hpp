#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmtheta/errors.hpp"
#include "cmtheta/lattice.hpp"
#include "cmtheta/theta.hpp"

namespace cmtheta {

// ---------------------------------------------------------------------------
// Periodic trapezoidal quadrature
// ---------------------------------------------------------------------------

/// Tensor trapezoidal grid {a·ω1/n + b·ω2/n : 0 ≤ a, b < n} on the
/// fundamental parallelogram; each node carries area/n².
struct QuadratureGrid {
  int n = 0;
  std::vector<cplx> nodes;
  double weight = 0;
};

inline QuadratureGrid make_grid(const Lattice& lat, int n) {
  if (n < 4) throw std::invalid_argument("quadrature needs n >= 4 points per direction");
  QuadratureGrid g;
  g.n = n;
  g.weight = lat.area() / (static_cast<double>(n) * n);
  g.nodes.reserve(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      g.nodes.push_back((static_cast<double>(a) * lat.omega1() + static_cast<double>(b) * lat.omega2()) /
                        static_cast<double>(n));
  return g;
}

/// ∫ f dA over one fundamental parallelogram for a lattice-periodic f.
template <class F>
cplx integrate_periodic(F&& f, const Lattice& lat, int n) {
  QuadratureGrid g = make_grid(lat, n);
  cplx sum = 0.0;
  for (cplx z : g.nodes) sum += f(z);
  return sum * g.weight;
}

inline std::vector<cplx> sample(const Section& s, const QuadratureGrid& g) {
  std::vector<cplx> out;
  out.reserve(g.nodes.size());
  for (cplx z : g.nodes) out.push_back(s(z));
  return out;
}

/// exp(−πλ|z|²): multiplying a value of a section at z by this gives its
/// pointwise size in the Hermitian metric, which is lattice-periodic.
inline double pointwise_metric_factor(const LineBundle& bundle, cplx z) {
  return std::exp(-0.5 * bundle.two_pi_lambda() * std::norm(z));
}

/// exp(−2πλ|z|²) at every node.
inline std::vector<double> metric_weights(const LineBundle& bundle, const QuadratureGrid& g) {
  std::vector<double> w;
  w.reserve(g.nodes.size());
  for (cplx z : g.nodes) w.push_back(std::exp(-bundle.two_pi_lambda() * std::norm(z)));
  return w;
}

// ---------------------------------------------------------------------------
// Hermitian metric on H⁰
// ---------------------------------------------------------------------------

namespace detail {
inline cplx weighted_dot(const std::vector<cplx>& a, const std::vector<cplx>& b,
                         const std::vector<double>& w, double area_weight) {
  cplx sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * std::conj(b[k]) * w[k];
  return sum * area_weight;
}
}  // namespace detail

/// ⟨φ1, φ2⟩ = ∫ φ1 · conj(φ2) · exp(−2πλ|z|²) dA with Lebesgue measure dA.
inline cplx hermitian_inner(const Section& phi1, const Section& phi2, int n = 64) {
  if (!phi1.bundle().same_as(phi2.bundle()))
    throw BundleMismatch("hermitian_inner needs sections of the same bundle");
  QuadratureGrid g = make_grid(phi1.bundle().lattice(), n);
  return detail::weighted_dot(sample(phi1, g), sample(phi2, g), metric_weights(phi1.bundle(), g), g.weight);
}

/// Gram matrix G[j][k] = ⟨s_j, s_k⟩ of a family of sections of one bundle.
inline Eigen::MatrixXcd gram_matrix(const std::vector<Section>& family, int n = 64) {
  const auto m = static_cast<Eigen::Index>(family.size());
  Eigen::MatrixXcd G(m, m);
  if (family.empty()) return G;
  for (const auto& s : family)
    if (!s.bundle().same_as(family.front().bundle()))
      throw BundleMismatch("gram_matrix needs sections of one bundle");
  QuadratureGrid g = make_grid(family.front().bundle().lattice(), n);
  std::vector<double> w = metric_weights(family.front().bundle(), g);
  std::vector<std::vector<cplx>> samples;
  for (const auto& s : family) samples.push_back(sample(s, g));
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index k = j; k < m; ++k) {
      G(j, k) = detail::weighted_dot(samples[static_cast<std::size_t>(j)], samples[static_cast<std::size_t>(k)],
                                     w, g.weight);
      if (k != j) G(k, j) = std::conj(G(j, k));
    }
  return G;
}

/// Gram matrix of the canonical theta basis of `bundle`.
inline Eigen::MatrixXcd gram_matrix(const LineBundle& bundle, int n = 64) {
  return gram_matrix(canonical_basis(bundle), n);
}

/// ⟨f_{ρ,s}, f_{ρ,s}⟩ in closed form: |ω2| / (2√λ).
inline double theta_norm_closed_form(const LineBundle& bundle) {
  return std::abs(bundle.lattice().omega2()) / (2.0 * std::sqrt(bundle.lambda()));
}

/// Coordinates of a section over the canonical basis, using orthogonality of
/// that basis: c_k = ⟨s, f_k⟩ / ⟨f_k, f_k⟩.
inline Section project_onto_basis(const Section& s, int n = 64) {
  std::vector<Section> basis = canonical_basis(s.bundle());
  QuadratureGrid g = make_grid(s.bundle().lattice(), n);
  std::vector<double> w = metric_weights(s.bundle(), g);
  std::vector<cplx> vs = sample(s, g);
  std::vector<cplx> coeffs;
  for (const auto& f : basis) {
    std::vector<cplx> vf = sample(f, g);
    coeffs.push_back(detail::weighted_dot(vs, vf, w, g.weight) / detail::weighted_dot(vf, vf, w, g.weight));
  }
  return from_coefficients(s.bundle(), std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Dolbeault forms and the Serre pairing
// ---------------------------------------------------------------------------

/// A (0,1)-form h(z, z̄)·dz̄ with values in L_{−r}, stored through its
/// coefficient h. `dual` is the bundle L_r it pairs with.
struct DolbeaultForm {
  LineBundle dual;
  std::function<cplx(cplx)> coefficient;

  int level() const { return -dual.level(); }
  CurveTag tag() const { return dual.tag(); }
  cplx operator()(cplx z) const { return coefficient(z); }

  static DolbeaultForm zero(const LineBundle& dual) {
    return {dual, [](cplx) { return cplx(0.0); }};
  }

  friend DolbeaultForm operator+(const DolbeaultForm& a, const DolbeaultForm& b) {
    if (!a.dual.same_as(b.dual)) throw BundleMismatch("cannot add forms with different values");
    auto fa = a.coefficient, fb = b.coefficient;
    return {a.dual, [fa, fb](cplx z) { return fa(z) + fb(z); }};
  }
  friend DolbeaultForm operator*(cplx k, const DolbeaultForm& a) {
    auto f = a.coefficient;
    return {a.dual, [k, f](cplx z) { return k * f(z); }};
  }
};

/// Samples 20 pseudo-random (z, ω) pairs and checks that
/// coefficient·section is invariant under z ↦ z + ω to 1e−8 of its scale.
inline void check_periodic_product(const DolbeaultForm& form, const Section& phi, double tol = 1e-8) {
  const Lattice& lat = phi.bundle().lattice();
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_int_distribution<int> shift(-2, 2);
  std::vector<std::pair<cplx, cplx>> values;
  double scale = 0.0;
  for (int k = 0; k < 20; ++k) {
    cplx z = coord(rng) * lat.omega1() + coord(rng) * lat.omega2();
    int a = shift(rng), b = shift(rng);
    if (a == 0 && b == 0) a = 1;
    cplx w = lat.element(a, b).value;
    cplx g0 = form(z) * phi(z);
    cplx g1 = form(z + w) * phi(z + w);
    values.emplace_back(g0, g1);
    scale = std::max({scale, std::abs(g0), std::abs(g1)});
  }
  for (auto [g0, g1] : values)
    if (std::abs(g1 - g0) > tol * scale)
      throw NonPeriodicIntegrand("form·section is not lattice-periodic (|delta| = " +
                                 std::to_string(std::abs(g1 - g0)) + ", scale " + std::to_string(scale) + ")");
}

/// (ω, φ) = ∫ h(z)·φ(z) dA over the fundamental parallelogram.
inline cplx serre_pairing(const DolbeaultForm& omega, const Section& phi, int n = 64, bool validate = true) {
  if (!omega.dual.same_as(phi.bundle()))
    throw BundleMismatch("serre_pairing needs a form at level -r and a section at level r on one curve");
  if (validate) check_periodic_product(omega, phi);
  return integrate_periodic([&](cplx z) { return omega(z) * phi(z); }, phi.bundle().lattice(), n);
}

/// Pairings of one form against a family of sections, sampling the form once.
inline std::vector<cplx> pairing_vector(const DolbeaultForm& omega, const std::vector<Section>& family,
                                        int n = 64, bool validate = true) {
  for (const auto& s : family)
    if (!omega.dual.same_as(s.bundle())) throw BundleMismatch("pairing_vector: bundle mismatch");
  if (family.empty()) return {};
  if (validate)
    for (const auto& s : family) check_periodic_product(omega, s);
  QuadratureGrid g = make_grid(omega.dual.lattice(), n);
  std::vector<cplx> h;
  h.reserve(g.nodes.size());
  for (cplx z : g.nodes) h.push_back(omega(z));
  std::vector<cplx> out;
  for (const auto& s : family) {
    cplx sum = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) sum += h[k] * s(g.nodes[k]);
    out.push_back(sum * g.weight);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ∂̄-exact forms
// ---------------------------------------------------------------------------

/// Smooth lattice-periodic function Σ c_m exp(2πi(m1·a + m2·b)) of the
/// lattice coordinates (a, b) of z.
struct PeriodicBump {
  std::vector<std::tuple<int, int, cplx>> modes;

  cplx value(const Lattice& lat, cplx z) const {
    auto [a, b] = lat.coordinates(z);
    cplx sum = 0.0;
    for (auto [m1, m2, c] : modes) sum += c * std::exp(cplx(0.0, 2.0 * pi * (m1 * a + m2 * b)));
    return sum;
  }

  /// ∂/∂z̄, using ∂a/∂z̄ = −ω2/(ω1·conj(ω2) − conj(ω1)·ω2) and the mirror
  /// expression for b.
  cplx dbar(const Lattice& lat, cplx z) const {
    cplx w1 = lat.omega1(), w2 = lat.omega2();
    cplx da = -w2 / (w1 * std::conj(w2) - std::conj(w1) * w2);
    cplx db = -w1 / (w2 * std::conj(w1) - std::conj(w2) * w1);
    auto [a, b] = lat.coordinates(z);
    cplx sum = 0.0;
    for (auto [m1, m2, c] : modes)
      sum += c * cplx(0.0, 2.0 * pi) * (static_cast<double>(m1) * da + static_cast<double>(m2) * db) *
             std::exp(cplx(0.0, 2.0 * pi * (m1 * a + m2 * b)));
    return sum;
  }
};

/// ∂̄ψ for the smooth L_{−r}-valued function ψ = p · conj(σ) · exp(−2πλ|z|²),
/// where σ is a holomorphic section of L_r. The result pairs with sections
/// of σ's bundle.
inline DolbeaultForm dbar_exact(const Section& sigma, PeriodicBump p) {
  LineBundle bundle = sigma.bundle();
  double k = bundle.two_pi_lambda();
  Lattice lat = bundle.lattice();
  auto coeff = [sigma, p = std::move(p), k, lat](cplx z) {
    double gauss = std::exp(-k * std::norm(z));
    cplx h = std::conj(sigma(z)) * gauss;
    cplx dh = (std::conj(sigma.derivative(z)) - k * z * std::conj(sigma(z))) * gauss;
    return p.dbar(lat, z) * h + p.value(lat, z) * dh;
  };
  return {bundle, coeff};
}

}  // namespace cmtheta
