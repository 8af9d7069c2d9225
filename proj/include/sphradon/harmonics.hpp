#ifndef SPHRADON_HARMONICS_HPP
#define SPHRADON_HARMONICS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "sphradon/errors.hpp"

namespace sphradon {

/// Gegenbauer order alpha = (n-3)/2 and polynomial degree m. The alpha = 0
/// slot (n = 3) degenerates to the Chebyshev polynomial T_m.
struct GegenbauerOrder {
    double alpha = 0.0;
    int degree = 0;

    GegenbauerOrder(double a, int m);
    static GegenbauerOrder for_dimension(int n, int m);
};

/// C_m^alpha(t) by the three-term recurrence for alpha > 0, T_m(t) for
/// alpha = 0. Throws DomainError when |t| > 1 + 1e-12.
double gegenbauer(const GegenbauerOrder& order, double t);

/// C_m^alpha(t) / C_m^alpha(1): the normalization under which the
/// Funk-Hecke identity carries the bare omega_{n-3} prefactor. Identical to
/// gegenbauer() for alpha in {0, 1/2}, i.e. for n in {3, 4}.
double gegenbauer_normalized(const GegenbauerOrder& order, double t);

/// Numerically integrates the weighted products C_m C_k (1-t^2)^{alpha-1/2}
/// for m, k <= 8 and returns the largest deviation from the orthogonality
/// constants (diagonal: 2^{2a-1} Gamma^2(a+1/2) m! / ((m+a) Gamma(m+2a));
/// off-diagonal: zero). Requires alpha > 0.
double gegenbauer_norm_check(double alpha);

/// One member of the real orthonormal harmonic basis on S^{n-2}:
/// degree m >= 0, branch index 1 <= l <= d_m.
/// n = 3: d_0 = 1, d_m = 2 (cos / sin); n = 4: d_m = 2m + 1.
struct HarmonicIndex {
    int m = 0;
    int l = 1;
};

/// Dimension of the degree-m harmonic space on S^{n-2}.
int harmonic_count(int n, int m);

/// Real orthonormal spherical harmonic Y_l^m at a unit vector zeta on
/// S^{n-2}. Supported for n in {3, 4}.
double sph_harm(const HarmonicIndex& idx, int n, const std::vector<double>& zeta);

/// Quadrature nodes and weights on S^{n-2}. Weights are positive and sum to
/// the sphere volume (2 pi for n = 3, 4 pi for n = 4).
struct SphereQuadrature {
    int n = 3;                              // ambient dimension of the parent problem
    int resolution = 0;
    std::vector<std::vector<double>> nodes; // unit vectors in R^{n-1}
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    /// Largest harmonic degree the grid projects exactly.
    int design_order() const;
};

/// n = 3: uniform trapezoid on the circle (exact for trigonometric
/// polynomials of degree < resolution). n = 4: Gauss-Legendre in the polar
/// angle (resolution nodes) x uniform azimuth (2 * resolution nodes).
SphereQuadrature sphere_quadrature(int n, int resolution);

/// Both sides of the Funk-Hecke identity
///   int_{S_psi^{n-3}} Y((cos xi) psi + (sin xi) eta) deta
///     = omega_{n-3} C_m^{(n-3)/2}(cos xi) Y(psi),
/// the left side by direct quadrature over S^{n-3} (two points for n = 3).
std::pair<double, double> funk_hecke_check(int n, const HarmonicIndex& idx,
                                           double xi,
                                           const std::vector<double>& psi);

/// sum_i w_i samples_i Y_l^m(node_i). Throws GridMismatch when the sample
/// vector does not line up with the quadrature.
double project_onto_harmonic(const std::vector<double>& samples,
                             const SphereQuadrature& quad,
                             const HarmonicIndex& idx);

/// Volume of S^{d}: 2 pi^{(d+1)/2} / Gamma((d+1)/2). sphere_volume(0) = 2.
double sphere_volume(int d);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace sphradon

#endif
