#include "sphradon/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphradon/geometry.hpp"

namespace sphradon {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double clamp_unit(double t) { return std::min(1.0, std::max(-1.0, t)); }

// fully normalized associated Legendre P-bar_m^k(x), so that the real
// harmonics below come out orthonormal on S^2
double normalized_assoc_legendre(int m, int k, double x) {
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pkk = std::sqrt(1.0 / (4.0 * kPi));
    for (int j = 1; j <= k; ++j)
        pkk *= std::sqrt((2.0 * j + 1.0) / (2.0 * j)) * sx;
    if (m == k) return pkk;
    double pk1 = std::sqrt(2.0 * k + 3.0) * x * pkk; // degree k+1
    if (m == k + 1) return pk1;
    double prev = pkk, cur = pk1;
    for (int deg = k + 2; deg <= m; ++deg) {
        const double a = std::sqrt(((2.0 * deg - 1.0) * (2.0 * deg + 1.0)) /
                                   (static_cast<double>(deg - k) * (deg + k)));
        const double b = std::sqrt(((2.0 * deg + 1.0) * (deg + k - 1.0) * (deg - k - 1.0)) /
                                   (static_cast<double>(deg - k) * (deg + k) * (2.0 * deg - 3.0)));
        const double next = a * x * cur - b * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace

GegenbauerOrder::GegenbauerOrder(double a, int m) : alpha(a), degree(m) {
    if (a < 0.0) throw DomainError("GegenbauerOrder: alpha must be >= 0");
    if (m < 0) throw DomainError("GegenbauerOrder: degree must be >= 0");
}

GegenbauerOrder GegenbauerOrder::for_dimension(int n, int m) {
    if (n < 3) throw DomainError("GegenbauerOrder: dimension must be >= 3");
    return GegenbauerOrder((n - 3) / 2.0, m);
}

double gegenbauer(const GegenbauerOrder& order, double t) {
    if (std::abs(t) > 1.0 + 1e-12)
        throw DomainError("gegenbauer: |t| = " + std::to_string(std::abs(t)) + " exceeds 1");
    t = clamp_unit(t);
    const int m = order.degree;
    if (m == 0) return 1.0;
    if (order.alpha == 0.0) return std::cos(m * std::acos(t));
    const double a = order.alpha;
    double prev = 1.0;
    double cur = 2.0 * a * t;
    for (int j = 1; j < m; ++j) {
        const double next = (2.0 * (j + a) * t * cur - (j + 2.0 * a - 1.0) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double gegenbauer_normalized(const GegenbauerOrder& order, double t) {
    return gegenbauer(order, t) / gegenbauer(order, 1.0);
}

double gegenbauer_norm_check(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("gegenbauer_norm_check: alpha must be > 0");
    // The orthogonality table uses the normalization C_m(1) = 1 (the same
    // convention the Funk-Hecke prefactor omega_{n-3} requires); the
    // recurrence family is rescaled accordingly. The two coincide at
    // alpha in {0, 1/2}.
    // Integrate in t = cos(phi); the weight becomes sin^{2 alpha}(phi), which
    // is analytic, so Gauss-Legendre in phi converges spectrally.
    std::vector<double> xs, ws;
    gauss_legendre(256, xs, ws);
    const int kmax = 8;
    std::vector<std::vector<double>> vals(kmax + 1, std::vector<double>(xs.size()));
    std::vector<double> weight(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double phi = (xs[i] + 1.0) * kPi / 2.0;
        const double t = std::cos(phi);
        weight[i] = ws[i] * (kPi / 2.0) * std::pow(std::sin(phi), 2.0 * alpha);
        for (int m = 0; m <= kmax; ++m)
            vals[m][i] = gegenbauer(GegenbauerOrder(alpha, m), t) /
                         gegenbauer(GegenbauerOrder(alpha, m), 1.0);
    }
    double max_dev = 0.0;
    for (int m = 0; m <= kmax; ++m) {
        for (int k = m; k <= kmax; ++k) {
            double integral = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i)
                integral += weight[i] * vals[m][i] * vals[k][i];
            double expected = 0.0;
            if (m == k) {
                expected = std::pow(2.0, 2.0 * alpha - 1.0) *
                    std::exp(2.0 * std::lgamma(alpha + 0.5) + std::lgamma(m + 1.0) -
                             std::lgamma(m + 2.0 * alpha)) / (m + alpha);
            }
            max_dev = std::max(max_dev, std::abs(integral - expected));
        }
    }
    return max_dev;
}

int harmonic_count(int n, int m) {
    if (m < 0) throw DomainError("harmonic_count: degree must be >= 0");
    if (n == 3) return m == 0 ? 1 : 2;
    if (n == 4) return 2 * m + 1;
    throw UnsupportedDimension("harmonic_count: explicit bases exist only for n in {3, 4}");
}

double sph_harm(const HarmonicIndex& idx, int n, const std::vector<double>& zeta) {
    if (n != 3 && n != 4)
        throw UnsupportedDimension("sph_harm: n must be 3 or 4, got " + std::to_string(n));
    if (idx.m < 0 || idx.l < 1 || idx.l > harmonic_count(n, idx.m))
        throw DomainError("sph_harm: invalid harmonic index (" + std::to_string(idx.m) +
                          ", " + std::to_string(idx.l) + ")");
    if (static_cast<int>(zeta.size()) != n - 1)
        throw GridMismatch("sph_harm: zeta must be a vector in R^{n-1}");
    if (n == 3) {
        const double phi = std::atan2(zeta[1], zeta[0]);
        if (idx.m == 0) return 1.0 / std::sqrt(2.0 * kPi);
        const double amp = 1.0 / std::sqrt(kPi);
        return idx.l == 1 ? amp * std::cos(idx.m * phi) : amp * std::sin(idx.m * phi);
    }
    // n = 4: real harmonics on S^2, branch index l maps to order k = l - 1 - m
    const int k = idx.l - 1 - idx.m;
    const double ct = clamp_unit(zeta[2]);
    const double phi = std::atan2(zeta[1], zeta[0]);
    const double p = normalized_assoc_legendre(idx.m, std::abs(k), ct);
    if (k == 0) return p;
    const double amp = std::sqrt(2.0) * p;
    return k > 0 ? amp * std::cos(k * phi) : amp * std::sin(-k * phi);
}

int SphereQuadrature::design_order() const {
    // n = 3: an N-point trapezoid resolves products Y_m Y_m' up to m + m' < N.
    // n = 4: GL with N polar nodes is exact to degree 2N - 1 and the 2N-point
    // azimuth grid to order 2N - 1, so degree-m projections are exact for
    // m <= N - 1.
    if (n == 3) return (resolution - 1) / 2;
    return resolution - 1;
}

SphereQuadrature sphere_quadrature(int n, int resolution) {
    if (n != 3 && n != 4)
        throw UnsupportedDimension("sphere_quadrature: n must be 3 or 4");
    if (resolution < 4) throw DomainError("sphere_quadrature: resolution must be >= 4");
    SphereQuadrature q;
    q.n = n;
    q.resolution = resolution;
    if (n == 3) {
        q.nodes.reserve(resolution);
        q.weights.assign(resolution, 2.0 * kPi / resolution);
        for (int i = 0; i < resolution; ++i) {
            const double phi = 2.0 * kPi * i / resolution;
            q.nodes.push_back({std::cos(phi), std::sin(phi)});
        }
        return q;
    }
    std::vector<double> xs, ws;
    gauss_legendre(resolution, xs, ws);
    const int naz = 2 * resolution;
    q.nodes.reserve(static_cast<std::size_t>(resolution) * naz);
    q.weights.reserve(q.nodes.capacity());
    for (int i = 0; i < resolution; ++i) {
        const double ct = xs[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double w = ws[i] * (2.0 * kPi / naz);
        for (int j = 0; j < naz; ++j) {
            const double phi = 2.0 * kPi * j / naz;
            q.nodes.push_back({st * std::cos(phi), st * std::sin(phi), ct});
            q.weights.push_back(w);
        }
    }
    return q;
}

std::pair<double, double> funk_hecke_check(int n, const HarmonicIndex& idx,
                                           double xi,
                                           const std::vector<double>& psi) {
    if (n != 3 && n != 4)
        throw UnsupportedDimension("funk_hecke_check: n must be 3 or 4");
    if (static_cast<int>(psi.size()) != n - 1)
        throw GridMismatch("funk_hecke_check: psi must lie on S^{n-2}");
    const double cxi = std::cos(xi);
    const double sxi = std::sin(xi);
    double lhs = 0.0;
    if (n == 3) {
        // S^0: the two unit vectors orthogonal to psi in the plane
        const std::vector<double> perp = {-psi[1], psi[0]};
        for (int sgn : {+1, -1}) {
            std::vector<double> z(2);
            for (int i = 0; i < 2; ++i) z[i] = cxi * psi[i] + sgn * sxi * perp[i];
            lhs += sph_harm(idx, n, z);
        }
    } else {
        // orthonormal basis of the plane orthogonal to psi
        std::vector<double> v1(3), v2(3);
        if (std::abs(psi[0]) <= std::abs(psi[1]) && std::abs(psi[0]) <= std::abs(psi[2]))
            v1 = {0.0, -psi[2], psi[1]};
        else if (std::abs(psi[1]) <= std::abs(psi[2]))
            v1 = {-psi[2], 0.0, psi[0]};
        else
            v1 = {-psi[1], psi[0], 0.0};
        const double v1n = norm(v1);
        for (auto& v : v1) v /= v1n;
        v2 = {psi[1] * v1[2] - psi[2] * v1[1],
              psi[2] * v1[0] - psi[0] * v1[2],
              psi[0] * v1[1] - psi[1] * v1[0]};
        const int nq = 512; // integrand is a trig polynomial of degree m << nq
        for (int j = 0; j < nq; ++j) {
            const double beta = 2.0 * kPi * j / nq;
            std::vector<double> z(3);
            for (int i = 0; i < 3; ++i)
                z[i] = cxi * psi[i] + sxi * (std::cos(beta) * v1[i] + std::sin(beta) * v2[i]);
            const double zn = norm(z);
            for (auto& v : z) v /= zn;
            lhs += sph_harm(idx, n, z);
        }
        lhs *= 2.0 * kPi / nq;
    }
    const double rhs = sphere_volume(n - 3) *
        gegenbauer_normalized(GegenbauerOrder::for_dimension(n, idx.m), clamp_unit(cxi)) *
        sph_harm(idx, n, psi);
    return {lhs, rhs};
}

double project_onto_harmonic(const std::vector<double>& samples,
                             const SphereQuadrature& quad,
                             const HarmonicIndex& idx) {
    if (samples.size() != quad.size())
        throw GridMismatch("project_onto_harmonic: sample count " + std::to_string(samples.size()) +
                           " does not match quadrature size " + std::to_string(quad.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        acc += quad.weights[i] * samples[i] * sph_harm(idx, quad.n, quad.nodes[i]);
    return acc;
}

double sphere_volume(int d) {
    if (d < 0) throw DomainError("sphere_volume: dimension must be >= 0");
    return 2.0 * std::pow(kPi, (d + 1) / 2.0) / std::tgamma((d + 1) / 2.0);
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(count);
    weights.resize(count);
    const int half = (count + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration from the Chebyshev-based initial guess
        double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= count; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
}

} // namespace sphradon
