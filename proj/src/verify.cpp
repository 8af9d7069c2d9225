#include "sphradon/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "sphradon/forward.hpp"
#include "sphradon/geometry.hpp"
#include "sphradon/harmonics.hpp"
#include "sphradon/inversion.hpp"
#include "sphradon/mellin.hpp"

namespace sphradon {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

class Stopwatch {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
};

std::vector<double> random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(dim);
    double r = 0.0;
    do {
        for (auto& x : v) x = gauss(rng);
        r = norm(v);
    } while (r < 1e-6);
    for (auto& x : v) x /= r;
    return v;
}

// orthonormal basis of the tangent space of S^{d-1} at omega (in R^d)
std::vector<std::vector<double>> tangent_basis(const std::vector<double>& omega) {
    const int d = static_cast<int>(omega.size());
    std::vector<std::vector<double>> basis;
    for (int i = 0; i < d && static_cast<int>(basis.size()) < d - 1; ++i) {
        std::vector<double> v(d, 0.0);
        v[i] = 1.0;
        double p = dot(v, omega);
        for (int k = 0; k < d; ++k) v[k] -= p * omega[k];
        for (const auto& b : basis) {
            p = dot(v, b);
            for (int k = 0; k < d; ++k) v[k] -= p * b[k];
        }
        const double r = norm(v);
        if (r < 1e-8) continue;
        for (auto& x : v) x /= r;
        basis.push_back(std::move(v));
    }
    return basis;
}

double det_gram(const std::vector<std::vector<double>>& J) {
    const int k = static_cast<int>(J.size());
    std::vector<std::vector<double>> G(k, std::vector<double>(k));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) G[a][b] = dot(J[a], J[b]);
    if (k == 1) return G[0][0];
    if (k == 2) return G[0][0] * G[1][1] - G[0][1] * G[1][0];
    return G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) -
           G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
           G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
}

// finite-difference (n-2)-volume element of omega -> Lambda^{-1}(c psi + cT omega)
double fd_volume_element(const SubsphereCoord& coord, const SpheroidGeometry& geom,
                         const std::vector<double>& omega) {
    const double h = 1e-5;
    const auto basis = tangent_basis(omega);
    std::vector<std::vector<double>> J;
    for (const auto& v : basis) {
        std::vector<double> op(omega.size()), om(omega.size());
        for (std::size_t i = 0; i < omega.size(); ++i) {
            op[i] = std::cos(h) * omega[i] + std::sin(h) * v[i];
            om[i] = std::cos(h) * omega[i] - std::sin(h) * v[i];
        }
        const SpherePoint xp = subsphere_point(coord, geom, op);
        const SpherePoint xm = subsphere_point(coord, geom, om);
        std::vector<double> col(xp.coords.size());
        for (std::size_t i = 0; i < col.size(); ++i)
            col[i] = (xp.coords[i] - xm.coords[i]) / (2.0 * h);
        J.push_back(std::move(col));
    }
    return std::sqrt(std::max(0.0, det_gram(J)));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// test-grade complex Gamma (Lanczos) for the gamma-pair criterion
std::complex<double> gamma_complex(std::complex<double> z) {
    return std::exp(detail::lgamma_complex(z));
}

} // namespace

SuiteResult verify_geometry(int samples) {
    Stopwatch clock;
    std::mt19937_64 rng(20240901u);
    std::uniform_real_distribution<double> lam_d(0.2, 3.0);
    std::uniform_real_distribution<double> theta_d(-1.4, 1.4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double max_plane = 0.0, max_disc = 0.0, max_round = 0.0;
    for (int it = 0; it < samples; ++it) {
        const int n = 3 + static_cast<int>(unif(rng) * 3.0) % 3;
        const SpheroidGeometry geom(n, lam_d(rng));
        const double theta = theta_d(rng);
        const std::vector<double> psi = random_unit(rng, n - 1);
        const double c = theta_to_c(theta, geom);
        const double t = tangent_distance(theta, geom);

        max_round = std::max(max_round, std::abs(c_to_theta(c, geom) - theta));

        // normal of the cutting hyperplane: ((cos theta) psi, sin theta)
        std::vector<double> normal(n, 0.0);
        for (int i = 0; i < n - 1; ++i) normal[i] = std::cos(theta) * psi[i];
        normal[n - 1] = std::sin(theta);

        const SubsphereCoord coord(psi, c);
        for (int k = 0; k < 8; ++k) {
            const std::vector<double> omega = random_unit(rng, n - 1);
            const SpherePoint x = subsphere_point(coord, geom, omega);
            max_plane = std::max(max_plane, std::abs(dot(x.coords, normal) - t));
        }

        // tangency: the quadratic cut of the spheroid along the plane
        // x1 cos(theta) + xn sin(theta) = t has a vanishing discriminant
        const double ch2 = geom.cosh_lambda() * geom.cosh_lambda();
        const double st = std::sin(theta), ct = std::cos(theta);
        const double a = st * st * ch2 + ct * ct;
        const double disc = 4.0 * t * t * ct * ct - 4.0 * a * (t * t - st * st);
        max_disc = std::max(max_disc, std::abs(disc));
    }
    SuiteResult res;
    res.name = "geometry";
    res.pass = max_plane <= 1e-10 && max_disc <= 1e-10 && max_round <= 1e-12;
    res.detail = "plane residual " + fmt(max_plane) + " (tol 1e-10), discriminant " +
                 fmt(max_disc) + " (tol 1e-10), c<->theta roundtrip " + fmt(max_round) +
                 " (tol 1e-12)";
    res.seconds = clock.seconds();
    return res;
}

SuiteResult verify_measure(int samples) {
    Stopwatch clock;
    std::mt19937_64 rng(20240902u);
    std::uniform_real_distribution<double> lam_d(0.2, 3.0);
    std::uniform_real_distribution<double> logc_d(-1.5, 1.5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double max_rel_jac = 0.0;
    for (int it = 0; it < samples; ++it) {
        const int n = 3 + it % 3;
        const bool slice = unif(rng) < 0.15;
        const SpheroidGeometry geom =
            slice ? SpheroidGeometry::slice_limit(n) : SpheroidGeometry(n, lam_d(rng));
        const SubsphereCoord coord(random_unit(rng, n - 1), std::pow(10.0, logc_d(rng)));
        const std::vector<double> omega = random_unit(rng, n - 1);
        const double mf = measure_factor(coord, geom, omega);
        const double fd = fd_volume_element(coord, geom, omega);
        max_rel_jac = std::max(max_rel_jac, std::abs(mf - fd) / std::abs(fd));
    }

    // n = 3: integrating the measure around the circle gives its true
    // circumference 2 pi sqrt(1 - t^2). The integrand is a Poisson-type
    // kernel whose Fourier decay e^{-k arccosh(1/a)} collapses as the
    // subsphere nears the north pole, so the resolution adapts to it.
    double max_rel_circ = 0.0;
    for (int it = 0; it < 40; ++it) {
        const SpheroidGeometry geom(3, lam_d(rng));
        const double theta = -1.4 + 2.8 * unif(rng);
        const double c = theta_to_c(theta, geom);
        const double t = tangent_distance(theta, geom);
        const double T = geom.tanh_lambda();
        const double a = 2.0 * c * c * T / (1.0 + c * c * (1.0 + T * T));
        const double decay = std::acosh(1.0 / a);
        const int res = std::min(1 << 20, std::max(256, static_cast<int>(std::ceil(30.0 / decay))));
        const SubsphereCoord coord(random_unit(rng, 2), c);
        const SphereQuadrature quad = sphere_quadrature(3, res);
        double len = 0.0;
        for (std::size_t i = 0; i < quad.size(); ++i)
            len += quad.weights[i] * measure_factor(coord, geom, quad.nodes[i]);
        const double expected = 2.0 * kPi * std::sqrt(1.0 - t * t);
        max_rel_circ = std::max(max_rel_circ, std::abs(len - expected) / expected);
    }

    SuiteResult res;
    res.name = "measure";
    res.pass = max_rel_jac <= 1e-6 && max_rel_circ <= 1e-8;
    res.detail = "fd jacobian rel " + fmt(max_rel_jac) + " (tol 1e-6), circumference rel " +
                 fmt(max_rel_circ) + " (tol 1e-8)";
    res.seconds = clock.seconds();
    return res;
}

SuiteResult verify_funk_hecke(int samples_per_case) {
    Stopwatch clock;
    std::mt19937_64 rng(20240903u);
    std::uniform_real_distribution<double> xi_d(0.0, kPi);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double max_resid = 0.0;
    for (int n : {3, 4}) {
        for (int m = 0; m <= 10; ++m) {
            for (int l = 1; l <= harmonic_count(n, m); ++l) {
                for (int it = 0; it < samples_per_case; ++it) {
                    const double xi = xi_d(rng);
                    const std::vector<double> psi = random_unit(rng, n - 1);
                    const auto [lhs, rhs] = funk_hecke_check(n, HarmonicIndex{m, l}, xi, psi);
                    max_resid = std::max(max_resid, std::abs(lhs - rhs));
                }
            }
        }
    }
    SuiteResult res;
    res.name = "funk-hecke";
    res.pass = max_resid <= 1e-9;
    res.detail = "identity residual " + fmt(max_resid) + " (tol 1e-9)";
    res.seconds = clock.seconds();
    return res;
}

SuiteResult verify_mellin() {
    Stopwatch clock;

    // gamma pair: M(e^{-y})(1/2 + ib) = Gamma(1/2 + ib) at 20 points
    const LogGrid wide(1e-20, 2e2, 8192);
    std::vector<double> ev(wide.count);
    const std::vector<double> ys = wide.points();
    for (int k = 0; k < wide.count; ++k) ev[k] = std::exp(-ys[k]);
    const RadialProfile expy(wide, ev);
    double max_gamma = 0.0;
    for (int j = 0; j < 20; ++j) {
        const double b = -4.75 + 0.5 * j;
        const std::complex<double> got = mellin_point(expy, {0.5, b});
        const std::complex<double> want = gamma_complex({0.5, b});
        max_gamma = std::max(max_gamma, std::abs(got - want));
    }

    // inversion round trip on r in [0.1, 10] with the default contour
    const MellinLine line = mellin_forward(expy, 0.5, make_b_grid(200.0, 0.05));
    double max_round = 0.0;
    for (int j = 0; j <= 60; ++j) {
        const double r = 0.1 * std::pow(100.0, j / 60.0);
        const double got = mellin_inverse(line, r);
        const double want = std::exp(-r);
        max_round = std::max(max_round, std::abs(got - want) / want);
    }

    // convolution identity M(F1 * F2)(s) = M F1(s) M F2(1 - s) on five
    // analytic pairs; both sides computed numerically. Pairs vanish at the
    // origin so the identity is grid-resolvable at every rho in the strip
    // (F(0) != 0 leaves r_min^rho of untracked mass at rho = 0.3).
    const LogGrid conv_grid(1e-9, 1e9, 8192);
    const std::vector<double> cs = conv_grid.points();
    auto sample = [&](const std::function<double(double)>& f) {
        std::vector<double> v(conv_grid.count);
        for (int k = 0; k < conv_grid.count; ++k) v[k] = f(cs[k]);
        return RadialProfile(conv_grid, v);
    };
    const std::vector<std::pair<std::function<double(double)>, std::function<double(double)>>> pairs = {
        {[](double y) { return y * std::exp(-y); }, [](double y) { return y * std::exp(-y); }},
        {[](double y) { return y * std::exp(-y); }, [](double y) { return y * y * std::exp(-2.0 * y); }},
        {[](double y) { return y * y * std::exp(-2.0 * y); }, [](double y) { return y * std::exp(-y); }},
        {[](double y) { return y * std::exp(-y * y); }, [](double y) { return y * std::exp(-y); }},
        {[](double y) { return y * y * y * std::exp(-1.5 * y); }, [](double y) { return y * y * std::exp(-y * y); }},
    };
    double max_conv = 0.0;
    for (const auto& [f1, f2] : pairs) {
        const RadialProfile F1 = sample(f1);
        const RadialProfile F2 = sample(f2);
        const RadialProfile C = mellin_convolve(F1, F2);
        for (double rho : {0.3, 0.5, 0.7}) {
            for (int j = -4; j <= 4; ++j) {
                const std::complex<double> s(rho, 0.5 * j);
                const std::complex<double> lhs = mellin_point(C, s);
                const std::complex<double> rhs = mellin_point(F1, s) * mellin_point(F2, 1.0 - s);
                max_conv = std::max(max_conv, std::abs(lhs - rhs) / std::abs(rhs));
            }
        }
    }

    SuiteResult res;
    res.name = "mellin";
    res.pass = max_gamma <= 1e-8 && max_round <= 1e-5 && max_conv <= 1e-5;
    res.detail = "gamma pair " + fmt(max_gamma) + " (tol 1e-8), roundtrip rel " + fmt(max_round) +
                 " (tol 1e-5), convolution rel " + fmt(max_conv) + " (tol 1e-5)";
    res.seconds = clock.seconds();
    return res;
}

SuiteResult verify_kernel() {
    Stopwatch clock;

    // n = 3, m = 0: int h = pi for every lambda
    double max_pi = 0.0;
    for (double lam : {0.4, 1.0, 2.5}) {
        const SpheroidGeometry geom(3, lam);
        const KernelSpec spec(geom, 0);
        const std::complex<double> got = kernel_h_mellin_point(spec, 1.0);
        max_pi = std::max(max_pi, std::abs(got - std::complex<double>(kPi)));
    }
    {
        const KernelSpec spec(SpheroidGeometry::slice_limit(3), 0);
        max_pi = std::max(max_pi,
                          std::abs(kernel_h_mellin_point(spec, 1.0) - std::complex<double>(kPi)));
    }

    // n = 4, m = 0: h(x) = x / tanh(lambda) on the support and M(h)(1) = 2
    double max_n4 = 0.0;
    {
        const SpheroidGeometry geom(4, 0.8);
        const KernelSpec spec(geom, 0);
        const double T = geom.tanh_lambda();
        for (int k = 0; k <= 40; ++k) {
            const double x = (1.0 - T) + (2.0 * T) * k / 40.0;
            max_n4 = std::max(max_n4, std::abs(kernel_h(spec, x) - x / T));
        }
        max_n4 = std::max(max_n4,
                          std::abs(kernel_h_mellin_point(spec, 1.0) - std::complex<double>(2.0)));
    }

    // tanh(lambda) -> 1 approaches the slice kernel pointwise on [0.01, 1.99]
    double max_limit = 0.0;
    for (int n : {3, 4}) {
        const SpheroidGeometry near_inf = SpheroidGeometry::from_tanh(n, 1.0 - 1e-8);
        const SpheroidGeometry inf = SpheroidGeometry::slice_limit(n);
        for (int m : {0, 2, 5}) {
            const KernelSpec near_spec(near_inf, m);
            const KernelSpec inf_spec(inf, m);
            for (int k = 0; k <= 396; ++k) {
                const double x = 0.01 + k * 0.005;
                max_limit = std::max(max_limit,
                                     std::abs(kernel_h(near_spec, x) - kernel_h(inf_spec, x)));
            }
        }
    }

    SuiteResult res;
    res.name = "kernel";
    res.pass = max_pi <= 1e-8 && max_n4 <= 1e-10 && max_limit <= 1e-5;
    res.detail = "n=3 integral-pi " + fmt(max_pi) + " (tol 1e-8), n=4 closed form " + fmt(max_n4) +
                 " (tol 1e-10), slice limit " + fmt(max_limit) + " (tol 1e-5)";
    res.seconds = clock.seconds();
    return res;
}

namespace {

// direct quadrature oracle for int_0^inf g(c x) h_{m,lambda}(x) dx via the
// smooth pre-substitution form (independent of the sinogram path)
double keystone_oracle(const std::function<double(double)>& g, const KernelSpec& spec,
                       double c, int nodes = 600) {
    std::vector<double> xs, ws;
    gauss_legendre(nodes, xs, ws);
    const GegenbauerOrder order = GegenbauerOrder::for_dimension(spec.n, spec.m);
    double acc = 0.0;
    const double T = spec.tanh_lambda;
    for (int i = 0; i < nodes; ++i) {
        const double phi = (xs[i] + 1.0) * kPi / 2.0;
        const double x2 = 1.0 + T * T + 2.0 * T * std::cos(phi);
        const double x = std::sqrt(x2);
        const double cxi = std::min(1.0, (1.0 + T * std::cos(phi)) / x);
        acc += ws[i] * (kPi / 2.0) * g(c * x) * gegenbauer_normalized(order, cxi) *
               std::pow(std::sin(phi), spec.n - 3);
    }
    return acc;
}

} // namespace

SuiteResult verify_keystone() {
    Stopwatch clock;
    double max_rel = 0.0;
    for (int n : {3, 4}) {
        const double lam = 1.0;
        const SpheroidGeometry geom(n, lam);
        // one active mode per degree m = 0..6, distinct profiles
        PhantomSpec phantom;
        phantom.n = n;
        for (int m = 0; m <= 6; ++m) {
            const int l = std::min(harmonic_count(n, m), m % 2 + 1);
            phantom.modes.push_back(
                {HarmonicIndex{m, l},
                 {RadialTerm{1.0 / (1.0 + m), 2 + m % 2, 1.0 + 0.25 * m}}});
        }
        const SphereFunction f = phantom_function(phantom);
        // psi grid only needs degree-6 projections; the transform quadrature
        // carries the accuracy burden at large c
        const SphereQuadrature psi_grid = sphere_quadrature(n, n == 3 ? 256 : 16);
        const SphereQuadrature quad = sphere_quadrature(n, n == 3 ? 256 : 64);
        const LogGrid c_grid(0.1, 10.0, 20);
        const Sinogram sino = make_sinogram(f, geom, psi_grid, c_grid, quad);
        const std::vector<double> cs = c_grid.points();
        for (const auto& mode : phantom.modes) {
            const RadialProfile K = sinogram_to_K(sino, mode.idx);
            const KernelSpec spec(geom, mode.idx.m);
            for (int j = 0; j < c_grid.count; ++j) {
                const double oracle = keystone_oracle(
                    [&](double r) { return mode.profile(r); }, spec, cs[j]);
                const double denom = std::max(std::abs(oracle), 1e-12);
                max_rel = std::max(max_rel, std::abs(K.values[j] - oracle) / denom);
            }
        }
    }
    SuiteResult res;
    res.name = "keystone";
    res.pass = max_rel <= 1e-6;
    res.detail = "projection vs direct quadrature rel " + fmt(max_rel) + " (tol 1e-6)";
    res.seconds = clock.seconds();
    return res;
}

std::vector<SuiteResult> verify_all() {
    return {verify_geometry(), verify_measure(), verify_funk_hecke(),
            verify_mellin(), verify_kernel(), verify_keystone()};
}

std::vector<SuiteResult> verify_suite(const std::string& name) {
    if (name.empty() || name == "all") return verify_all();
    if (name == "geometry") return {verify_geometry(), verify_measure()};
    if (name == "measure") return {verify_measure()};
    if (name == "funk-hecke") return {verify_funk_hecke()};
    if (name == "mellin") return {verify_mellin()};
    if (name == "kernel") return {verify_kernel()};
    if (name == "keystone") return {verify_keystone()};
    throw DomainError("verify_suite: unknown suite '" + name + "'");
}

} // namespace sphradon
