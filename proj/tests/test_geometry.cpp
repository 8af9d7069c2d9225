#include <doctest.h>

#include <cmath>
#include <random>

#include "sphradon/geometry.hpp"

using namespace sphradon;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

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

} // namespace

TEST_CASE("spheroid geometry construction and invariants") {
    CHECK_THROWS_AS(SpheroidGeometry(2, 1.0), DomainError);
    CHECK_THROWS_AS(SpheroidGeometry(3, 0.0), DomainError);
    CHECK_THROWS_AS(SpheroidGeometry(3, -1.0), DomainError);

    const SpheroidGeometry geom(3, 1.0);
    CHECK(geom.tanh_lambda() == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
    CHECK(!geom.is_slice_limit());

    const SpheroidGeometry inf = SpheroidGeometry::slice_limit(4);
    CHECK(inf.is_slice_limit());
    CHECK(inf.tanh_lambda() == 1.0);

    // from_tanh round trip
    const SpheroidGeometry back = SpheroidGeometry::from_tanh(3, geom.tanh_lambda());
    CHECK(back.tanh_lambda() == doctest::Approx(geom.tanh_lambda()).epsilon(1e-15));
    CHECK(SpheroidGeometry::from_tanh(3, 1.0).is_slice_limit());

    // the spheroid is strictly inside the unit sphere away from the poles
    for (double lam : {0.3, 1.0, 2.5}) {
        const SpheroidGeometry g(3, lam);
        for (int k = 1; k < 40; ++k) {
            const double xn = std::cos(kPi * k / 40.0);
            const double rho = std::sin(kPi * k / 40.0) / g.cosh_lambda();
            CHECK(xn * xn + rho * rho * g.cosh_lambda() * g.cosh_lambda() ==
                  doctest::Approx(1.0).epsilon(1e-14));
            CHECK(xn * xn + rho * rho < 1.0);
        }
    }
}

TEST_CASE("stereographic projection examples") {
    // south pole to origin
    const SpherePoint south({0.0, 0.0, -1.0});
    const auto y0 = stereo_project(south);
    CHECK(y0[0] == 0.0);
    CHECK(y0[1] == 0.0);

    // equator to the unit sphere of the plane
    const SpherePoint eq({1.0, 0.0, 0.0});
    const auto y1 = stereo_project(eq);
    CHECK(y1[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y1[1] == 0.0);

    // direct substitution
    const SpherePoint p({std::sqrt(3.0) / 2.0, 0.0, -0.5});
    const auto y2 = stereo_project(p);
    CHECK(y2[0] == doctest::Approx(std::sqrt(3.0) / 3.0).epsilon(1e-14));
    CHECK(y2[1] == 0.0);

    // north pole guard
    const SpherePoint near_pole({1.2e-8, 0.0, std::sqrt(1.0 - 1.44e-16)});
    CHECK_THROWS_AS(stereo_project(near_pole), NorthPoleSingular);
}

TEST_CASE("inverse stereographic projection examples") {
    const SpherePoint south = stereo_unproject({0.0, 0.0});
    CHECK(south.coords[2] == doctest::Approx(-1.0).epsilon(1e-15));

    const SpherePoint eq = stereo_unproject({1.0, 0.0});
    CHECK(eq.coords[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eq.coords[2] == doctest::Approx(0.0).epsilon(1e-15));

    const SpherePoint p = stereo_unproject({3.0, 4.0});
    CHECK(p.coords[0] == doctest::Approx(3.0 / 13.0).epsilon(1e-14));
    CHECK(p.coords[1] == doctest::Approx(4.0 / 13.0).epsilon(1e-14));
    CHECK(p.coords[2] == doctest::Approx(12.0 / 13.0).epsilon(1e-14));
}

TEST_CASE("projection round trips at 1e-12") {
    std::mt19937_64 rng(7u);
    std::uniform_real_distribution<double> span(-3.0, 3.0);
    for (int n : {3, 4, 5}) {
        double worst = 0.0;
        for (int it = 0; it < 3400; ++it) {
            std::vector<double> y(n - 1);
            for (auto& v : y) v = span(rng);
            const SpherePoint x = stereo_unproject(y);
            const auto back = stereo_project(x);
            for (int i = 0; i < n - 1; ++i) worst = std::max(worst, std::abs(back[i] - y[i]));

            const std::vector<double> xs = random_unit(rng, n);
            if (1.0 - xs[n - 1] > 1e-6) {
                const SpherePoint sp(xs);
                const SpherePoint again = stereo_unproject(stereo_project(sp));
                for (int i = 0; i < n; ++i)
                    worst = std::max(worst, std::abs(again.coords[i] - xs[i]));
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("theta to c and back") {
    const SpheroidGeometry geom(3, 0.8);

    CHECK(theta_to_c(0.0, geom) == doctest::Approx(geom.cosh_lambda()).epsilon(1e-15));
    CHECK(c_to_theta(geom.cosh_lambda(), geom) == doctest::Approx(0.0).epsilon(1e-15));

    CHECK(c_to_theta(theta_to_c(0.3, geom), geom) == doctest::Approx(0.3).epsilon(1e-13));

    // limits
    CHECK(c_to_theta(1e-14, geom) == doctest::Approx(-kPi / 2).epsilon(1e-10));
    CHECK(c_to_theta(1e14, geom) == doctest::Approx(kPi / 2).epsilon(1e-10));

    // the inverse pair over the whole angle range
    std::mt19937_64 rng(11u);
    std::uniform_real_distribution<double> theta_d(-kPi / 2 + 0.01, kPi / 2 - 0.01);
    for (double lam : {0.2, 1.0, 3.0}) {
        const SpheroidGeometry g(3, lam);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double theta = theta_d(rng);
            const double c = theta_to_c(theta, g);
            worst = std::max(worst, std::abs(c_to_theta(c, g) - theta));
        }
        CHECK(worst <= 1e-12);
        // strictly increasing
        double last = 0.0;
        for (int k = 0; k <= 60; ++k) {
            const double theta = -1.5 + 3.0 * k / 60.0;
            const double c = theta_to_c(theta, g);
            CHECK(c > last);
            last = c;
        }
    }

    CHECK_THROWS_AS(theta_to_c(kPi / 2, geom), DomainError);
    CHECK_THROWS_AS(c_to_theta(0.0, geom), DomainError);
    CHECK_THROWS_AS(c_to_theta(-1.0, geom), DomainError);
    const SpheroidGeometry inf = SpheroidGeometry::slice_limit(3);
    CHECK_THROWS_AS(theta_to_c(0.3, inf), DomainError);
    CHECK_THROWS_AS(c_to_theta(1.0, inf), DomainError);
}

TEST_CASE("tangent distance") {
    const SpheroidGeometry geom(3, 1.3);
    CHECK(tangent_distance(kPi / 2, geom) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tangent_distance(-kPi / 2, geom) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tangent_distance(0.0, geom) ==
          doctest::Approx(1.0 / geom.cosh_lambda()).epsilon(1e-15));
    for (int k = 0; k <= 50; ++k) {
        const double theta = -kPi / 2 + kPi * k / 50.0;
        const double t = tangent_distance(theta, geom);
        CHECK(t >= 1.0 / geom.cosh_lambda() - 1e-15);
        CHECK(t <= 1.0 + 1e-15);
    }
}

TEST_CASE("subsphere points lie on the sphere and on the tangent hyperplane") {
    std::mt19937_64 rng(23u);
    std::uniform_real_distribution<double> lam_d(0.2, 3.0);
    std::uniform_real_distribution<double> theta_d(-1.4, 1.4);
    for (int n : {3, 4, 5}) {
        double worst_plane = 0.0;
        for (int it = 0; it < 120; ++it) {
            const SpheroidGeometry geom(n, lam_d(rng));
            const double theta = theta_d(rng);
            const double c = theta_to_c(theta, geom);
            const double t = tangent_distance(theta, geom);
            const std::vector<double> psi = random_unit(rng, n - 1);
            const SubsphereCoord coord(psi, c);

            std::vector<double> normal(n);
            for (int i = 0; i < n - 1; ++i) normal[i] = std::cos(theta) * psi[i];
            normal[n - 1] = std::sin(theta);

            for (int k = 0; k < 6; ++k) {
                const std::vector<double> omega = random_unit(rng, n - 1);
                const SpherePoint x = subsphere_point(coord, geom, omega);
                CHECK(std::abs(norm(x.coords) - 1.0) <= 1e-12);
                worst_plane = std::max(worst_plane, std::abs(dot(x.coords, normal) - t));
            }
        }
        CHECK(worst_plane <= 1e-10);
    }

    // collinear substitutions
    const SpheroidGeometry geom(3, 1.0);
    const std::vector<double> psi = {1.0, 0.0};
    const double c = 0.7;
    const SubsphereCoord coord(psi, c);
    const double T = geom.tanh_lambda();
    const SpherePoint plus = subsphere_point(coord, geom, psi);
    const SpherePoint expect_plus = stereo_unproject({c * (1.0 + T), 0.0});
    CHECK(plus.coords[0] == doctest::Approx(expect_plus.coords[0]).epsilon(1e-14));
    CHECK(plus.coords[2] == doctest::Approx(expect_plus.coords[2]).epsilon(1e-14));
    const SpherePoint minus = subsphere_point(coord, geom, {-1.0, 0.0});
    const SpherePoint expect_minus = stereo_unproject({c * (1.0 - T), 0.0});
    CHECK(minus.coords[0] == doctest::Approx(expect_minus.coords[0]).epsilon(1e-14));
}

TEST_CASE("measure factor examples and finite differences") {
    // direct substitution: n=3, tanh(l)=0.5, c=1, <omega,psi>=0
    const SpheroidGeometry half = SpheroidGeometry::from_tanh(3, 0.5);
    const SubsphereCoord coord({1.0, 0.0}, 1.0);
    CHECK(measure_factor(coord, half, {0.0, 1.0}) ==
          doctest::Approx(1.0 / 2.25).epsilon(1e-15));

    // finite-difference volume element, one configuration per n
    std::mt19937_64 rng(31u);
    for (int n : {3, 4, 5}) {
        const SpheroidGeometry geom(n, 0.9);
        const std::vector<double> psi = random_unit(rng, n - 1);
        const std::vector<double> omega = random_unit(rng, n - 1);
        const SubsphereCoord sc(psi, 1.7);
        const double mf = measure_factor(sc, geom, omega);

        // geodesic central differences along an orthonormal tangent frame
        const double h = 1e-5;
        std::vector<std::vector<double>> basis;
        for (int i = 0; i < n - 1 && static_cast<int>(basis.size()) < n - 2; ++i) {
            std::vector<double> v(n - 1, 0.0);
            v[i] = 1.0;
            double pr = dot(v, omega);
            for (int k = 0; k < n - 1; ++k) v[k] -= pr * omega[k];
            for (const auto& b : basis) {
                pr = dot(v, b);
                for (int k = 0; k < n - 1; ++k) v[k] -= pr * b[k];
            }
            const double r = norm(v);
            if (r < 1e-8) continue;
            for (auto& x : v) x /= r;
            basis.push_back(v);
        }
        std::vector<std::vector<double>> J;
        for (const auto& v : basis) {
            std::vector<double> op(n - 1), om(n - 1);
            for (int i = 0; i < n - 1; ++i) {
                op[i] = std::cos(h) * omega[i] + std::sin(h) * v[i];
                om[i] = std::cos(h) * omega[i] - std::sin(h) * v[i];
            }
            const SpherePoint xp = subsphere_point(sc, geom, op);
            const SpherePoint xm = subsphere_point(sc, geom, om);
            std::vector<double> col(n);
            for (int i = 0; i < n; ++i) col[i] = (xp.coords[i] - xm.coords[i]) / (2.0 * h);
            J.push_back(col);
        }
        std::vector<std::vector<double>> G(J.size(), std::vector<double>(J.size()));
        for (std::size_t a = 0; a < J.size(); ++a)
            for (std::size_t b = 0; b < J.size(); ++b) G[a][b] = dot(J[a], J[b]);
        double det = 0.0;
        if (J.size() == 1) det = G[0][0];
        else if (J.size() == 2) det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
        else
            det = G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) -
                  G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
                  G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
        CHECK(std::sqrt(det) == doctest::Approx(mf).epsilon(1e-6));
    }
}

TEST_CASE("slice limit: every subsphere passes through the south pole") {
    const SpheroidGeometry inf = SpheroidGeometry::slice_limit(3);
    std::mt19937_64 rng(41u);
    for (int it = 0; it < 20; ++it) {
        const std::vector<double> psi = random_unit(rng, 2);
        const SubsphereCoord coord(psi, std::pow(10.0, -2.0 + 4.0 * it / 19.0));
        const SpherePoint x = subsphere_point(coord, inf, {-psi[0], -psi[1]});
        CHECK(x.coords[2] == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(std::abs(x.coords[0]) <= 1e-12);
        CHECK(std::abs(x.coords[1]) <= 1e-12);
    }
}

TEST_CASE("tangency discriminant vanishes") {
    std::mt19937_64 rng(53u);
    std::uniform_real_distribution<double> lam_d(0.2, 3.0);
    std::uniform_real_distribution<double> theta_d(-1.4, 1.4);
    double worst = 0.0;
    for (int it = 0; it < 500; ++it) {
        const SpheroidGeometry geom(3, lam_d(rng));
        const double theta = theta_d(rng);
        const double t = tangent_distance(theta, geom);
        const double ch2 = geom.cosh_lambda() * geom.cosh_lambda();
        const double st = std::sin(theta), ct = std::cos(theta);
        const double a = st * st * ch2 + ct * ct;
        const double disc = 4.0 * t * t * ct * ct - 4.0 * a * (t * t - st * st);
        worst = std::max(worst, std::abs(disc));
    }
    CHECK(worst <= 1e-10);
}
