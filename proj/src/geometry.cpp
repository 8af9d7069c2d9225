#include "sphradon/geometry.hpp"

#include <cmath>
#include <string>

namespace sphradon {

namespace {
constexpr double kUnitTol = 1e-12;
constexpr double kPoleGuard = 1e-14;
constexpr double kHalfPi = 1.5707963267948966;
} // namespace

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

SpheroidGeometry::SpheroidGeometry(int n, double lambda) : n_(n), lambda_(lambda) {
    if (n < 3) throw DomainError("SpheroidGeometry: dimension must be >= 3, got " + std::to_string(n));
    if (std::isnan(lambda) || lambda <= 0.0)
        throw DomainError("SpheroidGeometry: lambda must be positive");
    if (std::isinf(lambda)) {
        tanh_ = 1.0;
        cosh_ = std::numeric_limits<double>::infinity();
        sinh_ = std::numeric_limits<double>::infinity();
    } else {
        tanh_ = std::tanh(lambda);
        cosh_ = std::cosh(lambda);
        sinh_ = std::sinh(lambda);
    }
}

SpheroidGeometry SpheroidGeometry::slice_limit(int n) {
    return SpheroidGeometry(n, std::numeric_limits<double>::infinity());
}

SpheroidGeometry SpheroidGeometry::from_tanh(int n, double tanh_lambda) {
    if (std::isnan(tanh_lambda) || tanh_lambda <= 0.0 || tanh_lambda > 1.0)
        throw DomainError("SpheroidGeometry: tanh(lambda) must lie in (0, 1]");
    if (tanh_lambda == 1.0) return slice_limit(n);
    return SpheroidGeometry(n, std::atanh(tanh_lambda));
}

void SpheroidGeometry::require_finite(const char* op) const {
    if (is_slice_limit())
        throw DomainError(std::string(op) + ": lambda must be finite (no spheroid in the slice limit)");
}

SpherePoint::SpherePoint(std::vector<double> c) : coords(std::move(c)) {
    if (coords.size() < 3) throw DomainError("SpherePoint: ambient dimension must be >= 3");
    const double r = norm(coords);
    if (std::abs(r - 1.0) > kUnitTol)
        throw DomainError("SpherePoint: |coords| deviates from 1 by " + std::to_string(std::abs(r - 1.0)));
}

SubsphereCoord::SubsphereCoord(std::vector<double> psi_, double c_)
    : psi(std::move(psi_)), c(c_) {
    if (psi.size() < 2) throw DomainError("SubsphereCoord: psi must live in R^{n-1}, n >= 3");
    if (std::abs(norm(psi) - 1.0) > kUnitTol)
        throw DomainError("SubsphereCoord: psi must be a unit vector");
    if (!(c > 0.0) || std::isinf(c)) throw DomainError("SubsphereCoord: c must be positive and finite");
}

std::vector<double> stereo_project(const SpherePoint& x) {
    const double denom = 1.0 - x.last();
    if (denom <= kPoleGuard)
        throw NorthPoleSingular("stereo_project: point within 1e-14 of the north pole");
    std::vector<double> y(x.coords.size() - 1);
    for (std::size_t i = 0; i + 1 < x.coords.size(); ++i) y[i] = x.coords[i] / denom;
    return y;
}

SpherePoint stereo_unproject(const std::vector<double>& y) {
    const double r2 = dot(y, y);
    const double denom = 1.0 + r2;
    std::vector<double> x(y.size() + 1);
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = 2.0 * y[i] / denom;
    x[y.size()] = (r2 - 1.0) / denom;
    // renormalize away the last-ulp drift so SpherePoint's invariant holds
    double r = 0.0;
    for (double v : x) r += v * v;
    r = std::sqrt(r);
    for (double& v : x) v /= r;
    return SpherePoint(std::move(x));
}

double theta_to_c(double theta, const SpheroidGeometry& geom) {
    geom.require_finite("theta_to_c");
    if (!(std::abs(theta) < kHalfPi))
        throw DomainError("theta_to_c: |theta| must be < pi/2");
    const double ch = geom.cosh_lambda();
    const double sh = geom.sinh_lambda();
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double root = std::sqrt(1.0 + sh * sh * st * st);
    if (st > 0.0) {
        // rationalized form: the plain denominator cancels as theta -> pi/2
        return ch * (root + ch * st) / ct;
    }
    return ch * ct / (root - ch * st);
}

double c_to_theta(double c, const SpheroidGeometry& geom) {
    geom.require_finite("c_to_theta");
    if (!(c > 0.0)) throw DomainError("c_to_theta: c must be positive");
    const double ch2 = geom.cosh_lambda() * geom.cosh_lambda();
    return std::atan((c * c - ch2) / (2.0 * c * ch2));
}

double tangent_distance(double theta, const SpheroidGeometry& geom) {
    geom.require_finite("tangent_distance");
    if (std::abs(theta) > kHalfPi + 1e-15)
        throw DomainError("tangent_distance: |theta| must be <= pi/2");
    const double sh = geom.sinh_lambda();
    const double st = std::sin(theta);
    return std::sqrt(1.0 + sh * sh * st * st) / geom.cosh_lambda();
}

SpherePoint subsphere_point(const SubsphereCoord& coord,
                            const SpheroidGeometry& geom,
                            const std::vector<double>& omega) {
    if (omega.size() != coord.psi.size())
        throw GridMismatch("subsphere_point: omega and psi dimensions differ");
    const double ct = coord.c * geom.tanh_lambda();
    std::vector<double> y(coord.psi.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = coord.c * coord.psi[i] + ct * omega[i];
    return stereo_unproject(y);
}

double measure_factor(const SubsphereCoord& coord,
                      const SpheroidGeometry& geom,
                      const std::vector<double>& omega) {
    if (omega.size() != coord.psi.size())
        throw GridMismatch("measure_factor: omega and psi dimensions differ");
    const int n = geom.dim();
    const double t = geom.tanh_lambda();
    const double c = coord.c;
    const double ratio = (2.0 * c * t) /
        (1.0 + c * c * (1.0 + t * t + 2.0 * dot(omega, coord.psi) * t));
    double out = 1.0;
    for (int k = 0; k < n - 2; ++k) out *= ratio;
    return out;
}

} // namespace sphradon
