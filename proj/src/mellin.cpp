#include "sphradon/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sphradon {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

void require_strip(double rho, const char* op) {
    if (!(rho > 0.0 && rho < 1.0))
        throw StripError(std::string(op) + ": rho must lie in (0, 1), got " + std::to_string(rho));
}
} // namespace

LogGrid::LogGrid(double rmin, double rmax, int n) : r_min(rmin), r_max(rmax), count(n) {
    if (!(rmin > 0.0) || !(rmax > rmin))
        throw DomainError("LogGrid: need 0 < r_min < r_max");
    if (n < 2) throw DomainError("LogGrid: need at least 2 points");
}

double LogGrid::log_step() const { return std::log(r_max / r_min) / (count - 1); }

double LogGrid::point(int k) const {
    return r_min * std::exp(k * log_step());
}

std::vector<double> LogGrid::points() const {
    std::vector<double> r(count);
    for (int k = 0; k < count; ++k) r[k] = point(k);
    r.back() = r_max;
    return r;
}

double LogGrid::log_extent() const { return std::log(r_max / r_min); }

LogGrid log_grid_from_points(const std::vector<double>& r) {
    if (r.size() < 2) throw GridMismatch("log_grid_from_points: need at least 2 points");
    const int n = static_cast<int>(r.size());
    LogGrid g(r.front(), r.back(), n);
    const double du = g.log_step();
    for (int k = 1; k < n; ++k) {
        if (!(r[k] > r[k - 1]))
            throw GridMismatch("log_grid_from_points: grid must be strictly increasing");
        const double step = std::log(r[k] / r[k - 1]);
        if (std::abs(step - du) > 1e-12 * std::max(1.0, std::abs(du)))
            throw GridMismatch("log_grid_from_points: grid is not log-uniform");
    }
    return g;
}

RadialProfile::RadialProfile(LogGrid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.count)
        throw GridMismatch("RadialProfile: value count does not match grid");
    for (double x : values)
        if (!std::isfinite(x)) throw DomainError("RadialProfile: values must be finite");
}

double RadialProfile::interpolate(double r) const {
    if (!(r > 0.0)) return 0.0;
    const double du = grid.log_step();
    const double pos = std::log(r / grid.r_min) / du;
    if (pos < 0.0 || pos > grid.count - 1) return 0.0;
    const int n = grid.count;
    int i1 = static_cast<int>(std::floor(pos));
    i1 = std::min(std::max(i1, 1), n - 3);
    const double x = pos - i1; // in [-1, 2] near edges, usually [0, 1)
    const double ym1 = values[i1 - 1], y0 = values[i1], y1 = values[i1 + 1], y2 = values[i1 + 2];
    // 4-point Lagrange on the uniform log lattice
    const double c0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
    const double c1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
    const double c2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
    const double c3 = (x + 1.0) * x * (x - 1.0) / 6.0;
    return c0 * ym1 + c1 * y0 + c2 * y1 + c3 * y2;
}

double MellinLine::b_step() const {
    if (b_grid.size() < 2) throw GridMismatch("MellinLine: b grid too small");
    return b_grid[1] - b_grid[0];
}

std::vector<double> make_b_grid(double T, double db) {
    if (!(T > 0.0) || !(db > 0.0)) throw DomainError("make_b_grid: T and db must be positive");
    const int half = static_cast<int>(std::lround(T / db));
    std::vector<double> b(2 * half + 1);
    for (int k = -half; k <= half; ++k) b[k + half] = k * db;
    return b;
}

MellinLine mellin_forward(const RadialProfile& F, double rho,
                          const std::vector<double>& b_grid) {
    require_strip(rho, "mellin_forward");
    if (b_grid.size() < 2) throw GridMismatch("mellin_forward: b grid too small");
    const double db = b_grid[1] - b_grid[0];
    const double nyquist = kPi / F.grid.log_extent();
    if (db > nyquist * (1.0 + 1e-12))
        throw GridMismatch("mellin_forward: b step " + std::to_string(db) +
                           " violates the Nyquist bound pi/log(r_max/r_min) = " +
                           std::to_string(nyquist));

    const int n = F.grid.count;
    const double du = F.grid.log_step();
    // integrand in u = log y is e^{rho u} F(e^u); peak vs endpoint decides
    // whether the grid truncates visible mass
    std::vector<double> base(n), u(n);
    double peak = 0.0;
    for (int k = 0; k < n; ++k) {
        u[k] = std::log(F.grid.r_min) + k * du;
        base[k] = std::exp(rho * u[k]) * F.values[k];
        peak = std::max(peak, std::abs(base[k]));
    }
    const bool risk =
        peak > 0.0 && (std::abs(base.front()) > 1e-12 * peak || std::abs(base.back()) > 1e-12 * peak);
    base.front() *= 0.5; // trapezoid ends
    base.back() *= 0.5;
    MellinLine line;
    line.rho = rho;
    line.b_grid = b_grid;
    line.values.resize(b_grid.size());
    line.truncation_risk = risk;
    for (std::size_t j = 0; j < b_grid.size(); ++j) {
        const double b = b_grid[j];
        double re = 0.0, im = 0.0;
        for (int k = 0; k < n; ++k) {
            re += base[k] * std::cos(b * u[k]);
            im += base[k] * std::sin(b * u[k]);
        }
        line.values[j] = std::complex<double>(re * du, im * du);
    }
    return line;
}

std::complex<double> mellin_point(const RadialProfile& F, std::complex<double> s) {
    if (!(s.real() > 0.0 && s.real() < 1.0))
        throw StripError("mellin_point: Re s must lie in (0, 1)");
    const int n = F.grid.count;
    const double du = F.grid.log_step();
    std::complex<double> acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = std::log(F.grid.r_min) + k * du;
        const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        acc += w * std::exp(s * u) * F.values[k];
    }
    return acc * du;
}

std::complex<double> mellin_inverse_complex(const MellinLine& line, double r) {
    if (!(r > 0.0)) throw DomainError("mellin_inverse: r must be positive");
    const double db = line.b_step();
    const double lr = std::log(r);
    const double amp = std::pow(r, -line.rho);
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < line.b_grid.size(); ++k) {
        // r^{-(rho + i b)} = r^{-rho} e^{-i b log r}
        const double c = std::cos(line.b_grid[k] * lr);
        const double s = -std::sin(line.b_grid[k] * lr);
        const double vr = line.values[k].real();
        const double vi = line.values[k].imag();
        re += c * vr - s * vi;
        im += c * vi + s * vr;
    }
    return std::complex<double>(re, im) * (amp * db / kTwoPi);
}

double mellin_inverse(const MellinLine& line, double r) {
    return mellin_inverse_complex(line, r).real();
}

RadialProfile mellin_convolve(const RadialProfile& F1, const RadialProfile& F2) {
    if (F1.grid.r_max <= F2.grid.r_min || F2.grid.r_max <= F1.grid.r_min)
        throw GridMismatch("mellin_convolve: grids do not overlap");
    const double du2 = F2.grid.log_step();
    std::vector<double> s2 = F2.grid.points();
    std::vector<double> out(F1.grid.count, 0.0);
    const std::vector<double> s1 = F1.grid.points();
    for (int i = 0; i < F1.grid.count; ++i) {
        double acc = 0.0;
        for (int k = 0; k < F2.grid.count; ++k) {
            const double w = (k == 0 || k == F2.grid.count - 1) ? 0.5 : 1.0;
            acc += w * F1.interpolate(s1[i] * s2[k]) * F2.values[k] * s2[k];
        }
        out[i] = acc * du2;
    }
    return RadialProfile(F1.grid, std::move(out));
}

double taper_window(double b, double T, double start_frac) {
    const double ab = std::abs(b);
    const double start = start_frac * T;
    if (ab <= start) return 1.0;
    if (ab >= T) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * (ab - start) / (T - start)));
}

MellinLine deconvolve_line(const MellinLine& numer, const MellinLine& denom,
                           double eps, double taper_start_frac) {
    if (numer.b_grid.size() != denom.b_grid.size())
        throw GridMismatch("deconvolve_line: b grids differ in size");
    for (std::size_t k = 0; k < numer.b_grid.size(); ++k)
        if (std::abs(numer.b_grid[k] - denom.b_grid[k]) > 1e-12)
            throw GridMismatch("deconvolve_line: b grids differ");
    if (eps < 0.0) throw DomainError("deconvolve_line: eps must be >= 0");

    double max_abs2 = 0.0;
    for (const auto& v : denom.values) max_abs2 = std::max(max_abs2, std::norm(v));
    const double reg = eps * eps * max_abs2;
    const double T = std::abs(numer.b_grid.back());

    MellinLine out;
    out.rho = numer.rho;
    out.b_grid = numer.b_grid;
    out.truncation_risk = numer.truncation_risk || denom.truncation_risk;
    out.values.resize(numer.values.size());
    for (std::size_t k = 0; k < numer.values.size(); ++k) {
        const double d2 = std::norm(denom.values[k]);
        const std::complex<double> q =
            numer.values[k] * std::conj(denom.values[k]) / (d2 + reg);
        out.values[k] = q * taper_window(numer.b_grid[k], T, taper_start_frac);
    }
    return out;
}

} // namespace sphradon
