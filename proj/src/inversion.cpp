#include "sphradon/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "sphradon/parallel.hpp"

namespace sphradon {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
} // namespace

namespace detail {

std::complex<double> lgamma_complex(std::complex<double> z) {
    static const double coef[] = {
        676.5203681218851,     -1259.1392167224028,  771.32342877765313,
        -176.61502916214059,   12.507343278686905,   -0.13857109526572012,
        9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection; blows up (correctly) at the nonpositive integers
        return std::log(kPi / std::sin(kPi * z)) - lgamma_complex(1.0 - z);
    }
    z -= 1.0;
    std::complex<double> a(0.99999999999980993, 0.0);
    for (int i = 0; i < 8; ++i) a += coef[i] / (z + static_cast<double>(i + 1));
    const std::complex<double> t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

} // namespace detail

KernelSpec::KernelSpec(const SpheroidGeometry& geom, int degree)
    : n(geom.dim()), m(degree),
      tanh_lambda(geom.tanh_lambda()), lambda_inf(geom.is_slice_limit()) {
    if (degree < 0) throw DomainError("KernelSpec: degree must be >= 0");
}

double kernel_h(const KernelSpec& spec, double x) {
    if (!(x > 0.0) && !(spec.lambda_inf && x == 0.0))
        throw DomainError("kernel_h: x must be positive");
    const int n = spec.n;
    const GegenbauerOrder order = GegenbauerOrder::for_dimension(n, spec.m);
    if (spec.lambda_inf) {
        if (x > 2.0) return 0.0;
        const double quad = 4.0 - x * x;
        return std::pow(2.0, 4 - n) * std::pow(x, n - 3) *
               std::pow(quad, (n - 4) / 2.0) *
               gegenbauer_normalized(order, std::min(1.0, x / 2.0));
    }
    const double T = spec.tanh_lambda;
    if (x < 1.0 - T || x > 1.0 + T) return 0.0;
    const double arg = std::min(1.0, (x * x + 1.0 - T * T) / (2.0 * x));
    const double quart = (1.0 + T - x) * (1.0 + T + x) * (x - 1.0 + T) * (x + 1.0 - T);
    return std::pow(2.0, 4 - n) * std::pow(T, 3 - n) * x *
           gegenbauer_normalized(order, arg) * std::pow(quart, (n - 4) / 2.0);
}

namespace {

// Legendre coefficients: P_m(y) = sum_j coef[j] y^j
std::vector<double> legendre_coefficients(int m) {
    std::vector<double> p0 = {1.0};
    if (m == 0) return p0;
    std::vector<double> p1 = {0.0, 1.0};
    for (int j = 2; j <= m; ++j) {
        std::vector<double> p2(j + 1, 0.0);
        for (std::size_t k = 0; k < p1.size(); ++k)
            p2[k + 1] += (2.0 * j - 1.0) / j * p1[k];
        for (std::size_t k = 0; k < p0.size(); ++k)
            p2[k] -= (j - 1.0) / j * p0[k];
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    return p1;
}

std::complex<double> slice_mellin(const KernelSpec& spec, std::complex<double> s) {
    using detail::lgamma_complex;
    if (spec.n == 3) {
        // int_0^2 x^{s-1} 2 (4-x^2)^{-1/2} T_m(x/2) dx
        //   = pi Gamma(s) / (Gamma((s+m+1)/2) Gamma((s-m+1)/2))
        const std::complex<double> lg = std::log(std::complex<double>(kPi)) +
            lgamma_complex(s) -
            lgamma_complex((s + 1.0 + static_cast<double>(spec.m)) / 2.0) -
            lgamma_complex((s + 1.0 - static_cast<double>(spec.m)) / 2.0);
        return std::exp(lg);
    }
    // n = 4: h(x) = x P_m(x/2) on [0,2], so
    // M(s) = int_0^2 x^s P_m(x/2) dx = 2^{s+1} sum_j a_j / (s + j + 1)
    const std::vector<double> a = legendre_coefficients(spec.m);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        acc += a[j] / (s + static_cast<double>(j + 1));
    return std::exp((s + 1.0) * std::log(2.0)) * acc;
}

struct PhiNodes {
    std::vector<double> log_half; // (1/2) log(1 + T^2 + 2T cos phi)
    std::vector<double> base;     // weight * C_m(cos xi) * sin^{n-3} phi
};

int phi_node_count(const KernelSpec& spec, double b_max) {
    const double T = spec.tanh_lambda;
    const double swing = b_max * std::log((1.0 + T) / (1.0 - T));
    const double n = 0.7 * swing + 160.0;
    return std::min(20000, std::max(320, static_cast<int>(std::ceil(n))));
}

PhiNodes phi_nodes(const KernelSpec& spec, int count) {
    const double T = spec.tanh_lambda;
    const GegenbauerOrder order = GegenbauerOrder::for_dimension(spec.n, spec.m);
    std::vector<double> xs, ws;
    gauss_legendre(count, xs, ws);
    PhiNodes out;
    out.log_half.resize(count);
    out.base.resize(count);
    for (int i = 0; i < count; ++i) {
        const double phi = (xs[i] + 1.0) * kPi / 2.0;
        const double w = ws[i] * kPi / 2.0;
        const double x2 = 1.0 + T * T + 2.0 * T * std::cos(phi);
        const double cxi = std::min(1.0, (1.0 + T * std::cos(phi)) / std::sqrt(x2));
        out.log_half[i] = 0.5 * std::log(x2);
        out.base[i] = w * gegenbauer_normalized(order, cxi) * std::pow(std::sin(phi), spec.n - 3);
    }
    return out;
}

} // namespace

std::complex<double> kernel_h_mellin_point(const KernelSpec& spec, std::complex<double> s) {
    if (!(s.real() > 0.0))
        throw StripError("kernel_h_mellin_point: Re s must be positive");
    if (spec.lambda_inf) return slice_mellin(spec, s);
    const PhiNodes nodes = phi_nodes(spec, phi_node_count(spec, std::abs(s.imag())));
    std::complex<double> acc = 0.0;
    const std::complex<double> sm1 = s - 1.0;
    for (std::size_t i = 0; i < nodes.base.size(); ++i)
        acc += nodes.base[i] * std::exp(sm1 * nodes.log_half[i]);
    return acc;
}

MellinLine kernel_h_mellin(const KernelSpec& spec, double rho,
                           const std::vector<double>& b_grid) {
    if (!(rho > 0.0 && rho < 1.0))
        throw StripError("kernel_h_mellin: rho must lie in (0, 1)");
    MellinLine line;
    line.rho = rho;
    line.b_grid = b_grid;
    line.values.resize(b_grid.size());
    if (spec.lambda_inf) {
        for (std::size_t k = 0; k < b_grid.size(); ++k)
            line.values[k] = slice_mellin(spec, std::complex<double>(rho, b_grid[k]));
        return line;
    }
    double b_max = 0.0;
    for (double b : b_grid) b_max = std::max(b_max, std::abs(b));
    const PhiNodes nodes = phi_nodes(spec, phi_node_count(spec, b_max));
    const std::size_t nn = nodes.base.size();
    std::vector<double> amp(nn);
    for (std::size_t i = 0; i < nn; ++i)
        amp[i] = nodes.base[i] * std::exp((rho - 1.0) * nodes.log_half[i]);
    for (std::size_t k = 0; k < b_grid.size(); ++k) {
        const double b = b_grid[k];
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            re += amp[i] * std::cos(b * nodes.log_half[i]);
            im += amp[i] * std::sin(b * nodes.log_half[i]);
        }
        line.values[k] = {re, im};
    }
    return line;
}

RadialProfile sinogram_to_K(const Sinogram& sino, const HarmonicIndex& idx) {
    const SphereQuadrature psi = sino.psi_quadrature();
    if (sino.values.size() != psi.size() * static_cast<std::size_t>(sino.c_grid.count))
        throw GridMismatch("sinogram_to_K: value count does not match grids");
    if (idx.m > psi.design_order())
        throw DegreeTooHigh("sinogram_to_K: degree " + std::to_string(idx.m) +
                            " exceeds psi grid design order " +
                            std::to_string(psi.design_order()));
    const double T = sino.tanh_lambda;
    const double omega = sphere_volume(sino.n - 3);
    std::vector<double> yv(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        yv[i] = psi.weights[i] * sph_harm(idx, sino.n, psi.nodes[i]);
    const std::vector<double> cs = sino.c_grid.points();
    std::vector<double> out(sino.c_grid.count);
    for (int j = 0; j < sino.c_grid.count; ++j) {
        double proj = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) proj += yv[i] * sino.at(i, j);
        double denom = omega;
        for (int k = 0; k < sino.n - 2; ++k) denom *= 2.0 * cs[j] * T;
        out[j] = proj / denom;
    }
    return RadialProfile(sino.c_grid, std::move(out));
}

namespace {

// fitted algebraic tail A/c + A2/c^2 over the top half-decade of the grid;
// returns the Mellin contribution of the tail beyond c_max
struct TailFit {
    double A = 0.0, A2 = 0.0;
};

TailFit fit_algebraic_tail(const RadialProfile& K) {
    const double c_max = K.grid.r_max;
    const double lo = c_max / std::sqrt(10.0);
    TailFit fit;
    // least squares on K(c) ~ alpha v + beta v^2, v = c_max / c in [1, sqrt(10)]
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    const std::vector<double> cs = K.grid.points();
    int used = 0;
    for (int k = 0; k < K.grid.count; ++k) {
        if (cs[k] < lo) continue;
        const double v = c_max / cs[k];
        const double v2 = v * v;
        s11 += v * v;
        s12 += v * v2;
        s22 += v2 * v2;
        b1 += v * K.values[k];
        b2 += v2 * K.values[k];
        ++used;
    }
    const double det = s11 * s22 - s12 * s12;
    if (used < 4 || std::abs(det) < 1e-30) return fit;
    const double alpha = (b1 * s22 - b2 * s12) / det;
    const double beta = (b2 * s11 - b1 * s12) / det;
    fit.A = alpha * c_max;
    fit.A2 = beta * c_max * c_max;
    return fit;
}

} // namespace

RadialProfile recover_profile(const RadialProfile& K, const KernelSpec& spec,
                              double rho, double eps,
                              const ContourParams& contour,
                              RecoverDiagnostics* diag) {
    const std::vector<double> b_grid = make_b_grid(contour.T, contour.db);
    MellinLine numer = mellin_forward(K, rho, b_grid);

    if (contour.tail_correction) {
        const TailFit fit = fit_algebraic_tail(K);
        if (fit.A != 0.0 || fit.A2 != 0.0) {
            const double c_max = K.grid.r_max;
            for (std::size_t k = 0; k < b_grid.size(); ++k) {
                const std::complex<double> s(rho, b_grid[k]);
                numer.values[k] += fit.A * std::exp((s - 1.0) * std::log(c_max)) / (1.0 - s);
                numer.values[k] += fit.A2 * std::exp((s - 2.0) * std::log(c_max)) / (2.0 - s);
            }
        }
        if (diag) diag->tail_coeff = fit.A;
    }

    // M(h)(1 - s) on the contour: reflect through conjugation of the line
    // at abscissa 1 - rho (the kernel is real)
    MellinLine denom = kernel_h_mellin(spec, 1.0 - rho, b_grid);
    for (auto& v : denom.values) v = std::conj(v);
    denom.rho = rho;

    const MellinLine quotient = deconvolve_line(numer, denom, eps, contour.taper_start_frac);

    std::vector<double> out(K.grid.count);
    double max_re = 0.0, max_im = 0.0;
    const std::vector<double> rs = K.grid.points();
    for (int k = 0; k < K.grid.count; ++k) {
        const std::complex<double> g = mellin_inverse_complex(quotient, rs[k]);
        double amp = 1.0;
        for (int j = 0; j < spec.n - 2; ++j) amp *= 1.0 + rs[k] * rs[k];
        out[k] = amp * g.real();
        max_re = std::max(max_re, std::abs(g.real()));
        max_im = std::max(max_im, std::abs(g.imag()));
    }
    if (diag) {
        diag->max_imag_residual = max_re > 0.0 ? max_im / max_re : max_im;
        diag->truncation_risk = numer.truncation_risk;
    }
    return RadialProfile(K.grid, std::move(out));
}

const ModeProfile* HarmonicSpectrum::find(const HarmonicIndex& idx) const {
    for (const auto& mode : modes)
        if (mode.idx.m == idx.m && mode.idx.l == idx.l) return &mode;
    return nullptr;
}

HarmonicSpectrum reconstruct(const Sinogram& sino, int m_max, double rho,
                             double eps, const ContourParams& contour,
                             unsigned threads) {
    if (m_max < 0) throw DomainError("reconstruct: m_max must be >= 0");
    if (m_max > sino.psi_quadrature().design_order())
        throw DegreeTooHigh("reconstruct: m_max " + std::to_string(m_max) +
                            " exceeds the psi grid design order " +
                            std::to_string(sino.psi_quadrature().design_order()));
    const SpheroidGeometry geom = sino.geometry();

    HarmonicSpectrum spec;
    spec.n = sino.n;
    spec.m_max = m_max;

    // reporting grid: the c lattice with the outer decade trimmed each side
    const LogGrid& cg = sino.c_grid;
    const double du = cg.log_step();
    const int lo = static_cast<int>(std::ceil(std::log(10.0) / du - 1e-9));
    const int hi = cg.count - 1 - lo;
    if (hi <= lo)
        throw DomainError("reconstruct: c grid too narrow to trim the outer decades");
    spec.r_grid = LogGrid(cg.point(lo), cg.point(hi), hi - lo + 1);

    for (int m = 0; m <= m_max; ++m)
        for (int l = 1; l <= harmonic_count(sino.n, m); ++l)
            spec.modes.push_back({HarmonicIndex{m, l}, {}, 0.0});

    if (threads == 0) threads = default_thread_count();
    std::vector<std::string> errors(spec.modes.size());
    parallel_for(spec.modes.size(), threads, [&](std::size_t k) {
        try {
            ModeProfile& mode = spec.modes[k];
            const RadialProfile K = sinogram_to_K(sino, mode.idx);
            const KernelSpec kspec(geom, mode.idx.m);
            RecoverDiagnostics diag;
            const RadialProfile f = recover_profile(K, kspec, rho, eps, contour, &diag);
            mode.values.assign(f.values.begin() + lo, f.values.begin() + hi + 1);
            mode.imag_residual = diag.max_imag_residual;
        } catch (const Error& e) {
            errors[k] = e.what();
        }
    });
    for (const auto& msg : errors)
        if (!msg.empty()) throw Error("reconstruct: " + msg);
    return spec;
}

double synthesize(const HarmonicSpectrum& spectrum, const SpherePoint& x) {
    if (spectrum.modes.empty()) return 0.0;
    const std::vector<double> y = stereo_project(x);
    double r = norm(y);
    const LogGrid& g = spectrum.r_grid;
    if (r > g.r_max * (1.0 + 1e-12))
        throw InterpolationRange("synthesize: |y| = " + std::to_string(r) +
                                 " beyond the profile grid end " + std::to_string(g.r_max));
    const bool at_origin = r == 0.0;
    std::vector<double> zeta(y.size(), 0.0);
    if (!at_origin)
        for (std::size_t i = 0; i < y.size(); ++i) zeta[i] = y[i] / r;

    // log-linear interpolation with clamping below the grid
    const double pos = std::min(
        static_cast<double>(g.count - 1),
        std::max(0.0, std::log(std::max(r, g.r_min) / g.r_min) / g.log_step()));
    const int i0 = std::min(g.count - 2, static_cast<int>(pos));
    const double w = pos - i0;

    double acc = 0.0;
    for (const auto& mode : spectrum.modes) {
        if (mode.values.empty()) continue;
        if (at_origin && mode.idx.m != 0) continue;
        const double fv = (1.0 - w) * mode.values[i0] + w * mode.values[i0 + 1];
        acc += fv * sph_harm(mode.idx, spectrum.n, zeta);
    }
    return acc;
}

namespace {
std::string format_double17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}
} // namespace

void write_spectrum(std::ostream& out, const HarmonicSpectrum& spec,
                    const std::vector<std::string>& config_echo) {
    out << "# n = " << spec.n << "\n";
    out << "# m_max = " << spec.m_max << "\n";
    out << "# r_min = " << format_double17(spec.r_grid.r_min) << "\n";
    out << "# r_max = " << format_double17(spec.r_grid.r_max) << "\n";
    out << "# r_count = " << spec.r_grid.count << "\n";
    for (const auto& line : config_echo) out << "# " << line << "\n";
    out << "# m, l, r, value\n";
    const std::vector<double> rs = spec.r_grid.points();
    for (const auto& mode : spec.modes)
        for (int k = 0; k < spec.r_grid.count; ++k)
            out << mode.idx.m << ", " << mode.idx.l << ", " << format_double17(rs[k])
                << ", " << format_double17(mode.values.empty() ? 0.0 : mode.values[k]) << "\n";
}

void write_spectrum_file(const std::string& path, const HarmonicSpectrum& spec,
                         const std::vector<std::string>& config_echo) {
    std::ofstream out(path);
    if (!out) throw IoError("write_spectrum_file: cannot open " + path);
    write_spectrum(out, spec, config_echo);
    if (!out) throw IoError("write_spectrum_file: write failed for " + path);
}

} // namespace sphradon
