#include "sphradon/forward.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sphradon/parallel.hpp"

namespace sphradon {

double PhantomMode::profile(double r) const {
    double acc = 0.0;
    for (const auto& t : terms)
        acc += t.coeff * std::pow(r, t.power) * std::exp(-t.decay * r);
    return acc;
}

SpheroidGeometry Sinogram::geometry() const {
    if (lambda_inf) return SpheroidGeometry::slice_limit(n);
    return SpheroidGeometry::from_tanh(n, tanh_lambda);
}

SphereQuadrature Sinogram::psi_quadrature() const { return sphere_quadrature(n, psi_res); }

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// In the slice limit the subsphere passes through the south pole at
// omega = -psi, where the integrand has a corner (|c psi + c omega| is not
// smooth there) and, for large c, a boundary layer of width ~1/c. A uniform
// grid converges only algebraically across it, so the slice sweep uses
// Gauss panels aligned with the corner; node counts grow like sqrt(c).
struct OmegaRule {
    std::vector<std::vector<double>> nodes;
    std::vector<double> weights;
};

int slice_half_count(int resolution, double c) {
    const int boundary = static_cast<int>(std::ceil(8.0 * std::sqrt(std::max(1.0, c)))) + 32;
    return std::max(resolution / 2, boundary);
}

// orthonormal u, v spanning the plane orthogonal to w in R^3
void orthonormal_pair(const std::vector<double>& w, std::vector<double>& u,
                      std::vector<double>& v) {
    if (std::abs(w[0]) <= std::abs(w[1]) && std::abs(w[0]) <= std::abs(w[2]))
        u = {0.0, -w[2], w[1]};
    else if (std::abs(w[1]) <= std::abs(w[2]))
        u = {-w[2], 0.0, w[0]};
    else
        u = {-w[1], w[0], 0.0};
    const double un = norm(u);
    for (auto& x : u) x /= un;
    v = {w[1] * u[2] - w[2] * u[1], w[2] * u[0] - w[0] * u[2], w[0] * u[1] - w[1] * u[0]};
}

OmegaRule aligned_slice_rule(int n, int resolution, const std::vector<double>& psi,
                             const std::vector<double>& gl_x, const std::vector<double>& gl_w) {
    OmegaRule rule;
    if (n == 3) {
        const double phi0 = std::atan2(psi[1], psi[0]);
        const std::size_t half = gl_x.size();
        rule.nodes.reserve(2 * half);
        rule.weights.reserve(2 * half);
        for (int panel = 0; panel < 2; ++panel) {
            const double lo = phi0 + panel * kPi;
            for (std::size_t i = 0; i < half; ++i) {
                const double alpha = lo + (gl_x[i] + 1.0) * kPi / 2.0;
                rule.nodes.push_back({std::cos(alpha), std::sin(alpha)});
                rule.weights.push_back(gl_w[i] * kPi / 2.0);
            }
        }
        return rule;
    }
    // n = 4: polar Gauss grid with its axis at -psi so the corner sits at
    // the clustered endpoint of the Gauss nodes
    std::vector<double> w = {-psi[0], -psi[1], -psi[2]}, u, v;
    orthonormal_pair(w, u, v);
    const int naz = 2 * resolution;
    rule.nodes.reserve(gl_x.size() * naz);
    rule.weights.reserve(rule.nodes.capacity());
    for (std::size_t i = 0; i < gl_x.size(); ++i) {
        const double ct = gl_x[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double wt = gl_w[i] * (2.0 * kPi / naz);
        for (int j = 0; j < naz; ++j) {
            const double phi = 2.0 * kPi * j / naz;
            std::vector<double> node(3);
            for (int k = 0; k < 3; ++k)
                node[k] = st * (std::cos(phi) * u[k] + std::sin(phi) * v[k]) + ct * w[k];
            rule.nodes.push_back(std::move(node));
            rule.weights.push_back(wt);
        }
    }
    return rule;
}

int slice_polar_count(int resolution, double c) {
    return std::max(resolution,
                    static_cast<int>(std::ceil(6.0 * std::sqrt(std::max(1.0, c)))) + 16);
}

double transform_with_rule(const SphereFunction& f, const SubsphereCoord& coord,
                           const SpheroidGeometry& geom, const OmegaRule& rule) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const SpherePoint x = subsphere_point(coord, geom, rule.nodes[i]);
        acc += rule.weights[i] * f(x) * measure_factor(coord, geom, rule.nodes[i]);
    }
    return acc;
}

OmegaRule slice_rule_for(int n, int resolution, const std::vector<double>& psi, double c) {
    std::vector<double> gl_x, gl_w;
    if (n == 3) {
        gauss_legendre(slice_half_count(resolution, c), gl_x, gl_w);
    } else {
        gauss_legendre(slice_polar_count(resolution, c), gl_x, gl_w);
    }
    return aligned_slice_rule(n, resolution, psi, gl_x, gl_w);
}

} // namespace

double spherical_transform(const SphereFunction& f, const SubsphereCoord& coord,
                           const SpheroidGeometry& geom, const SphereQuadrature& quad) {
    if (static_cast<int>(coord.psi.size()) != geom.dim() - 1)
        throw GridMismatch("spherical_transform: psi dimension does not match geometry");
    if (geom.is_slice_limit()) {
        const OmegaRule rule =
            slice_rule_for(geom.dim(), quad.resolution, coord.psi, coord.c);
        return transform_with_rule(f, coord, geom, rule);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
        const SpherePoint x = subsphere_point(coord, geom, quad.nodes[i]);
        acc += quad.weights[i] * f(x) * measure_factor(coord, geom, quad.nodes[i]);
    }
    return acc;
}

Sinogram make_sinogram(const SphereFunction& f, const SpheroidGeometry& geom,
                       const SphereQuadrature& psi_grid, const LogGrid& c_grid,
                       const SphereQuadrature& quad, unsigned threads) {
    Sinogram sino;
    sino.n = geom.dim();
    sino.tanh_lambda = geom.tanh_lambda();
    sino.lambda_inf = geom.is_slice_limit();
    sino.psi_res = psi_grid.resolution;
    sino.c_grid = c_grid;
    sino.values.assign(psi_grid.size() * static_cast<std::size_t>(c_grid.count), 0.0);
    const std::vector<double> cs = c_grid.points();
    if (threads == 0) threads = default_thread_count();

    if (geom.is_slice_limit()) {
        // Gauss tables per distinct node count, shared read-only by workers
        std::vector<int> counts(c_grid.count);
        std::map<int, std::pair<std::vector<double>, std::vector<double>>> tables;
        for (int j = 0; j < c_grid.count; ++j) {
            counts[j] = geom.dim() == 3 ? slice_half_count(quad.resolution, cs[j])
                                        : slice_polar_count(quad.resolution, cs[j]);
            auto& table = tables[counts[j]];
            if (table.first.empty()) gauss_legendre(counts[j], table.first, table.second);
        }
        parallel_for(psi_grid.size(), threads, [&](std::size_t i) {
            for (int j = 0; j < c_grid.count; ++j) {
                const auto& table = tables.at(counts[j]);
                const OmegaRule rule = aligned_slice_rule(
                    geom.dim(), quad.resolution, psi_grid.nodes[i],
                    table.first, table.second);
                const SubsphereCoord coord(psi_grid.nodes[i], cs[j]);
                sino.at(i, j) = transform_with_rule(f, coord, geom, rule);
            }
        });
        return sino;
    }

    parallel_for(psi_grid.size(), threads, [&](std::size_t i) {
        for (int j = 0; j < c_grid.count; ++j) {
            const SubsphereCoord coord(psi_grid.nodes[i], cs[j]);
            sino.at(i, j) = spherical_transform(f, coord, geom, quad);
        }
    });
    return sino;
}

double phantom_eval(const PhantomSpec& spec, const SpherePoint& x) {
    const std::vector<double> y = stereo_project(x);
    const double r = norm(y);
    if (spec.modes.empty()) return 0.0;
    double acc = 0.0;
    if (r == 0.0) {
        // only the constant harmonic survives at the origin, and p(0) = 0
        // for integrable profiles; evaluate the limit directly
        for (const auto& mode : spec.modes)
            if (mode.idx.m == 0)
                acc += mode.profile(0.0) * sph_harm(mode.idx, spec.n, std::vector<double>(y.size(), 0.0));
        return acc;
    }
    std::vector<double> zeta(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) zeta[i] = y[i] / r;
    for (const auto& mode : spec.modes)
        acc += mode.profile(r) * sph_harm(mode.idx, spec.n, zeta);
    double amp = 1.0;
    for (int k = 0; k < spec.n - 2; ++k) amp *= 1.0 + r * r;
    return amp * acc;
}

double phantom_profile(const PhantomSpec& spec, const HarmonicIndex& idx, double r) {
    double p = 0.0;
    for (const auto& mode : spec.modes)
        if (mode.idx.m == idx.m && mode.idx.l == idx.l) p += mode.profile(r);
    double amp = 1.0;
    for (int k = 0; k < spec.n - 2; ++k) amp *= 1.0 + r * r;
    return amp * p;
}

SphereFunction phantom_function(const PhantomSpec& spec) {
    SphereFunction f;
    f.eval = [spec](const SpherePoint& x) { return phantom_eval(spec, x); };
    f.continuous_at_north_pole = true;
    return f;
}

HypothesisReport profile_l1_norm(const std::function<double(double)>& p) {
    HypothesisReport rep;
    // log-uniform trapezoid over (1e-9, 1e6]; decade contributions expose a
    // non-integrable tail
    const int per_decade = 256;
    const double lg10 = std::log(10.0);
    double last_decade = 0.0;
    double total = 0.0;
    for (int d = -9; d < 6; ++d) {
        double contrib = 0.0;
        for (int k = 0; k <= per_decade; ++k) {
            const double u = d * lg10 + k * lg10 / per_decade;
            const double r = std::exp(u);
            const double w = (k == 0 || k == per_decade) ? 0.5 : 1.0;
            contrib += w * std::abs(p(r)) * r * (lg10 / per_decade);
        }
        total += contrib;
        last_decade = contrib;
    }
    rep.value = total;
    const double tail_point = 1e6 * std::abs(p(1e6));
    rep.infinite = (total > 0.0 && last_decade > 1e-6 * total) || tail_point > 1e-9 * (total + 1e-300);
    return rep;
}

HypothesisReport hypothesis_check(const PhantomSpec& spec) {
    HypothesisReport rep;
    if (spec.modes.empty()) return rep;
    const SphereQuadrature quad = sphere_quadrature(spec.n, spec.n == 3 ? 256 : 48);
    for (const auto& mode : spec.modes) {
        const HypothesisReport one = profile_l1_norm([&mode](double r) { return mode.profile(r); });
        // |Y| mass over the sphere multiplies the radial L1 norm
        double ymass = 0.0;
        for (std::size_t i = 0; i < quad.size(); ++i)
            ymass += quad.weights[i] * std::abs(sph_harm(mode.idx, spec.n, quad.nodes[i]));
        rep.value += ymass * one.value;
        rep.infinite = rep.infinite || one.infinite;
    }
    return rep;
}

namespace {
std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}
} // namespace

void write_sinogram(std::ostream& out, const Sinogram& sino,
                    const std::vector<std::string>& config_echo) {
    out << "# n = " << sino.n << "\n";
    if (sino.lambda_inf)
        out << "# tanh_lambda = inf\n";
    else
        out << "# tanh_lambda = " << format_double(sino.tanh_lambda) << "\n";
    out << "# psi_res = " << sino.psi_res << "\n";
    out << "# c_min = " << format_double(sino.c_grid.r_min) << "\n";
    out << "# c_max = " << format_double(sino.c_grid.r_max) << "\n";
    out << "# c_count = " << sino.c_grid.count << "\n";
    out << "# c_spacing = log-uniform\n";
    for (const auto& line : config_echo) out << "# " << line << "\n";
    const std::size_t rows = sino.values.size() / sino.c_grid.count;
    for (std::size_t i = 0; i < rows; ++i)
        for (int j = 0; j < sino.c_grid.count; ++j)
            out << i << ", " << j << ", " << format_double(sino.at(i, j)) << "\n";
}

void write_sinogram_file(const std::string& path, const Sinogram& sino,
                         const std::vector<std::string>& config_echo) {
    std::ofstream out(path);
    if (!out) throw IoError("write_sinogram_file: cannot open " + path);
    write_sinogram(out, sino, config_echo);
    if (!out) throw IoError("write_sinogram_file: write failed for " + path);
}

} // namespace sphradon
