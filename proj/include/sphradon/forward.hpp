#ifndef SPHRADON_FORWARD_HPP
#define SPHRADON_FORWARD_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sphradon/geometry.hpp"
#include "sphradon/harmonics.hpp"
#include "sphradon/mellin.hpp"

namespace sphradon {

/// A function on S^{n-1}. Evaluation must be reentrant; the forward sweep
/// calls it from multiple workers.
struct SphereFunction {
    std::function<double(const SpherePoint&)> eval;
    bool continuous_at_north_pole = true;

    double operator()(const SpherePoint& x) const { return eval(x); }
};

/// One term of a radial phantom profile: coeff * r^power * exp(-decay r).
/// Integrable profiles need power >= 1 and decay > 0; the hypothesis gate
/// flags anything else.
struct RadialTerm {
    double coeff = 1.0;
    int power = 2;
    double decay = 1.0;
};

/// Phantom authored in projected coordinates: with y = Lambda(x), r = |y|,
///
///   f(x) = (1 + r^2)^{n-2} sum_modes p_{m,l}(r) Y_l^m(y / r),
///
/// so the harmonic profiles of f o Lambda^{-1} are known exactly:
/// f_{m,l}(r) = (1 + r^2)^{n-2} p_{m,l}(r).
struct PhantomMode {
    HarmonicIndex idx;
    std::vector<RadialTerm> terms;

    double profile(double r) const;
};

struct PhantomSpec {
    int n = 3;
    std::vector<PhantomMode> modes;
};

/// Sinogram: values of the spherical transform on a product grid
/// (psi node) x (log-spaced c).
struct Sinogram {
    int n = 3;
    double tanh_lambda = 0.0; // 1.0 in the slice limit; lambda_inf tells them apart
    bool lambda_inf = false;
    int psi_res = 0;
    LogGrid c_grid;
    std::vector<double> values; // [psi_index * c_count + c_index]

    double& at(std::size_t psi_index, std::size_t c_index) {
        return values[psi_index * c_grid.count + c_index];
    }
    double at(std::size_t psi_index, std::size_t c_index) const {
        return values[psi_index * c_grid.count + c_index];
    }
    SpheroidGeometry geometry() const;
    SphereQuadrature psi_quadrature() const;
};

/// The spherical transform of f over one subsphere, via the projected
/// parametrization and the factorized measure:
///   (Sf)(S_{psi,c}) = sum_omega w f(Lambda^{-1}(c psi + c tanh(l) omega))
///                     * measure_factor(omega).
double spherical_transform(const SphereFunction& f, const SubsphereCoord& coord,
                           const SpheroidGeometry& geom, const SphereQuadrature& quad);

/// Full forward sweep over (psi grid) x (c grid); parallel over psi rows.
Sinogram make_sinogram(const SphereFunction& f, const SpheroidGeometry& geom,
                       const SphereQuadrature& psi_grid, const LogGrid& c_grid,
                       const SphereQuadrature& quad, unsigned threads = 0);

/// Evaluate the phantom on the sphere.
double phantom_eval(const PhantomSpec& spec, const SpherePoint& x);

/// Exact harmonic profile f_{m,l}(r) = (1 + r^2)^{n-2} p_{m,l}(r); zero for
/// modes not present in the spec.
double phantom_profile(const PhantomSpec& spec, const HarmonicIndex& idx, double r);

/// Wraps a phantom as a SphereFunction.
SphereFunction phantom_function(const PhantomSpec& spec);

struct HypothesisReport {
    double value = 0.0;  // the L1-type bound sum_modes |Y|-mass * int |p|
    bool infinite = false;
};

/// Numerical check of the integrability hypothesis behind the inversion of
/// the transform: g(x)/|x|^{n-2} must be L1, which reduces per mode to
/// int_0^inf |p_{m,l}(r)| dr < inf. Divergence beyond r = 1e6 is flagged.
HypothesisReport hypothesis_check(const PhantomSpec& spec);

/// L1 norm of a radial profile on (0, 1e6] with a divergence flag; the
/// building block of hypothesis_check, usable with arbitrary callables.
HypothesisReport profile_l1_norm(const std::function<double(double)>& p);

/// Sinogram text format: `# key = value` headers (n, tanh_lambda with the
/// literal `inf` in the slice limit, psi_res, c grid), then lexicographic
/// rows `psi_index, c_index, value` at 17 significant digits. Reading then
/// writing reproduces the bytes exactly.
void write_sinogram(std::ostream& out, const Sinogram& sino,
                    const std::vector<std::string>& config_echo = {});
void write_sinogram_file(const std::string& path, const Sinogram& sino,
                         const std::vector<std::string>& config_echo = {});

} // namespace sphradon

#endif
