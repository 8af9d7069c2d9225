#ifndef SPHRADON_INVERSION_HPP
#define SPHRADON_INVERSION_HPP

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "sphradon/forward.hpp"
#include "sphradon/geometry.hpp"
#include "sphradon/harmonics.hpp"
#include "sphradon/mellin.hpp"

namespace sphradon {

/// The radial convolution kernel h_{m,lambda} relating the projected data
/// profile K_{m,l} to the harmonic profile g_{m,l} through
/// K(c) = int_0^inf g(c x) h(x) dx. Supported on
/// [1 - tanh(l), 1 + tanh(l)] (slice limit: [0, 2]).
struct KernelSpec {
    int n = 3;
    int m = 0;
    double tanh_lambda = 0.0;
    bool lambda_inf = false;

    KernelSpec(const SpheroidGeometry& geom, int degree);
    double support_lo() const { return lambda_inf ? 0.0 : 1.0 - tanh_lambda; }
    double support_hi() const { return lambda_inf ? 2.0 : 1.0 + tanh_lambda; }
};

/// h_{m,lambda}(x); zero outside the support. For n = 3 the endpoint values
/// are the (integrable) +inf of the inverse square-root factor.
double kernel_h(const KernelSpec& spec, double x);

/// Mellin transform of the kernel at a single point s, Re s > 0.
/// Finite lambda: Gauss quadrature of the smooth pre-substitution form
///   int_0^pi (1 + T^2 + 2 T cos phi)^{(s-1)/2}
///            C_m^{(n-3)/2}((1 + T cos phi)/sqrt(1 + T^2 + 2 T cos phi))
///            sin^{n-3}(phi) dphi.
/// Slice limit: exact evaluation (gamma-function form for n = 3,
/// finite polynomial sum for n = 4).
std::complex<double> kernel_h_mellin_point(const KernelSpec& spec, std::complex<double> s);

/// M(h_{m,lambda}) along the line rho + i b. Throws StripError for rho
/// outside (0, 1).
MellinLine kernel_h_mellin(const KernelSpec& spec, double rho,
                           const std::vector<double>& b_grid);

/// Harmonic projection of a sinogram at fixed degree:
///   K_{m,l}(c_j) = <column j, Y_l^m> / ((2 c_j tanh l)^{n-2} omega_{n-3}).
RadialProfile sinogram_to_K(const Sinogram& sino, const HarmonicIndex& idx);

/// Contour and regularization parameters of the deconvolution stage.
struct ContourParams {
    double T = 200.0;
    double db = 0.05;
    double taper_start_frac = 0.8;
    /// Compensates the truncated c > c_max tail of K with a fitted
    /// A/c + A2/c^2 term (the slice-limit data decays only algebraically).
    bool tail_correction = true;
};

struct RecoverDiagnostics {
    double max_imag_residual = 0.0; // |Im| / max|Re| over the r grid
    bool truncation_risk = false;
    double tail_coeff = 0.0;        // fitted A of A/c
};

/// The deconvolution pipeline of the reconstruction:
///   g_{m,l} = M^{-1}[ M(K)(s) / M(h_{m,lambda})(1 - s) ],
///   f_{m,l}(r) = (1 + r^2)^{n-2} g_{m,l}(r),
/// returned on the same log lattice as K.
RadialProfile recover_profile(const RadialProfile& K, const KernelSpec& spec,
                              double rho, double eps,
                              const ContourParams& contour = {},
                              RecoverDiagnostics* diag = nullptr);

struct ModeProfile {
    HarmonicIndex idx;
    std::vector<double> values;
    double imag_residual = 0.0;
};

/// The recovered harmonic profiles {f_{m,l}} on a shared radial grid.
struct HarmonicSpectrum {
    int n = 3;
    int m_max = 0;
    LogGrid r_grid;
    std::vector<ModeProfile> modes;

    const ModeProfile* find(const HarmonicIndex& idx) const;
};

/// Runs sinogram_to_K + recover_profile for every (m, l) with m <= m_max,
/// in parallel over modes. The radial grid is the c lattice trimmed by one
/// decade on each side (the outer decades absorb truncation ringing).
HarmonicSpectrum reconstruct(const Sinogram& sino, int m_max, double rho,
                             double eps, const ContourParams& contour = {},
                             unsigned threads = 0);

/// f(x) = sum f_{m,l}(|y|) Y_l^m(y/|y|), y = Lambda(x), profiles
/// interpolated log-linearly in r. Radii above the grid throw
/// InterpolationRange; radii below it clamp to the smallest-r sample.
double synthesize(const HarmonicSpectrum& spectrum, const SpherePoint& x);

/// Spectrum text format: `# key = value` headers, then rows
/// `m, l, r, value` at 17 significant digits.
void write_spectrum(std::ostream& out, const HarmonicSpectrum& spec,
                    const std::vector<std::string>& config_echo = {});
void write_spectrum_file(const std::string& path, const HarmonicSpectrum& spec,
                         const std::vector<std::string>& config_echo = {});

namespace detail {
/// log Gamma on C minus the nonpositive integers (Lanczos approximation).
std::complex<double> lgamma_complex(std::complex<double> z);
} // namespace detail

} // namespace sphradon

#endif
