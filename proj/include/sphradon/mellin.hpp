#ifndef SPHRADON_MELLIN_HPP
#define SPHRADON_MELLIN_HPP

#include <complex>
#include <vector>

#include "sphradon/errors.hpp"

namespace sphradon {

/// Strictly increasing log-uniform grid on (0, inf).
struct LogGrid {
    double r_min = 1e-3;
    double r_max = 1e3;
    int count = 4096;

    LogGrid() = default;
    LogGrid(double rmin, double rmax, int n);

    double log_step() const;
    double point(int k) const;
    std::vector<double> points() const;
    double log_extent() const; // log(r_max / r_min)

    bool operator==(const LogGrid& o) const {
        return r_min == o.r_min && r_max == o.r_max && count == o.count;
    }
};

/// Validates that raw points form a log-uniform grid (1e-12 relative) and
/// returns the matching LogGrid.
LogGrid log_grid_from_points(const std::vector<double>& r);

/// Real samples of a function of r > 0 on a log-uniform grid.
struct RadialProfile {
    LogGrid grid;
    std::vector<double> values;

    RadialProfile() = default;
    RadialProfile(LogGrid g, std::vector<double> v);

    /// Piecewise-cubic Lagrange interpolation in log r; zero outside the grid.
    double interpolate(double r) const;
};

/// Complex samples of a Mellin transform along the vertical line rho + i b,
/// b on a symmetric uniform grid.
struct MellinLine {
    double rho = 0.5;
    std::vector<double> b_grid;
    std::vector<std::complex<double>> values;
    bool truncation_risk = false; // grid endpoints carried non-negligible mass

    double b_step() const;
};

/// Symmetric uniform grid b = -T..T with step db (T is rounded to a
/// multiple of db).
std::vector<double> make_b_grid(double T, double db);

/// M F(s) = int_0^inf y^{s-1} F(y) dy, evaluated as a Riemann sum in
/// u = log y on the profile grid. Throws StripError for rho outside (0,1)
/// and GridMismatch when db violates the Nyquist bound
/// db <= pi / log(r_max / r_min). Sets truncation_risk when
/// |y^{rho-1} F(y)| at a grid end exceeds 1e-12 of its peak.
MellinLine mellin_forward(const RadialProfile& F, double rho,
                          const std::vector<double>& b_grid);

/// Mellin transform value at a single point s (same quadrature).
std::complex<double> mellin_point(const RadialProfile& F, std::complex<double> s);

/// Truncated contour inversion
///   (1 / 2 pi) sum_k r^{-(rho + i b_k)} values_k db.
/// The real part is the inverse; the imaginary part is returned so callers
/// can report the residual.
std::complex<double> mellin_inverse_complex(const MellinLine& line, double r);
double mellin_inverse(const MellinLine& line, double r);

/// Multiplicative convolution (F1 * F2)(s) = int_0^inf F1(s s') F2(s') ds',
/// evaluated on F1's grid with F2 supplying the quadrature.
RadialProfile mellin_convolve(const RadialProfile& F1, const RadialProfile& F2);

/// Raised-cosine frequency window: 1 for |b| <= start, falling to 0 at T.
double taper_window(double b, double T, double start_frac);

/// Wiener-regularized spectral division with a raised-cosine taper:
///   out = numer conj(denom) / (|denom|^2 + eps^2 max|denom|^2) W(b).
MellinLine deconvolve_line(const MellinLine& numer, const MellinLine& denom,
                           double eps, double taper_start_frac = 0.8);

} // namespace sphradon

#endif
