#ifndef SPHRADON_GEOMETRY_HPP
#define SPHRADON_GEOMETRY_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "sphradon/errors.hpp"

namespace sphradon {

/// Ambient geometry: the unit sphere S^{n-1} together with the inscribed
/// spheroid
///
///     x_n^2 + (x_1^2 + ... + x_{n-1}^2) cosh^2(lambda) = 1,
///
/// which touches the sphere at +-e_n. The integration subspheres are the
/// intersections of S^{n-1} with hyperplanes tangent to the spheroid.
/// lambda = +infinity is the slice-transform limit: the spheroid collapses
/// onto its main axis and every subsphere passes through the south pole.
class SpheroidGeometry {
public:
    SpheroidGeometry(int n, double lambda);

    /// The lambda -> infinity limit (tanh lambda := 1).
    static SpheroidGeometry slice_limit(int n);

    /// Rebuild from a stored tanh(lambda) value in (0, 1].
    static SpheroidGeometry from_tanh(int n, double tanh_lambda);

    int dim() const { return n_; }
    double lambda() const { return lambda_; }
    bool is_slice_limit() const { return std::isinf(lambda_); }

    double tanh_lambda() const { return tanh_; }
    // cosh/sinh are meaningless in the slice limit; guarded at the call sites
    // that need a finite spheroid.
    double cosh_lambda() const { return cosh_; }
    double sinh_lambda() const { return sinh_; }

    void require_finite(const char* op) const;

private:
    int n_;
    double lambda_;
    double tanh_, cosh_, sinh_;
};

/// A point on S^{n-1}, stored as its ambient coordinates.
struct SpherePoint {
    std::vector<double> coords;

    explicit SpherePoint(std::vector<double> c);
    int ambient_dim() const { return static_cast<int>(coords.size()); }
    double last() const { return coords.back(); }
};

/// One integration subsphere: direction psi on S^{n-2} (a unit vector in
/// R^{n-1}) and scale c > 0. The tangent angle theta of the cutting
/// hyperplane is derived from c when the spheroid is finite.
struct SubsphereCoord {
    std::vector<double> psi;
    double c;

    SubsphereCoord(std::vector<double> psi_, double c_);
};

/// Stereographic projection from the north pole:
/// (x_1, ..., x_n) -> (x_1, ..., x_{n-1}) / (1 - x_n).
/// Throws NorthPoleSingular when 1 - x_n <= 1e-14.
std::vector<double> stereo_project(const SpherePoint& x);

/// Inverse stereographic projection:
/// y -> (2y, |y|^2 - 1) / (1 + |y|^2). Total on R^{n-1}.
SpherePoint stereo_unproject(const std::vector<double>& y);

/// Scale of the subsphere cut by the tangent hyperplane whose normal makes
/// angle theta with the equatorial plane:
///
///   c = cosh(l) cos(t) / (sqrt(1 + sinh^2(l) sin^2(t)) - cosh(l) sin(t)).
///
/// Strictly increasing on (-pi/2, pi/2); c(0) = cosh(lambda).
double theta_to_c(double theta, const SpheroidGeometry& geom);

/// Inverse of theta_to_c:
///   theta = arctan((c^2 - cosh^2(l)) / (2 c cosh^2(l))).
double c_to_theta(double c, const SpheroidGeometry& geom);

/// Distance from the origin of the hyperplane tangent to the spheroid with
/// unit normal ((cos theta) psi, sin theta):
///   t = sqrt(1 + sinh^2(lambda) sin^2(theta)) / cosh(lambda), in (0, 1].
double tangent_distance(double theta, const SpheroidGeometry& geom);

/// Point of the subsphere: Lambda^{-1}(c psi + c tanh(lambda) omega),
/// omega a unit vector in R^{n-1}.
SpherePoint subsphere_point(const SubsphereCoord& coord,
                            const SpheroidGeometry& geom,
                            const std::vector<double>& omega);

/// Volume element of the subsphere in the omega parametrization:
///
///   dS = (2 c tanh l)^{n-2}
///        / (1 + c^2 (1 + tanh^2 l + 2 <omega, psi> tanh l))^{n-2} domega.
double measure_factor(const SubsphereCoord& coord,
                      const SpheroidGeometry& geom,
                      const std::vector<double>& omega);

// small vector helpers shared across modules
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm(const std::vector<double>& a);

} // namespace sphradon

#endif
