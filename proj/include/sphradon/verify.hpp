#ifndef SPHRADON_VERIFY_HPP
#define SPHRADON_VERIFY_HPP

#include <string>
#include <vector>

namespace sphradon {

/// Outcome of one property suite: worst measured residuals against the
/// suite's tolerance, plus wall time.
struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Tangency of the cutting hyperplanes: plane distance vs tangent_distance,
/// vanishing tangency discriminant, c <-> theta round trip.
SuiteResult verify_geometry(int samples = 500);

/// Factorized measure vs the finite-difference volume element of the
/// subsphere parametrization (n in {3,4,5}), plus the n = 3 circumference.
SuiteResult verify_measure(int samples = 200);

/// Funk-Hecke identity residuals for m <= 10, n in {3, 4}.
SuiteResult verify_funk_hecke(int samples_per_case = 100);

/// Mellin stage: gamma pair on the critical line, inversion round trip,
/// multiplicative convolution identity.
SuiteResult verify_mellin();

/// Kernel: n = 3 integral pi, n = 4 closed forms, slice-limit pointwise.
SuiteResult verify_kernel();

/// The keystone identity: harmonic projection of the forward transform
/// equals int g(c x) h(x) dx, m <= 6, n in {3, 4}.
SuiteResult verify_keystone();

/// All of the above in order.
std::vector<SuiteResult> verify_all();

/// Suites matching a filter name ("geometry", "measure", "funk-hecke",
/// "mellin", "kernel", "keystone", or "all").
std::vector<SuiteResult> verify_suite(const std::string& name);

} // namespace sphradon

#endif
