#ifndef SPHRADON_CLI_HPP
#define SPHRADON_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sphradon/forward.hpp"
#include "sphradon/inversion.hpp"

namespace sphradon {

/// Exit-code contract shared with the acceptance scripts.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitHypothesis = 3,
    kExitIo = 4,
    kExitWarning = 5,
};

/// Resolved options of one command invocation. Defaults mirror the library
/// defaults; a key=value config file and command-line flags both land here.
struct RunConfig {
    std::string command;

    int n = 3;
    double lambda = 1.0;
    bool lambda_inf = false;

    int psi_res = 256;
    double c_min = 1e-3;
    double c_max = 1e3;
    int c_count = 4096;
    int quad_res = 0; // subsphere quadrature; 0 = same as psi_res

    int m_max = 4;
    double rho = 0.5;
    double eps = 1e-6;
    double contour_T = 200.0;
    double contour_db = 0.05;
    bool tail_correction = true;

    std::string in_path;
    std::string out_path;
    std::string profile_out_path; // exact-profile table (cmd_phantom)
    std::string report_path;      // per-mode error CSV (cmd_invert)
    std::string reference_path;   // phantom file for the error report
    std::string phantom_descriptor;
    std::string suite = "all";

    double eval_r_lo = 0.2; // radial window of the error report
    double eval_r_hi = 5.0;

    unsigned threads = 0;
    bool warn_as_error = false;

    /// Applies `key = value` lines (# comments allowed). Unknown keys throw
    /// DomainError.
    void apply_file(const std::string& path);
    void apply_pair(const std::string& key, const std::string& value);

    SpheroidGeometry geometry() const;
    LogGrid c_grid() const;
    std::vector<std::string> echo_lines() const;
};

/// Phantom descriptor: semicolon-separated modes
///   "m,l: coeff,power,decay [, coeff,power,decay ...]".
/// An empty descriptor yields the default single-mode phantom.
PhantomSpec parse_phantom_descriptor(int n, const std::string& descriptor);

/// The default four-mode phantom used by the documentation and the
/// acceptance runs (degrees 0, 1, 2, 4 active).
PhantomSpec default_acceptance_phantom(int n);

// file formats -------------------------------------------------------------

void write_phantom(std::ostream& out, const PhantomSpec& spec,
                   const std::vector<std::string>& config_echo = {});
void write_phantom_file(const std::string& path, const PhantomSpec& spec,
                        const std::vector<std::string>& config_echo = {});
PhantomSpec read_phantom(std::istream& in);
PhantomSpec read_phantom_file(const std::string& path);

Sinogram read_sinogram(std::istream& in);
Sinogram read_sinogram_file(const std::string& path);

HarmonicSpectrum read_spectrum(std::istream& in);
HarmonicSpectrum read_spectrum_file(const std::string& path);

// commands ------------------------------------------------------------------

/// Writes the phantom file and its exact-profile table. Exit 3 when the
/// phantom fails the integrability gate.
int cmd_phantom(const RunConfig& cfg, std::ostream& log);

/// Reads a phantom file and writes the sinogram of its spherical transform.
int cmd_forward(const RunConfig& cfg, std::ostream& log);

/// Reads a sinogram, reconstructs the harmonic spectrum, optionally writes
/// the per-mode error report against a reference phantom.
int cmd_invert(const RunConfig& cfg, std::ostream& log);

/// Runs the property suites and prints one pass/fail line per suite.
int cmd_verify(const RunConfig& cfg, std::ostream& log);

int run_command(const RunConfig& cfg, std::ostream& log);

} // namespace sphradon

#endif
