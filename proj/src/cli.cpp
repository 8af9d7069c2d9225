#include "sphradon/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sphradon/verify.hpp"

namespace sphradon {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw DomainError("config: cannot parse '" + v + "' for key " + key);
    }
}

int parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw DomainError("config: cannot parse '" + v + "' for key " + key);
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw DomainError("config: cannot parse '" + v + "' for key " + key);
}

std::string format_double17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

} // namespace

void RunConfig::apply_pair(const std::string& rawkey, const std::string& rawvalue) {
    const std::string key = trim(rawkey);
    const std::string value = trim(rawvalue);
    if (key == "command") command = value;
    else if (key == "n") n = parse_int(value, key);
    else if (key == "lambda") {
        if (value == "inf") { lambda_inf = true; lambda = 0.0; }
        else { lambda_inf = false; lambda = parse_double(value, key); }
    }
    else if (key == "psi_res" || key == "psi-res") psi_res = parse_int(value, key);
    else if (key == "c_min" || key == "c-min") c_min = parse_double(value, key);
    else if (key == "c_max" || key == "c-max") c_max = parse_double(value, key);
    else if (key == "c_count" || key == "c-count") c_count = parse_int(value, key);
    else if (key == "quad_res" || key == "quad-res") quad_res = parse_int(value, key);
    else if (key == "m_max" || key == "m-max") m_max = parse_int(value, key);
    else if (key == "rho") rho = parse_double(value, key);
    else if (key == "eps") eps = parse_double(value, key);
    else if (key == "contour_T" || key == "contour-T") contour_T = parse_double(value, key);
    else if (key == "contour_db" || key == "contour-db") contour_db = parse_double(value, key);
    else if (key == "tail_correction") tail_correction = parse_bool(value, key);
    else if (key == "in") in_path = value;
    else if (key == "out") out_path = value;
    else if (key == "profile_out") profile_out_path = value;
    else if (key == "report") report_path = value;
    else if (key == "reference") reference_path = value;
    else if (key == "phantom") phantom_descriptor = value;
    else if (key == "suite") suite = value;
    else if (key == "eval_r_lo") eval_r_lo = parse_double(value, key);
    else if (key == "eval_r_hi") eval_r_hi = parse_double(value, key);
    else if (key == "threads") threads = static_cast<unsigned>(parse_int(value, key));
    else if (key == "warn_as_error") warn_as_error = parse_bool(value, key);
    else throw DomainError("config: unknown key '" + key + "'");
}

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: expected key = value, got '" + t + "'");
        apply_pair(t.substr(0, eq), t.substr(eq + 1));
    }
}

SpheroidGeometry RunConfig::geometry() const {
    if (lambda_inf) return SpheroidGeometry::slice_limit(n);
    return SpheroidGeometry(n, lambda);
}

LogGrid RunConfig::c_grid() const { return LogGrid(c_min, c_max, c_count); }

std::vector<std::string> RunConfig::echo_lines() const {
    std::vector<std::string> out;
    out.push_back("command = " + command);
    out.push_back("lambda = " + (lambda_inf ? std::string("inf") : format_double17(lambda)));
    out.push_back("quad_res = " + std::to_string(quad_res == 0 ? psi_res : quad_res));
    out.push_back("m_max = " + std::to_string(m_max));
    out.push_back("rho = " + format_double17(rho));
    out.push_back("eps = " + format_double17(eps));
    out.push_back("contour_T = " + format_double17(contour_T));
    out.push_back("contour_db = " + format_double17(contour_db));
    out.push_back("tail_correction = " + std::string(tail_correction ? "true" : "false"));
    if (!phantom_descriptor.empty()) out.push_back("phantom = " + phantom_descriptor);
    if (!in_path.empty()) out.push_back("in = " + in_path);
    if (!reference_path.empty()) out.push_back("reference = " + reference_path);
    return out;
}

PhantomSpec parse_phantom_descriptor(int n, const std::string& descriptor) {
    if (descriptor.empty()) {
        PhantomSpec spec;
        spec.n = n;
        spec.modes.push_back({HarmonicIndex{0, 1}, {RadialTerm{1.0, 2, 1.0}}});
        return spec;
    }
    PhantomSpec spec;
    spec.n = n;
    for (const std::string& mode_str : split(descriptor, ';')) {
        if (mode_str.empty()) continue;
        const auto colon = mode_str.find(':');
        if (colon == std::string::npos)
            throw DomainError("phantom descriptor: expected 'm,l: terms', got '" + mode_str + "'");
        const auto head = split(mode_str.substr(0, colon), ',');
        if (head.size() != 2)
            throw DomainError("phantom descriptor: bad mode index '" + mode_str + "'");
        PhantomMode mode;
        mode.idx.m = parse_int(head[0], "phantom m");
        mode.idx.l = parse_int(head[1], "phantom l");
        if (mode.idx.m < 0 || mode.idx.l < 1 || mode.idx.l > harmonic_count(n, mode.idx.m))
            throw DomainError("phantom descriptor: invalid mode (" + head[0] + "," + head[1] + ")");
        const auto nums = split(mode_str.substr(colon + 1), ',');
        if (nums.empty() || nums.size() % 3 != 0)
            throw DomainError("phantom descriptor: terms must come as coeff,power,decay triples");
        for (std::size_t k = 0; k < nums.size(); k += 3) {
            RadialTerm term;
            term.coeff = parse_double(nums[k], "phantom coeff");
            term.power = parse_int(nums[k + 1], "phantom power");
            term.decay = parse_double(nums[k + 2], "phantom decay");
            mode.terms.push_back(term);
        }
        spec.modes.push_back(std::move(mode));
    }
    return spec;
}

PhantomSpec default_acceptance_phantom(int n) {
    PhantomSpec spec;
    spec.n = n;
    spec.modes.push_back({HarmonicIndex{0, 1}, {RadialTerm{1.0, 2, 1.0}}});
    spec.modes.push_back({HarmonicIndex{1, 1}, {RadialTerm{0.8, 3, 1.5}}});
    spec.modes.push_back({HarmonicIndex{2, 2}, {RadialTerm{0.7, 2, 2.0}, RadialTerm{0.2, 4, 2.0}}});
    spec.modes.push_back({HarmonicIndex{4, 1}, {RadialTerm{0.5, 3, 1.2}}});
    return spec;
}

void write_phantom(std::ostream& out, const PhantomSpec& spec,
                   const std::vector<std::string>& config_echo) {
    out << "# n = " << spec.n << "\n";
    out << "# mode_count = " << spec.modes.size() << "\n";
    for (const auto& line : config_echo) out << "# " << line << "\n";
    out << "# m, l, coeff, power, decay\n";
    for (const auto& mode : spec.modes)
        for (const auto& t : mode.terms)
            out << mode.idx.m << ", " << mode.idx.l << ", " << format_double17(t.coeff)
                << ", " << t.power << ", " << format_double17(t.decay) << "\n";
}

void write_phantom_file(const std::string& path, const PhantomSpec& spec,
                        const std::vector<std::string>& config_echo) {
    std::ofstream out(path);
    if (!out) throw IoError("write_phantom_file: cannot open " + path);
    write_phantom(out, spec, config_echo);
}

namespace {

// shared `# key = value` header parsing; data rows go to `rows`
struct ParsedText {
    std::vector<std::pair<std::string, std::string>> headers;
    std::vector<std::string> rows;

    std::string value(const std::string& key) const {
        for (const auto& [k, v] : headers)
            if (k == key) return v;
        throw IoError("file: missing header '" + key + "'");
    }
};

ParsedText parse_text(std::istream& in) {
    ParsedText out;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto eq = t.find('=');
            if (eq != std::string::npos)
                out.headers.emplace_back(trim(t.substr(1, eq - 1)), trim(t.substr(eq + 1)));
            continue;
        }
        out.rows.push_back(t);
    }
    return out;
}

} // namespace

PhantomSpec read_phantom(std::istream& in) {
    const ParsedText text = parse_text(in);
    PhantomSpec spec;
    spec.n = parse_int(text.value("n"), "n");
    for (const auto& row : text.rows) {
        const auto cols = split(row, ',');
        if (cols.size() != 5) throw IoError("phantom file: expected 5 columns, got '" + row + "'");
        const HarmonicIndex idx{parse_int(cols[0], "m"), parse_int(cols[1], "l")};
        RadialTerm term{parse_double(cols[2], "coeff"), parse_int(cols[3], "power"),
                        parse_double(cols[4], "decay")};
        PhantomMode* mode = nullptr;
        for (auto& m : spec.modes)
            if (m.idx.m == idx.m && m.idx.l == idx.l) mode = &m;
        if (!mode) {
            spec.modes.push_back({idx, {}});
            mode = &spec.modes.back();
        }
        mode->terms.push_back(term);
    }
    return spec;
}

PhantomSpec read_phantom_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_phantom_file: cannot open " + path);
    return read_phantom(in);
}

Sinogram read_sinogram(std::istream& in) {
    const ParsedText text = parse_text(in);
    Sinogram sino;
    sino.n = parse_int(text.value("n"), "n");
    const std::string tl = text.value("tanh_lambda");
    if (tl == "inf") {
        sino.lambda_inf = true;
        sino.tanh_lambda = 1.0;
    } else {
        sino.lambda_inf = false;
        sino.tanh_lambda = parse_double(tl, "tanh_lambda");
    }
    sino.psi_res = parse_int(text.value("psi_res"), "psi_res");
    sino.c_grid = LogGrid(parse_double(text.value("c_min"), "c_min"),
                          parse_double(text.value("c_max"), "c_max"),
                          parse_int(text.value("c_count"), "c_count"));
    const std::size_t psi_count = sino.psi_quadrature().size();
    sino.values.assign(psi_count * static_cast<std::size_t>(sino.c_grid.count), 0.0);
    if (text.rows.size() != sino.values.size())
        throw IoError("sinogram file: expected " + std::to_string(sino.values.size()) +
                      " rows, got " + std::to_string(text.rows.size()));
    for (const auto& row : text.rows) {
        const auto cols = split(row, ',');
        if (cols.size() != 3) throw IoError("sinogram file: expected 3 columns, got '" + row + "'");
        const std::size_t i = static_cast<std::size_t>(parse_int(cols[0], "psi_index"));
        const int j = parse_int(cols[1], "c_index");
        if (i >= psi_count || j < 0 || j >= sino.c_grid.count)
            throw IoError("sinogram file: index out of range in '" + row + "'");
        sino.at(i, j) = parse_double(cols[2], "value");
    }
    return sino;
}

Sinogram read_sinogram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_sinogram_file: cannot open " + path);
    return read_sinogram(in);
}

HarmonicSpectrum read_spectrum(std::istream& in) {
    const ParsedText text = parse_text(in);
    HarmonicSpectrum spec;
    spec.n = parse_int(text.value("n"), "n");
    spec.m_max = parse_int(text.value("m_max"), "m_max");
    spec.r_grid = LogGrid(parse_double(text.value("r_min"), "r_min"),
                          parse_double(text.value("r_max"), "r_max"),
                          parse_int(text.value("r_count"), "r_count"));
    for (const auto& row : text.rows) {
        const auto cols = split(row, ',');
        if (cols.size() != 4) throw IoError("spectrum file: expected 4 columns, got '" + row + "'");
        const HarmonicIndex idx{parse_int(cols[0], "m"), parse_int(cols[1], "l")};
        ModeProfile* mode = nullptr;
        for (auto& m : spec.modes)
            if (m.idx.m == idx.m && m.idx.l == idx.l) mode = &m;
        if (!mode) {
            spec.modes.push_back({idx, {}, 0.0});
            mode = &spec.modes.back();
        }
        mode->values.push_back(parse_double(cols[3], "value"));
    }
    for (const auto& mode : spec.modes)
        if (static_cast<int>(mode.values.size()) != spec.r_grid.count)
            throw IoError("spectrum file: mode (" + std::to_string(mode.idx.m) + "," +
                          std::to_string(mode.idx.l) + ") has wrong row count");
    return spec;
}

HarmonicSpectrum read_spectrum_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_spectrum_file: cannot open " + path);
    return read_spectrum(in);
}

namespace {

LogGrid trimmed_grid(const LogGrid& cg) {
    const double du = cg.log_step();
    const int lo = static_cast<int>(std::ceil(std::log(10.0) / du - 1e-9));
    const int hi = cg.count - 1 - lo;
    if (hi <= lo) throw DomainError("c grid too narrow to trim the outer decades");
    return LogGrid(cg.point(lo), cg.point(hi), hi - lo + 1);
}

int validated(const RunConfig& cfg, std::ostream& log) {
    std::vector<std::string> issues;
    if (cfg.n != 3 && cfg.n != 4) issues.push_back("n must be 3 or 4 for end-to-end commands");
    if (!cfg.lambda_inf && !(cfg.lambda > 0.0)) issues.push_back("lambda must be positive or inf");
    if (cfg.psi_res < 4) issues.push_back("psi_res must be >= 4");
    if (!(cfg.c_min > 0.0 && cfg.c_max > cfg.c_min)) issues.push_back("need 0 < c_min < c_max");
    if (cfg.c_count < 2) issues.push_back("c_count must be >= 2");
    if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) issues.push_back("rho must lie in (0, 1)");
    if (cfg.eps < 0.0) issues.push_back("eps must be >= 0");
    if (!(cfg.contour_T > 0.0) || !(cfg.contour_db > 0.0))
        issues.push_back("contour_T and contour_db must be positive");
    if (cfg.m_max < 0) issues.push_back("m_max must be >= 0");
    if (issues.empty()) return kExitOk;
    log << "config error:\n";
    for (const auto& msg : issues) log << "  - " << msg << "\n";
    return kExitConfig;
}

} // namespace

int cmd_phantom(const RunConfig& cfg, std::ostream& log) {
    if (const int rc = validated(cfg, log); rc != kExitOk) return rc;
    PhantomSpec spec;
    try {
        spec = parse_phantom_descriptor(cfg.n, cfg.phantom_descriptor);
    } catch (const Error& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    const HypothesisReport rep = hypothesis_check(spec);
    if (rep.infinite) {
        log << "phantom rejected: the integrability hypothesis fails "
               "(g(x)/|x|^{n-2} must be L1, i.e. every radial profile needs "
               "int_0^inf |p(r)| dr < inf)\n";
        return kExitHypothesis;
    }
    log << "hypothesis check: L1 bound = " << rep.value << "\n";
    try {
        const std::string out = cfg.out_path.empty() ? "phantom.txt" : cfg.out_path;
        write_phantom_file(out, spec, cfg.echo_lines());
        // exact-profile table on the reporting grid of the configured run
        HarmonicSpectrum exact;
        exact.n = cfg.n;
        exact.m_max = 0;
        exact.r_grid = trimmed_grid(cfg.c_grid());
        const std::vector<double> rs = exact.r_grid.points();
        for (const auto& mode : spec.modes) {
            exact.m_max = std::max(exact.m_max, mode.idx.m);
            ModeProfile prof{mode.idx, std::vector<double>(rs.size()), 0.0};
            for (std::size_t k = 0; k < rs.size(); ++k)
                prof.values[k] = phantom_profile(spec, mode.idx, rs[k]);
            exact.modes.push_back(std::move(prof));
        }
        const std::string pout =
            cfg.profile_out_path.empty() ? out + ".profiles" : cfg.profile_out_path;
        write_spectrum_file(pout, exact, cfg.echo_lines());
        log << "wrote " << out << " and " << pout << "\n";
    } catch (const IoError& e) {
        log << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_forward(const RunConfig& cfg, std::ostream& log) {
    if (const int rc = validated(cfg, log); rc != kExitOk) return rc;
    PhantomSpec spec;
    try {
        if (cfg.in_path.empty()) {
            log << "config error: cmd_forward needs an input phantom file (in = ...)\n";
            return kExitConfig;
        }
        spec = read_phantom_file(cfg.in_path);
    } catch (const IoError& e) {
        log << "io error: " << e.what() << "\n";
        return kExitIo;
    }
    if (spec.n != cfg.n) {
        log << "config error: phantom dimension " << spec.n << " does not match n = " << cfg.n << "\n";
        return kExitConfig;
    }
    try {
        const SpheroidGeometry geom = cfg.geometry();
        const int qres = cfg.quad_res == 0 ? cfg.psi_res : cfg.quad_res;
        const SphereQuadrature psi_grid = sphere_quadrature(cfg.n, cfg.psi_res);
        const SphereQuadrature quad = sphere_quadrature(cfg.n, qres);
        const Sinogram sino = make_sinogram(phantom_function(spec), geom, psi_grid,
                                            cfg.c_grid(), quad, cfg.threads);
        const std::string out = cfg.out_path.empty() ? "sinogram.txt" : cfg.out_path;
        write_sinogram_file(out, sino, cfg.echo_lines());
        log << "wrote " << out << " (" << psi_grid.size() << " x " << cfg.c_count << ")\n";
    } catch (const IoError& e) {
        log << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_invert(const RunConfig& cfg, std::ostream& log) {
    if (const int rc = validated(cfg, log); rc != kExitOk) return rc;
    Sinogram sino;
    try {
        if (cfg.in_path.empty()) {
            log << "config error: cmd_invert needs an input sinogram file (in = ...)\n";
            return kExitConfig;
        }
        sino = read_sinogram_file(cfg.in_path);
    } catch (const IoError& e) {
        log << "io error: " << e.what() << "\n";
        return kExitIo;
    }
    if (cfg.m_max > sino.psi_quadrature().design_order()) {
        log << "config error: DegreeTooHigh: m_max = " << cfg.m_max
            << " exceeds the psi grid design order "
            << sino.psi_quadrature().design_order() << "\n";
        return kExitConfig;
    }
    HarmonicSpectrum spectrum;
    ContourParams contour{cfg.contour_T, cfg.contour_db, 0.8, cfg.tail_correction};
    try {
        spectrum = reconstruct(sino, cfg.m_max, cfg.rho, cfg.eps, contour, cfg.threads);
    } catch (const Error& e) {
        log << "pipeline error: " << e.what() << "\n";
        return kExitConfig;
    }
    double worst_imag = 0.0;
    for (const auto& mode : spectrum.modes) worst_imag = std::max(worst_imag, mode.imag_residual);
    if (worst_imag > 1e-6)
        log << "warning: inverse Mellin imaginary residual " << worst_imag << " exceeds 1e-6\n";
    try {
        const std::string out = cfg.out_path.empty() ? "spectrum.txt" : cfg.out_path;
        write_spectrum_file(out, spectrum, cfg.echo_lines());
        log << "wrote " << out << "\n";
        if (!cfg.reference_path.empty()) {
            const PhantomSpec ref = read_phantom_file(cfg.reference_path);
            const std::string rep = cfg.report_path.empty() ? out + ".report.csv" : cfg.report_path;
            std::ofstream csv(rep);
            if (!csv) throw IoError("cannot open " + rep);
            csv << "m,l,rel_l2_error,ref_peak,imag_residual\n";
            const std::vector<double> rs = spectrum.r_grid.points();
            for (const auto& mode : spectrum.modes) {
                double num = 0.0, den = 0.0, peak = 0.0;
                for (std::size_t k = 0; k < rs.size(); ++k) {
                    if (rs[k] < cfg.eval_r_lo || rs[k] > cfg.eval_r_hi) continue;
                    const double want = phantom_profile(ref, mode.idx, rs[k]);
                    const double got = mode.values[k];
                    num += (got - want) * (got - want);
                    den += want * want;
                    peak = std::max(peak, std::abs(want));
                }
                const double rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
                csv << mode.idx.m << "," << mode.idx.l << "," << format_double17(rel) << ","
                    << format_double17(peak) << "," << format_double17(mode.imag_residual) << "\n";
            }
            log << "wrote " << rep << "\n";
        }
    } catch (const IoError& e) {
        log << "io error: " << e.what() << "\n";
        return kExitIo;
    }
    if (cfg.warn_as_error && worst_imag > 1e-6) return kExitWarning;
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    std::vector<SuiteResult> results;
    try {
        results = verify_suite(cfg.suite);
    } catch (const Error& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    bool all = true;
    for (const auto& r : results) {
        log << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << " ["
            << r.seconds << " s]\n";
        all = all && r.pass;
    }
    return all ? kExitOk : 1;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
    if (cfg.command == "phantom") return cmd_phantom(cfg, log);
    if (cfg.command == "forward") return cmd_forward(cfg, log);
    if (cfg.command == "invert") return cmd_invert(cfg, log);
    if (cfg.command == "verify") return cmd_verify(cfg, log);
    log << "config error: unknown command '" << cfg.command << "'\n";
    return kExitConfig;
}

} // namespace sphradon
