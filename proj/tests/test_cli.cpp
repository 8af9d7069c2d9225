#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sphradon/cli.hpp"

using namespace sphradon;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    std::string base;
    TempDir() {
        char tmpl[] = "/tmp/sphradon_test_XXXXXX";
        base = mkdtemp(tmpl);
    }
    std::string path(const std::string& name) const { return base + "/" + name; }
};

} // namespace

TEST_CASE("config parsing") {
    RunConfig cfg;
    cfg.apply_pair("lambda", "inf");
    CHECK(cfg.lambda_inf);
    cfg.apply_pair("lambda", "0.75");
    CHECK(!cfg.lambda_inf);
    CHECK(cfg.lambda == doctest::Approx(0.75));
    cfg.apply_pair("c_count", "128");
    CHECK(cfg.c_count == 128);
    cfg.apply_pair("threads", "2");
    CHECK(cfg.threads == 2);
    CHECK_THROWS_AS(cfg.apply_pair("no_such_key", "1"), DomainError);
    CHECK_THROWS_AS(cfg.apply_pair("rho", "abc"), DomainError);

    TempDir dir;
    {
        std::ofstream f(dir.path("run.cfg"));
        f << "# comment line\n"
          << "n = 3\n"
          << "lambda = inf\n"
          << "psi_res = 32\n"
          << "m_max = 2\n";
    }
    RunConfig from_file;
    from_file.apply_file(dir.path("run.cfg"));
    CHECK(from_file.lambda_inf);
    CHECK(from_file.psi_res == 32);
    CHECK(from_file.m_max == 2);
}

TEST_CASE("phantom descriptor parsing") {
    const PhantomSpec one = parse_phantom_descriptor(3, "");
    CHECK(one.modes.size() == 1);
    CHECK(one.modes[0].idx.m == 0);

    const PhantomSpec two = parse_phantom_descriptor(3, "0,1: 1.0,2,1.0; 2,2: 0.5,3,2.0, 0.1,2,1.0");
    CHECK(two.modes.size() == 2);
    CHECK(two.modes[1].idx.l == 2);
    CHECK(two.modes[1].terms.size() == 2);

    CHECK_THROWS_AS(parse_phantom_descriptor(3, "junk"), DomainError);
    CHECK_THROWS_AS(parse_phantom_descriptor(3, "0,1: 1.0,2"), DomainError);
    CHECK_THROWS_AS(parse_phantom_descriptor(3, "0,5: 1.0,2,1.0"), DomainError);
}

TEST_CASE("phantom command writes files and gates the hypothesis") {
    TempDir dir;
    std::ostringstream log;

    RunConfig cfg;
    cfg.command = "phantom";
    cfg.n = 3;
    cfg.c_min = 1e-2;
    cfg.c_max = 1e2;
    cfg.c_count = 256;
    cfg.out_path = dir.path("phantom.txt");
    cfg.profile_out_path = dir.path("profiles.txt");
    CHECK(cmd_phantom(cfg, log) == kExitOk);

    const PhantomSpec loaded = read_phantom_file(cfg.out_path);
    CHECK(loaded.n == 3);
    CHECK(loaded.modes.size() == 1);
    const HarmonicSpectrum profiles = read_spectrum_file(cfg.profile_out_path);
    CHECK(profiles.modes.size() == 1);

    // non-integrable profile: exit 3 and a message naming the L1 hypothesis
    RunConfig bad = cfg;
    bad.phantom_descriptor = "0,1: 1.0,0,0.0";
    std::ostringstream bad_log;
    CHECK(cmd_phantom(bad, bad_log) == kExitHypothesis);
    CHECK(bad_log.str().find("L1") != std::string::npos);

    // malformed descriptor: exit 2
    RunConfig malformed = cfg;
    malformed.phantom_descriptor = "not a descriptor";
    std::ostringstream mlog;
    CHECK(cmd_phantom(malformed, mlog) == kExitConfig);

    // invalid grid bounds: exit 2
    RunConfig invalid = cfg;
    invalid.c_min = -1.0;
    std::ostringstream ilog;
    CHECK(cmd_phantom(invalid, ilog) == kExitConfig);
}

TEST_CASE("forward and invert round trip with report") {
    TempDir dir;
    std::ostringstream log;

    RunConfig cfg;
    cfg.n = 3;
    cfg.lambda = 1.0;
    cfg.psi_res = 32;
    cfg.quad_res = 64;
    cfg.c_min = 1e-3;
    cfg.c_max = 1e3;
    cfg.c_count = 512;
    cfg.m_max = 2;
    cfg.phantom_descriptor = "0,1: 1.0,2,1.0; 2,1: 0.7,3,1.5";
    cfg.out_path = dir.path("phantom.txt");
    cfg.profile_out_path = dir.path("profiles.txt");
    cfg.command = "phantom";
    REQUIRE(cmd_phantom(cfg, log) == kExitOk);

    cfg.command = "forward";
    cfg.in_path = dir.path("phantom.txt");
    cfg.out_path = dir.path("sino.txt");
    REQUIRE(cmd_forward(cfg, log) == kExitOk);

    // deterministic rerun: byte-identical output
    const std::string bytes1 = slurp(dir.path("sino.txt"));
    REQUIRE(cmd_forward(cfg, log) == kExitOk);
    CHECK(slurp(dir.path("sino.txt")) == bytes1);

    cfg.command = "invert";
    cfg.in_path = dir.path("sino.txt");
    cfg.out_path = dir.path("spectrum.txt");
    cfg.reference_path = dir.path("phantom.txt");
    cfg.report_path = dir.path("report.csv");
    REQUIRE(cmd_invert(cfg, log) == kExitOk);

    // the report carries one row per reconstructed mode with small errors
    // for the active ones
    std::ifstream csv(dir.path("report.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "m,l,rel_l2_error,ref_peak,imag_residual");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line)) {
        ++rows;
        int m = 0, l = 0;
        double rel = 0.0, peak = 0.0;
        std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &m, &l, &rel, &peak);
        if (peak > 0.0) CHECK(rel <= 1e-2);
    }
    CHECK(rows == 5); // (0,1), (1,1), (1,2), (2,1), (2,2)
}

TEST_CASE("invert failure modes") {
    TempDir dir;
    std::ostringstream log;

    RunConfig cfg;
    cfg.command = "invert";
    cfg.in_path = dir.path("missing.txt");
    CHECK(cmd_invert(cfg, log) == kExitIo);

    // m_max beyond the design order of the stored psi grid
    RunConfig mk = cfg;
    mk.command = "phantom";
    mk.n = 3;
    mk.psi_res = 8;
    mk.c_min = 0.01;
    mk.c_max = 100.0;
    mk.c_count = 128;
    mk.out_path = dir.path("p.txt");
    mk.profile_out_path = dir.path("p.profiles");
    REQUIRE(cmd_phantom(mk, log) == kExitOk);
    mk.command = "forward";
    mk.in_path = dir.path("p.txt");
    mk.out_path = dir.path("s.txt");
    REQUIRE(cmd_forward(mk, log) == kExitOk);
    mk.command = "invert";
    mk.in_path = dir.path("s.txt");
    mk.out_path = dir.path("sp.txt");
    mk.m_max = 30;
    std::ostringstream elog;
    CHECK(cmd_invert(mk, elog) == kExitConfig);
    CHECK(elog.str().find("DegreeTooHigh") != std::string::npos);

    // missing phantom for forward
    RunConfig fw;
    fw.command = "forward";
    fw.in_path = dir.path("nothing.txt");
    CHECK(cmd_forward(fw, log) == kExitIo);

    // bad config values
    RunConfig badcfg;
    badcfg.command = "forward";
    badcfg.rho = 1.5;
    CHECK(cmd_forward(badcfg, log) == kExitConfig);
}

TEST_CASE("slice-limit forward through the command layer") {
    TempDir dir;
    std::ostringstream log;

    RunConfig cfg;
    cfg.command = "phantom";
    cfg.n = 3;
    cfg.lambda_inf = true;
    cfg.psi_res = 16;
    cfg.quad_res = 64;
    cfg.c_min = 1e-2;
    cfg.c_max = 1e2;
    cfg.c_count = 128;
    cfg.out_path = dir.path("ph.txt");
    cfg.profile_out_path = dir.path("ph.profiles");
    REQUIRE(cmd_phantom(cfg, log) == kExitOk);

    cfg.command = "forward";
    cfg.in_path = dir.path("ph.txt");
    cfg.out_path = dir.path("sino_inf.txt");
    REQUIRE(cmd_forward(cfg, log) == kExitOk);
    const std::string bytes = slurp(dir.path("sino_inf.txt"));
    CHECK(bytes.find("# tanh_lambda = inf") != std::string::npos);

    const Sinogram sino = read_sinogram_file(dir.path("sino_inf.txt"));
    CHECK(sino.lambda_inf);
    CHECK(sino.geometry().is_slice_limit());
}

TEST_CASE("verify command filters suites") {
    std::ostringstream log;
    RunConfig cfg;
    cfg.command = "verify";
    cfg.suite = "kernel";
    CHECK(cmd_verify(cfg, log) == kExitOk);
    CHECK(log.str().find("[PASS] kernel") != std::string::npos);

    RunConfig bad;
    bad.command = "verify";
    bad.suite = "nonsense";
    std::ostringstream blog;
    CHECK(cmd_verify(bad, blog) == kExitConfig);

    RunConfig unknown;
    unknown.command = "frobnicate";
    std::ostringstream ulog;
    CHECK(run_command(unknown, ulog) == kExitConfig);
}
