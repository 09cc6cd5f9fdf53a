#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "qdgate/config.hpp"

using namespace qdgate;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

RunConfig parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_config_text(in, "test");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Run the installed binary through the shell, capturing exit code and both
// streams. QDGATE_BIN is injected by the build.
CliResult run_cli(const std::string& args) {
    const std::string cmd =
        std::string(QDGATE_BIN) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    CliResult r;
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp("cli_stdout.txt");
    r.err = slurp("cli_stderr.txt");
    return r;
}

const char* kCheapConfig = R"(# small detunings keep the run under a second
[system]
model = collinear
omega_c = 20
Delta = 18
alpha = 2
n_init = 0
q1_init = 0
q2_init = 1

[lasers]
env1 = ramp
peak1 = 0.5
ramp_time1 = 5
env2 = ramp
peak2 = 0.5
ramp_time2 = 5
phase2 = 1.5

[grid]
t_end = 10
samples = 40
)";

} // namespace

TEST_CASE("config text resolves every section") {
    const RunConfig rc = parse_str(R"(
# full tour of the key set
[system]
model = per-dot
scheme = 2
omega_c = 100
Delta = 80          ; inline comment
alpha = 2
n_init = 2
q1_init = 0
q2_init = 1
n_max = 12
coupling_12 = 0.25

[lasers]
env1 = ramp
peak1 = 1.0
ramp_time1 = 50
env2 = gaussian
peak2 = 1.6837
t02 = 25
tau2 = 7.5
phase2 = 3.25

[grid]
t_start = 1
t_end = 450
dt_max = 0.001
samples = 600
norm_tol = 1e-9

[output]
dir = my_out
)");

    CHECK(rc.system.model == Model::per_dot);
    CHECK(rc.system.scheme == Scheme::two);
    CHECK(rc.system.omega_c == 100.0);
    CHECK(rc.system.Delta == 80.0);
    CHECK(rc.system.n_init == 2);
    CHECK(rc.system.n_max == 12);
    CHECK(rc.system.coupling[0][1] == 0.25);
    CHECK(rc.system.delta_split() == Approx(40.0));
    CHECK(rc.system.detuning(1, 2) == Approx(40.0));
    CHECK(rc.system.detuning(2, 1) == Approx(120.0));

    CHECK(rc.system.lasers[0].envelope.shape == Envelope::Shape::constant_ramp);
    CHECK(rc.system.lasers[1].envelope.shape == Envelope::Shape::gaussian);
    CHECK(rc.system.lasers[1].envelope.peak == 1.6837);
    CHECK(rc.system.lasers[1].envelope.t0 == 25.0);
    CHECK(rc.system.lasers[1].envelope.tau == 7.5);
    CHECK(rc.system.lasers[1].phase == 3.25);

    CHECK(rc.grid.t_start == 1.0);
    CHECK(rc.grid.t_end == 450.0);
    CHECK(rc.grid.dt_max == 0.001);
    CHECK(rc.grid.samples == 600);
    CHECK(rc.norm_tol == 1e-9);
    CHECK(rc.output_dir == "my_out");
}

TEST_CASE("config text rejects malformed input with positions") {
    // typo'd key, named back to the user
    CHECK_THROWS_AS(parse_str("[system]\nomega_cavity = 5\n"), unknown_key_error);
    CHECK_THROWS_WITH(parse_str("[system]\nomega_cavity = 5\n"),
                      ContainsSubstring("omega_cavity") && ContainsSubstring("test:2"));

    CHECK_THROWS_AS(parse_str("[grid]\nstep = 0.1\n"), unknown_key_error);
    CHECK_THROWS_AS(parse_str("[output]\nfolder = x\n"), unknown_key_error);
    CHECK_THROWS_AS(parse_str("[laser]\npeak1 = 1\n"), unknown_key_error);
    CHECK_THROWS_WITH(parse_str("[laser]\npeak1 = 1\n"), ContainsSubstring("[laser]"));

    // laser keys need the trailing index
    CHECK_THROWS_AS(parse_str("[lasers]\npeak = 1\n"), unknown_key_error);
    CHECK_THROWS_AS(parse_str("[lasers]\npeak3 = 1\n"), unknown_key_error);
    CHECK_THROWS_AS(parse_str("[lasers]\nq = 1\n"), unknown_key_error);

    // malformed values and structure
    CHECK_THROWS_AS(parse_str("[system]\nomega_c = fast\n"), config_parse_error);
    CHECK_THROWS_WITH(parse_str("[system]\nomega_c = fast\n"),
                      ContainsSubstring("not a number"));
    CHECK_THROWS_AS(parse_str("[system]\nomega_c = 100x\n"), config_parse_error);
    CHECK_THROWS_AS(parse_str("[system]\nn_init = 1.5\n"), config_parse_error);
    CHECK_THROWS_AS(parse_str("[system]\nscheme = 3\n"), config_parse_error);
    CHECK_THROWS_AS(parse_str("[system]\nmodel = frame\n"), config_parse_error);
    CHECK_THROWS_AS(parse_str("[lasers]\nenv1 = square\n"), config_parse_error);
    CHECK_THROWS_AS(parse_str("omega_c = 100\n"), config_parse_error);
    CHECK_THROWS_WITH(parse_str("omega_c = 100\n"), ContainsSubstring("outside any section"));
    CHECK_THROWS_AS(parse_str("[system\nomega_c = 100\n"), config_parse_error);
    CHECK_THROWS_WITH(parse_str("[system\nomega_c = 100\n"), ContainsSubstring("unterminated"));
    CHECK_THROWS_AS(parse_str("[system]\nomega_c\n"), config_parse_error);
    CHECK_THROWS_AS(parse_str("[system]\n= 5\n"), config_parse_error);

    // comments and blank lines are free
    CHECK_NOTHROW(parse_str("\n\n# only\n; comments\n"));
}

TEST_CASE("default output directory honors the environment") {
    unsetenv("QDGATE_OUT");
    CHECK(parse_str("[system]\nomega_c = 100\n").output_dir == "qdgate_out");
    setenv("QDGATE_OUT", "env_chosen_dir", 1);
    CHECK(parse_str("[system]\nomega_c = 100\n").output_dir == "env_chosen_dir");
    // explicit [output] wins over the environment
    CHECK(parse_str("[output]\ndir = explicit\n").output_dir == "explicit");
    unsetenv("QDGATE_OUT");
}

TEST_CASE("file-level config loading validates physics") {
    CHECK_THROWS_AS(parse_config("definitely_missing.ini"), std::invalid_argument);

    write_file("cli_test_pole.ini", "[system]\nomega_c = 100\nDelta = 100\n");
    CHECK_THROWS_AS(parse_config("cli_test_pole.ini"), std::invalid_argument);

    write_file("cli_test_ok.ini", kCheapConfig);
    const RunConfig rc = parse_config("cli_test_ok.ini");
    CHECK(rc.system.omega_c == 20.0);
    CHECK(rc.grid.t_end == 10.0);
}

TEST_CASE("command line usage errors") {
    CHECK(run_cli("").code == exitcode::usage);
    CHECK(run_cli("frobnicate").code == exitcode::usage);
    CHECK(run_cli("simulate").code == exitcode::usage); // --config is required

    const CliResult help = run_cli("--help");
    CHECK(help.code == exitcode::ok);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(help.out.find("scenario") != std::string::npos);

    const CliResult missing = run_cli("simulate --config definitely_missing.ini");
    CHECK(missing.code == exitcode::usage);
    CHECK(missing.err.find("definitely_missing.ini") != std::string::npos);

    const CliResult sc = run_cli("scenario nope");
    CHECK(sc.code == exitcode::usage);
    CHECK(sc.err.find("unknown scenario") != std::string::npos);
    CHECK(sc.err.find("sqrtswap") != std::string::npos);
}

TEST_CASE("command line error codes distinguish failure classes") {
    write_file("cli_test_unknown.ini", "[system]\nomega_cavity = 5\n");
    const CliResult unknown = run_cli("simulate --config cli_test_unknown.ini");
    CHECK(unknown.code == exitcode::unknown_key);
    CHECK(unknown.err.find("omega_cavity") != std::string::npos);

    write_file("cli_test_parse.ini", "[system]\nomega_c = fast\n");
    CHECK(run_cli("simulate --config cli_test_parse.ini").code == exitcode::parse);

    write_file("cli_test_pole2.ini", "[system]\nomega_c = 100\nDelta = 100\n[grid]\nt_end = 1\n");
    CHECK(run_cli("simulate --config cli_test_pole2.ini").code == exitcode::validation);

    // an impossible norm tolerance trips the step certification
    write_file("cli_test_tol.ini", std::string(kCheapConfig) + "\n[grid]\nnorm_tol = 1e-18\n");
    CHECK(run_cli("simulate --config cli_test_tol.ini").code == exitcode::numerical);

    CHECK(run_cli("analytic --delta 100 --omega-c 100").code == exitcode::validation);
    CHECK(run_cli("analytic --beta --alpha 1").code == exitcode::validation);

    write_file("cli_test_det.ini", kCheapConfig);
    CHECK(run_cli("rabi --config cli_test_det.ini --channel p99").code == exitcode::usage);
}

TEST_CASE("closed-form subcommand prints the dispersive quantities") {
    const CliResult base = run_cli("analytic");
    CHECK(base.code == exitcode::ok);
    CHECK(base.out.find("omega_eff = 0.0277777778") != std::string::npos);

    const CliResult shifted = run_cli("analytic --delta 90");
    CHECK(shifted.out.find("omega_eff = 0.0526315789") != std::string::npos);

    const CliResult beta = run_cli("analytic --beta --alpha 2 --delta 80 --omega-c 100");
    CHECK(beta.code == exitcode::ok);
    CHECK(beta.out.find("beta = 1.6836599") != std::string::npos);

    const CliResult leak = run_cli("analytic --n 2");
    CHECK(leak.out.find("p00_max = 0.00127314") != std::string::npos);
    CHECK(leak.out.find("p11_max = 0.00189043") != std::string::npos);

    const CliResult coll = run_cli("analytic --beta2 1.6836599252229213");
    CHECK(coll.out.find("omega_eff_collinear = 0.04676833") != std::string::npos);

    const CliResult dry = run_cli("analytic --dry-run");
    CHECK(dry.code == exitcode::ok);
    CHECK(dry.out.find("Omega = 1") != std::string::npos);
    CHECK(dry.out.find("omega_eff") == std::string::npos);
}

TEST_CASE("dry runs report every derived quantity without computing") {
    write_file("cli_test_fig5.ini", R"(
[system]
model = collinear
omega_c = 100
Delta = 80
alpha = 2
n_init = 2
q1_init = 0
q2_init = 1

[lasers]
peak1 = 1.0
peak2 = 1.6837
phase2 = 3.141592653589793

[grid]
t_end = 457
)");
    const CliResult dry = run_cli("simulate --config cli_test_fig5.ini --dry-run");
    CHECK(dry.code == exitcode::ok);
    CHECK(dry.out.find("model = collinear") != std::string::npos);
    CHECK(dry.out.find("delta = 40") != std::string::npos);
    CHECK(dry.out.find("Delta_11 = 80") != std::string::npos);
    CHECK(dry.out.find("Delta_12 = 40") != std::string::npos);
    CHECK(dry.out.find("Delta_21 = 120") != std::string::npos);
    CHECK(dry.out.find("Delta_22 = 80") != std::string::npos);
    CHECK(dry.out.find("beta = 1.68365992") != std::string::npos);
    CHECK(dry.out.find("initial = |01,2>") != std::string::npos);
    CHECK(dry.out.find("dim = 36") != std::string::npos);
    CHECK(dry.out.find("f_max = 220") != std::string::npos);
    // no artifacts from a dry run
    CHECK(!std::filesystem::exists("qdgate_out/trajectory.csv"));

    // identical invocations print identical reports
    const CliResult again = run_cli("simulate --config cli_test_fig5.ini --dry-run");
    CHECK(again.out == dry.out);

    write_file("cli_test_det2.ini", kCheapConfig);
    const CliResult gate = run_cli("gate --config cli_test_det2.ini --tau 3 --dry-run");
    CHECK(gate.code == exitcode::ok);
    CHECK(gate.out.find("window = [0, 30]") != std::string::npos);
    CHECK(gate.out.find("gaussian(peak=1, t0=15, tau=3)") != std::string::npos);

    const CliResult cal = run_cli("calibrate --config cli_test_det2.ini --dry-run");
    CHECK(cal.code == exitcode::ok);
    CHECK(cal.out.find("bracket = [10, 25]") != std::string::npos);

    const CliResult scan = run_cli("scan --config cli_test_det2.ini --gaps 2,4 --dry-run");
    CHECK(scan.code == exitcode::ok);
    CHECK(scan.out.find("gaps = 2 4") != std::string::npos);

    const CliResult rabi = run_cli("rabi --config cli_test_det2.ini --dry-run");
    CHECK(rabi.code == exitcode::ok);
    CHECK(rabi.out.find("channel = p10") != std::string::npos);

    setenv("QDGATE_OUT", "ignored", 1); // the subprocess env is what counts
    const CliResult env = run_cli("scenario fig5 --dry-run");
    CHECK(env.code == exitcode::ok);
    unsetenv("QDGATE_OUT");
}

TEST_CASE("environment variable selects the default output directory") {
    const std::string cmd = std::string("QDGATE_OUT=env_dir_xyz ") + QDGATE_BIN +
                            " scenario fig5 --dry-run > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == exitcode::ok);
    CHECK(slurp("cli_stdout.txt").find("output_dir = env_dir_xyz") != std::string::npos);
}

TEST_CASE("simulate runs are byte-identical") {
    write_file("cli_test_run.ini", kCheapConfig);

    const CliResult a = run_cli("simulate --config cli_test_run.ini --out cli_run_a");
    REQUIRE(a.code == exitcode::ok);
    CHECK(a.out.find("wrote") != std::string::npos);

    const CliResult b = run_cli("simulate --config cli_test_run.ini --out cli_run_b");
    REQUIRE(b.code == exitcode::ok);

    const std::string csv_a = slurp("cli_run_a/trajectory.csv");
    const std::string csv_b = slurp("cli_run_b/trajectory.csv");
    REQUIRE(!csv_a.empty());
    CHECK(csv_a == csv_b);
    CHECK(csv_a.rfind("t,P00,P01,P10,P11,norm,n_mean\n", 0) == 0);
}
