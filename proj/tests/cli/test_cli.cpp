#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bathlab/checkpoint.hpp"
#include "bathlab/config.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path root{BATHLAB_TEST_TMP};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text)
{
    fs::create_directories(root);
    const fs::path p = root / name;
    std::ofstream(p) << text;
    return p;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(const std::string& args, const std::string& tag)
{
    fs::create_directories(root);
    const fs::path out = root / (tag + ".stdout"), err = root / (tag + ".stderr");
    const std::string cmd = std::string(BATHLAB_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string run_dir(const std::string& tag)
{
    const fs::path d = root / tag;
    fs::remove_all(d);
    return d.string();
}

const char* small_evolve = "points_per_axis = 6\npolar_order = 4\nazimuthal_order = 8\nt_end = 1\n"
                           "derivative_order = 2\nfit_t_min = 0.5\n";

} // namespace

TEST_CASE("missing or unknown subcommand is a usage error")
{
    CHECK(cli("", "nosub").code == 2);
    CHECK(cli("plot", "badsub").code == 2);
    CHECK(cli("verify --help", "help").code == 0);
}

TEST_CASE("configuration errors exit 2 before any computation")
{
    const auto bad_extent = write_config("extent0.cfg", "extent = 0\n");
    const Outcome a = cli("verify --config " + bad_extent.string() + " --out " + run_dir("extent0"), "extent0");
    CHECK(a.code == 2);
    CHECK(a.err.find("configuration error") != std::string::npos);
    CHECK_FALSE(fs::exists(root / "extent0" / "verify.csv"));

    const auto unknown = write_config("unknown.cfg", "kappa = 0.01\nbogus = 1\n");
    const Outcome b = cli("evolve --config " + unknown.string() + " --out " + run_dir("unknown"), "unknown");
    CHECK(b.code == 2);
    CHECK(b.err.find("bogus") != std::string::npos);

    CHECK(cli("evolve --config " + (root / "does_not_exist.cfg").string(), "missing").code == 2);
}

TEST_CASE("broken detailed balance is caught by verify")
{
    const auto cfg = write_config("asym.cfg", "points_per_axis = 6\npolar_order = 4\nazimuthal_order = 8\nr0_asymmetry = 0.2\n");
    const std::string dir = run_dir("asym");
    const Outcome o = cli("verify --config " + cfg.string() + " --out " + dir, "asym");
    CHECK(o.code == 1);
    const std::string table = slurp(fs::path(dir) / "verify.csv");
    CHECK(table.rfind("check,value,tolerance,status,detail\n", 0) == 0);
    CHECK(table.find("\ndetailed_balance,") != std::string::npos);
    CHECK(table.find("FAIL") != std::string::npos);
    CHECK(slurp(fs::path(dir) / "manifest.txt").find("status = failed") != std::string::npos);
}

TEST_CASE("default verify passes every check")
{
    const std::string dir = run_dir("verify_default");
    const Outcome o = cli("verify --out " + dir, "verify_default");
    INFO(o.out);
    CHECK(o.code == 0);
}

TEST_CASE("spectrum output files and determinism")
{
    const auto cfg = write_config("spectrum.cfg", "points_per_axis = 6\ncompare_kappa0 = true\n");
    const std::string a = run_dir("spec_a"), b = run_dir("spec_b");
    REQUIRE(cli("spectrum --config " + cfg.string() + " --out " + a, "spec_a").code == 0);
    REQUIRE(cli("spectrum --config " + cfg.string() + " --out " + b + " --threads 2", "spec_b").code == 0);
    for (const char* f : {"eigenvalues_n0_0_0.csv", "eigenvalues_n1_0_0.csv", "eigenvalues_n2_0_0.csv",
                          "contour_n1_0_0.csv", "spectrum_summary.csv"}) {
        INFO(f);
        REQUIRE(fs::exists(fs::path(a) / f));
        CHECK(slurp(fs::path(a) / f) == slurp(fs::path(b) / f));
    }
    const std::string summary = slurp(fs::path(a) / "spectrum_summary.csv");
    std::istringstream lines(summary);
    std::string header, zero;
    std::getline(lines, header);
    std::getline(lines, zero);
    CHECK(header.find("gap_difference") != std::string::npos);
    CHECK(zero.rfind("0,0,0,ok,", 0) == 0);
    CHECK(zero.substr(zero.size() - 2) == ",1");
}

TEST_CASE("propagator tables")
{
    const auto cfg = write_config("prop.cfg", "points_per_axis = 6\nosc_modes = 1,0,0; 2,0,0\nenvelope_mode = 1,0,0\n");
    const std::string dir = run_dir("prop");
    REQUIRE(cli("propagator --config " + cfg.string() + " --out " + dir, "prop").code == 0);
    const std::string summary = slurp(fs::path(dir) / "propagator_summary.txt");
    const std::string decay = slurp(fs::path(dir) / "decay.csv");
    std::istringstream lines(decay);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    const std::string baseline = summary.substr(summary.find("baseline_norm = ") + 16);
    CHECK(first == "0," + baseline.substr(0, baseline.find('\n')));
    CHECK(summary.find("decay_monotone = true") != std::string::npos);
    CHECK(summary.find("decay_c0 = ") != std::string::npos);
    CHECK(fs::exists(fs::path(dir) / "oscillatory.csv"));
    CHECK(fs::exists(fs::path(dir) / "envelope.csv"));
}

TEST_CASE("evolve manifest echoes every default")
{
    const auto cfg = write_config("evolve_small.cfg", small_evolve);
    const std::string dir = run_dir("evolve_manifest");
    REQUIRE(cli("evolve --config " + cfg.string() + " --out " + dir + " --seed 7", "evolve_manifest").code == 0);
    const std::string manifest = slurp(fs::path(dir) / "manifest.txt");
    for (const auto& [k, v] : bathlab::command_defaults("evolve"))
        CHECK(manifest.find("\n" + k + " = ") != std::string::npos);
    CHECK(manifest.find("seed = 7\n") != std::string::npos);
    CHECK(manifest.find("status = ok\n") != std::string::npos);
    const std::string summary = slurp(fs::path(dir) / "summary.txt");
    CHECK(summary.find("fitted_C0 = ") != std::string::npos);
    CHECK(slurp(fs::path(dir) / "diagnostics.csv").rfind("t,distance,mass,min_g,", 0) == 0);
}

TEST_CASE("maxwellian evolution stays at distance zero")
{
    const auto cfg = write_config("evolve_max.cfg", std::string(small_evolve) + "initial = maxwellian\n");
    const std::string dir = run_dir("evolve_max");
    REQUIRE(cli("evolve --config " + cfg.string() + " --out " + dir, "evolve_max").code == 0);
    std::istringstream rows(slurp(fs::path(dir) / "diagnostics.csv"));
    std::string row;
    std::getline(rows, row);
    int count = 0;
    while (std::getline(rows, row)) {
        const auto a = row.find(',');
        const auto b = row.find(',', a + 1);
        CHECK(std::stod(row.substr(a + 1, b - a - 1)) == 0.0);
        ++count;
    }
    CHECK(count == 11);
}

TEST_CASE("evolve output does not depend on the thread count")
{
    const auto cfg = write_config("evolve_threads.cfg", small_evolve);
    const std::string a = run_dir("threads1"), b = run_dir("threads2");
    REQUIRE(cli("evolve --config " + cfg.string() + " --out " + a + " --threads 1", "threads1").code == 0);
    REQUIRE(cli("evolve --config " + cfg.string() + " --out " + b + " --threads 2", "threads2").code == 0);
    CHECK(slurp(fs::path(a) / "diagnostics.csv") == slurp(fs::path(b) / "diagnostics.csv"));
    CHECK(slurp(fs::path(a) / "final.bin") == slurp(fs::path(b) / "final.bin"));
    CHECK(slurp(fs::path(a) / "summary.txt") == slurp(fs::path(b) / "summary.txt"));
}

TEST_CASE("restart from a checkpoint reproduces the uninterrupted run")
{
    const auto cfg = write_config("evolve_full.cfg", std::string(small_evolve) + "checkpoint_every = 50\n");
    const std::string full = run_dir("full");
    REQUIRE(cli("evolve --config " + cfg.string() + " --out " + full, "full").code == 0);
    const fs::path ck = fs::path(full) / "checkpoint_50.bin";
    REQUIRE(fs::exists(ck));
    const auto rcfg = write_config("evolve_restart.cfg", std::string(small_evolve) + "restart_from = " + ck.string() + "\n");
    const std::string rest = run_dir("restart");
    REQUIRE(cli("evolve --config " + rcfg.string() + " --out " + rest, "restart").code == 0);
    const auto a = bathlab::load_checkpoint(fs::path(full) / "final.bin");
    const auto b = bathlab::load_checkpoint(fs::path(rest) / "final.bin");
    CHECK((a.state.coeff - b.state.coeff).cwiseAbs().maxCoeff() <= 1e-12);
    // diagnostics rows from t = 0.5 on agree
    const std::string fa = slurp(fs::path(full) / "diagnostics.csv"), fb = slurp(fs::path(rest) / "diagnostics.csv");
    const std::string tail_a = fa.substr(fa.find("\n0.5,") + 1), tail_b = fb.substr(fb.find("\n") + 1);
    CHECK(tail_a == tail_b);

    const auto wrong = write_config("evolve_wrong.cfg",
                                    "points_per_axis = 8\npolar_order = 4\nazimuthal_order = 8\nt_end = 1\nrestart_from = " +
                                        ck.string() + "\n");
    CHECK(cli("evolve --config " + wrong.string() + " --out " + run_dir("wrong"), "wrong").code == 2);
}
