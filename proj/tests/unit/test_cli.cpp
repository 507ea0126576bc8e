#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bakerlab/config.hpp"
#include "bakerlab/jobs.hpp"
#include "bakerlab/manifest.hpp"

using namespace bakerlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("bakerlab_cli_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig config_from(std::map<std::string, std::string> entries, const fs::path& out) {
  entries["output.dir"] = out.string();
  return build_config(entries);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

int run_tool(const std::string& args) {
  const std::string cmd = std::string(BAKERCTL_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config text parsing") {
    std::istringstream in(
        "# open 5-baker\n"
        "map.family = dft\n"
        "map.D = 5   # trailing comment\n"
        "dims.list = 20, 100\n"
        "radii = 0.5,0.1,0.5\n"
        "sector.rho = pi\n");
    const auto cfg = parse_config(in);
    CHECK(cfg.family == MapFamily::Dft);
    CHECK(cfg.spec.kept() == std::vector<int>{1, 3});
    CHECK(cfg.dimensions == std::vector<std::int64_t>{20, 100});
    CHECK(cfg.radii == std::vector<double>{0.1, 0.5});
    CHECK(cfg.sector_rho == kPi);
    REQUIRE(cfg.expected_mu);
    CHECK(*cfg.expected_mu == doctest::Approx(std::log(2.0) / std::log(5.0)));
  }

  TEST_CASE("config defaults and expansion") {
    const auto cfg = build_config({{"dims.N0", "20"}, {"dims.k_max", "2"}});
    CHECK(cfg.dimensions == std::vector<std::int64_t>{20, 100, 500});
    CHECK(cfg.workers == 1);
    CHECK(cfg.transport_method == TransportMethod::Series);
    const auto b3 = build_config({{"map.D", "3"}});
    CHECK(b3.spec.kept() == std::vector<int>{0, 2});
    const auto tr = build_config({{"transport.k_min", "1"}, {"transport.k_max", "3"}, {"transport.theta_count", "4"}});
    CHECK(tr.transport_ks == std::vector<int>{1, 2, 3});
    CHECK(tr.transport_thetas.size() == 4);
  }

  TEST_CASE("config errors") {
    auto bad = [](std::map<std::string, std::string> e) { CHECK_THROWS_AS(build_config(e), ConfigError); };
    bad({{"no.such.key", "1"}});
    bad({{"radii", "0.5,1.5"}});
    bad({{"radii", "0"}});
    bad({{"dims.list", "20"}, {"dims.N0", "20"}});
    bad({{"dims.list", "21"}, {"parity", "even"}});
    bad({{"map.D", "5"}, {"map.kept", "0,1"}, {"parity", "even"}, {"dims.list", "20"}});
    bad({{"transport.k_min", "0"}, {"transport.k_max", "2"}});
    bad({{"transport.k_min", "3"}, {"transport.k_max", "2"}});
    bad({{"transport.tol", "-1"}});
    bad({{"workers", "0"}});
    bad({{"map.D", "five"}});
    bad({{"classical.M", "0"}});
    bad({{"dims.list", "21"}});

    std::istringstream dup("radii = 0.1\nradii = 0.2\n");
    CHECK_THROWS_AS(parse_config(dup), ConfigError);
    std::istringstream noeq("radii 0.1\n");
    CHECK_THROWS_AS(parse_config(noeq), ConfigError);
    CHECK_THROWS_AS(split_assignment("abc"), ConfigError);
    CHECK(split_assignment("a.b=1=2") == std::pair<std::string, std::string>{"a.b", "1=2"});
  }

  TEST_CASE("worker precedence: flag, then environment, then config") {
    auto cfg = build_config({{"workers", "3"}});
    ::unsetenv("BAKER_WORKERS");
    CHECK(resolve_workers(cfg, 0) == 3);
    ::setenv("BAKER_WORKERS", "5", 1);
    CHECK(resolve_workers(cfg, 0) == 5);
    CHECK(resolve_workers(cfg, 2) == 2);
    ::setenv("BAKER_WORKERS", "zero", 1);
    CHECK_THROWS_AS(resolve_workers(cfg, 0), ConfigError);
    ::unsetenv("BAKER_WORKERS");
  }

  TEST_CASE("run_jobs isolates failures and keeps order") {
    std::vector<Job> jobs;
    for (int i = 0; i < 6; ++i)
      jobs.push_back({"job" + std::to_string(i), [i](JobRecord& r) {
                        if (i == 2) throw std::runtime_error("boom");
                        r.files.push_back("f" + std::to_string(i));
                      }});
    const auto recs = run_jobs(jobs, 3);
    REQUIRE(recs.size() == 6);
    for (int i = 0; i < 6; ++i) {
      CHECK(recs[i].name == "job" + std::to_string(i));
      CHECK(recs[i].ok == (i != 2));
    }
    CHECK(recs[2].error == "boom");
  }

  TEST_CASE("spectrum job: even sector counts at two sizes") {
    const auto out = scratch("spectrum");
    const auto cfg = config_from(
        {{"dims.N0", "100"}, {"dims.k_max", "1"}, {"parity", "even"}, {"radii", "0.5"}}, out);
    const auto m = run_spectrum_job(cfg, 2);
    CHECK(m.all_ok());
    CHECK(slurp(out / "counts.csv") == "N,r,count\n100,0.5,4\n500,0.5,7\n");
    CHECK(fs::exists(out / "spectrum_N100_even.csv"));
    CHECK(fs::exists(out / "spectrum_N500_even.csv"));
    const auto weyl = read_json(out / "weyl.json");
    CHECK(weyl.contains("slope"));
    CHECK(weyl["points"].size() == 2);
    CHECK(verify_manifest(out).ok());
    const auto back = read_manifest(out);
    CHECK(back.command == "spectrum");
    CHECK(back.tool_version == kToolVersion);
    CHECK(back.config.at("parity") == "even");
    fs::remove_all(out);
  }

  TEST_CASE("outputs are byte-identical across runs and worker counts") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    std::map<std::string, std::string> e{{"dims.list", "20,100"}, {"radii", "0.1,0.5"}};
    run_spectrum_job(config_from(e, a), 1);
    run_spectrum_job(config_from(e, b), 4);
    for (const auto& f : read_manifest(a).files()) CHECK(slurp(a / f) == slurp(b / f));
    CHECK(read_manifest(a).files() == read_manifest(b).files());
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("one bad dimension does not stop the others") {
    const auto out = scratch("partial");
    // N = 500 compresses to 200 > cap; the other two stay below it
    const auto cfg = config_from({{"dims.list", "20,500,100"}, {"radii", "0.5"}, {"limits.dim_cap", "100"}}, out);
    const auto m = run_spectrum_job(cfg, 2);
    CHECK_FALSE(m.all_ok());
    int failed = 0;
    for (const auto& j : m.jobs) failed += !j.ok;
    CHECK(failed == 1);
    CHECK(fs::exists(out / "spectrum_N20_full.csv"));
    CHECK(fs::exists(out / "spectrum_N100_full.csv"));
    CHECK_FALSE(fs::exists(out / "spectrum_N500_full.csv"));
    CHECK(slurp(out / "counts.csv").find("500,") == std::string::npos);
    CHECK(verify_manifest(out).ok());
    fs::remove_all(out);
  }

  TEST_CASE("empty radii grid skips aggregates") {
    const auto out = scratch("noradii");
    const auto m = run_spectrum_job(config_from({{"dims.list", "20"}}, out), 1);
    CHECK(m.all_ok());
    CHECK(m.files() == std::vector<std::string>{"spectrum_N20_full.csv"});
    fs::remove_all(out);
  }

  TEST_CASE("manifest detects missing and unlisted files") {
    const auto out = scratch("manifest");
    run_spectrum_job(config_from({{"dims.list", "20"}}, out), 1);
    std::ofstream(out / "stray.txt") << "x";
    auto chk = verify_manifest(out);
    CHECK(chk.unlisted == std::vector<std::string>{"stray.txt"});
    fs::remove(out / "stray.txt");
    fs::remove(out / "spectrum_N20_full.csv");
    chk = verify_manifest(out);
    CHECK(chk.missing == std::vector<std::string>{"spectrum_N20_full.csv"});
    fs::remove_all(out);
  }

  TEST_CASE("toy-check job") {
    const auto out = scratch("toy");
    const auto cfg = config_from({{"map.family", "toy"}, {"dims.list", "3,9,27"}}, out);
    const auto m = run_toy_check_job(cfg, 2);
    CHECK(m.all_ok());
    for (int k = 1; k <= 3; ++k) {
      const auto j = read_json(out / ("toy_check_k" + std::to_string(k) + ".json"));
      CHECK(j["all_matched"] == true);
      CHECK(j["max_distance"].get<double>() <= 1e-8);
      CHECK(j["nonzero_count"] == (1 << k));
      CHECK(j["kernel_count"] == j["expected_kernel"]);
      CHECK(j["ring_tallies"] == j["ring_expected"]);
    }
    fs::remove_all(out);
  }

  TEST_CASE("transport job") {
    const auto out = scratch("transport");
    const auto cfg = config_from({{"transport.k_min", "1"}, {"transport.k_max", "4"}}, out);
    const auto m = run_transport_job(cfg, 2);
    CHECK(m.all_ok());
    const auto rep = read_json(out / "transport_asymptotics.json");
    CHECK(rep["rows"].size() == 4);
    const auto k4 = read_json(out / "transport_k4_t0.json");
    CHECK(std::abs(k4["g"].get<double>() - 32.0) <= 1.6);
    CHECK(k4["T"].size() == 64);
    CHECK(verify_manifest(out).ok());
    CHECK_THROWS_AS(config_from({{"transport.k_min", "0"}, {"transport.k_max", "2"}}, out), ConfigError);
    fs::remove_all(out);
  }

  TEST_CASE("classical job") {
    const auto out = scratch("classical");
    const auto cfg = config_from({{"map.D", "3"}, {"classical.M", "243"}, {"classical.t_max", "5"}}, out);
    const auto m = run_classical_job(cfg, 2);
    CHECK(m.all_ok());
    CHECK(fs::exists(out / "escape_forward.csv"));
    CHECK(fs::exists(out / "escape_backward.csv"));
    const auto dims = read_json(out / "dimensions.json");
    CHECK(dims["mu"].get<double>() == doctest::Approx(0.63093).epsilon(1e-5));
    fs::remove_all(out);

    const auto out5 = scratch("classical5");
    run_classical_job(config_from({{"classical.M", "25"}}, out5), 1);
    CHECK(read_json(out5 / "dimensions.json")["mu"].get<double>() == doctest::Approx(0.4306765).epsilon(1e-7));
    fs::remove_all(out5);

    const auto outt = scratch("classical_toy");
    const auto mt = run_classical_job(config_from({{"map.family", "toy"}, {"dims.list", "27"}, {"classical.M", "27"}}, outt), 1);
    CHECK(mt.all_ok());
    const auto tr = read_json(outt / "transfer_k3.json");
    CHECK(tr.dump().find("0.666666") != std::string::npos);
    fs::remove_all(outt);
  }

  TEST_CASE("bakerctl exit codes") {
    const auto out = scratch("exit");
    const std::string o = " --out " + out.string();
    CHECK(run_tool("spectrum --set dims.list=20 --set radii=0.5" + o) == 0);
    CHECK(verify_manifest(out).ok());
    CHECK(run_tool("manifest " + out.string()) == 0);
    CHECK(run_tool("spectrum --set dims.list=20,500 --set limits.dim_cap=100 --set radii=0.5" + o) == 2);
    CHECK(run_tool("spectrum --set radii=2" + o) == 1);
    CHECK(run_tool("transport --set transport.k_min=0 --set transport.k_max=1" + o) == 1);
    CHECK(run_tool("spectrum --set bogus=1" + o) == 1);
    fs::remove_all(out);
  }
}
