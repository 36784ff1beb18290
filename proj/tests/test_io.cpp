#include <catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "pws/config.hpp"
#include "pws/scenario.hpp"
#include "pws/snapshot_io.hpp"

using namespace pws;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pws-test-io-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(PWS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) { return std::string(PWS_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("SLDN1 round trip is bit-identical") {
  const GridSpec g = GridSpec::plane(6, 2.5, 4, 1.25);
  ComplexField f(g, 3.75);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = {std::sin(1.0 + i), -1.0 / (1.0 + i)};
  f[3] = {-0.0, 1e-310};
  const fs::path p = scratch("snap") / "f.sldn";
  write_snapshot(f, p);
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
  const ComplexField r = read_snapshot(p);
  CHECK(r.grid == g);
  CHECK(r.time == 3.75);
  REQUIRE(r.size() == f.size());
  CHECK(std::memcmp(r.data.data(), f.data.data(), f.size() * sizeof(cplx)) == 0);
}

TEST_CASE("SLDN1 size of a small 1D field") {
  const ComplexField f(GridSpec::line(8, 1.0));
  const fs::path p = scratch("size") / "z.sldn";
  write_snapshot(f, p);
  CHECK(fs::file_size(p) == 5 + 4 + 4 + 8 + 8 + 8 * 16);
}

TEST_CASE("SLDN1 layout is fixed little-endian") {
  ComplexField f(GridSpec::line(4, 2.0), 0.5);
  f[0] = {1.0, -2.0};
  const std::string b = encode_snapshot(f);
  REQUIRE(b.size() == 5 + 4 + 4 + 8 + 8 + 4 * 16);
  CHECK(b.substr(0, 5) == "SLDN1");
  auto u32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(b[at + k]);
    return v;
  };
  auto f64 = [&](std::size_t at) {
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(b[at + k]);
    return std::bit_cast<double>(v);
  };
  CHECK(u32(5) == 1);
  CHECK(u32(9) == 4);
  CHECK(f64(13) == 2.0);
  CHECK(f64(21) == 0.5);
  CHECK(f64(29) == 1.0);
  CHECK(f64(37) == -2.0);
  // Hand-built bytes decode the same way on any host.
  const ComplexField back = decode_snapshot(b);
  CHECK(back[0] == cplx(1.0, -2.0));
}

TEST_CASE("corrupt snapshots are rejected") {
  const std::string good = encode_snapshot(ComplexField(GridSpec::line(8, 1.0)));
  CHECK_THROWS_AS(decode_snapshot("SLDN2" + good.substr(5)), Error);
  CHECK_THROWS_AS(decode_snapshot(good.substr(0, good.size() - 1)), Error);
  CHECK_THROWS_AS(decode_snapshot(good + "x"), Error);
  std::string bad_dim = good;
  bad_dim[5] = 3;
  CHECK_THROWS_AS(decode_snapshot(bad_dim), Error);
}

TEST_CASE("CSV series rendering") {
  CsvSeries s({"t", "x"}, {"time", "length"});
  s.add_row({0.0, 0.1});
  s.add_row({1.0, -2.5e-300});
  CHECK(s.rows() == 2);
  CHECK(s.render() == "t,x\n#time,length\n0,0.10000000000000001\n1,-2.5e-300\n");
  CHECK_THROWS(s.add_row({1.0}));
}

TEST_CASE("minimal free_gausson config gets the documented defaults") {
  const ScenarioConfig c = parse_config(data("free_gausson_minimal.cfg"));
  CHECK(c.kind == ScenarioKind::free_gausson);
  CHECK(c.N == 256);
  CHECK(c.L == Catch::Approx(20.0 / std::sqrt(c.b)));
  CHECK(c.dt == 1e-3);
  CHECK(c.T == 10.0);
  CHECK(c.seed == 42);
  const ScenarioConfig wide = parse_config_text("scenario = free_gausson\nb = 4\n");
  CHECK(wide.L == Catch::Approx(10.0));
}

TEST_CASE("config errors are precise") {
  auto message = [](std::string_view text) {
    try {
      parse_config_text(text, "cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK_THAT(message("scenario = free_gausson\nb = -1\n"), Catch::Matchers::ContainsSubstring("b > 0"));
  CHECK_THAT(message("scenario = kg_plane_wave\nN = 256\ndt = 0.19634954084936207\nT = 1.9634954084936207\n"),
             Catch::Matchers::ContainsSubstring("dt <= 0.5*dx"));
  CHECK_THAT(message("scenario = free_gausson\nwidth = 2\n"),
             Catch::Matchers::ContainsSubstring("cfg:2: unknown key 'width'"));
  CHECK_THAT(message("scenario = free_gausson\nN = 64\nN = 128\n"), Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK_THAT(message("scenario = free_gausson\nN = lots\n"), Catch::Matchers::ContainsSubstring("expects"));
  CHECK_THAT(message("scenario = free_gausson\npartner_offset = 1\n"),
             Catch::Matchers::ContainsSubstring("not used by scenario free_gausson"));
  CHECK_THAT(message("scenario = teleport\n"), Catch::Matchers::ContainsSubstring("unknown scenario"));
  CHECK_THAT(message("N = 64\n"), Catch::Matchers::ContainsSubstring("scenario"));
}

TEST_CASE("every scenario's defaults validate") {
  for (const auto kind : all_scenarios()) {
    INFO(scenario_name(kind));
    CHECK_NOTHROW(validate_config(scenario_defaults(kind)));
    const auto parsed = parse_config_text("scenario = " + std::string(scenario_name(kind)) + "\n");
    CHECK(render_config(parsed) == render_config(scenario_defaults(kind)));
  }
}

TEST_CASE("CLI exit codes") {
  const fs::path out = scratch("cli");
  CHECK(cli("list-scenarios") == 0);
  CHECK(cli("validate " + data("kg_plane_wave.cfg")) == 0);
  CHECK(cli("validate " + data("negative_b.cfg")) == 2);
  CHECK(cli("run " + data("negative_b.cfg") + " --quiet --output-dir " + (out / "neg").string()) == 2);
  CHECK(cli("run " + data("kg_cfl.cfg") + " --quiet --output-dir " + (out / "cfl").string()) == 2);
  CHECK_FALSE(fs::exists(out / "cfl"));
  CHECK(cli("run " + data("does_not_exist.cfg") + " --quiet") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("run " + data("kg_plane_wave.cfg") + " --quiet --snapshots 500 --output-dir " + (out / "kg").string()) ==
        0);
  CHECK(fs::exists(out / "kg" / "summary.txt"));
  CHECK(fs::exists(out / "kg" / "series.csv"));
  CHECK(fs::exists(out / "kg" / "snapshots"));
}

TEST_CASE("re-running a scenario reproduces byte-identical CSVs") {
  ScenarioConfig c = parse_config(data("kg_plane_wave.cfg"));
  c.output_dir = scratch("det-a").string();
  const ScenarioResult a = run_scenario(c);
  c.output_dir = scratch("det-b").string();
  const ScenarioResult b = run_scenario(c);
  CHECK(a.passed());
  std::size_t csvs = 0;
  for (const auto& f : a.files) {
    if (f.extension() != ".csv") continue;
    ++csvs;
    CHECK(slurp(f) == slurp(fs::path(c.output_dir) / f.filename()));
  }
  CHECK(csvs > 0);
}

TEST_CASE("poor soliton/pilot scale separation warns without failing validation") {
  ScenarioConfig c = parse_config_text("scenario = double_slit_dbb\nN = 512\nb = 4\nT = 0.2\n");
  c.output_dir = scratch("scale").string();
  const ScenarioResult r = run_scenario(c);
  REQUIRE(r.warnings.size() == 1);
  CHECK_THAT(r.warnings[0], Catch::Matchers::ContainsSubstring("sqrt(b) >= 20/sigma"));
  CHECK_THAT(slurp(fs::path(c.output_dir) / "summary.txt"), Catch::Matchers::ContainsSubstring("[warnings]"));
  ScenarioConfig kg = scenario_defaults(ScenarioKind::kg_plane_wave);
  kg.output_dir = scratch("scale-kg").string();
  CHECK(run_scenario(kg).warnings.empty());
}
