#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sys/wait.h>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using colorcenter::cli::run;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "colorcenter_test_cli";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t data_rows(const std::string& csv) {
  std::size_t n = 0;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("default field sweep has 19 fields of 8 lines") {
  const auto r = call({"simulate-zeeman"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("b_tesla,", 0) == 0);
  CHECK(data_rows(r.out) == 19 * 8);
}

TEST_CASE("zero field gives two distinct frequencies") {
  const auto csv = scratch("zero.csv");
  const auto r = call({"simulate-zeeman", "--b-max", "0", "--out", csv.string()});
  REQUIRE(r.code == 0);
  const auto text = slurp(csv);
  CHECK(data_rows(text) == 8);
  std::set<std::string> freqs;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string b, idx, f;
    std::getline(row, b, ',');
    std::getline(row, idx, ',');
    std::getline(row, f, ',');
    freqs.insert(f);
  }
  CHECK(freqs.size() == 2);
  CHECK(freqs.count("336.095225") == 1);
}

TEST_CASE("bad inputs exit 2 and write nothing") {
  const auto params = scratch("bad.json");
  put(params, "{\"lambda_soc_ghz\": ");
  const auto out = scratch("never.csv");
  auto r = call({"simulate-zeeman", "--params", params.string(), "--out", out.string()});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(out));

  r = call({"simulate-zeeman", "--axis", "0,0,0", "--out", out.string()});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(out));

  const auto stark = scratch("two.csv");
  put(stark, "voltage_v,peak_freq_ghz\n-5,1\n-10,2\n");
  const auto js = scratch("never.json");
  r = call({"fit", "stark", "--input", stark.string(), "--out-json", js.string()});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(js));

  r = call({"simulate-zeeman", "--no-such-flag"});
  CHECK(r.code == 2);
}

TEST_CASE("Lorentzian fit of a synthetic PLE scan") {
  const auto data = scratch("ple.csv");
  REQUIRE(call({"synth", "ple", "--out", data.string()}).code == 0);
  const auto js = scratch("ple.json");
  const auto overlay = scratch("ple_overlay.csv");
  const auto svg = scratch("ple.svg");
  const auto r = call({"fit", "lorentzian", "--input", data.string(), "--out-json", js.string(), "--overlay-csv",
                       overlay.string(), "--svg", svg.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(js));
  CHECK(j["kind"] == "lorentzian");
  CHECK(std::abs(j["derived"]["fwhm_mhz"].get<double>() - 16.0) < 1.0);
  CHECK(data_rows(slurp(overlay)) == 1001);
  CHECK(slurp(svg).find("</svg>") != std::string::npos);
}

TEST_CASE("two-component decay reports ordered time constants") {
  const auto data = scratch("decay.csv");
  REQUIRE(call({"synth", "decay", "--noiseless", "--out", data.string()}).code == 0);
  const auto r = call({"fit", "decay", "--input", data.string(), "--components", "2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["names"][1] == "tau_1");
  CHECK(j["values"][1].get<double>() == doctest::Approx(1.6).epsilon(1e-4));
  CHECK(j["values"][3].get<double>() == doctest::Approx(42.0).epsilon(1e-4));
  CHECK(j["time_unit"] == "us");
}

TEST_CASE("constant decay trace exits 3") {
  const auto data = scratch("flat.csv");
  std::string text = "time_us,counts\n";
  for (int i = 0; i < 50; ++i) text += std::to_string(i) + ",100\n";
  put(data, text);
  const auto js = scratch("flat.json");
  const auto r = call({"fit", "decay", "--input", data.string(), "--out-json", js.string()});
  CHECK(r.code == 3);
  CHECK_FALSE(fs::exists(js));
  CHECK(r.err.find("\"converged\": false") != std::string::npos);
}

TEST_CASE("zero-field peaks alone leave the Hamiltonian fit degenerate") {
  const auto data = scratch("peaks0.csv");
  put(data, "b_tesla,freq_offset_ghz\n0,336.095\n0,-336.095\n");
  const auto r = call({"fit", "hamiltonian", "--input", data.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("degenerate") != std::string::npos);
}

TEST_CASE("Hamiltonian fit from synthetic peaks") {
  const auto data = scratch("peaks.csv");
  REQUIRE(call({"synth", "peaks", "--out", data.string()}).code == 0);
  const auto r = call({"fit", "hamiltonian", "--input", data.string(), "--lambda-init", "600", "--xi-init", "5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["values"][0].get<double>() == doctest::Approx(672.0).epsilon(1e-3));
  CHECK(j["values"][1].get<double>() == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("Stark and lifetime fits report converted quantities") {
  const auto stark = scratch("stark.csv");
  REQUIRE(call({"synth", "stark", "--noiseless", "--out", stark.string()}).code == 0);
  auto r = call({"fit", "stark", "--input", stark.string(), "--reference-index", "0"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["values"][1].get<double>() == doctest::Approx(-2.1e-4).epsilon(1e-6));
  CHECK(j["derived"].contains("delta_alpha_a3"));

  const auto life = scratch("life.csv");
  REQUIRE(call({"synth", "lifetime", "--noiseless", "--out", life.string()}).code == 0);
  r = call({"fit", "lifetime", "--input", life.string(), "--irf-fwhm", "0.53"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["values"][0].get<double>() == doctest::Approx(10.43).epsilon(5e-3));
  CHECK(j["derived"]["lifetime_limited_linewidth_mhz"].get<double>() == doctest::Approx(15.26).epsilon(5e-3));
}

TEST_CASE("metrics on a synthetic spectrum") {
  const auto data = scratch("spec.csv");
  REQUIRE(call({"synth", "spectrum", "--noiseless", "--out", data.string()}).code == 0);
  auto r = call({"metrics", "--input", data.string(), "--background", "linear", "--bg-window", "850,870",
                 "--bg-window", "1105,1120"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["dw"].get<double>() == doctest::Approx(0.62).epsilon(2e-3));
  CHECK(j["huang_rhys"].get<double>() == doctest::Approx(0.478).epsilon(5e-3));

  r = call({"metrics", "--input", data.string(), "--zpl-window", "882,1100"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["dw"].get<double>() == 1.0);
  CHECK(j["huang_rhys"].get<double>() == 0.0);

  const auto empty = scratch("empty.csv");
  put(empty, "");
  CHECK(call({"metrics", "--input", empty.string()}).code == 2);
  CHECK(call({"metrics", "--input", data.string(), "--zpl-window", "882"}).code == 2);
}

TEST_CASE("validate") {
  const auto good = scratch("good.csv");
  put(good, "wavelength_nm,counts\n880,1\n881,2\n882,3\n");
  auto r = call({"validate", "--schema", "spectrum", "--input", good.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("3 rows") != std::string::npos);

  const auto unordered = scratch("unordered.csv");
  put(unordered, "wavelength_nm,counts\n880,1\n881,2\n879,3\n883,1\n");
  r = call({"validate", "--schema", "spectrum", "--input", unordered.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 4:") != std::string::npos);

  const auto header = scratch("header.csv");
  put(header, "wl,counts\n880,1\n");
  r = call({"validate", "--schema", "spectrum", "--input", header.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("expected [wavelength_nm, counts]") != std::string::npos);
  CHECK(r.err.find("found [wl, counts]") != std::string::npos);

  CHECK(call({"validate", "--schema", "nope", "--input", good.string()}).code == 2);
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto a = call({"simulate-zeeman", "--b-step", "0.25"});
  const auto b = call({"simulate-zeeman", "--b-step", "0.25"});
  CHECK(a.out == b.out);
  const auto s1 = call({"synth", "decay", "--seed", "7"});
  const auto s2 = call({"synth", "decay", "--seed", "7"});
  const auto s3 = call({"synth", "decay", "--seed", "8"});
  CHECK(s1.out == s2.out);
  CHECK(s1.out != s3.out);
}

TEST_CASE("help documents the speed of light and exit codes") {
  const auto r = call({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("299792458") != std::string::npos);
  CHECK(r.out.find("3") != std::string::npos);
}

TEST_CASE("installed binary runs end to end") {
  const auto out = scratch("bin.csv");
  const std::string cmd = std::string("\"") + COLORCENTER_BINARY + "\" simulate-zeeman --b-max 1 --out \"" +
                          out.string() + "\"";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(data_rows(slurp(out)) == 3 * 8);
  const std::string bad = std::string("\"") + COLORCENTER_BINARY + "\" validate --schema spectrum --input \"" +
                          scratch("missing.csv").string() + "\" 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
