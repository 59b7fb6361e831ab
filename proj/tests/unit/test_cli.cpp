#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dancer/cli/config.hpp"
#include "dancer/cli/errors.hpp"
#include "dancer/cli/exponents.hpp"
#include "dancer/cli/io.hpp"
#include "dancer/cli/run.hpp"
#include "dancer/cli/svg.hpp"

using namespace dancer;
using namespace dancer::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / ("dancer_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path path = dir / "input.json";
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dancer-forge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kSmallRun = R"({
  "params": {"m": 1, "n": 4, "p": 3},
  "s_grid": {"r_max": 10, "step": 0.125},
  "r_grid": {"r_max": 20, "step": 0.25},
  "epsilon": 0.01
})";

}  // namespace

TEST(Io, DoublesRoundTripAtSeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = dist(rng) * std::pow(10.0, k % 20 - 10);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Io, ProfileCsvHasOneRowPerNode) {
  const auto f = RadialProfile::sample(RadialGrid(1.0, 0.25), [](double r) { return r * r; });
  EXPECT_EQ(profile_csv(f), "r,value\n0,0\n0.25,0.0625\n0.5,0.25\n0.75,0.5625\n1,1\n");
}

TEST(Io, FieldCsvRunsOverROfEachS) {
  Field2D f(RadialGrid(1.0, 1.0), RadialGrid(1.0, 1.0));
  f(0, 1) = 2.0;
  f(1, 0) = 3.0;
  EXPECT_EQ(field_csv(f), "s,r,value\n0,0,0\n0,1,2\n1,0,3\n1,1,0\n");
}

TEST(Io, SuperpositionCsvEvaluatesTheSum) {
  helmholtz::SourceSet sources{3, 1.0, {{0.0, 0.0, 0.0}}};
  const std::vector<std::vector<double>> points{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  const auto csv = superposition_csv(sources, points);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "y1,y2,y3,value");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  const double value = std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr);
  EXPECT_DOUBLE_EQ(value, helmholtz::superpose(sources, points[1]));
}

TEST(Io, BoundStateJsonHasExactlyTheDocumentedKeys) {
  const auto state = radial::find_bound_state(ProblemParams{1, 4, 3.0}, 0, RadialGrid(16.0, 1.0 / 32.0));
  const auto j = to_json(state);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"center_value", "m", "n", "node_count", "ode_residual", "p", "r_max",
                                            "step"}));
}

TEST(Io, InfiniteTailBoundIsWrittenAsString) {
  norms::NormReport report;
  report.tail_bound = std::numeric_limits<double>::infinity();
  EXPECT_EQ(to_json(report)["tail_bound"], "inf");
}

TEST(Exponents, DocumentedExamples) {
  const auto a = validate_exponents({1, 4, 3.0});
  EXPECT_TRUE(a.main1);
  EXPECT_FALSE(a.main0);
  EXPECT_TRUE(validate_exponents({1, 3, 2.0}).main1_prime);
  EXPECT_TRUE(validate_exponents({1, 6, 2.0}).main0);
  EXPECT_FALSE(validate_exponents({1, 3, 2.5}).any());
  EXPECT_EQ(validate_exponents({1, 3, 2.5}).theorem(), "none");
}

TEST(Exponents, ConstructCoversOnlyTheRadialStatements) {
  EXPECT_TRUE(construct_admissible(validate_exponents({1, 4, 3.0})));
  EXPECT_TRUE(construct_admissible(validate_exponents({1, 3, 3.0})));
  EXPECT_FALSE(construct_admissible(validate_exponents({1, 4, 1.5})));
}

TEST(Config, DefaultsFromEmptyDocument) {
  const auto c = parse_config(Command::construct, nlohmann::json::object());
  EXPECT_EQ(c.params.n, 4);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.01);
  EXPECT_EQ(c.grids.s_grid, RadialGrid(12.0, 1.0 / 16.0));
}

TEST(Config, ErrorsNameTheField) {
  auto field_of = [](const std::string& text) {
    try {
      (void)parse_config(Command::construct, nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"picard": {"tolernce": 1e-9}})"), "picard.tolernce");
  EXPECT_EQ(field_of(R"({"params": {"n": 2}})"), "params.n");
  EXPECT_EQ(field_of(R"({"params": {"p": 1}})"), "params.p");
  EXPECT_EQ(field_of(R"({"params": {"m": 3, "p": 7}})"), "params.p");
  EXPECT_EQ(field_of(R"({"s_grid": {"r_max": 10, "step": 0.3}})"), "s_grid.step");
  EXPECT_EQ(field_of(R"({"s_grid": {"r_max": 10, "step": 0.01}})"), "s_grid.step");
  EXPECT_EQ(field_of(R"({"epsilon": 0.5})"), "epsilon");
  EXPECT_EQ(field_of(R"({"epsilons": [0.01, "x"]})"), "epsilons[1]");
  EXPECT_EQ(field_of(R"({"workers": 0})"), "workers");
  EXPECT_EQ(field_of(R"({"command": "sweep"})"), "command");
  EXPECT_EQ(field_of(R"([1, 2])"), "<root>");
}

TEST(Config, OverridesTakePrecedence) {
  Overrides o;
  o.epsilon = 0.002;
  o.out = "elsewhere";
  o.override_exponents = true;
  const auto c = parse_config(Command::construct, nlohmann::json::parse(R"({"epsilon": 0.02, "out": "x"})"), o);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.002);
  EXPECT_EQ(c.out, fs::path("elsewhere"));
  EXPECT_TRUE(c.override_exponents);
}

TEST(Config, SnapshotReproducesItself) {
  const auto c = parse_config(Command::sweep, nlohmann::json::parse(kSmallRun));
  const auto snap = snapshot(c);
  EXPECT_EQ(snapshot(parse_config(Command::sweep, snap)), snap);
}

TEST(Svg, LinePlotIsStandaloneWithProvenance) {
  const auto text = svg::line_plot({{"a", {0, 1, 2}, {1, 0.5, 0.25}}}, {"t", "x", "y", true, false, "run --x"});
  EXPECT_EQ(text.rfind("<?xml", 0), 0u);
  EXPECT_NE(text.find("<!-- run - -x -->"), std::string::npos);
  EXPECT_NE(text.find("<polyline"), std::string::npos);
  EXPECT_NE(text.find("</svg>"), std::string::npos);
}

TEST(Svg, HeatmapSubsamplesLargeFields) {
  Field2D f(RadialGrid(10.0, 0.01), RadialGrid(1.0, 0.5));
  const auto text = svg::heatmap(f, {"h", "r", "s", false, false, ""}, 50);
  std::size_t rects = 0;
  for (std::size_t pos = 0; (pos = text.find("<rect", pos)) != std::string::npos; ++pos) ++rects;
  EXPECT_LE(rects, 50u * 3u + 20u);
}

TEST(Cli, MalformedConfigReportsFieldAndExitsTwo) {
  const auto dir = scratch("malformed");
  const auto cfg = write_config(dir, R"({"params": {"m": 1, "n": 4, "p": "three"}})");
  const auto r = invoke({"construct", "--config", cfg.string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  const auto diag = nlohmann::json::parse(r.err);
  EXPECT_EQ(diag["field"], "params.p");
}

TEST(Cli, UnparseableJsonAndMissingFlagsExitTwo) {
  const auto dir = scratch("unparseable");
  const auto cfg = write_config(dir, "{ not json");
  EXPECT_EQ(invoke({"construct", "--config", cfg.string()}).code, 2);
  EXPECT_EQ(invoke({"construct"}).code, 2);
  EXPECT_EQ(invoke({"bogus", "--config", cfg.string()}).code, 2);
}

TEST(Cli, ExponentWindowRefusalExitsFour) {
  const auto dir = scratch("refusal");
  const auto cfg = write_config(dir, R"({"params": {"m": 1, "n": 3, "p": 2.5}})");
  const auto r = invoke({"construct", "--config", cfg.string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "exponent_window");
}

TEST(Cli, OverrideLetsConstructRunOutsideTheWindows) {
  const auto dir = scratch("override");
  const auto cfg = write_config(dir, R"({
    "params": {"m": 1, "n": 3, "p": 2.5},
    "s_grid": {"r_max": 10, "step": 0.125},
    "r_grid": {"r_max": 20, "step": 0.25},
    "epsilon": 0.005})");
  const auto refused = invoke({"construct", "--config", cfg.string(), "--out", (dir / "a").string()});
  EXPECT_EQ(refused.code, 4);
  const auto r =
      invoke({"construct", "--config", cfg.string(), "--out", (dir / "b").string(), "--override-exponents"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, NumericalFailureExitsThreeWithReport) {
  const auto dir = scratch("numerical");
  const auto cfg = write_config(dir, R"({
    "s_grid": {"r_max": 10, "step": 0.125},
    "r_grid": {"r_max": 20, "step": 0.25},
    "picard": {"max_outer": 1}})");
  const auto r = invoke({"construct", "--config", cfg.string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 3);
  const auto diag = nlohmann::json::parse(r.err);
  EXPECT_EQ(diag["kind"], "picard");
  EXPECT_EQ(diag["report"]["iterations"], 1);
  EXPECT_TRUE(fs::exists(dir / "out" / "iteration_report.json"));
}

TEST(Cli, ConstructWritesEveryArtifact) {
  const auto dir = scratch("construct");
  const auto cfg = write_config(dir, kSmallRun);
  const auto r = invoke({"construct", "--config", cfg.string(), "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"config.json", "iteration_report.json", "h.csv", "phi.csv", "u.csv", "residuals.csv",
                           "asymptotics.csv", "norms.json", "profiles.svg", "phi_heatmap.svg", "convergence.svg",
                           "asymptotic_ratio.svg", "bound_state.json", "summary.json"})
    EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
  EXPECT_EQ(slurp(dir / "out" / "h.csv").substr(0, 8), "r,value\n");
}

TEST(Cli, ZeroAmplitudeReproducesTheBoundState) {
  const auto dir = scratch("zero");
  const auto cfg = write_config(dir, kSmallRun);
  const auto r = invoke({"construct", "--config", cfg.string(), "--out", (dir / "out").string(), "--epsilon", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(r.out);
  EXPECT_EQ(summary["iterations"], 1);
  EXPECT_EQ(summary["asymptotic_ratio"], 0.0);
  EXPECT_EQ(summary["pde_residual"], summary["baseline_residual"]);
}

TEST(Cli, ArtifactsAreByteIdentical) {
  const auto dir = scratch("determinism");
  const auto cfg = write_config(dir, kSmallRun);
  ASSERT_EQ(invoke({"construct", "--config", cfg.string(), "--out", (dir / "a").string()}).code, 0);
  ASSERT_EQ(invoke({"construct", "--config", cfg.string(), "--out", (dir / "b").string()}).code, 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto other = dir / "b" / entry.path().filename();
    ASSERT_TRUE(fs::exists(other));
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 14u);
}

TEST(Cli, SweepWritesOneSubdirectoryPerAmplitude) {
  const auto dir = scratch("sweep");
  const auto cfg = write_config(dir, R"({
    "s_grid": {"r_max": 10, "step": 0.125},
    "r_grid": {"r_max": 20, "step": 0.25},
    "epsilons": [0.02, 0.01, 0.005],
    "workers": 2})");
  const auto r = invoke({"sweep", "--config", cfg.string(), "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int k = 0; k < 3; ++k) {
    const auto run_dir = dir / "out" / ("run_" + std::to_string(k));
    EXPECT_TRUE(fs::exists(run_dir / "u.csv"));
    const auto snap = nlohmann::json::parse(slurp(run_dir / "config.json"));
    EXPECT_EQ(snap["command"], "construct");
  }
  const auto table = slurp(dir / "out" / "asymptotics.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 4);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "out" / "sweep.json"))["asymptotics"], "decreasing");
}

TEST(Cli, SweepMemberConfigReproducesTheRun) {
  const auto dir = scratch("reproduce");
  const auto cfg = write_config(dir, R"({
    "s_grid": {"r_max": 10, "step": 0.125},
    "r_grid": {"r_max": 20, "step": 0.25},
    "epsilons": [0.02, 0.01]})");
  ASSERT_EQ(invoke({"sweep", "--config", cfg.string(), "--out", (dir / "sweep").string()}).code, 0);
  const auto member = dir / "sweep" / "run_1" / "config.json";
  ASSERT_EQ(invoke({"construct", "--config", member.string(), "--out", (dir / "again").string()}).code, 0);
  EXPECT_EQ(slurp(dir / "sweep" / "run_1" / "u.csv"), slurp(dir / "again" / "u.csv"));
}

TEST(Cli, GroundStateSpectrumHelmholtzAndValidate) {
  const auto dir = scratch("commands");
  const auto cfg = write_config(dir, R"({
    "params": {"m": 1, "n": 3, "p": 2},
    "r_grid": {"r_max": 40, "step": 0.125},
    "helmholtz": {"lambda": 1.0, "half_width": 2, "slice_step": 1, "k1": 0.5}})");
  EXPECT_EQ(invoke({"ground-state", "--config", cfg.string(), "--out", (dir / "g").string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "g" / "w.csv"));
  EXPECT_EQ(invoke({"spectrum", "--config", cfg.string(), "--out", (dir / "s").string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "s" / "eigenfunction_2.csv"));
  const auto spec = nlohmann::json::parse(slurp(dir / "s" / "spectrum.json"));
  EXPECT_EQ(spec["eigenvalues"].size(), 3u);
  EXPECT_EQ(invoke({"helmholtz", "--config", cfg.string(), "--out", (dir / "h").string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "h" / "decomposition.json"));
  EXPECT_TRUE(fs::exists(dir / "h" / "remainder.csv"));
  const auto superposition = slurp(dir / "h" / "superposition.csv");
  EXPECT_EQ(std::count(superposition.begin(), superposition.end(), '\n'), 1 + 25);
  const auto v = invoke({"validate-exponents", "--config", cfg.string(), "--out", (dir / "v").string()});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(nlohmann::json::parse(v.out)["theorem"], "main1_prime");
}
