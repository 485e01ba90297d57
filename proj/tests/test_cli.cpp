#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "tanglebound/charcurve.hpp"
#include "tanglebound/json_io.hpp"
#include "tanglebound/qstate.hpp"

using namespace tanglebound;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("tanglebound_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out_path = work_dir() / ("stdout." + std::to_string(counter));
  const fs::path err_path = work_dir() / ("stderr." + std::to_string(counter));
  ++counter;
  const std::string cmd = env_prefix + TANGLEBOUND_CLI_PATH + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int rc = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

fs::path write_json(const std::string& name, const json& j) {
  const fs::path path = work_dir() / name;
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json span_problem(double p, int restarts) {
  json witness = observable_to_json(projector_witness(named_state(StateKind::Ghz), 0.0));
  return json{{"witnesses", json::array({witness})},
              {"measured", {-p}},
              {"measure", "tau3"},
              {"space",
               {{"span",
                 json::array({state_to_json(named_state(StateKind::Ghz)),
                              state_to_json(named_state(StateKind::W))})}}},
              {"settings", {{"restarts", restarts}}}};
}

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("--help").out.find("reproduce") != std::string::npos);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("tangle").exit_code == 2);
  CHECK(run_cli("curve nonsense-family").exit_code == 2);
  CHECK(run_cli("bound --no-such-flag").exit_code == 2);
  CHECK(run_cli("reproduce fig99").exit_code == 2);
}

TEST_CASE("tangle prints the breakdown and flags bad input") {
  const fs::path ghz = write_json("ghz.json", state_to_json(named_state(StateKind::Ghz)));
  RunResult r = run_cli("tangle " + ghz.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("quantity,value") != std::string::npos);
  CHECK(r.out.find("tau3,1\n") != std::string::npos);
  CHECK(r.out.find("d1,0.25+0i") != std::string::npos);

  const fs::path w = write_json("w.json", state_to_json(named_state(StateKind::W)));
  r = run_cli("tangle " + w.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("tau3,0\n") != std::string::npos);

  r = run_cli("tangle " + ghz.string() + " --format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["tau3"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["d1"][0].get<double>() == doctest::Approx(0.25).epsilon(1e-12));

  CHECK(run_cli("tangle " + (work_dir() / "missing.json").string()).exit_code == 3);
  const fs::path bad = write_json("bad_state.json", json{{"amplitudes", {1, 2}}});
  CHECK(run_cli("tangle " + bad.string()).exit_code == 2);
  json unnorm = state_to_json(named_state(StateKind::Ghz));
  unnorm["amplitudes"][0][0] = 0.9;
  CHECK(run_cli("tangle " + write_json("unnorm.json", unnorm).string()).exit_code == 2);
}

TEST_CASE("tangle is invariant under local rotation of GHZ") {
  const Matrix2 rot = (Matrix2() << Complex(0.8, 0.0), Complex(-0.6, 0.0),
                       Complex(0.0, 0.6), Complex(0.0, 0.8))
                          .finished();
  const PureState rotated =
      apply_local_unitary(named_state(StateKind::Ghz), rot, rot.adjoint(), rot);
  const fs::path path = write_json("ghz_rotated.json", state_to_json(rotated));
  const RunResult r = run_cli("tangle " + path.string() + " --format json");
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["tau3"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("curve emits value and envelope columns") {
  const RunResult r = run_cli("curve ghzw-tau3 --grid 21");
  CHECK(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == std::vector<std::string>{"q", "value", "envelope"});
  CHECK(rows.back() == std::vector<std::string>{"1", "1", "1"});
  CHECK(rows[11][1] == fmt12(tau3_closed_form(0.5, 0.0)));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double q = std::stod(rows[i][0]);
    const double value = std::stod(rows[i][1]);
    const double envelope = std::stod(rows[i][2]);
    CHECK(envelope <= value);
    CHECK(std::abs(envelope - restricted_bound_analytic(q)) <= 1e-3);
  }

  const RunResult sq = run_cli("curve ghzw-tau3sq --grid 5");
  CHECK(sq.exit_code == 0);
  const auto sq_rows = parse_csv(sq.out);
  REQUIRE(sq_rows.size() == 6);
  const double t = tau3_closed_form(0.75, 0.0);
  CHECK(sq_rows[4][1] == fmt12(t * t));

  CHECK(run_cli("curve ghzw-tau3 --grid 5 --out /no-such-dir/x.csv").exit_code == 3);
}

TEST_CASE("bound single point from a problem file") {
  const fs::path prob = write_json("prob068.json", span_problem(0.68, 8));
  const RunResult r = run_cli("bound " + prob.string());
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["epsilon"].get<double>() ==
        doctest::Approx(tau3_closed_form(0.68, 0.0)).epsilon(1e-3));
  CHECK(j["status"].get<std::string>() == "converged");
  CHECK(!j.contains("trace"));

  const RunResult traced = run_cli("bound " + prob.string() + " --trace");
  const json jt = json::parse(traced.out);
  REQUIRE(jt.contains("trace"));
  CHECK(jt["trace"].size() > 10);
  double best = -1e300;
  for (const auto& pt : jt["trace"]) best = std::max(best, pt["value"].get<double>());
  CHECK(jt["epsilon"].get<double>() >= best - 1e-9);

  const RunResult csv = run_cli("bound " + prob.string() + " --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.find("epsilon,") != std::string::npos);
  CHECK(csv.out.find("status,converged") != std::string::npos);
}

TEST_CASE("bound problem validation and mode errors") {
  json bad = span_problem(0.5, 8);
  bad["witnesses"] = json::array();
  CHECK(run_cli("bound " + write_json("bad_prob.json", bad).string()).exit_code == 2);
  CHECK(run_cli("bound " + (work_dir() / "missing_prob.json").string()).exit_code == 3);
  CHECK(run_cli("bound").exit_code == 2);
  const fs::path prob = write_json("prob05.json", span_problem(0.5, 8));
  CHECK(run_cli("bound " + prob.string() + " --omega 0.5").exit_code == 2);
}

TEST_CASE("bound sweep is deterministic and override-able") {
  const std::string args = "bound --grid 5 --restarts 8 --seed 11 --measure tau3";
  const fs::path f1 = work_dir() / "sweep1.csv";
  const fs::path f2 = work_dir() / "sweep2.csv";
  CHECK(run_cli(args + " --out " + f1.string()).exit_code == 0);
  CHECK(run_cli(args + " --out " + f2.string(), "TANGLEBOUND_THREADS=3 ").exit_code == 0);
  const std::string body1 = slurp(f1);
  CHECK(body1 == slurp(f2));

  const auto rows = parse_csv(body1);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"w", "epsilon"});
  CHECK(std::stod(rows[1][0]) == doctest::Approx(-1.0));
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::stod(rows[5][1]) <= 1e-6);

  // The same sweep driven by a problem file.
  const fs::path prob = write_json("prob_sweep.json", span_problem(0.5, 8));
  const RunResult from_file = run_cli("bound " + prob.string() + " --grid 5 --seed 11");
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.out == body1);
}

TEST_CASE("config file supplies defaults and flags win") {
  const fs::path cfg = work_dir() / "sweep.toml";
  std::ofstream(cfg) << "grid=5\nrestarts=8\nseed=11\n";
  const RunResult from_cfg = run_cli("bound --config " + cfg.string());
  CHECK(from_cfg.exit_code == 0);
  CHECK(parse_csv(from_cfg.out).size() == 6);

  const RunResult overridden = run_cli("bound --grid 3 --config " + cfg.string());
  CHECK(overridden.exit_code == 0);
  CHECK(parse_csv(overridden.out).size() == 4);
}

TEST_CASE("reproduce writes artifacts and a passing summary") {
  const fs::path dir = work_dir() / "rep";
  const RunResult r = run_cli("reproduce fig1 --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "fig1_curve.csv"));
  CHECK(parse_csv(slurp(dir / "fig1_curve.csv")).size() == 201);
  const std::string summary = slurp(dir / "fig1_summary.txt");
  CHECK(summary.find("fig1: PASS") != std::string::npos);
  CHECK(summary.find("[FAIL]") == std::string::npos);
}
