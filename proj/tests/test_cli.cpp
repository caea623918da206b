#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "zeeman/cli.hpp"

using namespace zeeman;
using namespace zeeman::cli;
using nlohmann::json;

namespace {

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') lines.push_back(l);
  return lines;
}

RunConfig small(Command c) {
  RunConfig cfg = default_config(c);
  cfg.grid = {0.0, 2.0, 5};
  cfg.cycles = 3;
  return cfg;
}

}  // namespace

TEST_CASE("time grid points") {
  CHECK(TimeGrid{1.5, 1.5, 1}.points() == std::vector<double>{1.5});
  const auto p = TimeGrid{0.0, 10.0, 1001}.points();
  CHECK(p.size() == 1001);
  CHECK(p.front() == 0.0);
  CHECK(p.back() == 10.0);
}

TEST_CASE("config merge and field-precise errors") {
  const RunConfig base = default_config(Command::epr);
  const RunConfig c = merge_config(base, json::parse(R"({"params":{"g":2.0},"n_period":3,"c1":[0.6,0.0],
      "output":{"format":"csv"},"seed":18446744073709551615})"));
  CHECK(c.params.g == 2.0);
  CHECK(c.params.omega == base.params.omega);
  CHECK(c.n_period == 3);
  CHECK(c.c1 == cplx{0.6, 0.0});
  CHECK(c.format == Format::csv);
  CHECK(c.seed == 18446744073709551615ull);

  const auto field_of = [&](const char* text) {
    try {
      validate(merge_config(base, json::parse(text)));
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string{"<none>"};
  };
  CHECK(field_of(R"({"params":{"g":"x"}})") == "params.g");
  CHECK(field_of(R"({"time_grid":{"steps":0}})") == "time_grid.steps");
  CHECK(field_of(R"({"time_grid":{"start":3,"stop":1}})") == "time_grid.stop");
  CHECK(field_of(R"({"protocol":"teleport"})") == "protocol");
  CHECK(field_of(R"({"output":{"format":"xml"}})") == "output.format");
  CHECK(field_of(R"({"c1":[1]})") == "c1");
  CHECK(field_of(R"({"seed":-4})") == "seed");
  CHECK(field_of(R"({"n_period":0})") == "n_period");
  CHECK(field_of(R"({"params":{"g":-1}})") == "params");
  CHECK(field_of(R"({"n_period":2})") == "<none>");
}

TEST_CASE("config files report parse positions") {
  const std::string path = "test_cli_bad_config.json";
  {
    std::ofstream f(path);
    f << "{\n  \"params\": {\n    \"g\": 1.0,,\n  }\n}\n";
  }
  try {
    load_config_file(path);
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config_file("does/not/exist.json"), IoError);
}

TEST_CASE("evolve on a single state and a single time has one row") {
  RunConfig c = small(Command::evolve);
  c.grid = {0.0, 0.0, 1};
  c.initial = {0, -1, -1};
  c.format = Format::csv;
  const auto lines = data_lines(execute(c).text);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "gt,basis_label,re,im,prob");
  CHECK(lines[1] == "0,|0>(-1,-1),1,0,1");
}

TEST_CASE("evolve at gt = 0 returns the input state") {
  RunConfig c = small(Command::evolve);
  c.grid = {0.0, 0.0, 1};
  const json j = json::parse(execute(c).text);
  const auto& amps = j["frames"][0]["state"]["amplitudes"];
  const auto& basis = j["frames"][0]["state"]["basis"];
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const bool start = basis[i] == json::array({0, 1, -1});
    CHECK(amps[i][0].get<double>() == (start ? 1.0 : 0.0));
    CHECK(amps[i][1].get<double>() == 0.0);
  }
}

TEST_CASE("verify passes and reports both closed forms") {
  RunConfig c = default_config(Command::verify);
  const RunOutput out = execute(c);
  CHECK(out.status == kSuccess);
  const json j = json::parse(out.text);
  CHECK(j["pass"] == true);
  CHECK(j["rows"].size() == 1001);
  CHECK(j["max_abs_err_eq8"].get<double>() < kVerifyTolerance);
  CHECK(j["max_abs_err_eq14"].get<double>() < kVerifyTolerance);
  c.format = Format::csv;
  const auto lines = data_lines(execute(c).text);
  CHECK(lines.front() == "gt,max_abs_err_eq8,max_abs_err_eq14");
  CHECK(lines.size() == 1002);

  c.params.alpha = 0.1;
  CHECK_THROWS_AS(execute(c), ConfigError);
}

TEST_CASE("outputs are byte-stable") {
  for (Command cmd : {Command::evolve, Command::verify, Command::epr, Command::exchange, Command::transfer,
                      Command::feedback}) {
    for (Format f : {Format::csv, Format::json}) {
      RunConfig c = small(cmd);
      c.format = f;
      c.seed = 77;
      const std::string a = execute(c).text;
      CHECK(a == execute(c).text);
      c.parallel = true;
      CHECK(a != execute(c).text);  // the resolved config records the parallel flag
      RunConfig d = c;
      d.parallel = false;
      CHECK(a == execute(d).text);
    }
  }
}

TEST_CASE("parallel grid evaluation gives the same results") {
  RunConfig c = default_config(Command::verify);
  const json seq = json::parse(execute(c).text);
  c.parallel = true;
  const json par = json::parse(execute(c).text);
  CHECK(seq["rows"] == par["rows"]);
}

TEST_CASE("JSON round trip preserves figures of merit exactly") {
  const std::vector<ProtocolReport> reports = feedback_cycle(2, DriftModel{0.01, 0.01, 5}, PhysicalParams{});
  const json config = to_json(small(Command::feedback));
  const json doc = json::parse(emit(reports, Format::json, config));
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["config"] == config);
  REQUIRE(doc["reports"].size() == 2);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const ProtocolReport back = report_from_json(doc["reports"][k]);
    CHECK(back.figures_of_merit == reports[k].figures_of_merit);
    CHECK(back.seed == reports[k].seed);
    CHECK(back.schedule.size() == reports[k].schedule.size());
    CHECK(back.final_states.front().state.amplitudes == reports[k].final_states.front().state.amplitudes);
    CHECK(back.reduced_states.front().rho.rho == reports[k].reduced_states.front().rho.rho);
  }
  const ProtocolReport epr = epr_generate(1, PhysicalParams{});
  const ProtocolReport back = report_from_json(json::parse(emit({epr}, Format::json, config))["reports"][0]);
  CHECK(back.figures_of_merit == epr.figures_of_merit);
  CHECK(back.outcomes.size() == epr.outcomes.size());
}

TEST_CASE("csv report layout") {
  RunConfig c = small(Command::epr);
  c.format = Format::csv;
  const std::string text = execute(c).text;
  CHECK(text.rfind("# config={", 0) == 0);
  const auto lines = data_lines(text);
  CHECK(lines.front() == "gt,observable,value");
  bool found = false;
  for (const auto& l : lines) found |= l.find(",success_probability,0.2406889872981") != std::string::npos;
  CHECK(found);
}

TEST_CASE("run maps failures onto exit codes") {
  std::ostringstream out, err;
  RunConfig c = small(Command::epr);
  CHECK(run(c, out, err) == kSuccess);
  c.out = "/nonexistent-dir/out.json";
  CHECK(run(c, out, err) == kIoError);
  c = small(Command::epr);
  c.n_period = 0;
  CHECK(run(c, out, err) == kConfigError);
  c = small(Command::epr);
  c.params.omega = c.params.beta + 1.0;
  CHECK(run(c, out, err) == kConfigError);
  c = small(Command::exchange);
  c.initial = {0, 1, -1};
  CHECK(run(c, out, err) == kConfigError);
  CHECK(err.str().find("initial") != std::string::npos);
}

TEST_CASE("evolve accepts a user-supplied coupling") {
  RunConfig c = small(Command::evolve);
  c.initial = {0, 1, -1};
  c.grid = {0.0, 1.5707963267948966, 2};
  const json coupling = json::parse(R"({"coupling":{"basis":[[0,1,-1],[0,-1,1]],
      "matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}})");
  c = merge_config(c, coupling);
  REQUIRE(c.coupling);
  validate(c);
  const json j = json::parse(execute(c).text);
  CHECK(j["config"]["coupling"] == coupling["coupling"]);
  CHECK(j["conserved_n"].is_null());
  const auto& amps = j["frames"][1]["state"]["amplitudes"];
  CHECK(std::abs(amps[0][0].get<double>()) < 1e-12);
  CHECK(std::abs(amps[1][1].get<double>() + 1.0) < 1e-12);

  const auto field_of = [&](RunConfig cfg, const char* text) {
    try {
      validate(merge_config(cfg, json::parse(text)));
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string{"<none>"};
  };
  CHECK(field_of(c, R"({"coupling":{"basis":[[0,1,-1]],"matrix":[[[0,1]]]}})") == "coupling.matrix");
  CHECK(field_of(c, R"({"coupling":{"basis":[[0,1,-1],[0,1,-1]],"matrix":[[[0,0],[0,0]],[[0,0],[0,0]]]}})") ==
        "coupling.basis");
  CHECK(field_of(c, R"({"coupling":{"basis":[[0,2,-1]],"matrix":[[[0,0]]]}})") == "coupling.basis");
  CHECK(field_of(c, R"({"coupling":{"basis":[[0,1,-1]],"matrix":[[[0,0],[0,0]]]}})") == "coupling.matrix");
  CHECK(field_of(small(Command::epr), R"({"coupling":{"basis":[[0,1,-1]],"matrix":[[[0,0]]]}})") == "coupling");
  c.initial = {1, -1, -1};
  CHECK_THROWS_AS(execute(c), ConfigError);
}
