#include "zeeman/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace zeeman::cli {

using nlohmann::json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(field, "expected a [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json state_json(const QuantumState& s) {
  json basis = json::array();
  json amps = json::array();
  for (std::size_t i = 0; i < s.basis.size(); ++i) {
    basis.push_back({s.basis[i].photons, value(s.basis[i].m1), value(s.basis[i].m2)});
    amps.push_back(complex_json(s.amplitudes(static_cast<Eigen::Index>(i))));
  }
  return {{"basis", basis}, {"amplitudes", amps}};
}

QuantumState state_from(const json& j) {
  QuantumState s;
  const auto& amps = j.at("amplitudes");
  for (const auto& b : j.at("basis")) {
    s.basis.push_back({b.at(0).get<int>(), level_from_int(b.at(1).get<int>()),
                       level_from_int(b.at(2).get<int>())});
  }
  s.amplitudes.resize(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    s.amplitudes(static_cast<Eigen::Index>(i)) = complex_from(amps[i], "amplitudes");
  }
  return s;
}

json density_json(const DensityMatrix& d) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < d.rho.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < d.rho.cols(); ++c) row.push_back(complex_json(d.rho(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"dims", d.dims}, {"entries", rows}};
}

DensityMatrix density_from(const json& j) {
  DensityMatrix d;
  d.dims = j.at("dims").get<std::vector<int>>();
  const auto& rows = j.at("entries");
  const auto n = static_cast<Eigen::Index>(rows.size());
  d.rho.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      d.rho(r, c) = complex_from(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], "entries");
  return d;
}

json params_json(const PhysicalParams& p) {
  return {{"g", p.g}, {"alpha", p.alpha}, {"beta", p.beta}, {"omega", p.omega}};
}

template <class F>
auto parallel_map(std::size_t n, bool parallel, F f) -> std::vector<decltype(f(std::size_t{}))> {
  std::vector<decltype(f(std::size_t{}))> out(n);
  const std::size_t workers =
      parallel ? std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency())) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

BasisState initial_state(const RunConfig& c) {
  try {
    return {c.initial[0], level_from_int(c.initial[1]), level_from_int(c.initial[2])};
  } catch (const std::invalid_argument& e) {
    throw ConfigError("initial", e.what());
  }
}

OperatorMatrix coupling_from(const json& j) {
  if (!j.is_object() || !j.contains("basis") || !j.contains("matrix")) {
    throw ConfigError("coupling", "expected {\"basis\": [...], \"matrix\": [...]}");
  }
  OperatorMatrix w;
  for (const json& b : j["basis"]) {
    if (!b.is_array() || b.size() != 3 ||
        !std::all_of(b.begin(), b.end(), [](const json& x) { return x.is_number_integer(); })) {
      throw ConfigError("coupling.basis", "expected [photons, m1, m2] integers");
    }
    try {
      w.basis.push_back({b[0].get<int>(), level_from_int(b[1].get<int>()), level_from_int(b[2].get<int>())});
    } catch (const std::invalid_argument& e) {
      throw ConfigError("coupling.basis", e.what());
    }
  }
  const json& rows = j["matrix"];
  const auto d = static_cast<Eigen::Index>(w.basis.size());
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d) {
    throw ConfigError("coupling.matrix", "expected one row per basis state");
  }
  w.matrix.resize(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw ConfigError("coupling.matrix", "expected a square matrix");
    }
    for (Eigen::Index c = 0; c < d; ++c) w.matrix(r, c) = complex_from(row[static_cast<std::size_t>(c)], "coupling.matrix");
  }
  return w;
}

json coupling_json(const OperatorMatrix& w) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < w.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < w.matrix.cols(); ++c) row.push_back(complex_json(w.matrix(r, c)));
    rows.push_back(std::move(row));
  }
  json basis = json::array();
  for (const auto& b : w.basis) basis.push_back({b.photons, value(b.m1), value(b.m2)});
  return {{"basis", basis}, {"matrix", rows}};
}

std::string config_comment(const json& config) { return "# config=" + config.dump() + "\n"; }

RunOutput run_evolve(const RunConfig& c, const json& cfg) {
  const BasisState start = initial_state(c);
  if (start.photons < 0) throw ConfigError("initial", "photon number must be non-negative");
  Sector sector = c.coupling ? Sector{conserved_number(start), c.coupling->basis}
                              : sector_basis(conserved_number(start));
  if (std::find(sector.basis.begin(), sector.basis.end(), start) == sector.basis.end()) {
    throw ConfigError("initial", label(start) + " is not in coupling.basis");
  }
  const QuantumState psi0 = QuantumState::basis_vector(sector.basis, start);
  const auto grid = c.grid.points();
  const auto frames = parallel_map(grid.size(), c.parallel, [&](std::size_t k) {
    const double t = grid[k] / c.params.g;
    return c.coupling ? evolve_with_coupling(psi0, *c.coupling, t, c.params) : evolve(psi0, t, c.params);
  });

  std::string text;
  if (c.format == Format::csv) {
    text = config_comment(cfg) + "gt,basis_label,re,im,prob\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (std::size_t i = 0; i < sector.basis.size(); ++i) {
        const cplx a = frames[k].amplitudes(static_cast<Eigen::Index>(i));
        text += num(grid[k]) + "," + label(sector.basis[i]) + "," + num(a.real()) + "," +
                num(a.imag()) + "," + num(std::norm(a)) + "\n";
      }
    }
  } else {
    json out = {{"schema_version", kSchemaVersion}, {"command", "evolve"}, {"config", cfg}};
    if (c.coupling) {
      out["conserved_n"] = nullptr;
    } else {
      out["conserved_n"] = sector.conserved_n;
    }
    json fr = json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      fr.push_back({{"gt", grid[k]}, {"state", state_json(frames[k])}});
    }
    out["frames"] = fr;
    text = out.dump(2) + "\n";
  }
  return {text, kSuccess};
}

RunOutput run_verify(const RunConfig& c, const json& cfg) {
  if (!c.params.resonant()) throw ConfigError("params.omega", "verify needs omega == beta");
  if (c.params.alpha != 0.0) throw ConfigError("params.alpha", "verify checks the alpha = 0 closed forms");
  const SpectralPropagator n0(interaction_block(0, c.params));
  const SpectralPropagator nm1(interaction_block(-1, c.params));
  const auto grid = c.grid.points();
  struct Row {
    double err_n0, err_nm1;
  };
  const auto rows = parallel_map(grid.size(), c.parallel, [&](std::size_t k) {
    const double t = grid[k] / c.params.g;
    const double e0 = (propagator_closed_n0(t, c.params.g).matrix - n0.at(t).matrix).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd numeric = std::exp(cplx{0.0, c.params.omega * t}) * nm1.at(t).matrix;
    const double e1 = (propagator_closed_nm1(t, c.params).matrix - numeric).cwiseAbs().maxCoeff();
    return Row{e0, e1};
  });
  double max0 = 0.0, max1 = 0.0;
  for (const auto& r : rows) {
    max0 = std::max(max0, r.err_n0);
    max1 = std::max(max1, r.err_nm1);
  }
  const bool pass = max0 < kVerifyTolerance && max1 < kVerifyTolerance;

  std::string text;
  if (c.format == Format::csv) {
    text = config_comment(cfg) + "gt,max_abs_err_eq8,max_abs_err_eq14\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      text += num(grid[k]) + "," + num(rows[k].err_n0) + "," + num(rows[k].err_nm1) + "\n";
    }
  } else {
    json out = {{"schema_version", kSchemaVersion}, {"command", "verify"}, {"config", cfg}};
    out["max_abs_err_eq8"] = max0;
    out["max_abs_err_eq14"] = max1;
    out["tolerance"] = kVerifyTolerance;
    out["pass"] = pass;
    json r = json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      r.push_back({{"gt", grid[k]}, {"max_abs_err_eq8", rows[k].err_n0}, {"max_abs_err_eq14", rows[k].err_nm1}});
    }
    out["rows"] = r;
    text = out.dump(2) + "\n";
  }
  return {text, pass ? kSuccess : kToleranceFailure};
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& what)
    : std::runtime_error("field '" + field + "': " + what), field_(field) {}

std::vector<double> TimeGrid::points() const {
  std::vector<double> p(static_cast<std::size_t>(std::max(steps, 0)));
  for (int k = 0; k < steps; ++k) {
    p[static_cast<std::size_t>(k)] = steps == 1 ? start : start + (stop - start) * k / (steps - 1);
  }
  return p;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::evolve: return "evolve";
    case Command::verify: return "verify";
    case Command::epr: return "epr";
    case Command::exchange: return "exchange";
    case Command::transfer: return "transfer";
    case Command::feedback: return "feedback";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::evolve, Command::verify, Command::epr, Command::exchange,
                    Command::transfer, Command::feedback}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("protocol", "unknown protocol '" + s + "'");
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("output.format", "must be csv or json, got '" + s + "'");
}

RunConfig default_config(Command c) {
  RunConfig cfg;
  cfg.command = c;
  switch (c) {
    case Command::exchange:
      cfg.initial = {0, 0, -1};
      cfg.n_period = 0;
      break;
    case Command::transfer: cfg.n_period = 0; break;
    default: break;
  }
  return cfg;
}

RunConfig merge_config(RunConfig base, const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  const auto number = [](const json& obj, const char* key, const std::string& path, auto& dst) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    using T = std::decay_t<decltype(dst)>;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
      dst = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) {
          dst = v.get<T>();
        } else if (v.get<std::int64_t>() < 0) {
          throw ConfigError(path, "expected a non-negative integer");
        } else {
          dst = static_cast<T>(v.get<std::int64_t>());
        }
      } else {
        dst = v.get<T>();
      }
    } else {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
      dst = v.get<T>();
    }
  };

  if (j.contains("protocol")) {
    if (!j["protocol"].is_string()) throw ConfigError("protocol", "expected a string");
    base.command = command_from_string(j["protocol"].get<std::string>());
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ConfigError("params", "expected an object");
    number(p, "g", "params.g", base.params.g);
    number(p, "alpha", "params.alpha", base.params.alpha);
    number(p, "beta", "params.beta", base.params.beta);
    number(p, "omega", "params.omega", base.params.omega);
  }
  if (j.contains("time_grid")) {
    const json& g = j["time_grid"];
    if (!g.is_object()) throw ConfigError("time_grid", "expected an object");
    number(g, "start", "time_grid.start", base.grid.start);
    number(g, "stop", "time_grid.stop", base.grid.stop);
    number(g, "steps", "time_grid.steps", base.grid.steps);
  }
  number(j, "n_period", "n_period", base.n_period);
  if (j.contains("c1")) base.c1 = complex_from(j["c1"], "c1");
  if (j.contains("c2")) base.c2 = complex_from(j["c2"], "c2");
  number(j, "cycles", "cycles", base.cycles);
  number(j, "drift", "drift", base.drift);
  number(j, "gamma", "gamma", base.gamma);
  number(j, "seed", "seed", base.seed);
  number(j, "parallel", "parallel", base.parallel);
  if (j.contains("initial")) {
    const json& v = j["initial"];
    if (!v.is_array() || v.size() != 3 ||
        !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); })) {
      throw ConfigError("initial", "expected [photons, m1, m2] integers");
    }
    base.initial = {v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
  }
  if (j.contains("coupling")) base.coupling = coupling_from(j["coupling"]);
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path", "expected a string");
      base.out = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output.format", "expected a string");
      base.format = format_from_string(o["format"].get<std::string>());
    }
  }
  return base;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, e.what());
  }
}

void validate(const RunConfig& c) {
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  if (c.grid.steps < 1) throw ConfigError("time_grid.steps", "must be >= 1");
  if (!(c.grid.stop >= c.grid.start)) throw ConfigError("time_grid.stop", "must be >= time_grid.start");
  if (!std::isfinite(c.grid.start) || !std::isfinite(c.grid.stop)) {
    throw ConfigError("time_grid", "bounds must be finite");
  }
  if (c.command == Command::epr && c.n_period < 1) throw ConfigError("n_period", "must be >= 1");
  if (c.n_period < 0) throw ConfigError("n_period", "must be >= 0");
  if (c.command == Command::transfer &&
      std::abs(std::norm(c.c1) + std::norm(c.c2) - 1.0) > 1e-10) {
    throw ConfigError("c1", "|c1|^2 + |c2|^2 must equal 1");
  }
  if (c.cycles < 1) throw ConfigError("cycles", "must be >= 1");
  if (!(std::abs(c.drift) < 1.0)) throw ConfigError("drift", "|drift| must be < 1");
  if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma)) throw ConfigError("gamma", "must be finite and >= 0");
  if (c.coupling) {
    if (c.command != Command::evolve) throw ConfigError("coupling", "only the evolve command accepts a coupling");
    const Basis& b = c.coupling->basis;
    if (b.empty()) throw ConfigError("coupling.basis", "must not be empty");
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i].photons < 0) throw ConfigError("coupling.basis", "photon numbers must be non-negative");
      if (std::find(b.begin() + static_cast<std::ptrdiff_t>(i) + 1, b.end(), b[i]) != b.end()) {
        throw ConfigError("coupling.basis", "duplicate state " + label(b[i]));
      }
    }
    if (!c.coupling->is_hermitian()) throw ConfigError("coupling.matrix", "must be Hermitian");
  }
}

json to_json(const RunConfig& c) {
  json j = {{"protocol", to_string(c.command)},
          {"params", params_json(c.params)},
          {"time_grid", {{"start", c.grid.start}, {"stop", c.grid.stop}, {"steps", c.grid.steps}}},
          {"n_period", c.n_period},
          {"c1", complex_json(c.c1)},
          {"c2", complex_json(c.c2)},
          {"cycles", c.cycles},
          {"drift", c.drift},
          {"gamma", c.gamma},
          {"seed", c.seed},
          {"initial", c.initial},
          {"output", {{"path", c.out}, {"format", to_string(c.format)}}},
          {"parallel", c.parallel}};
  if (c.coupling) j["coupling"] = coupling_json(*c.coupling);
  return j;
}

json to_json(const ProtocolReport& r) {
  json schedule = json::array();
  for (const auto& e : r.schedule) {
    schedule.push_back({{"event", e.event}, {"time", e.time}, {"gt", e.time * r.params.g}});
  }
  json outcomes = json::array();
  for (const auto& o : r.outcomes) {
    outcomes.push_back({{"photon_count", o.photon_count},
                        {"probability", o.probability},
                        {"conditional_state", state_json(o.conditional_state)}});
  }
  json states = json::array();
  for (const auto& s : r.final_states) states.push_back({{"name", s.name}, {"state", state_json(s.state)}});
  json dens = json::array();
  for (const auto& d : r.reduced_states) dens.push_back({{"name", d.name}, {"density", density_json(d.rho)}});
  json out = {{"protocol", r.protocol_name},
              {"params", params_json(r.params)},
              {"schedule", schedule},
              {"outcomes", outcomes},
              {"final_states", states},
              {"reduced_states", dens},
              {"figures_of_merit", r.figures_of_merit}};
  out["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return out;
}

ProtocolReport report_from_json(const json& j) {
  ProtocolReport r;
  r.protocol_name = j.at("protocol").get<std::string>();
  const auto& p = j.at("params");
  r.params = {p.at("g").get<double>(), p.at("alpha").get<double>(), p.at("beta").get<double>(),
              p.at("omega").get<double>()};
  for (const auto& e : j.at("schedule")) r.schedule.push_back({e.at("event"), e.at("time")});
  for (const auto& o : j.at("outcomes")) {
    r.outcomes.push_back({o.at("photon_count").get<int>(), o.at("probability").get<double>(),
                          state_from(o.at("conditional_state"))});
  }
  for (const auto& s : j.at("final_states")) r.final_states.push_back({s.at("name"), state_from(s.at("state"))});
  for (const auto& d : j.at("reduced_states")) r.reduced_states.push_back({d.at("name"), density_from(d.at("density"))});
  r.figures_of_merit = j.at("figures_of_merit").get<std::map<std::string, double>>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

std::string emit(const std::vector<ProtocolReport>& reports, Format format, const json& config) {
  for (const auto& r : reports) r.validate();
  if (format == Format::json) {
    json out = {{"schema_version", kSchemaVersion}, {"config", config}};
    out["command"] = config.value("protocol", std::string{});
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    out["reports"] = arr;
    return out.dump(2) + "\n";
  }
  std::string text = config_comment(config) + "gt,observable,value\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    const std::string prefix = reports.size() > 1 ? "cycle" + std::to_string(k) + "." : "";
    const double gt = r.schedule.empty() ? 0.0 : r.schedule.back().time * r.params.g;
    for (const auto& o : r.outcomes) {
      text += num(gt) + "," + prefix + "P(photons=" + std::to_string(o.photon_count) + ")," +
              num(o.probability) + "\n";
    }
    for (const auto& [name, v] : r.figures_of_merit) text += num(gt) + "," + prefix + name + "," + num(v) + "\n";
  }
  return text;
}

RunOutput execute(const RunConfig& c) {
  validate(c);
  const json cfg = to_json(c);
  std::vector<ProtocolReport> reports;
  switch (c.command) {
    case Command::evolve: return run_evolve(c, cfg);
    case Command::verify: return run_verify(c, cfg);
    case Command::epr: reports.push_back(epr_generate(c.n_period, c.params)); break;
    case Command::exchange: {
      const BasisState s = initial_state(c);
      const Basis basis = exchange_basis();
      if (std::find(basis.begin(), basis.end(), s) == basis.end()) {
        throw ConfigError("initial", label(s) + " is not in sectors -1 or -2");
      }
      reports.push_back(exchange_report(QuantumState::basis_vector(basis, s), c.n_period, c.params));
      break;
    }
    case Command::transfer: reports.push_back(transfer(c.c1, c.c2, c.n_period, c.params)); break;
    case Command::feedback:
      reports = feedback_cycle(c.cycles, DriftModel{c.drift, c.gamma, c.seed}, c.params);
      break;
  }
  return {emit(reports, c.format, cfg), kSuccess};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunOutput result = execute(config);
    if (config.out.empty()) {
      out << result.text;
    } else {
      std::ofstream f(config.out, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot open output file '" + config.out + "'");
      f << result.text;
      f.close();
      if (!f) throw IoError("failed writing output file '" + config.out + "'");
    }
    if (result.status == kToleranceFailure) err << "verify: closed forms exceed tolerance\n";
    return result.status;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}

}  // namespace zeeman::cli
