#include "zeeman/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace zeeman {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kSupportTolerance = 1e-14;

const BasisState kEprStart{0, Level::up, Level::down};
const BasisState kUpperExcited{0, Level::mid, Level::down};  // |0>(0,-1)
const BasisState kLowerExcited{0, Level::down, Level::mid};  // |0>(-1,0)
const BasisState kGround{0, Level::down, Level::down};       // |0>(-1,-1)

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

bool excited(const BasisState& s) { return s.m1 != Level::down || s.m2 != Level::down; }

const MeasurementOutcome* find_outcome(const std::vector<MeasurementOutcome>& outcomes, int k) {
  for (const auto& o : outcomes)
    if (o.photon_count == k) return &o;
  return nullptr;
}

double pair_negativity(const QuantumState& pair) {
  return negativity(reduced_density(pair, {Subsystem::atom1, Subsystem::atom2}), 1);
}

Eigen::Index position(const Basis& basis, const BasisState& s) {
  return std::find(basis.begin(), basis.end(), s) - basis.begin();
}

// Two cavities, each on exchange_basis(); rows index cavity A (atoms 1,3), columns
// cavity B (atoms 2,4).
struct TwoCavity {
  Basis basis = exchange_basis();
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(4, 4);

  TensorState tensor() const {
    // (photon_A, atom1, atom3, photon_B, atom2, atom4), each cavity in full_basis(1)
    TensorState t{{2, 3, 3, 2, 3, 3}, Eigen::VectorXcd::Zero(324)};
    for (Eigen::Index i = 0; i < psi.rows(); ++i)
      for (Eigen::Index j = 0; j < psi.cols(); ++j) {
        const int a = full_index(basis[static_cast<std::size_t>(i)], 1);
        const int b = full_index(basis[static_cast<std::size_t>(j)], 1);
        t.amplitudes(a * 18 + b) = psi(i, j);
      }
    return t;
  }
};

struct CycleResult {
  ProtocolReport epr;
  ProtocolReport transfer;
  double success_probability = 0.0;
  double fidelity = 0.0;
};

CycleResult simulate_cycle(double g_true, double g_scheduled, const PhysicalParams& base,
                           double gamma) {
  PhysicalParams p = base;
  p.g = g_true;
  CycleResult r;
  r.epr = epr_run(epr_time(1, g_scheduled), p);
  r.success_probability = r.epr.figure("success_probability");
  const MeasurementOutcome* hit = find_outcome(r.epr.outcomes, 1);
  if (hit == nullptr) return r;
  const cplx c1 = hit->conditional_state.amplitude({1, Level::mid, Level::down});
  const cplx c2 = hit->conditional_state.amplitude({1, Level::down, Level::mid});
  const double n = std::sqrt(std::norm(c1) + std::norm(c2));
  r.transfer = transfer_run(c1 / n, c2 / n, exchange_time(0, g_scheduled), p, gamma);
  r.fidelity = clamp01(fidelity(r.transfer.density("atoms34_final"), atomic_amplitudes(epr_target(0))));
  return r;
}

}  // namespace

const QuantumState& ProtocolReport::state(const std::string& name) const {
  for (const auto& s : final_states)
    if (s.name == name) return s.state;
  throw std::out_of_range("report has no state named " + name);
}

const DensityMatrix& ProtocolReport::density(const std::string& name) const {
  for (const auto& d : reduced_states)
    if (d.name == name) return d.rho;
  throw std::out_of_range("report has no density matrix named " + name);
}

double ProtocolReport::figure(const std::string& name) const {
  const auto it = figures_of_merit.find(name);
  if (it == figures_of_merit.end()) throw std::out_of_range("report has no figure " + name);
  return it->second;
}

void ProtocolReport::validate() const {
  for (const auto& o : outcomes) {
    if (o.probability < 0.0 || o.probability > 1.0 + 1e-12) {
      throw std::logic_error("outcome probability outside [0, 1]");
    }
  }
  for (const auto& [name, v] : figures_of_merit) {
    const bool bounded = name.find("probability") != std::string::npos ||
                         name.find("fidelity") != std::string::npos;
    if (bounded && (v < 0.0 || v > 1.0)) throw std::logic_error(name + " outside [0, 1]");
  }
  double last = 0.0;
  for (const auto& e : schedule) {
    if (e.time < 0.0 || e.time < last) throw std::logic_error("schedule is not non-decreasing");
    last = e.time;
  }
}

void DriftModel::validate() const {
  if (!(damping_gamma >= 0.0) || !std::isfinite(damping_gamma)) {
    throw std::invalid_argument("damping gamma must be a finite non-negative rate");
  }
  if (!(std::abs(g_drift_rate) < 1.0)) throw std::invalid_argument("|g drift rate| must be < 1");
}

QuantumState epr_initial_state() { return QuantumState::basis_vector(sector_basis(0).basis, kEprStart); }

QuantumState epr_target(int photons) {
  return pair_state(photons, {{0, -1, 1.0}, {-1, 0, -1.0}});
}

double epr_time(int n_period, double g) {
  return 2.0 * n_period * std::numbers::pi / (std::sqrt(7.0) * g);
}

double exchange_time(int n_period, double g) {
  return (2.0 * n_period + 1.0) * std::numbers::pi / (std::sqrt(2.0) * g);
}

ProtocolReport epr_run(double t, const PhysicalParams& params) {
  if (!(t >= 0.0)) throw std::invalid_argument("protocol time must be non-negative");
  const QuantumState evolved = evolve(epr_initial_state(), t, params);

  ProtocolReport r;
  r.protocol_name = "epr";
  r.params = params;
  r.schedule = {{"prepare |0>(1,-1)", 0.0}, {"measure photons", t}};
  r.outcomes = measure_photons(evolved);
  r.final_states.push_back({"evolved", evolved});

  const auto* one = find_outcome(r.outcomes, 1);
  const auto* zero = find_outcome(r.outcomes, 0);
  const auto* two = find_outcome(r.outcomes, 2);
  r.figures_of_merit["success_probability"] = one ? clamp01(one->probability) : 0.0;
  r.figures_of_merit["fidelity_to_target"] =
      one ? clamp01(fidelity(one->conditional_state, epr_target(1))) : 0.0;
  r.figures_of_merit["negativity"] = one ? pair_negativity(one->conditional_state) : 0.0;
  r.figures_of_merit["photon0_probability"] = zero ? clamp01(zero->probability) : 0.0;
  r.figures_of_merit["photon0_negativity"] = zero ? pair_negativity(zero->conditional_state) : 0.0;
  r.figures_of_merit["photon2_probability"] = two ? clamp01(two->probability) : 0.0;
  if (one) r.final_states.push_back({"post_selected_1", one->conditional_state});
  if (zero) r.final_states.push_back({"post_selected_0", zero->conditional_state});

  double alpha_infidelity = 0.0;
  if (params.alpha != 0.0) {
    PhysicalParams ideal = params;
    ideal.alpha = 0.0;
    alpha_infidelity = 1.0 - clamp01(fidelity(evolved, evolve(epr_initial_state(), t, ideal)));
  }
  r.figures_of_merit["alpha_infidelity"] = alpha_infidelity;
  return r;
}

ProtocolReport epr_generate(int n_period, const PhysicalParams& params) {
  if (n_period <= 0) throw std::invalid_argument("n_period must be a positive integer");
  params.validate();
  if (!params.resonant()) throw OffResonanceError();
  ProtocolReport r = epr_run(epr_time(n_period, params.g), params);
  r.figures_of_merit["n_period"] = n_period;
  return r;
}

QuantumState state_at(double t, const PhysicalParams& params) {
  if (!params.resonant()) throw OffResonanceError();
  return evolve(epr_initial_state(), t, params);
}

Basis exchange_basis() {
  Basis b = sector_basis(-1).basis;
  for (const auto& s : sector_basis(-2).basis) b.push_back(s);
  return b;
}

QuantumState local_exchange(const QuantumState& joint_state, int n_period,
                            const PhysicalParams& params) {
  if (n_period < 0) throw std::invalid_argument("n_period must be non-negative");
  joint_state.check();
  for (std::size_t i = 0; i < joint_state.basis.size(); ++i) {
    const int n = conserved_number(joint_state.basis[i]);
    if (n != -1 && n != -2 &&
        std::abs(joint_state.amplitudes(static_cast<Eigen::Index>(i))) > kSupportTolerance) {
      throw std::invalid_argument("local exchange needs support on sectors -1 and -2 only; " +
                                  label(joint_state.basis[i]) + " has N = " + std::to_string(n));
    }
  }
  return evolve(joint_state, exchange_time(n_period, params.g), params);
}

ProtocolReport exchange_report(const QuantumState& input, int n_period,
                               const PhysicalParams& params) {
  const double t = exchange_time(n_period, params.g);
  const QuantumState once = local_exchange(input, n_period, params);
  const QuantumState twice = local_exchange(once, n_period, params);

  QuantumState swapped = input;
  for (std::size_t i = 0; i < input.basis.size(); ++i) {
    const BasisState& s = input.basis[i];
    if (s == kUpperExcited) swapped.amplitudes(static_cast<Eigen::Index>(i)) = input.amplitude(kLowerExcited);
    if (s == kLowerExcited) swapped.amplitudes(static_cast<Eigen::Index>(i)) = input.amplitude(kUpperExcited);
  }
  const double sn = swapped.norm();
  if (sn > 0.0) swapped.amplitudes /= sn;

  // Sectors -1 and -2 pick up different free phases, so superpositions across them are
  // compared in the frame co-rotating with H0.
  const QuantumState once_frame = to_interaction_picture(once, t, params);
  const QuantumState twice_frame = to_interaction_picture(twice, 2.0 * t, params);

  ProtocolReport r;
  r.protocol_name = "exchange";
  r.params = params;
  r.schedule = {{"enter cavity", 0.0}, {"exchange", t}, {"second exchange", 2.0 * t}};
  r.final_states = {{"input", input},
                    {"exchanged", once},
                    {"swapped_target", swapped},
                    {"twice", twice},
                    {"exchanged_frame", once_frame},
                    {"twice_frame", twice_frame}};
  r.figures_of_merit["fidelity_to_swapped"] = clamp01(fidelity(once_frame, swapped));
  r.figures_of_merit["fidelity_double_exchange"] = clamp01(fidelity(twice_frame, input));
  r.figures_of_merit["fidelity_to_swapped_lab"] = clamp01(fidelity(once, swapped));
  r.figures_of_merit["fidelity_double_exchange_lab"] = clamp01(fidelity(twice, input));
  r.figures_of_merit["n_period"] = n_period;
  return r;
}

ProtocolReport transfer(cplx c1, cplx c2, int n_period, const PhysicalParams& params) {
  if (n_period < 0) throw std::invalid_argument("n_period must be non-negative");
  ProtocolReport r = transfer_run(c1, c2, exchange_time(n_period, params.g), params);
  r.figures_of_merit["n_period"] = n_period;
  return r;
}

ProtocolReport transfer_run(cplx c1, cplx c2, double t, const PhysicalParams& params,
                            double damping_gamma) {
  if (std::abs(std::norm(c1) + std::norm(c2) - 1.0) > kNormTolerance) {
    throw std::invalid_argument("transfer needs |c1|^2 + |c2|^2 = 1");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("protocol time must be non-negative");

  TwoCavity cav;
  const auto up = position(cav.basis, kUpperExcited);
  const auto low = position(cav.basis, kLowerExcited);
  const auto ground = position(cav.basis, kGround);
  // c1 |0,-1>_12 |-1,-1>_34  ->  A = (0,-1)_13, B = (-1,-1)_24
  cav.psi(up, ground) = c1;
  cav.psi(ground, up) = c2;
  const DensityMatrix before = reduced_density(cav.tensor(), {1, 4});

  const Eigen::MatrixXcd u = propagator_on(cav.basis, t, params).matrix;
  cav.psi = (u * cav.psi * u.transpose()).eval();

  const cplx expected_phase = -std::exp(cplx{0.0, 3.0 * params.omega * t});
  const cplx final1 = cav.psi(low, ground);
  const cplx final2 = cav.psi(ground, low);
  double phase_error = 0.0;
  double relative_phase_error = 0.0;
  if (std::abs(c1) > 1e-12) phase_error = std::max(phase_error, std::abs(final1 / c1 - expected_phase));
  if (std::abs(c2) > 1e-12) phase_error = std::max(phase_error, std::abs(final2 / c2 - expected_phase));
  if (std::abs(c1) > 1e-12 && std::abs(c2) > 1e-12) {
    relative_phase_error = std::abs(std::arg((final2 / c2) / (final1 / c1)));
  }

  double survival = 1.0;
  if (damping_gamma > 0.0) {
    const double decay = std::exp(-damping_gamma * t / 2.0);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j)
        if (excited(cav.basis[static_cast<std::size_t>(i)]) || excited(cav.basis[static_cast<std::size_t>(j)]))
          cav.psi(i, j) *= decay;
    survival = cav.psi.squaredNorm();
    cav.psi /= std::sqrt(survival);
  }
  const DensityMatrix after = reduced_density(cav.tensor(), {2, 5});
  const QuantumState target = pair_state(0, {{0, -1, c1}, {-1, 0, c2}});

  ProtocolReport r;
  r.protocol_name = "transfer";
  r.params = params;
  r.schedule = {{"atoms 3,4 enter cavities", 0.0}, {"exchange complete", t}};
  r.final_states = {{"atoms34_target", target}};
  r.reduced_states = {{"atoms12_initial", before}, {"atoms34_final", after}};
  r.figures_of_merit["fidelity_to_target"] = clamp01(fidelity(after, atomic_amplitudes(target)));
  r.figures_of_merit["negativity_before"] = negativity(before, 1);
  r.figures_of_merit["negativity_after"] = negativity(after, 1);
  r.figures_of_merit["branch_phase_re"] = expected_phase.real();
  r.figures_of_merit["branch_phase_im"] = expected_phase.imag();
  r.figures_of_merit["phase_audit_error"] = phase_error;
  r.figures_of_merit["relative_phase_error"] = relative_phase_error;
  r.figures_of_merit["survival_probability"] = clamp01(survival);
  r.figures_of_merit["excited_time"] = t;
  return r;
}

double apply_damping(QuantumState& state, double gamma, double t) {
  if (gamma < 0.0) throw std::invalid_argument("damping gamma must be non-negative");
  const double decay = std::exp(-gamma * t / 2.0);
  for (std::size_t i = 0; i < state.basis.size(); ++i) {
    if (excited(state.basis[i])) state.amplitudes(static_cast<Eigen::Index>(i)) *= decay;
  }
  const double survival = state.amplitudes.squaredNorm();
  if (survival > 0.0) state.amplitudes /= std::sqrt(survival);
  return survival;
}

std::vector<ProtocolReport> feedback_cycle(int cycles, const DriftModel& drift,
                                           const PhysicalParams& params) {
  if (cycles < 1) throw std::invalid_argument("cycles must be a positive integer");
  drift.validate();
  params.validate();
  if (!params.resonant()) throw OffResonanceError();

  constexpr double kBracket = 0.05;
  constexpr double kCoarse = 1e-3;
  constexpr double kFine = 1e-4;

  std::mt19937_64 rng(drift.seed);
  double g_true = params.g;
  double g_est = params.g;
  double clock = 0.0;
  std::vector<ProtocolReport> reports;

  for (int cycle = 0; cycle < cycles; ++cycle) {
    const double g_before = g_est;
    const CycleResult observed = simulate_cycle(g_true, g_est, params, drift.damping_gamma);

    // Predicted measurement record if the true coupling were `candidate`.
    const auto mismatch = [&](double candidate) {
      const CycleResult p = simulate_cycle(candidate, g_before, params, drift.damping_gamma);
      const double dp = p.success_probability - observed.success_probability;
      const double df = p.fidelity - observed.fidelity;
      return dp * dp + df * df;
    };
    const auto search = [&](double centre, double half_width, double step) {
      const int half = static_cast<int>(std::lround(half_width / step));
      double best = centre;
      double best_cost = mismatch(centre);
      for (int k = 1; k <= half; ++k) {
        for (double sign : {-1.0, 1.0}) {
          const double cand = centre * (1.0 + sign * k * step);
          const double cost = mismatch(cand);
          if (cost < best_cost) {
            best_cost = cost;
            best = cand;
          }
        }
      }
      return std::pair{best, best_cost};
    };
    const auto coarse = search(g_before, kBracket, kCoarse);
    const auto fine = search(coarse.first, kCoarse, kFine);
    g_est = std::clamp(fine.first, g_before * (1.0 - kBracket), g_before * (1.0 + kBracket));

    const CycleResult corrected = simulate_cycle(g_true, g_est, params, drift.damping_gamma);

    ProtocolReport r;
    r.protocol_name = "feedback";
    r.params = params;
    r.params.g = g_true;
    r.seed = drift.seed;
    const double t_gen = epr_time(1, g_before);
    const double t_x = exchange_time(0, g_before);
    const double probed = clock + t_gen + t_x;
    const double t_gen2 = epr_time(1, g_est);
    const double verified = probed + t_gen2 + exchange_time(0, g_est);
    r.schedule = {{"generate", clock},
                  {"post-select", clock + t_gen},
                  {"transfer complete", probed},
                  {"correct estimate", probed},
                  {"verify generate", probed},
                  {"verify transfer complete", verified}};
    clock = verified;

    r.outcomes = observed.epr.outcomes;
    if (const auto* hit = find_outcome(observed.epr.outcomes, 1)) {
      r.final_states.push_back({"post_selected_1", hit->conditional_state});
    }
    r.final_states.push_back({"atoms34_target", epr_target(0)});
    if (!corrected.transfer.reduced_states.empty()) {
      r.reduced_states.push_back({"atoms34_final", corrected.transfer.density("atoms34_final")});
    }
    auto& f = r.figures_of_merit;
    f["cycle"] = cycle;
    f["g_true"] = g_true;
    f["g_estimate_before"] = g_before;
    f["g_estimate_after"] = g_est;
    f["estimate_error"] = std::abs(g_est - g_true) / g_true;
    f["objective"] = fine.second;
    f["success_probability"] = observed.success_probability;
    f["fidelity_pre"] = observed.fidelity;
    f["fidelity_post"] = corrected.fidelity;
    f["success_probability_post"] = corrected.success_probability;
    f["survival_probability"] =
        observed.transfer.figures_of_merit.empty() ? 1.0 : observed.transfer.figure("survival_probability");
    f["excited_time"] = t_x;
    reports.push_back(std::move(r));

    const double sign = (rng() >> 63) ? 1.0 : -1.0;
    g_true *= 1.0 + sign * drift.g_drift_rate;
  }
  return reports;
}

std::map<std::string, double> recompute_figures(const ProtocolReport& report) {
  std::map<std::string, double> out;
  const auto has_state = [&](const std::string& n) {
    return std::any_of(report.final_states.begin(), report.final_states.end(),
                       [&](const auto& s) { return s.name == n; });
  };
  const auto has_density = [&](const std::string& n) {
    return std::any_of(report.reduced_states.begin(), report.reduced_states.end(),
                       [&](const auto& s) { return s.name == n; });
  };

  if (report.protocol_name == "epr") {
    const auto outcomes = measure_photons(report.state("evolved"));
    const auto* one = find_outcome(outcomes, 1);
    out["success_probability"] = one ? clamp01(one->probability) : 0.0;
    out["fidelity_to_target"] =
        has_state("post_selected_1") ? clamp01(fidelity(report.state("post_selected_1"), epr_target(1))) : 0.0;
    out["negativity"] = has_state("post_selected_1") ? pair_negativity(report.state("post_selected_1")) : 0.0;
  } else if (report.protocol_name == "transfer") {
    const DensityMatrix& after = report.density("atoms34_final");
    out["fidelity_to_target"] = clamp01(fidelity(after, atomic_amplitudes(report.state("atoms34_target"))));
    out["negativity_before"] = negativity(report.density("atoms12_initial"), 1);
    out["negativity_after"] = negativity(after, 1);
  } else if (report.protocol_name == "exchange") {
    out["fidelity_to_swapped"] = clamp01(fidelity(report.state("exchanged_frame"), report.state("swapped_target")));
    out["fidelity_double_exchange"] = clamp01(fidelity(report.state("twice_frame"), report.state("input")));
    out["fidelity_to_swapped_lab"] = clamp01(fidelity(report.state("exchanged"), report.state("swapped_target")));
    out["fidelity_double_exchange_lab"] = clamp01(fidelity(report.state("twice"), report.state("input")));
  } else if (report.protocol_name == "feedback" && has_density("atoms34_final")) {
    out["fidelity_post"] =
        clamp01(fidelity(report.density("atoms34_final"), atomic_amplitudes(report.state("atoms34_target"))));
  }
  return out;
}

}  // namespace zeeman
