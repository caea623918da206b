#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zeeman/measurement.hpp"

namespace zeeman {

struct ScheduleEntry {
  std::string event;
  double time = 0.0;
};

struct NamedState {
  std::string name;
  QuantumState state;
};

struct NamedDensity {
  std::string name;
  DensityMatrix rho;
};

struct ProtocolReport {
  std::string protocol_name;
  PhysicalParams params;
  std::vector<ScheduleEntry> schedule;
  std::vector<MeasurementOutcome> outcomes;
  std::vector<NamedState> final_states;
  std::vector<NamedDensity> reduced_states;
  std::map<std::string, double> figures_of_merit;
  std::optional<std::uint64_t> seed;

  const QuantumState& state(const std::string& name) const;
  const DensityMatrix& density(const std::string& name) const;
  double figure(const std::string& name) const;
  /// Throws std::logic_error when a probability or fidelity leaves [0, 1] or the
  /// schedule is negative or decreasing.
  void validate() const;
};

struct DriftModel {
  double g_drift_rate = 0.0;   ///< relative change of the true coupling per cycle
  double damping_gamma = 0.0;  ///< amplitude decay rate of excited atomic components
  std::uint64_t seed = 0;

  void validate() const;
};

/// |0>(1,-1) on sector 0.
QuantumState epr_initial_state();
/// (|0,-1> - |-1,0>)/sqrt(2) on pair_basis(photons).
QuantumState epr_target(int photons = 1);

/// 2 n pi / (sqrt(7) g)
double epr_time(int n_period, double g);
/// (2 n + 1) pi / (sqrt(2) g)
double exchange_time(int n_period, double g);

/// Evolve |0>(1,-1) for time t and count photons. Works for any time; the success
/// branch is photon = 1.
ProtocolReport epr_run(double t, const PhysicalParams& params);

/// epr_run at t = 2 n pi / (sqrt(7) g). Requires n_period >= 1 and resonance.
ProtocolReport epr_generate(int n_period, const PhysicalParams& params);

/// Sector-0 state grown from |0>(1,-1) after time t. Requires resonance.
QuantumState state_at(double t, const PhysicalParams& params);

/// sector_basis(-1) followed by sector_basis(-2).
Basis exchange_basis();

/// Evolves a one-cavity state supported on sectors -1 and -2 for
/// (2 n + 1) pi / (sqrt(2) g). Throws std::invalid_argument for other support.
QuantumState local_exchange(const QuantumState& joint_state, int n_period,
                            const PhysicalParams& params);

/// Exchange run with figures: fidelity to the swapped input and to the input after a
/// second exchange.
ProtocolReport exchange_report(const QuantumState& input, int n_period,
                               const PhysicalParams& params);

/// Moves c1|0,-1>_12 + c2|-1,0>_12 onto atoms 3 and 4 through one exchange in each of
/// two vacuum cavities (atoms 1,3 share cavity A; atoms 2,4 share cavity B).
ProtocolReport transfer(cplx c1, cplx c2, int n_period, const PhysicalParams& params);

/// transfer with an explicit evolution time and optional damping applied to the
/// final four-atom state.
ProtocolReport transfer_run(cplx c1, cplx c2, double t, const PhysicalParams& params,
                            double damping_gamma = 0.0);

/// Scales every component with an excited atom (m > -1) by exp(-gamma t / 2),
/// renormalizes, and returns the surviving probability.
double apply_damping(QuantumState& state, double gamma, double t);

/// Generate, transfer, probe and re-estimate g for a number of cycles while the true
/// coupling drifts. One report per cycle.
std::vector<ProtocolReport> feedback_cycle(int cycles, const DriftModel& drift,
                                           const PhysicalParams& params);

/// Figures of merit recomputed from a report's stored states only.
std::map<std::string, double> recompute_figures(const ProtocolReport& report);

}  // namespace zeeman
