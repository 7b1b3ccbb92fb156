// Copyright 2026 The railrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAILRISK_RISK_HPP
#define RAILRISK_RISK_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "railrisk/demand.hpp"
#include "railrisk/topology.hpp"

namespace railrisk {

/// Virus and environment parameters. Defaults are the base case: quanta
/// rate 270/h, breathing 0.72 m3/h, ventilation 1958 m3/h per car, ordinary
/// face coverings (R_m = F_m = 0.5) worn by nobody (f_m = 0).
struct VirusEnv {
  double quanta_rate = 270.0;       // q, quanta/hour
  double breathing_rate = 0.72;     // p, m3/hour
  double ventilation = 1958.0;      // Q, m3/hour per car
  double mask_fraction = 0.0;       // f_m in [0,1]
  double exhale_penetration = 0.5;  // R_m: 1 = no mask, 0 = full blockage
  double inhale_penetration = 0.5;  // F_m

  void validate() const;
};

/// Multiplicative adjustments to the base case: infectiousness (alpha),
/// headway (beta), demand (gamma), travel time (delta), ventilation
/// (epsilon). All default to 1.
struct ScalingFactors {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double epsilon = 1.0;

  void validate() const;
};

/// Combined meta-parameters: A folds the viral-load factors, B the
/// passenger-load factors.
struct MetaParams {
  double viral_load = 1.0;      // A
  double passenger_load = 1.0;  // B
};

/// A = (alpha*delta/epsilon) * (1 - f_m*(1 - R_m)) * F_m.
double meta_A(const ScalingFactors& factors, double f_m, double R_m, double F_m);

/// The same combination without the susceptible's mask term F_m; this is the
/// per-carrier exponent scale seen by an unmasked susceptible.
double meta_A_unmasked(const ScalingFactors& factors, double f_m, double R_m);

/// B = beta * gamma.
double meta_B(const ScalingFactors& factors);

/// Infection (carrier) rate field: uniform, or looked up per od pair through
/// station group labels.
class PiField {
 public:
  enum class GroupMode { kOrigin, kDestination, kBranch };

  PiField() : PiField(Uniform{0.0}) {}

  static PiField uniform(double rate);
  static PiField by_group(std::map<std::string, double> rates,
                          GroupMode mode = GroupMode::kBranch);

  /// Carrier rate for passengers of this od pair. Group fields resolve the
  /// station per mode (kBranch: the branch endpoint if any, trunk
  /// otherwise); a group absent from the map falls back to the "trunk" key.
  double rate_for(const LineTopology& topo, const OdPair& od) const;

  bool is_uniform() const { return uniform_.has_value(); }
  double uniform_rate() const;
  const std::map<std::string, double>& group_rates() const { return group_rates_; }
  GroupMode mode() const { return mode_; }

 private:
  struct Uniform {
    double rate;
  };
  explicit PiField(Uniform u) : uniform_(u.rate) {}
  PiField(std::map<std::string, double> rates, GroupMode mode)
      : group_rates_(std::move(rates)), mode_(mode) {}

  std::optional<double> uniform_;
  std::map<std::string, double> group_rates_;
  GroupMode mode_ = GroupMode::kBranch;
};

struct RiskOptions {
  /// When set, susceptible od flow is discounted by (1 - pi) before
  /// weighting expected infections. Off by default.
  bool susceptible_excludes_carriers = false;
};

/// P = 1 - exp(-I p q t / Q).
double wells_riley(double infectors, const VirusEnv& env, double hours);

/// As wells_riley with p -> F_m p and q -> R_m q.
double wells_riley_masked(double infectors, const VirusEnv& env, double hours);

/// Truncated Poisson mixture sum_{n=0}^{ceil(load)} e^{-n a} Pois(n; load*pi):
/// the probability that carriers among an expected `load` passengers do not
/// infect, with per-carrier survival exponent `a`. Evaluated with the scaled
/// recurrence term_{n+1} = term_n * (lambda e^{-a}) / (n+1).
double survival_term(double load, double pi, double a);

/// Poisson mass beyond the truncation bound ceil(load); the amount by which
/// survival_term can undershoot the untruncated mixture.
double truncation_tail(double load, double pi);

struct OdRisk {
  std::string service;
  OdPair od;
  int car = 0;
  double load = 0.0;           // expected passengers of this od in this car
  double susceptible = 0.0;    // aggregation weight for expected infections
  double p_masked = 0.0;       // infection probability, masked susceptible
  double p_unmasked = 0.0;     // infection probability, unmasked susceptible
  double expected_infections = 0.0;  // r for this od/car per trip
};

struct ServiceRisk {
  std::string service;
  double probability = 0.0;
  double expected_infections = 0.0;
  double flow = 0.0;
};

struct CarRisk {
  int car = 0;
  double probability = 0.0;
  double expected_infections = 0.0;
  double flow = 0.0;
};

struct RiskReport {
  std::vector<OdRisk> rows;  // ordered by (service, car, od)
  std::vector<ServiceRisk> per_service;
  std::vector<CarRisk> per_car;
  double system_probability = 0.0;          // blended by the mask fraction
  double system_probability_masked = 0.0;   // all-masked aggregate
  double system_probability_unmasked = 0.0; // all-unmasked aggregate
  double system_expected_infections = 0.0;  // per service cycle
  double susceptible_flow = 0.0;            // per service cycle
  double truncation_tail_bound = 0.0;       // max neglected Poisson tail
};

/// r_ij = P_nm (1 - f_m) D + P_m f_m D.
double expected_infections(double demand, double f_m, double p_masked,
                           double p_unmasked);

/// System aggregation over per-od rows: (system probability, expected
/// infections per cycle). Throws EmptyDemand when there are no rows.
std::pair<double, double> system_risk(const std::vector<OdRisk>& rows);

/// Precomputes exposure times and carrier rates for a set of train services
/// so repeated evaluations (sweeps, solvers) stay cheap. Evaluation reduces
/// scaling factors to the meta form (A, B) internally, so any two factor
/// settings with the same meta-parameters produce identical reports.
/// Immutable after construction; evaluate() is safe to call concurrently.
class RiskEngine {
 public:
  RiskEngine(const LineTopology& topo, std::vector<TrainLoad> base_loads,
             VirusEnv base_env, PiField pi, RiskOptions options = {});

  RiskReport evaluate(const ScalingFactors& factors) const;
  RiskReport evaluate_meta(const MetaParams& meta) const;

  const VirusEnv& env() const { return env_; }

 private:
  struct PreparedService {
    std::string service;
    std::vector<OdPair> ods;
    std::vector<double> base_loads;  // per trip, before car shares
    std::vector<double> pi;
    // per target od: (source index, shared exposure hours), exposure > 0
    std::vector<std::vector<std::pair<int, double>>> interactions;
  };

  RiskReport run(double a_unmasked, double a_masked, double load_scale) const;

  VirusEnv env_;
  RiskOptions options_;
  std::vector<double> car_shares_;
  std::vector<PreparedService> services_;
};

/// One-call evaluation under scaling factors (Wells-Riley risk per od pair,
/// per car, per service, plus system aggregates).
RiskReport evaluate_system(const LineTopology& topo,
                           const std::vector<TrainLoad>& loads,
                           const VirusEnv& env, const ScalingFactors& factors,
                           const PiField& pi, const RiskOptions& options = {});

/// Evaluation as a function of the base case and the meta-parameters (A, B):
/// per-carrier exponents scaled by A, loads scaled by B. Matches
/// evaluate_system for any factor combination realizing the same (A, B).
RiskReport risk_with_meta(const LineTopology& topo,
                          const std::vector<TrainLoad>& base_loads,
                          const VirusEnv& base_env, const MetaParams& meta,
                          const PiField& pi, const RiskOptions& options = {});

/// Masked and unmasked infection probabilities for one od pair riding one
/// car of one service, given that service's per-trip loads.
std::pair<double, double> p_infect_od(const LineTopology& topo, const OdPair& od,
                                      const TrainLoad& service_load, int car,
                                      const VirusEnv& env,
                                      const ScalingFactors& factors,
                                      const PiField& pi);

}  // namespace railrisk

#endif  // RAILRISK_RISK_HPP
