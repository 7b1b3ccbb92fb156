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

#ifndef RAILRISK_SCENARIO_HPP
#define RAILRISK_SCENARIO_HPP

#include <string>
#include <vector>

#include "railrisk/demand.hpp"
#include "railrisk/risk.hpp"
#include "railrisk/topology.hpp"

namespace railrisk {

/// A fully resolved model instance: everything needed to evaluate risk.
struct Scenario {
  LineTopology topology;
  ODDemand demand;
  ServicePlan plan;
  VirusEnv env;
  ScalingFactors factors;
  PiField pi;
  RiskOptions options;
  std::string label = "scenario";

  std::vector<TrainLoad> loads() const { return train_loads(demand, plan, topology); }
  RiskEngine engine() const { return RiskEngine(topology, loads(), env, pi, options); }
};

/// Inclusive discretized sweep axis.
struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::size_t count() const;
  std::vector<double> values() const;
};

/// Parses "lo:hi:step" (also accepts a single number as a one-value axis).
SweepAxis parse_axis(const std::string& name, const std::string& text);

struct SweepGrid {
  SweepAxis axis1;
  SweepAxis axis2;
  std::vector<double> cells;  // row-major over (axis1, axis2)
  std::string fixture_id;
  std::string scenario_hash;

  double at(std::size_t i, std::size_t j) const { return cells[i * axis2.count() + j]; }
};

struct AbGrids {
  SweepGrid unmasked;  // every susceptible unmasked
  SweepGrid masked;    // every susceptible masked
};

/// System risk over a meta-parameter grid; cell (A, B) is the
/// system probability from the meta evaluation of the base case.
AbGrids sweep_AB(const Scenario& scenario, const SweepAxis& a_axis,
                 const SweepAxis& b_axis, int threads = 0);

/// Concrete parameter a headway sweep can be crossed with.
enum class SweepLevel { kPi, kMaskFraction, kAlpha };

/// System probability per (branch headway, level). Headways in hours; the
/// headway factor beta is headway / base headway.
SweepGrid sweep_headway(const Scenario& scenario, const SweepAxis& headway_hours,
                        SweepLevel kind, const SweepAxis& levels, int threads = 0);

/// B* with risk_with_meta(A_new, B*) equal to the target system probability
/// within 1e-6 relative, found by bisection on the given interval.
double compensate_B(const Scenario& scenario, double target_system_p, double a_new,
                    double b_low, double b_high);

/// Closed-form mask penetration keeping A at `a_target` under
/// infectiousness alpha: F_m = A eps / (alpha delta (1 - f_m (1 - R_m))).
double solve_Fm_for_alpha(double alpha, double a_target, double f_m, double R_m,
                          double delta = 1.0, double epsilon = 1.0);

/// Closed-form mask-wearing fraction keeping A at `a_target`:
/// f_m = (1 - A eps / (alpha delta F_m)) / (1 - R_m).
double solve_fm_for_alpha(double alpha, double a_target, double F_m, double R_m,
                          double delta = 1.0, double epsilon = 1.0);

struct AllocationRow {
  double h_ab_hours = 0.0;
  double system_p = 0.0;
  double service_a_p = 0.0;
  double service_b_p = 0.0;
};

struct AllocationResult {
  std::vector<AllocationRow> table;
  double argmin_h_ab_hours = 0.0;  // ties resolved toward the smaller h_ab
};

/// Recomputes train loads and system risk for each trunk headway split
/// h_ab in the axis (h_ba = branch_headway - h_ab).
AllocationResult allocate_branch_headways(const Scenario& scenario,
                                          const SweepAxis& h_ab_hours,
                                          int threads = 0);

struct CarDistributionRow {
  std::vector<double> shares;
  double system_p = 0.0;
  double most_crowded_car_p = 0.0;   // car with the largest share
  double least_crowded_car_p = 0.0;  // car with the smallest share
};

/// System and extreme-car risk for each candidate car-share vector.
std::vector<CarDistributionRow> compare_car_distributions(
    const Scenario& scenario, const std::vector<std::vector<double>>& share_sets);

/// Back-calculates the quanta rate from an observed attack rate:
/// q = -Q ln(1 - P) / (I p t).
double calibrate_q(double attack_rate, double infectors, double breathing_rate,
                   double hours, double ventilation);

}  // namespace railrisk

#endif  // RAILRISK_SCENARIO_HPP
