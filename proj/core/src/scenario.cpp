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

#include "railrisk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "railrisk/errors.hpp"
#include "railrisk/parallel.hpp"

namespace railrisk {

std::size_t SweepAxis::count() const {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::EmptyRange, "axis \"" + name + "\": step must be positive");
  }
  if (stop < start) {
    throw Error(ErrorCode::EmptyRange, "axis \"" + name + "\": stop precedes start");
  }
  return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
}

std::vector<double> SweepAxis::values() const {
  const std::size_t n = count();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
  return v;
}

SweepAxis parse_axis(const std::string& name, const std::string& text) {
  SweepAxis axis;
  axis.name = name;
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw Error(ErrorCode::EmptyRange,
                  "axis \"" + name + "\": cannot parse \"" + token + "\"");
    }
  }
  if (parts.size() == 1) {
    axis.start = axis.stop = parts[0];
    axis.step = 1.0;
  } else if (parts.size() == 3) {
    axis.start = parts[0];
    axis.stop = parts[1];
    axis.step = parts[2];
  } else {
    throw Error(ErrorCode::EmptyRange,
                "axis \"" + name + "\": expected lo:hi:step, got \"" + text + "\"");
  }
  axis.count();  // validates
  return axis;
}

namespace {

// FNV-1a over the strings that determine a sweep, so reports can state
// which setup produced them. Stable across platforms.
std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string axis_signature(const SweepAxis& axis) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s=%.17g:%.17g:%.17g", axis.name.c_str(),
                axis.start, axis.stop, axis.step);
  return buf;
}

SweepGrid make_grid(const Scenario& scenario, const SweepAxis& a1,
                    const SweepAxis& a2, const std::string& kind) {
  SweepGrid grid;
  grid.axis1 = a1;
  grid.axis2 = a2;
  grid.cells.assign(a1.count() * a2.count(), 0.0);
  grid.fixture_id = scenario.label;
  grid.scenario_hash =
      fnv1a_hex(kind + "|" + axis_signature(a1) + "|" + axis_signature(a2) + "|" +
                scenario.label);
  return grid;
}

}  // namespace

AbGrids sweep_AB(const Scenario& scenario, const SweepAxis& a_axis,
                 const SweepAxis& b_axis, int threads) {
  AbGrids grids{make_grid(scenario, a_axis, b_axis, "AB-unmasked"),
                make_grid(scenario, a_axis, b_axis, "AB-masked")};
  const auto a_values = a_axis.values();
  const auto b_values = b_axis.values();
  const RiskEngine engine = scenario.engine();
  parallel_for_index(a_values.size() * b_values.size(), threads, [&](std::size_t cell) {
    const std::size_t i = cell / b_values.size();
    const std::size_t j = cell % b_values.size();
    RiskReport report = engine.evaluate_meta({a_values[i], b_values[j]});
    grids.unmasked.cells[cell] = report.system_probability_unmasked;
    grids.masked.cells[cell] = report.system_probability_masked;
  });
  return grids;
}

SweepGrid sweep_headway(const Scenario& scenario, const SweepAxis& headway_hours,
                        SweepLevel kind, const SweepAxis& levels, int threads) {
  for (double h : headway_hours.values()) {
    if (!(h > 0.0)) {
      throw Error(ErrorCode::EmptyRange, "headways must be positive");
    }
  }
  SweepGrid grid = make_grid(scenario, headway_hours, levels, "headway");
  const auto headways = headway_hours.values();
  const auto level_values = levels.values();

  // One engine per level (levels touch the environment or the carrier
  // field); the headway axis folds into the beta factor.
  std::vector<RiskEngine> engines;
  engines.reserve(level_values.size());
  for (double level : level_values) {
    Scenario variant = scenario;
    switch (kind) {
      case SweepLevel::kPi:
        variant.pi = PiField::uniform(level);
        break;
      case SweepLevel::kMaskFraction:
        variant.env.mask_fraction = level;
        break;
      case SweepLevel::kAlpha:
        if (level < 0.0) {
          throw Error(ErrorCode::NegativeFactor, "alpha level must be nonnegative");
        }
        variant.factors.alpha = level;
        break;
    }
    engines.push_back(variant.engine());
  }

  std::vector<ScalingFactors> factor_rows(headways.size(), scenario.factors);
  for (std::size_t i = 0; i < headways.size(); ++i) {
    factor_rows[i].beta = scenario.factors.beta * (headways[i] / scenario.plan.branch_headway);
  }
  std::vector<double> alphas(level_values.size(), scenario.factors.alpha);
  if (kind == SweepLevel::kAlpha) alphas = level_values;

  parallel_for_index(headways.size() * level_values.size(), threads,
                     [&](std::size_t cell) {
                       const std::size_t i = cell / level_values.size();
                       const std::size_t j = cell % level_values.size();
                       ScalingFactors f = factor_rows[i];
                       f.alpha = alphas[j];
                       grid.cells[cell] = engines[j].evaluate(f).system_probability;
                     });
  return grid;
}

double compensate_B(const Scenario& scenario, double target_system_p, double a_new,
                    double b_low, double b_high) {
  if (!(target_system_p >= 0.0) || !(target_system_p < 1.0)) {
    throw Error(ErrorCode::InvalidParam, "target probability must lie in [0,1)");
  }
  if (!(b_low >= 0.0) || !(b_high > b_low)) {
    throw Error(ErrorCode::InvalidParam, "need 0 <= b_low < b_high");
  }
  const RiskEngine engine = scenario.engine();
  auto risk_at = [&](double b) {
    return engine.evaluate_meta({a_new, b}).system_probability;
  };
  const double tolerance = target_system_p > 0.0 ? 1e-6 * target_system_p : 1e-12;

  double lo = b_low, hi = b_high;
  double f_lo = risk_at(lo), f_hi = risk_at(hi);
  if (std::abs(f_lo - target_system_p) <= tolerance) return lo;
  if (std::abs(f_hi - target_system_p) <= tolerance) return hi;
  if (target_system_p < f_lo || target_system_p > f_hi) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "target %.9g outside bracket [%.9g, %.9g] -> [%.9g, %.9g]",
                  target_system_p, lo, hi, f_lo, f_hi);
    throw Error(ErrorCode::TargetUnreachable, buf);
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = risk_at(mid);
    if (std::abs(f_mid - target_system_p) <= tolerance) return mid;
    if (f_mid < target_system_p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw Error(ErrorCode::TargetUnreachable,
              "bisection did not reach the target tolerance in 200 iterations");
}

double solve_Fm_for_alpha(double alpha, double a_target, double f_m, double R_m,
                          double delta, double epsilon) {
  if (a_target < 0.0 || alpha < 0.0 || delta < 0.0 || epsilon < 0.0) {
    throw Error(ErrorCode::InvalidParam, "negative input");
  }
  if (!(f_m >= 0.0) || !(f_m <= 1.0) || !(R_m >= 0.0) || !(R_m <= 1.0)) {
    throw Error(ErrorCode::InvalidParam, "mask parameters must lie in [0,1]");
  }
  const double denom = alpha * delta * (1.0 - f_m * (1.0 - R_m));
  if (denom == 0.0) {
    throw Error(ErrorCode::NoFeasibleMask, "zero denominator: no mask can matter");
  }
  const double result = a_target * epsilon / denom;
  if (result > 1.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "required F_m %.6g exceeds 1", result);
    throw Error(ErrorCode::NoFeasibleMask, buf);
  }
  return result;
}

double solve_fm_for_alpha(double alpha, double a_target, double F_m, double R_m,
                          double delta, double epsilon) {
  if (a_target < 0.0 || alpha < 0.0 || delta < 0.0 || epsilon < 0.0) {
    throw Error(ErrorCode::InvalidParam, "negative input");
  }
  if (!(F_m >= 0.0) || !(F_m <= 1.0) || !(R_m >= 0.0) || !(R_m <= 1.0)) {
    throw Error(ErrorCode::InvalidParam, "mask parameters must lie in [0,1]");
  }
  if (R_m == 1.0) {
    throw Error(ErrorCode::DegenerateMask,
                "R_m = 1: mask wearing cannot change the exhaled load");
  }
  const double denom = alpha * delta * F_m;
  if (denom == 0.0) {
    throw Error(ErrorCode::NoFeasibleProportion, "zero denominator");
  }
  const double result = (1.0 - a_target * epsilon / denom) / (1.0 - R_m);
  if (result < 0.0 || result > 1.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "required f_m %.6g outside [0,1]", result);
    throw Error(ErrorCode::NoFeasibleProportion, buf);
  }
  return result;
}

AllocationResult allocate_branch_headways(const Scenario& scenario,
                                          const SweepAxis& h_ab_hours,
                                          int threads) {
  if (!scenario.topology.branched()) {
    throw Error(ErrorCode::ConfigError,
                "headway allocation needs a branched topology");
  }
  const auto values = h_ab_hours.values();
  for (double h : values) {
    if (!(h > 0.0) || !(h < scenario.plan.branch_headway)) {
      throw Error(ErrorCode::InvalidParam,
                  "h_ab must lie strictly inside (0, branch_headway)");
    }
  }

  AllocationResult result;
  result.table.resize(values.size());
  parallel_for_index(values.size(), threads, [&](std::size_t i) {
    Scenario variant = scenario;
    variant.plan.h_ab = values[i];
    RiskReport report = variant.engine().evaluate(variant.factors);
    AllocationRow row;
    row.h_ab_hours = values[i];
    row.system_p = report.system_probability;
    for (const auto& svc : report.per_service) {
      if (svc.service == "A") row.service_a_p = svc.probability;
      if (svc.service == "B") row.service_b_p = svc.probability;
    }
    result.table[i] = row;
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    if (result.table[i].system_p < result.table[best].system_p) best = i;
  }
  result.argmin_h_ab_hours = result.table[best].h_ab_hours;
  return result;
}

std::vector<CarDistributionRow> compare_car_distributions(
    const Scenario& scenario, const std::vector<std::vector<double>>& share_sets) {
  if (share_sets.empty()) {
    throw Error(ErrorCode::InvalidShares, "no car-share vectors supplied");
  }
  std::vector<CarDistributionRow> rows;
  for (const auto& shares : share_sets) {
    Scenario variant = scenario;
    variant.plan.car_shares = shares;
    variant.plan.validate();
    RiskReport report = variant.engine().evaluate(variant.factors);

    const auto most =
        std::max_element(shares.begin(), shares.end()) - shares.begin();
    const auto least =
        std::min_element(shares.begin(), shares.end()) - shares.begin();
    CarDistributionRow row;
    row.shares = shares;
    row.system_p = report.system_probability;
    row.most_crowded_car_p = report.per_car.at(most).probability;
    row.least_crowded_car_p = report.per_car.at(least).probability;
    rows.push_back(std::move(row));
  }
  return rows;
}

double calibrate_q(double attack_rate, double infectors, double breathing_rate,
                   double hours, double ventilation) {
  if (!(attack_rate >= 0.0) || !(attack_rate < 1.0)) {
    throw Error(ErrorCode::InvalidAttackRate, "attack rate must lie in [0,1)");
  }
  if (!(infectors > 0.0) || !(breathing_rate > 0.0) || !(hours > 0.0) ||
      !(ventilation > 0.0)) {
    throw Error(ErrorCode::InvalidParam,
                "infectors, breathing rate, exposure time, and ventilation must be positive");
  }
  return -ventilation * std::log1p(-attack_rate) / (infectors * breathing_rate * hours);
}

}  // namespace railrisk
