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

#include "railrisk/risk.hpp"

#include <algorithm>
#include <cmath>

#include "railrisk/errors.hpp"

namespace railrisk {

namespace {

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw Error(ErrorCode::InvalidParam, std::string(what) + " must lie in [0,1]");
  }
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw Error(ErrorCode::InvalidParam, std::string(what) + " must be nonnegative");
  }
}

constexpr double kMaxLoad = 1e7;  // truncation bound K stays loopable

}  // namespace

void VirusEnv::validate() const {
  require_nonnegative(quanta_rate, "quanta_rate");
  require_nonnegative(breathing_rate, "breathing_rate");
  if (!(ventilation > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "ventilation must be positive");
  }
  require_unit_interval(mask_fraction, "mask_fraction");
  require_unit_interval(exhale_penetration, "exhale_penetration");
  require_unit_interval(inhale_penetration, "inhale_penetration");
}

void ScalingFactors::validate() const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0 || delta < 0.0 || epsilon < 0.0) {
    throw Error(ErrorCode::NegativeFactor, "scaling factors must be nonnegative");
  }
}

double meta_A_unmasked(const ScalingFactors& factors, double f_m, double R_m) {
  factors.validate();
  require_unit_interval(f_m, "mask_fraction");
  require_unit_interval(R_m, "exhale_penetration");
  if (factors.epsilon == 0.0) {
    throw Error(ErrorCode::ZeroVentilation, "ventilation factor epsilon is zero");
  }
  return (factors.alpha * factors.delta / factors.epsilon) *
         (1.0 - f_m * (1.0 - R_m));
}

double meta_A(const ScalingFactors& factors, double f_m, double R_m, double F_m) {
  require_unit_interval(F_m, "inhale_penetration");
  return meta_A_unmasked(factors, f_m, R_m) * F_m;
}

double meta_B(const ScalingFactors& factors) {
  factors.validate();
  return factors.beta * factors.gamma;
}

PiField PiField::uniform(double rate) {
  require_unit_interval(rate, "infection rate");
  return PiField(Uniform{rate});
}

PiField PiField::by_group(std::map<std::string, double> rates, GroupMode mode) {
  if (rates.empty()) {
    throw Error(ErrorCode::ConfigError, "group infection-rate map is empty");
  }
  for (const auto& [group, rate] : rates) {
    (void)group;
    require_unit_interval(rate, "infection rate");
  }
  return PiField(std::move(rates), mode);
}

double PiField::uniform_rate() const {
  if (!uniform_) {
    throw Error(ErrorCode::InvalidParam, "infection-rate field is not uniform");
  }
  return *uniform_;
}

double PiField::rate_for(const LineTopology& topo, const OdPair& od) const {
  if (uniform_) return *uniform_;

  const Station* station = nullptr;
  switch (mode_) {
    case GroupMode::kOrigin:
      station = &topo.station(od.origin);
      break;
    case GroupMode::kDestination:
      station = &topo.station(od.destination);
      break;
    case GroupMode::kBranch:
      if (!topo.branch_of(od.destination).empty()) {
        station = &topo.station(od.destination);
      } else if (!topo.branch_of(od.origin).empty()) {
        station = &topo.station(od.origin);
      } else {
        station = &topo.station(od.origin);
      }
      break;
  }
  auto it = group_rates_.find(station->group);
  if (it == group_rates_.end()) {
    it = group_rates_.find("trunk");
    if (it == group_rates_.end()) {
      throw Error(ErrorCode::ConfigError,
                  "no infection rate for group \"" + station->group +
                      "\" and no \"trunk\" fallback");
    }
  }
  return it->second;
}

double wells_riley(double infectors, const VirusEnv& env, double hours) {
  env.validate();
  require_nonnegative(infectors, "infectors");
  require_nonnegative(hours, "exposure time");
  const double exponent =
      infectors * env.breathing_rate * env.quanta_rate * hours / env.ventilation;
  return -std::expm1(-exponent);
}

double wells_riley_masked(double infectors, const VirusEnv& env, double hours) {
  env.validate();
  require_nonnegative(infectors, "infectors");
  require_nonnegative(hours, "exposure time");
  const double exponent = infectors * (env.inhale_penetration * env.breathing_rate) *
                          (env.exhale_penetration * env.quanta_rate) * hours /
                          env.ventilation;
  return -std::expm1(-exponent);
}

double survival_term(double load, double pi, double a) {
  require_nonnegative(load, "load");
  require_unit_interval(pi, "infection rate");
  require_nonnegative(a, "survival exponent");
  if (load > kMaxLoad) {
    throw Error(ErrorCode::InvalidParam, "load too large for truncated summation");
  }
  const double lambda = load * pi;
  const auto cap = static_cast<long long>(std::ceil(load));
  double term = std::exp(-lambda);
  double sum = term;
  const double ratio = lambda * std::exp(-a);
  for (long long n = 1; n <= cap; ++n) {
    term *= ratio / static_cast<double>(n);
    sum += term;
  }
  return std::min(sum, 1.0);
}

double truncation_tail(double load, double pi) {
  return std::max(0.0, 1.0 - survival_term(load, pi, 0.0));
}

double expected_infections(double demand, double f_m, double p_masked,
                           double p_unmasked) {
  require_nonnegative(demand, "demand");
  require_unit_interval(f_m, "mask_fraction");
  return p_unmasked * (1.0 - f_m) * demand + p_masked * f_m * demand;
}

std::pair<double, double> system_risk(const std::vector<OdRisk>& rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyDemand, "no od results to aggregate");
  }
  double r = 0.0;
  double flow = 0.0;
  for (const auto& row : rows) {
    r += row.expected_infections;
    flow += row.susceptible;
  }
  const double p = flow > 0.0 ? r / flow : 0.0;
  return {p, r};
}

RiskEngine::RiskEngine(const LineTopology& topo, std::vector<TrainLoad> base_loads,
                       VirusEnv base_env, PiField pi, RiskOptions options)
    : env_(base_env), options_(options) {
  env_.validate();
  if (base_loads.empty()) {
    throw Error(ErrorCode::EmptyDemand, "no train services supplied");
  }
  car_shares_ = base_loads.front().car_shares;
  if (car_shares_.empty()) {
    throw Error(ErrorCode::InvalidShares, "train services carry no car shares");
  }

  for (const auto& service : base_loads) {
    if (service.car_shares != car_shares_) {
      throw Error(ErrorCode::InvalidShares,
                  "all services must share one car-share vector");
    }
    PreparedService prepared;
    prepared.service = service.service;
    for (const auto& [od, load] : service.loads) {
      prepared.ods.push_back(od);
      prepared.base_loads.push_back(load);
      prepared.pi.push_back(pi.rate_for(topo, od));
    }
    const std::size_t count = prepared.ods.size();
    prepared.interactions.resize(count);
    for (std::size_t t = 0; t < count; ++t) {
      for (std::size_t s = 0; s < count; ++s) {
        const double hours = exposure_time(topo, prepared.ods[t], prepared.ods[s]);
        if (hours > 0.0) {
          prepared.interactions[t].emplace_back(static_cast<int>(s), hours);
        }
      }
    }
    services_.push_back(std::move(prepared));
  }
}

RiskReport RiskEngine::evaluate(const ScalingFactors& factors) const {
  const double a_unmasked =
      meta_A_unmasked(factors, env_.mask_fraction, env_.exhale_penetration);
  return run(a_unmasked, a_unmasked * env_.inhale_penetration, meta_B(factors));
}

RiskReport RiskEngine::evaluate_meta(const MetaParams& meta) const {
  require_nonnegative(meta.viral_load, "meta-parameter A");
  require_nonnegative(meta.passenger_load, "meta-parameter B");
  double a_unmasked = 0.0;
  if (meta.viral_load != 0.0) {
    if (!(env_.inhale_penetration > 0.0)) {
      throw Error(ErrorCode::InvalidParam,
                  "meta evaluation needs F_m > 0 to recover the unmasked exponent");
    }
    a_unmasked = meta.viral_load / env_.inhale_penetration;
  }
  return run(a_unmasked, meta.viral_load, meta.passenger_load);
}

RiskReport RiskEngine::run(double a_unmasked, double a_masked,
                           double load_scale) const {
  // Base per-carrier exponent per shared hour; A scales it (Wells-Riley
  // exponent I p q t / Q with I = 1).
  const double exponent_rate =
      env_.breathing_rate * env_.quanta_rate / env_.ventilation;
  const double f_m = env_.mask_fraction;

  RiskReport report;
  std::map<std::string, ServiceRisk> by_service;
  std::map<int, CarRisk> by_car;

  for (const auto& service : services_) {
    const std::size_t count = service.ods.size();
    std::vector<double> car_load(count);
    std::vector<double> tail(count);
    for (int car = 0; car < static_cast<int>(car_shares_.size()); ++car) {
      const double share = car_shares_[car];
      for (std::size_t s = 0; s < count; ++s) {
        car_load[s] = load_scale * service.base_loads[s] * share;
        tail[s] = truncation_tail(car_load[s], service.pi[s]);
      }
      for (std::size_t t = 0; t < count; ++t) {
        double log_surv_masked = 0.0;
        double log_surv_unmasked = 0.0;
        double tail_sum = 0.0;
        for (const auto& [s, hours] : service.interactions[t]) {
          const double base_exponent = exponent_rate * hours;
          log_surv_masked += std::log(
              survival_term(car_load[s], service.pi[s], a_masked * base_exponent));
          log_surv_unmasked += std::log(survival_term(
              car_load[s], service.pi[s], a_unmasked * base_exponent));
          tail_sum += tail[s];
        }
        OdRisk row;
        row.service = service.service;
        row.od = service.ods[t];
        row.car = car;
        row.load = car_load[t];
        row.p_masked = -std::expm1(log_surv_masked);
        row.p_unmasked = -std::expm1(log_surv_unmasked);
        row.susceptible = options_.susceptible_excludes_carriers
                              ? car_load[t] * (1.0 - service.pi[t])
                              : car_load[t];
        row.expected_infections =
            expected_infections(row.susceptible, f_m, row.p_masked, row.p_unmasked);
        report.truncation_tail_bound = std::max(report.truncation_tail_bound, tail_sum);

        auto& svc = by_service[row.service];
        svc.service = row.service;
        svc.expected_infections += row.expected_infections;
        svc.flow += row.susceptible;
        auto& car_acc = by_car[car];
        car_acc.car = car;
        car_acc.expected_infections += row.expected_infections;
        car_acc.flow += row.susceptible;

        report.system_probability_masked += row.p_masked * row.susceptible;
        report.system_probability_unmasked += row.p_unmasked * row.susceptible;

        report.rows.push_back(std::move(row));
      }
    }
  }

  auto [system_p, system_r] = system_risk(report.rows);
  report.system_probability = system_p;
  report.system_expected_infections = system_r;
  report.susceptible_flow = 0.0;
  for (const auto& row : report.rows) report.susceptible_flow += row.susceptible;
  if (report.susceptible_flow > 0.0) {
    report.system_probability_masked /= report.susceptible_flow;
    report.system_probability_unmasked /= report.susceptible_flow;
  } else {
    report.system_probability_masked = 0.0;
    report.system_probability_unmasked = 0.0;
  }

  for (auto& [name, svc] : by_service) {
    (void)name;
    svc.probability = svc.flow > 0.0 ? svc.expected_infections / svc.flow : 0.0;
    report.per_service.push_back(svc);
  }
  for (auto& [car, acc] : by_car) {
    (void)car;
    acc.probability = acc.flow > 0.0 ? acc.expected_infections / acc.flow : 0.0;
    report.per_car.push_back(acc);
  }
  return report;
}

RiskReport evaluate_system(const LineTopology& topo,
                           const std::vector<TrainLoad>& loads,
                           const VirusEnv& env, const ScalingFactors& factors,
                           const PiField& pi, const RiskOptions& options) {
  RiskEngine engine(topo, loads, env, pi, options);
  return engine.evaluate(factors);
}

RiskReport risk_with_meta(const LineTopology& topo,
                          const std::vector<TrainLoad>& base_loads,
                          const VirusEnv& base_env, const MetaParams& meta,
                          const PiField& pi, const RiskOptions& options) {
  RiskEngine engine(topo, base_loads, base_env, pi, options);
  return engine.evaluate_meta(meta);
}

std::pair<double, double> p_infect_od(const LineTopology& topo, const OdPair& od,
                                      const TrainLoad& service_load, int car,
                                      const VirusEnv& env,
                                      const ScalingFactors& factors,
                                      const PiField& pi) {
  if (car < 0 || car >= static_cast<int>(service_load.car_shares.size())) {
    throw Error(ErrorCode::InvalidParam, "car index out of range");
  }
  if (service_load.loads.count(od) == 0) {
    throw Error(ErrorCode::UnreachablePair,
                "od pair is not carried by service \"" + service_load.service + "\"");
  }
  RiskEngine engine(topo, {service_load}, env, pi);
  RiskReport report = engine.evaluate(factors);
  for (const auto& row : report.rows) {
    if (row.od == od && row.car == car) {
      return {row.p_masked, row.p_unmasked};
    }
  }
  throw Error(ErrorCode::InvalidParam, "od pair not found in evaluation");
}

}  // namespace railrisk
