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

#ifndef RAILRISK_DEMAND_HPP
#define RAILRISK_DEMAND_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "railrisk/topology.hpp"

namespace railrisk {

/// Period-average od demand rates in passengers per hour.
struct ODDemand {
  std::map<OdPair, double> rates;

  double total_rate() const;
};

/// Service plan for the analysis period. For a branched line, trains
/// alternate A-B-A-B: `h_ab` is the headway of an A train behind the B train
/// in front of it, `h_ba = branch_headway - h_ab`. For an unbranched line
/// `branch_headway` is simply the train headway.
struct ServicePlan {
  double branch_headway = 9.0 / 60.0;  // hours
  double h_ab = 4.5 / 60.0;            // hours
  int cars_per_train = 6;
  std::vector<double> car_shares;      // per-car fraction of the train load
  std::string period = "PM peak";

  double h_ba() const { return branch_headway - h_ab; }

  /// Same plan with every headway multiplied by `beta`.
  ServicePlan scaled_headways(double beta) const;

  /// Throws InvalidParam / InvalidShares on a violated invariant.
  void validate() const;
};

/// Per-trip expected passenger loads of one train service.
struct TrainLoad {
  std::string service;                 // "A", "B", or "single"
  std::map<OdPair, double> loads;      // N_rs passengers per trip
  std::vector<double> car_shares;      // copied from the plan

  /// N_rs assigned to one car: loads[od] * car_shares[car].
  double car_load(const OdPair& od, int car) const;
  double total() const;
};

/// Reads the od CSV (header: origin,destination,interval_start,flow), where
/// flow is passengers per interval of `interval_minutes`. Rows for the same
/// od pair are time-averaged into one pax/hour rate.
ODDemand load_od(const std::string& csv_path, const LineTopology& topo,
                 double interval_minutes = 15.0);
ODDemand parse_od(const std::string& csv_text, const LineTopology& topo,
                  double interval_minutes, const std::string& source);

/// Labels of the train services that can carry the od pair.
std::set<std::string> serving_services(const LineTopology& topo, const OdPair& od);

/// Period-average per-trip loads per service. Branch-bound pairs load only
/// their branch's trains at rate x branch_headway. Trunk-to-trunk pairs
/// board the first arriving train, so they split in proportion to the
/// preceding headway: the A train carries rate x h_ab, the B train
/// rate x h_ba.
std::vector<TrainLoad> train_loads(const ODDemand& od, const ServicePlan& plan,
                                   const LineTopology& topo);

/// Every rate multiplied by `gamma` >= 0.
ODDemand scale_demand(const ODDemand& od, double gamma);

}  // namespace railrisk

#endif  // RAILRISK_DEMAND_HPP
