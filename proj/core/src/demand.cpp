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

#include "railrisk/demand.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "railrisk/errors.hpp"

namespace railrisk {

namespace {
constexpr double kShareTolerance = 1e-9;
}

double ODDemand::total_rate() const {
  double sum = 0.0;
  for (const auto& [od, rate] : rates) {
    (void)od;
    sum += rate;
  }
  return sum;
}

ServicePlan ServicePlan::scaled_headways(double beta) const {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "headway scale must be positive");
  }
  ServicePlan scaled = *this;
  scaled.branch_headway = branch_headway * beta;
  scaled.h_ab = h_ab * beta;
  return scaled;
}

void ServicePlan::validate() const {
  if (!(branch_headway > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "branch_headway must be positive");
  }
  if (!(h_ab > 0.0) || !(h_ab < branch_headway)) {
    throw Error(ErrorCode::InvalidParam,
                "h_ab must lie strictly between 0 and branch_headway");
  }
  if (cars_per_train < 1) {
    throw Error(ErrorCode::InvalidParam, "cars_per_train must be at least 1");
  }
  if (car_shares.size() != static_cast<std::size_t>(cars_per_train)) {
    throw Error(ErrorCode::InvalidShares,
                "car_shares must have one entry per car");
  }
  double sum = 0.0;
  for (double s : car_shares) {
    if (s < 0.0) {
      throw Error(ErrorCode::InvalidShares, "car shares must be nonnegative");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > kShareTolerance) {
    throw Error(ErrorCode::InvalidShares, "car shares must sum to 1");
  }
}

double TrainLoad::car_load(const OdPair& od, int car) const {
  auto it = loads.find(od);
  if (it == loads.end()) return 0.0;
  return it->second * car_shares.at(car);
}

double TrainLoad::total() const {
  double sum = 0.0;
  for (const auto& [od, n] : loads) {
    (void)od;
    sum += n;
  }
  return sum;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

// Accepts HH:MM; the value only tags the interval, so it is validated but
// otherwise unused beyond row identity.
void check_interval_start(const std::string& text, const std::string& where) {
  if (text.size() != 5 || text[2] != ':' || !std::isdigit(text[0]) ||
      !std::isdigit(text[1]) || !std::isdigit(text[3]) || !std::isdigit(text[4])) {
    throw Error(ErrorCode::MalformedRow, where + ": interval_start must be HH:MM");
  }
  int hh = std::atoi(text.substr(0, 2).c_str());
  int mm = std::atoi(text.substr(3, 2).c_str());
  if (hh > 23 || mm > 59) {
    throw Error(ErrorCode::MalformedRow, where + ": interval_start out of range");
  }
}

}  // namespace

ODDemand parse_od(const std::string& csv_text, const LineTopology& topo,
                  double interval_minutes, const std::string& source) {
  if (!(interval_minutes > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "interval length must be positive");
  }
  std::stringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedRow, source + ": empty file");
  }
  {
    auto header = split_csv_line(trim(line));
    const std::vector<std::string> expected = {"origin", "destination", "interval_start", "flow"};
    bool ok = header.size() == expected.size();
    for (std::size_t i = 0; ok && i < expected.size(); ++i) {
      ok = trim(header[i]) == expected[i];
    }
    if (!ok) {
      throw Error(ErrorCode::MalformedRow,
                  source + ": line 1: header must be origin,destination,interval_start,flow");
    }
  }

  const double interval_hours = interval_minutes / 60.0;
  std::map<OdPair, std::pair<double, int>> sums;  // od -> (sum of slice rates, slices)
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string row = trim(line);
    if (row.empty()) continue;
    const std::string where = source + ": line " + std::to_string(line_no);
    auto fields = split_csv_line(row);
    if (fields.size() != 4) {
      throw Error(ErrorCode::MalformedRow, where + ": expected 4 fields");
    }
    OdPair od{trim(fields[0]), trim(fields[1])};
    check_interval_start(trim(fields[2]), where);
    double flow = 0.0;
    try {
      std::size_t used = 0;
      flow = std::stod(trim(fields[3]), &used);
      if (used != trim(fields[3]).size()) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedRow, where + ": flow is not a number");
    }
    if (flow < 0.0) {
      throw Error(ErrorCode::NegativeFlow, where + ": negative flow");
    }
    // Validates the pair is a directed path; rethrows with the location.
    try {
      path(topo, od.origin, od.destination);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
    auto& acc = sums[od];
    acc.first += flow / interval_hours;
    acc.second += 1;
  }

  ODDemand demand;
  for (const auto& [od, acc] : sums) {
    demand.rates[od] = acc.first / acc.second;
  }
  return demand;
}

ODDemand load_od(const std::string& csv_path, const LineTopology& topo,
                 double interval_minutes) {
  std::ifstream in(csv_path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open od file " + csv_path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_od(buf.str(), topo, interval_minutes, csv_path);
}

std::set<std::string> serving_services(const LineTopology& topo, const OdPair& od) {
  path(topo, od.origin, od.destination);  // throws if not a valid directed pair
  if (!topo.branched()) return {"single"};
  const std::string& dest_branch = topo.branch_of(od.destination);
  if (dest_branch.empty()) return {"A", "B"};
  return {dest_branch};
}

std::vector<TrainLoad> train_loads(const ODDemand& od, const ServicePlan& plan,
                                   const LineTopology& topo) {
  plan.validate();

  std::vector<TrainLoad> result;
  if (!topo.branched()) {
    TrainLoad single;
    single.service = "single";
    single.car_shares = plan.car_shares;
    for (const auto& [pair, rate] : od.rates) {
      path(topo, pair.origin, pair.destination);
      single.loads[pair] = rate * plan.branch_headway;
    }
    result.push_back(std::move(single));
    return result;
  }

  TrainLoad a, b;
  a.service = "A";
  b.service = "B";
  a.car_shares = plan.car_shares;
  b.car_shares = plan.car_shares;
  for (const auto& [pair, rate] : od.rates) {
    auto services = serving_services(topo, pair);
    if (services.count("A") && services.count("B")) {
      // Trunk-to-trunk riders board the first arriving train.
      a.loads[pair] = rate * plan.h_ab;
      b.loads[pair] = rate * plan.h_ba();
    } else if (services.count("A")) {
      a.loads[pair] = rate * plan.branch_headway;
    } else {
      b.loads[pair] = rate * plan.branch_headway;
    }
  }
  result.push_back(std::move(a));
  result.push_back(std::move(b));
  return result;
}

ODDemand scale_demand(const ODDemand& od, double gamma) {
  if (gamma < 0.0) {
    throw Error(ErrorCode::NegativeFactor, "demand scale must be nonnegative");
  }
  ODDemand scaled;
  for (const auto& [pair, rate] : od.rates) {
    scaled.rates[pair] = rate * gamma;
  }
  return scaled;
}

}  // namespace railrisk
