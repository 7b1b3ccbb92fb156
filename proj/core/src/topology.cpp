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

#include "railrisk/topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "railrisk/errors.hpp"

#include <json.hpp>

namespace railrisk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownStation: return "UnknownStation";
    case ErrorCode::UnreachablePair: return "UnreachablePair";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NegativeFlow: return "NegativeFlow";
    case ErrorCode::NegativeFactor: return "NegativeFactor";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::InvalidShares: return "InvalidShares";
    case ErrorCode::InvalidAttackRate: return "InvalidAttackRate";
    case ErrorCode::EmptyDemand: return "EmptyDemand";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::ZeroVentilation: return "ZeroVentilation";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::NoFeasibleMask: return "NoFeasibleMask";
    case ErrorCode::NoFeasibleProportion: return "NoFeasibleProportion";
    case ErrorCode::DegenerateMask: return "DegenerateMask";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::TargetUnreachable:
    case ErrorCode::NoFeasibleMask:
    case ErrorCode::NoFeasibleProportion:
    case ErrorCode::DegenerateMask:
    case ErrorCode::ZeroVentilation:
      return false;
    default:
      return true;
  }
}

LineTopology::LineTopology(std::vector<Station> trunk,
                           std::map<std::string, std::vector<Station>> branches,
                           std::map<std::pair<std::string, std::string>, double> segment_times)
    : trunk_(std::move(trunk)),
      branches_(std::move(branches)),
      segment_times_(std::move(segment_times)) {
  if (trunk_.size() < 2) {
    throw Error(ErrorCode::ConfigError, "trunk must have at least two stations");
  }
  for (const auto& [name, stations] : branches_) {
    if (name != "A" && name != "B") {
      throw Error(ErrorCode::ConfigError,
                  "branch name must be \"A\" or \"B\", got \"" + name + "\"");
    }
    if (stations.empty()) {
      throw Error(ErrorCode::ConfigError, "branch \"" + name + "\" is empty");
    }
  }

  auto add_station = [this](const Station& s, const std::string& branch, int index) {
    if (s.id.empty()) {
      throw Error(ErrorCode::ConfigError, "station with empty id");
    }
    auto [it, inserted] = positions_.emplace(s.id, Position{branch, index});
    (void)it;
    if (!inserted) {
      throw Error(ErrorCode::ConfigError, "duplicate station id \"" + s.id + "\"");
    }
  };
  for (int i = 0; i < static_cast<int>(trunk_.size()); ++i) {
    add_station(trunk_[i], "", i);
  }
  for (const auto& [name, stations] : branches_) {
    for (int i = 0; i < static_cast<int>(stations.size()); ++i) {
      add_station(stations[i], name, i);
    }
  }

  // Every adjacent pair along the trunk, at each branch attachment, and
  // along each branch needs a positive segment time.
  auto require_time = [this](const std::string& from, const std::string& to) {
    auto it = segment_times_.find({from, to});
    if (it == segment_times_.end()) {
      throw Error(ErrorCode::ConfigError,
                  "missing segment time for adjacent pair " + from + " -> " + to);
    }
    if (!(it->second > 0.0)) {
      throw Error(ErrorCode::ConfigError,
                  "segment time for " + from + " -> " + to + " must be positive");
    }
  };
  std::size_t expected = 0;
  for (std::size_t i = 0; i + 1 < trunk_.size(); ++i) {
    require_time(trunk_[i].id, trunk_[i + 1].id);
    ++expected;
  }
  for (const auto& [name, stations] : branches_) {
    require_time(trunk_.back().id, stations.front().id);
    ++expected;
    for (std::size_t i = 0; i + 1 < stations.size(); ++i) {
      require_time(stations[i].id, stations[i + 1].id);
      ++expected;
    }
  }
  if (segment_times_.size() != expected) {
    for (const auto& [pair, hours] : segment_times_) {
      (void)hours;
      if (!has_station(pair.first) || !has_station(pair.second)) {
        throw Error(ErrorCode::ConfigError,
                    "segment time references unknown station " + pair.first + " -> " + pair.second);
      }
    }
    throw Error(ErrorCode::ConfigError,
                "segment_times contains entries that are not adjacent pairs of the line");
  }
}

bool LineTopology::has_station(const std::string& id) const {
  return positions_.count(id) != 0;
}

const LineTopology::Position& LineTopology::position(const std::string& id) const {
  auto it = positions_.find(id);
  if (it == positions_.end()) {
    throw Error(ErrorCode::UnknownStation, "station \"" + id + "\" not in topology");
  }
  return it->second;
}

const Station& LineTopology::station(const std::string& id) const {
  const Position& pos = position(id);
  if (pos.branch.empty()) return trunk_[pos.index];
  return branches_.at(pos.branch)[pos.index];
}

const std::string& LineTopology::branch_of(const std::string& id) const {
  return position(id).branch;
}

double LineTopology::segment_time(const std::string& from, const std::string& to) const {
  auto it = segment_times_.find({from, to});
  if (it == segment_times_.end()) {
    throw Error(ErrorCode::UnknownStation,
                "no segment between " + from + " and " + to);
  }
  return it->second;
}

std::vector<std::string> LineTopology::station_ids() const {
  std::vector<std::string> ids;
  ids.reserve(positions_.size());
  for (const auto& s : trunk_) ids.push_back(s.id);
  for (const auto& [name, stations] : branches_) {
    (void)name;
    for (const auto& s : stations) ids.push_back(s.id);
  }
  return ids;
}

std::vector<OdPair> LineTopology::all_od_pairs() const {
  std::vector<OdPair> ods;
  auto emit_line = [&ods](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      for (std::size_t j = i + 1; j < line.size(); ++j) {
        ods.push_back({line[i], line[j]});
      }
    }
  };
  if (branches_.empty()) {
    std::vector<std::string> line;
    for (const auto& s : trunk_) line.push_back(s.id);
    emit_line(line);
    return ods;
  }
  // Trunk-to-trunk pairs once, then trunk-to-branch and within-branch pairs.
  for (std::size_t i = 0; i < trunk_.size(); ++i) {
    for (std::size_t j = i + 1; j < trunk_.size(); ++j) {
      ods.push_back({trunk_[i].id, trunk_[j].id});
    }
  }
  for (const auto& [name, stations] : branches_) {
    (void)name;
    for (const auto& t : trunk_) {
      for (const auto& b : stations) {
        ods.push_back({t.id, b.id});
      }
    }
    for (std::size_t i = 0; i < stations.size(); ++i) {
      for (std::size_t j = i + 1; j < stations.size(); ++j) {
        ods.push_back({stations[i].id, stations[j].id});
      }
    }
  }
  std::sort(ods.begin(), ods.end());
  return ods;
}

RideSegment path(const LineTopology& topo, const std::string& i, const std::string& j) {
  const auto& pi = topo.position(i);
  const auto& pj = topo.position(j);
  if (i == j) {
    throw Error(ErrorCode::UnreachablePair, "origin and destination are both \"" + i + "\"");
  }

  RideSegment seg;
  seg.boarding = i;
  seg.alighting = j;

  auto push_trunk = [&](int from, int to) {
    for (int k = from; k <= to; ++k) seg.stations.push_back(topo.trunk()[k].id);
  };

  if (pj.branch.empty()) {
    // Destination on trunk: origin must be an earlier trunk station.
    if (!pi.branch.empty() || pi.index >= pj.index) {
      throw Error(ErrorCode::UnreachablePair,
                  "no directed path from \"" + i + "\" to \"" + j + "\"");
    }
    push_trunk(pi.index, pj.index);
    return seg;
  }

  const auto& branch = topo.branches().at(pj.branch);
  if (pi.branch.empty()) {
    push_trunk(pi.index, static_cast<int>(topo.trunk().size()) - 1);
    for (int k = 0; k <= pj.index; ++k) seg.stations.push_back(branch[k].id);
    return seg;
  }
  if (pi.branch != pj.branch || pi.index >= pj.index) {
    throw Error(ErrorCode::UnreachablePair,
                "no directed path from \"" + i + "\" to \"" + j + "\"");
  }
  for (int k = pi.index; k <= pj.index; ++k) seg.stations.push_back(branch[k].id);
  return seg;
}

RideSegment overlap(const LineTopology& topo, const OdPair& od1, const OdPair& od2) {
  RideSegment p1 = path(topo, od1.origin, od1.destination);
  RideSegment p2 = path(topo, od2.origin, od2.destination);

  std::unordered_set<std::string> in2(p2.stations.begin(), p2.stations.end());
  RideSegment common;
  for (const auto& id : p1.stations) {
    if (in2.count(id)) common.stations.push_back(id);
  }
  if (common.stations.size() < 2) {
    return RideSegment{};  // at most one shared station: no co-riding segment
  }
  common.boarding = common.stations.front();
  common.alighting = common.stations.back();
  return common;
}

double exposure_time(const LineTopology& topo, const OdPair& od1, const OdPair& od2) {
  RideSegment seg = overlap(topo, od1, od2);
  double hours = 0.0;
  for (std::size_t k = 0; k + 1 < seg.stations.size(); ++k) {
    hours += topo.segment_time(seg.stations[k], seg.stations[k + 1]);
  }
  return hours;
}

namespace {

using nlohmann::json;

Station parse_station(const json& node, const std::string& where) {
  if (!node.is_object() || !node.contains("id") || !node["id"].is_string()) {
    throw Error(ErrorCode::ConfigError, where + ": station object needs a string \"id\"");
  }
  Station s;
  s.id = node["id"].get<std::string>();
  s.name = node.value("name", s.id);
  s.group = node.value("group", std::string{});
  return s;
}

}  // namespace

LineTopology parse_topology(const std::string& json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, source + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("trunk") || !doc["trunk"].is_array()) {
    throw Error(ErrorCode::ConfigError, source + ": missing \"trunk\" array");
  }

  std::vector<Station> trunk;
  for (std::size_t i = 0; i < doc["trunk"].size(); ++i) {
    trunk.push_back(parse_station(doc["trunk"][i], source + ": trunk[" + std::to_string(i) + "]"));
  }

  std::map<std::string, std::vector<Station>> branches;
  if (doc.contains("branches")) {
    if (!doc["branches"].is_object()) {
      throw Error(ErrorCode::ConfigError, source + ": \"branches\" must be an object");
    }
    for (const auto& [name, arr] : doc["branches"].items()) {
      if (!arr.is_array()) {
        throw Error(ErrorCode::ConfigError,
                    source + ": branches[\"" + name + "\"] must be an array");
      }
      std::vector<Station> stations;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        stations.push_back(parse_station(
            arr[i], source + ": branches[\"" + name + "\"][" + std::to_string(i) + "]"));
      }
      branches.emplace(name, std::move(stations));
    }
  }

  std::map<std::pair<std::string, std::string>, double> times;
  if (!doc.contains("segment_times") || !doc["segment_times"].is_array()) {
    throw Error(ErrorCode::ConfigError, source + ": missing \"segment_times\" array");
  }
  for (std::size_t i = 0; i < doc["segment_times"].size(); ++i) {
    const json& entry = doc["segment_times"][i];
    const std::string where = source + ": segment_times[" + std::to_string(i) + "]";
    if (!entry.is_object() || !entry.contains("from") || !entry.contains("to") ||
        !entry.contains("hours")) {
      throw Error(ErrorCode::ConfigError, where + ": needs \"from\", \"to\", \"hours\"");
    }
    if (!entry["from"].is_string() || !entry["to"].is_string() || !entry["hours"].is_number()) {
      throw Error(ErrorCode::ConfigError, where + ": wrong field types");
    }
    auto key = std::make_pair(entry["from"].get<std::string>(), entry["to"].get<std::string>());
    double hours = entry["hours"].get<double>();
    if (!(hours > 0.0)) {
      throw Error(ErrorCode::ConfigError, where + ": hours must be positive");
    }
    if (!times.emplace(key, hours).second) {
      throw Error(ErrorCode::ConfigError,
                  where + ": duplicate segment " + key.first + " -> " + key.second);
    }
  }

  try {
    return LineTopology(std::move(trunk), std::move(branches), std::move(times));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) {
      throw Error(ErrorCode::ConfigError, source + ": " + e.what());
    }
    throw;
  }
}

LineTopology load_topology(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open topology file " + json_path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_topology(buf.str(), json_path);
}

}  // namespace railrisk
