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

#ifndef RAILRISK_TOPOLOGY_HPP
#define RAILRISK_TOPOLOGY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace railrisk {

struct Station {
  std::string id;
  std::string name;
  std::string group;  // label used for infection-rate assignment
};

/// Ordered origin/destination station pair, identified by ids.
struct OdPair {
  std::string origin;
  std::string destination;

  friend auto operator<=>(const OdPair&, const OdPair&) = default;
};

/// Contiguous run of stations a passenger rides through, boarding to
/// alighting inclusive.
struct RideSegment {
  std::string boarding;
  std::string alighting;
  std::vector<std::string> stations;

  bool empty() const { return stations.size() < 2; }
};

/// One directed line in the analysis direction: an ordered trunk plus
/// optional branches "A" and "B", both attached after the last trunk station.
/// Segment times are door-close to door-close hours, so intermediate dwell
/// is folded in. Immutable once constructed; safe to share across threads.
class LineTopology {
 public:
  LineTopology(std::vector<Station> trunk,
               std::map<std::string, std::vector<Station>> branches,
               std::map<std::pair<std::string, std::string>, double> segment_times);

  const std::vector<Station>& trunk() const { return trunk_; }
  const std::map<std::string, std::vector<Station>>& branches() const { return branches_; }
  bool branched() const { return !branches_.empty(); }

  const Station& station(const std::string& id) const;
  bool has_station(const std::string& id) const;

  /// "" for trunk stations, otherwise the branch key ("A" or "B").
  const std::string& branch_of(const std::string& id) const;

  /// Hours between two adjacent stations; throws UnknownStation if the pair
  /// is not an adjacent pair of the topology.
  double segment_time(const std::string& from, const std::string& to) const;

  /// All station ids, trunk first, then branch A, then branch B.
  std::vector<std::string> station_ids() const;

  /// All directed od pairs with a valid path, in deterministic order.
  std::vector<OdPair> all_od_pairs() const;

 private:
  struct Position {
    std::string branch;  // "" = trunk
    int index = 0;       // index within trunk or within its branch
  };

  const Position& position(const std::string& id) const;
  friend RideSegment path(const LineTopology&, const std::string&, const std::string&);

  std::vector<Station> trunk_;
  std::map<std::string, std::vector<Station>> branches_;
  std::map<std::pair<std::string, std::string>, double> segment_times_;
  std::map<std::string, Position> positions_;
};

/// Station sequence of the unique directed path from i to j.
/// Throws UnknownStation or UnreachablePair.
RideSegment path(const LineTopology& topo, const std::string& i, const std::string& j);

/// Maximal common sub-segment of the two od paths: from the later boarding
/// (in path order) to the earlier end of co-riding. Empty when the pairs
/// share at most one station.
RideSegment overlap(const LineTopology& topo, const OdPair& od1, const OdPair& od2);

/// Hours the od1 passenger spends sharing a train with od2 passengers:
/// sum of segment times over the overlap; 0 when the overlap is empty.
double exposure_time(const LineTopology& topo, const OdPair& od1, const OdPair& od2);

/// Loads and validates a topology JSON file, reporting the first violation
/// with its location in the file.
LineTopology load_topology(const std::string& json_path);

/// Parses a topology from JSON text; `source` names the origin in errors.
LineTopology parse_topology(const std::string& json_text, const std::string& source);

}  // namespace railrisk

#endif  // RAILRISK_TOPOLOGY_HPP
