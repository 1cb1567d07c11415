#pragma once

#include "gromp/liegroup.hpp"

#include <cstddef>
#include <vector>

namespace gromp {

/// One timestep of a demonstration: world->tool, tool->object and the
/// implied world->object pose (a_so == a_st * a_to).
struct PoseRecord {
  int step = 0;
  Pose a_st;
  Pose a_to;
  Pose a_so;

  static PoseRecord from_frames(int step, const Pose& a_st, const Pose& a_to) {
    return PoseRecord{step, a_st, a_to, compose(a_st, a_to)};
  }
};

struct Episode {
  int id = 0;
  std::vector<PoseRecord> records;
};

struct DemonstrationDataset {
  std::vector<Episode> episodes;

  std::size_t record_count() const {
    std::size_t n = 0;
    for (const auto& e : episodes) n += e.records.size();
    return n;
  }

  /// All world->object poses, pooled across episodes in storage order.
  std::vector<Pose> object_poses() const {
    std::vector<Pose> out;
    out.reserve(record_count());
    for (const auto& e : episodes)
      for (const auto& r : e.records) out.push_back(r.a_so);
    return out;
  }
};

}  // namespace gromp
