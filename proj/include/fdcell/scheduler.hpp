// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fdcell/channel.hpp"
#include "fdcell/linalg.hpp"

namespace fdcell {

/// Per-stream user selection for one direction. fallback[m] marks streams
/// whose candidate set was empty, in which case the unconstrained best user
/// was taken instead.
struct StreamAssignment {
  std::vector<int> users;
  std::vector<bool> fallback;
};

/// Joint selection for one block.
struct Schedule {
  std::vector<int> uplink_users;
  std::vector<int> downlink_users;
  std::vector<bool> uplink_fallback;
  std::vector<bool> downlink_fallback;
  double epsilon_used = 0.0;
};

/// Evaluate the threshold for n users. Decaying mode needs n >= 2 so that
/// ln(n) > 0.
double epsilon_value(const EpsilonSchedule& schedule, int n);

/// Opportunistic uplink selection. For each stream m in order, the candidate
/// set keeps the unscheduled users whose projections on every other beam stay
/// within `threshold`; the user with the largest own-beam projection wins.
/// Streams with an empty candidate set fall back to the unconstrained argmax
/// and are flagged. Ties break toward the smallest user index.
///
/// channels: streams x users (column k = uplink user k).
/// beams: unitary streams x streams.
StreamAssignment schedule_uplink(const ComplexMatrix& channels,
                                 const ComplexMatrix& beams, double threshold);

/// Downlink counterpart: candidates additionally need interference power at
/// most `threshold` from every scheduled uplink user. interference_columns
/// runs parallel to uplink_users; entry i points at the gain column of
/// uplink_users[i] (length = number of downlink users).
///
/// channels: users x streams (row k = conjugated channel of downlink user k).
StreamAssignment schedule_downlink(
    const ComplexMatrix& channels, const ComplexMatrix& beams,
    const std::vector<int>& uplink_users,
    const std::vector<const ComplexVector*>& interference_columns,
    double threshold);

}  // namespace fdcell
