#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairfaucet/types.hpp"

namespace fairfaucet {

/// A single-period, single-resource allocation instance.
struct AllocationProblem {
    std::vector<std::pair<UserId, Amount>> demands;  // distinct users, amounts >= 1
    Amount capacity = 0;
    std::optional<std::vector<Amount>> weights;      // aligned with demands, each >= 1

    /// Throws FaucetError on duplicate users, zero demands or misaligned weights.
    void validate() const;
};

/// Service order inside one water-filling iteration. Only matters when the
/// capacity runs out before every pending demand has been served.
enum class ServiceOrder { ascending_demand, arrival };

struct WaterfillOptions {
    ServiceOrder order = ServiceOrder::ascending_demand;
    std::vector<UserId> arrival;                 // required for ServiceOrder::arrival
    std::optional<std::size_t> max_iterations;   // unlimited by default
    /// When set, weighted shares are computed the way the fixed-point faucet
    /// does: floor(floor(c * p / W) * w / p). Otherwise floor(c * w / W).
    std::optional<Amount> fixed_point_precision;
};

struct WaterfillResult {
    std::map<UserId, Amount> allocation;
    Amount leftover_capacity = 0;
    std::size_t iterations = 0;
    bool depleted_mid_iteration = false;  // some iteration ran dry with demands still queued
    Amount unmet_demand = 0;
};

/// Integer max-min water-filling on a sorted list. Every iteration gives each
/// unsatisfied demand min(share, remaining, capacity) with
/// share = max(1, floor(capacity * w / W)), where W sums the weights of the
/// unsatisfied demands (all weights are 1 when none are given).
std::map<UserId, Amount> waterfill(const AllocationProblem& problem);
WaterfillResult waterfill(const AllocationProblem& problem, const WaterfillOptions& options);

struct FairnessVerdict {
    bool fair = true;
    std::optional<UserId> recipient;  // user who could take one more unit
    std::optional<UserId> donor;      // user who could give it up; empty when the unit is idle capacity
};

/// Checks that no unit can move from a better-off user v to a user u below
/// their demand while keeping v at or above u (weighted: compared on
/// allocation / weight). A gap of one unit between equal-weight users is
/// tolerated. Idle capacity alongside unmet demand is also a violation.
/// Throws FaucetError for infeasible allocations.
FairnessVerdict is_maxmin_fair(const AllocationProblem& problem, const std::map<UserId, Amount>& allocation);

}  // namespace fairfaucet
