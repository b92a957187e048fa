#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "fairfaucet/cost_meter.hpp"
#include "fairfaucet/min_heap.hpp"
#include "fairfaucet/types.hpp"

namespace fairfaucet {

/// One grant made during a distribution.
struct DistributionStep {
    std::uint32_t iteration = 0;  // 1-based outer-loop iteration
    UserId user = 0;
    Amount allocated = 0;
    Amount share = 0;
    Amount remaining_capacity = 0;  // capacity after this grant

    friend bool operator==(const DistributionStep&, const DistributionStep&) = default;
};

/// Everything a single distribute() call did.
struct DistributionReport {
    std::uint64_t period = 0;       // 0-based count of distribute() calls
    EpochNumber epoch = 0;          // defaults to period + 1; the simulator stamps the real epoch
    Amount capacity_before = 0;     // after the epoch capacity was added
    std::vector<Amount> shares;     // unit share of every outer iteration
    std::vector<DistributionStep> steps;
    std::map<UserId, Amount> allocations;
    Amount final_capacity = 0;
    Amount discarded_demand = 0;    // unsatisfied demand dropped at exit

    std::size_t iterations() const noexcept { return shares.size(); }
};

/// Authority-driven max-min fairness over two alternating min-heaps.
///
/// Demands collected between two distribute() calls go into the first heap.
/// distribute() adds the epoch capacity, then repeatedly computes a unit share
/// from the remaining capacity and the active heap size, grants each popped
/// demand min(share, demand, capacity) in ascending demand order, and pushes
/// any leftover demand into the other heap. Heaps swap roles between
/// iterations. Leftover capacity carries over; leftover demand is discarded.
class CmfDistributor {
public:
    explicit CmfDistributor(Amount epoch_capacity, Amount initial_capacity = 0);

    UserId register_user(CostMeter* meter = nullptr);

    /// At most one demand per user between two distributions.
    Status submit_demand(UserId user, Amount amount, CostMeter* meter = nullptr);

    DistributionReport distribute(CostMeter* meter = nullptr);

    Amount capacity() const noexcept { return capacity_; }
    Amount epoch_capacity() const noexcept { return epoch_capacity_; }
    Amount total_injected() const noexcept { return injected_; }
    std::size_t pending_demands() const noexcept { return heaps_[0].size(); }
    std::size_t user_count() const noexcept { return balances_.size(); }

    std::map<UserId, Amount> balances() const;
    Amount balance(UserId user) const;

private:
    Amount epoch_capacity_;
    Amount capacity_;
    Amount injected_;
    std::uint64_t period_ = 0;
    std::array<MinHeap, 2> heaps_;
    std::vector<Amount> balances_;                // index = user - 1
    std::vector<std::uint64_t> demand_period_;    // period of the user's last demand + 1, 0 = never
};

}  // namespace fairfaucet
