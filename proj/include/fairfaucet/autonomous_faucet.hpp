#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fairfaucet/chain_clock.hpp"
#include "fairfaucet/cost_meter.hpp"
#include "fairfaucet/types.hpp"

namespace fairfaucet {

enum class WeightMode { unweighted, reciprocal_cumulative_demand };

/// How user weights are derived. Weighted mode stores fixed-point weights
/// floor(precision / cumulative_demand); precision must exceed every user's
/// lifetime demand volume or weights collapse to zero.
struct WeightPolicy {
    WeightMode mode = WeightMode::unweighted;
    Amount precision = 1;

    static WeightPolicy unweighted() { return {WeightMode::unweighted, 1}; }
    static WeightPolicy reciprocal(Amount precision);

    bool weighted() const noexcept { return mode == WeightMode::reciprocal_cumulative_demand; }
    Amount scale() const noexcept { return weighted() ? precision : 1; }
};

/// floor(precision / cumulative_demand). Throws on a zero denominator.
Amount fixed_point_weight(Amount precision, Amount cumulative_demand);

struct UserAccount {
    UserId id = 0;
    Amount balance = 0;
    std::array<Amount, 2> demand{};                        // remaining demand per parity slot
    std::array<std::optional<EpochNumber>, 2> demand_epoch{};
    std::optional<EpochNumber> claim_epoch;
    RoundNumber claim_round = 0;
    Amount cumulative_demand = 0;
    std::array<Amount, 2> slot_weight{};                   // weight in force when the slot was filled
};

struct DemandResult {
    Status status = Status::ok;
    EpochNumber epoch = 0;
    Amount weight = 0;
};

struct ClaimResult {
    Status status = Status::ok;
    EpochNumber epoch = 0;
    RoundNumber round = 0;
    Amount granted = 0;
    Amount user_share = 0;
    bool floor_guarded = false;  // computed user share was 0 and was raised to 1
};

/// User-driven max-min fairness faucet.
///
/// Demands registered in epoch E are claimed during the rounds of epoch E+1.
/// Every round recomputes the unit share from the capacity left and the
/// total weight of the still-unsatisfied demands, so successive rounds play
/// the part of the outer iterations of the centralized algorithm. Each user
/// claims at most once per round. Per-user storage is double-buffered by
/// epoch parity so a demand for the next epoch never overwrites the one
/// being claimed.
class AutonomousFaucet {
public:
    AutonomousFaucet(ClockParams clock, Amount epoch_capacity, WeightPolicy policy,
                     Amount initial_capacity = 0);

    UserId register_user(CostMeter* meter = nullptr);

    /// Brings epoch, round, capacity and unit share up to date with `block`.
    void update_state(BlockNumber block, CostMeter* meter = nullptr);

    DemandResult demand(UserId user, Amount amount, BlockNumber block, CostMeter* meter = nullptr);
    ClaimResult claim(UserId user, BlockNumber block, CostMeter* meter = nullptr);

    std::map<UserId, Amount> final_balances() const;

    const ClockParams& clock() const noexcept { return clock_; }
    const WeightPolicy& policy() const noexcept { return policy_; }
    Amount capacity() const noexcept { return capacity_; }
    Amount epoch_capacity() const noexcept { return epoch_capacity_; }
    Amount total_injected() const noexcept { return injected_; }
    EpochNumber epoch() const noexcept { return epoch_; }
    RoundNumber round() const noexcept { return round_; }
    Amount unit_share() const noexcept { return share_; }
    Amount weight_total(unsigned parity) const { return weight_total_.at(parity); }
    std::optional<EpochNumber> reset_epoch() const noexcept { return reset_epoch_; }
    std::size_t user_count() const noexcept { return users_.size(); }
    const UserAccount& account(UserId user) const;

    /// Sum of slot weights over users whose parity slot holds an unsatisfied
    /// demand from the most recent demand window. Equals weight_total() for
    /// the claim parity whenever that window had any demand.
    Amount recompute_weight_total(unsigned parity) const;

private:
    void recompute_share(CostMeter* meter);
    UserAccount* find(UserId user);

    ClockParams clock_;
    Amount epoch_capacity_;
    WeightPolicy policy_;
    Amount capacity_;
    Amount injected_;
    EpochNumber epoch_ = 0;
    RoundNumber round_ = 0;
    Amount share_ = 0;
    std::array<Amount, 2> weight_total_{};
    std::optional<EpochNumber> reset_epoch_;
    std::vector<UserAccount> users_;  // index = id - 1
};

}  // namespace fairfaucet
