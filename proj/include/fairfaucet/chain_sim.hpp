#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fairfaucet/cmf_distributor.hpp"
#include "fairfaucet/cost_meter.hpp"
#include "fairfaucet/scenario.hpp"
#include "fairfaucet/types.hpp"

namespace fairfaucet {

enum class Action { register_user, demand, claim, distribute, noop };

std::string_view to_string(Action action) noexcept;

/// One simulated transaction. Instant seal: exactly one per block.
struct TxReceipt {
    BlockNumber block = 0;
    EpochNumber epoch = 0;
    RoundNumber round = 0;
    Action action = Action::noop;
    UserId actor = kAuthority;
    Status status = Status::ok;
    Amount amount = 0;          // demanded, granted or distributed
    Amount share = 0;           // unit share in force after the transaction
    Amount user_share = 0;      // claims only: the share this user was entitled to
    Amount capacity = 0;        // capacity after the transaction
    bool floor_guarded = false;
    OpCounts ops;
    std::uint64_t cost = 0;
    bool over_budget = false;
};

/// Per-epoch view of what was owed and what was handed out. Epoch e serves
/// the demands registered during epoch e - 1.
struct EpochRecord {
    EpochNumber epoch = 0;
    Amount capacity_start = 0;  // after this epoch's capacity was added
    Amount capacity_end = 0;
    std::vector<std::pair<UserId, Amount>> demands;  // accepted in epoch - 1
    std::vector<Amount> weights;                     // snapshot weights aligned with demands
    std::map<UserId, Amount> granted;
    std::size_t active_rounds = 0;                   // claim rounds (or iterations) with a grant
};

struct SimulationResult {
    Scenario scenario;
    std::vector<TxReceipt> receipts;
    std::vector<DistributionReport> distributions;  // CMF only
    std::vector<EpochRecord> epochs;                 // one per served epoch
    std::map<UserId, Amount> balances;
    Amount final_capacity = 0;
    Amount injected = 0;
    std::size_t floor_guard_count = 0;

    std::size_t over_budget_count() const;
    std::size_t max_active_rounds() const;
};

/// Runs the block schedule. Throws ScenarioError for an invalid scenario.
SimulationResult run_scenario(const Scenario& scenario);

/// Claim-round summary: who received what in one round.
struct RoundSummary {
    EpochNumber epoch = 0;
    RoundNumber round = 0;
    Amount unit_share = 0;
    Amount capacity_after = 0;
    std::map<UserId, Amount> grants;
};

/// Rounds of the autonomous variants in which at least one unit was granted.
std::vector<RoundSummary> claim_rounds(const SimulationResult& result);

struct CostRow {
    Variant variant = Variant::amf;
    Action action = Action::noop;
    std::uint32_t users = 0;
    std::optional<RoundNumber> round;  // 1-based claim round; empty = all rounds
    std::uint64_t count = 0;
    std::uint64_t total = 0;
    std::uint64_t mean = 0;            // floor(total / count)
};

/// Mean and total cost grouped by variant, action and n. Claims get an
/// extra row per claim round. Register and no-op transactions are left out.
std::vector<CostRow> cost_report(std::span<const SimulationResult> runs);

struct BudgetThreshold {
    std::uint32_t users = 0;               // smallest n with an over-budget distribution
    std::uint64_t distribute_cost = 0;     // worst CMF distribute cost at that n
    std::uint64_t max_autonomous_cost = 0; // worst AMF/WAMF demand or claim at that n
    bool autonomous_within_budget = true;
};

/// Scans n = 1..max_users for the first n at which a CMF distribution
/// exceeds the block budget, using the scenario's per-user multipliers and
/// cost model, then runs the autonomous variant at the same n.
std::optional<BudgetThreshold> find_budget_threshold(const Scenario& base, std::uint32_t max_users);

}  // namespace fairfaucet
