#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairfaucet/chain_sim.hpp"
#include "fairfaucet/fairness_oracle.hpp"

namespace fairfaucet {

struct Mismatch {
    EpochNumber epoch = 0;
    UserId user = 0;
    Amount got = 0;
    Amount want = 0;
};

/// Reasons an autonomous epoch may legitimately differ from plain
/// ascending-order water-filling.
struct Exceptions {
    bool fcfs_depletion = false;    // capacity ran dry mid-round; claim order decided who got the last units
    bool round_limit = false;       // water-filling needed more iterations than there are claim rounds
    bool fixed_point = false;       // weighted shares rounded through the fixed-point precision
};

struct EpochCheck {
    EpochNumber epoch = 0;
    bool exact = false;             // equal to plain water-filling
    bool explained = false;         // equal to water-filling once the exceptions are modelled
    Exceptions exceptions;
    std::size_t oracle_iterations = 0;
    Amount granted_total = 0;
    Amount oracle_total = 0;
    std::optional<Mismatch> first_difference;  // against plain water-filling
};

struct VerifyReport {
    bool passed = true;
    std::vector<EpochCheck> epochs;
    std::optional<Mismatch> first_mismatch;     // first unexplained difference
    std::size_t exact_epochs = 0;
    std::size_t fcfs_epochs = 0;
    std::size_t round_limit_epochs = 0;
    std::size_t fixed_point_epochs = 0;
    bool conservation_holds = true;             // sum of balances + capacity == injected

    std::string summary() const;
};

/// The allocation problem an epoch solved, built from the simulation record.
AllocationProblem epoch_problem(const EpochRecord& record, bool weighted);

/// Compares every served epoch with the water-filling oracle. CMF must match
/// exactly; AMF/WAMF differences must be fully accounted for by claim order,
/// the claim-round limit or fixed-point rounding.
VerifyReport verify(const SimulationResult& result);

/// Final balances from chaining plain water-filling over the scenario's
/// demand schedule, carrying leftover capacity forward. Independent of any
/// simulation output.
std::map<UserId, Amount> chained_waterfill(const Scenario& scenario);

/// Adds one unit to the first grant of the first served epoch: a negative
/// control for verify().
void inject_fault(SimulationResult& result);

}  // namespace fairfaucet
