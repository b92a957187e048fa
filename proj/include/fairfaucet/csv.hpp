#pragma once

#include <map>
#include <ostream>
#include <span>

#include "fairfaucet/chain_sim.hpp"

namespace fairfaucet::csv {

// Fixed column order, integers only, '\n' line endings.

/// block,epoch,round,actor,action,amount,share,capacity,cost,over_budget
void write_trace(std::ostream& out, std::span<const TxReceipt> receipts);

/// Trace columns plus status, user share, floor-guard flag and primitive counts.
void write_receipts(std::ostream& out, std::span<const TxReceipt> receipts);

/// user,balance
void write_balances(std::ostream& out, const std::map<UserId, Amount>& balances);

/// epoch,iteration,user,allocated,share,remaining_capacity
void write_distributions(std::ostream& out, std::span<const DistributionReport> reports);

/// variant,action,n,round,count,total,mean ("all" in the round column for the overall row)
void write_cost_report(std::ostream& out, std::span<const CostRow> rows);

}  // namespace fairfaucet::csv
