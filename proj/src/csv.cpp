#include "fairfaucet/csv.hpp"

namespace fairfaucet::csv {

void write_trace(std::ostream& out, std::span<const TxReceipt> receipts) {
    out << "block,epoch,round,actor,action,amount,share,capacity,cost,over_budget\n";
    for (const auto& rx : receipts) {
        out << rx.block << ',' << rx.epoch << ',' << rx.round << ',' << rx.actor << ',' << to_string(rx.action)
            << ',' << rx.amount << ',' << rx.share << ',' << rx.capacity << ',' << rx.cost << ','
            << (rx.over_budget ? 1 : 0) << '\n';
    }
}

void write_receipts(std::ostream& out, std::span<const TxReceipt> receipts) {
    out << "block,epoch,round,actor,action,status,amount,share,user_share,capacity,floor_guarded,"
           "storage_reads,storage_writes,heap_moves,arithmetic_ops,cost,over_budget\n";
    for (const auto& rx : receipts) {
        out << rx.block << ',' << rx.epoch << ',' << rx.round << ',' << rx.actor << ',' << to_string(rx.action)
            << ',' << describe(rx.status) << ',' << rx.amount << ',' << rx.share << ',' << rx.user_share << ','
            << rx.capacity << ',' << (rx.floor_guarded ? 1 : 0) << ',' << rx.ops.storage_reads << ','
            << rx.ops.storage_writes << ',' << rx.ops.heap_moves << ',' << rx.ops.arithmetic_ops << ','
            << rx.cost << ',' << (rx.over_budget ? 1 : 0) << '\n';
    }
}

void write_balances(std::ostream& out, const std::map<UserId, Amount>& balances) {
    out << "user,balance\n";
    for (const auto& [user, balance] : balances) out << user << ',' << balance << '\n';
}

void write_distributions(std::ostream& out, std::span<const DistributionReport> reports) {
    out << "epoch,iteration,user,allocated,share,remaining_capacity\n";
    for (const auto& report : reports) {
        for (const auto& step : report.steps) {
            out << report.epoch << ',' << step.iteration << ',' << step.user << ',' << step.allocated << ','
                << step.share << ',' << step.remaining_capacity << '\n';
        }
    }
}

void write_cost_report(std::ostream& out, std::span<const CostRow> rows) {
    out << "variant,action,n,round,count,total,mean\n";
    for (const auto& row : rows) {
        out << to_string(row.variant) << ',' << to_string(row.action) << ',' << row.users << ',';
        if (row.round) {
            out << *row.round;
        } else {
            out << "all";
        }
        out << ',' << row.count << ',' << row.total << ',' << row.mean << '\n';
    }
}

}  // namespace fairfaucet::csv
