#include "fairfaucet/cmf_distributor.hpp"

#include <algorithm>

namespace fairfaucet {

CmfDistributor::CmfDistributor(Amount epoch_capacity, Amount initial_capacity)
    : epoch_capacity_(epoch_capacity), capacity_(initial_capacity), injected_(initial_capacity) {
    if (epoch_capacity_ == 0) throw FaucetError("epoch capacity must be positive");
}

UserId CmfDistributor::register_user(CostMeter* meter) {
    balances_.push_back(0);
    demand_period_.push_back(0);
    if (meter) meter->write(2);
    return static_cast<UserId>(balances_.size());
}

Status CmfDistributor::submit_demand(UserId user, Amount amount, CostMeter* meter) {
    if (meter) meter->read();
    if (user == 0 || user > balances_.size()) return Status::unknown_user;
    if (amount == 0) return Status::empty_demand;
    auto& stamp = demand_period_[user - 1];
    if (stamp == period_ + 1) return Status::already_demanded;
    stamp = period_ + 1;
    heaps_[0].set_observer(meter);
    heaps_[0].insert({amount, user});
    heaps_[0].set_observer(nullptr);
    if (meter) meter->write();
    return Status::ok;
}

DistributionReport CmfDistributor::distribute(CostMeter* meter) {
    for (auto& heap : heaps_) heap.set_observer(meter);

    DistributionReport report;
    report.period = period_;
    report.epoch = period_ + 1;
    if (meter) meter->read();
    capacity_ += epoch_capacity_;
    injected_ += epoch_capacity_;
    report.capacity_before = capacity_;

    std::size_t active = 0;
    while (!heaps_[active].empty() && capacity_ > 0) {
        MinHeap& current = heaps_[active];
        MinHeap& next = heaps_[1 - active];
        const Amount share = capacity_ < current.size() ? 1 : capacity_ / current.size();
        if (meter) meter->arith(2);
        report.shares.push_back(share);
        const auto iteration = static_cast<std::uint32_t>(report.shares.size());

        while (!current.empty() && capacity_ > 0) {
            const HeapNode node = current.del_min();
            // Clamped by capacity as well so it can never go negative.
            const Amount granted = std::min({share, node.demand, capacity_});
            balances_[node.user - 1] += granted;
            capacity_ -= granted;
            if (meter) {
                meter->read();
                meter->write();
                meter->arith(3);
            }
            report.allocations[node.user] += granted;
            report.steps.push_back({iteration, node.user, granted, share, capacity_});
            if (node.demand > granted) {
                if (capacity_ > 0) {
                    next.insert({node.demand - granted, node.user});
                } else {
                    report.discarded_demand += node.demand - granted;
                }
            }
        }
        active = 1 - active;
    }

    for (auto& heap : heaps_) {
        for (const auto& node : heap.nodes()) report.discarded_demand += node.demand;
        heap.clear();
        heap.set_observer(nullptr);
    }
    if (meter) meter->write();
    report.final_capacity = capacity_;
    ++period_;
    return report;
}

std::map<UserId, Amount> CmfDistributor::balances() const {
    std::map<UserId, Amount> out;
    for (std::size_t i = 0; i < balances_.size(); ++i) out[static_cast<UserId>(i + 1)] = balances_[i];
    return out;
}

Amount CmfDistributor::balance(UserId user) const {
    if (user == 0 || user > balances_.size()) throw FaucetError("unknown user");
    return balances_[user - 1];
}

}  // namespace fairfaucet
