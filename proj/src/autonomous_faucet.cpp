#include "fairfaucet/autonomous_faucet.hpp"

#include <algorithm>

namespace fairfaucet {

WeightPolicy WeightPolicy::reciprocal(Amount precision) {
    if (precision == 0) throw FaucetError("precision must be positive");
    return {WeightMode::reciprocal_cumulative_demand, precision};
}

Amount fixed_point_weight(Amount precision, Amount cumulative_demand) {
    if (cumulative_demand == 0) throw FaucetError("weight of a user without demand");
    return precision / cumulative_demand;
}

AutonomousFaucet::AutonomousFaucet(ClockParams clock, Amount epoch_capacity, WeightPolicy policy,
                                   Amount initial_capacity)
    : clock_(clock),
      epoch_capacity_(epoch_capacity),
      policy_(policy),
      capacity_(initial_capacity),
      injected_(initial_capacity) {
    if (epoch_capacity_ == 0) throw FaucetError("epoch capacity must be positive");
    if (policy_.weighted() && policy_.precision == 0) throw FaucetError("precision must be positive");
}

UserId AutonomousFaucet::register_user(CostMeter* meter) {
    UserAccount account;
    account.id = static_cast<UserId>(users_.size() + 1);
    users_.push_back(account);
    if (meter) meter->write(2);
    return account.id;
}

UserAccount* AutonomousFaucet::find(UserId user) {
    if (user == 0 || user > users_.size()) return nullptr;
    return &users_[user - 1];
}

const UserAccount& AutonomousFaucet::account(UserId user) const {
    if (user == 0 || user > users_.size()) throw FaucetError("unknown user");
    return users_[user - 1];
}

void AutonomousFaucet::recompute_share(CostMeter* meter) {
    const Amount total = weight_total_[epoch_ % 2];
    if (meter) {
        meter->read(2);
        meter->arith(2);
    }
    // Weighted: floor(c * p / W). Unweighted is the same with p = 1.
    share_ = total == 0 ? 0 : mul_div(capacity_, policy_.scale(), total);
}

void AutonomousFaucet::update_state(BlockNumber block, CostMeter* meter) {
    const ClockPosition pos = locate(clock_, block);
    if (meter) {
        meter->read(2);
        meter->arith(4);
    }
    if (epoch_ < pos.epoch) {
        // One epoch capacity per elapsed epoch, even if some epochs saw no transaction.
        const Amount injected = epoch_capacity_ * (pos.epoch - epoch_);
        epoch_ = pos.epoch;
        round_ = pos.round;
        capacity_ += injected;
        injected_ += injected;
        recompute_share(meter);
        if (meter) meter->write(4);
    } else if (round_ < pos.round) {
        round_ = pos.round;
        recompute_share(meter);
        if (meter) meter->write(2);
    }
}

DemandResult AutonomousFaucet::demand(UserId user, Amount amount, BlockNumber block, CostMeter* meter) {
    UserAccount* account = find(user);
    if (meter) meter->read();
    if (account == nullptr) return {Status::unknown_user, epoch_, 0};
    if (amount == 0) return {Status::empty_demand, epoch_, 0};

    update_state(block, meter);
    const unsigned slot = static_cast<unsigned>((epoch_ + 1) % 2);
    if (meter) meter->read();
    if (account->demand_epoch[slot] == epoch_) return {Status::already_demanded, epoch_, 0};

    Amount weight = 1;
    if (policy_.weighted()) {
        const Amount cumulative = account->cumulative_demand + amount;
        weight = fixed_point_weight(policy_.precision, cumulative);
        if (weight == 0) throw FaucetError("precision is smaller than cumulative demand");
        account->cumulative_demand = cumulative;
        if (meter) {
            meter->read();
            meter->write(2);
            meter->arith(2);
        }
    } else {
        account->cumulative_demand += amount;
    }

    account->demand[slot] = amount;
    account->demand_epoch[slot] = epoch_;
    account->slot_weight[slot] = weight;
    if (meter) {
        meter->write(2);
        meter->read();
    }

    // The first demand of an epoch resets the total for its slot.
    if (!reset_epoch_ || *reset_epoch_ < epoch_) {
        weight_total_[slot] = weight;
        reset_epoch_ = epoch_;
        if (meter) meter->write(2);
    } else {
        weight_total_[slot] += weight;
        if (meter) {
            meter->read();
            meter->write();
        }
    }
    return {Status::ok, epoch_, weight};
}

ClaimResult AutonomousFaucet::claim(UserId user, BlockNumber block, CostMeter* meter) {
    UserAccount* account = find(user);
    if (meter) meter->read();
    if (account == nullptr) return {Status::unknown_user, epoch_, round_};

    update_state(block, meter);
    ClaimResult result{Status::ok, epoch_, round_};
    const unsigned slot = static_cast<unsigned>(epoch_ % 2);
    if (meter) meter->read(3);
    if (epoch_ == 0 || account->demand_epoch[slot] != epoch_ - 1) {
        result.status = Status::no_demand_for_epoch;
        return result;
    }
    if (capacity_ == 0) {
        result.status = Status::capacity_depleted;
        return result;
    }
    if (account->demand[slot] == 0) {
        result.status = Status::demand_satisfied;
        return result;
    }

    if (meter) meter->read(2);
    if (account->claim_epoch == epoch_) {
        if (account->claim_round == round_) {
            result.status = Status::already_claimed_round;
            return result;
        }
    } else {
        account->claim_epoch = epoch_;
        if (meter) meter->write();
    }
    account->claim_round = round_;

    const Amount weight = account->slot_weight[slot];
    Amount user_share = share_;
    if (policy_.weighted()) {
        user_share = mul_div(share_, weight, policy_.precision);
        if (meter) {
            meter->read();
            meter->arith(2);
        }
    }
    // A live demand always receives at least one unit.
    if (user_share == 0) {
        user_share = 1;
        result.floor_guarded = true;
    }
    const Amount granted = std::min({account->demand[slot], user_share, capacity_});
    account->balance += granted;
    account->demand[slot] -= granted;
    capacity_ -= granted;
    if (meter) {
        meter->read();
        meter->write(4);
        meter->arith(3);
    }

    if (account->demand[slot] == 0) {
        if (weight_total_[slot] < weight) throw FaucetError("weight total underflow");
        weight_total_[slot] -= weight;
        if (meter) {
            meter->read();
            meter->write();
        }
    }
    result.granted = granted;
    result.user_share = user_share;
    return result;
}

std::map<UserId, Amount> AutonomousFaucet::final_balances() const {
    std::map<UserId, Amount> out;
    for (const auto& account : users_) out[account.id] = account.balance;
    return out;
}

Amount AutonomousFaucet::recompute_weight_total(unsigned parity) const {
    std::optional<EpochNumber> window;
    for (const auto& account : users_) {
        const auto& filled = account.demand_epoch.at(parity);
        if (filled && (!window || *filled > *window)) window = filled;
    }
    Amount total = 0;
    for (const auto& account : users_) {
        if (account.demand_epoch[parity] == window && account.demand[parity] > 0) {
            total += account.slot_weight[parity];
        }
    }
    return total;
}

}  // namespace fairfaucet
