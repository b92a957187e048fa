#include "fairfaucet/chain_sim.hpp"

#include <algorithm>
#include <tuple>
#include <variant>

#include "fairfaucet/autonomous_faucet.hpp"
#include "fairfaucet/chain_clock.hpp"

namespace fairfaucet {

std::string_view to_string(Action action) noexcept {
    switch (action) {
        case Action::register_user: return "register";
        case Action::demand: return "demand";
        case Action::claim: return "claim";
        case Action::distribute: return "distribute";
        case Action::noop: return "noop";
    }
    return "?";
}

std::size_t SimulationResult::over_budget_count() const {
    return static_cast<std::size_t>(
        std::count_if(receipts.begin(), receipts.end(), [](const TxReceipt& r) { return r.over_budget; }));
}

std::size_t SimulationResult::max_active_rounds() const {
    std::size_t worst = 0;
    for (const auto& e : epochs) worst = std::max(worst, e.active_rounds);
    return worst;
}

namespace {

/// What a slot in the block grid is used for.
struct Slot {
    Action action = Action::noop;
    UserId user = kAuthority;
};

class Simulator {
public:
    explicit Simulator(const Scenario& sc)
        : sc_(sc),
          clock_(0, sc.epoch_span, sc.round_span),
          demands_(sc.demand_schedule()) {
        if (sc.variant == Variant::cmf) {
            engine_.emplace<CmfDistributor>(sc.epoch_capacity);
        } else {
            const WeightPolicy policy =
                sc.variant == Variant::wamf ? WeightPolicy::reciprocal(sc.precision) : WeightPolicy::unweighted();
            engine_.emplace<AutonomousFaucet>(clock_, sc.epoch_capacity, policy);
        }
        result_.scenario = sc;
    }

    SimulationResult run() {
        const std::uint64_t rounds = clock_.rounds_per_epoch();
        for (EpochNumber e = 0; e < sc_.epochs; ++e) {
            begin_epoch(e);
            for (RoundNumber r = 0; r < rounds; ++r) {
                for (std::uint64_t k = 0; k < sc_.round_span; ++k) {
                    execute(clock_.first_block(e, r) + k, slot_for(e, r, k));
                }
            }
            end_epoch(e);
        }
        finish();
        return std::move(result_);
    }

private:
    bool autonomous() const { return sc_.variant != Variant::cmf; }

    Slot slot_for(EpochNumber e, RoundNumber r, std::uint64_t k) const {
        const std::uint64_t rounds = clock_.rounds_per_epoch();
        const auto user = static_cast<UserId>(k + 1);
        const bool user_slot = k < sc_.users;
        if (r == rounds - 1) {
            if (user_slot && e < sc_.demand_epochs()) return {Action::demand, user};
            return {Action::noop, user_slot ? user : kAuthority};
        }
        if (e == 0) {
            if (r == 0 && user_slot) return {Action::register_user, user};
            return {};
        }
        if (!autonomous()) {
            if (r == 0 && k == 0) return {Action::distribute, kAuthority};
            return {};
        }
        if (user_slot) return {Action::claim, user};
        return {};
    }

    void begin_epoch(EpochNumber e) {
        round_granted_ = false;
        if (e == 0) return;
        EpochRecord record;
        record.epoch = e;
        record.demands = std::move(pending_demands_);
        record.weights = std::move(pending_weights_);
        pending_demands_.clear();
        pending_weights_.clear();
        result_.epochs.push_back(std::move(record));
    }

    void end_epoch(EpochNumber e) {
        if (e == 0) return;
        EpochRecord& record = result_.epochs.back();
        record.capacity_end = capacity();
        Amount granted = 0;
        for (const auto& [user, amount] : record.granted) granted += amount;
        record.capacity_start = record.capacity_end + granted;
    }

    Amount capacity() const {
        return std::visit(
            [](const auto& engine) -> Amount {
                if constexpr (std::is_same_v<std::decay_t<decltype(engine)>, std::monostate>) {
                    return 0;
                } else {
                    return engine.capacity();
                }
            },
            engine_);
    }

    void execute(BlockNumber block, Slot slot) {
        const ClockPosition pos = locate(clock_, block);
        TxReceipt rx;
        rx.block = block;
        rx.epoch = pos.epoch;
        rx.round = pos.round;
        rx.action = slot.action;
        rx.actor = slot.user;
        CostMeter meter;

        if (auto* faucet = std::get_if<AutonomousFaucet>(&engine_)) {
            run_autonomous(*faucet, block, pos, slot, rx, meter);
            rx.share = faucet->unit_share();
        } else if (auto* cmf = std::get_if<CmfDistributor>(&engine_)) {
            run_cmf(*cmf, pos, slot, rx, meter);
        }
        rx.capacity = capacity();
        rx.ops = meter.ops();
        rx.cost = meter.total(sc_.cost_model);
        rx.over_budget = rx.cost > sc_.cost_model.block_budget;
        result_.receipts.push_back(rx);
    }

    Amount scripted_amount(EpochNumber e, UserId user) const { return demands_.at(e).at(user - 1); }

    void run_autonomous(AutonomousFaucet& faucet, BlockNumber block, const ClockPosition& pos, const Slot& slot,
                        TxReceipt& rx, CostMeter& meter) {
        switch (slot.action) {
            case Action::register_user:
                faucet.register_user(&meter);
                break;
            case Action::demand: {
                const Amount amount = scripted_amount(pos.epoch, slot.user);
                rx.amount = amount;
                if (amount == 0) {
                    rx.action = Action::noop;
                    break;
                }
                const DemandResult res = faucet.demand(slot.user, amount, block, &meter);
                rx.status = res.status;
                if (res.status == Status::ok) {
                    pending_demands_.emplace_back(slot.user, amount);
                    pending_weights_.push_back(res.weight);
                }
                break;
            }
            case Action::claim: {
                const ClaimResult res = faucet.claim(slot.user, block, &meter);
                rx.status = res.status;
                rx.amount = res.granted;
                rx.user_share = res.user_share;
                rx.floor_guarded = res.floor_guarded;
                if (res.floor_guarded) ++result_.floor_guard_count;
                if (res.granted > 0) {
                    EpochRecord& record = result_.epochs.back();
                    record.granted[slot.user] += res.granted;
                    if (pos.round != last_granted_round_ || !round_granted_) {
                        ++record.active_rounds;
                        last_granted_round_ = pos.round;
                        round_granted_ = true;
                    }
                }
                break;
            }
            case Action::distribute:
            case Action::noop:
                break;
        }
    }

    void run_cmf(CmfDistributor& cmf, const ClockPosition& pos, const Slot& slot, TxReceipt& rx, CostMeter& meter) {
        switch (slot.action) {
            case Action::register_user:
                cmf.register_user(&meter);
                break;
            case Action::demand: {
                const Amount amount = scripted_amount(pos.epoch, slot.user);
                rx.amount = amount;
                if (amount == 0) {
                    rx.action = Action::noop;
                    break;
                }
                rx.status = cmf.submit_demand(slot.user, amount, &meter);
                if (rx.status == Status::ok) {
                    pending_demands_.emplace_back(slot.user, amount);
                    pending_weights_.push_back(1);
                }
                break;
            }
            case Action::distribute: {
                DistributionReport report = cmf.distribute(&meter);
                report.epoch = pos.epoch;
                EpochRecord& record = result_.epochs.back();
                for (const auto& [user, amount] : report.allocations) {
                    if (amount > 0) record.granted[user] += amount;
                }
                record.active_rounds = report.iterations();
                Amount total = 0;
                for (const auto& [user, amount] : report.allocations) total += amount;
                rx.amount = total;
                rx.share = report.shares.empty() ? 0 : report.shares.front();
                result_.distributions.push_back(std::move(report));
                break;
            }
            case Action::claim:
            case Action::noop:
                break;
        }
    }

    void finish() {
        if (auto* faucet = std::get_if<AutonomousFaucet>(&engine_)) {
            result_.balances = faucet->final_balances();
            result_.injected = faucet->total_injected();
        } else if (auto* cmf = std::get_if<CmfDistributor>(&engine_)) {
            result_.balances = cmf->balances();
            result_.injected = cmf->total_injected();
        }
        result_.final_capacity = capacity();
    }

    const Scenario& sc_;
    ClockParams clock_;
    std::vector<std::vector<Amount>> demands_;
    std::variant<std::monostate, CmfDistributor, AutonomousFaucet> engine_;
    SimulationResult result_;
    std::vector<std::pair<UserId, Amount>> pending_demands_;
    std::vector<Amount> pending_weights_;
    RoundNumber last_granted_round_ = 0;
    bool round_granted_ = false;
};

}  // namespace

SimulationResult run_scenario(const Scenario& scenario) {
    scenario.validate();
    return Simulator(scenario).run();
}

std::vector<RoundSummary> claim_rounds(const SimulationResult& result) {
    std::vector<RoundSummary> out;
    for (const auto& rx : result.receipts) {
        if (rx.action != Action::claim || rx.amount == 0) continue;
        if (out.empty() || out.back().epoch != rx.epoch || out.back().round != rx.round) {
            out.push_back({rx.epoch, rx.round, rx.share, rx.capacity, {}});
        }
        out.back().grants[rx.actor] += rx.amount;
        out.back().capacity_after = rx.capacity;
    }
    return out;
}

std::vector<CostRow> cost_report(std::span<const SimulationResult> runs) {
    using Key = std::tuple<Variant, Action, std::uint32_t, std::optional<RoundNumber>>;
    std::map<Key, std::pair<std::uint64_t, std::uint64_t>> groups;  // count, total
    for (const auto& run : runs) {
        for (const auto& rx : run.receipts) {
            if (rx.action == Action::register_user || rx.action == Action::noop) continue;
            auto& all = groups[{run.scenario.variant, rx.action, run.scenario.users, std::nullopt}];
            ++all.first;
            all.second += rx.cost;
            if (rx.action == Action::claim) {
                auto& per_round = groups[{run.scenario.variant, rx.action, run.scenario.users, rx.round + 1}];
                ++per_round.first;
                per_round.second += rx.cost;
            }
        }
    }
    std::vector<CostRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, value] : groups) {
        const auto& [variant, action, users, round] = key;
        rows.push_back({variant, action, users, round, value.first, value.second, value.second / value.first});
    }
    return rows;
}

std::optional<BudgetThreshold> find_budget_threshold(const Scenario& base, std::uint32_t max_users) {
    Scenario cmf_base = base;
    cmf_base.variant = Variant::cmf;
    for (std::uint32_t n = 1; n <= max_users; ++n) {
        const SimulationResult cmf = run_scenario(cmf_base.rescaled(n));
        std::uint64_t worst = 0;
        for (const auto& rx : cmf.receipts) {
            if (rx.action == Action::distribute) worst = std::max(worst, rx.cost);
        }
        if (worst <= base.cost_model.block_budget) continue;

        BudgetThreshold threshold;
        threshold.users = n;
        threshold.distribute_cost = worst;
        Scenario auto_base = base;
        if (auto_base.variant == Variant::cmf) auto_base.variant = Variant::amf;
        const SimulationResult autonomous = run_scenario(auto_base.rescaled(n));
        for (const auto& rx : autonomous.receipts) {
            if (rx.action == Action::claim || rx.action == Action::demand) {
                threshold.max_autonomous_cost = std::max(threshold.max_autonomous_cost, rx.cost);
            }
        }
        threshold.autonomous_within_budget = threshold.max_autonomous_cost <= base.cost_model.block_budget;
        return threshold;
    }
    return std::nullopt;
}

}  // namespace fairfaucet
