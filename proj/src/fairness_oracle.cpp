#include "fairfaucet/fairness_oracle.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace fairfaucet {

namespace {

struct Pending {
    UserId user;
    Amount remaining;
    Amount weight;
    std::size_t rank;  // arrival position
};

}  // namespace

void AllocationProblem::validate() const {
    std::set<UserId> seen;
    for (const auto& [user, amount] : demands) {
        if (!seen.insert(user).second) throw FaucetError("duplicate user " + std::to_string(user));
        if (amount == 0) throw FaucetError("empty demand for user " + std::to_string(user));
    }
    if (weights) {
        if (weights->size() != demands.size()) throw FaucetError("weights do not match demands");
        for (Amount w : *weights) {
            if (w == 0) throw FaucetError("weights must be positive");
        }
    }
}

std::map<UserId, Amount> waterfill(const AllocationProblem& problem) {
    return waterfill(problem, WaterfillOptions{}).allocation;
}

WaterfillResult waterfill(const AllocationProblem& problem, const WaterfillOptions& options) {
    problem.validate();

    std::map<UserId, std::size_t> rank;
    if (options.order == ServiceOrder::arrival) {
        for (std::size_t i = 0; i < options.arrival.size(); ++i) rank.emplace(options.arrival[i], i);
    }

    WaterfillResult result;
    std::vector<Pending> pending;
    pending.reserve(problem.demands.size());
    for (std::size_t i = 0; i < problem.demands.size(); ++i) {
        const auto& [user, amount] = problem.demands[i];
        std::size_t position = i;
        if (options.order == ServiceOrder::arrival) {
            auto it = rank.find(user);
            if (it == rank.end()) throw FaucetError("user " + std::to_string(user) + " missing from arrival order");
            position = it->second;
        }
        pending.push_back({user, amount, problem.weights ? (*problem.weights)[i] : 1, position});
        result.allocation[user] = 0;
    }

    Amount capacity = problem.capacity;
    while (!pending.empty() && capacity > 0) {
        if (options.max_iterations && result.iterations >= *options.max_iterations) break;
        ++result.iterations;

        if (options.order == ServiceOrder::ascending_demand) {
            std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
                return a.remaining != b.remaining ? a.remaining < b.remaining : a.user < b.user;
            });
        } else {
            std::sort(pending.begin(), pending.end(),
                      [](const Pending& a, const Pending& b) { return a.rank < b.rank; });
        }

        Amount total_weight = 0;
        for (const auto& p : pending) total_weight += p.weight;
        const Amount level = capacity;  // capacity at the start of the iteration

        std::vector<Pending> unsatisfied;
        for (auto& p : pending) {
            if (capacity == 0) {
                result.depleted_mid_iteration = true;
                unsatisfied.push_back(p);
                continue;
            }
            Amount share = 0;
            if (options.fixed_point_precision) {
                const Amount precision = *options.fixed_point_precision;
                share = mul_div(mul_div(level, precision, total_weight), p.weight, precision);
            } else {
                share = mul_div(level, p.weight, total_weight);
            }
            share = std::max<Amount>(share, 1);
            const Amount granted = std::min({share, p.remaining, capacity});
            result.allocation[p.user] += granted;
            p.remaining -= granted;
            capacity -= granted;
            if (p.remaining > 0) unsatisfied.push_back(p);
        }
        pending = std::move(unsatisfied);
    }

    result.leftover_capacity = capacity;
    for (const auto& p : pending) result.unmet_demand += p.remaining;
    return result;
}

FairnessVerdict is_maxmin_fair(const AllocationProblem& problem, const std::map<UserId, Amount>& allocation) {
    problem.validate();

    struct Row {
        UserId user;
        Amount demand;
        Amount weight;
        Amount got;
    };
    std::vector<Row> rows;
    std::map<UserId, std::size_t> index;
    for (std::size_t i = 0; i < problem.demands.size(); ++i) {
        const auto& [user, amount] = problem.demands[i];
        index.emplace(user, i);
        rows.push_back({user, amount, problem.weights ? (*problem.weights)[i] : 1, 0});
    }

    Amount total = 0;
    for (const auto& [user, got] : allocation) {
        auto it = index.find(user);
        if (it == index.end()) {
            if (got == 0) continue;
            throw FaucetError("allocation to user " + std::to_string(user) + " without demand");
        }
        Row& row = rows[it->second];
        if (got > row.demand) throw FaucetError("allocation exceeds demand for user " + std::to_string(user));
        row.got = got;
        total += got;
    }
    if (total > problem.capacity) throw FaucetError("allocation exceeds capacity");

    FairnessVerdict verdict;
    for (const auto& u : rows) {
        if (u.got >= u.demand) continue;
        if (total < problem.capacity) {
            verdict.fair = false;
            verdict.recipient = u.user;
            return verdict;
        }
        for (const auto& v : rows) {
            if (v.user == u.user || v.got == 0) continue;
            // (v.got - 1) / v.weight >= (u.got + 1) / u.weight, cross-multiplied.
            const auto lhs = static_cast<WideAmount>(v.got - 1) * u.weight;
            const auto rhs = static_cast<WideAmount>(u.got + 1) * v.weight;
            if (lhs >= rhs) {
                verdict.fair = false;
                verdict.recipient = u.user;
                verdict.donor = v.user;
                return verdict;
            }
        }
    }
    return verdict;
}

}  // namespace fairfaucet
