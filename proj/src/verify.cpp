#include "fairfaucet/verify.hpp"

#include <sstream>

namespace fairfaucet {

namespace {

std::optional<Mismatch> first_difference(EpochNumber epoch, const std::map<UserId, Amount>& got,
                                         const std::map<UserId, Amount>& want) {
    auto lookup = [](const std::map<UserId, Amount>& m, UserId u) {
        auto it = m.find(u);
        return it == m.end() ? Amount{0} : it->second;
    };
    std::map<UserId, bool> users;
    for (const auto& [u, a] : got) users[u] = true;
    for (const auto& [u, a] : want) users[u] = true;
    for (const auto& [u, flag] : users) {
        const Amount g = lookup(got, u);
        const Amount w = lookup(want, u);
        if (g != w) return Mismatch{epoch, u, g, w};
    }
    return std::nullopt;
}

Amount sum(const std::map<UserId, Amount>& m) {
    Amount total = 0;
    for (const auto& [u, a] : m) total += a;
    return total;
}

}  // namespace

AllocationProblem epoch_problem(const EpochRecord& record, bool weighted) {
    AllocationProblem problem;
    problem.demands = record.demands;
    problem.capacity = record.capacity_start;
    if (weighted) problem.weights = record.weights;
    return problem;
}

VerifyReport verify(const SimulationResult& result) {
    const Scenario& sc = result.scenario;
    const bool weighted = sc.variant == Variant::wamf;
    VerifyReport report;

    for (const auto& record : result.epochs) {
        EpochCheck check;
        check.epoch = record.epoch;
        const AllocationProblem problem = epoch_problem(record, weighted);
        const WaterfillResult plain = waterfill(problem, WaterfillOptions{});
        check.oracle_iterations = plain.iterations;
        check.granted_total = sum(record.granted);
        check.oracle_total = sum(plain.allocation);
        check.first_difference = first_difference(record.epoch, record.granted, plain.allocation);
        check.exact = !check.first_difference.has_value();
        check.explained = check.exact;

        if (!check.exact && sc.variant != Variant::cmf) {
            WaterfillOptions adapted;
            adapted.order = ServiceOrder::arrival;
            for (const auto& [user, amount] : record.demands) adapted.arrival.push_back(user);
            std::sort(adapted.arrival.begin(), adapted.arrival.end());
            adapted.max_iterations = sc.claim_rounds();
            if (weighted) adapted.fixed_point_precision = sc.precision;
            const WaterfillResult modelled = waterfill(problem, adapted);
            if (!first_difference(record.epoch, record.granted, modelled.allocation)) {
                check.explained = true;
                // Attribute the difference to whichever adaptations were in play.
                WaterfillOptions unlimited = adapted;
                unlimited.max_iterations.reset();
                const WaterfillResult full = waterfill(problem, unlimited);
                check.exceptions.round_limit = full.iterations > sc.claim_rounds();
                check.exceptions.fcfs_depletion = modelled.depleted_mid_iteration;
                if (weighted) {
                    WaterfillOptions rounding;
                    rounding.fixed_point_precision = sc.precision;
                    check.exceptions.fixed_point =
                        first_difference(record.epoch, waterfill(problem, rounding).allocation, plain.allocation)
                            .has_value();
                }
            }
        }

        if (check.exact) {
            ++report.exact_epochs;
        } else if (check.explained) {
            report.fcfs_epochs += check.exceptions.fcfs_depletion;
            report.round_limit_epochs += check.exceptions.round_limit;
            report.fixed_point_epochs += check.exceptions.fixed_point;
        } else if (!report.first_mismatch) {
            report.first_mismatch = check.first_difference;
            report.passed = false;
        }
        report.epochs.push_back(check);
    }

    report.conservation_holds = sum(result.balances) + result.final_capacity == result.injected;
    if (!report.conservation_holds) report.passed = false;
    return report;
}

std::string VerifyReport::summary() const {
    std::ostringstream out;
    out << (passed ? "PASS" : "FAIL") << ": " << epochs.size() << " epochs, " << exact_epochs
        << " exact";
    if (fcfs_epochs) out << ", " << fcfs_epochs << " first-come-first-served depletion";
    if (round_limit_epochs) out << ", " << round_limit_epochs << " needing more rounds than available";
    if (fixed_point_epochs) out << ", " << fixed_point_epochs << " fixed-point rounding";
    if (!conservation_holds) out << ", conservation violated";
    if (first_mismatch) {
        out << "; first mismatch epoch " << first_mismatch->epoch << " user " << first_mismatch->user << " got "
            << first_mismatch->got << " want " << first_mismatch->want;
    }
    return out.str();
}

std::map<UserId, Amount> chained_waterfill(const Scenario& scenario) {
    std::map<UserId, Amount> balances;
    for (UserId u = 1; u <= scenario.users; ++u) balances[u] = 0;
    Amount capacity = 0;
    const auto schedule = scenario.demand_schedule();
    for (const auto& row : schedule) {
        capacity += scenario.epoch_capacity;
        AllocationProblem problem;
        problem.capacity = capacity;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] > 0) problem.demands.emplace_back(static_cast<UserId>(i + 1), row[i]);
        }
        const WaterfillResult out = waterfill(problem, WaterfillOptions{});
        for (const auto& [user, amount] : out.allocation) balances[user] += amount;
        capacity = out.leftover_capacity;
    }
    return balances;
}

void inject_fault(SimulationResult& result) {
    for (auto& record : result.epochs) {
        if (record.granted.empty()) continue;
        auto& [user, amount] = *record.granted.begin();
        ++amount;
        ++result.balances[user];
        if (record.capacity_end > 0) {
            --record.capacity_end;
            --result.final_capacity;
        }
        return;
    }
}

}  // namespace fairfaucet
