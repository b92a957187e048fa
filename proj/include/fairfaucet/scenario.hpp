#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairfaucet/cost_meter.hpp"
#include "fairfaucet/types.hpp"

namespace fairfaucet {

enum class Variant { cmf, amf, wamf };

std::string_view to_string(Variant variant) noexcept;
Variant parse_variant(std::string_view text);

/// splitmix64 demand stream. The state is a plain counter; each draw adds the
/// golden-ratio increment and returns a mixed copy of the new state.
struct DemandStream {
    std::uint64_t state = 0;

    static std::uint64_t mix(std::uint64_t z) noexcept;

    /// Next raw 64-bit output.
    std::uint64_t next_u64() noexcept;
};

/// Amount in [lo, hi). Throws FaucetError when hi <= lo.
std::pair<DemandStream, Amount> next_demand(DemandStream stream, Amount lo, Amount hi);

/// Declarative experiment. Epoch 0 registers users and collects the first
/// demands; every later epoch runs its claim rounds (or a distribution for
/// CMF) and then collects demands for the next epoch, except the final epoch,
/// whose demand slots are idle so that every demand made is also served.
struct Scenario {
    Variant variant = Variant::amf;
    std::uint32_t users = 10;
    Amount epoch_capacity = 200;
    std::uint64_t epoch_span = 40;
    std::uint64_t round_span = 10;
    Amount demand_lo = 10;
    Amount demand_hi = 30;
    std::uint64_t epochs = 4;
    std::uint64_t seed = 0;
    Amount precision = 1'000'000'000;
    CostModel cost_model{};
    /// scripted_demands[e][u-1] is the amount user u demands in epoch e
    /// (0 = no demand). Overrides the generator when present.
    std::optional<std::vector<std::vector<Amount>>> scripted_demands;

    /// Table defaults: C = 20n, epoch span 4n, round span n, demands in [10, 30).
    static Scenario defaults(Variant variant, std::uint32_t users, std::uint64_t seed = 0);

    std::uint64_t rounds_per_epoch() const noexcept { return round_span ? epoch_span / round_span : 0; }
    std::uint64_t claim_rounds() const noexcept { return rounds_per_epoch() - 1; }

    /// Epochs whose demand window is actually used (all but the last).
    std::uint64_t demand_epochs() const noexcept { return epochs > 0 ? epochs - 1 : 0; }

    /// Largest lifetime demand any single user can accumulate.
    Amount worst_case_cumulative_demand() const;

    /// Throws ScenarioError describing the first inconsistency.
    void validate() const;

    /// demands[e][u-1] for every demand epoch, from the script or the generator.
    std::vector<std::vector<Amount>> demand_schedule() const;

    /// Same scenario with n replaced, scaling capacity and spans by their
    /// per-user multipliers.
    Scenario rescaled(std::uint32_t users) const;
};

class ScenarioError : public FaucetError {
public:
    using FaucetError::FaucetError;
};

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

}  // namespace fairfaucet
