#include "fairfaucet/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fairfaucet {

using nlohmann::json;

std::string_view to_string(Variant variant) noexcept {
    switch (variant) {
        case Variant::cmf: return "CMF";
        case Variant::amf: return "AMF";
        case Variant::wamf: return "WAMF";
    }
    return "?";
}

Variant parse_variant(std::string_view text) {
    std::string upper(text);
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (upper == "CMF") return Variant::cmf;
    if (upper == "AMF") return Variant::amf;
    if (upper == "WAMF") return Variant::wamf;
    throw ScenarioError("unknown variant '" + std::string(text) + "'");
}

std::uint64_t DemandStream::mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

std::uint64_t DemandStream::next_u64() noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    return mix(state);
}

std::pair<DemandStream, Amount> next_demand(DemandStream stream, Amount lo, Amount hi) {
    if (hi <= lo) throw FaucetError("empty demand range");
    const std::uint64_t z = stream.next_u64();
    return {stream, lo + z % (hi - lo)};
}

Scenario Scenario::defaults(Variant variant, std::uint32_t users, std::uint64_t seed) {
    Scenario sc;
    sc.variant = variant;
    sc.users = users;
    sc.epoch_capacity = Amount{20} * users;
    sc.epoch_span = std::uint64_t{4} * users;
    sc.round_span = users;
    sc.seed = seed;
    return sc;
}

Amount Scenario::worst_case_cumulative_demand() const {
    Amount worst = 0;
    if (scripted_demands) {
        for (std::size_t u = 0; u < users; ++u) {
            Amount sum = 0;
            for (std::uint64_t e = 0; e < demand_epochs() && e < scripted_demands->size(); ++e) {
                const auto& row = (*scripted_demands)[e];
                if (u < row.size()) sum += row[u];
            }
            worst = std::max(worst, sum);
        }
        return worst;
    }
    return demand_hi > 0 ? (demand_hi - 1) * demand_epochs() : 0;
}

void Scenario::validate() const {
    if (users == 0) throw ScenarioError("n must be at least 1");
    if (epoch_capacity == 0) throw ScenarioError("epoch_capacity must be positive");
    if (round_span == 0) throw ScenarioError("round_span must be positive");
    if (epoch_span % round_span != 0) throw ScenarioError("epoch_span must be a multiple of round_span");
    if (rounds_per_epoch() < 2) throw ScenarioError("an epoch needs at least one claim round and a demand round");
    if (round_span < users) throw ScenarioError("round_span must leave one block per user");
    if (!scripted_demands) {
        if (demand_lo == 0) throw ScenarioError("demand_lo must be at least 1");
        if (demand_hi <= demand_lo) throw ScenarioError("demand_hi must exceed demand_lo");
    } else {
        if (scripted_demands->size() < demand_epochs()) {
            throw ScenarioError("scripted_demands covers " + std::to_string(scripted_demands->size()) +
                                " epochs, need " + std::to_string(demand_epochs()));
        }
        for (const auto& row : *scripted_demands) {
            if (row.size() != users) throw ScenarioError("scripted_demands rows must have n entries");
        }
    }
    if (variant == Variant::wamf) {
        if (precision == 0) throw ScenarioError("precision must be positive");
        if (precision <= worst_case_cumulative_demand()) {
            throw ScenarioError("precision " + std::to_string(precision) +
                                " does not exceed the worst-case cumulative demand " +
                                std::to_string(worst_case_cumulative_demand()));
        }
    }
    try {
        cost_model.validate();
    } catch (const FaucetError& e) {
        throw ScenarioError(e.what());
    }
}

std::vector<std::vector<Amount>> Scenario::demand_schedule() const {
    std::vector<std::vector<Amount>> out;
    out.reserve(demand_epochs());
    if (scripted_demands) {
        for (std::uint64_t e = 0; e < demand_epochs(); ++e) out.push_back((*scripted_demands)[e]);
        return out;
    }
    DemandStream stream{seed};
    for (std::uint64_t e = 0; e < demand_epochs(); ++e) {
        std::vector<Amount> row(users);
        for (auto& amount : row) std::tie(stream, amount) = next_demand(stream, demand_lo, demand_hi);
        out.push_back(std::move(row));
    }
    return out;
}

Scenario Scenario::rescaled(std::uint32_t new_users) const {
    if (scripted_demands) throw ScenarioError("cannot rescale a scripted scenario");
    auto per_user = [this](std::uint64_t value, const char* name) {
        if (value % users != 0) {
            throw ScenarioError(std::string(name) + " is not a whole multiple of n; cannot rescale");
        }
        return value / users;
    };
    Scenario sc = *this;
    sc.users = new_users;
    sc.epoch_capacity = per_user(epoch_capacity, "epoch_capacity") * new_users;
    sc.epoch_span = per_user(epoch_span, "epoch_span") * new_users;
    sc.round_span = per_user(round_span, "round_span") * new_users;
    return sc;
}

namespace {

const std::set<std::string> kScenarioKeys = {
    "variant", "n", "epoch_capacity", "epoch_span", "round_span", "demand_lo", "demand_hi",
    "epochs", "seed", "precision", "cost_model", "scripted_demands"};

const std::set<std::string> kCostKeys = {"storage_read", "storage_write", "heap_move",
                                         "arithmetic_op", "tx_base", "block_budget"};

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_unsigned()) throw ScenarioError(std::string("'") + key + "' must be a non-negative integer");
    out = it->get<T>();
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("malformed scenario JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!kScenarioKeys.count(key)) throw ScenarioError("unknown scenario key '" + key + "'");
    }
    if (!doc.contains("variant") || !doc["variant"].is_string()) throw ScenarioError("'variant' is required");
    if (!doc.contains("n")) throw ScenarioError("'n' is required");

    std::uint32_t users = 0;
    read_field(doc, "n", users);
    Scenario sc = Scenario::defaults(parse_variant(doc["variant"].get<std::string>()), users);
    read_field(doc, "epoch_capacity", sc.epoch_capacity);
    read_field(doc, "epoch_span", sc.epoch_span);
    read_field(doc, "round_span", sc.round_span);
    read_field(doc, "demand_lo", sc.demand_lo);
    read_field(doc, "demand_hi", sc.demand_hi);
    read_field(doc, "epochs", sc.epochs);
    read_field(doc, "seed", sc.seed);
    read_field(doc, "precision", sc.precision);

    if (auto it = doc.find("cost_model"); it != doc.end()) {
        if (!it->is_object()) throw ScenarioError("'cost_model' must be an object");
        for (const auto& [key, value] : it->items()) {
            if (!kCostKeys.count(key)) throw ScenarioError("unknown cost_model key '" + key + "'");
        }
        read_field(*it, "storage_read", sc.cost_model.storage_read);
        read_field(*it, "storage_write", sc.cost_model.storage_write);
        read_field(*it, "heap_move", sc.cost_model.heap_move);
        read_field(*it, "arithmetic_op", sc.cost_model.arithmetic_op);
        read_field(*it, "tx_base", sc.cost_model.tx_base);
        read_field(*it, "block_budget", sc.cost_model.block_budget);
    }

    if (auto it = doc.find("scripted_demands"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw ScenarioError("'scripted_demands' must be an array of arrays");
        std::vector<std::vector<Amount>> rows;
        for (const auto& row : *it) {
            if (!row.is_array()) throw ScenarioError("'scripted_demands' must be an array of arrays");
            std::vector<Amount> amounts;
            for (const auto& v : row) {
                if (!v.is_number_unsigned()) throw ScenarioError("scripted demands must be non-negative integers");
                amounts.push_back(v.get<Amount>());
            }
            rows.push_back(std::move(amounts));
        }
        sc.scripted_demands = std::move(rows);
    }

    sc.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_to_json(const Scenario& sc) {
    json doc = {
        {"variant", std::string(to_string(sc.variant))},
        {"n", sc.users},
        {"epoch_capacity", sc.epoch_capacity},
        {"epoch_span", sc.epoch_span},
        {"round_span", sc.round_span},
        {"demand_lo", sc.demand_lo},
        {"demand_hi", sc.demand_hi},
        {"epochs", sc.epochs},
        {"seed", sc.seed},
        {"precision", sc.precision},
        {"cost_model",
         {{"storage_read", sc.cost_model.storage_read},
          {"storage_write", sc.cost_model.storage_write},
          {"heap_move", sc.cost_model.heap_move},
          {"arithmetic_op", sc.cost_model.arithmetic_op},
          {"tx_base", sc.cost_model.tx_base},
          {"block_budget", sc.cost_model.block_budget}}},
    };
    if (sc.scripted_demands) doc["scripted_demands"] = *sc.scripted_demands;
    return doc.dump(2) + "\n";
}

}  // namespace fairfaucet
