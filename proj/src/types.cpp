#include "fairfaucet/types.hpp"

namespace fairfaucet {

std::string_view describe(Status status) noexcept {
    switch (status) {
        case Status::ok: return "ok";
        case Status::empty_demand: return "empty demand";
        case Status::already_demanded: return "already demanded";
        case Status::unknown_user: return "unknown user";
        case Status::no_demand_for_epoch: return "no demand for previous epoch";
        case Status::capacity_depleted: return "capacity depleted";
        case Status::demand_satisfied: return "demand satisfied";
        case Status::already_claimed_round: return "already claimed this round";
    }
    return "unknown";
}

}  // namespace fairfaucet
