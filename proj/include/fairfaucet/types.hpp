#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairfaucet {

/// Resource units. All allocation arithmetic is integral.
using Amount = std::uint64_t;
using BlockNumber = std::uint64_t;
using EpochNumber = std::uint64_t;
using RoundNumber = std::uint64_t;

/// User ids start at 1; 0 is reserved for the authority / system actor.
using UserId = std::uint32_t;
inline constexpr UserId kAuthority = 0;

class FaucetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Outcome of a state-changing call. Mirrors a contract's early return:
/// anything other than `ok` leaves the state untouched.
enum class Status {
    ok,
    empty_demand,
    already_demanded,
    unknown_user,
    no_demand_for_epoch,
    capacity_depleted,
    demand_satisfied,
    already_claimed_round,
};

std::string_view describe(Status status) noexcept;

/// Double-width intermediate for products of two amounts.
__extension__ using WideAmount = unsigned __int128;

/// floor(a * b / d) without intermediate overflow.
inline Amount mul_div(Amount a, Amount b, Amount d) {
    if (d == 0) throw FaucetError("division by zero");
    const WideAmount q = static_cast<WideAmount>(a) * b / d;
    if (q > std::numeric_limits<Amount>::max()) throw FaucetError("amount overflow");
    return static_cast<Amount>(q);
}

}  // namespace fairfaucet
