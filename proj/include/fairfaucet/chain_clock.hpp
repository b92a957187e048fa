#pragma once

#include <compare>

#include "fairfaucet/types.hpp"

namespace fairfaucet {

/// Position of a block inside the epoch/round grid.
struct ClockPosition {
    EpochNumber epoch = 0;
    RoundNumber round = 0;
    unsigned parity = 0;  // epoch mod 2

    friend bool operator==(const ClockPosition&, const ClockPosition&) = default;
};

/// Deployment offset plus epoch and round spans, in blocks.
/// The epoch span must be a whole multiple of the round span.
class ClockParams {
public:
    ClockParams(BlockNumber offset, std::uint64_t epoch_span, std::uint64_t round_span);

    BlockNumber offset() const noexcept { return offset_; }
    std::uint64_t epoch_span() const noexcept { return epoch_span_; }
    std::uint64_t round_span() const noexcept { return round_span_; }
    std::uint64_t rounds_per_epoch() const noexcept { return epoch_span_ / round_span_; }

    /// First block of the given epoch/round.
    BlockNumber first_block(EpochNumber epoch, RoundNumber round = 0) const noexcept {
        return offset_ + epoch * epoch_span_ + round * round_span_;
    }

private:
    BlockNumber offset_;
    std::uint64_t epoch_span_;
    std::uint64_t round_span_;
};

/// Throws FaucetError("pre-deployment block") when block < offset.
ClockPosition locate(const ClockParams& params, BlockNumber block);

}  // namespace fairfaucet
