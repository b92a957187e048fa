#include "fairfaucet/chain_clock.hpp"

#include <string>

namespace fairfaucet {

ClockParams::ClockParams(BlockNumber offset, std::uint64_t epoch_span, std::uint64_t round_span)
    : offset_(offset), epoch_span_(epoch_span), round_span_(round_span) {
    if (round_span_ == 0) throw FaucetError("round span must be positive");
    if (epoch_span_ < round_span_) throw FaucetError("epoch span shorter than round span");
    if (epoch_span_ % round_span_ != 0) {
        throw FaucetError("epoch span " + std::to_string(epoch_span_) +
                          " is not a multiple of round span " + std::to_string(round_span_));
    }
}

ClockPosition locate(const ClockParams& params, BlockNumber block) {
    if (block < params.offset()) throw FaucetError("pre-deployment block");
    const std::uint64_t elapsed = block - params.offset();
    ClockPosition pos;
    pos.epoch = elapsed / params.epoch_span();
    pos.round = (elapsed % params.epoch_span()) / params.round_span();
    pos.parity = static_cast<unsigned>(pos.epoch % 2);
    return pos;
}

}  // namespace fairfaucet
