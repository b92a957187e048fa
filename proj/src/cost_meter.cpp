#include "fairfaucet/cost_meter.hpp"

namespace fairfaucet {

void CostModel::validate() const {
    if (block_budget <= tx_base) throw FaucetError("block budget must exceed the base transaction cost");
}

std::uint64_t CostMeter::total(const CostModel& model) const noexcept {
    return model.tx_base + ops_.storage_reads * model.storage_read +
           ops_.storage_writes * model.storage_write + ops_.heap_moves * model.heap_move +
           ops_.arithmetic_ops * model.arithmetic_op;
}

}  // namespace fairfaucet
