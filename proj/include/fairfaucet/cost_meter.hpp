#pragma once

#include <cstdint>

#include "fairfaucet/min_heap.hpp"

namespace fairfaucet {

/// Abstract per-primitive prices. Relative magnitudes follow EVM storage
/// pricing (writes dominate, reads and heap node moves are comparable,
/// arithmetic is nearly free); absolute values carry no meaning.
struct CostModel {
    std::uint64_t storage_read = 2100;
    std::uint64_t storage_write = 5000;
    std::uint64_t heap_move = 2100;
    std::uint64_t arithmetic_op = 3;
    std::uint64_t tx_base = 21000;
    std::uint64_t block_budget = 8'000'000;

    /// Throws FaucetError unless block_budget > tx_base.
    void validate() const;

    friend bool operator==(const CostModel&, const CostModel&) = default;
};

/// Primitive operation counts for one transaction.
struct OpCounts {
    std::uint64_t storage_reads = 0;
    std::uint64_t storage_writes = 0;
    std::uint64_t heap_moves = 0;
    std::uint64_t arithmetic_ops = 0;

    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// Counts primitives while a transaction executes. Also serves as the heap's
/// observer: a node move is a heap_move, a key comparison an arithmetic op.
class CostMeter final : public HeapObserver {
public:
    void read(std::uint64_t n = 1) noexcept { ops_.storage_reads += n; }
    void write(std::uint64_t n = 1) noexcept { ops_.storage_writes += n; }
    void arith(std::uint64_t n = 1) noexcept { ops_.arithmetic_ops += n; }

    void on_compare() override { ++ops_.arithmetic_ops; }
    void on_move() override { ++ops_.heap_moves; }

    const OpCounts& ops() const noexcept { return ops_; }
    void reset() noexcept { ops_ = {}; }

    /// tx_base plus the priced primitives.
    std::uint64_t total(const CostModel& model) const noexcept;

private:
    OpCounts ops_;
};

}  // namespace fairfaucet
