#pragma once

#include <cstddef>
#include <vector>

#include "fairfaucet/types.hpp"

namespace fairfaucet {

/// A pending demand: how much is still owed and to whom.
struct HeapNode {
    Amount demand = 0;
    UserId user = 0;

    friend bool operator==(const HeapNode&, const HeapNode&) = default;
};

/// Receives one callback per key comparison and per node move so that
/// callers can price heap work.
class HeapObserver {
public:
    virtual ~HeapObserver() = default;
    virtual void on_compare() = 0;
    virtual void on_move() = 0;
};

// Array-backed binary min-heap ordered by (demand, user). Equal demands pop
// the lower user id first.
class MinHeap {
public:
    MinHeap() = default;
    explicit MinHeap(HeapObserver* observer) : observer_(observer) {}

    void set_observer(HeapObserver* observer) noexcept { observer_ = observer; }

    /// Throws FaucetError("empty demand") for node.demand == 0.
    void insert(HeapNode node);

    /// Throws FaucetError("underflow") on an empty heap.
    HeapNode del_min();

    const HeapNode& min() const;

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    void clear() noexcept { nodes_.clear(); }

    /// Number of tree levels walked by the last sift (up or down).
    std::size_t last_sift_levels() const noexcept { return last_sift_levels_; }

    /// Raw array view, root first.
    const std::vector<HeapNode>& nodes() const noexcept { return nodes_; }

private:
    bool less(const HeapNode& a, const HeapNode& b) const;
    void place(std::size_t index, HeapNode node);
    void sift_up(std::size_t index);
    void sift_down(std::size_t index);

    std::vector<HeapNode> nodes_;
    HeapObserver* observer_ = nullptr;
    std::size_t last_sift_levels_ = 0;
};

}  // namespace fairfaucet
