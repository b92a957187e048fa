#include "fairfaucet/min_heap.hpp"

#include <utility>

namespace fairfaucet {

bool MinHeap::less(const HeapNode& a, const HeapNode& b) const {
    if (observer_) observer_->on_compare();
    if (a.demand != b.demand) return a.demand < b.demand;
    return a.user < b.user;
}

void MinHeap::place(std::size_t index, HeapNode node) {
    if (observer_) observer_->on_move();
    nodes_[index] = node;
}

void MinHeap::insert(HeapNode node) {
    if (node.demand == 0) throw FaucetError("empty demand");
    nodes_.push_back(node);
    if (observer_) observer_->on_move();
    sift_up(nodes_.size() - 1);
}

HeapNode MinHeap::del_min() {
    if (nodes_.empty()) throw FaucetError("underflow");
    const HeapNode top = nodes_.front();
    const HeapNode last = nodes_.back();
    nodes_.pop_back();
    last_sift_levels_ = 0;
    if (!nodes_.empty()) {
        place(0, last);
        sift_down(0);
    }
    return top;
}

const HeapNode& MinHeap::min() const {
    if (nodes_.empty()) throw FaucetError("underflow");
    return nodes_.front();
}

// Hole-based sifts: the moving node is held aside and written once at the end.
void MinHeap::sift_up(std::size_t index) {
    last_sift_levels_ = 0;
    const HeapNode node = nodes_[index];
    while (index > 0) {
        const std::size_t parent = (index - 1) / 2;
        if (!less(node, nodes_[parent])) break;
        place(index, nodes_[parent]);
        index = parent;
        ++last_sift_levels_;
    }
    place(index, node);
}

void MinHeap::sift_down(std::size_t index) {
    const std::size_t count = nodes_.size();
    const HeapNode node = nodes_[index];
    for (;;) {
        std::size_t child = 2 * index + 1;
        if (child >= count) break;
        if (child + 1 < count && less(nodes_[child + 1], nodes_[child])) ++child;
        if (!less(nodes_[child], node)) break;
        place(index, nodes_[child]);
        index = child;
        ++last_sift_levels_;
    }
    place(index, node);
}

}  // namespace fairfaucet
