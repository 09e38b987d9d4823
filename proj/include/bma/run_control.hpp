#pragma once

#include <chrono>
#include <cstdint>
#include <limits>

#include "bma/errors.hpp"

namespace bma {

// Node/time budget threaded through the search algorithms. A null pointer
// means "unlimited". Exceeding a budget raises ResourceLimitError so that
// a guard trip is always distinguishable from a NO answer.
class RunControl {
public:
    RunControl() = default;

    void set_node_limit(std::uint64_t limit) { node_limit_ = limit; }

    void set_timeout(std::chrono::milliseconds budget) {
        deadline_ = std::chrono::steady_clock::now() + budget;
        has_deadline_ = true;
    }

    std::uint64_t nodes() const { return nodes_; }

    // Called once per search node.
    void tick() {
        if (++nodes_ > node_limit_)
            throw ResourceLimitError("node budget exceeded");
        if (has_deadline_ && (nodes_ & 0x3ff) == 0 &&
            std::chrono::steady_clock::now() > deadline_)
            throw ResourceLimitError("time budget exceeded");
    }

private:
    std::uint64_t nodes_ = 0;
    std::uint64_t node_limit_ = std::numeric_limits<std::uint64_t>::max();
    std::chrono::steady_clock::time_point deadline_{};
    bool has_deadline_ = false;
};

inline void tick(RunControl* rc) {
    if (rc) rc->tick();
}

} // namespace bma
