#include "gpm/parallel.hpp"

#include <atomic>

namespace gpm {

namespace {
std::atomic<bool> g_deterministic{true};
}

void set_deterministic(bool on) noexcept { g_deterministic.store(on, std::memory_order_relaxed); }
bool deterministic() noexcept { return g_deterministic.load(std::memory_order_relaxed); }

}  // namespace gpm
