#pragma once

#include <cstdint>
#include <random>

namespace imcdse {

// All randomness in a run flows through one of these, seeded once and drawn
// from in a fixed order on the control thread, so results do not depend on
// evaluation scheduling or on the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, n) via Lemire's multiply-shift reduction
    std::size_t uniform_index(std::size_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64());
        return static_cast<std::size_t>((m * n) >> 64);
    }

    // uniform in [0, 1) with 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace imcdse
