// NEON variant of the Hamming batch kernel (aarch64 only).

#include "imcdse/hamming.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace imcdse::kern {

void hamming_batch_neon(const std::uint8_t* query, const std::uint8_t* pool,
                        std::size_t count, std::size_t gene_len,
                        std::size_t stride, std::uint16_t* out) {
    (void)gene_len;
    const uint8x16_t one = vdupq_n_u8(1);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* row = pool + i * stride;
        std::size_t eq = 0;
        for (std::size_t off = 0; off + 16 <= stride; off += 16) {
            const uint8x16_t r = vld1q_u8(row + off);
            const uint8x16_t q = vld1q_u8(query + off);
            eq += vaddvq_u8(vandq_u8(vceqq_u8(r, q), one));
        }
        out[i] = static_cast<std::uint16_t>(stride - eq);
    }
}

} // namespace imcdse::kern

#endif // __aarch64__
