// AVX2 variant of the Hamming batch kernel. Compiled with -mavx2 in its own
// translation unit; only ever called after a runtime cpuid check.
//
// Rows are zero-padded to the stride and queries are padded the same way, so
// padding bytes always compare equal and the distance over the full stride
// equals the distance over the gene.

#include "imcdse/hamming.hpp"

#if defined(IMCDSE_HAVE_AVX2)

#include <immintrin.h>

namespace imcdse::kern {

namespace {

// two 16-byte rows per 32-byte load
void batch_stride16(const std::uint8_t* query, const std::uint8_t* pool,
                    std::size_t count, std::uint16_t* out) {
    const __m256i q2 = _mm256_broadcastsi128_si256(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(query)));
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        const __m256i rows = _mm256_loadu_si256(
            reinterpret_cast<const __m256i*>(pool + i * 16));
        const unsigned mask =
            static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(rows, q2)));
        out[i] = static_cast<std::uint16_t>(
            16 - __builtin_popcount(mask & 0xFFFFu));
        out[i + 1] = static_cast<std::uint16_t>(
            16 - __builtin_popcount(mask >> 16));
    }
    if (i < count) {
        const __m128i row = _mm_loadu_si128(
            reinterpret_cast<const __m128i*>(pool + i * 16));
        const __m128i q = _mm256_castsi256_si128(q2);
        const unsigned mask = static_cast<unsigned>(
            _mm_movemask_epi8(_mm_cmpeq_epi8(row, q)));
        out[i] = static_cast<std::uint16_t>(16 - __builtin_popcount(mask));
    }
}

} // namespace

void hamming_batch_avx2(const std::uint8_t* query, const std::uint8_t* pool,
                        std::size_t count, std::size_t gene_len,
                        std::size_t stride, std::uint16_t* out) {
    (void)gene_len;
    if (stride == 16) {
        batch_stride16(query, pool, count, out);
        return;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* row = pool + i * stride;
        std::size_t eq = 0;
        std::size_t off = 0;
        for (; off + 32 <= stride; off += 32) {
            const __m256i r = _mm256_loadu_si256(
                reinterpret_cast<const __m256i*>(row + off));
            const __m256i q = _mm256_loadu_si256(
                reinterpret_cast<const __m256i*>(query + off));
            eq += __builtin_popcount(static_cast<unsigned>(
                _mm256_movemask_epi8(_mm256_cmpeq_epi8(r, q))));
        }
        for (; off + 16 <= stride; off += 16) {
            const __m128i r = _mm_loadu_si128(
                reinterpret_cast<const __m128i*>(row + off));
            const __m128i q = _mm_loadu_si128(
                reinterpret_cast<const __m128i*>(query + off));
            eq += __builtin_popcount(static_cast<unsigned>(
                _mm_movemask_epi8(_mm_cmpeq_epi8(r, q))));
        }
        out[i] = static_cast<std::uint16_t>(stride - eq);
    }
}

} // namespace imcdse::kern

#endif // IMCDSE_HAVE_AVX2
