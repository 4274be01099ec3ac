#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "imcdse/search_space.hpp"

namespace imcdse {

// Gene pool packed into a flat byte matrix, one padded row per point, so the
// distance kernels can stream it. Padding bytes are zero in every row and
// therefore never contribute to a distance.
struct PackedPool {
    std::size_t count = 0;
    std::size_t gene_len = 0;
    std::size_t stride = 0; // multiple of 16
    std::vector<std::uint8_t> bytes;

    const std::uint8_t* row(std::size_t i) const {
        return bytes.data() + i * stride;
    }
};

PackedPool pack_pool(const std::vector<DesignPoint>& points);

namespace kern {

// out[i] = number of byte positions where query differs from pool row i.
// query must be padded to `stride` bytes with zeros, like the pool rows.
using HammingBatchFn = void (*)(const std::uint8_t* query,
                                const std::uint8_t* pool, std::size_t count,
                                std::size_t gene_len, std::size_t stride,
                                std::uint16_t* out);

void hamming_batch_scalar(const std::uint8_t* query, const std::uint8_t* pool,
                          std::size_t count, std::size_t gene_len,
                          std::size_t stride, std::uint16_t* out);

#if defined(IMCDSE_HAVE_AVX2)
void hamming_batch_avx2(const std::uint8_t* query, const std::uint8_t* pool,
                        std::size_t count, std::size_t gene_len,
                        std::size_t stride, std::uint16_t* out);
#endif
#if defined(__aarch64__)
void hamming_batch_neon(const std::uint8_t* query, const std::uint8_t* pool,
                        std::size_t count, std::size_t gene_len,
                        std::size_t stride, std::uint16_t* out);
#endif

// Picks the widest variant the running CPU supports for this stride.
// IMCDSE_FORCE_SCALAR=1 in the environment pins the scalar path.
HammingBatchFn select_hamming_batch(std::size_t stride);
std::string active_kernel_name(std::size_t stride);

} // namespace kern

// Distances from one point to every pool row, through the selected kernel.
void hamming_to_all(const DesignPoint& query, const PackedPool& pool,
                    std::vector<std::uint16_t>& out);

} // namespace imcdse
