#include "imcdse/hamming.hpp"

#include <cstdlib>
#include <cstring>

#include "imcdse/errors.hpp"

namespace imcdse {

PackedPool pack_pool(const std::vector<DesignPoint>& points) {
    PackedPool pool;
    pool.count = points.size();
    pool.gene_len = points.empty() ? 0 : points.front().gene.size();
    pool.stride = ((pool.gene_len + 15) / 16) * 16;
    if (pool.stride == 0)
        pool.stride = 16;
    pool.bytes.assign(pool.count * pool.stride, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].gene.size() != pool.gene_len)
            throw LengthMismatch("pool points have mixed gene lengths");
        std::memcpy(pool.bytes.data() + i * pool.stride, points[i].gene.data(),
                    pool.gene_len);
    }
    return pool;
}

namespace kern {

void hamming_batch_scalar(const std::uint8_t* query, const std::uint8_t* pool,
                          std::size_t count, std::size_t gene_len,
                          std::size_t stride, std::uint16_t* out) {
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* row = pool + i * stride;
        std::uint16_t d = 0;
        for (std::size_t g = 0; g < gene_len; ++g)
            d += static_cast<std::uint16_t>(row[g] != query[g]);
        out[i] = d;
    }
}

namespace {

bool force_scalar() {
    static const bool forced = [] {
        const char* env = std::getenv("IMCDSE_FORCE_SCALAR");
        return env != nullptr && env[0] == '1';
    }();
    return forced;
}

#if defined(IMCDSE_HAVE_AVX2)
bool cpu_has_avx2() {
    static const bool has = __builtin_cpu_supports("avx2");
    return has;
}
#endif

} // namespace

HammingBatchFn select_hamming_batch(std::size_t stride) {
    if (!force_scalar() && stride % 16 == 0) {
#if defined(IMCDSE_HAVE_AVX2)
        if (cpu_has_avx2())
            return &hamming_batch_avx2;
#endif
#if defined(__aarch64__)
        return &hamming_batch_neon;
#endif
    }
    return &hamming_batch_scalar;
}

std::string active_kernel_name(std::size_t stride) {
    HammingBatchFn fn = select_hamming_batch(stride);
#if defined(IMCDSE_HAVE_AVX2)
    if (fn == &hamming_batch_avx2)
        return "avx2";
#endif
#if defined(__aarch64__)
    if (fn == &hamming_batch_neon)
        return "neon";
#endif
    (void)fn;
    return "scalar";
}

} // namespace kern

void hamming_to_all(const DesignPoint& query, const PackedPool& pool,
                    std::vector<std::uint16_t>& out) {
    if (query.gene.size() != pool.gene_len)
        throw LengthMismatch("query gene length does not match pool");
    out.resize(pool.count);
    if (pool.count == 0)
        return;
    std::uint8_t padded[256];
    if (pool.stride > sizeof(padded))
        throw LengthMismatch("gene length exceeds kernel limit");
    std::memset(padded, 0, pool.stride);
    std::memcpy(padded, query.gene.data(), pool.gene_len);
    kern::HammingBatchFn fn = kern::select_hamming_batch(pool.stride);
    fn(padded, pool.bytes.data(), pool.count, pool.gene_len, pool.stride,
       out.data());
}

} // namespace imcdse
