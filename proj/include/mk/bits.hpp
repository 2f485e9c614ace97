#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>

#if defined(__PCLMUL__)
#include <immintrin.h>
#endif

namespace mk::bits {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t nbits) noexcept { return (nbits + kWordBits - 1) / kWordBits; }

// Mask of the valid bits in the last word of an nbits-long vector.
constexpr std::uint64_t tail_mask(std::size_t nbits) noexcept
{
    const std::size_t r = nbits % kWordBits;
    return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

// Carry-less 64x64 -> 128 product.
inline void clmul(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) noexcept
{
#if defined(__PCLMUL__)
    const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                           _mm_cvtsi64_si128(static_cast<long long>(b)), 0x00);
    lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
    hi = static_cast<std::uint64_t>(_mm_extract_epi64(r, 1));
#else
    lo = 0;
    hi = 0;
    while (b != 0) {
        const int k = std::countr_zero(b);
        lo ^= a << k;
        if (k != 0)
            hi ^= a >> (kWordBits - k);
        b &= b - 1;
    }
#endif
}

inline std::uint64_t clmul_lo(std::uint64_t a, std::uint64_t b) noexcept
{
    std::uint64_t lo, hi;
    clmul(a, b, lo, hi);
    return lo;
}

// out ^= (x * y) mod z^nbits, all three spans holding words_for(nbits) words.
inline void mul_trunc_xor(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                          std::span<std::uint64_t> out, std::size_t nbits) noexcept
{
    const std::size_t w = words_for(nbits);
    if (w == 1) {
        out[0] ^= clmul_lo(x[0], y[0]) & tail_mask(nbits);
        return;
    }
    for (std::size_t i = 0; i < w; ++i) {
        if (x[i] == 0)
            continue;
        for (std::size_t j = 0; i + j < w; ++j) {
            if (y[j] == 0)
                continue;
            std::uint64_t lo, hi;
            clmul(x[i], y[j], lo, hi);
            out[i + j] ^= lo;
            if (i + j + 1 < w)
                out[i + j + 1] ^= hi;
        }
    }
    out[w - 1] &= tail_mask(nbits);
}

inline void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) noexcept
{
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] ^= src[i];
}

inline bool all_zero(std::span<const std::uint64_t> v) noexcept
{
    for (auto w : v)
        if (w != 0)
            return false;
    return true;
}

inline bool test(std::span<const std::uint64_t> v, std::size_t i) noexcept
{
    return (v[i / kWordBits] >> (i % kWordBits)) & 1U;
}

inline void flip(std::span<std::uint64_t> v, std::size_t i) noexcept
{
    v[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
}

inline void assign(std::span<std::uint64_t> v, std::size_t i, bool on) noexcept
{
    const std::uint64_t m = std::uint64_t{1} << (i % kWordBits);
    if (on)
        v[i / kWordBits] |= m;
    else
        v[i / kWordBits] &= ~m;
}

// Index of the first set bit at position >= from, or npos.
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline std::size_t find_next(std::span<const std::uint64_t> v, std::size_t from) noexcept
{
    std::size_t wi = from / kWordBits;
    if (wi >= v.size())
        return npos;
    std::uint64_t w = v[wi] & (~std::uint64_t{0} << (from % kWordBits));
    while (true) {
        if (w != 0)
            return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
        if (++wi == v.size())
            return npos;
        w = v[wi];
    }
}

inline std::size_t popcount(std::span<const std::uint64_t> v) noexcept
{
    std::size_t c = 0;
    for (auto w : v)
        c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

} // namespace mk::bits
