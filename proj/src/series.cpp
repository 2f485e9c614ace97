#include "mk/series.hpp"

#include "mk/bits.hpp"
#include "mk/error.hpp"

#include <algorithm>

namespace mk {

BitPoly::BitPoly(std::size_t bound) : bound_(bound), words_(bits::words_for(bound), 0) {}

BitPoly BitPoly::x(std::size_t bound) { return monomial(bound, 1); }
BitPoly BitPoly::one(std::size_t bound) { return monomial(bound, 0); }

BitPoly BitPoly::monomial(std::size_t bound, std::size_t e)
{
    BitPoly p(bound);
    if (e < bound)
        p.set_coeff(e, true);
    return p;
}

bool BitPoly::coeff(std::size_t e) const noexcept { return e < bound_ && bits::test(words_, e); }

void BitPoly::set_coeff(std::size_t e, bool on)
{
    if (e >= bound_)
        throw ParameterError("BitPoly: exponent " + std::to_string(e) + " outside truncation");
    bits::assign(words_, e, on);
}

void BitPoly::flip(std::size_t e) { set_coeff(e, !coeff(e)); }

bool BitPoly::is_zero() const noexcept { return bits::all_zero(words_); }

std::size_t BitPoly::valuation() const noexcept
{
    const auto p = bits::find_next(words_, 0);
    return p == bits::npos ? bound_ : p;
}

std::vector<std::size_t> BitPoly::exponents() const
{
    std::vector<std::size_t> out;
    for (auto p = bits::find_next(words_, 0); p != bits::npos; p = bits::find_next(words_, p + 1))
        out.push_back(p);
    return out;
}

BitPoly& BitPoly::operator+=(const BitPoly& o)
{
    if (o.bound_ != bound_)
        throw ParamsMismatch("BitPoly: truncation mismatch");
    bits::xor_into(words_, o.words_);
    return *this;
}

BitPoly operator*(const BitPoly& a, const BitPoly& b)
{
    if (a.bound_ != b.bound_)
        throw ParamsMismatch("BitPoly: truncation mismatch");
    BitPoly r(a.bound_);
    if (a.bound_ != 0)
        bits::mul_trunc_xor(a.words_, b.words_, r.words_, a.bound_);
    return r;
}

BitPoly pow(const BitPoly& p, std::uint64_t e)
{
    BitPoly result = BitPoly::one(p.bound());
    BitPoly base = p;
    while (e != 0) {
        if (e & 1U)
            result = result * base;
        e >>= 1;
        if (e != 0)
            base = base * base;
    }
    return result;
}

BiSeries::BiSeries(std::size_t bound_u, std::size_t bound_v)
    : bound_u_(bound_u), bound_v_(bound_v), row_words_(bits::words_for(bound_v)),
      words_(bound_u * bits::words_for(bound_v), 0)
{
}

bool BiSeries::coeff(std::size_t a, std::size_t b) const noexcept
{
    return a < bound_u_ && b < bound_v_ && bits::test(row(a), b);
}

void BiSeries::set_coeff(std::size_t a, std::size_t b, bool on)
{
    if (a >= bound_u_ || b >= bound_v_)
        throw ParameterError("BiSeries: monomial outside truncation");
    bits::assign(std::span<std::uint64_t>(words_).subspan(a * row_words_, row_words_), b, on);
}

void BiSeries::flip(std::size_t a, std::size_t b) { set_coeff(a, b, !coeff(a, b)); }

std::span<const std::uint64_t> BiSeries::row(std::size_t a) const noexcept
{
    return std::span<const std::uint64_t>(words_).subspan(a * row_words_, row_words_);
}

bool BiSeries::row_is_zero(std::size_t a) const noexcept { return bits::all_zero(row(a)); }

std::vector<std::pair<std::size_t, std::size_t>> BiSeries::terms() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < bound_u_; ++a) {
        const auto r = row(a);
        for (auto b = bits::find_next(r, 0); b != bits::npos; b = bits::find_next(r, b + 1))
            out.emplace_back(a, b);
    }
    return out;
}

bool BiSeries::is_symmetric() const noexcept
{
    const std::size_t m = std::min(bound_u_, bound_v_);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (coeff(a, b) != coeff(b, a))
                return false;
    return true;
}

BiSeries& BiSeries::operator+=(const BiSeries& o)
{
    if (o.bound_u_ != bound_u_ || o.bound_v_ != bound_v_)
        throw ParamsMismatch("BiSeries: truncation mismatch");
    bits::xor_into(words_, o.words_);
    return *this;
}

} // namespace mk
