#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mk {

/// Univariate polynomial over F2 truncated at x^bound.
class BitPoly {
public:
    BitPoly() = default;
    explicit BitPoly(std::size_t bound);

    static BitPoly x(std::size_t bound);
    static BitPoly one(std::size_t bound);
    static BitPoly monomial(std::size_t bound, std::size_t e);

    std::size_t bound() const noexcept { return bound_; }
    bool coeff(std::size_t e) const noexcept;
    void set_coeff(std::size_t e, bool on);
    void flip(std::size_t e);
    bool is_zero() const noexcept;

    // Lowest exponent with a nonzero coefficient; bound() when zero.
    std::size_t valuation() const noexcept;
    std::vector<std::size_t> exponents() const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    BitPoly& operator+=(const BitPoly& o);
    friend BitPoly operator+(BitPoly a, const BitPoly& b) { return a += b; }
    friend BitPoly operator*(const BitPoly& a, const BitPoly& b);
    friend bool operator==(const BitPoly&, const BitPoly&) = default;

private:
    std::size_t bound_ = 0;
    std::vector<std::uint64_t> words_;
};

BitPoly pow(const BitPoly& p, std::uint64_t e);

/// Bivariate power series over F2 with coefficients F[a,b], a < bound_u, b < bound_v.
/// The canonical term order is a * bound_v + b.
class BiSeries {
public:
    BiSeries() = default;
    BiSeries(std::size_t bound_u, std::size_t bound_v);

    std::size_t bound_u() const noexcept { return bound_u_; }
    std::size_t bound_v() const noexcept { return bound_v_; }

    bool coeff(std::size_t a, std::size_t b) const noexcept;
    void set_coeff(std::size_t a, std::size_t b, bool on);
    void flip(std::size_t a, std::size_t b);

    // Row a as a univariate polynomial in the second variable.
    std::span<const std::uint64_t> row(std::size_t a) const noexcept;
    bool row_is_zero(std::size_t a) const noexcept;

    std::vector<std::pair<std::size_t, std::size_t>> terms() const;
    bool is_symmetric() const noexcept;

    BiSeries& operator+=(const BiSeries& o);
    friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
    friend bool operator==(const BiSeries&, const BiSeries&) = default;

private:
    std::size_t bound_u_ = 0;
    std::size_t bound_v_ = 0;
    std::size_t row_words_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace mk
