#pragma once

// Exact arithmetic in F2[u,v]/(u^M, v^M), M = 2^{(n+1)s}: the model of
// K(s)^*(BH) for H = C_{2^{n+1}} x C_{2^{n+1}} with v_s = 1.

#include "mk/series.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mk {

inline constexpr std::size_t kDefaultMaxDim = 4096;
inline constexpr std::size_t kForcedMaxDim = 16384;

struct RingParams {
    int s = 0;
    int n = 0;
    std::size_t M = 0;         // truncation exponent for u and v
    std::size_t dim = 0;       // F2-dimension, M * M
    std::size_t row_words = 0; // storage words per u-row

    friend bool operator==(const RingParams&, const RingParams&) = default;
};

/// Validated parameters for K(s)^*(BH). Throws ParameterError for s < 2 or
/// n < 1 and InfeasibleSize when M^2 exceeds max_dim.
RingParams make_ring(int s, int n, std::size_t max_dim = kDefaultMaxDim);

/// Bare truncation F2[u,v]/(u^M, v^M) for auxiliary series work (s = n = 0).
RingParams truncation_params(std::size_t M);

/// Element of the truncated ring. Storage is dense: row a holds the
/// coefficients of u^a v^b for b < M, packed into row_words words.
class RingElement {
public:
    explicit RingElement(const RingParams& p);

    static RingElement one(const RingParams& p);
    static RingElement gen_u(const RingParams& p);
    static RingElement gen_v(const RingParams& p);
    static RingElement monomial(const RingParams& p, std::size_t a, std::size_t b);
    // Lift polynomials in one variable.
    static RingElement from_u_poly(const RingParams& p, const BitPoly& f);
    static RingElement from_v_poly(const RingParams& p, const BitPoly& f);

    const RingParams& params() const noexcept { return params_; }

    bool coeff(std::size_t a, std::size_t b) const noexcept;
    void set_coeff(std::size_t a, std::size_t b, bool on);
    void flip(std::size_t a, std::size_t b);

    bool is_zero() const noexcept;
    bool constant_term() const noexcept { return coeff(0, 0); }
    std::size_t term_count() const noexcept;
    std::vector<std::pair<std::size_t, std::size_t>> terms() const;

    std::span<const std::uint64_t> row(std::size_t a) const noexcept;
    std::span<std::uint64_t> row(std::size_t a) noexcept;
    bool row_is_zero(std::size_t a) const noexcept;

    RingElement& operator+=(const RingElement& o);
    RingElement& operator*=(const RingElement& o);
    friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
    friend RingElement operator*(const RingElement& a, const RingElement& b);
    friend bool operator==(const RingElement&, const RingElement&) = default;

private:
    RingParams params_;
    std::vector<std::uint64_t> words_;
};

RingElement mul(const RingElement& a, const RingElement& b);
RingElement pow(const RingElement& g, std::uint64_t e);

/// Frobenius: g^2, computed termwise (char 2).
RingElement square(const RingElement& g);

/// F(X, Y) = sum F[a,b] X^a Y^b. X and Y must have zero constant term and
/// satisfy X^{bound_u} = Y^{bound_v} = 0 so that the truncation of F is exact.
RingElement substitute(const BiSeries& F, const RingElement& X, const RingElement& Y);

/// Canonical linear coordinates: bit a*M + b holds the coefficient of u^a v^b.
std::size_t canonical_index(const RingParams& p, std::size_t a, std::size_t b) noexcept;
std::vector<std::uint64_t> to_coordinates(const RingElement& g);
void to_coordinates(const RingElement& g, std::span<std::uint64_t> out);
RingElement from_coordinates(const RingParams& p, std::span<const std::uint64_t> coords);

/// "1 + u^1*v^0 + u^0*v^2" (terms in canonical order); "0" for zero.
std::string to_string(const RingElement& g);
RingElement parse_element(const RingParams& p, std::string_view text);

void check_same_ring(const RingParams& a, const RingParams& b, const char* what);

} // namespace mk
