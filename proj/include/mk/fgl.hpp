#pragma once

// Height-s Honda formal group law at p = 2 (v_s = 1), computed exactly over
// the rationals from its logarithm and reduced mod 2.

#include "mk/series.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mk {

/// Univariate power series with exact rational coefficients, truncated
/// after degree().
class RatSeries {
public:
    RatSeries() = default;
    explicit RatSeries(std::size_t degree) : c_(degree + 1) {}

    static RatSeries x(std::size_t degree);

    std::size_t degree() const noexcept { return c_.size() - 1; }
    const mpq_class& operator[](std::size_t i) const { return c_[i]; }
    mpq_class& operator[](std::size_t i) { return c_[i]; }
    bool is_zero_at(std::size_t i) const { return c_[i] == 0; }

    RatSeries truncated(std::size_t degree) const;

    RatSeries& operator+=(const RatSeries& o);
    RatSeries& operator-=(const RatSeries& o);
    friend RatSeries operator+(RatSeries a, const RatSeries& b) { return a += b; }
    friend RatSeries operator-(RatSeries a, const RatSeries& b) { return a -= b; }
    friend bool operator==(const RatSeries&, const RatSeries&) = default;

    /// Reduce mod 2; throws AlgebraError on a coefficient with even denominator.
    BitPoly reduce_mod2(std::size_t bound) const;

private:
    std::vector<mpq_class> c_;
};

RatSeries mul_trunc(const RatSeries& a, const RatSeries& b, std::size_t degree);
RatSeries derivative(const RatSeries& f);
/// 1/f for f[0] != 0.
RatSeries reciprocal(const RatSeries& f, std::size_t degree);
/// f(g(x)) with g(0) = 0; exploits sparsity of f.
RatSeries compose(const RatSeries& f, const RatSeries& g, std::size_t degree);
/// Compositional inverse of f = x + O(x^2) by Newton iteration.
RatSeries reverse_series(const RatSeries& f);

/// l(x) = sum_{i>=0} x^{2^{si}} / 2^i, truncated after degree D.
RatSeries honda_log(int s, std::size_t degree);

/// F(x,y) = l^{-1}(l(x) + l(y)) mod 2, with a < bound_u, b < bound_v.
/// Every rational coefficient is checked to be 2-integral before reduction.
BiSeries honda_fgl_exact(int s, std::size_t bound_u, std::size_t bound_v);

/// Memoized honda_fgl_exact (thread-safe).
BiSeries honda_fgl(int s, std::size_t bound_u, std::size_t bound_v);

/// F(A(x), B(x)) for univariate A, B with zero constant term, mod x^bound.
BitPoly substitute(const BiSeries& F, const BitPoly& A, const BitPoly& B);

/// [m]_F(x) mod x^bound; negative m goes through the formal inverse.
BitPoly m_series(const BiSeries& F, std::int64_t m, std::size_t bound);
BitPoly m_series(int s, std::int64_t m, std::size_t bound);

/// iota with F(x, iota(x)) = 0 mod x^bound.
BitPoly formal_inverse(const BiSeries& F, std::size_t bound);
BitPoly formal_inverse(int s, std::size_t bound);

struct ApproxCheck {
    bool pass = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness; // first offending monomial
    std::string detail;
};

struct FglApproxReport {
    int s = 0;
    std::size_t bound = 0;
    ApproxCheck eq_leading;   // F = x + y + (xy)^{2^{s-1}} mod y^{4^{s-1}}
    ApproxCheck eq_phi;       // F = x + y + Phi^{2^{s-1}} mod the Phi ideal
    bool pass() const noexcept { return eq_leading.pass && eq_phi.pass; }
};

/// Default truncation used when checking the approximations.
std::size_t default_approx_bound(int s);

FglApproxReport check_fgl_approximations(int s);
FglApproxReport check_fgl_approximations(const BiSeries& F, int s);

struct FglAxiomReport {
    bool unit = false;
    bool commutative = false;
    bool associative = false;
    bool two_series = false; // [2](x) = x^{2^s}
    std::optional<std::string> witness;
    bool pass() const noexcept { return unit && commutative && associative && two_series; }
};

/// Unit, commutativity, associativity (as truncated trivariate series with
/// every exponent < bound) and the height-s 2-series. Requires square F.
FglAxiomReport check_fgl_axioms(const BiSeries& F, int s, std::size_t assoc_bound);

} // namespace mk
