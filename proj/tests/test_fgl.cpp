#include "mk/error.hpp"
#include "mk/fgl.hpp"
#include "mk/ring.hpp"

#include <doctest.h>

#include <gmpxx.h>

#include <vector>

using namespace mk;

namespace {

using Q = std::vector<mpq_class>;

Q mul(const Q& a, const Q& b)
{
    Q out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (std::size_t j = 0; i + j < a.size(); ++j)
                out[i + j] += a[i] * b[j];
    return out;
}

Q power(const Q& a, std::size_t e)
{
    Q r(a.size());
    r[0] = 1;
    for (std::size_t k = 0; k < e; ++k)
        r = mul(r, a);
    return r;
}

// Inverse of the logarithm from e = x - sum_{i>=1} e^{2^{si}} / 2^i, solved
// one degree at a time.
Q exp_by_recursion(int s, std::size_t degree)
{
    Q e(degree + 1);
    e[1] = 1;
    for (std::size_t d = 2; d <= degree; ++d) {
        // The coefficient of x^d on the right only involves e up to degree d-1.
        mpq_class c = 0;
        for (std::size_t i = 1;; ++i) {
            const std::size_t k = std::size_t{1} << (s * i);
            if (k > d)
                break;
            c -= power(e, k)[d] / mpq_class(mpz_class(mpz_class(1) << i));
        }
        e[d] = c;
    }
    return e;
}

// F(x, y) = exp(log x + log y) on total degree < D with dense bivariate
// rational arithmetic.
std::vector<std::vector<bool>> fgl_by_composition(int s, std::size_t D)
{
    using B = std::vector<std::vector<mpq_class>>;
    auto bmul = [&](const B& a, const B& b) {
        B o(D, std::vector<mpq_class>(D));
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; i + j < D; ++j)
                if (a[i][j] != 0)
                    for (std::size_t k = 0; i + j + k < D; ++k)
                        for (std::size_t l = 0; i + j + k + l < D; ++l)
                            o[i + k][j + l] += a[i][j] * b[k][l];
        return o;
    };
    B L(D, std::vector<mpq_class>(D));
    for (std::size_t i = 0;; ++i) {
        const std::size_t k = std::size_t{1} << (s * i);
        if (k >= D)
            break;
        const mpq_class c(mpz_class(1), mpz_class(mpz_class(1) << i));
        L[k][0] += c;
        L[0][k] += c;
    }
    const Q e = exp_by_recursion(s, D);
    B F(D, std::vector<mpq_class>(D)), P(D, std::vector<mpq_class>(D));
    P[0][0] = 1;
    for (std::size_t k = 1; k < D; ++k) {
        P = bmul(P, L);
        if (e[k] != 0)
            for (std::size_t i = 0; i < D; ++i)
                for (std::size_t j = 0; i + j < D; ++j)
                    F[i][j] += e[k] * P[i][j];
    }
    std::vector<std::vector<bool>> out(D, std::vector<bool>(D));
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; i + j < D; ++j) {
            const mpq_class& c = F[i][j];
            REQUIRE(c.get_den() % 2 == 1);
            out[i][j] = mpz_class(c.get_num() % 2) != 0;
        }
    return out;
}

} // namespace

TEST_CASE("series reversion agrees with the degree-by-degree recursion")
{
    for (int s : {1, 2, 3}) {
        const std::size_t deg = s == 3 ? 80 : 40;
        const RatSeries e = reverse_series(honda_log(s, deg));
        const Q oracle = exp_by_recursion(s, deg);
        for (std::size_t d = 0; d <= deg; ++d)
            CHECK(e[d] == oracle[d]);
    }
}

TEST_CASE("Honda FGL matches exp(log x + log y) reduced mod 2")
{
    for (int s : {2, 3}) {
        const std::size_t D = s == 2 ? 24 : 20;
        const auto oracle = fgl_by_composition(s, D);
        const BiSeries F = honda_fgl(s, D, D);
        for (std::size_t a = 0; a < D; ++a)
            for (std::size_t b = 0; a + b < D; ++b)
                CHECK_MESSAGE(F.coeff(a, b) == oracle[a][b], "s=" << s << " a=" << a << " b=" << b);
    }
}

TEST_CASE("axioms and approximations for s = 2, 3")
{
    for (int s : {2, 3}) {
        const std::size_t B = default_approx_bound(s);
        const BiSeries F = honda_fgl(s, B, B);
        const auto ax = check_fgl_axioms(F, s, B);
        CHECK(ax.unit);
        CHECK(ax.commutative);
        CHECK(ax.associative);
        CHECK(ax.two_series);
        const auto ap = check_fgl_approximations(F, s);
        CHECK(ap.eq_leading.pass);
        CHECK(ap.eq_phi.pass);
    }
}

TEST_CASE("corrupted coefficient is caught with a witness")
{
    BiSeries F = honda_fgl(2, 32, 32);
    F.flip(2, 2);
    const auto ap = check_fgl_approximations(F, 2);
    CHECK_FALSE(ap.pass());
    REQUIRE(ap.eq_leading.witness);
    CHECK(*ap.eq_leading.witness == std::pair<std::size_t, std::size_t>{2, 2});
    CHECK_FALSE(check_fgl_axioms(F, 2, 32).pass());
}

TEST_CASE("m-series")
{
    const int s = 2;
    const std::size_t bound = 64;
    const BiSeries F = honda_fgl(s, bound, bound);
    CHECK(m_series(F, 2, bound) == BitPoly::monomial(bound, 4));
    CHECK(m_series(F, 1, bound) == BitPoly::x(bound));
    CHECK(m_series(F, 0, bound).is_zero());
    CHECK(m_series(F, 4, bound) == BitPoly::monomial(bound, 16));
    for (std::int64_t m = -5; m <= 6; ++m)
        for (std::int64_t k = -4; k <= 5; ++k)
            CHECK(m_series(F, m + k, bound) == substitute(F, m_series(F, m, bound), m_series(F, k, bound)));
    const BitPoly inv = formal_inverse(F, bound);
    CHECK(inv.coeff(1));
    CHECK(inv.coeff(4));
    CHECK(inv == m_series(F, -1, bound));
    CHECK(substitute(F, BitPoly::x(bound), inv).is_zero());
    CHECK(formal_inverse(3, 64).exponents() == std::vector<std::size_t>{1, 8, 36});
}

TEST_CASE("rational helpers")
{
    const RatSeries x = RatSeries::x(6);
    const RatSeries one_minus = [] {
        RatSeries r(6);
        r[0] = 1;
        r[1] = -1;
        return r;
    }();
    const RatSeries geo = reciprocal(one_minus, 6);
    for (std::size_t d = 0; d <= 6; ++d)
        CHECK(geo[d] == 1);
    CHECK(derivative(mul_trunc(x, x, 6))[1] == 2);
    CHECK(compose(x, x, 6) == x);
    RatSeries half(2);
    half[1] = mpq_class(1, 2);
    CHECK_THROWS_AS(half.reduce_mod2(3), AlgebraError);
}
