#include "mk/fgl.hpp"

#include "mk/error.hpp"
#include "mk/ring.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace mk {

RatSeries RatSeries::x(std::size_t degree)
{
    RatSeries r(degree);
    if (degree >= 1)
        r[1] = 1;
    return r;
}

RatSeries RatSeries::truncated(std::size_t degree) const
{
    RatSeries r(degree);
    for (std::size_t i = 0; i <= degree && i < c_.size(); ++i)
        r[i] = c_[i];
    return r;
}

RatSeries& RatSeries::operator+=(const RatSeries& o)
{
    for (std::size_t i = 0; i < c_.size() && i < o.c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

RatSeries& RatSeries::operator-=(const RatSeries& o)
{
    for (std::size_t i = 0; i < c_.size() && i < o.c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

BitPoly RatSeries::reduce_mod2(std::size_t bound) const
{
    BitPoly out(bound);
    for (std::size_t i = 0; i < bound && i < c_.size(); ++i) {
        if (mpz_even_p(c_[i].get_den_mpz_t()))
            throw AlgebraError("coefficient of x^" + std::to_string(i) + " is not 2-integral: " + c_[i].get_str());
        if (mpz_odd_p(c_[i].get_num_mpz_t()))
            out.set_coeff(i, true);
    }
    return out;
}

RatSeries mul_trunc(const RatSeries& a, const RatSeries& b, std::size_t degree)
{
    RatSeries r(degree);
    mpq_class t;
    for (std::size_t i = 0; i <= degree && i <= a.degree(); ++i) {
        if (a.is_zero_at(i))
            continue;
        for (std::size_t j = 0; i + j <= degree && j <= b.degree(); ++j) {
            if (b.is_zero_at(j))
                continue;
            t = a[i] * b[j];
            r[i + j] += t;
        }
    }
    return r;
}

RatSeries derivative(const RatSeries& f)
{
    const std::size_t d = f.degree() == 0 ? 0 : f.degree() - 1;
    RatSeries r(d);
    for (std::size_t i = 1; i <= f.degree(); ++i)
        r[i - 1] = f[i] * static_cast<unsigned long>(i);
    return r;
}

RatSeries reciprocal(const RatSeries& f, std::size_t degree)
{
    if (f.is_zero_at(0))
        throw AlgebraError("reciprocal of a series with zero constant term");
    RatSeries r(degree);
    const mpq_class inv0 = 1 / f[0];
    r[0] = inv0;
    mpq_class acc;
    for (std::size_t k = 1; k <= degree; ++k) {
        acc = 0;
        for (std::size_t i = 1; i <= k && i <= f.degree(); ++i)
            if (!f.is_zero_at(i))
                acc += f[i] * r[k - i];
        r[k] = -acc * inv0;
    }
    return r;
}

namespace {

RatSeries pow_trunc(const RatSeries& g, std::size_t e, std::size_t degree)
{
    RatSeries result(degree);
    result[0] = 1;
    RatSeries base = g.truncated(degree);
    while (e != 0) {
        if (e & 1U)
            result = mul_trunc(result, base, degree);
        e >>= 1;
        if (e != 0)
            base = mul_trunc(base, base, degree);
    }
    return result;
}

} // namespace

RatSeries compose(const RatSeries& f, const RatSeries& g, std::size_t degree)
{
    if (!g.is_zero_at(0))
        throw AlgebraError("compose: inner series must have zero constant term");
    RatSeries result(degree);
    RatSeries power(degree);
    power[0] = 1;
    std::size_t have = 0;
    for (std::size_t k = 0; k <= degree && k <= f.degree(); ++k) {
        if (f.is_zero_at(k))
            continue;
        if (k != have) {
            power = mul_trunc(power, pow_trunc(g, k - have, degree), degree);
            have = k;
        }
        for (std::size_t i = k; i <= degree; ++i)
            if (!power.is_zero_at(i))
                result[i] += f[k] * power[i];
    }
    return result;
}

RatSeries reverse_series(const RatSeries& f)
{
    const std::size_t D = f.degree();
    if (D < 1 || !f.is_zero_at(0) || f[1] != 1)
        throw AlgebraError("reverse_series: series must be x + O(x^2)");
    const RatSeries df = derivative(f);
    RatSeries g = RatSeries::x(D);
    std::size_t prec = 2; // g is correct mod x^prec
    while (prec <= D) {
        const std::size_t next = std::min(2 * prec, D + 1);
        const std::size_t d = next - 1;
        const RatSeries gt = g.truncated(d);
        const RatSeries residual = compose(f, gt, d) - RatSeries::x(d);
        const RatSeries slope = compose(df.truncated(d), gt, d);
        g = gt - mul_trunc(residual, reciprocal(slope, d), d);
        prec = next;
    }
    return g.truncated(D);
}

RatSeries honda_log(int s, std::size_t degree)
{
    if (s < 1)
        throw ParameterError("honda_log: height must be positive");
    if (degree < 1)
        throw ParameterError("honda_log: degree must be >= 1");
    RatSeries l(degree);
    mpz_class den = 1;
    for (std::size_t e = 1; e <= degree; e <<= s) {
        l[e] = mpq_class(mpz_class(1), den);
        den *= 2;
        if (e > degree >> s)
            break;
    }
    return l;
}

BiSeries honda_fgl_exact(int s, std::size_t bound_u, std::size_t bound_v)
{
    if (s < 1)
        throw ParameterError("honda_fgl: height must be positive");
    if (bound_u < 2 || bound_v < 2)
        throw ParameterError("honda_fgl: bounds must be >= 2");
    const std::size_t D = bound_u + bound_v - 2;
    const std::size_t wide = std::max(bound_u, bound_v);
    const RatSeries ell = honda_log(s, D);
    const RatSeries expo = reverse_series(ell);

    // powers[j] = l(x)^j truncated below x^wide
    std::vector<RatSeries> powers;
    powers.reserve(wide);
    RatSeries unit(wide - 1);
    unit[0] = 1;
    powers.push_back(unit);
    const RatSeries ell_w = ell.truncated(wide - 1);
    for (std::size_t j = 1; j < wide; ++j)
        powers.push_back(mul_trunc(powers.back(), ell_w, wide - 1));

    // F = sum_{j,m} e_{j+m} C(j+m, j) l(x)^j l(y)^m.
    // inner[j][b] = sum_m e_{j+m} C(j+m, j) [y^b] l(y)^m
    std::vector<std::vector<mpq_class>> inner(bound_u, std::vector<mpq_class>(bound_v));
    mpz_class binom;
    mpq_class c;
    for (std::size_t j = 0; j < bound_u; ++j) {
        for (std::size_t m = 0; m < bound_v; ++m) {
            if (j + m == 0 || expo.is_zero_at(j + m))
                continue;
            mpz_bin_uiui(binom.get_mpz_t(), j + m, j);
            c = expo[j + m] * binom;
            for (std::size_t b = m; b < bound_v; ++b)
                if (!powers[m].is_zero_at(b))
                    inner[j][b] += c * powers[m][b];
        }
    }
    BiSeries F(bound_u, bound_v);
    mpq_class acc;
    for (std::size_t a = 0; a < bound_u; ++a) {
        for (std::size_t b = 0; b < bound_v; ++b) {
            acc = 0;
            for (std::size_t j = 0; j <= a; ++j)
                if (!powers[j].is_zero_at(a) && inner[j][b] != 0)
                    acc += powers[j][a] * inner[j][b];
            if (mpz_even_p(acc.get_den_mpz_t()))
                throw AlgebraError("FGL coefficient of x^" + std::to_string(a) + " y^" + std::to_string(b) +
                                   " is not 2-integral: " + acc.get_str());
            if (mpz_odd_p(acc.get_num_mpz_t()))
                F.set_coeff(a, b, true);
        }
    }
    return F;
}

BiSeries honda_fgl(int s, std::size_t bound_u, std::size_t bound_v)
{
    static std::mutex mu;
    static std::map<std::tuple<int, std::size_t, std::size_t>, BiSeries> cache;
    const auto key = std::make_tuple(s, bound_u, bound_v);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    BiSeries F = honda_fgl_exact(s, bound_u, bound_v);
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(F)).first->second;
}

BitPoly substitute(const BiSeries& F, const BitPoly& A, const BitPoly& B)
{
    if (A.bound() != B.bound())
        throw ParamsMismatch("substitute: truncation mismatch");
    if (A.coeff(0) || B.coeff(0))
        throw ParameterError("substitute: arguments must have zero constant term");
    const std::size_t bound = A.bound();
    auto powers = [&](const BitPoly& base, std::size_t n) {
        std::vector<BitPoly> out{BitPoly::one(bound)};
        while (out.size() < n) {
            BitPoly next = out.back() * base;
            if (next.is_zero())
                return out;
            out.push_back(std::move(next));
        }
        if (!(out.back() * base).is_zero())
            throw ParameterError("substitute: series truncation too small for the arguments");
        return out;
    };
    const auto ap = powers(A, F.bound_u());
    const auto bp = powers(B, F.bound_v());
    BitPoly result(bound);
    for (std::size_t a = 0; a < ap.size(); ++a) {
        if (F.row_is_zero(a))
            continue;
        BitPoly in(bound);
        for (std::size_t b = 0; b < bp.size(); ++b)
            if (F.coeff(a, b))
                in += bp[b];
        if (!in.is_zero())
            result += ap[a] * in;
    }
    return result;
}

namespace {

// f(g(x)) for g with zero constant term.
BitPoly compose(const BitPoly& f, const BitPoly& g)
{
    BitPoly result(f.bound());
    BitPoly power = BitPoly::one(f.bound());
    for (std::size_t k = 0; k < f.bound() && !power.is_zero(); ++k) {
        if (f.coeff(k))
            result += power;
        power = power * g;
    }
    return result;
}

} // namespace

BitPoly m_series(const BiSeries& F, std::int64_t m, std::size_t bound)
{
    if (m < 0)
        return compose(formal_inverse(F, bound), m_series(F, -m, bound));
    const BitPoly x = BitPoly::x(bound);
    BitPoly acc(bound); // [0] = 0
    for (int bit = 62; bit >= 0; --bit) {
        if (!acc.is_zero())
            acc = substitute(F, acc, acc);
        if ((m >> bit) & 1)
            acc = substitute(F, acc, x);
    }
    return acc;
}

BitPoly m_series(int s, std::int64_t m, std::size_t bound)
{
    const std::size_t b = std::max<std::size_t>(bound, 2);
    return m_series(honda_fgl(s, b, b), m, bound);
}

BitPoly formal_inverse(const BiSeries& F, std::size_t bound)
{
    const BitPoly x = BitPoly::x(bound);
    BitPoly iota(bound);
    for (std::size_t d = 1; d < bound; ++d) {
        if (substitute(F, x, iota).coeff(d))
            iota.flip(d);
    }
    if (!substitute(F, x, iota).is_zero())
        throw AlgebraError("formal_inverse: recursion failed to solve F(x, i(x)) = 0");
    return iota;
}

BitPoly formal_inverse(int s, std::size_t bound)
{
    const std::size_t b = std::max<std::size_t>(bound, 2);
    return formal_inverse(honda_fgl(s, b, b), bound);
}

std::size_t default_approx_bound(int s)
{
    const std::size_t four_s = std::size_t{1} << (2 * s);
    return std::max<std::size_t>(32, four_s);
}

FglApproxReport check_fgl_approximations(int s)
{
    const auto B = default_approx_bound(s);
    return check_fgl_approximations(honda_fgl(s, B, B), s);
}

FglApproxReport check_fgl_approximations(const BiSeries& F, int s)
{
    if (s < 2)
        throw ParameterError("the FGL approximations need s >= 2");
    FglApproxReport rep;
    rep.s = s;
    rep.bound = std::min(F.bound_u(), F.bound_v());
    const std::size_t B = rep.bound;
    const std::size_t h = std::size_t{1} << (s - 1); // 2^{s-1}
    const std::size_t K = h * h;                     // 4^{s-1}

    // Leading approximation: R = F + x + y + (xy)^h must vanish mod y^K.
    {
        BiSeries R = F;
        R.flip(1, 0);
        R.flip(0, 1);
        if (h < B)
            R.flip(h, h);
        for (auto [a, b] : R.terms()) {
            if (b < K) {
                rep.eq_leading.pass = false;
                rep.eq_leading.witness = std::make_pair(a, b);
                break;
            }
        }
        std::ostringstream os;
        os << "F - x - y - (xy)^" << h << " in (y^" << K << ") for exponents < " << B;
        rep.eq_leading.detail = os.str();
    }

    // Phi form: R = F + x + y + Phi^h with Phi = xy + (xy)^h (x + y), i.e.
    // Phi^h = (xy)^h + (xy)^K (x^h + y^h). R must lie in the ideal generated by
    // (xy)^K (x + y)^K = (xy)^K (x^K + y^K). Checked in total degree < B.
    {
        BiSeries R = F;
        R.flip(1, 0);
        R.flip(0, 1);
        auto flip_if = [&](std::size_t a, std::size_t b) {
            if (a < B && b < B)
                R.flip(a, b);
        };
        flip_if(h, h);
        flip_if(K + h, K);
        flip_if(K, K + h);

        std::vector<std::pair<std::size_t, std::size_t>> low; // terms in total degree < B
        for (auto [a, b] : R.terms())
            if (a + b < B)
                low.emplace_back(a, b);
        for (auto [a, b] : low) {
            if (a < K || b < K) {
                rep.eq_phi.pass = false;
                rep.eq_phi.witness = std::make_pair(a, b);
                break;
            }
        }
        if (rep.eq_phi.pass) {
            // Divide by (xy)^K, then reduce modulo x^K + y^K via x^K -> y^K.
            // The reduction preserves total degree, so it is exact on the
            // total-degree truncation.
            std::map<std::pair<std::size_t, std::size_t>, bool> reduced;
            for (auto [a, b] : low) {
                const std::size_t a1 = a - K, b1 = b - K;
                const std::size_t q = a1 / K;
                auto& bit = reduced[{a1 % K, b1 + q * K}];
                bit = !bit;
            }
            for (auto& [mon, bit] : reduced) {
                if (bit) {
                    rep.eq_phi.pass = false;
                    rep.eq_phi.witness = std::make_pair(mon.first + K, mon.second + K);
                    break;
                }
            }
        }
        std::ostringstream os;
        os << "F - x - y - Phi^" << h << " in ((xy)^" << K << "(x+y)^" << K << ") in total degree < " << B;
        rep.eq_phi.detail = os.str();
    }
    return rep;
}

FglAxiomReport check_fgl_axioms(const BiSeries& F, int s, std::size_t assoc_bound)
{
    FglAxiomReport rep;
    const std::size_t B = std::min(F.bound_u(), F.bound_v());
    if (assoc_bound > B)
        throw ParameterError("associativity bound exceeds the FGL truncation");

    rep.unit = true;
    for (std::size_t a = 0; a < F.bound_u(); ++a)
        if (F.coeff(a, 0) != (a == 1)) {
            rep.unit = false;
            rep.witness = "unit: coefficient (" + std::to_string(a) + ",0)";
        }
    for (std::size_t b = 0; b < F.bound_v(); ++b)
        if (F.coeff(0, b) != (b == 1)) {
            rep.unit = false;
            rep.witness = "unit: coefficient (0," + std::to_string(b) + ")";
        }
    rep.commutative = F.is_symmetric();
    if (!rep.commutative && !rep.witness)
        rep.witness = "commutativity";

    // F(F(x,y),z) and F(x,F(y,z)) compared on total degree < assoc_bound.
    {
        const std::size_t T = assoc_bound;
        const RingParams p = truncation_params(T);
        RingElement P(p);
        for (auto [a, b] : F.terms())
            if (a < T && b < T)
                P.set_coeff(a, b, true);
        std::vector<RingElement> Ppow{RingElement::one(p)};
        for (std::size_t a = 1; a < T; ++a)
            Ppow.push_back(Ppow.back() * P);
        // left[r] = sum_a F[a,r] P^a : coefficient of x^p y^q z^r
        // right[p] = sum_b F[p,b] P^b : coefficient of x^p y^q z^r via (y,z)
        std::vector<RingElement> left(T, RingElement(p)), right(T, RingElement(p));
        for (std::size_t a = 0; a < T; ++a)
            for (std::size_t r = 0; r < T; ++r)
                if (F.coeff(a, r)) {
                    left[r] += Ppow[a];
                    right[a] += Ppow[r];
                }
        rep.associative = true;
        for (std::size_t x = 0; x < T && rep.associative; ++x)
            for (std::size_t y = 0; x + y < T && rep.associative; ++y)
                for (std::size_t z = 0; x + y + z < T; ++z)
                    if (left[z].coeff(x, y) != right[x].coeff(y, z)) {
                        rep.associative = false;
                        if (!rep.witness)
                            rep.witness = "associativity: x^" + std::to_string(x) + " y^" + std::to_string(y) +
                                          " z^" + std::to_string(z);
                        break;
                    }
    }

    const BitPoly two = m_series(F, 2, B);
    rep.two_series = two == BitPoly::monomial(B, std::size_t{1} << s);
    if (!rep.two_series && !rep.witness)
        rep.witness = "[2](x) differs from x^" + std::to_string(std::size_t{1} << s);
    return rep;
}

} // namespace mk
