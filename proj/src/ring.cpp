#include "mk/ring.hpp"

#include "mk/bits.hpp"
#include "mk/error.hpp"

#include <cctype>
#include <cstring>
#include <sstream>

namespace mk {

RingParams make_ring(int s, int n, std::size_t max_dim)
{
    if (s < 2)
        throw ParameterError("s must be >= 2 (got " + std::to_string(s) + ")");
    if (n < 1)
        throw ParameterError("n must be >= 1 (got " + std::to_string(n) + ")");
    const long long e = static_cast<long long>(n + 1) * s;
    // dim = 4^e must stay representable before comparing against the guard.
    if (e > 30)
        throw InfeasibleSize("ring dimension 4^" + std::to_string(e) + " exceeds the size guard");
    RingParams p = truncation_params(std::size_t{1} << e);
    p.s = s;
    p.n = n;
    if (p.dim > max_dim)
        throw InfeasibleSize("ring dimension " + std::to_string(p.dim) + " exceeds the size guard " +
                             std::to_string(max_dim));
    return p;
}

RingParams truncation_params(std::size_t M)
{
    if (M == 0)
        throw ParameterError("truncation exponent must be positive");
    RingParams p;
    p.M = M;
    p.dim = M * M;
    p.row_words = bits::words_for(M);
    return p;
}

void check_same_ring(const RingParams& a, const RingParams& b, const char* what)
{
    if (!(a == b))
        throw ParamsMismatch(std::string(what) + ": operands live in different rings");
}

RingElement::RingElement(const RingParams& p) : params_(p), words_(p.M * p.row_words, 0) {}

RingElement RingElement::one(const RingParams& p) { return monomial(p, 0, 0); }
RingElement RingElement::gen_u(const RingParams& p) { return monomial(p, 1, 0); }
RingElement RingElement::gen_v(const RingParams& p) { return monomial(p, 0, 1); }

RingElement RingElement::monomial(const RingParams& p, std::size_t a, std::size_t b)
{
    RingElement g(p);
    if (a < p.M && b < p.M)
        g.set_coeff(a, b, true);
    return g;
}

RingElement RingElement::from_u_poly(const RingParams& p, const BitPoly& f)
{
    RingElement g(p);
    for (auto e : f.exponents())
        if (e < p.M)
            g.set_coeff(e, 0, true);
    return g;
}

RingElement RingElement::from_v_poly(const RingParams& p, const BitPoly& f)
{
    RingElement g(p);
    const auto w = f.words();
    auto r = g.row(0);
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i)
        r[i] = w[i];
    r[r.size() - 1] &= bits::tail_mask(p.M);
    return g;
}

bool RingElement::coeff(std::size_t a, std::size_t b) const noexcept
{
    return a < params_.M && b < params_.M && bits::test(row(a), b);
}

void RingElement::set_coeff(std::size_t a, std::size_t b, bool on)
{
    if (a >= params_.M || b >= params_.M)
        throw ParameterError("monomial u^" + std::to_string(a) + "*v^" + std::to_string(b) +
                             " is outside the truncation");
    bits::assign(row(a), b, on);
}

void RingElement::flip(std::size_t a, std::size_t b) { set_coeff(a, b, !coeff(a, b)); }

bool RingElement::is_zero() const noexcept { return bits::all_zero(words_); }

std::size_t RingElement::term_count() const noexcept { return bits::popcount(words_); }

std::vector<std::pair<std::size_t, std::size_t>> RingElement::terms() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < params_.M; ++a) {
        const auto r = row(a);
        for (auto b = bits::find_next(r, 0); b != bits::npos; b = bits::find_next(r, b + 1))
            out.emplace_back(a, b);
    }
    return out;
}

std::span<const std::uint64_t> RingElement::row(std::size_t a) const noexcept
{
    return std::span<const std::uint64_t>(words_).subspan(a * params_.row_words, params_.row_words);
}

std::span<std::uint64_t> RingElement::row(std::size_t a) noexcept
{
    return std::span<std::uint64_t>(words_).subspan(a * params_.row_words, params_.row_words);
}

bool RingElement::row_is_zero(std::size_t a) const noexcept { return bits::all_zero(row(a)); }

RingElement& RingElement::operator+=(const RingElement& o)
{
    check_same_ring(params_, o.params_, "add");
    bits::xor_into(words_, o.words_);
    return *this;
}

RingElement& RingElement::operator*=(const RingElement& o) { return *this = *this * o; }

RingElement operator*(const RingElement& x, const RingElement& y)
{
    check_same_ring(x.params_, y.params_, "mul");
    const auto& p = x.params_;
    RingElement out(p);
    std::vector<std::size_t> yrows;
    yrows.reserve(p.M);
    for (std::size_t a = 0; a < p.M; ++a)
        if (!y.row_is_zero(a))
            yrows.push_back(a);
    if (yrows.empty())
        return out;

    if (p.row_words == 1) {
        const std::uint64_t mask = bits::tail_mask(p.M);
        for (std::size_t a1 = 0; a1 < p.M; ++a1) {
            const std::uint64_t xr = x.words_[a1];
            if (xr == 0)
                continue;
            for (auto a2 : yrows) {
                if (a1 + a2 >= p.M)
                    break;
                out.words_[a1 + a2] ^= bits::clmul_lo(xr, y.words_[a2]) & mask;
            }
        }
        return out;
    }
    for (std::size_t a1 = 0; a1 < p.M; ++a1) {
        if (x.row_is_zero(a1))
            continue;
        for (auto a2 : yrows) {
            if (a1 + a2 >= p.M)
                break;
            bits::mul_trunc_xor(x.row(a1), y.row(a2), out.row(a1 + a2), p.M);
        }
    }
    return out;
}

RingElement mul(const RingElement& a, const RingElement& b) { return a * b; }

RingElement pow(const RingElement& g, std::uint64_t e)
{
    RingElement result = RingElement::one(g.params());
    RingElement base = g;
    while (e != 0) {
        if (e & 1U)
            result = result * base;
        e >>= 1;
        if (e != 0)
            base = square(base);
    }
    return result;
}

RingElement square(const RingElement& g)
{
    RingElement out(g.params());
    const std::size_t M = g.params().M;
    for (auto [a, b] : g.terms())
        if (2 * a < M && 2 * b < M)
            out.flip(2 * a, 2 * b);
    return out;
}

RingElement substitute(const BiSeries& F, const RingElement& X, const RingElement& Y)
{
    check_same_ring(X.params(), Y.params(), "substitute");
    if (X.constant_term() || Y.constant_term())
        throw ParameterError("substitute: arguments must be nilpotent (zero constant term)");
    const auto& p = X.params();

    auto powers = [&](const RingElement& base, std::size_t bound) {
        std::vector<RingElement> out{RingElement::one(p)};
        while (out.size() < bound) {
            RingElement next = out.back() * base;
            if (next.is_zero())
                return out;
            out.push_back(std::move(next));
        }
        if (!(out.back() * base).is_zero())
            throw ParameterError("substitute: series truncation too small for the arguments");
        return out;
    };
    const auto xp = powers(X, F.bound_u());
    const auto yp = powers(Y, F.bound_v());

    RingElement result(p);
    for (std::size_t a = 0; a < xp.size(); ++a) {
        if (F.row_is_zero(a))
            continue;
        RingElement inner(p);
        for (std::size_t b = 0; b < yp.size(); ++b)
            if (F.coeff(a, b))
                inner += yp[b];
        if (!inner.is_zero())
            result += (a == 0) ? inner : xp[a] * inner;
    }
    return result;
}

std::size_t canonical_index(const RingParams& p, std::size_t a, std::size_t b) noexcept { return a * p.M + b; }

void to_coordinates(const RingElement& g, std::span<std::uint64_t> out)
{
    const auto& p = g.params();
    std::fill(out.begin(), out.end(), 0);
    if (p.M % bits::kWordBits == 0) {
        for (std::size_t a = 0; a < p.M; ++a) {
            const auto r = g.row(a);
            std::memcpy(out.data() + a * p.row_words, r.data(), r.size() * sizeof(std::uint64_t));
        }
        return;
    }
    if (bits::kWordBits % p.M == 0) {
        // Rows are narrower than a word and never straddle word boundaries.
        for (std::size_t a = 0; a < p.M; ++a) {
            const std::size_t off = a * p.M;
            out[off / bits::kWordBits] |= g.row(a)[0] << (off % bits::kWordBits);
        }
        return;
    }
    for (auto [a, b] : g.terms())
        bits::flip(out, canonical_index(p, a, b));
}

std::vector<std::uint64_t> to_coordinates(const RingElement& g)
{
    std::vector<std::uint64_t> out(bits::words_for(g.params().dim), 0);
    to_coordinates(g, out);
    return out;
}

RingElement from_coordinates(const RingParams& p, std::span<const std::uint64_t> coords)
{
    RingElement g(p);
    if (p.M % bits::kWordBits == 0) {
        for (std::size_t a = 0; a < p.M; ++a) {
            auto r = g.row(a);
            std::memcpy(r.data(), coords.data() + a * p.row_words, r.size() * sizeof(std::uint64_t));
        }
        return g;
    }
    if (bits::kWordBits % p.M == 0) {
        const std::uint64_t mask = bits::tail_mask(p.M);
        for (std::size_t a = 0; a < p.M; ++a) {
            const std::size_t off = a * p.M;
            g.row(a)[0] = (coords[off / bits::kWordBits] >> (off % bits::kWordBits)) & mask;
        }
        return g;
    }
    for (auto i = bits::find_next(coords, 0); i != bits::npos && i < p.dim; i = bits::find_next(coords, i + 1))
        g.flip(i / p.M, i % p.M);
    return g;
}

std::string to_string(const RingElement& g)
{
    const auto t = g.terms();
    if (t.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto [a, b] : t) {
        if (!first)
            os << " + ";
        first = false;
        if (a == 0 && b == 0)
            os << '1';
        else
            os << "u^" << a << "*v^" << b;
    }
    return os.str();
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::size_t parse_exponent(std::string_view s, std::string_view whole)
{
    if (s.empty())
        throw ParameterError("malformed element: '" + std::string(whole) + "'");
    std::size_t v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParameterError("malformed element: '" + std::string(whole) + "'");
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

} // namespace

RingElement parse_element(const RingParams& p, std::string_view text)
{
    RingElement g(p);
    const std::string_view all = trim(text);
    if (all == "0")
        return g;
    std::string_view rest = all;
    while (true) {
        const auto plus = rest.find('+');
        const std::string_view term = trim(rest.substr(0, plus));
        if (term == "1") {
            g.flip(0, 0);
        } else {
            // u^a*v^b
            const auto star = term.find('*');
            if (star == std::string_view::npos || term.substr(0, 2) != "u^")
                throw ParameterError("malformed term '" + std::string(term) + "'");
            const auto ubit = trim(term.substr(2, star - 2));
            const auto vpart = trim(term.substr(star + 1));
            if (vpart.substr(0, 2) != "v^")
                throw ParameterError("malformed term '" + std::string(term) + "'");
            const auto a = parse_exponent(ubit, all);
            const auto b = parse_exponent(trim(vpart.substr(2)), all);
            if (a >= p.M || b >= p.M)
                throw ParameterError("term '" + std::string(term) + "' is outside the truncation");
            g.flip(a, b);
        }
        if (plus == std::string_view::npos)
            break;
        rest = rest.substr(plus + 1);
    }
    return g;
}

} // namespace mk
