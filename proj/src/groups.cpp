#include "mk/groups.hpp"

#include "mk/bits.hpp"
#include "mk/error.hpp"
#include "mk/fgl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace mk {

std::int64_t normalize_residue(std::int64_t r, std::int64_t modulus) noexcept
{
    const std::int64_t m = r % modulus;
    return m < 0 ? m + modulus : m;
}

std::optional<std::string> validate_spec(const GroupSpec& g)
{
    if (g.id < 1 || g.id > kGroupCount)
        return "group id " + std::to_string(g.id) + " out of range";
    const std::int64_t N = g.modulus();
    // phi = [[i, k], [j, l]] acting on exponent columns (x, y)
    const std::int64_t e00 = g.i * g.i + g.k * g.j;
    const std::int64_t e01 = g.i * g.k + g.k * g.l;
    const std::int64_t e10 = g.j * g.i + g.l * g.j;
    const std::int64_t e11 = g.j * g.k + g.l * g.l;
    const std::int64_t want[4] = {1, 0, 0, 1};
    const std::int64_t got[4] = {e00, e01, e10, e11};
    const char* names[4] = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
    for (int q = 0; q < 4; ++q)
        if (normalize_residue(got[q] - want[q], N) != 0)
            return g.name() + ": action matrix squared differs from the identity at entry " + names[q] +
                   " (value " + std::to_string(normalize_residue(got[q], N)) + " mod " + std::to_string(N) + ")";
    return std::nullopt;
}

GroupSpec group_spec(int id, int n)
{
    if (n < 1)
        throw ParameterError("n must be >= 1 (got " + std::to_string(n) + ")");
    if (id < 1 || id > kGroupCount)
        throw ParameterError("unknown group G" + std::to_string(id));
    const std::int64_t t = std::int64_t{1} << n; // 2^n
    // (i, j, k, l) read off the relation lists; negative residues normalized below.
    std::int64_t e[4];
    switch (id) {
    case 1: e[0] = 1, e[1] = 0, e[2] = 0, e[3] = 1; break;
    case 2: e[0] = 1 + t, e[1] = 0, e[2] = 0, e[3] = 1 + t; break;
    case 3: e[0] = 1, e[1] = t, e[2] = 0, e[3] = 1; break;
    case 4: e[0] = 1 + t, e[1] = t, e[2] = 0, e[3] = 1 + t; break;
    case 5: e[0] = -1, e[1] = 0, e[2] = 0, e[3] = -1; break;
    case 6: e[0] = -1 + t, e[1] = 0, e[2] = 0, e[3] = -1 + t; break;
    case 7: e[0] = -1, e[1] = t, e[2] = 0, e[3] = -1; break;
    case 8: e[0] = -1 + t, e[1] = t, e[2] = 0, e[3] = -1 + t; break;
    case 9: e[0] = 1, e[1] = t, e[2] = t, e[3] = 1 + t; break;
    case 10: e[0] = 1, e[1] = 0, e[2] = 0, e[3] = 1 + t; break;
    case 11: e[0] = -1, e[1] = t, e[2] = t, e[3] = -1 + t; break;
    case 12: e[0] = -1, e[1] = 0, e[2] = 0, e[3] = -1 + t; break;
    case 13: e[0] = 1, e[1] = 0, e[2] = 0, e[3] = -1 + t; break;
    case 14: e[0] = -1, e[1] = 0, e[2] = 0, e[3] = 1 + t; break;
    case 15: e[0] = 0, e[1] = 1, e[2] = 1, e[3] = 0; break;
    case 16: e[0] = 1, e[1] = 0, e[2] = 0, e[3] = -1; break;
    default: e[0] = 1 + t, e[1] = 0, e[2] = 0, e[3] = -1 + t; break; // 17
    }
    GroupSpec g;
    g.id = id;
    g.n = n;
    const std::int64_t N = g.modulus();
    g.i = normalize_residue(e[0], N);
    g.j = normalize_residue(e[1], N);
    g.k = normalize_residue(e[2], N);
    g.l = normalize_residue(e[3], N);
    return g;
}

std::vector<GroupSpec> catalog(int n)
{
    std::vector<GroupSpec> out;
    for (int id = 1; id <= kGroupCount; ++id) {
        auto g = group_spec(id, n);
        if (auto err = validate_spec(g))
            throw AlgebraError("catalog: " + *err);
        out.push_back(g);
    }
    return out;
}

int parse_group_id(const std::string& text)
{
    std::string t = text;
    if (!t.empty() && (t[0] == 'G' || t[0] == 'g'))
        t.erase(0, 1);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParameterError("unknown group '" + text + "'");
    const int id = std::stoi(t);
    if (id < 1 || id > kGroupCount)
        throw ParameterError("unknown group '" + text + "'");
    return id;
}

bool has_special_basis(int id) noexcept { return std::find(kSpecialBasisGroups.begin(), kSpecialBasisGroups.end(), id) != kSpecialBasisGroups.end(); }

std::string describe(const GroupSpec& g)
{
    std::ostringstream os;
    os << g.name() << ": c a c = a^" << g.i << " b^" << g.j << ", c b c = a^" << g.k << " b^" << g.l;
    return os.str();
}

CharacterAction character_action(const GroupSpec& g)
{
    const std::int64_t N = g.modulus();
    return {{normalize_residue(g.i, N), normalize_residue(g.k, N)}, {normalize_residue(g.j, N), normalize_residue(g.l, N)}};
}

Character act_on_character(const GroupSpec& g, Character c)
{
    // t(lambda^a nu^b) = (lambda^i nu^k)^a (lambda^j nu^l)^b
    const std::int64_t N = g.modulus();
    return {normalize_residue(g.i * c.first + g.j * c.second, N), normalize_residue(g.k * c.first + g.l * c.second, N)};
}

GroupElement group_multiply(const GroupSpec& g, const GroupElement& p, const GroupElement& q)
{
    const std::int64_t N = g.modulus();
    std::int64_t qx = q.x, qy = q.y;
    if (p.eps == 1) {
        const std::int64_t nx = g.i * q.x + g.k * q.y;
        const std::int64_t ny = g.j * q.x + g.l * q.y;
        qx = nx;
        qy = ny;
    }
    return {normalize_residue(p.x + qx, N), normalize_residue(p.y + qy, N), (p.eps + q.eps) % 2};
}

FiniteGroup::FiniteGroup(const GroupSpec& g) : spec_(g), order_(static_cast<std::size_t>(g.order()))
{
    table_.resize(order_ * order_);
    for (std::size_t p = 0; p < order_; ++p)
        for (std::size_t q = 0; q < order_; ++q)
            table_[p * order_ + q] = static_cast<std::uint32_t>(index(group_multiply(g, element(p), element(q))));
}

GroupElement FiniteGroup::element(std::size_t idx) const
{
    const auto N = static_cast<std::size_t>(spec_.modulus());
    return {static_cast<std::int64_t>((idx / N) % N), static_cast<std::int64_t>(idx % N), static_cast<int>(idx / (N * N))};
}

std::size_t FiniteGroup::index(const GroupElement& e) const
{
    const auto N = static_cast<std::size_t>(spec_.modulus());
    return (static_cast<std::size_t>(e.eps) * N + static_cast<std::size_t>(e.x)) * N + static_cast<std::size_t>(e.y);
}

std::uint64_t chi_bruteforce(const GroupSpec& g, int s, const ChiGuard& guard)
{
    if (s < 1)
        throw ParameterError("chi_bruteforce: s must be positive");
    if (g.n > guard.max_n || s > guard.max_s)
        throw InfeasibleSize("brute-force count limited to n <= " + std::to_string(guard.max_n) + ", s <= " +
                             std::to_string(guard.max_s));
    const FiniteGroup G(g);
    const std::size_t order = G.order();
    const std::size_t w = bits::words_for(order);
    std::vector<BitVec> centralizer(order, BitVec(w, 0));
    for (std::size_t p = 0; p < order; ++p)
        for (std::size_t q = 0; q < order; ++q)
            if (G.mul(p, q) == G.mul(q, p))
                bits::flip(centralizer[p], q);

    std::map<std::pair<int, BitVec>, std::uint64_t> memo;
    std::function<std::uint64_t(int, const BitVec&)> count = [&](int k, const BitVec& S) -> std::uint64_t {
        if (k == 0)
            return 1;
        if (k == 1)
            return bits::popcount(S);
        const auto key = std::make_pair(k, S);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        std::uint64_t total = 0;
        BitVec sub(w);
        for (auto x = bits::find_next(S, 0); x != bits::npos; x = bits::find_next(S, x + 1)) {
            for (std::size_t q = 0; q < w; ++q)
                sub[q] = S[q] & centralizer[x][q];
            total += count(k - 1, sub);
        }
        memo.emplace(key, total);
        return total;
    };
    BitVec all(w, 0);
    for (std::size_t x = 0; x < order; ++x)
        bits::flip(all, x);
    const std::uint64_t hom = count(s + 1, all);
    if (hom % order != 0)
        throw AlgebraError("commuting tuple count not divisible by |G|");
    return hom / order;
}

BitPoly residue_series(const BiSeries& F, std::int64_t m, std::int64_t modulus, std::size_t bound)
{
    const std::int64_t r = normalize_residue(m, modulus);
    if (r == 0)
        return BitPoly(bound);
    if (2 * r > modulus)
        return m_series(F, r - modulus, bound);
    return m_series(F, r, bound);
}

BiSeries ring_fgl(const RingParams& p)
{
    if (p.s < 2)
        throw ParameterError("ring_fgl: ring has no height parameter");
    return honda_fgl(p.s, p.M, p.M);
}

RingElement euler_pullback(std::int64_t a, std::int64_t b, const RingParams& p, const BiSeries& F,
                           std::int64_t modulus)
{
    const RingElement X = RingElement::from_u_poly(p, residue_series(F, a, modulus, p.M));
    const RingElement Y = RingElement::from_v_poly(p, residue_series(F, b, modulus, p.M));
    return substitute(F, X, Y);
}

RingElement euler_pullback(std::int64_t a, std::int64_t b, const RingParams& p)
{
    return euler_pullback(a, b, p, ring_fgl(p), std::int64_t{1} << (p.n + 1));
}

Involution::Involution(const RingParams& p, RingElement image_u, RingElement image_v)
    : params_(p), image_u_(std::move(image_u)), image_v_(std::move(image_v)), matrix_(p.dim, p.dim)
{
    check_same_ring(p, image_u_.params(), "involution");
    check_same_ring(p, image_v_.params(), "involution");
    std::vector<RingElement> upow{RingElement::one(p)}, vpow{RingElement::one(p)};
    for (std::size_t a = 1; a < p.M; ++a) {
        upow.push_back(upow.back() * image_u_);
        vpow.push_back(vpow.back() * image_v_);
    }
    for (std::size_t a = 0; a < p.M; ++a)
        for (std::size_t b = 0; b < p.M; ++b)
            to_coordinates(upow[a] * vpow[b], matrix_.row(canonical_index(p, a, b)));
}

RingElement Involution::apply(const RingElement& g) const
{
    check_same_ring(params_, g.params(), "involution apply");
    return from_coordinates(params_, apply_rows(matrix_, to_coordinates(g)));
}

RingElement Involution::image_of_monomial(std::size_t a, std::size_t b) const
{
    return from_coordinates(params_, matrix_.row(canonical_index(params_, a, b)));
}

BitMatrix Involution::trace_matrix() const
{
    BitMatrix m = matrix_;
    for (std::size_t i = 0; i < params_.dim; ++i)
        bits::flip(m.row(i), i);
    return m;
}

Involution make_involution(const GroupSpec& g, const RingParams& p, const BiSeries& F)
{
    if (g.n != p.n)
        throw ParamsMismatch("group and ring were built for different n");
    const std::int64_t N = g.modulus();
    // t(u) = e(t(lambda)) = e(lambda^i nu^k), t(v) = e(lambda^j nu^l)
    return Involution(p, euler_pullback(g.i, g.k, p, F, N), euler_pullback(g.j, g.l, p, F, N));
}

Involution build_involution(const GroupSpec& g, const RingParams& p, const BiSeries& F)
{
    Involution t = make_involution(g, p, F);
    const BitMatrix sq = multiply(t.matrix(), t.matrix());
    for (std::size_t i = 0; i < p.dim; ++i) {
        const auto r = sq.row(i);
        if (bits::popcount(r) != 1 || !bits::test(r, i))
            throw AlgebraError(g.name() + ": t^2 != id on monomial u^" + std::to_string(i / p.M) + "*v^" +
                               std::to_string(i % p.M));
    }
    return t;
}

Involution build_involution(const GroupSpec& g, const RingParams& p) { return build_involution(g, p, ring_fgl(p)); }

RingElement random_element(const RingParams& p, std::mt19937_64& rng)
{
    std::vector<std::uint64_t> coords(bits::words_for(p.dim));
    for (auto& w : coords)
        w = rng();
    coords.back() &= bits::tail_mask(p.dim);
    return from_coordinates(p, coords);
}

InvolutionCheck validate_involution(const Involution& t, std::mt19937_64& rng, std::size_t samples)
{
    const auto& p = t.params();
    InvolutionCheck rep;
    const BitMatrix sq = multiply(t.matrix(), t.matrix());
    rep.square_is_identity = true;
    for (std::size_t i = 0; i < p.dim; ++i) {
        const auto r = sq.row(i);
        if (bits::popcount(r) != 1 || !bits::test(r, i)) {
            rep.square_is_identity = false;
            rep.witness = to_string(RingElement::monomial(p, i / p.M, i % p.M));
            break;
        }
    }
    rep.unital = t.apply(RingElement::one(p)) == RingElement::one(p);
    if (!rep.unital && !rep.witness)
        rep.witness = "1";
    rep.multiplicative = true;
    for (std::size_t k = 0; k < samples; ++k) {
        const RingElement g = random_element(p, rng);
        const RingElement h = random_element(p, rng);
        ++rep.samples;
        if (!(t.apply(g * h) == t.apply(g) * t.apply(h))) {
            rep.multiplicative = false;
            if (!rep.witness)
                rep.witness = to_string(g);
            break;
        }
    }
    return rep;
}

} // namespace mk
