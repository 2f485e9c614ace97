#include "mk/error.hpp"
#include "mk/fgl.hpp"
#include "mk/groups.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace mk;

namespace {

// Counts commuting (s+1)-tuples directly and divides by |G|.
std::uint64_t chi_by_tuples(const GroupSpec& g, int s)
{
    const FiniteGroup G(g);
    const std::size_t N = G.order();
    std::vector<std::vector<bool>> commute(N, std::vector<bool>(N));
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
            commute[a][b] = G.mul(a, b) == G.mul(b, a);
    std::uint64_t count = 0;
    std::vector<std::size_t> tuple;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == s + 1) {
            ++count;
            return;
        }
        for (std::size_t x = 0; x < N; ++x) {
            bool ok = true;
            for (auto y : tuple)
                ok = ok && commute[x][y];
            if (!ok)
                continue;
            tuple.push_back(x);
            self(self, depth + 1);
            tuple.pop_back();
        }
    };
    rec(rec, 0);
    return count / N;
}

} // namespace

TEST_CASE("catalog is well formed")
{
    for (int n : {1, 2, 3}) {
        const auto cat = catalog(n);
        REQUIRE(cat.size() == 17);
        for (const auto& g : cat) {
            CHECK_FALSE(validate_spec(g));
            CHECK(g.order() == (std::uint64_t{1} << (2 * n + 3)));
            for (auto e : {g.i, g.j, g.k, g.l}) {
                CHECK(e >= 0);
                CHECK(e < g.modulus());
            }
        }
    }
    const GroupSpec g3 = group_spec(3, 2);
    CHECK(g3.i == 1);
    CHECK(g3.j == 4);
    CHECK(g3.k == 0);
    CHECK(g3.l == 1);
    CHECK(describe(g3) == "G3: c a c = a^1 b^4, c b c = a^0 b^1");
    // pairwise distinct presentations once n >= 2
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> seen;
    for (const auto& g : catalog(2))
        seen.insert({g.i, g.j, g.k, g.l});
    CHECK(seen.size() == 17);
    CHECK(parse_group_id("G11") == 11);
    CHECK(parse_group_id("g7") == 7);
    CHECK(parse_group_id("3") == 3);
    CHECK_THROWS_AS(parse_group_id("G18"), ParameterError);
    CHECK_THROWS_AS(parse_group_id("H2"), ParameterError);

    GroupSpec bad = group_spec(7, 2);
    bad.k = 1;
    CHECK(validate_spec(bad));
}

TEST_CASE("semidirect product structure")
{
    for (int id : {1, 3, 7, 11, 15}) {
        const GroupSpec g = group_spec(id, 1);
        const FiniteGroup G(g);
        REQUIRE(G.order() == 32);
        std::mt19937_64 rng(id);
        for (int k = 0; k < 300; ++k) {
            const std::size_t a = rng() % 32, b = rng() % 32, c = rng() % 32;
            CHECK(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)));
        }
        const std::size_t e = G.index({0, 0, 0});
        for (std::size_t a = 0; a < 32; ++a) {
            CHECK(G.mul(e, a) == a);
            std::size_t x = a;
            for (int k = 1; k < 8; ++k)
                x = G.mul(x, a);
            CHECK(x == e); // order divides 2^{n+2}
        }
        // c a c^-1 = a^i b^j
        const auto conj = group_multiply(g, group_multiply(g, {0, 0, 1}, {1, 0, 0}), {0, 0, 1});
        CHECK(conj == GroupElement{g.i, g.j, 0});
    }
}

TEST_CASE("character action")
{
    const GroupSpec g3 = group_spec(3, 2);
    const auto act = character_action(g3);
    CHECK(act.t_lambda == Character{1, 0});
    CHECK(act.t_nu == Character{4, 1});
    for (const auto& g : catalog(2))
        for (std::int64_t a = 0; a < 8; ++a)
            for (std::int64_t b = 0; b < 8; ++b)
                CHECK(act_on_character(g, act_on_character(g, {a, b})) == Character{a, b});
    // fixed character (0, 2) for G3: nu^2 -> lambda^{2^{n+1}} nu^2 = nu^2
    CHECK(act_on_character(g3, {0, 2}) == Character{0, 2});
}

TEST_CASE("brute-force chi agrees with direct tuple counting")
{
    CHECK(chi_bruteforce(group_spec(1, 1), 2) == 1024);
    for (int id = 1; id <= 17; ++id)
        CHECK(chi_bruteforce(group_spec(id, 1), 2) == chi_by_tuples(group_spec(id, 1), 2));
    CHECK(chi_bruteforce(group_spec(7, 2), 1) == chi_by_tuples(group_spec(7, 2), 1));
    CHECK_THROWS(chi_bruteforce(group_spec(1, 3), 2));
}

TEST_CASE("residue series and Euler classes")
{
    const auto p = make_ring(2, 1);
    const BiSeries F = ring_fgl(p);
    // [4](x) = x^16 vanishes, so [3] and [-1] agree in the ring.
    CHECK(residue_series(F, 3, 4, p.M) == m_series(F, 3, p.M));
    CHECK(residue_series(F, 3, 4, p.M) == m_series(F, -1, p.M));
    CHECK(residue_series(F, 5, 4, p.M) == BitPoly::x(p.M));
    const RingElement u = RingElement::gen_u(p), v = RingElement::gen_v(p);
    CHECK(euler_pullback(1, 0, p) == u);
    CHECK(euler_pullback(0, 1, p) == v);
    CHECK(euler_pullback(0, 2, p) == pow(v, 4));
    CHECK(euler_pullback(1, 1, p) == substitute(F, u, v));
}

TEST_CASE("involutions are ring automorphisms of order two")
{
    for (auto [s, n] : {std::pair{2, 1}, std::pair{3, 1}}) {
        const auto p = make_ring(s, n);
        const BiSeries F = ring_fgl(p);
        for (const auto& g : catalog(n)) {
            const Involution t = build_involution(g, p, F);
            std::mt19937_64 rng(g.id);
            const auto rep = validate_involution(t, rng, 50);
            CHECK_MESSAGE(rep.pass(), g.name());
        }
    }
    const auto p = make_ring(2, 1);
    const Involution t3 = build_involution(group_spec(3, 1), p);
    CHECK(t3.image_u() == RingElement::gen_u(p));
    CHECK(t3.trace(RingElement::gen_u(p)).is_zero());

    GroupSpec bad = group_spec(4, 1);
    bad.i = 1;
    bad.l = 1;
    bad.j = 1;
    CHECK_THROWS_AS(build_involution(bad, p), AlgebraError);
    std::mt19937_64 rng(1);
    const auto rep = validate_involution(make_involution(bad, p, ring_fgl(p)), rng, 10);
    CHECK_FALSE(rep.square_is_identity);
    CHECK(rep.witness);
    CHECK_THROWS_AS(make_involution(group_spec(3, 2), p, ring_fgl(p)), ParamsMismatch);
}
