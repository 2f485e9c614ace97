#include "mk/error.hpp"
#include "mk/report.hpp"
#include "mk/verifier.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace mk;

namespace {

const RingParams& ring21()
{
    static const RingParams p = make_ring(2, 1);
    return p;
}

const RingParams& ring22()
{
    static const RingParams p = make_ring(2, 2);
    return p;
}

} // namespace

TEST_CASE("special basis and decomposition")
{
    const GroupContext ctx(group_spec(4, 2), ring22());
    SpecialBasis basis(ctx, special_basis_ranges(4, 2, 2));
    CHECK(basis.size() == 4096);
    REQUIRE(basis.verify().pass);

    const auto dx2 = basis.decompose(ctx.xbar2());
    CHECK(dx2.f[0] == ctx.xbar2());
    CHECK(dx2.f[1].is_zero());
    CHECK(dx2.f[2].is_zero());
    CHECK(dx2.f[3].is_zero());

    const auto duv = basis.decompose(ctx.u() * ctx.v());
    CHECK(duv.f[3] == RingElement::one(ring22()));
    CHECK(duv.f[0].is_zero());

    // u^4 = u xbar1^3 + xbar2^2 + (something in Im(1+t)); the u-part carries xbar1^3.
    const auto d4 = basis.decompose(pow(ctx.u(), 4));
    CHECK_FALSE(d4.f[1].is_zero());
    CHECK(basis.assemble(d4) == pow(ctx.u(), 4));

    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        const RingElement g = random_element(ring22(), rng);
        CHECK(basis.assemble(basis.decompose(g)) == g);
    }
}

TEST_CASE("widening the G4 ranges produces a dependency")
{
    const GroupContext ctx(group_spec(4, 1), ring21());
    OmegaRanges wide = special_basis_ranges(4, 2, 1);
    wide.j = std::size_t{1} << 2; // j < 2^{ns}
    SpecialBasis basis(ctx, wide);
    const CheckResult r = basis.verify();
    CHECK_FALSE(r.pass);
    REQUIRE(r.witness);
    CHECK(r.witness->find("xbar2^2") != std::string::npos);
    CHECK_THROWS_AS(basis.decompose(ctx.u()), AlgebraError);
}

TEST_CASE("invariance criterion")
{
    const GroupContext ctx(group_spec(3, 1), ring21());
    SpecialBasis basis(ctx, special_basis_ranges(3, 2, 1));
    REQUIRE(basis.verify().pass);
    CHECK(ctx.xbar1().is_zero());
    CHECK(criterion_holds(ctx, basis, ctx.u()));
    CHECK(ctx.is_invariant(ctx.u()));
    CHECK(criterion_holds(ctx, basis, ctx.xbar2()));
    CHECK_FALSE(criterion_holds(ctx, basis, ctx.v()));
    CHECK(subspace_equal(criterion_subspace(ctx, basis), ctx.invariants()));

    for (int id : kSpecialBasisGroups) {
        const GroupContext c(group_spec(id, 2), ring22());
        std::mt19937_64 rng(id);
        for (const auto& r : check_invariance_criterion(c, rng, 100))
            CHECK_MESSAGE(r.pass, "G" << id << " " << r.name << ": " << r.detail);
    }
}

TEST_CASE("congruences and the power identity")
{
    const GroupContext ctx(group_spec(7, 2), ring22());
    // m = 1: u^2 = u xbar1 + xbar2
    CHECK(power_identity_rhs(ctx.u(), ctx.xbar1(), ctx.xbar2(), 1) == square(ctx.u()));
    CHECK(ctx.trace_image().contains(pow(ctx.xbar2(), 2)));
    for (int id : kSpecialBasisGroups) {
        const GroupContext c(group_spec(id, 2), ring22());
        for (const auto& r : check_congruences(c))
            CHECK_MESSAGE(r.pass, "G" << id << " " << r.name << ": " << r.detail);
    }
    CHECK_THROWS_AS(stated_congruences(GroupContext(group_spec(1, 2), ring22())), ParameterError);
}

TEST_CASE("T' complements the image of the trace")
{
    CHECK(tprime_expected_count(7, 2, 1) == 16);
    CHECK(tprime_expected_count(3, 2, 1) == 64);
    CHECK(tprime_expected_count(4, 2, 1) == 16);
    for (int id : kSpecialBasisGroups) {
        const GroupContext c(group_spec(id, 2), ring22());
        for (const auto& r : check_tprime(c))
            CHECK_MESSAGE(r.pass, "G" << id << " " << r.name << ": " << r.detail);
    }
}

TEST_CASE("goodness")
{
    const GroupContext g1(group_spec(1, 1), ring21());
    const auto r1 = check_goodness(g1, GoodMode::automatic);
    CHECK(r1.pass);
    CHECK(r1.good_span_dim == ring21().dim);

    const GroupContext g3(group_spec(3, 1), ring21());
    const auto autos = good_generators(g3, GoodMode::automatic);
    const auto fixed = std::find_if(autos.begin(), autos.end(), [](const Generator& g) { return g.label == "e(0,2)"; });
    REQUIRE(fixed != autos.end());
    CHECK(fixed->value == pow(g3.v(), 4));

    auto listed = good_generators(g3, GoodMode::listed);
    REQUIRE(listed.size() == 4);
    CHECK(listed[2].label == "u");
    CHECK(check_goodness(g3, listed, GoodMode::listed).pass);
    listed.erase(listed.begin() + 2);
    const auto without_u = check_goodness(g3, listed, GoodMode::listed);
    CHECK_FALSE(without_u.pass);
    REQUIRE(without_u.counterexample);
    CHECK(g3.is_invariant(*without_u.counterexample));
    CHECK_FALSE(good_span(g3, listed).contains(*without_u.counterexample));

    // A non-invariant generator is rejected outright.
    const auto bad = check_goodness(g3, {{"v", g3.v()}}, GoodMode::listed);
    CHECK_FALSE(bad.pass);
    CHECK(bad.detail.find("not invariant") != std::string::npos);

    // Outside the six groups the hand-picked mode falls back to the enumeration.
    const GroupContext g5(group_spec(5, 1), ring21());
    CHECK(good_generators(g5, GoodMode::listed).size() == good_generators(g5, GoodMode::automatic).size());
}

TEST_CASE("Euler characteristic")
{
    CHECK(chi_formula(1, 2, 1) == 1024);
    CHECK(chi_formula(7, 2, 2) == 2104);
    CHECK(chi_formula(3, 2, 1) == 352);
    const GroupContext g7(group_spec(7, 2), ring22());
    CHECK(trivial_summand_size(g7) == 16);
    CHECK(chi_cohomology(g7) == 2104);
    CHECK(chi_cohomology(GroupContext(group_spec(3, 1), ring21())) == 352);
    CHECK(chi_cohomology(GroupContext(group_spec(1, 1), ring21())) == 1024);
    CHECK_THROWS_AS(chi_formula(18, 2, 1), ParameterError);
}

TEST_CASE("trace identities hold for every group")
{
    std::mt19937_64 rng(4);
    for (const auto& g : catalog(1)) {
        const GroupContext ctx(g, ring21());
        CHECK(multiply(ctx.trace(), ctx.trace()).is_zero());
        CHECK(ctx.invariant_dim() >= ctx.trace_image().rank());
        for (int k = 0; k < 20; ++k) {
            const RingElement r = random_element(ring21(), rng), h = random_element(ring21(), rng);
            const RingElement inv = r * ctx.involution().apply(r);
            CHECK(ctx.is_invariant(inv));
            CHECK(inv * ctx.involution().trace(h) == ctx.involution().trace(inv * h));
        }
    }
}

TEST_CASE("verify_group and reports")
{
    VerifyOptions opts;
    opts.samples = 50;
    opts.groups = {3, 5};
    const RunReport rep = verify_all(ring21(), opts);
    REQUIRE(rep.groups.size() == 2);
    CHECK(rep.pass());
    const auto j = to_json(rep);
    CHECK(j["groups"][0]["group"] == "G3");
    CHECK(j["groups"][0]["params"]["M"] == 16);
    CHECK(j["groups"][0]["chi"]["formula"] == 352);
    CHECK(j["groups"][0]["chi"]["bruteforce"] == 352);
    for (const auto& c : j["groups"][0]["checks"]) {
        CHECK(c["status"] == "pass");
        CHECK(c["witness"].is_null());
    }
    std::ostringstream os;
    write_text(os, rep);
    CHECK(os.str().find("2/2 groups pass") != std::string::npos);

    // A corrupted exponent breaks the involution and stops the pipeline there.
    GroupSpec bad = group_spec(7, 1);
    bad.k = 1;
    const GroupReport g = verify_group(bad, ring21(), opts);
    CHECK_FALSE(g.pass());
    CHECK(g.checks.front().name == "catalog");
    CHECK_FALSE(g.checks.front().pass);
    CHECK(g.checks.back().name == "involution");
    CHECK(g.checks.back().witness);

    CHECK(parse_check("tprime") == kCheckTprime);
    CHECK_THROWS_AS(parse_check("nope"), ParameterError);
    CHECK(abbreviate(std::string(300, 'x'), 10).size() < 40);
}
