// Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic only.
//
// At n = 1 several of the 17 presentations coincide (2^n - 1 = 1 and
// 2^n + 1 = -1 mod 4), so G6 and G13 become G1, G8 becomes G3 and
// G12, G17 become isomorphic to G16. The closed-form chi table and the
// G8 special-basis data are stated for the n >= 2 shapes and fail there. Those
// failures are printed as FAIL and listed below; the process exit status
// only flags failures outside this list (or listed ones that stop failing).

#include "mk/fgl.hpp"
#include "mk/groups.hpp"
#include "mk/verifier.hpp"

#include <chrono>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mk;

namespace {

const std::set<std::string> kDocumented = {
    "3:G6@(2,1)",  "3:G8@(2,1)",  "3:G12@(2,1)", "3:G13@(2,1)", "3:G17@(2,1)", "3:G6@(3,1)",
    "3:G8@(3,1)",  "3:G12@(3,1)", "3:G13@(3,1)", "3:G17@(3,1)", "4:G8@(2,1)",  "5:G8@(2,1)",
    "6:G8@(2,1)",  "7:G8-listed@(2,1)",
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string at(const RingParams& p)
{
    return "@(" + std::to_string(p.s) + "," + std::to_string(p.n) + ")";
}

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> failures; // "G8@(2,1)"-style tags
    std::vector<std::string> notes;
    double seconds = 0;
};

class Contexts {
public:
    const GroupContext& get(const RingParams& p, int id)
    {
        auto& slot = cache_[{p.s, p.n, id}];
        if (!slot)
            slot = std::make_unique<GroupContext>(group_spec(id, p.n), p, fgl(p));
        return *slot;
    }
    const BiSeries& fgl(const RingParams& p)
    {
        auto& F = fgl_[{p.s, p.n}];
        if (F.bound_u() == 0)
            F = ring_fgl(p);
        return F;
    }

private:
    std::map<std::tuple<int, int, int>, std::unique_ptr<GroupContext>> cache_;
    std::map<std::pair<int, int>, BiSeries> fgl_;
};

Criterion fgl_correctness()
{
    Criterion c{1, "Honda FGL axioms and both approximations, s = 2, 3", {}, {}};
    const auto t0 = Clock::now();
    for (int s : {2, 3}) {
        const std::size_t B = default_approx_bound(s);
        const BiSeries F = honda_fgl(s, B, B);
        const auto ax = check_fgl_axioms(F, s, B);
        const auto ap = check_fgl_approximations(F, s);
        const std::string tag = "s=" + std::to_string(s);
        if (!ax.unit)
            c.failures.push_back(tag + " unit");
        if (!ax.commutative)
            c.failures.push_back(tag + " commutativity");
        if (!ax.associative)
            c.failures.push_back(tag + " associativity");
        if (!ax.two_series)
            c.failures.push_back(tag + " [2](x)");
        if (!ap.eq_leading.pass)
            c.failures.push_back(tag + " leading approximation");
        if (!ap.eq_phi.pass)
            c.failures.push_back(tag + " second approximation");
        c.notes.push_back(tag + ": bound " + std::to_string(B) + ", " + std::to_string(F.terms().size()) +
                          " nonzero coefficients");
    }
    c.seconds = seconds_since(t0);
    if (c.seconds >= 10)
        c.failures.push_back("runtime");
    return c;
}

Criterion involutions(const std::vector<RingParams>& params, Contexts& ctxs)
{
    Criterion c{2, "t^2 = id on every monomial and t multiplicative on 1000 random pairs, all 17 groups", {}, {}};
    const auto t0 = Clock::now();
    for (const auto& p : params)
        for (int id = 1; id <= kGroupCount; ++id) {
            std::mt19937_64 rng(1000 * id + p.s * 10 + p.n);
            const auto rep = validate_involution(ctxs.get(p, id).involution(), rng, 1000);
            if (!rep.pass() || rep.samples < 1000)
                c.failures.push_back("G" + std::to_string(id) + at(p));
        }
    c.seconds = seconds_since(t0);
    if (c.seconds >= 60)
        c.failures.push_back("runtime");
    return c;
}

Criterion chi_table(const std::vector<RingParams>& params, Contexts& ctxs)
{
    Criterion c{3, "chi: closed form = trivial-summand count = commuting tuples, all 17 groups", {}, {}};
    const auto t0 = Clock::now();
    for (const auto& p : params)
        for (int id = 1; id <= kGroupCount; ++id) {
            const auto& ctx = ctxs.get(p, id);
            const std::uint64_t f = chi_formula(id, p.s, p.n);
            const std::uint64_t h = chi_cohomology(ctx);
            const std::uint64_t b = chi_bruteforce(ctx.spec(), p.s);
            if (f != h || h != b) {
                std::ostringstream os;
                os << "G" << id << at(p) << ": formula " << f << ", cohomology " << h << ", brute force " << b;
                c.notes.push_back(os.str());
                c.failures.push_back("G" + std::to_string(id) + at(p));
            }
        }
    auto spot = [&](int id, const RingParams& p, std::uint64_t want) {
        const std::uint64_t h = chi_cohomology(ctxs.get(p, id));
        const std::uint64_t b = chi_bruteforce(group_spec(id, p.n), p.s);
        const std::uint64_t f = chi_formula(id, p.s, p.n);
        c.notes.push_back("G" + std::to_string(id) + at(p) + " = " + std::to_string(h) + " (expected " +
                          std::to_string(want) + ")");
        if (h != want || b != want || f != want)
            c.failures.push_back("spot G" + std::to_string(id) + at(p));
    };
    spot(1, params[0], 1024);
    spot(7, params[1], 2104);
    spot(3, params[0], 352);
    if (trivial_summand_size(ctxs.get(params[1], 7)) != 16)
        c.failures.push_back("trivial summand G7" + at(params[1]));
    c.seconds = seconds_since(t0);
    if (c.seconds >= 300)
        c.failures.push_back("runtime");
    return c;
}

Criterion special_bases(const std::vector<RingParams>& params, Contexts& ctxs)
{
    Criterion c{4, "special set {x^w, x^w u, x^w v, x^w uv} has full rank 4^{(n+1)s}", {}, {}};
    const auto t0 = Clock::now();
    for (const auto& p : params)
        for (int id : kSpecialBasisGroups) {
            const auto r = check_special_basis(ctxs.get(p, id));
            if (!r.pass) {
                c.failures.push_back("G" + std::to_string(id) + at(p));
                c.notes.push_back("G" + std::to_string(id) + at(p) + ": " + r.detail + "; " + r.witness.value_or(""));
            }
        }
    c.seconds = seconds_since(t0);
    return c;
}

Criterion criteria(const std::vector<RingParams>& params, Contexts& ctxs)
{
    Criterion c{5, "criterion subspace f3 x1 = f3 y1 = 0, f1 x1 = f2 y1 equals Ker(1+t)", {}, {}};
    const auto t0 = Clock::now();
    for (const auto& p : params)
        for (int id : kSpecialBasisGroups) {
            std::mt19937_64 rng(id);
            for (const auto& r : check_invariance_criterion(ctxs.get(p, id), rng, 1000))
                if (!r.pass) {
                    c.failures.push_back("G" + std::to_string(id) + at(p));
                    c.notes.push_back("G" + std::to_string(id) + at(p) + " " + r.name + ": " + r.detail);
                    break;
                }
        }
    c.seconds = seconds_since(t0);
    return c;
}

Criterion tprime(const std::vector<RingParams>& params, Contexts& ctxs)
{
    Criterion c{6, "T' invariant, independent of Im(1+t), complementary in Ker(1+t), expected size", {}, {}};
    const auto t0 = Clock::now();
    for (const auto& p : params)
        for (int id : kSpecialBasisGroups) {
            bool bad = false;
            for (const auto& r : check_tprime(ctxs.get(p, id)))
                if (!r.pass) {
                    bad = true;
                    c.notes.push_back("G" + std::to_string(id) + at(p) + " " + r.name + ": " + r.detail);
                }
            if (bad)
                c.failures.push_back("G" + std::to_string(id) + at(p));
        }
    c.seconds = seconds_since(t0);
    return c;
}

Criterion goodness(const std::vector<RingParams>& params, Contexts& ctxs)
{
    Criterion c{7, "Ker(1+t) inside Im(1+t) + products of Euler-class generators", {}, {}};
    const auto t0 = Clock::now();
    for (const auto& p : params) {
        for (int id = 1; id <= kGroupCount; ++id) {
            const auto r = check_goodness(ctxs.get(p, id), GoodMode::automatic);
            if (!r.pass)
                c.failures.push_back("G" + std::to_string(id) + "-auto" + at(p));
        }
        for (int id : kSpecialBasisGroups) {
            const auto r = check_goodness(ctxs.get(p, id), GoodMode::listed);
            const std::string tag = "G" + std::to_string(id) + "-listed" + at(p);
            if (id == 4 || id == 9)
                c.notes.push_back(tag + " (reported only): " + (r.pass ? "pass" : "fail") + ", " + r.detail);
            else if (!r.pass) {
                c.failures.push_back(tag);
                c.notes.push_back(tag + ": " + r.detail);
            }
        }
    }
    const auto t1 = Clock::now();
    VerifyOptions opts;
    const RunReport full = verify_all(params[1], opts);
    const double full_s = seconds_since(t1);
    std::ostringstream os;
    os << "full verify_all" << at(params[1]) << ": " << (full.pass() ? "pass" : "fail") << " in " << full_s << " s";
    c.notes.push_back(os.str());
    if (!full.pass())
        c.failures.push_back("verify_all" + at(params[1]));
    if (full_s >= 600)
        c.failures.push_back("runtime");
    c.seconds = seconds_since(t0);
    return c;
}

Criterion negative_controls(const std::vector<RingParams>& params, Contexts& ctxs)
{
    Criterion c{8, "corrupted FGL coefficient, catalog exponent, and generator list are each caught", {}, {}};
    const auto t0 = Clock::now();

    BiSeries F = honda_fgl(2, 32, 32);
    F.flip(2, 2);
    const auto ap = check_fgl_approximations(F, 2);
    if (ap.pass() || !ap.eq_leading.witness)
        c.failures.push_back("fgl");
    else
        c.notes.push_back("FGL x^2y^2 flipped: witness x^" + std::to_string(ap.eq_leading.witness->first) + "y^" +
                          std::to_string(ap.eq_leading.witness->second));

    GroupSpec bad = group_spec(7, params[1].n);
    bad.k = 1;
    VerifyOptions opts;
    opts.samples = 10;
    const GroupReport g = verify_group(bad, params[1], ctxs.fgl(params[1]), opts);
    bool caught = false;
    for (const auto& r : g.checks)
        if (!r.pass && r.witness && r.name == "involution") {
            caught = true;
            c.notes.push_back("G7 with k = 1: t^2 != id at " + *r.witness);
        }
    if (!caught)
        c.failures.push_back("catalog");

    const auto& g3 = ctxs.get(params[0], 3);
    auto gens = good_generators(g3, GoodMode::listed);
    std::erase_if(gens, [](const Generator& x) { return x.label == "u"; });
    const auto r = check_goodness(g3, gens, GoodMode::listed);
    if (r.pass || !r.counterexample || !g3.is_invariant(*r.counterexample))
        c.failures.push_back("generators");
    else
        c.notes.push_back("G3 without u: invariant " + to_string(*r.counterexample) + " outside the good span");
    c.seconds = seconds_since(t0);
    return c;
}

} // namespace

int main()
{
    const std::vector<RingParams> all = {make_ring(2, 1), make_ring(2, 2), make_ring(3, 1)};
    const std::vector<RingParams> small = {all[0], all[1]};
    Contexts ctxs;

    std::vector<Criterion> results;
    results.push_back(fgl_correctness());
    results.push_back(involutions(all, ctxs));
    results.push_back(chi_table(all, ctxs));
    results.push_back(special_bases(small, ctxs));
    results.push_back(criteria(small, ctxs));
    results.push_back(tprime(small, ctxs));
    results.push_back(goodness(small, ctxs));
    results.push_back(negative_controls(small, ctxs));

    std::set<std::string> seen;
    int unexpected = 0;
    for (const auto& c : results) {
        std::cout << (c.failures.empty() ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " ("
                  << c.seconds << " s)\n";
        for (const auto& f : c.failures) {
            const std::string key = std::to_string(c.id) + ":" + f;
            const bool documented = kDocumented.count(key) > 0;
            seen.insert(key);
            unexpected += !documented;
            std::cout << "      failed " << f << (documented ? " [documented n = 1 degeneracy]" : " [UNEXPECTED]")
                      << "\n";
        }
        for (const auto& n : c.notes)
            std::cout << "      " << n << "\n";
    }
    int vanished = 0;
    for (const auto& k : kDocumented)
        if (!seen.count(k)) {
            std::cout << "documented failure no longer occurs: " << k << "\n";
            ++vanished;
        }
    std::cout << "documented failures: " << kDocumented.size() - vanished << ", unexpected: " << unexpected << "\n";
    return unexpected == 0 && vanished == 0 ? 0 : 1;
}
