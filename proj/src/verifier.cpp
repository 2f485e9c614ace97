#include "mk/verifier.hpp"

#include "mk/bits.hpp"
#include "mk/error.hpp"

#include <algorithm>
#include <sstream>

namespace mk {

namespace {

std::uint64_t p2(int e) { return std::uint64_t{1} << e; }

std::string power_label(const char* base, std::uint64_t e)
{
    if (e == 1)
        return base;
    return std::string(base) + "^" + std::to_string(e);
}

// Short rendering for details; witnesses carry the full canonical string.
std::string brief(const RingElement& g, std::size_t max_terms = 6)
{
    const auto terms = g.terms();
    if (terms.size() <= max_terms)
        return to_string(g);
    std::ostringstream os;
    for (std::size_t k = 0; k < max_terms; ++k)
        os << (k ? " + " : "") << "u^" << terms[k].first << "*v^" << terms[k].second;
    os << " + ... (" << terms.size() << " terms)";
    return os.str();
}

CheckResult passed(std::string name, std::string detail)
{
    return CheckResult{std::move(name), true, std::move(detail), std::nullopt};
}

CheckResult failed(std::string name, std::string detail, std::optional<std::string> witness)
{
    return CheckResult{std::move(name), false, std::move(detail), std::move(witness)};
}

std::vector<RingElement> powers(const RingElement& g, std::size_t count)
{
    std::vector<RingElement> out;
    out.reserve(count);
    out.push_back(RingElement::one(g.params()));
    for (std::size_t k = 1; k < count; ++k)
        out.push_back(out.back() * g);
    return out;
}

void require_special_group(int id, const char* what)
{
    if (!has_special_basis(id))
        throw ParameterError(std::string(what) + " is defined only for G3, G4, G7, G8, G9, G11 (got G" +
                             std::to_string(id) + ")");
}

RingElement random_in(const std::vector<RingElement>& basis, const RingParams& p, std::mt19937_64& rng)
{
    RingElement g(p);
    std::uint64_t word = 0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        if (k % 64 == 0)
            word = rng();
        if ((word >> (k % 64)) & 1U)
            g += basis[k];
    }
    return g;
}

} // namespace

GroupContext::GroupContext(const GroupSpec& spec, const RingParams& p) : GroupContext(spec, p, ring_fgl(p)) {}

GroupContext::GroupContext(const GroupSpec& spec, const RingParams& p, const BiSeries& F)
    : spec_(spec), params_(p), fgl_(F), t_(make_involution(spec, p, F)), trace_(t_.trace_matrix()),
      image_(image(p, trace_)), xbar1_(u() + t_.image_u()), xbar2_(u() * t_.image_u()),
      ybar1_(v() + t_.image_v()), ybar2_(v() * t_.image_v())
{
}

const Subspace& GroupContext::invariants() const
{
    if (!kernel_)
        kernel_ = std::make_unique<Subspace>(kernel(params_, trace_));
    return *kernel_;
}

RingElement GroupContext::euler(std::int64_t a, std::int64_t b) const
{
    return euler_pullback(a, b, params_, fgl_, spec_.modulus());
}

// ---------------------------------------------------------------------------
// Special basis

OmegaRanges special_basis_ranges(int group_id, int s, int n)
{
    require_special_group(group_id, "special basis");
    switch (group_id) {
    case 3:
        return {1, p2(n * s - 1), p2(s), p2((n + 1) * s - 1)};
    case 4:
    case 9:
        return {p2(s), p2(n * s - 1), p2(s), p2(n * s - 1)};
    default:
        return {p2(n * s), p2(s - 1), p2(n * s), p2(s - 1)};
    }
}

SpecialBasis::SpecialBasis(const GroupContext& ctx, OmegaRanges ranges)
    : params_(ctx.params()), ranges_(ranges), u_(ctx.u()), v_(ctx.v())
{
    const auto x1 = powers(ctx.xbar1(), ranges.i);
    const auto x2 = powers(ctx.xbar2(), ranges.j);
    const auto y1 = powers(ctx.ybar1(), ranges.k);
    const auto y2 = powers(ctx.ybar2(), ranges.l);
    std::vector<RingElement> ys;
    ys.reserve(ranges.k * ranges.l);
    for (std::size_t k = 0; k < ranges.k; ++k)
        for (std::size_t l = 0; l < ranges.l; ++l)
            ys.push_back(y1[k] * y2[l]);
    for (std::size_t i = 0; i < ranges.i; ++i)
        for (std::size_t j = 0; j < ranges.j; ++j) {
            const RingElement xs = x1[i] * x2[j];
            for (std::size_t k = 0; k < ranges.k; ++k)
                for (std::size_t l = 0; l < ranges.l; ++l) {
                    exponents_.push_back({i, j, k, l});
                    omega_.push_back(xs * ys[k * ranges.l + l]);
                }
        }
    const RingElement uv = u_ * v_;
    elements_.reserve(4 * omega_.size());
    elements_.insert(elements_.end(), omega_.begin(), omega_.end());
    for (const auto& w : omega_)
        elements_.push_back(w * u_);
    for (const auto& w : omega_)
        elements_.push_back(w * v_);
    for (const auto& w : omega_)
        elements_.push_back(w * uv);
}

std::string SpecialBasis::label(std::size_t idx) const
{
    const std::size_t W = omega_.size();
    const auto& e = exponents_.at(idx % W);
    std::string out;
    const char* names[4] = {"xbar1", "xbar2", "ybar1", "ybar2"};
    for (int q = 0; q < 4; ++q)
        if (e[q]) {
            if (!out.empty())
                out += "*";
            out += power_label(names[q], e[q]);
        }
    static const char* coset[4] = {"", "u", "v", "u*v"};
    const std::size_t c = idx / W;
    if (c) {
        if (!out.empty())
            out += "*";
        out += coset[c];
    }
    return out.empty() ? "1" : out;
}

CheckResult SpecialBasis::verify()
{
    const std::string name = "special-basis";
    std::ostringstream head;
    head << "|S| = " << size() << ", dim = " << params_.dim << ", ranges i<" << ranges_.i << " j<" << ranges_.j
         << " k<" << ranges_.k << " l<" << ranges_.l;
    auto tracker = std::make_shared<TrackedEchelon>(params_.dim, size());
    std::vector<std::uint64_t> buf(bits::words_for(params_.dim));
    for (std::size_t idx = 0; idx < size(); ++idx) {
        to_coordinates(elements_[idx], buf);
        if (auto dep = tracker->insert(buf, idx)) {
            std::ostringstream w;
            std::size_t shown = 0, total = bits::popcount(*dep);
            for (std::size_t b = bits::find_next(*dep, 0); b != bits::npos; b = bits::find_next(*dep, b + 1)) {
                if (shown == 8) {
                    w << " + ...";
                    break;
                }
                w << (shown++ ? " + " : "") << label(b);
            }
            w << " = 0";
            return failed(name, head.str() + "; dependency among " + std::to_string(total) + " elements",
                          w.str());
        }
    }
    if (size() != params_.dim) {
        for (std::size_t m = 0; m < params_.dim; ++m) {
            to_coordinates(RingElement::monomial(params_, m / params_.M, m % params_.M), buf);
            if (!tracker->coordinates(buf))
                return failed(name, head.str() + "; independent but not spanning",
                              to_string(RingElement::monomial(params_, m / params_.M, m % params_.M)));
        }
    }
    tracker_ = std::move(tracker);
    return passed(name, head.str() + "; rank " + std::to_string(size()));
}

Decomposition SpecialBasis::decompose(const RingElement& g) const
{
    if (!tracker_)
        throw AlgebraError("decompose: special basis has not been verified");
    check_same_ring(params_, g.params(), "decompose");
    const auto coords = tracker_->coordinates(to_coordinates(g));
    if (!coords)
        throw AlgebraError("decompose: element outside the span of the special basis");
    const std::size_t W = omega_.size();
    Decomposition d{{RingElement(params_), RingElement(params_), RingElement(params_), RingElement(params_)}, {}};
    for (auto& c : d.coords)
        c.assign(bits::words_for(W), 0);
    for (std::size_t b = bits::find_next(*coords, 0); b != bits::npos; b = bits::find_next(*coords, b + 1)) {
        const std::size_t c = b / W, w = b % W;
        bits::flip(d.coords[c], w);
        d.f[c] += omega_[w];
    }
    return d;
}

RingElement SpecialBasis::assemble(const Decomposition& d) const
{
    return d.f[0] + d.f[1] * u_ + d.f[2] * v_ + d.f[3] * (u_ * v_);
}

CheckResult check_special_basis(const GroupContext& ctx, const OmegaRanges& ranges, SpecialBasis* out)
{
    SpecialBasis basis(ctx, ranges);
    CheckResult r = basis.verify();
    if (out)
        *out = std::move(basis);
    return r;
}

CheckResult check_special_basis(const GroupContext& ctx)
{
    const auto& p = ctx.params();
    return check_special_basis(ctx, special_basis_ranges(ctx.spec().id, p.s, p.n));
}

// ---------------------------------------------------------------------------
// Invariance criterion

Subspace criterion_subspace(const GroupContext& ctx, const SpecialBasis& basis)
{
    if (!basis.verified())
        throw AlgebraError("criterion: special basis has not been verified");
    const auto& p = ctx.params();
    const std::size_t W = basis.omega_count();
    const auto& omega = basis.omega_monomials();
    const auto& elems = basis.elements();
    Subspace C(p);
    for (std::size_t w = 0; w < W; ++w)
        C.insert(elems[w]);

    // u- and v-parts: f1 xbar1 + f2 ybar1 = 0.
    BitMatrix m12(2 * W, p.dim);
    for (std::size_t w = 0; w < W; ++w) {
        to_coordinates(omega[w] * ctx.xbar1(), m12.row(w));
        to_coordinates(omega[w] * ctx.ybar1(), m12.row(W + w));
    }
    for (const auto& c : left_kernel(m12)) {
        RingElement g(p);
        for (std::size_t b = bits::find_next(c, 0); b != bits::npos; b = bits::find_next(c, b + 1))
            g += elems[W + b];
        C.insert(g);
    }

    // uv-part: f3 xbar1 = f3 ybar1 = 0.
    BitMatrix m3(W, 2 * p.dim);
    std::vector<std::uint64_t> buf(bits::words_for(p.dim));
    for (std::size_t w = 0; w < W; ++w) {
        to_coordinates(omega[w] * ctx.xbar1(), buf);
        for (std::size_t b = bits::find_next(buf, 0); b != bits::npos; b = bits::find_next(buf, b + 1))
            m3.set(w, b, true);
        to_coordinates(omega[w] * ctx.ybar1(), buf);
        for (std::size_t b = bits::find_next(buf, 0); b != bits::npos; b = bits::find_next(buf, b + 1))
            m3.set(w, p.dim + b, true);
    }
    for (const auto& c : left_kernel(m3)) {
        RingElement g(p);
        for (std::size_t b = bits::find_next(c, 0); b != bits::npos; b = bits::find_next(c, b + 1))
            g += elems[3 * W + b];
        C.insert(g);
    }
    return C;
}

bool criterion_holds(const GroupContext& ctx, const SpecialBasis& basis, const RingElement& g)
{
    const Decomposition d = basis.decompose(g);
    return (d.f[3] * ctx.xbar1()).is_zero() && (d.f[3] * ctx.ybar1()).is_zero() &&
           d.f[1] * ctx.xbar1() == d.f[2] * ctx.ybar1();
}

std::vector<CheckResult> check_invariance_criterion(const GroupContext& ctx, std::mt19937_64& rng,
                                                    std::size_t samples)
{
    const auto& p = ctx.params();
    SpecialBasis basis(ctx, special_basis_ranges(ctx.spec().id, p.s, p.n));
    const CheckResult b = basis.verify();
    if (!b.pass)
        return {failed("invariance-criterion", "special basis unavailable: " + b.detail, b.witness)};

    std::vector<CheckResult> out;
    const Subspace C = criterion_subspace(ctx, basis);
    const Subspace& K = ctx.invariants();
    std::ostringstream head;
    head << "dim C = " << C.rank() << ", dim Ker(1+t) = " << K.rank();
    if (auto w = first_outside(C, K))
        out.push_back(failed("invariance-criterion", head.str() + "; criterion admits a non-invariant",
                             to_string(*w)));
    else if (auto w2 = first_outside(K, C))
        out.push_back(failed("invariance-criterion", head.str() + "; invariant rejected by the criterion",
                             to_string(*w2)));
    else
        out.push_back(passed("invariance-criterion", head.str() + "; subspaces equal"));

    const auto kbasis = K.basis();
    const std::size_t half = samples / 2;
    for (std::size_t k = 0; k < samples; ++k) {
        const RingElement g = k < half ? random_element(p, rng) : random_in(kbasis, p, rng);
        const bool crit = criterion_holds(ctx, basis, g);
        const bool inv = ctx.is_invariant(g);
        if (crit != inv) {
            out.push_back(failed("invariance-criterion-samples",
                                 "sample " + std::to_string(k) + ": criterion " + (crit ? "holds" : "fails") +
                                     ", invariance " + (inv ? "holds" : "fails"),
                                 to_string(g)));
            return out;
        }
    }
    out.push_back(passed("invariance-criterion-samples", std::to_string(half) + " random and " +
                                                             std::to_string(samples - half) +
                                                             " invariant samples agree"));
    return out;
}

// ---------------------------------------------------------------------------
// Congruences

RingElement power_identity_rhs(const RingElement& root, const RingElement& sum, const RingElement& prod, int m)
{
    const std::uint64_t top = p2(m);
    RingElement r = root * pow(sum, top - 1);
    for (int i = 1; i <= m; ++i)
        r += pow(sum, top - p2(i)) * pow(prod, p2(i - 1));
    return r;
}

std::vector<Congruence> stated_congruences(const GroupContext& ctx)
{
    const auto& p = ctx.params();
    const int id = ctx.spec().id;
    require_special_group(id, "congruences");
    const int s = p.s, n = p.n;
    const auto& x1 = ctx.xbar1();
    const auto& x2 = ctx.xbar2();
    const auto& y1 = ctx.ybar1();
    const auto& y2 = ctx.ybar2();
    const RingElement u = ctx.u(), v = ctx.v(), zero(p);
    const std::uint64_t S = p2(s), NS = p2(n * s);
    const std::string sS = std::to_string(S), sNS = std::to_string(NS), sH = std::to_string(p2(s - 1));

    std::vector<Congruence> out;
    auto exact = [&](std::string name, RingElement l, RingElement r) {
        out.push_back({std::move(name), std::move(l), std::move(r), false});
    };
    auto modim = [&](std::string name, RingElement l, RingElement r) {
        out.push_back({std::move(name) + " mod Im(1+t)", std::move(l), std::move(r), true});
    };
    const RingElement xu = pow(x1, NS - 1) * u;
    const RingElement yv = pow(y1, NS - 1) * v;
    const std::string xuL = "xbar1^" + std::to_string(NS - 1) + "*u";
    const std::string yvL = "ybar1^" + std::to_string(NS - 1) + "*v";

    switch (id) {
    case 3: {
        const std::uint64_t top = p2((n + 1) * s - 1), half = p2(n * s - 1);
        exact("xbar1 = 0", x1, zero);
        exact("ybar1^" + sS + " = 0", pow(y1, S), zero);
        exact("ybar2^" + std::to_string(top) + " = 0", pow(y2, top), zero);
        const RingElement vy = v * pow(y1, S - 1);
        const std::string vyL = "v*ybar1^" + std::to_string(S - 1);
        modim("xbar2^" + std::to_string(half) + " = " + vyL, pow(x2, half), vy);
        modim("v^" + sS + " = ybar2^" + sH + " + " + vyL, pow(v, S), pow(y2, p2(s - 1)) + vy);
        break;
    }
    case 4:
    case 9: {
        exact("xbar1^" + sS + " = 0", pow(x1, S), zero);
        exact("ybar1^" + sS + " = 0", pow(y1, S), zero);
        const std::string e = std::to_string(S - 1);
        modim("u^" + sS + " = u*xbar1^" + e + " + xbar2^" + sH, pow(u, S), u * pow(x1, S - 1) + pow(x2, p2(s - 1)));
        modim("v^" + sS + " = v*ybar1^" + e + " + ybar2^" + sH, pow(v, S), v * pow(y1, S - 1) + pow(y2, p2(s - 1)));
        break;
    }
    default: {
        exact("xbar1^" + sNS + " = 0", pow(x1, NS), zero);
        exact("ybar1^" + sNS + " = 0", pow(y1, NS), zero);
        const RingElement x2h = pow(x2, p2(s - 1)), y2h = pow(y2, p2(s - 1));
        const RingElement fuv = substitute(ctx.fgl(), pow(u, NS), pow(v, NS));
        const std::string fuvL = "F(u^" + sNS + ", v^" + sNS + ")";
        if (id == 7) {
            modim("xbar2^" + sH + " = 0", x2h, zero);
            modim("ybar2^" + sH + " = " + xuL, y2h, xu);
            modim("u^" + sNS + " = " + xuL, pow(u, NS), xu);
        } else if (id == 8) {
            const std::string hns = std::to_string(p2(n * s - 1));
            modim("xbar2^" + hns + " = 0", pow(x2, p2(n * s - 1)), zero);
            modim("ybar2^" + hns + " = 0", pow(y2, p2(n * s - 1)), zero);
            modim("xbar2^" + sH + " = " + xuL, x2h, xu);
            modim("ybar2^" + sH + " = " + xuL + " + " + yvL, y2h, xu + yv);
            modim("u^" + sNS + " = " + xuL, pow(u, NS), xu);
            modim(fuvL + " = " + xuL + " + " + yvL, fuv, xu + yv);
        } else {
            modim("xbar2^" + sH + " = " + yvL, x2h, yv);
            modim("ybar2^" + sH + " = " + xuL + " + " + yvL, y2h, xu + yv);
            modim("v^" + sNS + " = " + yvL, pow(v, NS), yv);
            modim(fuvL + " = " + xuL + " + " + yvL, fuv, xu + yv);
        }
        break;
    }
    }
    return out;
}

std::vector<CheckResult> check_congruences(const GroupContext& ctx)
{
    const auto& p = ctx.params();
    std::vector<CheckResult> out;
    for (const auto& c : stated_congruences(ctx)) {
        const RingElement residual = c.lhs + c.rhs;
        const bool ok = c.modulo_trace ? ctx.trace_image().contains(residual) : residual.is_zero();
        const std::string name = "congruence: " + c.name;
        if (ok)
            out.push_back(passed(name, c.modulo_trace ? "difference lies in Im(1+t)" : "exact"));
        else
            out.push_back(failed(name, "residual " + brief(residual), to_string(residual)));
    }

    // The two readings of the vanishing line for G9 and G11.
    const int id = ctx.spec().id;
    if (id == 9 || id == 11) {
        const std::uint64_t S = p2(p.s), NS = p2(p.n * p.s);
        auto vanish = [&](std::uint64_t e) {
            return pow(ctx.xbar1(), e).is_zero() && pow(ctx.ybar1(), e).is_zero();
        };
        std::ostringstream d;
        d << "xbar1^e = ybar1^e = 0 for e = " << S << ": " << (vanish(S) ? "yes" : "no") << "; for e = " << NS
          << ": " << (vanish(NS) ? "yes" : "no");
        out.push_back(CheckResult{"vanishing-readings", vanish(id == 9 ? S : NS), d.str(), std::nullopt});
    }

    // u^{2^m} and v^{2^m} through the quadratic relations r^2 = r*sum + prod.
    const int top = (p.n + 1) * p.s;
    struct Root {
        const char* name;
        RingElement r;
        const RingElement& sum;
        const RingElement& prod;
        const RingElement& other_sum;
        const RingElement& other_prod;
    };
    const Root roots[2] = {{"u", ctx.u(), ctx.xbar1(), ctx.xbar2(), ctx.ybar1(), ctx.ybar2()},
                           {"v", ctx.v(), ctx.ybar1(), ctx.ybar2(), ctx.xbar1(), ctx.xbar2()}};
    for (const auto& root : roots) {
        const std::string name = std::string("power-identity-") + root.name;
        std::optional<CheckResult> fail;
        std::vector<int> crossed;
        RingElement lhs = root.r;
        for (int m = 1; m <= top; ++m) {
            lhs = square(lhs);
            const RingElement rhs = power_identity_rhs(root.r, root.sum, root.prod, m);
            if (!fail && !(lhs == rhs))
                fail = failed(name, "m = " + std::to_string(m), to_string(lhs + rhs));
            if (lhs == power_identity_rhs(root.r, root.other_sum, root.other_prod, m))
                crossed.push_back(m);
        }
        std::ostringstream d;
        d << "m = 1.." << top << "; with the other variable's sum and product the identity holds for m in {";
        for (std::size_t k = 0; k < crossed.size(); ++k)
            d << (k ? "," : "") << crossed[k];
        d << "}";
        if (fail) {
            fail->detail += "; " + d.str();
            out.push_back(*fail);
        } else {
            out.push_back(passed(name, d.str()));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// T'

std::vector<RingElement> tprime_elements(const GroupContext& ctx)
{
    const auto& p = ctx.params();
    const int id = ctx.spec().id;
    require_special_group(id, "T'");
    const int s = p.s, n = p.n;
    std::size_t ri, rj;
    std::uint64_t e;
    bool u_plain = false; // G3: the u-part carries no xbar1 factor
    if (id == 3) {
        ri = p2(n * s - 1);
        rj = p2((n + 1) * s - 1);
        e = p2(s) - 1;
        u_plain = true;
    } else if (id == 4 || id == 9) {
        ri = rj = p2(n * s - 1);
        e = p2(s) - 1;
    } else {
        ri = rj = p2(s - 1);
        e = p2(n * s) - 1;
    }
    const RingElement u = ctx.u(), v = ctx.v();
    const RingElement cu = u_plain ? u : pow(ctx.xbar1(), e) * u;
    const RingElement cv = pow(ctx.ybar1(), e) * v;
    const RingElement cuv = (u_plain ? RingElement::one(p) : pow(ctx.xbar1(), e)) * pow(ctx.ybar1(), e) * u * v;
    const auto x2 = powers(ctx.xbar2(), ri);
    const auto y2 = powers(ctx.ybar2(), rj);
    std::vector<RingElement> out;
    out.reserve(4 * ri * rj);
    for (const RingElement* c : {static_cast<const RingElement*>(nullptr), &cu, &cv, &cuv})
        for (std::size_t i = 0; i < ri; ++i)
            for (std::size_t j = 0; j < rj; ++j)
                out.push_back(c ? x2[i] * y2[j] * *c : x2[i] * y2[j]);
    return out;
}

std::uint64_t tprime_expected_count(int group_id, int s, int n)
{
    require_special_group(group_id, "T'");
    if (group_id == 3)
        return p2((2 * n + 1) * s);
    if (group_id == 4 || group_id == 9)
        return p2(2 * n * s);
    return p2(2 * s);
}

std::vector<CheckResult> check_tprime(const GroupContext& ctx)
{
    const auto& p = ctx.params();
    const auto elems = tprime_elements(ctx);
    std::vector<CheckResult> out;

    for (const auto& g : elems)
        if (!ctx.is_invariant(g)) {
            out.push_back(failed("tprime-invariant", "element of T' moved by t", to_string(g)));
            break;
        }
    if (out.empty())
        out.push_back(passed("tprime-invariant", std::to_string(elems.size()) + " elements fixed by t"));

    Subspace T = span_of(p, elems);
    Subspace sum = ctx.trace_image();
    std::optional<RingElement> meet;
    for (const auto& g : elems)
        if (!sum.insert(g) && !meet)
            meet = g;
    const std::size_t im = ctx.trace_image().rank();
    if (T.rank() + im != sum.rank())
        out.push_back(failed("tprime-independent-of-image",
                             "dim T' = " + std::to_string(T.rank()) + ", dim Im = " + std::to_string(im) +
                                 ", dim (T' + Im) = " + std::to_string(sum.rank()),
                             meet ? std::optional<std::string>(to_string(*meet)) : std::nullopt));
    else
        out.push_back(passed("tprime-independent-of-image", "span(T') meets Im(1+t) in 0"));

    const std::size_t ker = ctx.invariant_dim();
    if (sum.rank() == ker)
        out.push_back(passed("tprime-complement", "dim T' + dim Im = " + std::to_string(sum.rank()) +
                                                      " = dim Ker(1+t)"));
    else
        out.push_back(failed("tprime-complement",
                             "dim (T' + Im) = " + std::to_string(sum.rank()) + ", dim Ker(1+t) = " +
                                 std::to_string(ker),
                             std::nullopt));

    const std::uint64_t want = tprime_expected_count(ctx.spec().id, p.s, p.n);
    const std::string d = "|T'| = " + std::to_string(elems.size()) + ", rank " + std::to_string(T.rank()) +
                          ", expected " + std::to_string(want);
    if (elems.size() == want && T.rank() == want)
        out.push_back(passed("tprime-count", d));
    else
        out.push_back(failed("tprime-count", d, std::nullopt));
    return out;
}

// ---------------------------------------------------------------------------
// Goodness

std::string to_string(GoodMode m) { return m == GoodMode::listed ? "paper" : "auto"; }

std::vector<Generator> good_generators(const GroupContext& ctx, GoodMode mode)
{
    const auto& p = ctx.params();
    const int id = ctx.spec().id;
    if (mode == GoodMode::listed && has_special_basis(id)) {
        const std::uint64_t S = p2(p.s), NS = p2(p.n * p.s);
        const RingElement u = ctx.u(), v = ctx.v();
        std::vector<Generator> g{{"xbar2", ctx.xbar2()}, {"ybar2", ctx.ybar2()}};
        auto fuv = [&] {
            return Generator{"F(u^" + std::to_string(NS) + ", v^" + std::to_string(NS) + ")",
                             substitute(ctx.fgl(), pow(u, NS), pow(v, NS))};
        };
        switch (id) {
        case 3:
            g.push_back({"u", u});
            g.push_back({power_label("v", S), pow(v, S)});
            break;
        case 4:
        case 9:
            g.push_back({power_label("u", S), pow(u, S)});
            g.push_back({power_label("v", S), pow(v, S)});
            break;
        case 7:
            g.push_back({power_label("u", NS), pow(u, NS)});
            g.push_back({power_label("v", NS), pow(v, NS)});
            break;
        case 8:
            g.push_back({power_label("u", NS), pow(u, NS)});
            g.push_back(fuv());
            break;
        default:
            g.push_back({power_label("v", NS), pow(v, NS)});
            g.push_back(fuv());
            break;
        }
        return g;
    }

    // Euler classes of the line bundles fixed by t and of the plane bundles
    // induced from every character.
    std::vector<Generator> out;
    const std::int64_t N = ctx.spec().modulus();
    for (std::int64_t a = 0; a < N; ++a)
        for (std::int64_t b = 0; b < N; ++b) {
            if (a == 0 && b == 0)
                continue;
            const std::string tag = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
            const RingElement e = ctx.euler(a, b);
            if (act_on_character(ctx.spec(), {a, b}) == Character{a, b})
                out.push_back({"e" + tag, e});
            out.push_back({"e" + tag + "*t(e" + tag + ")", e * ctx.involution().apply(e)});
        }
    return out;
}

Subspace good_span(const GroupContext& ctx, const std::vector<Generator>& gens, std::size_t* used)
{
    std::vector<RingElement> values;
    values.reserve(gens.size());
    for (const auto& g : gens)
        values.push_back(g.value);
    ClosureStats stats;
    Subspace W = multiplicative_closure(ctx.params(), values, &ctx.trace_image(), &stats);
    if (used)
        *used = stats.generators_used;
    return W;
}

GoodnessReport check_goodness(const GroupContext& ctx, GoodMode mode)
{
    return check_goodness(ctx, good_generators(ctx, mode), mode);
}

GoodnessReport check_goodness(const GroupContext& ctx, const std::vector<Generator>& gens, GoodMode mode)
{
    GoodnessReport rep;
    rep.group = ctx.spec().id;
    rep.mode = mode;
    rep.image_dim = ctx.trace_image().rank();
    rep.kernel_dim = ctx.invariant_dim();
    for (const auto& g : gens) {
        rep.generators.push_back(g.label);
        if (!ctx.is_invariant(g.value)) {
            rep.pass = false;
            rep.detail = "generator " + g.label + " is not invariant";
            rep.counterexample = g.value;
            return rep;
        }
    }
    const Subspace W = good_span(ctx, gens, &rep.generators_used);
    rep.good_span_dim = W.rank();
    // Invariant generators and Im(1+t) keep the closure inside Ker(1+t).
    rep.pass = rep.good_span_dim == rep.kernel_dim;
    std::ostringstream d;
    d << gens.size() << " generators (" << rep.generators_used << " needed), dim Im = " << rep.image_dim
      << ", dim good span = " << rep.good_span_dim << ", dim Ker = " << rep.kernel_dim;
    if (!rep.pass)
        rep.counterexample = first_outside(ctx.invariants(), W);
    rep.detail = d.str();
    return rep;
}

// ---------------------------------------------------------------------------
// Euler characteristic

std::uint64_t chi_formula(int group_id, int s, int n)
{
    if (group_id < 1 || group_id > kGroupCount)
        throw ParameterError("group id out of range: " + std::to_string(group_id));
    if (s < 1 || n < 1)
        throw ParameterError("chi_formula needs s >= 1 and n >= 1");
    if ((2 * n + 3) * s > 62)
        throw InfeasibleSize("chi_formula: value does not fit in 64 bits");
    const std::uint64_t top = p2(2 * (n + 1) * s - 1);
    switch (group_id) {
    case 1:
        return p2((2 * n + 3) * s);
    case 2:
    case 4:
    case 9:
        return top - p2(2 * n * s - 1) + p2((2 * n + 1) * s);
    case 3:
    case 10:
        return 3 * top - p2((2 * n + 1) * s - 1);
    case 13:
    case 16:
        return top - p2((n + 2) * s - 1) + p2((n + 3) * s);
    case 14:
    case 15:
    case 17:
        return top - p2((n + 1) * s - 1) + p2((n + 2) * s);
    default: // 5, 6, 7, 8, 11, 12
        return top - p2(2 * s - 1) + p2(3 * s);
    }
}

std::uint64_t trivial_summand_size(const GroupContext& ctx)
{
    return ctx.invariant_dim() - ctx.trace_image().rank();
}

std::uint64_t chi_cohomology(const GroupContext& ctx)
{
    const std::uint64_t x = trivial_summand_size(ctx);
    return (ctx.params().dim - x) / 2 + p2(ctx.params().s) * x;
}

// ---------------------------------------------------------------------------
// Drivers

unsigned parse_check(const std::string& name)
{
    static const std::pair<const char*, unsigned> names[] = {
        {"involution", kCheckInvolution}, {"basis", kCheckBasis},   {"criterion", kCheckCriterion},
        {"congruences", kCheckCongruences}, {"tprime", kCheckTprime}, {"goodness", kCheckGoodness},
        {"chi", kCheckChi},               {"all", kCheckAll}};
    for (const auto& [n, f] : names)
        if (name == n)
            return f;
    throw ParameterError("unknown check: " + name);
}

bool GroupReport::pass() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

bool RunReport::pass() const noexcept
{
    return std::all_of(groups.begin(), groups.end(), [](const GroupReport& g) { return g.pass(); });
}

GroupReport verify_group(const GroupSpec& spec, const RingParams& p, const VerifyOptions& opts)
{
    return verify_group(spec, p, ring_fgl(p), opts);
}

GroupReport verify_group(const GroupSpec& spec, const RingParams& p, const BiSeries& F, const VerifyOptions& opts)
{
    GroupReport rep{p, spec, {}, {}};
    std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(spec.id), static_cast<std::uint64_t>(p.s),
                      static_cast<std::uint64_t>(p.n)};
    std::mt19937_64 rng(seq);
    auto add = [&](std::vector<CheckResult> rs) {
        for (auto& r : rs)
            rep.checks.push_back(std::move(r));
    };

    const GroupContext ctx(spec, p, F);

    if (opts.checks & kCheckInvolution) {
        if (auto err = validate_spec(spec))
            rep.checks.push_back(failed("catalog", *err, describe(spec)));
        else
            rep.checks.push_back(passed("catalog", describe(spec)));
    }
    const InvolutionCheck inv =
        validate_involution(ctx.involution(), rng, (opts.checks & kCheckInvolution) ? opts.samples : 0);
    if (opts.checks & kCheckInvolution || !inv.square_is_identity) {
        std::ostringstream d;
        d << "t^2 = id: " << (inv.square_is_identity ? "yes" : "no") << ", t(1) = 1: " << (inv.unital ? "yes" : "no")
          << ", multiplicative on " << inv.samples << " random pairs: " << (inv.multiplicative ? "yes" : "no");
        rep.checks.push_back(CheckResult{"involution", inv.pass(), d.str(), inv.witness});
    }
    if (!inv.square_is_identity)
        return rep; // nothing downstream is meaningful without an involution

    if (opts.checks & kCheckInvolution) {
        const BitMatrix sq = multiply(ctx.trace(), ctx.trace());
        if (sq.is_zero())
            rep.checks.push_back(passed("trace-square-zero", "(1+t)^2 = 0, so Im(1+t) lies in Ker(1+t)"));
        else
            rep.checks.push_back(failed("trace-square-zero", "(1+t)^2 != 0", std::nullopt));

        const auto& t = ctx.involution();
        std::optional<CheckResult> bad;
        const std::size_t n = opts.samples;
        for (std::size_t k = 0; k < n && !bad; ++k) {
            const RingElement r = random_element(p, rng);
            const RingElement g = r * t.apply(r) + t.trace(random_element(p, rng)); // invariant
            const RingElement h = random_element(p, rng);
            if (!(g * t.trace(h) == t.trace(g * h)))
                bad = failed("trace-module", "g (1+t)(h) != (1+t)(g h) for invariant g", to_string(g));
        }
        rep.checks.push_back(bad ? *bad
                                 : passed("trace-module", "g (1+t)(h) = (1+t)(g h) on " + std::to_string(n) +
                                                              " invariant g"));
    }

    if (has_special_basis(spec.id)) {
        if (opts.checks & kCheckBasis)
            rep.checks.push_back(check_special_basis(ctx));
        if (opts.checks & kCheckCriterion)
            add(check_invariance_criterion(ctx, rng, opts.samples));
        if (opts.checks & kCheckCongruences)
            add(check_congruences(ctx));
        if (opts.checks & kCheckTprime)
            add(check_tprime(ctx));
    }

    if (opts.checks & kCheckGoodness) {
        const GoodMode mode = has_special_basis(spec.id) ? opts.mode : GoodMode::automatic;
        const GoodnessReport g = check_goodness(ctx, mode);
        std::string detail = to_string(mode) + " mode: " + g.detail;
        if (mode != opts.mode)
            detail += " (no hand-picked list for this group)";
        rep.checks.push_back(CheckResult{"goodness", g.pass, detail,
                                         g.counterexample ? std::optional<std::string>(to_string(*g.counterexample))
                                                          : std::nullopt});
        if (mode == GoodMode::automatic && has_special_basis(spec.id)) {
            const Subspace W = good_span(ctx, good_generators(ctx, GoodMode::automatic));
            std::optional<std::string> missing;
            for (const auto& pg : good_generators(ctx, GoodMode::listed))
                if (!W.contains(pg.value) && !missing)
                    missing = pg.label;
            if (missing)
                rep.checks.push_back(failed("goodness-auto-contains-listed",
                                            "listed generator " + *missing + " outside the auto-mode span",
                                            std::nullopt));
            else
                rep.checks.push_back(
                    passed("goodness-auto-contains-listed", "every listed generator lies in the auto-mode span"));
        }
    }

    if (opts.checks & kCheckChi) {
        rep.chi.formula = chi_formula(spec.id, p.s, p.n);
        rep.chi.cohomology = chi_cohomology(ctx);
        if (p.n <= opts.chi_guard.max_n && p.s <= opts.chi_guard.max_s)
            rep.chi.bruteforce = chi_bruteforce(spec, p.s, opts.chi_guard);
        std::ostringstream d;
        d << "formula " << *rep.chi.formula << ", cohomology " << *rep.chi.cohomology << " (trivial summand "
          << trivial_summand_size(ctx) << "), brute force ";
        if (rep.chi.bruteforce)
            d << *rep.chi.bruteforce;
        else
            d << "skipped (size guard)";
        const bool ok = *rep.chi.formula == *rep.chi.cohomology &&
                        (!rep.chi.bruteforce || *rep.chi.bruteforce == *rep.chi.formula);
        rep.checks.push_back(CheckResult{"chi", ok, d.str(), std::nullopt});
    }
    return rep;
}

RunReport verify_all(const RingParams& p, const VerifyOptions& opts)
{
    RunReport rep{p, opts.mode, opts.seed, {}};
    const BiSeries F = ring_fgl(p);
    std::vector<int> ids = opts.groups;
    if (ids.empty())
        for (int id = 1; id <= kGroupCount; ++id)
            ids.push_back(id);
    for (int id : ids)
        rep.groups.push_back(verify_group(group_spec(id, p.n), p, F, opts));
    return rep;
}

} // namespace mk
