#pragma once

// Decidable per-group checks of the goodness argument for the extensions
// 1 -> C_{2^{n+1}}^2 -> G -> C_2 -> 1 at concrete (s, n).

#include "mk/groups.hpp"
#include "mk/linalg.hpp"
#include "mk/ring.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mk {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    std::optional<std::string> witness;
};

/// Everything derived from one group at one parameter set: the involution,
/// the trace 1 + t, its image, and (lazily) the invariants.
class GroupContext {
public:
    GroupContext(const GroupSpec& spec, const RingParams& p);
    GroupContext(const GroupSpec& spec, const RingParams& p, const BiSeries& F);

    const GroupSpec& spec() const noexcept { return spec_; }
    const RingParams& params() const noexcept { return params_; }
    const BiSeries& fgl() const noexcept { return fgl_; }
    const Involution& involution() const noexcept { return t_; }

    const BitMatrix& trace() const noexcept { return trace_; }
    const Subspace& trace_image() const noexcept { return image_; }
    std::size_t invariant_dim() const noexcept { return params_.dim - image_.rank(); }
    /// Ker(1 + t), computed on first use.
    const Subspace& invariants() const;

    RingElement u() const { return RingElement::gen_u(params_); }
    RingElement v() const { return RingElement::gen_v(params_); }
    const RingElement& xbar1() const noexcept { return xbar1_; } // u + t(u)
    const RingElement& xbar2() const noexcept { return xbar2_; } // u t(u)
    const RingElement& ybar1() const noexcept { return ybar1_; } // v + t(v)
    const RingElement& ybar2() const noexcept { return ybar2_; } // v t(v)

    RingElement euler(std::int64_t a, std::int64_t b) const;
    bool is_invariant(const RingElement& g) const { return involution().trace(g).is_zero(); }

private:
    GroupSpec spec_;
    RingParams params_;
    BiSeries fgl_;
    Involution t_;
    BitMatrix trace_;
    Subspace image_;
    RingElement xbar1_, xbar2_, ybar1_, ybar2_;
    mutable std::unique_ptr<Subspace> kernel_;
};

/// Exclusive bounds on the exponents of xbar1, xbar2, ybar1, ybar2 in the
/// monomials x^omega of the special basis.
struct OmegaRanges {
    std::size_t i = 1, j = 1, k = 1, l = 1;
};

OmegaRanges special_basis_ranges(int group_id, int s, int n);

struct Decomposition {
    std::array<RingElement, 4> f; // g = f0 + f1 u + f2 v + f3 uv
    std::array<BitVec, 4> coords;  // coefficients over the x^omega
};

/// {x^w, x^w u, x^w v, x^w uv}. Elements are ordered coset-major.
class SpecialBasis {
public:
    SpecialBasis(const GroupContext& ctx, OmegaRanges ranges);

    const OmegaRanges& ranges() const noexcept { return ranges_; }
    std::size_t omega_count() const noexcept { return omega_.size(); }
    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<RingElement>& elements() const noexcept { return elements_; }
    const std::vector<RingElement>& omega_monomials() const noexcept { return omega_; }
    std::string label(std::size_t idx) const;

    /// Full rank check (|S| = dim and rank |S|); on failure the witness names
    /// a dependent subfamily.
    CheckResult verify();
    bool verified() const noexcept { return tracker_ != nullptr; }

    Decomposition decompose(const RingElement& g) const;
    RingElement assemble(const Decomposition& d) const;

private:
    RingParams params_;
    OmegaRanges ranges_;
    std::vector<std::array<std::size_t, 4>> exponents_;
    std::vector<RingElement> omega_;
    std::vector<RingElement> elements_;
    RingElement u_, v_;
    std::shared_ptr<TrackedEchelon> tracker_;
};

CheckResult check_special_basis(const GroupContext& ctx, const OmegaRanges& ranges, SpecialBasis* out = nullptr);
CheckResult check_special_basis(const GroupContext& ctx);

/// Subspace {g : f3 xbar1 = f3 ybar1 = 0, f1 xbar1 = f2 ybar1}.
Subspace criterion_subspace(const GroupContext& ctx, const SpecialBasis& basis);
bool criterion_holds(const GroupContext& ctx, const SpecialBasis& basis, const RingElement& g);
std::vector<CheckResult> check_invariance_criterion(const GroupContext& ctx, std::mt19937_64& rng,
                                                    std::size_t samples = 1000);

struct Congruence {
    std::string name;
    RingElement lhs;
    RingElement rhs;
    bool modulo_trace = false; // lhs = rhs exactly, or lhs - rhs in Im(1 + t)
};

std::vector<Congruence> stated_congruences(const GroupContext& ctx);
std::vector<CheckResult> check_congruences(const GroupContext& ctx);

/// u^{2^m} = u x1^{2^m-1} + sum_{i=1}^m x1^{2^m-2^i} x2^{2^{i-1}} for a
/// root r with r^2 = r x1 - x2.
RingElement power_identity_rhs(const RingElement& root, const RingElement& sum, const RingElement& prod, int m);

std::vector<RingElement> tprime_elements(const GroupContext& ctx);
std::uint64_t tprime_expected_count(int group_id, int s, int n);
std::vector<CheckResult> check_tprime(const GroupContext& ctx);

enum class GoodMode { automatic, listed };
std::string to_string(GoodMode m);

struct Generator {
    std::string label;
    RingElement value;
};

std::vector<Generator> good_generators(const GroupContext& ctx, GoodMode mode);

struct GoodnessReport {
    int group = 0;
    GoodMode mode = GoodMode::automatic;
    std::vector<std::string> generators;
    std::size_t kernel_dim = 0;
    std::size_t image_dim = 0;
    std::size_t good_span_dim = 0; // dim (Im(1+t) + closure)
    std::size_t generators_used = 0;
    bool pass = false;
    std::optional<RingElement> counterexample;
    std::string detail;
};

GoodnessReport check_goodness(const GroupContext& ctx, GoodMode mode);
GoodnessReport check_goodness(const GroupContext& ctx, const std::vector<Generator>& gens, GoodMode mode);
/// Span Im(1+t) + products of gens.
Subspace good_span(const GroupContext& ctx, const std::vector<Generator>& gens, std::size_t* used = nullptr);

std::uint64_t chi_formula(int group_id, int s, int n);
/// (4^{(n+1)s} - x)/2 + 2^s x with x = dim Ker(1+t) - dim Im(1+t).
std::uint64_t chi_cohomology(const GroupContext& ctx);
std::uint64_t trivial_summand_size(const GroupContext& ctx);

struct ChiValues {
    std::optional<std::uint64_t> formula;
    std::optional<std::uint64_t> cohomology;
    std::optional<std::uint64_t> bruteforce;
};

enum CheckFlag : unsigned {
    kCheckInvolution = 1U << 0,
    kCheckBasis = 1U << 1,
    kCheckCriterion = 1U << 2,
    kCheckCongruences = 1U << 3,
    kCheckTprime = 1U << 4,
    kCheckGoodness = 1U << 5,
    kCheckChi = 1U << 6,
    kCheckAll = (1U << 7) - 1,
};

/// Parses "involution", "basis", ... ; throws ParameterError.
unsigned parse_check(const std::string& name);

struct VerifyOptions {
    unsigned checks = kCheckAll;
    GoodMode mode = GoodMode::automatic;
    std::vector<int> groups; // empty = all 17
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    ChiGuard chi_guard{};
};

struct GroupReport {
    RingParams params;
    GroupSpec spec;
    std::vector<CheckResult> checks;
    ChiValues chi;
    bool pass() const noexcept;
};

struct RunReport {
    RingParams params;
    GoodMode mode = GoodMode::automatic;
    std::uint64_t seed = 0;
    std::vector<GroupReport> groups;
    bool pass() const noexcept;
};

GroupReport verify_group(const GroupSpec& spec, const RingParams& p, const VerifyOptions& opts);
GroupReport verify_group(const GroupSpec& spec, const RingParams& p, const BiSeries& F, const VerifyOptions& opts);
RunReport verify_all(const RingParams& p, const VerifyOptions& opts);

} // namespace mk
