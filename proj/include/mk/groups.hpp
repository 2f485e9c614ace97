#pragma once

// The 17 semidirect products (C_{2^{n+1}} x C_{2^{n+1}}) x| C_2, the induced
// involution t on K(s)^*(BH), and brute-force Euler characteristics.

#include "mk/linalg.hpp"
#include "mk/ring.hpp"
#include "mk/series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mk {

inline constexpr int kGroupCount = 17;

/// c^-1 a c = a^i b^j, c^-1 b c = a^k b^l, exponents normalized mod 2^{n+1}.
struct GroupSpec {
    int id = 0; // 1..17
    int n = 0;
    std::int64_t i = 1, j = 0, k = 0, l = 1;

    std::int64_t modulus() const noexcept { return std::int64_t{1} << (n + 1); }
    std::string name() const { return "G" + std::to_string(id); }
    std::uint64_t order() const noexcept { return std::uint64_t{1} << (2 * n + 3); }

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

std::int64_t normalize_residue(std::int64_t r, std::int64_t modulus) noexcept;

/// Empty when the action matrix squares to the identity mod 2^{n+1};
/// otherwise a description of the offending entry.
std::optional<std::string> validate_spec(const GroupSpec& g);

std::vector<GroupSpec> catalog(int n);
GroupSpec group_spec(int id, int n);
/// Parses "G7" / "g7" / "7".
int parse_group_id(const std::string& text);

/// The six groups whose invariants are analysed through a special basis.
bool has_special_basis(int id) noexcept;
inline constexpr std::array<int, 6> kSpecialBasisGroups{3, 4, 7, 8, 9, 11};

std::string describe(const GroupSpec& g); // "Gk: c a c = a^i b^j, c b c = a^k b^l"

/// Exponents (a, b) of the character lambda^a nu^b.
using Character = std::pair<std::int64_t, std::int64_t>;

struct CharacterAction {
    Character t_lambda;
    Character t_nu;
};

/// t(lambda) = lambda^i nu^k, t(nu) = lambda^j nu^l.
CharacterAction character_action(const GroupSpec& g);
/// Image of lambda^a nu^b under t.
Character act_on_character(const GroupSpec& g, Character c);

/// Concrete element a^x b^y c^eps.
struct GroupElement {
    std::int64_t x = 0, y = 0;
    int eps = 0;
    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

GroupElement group_multiply(const GroupSpec& g, const GroupElement& p, const GroupElement& q);

/// Multiplication table of the group on the index (eps * N + x) * N + y.
class FiniteGroup {
public:
    explicit FiniteGroup(const GroupSpec& g);
    std::size_t order() const noexcept { return order_; }
    std::size_t mul(std::size_t p, std::size_t q) const noexcept { return table_[p * order_ + q]; }
    GroupElement element(std::size_t idx) const;
    std::size_t index(const GroupElement& e) const;

private:
    GroupSpec spec_;
    std::size_t order_;
    std::vector<std::uint32_t> table_;
};

struct ChiGuard {
    int max_n = 2;
    int max_s = 4;
};

/// Number of conjugacy classes of commuting s-tuples, via
/// |Hom(Z^{s+1}, G)| / |G| with memoized iterated centralizers.
std::uint64_t chi_bruteforce(const GroupSpec& g, int s, const ChiGuard& guard = {});

/// Euler class e(lambda^a nu^b) = F([a](u), [b](v)) in K(s)^*(BH).
RingElement euler_pullback(std::int64_t a, std::int64_t b, const RingParams& p, const BiSeries& F,
                           std::int64_t modulus);
RingElement euler_pullback(std::int64_t a, std::int64_t b, const RingParams& p);

/// [m](u) as a univariate polynomial, for a residue m mod `modulus`; residues
/// above modulus/2 go through the formal inverse.
BitPoly residue_series(const BiSeries& F, std::int64_t m, std::int64_t modulus, std::size_t bound);

/// FGL used for a ring: the Honda law truncated at M in both variables.
BiSeries ring_fgl(const RingParams& p);

/// The ring endomorphism determined by t(u), t(v), tabulated on monomials.
class Involution {
public:
    Involution(const RingParams& p, RingElement image_u, RingElement image_v);

    const RingParams& params() const noexcept { return params_; }
    const RingElement& image_u() const noexcept { return image_u_; }
    const RingElement& image_v() const noexcept { return image_v_; }
    /// Row a*M + b is t(u^a v^b) in canonical coordinates.
    const BitMatrix& matrix() const noexcept { return matrix_; }

    RingElement apply(const RingElement& g) const;
    RingElement image_of_monomial(std::size_t a, std::size_t b) const;
    /// The operator 1 + t.
    BitMatrix trace_matrix() const;
    RingElement trace(const RingElement& g) const { return g + apply(g); }

private:
    RingParams params_;
    RingElement image_u_;
    RingElement image_v_;
    BitMatrix matrix_;
};

/// Unvalidated involution for a (possibly corrupted) spec and FGL.
Involution make_involution(const GroupSpec& g, const RingParams& p, const BiSeries& F);

/// make_involution plus the t^2 = id check; throws AlgebraError with the
/// first offending monomial.
Involution build_involution(const GroupSpec& g, const RingParams& p, const BiSeries& F);
Involution build_involution(const GroupSpec& g, const RingParams& p);

struct InvolutionCheck {
    bool square_is_identity = false;
    bool unital = false;
    bool multiplicative = false;
    std::size_t samples = 0;
    std::optional<std::string> witness;
    bool pass() const noexcept { return square_is_identity && unital && multiplicative; }
};

RingElement random_element(const RingParams& p, std::mt19937_64& rng);

/// t o t = id on every monomial, t(1) = 1, t(gh) = t(g) t(h) on random pairs.
InvolutionCheck validate_involution(const Involution& t, std::mt19937_64& rng, std::size_t samples = 1000);

} // namespace mk
