#pragma once

// Dense bit-packed linear algebra over F2, plus subspaces of the truncated
// ring in canonical monomial coordinates.

#include "mk/ring.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mk {

using BitVec = std::vector<std::uint64_t>;

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t row_words() const noexcept { return row_words_; }

    std::span<const std::uint64_t> row(std::size_t i) const noexcept;
    std::span<std::uint64_t> row(std::size_t i) noexcept;
    bool get(std::size_t i, std::size_t j) const noexcept;
    void set(std::size_t i, std::size_t j, bool on) noexcept;

    bool is_zero() const noexcept;
    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t row_words_ = 0;
    std::vector<std::uint64_t> data_;
};

/// Row-vector convention: returns sum of m.row(k) over the set bits k of v.
BitVec apply_rows(const BitMatrix& m, std::span<const std::uint64_t> v);
void apply_rows(const BitMatrix& m, std::span<const std::uint64_t> v, std::span<std::uint64_t> out);

/// a * b in the row convention (row i of the result = apply_rows(b, a.row(i))).
/// Uses 8-bit lookup tables over blocks of rows of b.
BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);

/// Semi-echelon basis: each stored row has a distinct pivot (its lowest set
/// bit) and no bits below it. Rows are never modified after insertion.
class Echelon {
public:
    Echelon() = default;
    explicit Echelon(std::size_t nbits);

    std::size_t nbits() const noexcept { return nbits_; }
    std::size_t words() const noexcept { return words_; }
    std::size_t rank() const noexcept { return pivots_.size(); }

    /// Reduces v in place; returns the first set bit without a pivot row, or
    /// bits::npos when v reduced to zero.
    std::size_t reduce(std::span<std::uint64_t> v) const;
    bool contains(std::span<const std::uint64_t> v) const;
    /// Inserts v; false if it was already in the span.
    bool insert(std::span<const std::uint64_t> v);
    /// Inserts a vector already reduced by reduce() with free leading bit p.
    void insert_reduced(std::span<const std::uint64_t> v, std::size_t p);

    std::span<const std::uint64_t> row(std::size_t i) const noexcept;
    std::size_t pivot(std::size_t i) const noexcept { return pivots_[i]; }

private:
    std::size_t nbits_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
    std::vector<std::size_t> pivots_;
    std::vector<std::int32_t> row_of_col_;
};

std::size_t rank(const BitMatrix& m);

/// All c (as bit vectors of length m.rows()) with sum_i c_i m.row(i) = 0.
std::vector<BitVec> left_kernel(const BitMatrix& m);

/// Echelon over a fixed family of vectors that remembers, for every stored
/// row, which family members it combines. Used for coordinates and for
/// dependency witnesses.
class TrackedEchelon {
public:
    TrackedEchelon(std::size_t nbits, std::size_t family_size);

    /// Inserts family member `index`. Returns the dependency (as a family
    /// combination) when it lies in the span of the earlier members.
    std::optional<BitVec> insert(std::span<const std::uint64_t> v, std::size_t index);
    /// Family coordinates of v, or nullopt if v is outside the span.
    std::optional<BitVec> coordinates(std::span<const std::uint64_t> v) const;
    std::size_t rank() const noexcept { return ech_.rank(); }

private:
    std::size_t nbits_;
    std::size_t vwords_;
    std::size_t twords_;
    Echelon ech_;
};

/// A subspace of the ring in canonical monomial coordinates.
class Subspace {
public:
    explicit Subspace(const RingParams& p);

    const RingParams& params() const noexcept { return params_; }
    std::size_t rank() const noexcept { return ech_.rank(); }

    bool insert(const RingElement& g);
    bool insert_coords(std::span<const std::uint64_t> coords);
    bool contains(const RingElement& g) const;
    bool contains_coords(std::span<const std::uint64_t> coords) const;

    std::vector<RingElement> basis() const;
    RingElement basis_element(std::size_t i) const;
    const Echelon& echelon() const noexcept { return ech_; }

private:
    RingParams params_;
    Echelon ech_;
};

Subspace span_of(const RingParams& p, std::span<const RingElement> gens);
bool span_contains(const Subspace& S, const RingElement& g);
/// First basis vector of a that is not in b.
std::optional<RingElement> first_outside(const Subspace& a, const Subspace& b);
bool subspace_equal(const Subspace& a, const Subspace& b);

/// Matrix of a linear map given by the images of the monomials in canonical
/// order (row i = image of monomial i).
BitMatrix operator_matrix(std::span<const RingElement> images);
Subspace image(const RingParams& p, const BitMatrix& op);
Subspace kernel(const RingParams& p, const BitMatrix& op);

struct ClosureStats {
    std::size_t generators_used = 0;
    std::size_t products = 0;
};

/// Span of all finite products of gens (the empty product 1 included), plus
/// an optional seed subspace. The seed must be closed under multiplication by
/// the generated algebra and by itself; the result is then seed + algebra.
/// A generator already inside the running span is skipped: the span is a
/// subalgebra at that point, so it is closed under that generator too.
Subspace multiplicative_closure(const RingParams& p, std::span<const RingElement> gens,
                                const Subspace* seed = nullptr, ClosureStats* stats = nullptr);

} // namespace mk
