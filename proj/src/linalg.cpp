#include "mk/linalg.hpp"

#include "mk/bits.hpp"
#include "mk/error.hpp"

#include <algorithm>
#include <array>

namespace mk {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_words_(bits::words_for(cols)), data_(rows * bits::words_for(cols), 0)
{
}

BitMatrix BitMatrix::identity(std::size_t n)
{
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

std::span<const std::uint64_t> BitMatrix::row(std::size_t i) const noexcept
{
    return std::span<const std::uint64_t>(data_).subspan(i * row_words_, row_words_);
}

std::span<std::uint64_t> BitMatrix::row(std::size_t i) noexcept
{
    return std::span<std::uint64_t>(data_).subspan(i * row_words_, row_words_);
}

bool BitMatrix::get(std::size_t i, std::size_t j) const noexcept { return bits::test(row(i), j); }

void BitMatrix::set(std::size_t i, std::size_t j, bool on) noexcept { bits::assign(row(i), j, on); }

bool BitMatrix::is_zero() const noexcept { return bits::all_zero(data_); }

void apply_rows(const BitMatrix& m, std::span<const std::uint64_t> v, std::span<std::uint64_t> out)
{
    std::fill(out.begin(), out.end(), 0);
    for (auto k = bits::find_next(v, 0); k != bits::npos && k < m.rows(); k = bits::find_next(v, k + 1))
        bits::xor_into(out, m.row(k));
}

BitVec apply_rows(const BitMatrix& m, std::span<const std::uint64_t> v)
{
    BitVec out(m.row_words(), 0);
    apply_rows(m, v, out);
    return out;
}

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b)
{
    if (a.cols() != b.rows())
        throw ParamsMismatch("multiply: inner dimensions differ");
    BitMatrix c(a.rows(), b.cols());
    const std::size_t w = b.row_words();
    std::vector<std::uint64_t> table(256 * w);
    for (std::size_t blk = 0; blk < b.rows(); blk += 8) {
        const std::size_t span_rows = std::min<std::size_t>(8, b.rows() - blk);
        // table[mask] = sum of rows blk + bit over set bits of mask
        std::fill(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(w), 0);
        for (std::size_t mask = 1; mask < (std::size_t{1} << span_rows); ++mask) {
            const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
            const std::size_t prev = mask & (mask - 1);
            auto dst = std::span<std::uint64_t>(table).subspan(mask * w, w);
            const auto src = std::span<const std::uint64_t>(table).subspan(prev * w, w);
            const auto r = b.row(blk + low);
            for (std::size_t k = 0; k < w; ++k)
                dst[k] = src[k] ^ r[k];
        }
        const std::size_t word = blk / 64, shift = blk % 64;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const std::size_t mask = (a.row(i)[word] >> shift) & ((std::size_t{1} << span_rows) - 1);
            if (mask == 0)
                continue;
            bits::xor_into(c.row(i), std::span<const std::uint64_t>(table).subspan(mask * w, w));
        }
    }
    return c;
}

Echelon::Echelon(std::size_t nbits)
    : nbits_(nbits), words_(bits::words_for(nbits)), row_of_col_(nbits, -1)
{
}

std::size_t Echelon::reduce(std::span<std::uint64_t> v) const
{
    std::size_t p = bits::find_next(v, 0);
    while (p != bits::npos) {
        const std::int32_t r = row_of_col_[p];
        if (r < 0)
            return p;
        const std::size_t w0 = p / bits::kWordBits;
        const std::uint64_t* src = data_.data() + static_cast<std::size_t>(r) * words_;
        for (std::size_t k = w0; k < words_; ++k)
            v[k] ^= src[k];
        p = bits::find_next(v, p + 1);
    }
    return bits::npos;
}

bool Echelon::contains(std::span<const std::uint64_t> v) const
{
    BitVec tmp(v.begin(), v.end());
    return reduce(tmp) == bits::npos;
}

bool Echelon::insert(std::span<const std::uint64_t> v)
{
    BitVec tmp(v.begin(), v.end());
    const std::size_t p = reduce(tmp);
    if (p == bits::npos)
        return false;
    insert_reduced(tmp, p);
    return true;
}

void Echelon::insert_reduced(std::span<const std::uint64_t> v, std::size_t p)
{
    row_of_col_[p] = static_cast<std::int32_t>(pivots_.size());
    pivots_.push_back(p);
    data_.insert(data_.end(), v.begin(), v.end());
}

std::span<const std::uint64_t> Echelon::row(std::size_t i) const noexcept
{
    return std::span<const std::uint64_t>(data_).subspan(i * words_, words_);
}

std::size_t rank(const BitMatrix& m)
{
    Echelon e(m.row_words() * bits::kWordBits);
    for (std::size_t i = 0; i < m.rows(); ++i)
        e.insert(m.row(i));
    return e.rank();
}

TrackedEchelon::TrackedEchelon(std::size_t nbits, std::size_t family_size)
    : nbits_(nbits), vwords_(bits::words_for(nbits)), twords_(bits::words_for(family_size)),
      ech_((bits::words_for(nbits) + bits::words_for(family_size)) * bits::kWordBits)
{
}

std::optional<BitVec> TrackedEchelon::insert(std::span<const std::uint64_t> v, std::size_t index)
{
    BitVec buf(vwords_ + twords_, 0);
    std::copy(v.begin(), v.end(), buf.begin());
    bits::flip(std::span<std::uint64_t>(buf).subspan(vwords_), index);
    const std::size_t p = ech_.reduce(buf);
    if (p != bits::npos && p < vwords_ * bits::kWordBits) {
        ech_.insert_reduced(buf, p);
        return std::nullopt;
    }
    return BitVec(buf.begin() + static_cast<std::ptrdiff_t>(vwords_), buf.end());
}

std::optional<BitVec> TrackedEchelon::coordinates(std::span<const std::uint64_t> v) const
{
    BitVec buf(vwords_ + twords_, 0);
    std::copy(v.begin(), v.end(), buf.begin());
    const std::size_t p = ech_.reduce(buf);
    if (p != bits::npos && p < vwords_ * bits::kWordBits)
        return std::nullopt;
    return BitVec(buf.begin() + static_cast<std::ptrdiff_t>(vwords_), buf.end());
}

std::vector<BitVec> left_kernel(const BitMatrix& m)
{
    TrackedEchelon t(m.cols(), m.rows());
    std::vector<BitVec> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (auto dep = t.insert(m.row(i), i))
            out.push_back(std::move(*dep));
    return out;
}

Subspace::Subspace(const RingParams& p) : params_(p), ech_(p.dim) {}

bool Subspace::insert(const RingElement& g)
{
    check_same_ring(params_, g.params(), "subspace insert");
    return ech_.insert(to_coordinates(g));
}

bool Subspace::insert_coords(std::span<const std::uint64_t> coords) { return ech_.insert(coords); }

bool Subspace::contains(const RingElement& g) const
{
    check_same_ring(params_, g.params(), "subspace membership");
    return ech_.contains(to_coordinates(g));
}

bool Subspace::contains_coords(std::span<const std::uint64_t> coords) const { return ech_.contains(coords); }

RingElement Subspace::basis_element(std::size_t i) const { return from_coordinates(params_, ech_.row(i)); }

std::vector<RingElement> Subspace::basis() const
{
    std::vector<RingElement> out;
    out.reserve(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        out.push_back(basis_element(i));
    return out;
}

Subspace span_of(const RingParams& p, std::span<const RingElement> gens)
{
    Subspace S(p);
    for (const auto& g : gens)
        S.insert(g);
    return S;
}

bool span_contains(const Subspace& S, const RingElement& g) { return S.contains(g); }

std::optional<RingElement> first_outside(const Subspace& a, const Subspace& b)
{
    check_same_ring(a.params(), b.params(), "subspace comparison");
    for (std::size_t i = 0; i < a.rank(); ++i)
        if (!b.contains_coords(a.echelon().row(i)))
            return a.basis_element(i);
    return std::nullopt;
}

bool subspace_equal(const Subspace& a, const Subspace& b)
{
    return a.rank() == b.rank() && !first_outside(a, b) && !first_outside(b, a);
}

BitMatrix operator_matrix(std::span<const RingElement> images)
{
    if (images.empty())
        throw ParamsMismatch("operator_matrix: no images");
    const auto& p = images.front().params();
    if (images.size() != p.dim)
        throw ParamsMismatch("operator_matrix: expected one image per monomial (" + std::to_string(p.dim) +
                             "), got " + std::to_string(images.size()));
    BitMatrix m(p.dim, p.dim);
    for (std::size_t i = 0; i < p.dim; ++i) {
        check_same_ring(p, images[i].params(), "operator_matrix");
        to_coordinates(images[i], m.row(i));
    }
    return m;
}

Subspace image(const RingParams& p, const BitMatrix& op)
{
    Subspace S(p);
    for (std::size_t i = 0; i < op.rows(); ++i)
        S.insert_coords(op.row(i));
    return S;
}

Subspace kernel(const RingParams& p, const BitMatrix& op)
{
    if (op.rows() != p.dim)
        throw ParamsMismatch("kernel: operator is not an endomorphism of the ring");
    Subspace S(p);
    for (const auto& c : left_kernel(op))
        S.insert_coords(c);
    return S;
}

Subspace multiplicative_closure(const RingParams& p, std::span<const RingElement> gens, const Subspace* seed,
                                ClosureStats* stats)
{
    Subspace W = seed ? *seed : Subspace(p);
    std::vector<RingElement> reps;
    std::vector<std::size_t> done;
    std::vector<RingElement> chosen;
    std::size_t products = 0;

    auto add = [&](const RingElement& g) {
        if (W.insert(g)) {
            reps.push_back(g);
            done.push_back(0);
        }
    };
    add(RingElement::one(p));
    for (const auto& g : gens) {
        check_same_ring(p, g.params(), "multiplicative_closure");
        if (W.contains(g))
            continue;
        chosen.push_back(g);
        for (std::size_t i = 0; i < reps.size(); ++i) {
            while (done[i] < chosen.size()) {
                RingElement prod = reps[i] * chosen[done[i]];
                ++done[i];
                ++products;
                add(prod);
            }
        }
    }
    if (stats) {
        stats->generators_used = chosen.size();
        stats->products = products;
    }
    return W;
}

} // namespace mk
