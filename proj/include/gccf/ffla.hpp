#pragma once

/**
 * @file ffla.hpp
 * @brief Dense exact linear algebra over a prime field F_gamma.
 *
 * Entries are stored reduced to {0, ..., gamma-1} in row-major order. The
 * modulus is bounded by 2^31 so that a product of two entries always fits
 * in a 64-bit intermediate. Row and column index lists used for submatrix
 * extraction are 0-based and expected in ascending order.
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace gccf::ffla {

using Elem = std::uint32_t;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Largest accepted modulus (exclusive).
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

[[nodiscard]] bool is_prime(std::uint64_t n) noexcept;

/// Smallest prime strictly greater than n.
[[nodiscard]] std::uint64_t next_prime(std::uint64_t n) noexcept;

/// Multiplicative inverse of a nonzero element via extended Euclid.
[[nodiscard]] Elem mod_inverse(Elem a, Elem gamma);

[[nodiscard]] inline Elem reduce(std::int64_t v, Elem gamma) noexcept {
    const auto g = static_cast<std::int64_t>(gamma);
    return static_cast<Elem>(((v % g) + g) % g);
}

class FieldMatrix {
public:
    /// Zero matrix; throws NonPrimeModulus unless gamma is a prime below 2^31.
    FieldMatrix(Elem gamma, std::size_t rows, std::size_t cols);

    /// Integer rows reduced entrywise into F_gamma.
    FieldMatrix(Elem gamma, std::initializer_list<std::initializer_list<std::int64_t>> rows);

    [[nodiscard]] static FieldMatrix identity(Elem gamma, std::size_t n);

    [[nodiscard]] Elem gamma() const noexcept { return gamma_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    [[nodiscard]] Elem operator()(std::size_t r, std::size_t c) const noexcept {
        return data_[r * cols_ + c];
    }

    /// Stores v reduced modulo gamma.
    void set(std::size_t r, std::size_t c, std::int64_t v) noexcept {
        data_[r * cols_ + c] = reduce(v, gamma_);
    }

    [[nodiscard]] std::span<const Elem> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    [[nodiscard]] FieldMatrix submatrix(std::span<const std::size_t> row_idx,
                                        std::span<const std::size_t> col_idx) const;
    [[nodiscard]] FieldMatrix transpose() const;

    [[nodiscard]] FieldMatrix operator*(const FieldMatrix& rhs) const;
    [[nodiscard]] FieldMatrix operator+(const FieldMatrix& rhs) const;
    [[nodiscard]] bool operator==(const FieldMatrix& rhs) const noexcept = default;

private:
    Elem gamma_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Elem> data_;
};

std::ostream& operator<<(std::ostream& os, const FieldMatrix& m);

/// Entrywise ((v mod gamma) + gamma) mod gamma.
[[nodiscard]] FieldMatrix reduce_mod(const IntMatrix& m, Elem gamma);

/// Rank over F_gamma; 0 for a matrix with no rows or no columns.
[[nodiscard]] std::size_t rank(const FieldMatrix& m);

struct Echelon {
    FieldMatrix form;
    std::vector<std::size_t> pivots;
};

/// Reduced row-echelon form with the pivot column of every nonzero row.
[[nodiscard]] Echelon rref(const FieldMatrix& m);

/// Throws SingularMatrix if m is not invertible, DimensionMismatch if not square.
[[nodiscard]] FieldMatrix invert(const FieldMatrix& m);

struct Solution {
    FieldMatrix x;          ///< one particular solution (free variables set to zero)
    FieldMatrix nullspace;  ///< a.cols() x dim basis of {y : a y = 0}, columns are basis vectors
    bool underdetermined;   ///< true when the nullspace is nontrivial
};

/// Solves a x = b. Throws Inconsistent when no solution exists.
[[nodiscard]] Solution solve(const FieldMatrix& a, const FieldMatrix& b);

} // namespace gccf::ffla
