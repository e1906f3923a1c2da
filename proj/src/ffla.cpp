#include "gccf/ffla.hpp"

#include "gccf/error.hpp"

#include <ostream>
#include <string>
#include <utility>

namespace gccf::ffla {

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::uint64_t next_prime(std::uint64_t n) noexcept {
    std::uint64_t c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

Elem mod_inverse(Elem a, Elem gamma) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = gamma, new_r = a % gamma;
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) throw Error(ErrorCode::SingularMatrix, "element has no inverse");
    return reduce(t, gamma);
}

namespace {

void check_modulus(Elem gamma) {
    if (gamma >= kMaxModulus || !is_prime(gamma)) {
        throw Error(ErrorCode::NonPrimeModulus, "gamma=" + std::to_string(gamma));
    }
}

Elem mul(Elem a, Elem b, Elem g) noexcept {
    return static_cast<Elem>((std::uint64_t{a} * b) % g);
}

Elem sub(Elem a, Elem b, Elem g) noexcept {
    return a >= b ? a - b : a + (g - b);
}

// In-place Gauss-Jordan; returns pivot columns.
std::vector<std::size_t> eliminate(std::vector<Elem>& d, std::size_t rows, std::size_t cols,
                                   Elem g) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && d[p * cols + c] == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(d[p * cols + j], d[r * cols + j]);
        }
        const Elem inv = mod_inverse(d[r * cols + c], g);
        for (std::size_t j = c; j < cols; ++j) d[r * cols + j] = mul(d[r * cols + j], inv, g);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const Elem f = d[i * cols + c];
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) {
                d[i * cols + j] = sub(d[i * cols + j], mul(f, d[r * cols + j], g), g);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

FieldMatrix::FieldMatrix(Elem gamma, std::size_t rows, std::size_t cols)
    : gamma_(gamma), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    check_modulus(gamma);
}

FieldMatrix::FieldMatrix(Elem gamma,
                         std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : FieldMatrix(gamma, rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
        std::size_t c = 0;
        for (auto v : row) set(r, c++, v);
        ++r;
    }
}

FieldMatrix FieldMatrix::identity(Elem gamma, std::size_t n) {
    FieldMatrix m(gamma, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
}

FieldMatrix FieldMatrix::submatrix(std::span<const std::size_t> row_idx,
                                   std::span<const std::size_t> col_idx) const {
    FieldMatrix out(gamma_, row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        for (std::size_t j = 0; j < col_idx.size(); ++j) {
            if (row_idx[i] >= rows_ || col_idx[j] >= cols_) {
                throw Error(ErrorCode::DimensionMismatch, "submatrix index out of range");
            }
            out.data_[i * out.cols_ + j] = (*this)(row_idx[i], col_idx[j]);
        }
    }
    return out;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix out(gamma_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.data_[j * rows_ + i] = (*this)(i, j);
    return out;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& rhs) const {
    if (cols_ != rhs.rows_ || gamma_ != rhs.gamma_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix product");
    }
    FieldMatrix out(gamma_, rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < rhs.cols_; ++j) {
            std::uint64_t acc = 0;
            for (std::size_t t = 0; t < cols_; ++t) {
                acc = (acc + std::uint64_t{(*this)(i, t)} * rhs(t, j)) % gamma_;
            }
            out.data_[i * rhs.cols_ + j] = static_cast<Elem>(acc);
        }
    }
    return out;
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_ || gamma_ != rhs.gamma_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix sum");
    }
    FieldMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] = static_cast<Elem>((std::uint64_t{data_[i]} + rhs.data_[i]) % gamma_);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const FieldMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ';';
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    }
    return os << "] mod " << m.gamma();
}

FieldMatrix reduce_mod(const IntMatrix& m, Elem gamma) {
    const std::size_t cols = m.empty() ? 0 : m.front().size();
    FieldMatrix out(gamma, m.size(), cols);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
        for (std::size_t j = 0; j < cols; ++j) out.set(i, j, m[i][j]);
    }
    return out;
}

std::size_t rank(const FieldMatrix& m) {
    if (m.empty()) return 0;
    return rref(m).pivots.size();
}

Echelon rref(const FieldMatrix& m) {
    FieldMatrix out = m;
    std::vector<Elem> d(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d[i * m.cols() + j] = m(i, j);
    auto pivots = eliminate(d, m.rows(), m.cols(), m.gamma());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.set(i, j, d[i * m.cols() + j]);
    return {std::move(out), std::move(pivots)};
}

FieldMatrix invert(const FieldMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "invert needs a square matrix");
    const std::size_t n = m.rows();
    const std::size_t w = 2 * n;
    std::vector<Elem> d(n * w, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i * w + j] = m(i, j);
        d[i * w + n + i] = 1;
    }
    const auto pivots = eliminate(d, n, w, m.gamma());
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) {
        throw Error(ErrorCode::SingularMatrix, "matrix is not invertible");
    }
    FieldMatrix out(m.gamma(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.set(i, j, d[i * w + n + j]);
    return out;
}

Solution solve(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows() != b.rows() || a.gamma() != b.gamma()) {
        throw Error(ErrorCode::DimensionMismatch, "solve: a.rows != b.rows");
    }
    const Elem g = a.gamma();
    const std::size_t n = a.cols();
    const std::size_t w = n + b.cols();
    std::vector<Elem> d(a.rows() * w, 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i * w + j] = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) d[i * w + n + j] = b(i, j);
    }
    // Eliminate over the coefficient columns only, carrying the right-hand side along.
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && d[p * w + c] == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < w; ++j) std::swap(d[p * w + j], d[r * w + j]);
        const Elem inv = mod_inverse(d[r * w + c], g);
        for (std::size_t j = 0; j < w; ++j) d[r * w + j] = mul(d[r * w + j], inv, g);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || d[i * w + c] == 0) continue;
            const Elem f = d[i * w + c];
            for (std::size_t j = 0; j < w; ++j) d[i * w + j] = sub(d[i * w + j], mul(f, d[r * w + j], g), g);
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < a.rows(); ++i)
        for (std::size_t j = n; j < w; ++j)
            if (d[i * w + j] != 0) throw Error(ErrorCode::Inconsistent, "no solution");

    FieldMatrix x(g, n, b.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x.set(pivots[i], j, d[i * w + n + j]);

    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0, p = 0; c < n; ++c) {
        if (p < pivots.size() && pivots[p] == c) { ++p; continue; }
        free_cols.push_back(c);
    }
    FieldMatrix null(g, n, free_cols.size());
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
        null.set(free_cols[f], f, 1);
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            null.set(pivots[i], f, -static_cast<std::int64_t>(d[i * w + free_cols[f]]));
        }
    }
    return {std::move(x), std::move(null), !free_cols.empty()};
}

} // namespace gccf::ffla
