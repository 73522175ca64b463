#pragma once

// Dense linear algebra over F2, bit-packed rows. Sized for the small systems
// that come out of naturality constraints and boundary reduction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ild {

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

    static F2Matrix identity(std::size_t n) {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return (bits_[r * words_ + c / 64] >> (c % 64)) & 1u; }

    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t& w = bits_[r * words_ + c / 64];
        std::uint64_t mask = std::uint64_t(1) << (c % 64);
        if (v)
            w |= mask;
        else
            w &= ~mask;
    }

    void xor_row_into(std::size_t src, std::size_t dst) {
        for (std::size_t w = 0; w < words_; ++w) bits_[dst * words_ + w] ^= bits_[src * words_ + w];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t w = 0; w < words_; ++w) std::swap(bits_[a * words_ + w], bits_[b * words_ + w]);
    }

    bool row_is_zero(std::size_t r) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (bits_[r * words_ + w]) return false;
        return true;
    }

    bool is_zero() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (get(i, j) != (i == j)) return false;
        return true;
    }

    friend F2Matrix operator*(const F2Matrix& a, const F2Matrix& b) {
        if (a.cols_ != b.rows_) throw std::runtime_error("F2Matrix: shape mismatch in multiply");
        F2Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                if (a.get(i, k))
                    for (std::size_t w = 0; w < b.words_; ++w)
                        out.bits_[i * out.words_ + w] ^= b.bits_[k * b.words_ + w];
        return out;
    }

    friend F2Matrix operator+(const F2Matrix& a, const F2Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::runtime_error("F2Matrix: shape mismatch in add");
        F2Matrix out = a;
        for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] ^= b.bits_[i];
        return out;
    }

    friend bool operator==(const F2Matrix& a, const F2Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Row echelon data for solving/nullspace over F2.
struct F2Elimination {
    F2Matrix reduced;                 // RREF of the input
    std::vector<std::size_t> pivot_col;  // pivot column per pivot row
    std::size_t rank = 0;
};

inline F2Elimination f2_eliminate(F2Matrix a) {
    F2Elimination e;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < a.cols() && pr < a.rows(); ++c) {
        std::size_t pivot = pr;
        while (pivot < a.rows() && !a.get(pivot, c)) ++pivot;
        if (pivot == a.rows()) continue;
        a.swap_rows(pr, pivot);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != pr && a.get(r, c)) a.xor_row_into(pr, r);
        e.pivot_col.push_back(c);
        ++pr;
    }
    e.rank = pr;
    e.reduced = std::move(a);
    return e;
}

/// Basis of {x : A x = 0}, one vector (as a 1 x cols matrix) per free column.
inline std::vector<std::vector<bool>> f2_nullspace(const F2Matrix& a) {
    F2Elimination e = f2_eliminate(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : e.pivot_col) is_pivot[c] = true;
    std::vector<std::vector<bool>> basis;
    for (std::size_t free_c = 0; free_c < a.cols(); ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<bool> v(a.cols(), false);
        v[free_c] = true;
        for (std::size_t r = 0; r < e.rank; ++r)
            if (e.reduced.get(r, free_c)) v[e.pivot_col[r]] = true;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of A x = b if consistent. The augmented system is eliminated
/// jointly so callers can reuse it for affine solution sets via f2_nullspace.
inline std::optional<std::vector<bool>> f2_solve(const F2Matrix& a, const std::vector<bool>& b) {
    if (b.size() != a.rows()) throw std::runtime_error("f2_solve: rhs size mismatch");
    F2Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug.set(r, c, a.get(r, c));
        aug.set(r, a.cols(), b[r]);
    }
    F2Elimination e = f2_eliminate(aug);
    std::vector<bool> x(a.cols(), false);
    for (std::size_t r = 0; r < e.rank; ++r) {
        if (e.pivot_col[r] == a.cols()) return std::nullopt;  // 0 = 1 row
        x[e.pivot_col[r]] = e.reduced.get(r, a.cols());
    }
    return x;
}

}  // namespace ild
