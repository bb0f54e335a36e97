// slope1/fp_linalg.hpp
// SPDX-License-Identifier: Apache-2.0
//
// Dense matrices over F_p and subspaces kept in reduced row echelon form.
// Vectors are rows of coordinates; a matrix acts on column vectors.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace slope1 {

using Vec = std::vector<u64>;

class Mat {
public:
    Mat() = default;
    Mat(u64 p, std::size_t rows, std::size_t cols) : p_(p), r_(rows), c_(cols), a_(rows * cols, 0) {}

    static Mat identity(u64 p, std::size_t n) {
        Mat m(p, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    // Matrix whose columns are the given vectors.
    static Mat from_columns(u64 p, std::size_t rows, const std::vector<Vec>& cols) {
        Mat m(p, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    u64 prime() const { return p_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    u64& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    u64 operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Vec column(std::size_t j) const {
        Vec v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    Vec apply(const Vec& x) const {
        Vec y(r_, 0);
        for (std::size_t i = 0; i < r_; ++i) {
            unsigned __int128 s = 0;
            for (std::size_t j = 0; j < c_; ++j) s += static_cast<unsigned __int128>((*this)(i, j)) * x[j];
            y[i] = static_cast<u64>(s % p_);
        }
        return y;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.c_ != y.r_) throw StructureError("matrix shape mismatch");
        Mat z(x.p_, x.r_, y.c_);
        for (std::size_t i = 0; i < x.r_; ++i)
            for (std::size_t k = 0; k < x.c_; ++k) {
                u64 a = x(i, k);
                if (!a) continue;
                for (std::size_t j = 0; j < y.c_; ++j) z(i, j) = (z(i, j) + a * y(k, j)) % x.p_;
            }
        return z;
    }

    friend Mat operator-(const Mat& x, const Mat& y) {
        Mat z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] = (x.a_[i] + x.p_ - y.a_[i]) % x.p_;
        return z;
    }

    friend bool operator==(const Mat& x, const Mat& y) {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

    Mat transpose() const {
        Mat t(p_, c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<Vec> row_list() const {
        std::vector<Vec> out(r_);
        for (std::size_t i = 0; i < r_; ++i) out[i] = Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
        return out;
    }

private:
    u64 p_ = 0;
    std::size_t r_ = 0, c_ = 0;
    std::vector<u64> a_;
};

inline bool is_zero_vec(const Vec& v) {
    for (u64 x : v)
        if (x) return false;
    return true;
}

inline Vec add_scaled(const Vec& x, const Vec& y, u64 c, u64 p) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] + mulmod(c % p, y[i], p)) % p;
    return z;
}

inline Vec scaled(const Vec& x, u64 c, u64 p) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = mulmod(c % p, x[i], p);
    return z;
}

// A subspace of F_p^n held as RREF rows.  reduce() clears the pivot
// columns, so the residual's non-pivot entries are quotient coordinates
// and coords() returns the expansion in the basis rows.
class Subspace {
public:
    Subspace() = default;
    Subspace(u64 p, std::size_t n) : p_(p), n_(n) {}

    static Subspace span(u64 p, std::size_t n, const std::vector<Vec>& vs) {
        Subspace s(p, n);
        for (const Vec& v : vs) s.insert(v);
        return s;
    }

    static Subspace full(u64 p, std::size_t n) {
        Subspace s(p, n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec e(n, 0);
            e[i] = 1;
            s.insert(e);
        }
        return s;
    }

    u64 prime() const { return p_; }
    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return rows_.size(); }
    const std::vector<Vec>& basis() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return piv_; }

    Vec reduce(Vec x) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            u64 c = x[piv_[k]];
            if (c) x = add_scaled(x, rows_[k], p_ - c, p_);
        }
        return x;
    }

    bool contains(const Vec& x) const { return is_zero_vec(reduce(x)); }

    // Expansion of x (assumed inside) in the basis rows.
    Vec coords(const Vec& x) const {
        Vec c(rows_.size());
        for (std::size_t k = 0; k < rows_.size(); ++k) c[k] = x[piv_[k]] % p_;
        return c;
    }

    Vec from_coords(const Vec& c) const {
        Vec x(n_, 0);
        for (std::size_t k = 0; k < rows_.size(); ++k) x = add_scaled(x, rows_[k], c[k], p_);
        return x;
    }

    // Non-pivot columns, in increasing order: coordinates on the quotient.
    std::vector<std::size_t> free_columns() const {
        std::vector<bool> is_piv(n_, false);
        for (auto j : piv_) is_piv[j] = true;
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n_; ++j)
            if (!is_piv[j]) out.push_back(j);
        return out;
    }

    Vec quotient_coords(const Vec& x) const {
        Vec r = reduce(x);
        Vec out;
        for (auto j : free_columns()) out.push_back(r[j]);
        return out;
    }

    // Adds x; returns true if the dimension grew.
    bool insert(const Vec& x) {
        Vec r = reduce(x);
        std::size_t j = 0;
        while (j < n_ && r[j] == 0) ++j;
        if (j == n_) return false;
        r = scaled(r, invmod(r[j], p_), p_);
        for (auto& row : rows_)
            if (row[j]) row = add_scaled(row, r, p_ - row[j], p_);
        std::size_t pos = 0;
        while (pos < piv_.size() && piv_[pos] < j) ++pos;
        rows_.insert(rows_.begin() + static_cast<long>(pos), r);
        piv_.insert(piv_.begin() + static_cast<long>(pos), j);
        return true;
    }

    bool operator==(const Subspace& o) const { return rows_ == o.rows_; }

    bool contains(const Subspace& o) const {
        for (const auto& v : o.rows_)
            if (!contains(v)) return false;
        return true;
    }

private:
    u64 p_ = 0;
    std::size_t n_ = 0;
    std::vector<Vec> rows_;
    std::vector<std::size_t> piv_;
};

inline std::size_t rank(const Mat& m) {
    return Subspace::span(m.prime(), m.cols(), m.row_list()).dim();
}

// Basis of {x : m x = 0}.
inline std::vector<Vec> kernel(const Mat& m) {
    u64 p = m.prime();
    Subspace rs = Subspace::span(p, m.cols(), m.row_list());
    std::vector<Vec> out;
    for (auto f : rs.free_columns()) {
        Vec x(m.cols(), 0);
        x[f] = 1;
        for (std::size_t k = 0; k < rs.dim(); ++k) x[rs.pivots()[k]] = (p - rs.basis()[k][f]) % p;
        out.push_back(x);
    }
    return out;
}

// Some x with m x = b, if any.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
    u64 p = m.prime();
    Mat aug(p, m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i] % p;
    }
    Subspace rs = Subspace::span(p, m.cols() + 1, aug.row_list());
    Vec x(m.cols(), 0);
    for (std::size_t k = 0; k < rs.dim(); ++k) {
        std::size_t j = rs.pivots()[k];
        if (j == m.cols()) return std::nullopt;
        x[j] = rs.basis()[k][m.cols()];
    }
    return x;
}

}  // namespace slope1
