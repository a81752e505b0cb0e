#ifndef LEIBNIZ_MATRIX_HPP
#define LEIBNIZ_MATRIX_HPP

#include "leibniz/scalar.hpp"

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace leibniz {

template <class K>
using Vector = std::vector<K>;

template <class K>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, scalar_ops<K>::zero()) {}
    Matrix(std::initializer_list<std::initializer_list<K>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
        a_.reserve(std::size_t(rows_) * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_) throw mixed_dimensions{};
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = scalar_ops<K>::one();
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    K& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    const K& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

    Vector<K> row(int i) const {
        return Vector<K>(a_.begin() + std::size_t(i) * cols_, a_.begin() + std::size_t(i + 1) * cols_);
    }
    Vector<K> col(int j) const {
        Vector<K> v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_row(int i, const Vector<K>& v) {
        for (int j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }
    void set_col(int j, const Vector<K>& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }
    void swap_rows(int i, int k) {
        for (int j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw dimension_mismatch{};
        Matrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const K& v = a(i, k);
                if (scalar_ops<K>::is_zero(v, 0.0)) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += v * b(k, j);
            }
        return c;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_mismatch{};
        Matrix c = a;
        for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
        return c;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_mismatch{};
        Matrix c = a;
        for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
        return c;
    }
    friend Matrix operator*(const K& s, const Matrix& m) {
        Matrix c = m;
        for (auto& x : c.a_) x = s * x;
        return c;
    }

    Vector<K> apply(const Vector<K>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw dimension_mismatch{};
        Vector<K> out(rows_, scalar_ops<K>::zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : a_) m = std::max(m, scalar_ops<K>::abs(x));
        return m;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<K> a_;
};

template <class K>
double max_abs_diff(const Matrix<K>& a, const Matrix<K>& b) {
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, scalar_ops<K>::abs(a(i, j) - b(i, j)));
    return m;
}

template <class K>
double vec_inf_norm(const Vector<K>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, scalar_ops<K>::abs(x));
    return m;
}

// ---------------------------------------------------------------------------
// Reduced row echelon form with deterministic pivoting: per column, the
// remaining row of largest magnitude wins, ties to the lowest index. The RREF
// of a row space is unique, so Subspace values built from it are canonical.
// ---------------------------------------------------------------------------

template <class K>
struct RrefResult {
    Matrix<K> mat;
    std::vector<int> pivot_cols;
    int rank = 0;
};

template <class K>
RrefResult<K> rref(Matrix<K> m, double tol = Tolerances::linear) {
    const int rows = m.rows(), cols = m.cols();
    const double scale = std::max(1.0, m.max_abs());
    RrefResult<K> out;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int best = -1;
        typename scalar_ops<K>::weight_type best_w{};
        for (int i = r; i < rows; ++i) {
            if (scalar_ops<K>::is_zero(m(i, c), tol * scale)) continue;
            auto w = scalar_ops<K>::weight(m(i, c));
            if (best < 0 || best_w < w) { best = i; best_w = w; }
        }
        if (best < 0) continue;
        m.swap_rows(r, best);
        K inv_pivot = scalar_ops<K>::one() / m(r, c);
        for (int j = c; j < cols; ++j) m(r, j) = inv_pivot * m(r, j);
        m(r, c) = scalar_ops<K>::one();
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            K f = m(i, c);
            if (scalar_ops<K>::is_zero(f, 0.0)) continue;
            for (int j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
            m(i, c) = scalar_ops<K>::zero();
        }
        out.pivot_cols.push_back(c);
        ++r;
    }
    if constexpr (!scalar_ops<K>::exact) {
        // snap roundoff debris so equal row spaces print identically
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (std::abs(m(i, j)) <= tol * scale) m(i, j) = K{};
    }
    out.rank = r;
    out.mat = std::move(m);
    return out;
}

template <class K>
int rank(const Matrix<K>& m, double tol = Tolerances::linear) {
    return rref(m, tol).rank;
}

template <class K>
K det(Matrix<K> m, double tol = Tolerances::linear) {
    if (m.rows() != m.cols()) throw dimension_mismatch{};
    const int n = m.rows();
    const double scale = std::max(1.0, m.max_abs());
    K d = scalar_ops<K>::one();
    for (int c = 0; c < n; ++c) {
        int best = -1;
        typename scalar_ops<K>::weight_type best_w{};
        for (int i = c; i < n; ++i) {
            if (scalar_ops<K>::is_zero(m(i, c), tol * scale)) continue;
            auto w = scalar_ops<K>::weight(m(i, c));
            if (best < 0 || best_w < w) { best = i; best_w = w; }
        }
        if (best < 0) return scalar_ops<K>::zero();
        if (best != c) { m.swap_rows(c, best); d = -d; }
        d = d * m(c, c);
        K inv_pivot = scalar_ops<K>::one() / m(c, c);
        for (int i = c + 1; i < n; ++i) {
            K f = m(i, c) * inv_pivot;
            if (scalar_ops<K>::is_zero(f, 0.0)) continue;
            for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

// Gauss-Jordan inverse; throws singular_error when a pivot falls below tol.
template <class K>
Matrix<K> invert(const Matrix<K>& m, double tol = Tolerances::linear) {
    if (m.rows() != m.cols()) throw dimension_mismatch{};
    const int n = m.rows();
    Matrix<K> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = scalar_ops<K>::one();
    }
    auto rr = rref(aug, tol);
    if (rr.rank < n || rr.pivot_cols.back() >= n) throw singular_error{};
    for (int i = 0; i < n; ++i)
        if (rr.pivot_cols[i] != i) throw singular_error{};
    Matrix<K> inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = rr.mat(i, n + j);
    return inv;
}

// ---------------------------------------------------------------------------
// Subspace: canonical echelonized basis of a subspace of K^n.
// ---------------------------------------------------------------------------

template <class K>
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(int ambient) : ambient_(ambient) {}

    static Subspace full(int ambient) {
        Subspace s(ambient);
        s.basis_ = Matrix<K>::identity(ambient);
        return s;
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const Matrix<K>& basis() const { return basis_; }
    Vector<K> basis_row(int i) const { return basis_.row(i); }

    bool contains(const Vector<K>& v, double tol = Tolerances::linear) const {
        if (static_cast<int>(v.size()) != ambient_) throw dimension_mismatch{};
        Vector<K> w = v;
        const double scale = std::max({1.0, basis_.max_abs(), vec_inf_norm(v)});
        for (int r = 0; r < basis_.rows(); ++r) {
            int p = pivot_col(r);
            K f = w[p];
            if (scalar_ops<K>::is_zero(f, 0.0)) continue;
            for (int j = 0; j < ambient_; ++j) w[j] -= f * basis_(r, j);
        }
        for (const auto& x : w)
            if (!scalar_ops<K>::is_zero(x, tol * scale)) return false;
        return true;
    }

    double residual_of(const Vector<K>& v) const {
        Vector<K> w = v;
        for (int r = 0; r < basis_.rows(); ++r) {
            int p = pivot_col(r);
            K f = w[p];
            for (int j = 0; j < ambient_; ++j) w[j] -= f * basis_(r, j);
        }
        return vec_inf_norm(w);
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    template <class K2>
    friend Subspace<K2> span(int ambient, const std::vector<Vector<K2>>& vectors, double tol);

private:
    int pivot_col(int r) const {
        for (int j = 0; j < ambient_; ++j)
            if (!scalar_ops<K>::is_zero(basis_(r, j), 0.0)) return j;
        return ambient_;
    }

    int ambient_ = 0;
    Matrix<K> basis_; // RREF, no zero rows
};

template <class K>
Subspace<K> span(int ambient, const std::vector<Vector<K>>& vectors, double tol = Tolerances::linear) {
    if (ambient < 1) throw error("ambient dimension must be positive");
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != ambient) throw mixed_dimensions{};
    Matrix<K> m(static_cast<int>(vectors.size()), ambient);
    for (int i = 0; i < m.rows(); ++i) m.set_row(i, vectors[i]);
    auto rr = rref(m, tol);
    Subspace<K> s(ambient);
    Matrix<K> basis(rr.rank, ambient);
    for (int i = 0; i < rr.rank; ++i) basis.set_row(i, rr.mat.row(i));
    s.basis_ = std::move(basis);
    return s;
}

// {v : Mv = 0} as a canonical subspace; dim = cols - rank.
template <class K>
Subspace<K> kernel(const Matrix<K>& m, double tol = Tolerances::linear) {
    auto rr = rref(m, tol);
    const int n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<Vector<K>> basis;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        Vector<K> v(n, scalar_ops<K>::zero());
        v[c] = scalar_ops<K>::one();
        for (int r = 0; r < rr.rank; ++r) v[rr.pivot_cols[r]] = -rr.mat(r, c);
        basis.push_back(std::move(v));
    }
    if (basis.empty()) return Subspace<K>(n);
    return span(n, basis, tol);
}

template <class K>
Subspace<K> sum(const Subspace<K>& a, const Subspace<K>& b, double tol = Tolerances::linear) {
    if (a.ambient_dim() != b.ambient_dim()) throw dimension_mismatch{};
    std::vector<Vector<K>> rows;
    for (int i = 0; i < a.dim(); ++i) rows.push_back(a.basis_row(i));
    for (int i = 0; i < b.dim(); ++i) rows.push_back(b.basis_row(i));
    return span(a.ambient_dim(), rows, tol);
}

// Solve Ax = b for square-ish A via RREF of the augmented matrix; nullopt when
// inconsistent or underdetermined.
template <class K>
std::optional<Vector<K>> solve_linear(const Matrix<K>& a, const Vector<K>& b,
                                      double tol = Tolerances::linear) {
    if (a.rows() != static_cast<int>(b.size())) throw dimension_mismatch{};
    Matrix<K> aug(a.rows(), a.cols() + 1);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto rr = rref(aug, tol);
    for (int c : rr.pivot_cols)
        if (c == a.cols()) return std::nullopt; // inconsistent
    if (rr.rank < a.cols()) return std::nullopt;
    Vector<K> x(a.cols(), scalar_ops<K>::zero());
    for (int r = 0; r < rr.rank; ++r) x[rr.pivot_cols[r]] = rr.mat(r, a.cols());
    return x;
}

} // namespace leibniz

#endif
