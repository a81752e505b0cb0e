#ifndef LEIBNIZ_STRUCTURE_TABLE_HPP
#define LEIBNIZ_STRUCTURE_TABLE_HPP

#include "leibniz/matrix.hpp"

#include <array>

namespace leibniz {

inline constexpr int kMaxDim = 8;

// Multiplication table of an algebra on a fixed basis: [e_i, e_j] = sum_k c[i][j][k] e_k.
// No algebraic law is assumed at construction; leibniz_defect certifies the
// left Leibniz identity separately.
template <class K>
class StructureTable {
public:
    StructureTable() = default;
    explicit StructureTable(int n) : n_(n) {
        if (n < 1 || n > kMaxDim) throw error("dimension out of supported range");
        c_.assign(std::size_t(n) * n, Vector<K>(n, scalar_ops<K>::zero()));
    }

    int dim() const { return n_; }

    Vector<K>& c(int i, int j) { return c_[std::size_t(i) * n_ + j]; }
    const Vector<K>& c(int i, int j) const { return c_[std::size_t(i) * n_ + j]; }

    // convenience for table construction: [e_i, e_j] += coeff * e_k (0-based)
    void add_product(int i, int j, int k, const K& coeff) { c(i, j)[k] += coeff; }
    void set_product(int i, int j, const Vector<K>& v) {
        if (static_cast<int>(v.size()) != n_) throw dimension_mismatch{};
        c(i, j) = v;
    }

    friend bool operator==(const StructureTable& a, const StructureTable& b) {
        return a.n_ == b.n_ && a.c_ == b.c_;
    }
    friend bool operator!=(const StructureTable& a, const StructureTable& b) { return !(a == b); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : c_)
            for (const auto& x : v) m = std::max(m, scalar_ops<K>::abs(x));
        return m;
    }

private:
    int n_ = 0;
    std::vector<Vector<K>> c_;
};

// Bilinear extension of the table to arbitrary coordinate vectors.
template <class K>
Vector<K> bracket_vec(const StructureTable<K>& t, const Vector<K>& u, const Vector<K>& v) {
    const int n = t.dim();
    if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
        throw dimension_mismatch{};
    Vector<K> out(n, scalar_ops<K>::zero());
    for (int i = 0; i < n; ++i) {
        if (scalar_ops<K>::is_zero(u[i], 0.0)) continue;
        for (int j = 0; j < n; ++j) {
            if (scalar_ops<K>::is_zero(v[j], 0.0)) continue;
            K f = u[i] * v[j];
            const Vector<K>& cij = t.c(i, j);
            for (int k = 0; k < n; ++k) out[k] += f * cij[k];
        }
    }
    return out;
}

// Presents the table in the basis {x_j} where column j of P holds x_j in old
// coordinates: c'_{ij} = P^{-1} [P u_i, P u_j].
template <class K>
StructureTable<K> apply_base_change(const StructureTable<K>& t, const Matrix<K>& p,
                                    double tol = Tolerances::linear) {
    const int n = t.dim();
    if (p.rows() != n || p.cols() != n) throw dimension_mismatch{};
    Matrix<K> pinv = invert(p, tol); // throws singular_error
    StructureTable<K> out(n);
    std::vector<Vector<K>> cols(n);
    for (int j = 0; j < n; ++j) cols[j] = p.col(j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.set_product(i, j, pinv.apply(bracket_vec(t, cols[i], cols[j])));
    return out;
}

template <class K>
double max_abs_diff(const StructureTable<K>& a, const StructureTable<K>& b) {
    if (a.dim() != b.dim()) throw dimension_mismatch{};
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            const auto& va = a.c(i, j);
            const auto& vb = b.c(i, j);
            for (int k = 0; k < a.dim(); ++k)
                m = std::max(m, scalar_ops<K>::abs(va[k] - vb[k]));
        }
    return m;
}

inline StructureTable<Cplx> to_approx(const StructureTable<GaussianRational>& t) {
    StructureTable<Cplx> out(t.dim());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) {
            Vector<Cplx> v(t.dim());
            for (int k = 0; k < t.dim(); ++k) v[k] = t.c(i, j)[k].to_complex();
            out.set_product(i, j, v);
        }
    return out;
}

inline const StructureTable<Cplx>& to_approx(const StructureTable<Cplx>& t) { return t; }

inline std::optional<StructureTable<GaussianRational>>
reconstruct_table(const StructureTable<Cplx>& t, std::int64_t max_den,
                  double tol = Tolerances::linear) {
    StructureTable<GaussianRational> out(t.dim());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) {
            Vector<GaussianRational> v(t.dim());
            for (int k = 0; k < t.dim(); ++k) {
                auto r = reconstruct_scalar(t.c(i, j)[k], max_den, tol);
                if (!r) return std::nullopt;
                v[k] = *r;
            }
            out.set_product(i, j, v);
        }
    return out;
}

inline Matrix<Cplx> to_approx(const Matrix<GaussianRational>& m) {
    Matrix<Cplx> out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_complex();
    return out;
}

inline std::optional<Matrix<GaussianRational>>
reconstruct_matrix(const Matrix<Cplx>& m, std::int64_t max_den, double tol = Tolerances::linear) {
    Matrix<GaussianRational> out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            auto r = reconstruct_scalar(m(i, j), max_den, tol);
            if (!r) return std::nullopt;
            out(i, j) = *r;
        }
    return out;
}

} // namespace leibniz

#endif
