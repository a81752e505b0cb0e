#ifndef LEIBNIZ_INVARIANTS_HPP
#define LEIBNIZ_INVARIANTS_HPP

#include "leibniz/structure_table.hpp"

#include <optional>
#include <string>
#include <tuple>

namespace leibniz {

struct not_leibniz : error {
    explicit not_leibniz(double defect)
        : error("table violates the left Leibniz identity (defect " + std::to_string(defect) + ")"),
          defect(defect) {}
    double defect;
};

struct DefectReport {
    double value = 0.0;
    std::array<int, 3> worst_triple{0, 0, 0}; // 0-based basis indices (a, b, c)
};

// Convention fixed throughout: LEFT Leibniz identity
//     [a, [b, c]] = [[a, b], c] + [b, [a, c]]
// (left multiplications are derivations). The defect is the worst violation
// over basis triples in the sup norm; exactly zero on the exact backend iff
// the table is a left Leibniz algebra.
template <class K>
DefectReport leibniz_defect(const StructureTable<K>& t) {
    const int n = t.dim();
    DefectReport rep;
    Vector<K> basis_a(n, scalar_ops<K>::zero());
    for (int a = 0; a < n; ++a) {
        basis_a[a] = scalar_ops<K>::one();
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                Vector<K> lhs = bracket_vec(t, basis_a, t.c(b, c));
                Vector<K> rhs1 = t.c(a, b);
                Vector<K> rhs1b(n, scalar_ops<K>::zero());
                // [[a,b],c] with [a,b] expressed on the basis
                for (int k = 0; k < n; ++k) {
                    if (scalar_ops<K>::is_zero(rhs1[k], 0.0)) continue;
                    const Vector<K>& ckc = t.c(k, c);
                    for (int m = 0; m < n; ++m) rhs1b[m] += rhs1[k] * ckc[m];
                }
                Vector<K> rhs2(n, scalar_ops<K>::zero());
                const Vector<K>& cac = t.c(a, c);
                for (int k = 0; k < n; ++k) {
                    if (scalar_ops<K>::is_zero(cac[k], 0.0)) continue;
                    const Vector<K>& cbk = t.c(b, k);
                    for (int m = 0; m < n; ++m) rhs2[m] += cac[k] * cbk[m];
                }
                double dev = 0.0;
                for (int m = 0; m < n; ++m)
                    dev = std::max(dev, scalar_ops<K>::abs(lhs[m] - rhs1b[m] - rhs2[m]));
                if (dev > rep.value) {
                    rep.value = dev;
                    rep.worst_triple = {a, b, c};
                }
            }
        }
        basis_a[a] = scalar_ops<K>::zero();
    }
    return rep;
}

template <class K>
bool is_leibniz(const StructureTable<K>& t, double tol = Tolerances::residual) {
    double d = leibniz_defect(t).value;
    if constexpr (scalar_ops<K>::exact) return d == 0.0;
    return within_tol(d, tol, std::max(1.0, t.max_abs()));
}

template <class K>
void require_leibniz(const StructureTable<K>& t, double tol = Tolerances::residual) {
    double d = leibniz_defect(t).value;
    bool ok = scalar_ops<K>::exact ? d == 0.0 : within_tol(d, tol, std::max(1.0, t.max_abs()));
    if (!ok) throw not_leibniz(d);
}

// Leib(A) = span{[a,a]}; over characteristic zero the polarized generating set
// {c_ij + c_ji : i <= j} spans the same ideal.
template <class K>
Subspace<K> leib_ideal(const StructureTable<K>& t, double tol = Tolerances::linear) {
    const int n = t.dim();
    std::vector<Vector<K>> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Vector<K> s(n);
            for (int k = 0; k < n; ++k) s[k] = t.c(i, j)[k] + t.c(j, i)[k];
            gens.push_back(std::move(s));
        }
    return span(n, gens, tol);
}

template <class K>
bool is_lie(const StructureTable<K>& t, double tol = Tolerances::residual) {
    require_leibniz(t, tol);
    return leib_ideal(t).dim() == 0;
}

struct SeriesReport {
    std::vector<int> dims;                 // dim A^1, dim A^2, ... until stabilization
    std::optional<int> nilpotency_class;   // c with A^{c+1} = 0 != A^c, when nilpotent
};

// Lower central series A^1 = A, A^i = [A, A^{i-1}].
template <class K>
SeriesReport lower_central_series(const StructureTable<K>& t, double tol = Tolerances::linear) {
    const int n = t.dim();
    SeriesReport rep;
    Subspace<K> cur = Subspace<K>::full(n);
    rep.dims.push_back(n);
    Vector<K> ei(n, scalar_ops<K>::zero());
    while (true) {
        std::vector<Vector<K>> gens;
        for (int i = 0; i < n; ++i) {
            ei[i] = scalar_ops<K>::one();
            for (int r = 0; r < cur.dim(); ++r)
                gens.push_back(bracket_vec(t, ei, cur.basis_row(r)));
            ei[i] = scalar_ops<K>::zero();
        }
        Subspace<K> next = gens.empty() ? Subspace<K>(n) : span(n, gens, tol);
        int d = next.dim();
        rep.dims.push_back(d);
        if (d == 0) {
            rep.nilpotency_class = static_cast<int>(rep.dims.size()) - 1;
            break;
        }
        if (d == rep.dims[rep.dims.size() - 2]) break; // stabilized above zero
        cur = std::move(next);
    }
    return rep;
}

// Left/right multiplication maps stacked over the basis; centers are their
// kernels, the full center the kernel of both stacks together.
template <class K>
std::tuple<Subspace<K>, Subspace<K>, Subspace<K>> centers(const StructureTable<K>& t,
                                                          double tol = Tolerances::linear) {
    const int n = t.dim();
    Matrix<K> left(n * n, n), right(n * n, n), both(2 * n * n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                left(j * n + k, i) = t.c(i, j)[k];   // [x, e_j] coefficient of e_k
                right(j * n + k, i) = t.c(j, i)[k];  // [e_j, x]
            }
    for (int r = 0; r < n * n; ++r)
        for (int i = 0; i < n; ++i) {
            both(r, i) = left(r, i);
            both(n * n + r, i) = right(r, i);
        }
    return {kernel(left, tol), kernel(right, tol), kernel(both, tol)};
}

// Basis-independent invariants used to shortlist catalog classes and certify
// non-isomorphism cheaply.
struct Fingerprint {
    int n = 0;
    std::vector<int> lcs_dims; // dim A^1, A^2, ... (ends at 0 when nilpotent)
    std::optional<int> nilpotency_class;
    int dim_leib = 0;
    int dim_zl = 0;
    int dim_zr = 0;
    int dim_z = 0;
    bool lie = false;

    friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
        return a.n == b.n && a.lcs_dims == b.lcs_dims && a.dim_leib == b.dim_leib &&
               a.dim_zl == b.dim_zl && a.dim_zr == b.dim_zr && a.dim_z == b.dim_z && a.lie == b.lie;
    }
    friend bool operator!=(const Fingerprint& a, const Fingerprint& b) { return !(a == b); }

    bool nilpotent() const { return nilpotency_class.has_value(); }
    int dim_sq() const { return lcs_dims.size() > 1 ? lcs_dims[1] : 0; }
    int dim_cube() const { return lcs_dims.size() > 2 ? lcs_dims[2] : 0; }

    std::string str() const {
        std::string s = "lcs=[";
        for (std::size_t i = 0; i < lcs_dims.size(); ++i)
            s += (i ? "," : "") + std::to_string(lcs_dims[i]);
        s += "] leib=" + std::to_string(dim_leib) + " zl=" + std::to_string(dim_zl) +
             " zr=" + std::to_string(dim_zr) + " z=" + std::to_string(dim_z) +
             (lie ? " lie" : " non-lie");
        return s;
    }
};

// Names of fields that differ; the DistinguishedBy payload.
inline std::vector<std::string> fingerprint_diff(const Fingerprint& a, const Fingerprint& b) {
    std::vector<std::string> out;
    if (a.n != b.n) out.push_back("dim");
    if (a.lcs_dims != b.lcs_dims) out.push_back("lcs_dims");
    if (a.dim_leib != b.dim_leib) out.push_back("dim_leib");
    if (a.dim_zl != b.dim_zl) out.push_back("dim_zl");
    if (a.dim_zr != b.dim_zr) out.push_back("dim_zr");
    if (a.dim_z != b.dim_z) out.push_back("dim_z");
    if (a.lie != b.lie) out.push_back("is_lie");
    return out;
}

template <class K>
Fingerprint fingerprint(const StructureTable<K>& t, double tol = Tolerances::linear) {
    require_leibniz(t);
    Fingerprint fp;
    fp.n = t.dim();
    auto series = lower_central_series(t, tol);
    fp.lcs_dims = series.dims;
    fp.nilpotency_class = series.nilpotency_class;
    fp.dim_leib = leib_ideal(t, tol).dim();
    auto [zl, zr, z] = centers(t, tol);
    fp.dim_zl = zl.dim();
    fp.dim_zr = zr.dim();
    fp.dim_z = z.dim();
    fp.lie = fp.dim_leib == 0;
    return fp;
}

} // namespace leibniz

#endif
