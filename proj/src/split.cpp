#include "leibniz/split.hpp"

namespace leibniz {

namespace {

// Unknowns: the projection pi (n*n, row-major). Equations, for all basis pairs:
//   (I-pi)[pi x, y] = 0     (image closed under left products)
//   (I-pi)[x, pi y] = 0     (image closed under right products)
//   pi [(I-pi) x, y] = 0    (kernel closed under left products)
//   pi [x, (I-pi) y] = 0    (kernel closed under right products)
// plus pi^2 - pi = 0 and tr(pi) = r for the pinned rank r.
class SplitSystem final : public GnSystem {
public:
    SplitSystem(const StructureTable<Cplx>& t, int target_rank)
        : t_(&t), n_(t.dim()), rank_(target_rank) {}

    int unknowns() const override { return n_ * n_; }
    int idx(int i, int j) const { return i * n_ + j; }

    void eval(const CVec& z, std::vector<GnRow>& rows) const override {
        const int n = n_;
        const auto& t = *t_;
        auto pi = [&](int i, int j) -> const Cplx& { return z[std::size_t(i) * n + j]; };

        // u_{ij} = [pi e_i, e_j], v_{ij} = [e_i, pi e_j]
        std::vector<Vector<Cplx>> u(n * n, Vector<Cplx>(n)), v(n * n, Vector<Cplx>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Vector<Cplx>& uu = u[i * n + j];
                Vector<Cplx>& vv = v[i * n + j];
                for (int a = 0; a < n; ++a) {
                    Cplx fu = pi(a, i), fv = pi(a, j);
                    const Vector<Cplx>& caj = t.c(a, j);
                    const Vector<Cplx>& cia = t.c(i, a);
                    for (int k = 0; k < n; ++k) {
                        uu[k] += fu * caj[k];
                        vv[k] += fv * cia[k];
                    }
                }
            }

        // npc[p][j] = pi * c_{pj}; mpc = (I - pi) * c_{pj}
        std::vector<Vector<Cplx>> npc(n * n, Vector<Cplx>(n)), mpc(n * n, Vector<Cplx>(n));
        for (int p = 0; p < n; ++p)
            for (int j = 0; j < n; ++j) {
                const Vector<Cplx>& c = t.c(p, j);
                Vector<Cplx>& out = npc[p * n + j];
                for (int k = 0; k < n; ++k)
                    for (int m = 0; m < n; ++m) out[k] += pi(k, m) * c[m];
                Vector<Cplx>& mo = mpc[p * n + j];
                for (int k = 0; k < n; ++k) mo[k] = c[k] - out[k];
            }

        auto apply_pi = [&](const Vector<Cplx>& x) {
            Vector<Cplx> out(n);
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) out[k] += pi(k, m) * x[m];
            return out;
        };

        rows.clear();
        rows.reserve(std::size_t(4) * n * n * n + n * n + 1);

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vector<Cplx>& uu = u[i * n + j];
                const Vector<Cplx>& vv = v[i * n + j];
                Vector<Cplx> pu = apply_pi(uu), pv = apply_pi(vv);
                Vector<Cplx> w(n), x(n), pw(n), px(n);
                for (int k = 0; k < n; ++k) {
                    w[k] = t.c(i, j)[k] - uu[k];
                    x[k] = t.c(i, j)[k] - vv[k];
                }
                pw = apply_pi(w);
                px = apply_pi(x);

                for (int k = 0; k < n; ++k) {
                    { // (I-pi) u = 0
                        GnRow row;
                        row.value = uu[k] - pu[k];
                        for (int p = 0; p < n; ++p) {
                            Cplx val = mpc[p * n + j][k]; // d/d pi_{p,i}
                            if (p == k) val -= uu[i];     // shared (k,i) slot
                            row.grad.emplace_back(idx(p, i), val);
                        }
                        for (int q = 0; q < n; ++q)
                            if (q != i) row.grad.emplace_back(idx(k, q), -uu[q]);
                        rows.push_back(std::move(row));
                    }
                    { // (I-pi) v = 0
                        GnRow row;
                        row.value = vv[k] - pv[k];
                        for (int p = 0; p < n; ++p) {
                            Cplx val = mpc[i * n + p][k]; // d/d pi_{p,j}
                            if (p == k) val -= vv[j];
                            row.grad.emplace_back(idx(p, j), val);
                        }
                        for (int q = 0; q < n; ++q)
                            if (q != j) row.grad.emplace_back(idx(k, q), -vv[q]);
                        rows.push_back(std::move(row));
                    }
                    { // pi w = 0 with w = c_{ij} - u_{ij}
                        GnRow row;
                        row.value = pw[k];
                        for (int p = 0; p < n; ++p) {
                            Cplx val = -npc[p * n + j][k];
                            if (p == k) val += w[i];
                            row.grad.emplace_back(idx(p, i), val);
                        }
                        for (int q = 0; q < n; ++q)
                            if (q != i) row.grad.emplace_back(idx(k, q), w[q]);
                        rows.push_back(std::move(row));
                    }
                    { // pi x = 0 with x = c_{ij} - v_{ij}
                        GnRow row;
                        row.value = px[k];
                        for (int p = 0; p < n; ++p) {
                            Cplx val = -npc[i * n + p][k];
                            if (p == k) val += x[j];
                            row.grad.emplace_back(idx(p, j), val);
                        }
                        for (int q = 0; q < n; ++q)
                            if (q != j) row.grad.emplace_back(idx(k, q), x[q]);
                        rows.push_back(std::move(row));
                    }
                }
            }

        // pi^2 - pi = 0
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                GnRow row;
                Cplx acc{};
                for (int m = 0; m < n; ++m) acc += pi(i, m) * pi(m, j);
                row.value = acc - pi(i, j);
                for (int q = 0; q < n; ++q) {
                    Cplx g = pi(q, j);
                    if (q == j) g += pi(i, i);
                    if (q == j) g -= Cplx{1.0, 0.0};
                    row.grad.emplace_back(idx(i, q), g);
                }
                for (int p = 0; p < n; ++p) {
                    if (p == i) continue;
                    row.grad.emplace_back(idx(p, j), pi(i, p));
                }
                rows.push_back(std::move(row));
            }

        // tr(pi) = rank
        GnRow tr_row;
        Cplx tr{};
        for (int m = 0; m < n; ++m) tr += pi(m, m);
        tr_row.value = tr - Cplx(double(rank_), 0.0);
        for (int m = 0; m < n; ++m) tr_row.grad.emplace_back(idx(m, m), Cplx{1.0, 0.0});
        rows.push_back(std::move(tr_row));
    }

private:
    const StructureTable<Cplx>* t_;
    int n_;
    int rank_;
};

Subspace<Cplx> column_space(const Matrix<Cplx>& m, double tol) {
    std::vector<Vector<Cplx>> cols;
    for (int j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
    return span(m.rows(), cols, tol);
}

} // namespace

bool verify_split(const StructureTable<Cplx>& t, const Subspace<Cplx>& a, const Subspace<Cplx>& b,
                  double tol) {
    const int n = t.dim();
    if (a.dim() < 1 || b.dim() < 1 || a.dim() + b.dim() != n) return false;
    if (sum(a, b).dim() != n) return false;
    Vector<Cplx> e(n, Cplx{});
    auto closed = [&](const Subspace<Cplx>& s) {
        for (int r = 0; r < s.dim(); ++r) {
            Vector<Cplx> u = s.basis_row(r);
            for (int j = 0; j < n; ++j) {
                e[j] = Cplx{1.0, 0.0};
                if (!s.contains(bracket_vec(t, u, e), tol) || !s.contains(bracket_vec(t, e, u), tol)) {
                    e[j] = Cplx{};
                    return false;
                }
                e[j] = Cplx{};
            }
        }
        return true;
    };
    return closed(a) && closed(b);
}

bool verify_split_exact(const StructureTable<GaussianRational>& t,
                        const Subspace<GaussianRational>& a, const Subspace<GaussianRational>& b) {
    const int n = t.dim();
    if (a.dim() < 1 || b.dim() < 1 || a.dim() + b.dim() != n) return false;
    if (sum(a, b).dim() != n) return false;
    Vector<GaussianRational> e(n, GaussianRational{});
    auto closed = [&](const Subspace<GaussianRational>& s) {
        for (int r = 0; r < s.dim(); ++r) {
            auto u = s.basis_row(r);
            for (int j = 0; j < n; ++j) {
                e[j] = GaussianRational(1);
                bool ok = s.contains(bracket_vec(t, u, e)) && s.contains(bracket_vec(t, e, u));
                e[j] = GaussianRational{};
                if (!ok) return false;
            }
        }
        return true;
    };
    return closed(a) && closed(b);
}

namespace {

SplitOutcome split_core(const StructureTable<Cplx>& t,
                        const StructureTable<GaussianRational>* exact_t, const SolverConfig& cfg) {
    const int n = t.dim();
    SplitOutcome out;
    if (n < 2) {
        out.kind = SplitOutcome::Kind::non_split_certified;
        out.reason = "dimension < 2 admits no direct sum of two nontrivial ideals";
        return out;
    }

    GnOptions opt;
    opt.max_iterations = cfg.max_iterations;
    opt.residual_tol = cfg.residual_tol;
    const double scale = std::max(1.0, t.max_abs());

    struct Hit {
        bool ok = false;
        Subspace<Cplx> a, b;
        Matrix<Cplx> pi;
    };

    auto try_one = [&](int restart) {
        Hit hit;
        SplitSystem sys(t, 1 + restart % (n - 1));
        Rng rng(cfg.seed, 0x53504c00ULL + static_cast<std::uint64_t>(restart));
        CVec z(sys.unknowns());
        for (auto& zi : z) zi = 0.5 * random_unit_complex(rng);
        auto res = gauss_newton(sys, std::move(z), opt);
        if (!res.converged) return hit;
        gauss_newton_polish(sys, res);
        Matrix<Cplx> pi(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) pi(i, j) = res.z[std::size_t(i) * n + j];
        if (max_abs_diff(pi * pi, pi) > 1e-6 * scale) return hit;
        Subspace<Cplx> image = column_space(pi, 1e-6);
        Subspace<Cplx> ker = kernel(pi, 1e-6);
        if (!verify_split(t, image, ker, std::max(cfg.residual_tol, 1e-7))) return hit;
        hit.ok = true;
        hit.a = std::move(image);
        hit.b = std::move(ker);
        hit.pi = std::move(pi);
        return hit;
    };

    const int chunk = 8;
    for (int base = 0; base < cfg.restarts; base += chunk) {
        const int hi = std::min(cfg.restarts, base + chunk);
        std::vector<Hit> hits(hi - base);
        parallel_for(hi - base, cfg.policy, [&](int off) { hits[off] = try_one(base + off); });
        for (int off = 0; off < hi - base; ++off) {
            if (!hits[off].ok) continue;
            out.kind = SplitOutcome::Kind::split;
            out.ideal_a = hits[off].a;
            out.ideal_b = hits[off].b;
            out.restarts = base + off + 1;
            if (exact_t) {
                if (auto pe = reconstruct_matrix(hits[off].pi, cfg.max_den)) {
                    if (*pe * *pe == *pe) {
                        std::vector<Vector<GaussianRational>> cols;
                        for (int j = 0; j < n; ++j) cols.push_back(pe->col(j));
                        Subspace<GaussianRational> image = span(n, cols);
                        Subspace<GaussianRational> ker = kernel(*pe);
                        if (verify_split_exact(*exact_t, image, ker)) {
                            out.exact_ideals = std::make_pair(std::move(image), std::move(ker));
                            out.exact_certified = true;
                        }
                    }
                }
            }
            return out;
        }
    }
    out.kind = SplitOutcome::Kind::probably_non_split;
    out.restarts = cfg.restarts;
    return out;
}

} // namespace

SplitOutcome split_search(const StructureTable<Cplx>& t, const SolverConfig& cfg) {
    require_leibniz(t);
    return split_core(t, nullptr, cfg);
}

SplitOutcome split_search(const StructureTable<GaussianRational>& t, const SolverConfig& cfg) {
    require_leibniz(t);
    return split_core(to_approx(t), &t, cfg);
}

} // namespace leibniz
