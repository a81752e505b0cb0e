#ifndef LEIBNIZ_GAUSS_NEWTON_HPP
#define LEIBNIZ_GAUSS_NEWTON_HPP

#include "leibniz/parallel.hpp"
#include "leibniz/scalar.hpp"

#include <vector>

namespace leibniz {

using CVec = std::vector<Cplx>;

// One residual row: value plus sparse gradient entries (column, d residual / d z_col).
struct GnRow {
    Cplx value{};
    std::vector<std::pair<int, Cplx>> grad;
};

// Small overdetermined polynomial system over C. Implementations fill the rows
// (residuals and analytic gradients) at the given point; values-only
// evaluation serves the trial and probe points where gradients are wasted.
class GnSystem {
public:
    virtual ~GnSystem() = default;
    virtual int unknowns() const = 0;
    virtual void eval(const CVec& z, std::vector<GnRow>& rows) const = 0;
    virtual void eval_values(const CVec& z, CVec& values) const {
        std::vector<GnRow> rows;
        eval(z, rows);
        values.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].value;
    }
};

struct GnOptions {
    int max_iterations = 100;
    double residual_tol = 1e-8;
    double stall_factor = 0.97;  // required shrink of the best residual per window
    int stall_window = 10;
    bool acceleration = true;    // geodesic second-order correction
};

struct GnResult {
    CVec z;
    double residual_inf = 1e300;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

// Solve (H + lambda I) x = -g for Hermitian positive semidefinite H via
// Gauss-Jordan with partial pivoting. N stays tiny (<= ~34).
inline bool solve_damped(std::vector<Cplx> h, CVec g, double lambda, int n, CVec& x) {
    for (int i = 0; i < n; ++i) h[std::size_t(i) * n + i] += lambda;
    x.assign(n, Cplx{});
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int c = 0; c < n; ++c) {
        int best = c;
        double bw = std::abs(h[std::size_t(c) * n + c]);
        for (int r = c + 1; r < n; ++r) {
            double w = std::abs(h[std::size_t(r) * n + c]);
            if (w > bw) { bw = w; best = r; }
        }
        if (bw < 1e-300) return false;
        if (best != c) {
            for (int j = 0; j < n; ++j) std::swap(h[std::size_t(c) * n + j], h[std::size_t(best) * n + j]);
            std::swap(g[c], g[best]);
        }
        Cplx piv = h[std::size_t(c) * n + c];
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            Cplx f = h[std::size_t(r) * n + c] / piv;
            if (f == Cplx{}) continue;
            for (int j = c; j < n; ++j) h[std::size_t(r) * n + j] -= f * h[std::size_t(c) * n + j];
            g[r] -= f * g[c];
        }
    }
    for (int i = 0; i < n; ++i) x[i] = -g[i] / h[std::size_t(i) * n + i];
    return true;
}

inline double inf_norm(const std::vector<GnRow>& rows) {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.value));
    return m;
}

inline double sq_norm(const std::vector<GnRow>& rows) {
    double s = 0.0;
    for (const auto& r : rows) s += std::norm(r.value);
    return s;
}

inline double sq_norm_vals(const CVec& vals) {
    double s = 0.0;
    for (const auto& v : vals) s += std::norm(v);
    return s;
}

} // namespace detail

// Levenberg-damped Gauss-Newton with geodesic acceleration. The normal matrix
// J^H J is accumulated directly from the sparse gradient rows. The
// second-order correction matters here: several of the isomorphism systems
// have narrow curved valleys where plain LM creeps for thousands of
// iterations, while the accelerated step walks them in tens.
inline GnResult gauss_newton(const GnSystem& sys, CVec z0, const GnOptions& opt = {}) {
    const int n = sys.unknowns();
    GnResult res;
    res.z = std::move(z0);

    std::vector<GnRow> rows;
    sys.eval(res.z, rows);
    double f_sq = detail::sq_norm(rows);
    res.residual_inf = detail::inf_norm(rows);

    double lambda = 1e-3;
    double best_inf = res.residual_inf;
    int since_progress = 0;

    std::vector<Cplx> h(std::size_t(n) * n);
    CVec g(n), g2(n), step(n), accel(n);
    CVec probe_vals, back_vals, trial_vals;

    for (int it = 0; it < opt.max_iterations; ++it) {
        res.iterations = it;
        if (res.residual_inf <= opt.residual_tol) {
            res.converged = true;
            return res;
        }

        std::fill(h.begin(), h.end(), Cplx{});
        std::fill(g.begin(), g.end(), Cplx{});
        for (const auto& row : rows) {
            for (const auto& [cj, vj] : row.grad) {
                g[cj] += std::conj(vj) * row.value;
                for (const auto& [ck, vk] : row.grad) {
                    if (ck < cj) continue; // fill upper triangle once
                    h[std::size_t(cj) * n + ck] += std::conj(vj) * vk;
                }
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) h[std::size_t(i) * n + j] = std::conj(h[std::size_t(j) * n + i]);

        bool accepted = false;
        for (int tries = 0; tries < 9; ++tries) {
            if (!detail::solve_damped(h, g, lambda, n, step)) {
                lambda *= 10.0;
                continue;
            }
            double step_norm = 0.0;
            for (int i = 0; i < n; ++i) step_norm = std::max(step_norm, std::abs(step[i]));
            if (step_norm < 1e-15) return res; // stationary point

            // Second directional derivative along the step (a finite
            // difference, exact for the quadratic rows). Most restarts either
            // converge or stall within the first dozen iterations, so the
            // correction only starts once a run shows the slow-creep profile;
            // near convergence the difference is cancellation noise anyway.
            bool use_accel = opt.acceleration && step_norm > 1e-5 && it >= 20;
            CVec z_probe = res.z;
            for (int i = 0; i < n; ++i) z_probe[i] += step[i];
            sys.eval_values(z_probe, probe_vals);
            if (use_accel) {
                CVec z_back = res.z;
                for (int i = 0; i < n; ++i) z_back[i] -= step[i];
                sys.eval_values(z_back, back_vals);
                std::fill(g2.begin(), g2.end(), Cplx{});
                for (std::size_t e = 0; e < rows.size(); ++e) {
                    Cplx fvv = probe_vals[e] + back_vals[e] - rows[e].value - rows[e].value;
                    if (fvv == Cplx{}) continue;
                    for (const auto& [cj, vj] : rows[e].grad) g2[cj] += std::conj(vj) * fvv;
                }
                use_accel = detail::solve_damped(h, g2, lambda, n, accel);
                if (use_accel) {
                    double accel_norm = 0.0;
                    for (int i = 0; i < n; ++i)
                        accel_norm = std::max(accel_norm, 0.5 * std::abs(accel[i]));
                    if (accel_norm > 0.75 * step_norm) use_accel = false; // off the geodesic
                }
            }

            CVec z_trial = res.z;
            double f_trial;
            if (use_accel) {
                for (int i = 0; i < n; ++i) z_trial[i] += step[i] + 0.5 * accel[i];
                sys.eval_values(z_trial, trial_vals);
                f_trial = detail::sq_norm_vals(trial_vals);
                if (f_trial >= f_sq) {
                    // retry the plain step before raising the damping
                    z_trial = z_probe;
                    trial_vals = probe_vals;
                    f_trial = detail::sq_norm_vals(trial_vals);
                }
            } else {
                z_trial = z_probe;
                trial_vals = probe_vals;
                f_trial = detail::sq_norm_vals(trial_vals);
            }
            if (f_trial < f_sq) {
                res.z.swap(z_trial);
                sys.eval(res.z, rows); // gradients for the next iteration
                f_sq = f_trial;
                res.residual_inf = detail::inf_norm(rows);
                lambda = std::max(lambda * 0.35, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 6.0;
            if (lambda > 1e10) return res; // stalled
        }
        if (!accepted) return res;

        if (res.residual_inf < best_inf * opt.stall_factor) {
            best_inf = res.residual_inf;
            since_progress = 0;
        } else if (++since_progress >= opt.stall_window) {
            return res; // flatlined away from a root
        }
    }
    res.converged = res.residual_inf <= opt.residual_tol;
    return res;
}

// Second pass from a converged point toward ~1e-14. Rank-deficient solution
// manifolds make the tail linear rather than quadratic, hence the budget.
inline void gauss_newton_polish(const GnSystem& sys, GnResult& res) {
    GnOptions fine;
    fine.max_iterations = 30;
    fine.residual_tol = 1e-14;
    auto better = gauss_newton(sys, res.z, fine);
    if (better.residual_inf < res.residual_inf) res = std::move(better);
}

inline Cplx random_unit_complex(Rng& rng) {
    return {rng.next_normal(), rng.next_normal()};
}

} // namespace leibniz

#endif
