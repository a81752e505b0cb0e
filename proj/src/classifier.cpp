#include "leibniz/classifier.hpp"

#include "leibniz/constructive.hpp"

#include <algorithm>
#include <array>

namespace leibniz {

namespace {

SolverConfig presearch_cfg(const SolverConfig& cfg) {
    SolverConfig pre = cfg;
    pre.restarts = std::min(cfg.restarts, 12);
    pre.max_iterations = std::min(cfg.max_iterations, 40);
    return pre;
}

Witness canonicalize_family_witness(int family, Cplx recovered, const Witness& w, Cplx& canon) {
    canon = canonical_param(family, recovered);
    if (std::abs(canon - recovered) < 1e-12) return w;
    // compose with the reciprocal identification phi(x1) = c y2, phi(x2) = y1
    Matrix<Cplx> recip = Matrix<Cplx>::identity(4);
    recip(0, 0) = Cplx{};
    recip(1, 1) = Cplx{};
    recip(1, 0) = recovered;
    recip(0, 1) = Cplx{1.0, 0.0};
    Witness out = w;
    out.p = recip * w.p;
    out.exact_p.reset();
    out.exact_certified = false;
    return out;
}

// Cheap candidate-ordering signature for the branches whose A^2 is central:
// the bracket descends to a form (or pencil of forms) on A / A^2, and rank
// data of that pencil separates most same-fingerprint classes. Used only to
// order the shortlist; never to exclude a candidate.
struct PencilSignature {
    int kind = -1; // -1: unavailable, 1: single form, 2: pencil
    int rank = 0, rank_sym = 0, rank_skew = 0;  // single form
    int det_class = 0; // pencil: 0 det-form vanishes, 1 double root, 2 distinct roots
    // cosquare trace pair of an invertible single form; invariant under
    // congruence and under rescaling of the form
    std::optional<Cplx> cosq_tr, cosq_tr_inv;

    friend bool operator==(const PencilSignature& a, const PencilSignature& b) {
        return a.kind == b.kind && a.rank == b.rank && a.rank_sym == b.rank_sym &&
               a.rank_skew == b.rank_skew && a.det_class == b.det_class;
    }

    bool cosquare_close(const PencilSignature& o) const {
        if (!cosq_tr || !o.cosq_tr || !cosq_tr_inv || !o.cosq_tr_inv) return false;
        auto near = [](Cplx x, Cplx y) { return std::abs(x - y) < 1e-6 * (1.0 + std::abs(x)); };
        return near(*cosq_tr, *o.cosq_tr) && near(*cosq_tr_inv, *o.cosq_tr_inv);
    }
};

PencilSignature quotient_signature(const StructureTable<Cplx>& t, double tol = 1e-7) {
    PencilSignature sig;
    const int n = t.dim();
    std::vector<Vector<Cplx>> prods;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) prods.push_back(t.c(i, j));
    auto sq = span(n, prods, tol);
    const int d = sq.dim();
    if (d != 1 && d != 2) return sig;
    // the descent is only well defined when A^2 is central
    Vector<Cplx> e(n, Cplx{});
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < n; ++j) {
            e[j] = Cplx{1.0, 0.0};
            double s = std::max(1.0, t.max_abs());
            if (vec_inf_norm(bracket_vec(t, sq.basis_row(r), e)) > tol * s ||
                vec_inf_norm(bracket_vec(t, e, sq.basis_row(r))) > tol * s) {
                e[j] = Cplx{};
                return sig;
            }
            e[j] = Cplx{};
        }
    // complement = standard vectors at non-pivot coordinates
    std::vector<bool> pivot(n, false);
    for (int r = 0; r < d; ++r) {
        int lead = 0;
        while (lead < n && std::abs(sq.basis()(r, lead)) == 0.0) ++lead;
        pivot[lead] = true;
    }
    std::vector<Vector<Cplx>> v;
    for (int j = 0; j < n; ++j) {
        if (pivot[j]) continue;
        Vector<Cplx> u(n, Cplx{});
        u[j] = Cplx{1.0, 0.0};
        v.push_back(std::move(u));
    }
    const int m = static_cast<int>(v.size());
    Matrix<Cplx> basis(n, d);
    for (int k = 0; k < n; ++k)
        for (int r = 0; r < d; ++r) basis(k, r) = sq.basis()(r, k);
    std::vector<Matrix<Cplx>> forms(d, Matrix<Cplx>(m, m));
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            auto coords = solve_linear(basis, bracket_vec(t, v[p], v[q]), tol);
            if (!coords) return sig;
            for (int r = 0; r < d; ++r) forms[r](p, q) = (*coords)[r];
        }
    if (d == 1) {
        sig.kind = 1;
        Matrix<Cplx> s(m, m), k(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                s(i, j) = 0.5 * (forms[0](i, j) + forms[0](j, i));
                k(i, j) = 0.5 * (forms[0](i, j) - forms[0](j, i));
            }
        sig.rank = rank(forms[0], tol);
        sig.rank_sym = rank(s, tol);
        sig.rank_skew = rank(k, tol);
        if (sig.rank == m) {
            try {
                Matrix<Cplx> c = invert(forms[0].transpose(), tol) * forms[0];
                Cplx tr{}, tri{};
                Matrix<Cplx> cinv = invert(c, tol);
                for (int i = 0; i < m; ++i) {
                    tr += c(i, i);
                    tri += cinv(i, i);
                }
                sig.cosq_tr = tr;
                sig.cosq_tr_inv = tri;
            } catch (const singular_error&) {
            }
        }
        return sig;
    }
    if (m != 2) return sig;
    sig.kind = 2;
    auto det2 = [](const Matrix<Cplx>& b) { return b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0); };
    Cplx a = det2(forms[0]);
    Cplx c = det2(forms[1]);
    Matrix<Cplx> sum = forms[0] + forms[1];
    Cplx b = det2(sum) - a - c;
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-30});
    if (scale < tol) {
        sig.det_class = 0;
    } else {
        Cplx disc = b * b - 4.0 * a * c;
        sig.det_class = std::abs(disc) < tol * scale * scale ? 1 : 2;
    }
    return sig;
}

const PencilSignature& catalog_signature(int index) {
    static std::array<PencilSignature, 26> cache;
    static std::array<bool, 26> ready{};
    if (!ready[index]) {
        ClassId id{index};
        if (is_parametric(index)) id.param = GaussianRational(Rational(5, 2));
        cache[index] = quotient_signature(instantiate_approx(id));
        ready[index] = true;
    }
    return cache[index];
}

void certify_against_catalog(ClassificationResult& res,
                             const StructureTable<GaussianRational>* exact_t,
                             const SolverConfig& cfg) {
    if (!exact_t || res.witness.exact_certified || res.param) return;
    if (auto pe = reconstruct_matrix(res.witness.p, cfg.max_den)) {
        try {
            auto check = verify_witness(*exact_t, instantiate(ClassId{res.index}), *pe);
            if (check.exact_ok && *check.exact_ok) {
                res.witness.exact_p = std::move(*pe);
                res.witness.exact_certified = true;
            }
        } catch (const singular_error&) {
        }
    }
}

ClassificationResult classify_core(const StructureTable<Cplx>& t,
                                   const StructureTable<GaussianRational>* exact_t,
                                   const SolverConfig& cfg) {
    if (t.dim() != 4) throw dimension_mismatch{};
    require_leibniz(t);

    Fingerprint fp = fingerprint(t);
    if (!fp.nilpotent()) throw not_nilpotent_error{};
    if (fp.lie) throw is_lie_error{};

    auto shortlist = shortlist_classes(fp);

    // deterministic derivation route where one exists (criterion suites that
    // need the pure solver path disable it via the config flag)
    if (cfg.derivation_shortcuts) {
        try {
            if (auto route = classify_constructive(t)) {
                ClassificationResult res;
                res.index = route->index;
                res.param = route->param;
                if (route->param)
                    if (auto exact = reconstruct_scalar(*route->param, cfg.max_den))
                        res.param_exact = *exact;
                res.witness.p = route->witness;
                res.witness.residual =
                    verify_witness(t,
                                   instantiate_approx(route->index,
                                                      route->param ? *route->param : Cplx{}),
                                   route->witness)
                        .residual;
                certify_against_catalog(res, exact_t, cfg);
                return res;
            }
        } catch (const error&) {
            // fall through to the solver
        }
    }

    // Candidate schedule: the quotient-form signature is an isomorphism
    // invariant wherever it is defined, so mismatched candidates only enter
    // in the late rounds (as a safety net against a borderline rank call);
    // parametric families come first inside each tier since their larger
    // solution varieties convert restarts at a higher rate.
    auto input_sig = quotient_signature(t);
    auto parametric_first = [](std::vector<int>& v) {
        std::stable_partition(v.begin(), v.end(), [](int c) { return is_parametric(c); });
    };
    std::vector<int> preferred = shortlist, deferred;
    if (input_sig.kind > 0) {
        preferred.clear();
        for (int cand : shortlist)
            (catalog_signature(cand) == input_sig ? preferred : deferred).push_back(cand);
    }
    parametric_first(preferred);
    parametric_first(deferred);
    // a non-parametric candidate whose cosquare traces also match outranks the
    // parametric tier (the family signature cannot pin its free parameter)
    std::stable_partition(preferred.begin(), preferred.end(), [&](int cand) {
        return !is_parametric(cand) && catalog_signature(cand).cosquare_close(input_sig);
    });

    // Interleaved escalation: the true candidate usually converges within a
    // few restarts, so failing candidates only burn small budgets early; the
    // first rounds also run with a short iteration leash. Split inputs cannot
    // match any candidate (the catalog is non-split), so the split search
    // runs after the candidates rather than before them.
    SolverConfig fast = cfg;
    fast.max_iterations = std::min(cfg.max_iterations, 50);
    const int budgets[] = {4, 12, 32, 72, 1 << 30};
    int lo = 0;
    for (int round = 0; round < 5 && lo < cfg.restarts; ++round) {
        const SolverConfig& round_cfg = round < 3 ? fast : cfg;
        int hi = std::min(cfg.restarts, lo + budgets[round]);
        std::vector<int> order = preferred;
        if (round >= 2) order.insert(order.end(), deferred.begin(), deferred.end());
        for (int cand : order) {
            if (is_parametric(cand)) {
                auto match = find_isomorphism_parametric_range(t, cand, round_cfg, lo, hi);
                if (match) {
                    ClassificationResult res;
                    res.index = cand;
                    Cplx canon;
                    res.witness =
                        canonicalize_family_witness(cand, match->param, match->witness, canon);
                    res.param = canon;
                    if (auto exact = reconstruct_scalar(canon, cfg.max_den))
                        res.param_exact = *exact;
                    if (std::abs(canon - match->param) < 1e-12 && match->witness.exact_certified)
                        res.param_exact = match->exact_param;
                    return res;
                }
                continue;
            }
            auto verdict = find_isomorphism_range(t, instantiate_approx(ClassId{cand}), round_cfg,
                                                  lo, hi, true, true);
            if (verdict.found()) {
                ClassificationResult res;
                res.index = cand;
                res.witness = std::move(*verdict.witness);
                certify_against_catalog(res, exact_t, cfg);
                return res;
            }
        }
        lo = hi;
    }

    auto full = split_search(t, cfg);
    if (full.found()) throw is_split_error(std::move(full));
    throw unclassified_error(fp);
}

} // namespace

Cplx canonical_param(int family_index, Cplx p) {
    if (family_index != 5) return p;
    if (std::abs(p) < 1e-14) return p;
    Cplx inv = Cplx{1.0, 0.0} / p;
    double ap = std::abs(p), ai = std::abs(inv);
    if (ap < ai - 1e-9) return p;
    if (ai < ap - 1e-9) return inv;
    return p.imag() >= 0.0 ? p : inv; // |c| = 1 tie: keep the upper half plane
}

std::string ClassificationResult::class_name() const {
    std::string s = class_spec(index).name;
    if (param_exact) return s + "(" + format_scalar(*param_exact) + ")";
    if (param) return s + "(" + format_scalar(*param) + ")";
    return s;
}

ClassificationResult classify(const StructureTable<Cplx>& t, const SolverConfig& cfg) {
    return classify_core(t, nullptr, cfg);
}

ClassificationResult classify(const StructureTable<GaussianRational>& t, const SolverConfig& cfg) {
    return classify_core(to_approx(t), &t, cfg);
}

namespace {

ClassificationResult forms_core(const StructureTable<Cplx>& t, const SolverConfig& cfg) {
    if (t.dim() != 4) throw dimension_mismatch{};
    require_leibniz(t);

    Fingerprint fp = fingerprint(t);
    if (!fp.nilpotent()) throw not_nilpotent_error{};
    if (fp.lie) throw is_lie_error{};
    if (fp.dim_sq() != 2 || fp.dim_leib != 1)
        throw wrong_shape("form pipeline needs dim A^2 = 2 and dim Leib = 1");

    auto pre = split_search(t, presearch_cfg(cfg));
    if (pre.found()) throw is_split_error(std::move(pre));

    auto route = forms_route(t);
    ClassificationResult res;
    res.index = route.index;
    res.method = ClassificationResult::Method::form_pipeline;
    res.witness.p = route.witness;
    res.witness.residual =
        verify_witness(t, instantiate_approx(ClassId{route.index}), route.witness).residual;
    return res;
}

} // namespace

ClassificationResult classify_via_forms(const StructureTable<Cplx>& t, const SolverConfig& cfg) {
    return forms_core(t, cfg);
}

ClassificationResult classify_via_forms(const StructureTable<GaussianRational>& t,
                                        const SolverConfig& cfg) {
    return forms_core(to_approx(t), cfg);
}

PairwiseReport pairwise_report(const std::vector<ClassId>& instances, const SolverConfig& cfg) {
    PairwiseReport report;
    const int n = static_cast<int>(instances.size());

    std::vector<StructureTable<Cplx>> tables;
    std::vector<Fingerprint> fps;
    tables.reserve(n);
    for (const auto& id : instances) {
        tables.push_back(instantiate_approx(id));
        fps.push_back(fingerprint(tables.back()));
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            PairVerdict pv;
            pv.a = instances[i];
            pv.b = instances[j];
            pv.within_family = instances[i].index == instances[j].index;

            auto diff = fingerprint_diff(fps[i], fps[j]);
            if (!diff.empty()) {
                pv.verdict.kind = IsoVerdict::Kind::distinguished;
                pv.verdict.distinguished_by = std::move(diff);
                ++report.distinguished;
                report.pairs.push_back(std::move(pv));
                continue;
            }
            pv.verdict = find_isomorphism_range(tables[i], tables[j], cfg, 0, cfg.restarts, true,
                                                true /* generic solver only: the report must not
                                                        presuppose catalog distinctness */);
            if (pv.verdict.found()) {
                if (pv.within_family) {
                    ++report.witnesses_within_family;
                    Identification ident;
                    ident.family = instances[i].index;
                    ident.param_a = *instances[i].param;
                    ident.param_b = *instances[j].param;
                    ident.reciprocal = ident.param_a * ident.param_b == GaussianRational(1);
                    report.identifications.push_back(ident);
                } else {
                    ++report.cross_class_witnesses; // a finding
                }
            } else {
                ++report.probabilistic;
            }
            report.pairs.push_back(std::move(pv));
        }
    }
    return report;
}

} // namespace leibniz
