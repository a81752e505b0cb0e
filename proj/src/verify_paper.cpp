#include "leibniz/verify_paper.hpp"

#include "leibniz/proof_replay.hpp"
#include "leibniz/split.hpp"

#include <sstream>

namespace leibniz {

namespace {

using GQ = GaussianRational;

std::string dims_str(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

std::vector<ClassId> grid_instances(const VerifyConfig& cfg) {
    if (cfg.grid == "smoke") {
        std::vector<ClassId> out;
        for (int k = 1; k <= 25; ++k) {
            if (!is_parametric(k)) {
                out.emplace_back(k);
                continue;
            }
            auto grid = default_param_grid(k);
            out.emplace_back(k, grid[0]);
            out.emplace_back(k, grid[1]);
        }
        return out;
    }
    return default_instances();
}

StructureTable<GQ> instance_table(const VerifyConfig& cfg, const ClassId& id) {
    auto it = cfg.table_override.find(id.str());
    if (it != cfg.table_override.end()) return it->second;
    return instantiate(id);
}

} // namespace

FuzzCase fuzz_case(const std::vector<ClassId>& instances, Rng& rng) {
    FuzzCase out;
    out.id = instances[rng.next_int(static_cast<int>(instances.size()))];
    auto base = instantiate_approx(out.id);
    for (;;) {
        Matrix<Cplx> p(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) p(i, j) = random_unit_complex(rng);
        try {
            out.table = apply_base_change(base, p, 1e-3); // reject near-singular draws
            return out;
        } catch (const singular_error&) {
            ++out.resampled;
        }
    }
}

void validate_catalog(Report& report, const VerifyConfig& cfg) {
    SolverConfig solver = cfg.solver;
    solver.seed = cfg.seed;

    for (const auto& id : grid_instances(cfg)) {
        const std::string name = "catalog/" + id.str();
        StructureTable<GQ> t;
        try {
            t = instance_table(cfg, id);
        } catch (const error& e) {
            report.fail(name, e.what());
            continue;
        }

        auto defect = leibniz_defect(t);
        if (defect.value != 0.0) {
            report.fail(name + "/leibniz", "defect " + std::to_string(defect.value) + " at triple (" +
                                               std::to_string(defect.worst_triple[0] + 1) + "," +
                                               std::to_string(defect.worst_triple[1] + 1) + "," +
                                               std::to_string(defect.worst_triple[2] + 1) + ")");
            continue;
        }
        report.pass(name + "/leibniz", "defect 0 exactly");

        auto fp = fingerprint(t);
        if (!fp.nilpotent()) {
            report.fail(name + "/nilpotent", "series " + dims_str(fp.lcs_dims));
            continue;
        }
        if (fp.lie) {
            report.fail(name + "/non-lie", "Leib(A) = 0");
            continue;
        }

        const auto& spec = class_spec(id.index);
        bool dims_ok = fp.dim_sq() == spec.hypothesis.dim_sq &&
                       (!spec.hypothesis.dim_cube || fp.dim_cube() == *spec.hypothesis.dim_cube) &&
                       (!spec.hypothesis.dim_leib || fp.dim_leib == *spec.hypothesis.dim_leib);
        Fingerprint expected = reference_fingerprint(id.index, id.param);
        if (!dims_ok || fp != expected) {
            report.fail(name + "/dims", "fingerprint " + fp.str() + " expected " + expected.str());
            continue;
        }
        report.pass(name + "/dims", fp.str());

        // structural center facts
        auto [zl, zr, z] = centers(t);
        std::vector<Vector<GQ>> prods;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) prods.push_back(t.c(i, j));
        auto sq = span(4, prods);
        bool z_in_sq = true;
        for (int r = 0; r < z.dim(); ++r) z_in_sq = z_in_sq && sq.contains(z.basis_row(r));
        Subspace<GQ> term = Subspace<GQ>::full(4);
        for (int step = 2; step <= *fp.nilpotency_class; ++step) {
            std::vector<Vector<GQ>> gens;
            for (int i = 0; i < 4; ++i) {
                Vector<GQ> e(4, GQ{});
                e[i] = GQ(1);
                for (int r = 0; r < term.dim(); ++r)
                    gens.push_back(bracket_vec(t, e, term.basis_row(r)));
            }
            term = span(4, gens);
        }
        bool top_in_z = true;
        for (int r = 0; r < term.dim(); ++r) top_in_z = top_in_z && z.contains(term.basis_row(r));
        auto leib = leib_ideal(t);
        bool leib_in_z = leib.dim() != 1 || z.contains(leib.basis_row(0));
        if (z_in_sq && top_in_z && leib_in_z)
            report.pass(name + "/structure", "Z in A^2; A^c in Z; Leib facts hold");
        else
            report.fail(name + "/structure",
                        std::string(z_in_sq ? "" : "Z not inside A^2; ") +
                            (top_in_z ? "" : "A^c not inside Z; ") +
                            (leib_in_z ? "" : "Leib not inside Z"));

        auto split = split_search(t, solver);
        if (split.found())
            report.fail(name + "/non-split", "decomposition found at restart " +
                                                 std::to_string(split.restarts));
        else if (split.kind == SplitOutcome::Kind::probably_non_split)
            report.pass(name + "/non-split",
                        "no decomposition in " + std::to_string(split.restarts) + " restarts");
        else
            report.pass(name + "/non-split", split.reason);
    }
}

void replay_checks(Report& report, const VerifyConfig& cfg, int samples) {
    auto summary = replay_all(samples, cfg.seed);
    std::map<std::string, std::pair<int, double>> per_case; // passes, worst deviation
    for (const auto& out : summary.outcomes) {
        if (out.skipped) {
            report.add("replay/" + out.case_label, CheckRecord::Status::skip, out.skip_reason);
            continue;
        }
        if (!out.ok) {
            report.fail("replay/" + out.case_label, out.detail, out.deviation);
            continue;
        }
        auto& agg = per_case[out.case_label];
        agg.first += 1;
        agg.second = std::max(agg.second, out.deviation);
    }
    for (const auto& [label, agg] : per_case) {
        std::ostringstream details;
        details << agg.first << " samples";
        report.pass("replay/" + label, details.str(), agg.second);
    }
}

void agreement_checks(Report& report, const VerifyConfig& cfg) {
    SolverConfig generic = cfg.solver;
    generic.seed = cfg.seed;
    generic.derivation_shortcuts = false; // the two routes must stay independent

    Rng rng(cfg.seed, 0x414752ULL);
    int agreements = 0, exclusion_ok = 0, total = 0;
    std::string first_issue;
    const int per_class = std::max(1, cfg.agreement_conjugates / 6);
    for (int k = 8; k <= 13; ++k) {
        auto base = instantiate_approx(ClassId{k});
        for (int rep = 0; rep < per_class; ++rep) {
            auto conj = apply_base_change(base, random_invertible(4, rng));
            ++total;
            try {
                auto generic_res = classify(conj, generic);
                auto forms_res = classify_via_forms(conj, generic);
                bool agree = generic_res.index == k && forms_res.index == k;
                double residual = std::max(
                    verify_witness(conj, instantiate_approx(ClassId{k}), generic_res.witness.p)
                        .residual,
                    verify_witness(conj, instantiate_approx(ClassId{k}), forms_res.witness.p)
                        .residual);
                if (agree && within_tol(residual, 1e-6, conj.max_abs()))
                    ++agreements;
                else if (first_issue.empty())
                    first_issue = "A" + std::to_string(k) + " conjugate " + std::to_string(rep);
                if (leibniz_exclusion_check(conj)) ++exclusion_ok;
            } catch (const error& e) {
                if (first_issue.empty())
                    first_issue = "A" + std::to_string(k) + " conjugate " + std::to_string(rep) +
                                  ": " + e.what();
            }
        }
    }
    if (agreements == total)
        report.pass("agreement/generic-vs-forms", std::to_string(total) + " conjugates agree");
    else
        report.fail("agreement/generic-vs-forms",
                    std::to_string(total - agreements) + " of " + std::to_string(total) +
                        " disagreed; first: " + first_issue);
    if (exclusion_ok == total)
        report.pass("agreement/orbit-(i)-excluded",
                    "skew orbit never extracted over " + std::to_string(total) + " conjugates");
    else
        report.fail("agreement/orbit-(i)-excluded",
                    std::to_string(total - exclusion_ok) + " extractions hit the skew orbit");
}

void pairwise_checks(Report& report, const VerifyConfig& cfg) {
    SolverConfig solver = cfg.solver;
    solver.seed = cfg.seed;
    auto instances = grid_instances(cfg);
    auto rep = pairwise_report(instances, solver);

    if (rep.clean())
        report.pass("pairwise/no-cross-witness",
                    std::to_string(rep.pairs.size()) + " pairs: " +
                        std::to_string(rep.distinguished) + " distinguished by invariants, " +
                        std::to_string(rep.probabilistic) + " probabilistic (" +
                        std::to_string(solver.restarts) + " restarts), " +
                        std::to_string(rep.witnesses_within_family) + " within-family witnesses");
    else
        report.fail("pairwise/no-cross-witness",
                    std::to_string(rep.cross_class_witnesses) +
                        " witnesses between distinct classes");

    for (const auto& pv : rep.pairs)
        if (!pv.within_family && pv.verdict.found())
            report.fail("pairwise/" + pv.a.str() + "-vs-" + pv.b.str(),
                        "unexpected isomorphism witness");

    // identification map per family
    for (int family : {5, 17, 18}) {
        std::ostringstream details;
        int found = 0;
        bool all_reciprocal = true;
        for (const auto& ident : rep.identifications) {
            if (ident.family != family) continue;
            ++found;
            all_reciprocal = all_reciprocal && ident.reciprocal;
            details << " " << format_scalar(ident.param_a) << "<->" << format_scalar(ident.param_b);
        }
        std::string name = "identifications/" + std::string(class_spec(family).name);
        if (family == 5) {
            // the reciprocal identification must show up on the default grid
            if (found > 0 && all_reciprocal)
                report.pass(name, "c <-> 1/c:" + details.str());
            else if (found == 0 && cfg.grid == "smoke")
                report.add(name, CheckRecord::Status::skip, "grid holds no reciprocal pair");
            else
                report.fail(name, found == 0 ? "reciprocal pair not identified"
                                             : "non-reciprocal witness" + details.str());
        } else if (found == 0) {
            report.pass(name, "no identifications on the grid (parameters are rigid)");
        } else {
            report.fail(name, "unexpected identifications:" + details.str());
        }
    }

    // the reciprocal witness itself, verified exactly
    GQ c(2);
    Matrix<GQ> w(4, 4);
    w(1, 0) = c;
    w(0, 1) = GQ(1);
    w(2, 2) = GQ(1);
    w(3, 3) = GQ(1);
    auto check = verify_witness(instantiate(ClassId{5, c}), instantiate(ClassId{5, GQ(1) / c}), w);
    if (check.exact_ok && *check.exact_ok)
        report.pass("identifications/A5-explicit-witness",
                    "x1 -> c y2, x2 -> y1 maps A5(2) onto A5(1/2) exactly");
    else
        report.fail("identifications/A5-explicit-witness", "exact verification failed");
}

Report verify_paper(const VerifyConfig& cfg_in) {
    VerifyConfig cfg = cfg_in;
    cfg.solver.seed = cfg.seed;
    Report report;
    report.seed = cfg.seed;
    report.grid = cfg.grid;
    report.tol_residual = cfg.solver.residual_tol;

    validate_catalog(report, cfg);
    replay_checks(report, cfg, cfg.grid == "smoke" ? 5 : 25);
    agreement_checks(report, cfg);
    pairwise_checks(report, cfg);
    return report;
}

Report fuzz_roundtrip(int count, std::uint64_t seed, const SolverConfig& solver_in) {
    if (count < 1) throw error("fuzz count must be at least 1");
    SolverConfig solver = solver_in;
    solver.seed = seed;
    Report report;
    report.seed = seed;
    report.tol_residual = solver.residual_tol;

    auto instances = default_instances();
    Rng rng(seed, 0x46555aULL);
    int ok = 0, resampled = 0;
    for (int i = 0; i < count; ++i) {
        auto fc = fuzz_case(instances, rng);
        resampled += fc.resampled;
        try {
            auto res = classify(fc.table, solver);
            bool id_ok = res.index == fc.id.index;
            bool param_ok = true;
            if (id_ok && is_parametric(fc.id.index)) {
                Cplx expected = canonical_param(fc.id.index, fc.id.param->to_complex());
                param_ok = res.param &&
                           std::abs(*res.param - expected) < 1e-6 * (1.0 + std::abs(expected));
            }
            double residual =
                verify_witness(fc.table,
                               instantiate_approx(res.index, res.param ? *res.param : Cplx{}),
                               res.witness.p)
                    .residual;
            bool witness_ok = within_tol(residual, 1e-6, fc.table.max_abs());
            if (id_ok && param_ok && witness_ok)
                ++ok;
            else
                report.fail("fuzz/case-" + std::to_string(i),
                            fc.id.str() + " -> " + res.class_name() +
                                (witness_ok ? "" : " (witness residual out of tolerance)"),
                            residual);
        } catch (const error& e) {
            report.fail("fuzz/case-" + std::to_string(i), fc.id.str() + ": " + e.what());
        }
    }
    std::ostringstream details;
    details << ok << "/" << count << " conjugates classified back";
    if (resampled) details << " (" << resampled << " near-singular draws resampled)";
    if (ok == count)
        report.pass("fuzz/round-trip", details.str());
    else
        report.fail("fuzz/round-trip", details.str());
    return report;
}

} // namespace leibniz
