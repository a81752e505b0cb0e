#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leibniz/classifier.hpp"

using namespace leibniz;
using GQ = GaussianRational;

namespace {

SolverConfig cfg_with(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("round trip through a random conjugate") {
    Rng rng(71);
    auto base = instantiate_approx(ClassId{20});
    auto conj = apply_base_change(base, random_invertible(4, rng));
    auto res = classify(conj, cfg_with(5));
    CHECK(res.index == 20);
    auto check = verify_witness(conj, base, res.witness.p);
    CHECK(check.residual < 1e-7);
}

TEST_CASE("Lie inputs are rejected") {
    StructureTable<GQ> heis(4);
    heis.add_product(0, 1, 2, GQ(1));
    heis.add_product(1, 0, 2, GQ(-1));
    CHECK_THROWS_AS(classify(heis, cfg_with(1)), is_lie_error);
}

TEST_CASE("split inputs are rejected with a verified decomposition") {
    StructureTable<GQ> t(4);
    t.add_product(0, 0, 1, GQ(1)); // two abelian directions split off
    try {
        classify(t, cfg_with(2));
        FAIL("expected is_split_error");
    } catch (const is_split_error& e) {
        CHECK(e.split.found());
        CHECK(verify_split(to_approx(t), e.split.ideal_a, e.split.ideal_b));
    }
}

TEST_CASE("non-nilpotent inputs are rejected") {
    // [x1,x2] = x2 satisfies the left Leibniz identity but its lower central
    // series stabilizes at dimension 1
    StructureTable<GQ> t(4);
    t.add_product(0, 1, 1, GQ(1));
    CHECK_THROWS_AS(classify(t, cfg_with(3)), not_nilpotent_error);
}

TEST_CASE("parametric round trip with canonical parameter") {
    Rng rng(73);
    auto base = instantiate_approx(ClassId{5, GQ(2)});
    auto conj = apply_base_change(base, random_invertible(4, rng));
    auto res = classify(conj, cfg_with(7));
    CHECK(res.index == 5);
    REQUIRE(res.param.has_value());
    // canonical branch: |c| <= 1, so 2 is reported as 1/2
    CHECK(std::abs(*res.param - Cplx(0.5)) < 1e-6);
    auto canon_target = instantiate_approx(5, *res.param);
    CHECK(verify_witness(conj, canon_target, res.witness.p).residual < 1e-6);

    auto res17 = classify(apply_base_change(instantiate_approx(ClassId{17, GQ(2)}),
                                            random_invertible(4, rng)),
                          cfg_with(11));
    CHECK(res17.index == 17);
    REQUIRE(res17.param.has_value());
    CHECK(std::abs(*res17.param - Cplx(2.0)) < 1e-6);
}

TEST_CASE("parameter canonicalization rules") {
    CHECK(std::abs(canonical_param(5, Cplx(3.0)) - Cplx(1.0 / 3)) < 1e-12);
    CHECK(std::abs(canonical_param(5, Cplx(0.25)) - Cplx(0.25)) < 1e-12);
    // |c| = 1 tie goes to the upper half plane
    CHECK(canonical_param(5, Cplx{0.0, -1.0}) == Cplx{0.0, 1.0});
    CHECK(canonical_param(17, Cplx(9.0)) == Cplx(9.0));
}

TEST_CASE("form pipeline agrees with the generic path on its branch") {
    Rng rng(79);
    SolverConfig cfg = cfg_with(13);
    for (int k = 8; k <= 13; ++k) {
        CAPTURE(k);
        auto base = instantiate_approx(ClassId{k});
        for (int rep = 0; rep < 4; ++rep) {
            auto conj = apply_base_change(base, random_invertible(4, rng));
            auto generic = classify(conj, cfg);
            auto forms = classify_via_forms(conj, cfg);
            CHECK(generic.index == k);
            CHECK(forms.index == k);
            CHECK(forms.method == ClassificationResult::Method::form_pipeline);
            CHECK(verify_witness(conj, instantiate_approx(ClassId{k}), forms.witness.p).residual <
                  1e-6);
        }
    }
}

TEST_CASE("form pipeline rejects the wrong shape") {
    CHECK_THROWS_AS(classify_via_forms(instantiate(ClassId{20}), cfg_with(1)), wrong_shape);
    CHECK_THROWS_AS(classify_via_forms(instantiate(ClassId{7}), cfg_with(1)), wrong_shape);
}

TEST_CASE("exact inputs classify with certification attempts") {
    Rng rng(83);
    auto base = instantiate(ClassId{22});
    auto conj = apply_base_change(base, random_invertible_exact(4, rng));
    auto res = classify(conj, cfg_with(17));
    CHECK(res.index == 22);
    if (res.witness.exact_certified) {
        auto check = verify_witness(conj, base, *res.witness.exact_p);
        CHECK(check.exact_ok == true);
    }
}

TEST_CASE("pairwise verdicts on a focused instance set") {
    SolverConfig cfg = cfg_with(19);
    cfg.restarts = 60;
    std::vector<ClassId> instances = {
        ClassId{14}, ClassId{15},                           // distinguished pair
        ClassId{5, GQ(2)}, ClassId{5, GQ(Rational(1, 2))},  // reciprocal identification
        ClassId{21}, ClassId{23},                           // distinguished by dim_zr
        ClassId{22},                                        // same fingerprint as 23
    };
    auto report = pairwise_report(instances, cfg);
    CHECK(report.clean());
    CHECK(report.witnesses_within_family == 1);
    REQUIRE(report.identifications.size() == 1);
    CHECK(report.identifications[0].family == 5);
    CHECK(report.identifications[0].reciprocal);

    for (const auto& pv : report.pairs) {
        if (pv.a.index == 14 && pv.b.index == 15) {
            CHECK(pv.verdict.kind == IsoVerdict::Kind::distinguished);
            CHECK(pv.verdict.distinguished_by ==
                  std::vector<std::string>{"dim_zl", "dim_zr"});
        }
        // computed centers differ (2 vs 1), so this pair is separated by
        // invariants rather than by solver failure
        if (pv.a.index == 21 && pv.b.index == 23) {
            CHECK(pv.verdict.kind == IsoVerdict::Kind::distinguished);
            CHECK(pv.verdict.distinguished_by == std::vector<std::string>{"dim_zr"});
        }
        // A22 and A23 genuinely share all fingerprint fields
        if (pv.a.index == 22 || pv.b.index == 22) {
            if (pv.a.index == 23 || pv.b.index == 23)
                CHECK(pv.verdict.kind == IsoVerdict::Kind::probably_not);
        }
    }
}

TEST_CASE("classification is deterministic for a fixed seed") {
    Rng rng(89);
    auto conj = apply_base_change(instantiate_approx(ClassId{19}), random_invertible(4, rng));
    auto a = classify(conj, cfg_with(23));
    auto b = classify(conj, cfg_with(23));
    CHECK(a.index == b.index);
    CHECK(max_abs_diff(a.witness.p, b.witness.p) == 0.0);

    SolverConfig serial = cfg_with(23);
    serial.policy = RunPolicy::serial;
    auto c = classify(conj, serial);
    CHECK(c.index == a.index);
    CHECK(max_abs_diff(c.witness.p, a.witness.p) == 0.0);
}
