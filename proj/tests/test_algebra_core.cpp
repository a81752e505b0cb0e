#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leibniz/catalog.hpp"
#include "leibniz/isosolver.hpp"
#include "leibniz/split.hpp"

using namespace leibniz;
using GQ = GaussianRational;

namespace {

// independent bracket oracle: raw tensor contraction, no shortcuts
template <class K>
Vector<K> naive_bracket(const StructureTable<K>& t, const Vector<K>& u, const Vector<K>& v) {
    const int n = t.dim();
    Vector<K> out(n, scalar_ops<K>::zero());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out[k] += u[i] * v[j] * t.c(i, j)[k];
    return out;
}

// independent defect oracle: full triple loop over basis vectors
template <class K>
double naive_defect(const StructureTable<K>& t) {
    const int n = t.dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Vector<K> ea(n, scalar_ops<K>::zero()), eb = ea, ec = ea;
                ea[a] = scalar_ops<K>::one();
                eb[b] = scalar_ops<K>::one();
                ec[c] = scalar_ops<K>::one();
                auto lhs = naive_bracket(t, ea, naive_bracket(t, eb, ec));
                auto r1 = naive_bracket(t, naive_bracket(t, ea, eb), ec);
                auto r2 = naive_bracket(t, eb, naive_bracket(t, ea, ec));
                for (int k = 0; k < n; ++k)
                    worst = std::max(worst, scalar_ops<K>::abs(lhs[k] - r1[k] - r2[k]));
            }
    return worst;
}

Vector<GQ> unit(int n, int k) {
    Vector<GQ> v(n, GQ{});
    v[k] = GQ(1);
    return v;
}

StructureTable<GQ> abelian(int n) { return StructureTable<GQ>(n); }

} // namespace

TEST_CASE("bracket on catalog tables") {
    auto a7 = instantiate(ClassId{7});
    CHECK(bracket_vec(a7, unit(4, 0), unit(4, 1)) == unit(4, 2)); // [x1,x2] = x3

    auto a1 = instantiate(ClassId{1});
    Vector<GQ> zero(4, GQ{});
    CHECK(bracket_vec(a1, zero, unit(4, 1)) == zero);

    // [x1+x3, x3+x2] = [x1,x3] + [x3,x2] = 2 x4
    Vector<GQ> u{GQ(1), GQ(0), GQ(1), GQ(0)};
    Vector<GQ> v{GQ(0), GQ(1), GQ(1), GQ(0)};
    Vector<GQ> expect{GQ(0), GQ(0), GQ(0), GQ(2)};
    CHECK(bracket_vec(a1, u, v) == expect);
    CHECK(naive_bracket(a1, u, v) == expect);
}

TEST_CASE("leibniz defect: oracle agreement and known values") {
    auto a1 = instantiate(ClassId{1});
    CHECK(leibniz_defect(a1).value == 0.0);
    CHECK(naive_defect(a1) == 0.0);

    CHECK(leibniz_defect(abelian(4)).value == 0.0);

    // {[x1,x1]=x2, [x1,x2]=x3, [x2,x1]=x3} violates the identity at (1,1,1)
    StructureTable<GQ> bad(3);
    bad.add_product(0, 0, 1, GQ(1));
    bad.add_product(0, 1, 2, GQ(1));
    bad.add_product(1, 0, 2, GQ(1));
    auto rep = leibniz_defect(bad);
    CHECK(rep.value == 1.0);
    CHECK(rep.worst_triple == std::array<int, 3>{0, 0, 0});
    CHECK(naive_defect(bad) == 1.0);

    // every catalog class is a Leibniz algebra, exactly
    for (const auto& id : default_instances()) {
        auto t = instantiate(id);
        CHECK(leibniz_defect(t).value == 0.0);
        CHECK(naive_defect(t) == 0.0);
    }
}

TEST_CASE("is_lie") {
    // A3 without the [x3,x3] square is antisymmetric, hence Lie
    StructureTable<GQ> lie(4);
    lie.add_product(0, 1, 3, GQ(1));
    lie.add_product(1, 0, 3, GQ(-1));
    CHECK(is_lie(lie));

    CHECK_FALSE(is_lie(instantiate(ClassId{3})));
    CHECK(is_lie(abelian(4)));

    StructureTable<GQ> defective(3);
    defective.add_product(0, 0, 1, GQ(1));
    defective.add_product(0, 1, 2, GQ(1));
    defective.add_product(1, 0, 2, GQ(1));
    CHECK_THROWS_AS(is_lie(defective), not_leibniz);
}

TEST_CASE("leib ideal") {
    auto l3 = leib_ideal(instantiate(ClassId{3}));
    CHECK(l3.dim() == 1);
    CHECK(l3.contains(unit(4, 3)));

    auto l7 = leib_ideal(instantiate(ClassId{7}));
    CHECK(l7.dim() == 3); // symmetrized (1,1),(1,2),(1,3) give x2, x3, x4
    CHECK(l7.contains(unit(4, 1)));
    CHECK(l7.contains(unit(4, 2)));
    CHECK(l7.contains(unit(4, 3)));

    StructureTable<GQ> anti(4);
    anti.add_product(0, 1, 2, GQ(5));
    anti.add_product(1, 0, 2, GQ(-5));
    CHECK(leib_ideal(anti).dim() == 0);
}

TEST_CASE("lower central series") {
    auto s7 = lower_central_series(instantiate(ClassId{7}));
    CHECK(s7.dims == std::vector<int>{4, 3, 2, 1, 0});
    CHECK(s7.nilpotency_class == 4); // filiform

    auto sa = lower_central_series(abelian(4));
    CHECK(sa.dims == std::vector<int>{4, 0});
    CHECK(sa.nilpotency_class == 1);

    StructureTable<GQ> idem(2);
    idem.add_product(0, 0, 0, GQ(1)); // [x1,x1] = x1
    auto si = lower_central_series(idem);
    CHECK_FALSE(si.nilpotency_class.has_value());
    CHECK(si.dims.back() == 1); // stabilizes at 1
}

TEST_CASE("centers") {
    auto [zl7, zr7, z7] = centers(instantiate(ClassId{7}));
    CHECK(zl7.dim() == 3);
    CHECK(zl7.contains(unit(4, 1)));
    CHECK(zl7.contains(unit(4, 2)));
    CHECK(zl7.contains(unit(4, 3)));
    CHECK(zr7.dim() == 1);
    CHECK(zr7.contains(unit(4, 3)));
    CHECK(z7.dim() == 1);

    auto [zl14, zr14, z14] = centers(instantiate(ClassId{14}));
    CHECK(zl14.dim() == 3);
    CHECK(zr14.dim() == 2);
    CHECK(z14.dim() == 2);

    auto [zla, zra, za] = centers(abelian(4));
    CHECK(zla.dim() == 4);
    CHECK(zra.dim() == 4);
    CHECK(za.dim() == 4);
}

TEST_CASE("apply_base_change basics") {
    auto a14 = instantiate(ClassId{14});
    CHECK(apply_base_change(a14, Matrix<GQ>::identity(4)) == a14);

    // swapping e3 and e4 relabels the products
    Matrix<GQ> swap34 = Matrix<GQ>::identity(4);
    swap34(2, 2) = GQ(0);
    swap34(3, 3) = GQ(0);
    swap34(2, 3) = GQ(1);
    swap34(3, 2) = GQ(1);
    auto swapped = apply_base_change(a14, swap34);
    StructureTable<GQ> expect(4);
    expect.add_product(0, 0, 3, GQ(1)); // [x1,x1] = x4
    expect.add_product(0, 1, 2, GQ(1)); // [x1,x2] = x3
    CHECK(swapped == expect);

    CHECK_THROWS_AS(apply_base_change(a14, Matrix<GQ>(4, 4)), singular_error);
}

TEST_CASE("base change from source with alpha=2 lands on A8") {
    // source: [e1,e1]=e4, [e1,e2]=2e3=-[e2,e1]; change x3 = 2 e3
    StructureTable<GQ> src(4);
    src.add_product(0, 0, 3, GQ(1));
    src.add_product(0, 1, 2, GQ(2));
    src.add_product(1, 0, 2, GQ(-2));
    Matrix<GQ> p = Matrix<GQ>::identity(4);
    p(2, 2) = GQ(2);
    CHECK(apply_base_change(src, p) == instantiate(ClassId{8}));
}

TEST_CASE("fingerprint examples") {
    auto f8 = fingerprint(instantiate(ClassId{8}));
    CHECK(f8.lcs_dims == std::vector<int>{4, 2, 0});
    CHECK(f8.dim_leib == 1);
    CHECK_FALSE(f8.lie);

    auto f20 = fingerprint(instantiate(ClassId{20}));
    CHECK(f20.lcs_dims == std::vector<int>{4, 2, 1, 0});
    CHECK(f20.dim_leib == 2);

    auto fa = fingerprint(abelian(4));
    CHECK(fa.lcs_dims == std::vector<int>{4, 0});
    CHECK(fa.dim_leib == 0);
    CHECK(fa.lie);
}

TEST_CASE("catalog fingerprints match the frozen references") {
    for (const auto& id : default_instances()) {
        CAPTURE(id.str());
        auto fp = fingerprint(instantiate(id));
        CHECK(fp == reference_fingerprint(id.index, id.param));
    }
}

TEST_CASE("fingerprint invariants hold on the catalog") {
    for (const auto& id : default_instances()) {
        auto fp = fingerprint(instantiate(id));
        CHECK(fp.dim_z <= std::min(fp.dim_zl, fp.dim_zr));
        CHECK(fp.lie == (fp.dim_leib == 0));
        for (int d : fp.lcs_dims) {
            CHECK(d >= 0);
            CHECK(d <= fp.n);
        }
    }
}

TEST_CASE("property: fingerprint is basis invariant") {
    Rng rng(101);
    auto instances = default_instances();
    for (const auto& id : instances) {
        auto exact = instantiate(id);
        auto ref = fingerprint(exact);
        for (int rep = 0; rep < 6; ++rep) {
            auto p = random_invertible_exact(4, rng);
            CHECK(fingerprint(apply_base_change(exact, p)) == ref);
        }
        auto approx = to_approx(exact);
        for (int rep = 0; rep < 22; ++rep) {
            auto p = random_invertible(4, rng);
            CHECK(fingerprint(apply_base_change(approx, p)) == ref);
        }
    }
}

TEST_CASE("property: defect preserved and base changes compose") {
    Rng rng(103);
    for (const auto& id : default_instances()) {
        auto t = instantiate(id);
        auto p = random_invertible_exact(4, rng);
        auto q = random_invertible_exact(4, rng);
        auto tp = apply_base_change(t, p);
        CHECK(leibniz_defect(tp).value == 0.0); // identically, exact backend
        CHECK(apply_base_change(tp, q) == apply_base_change(t, p * q));
    }
}

TEST_CASE("property: squares land in the Leib ideal") {
    Rng rng(107);
    auto instances = default_instances();
    for (int rep = 0; rep < 1000; ++rep) {
        const auto& id = instances[rep % instances.size()];
        auto t = instantiate(id);
        auto ideal = leib_ideal(t);
        Vector<GQ> u(4);
        for (auto& x : u) x = GQ{Rational(rng.next_int(9) - 4), Rational(rng.next_int(3) - 1)};
        CHECK(ideal.contains(bracket_vec(t, u, u)));
    }
}

TEST_CASE("structural facts on every catalog table") {
    for (const auto& id : default_instances()) {
        CAPTURE(id.str());
        auto t = instantiate(id);
        auto series = lower_central_series(t);
        REQUIRE(series.nilpotency_class.has_value());
        int c = *series.nilpotency_class;
        auto [zl, zr, z] = centers(t);

        // A^c is contained in the center when the class is c
        Subspace<GQ> cur = Subspace<GQ>::full(4);
        for (int step = 2; step <= c; ++step) {
            std::vector<Vector<GQ>> gens;
            for (int i = 0; i < 4; ++i)
                for (int r = 0; r < cur.dim(); ++r)
                    gens.push_back(bracket_vec(t, unit(4, i), cur.basis_row(r)));
            cur = span(4, gens);
        }
        for (int r = 0; r < cur.dim(); ++r) CHECK(z.contains(cur.basis_row(r)));

        // dim Leib = 1 and nilpotent forces Leib inside the center
        auto ideal = leib_ideal(t);
        if (ideal.dim() == 1) CHECK(z.contains(ideal.basis_row(0)));

        // non-split (all catalog entries) forces Z inside A^2
        std::vector<Vector<GQ>> prods;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) prods.push_back(t.c(i, j));
        auto sq = span(4, prods);
        for (int r = 0; r < z.dim(); ++r) CHECK(sq.contains(z.basis_row(r)));
    }
}

TEST_CASE("split_search finds obvious decompositions") {
    SolverConfig cfg;
    cfg.seed = 2024;

    // only [x1,x1]=x2: the x3, x4 directions split off
    StructureTable<GQ> t(4);
    t.add_product(0, 0, 1, GQ(1));
    auto out = split_search(t, cfg);
    REQUIRE(out.found());
    CHECK(verify_split(to_approx(t), out.ideal_a, out.ideal_b));

    // {[x1,x3]=x2}: splits too (spec example separating a line)
    StructureTable<GQ> t2(4);
    t2.add_product(0, 2, 1, GQ(1));
    auto out2 = split_search(t2, cfg);
    REQUIRE(out2.found());
    CHECK(verify_split(to_approx(t2), out2.ideal_a, out2.ideal_b));

    // Z not inside A^2 must imply a split is found (contrapositive fact)
    auto [zl, zr, z] = centers(t);
    std::vector<Vector<GQ>> prods;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) prods.push_back(t.c(i, j));
    auto sq = span(4, prods);
    bool z_in_sq = true;
    for (int r = 0; r < z.dim(); ++r) z_in_sq = z_in_sq && sq.contains(z.basis_row(r));
    CHECK_FALSE(z_in_sq);
}

TEST_CASE("split_search reports catalog entries as probably non-split") {
    SolverConfig cfg;
    cfg.seed = 7;
    cfg.restarts = 60; // the acceptance suite runs the full 200

    auto a7 = instantiate(ClassId{7});
    auto out = split_search(a7, cfg);
    CHECK(out.kind == SplitOutcome::Kind::probably_non_split);
    CHECK(out.restarts == 60);

    // necessary condition Z subset of A^2 holds for A7
    auto [zl, zr, z] = centers(a7);
    std::vector<Vector<GQ>> prods;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) prods.push_back(a7.c(i, j));
    auto sq = span(4, prods);
    for (int r = 0; r < z.dim(); ++r) CHECK(sq.contains(z.basis_row(r)));
}

TEST_CASE("split verdict soundness and determinism") {
    SolverConfig cfg;
    cfg.seed = 99;
    StructureTable<GQ> t(4);
    t.add_product(0, 0, 1, GQ(1));
    t.add_product(2, 2, 3, GQ(1)); // two nonabelian planes
    auto a = split_search(t, cfg);
    REQUIRE(a.found());
    CHECK(verify_split(to_approx(t), a.ideal_a, a.ideal_b));
    if (a.exact_certified) {
        REQUIRE(a.exact_ideals.has_value());
        CHECK(verify_split_exact(t, a.exact_ideals->first, a.exact_ideals->second));
    }

    auto b = split_search(t, cfg);
    CHECK(a.restarts == b.restarts);
    CHECK(a.ideal_a.basis() == b.ideal_a.basis());

    cfg.policy = RunPolicy::serial;
    auto c = split_search(t, cfg);
    CHECK(a.restarts == c.restarts);
    CHECK(a.ideal_a.basis() == c.ideal_a.basis());

    StructureTable<GQ> line(1);
    auto d = split_search(line, cfg);
    CHECK(d.kind == SplitOutcome::Kind::non_split_certified);
}
