#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leibniz/matrix.hpp"
#include "leibniz/parallel.hpp"

#include <algorithm>

using namespace leibniz;
using GQ = GaussianRational;

namespace {

// independent rank oracle: largest nonvanishing minor, checked exhaustively
int rank_by_minors(const Matrix<GQ>& m) {
    int best = 0;
    const int r = m.rows(), c = m.cols();
    std::vector<int> rows(r), cols(c);
    for (int i = 0; i < r; ++i) rows[i] = i;
    for (int j = 0; j < c; ++j) cols[j] = j;
    for (int k = 1; k <= std::min(r, c); ++k) {
        std::vector<bool> rsel(r, false), csel(c, false);
        std::fill(rsel.begin(), rsel.begin() + k, true);
        do {
            std::vector<int> ri;
            for (int i = 0; i < r; ++i)
                if (rsel[i]) ri.push_back(i);
            std::fill(csel.begin(), csel.end(), false);
            std::fill(csel.begin(), csel.begin() + k, true);
            do {
                std::vector<int> ci;
                for (int j = 0; j < c; ++j)
                    if (csel[j]) ci.push_back(j);
                Matrix<GQ> sub(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) sub(i, j) = m(ri[i], ci[j]);
                if (!det(sub).is_zero()) best = std::max(best, k);
            } while (std::prev_permutation(csel.begin(), csel.end()));
        } while (std::prev_permutation(rsel.begin(), rsel.end()));
    }
    return best;
}

Vector<GQ> gq_vec(std::initializer_list<int> vals) {
    Vector<GQ> v;
    for (int x : vals) v.emplace_back(x);
    return v;
}

} // namespace

TEST_CASE("rational arithmetic and normalization") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(3, 4) * Rational(2, 3)) == Rational(1, 2));
    CHECK(Rational(1, 2) < Rational(2, 3));
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), error);
    CHECK(sqrt_exact(Rational(9, 4)) == Rational(3, 2));
    CHECK_FALSE(sqrt_exact(Rational(2)).has_value());
}

TEST_CASE("gaussian rational field ops") {
    GQ z{Rational(1), Rational(2)};
    GQ w{Rational(3), Rational(-1)};
    CHECK((z * w) == GQ{Rational(5), Rational(5)});
    CHECK((z / z) == GQ(1));
    CHECK((z * (GQ(1) / z)) == GQ(1));
    auto r = sqrt_exact(GQ{Rational(0), Rational(2)}); // sqrt(2i) = 1+i
    REQUIRE(r.has_value());
    CHECK((*r) * (*r) == GQ{Rational(0), Rational(2)});
    CHECK(sqrt_exact(GQ(-4)).has_value());
    CHECK_FALSE(sqrt_exact(GQ(3)).has_value());
}

TEST_CASE("span: collinear vectors collapse") {
    auto s = span<GQ>(3, {gq_vec({1, 0, 0}), gq_vec({2, 0, 0})});
    CHECK(s.dim() == 1);
    CHECK(s.basis_row(0) == gq_vec({1, 0, 0}));
}

TEST_CASE("span: empty span keeps declared ambient dim") {
    auto s = span<GQ>(3, {});
    CHECK(s.dim() == 0);
    CHECK(s.ambient_dim() == 3);
}

TEST_CASE("span: rank matches the minor oracle") {
    Matrix<GQ> m{{GQ(1), GQ(1), GQ(0)}, {GQ(0), GQ(1), GQ(1)}, {GQ(1), GQ(0), GQ(-1)}};
    CHECK(rank_by_minors(m) == 2);
    auto s = span<GQ>(3, {m.row(0), m.row(1), m.row(2)});
    CHECK(s.dim() == 2);
}

TEST_CASE("span: mixed dimensions rejected") {
    CHECK_THROWS_AS(span<GQ>(3, {gq_vec({1, 0, 0}), gq_vec({1, 0})}), mixed_dimensions);
}

TEST_CASE("kernel examples") {
    CHECK(kernel(Matrix<GQ>::identity(3)).dim() == 0);
    CHECK(kernel(Matrix<GQ>(2, 3)).dim() == 3);
    Matrix<GQ> m{{GQ(1), GQ(2)}, {GQ(2), GQ(4)}};
    auto k = kernel(m);
    CHECK(k.dim() == 1);
    CHECK(k.contains(gq_vec({2, -1}))); // hand elimination: (2,-1) spans
}

TEST_CASE("invert examples") {
    CHECK(invert(Matrix<GQ>::identity(4)) == Matrix<GQ>::identity(4));
    Matrix<GQ> d{{GQ(2), GQ(0)}, {GQ(0), GQ::i()}};
    auto inv = invert(d);
    CHECK(inv(0, 0) == GQ(Rational(1, 2)));
    CHECK(inv(1, 1) == GQ{Rational(0), Rational(-1)});
    Matrix<GQ> sing{{GQ(1), GQ(1)}, {GQ(0), GQ(0)}};
    CHECK_THROWS_AS(invert(sing), singular_error);
}

TEST_CASE("echelon canonicality: span is permutation invariant") {
    Rng rng(7);
    for (int it = 0; it < 200; ++it) {
        int n = 3 + rng.next_int(3);
        int count = 1 + rng.next_int(5);
        std::vector<Vector<GQ>> vecs;
        for (int v = 0; v < count; ++v) {
            Vector<GQ> x(n);
            for (int j = 0; j < n; ++j) x[j] = GQ(Rational(rng.next_int(7) - 3, 1 + rng.next_int(3)));
            vecs.push_back(std::move(x));
        }
        auto base = span(n, vecs);
        for (int shuffle = 0; shuffle < 3; ++shuffle) {
            for (std::size_t i = vecs.size(); i > 1; --i)
                std::swap(vecs[i - 1], vecs[rng.next_int(static_cast<int>(i))]);
            CHECK(span(n, vecs) == base);
        }
    }
}

TEST_CASE("rank-nullity over random matrices") {
    Rng rng(11);
    for (int it = 0; it < 1000; ++it) {
        int r = 1 + rng.next_int(5), c = 1 + rng.next_int(5);
        Matrix<GQ> m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (rng.next_int(3)) m(i, j) = GQ(rng.next_int(9) - 4);
        CHECK(kernel(m).dim() + rank(m) == c);
    }
}

TEST_CASE("invert round trip, both backends") {
    Rng rng(13);
    for (int it = 0; it < 300; ++it) {
        int n = 2 + rng.next_int(3);
        Matrix<GQ> m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = GQ{Rational(rng.next_int(7) - 3), Rational(rng.next_int(3) - 1)};
        try {
            auto inv = invert(m);
            CHECK(m * inv == Matrix<GQ>::identity(n)); // exactly I on the exact backend
        } catch (const singular_error&) {
        }
    }
    for (int it = 0; it < 300; ++it) {
        int n = 2 + rng.next_int(4);
        Matrix<Cplx> m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = Cplx{rng.next_normal(), rng.next_normal()};
        try {
            auto inv = invert(m);
            CHECK(max_abs_diff(m * inv, Matrix<Cplx>::identity(n)) < 1e-10 * std::max(1.0, m.max_abs()));
        } catch (const singular_error&) {
        }
    }
}

TEST_CASE("rational reconstruction examples") {
    auto half = reconstruct_rational(0.4999999999, 10);
    REQUIRE(half.has_value());
    CHECK(*half == Rational(1, 2));

    // sqrt(2)/2 has no low-denominator rational within 1e-10; brute force is
    // the oracle
    double v = 0.707106781;
    double best = 1e9;
    for (int q = 1; q <= 100; ++q)
        for (int p = 0; p <= 2 * q; ++p) best = std::min(best, std::fabs(v - double(p) / q));
    CHECK(best > 1e-10);
    CHECK_FALSE(reconstruct_rational(v, 100).has_value());

    auto im = reconstruct_scalar(Cplx{0.0, 1.0000000001}, 10);
    REQUIRE(im.has_value());
    CHECK(*im == GQ::i());

    CHECK_FALSE(reconstruct_rational(1.0 / 3.0, 0).has_value()); // max_den >= 1 required
    auto third = reconstruct_rational(1.0 / 3.0, 1000);
    REQUIRE(third.has_value());
    CHECK(*third == Rational(1, 3));
}

TEST_CASE("scalar literal grammar round trips") {
    auto lit = parse_scalar_text("1/2");
    REQUIRE(lit.has_value());
    CHECK(lit->rational);
    CHECK(lit->exact == GQ(Rational(1, 2)));

    lit = parse_scalar_text("-3/4+5/7*i");
    REQUIRE(lit.has_value());
    CHECK(lit->exact == GQ{Rational(-3, 4), Rational(5, 7)});
    CHECK(format_scalar(lit->exact) == "-3/4+5/7*i");

    lit = parse_scalar_text("3+0i");
    REQUIRE(lit.has_value());
    CHECK(lit->rational);
    CHECK(lit->exact == GQ(3));

    lit = parse_scalar_text("1.5-2.25i");
    REQUIRE(lit.has_value());
    CHECK_FALSE(lit->rational);
    CHECK(lit->approx == Cplx{1.5, -2.25});

    CHECK_FALSE(parse_scalar_text("x").has_value());
    CHECK_FALSE(parse_scalar_text("1/").has_value());
    CHECK_FALSE(parse_scalar_text("").has_value());

    Rng rng(17);
    for (int it = 0; it < 500; ++it) {
        GQ z{Rational(rng.next_int(19) - 9, 1 + rng.next_int(9)),
             Rational(rng.next_int(19) - 9, 1 + rng.next_int(9))};
        auto back = parse_scalar_text(format_scalar(z));
        REQUIRE(back.has_value());
        CHECK(back->exact == z);
        Cplx w{rng.next_normal(), rng.next_normal()};
        auto backw = parse_scalar_text(format_scalar(w));
        REQUIRE(backw.has_value());
        CHECK(backw->approx == w);
    }
}

TEST_CASE("deterministic rng streams") {
    Rng a(42, 3), b(42, 3), c(42, 4);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_double() == b.next_double());
    CHECK(a.next_u64() != c.next_u64());
}
