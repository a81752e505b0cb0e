#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leibniz/proof_replay.hpp"

#include <set>

using namespace leibniz;
using GQ = GaussianRational;

namespace {

ParamMap pm(std::initializer_list<std::pair<const char*, GQ>> vals) {
    ParamMap m;
    for (const auto& [k, v] : vals) m[k] = v;
    return m;
}

} // namespace

TEST_CASE("rescale case lands exactly on A8") {
    auto out = proof_replay(proof_case("2.3/N=(ii)"), pm({{"a", GQ(2)}}));
    REQUIRE(out.ok);
    CHECK(out.exact);
    CHECK(out.target_index == 8);
    CHECK(out.deviation == 0.0);
}

TEST_CASE("second-level case with (a,b,g) = (1,2,3) lands exactly on A11") {
    auto out = proof_replay(proof_case("2.4/N=(ii)/g!=0"),
                            pm({{"a", GQ(1)}, {"b", GQ(2)}, {"g", GQ(3)}}));
    REQUIRE(out.ok);
    CHECK(out.exact);
    CHECK(out.target_index == 11);
    CHECK(out.deviation == 0.0);
}

TEST_CASE("radical case (a,c) = (1,2) reaches A9 within 1e-9") {
    auto out = proof_replay(proof_case("2.3/N=(v)"), pm({{"a", GQ(1)}, {"c", GQ(2)}}));
    REQUIRE(out.ok);
    CHECK_FALSE(out.exact);
    CHECK(out.target_index == 9);
    CHECK(out.deviation < 1e-9);
    CHECK(out.branch >= 0);
}

TEST_CASE("excluded parameter values are skipped with a reason") {
    // a2 + b2 = 0 violates the dim Leib = 2 requirement
    auto out = proof_replay(proof_case("2.5/H3/cross!=0"),
                            pm({{"a1", GQ(1)}, {"a2", GQ(2)}, {"b1", GQ(1)}, {"b2", GQ(-2)}}));
    CHECK(out.skipped);
    CHECK(out.skip_reason.find("a2 + b2") != std::string::npos);

    auto dom = proof_replay(proof_case("2.3/N=(v)"), pm({{"a", GQ(1)}, {"c", GQ(1)}}));
    CHECK(dom.skipped);
}

TEST_CASE("aligned-rows case recovers the family parameter") {
    // a1 b2 = a2 b1 with b2/a2 = 3/2
    auto out = proof_replay(
        proof_case("2.5/H3/cross=0"),
        pm({{"a1", GQ(1)}, {"a2", GQ(2)}, {"b1", GQ(Rational(3, 2))}, {"b2", GQ(3)}}));
    REQUIRE(out.ok);
    CHECK(out.target_index == 17);
    REQUIRE(out.target_param_exact.has_value());
    CHECK(*out.target_param_exact == GQ(Rational(3, 2)));
}

TEST_CASE("every case passes on 25 admissible random samples") {
    auto summary = replay_all(25, 12345);
    for (const auto& out : summary.outcomes) {
        CAPTURE(out.case_label);
        CAPTURE(out.detail);
        CAPTURE(out.skip_reason);
        CHECK_FALSE(out.skipped); // samplers only draw admissible tuples
        CHECK(out.ok);
        if (out.exact)
            CHECK(out.deviation == 0.0);
        else
            CHECK(out.deviation < 1e-9);
    }
    CHECK(summary.failed == 0);
    CHECK(summary.passed == static_cast<int>(proof_cases().size()) * 25);
}

TEST_CASE("reached targets match the derivations") {
    // fixed targets for the single-exit cases
    const std::map<std::string, std::set<int>> expected = {
        {"2.3/N=(ii)", {8}},
        {"2.3/N=(iii)", {9}},
        {"2.3/N=(iv)", {8}},
        {"2.3/N=(v)", {9}},
        {"2.4/N=(ii)/g=0", {10}},
        {"2.4/N=(ii)/g!=0", {11}},
        {"2.4/N=(iii)/b^2+g^2=0", {12}},
        {"2.4/N=(iii)/b^2+g^2!=0", {13}},
        {"2.4/N=(iv)/b=0", {10}},
        {"2.4/N=(iv)/b!=0", {11}},
        {"2.4/N=(v)/bg=0", {12}},
        {"2.4/N=(v)/bg!=0", {13}},
        {"2.5/zl3zr2", {14}},
        {"2.5/zl2zr3", {15}},
        {"2.5/H3/cross!=0", {16}},
        {"2.5/H3/cross=0", {17}},
        {"2.5/H2/a2=0/a1=0/b1!=0", {18}},
        {"2.5/H2/a2=0/a1=0/b1=0", {18}},
        {"2.5/H2/a2=0/a1!=0/a1b2=1", {19}},
        {"2.5/H2/a2=0/a1!=0/a1b2!=1", {18}},
        {"2.5/H2/a2!=0/b2=0/b1=0", {18}},
        {"2.5/H2/a2!=0/b2=0/a2b1=1", {19}},
        {"2.5/H2/a2!=0/b2=0/a2b1!=1", {18}},
        {"2.5/H2/a2!=0/b2!=0/b1=0", {18, 19}},
        {"2.5/H2/a2!=0/b2!=0/b1!=0", {18}},
        {"2.6/g2=0/a1=0/a2=0/b2=0,b4=0", {20}},
        {"2.6/g2=0/a1=0/a2=0/b2=0,b4!=0", {21}},
        {"2.6/g2=0/a1=0/a2=0/b2!=0,b4=0", {22}},
        {"2.6/g2=0/a1=0/a2=0/b2!=0,b4!=0", {23}},
        {"2.6/g2=0/a1=0/a2!=0", {20, 21, 22, 23}},
        {"2.6/g2=0/a1!=0/a3=0/a4=0/b4=0", {24}},
        {"2.6/g2=0/a1!=0/a3=0/a4=0/b4!=0", {25}},
        {"2.6/g2=0/a1!=0/a3=0/a4!=0", {24, 25}},
        {"2.6/g2=0/a1!=0/a3!=0", {20, 21, 22, 23}},
        {"2.6/g2!=0/g1=0", {20, 21, 22, 23, 24, 25}},
        {"2.6/g2!=0/g1!=0", {20, 21, 22, 23, 24, 25}},
    };
    CHECK(expected.size() == proof_cases().size());
    auto summary = replay_all(10, 777);
    for (const auto& out : summary.outcomes) {
        CAPTURE(out.case_label);
        REQUIRE(out.ok);
        auto it = expected.find(out.case_label);
        REQUIRE(it != expected.end());
        CHECK(it->second.count(out.target_index) == 1);
    }
}

TEST_CASE("coefficient relations are equivalent to the Leibniz law on the two-step shape") {
    // defect = 0 <=> b1 g1 = a1 g2 and a3 g2 = b3 g1, tested both ways
    Rng rng(901);
    auto draw = [&]() { return GQ(rng.next_int(7) - 3); };
    int constrained = 0, violated = 0;
    for (int it = 0; it < 400; ++it) {
        ParamMap m{{"a1", draw()}, {"a2", draw()}, {"a3", draw()}, {"a4", draw()},
                   {"b1", draw()}, {"b2", draw()}, {"b3", draw()}, {"b4", draw()},
                   {"g1", draw()}, {"g2", draw()}};
        if (it % 2 == 0) {
            // steer onto the constraint surface: b1 g1 = a1 g2, a3 g2 = b3 g1
            GQ g1 = draw(), g2 = draw();
            while (g2.is_zero()) g2 = draw();
            m["g1"] = g1;
            m["g2"] = g2;
            m["a1"] = m["b1"] * g1 / g2;
            if (g1.is_zero())
                m["a3"] = GQ(0); // a3 g2 = 0 with g2 != 0
            else
                m["b3"] = m["a3"] * g2 / g1;
        }
        StructureTable<GQ> t(4);
        t.set_product(0, 0, chains::lin4<GQ>({{m["a1"], 2}, {m["a2"], 3}}));
        t.set_product(0, 1, chains::lin4<GQ>({{m["a3"], 2}, {m["a4"], 3}}));
        t.set_product(1, 0, chains::lin4<GQ>({{m["b1"], 2}, {m["b2"], 3}}));
        t.set_product(1, 1, chains::lin4<GQ>({{m["b3"], 2}, {m["b4"], 3}}));
        t.set_product(0, 2, chains::lin4<GQ>({{m["g1"], 3}}));
        t.set_product(1, 2, chains::lin4<GQ>({{m["g2"], 3}}));
        bool relations = (m["b1"] * m["g1"] - m["a1"] * m["g2"]).is_zero() &&
                         (m["a3"] * m["g2"] - m["b3"] * m["g1"]).is_zero();
        bool leibniz = leibniz_defect(t).value == 0.0;
        CHECK(relations == leibniz);
        (relations ? constrained : violated) += 1;
    }
    CHECK(constrained > 20);
    CHECK(violated > 20);
}

TEST_CASE("replay summary is deterministic and the empty sweep passes") {
    auto a = replay_all(3, 42);
    auto b = replay_all(3, 42);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        CHECK(a.outcomes[i].ok == b.outcomes[i].ok);
        CHECK(a.outcomes[i].target_index == b.outcomes[i].target_index);
        CHECK(a.outcomes[i].deviation == b.outcomes[i].deviation);
    }
    auto empty = replay_all(0, 1);
    CHECK(empty.all_ok());
    CHECK(empty.outcomes.empty());
}
