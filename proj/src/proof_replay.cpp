#include "leibniz/proof_replay.hpp"

namespace leibniz {

namespace {

using GQ = GaussianRational;

GQ i_gq() { return GQ::i(); }

// small sampling pool; kept low so exact chains stay inside int64 rationals
const std::vector<GQ>& pool() {
    static const std::vector<GQ> v = {
        GQ(1), GQ(-1), GQ(2), GQ(-2),        GQ(3),
        GQ(Rational(1, 2)),   GQ(Rational(-1, 2)), GQ(Rational(1, 3)),
        GQ(Rational(3, 2)),   i_gq(),        GQ(Rational(2), Rational(1)),
        GQ(-3),               GQ(Rational(1), Rational(1)),
    };
    return v;
}

GQ pick(Rng& rng) { return pool()[rng.next_int(static_cast<int>(pool().size()))]; }

GQ pick_nonzero(Rng& rng) {
    GQ v = pick(rng);
    while (v.is_zero()) v = pick(rng);
    return v;
}

Vector<GQ> lin(std::initializer_list<std::pair<GQ, int>> terms) {
    return chains::lin4<GQ>(terms);
}

using Builder = std::function<StructureTable<GQ>(const ParamMap&)>;
using Admissible = std::function<std::optional<std::string>(const ParamMap&)>;
using Sampler = std::function<ParamMap(Rng&)>;

GQ at(const ParamMap& m, const std::string& k) {
    auto it = m.find(k);
    if (it == m.end()) throw error("missing proof parameter " + k);
    return it->second;
}

// Source shapes for the N-form cases; the 2.4 variants add the level-three
// rows [e1,e3] = b e4 = -[e3,e1] and [e2,e3] = g e4 = -[e3,e2].
StructureTable<GQ> form_source(char which, const GQ& a, const GQ& c, bool level3, const GQ& b,
                               const GQ& g) {
    StructureTable<GQ> t(4);
    switch (which) {
    case '2': // (ii)
        t.set_product(0, 0, lin({{GQ(1), 3}}));
        t.set_product(0, 1, lin({{a, 2}}));
        t.set_product(1, 0, lin({{-a, 2}}));
        break;
    case '3': // (iii)
        t.set_product(0, 0, lin({{GQ(1), 3}}));
        t.set_product(1, 1, lin({{GQ(1), 3}}));
        t.set_product(0, 1, lin({{a, 2}}));
        t.set_product(1, 0, lin({{-a, 2}}));
        break;
    case '4': // (iv)
        t.set_product(0, 1, lin({{a, 2}, {GQ(1), 3}}));
        t.set_product(1, 0, lin({{-a, 2}, {GQ(-1), 3}}));
        t.set_product(1, 1, lin({{GQ(1), 3}}));
        break;
    case '5': // (v)
        t.set_product(0, 1, lin({{a, 2}, {GQ(1), 3}}));
        t.set_product(1, 0, lin({{-a, 2}, {c, 3}}));
        break;
    }
    if (level3) {
        t.set_product(0, 2, lin({{b, 3}}));
        t.set_product(2, 0, lin({{-b, 3}}));
        t.set_product(1, 2, lin({{g, 3}}));
        t.set_product(2, 1, lin({{-g, 3}}));
    }
    return t;
}

StructureTable<GQ> t25_source(const ParamMap& m, bool right_row, bool both_rows, bool square2) {
    StructureTable<GQ> t(4);
    t.set_product(0, 0, lin({{GQ(1), 2}}));
    GQ a1 = at(m, "a1"), a2 = at(m, "a2");
    if (both_rows || !right_row) t.set_product(0, 1, lin({{a1, 2}, {a2, 3}}));
    if (both_rows)
        t.set_product(1, 0, lin({{at(m, "b1"), 2}, {at(m, "b2"), 3}}));
    else if (right_row)
        t.set_product(1, 0, lin({{a1, 2}, {a2, 3}}));
    if (square2) t.set_product(1, 1, lin({{GQ(1), 3}}));
    return t;
}

StructureTable<GQ> t26_source(const ParamMap& m) {
    StructureTable<GQ> t(4);
    t.set_product(0, 0, lin({{at(m, "a1"), 2}, {at(m, "a2"), 3}}));
    t.set_product(0, 1, lin({{at(m, "a3"), 2}, {at(m, "a4"), 3}}));
    t.set_product(1, 0, lin({{at(m, "b1"), 2}, {at(m, "b2"), 3}}));
    t.set_product(1, 1, lin({{at(m, "b3"), 2}, {at(m, "b4"), 3}}));
    t.set_product(0, 2, lin({{at(m, "g1"), 3}}));
    t.set_product(1, 2, lin({{at(m, "g2"), 3}}));
    return t;
}

std::optional<std::string> ok_always(const ParamMap&) { return std::nullopt; }

std::vector<ProofCase> build_cases() {
    std::vector<ProofCase> cases;
    const GQ one(1), zero(0);

    auto add = [&](ProofCase pc) { cases.push_back(std::move(pc)); };

    // ---- dim A^2 = 2, Leib 1, A^3 = 0 --------------------------------------
    auto adm_a = [](const ParamMap& m) -> std::optional<std::string> {
        if (at(m, "a").is_zero()) return "a must be nonzero (dim A^2 = 2)";
        return std::nullopt;
    };
    add({"2.3/N=(ii)", "2.3", ChainEntry::t23_ii, {"a"}, false, 1, adm_a,
         [](const ParamMap& m) { return form_source('2', at(m, "a"), GQ(0), false, GQ(0), GQ(0)); },
         [](Rng& rng) { return ParamMap{{"a", pick_nonzero(rng)}}; }});
    add({"2.3/N=(iii)", "2.3", ChainEntry::t23_iii, {"a"}, false, 1, adm_a,
         [](const ParamMap& m) { return form_source('3', at(m, "a"), GQ(0), false, GQ(0), GQ(0)); },
         [](Rng& rng) { return ParamMap{{"a", pick_nonzero(rng)}}; }});
    add({"2.3/N=(iv)", "2.3", ChainEntry::t23_iv, {"a"}, false, 1, adm_a,
         [](const ParamMap& m) { return form_source('4', at(m, "a"), GQ(0), false, GQ(0), GQ(0)); },
         [](Rng& rng) { return ParamMap{{"a", pick_nonzero(rng)}}; }});
    add({"2.3/N=(v)", "2.3", ChainEntry::t23_v, {"a", "c"}, true, 6,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero (dim A^2 = 2)";
             GQ c = at(m, "c");
             if (c == GQ(1) || c == GQ(-1)) return "c = +-1 is outside the (v) domain";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('5', at(m, "a"), at(m, "c"), false, GQ(0), GQ(0));
         },
         [](Rng& rng) {
             GQ c = pick(rng);
             while (c == GQ(1) || c == GQ(-1)) c = pick(rng);
             return ParamMap{{"a", pick_nonzero(rng)}, {"c", c}};
         }});

    // ---- dim A^2 = 2, Leib 1 = dim A^3 -------------------------------------
    add({"2.4/N=(ii)/g=0", "2.4", ChainEntry::t24_ii, {"a", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             if (!at(m, "g").is_zero()) return "this branch has g = 0";
             if (at(m, "b").is_zero()) return "b must be nonzero since A^3 != 0";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('2', at(m, "a"), GQ(0), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             return ParamMap{{"a", pick_nonzero(rng)}, {"b", pick_nonzero(rng)}, {"g", GQ(0)}};
         }});
    add({"2.4/N=(ii)/g!=0", "2.4", ChainEntry::t24_ii, {"a", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             if (at(m, "g").is_zero()) return "this branch has g != 0";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('2', at(m, "a"), GQ(0), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             return ParamMap{{"a", pick_nonzero(rng)}, {"b", pick(rng)}, {"g", pick_nonzero(rng)}};
         }});
    add({"2.4/N=(iii)/b^2+g^2=0", "2.4", ChainEntry::t24_iii, {"a", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             GQ b = at(m, "b"), g = at(m, "g");
             if (b.is_zero() || g.is_zero()) return "b, g must be nonzero since A^3 != 0";
             if (!(b * b + g * g).is_zero()) return "this branch has b^2 + g^2 = 0";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('3', at(m, "a"), GQ(0), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             GQ b = pick_nonzero(rng);
             GQ g = rng.next_int(2) ? b * i_gq() : -(b * i_gq());
             return ParamMap{{"a", pick_nonzero(rng)}, {"b", b}, {"g", g}};
         }});
    add({"2.4/N=(iii)/b^2+g^2!=0", "2.4", ChainEntry::t24_iii, {"a", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             GQ b = at(m, "b"), g = at(m, "g");
             if (b.is_zero() && g.is_zero()) return "A^3 = 0 without b or g";
             if ((b * b + g * g).is_zero()) return "this branch has b^2 + g^2 != 0";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('3', at(m, "a"), GQ(0), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             GQ b = pick(rng), g = pick(rng);
             while ((b.is_zero() && g.is_zero()) || (b * b + g * g).is_zero()) {
                 b = pick(rng);
                 g = pick(rng);
             }
             return ParamMap{{"a", pick_nonzero(rng)}, {"b", b}, {"g", g}};
         }});
    add({"2.4/N=(iv)/b=0", "2.4", ChainEntry::t24_iv, {"a", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             if (!at(m, "b").is_zero()) return "this branch has b = 0";
             if (at(m, "g").is_zero()) return "g must be nonzero so the reduced A^3 != 0";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('4', at(m, "a"), GQ(0), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             return ParamMap{{"a", pick_nonzero(rng)}, {"b", GQ(0)}, {"g", pick_nonzero(rng)}};
         }});
    add({"2.4/N=(iv)/b!=0", "2.4", ChainEntry::t24_iv, {"a", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             if (at(m, "b").is_zero()) return "this branch has b != 0";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('4', at(m, "a"), GQ(0), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             return ParamMap{{"a", pick_nonzero(rng)}, {"b", pick_nonzero(rng)}, {"g", pick(rng)}};
         }});
    add({"2.4/N=(v)/bg=0", "2.4", ChainEntry::t24_v, {"a", "c", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             GQ c = at(m, "c");
             if (c == GQ(1) || c == GQ(-1)) return "c = +-1 is outside the (v) domain";
             GQ b = at(m, "b"), g = at(m, "g");
             if (!(b * g).is_zero()) return "this branch has b g = 0";
             if (b.is_zero() && g.is_zero()) return "A^3 = 0 without b or g";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('5', at(m, "a"), at(m, "c"), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             GQ c = pick(rng);
             while (c == GQ(1) || c == GQ(-1)) c = pick(rng);
             bool bz = rng.next_int(2);
             return ParamMap{{"a", pick_nonzero(rng)},
                             {"c", c},
                             {"b", bz ? GQ(0) : pick_nonzero(rng)},
                             {"g", bz ? pick_nonzero(rng) : GQ(0)}};
         }});
    add({"2.4/N=(v)/bg!=0", "2.4", ChainEntry::t24_v, {"a", "c", "b", "g"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a").is_zero()) return "a must be nonzero";
             GQ c = at(m, "c");
             if (c == GQ(1) || c == GQ(-1)) return "c = +-1 is outside the (v) domain";
             if ((at(m, "b") * at(m, "g")).is_zero()) return "this branch has b g != 0";
             return std::nullopt;
         },
         [](const ParamMap& m) {
             return form_source('5', at(m, "a"), at(m, "c"), true, at(m, "b"), at(m, "g"));
         },
         [](Rng& rng) {
             GQ c = pick(rng);
             while (c == GQ(1) || c == GQ(-1)) c = pick(rng);
             return ParamMap{{"a", pick_nonzero(rng)},
                             {"c", c},
                             {"b", pick_nonzero(rng)},
                             {"g", pick_nonzero(rng)}};
         }});

    // ---- dim A^2 = 2 = Leib, A^3 = 0 ----------------------------------------
    auto adm_a2 = [](const ParamMap& m) -> std::optional<std::string> {
        if (at(m, "a2").is_zero()) return "a2 must be nonzero (dim A^2 = 2)";
        return std::nullopt;
    };
    auto sample_a12 = [](Rng& rng) {
        return ParamMap{{"a1", pick(rng)}, {"a2", pick_nonzero(rng)}};
    };
    add({"2.5/zl3zr2", "2.5", ChainEntry::t25_zl3zr2, {"a1", "a2"}, false, 1, adm_a2,
         [](const ParamMap& m) { return t25_source(m, false, false, false); }, sample_a12});
    add({"2.5/zl2zr3", "2.5", ChainEntry::t25_zl2zr3, {"a1", "a2"}, false, 1, adm_a2,
         [](const ParamMap& m) { return t25_source(m, true, false, false); }, sample_a12});

    add({"2.5/H3/cross!=0", "2.5", ChainEntry::t25_h3, {"a1", "a2", "b1", "b2"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             GQ a1 = at(m, "a1"), a2 = at(m, "a2"), b1 = at(m, "b1"), b2 = at(m, "b2");
             if ((a2 + b2).is_zero()) return "a2 + b2 must be nonzero since dim Leib = 2";
             if ((a1 * b2 - a2 * b1).is_zero()) return "this branch needs a1 b2 != a2 b1";
             if (a1.is_zero() && a2.is_zero()) return "left row vanished";
             if (b1.is_zero() && b2.is_zero()) return "right row vanished";
             return std::nullopt;
         },
         [](const ParamMap& m) { return t25_source(m, false, true, false); },
         [](Rng& rng) {
             for (;;) {
                 ParamMap m{{"a1", pick(rng)}, {"a2", pick(rng)}, {"b1", pick(rng)},
                            {"b2", pick(rng)}};
                 GQ a1 = at(m, "a1"), a2 = at(m, "a2"), b1 = at(m, "b1"), b2 = at(m, "b2");
                 if ((a2 + b2).is_zero() || (a1 * b2 - a2 * b1).is_zero()) continue;
                 if (a1.is_zero() && a2.is_zero()) continue;
                 if (b1.is_zero() && b2.is_zero()) continue;
                 return m;
             }
         }});
    add({"2.5/H3/cross=0", "2.5", ChainEntry::t25_h3, {"a1", "a2", "b1", "b2"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             GQ a1 = at(m, "a1"), a2 = at(m, "a2"), b1 = at(m, "b1"), b2 = at(m, "b2");
             if ((a2 + b2).is_zero()) return "a2 + b2 must be nonzero since dim Leib = 2";
             if (!(a1 * b2 - a2 * b1).is_zero()) return "this branch needs a1 b2 = a2 b1";
             if (a2.is_zero() || b2.is_zero()) return "a2, b2 must be nonzero here";
             return std::nullopt;
         },
         [](const ParamMap& m) { return t25_source(m, false, true, false); },
         [](Rng& rng) {
             for (;;) {
                 GQ a1 = pick(rng), a2 = pick_nonzero(rng), b2 = pick_nonzero(rng);
                 if ((a2 + b2).is_zero()) continue;
                 GQ b1 = a1 * b2 / a2;
                 return ParamMap{{"a1", a1}, {"a2", a2}, {"b1", b1}, {"b2", b2}};
             }
         }});

    auto h2_source = [](const ParamMap& m) { return t25_source(m, false, true, true); };
    auto h2_guard = [](const ParamMap& m) -> std::optional<std::string> {
        GQ h = GQ(1) - (at(m, "a1") + at(m, "b1")) * (at(m, "a2") + at(m, "b2"));
        if (h.is_zero()) return "(a1+b1)(a2+b2) = 1 puts the maximal abelian subalgebra at dim 3";
        return std::nullopt;
    };

    add({"2.5/H2/a2=0/a1=0/b1!=0", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (!at(m, "a1").is_zero() || !at(m, "a2").is_zero()) return "branch has a1 = a2 = 0";
             if (at(m, "b1").is_zero()) return "branch has b1 != 0";
             if ((at(m, "b1") * at(m, "b2") - GQ(1)).is_zero())
                 return "b1 b2 = 1 puts the maximal abelian subalgebra at dim 3";
             return std::nullopt;
         },
         h2_source,
         [](Rng& rng) {
             for (;;) {
                 GQ b1 = pick_nonzero(rng), b2 = pick(rng);
                 if ((b1 * b2 - GQ(1)).is_zero()) continue;
                 return ParamMap{{"a1", GQ(0)}, {"a2", GQ(0)}, {"b1", b1}, {"b2", b2}};
             }
         }});
    add({"2.5/H2/a2=0/a1=0/b1=0", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (!at(m, "a1").is_zero() || !at(m, "a2").is_zero() || !at(m, "b1").is_zero())
                 return "branch has a1 = a2 = b1 = 0";
             if (at(m, "b2").is_zero()) return "b2 = 0 would make the algebra split";
             return std::nullopt;
         },
         h2_source,
         [](Rng& rng) {
             return ParamMap{{"a1", GQ(0)}, {"a2", GQ(0)}, {"b1", GQ(0)}, {"b2", pick_nonzero(rng)}};
         }});
    add({"2.5/H2/a2=0/a1!=0/a1b2=1", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, true, 36,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (!at(m, "a2").is_zero()) return "branch has a2 = 0";
             GQ a1 = at(m, "a1");
             if (a1.is_zero()) return "branch has a1 != 0";
             if (!(a1 * at(m, "b2") - GQ(1)).is_zero()) return "branch has a1 b2 = 1";
             if (at(m, "b1").is_zero()) return "b1 = 0 would force a one-sided center of dim 3";
             return std::nullopt;
         },
         h2_source,
         [](Rng& rng) {
             GQ a1 = pick_nonzero(rng);
             return ParamMap{{"a1", a1}, {"a2", GQ(0)}, {"b1", pick_nonzero(rng)},
                             {"b2", GQ(1) / a1}};
         }});
    add({"2.5/H2/a2=0/a1!=0/a1b2!=1", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, false, 1,
         [](const ParamMap& m) -> std::optional<std::string> {
             if (!at(m, "a2").is_zero()) return "branch has a2 = 0";
             GQ a1 = at(m, "a1");
             if (a1.is_zero()) return "branch has a1 != 0";
             if ((a1 * at(m, "b2") - GQ(1)).is_zero()) return "branch has a1 b2 != 1";
             GQ h = GQ(1) - (a1 + at(m, "b1")) * at(m, "b2");
             if (h.is_zero()) return "(a1+b1) b2 = 1 puts the maximal abelian subalgebra at dim 3";
             return std::nullopt;
         },
         h2_source,
         [](Rng& rng) {
             for (;;) {
                 GQ a1 = pick_nonzero(rng), b1 = pick(rng), b2 = pick(rng);
                 if ((a1 * b2 - GQ(1)).is_zero()) continue;
                 if ((GQ(1) - (a1 + b1) * b2).is_zero()) continue;
                 return ParamMap{{"a1", a1}, {"a2", GQ(0)}, {"b1", b1}, {"b2", b2}};
             }
         }});

    auto h2_a2nz_sampler = [](Rng& rng, bool b2_zero, int b1_mode /*0 zero, 1 nonzero, 2 inv*/) {
        for (;;) {
            GQ a1 = pick(rng), a2 = pick_nonzero(rng);
            GQ b2 = b2_zero ? GQ(0) : pick_nonzero(rng);
            GQ b1;
            switch (b1_mode) {
            case 0: b1 = GQ(0); break;
            case 1: b1 = pick_nonzero(rng); break;
            default: b1 = GQ(1) / a2; break;
            }
            ParamMap m{{"a1", a1}, {"a2", a2}, {"b1", b1}, {"b2", b2}};
            if ((GQ(1) - (a1 + b1) * (a2 + b2)).is_zero()) continue;
            if (b1_mode == 1 && b2_zero && (a2 * b1 - GQ(1)).is_zero()) continue;
            if (b1_mode == 2 && a1.is_zero()) continue;
            return m;
        }
    };

    add({"2.5/H2/a2!=0/b2=0/b1=0", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, false, 1,
         [=](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a2").is_zero()) return "branch has a2 != 0";
             if (!at(m, "b2").is_zero() || !at(m, "b1").is_zero()) return "branch has b1 = b2 = 0";
             return h2_guard(m);
         },
         h2_source, [=](Rng& rng) { return h2_a2nz_sampler(rng, true, 0); }});
    add({"2.5/H2/a2!=0/b2=0/a2b1=1", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, true, 72,
         [=](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a2").is_zero()) return "branch has a2 != 0";
             if (!at(m, "b2").is_zero()) return "branch has b2 = 0";
             if (!(at(m, "a2") * at(m, "b1") - GQ(1)).is_zero()) return "branch has a2 b1 = 1";
             if (at(m, "a1").is_zero()) return "a1 = 0 contradicts the dim-2 abelian subalgebra";
             return h2_guard(m);
         },
         h2_source, [=](Rng& rng) { return h2_a2nz_sampler(rng, true, 2); }});
    add({"2.5/H2/a2!=0/b2=0/a2b1!=1", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, false, 1,
         [=](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a2").is_zero()) return "branch has a2 != 0";
             if (!at(m, "b2").is_zero()) return "branch has b2 = 0";
             if (at(m, "b1").is_zero()) return "branch has b1 != 0";
             if ((at(m, "a2") * at(m, "b1") - GQ(1)).is_zero()) return "branch has a2 b1 != 1";
             return h2_guard(m);
         },
         h2_source, [=](Rng& rng) { return h2_a2nz_sampler(rng, true, 1); }});
    add({"2.5/H2/a2!=0/b2!=0/b1=0", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, true, 36,
         [=](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a2").is_zero()) return "branch has a2 != 0";
             if (at(m, "b2").is_zero()) return "branch has b2 != 0";
             if (!at(m, "b1").is_zero()) return "branch has b1 = 0";
             return h2_guard(m);
         },
         h2_source, [=](Rng& rng) { return h2_a2nz_sampler(rng, false, 0); }});
    add({"2.5/H2/a2!=0/b2!=0/b1!=0", "2.5", ChainEntry::t25_h2, {"a1", "a2", "b1", "b2"}, true, 2,
         [=](const ParamMap& m) -> std::optional<std::string> {
             if (at(m, "a2").is_zero()) return "branch has a2 != 0";
             if (at(m, "b2").is_zero()) return "branch has b2 != 0";
             if (at(m, "b1").is_zero()) return "branch has b1 != 0";
             return h2_guard(m);
         },
         h2_source, [=](Rng& rng) { return h2_a2nz_sampler(rng, false, 1); }});

    // ---- dim A^2 = 2 = Leib, dim A^3 = 1 ------------------------------------
    auto t26_base = [](Rng& rng, const GQ& a1, const GQ& a2, const GQ& a3, const GQ& a4,
                       const GQ& b2, const GQ& b4) {
        ParamMap m{{"a1", a1}, {"a2", a2}, {"a3", a3},          {"a4", a4},
                   {"b1", GQ(0)}, {"b2", b2}, {"b3", GQ(0)},    {"b4", b4},
                   {"g1", pick_nonzero(rng)}, {"g2", GQ(0)}};
        return m;
    };
    auto adm_t26 = [](const ParamMap& m) -> std::optional<std::string> {
        // the two coefficient relations the derivation rests on
        if (!(at(m, "b1") * at(m, "g1") - at(m, "a1") * at(m, "g2")).is_zero() ||
            !(at(m, "a3") * at(m, "g2") - at(m, "b3") * at(m, "g1")).is_zero())
            return "Leibniz coefficient relations violated";
        if (at(m, "g1").is_zero() && at(m, "g2").is_zero()) return "A^3 = 0";
        return std::nullopt;
    };

    struct Pattern {
        const char* name;
        bool b2z, b4z;
    };
    const Pattern pats[] = {{"b2=0,b4=0", true, true},
                            {"b2=0,b4!=0", true, false},
                            {"b2!=0,b4=0", false, true},
                            {"b2!=0,b4!=0", false, false}};
    for (const auto& pat : pats) {
        add({std::string("2.6/g2=0/a1=0/a2=0/") + pat.name, "2.6", ChainEntry::t26_general,
             {"a3", "a4", "b2", "b4", "g1"}, false, 1, adm_t26, t26_source,
             [=](Rng& rng) {
                 return t26_base(rng, GQ(0), GQ(0), pick_nonzero(rng), pick(rng),
                                 pat.b2z ? GQ(0) : pick_nonzero(rng),
                                 pat.b4z ? GQ(0) : pick_nonzero(rng));
             }});
    }
    add({"2.6/g2=0/a1=0/a2!=0", "2.6", ChainEntry::t26_general,
         {"a2", "a3", "a4", "b2", "b4", "g1"}, false, 1, adm_t26, t26_source,
         [=](Rng& rng) {
             return t26_base(rng, GQ(0), pick_nonzero(rng), pick_nonzero(rng), pick(rng), pick(rng),
                             pick(rng));
         }});
    add({"2.6/g2=0/a1!=0/a3=0/a4=0/b4=0", "2.6", ChainEntry::t26_general,
         {"a1", "a2", "b2", "g1"}, false, 1,
         [=](const ParamMap& m) -> std::optional<std::string> {
             if (auto why = adm_t26(m)) return why;
             if (at(m, "b2").is_zero() && at(m, "b4").is_zero())
                 return "b2 = b4 = 0 would make the algebra split";
             return std::nullopt;
         },
         t26_source,
         [=](Rng& rng) {
             return t26_base(rng, pick_nonzero(rng), pick(rng), GQ(0), GQ(0), pick_nonzero(rng),
                             GQ(0));
         }});
    add({"2.6/g2=0/a1!=0/a3=0/a4=0/b4!=0", "2.6", ChainEntry::t26_general,
         {"a1", "a2", "b2", "b4", "g1"}, true, 8, adm_t26, t26_source,
         [=](Rng& rng) {
             return t26_base(rng, pick_nonzero(rng), pick(rng), GQ(0), GQ(0), pick(rng),
                             pick_nonzero(rng));
         }});
    add({"2.6/g2=0/a1!=0/a3=0/a4!=0", "2.6", ChainEntry::t26_general,
         {"a1", "a2", "a4", "b2", "b4", "g1"}, true, 8, adm_t26, t26_source,
         [=](Rng& rng) {
             bool b4z = rng.next_int(2);
             return t26_base(rng, pick_nonzero(rng), pick(rng), GQ(0), pick_nonzero(rng),
                             b4z ? pick_nonzero(rng) : pick(rng),
                             b4z ? GQ(0) : pick_nonzero(rng));
         }});
    add({"2.6/g2=0/a1!=0/a3!=0", "2.6", ChainEntry::t26_general,
         {"a1", "a2", "a3", "a4", "b2", "b4", "g1"}, false, 1, adm_t26, t26_source,
         [=](Rng& rng) {
             return t26_base(rng, pick_nonzero(rng), pick(rng), pick_nonzero(rng), pick(rng),
                             pick(rng), pick(rng));
         }});
    add({"2.6/g2!=0/g1=0", "2.6", ChainEntry::t26_general,
         {"a2", "a4", "b1", "b2", "b3", "b4", "g2"}, true, 8, adm_t26, t26_source,
         [](Rng& rng) {
             return ParamMap{{"a1", GQ(0)},   {"a2", pick(rng)}, {"a3", GQ(0)},
                             {"a4", pick(rng)}, {"b1", pick(rng)}, {"b2", pick(rng)},
                             {"b3", pick_nonzero(rng)}, {"b4", pick(rng)},
                             {"g1", GQ(0)},   {"g2", pick_nonzero(rng)}};
         }});
    add({"2.6/g2!=0/g1!=0", "2.6", ChainEntry::t26_general,
         {"a2", "a3", "a4", "b1", "b2", "b4", "g1", "g2"}, true, 8, adm_t26, t26_source,
         [](Rng& rng) {
             GQ g1 = pick_nonzero(rng), g2 = pick_nonzero(rng);
             GQ b1 = pick(rng), a3 = pick(rng);
             GQ a1 = b1 * g1 / g2;
             GQ b3 = a3 * g2 / g1;
             return ParamMap{{"a1", a1},       {"a2", pick(rng)}, {"a3", a3},
                             {"a4", pick(rng)}, {"b1", b1},        {"b2", pick(rng)},
                             {"b3", b3},        {"b4", pick(rng)}, {"g1", g1},
                             {"g2", g2}};
         }});

    (void)one;
    (void)zero;
    return cases;
}

} // namespace

const std::vector<ProofCase>& proof_cases() {
    static const std::vector<ProofCase> cases = build_cases();
    return cases;
}

const ProofCase& proof_case(const std::string& label) {
    for (const auto& pc : proof_cases())
        if (pc.label == label) return pc;
    throw error("unknown proof case " + label);
}

ReplayOutcome proof_replay(const ProofCase& pc, const ParamMap& params) {
    ReplayOutcome out;
    out.case_label = pc.label;
    out.params = params;

    if (auto why = pc.admissible(params)) {
        out.skipped = true;
        out.skip_reason = *why;
        return out;
    }

    StructureTable<GQ> source = pc.source(params);

    if (!pc.radical) {
        ChainState<GQ> st;
        st.t = source;
        try {
            auto reached = run_chain(ChainEntry(pc.entry), st);
            out.path = st.path;
            out.target_index = reached.index;
            if (reached.param) {
                out.target_param = reached.param->to_complex();
                out.target_param_exact = *reached.param;
            }
            ClassId id{reached.index};
            if (reached.param) id.param = *reached.param;
            auto target = instantiate(id);
            out.deviation = max_abs_diff(st.t, target);
            out.exact = true;
            out.ok = out.deviation == 0.0;
            if (!out.ok) out.detail = "exact replay deviated from the catalog table";
        } catch (const error& e) {
            out.ok = false;
            out.detail = e.what();
        }
        return out;
    }

    // radical path: approximate backend, trying root branches until one works
    auto approx_source = to_approx(source);
    const double scale = std::max(1.0, approx_source.max_abs());
    ReplayOutcome best = out;
    for (int combo = 0; combo < pc.branch_count; ++combo) {
        ChainState<Cplx> st;
        st.t = approx_source;
        Radicals rad;
        rad.combo = combo;
        st.rad = &rad;
        ReplayOutcome attempt = out;
        try {
            auto reached = run_chain(ChainEntry(pc.entry), st);
            attempt.path = st.path;
            attempt.target_index = reached.index;
            if (reached.param) {
                attempt.target_param = *reached.param;
                if (auto exact = reconstruct_scalar(*reached.param, 1000))
                    attempt.target_param_exact = *exact;
            }
            auto target = instantiate_approx(reached.index,
                                             reached.param ? *reached.param : Cplx{});
            attempt.deviation = max_abs_diff(st.t, target);
            attempt.branch = combo;
            attempt.ok = attempt.deviation <= 1e-9 * scale;
        } catch (const error& e) {
            attempt.ok = false;
            attempt.detail = e.what();
        }
        if (attempt.ok) return attempt;
        if (attempt.deviation < best.deviation) best = attempt;
    }
    if (best.detail.empty()) best.detail = "no radical branch reproduced the catalog table";
    return best;
}

ReplaySummary replay_all(int samples, std::uint64_t seed) {
    ReplaySummary summary;
    const auto& cases = proof_cases();
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        Rng rng(seed, 0x52504c41ULL + ci);
        for (int s = 0; s < samples; ++s) {
            auto params = cases[ci].sample(rng);
            auto outcome = proof_replay(cases[ci], params);
            if (outcome.skipped)
                ++summary.skipped;
            else if (outcome.ok) {
                ++summary.passed;
                summary.worst_deviation = std::max(summary.worst_deviation, outcome.deviation);
            } else
                ++summary.failed;
            summary.outcomes.push_back(std::move(outcome));
        }
    }
    return summary;
}

} // namespace leibniz
