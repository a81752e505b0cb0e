#include "leibniz/catalog.hpp"

#include <array>

namespace leibniz {

namespace {

Fingerprint make_fp(std::vector<int> lcs, int leib, int zl, int zr, int z) {
    Fingerprint fp;
    fp.n = 4;
    fp.lcs_dims = std::move(lcs);
    if (fp.lcs_dims.back() == 0) fp.nilpotency_class = static_cast<int>(fp.lcs_dims.size()) - 1;
    fp.dim_leib = leib;
    fp.dim_zl = zl;
    fp.dim_zr = zr;
    fp.dim_z = z;
    fp.lie = leib == 0;
    return fp;
}

const std::array<ClassSpec, 25> kSpecs = {{
    {1, "A1", "2.1", false, {1, 0, 1}, make_fp({4, 1, 0}, 1, 2, 2, 1)},
    {2, "A2", "2.1", false, {1, 0, 1}, make_fp({4, 1, 0}, 1, 1, 1, 1)},
    {3, "A3", "2.1", false, {1, 0, 1}, make_fp({4, 1, 0}, 1, 1, 1, 1)},
    {4, "A4", "2.1", false, {1, 0, 1}, make_fp({4, 1, 0}, 1, 1, 1, 1)},
    {5, "A5", "2.1", true, {1, 0, 1}, make_fp({4, 1, 0}, 1, 1, 1, 1)},
    {6, "A6", "2.1", false, {1, 0, 1}, make_fp({4, 1, 0}, 1, 1, 1, 1)},
    {7, "A7", "2.2", false, {3, std::nullopt, std::nullopt}, make_fp({4, 3, 2, 1, 0}, 3, 3, 1, 1)},
    {8, "A8", "2.3", false, {2, 0, 1}, make_fp({4, 2, 0}, 1, 2, 2, 2)},
    {9, "A9", "2.3", false, {2, 0, 1}, make_fp({4, 2, 0}, 1, 2, 2, 2)},
    {10, "A10", "2.4", false, {2, 1, 1}, make_fp({4, 2, 1, 0}, 1, 1, 1, 1)},
    {11, "A11", "2.4", false, {2, 1, 1}, make_fp({4, 2, 1, 0}, 1, 1, 1, 1)},
    {12, "A12", "2.4", false, {2, 1, 1}, make_fp({4, 2, 1, 0}, 1, 1, 1, 1)},
    {13, "A13", "2.4", false, {2, 1, 1}, make_fp({4, 2, 1, 0}, 1, 1, 1, 1)},
    {14, "A14", "2.5", false, {2, 0, 2}, make_fp({4, 2, 0}, 2, 3, 2, 2)},
    {15, "A15", "2.5", false, {2, 0, 2}, make_fp({4, 2, 0}, 2, 2, 3, 2)},
    {16, "A16", "2.5", false, {2, 0, 2}, make_fp({4, 2, 0}, 2, 2, 2, 2)},
    {17, "A17", "2.5", true, {2, 0, 2}, make_fp({4, 2, 0}, 2, 2, 2, 2)},
    {18, "A18", "2.5", true, {2, 0, 2}, make_fp({4, 2, 0}, 2, 2, 2, 2)},
    {19, "A19", "2.5", false, {2, 0, 2}, make_fp({4, 2, 0}, 2, 2, 2, 2)},
    {20, "A20", "2.6", false, {2, 1, 2}, make_fp({4, 2, 1, 0}, 2, 3, 2, 1)},
    {21, "A21", "2.6", false, {2, 1, 2}, make_fp({4, 2, 1, 0}, 2, 2, 2, 1)},
    {22, "A22", "2.6", false, {2, 1, 2}, make_fp({4, 2, 1, 0}, 2, 2, 1, 1)},
    {23, "A23", "2.6", false, {2, 1, 2}, make_fp({4, 2, 1, 0}, 2, 2, 1, 1)},
    {24, "A24", "2.6", false, {2, 1, 2}, make_fp({4, 2, 1, 0}, 2, 2, 2, 1)},
    {25, "A25", "2.6", false, {2, 1, 2}, make_fp({4, 2, 1, 0}, 2, 2, 1, 1)},
}};

using GQ = GaussianRational;

// Nonzero products of each class, 1-based indices (i, j, k) meaning
// [x_i, x_j] = coeff * x_k; the parameter slot is marked by its coefficient.
struct Product {
    int i, j, k;
    int coeff;      // ignored when uses_param
    bool uses_param = false;
};

const std::vector<Product>& class_products(int index) {
    static const std::array<std::vector<Product>, 26> tables = {{
        {},
        /*A1*/ {{1, 3, 4, 1}, {3, 2, 4, 1}},
        /*A2*/ {{1, 3, 4, 1}, {2, 2, 4, 1}, {2, 3, 4, 1}, {3, 1, 4, 1}, {3, 2, 4, -1}},
        /*A3*/ {{1, 2, 4, 1}, {2, 1, 4, -1}, {3, 3, 4, 1}},
        /*A4*/ {{1, 2, 4, 1}, {2, 1, 4, -1}, {2, 2, 4, 1}, {3, 3, 4, 1}},
        /*A5*/ {{1, 2, 4, 1}, {2, 1, 4, 0, true}, {3, 3, 4, 1}},
        /*A6*/ {{1, 1, 4, 1}, {2, 2, 4, 1}, {3, 3, 4, 1}},
        /*A7*/ {{1, 1, 2, 1}, {1, 2, 3, 1}, {1, 3, 4, 1}},
        /*A8*/ {{1, 1, 4, 1}, {1, 2, 3, 1}, {2, 1, 3, -1}},
        /*A9*/ {{1, 1, 4, 1}, {1, 2, 3, 1}, {2, 1, 3, -1}, {2, 2, 4, 1}},
        /*A10*/ {{1, 1, 4, 1}, {1, 2, 3, 1}, {2, 1, 3, -1}, {1, 3, 4, 1}, {3, 1, 4, -1}},
        /*A11*/ {{1, 2, 3, 1}, {2, 1, 3, -1}, {2, 2, 4, 1}, {1, 3, 4, 1}, {3, 1, 4, -1}},
        /*A12*/ {{1, 1, 4, 1}, {1, 2, 3, 1}, {2, 1, 3, -1}, {2, 1, 4, 1}, {1, 3, 4, 1}, {3, 1, 4, -1}},
        /*A13*/ {{2, 2, 4, 1}, {1, 2, 3, 1}, {2, 1, 3, -1}, {2, 1, 4, 1}, {1, 3, 4, 1}, {3, 1, 4, -1}},
        /*A14*/ {{1, 1, 3, 1}, {1, 2, 4, 1}},
        /*A15*/ {{1, 1, 3, 1}, {2, 1, 4, 1}},
        /*A16*/ {{1, 2, 4, 1}, {2, 1, 3, 1}, {2, 2, 3, -1}},
        /*A17*/ {{1, 1, 3, 1}, {1, 2, 4, 1}, {2, 1, 4, 0, true}},
        /*A18*/ {{1, 1, 3, 1}, {2, 1, 4, 1}, {1, 2, 3, 0, true}, {2, 2, 4, -1}},
        /*A19*/ {{1, 1, 3, 1}, {1, 2, 3, 1}, {2, 1, 3, 1}, {2, 1, 4, 1}, {2, 2, 4, 1}},
        /*A20*/ {{1, 2, 3, 1}, {1, 3, 4, 1}},
        /*A21*/ {{1, 2, 3, 1}, {2, 2, 4, 1}, {1, 3, 4, 1}},
        /*A22*/ {{1, 2, 3, 1}, {2, 1, 4, 1}, {1, 3, 4, 1}},
        /*A23*/ {{1, 2, 3, 1}, {2, 1, 4, 1}, {2, 2, 4, 1}, {1, 3, 4, 1}},
        /*A24*/ {{1, 1, 3, 1}, {2, 1, 4, 1}, {1, 3, 4, 1}},
        /*A25*/ {{1, 1, 3, 1}, {2, 2, 4, 1}, {1, 3, 4, 1}},
    }};
    return tables[index];
}

void check_index(int index) {
    if (index < 1 || index > 25) throw error("catalog class index out of range");
}

} // namespace

std::string ClassId::str() const {
    check_index(index);
    std::string s = kSpecs[index - 1].name;
    if (param) s += "(" + format_scalar(*param) + ")";
    return s;
}

const ClassSpec& class_spec(int index) {
    check_index(index);
    return kSpecs[index - 1];
}

bool is_parametric(int index) {
    check_index(index);
    return kSpecs[index - 1].parametric;
}

bool param_in_domain(int index, const GQ& p) {
    switch (index) {
    case 5: return p != GQ(1) && p != GQ(-1);
    case 17: return p != GQ(-1) && !p.is_zero();
    case 18: return p != GQ(-1);
    default: return true;
    }
}

bool param_in_domain_approx(int index, Cplx p, double tol) {
    switch (index) {
    case 5: return std::abs(p - Cplx(1)) > tol && std::abs(p + Cplx(1)) > tol;
    case 17: return std::abs(p + Cplx(1)) > tol && std::abs(p) > tol;
    case 18: return std::abs(p + Cplx(1)) > tol;
    default: return true;
    }
}

StructureTable<GQ> instantiate(const ClassId& id) {
    check_index(id.index);
    const bool parametric = is_parametric(id.index);
    if (parametric && !id.param)
        throw param_out_of_domain(std::string(kSpecs[id.index - 1].name) + " needs a parameter");
    if (parametric && !param_in_domain(id.index, *id.param))
        throw param_out_of_domain("parameter " + format_scalar(*id.param) + " outside the domain of " +
                                  kSpecs[id.index - 1].name);
    StructureTable<GQ> t(4);
    for (const auto& p : class_products(id.index)) {
        GQ coeff = p.uses_param ? *id.param : GQ(p.coeff);
        t.add_product(p.i - 1, p.j - 1, p.k - 1, coeff);
    }
    return t;
}

StructureTable<Cplx> instantiate_approx(const ClassId& id) { return to_approx(instantiate(id)); }

StructureTable<Cplx> instantiate_approx(int index, Cplx param) {
    check_index(index);
    StructureTable<Cplx> t(4);
    for (const auto& p : class_products(index))
        t.add_product(p.i - 1, p.j - 1, p.k - 1, p.uses_param ? param : Cplx(p.coeff));
    return t;
}

void parametric_parts(int index, StructureTable<Cplx>& base, StructureTable<Cplx>& dir) {
    if (!is_parametric(index)) throw error("class has no parameter");
    base = StructureTable<Cplx>(4);
    dir = StructureTable<Cplx>(4);
    for (const auto& p : class_products(index)) {
        if (p.uses_param)
            dir.add_product(p.i - 1, p.j - 1, p.k - 1, Cplx(1));
        else
            base.add_product(p.i - 1, p.j - 1, p.k - 1, Cplx(p.coeff));
    }
}

Fingerprint reference_fingerprint(int index, const std::optional<GQ>& param) {
    check_index(index);
    // A5 at c = 0 drops the [x2,x1] product, which enlarges both one-sided
    // centers; every other family fingerprint is constant on its domain.
    if (index == 5 && param && param->is_zero()) return make_fp({4, 1, 0}, 1, 2, 2, 1);
    return kSpecs[index - 1].reference;
}

std::vector<GQ> default_param_grid(int index) {
    switch (index) {
    case 5:
        return {GQ(0), GQ(2), GQ(Rational(1, 2)), GQ(Rational(3), Rational(1)), GQ(-5)};
    case 17:
        return {GQ(1), GQ(2), GQ::i(), GQ(-2), GQ(Rational(1, 3))};
    case 18:
        return {GQ(0), GQ(2), GQ::i(), GQ(-2), GQ(Rational(1, 3))};
    default:
        return {};
    }
}

std::vector<ClassId> default_instances() {
    std::vector<ClassId> out;
    for (int k = 1; k <= 25; ++k) {
        if (!is_parametric(k)) {
            out.emplace_back(k);
            continue;
        }
        for (const auto& p : default_param_grid(k)) out.emplace_back(k, p);
    }
    return out;
}

std::vector<int> shortlist_classes(const Fingerprint& fp) {
    std::vector<int> out;
    if (fp.n != 4 || fp.lie || !fp.nilpotent()) return out;
    for (int k = 1; k <= 25; ++k) {
        const auto& ref = kSpecs[k - 1].reference;
        if (k == 5) {
            // A5's one-sided centers depend on c: (1,1) generically, (2,2) at c=0.
            bool centers_ok = (fp.dim_zl == 1 && fp.dim_zr == 1 && fp.dim_z == 1) ||
                              (fp.dim_zl == 2 && fp.dim_zr == 2 && fp.dim_z == 1);
            if (fp.lcs_dims == ref.lcs_dims && fp.dim_leib == ref.dim_leib && centers_ok)
                out.push_back(k);
            continue;
        }
        if (fp == ref) out.push_back(k);
    }
    return out;
}

} // namespace leibniz
