#ifndef LEIBNIZ_CATALOG_HPP
#define LEIBNIZ_CATALOG_HPP

#include "leibniz/invariants.hpp"

#include <optional>
#include <string>
#include <vector>

namespace leibniz {

struct param_out_of_domain : error {
    explicit param_out_of_domain(const std::string& what) : error(what) {}
};

// One of the 25 isomorphism classes, with the family parameter where one exists
// (c for A5, alpha for A17 and A18).
struct ClassId {
    int index = 0; // 1..25
    std::optional<GaussianRational> param;

    ClassId() = default;
    explicit ClassId(int idx) : index(idx) {}
    ClassId(int idx, GaussianRational p) : index(idx), param(p) {}

    std::string str() const;

    friend bool operator==(const ClassId& a, const ClassId& b) {
        return a.index == b.index && a.param == b.param;
    }
};

struct HypothesisDims {
    int dim_sq = 0;                 // dim A^2 stated by the source theorem
    std::optional<int> dim_cube;    // dim A^3 when stated
    std::optional<int> dim_leib;    // dim Leib when stated
};

struct ClassSpec {
    int index;
    const char* name;     // "A1".."A25"
    const char* theorem;  // source theorem in the catalog, "2.1".."2.6"
    bool parametric;
    HypothesisDims hypothesis;
    Fingerprint reference; // for parametric families: the generic-parameter fingerprint
};

const ClassSpec& class_spec(int index);
inline std::vector<int> all_class_indices() {
    std::vector<int> v;
    for (int i = 1; i <= 25; ++i) v.push_back(i);
    return v;
}

bool is_parametric(int index);
bool param_in_domain(int index, const GaussianRational& p);
bool param_in_domain_approx(int index, Cplx p, double tol = 1e-6);

// Exact table of the class; throws param_out_of_domain for bad parameters.
StructureTable<GaussianRational> instantiate(const ClassId& id);
StructureTable<Cplx> instantiate_approx(const ClassId& id);
StructureTable<Cplx> instantiate_approx(int index, Cplx param);

// Family table split as base + theta * direction (the parameter enters each
// family linearly); used by the parametric isomorphism solve.
void parametric_parts(int index, StructureTable<Cplx>& base, StructureTable<Cplx>& dir);

// Fingerprint the class is known to have (A5 at c = 0 differs from the generic
// A5 fingerprint; everything else is parameter independent on its domain).
Fingerprint reference_fingerprint(int index, const std::optional<GaussianRational>& param);

// Documented default sampling grids for the parametric families.
std::vector<GaussianRational> default_param_grid(int index);

// All catalog instances over the default grids: non-parametric classes once,
// parametric classes once per grid value.
std::vector<ClassId> default_instances();

// Catalog classes whose fingerprint could equal fp (parametric families are
// matched on their parameter-independent fields).
std::vector<int> shortlist_classes(const Fingerprint& fp);

} // namespace leibniz

#endif
