#ifndef LEIBNIZ_SPLIT_HPP
#define LEIBNIZ_SPLIT_HPP

#include "leibniz/isosolver.hpp"

namespace leibniz {

// Outcome of the direct-sum search. A positive finding always carries verified
// ideals; "probably non-split" is explicitly probabilistic (restart budget
// exhausted), and certification without search happens only when the searched
// decomposition shape is impossible outright.
struct SplitOutcome {
    enum class Kind { split, probably_non_split, non_split_certified };
    Kind kind = Kind::probably_non_split;

    Subspace<Cplx> ideal_a, ideal_b;
    std::optional<std::pair<Subspace<GaussianRational>, Subspace<GaussianRational>>> exact_ideals;
    bool exact_certified = false;
    int restarts = 0;
    std::string reason;

    bool found() const { return kind == Kind::split; }
};

// Checks the two-sided ideal closure of both subspaces and that they decompose
// the whole space; used on every positive finding and directly by tests.
bool verify_split(const StructureTable<Cplx>& t, const Subspace<Cplx>& a, const Subspace<Cplx>& b,
                  double tol = Tolerances::residual);
bool verify_split_exact(const StructureTable<GaussianRational>& t,
                        const Subspace<GaussianRational>& a, const Subspace<GaussianRational>& b);

// Gauss-Newton search with random restarts for an idempotent projection whose
// image and kernel are both two-sided ideals (trace pinned to a rank between 1
// and n-1 so the trivial projections are excluded).
SplitOutcome split_search(const StructureTable<Cplx>& t, const SolverConfig& cfg = {});
SplitOutcome split_search(const StructureTable<GaussianRational>& t, const SolverConfig& cfg = {});

} // namespace leibniz

#endif
