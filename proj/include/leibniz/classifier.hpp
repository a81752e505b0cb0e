#ifndef LEIBNIZ_CLASSIFIER_HPP
#define LEIBNIZ_CLASSIFIER_HPP

#include "leibniz/bilinear_forms.hpp"
#include "leibniz/proof_replay.hpp"
#include "leibniz/split.hpp"

namespace leibniz {

struct not_nilpotent_error : error {
    not_nilpotent_error() : error("algebra is not nilpotent") {}
};
struct is_lie_error : error {
    is_lie_error() : error("algebra is a Lie algebra (Leib(A) = 0)") {}
};
struct is_split_error : error {
    explicit is_split_error(SplitOutcome s)
        : error("algebra splits as a direct sum of two nontrivial ideals"), split(std::move(s)) {}
    SplitOutcome split;
};
struct unclassified_error : error {
    explicit unclassified_error(Fingerprint f)
        : error("no catalog class matched: " + f.str()), fp(std::move(f)) {}
    Fingerprint fp;
};

struct ClassificationResult {
    int index = 0;
    std::optional<Cplx> param;                    // canonical branch
    std::optional<GaussianRational> param_exact;  // when it reconstructs
    Witness witness;                              // input basis -> catalog basis
    enum class Method { fingerprint_solver, form_pipeline } method = Method::fingerprint_solver;

    std::string class_name() const;
};

// canonical representative of the family parameter (A5 identifies c with 1/c;
// A17 and A18 have no identification, mapped empirically by the solver sweep)
Cplx canonical_param(int family_index, Cplx p);

ClassificationResult classify(const StructureTable<Cplx>& t, const SolverConfig& cfg = {});
ClassificationResult classify(const StructureTable<GaussianRational>& t,
                              const SolverConfig& cfg = {});

// The constructive route for dim A^2 = 2, dim Leib = 1 inputs: extract the
// complement form, canonicalize it, then follow the matching derivation chain.
ClassificationResult classify_via_forms(const StructureTable<Cplx>& t,
                                        const SolverConfig& cfg = {});
ClassificationResult classify_via_forms(const StructureTable<GaussianRational>& t,
                                        const SolverConfig& cfg = {});

struct PairVerdict {
    ClassId a, b;
    IsoVerdict verdict;
    bool within_family = false;
};

struct Identification {
    int family = 0;
    GaussianRational param_a, param_b;
    bool reciprocal = false; // parameters multiply to 1
};

struct PairwiseReport {
    std::vector<PairVerdict> pairs;
    std::vector<Identification> identifications;
    int distinguished = 0;
    int probabilistic = 0;
    int witnesses_within_family = 0;
    int cross_class_witnesses = 0; // any nonzero value is a finding

    bool clean() const { return cross_class_witnesses == 0; }
};

// All unordered pairs of catalog instances: fingerprint-distinguished pairs
// are recorded directly, same-fingerprint pairs get the full restart budget,
// and within-family witnesses feed the parameter identification map.
PairwiseReport pairwise_report(const std::vector<ClassId>& instances, const SolverConfig& cfg = {});

} // namespace leibniz

#endif
