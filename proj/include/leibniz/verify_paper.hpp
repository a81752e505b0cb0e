#ifndef LEIBNIZ_VERIFY_PAPER_HPP
#define LEIBNIZ_VERIFY_PAPER_HPP

#include "leibniz/classifier.hpp"
#include "leibniz/report.hpp"
#include "leibniz/table_io.hpp"

#include <map>

namespace leibniz {

struct VerifyConfig {
    std::uint64_t seed = 0;
    std::string grid = "default"; // "default" or "smoke"
    SolverConfig solver;          // seed copied from above on entry
    int agreement_conjugates = 100;
    // optional catalog override: class name -> table (for auditing a dump)
    std::map<std::string, StructureTable<GaussianRational>> table_override;
};

// Per-class validity: Leibniz law (exactly), nilpotency, non-Lie, the source
// statement's dimensions, the frozen fingerprint, no decomposition found in
// the restart budget, and the structural center facts.
void validate_catalog(Report& report, const VerifyConfig& cfg);

// Every derivation path replayed over admissible random samples.
void replay_checks(Report& report, const VerifyConfig& cfg, int samples);

// Generic path vs form pipeline on conjugates of the form-branch classes,
// plus the orbit-(i) exclusion check.
void agreement_checks(Report& report, const VerifyConfig& cfg);

// Pairwise non-isomorphism over the instance grid; within-family witnesses
// feed the parameter identification map.
void pairwise_checks(Report& report, const VerifyConfig& cfg);

// The full verification run, in order.
Report verify_paper(const VerifyConfig& cfg);

// Random conjugates of random catalog instances classified back; any
// unclassified outcome or wrong class is a failing record.
Report fuzz_roundtrip(int count, std::uint64_t seed, const SolverConfig& solver = {});

// One random conjugate generator shared by the fuzz and acceptance paths.
struct FuzzCase {
    ClassId id;
    StructureTable<Cplx> table;
    int resampled = 0; // near-singular conjugation matrices rejected
};
FuzzCase fuzz_case(const std::vector<ClassId>& instances, Rng& rng);

} // namespace leibniz

#endif
