#ifndef LEIBNIZ_ISOSOLVER_HPP
#define LEIBNIZ_ISOSOLVER_HPP

#include "leibniz/catalog.hpp"
#include "leibniz/gauss_newton.hpp"

namespace leibniz {

struct SolverConfig {
    int restarts = 200;
    int max_iterations = 100;
    double residual_tol = 1e-8;
    std::uint64_t seed = 0;
    std::int64_t max_den = 1000;
    RunPolicy policy = RunPolicy::parallel;
    // allow deterministic derivation-chain shortcuts where a fingerprint
    // branch has a constructive classification; cross-check suites turn this
    // off to keep the solver path independent
    bool derivation_shortcuts = true;
};

// Explicit isomorphism: P maps coordinates of the first algebra to the second,
// P c1_{ij} = [P e_i, P e_j]_2 for all i, j.
struct Witness {
    Matrix<Cplx> p;
    std::optional<Matrix<GaussianRational>> exact_p;
    bool exact_certified = false;
    double residual = 0.0;
    int restart_index = -1;
};

struct IsoVerdict {
    enum class Kind { witness, distinguished, probably_not };
    Kind kind = Kind::probably_not;
    std::optional<Witness> witness;
    std::vector<std::string> distinguished_by; // fingerprint fields that differ
    int restarts_exhausted = 0;

    bool found() const { return kind == Kind::witness; }
};

struct WitnessCheck {
    double residual = 0.0;
    std::optional<bool> exact_ok;
};

// max_{ij} ||P c1_{ij} - [P e_i, P e_j]_2||_inf; throws singular_error when P
// is not invertible.
WitnessCheck verify_witness(const StructureTable<Cplx>& t1, const StructureTable<Cplx>& t2,
                            const Matrix<Cplx>& p, std::int64_t max_den = 1000);
WitnessCheck verify_witness(const StructureTable<GaussianRational>& t1,
                            const StructureTable<GaussianRational>& t2,
                            const Matrix<GaussianRational>& p);
WitnessCheck verify_witness(const StructureTable<GaussianRational>& t1,
                            const StructureTable<GaussianRational>& t2, const Matrix<Cplx>& p,
                            std::int64_t max_den = 1000);

IsoVerdict find_isomorphism(const StructureTable<Cplx>& t1, const StructureTable<Cplx>& t2,
                            const SolverConfig& cfg = {});
IsoVerdict find_isomorphism(const StructureTable<GaussianRational>& t1,
                            const StructureTable<GaussianRational>& t2,
                            const SolverConfig& cfg = {});

// Restart-range variant used by the classifier's escalation; restart streams
// are indexed absolutely so splitting a budget does not change outcomes.
IsoVerdict find_isomorphism_range(const StructureTable<Cplx>& t1, const StructureTable<Cplx>& t2,
                                  const SolverConfig& cfg, int restart_begin, int restart_end,
                                  bool skip_fingerprints = false, bool generic_only = false);

struct ParametricMatch {
    Cplx param;
    std::optional<GaussianRational> exact_param;
    Witness witness;
};

// Solve against a parametric family (A5, A17, A18) with the parameter as an
// extra unknown; the returned parameter is the raw recovered value (the
// classifier applies family canonicalization).
std::optional<ParametricMatch> find_isomorphism_parametric(const StructureTable<Cplx>& t,
                                                           int family_index,
                                                           const SolverConfig& cfg = {});
std::optional<ParametricMatch> find_isomorphism_parametric(const StructureTable<GaussianRational>& t,
                                                           int family_index,
                                                           const SolverConfig& cfg = {});
std::optional<ParametricMatch> find_isomorphism_parametric_range(const StructureTable<Cplx>& t,
                                                                 int family_index,
                                                                 const SolverConfig& cfg,
                                                                 int restart_begin, int restart_end);

// Random invertible complex matrix with unit-scale Gaussian entries.
Matrix<Cplx> random_invertible(int n, Rng& rng, double min_abs_det = 1e-3);

// Random invertible Gaussian-rational matrix with small entries.
Matrix<GaussianRational> random_invertible_exact(int n, Rng& rng);

} // namespace leibniz

#endif
