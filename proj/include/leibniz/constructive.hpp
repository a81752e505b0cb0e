#ifndef LEIBNIZ_CONSTRUCTIVE_HPP
#define LEIBNIZ_CONSTRUCTIVE_HPP

#include "leibniz/bilinear_forms.hpp"
#include "leibniz/proof_replay.hpp"

namespace leibniz {

// Deterministic classification through the derivation chains, available on the
// fingerprint branches whose catalog construction is explicit:
//   dim A^2 = 2, dim Leib = 1          form extraction + canonical form chains
//   dim A^2 = 2 = dim Leib, dim A^3 = 1  adapted-basis two-step chain
// Inputs outside these branches return nullopt; numerical failures throw.
struct ConstructiveRoute {
    int index = 0;                  // catalog class reached
    std::optional<Cplx> param;      // family parameter, when the class has one
    Matrix<Cplx> witness;           // input basis -> catalog basis
    std::vector<std::string> path;  // decision notes from the chain
    std::string branch;             // which pipeline ran
};

std::optional<ConstructiveRoute> classify_constructive(const StructureTable<Cplx>& t,
                                                       double tol = 1e-6);

// The bilinear-form pipeline on its own (dim A^2 = 2, dim Leib = 1 only);
// throws wrong_shape when the input is outside that branch.
ConstructiveRoute forms_route(const StructureTable<Cplx>& t, double tol = 1e-6);

} // namespace leibniz

#endif
