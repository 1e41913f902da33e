#pragma once

#include "edsh/bigfloat.hpp"
#include "edsh/poly.hpp"

#include <vector>

namespace edsh {

// All complex roots of a squarefree monic integer polynomial. radii[i] bounds
// the distance from roots[i] to a true root, and the disks are pairwise
// disjoint, so each disk holds exactly one root.
struct RootEnclosures {
    mpfr_prec_t prec = 0;
    std::vector<Complex> roots;
    std::vector<Real> radii;
};

// Aberth-Ehrlich simultaneous iteration, Newton refinement to the target
// precision, then an a posteriori inclusion test (d * |Weierstrass
// correction| disks). Throws PrecisionUnreachable if the disks cannot be
// certified below 2^(-bits/2).
RootEnclosures certified_roots(const poly::ZPoly& monic, mpfr_prec_t bits);

// Horner evaluation of an integer polynomial at a complex point.
Complex evaluate(const poly::ZPoly& p, const Complex& z);

}  // namespace edsh
