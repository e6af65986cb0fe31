#pragma once

#include "ncvortex/grid.hpp"

namespace ncvortex {

// (-lap + V) u = f with V >= 0, V >= c_floor for |x| >= compact_radius.
struct SchrodingerProblem {
    ScalarField V;
    ScalarField f;
    double c_floor = 0.0;
    double compact_radius = 0.0;
};

struct SchrodingerResult {
    ScalarField u;
    int iterations = 0;
    double relative_residual = 0.0;
    double weighted_norm = 0.0; // sup (1 + |x|^n)|u|, the H(n) certificate
};

// Outer rings held at u = 0.
inline constexpr int kDirichletRings = 2;

void validate(const SchrodingerProblem& p);

// Conjugate gradients on the interior unknowns. `initial` may seed the iterate.
SchrodingerResult solve_schrodinger(const SchrodingerProblem& p, double tol, int weight_power = 2,
                                    const ScalarField* initial = nullptr);

// u = sum_y h^2 G_c(x - y) f(y), G_c = K0(sqrt(c) r)/(2 pi).
ScalarField greens_apply(const ScalarField& f, double c);

struct KernelBounds {
    double near_constant = 0.0; // C2 in G <= -C2 log|x-y| for |x-y| <= 0.5
    double far_constant = 0.0;  // C in G <= C G_c for |x-y| >= 4
    bool finite = false;
};

// Samples the Green's function of -lap + V with a unit source at node
// (i, j) and fits the near/far bound constants against G_c.
KernelBounds fit_kernel_bounds(const ScalarField& V, int i, int j, double c, double tol);

} // namespace ncvortex
