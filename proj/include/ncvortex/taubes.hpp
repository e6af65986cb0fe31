#pragma once

#include <string>
#include <vector>

#include "ncvortex/grid.hpp"

namespace ncvortex {

// Radial solution of the commutative vortex equations, N vortices at the
// origin. Nodes are uniform, r_j = j*dr. The solver unknown is the smooth
// v = u - N log(r^2/(1+r^2)) with u = log|phi0|^2.
struct VortexProfile {
    int N = 0;
    double r_max = 0.0;
    int n_r = 0;
    double tol = 0.0;
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> r, v, u, f;
    std::vector<double> q; // w'(r)/r with w = u - 2N log r (smooth, even)

    double dr() const { return r_max / n_r; }
    // Smooth radial data at arbitrary r, extrapolated with K0 decay beyond r_max.
    struct Sample {
        double w;  // log(|phi0|^2 / r^2N)
        double u;  // log|phi0|^2 (-inf at r = 0 when N > 0)
        double one_minus_f2; // 1 - |phi0|^2
        double q;
    };
    Sample at(double r) const;
};

struct DecayReport {
    double epsilon = 0.0;
    double bound_constant = 0.0;
    double measured_rate = 0.0;
    bool pass = false;
};

struct VortexBackground {
    ScalarField phi;
    GaugeField a;
};

VortexProfile solve_radial_taubes(int N, double r_max, int n_r, double tol);
VortexBackground lift_to_grid(const VortexProfile& p, const Grid2D& g);
// log|phi0|^2 - 2N log r sampled on the grid (smooth); -1/2 lap of it is B0.
ScalarField lift_w(const VortexProfile& p, const Grid2D& g);
// 1 - |phi0|^2 sampled from the profile without cancellation.
ScalarField lift_one_minus_f2(const VortexProfile& p, const Grid2D& g);

ScalarField magnetic_field(const GaugeField& a);
// (r1, r2) = (B + |phi|^2 - 1, dbar phi - i Abar phi)
std::pair<ScalarField, ScalarField> commutative_residuals(const ScalarField& phi, const GaugeField& a);

double vortex_number(const ScalarField& B);
DecayReport taubes_decay_check(const ScalarField& phi0, double epsilon);

void write_profile(const std::string& path, const VortexProfile& p);
VortexProfile read_profile(const std::string& path);

} // namespace ncvortex
