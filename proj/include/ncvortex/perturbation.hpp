#pragma once

#include <map>
#include <string>
#include <vector>

#include "ncvortex/moyal.hpp"
#include "ncvortex/schrodinger.hpp"
#include "ncvortex/taubes.hpp"

namespace ncvortex {

struct DirectSolution {
    ScalarField phi;
    GaugeField a;
    int iterations = 0;
    double relative_residual = 0.0; // of the row-equilibrated system
};

// Order-k equations solved as stated, in unknowns (psi, A1_k, A2_k) with
// phi_k = psi * phi0 and psi real (the gauge Im(conj(phi0) phi_k) = 0).
DirectSolution solve_order_k_direct(const ThetaSeries& s, int k, double tol);

struct SchrodingerOrderSolution {
    ScalarField varphi; // 2 Re(phi_k/phi0)
    std::vector<unsigned char> valid;
    int iterations = 0;
    double relative_residual = 0.0;
    double weighted_norm = 0.0;
};

// (-lap + 2|phi0|^2) varphi_k = 2 E_k.
SchrodingerOrderSolution solve_order_k_schrodinger(const ThetaSeries& s, int k, double mask_radius, double tol);

// Abar_k = (dbar phi_k - i Abar0 phi_k + D_k)/(i phi0). Nodes inside the
// mask keep the same quotient and are flagged in `valid`.
struct ReconstructedGauge {
    GaugeField a;
    std::vector<unsigned char> valid;
};
ReconstructedGauge reconstruct_A_k(const ThetaSeries& s, const ScalarField& phi_k, int k, double mask_radius);

struct FluxCorrection {
    double value = 0.0;       // integral of B_k
    double circulation = 0.0; // closed line integral of A_k at r = R - 4
    double contour_radius = 0.0;
};
FluxCorrection flux_correction(const ThetaSeries& s, int k);

struct OrderReport {
    int k = 0;
    double flux = 0.0;
    double circulation = 0.0;
    double residual_sup = 0.0;
    double cross_gap = 0.0;
    std::map<std::string, double> decay; // phi, A, D, E
    int direct_iterations = 0;
    int schrodinger_iterations = 0;
};

struct PreservationReport {
    int K = 0;
    double n0 = 0.0;
    double n_deformed = 0.0;
    std::vector<OrderReport> orders;
    bool pass = false;
};

// Relative sup gap between the two order-k routes on 2 <= r <= R/2.
double cross_validation_gap(const ScalarField& varphi, const ScalarField& phi_k, const ScalarField& phi0);

// Fits of |phi_k|, |A_k|, |D_k|, |E_k| on [8, 14].
std::map<std::string, double> order_decay_exponents(const ThetaSeries& s, int k, double mask_radius);

struct DeformOptions {
    double tol = 1e-10;
    double mask_radius = 1.0;
};

// Populates orders 1..K of the series by the direct solve.
void extend_series(ThetaSeries& s, int K, const DeformOptions& opt, std::vector<int>* iterations = nullptr);

PreservationReport preservation_report(const ThetaSeries& s, int K, const DeformOptions& opt = {});

} // namespace ncvortex
