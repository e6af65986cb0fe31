#pragma once

#include <vector>

#include "ncvortex/grid.hpp"

namespace ncvortex {

struct StarTruncation {
    int K = 2;
    double theta = 0.0;
};

void validate(const StarTruncation& t);

// Coefficients of the theta expansion phi = sum theta^k phi_k, A likewise.
// Entries 0..size()-1 are populated.
struct ThetaSeries {
    std::vector<ScalarField> phi;
    std::vector<GaugeField> a;
    StarTruncation trunc;

    int populated() const { return static_cast<int>(phi.size()); }
    const Grid2D& grid() const { return phi.front().grid(); }
};

// Field restricted to valid nodes (valid[k] != 0).
struct MaskedField {
    ScalarField field;
    std::vector<unsigned char> valid;
};

std::vector<unsigned char> outside_radius(const Grid2D& g, double radius);

// s_0..s_K with f*g = sum theta^n s_n.
std::vector<ScalarField> star(const ScalarField& f, const ScalarField& g, const StarTruncation& t);
std::vector<ScalarField> star_commutator(const ScalarField& f, const ScalarField& g, const StarTruncation& t);

// sum theta^n c_n; at theta = 0 this is c_0 unchanged.
ScalarField evaluate(const std::vector<ScalarField>& coeffs, double theta);

// Coefficient of theta^k in (sum theta^a F_a) * (sum theta^b G_b). With
// skip_top, the n = 0 products involving F_k or G_k are left out.
ScalarField series_star(const std::vector<ScalarField>& F, const std::vector<ScalarField>& G, int k,
                        bool skip_top = false);

std::vector<ScalarField> nc_magnetic_field(const ThetaSeries& s);
ScalarField coeff_C_k(const ThetaSeries& s, int k);
ScalarField coeff_D_k(const ThetaSeries& s, int k);
MaskedField coeff_E_k(const ThetaSeries& s, int k, double mask_radius);

struct NcResiduals {
    std::vector<ScalarField> r1, r2;
};
NcResiduals nc_bps_residual(const ThetaSeries& s);

struct ActionValue {
    double S = 0.0;
    double S_T = 0.0;
};
ActionValue action_value(const ThetaSeries& s);

} // namespace ncvortex
