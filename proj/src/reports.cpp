#include <cmath>
#include <numbers>
#include <sstream>

#include "ncvortex/pipeline.hpp"

namespace ncvortex {
namespace {

std::string num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

TaubesSummary summarize_taubes(const VortexProfile& p, const VortexBackground& bg)
{
    TaubesSummary s;
    const Grid2D& g = bg.phi.grid();
    s.N = p.N;
    s.grid_n = g.n;
    s.half_extent = g.R;
    s.iterations = p.iterations;
    s.newton_residual = p.residual;
    s.n0 = vortex_number(magnetic_field(bg.a));
    const auto [r1, r2] = commutative_residuals(bg.phi, bg.a);
    s.residual_1 = interior_sup(r1);
    s.residual_2 = interior_sup(r2);
    s.decay = taubes_decay_check(bg.phi, 0.1);
    // residual sizes depend on the grid; the 1e-5 bound is checked at 512^2
    // by the acceptance run, not here
    s.pass = std::abs(s.n0 - s.N) <= 1e-3 && s.decay.pass;
    return s;
}

nlohmann::json to_json(const TaubesSummary& s)
{
    return {{"winding", s.N},
            {"grid_n", s.grid_n},
            {"half_extent", s.half_extent},
            {"newton_iterations", s.iterations},
            {"newton_residual", s.newton_residual},
            {"n0", s.n0},
            {"residual_1", s.residual_1},
            {"residual_2", s.residual_2},
            {"decay", {{"epsilon", s.decay.epsilon},
                       {"bound_constant", s.decay.bound_constant},
                       {"measured_rate", s.decay.measured_rate},
                       {"pass", s.decay.pass}}},
            {"pass", s.pass}};
}

std::string to_csv(const TaubesSummary& s)
{
    return "winding,n0,residual_1,residual_2,decay_bound_constant,decay_measured_rate,pass\n"
        + std::to_string(s.N) + "," + num(s.n0) + "," + num(s.residual_1) + "," + num(s.residual_2) + ","
        + num(s.decay.bound_constant) + "," + num(s.decay.measured_rate) + "," + (s.pass ? "true" : "false")
        + "\n";
}

ActionSummary summarize_action(const VortexProfile& p, const VortexBackground& bg)
{
    ActionSummary s;
    s.N = p.N;
    ThetaSeries series{{bg.phi}, {bg.a}, StarTruncation{0, 0.0}};
    const ActionValue av = action_value(series);
    s.action = av.S;
    s.action_topological = av.S_T;
    s.b0_gap = interior_sup(nc_magnetic_field(series)[0] - lift_one_minus_f2(p, bg.phi.grid()));
    const double target = 2.0 * std::numbers::pi * p.N;
    s.pass = std::abs(s.action - target) <= 1e-2 * target && std::abs(s.action - s.action_topological) <= 1e-2 * target;
    return s;
}

nlohmann::json to_json(const ActionSummary& s)
{
    return {{"winding", s.N},
            {"action", s.action},
            {"action_topological", s.action_topological},
            {"action_over_2pi_n", s.action / (2.0 * std::numbers::pi * s.N)},
            {"b0_gap", s.b0_gap},
            {"pass", s.pass}};
}

nlohmann::json to_json(const PreservationReport& r, double theta, int winding)
{
    nlohmann::json flux = nlohmann::json::array(), res = nlohmann::json::array(), circ = nlohmann::json::array(),
                   gaps = nlohmann::json::array();
    nlohmann::json decay = nlohmann::json::object();
    double cross = 0.0;
    for (const OrderReport& o : r.orders) {
        flux.push_back(o.flux);
        res.push_back(o.residual_sup);
        circ.push_back(o.circulation);
        gaps.push_back(o.cross_gap);
        cross = std::max(cross, o.cross_gap);
        for (const auto& [name, v] : o.decay)
            decay[name].push_back(v);
    }
    return {{"winding", winding},
            {"theta", theta},
            {"order", r.K},
            {"n0", r.n0},
            {"flux", flux},
            {"n_deformed", r.n_deformed},
            {"residual_sup", res},
            {"cross_gap", cross},
            {"cross_gap_per_order", gaps},
            {"circulation", circ},
            {"decay_exponents", decay},
            {"pass", r.pass}};
}

std::string to_csv(const PreservationReport& r)
{
    std::string out = "order,flux,flux_over_2pi,residual_sup,cross_gap,circulation,decay_phi,decay_A,decay_D,decay_E\n";
    for (const OrderReport& o : r.orders) {
        auto d = [&](const char* k) { return o.decay.count(k) ? num(o.decay.at(k)) : std::string(); };
        out += std::to_string(o.k) + "," + num(o.flux) + "," + num(o.flux / (2.0 * std::numbers::pi)) + ","
            + num(o.residual_sup) + "," + num(o.cross_gap) + "," + num(o.circulation) + "," + d("phi") + ","
            + d("A") + "," + d("D") + "," + d("E") + "\n";
    }
    return out;
}

FockSummary summarize_fock(int dim, double theta, int margin)
{
    FockSummary s;
    s.dim = dim;
    s.margin = margin;
    s.theta = theta;
    const BakSolution b = bak_solution(dim, theta, margin);
    const OpResiduals r = op_bps_residual(b.phi, b.a, b.abar, theta);
    s.bps_residual_1 = r.sup1;
    s.bps_residual_2 = r.sup2;
    s.charge = topological_charge(op_magnetic_field(b.a, b.abar, theta), theta);
    s.unitarity_defect_rank = unitarity_defect_rank(b.phi);
    s.varphi_bound_pass = varphi_bound_check(theta, 10.0 * std::sqrt(theta), 200).pass;
    // residuals are asserted only at theta = 1; elsewhere they are recorded
    const bool residual_ok = theta != 1.0 || (s.bps_residual_1 <= 1e-12 && s.bps_residual_2 <= 1e-12);
    s.pass = residual_ok && std::abs(s.charge - 1.0) <= 1e-12 && s.unitarity_defect_rank == 1 && s.varphi_bound_pass;
    return s;
}

nlohmann::json to_json(const FockSummary& s)
{
    return {{"dim", s.dim},
            {"margin", s.margin},
            {"theta", s.theta},
            {"bps_residual_1", s.bps_residual_1},
            {"bps_residual_2", s.bps_residual_2},
            {"charge", s.charge},
            {"unitarity_defect_rank", s.unitarity_defect_rank},
            {"varphi_bound_pass", s.varphi_bound_pass},
            {"pass", s.pass}};
}

std::string to_csv(const FockSummary& s)
{
    return "dim,margin,theta,bps_residual_1,bps_residual_2,charge,unitarity_defect_rank,varphi_bound_pass,pass\n"
        + std::to_string(s.dim) + "," + std::to_string(s.margin) + "," + num(s.theta) + ","
        + num(s.bps_residual_1) + "," + num(s.bps_residual_2) + "," + num(s.charge) + ","
        + std::to_string(s.unitarity_defect_rank) + "," + (s.varphi_bound_pass ? "true" : "false") + ","
        + (s.pass ? "true" : "false") + "\n";
}

} // namespace ncvortex
