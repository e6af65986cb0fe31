// ncvortex: command-line front end. Exit codes: 0 pass, 2 config error,
// 3 stage failure, 4 baseline mismatch.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ncvortex/errors.hpp"
#include "ncvortex/pipeline.hpp"

using namespace ncvortex;
namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0, kConfig = 2, kStage = 3, kMismatch = 4;

void write_report(const std::string& path, const nlohmann::json& j, const std::string& csv)
{
    write_atomic(path, j.dump(2) + "\n");
    if (!csv.empty()) {
        fs::path p(path);
        p.replace_extension(".csv");
        write_atomic(p, csv);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Noncommutative vortex deformation toolkit"};
    app.require_subcommand(1);

    int winding = 1, nr = 4096, grid = 512, order = 1;
    double rmax = 16.0, tol = 1e-10, theta = 0.1;
    std::string out = "profile.txt", report;

    auto* taubes = app.add_subcommand("taubes", "Solve the radial vortex profile");
    taubes->add_option("--winding", winding)->check(CLI::Range(1, 8));
    taubes->add_option("--rmax", rmax);
    taubes->add_option("--nr", nr);
    taubes->add_option("--tol", tol);
    taubes->add_option("--grid", grid, "grid size for the lifted checks");
    taubes->add_option("--out", out);
    taubes->add_option("--report", report);

    auto* perturb = app.add_subcommand("perturb", "Solve the order-k deformation and check flux preservation");
    perturb->add_option("--winding", winding)->check(CLI::Range(1, 8));
    perturb->add_option("--order", order)->check(CLI::Range(0, 6));
    perturb->add_option("--theta", theta);
    perturb->add_option("--grid", grid);
    perturb->add_option("--rmax", rmax);
    perturb->add_option("--tol", tol);
    perturb->add_option("--report", report)->required();

    int dim = 128, margin = 16;
    double fock_theta = 1.0;
    auto* fock = app.add_subcommand("fock", "Validate the operator vortex solution");
    fock->add_option("--dim", dim);
    fock->add_option("--theta", fock_theta);
    fock->add_option("--margin", margin);
    fock->add_option("--report", report)->required();

    std::string config_path;
    auto* pipeline = app.add_subcommand("pipeline", "Run all stages from a config file");
    pipeline->add_option("--config", config_path)->required();

    std::string candidate, baseline;
    std::vector<std::string> tol_specs;
    auto* compare = app.add_subcommand("compare", "Compare a report against a baseline");
    compare->add_option("--report", candidate)->required();
    compare->add_option("--baseline", baseline)->required();
    compare->add_option("--tol", tol_specs, "key=relative tolerance, repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }

    try {
        if (*taubes) {
            const VortexProfile p = solve_radial_taubes(winding, rmax, nr, tol);
            write_profile(out, p);
            const TaubesSummary s = summarize_taubes(p, lift_to_grid(p, make_grid(std::min(rmax, 16.0), grid)));
            if (!report.empty())
                write_report(report, to_json(s), to_csv(s));
            std::printf("N0 = %.10f  residuals %.3g %.3g  %s\n", s.n0, s.residual_1, s.residual_2,
                        s.pass ? "pass" : "FAIL");
            return s.pass ? kPass : kStage;
        }
        if (*perturb) {
            const Grid2D g = make_grid(rmax, grid);
            const VortexProfile p = solve_radial_taubes(winding, std::max(16.0, rmax), 4096, 1e-10);
            const VortexBackground bg = lift_to_grid(p, g);
            ThetaSeries s{{bg.phi}, {bg.a}, StarTruncation{std::max(order, 1), theta}};
            const DeformOptions opt{tol, 1.0};
            extend_series(s, order, opt);
            const PreservationReport rep = preservation_report(s, order, opt);
            write_report(report, to_json(rep, theta, winding), to_csv(rep));
            std::printf("n0 = %.10f  n_deformed = %.10f  %s\n", rep.n0, rep.n_deformed, rep.pass ? "pass" : "FAIL");
            return rep.pass ? kPass : kStage;
        }
        if (*fock) {
            const FockSummary s = summarize_fock(dim, fock_theta, margin);
            write_report(report, to_json(s), to_csv(s));
            std::printf("charge = %.15f  residuals %.3g %.3g  %s\n", s.charge, s.bps_residual_1, s.bps_residual_2,
                        s.pass ? "pass" : "FAIL");
            return s.pass ? kPass : kStage;
        }
        if (*pipeline) {
            const RunConfig cfg = load_config(config_path);
            const RunManifest m = run_pipeline(cfg);
            for (const StageRecord& st : m.stages)
                std::printf("%-13s %s  %.2fs %s\n", st.name.c_str(), st.pass ? "pass" : "FAIL", st.wall_seconds,
                            st.diagnostic.c_str());
            return m.complete ? kPass : kStage;
        }
        if (*compare) {
            std::map<std::string, double> tols;
            for (const std::string& spec : tol_specs) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw Error(ErrorKind::ConfigError, "--tol expects key=value, got " + spec);
                tols[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
            }
            const CompareVerdict v = compare_baseline(candidate, baseline, tols);
            for (const std::string& s : v.violations)
                std::printf("violation %s\n", s.c_str());
            std::printf("%s\n", v.pass ? "match" : "mismatch");
            return v.pass ? kPass : kMismatch;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "ncvortex: %s\n", e.what());
        switch (e.kind()) {
        case ErrorKind::ConfigError:
        case ErrorKind::InvalidArgument:
        case ErrorKind::OddGridSize:
        case ErrorKind::GridTooSmall:
        case ErrorKind::NonPositiveExtent:
            return kConfig;
        case ErrorKind::SchemaMismatch:
            return kMismatch;
        default:
            return kStage;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ncvortex: %s\n", e.what());
        return kStage;
    }
    return kPass;
}
