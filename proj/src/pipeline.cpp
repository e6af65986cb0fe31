#include <chrono>
#include <fstream>
#include <functional>

#include "ncvortex/errors.hpp"
#include "ncvortex/pipeline.hpp"

namespace ncvortex {
namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& text)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
        out << text;
        if (!out.flush())
            throw Error(ErrorKind::IoError, "short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

nlohmann::json to_json(const RunManifest& m)
{
    nlohmann::json stages = nlohmann::json::array();
    for (const StageRecord& s : m.stages)
        stages.push_back(
            {{"name", s.name}, {"wall_seconds", s.wall_seconds}, {"pass", s.pass}, {"diagnostic", s.diagnostic}});
    return {{"config_hash", m.config_hash},
            {"artifact_version", m.artifact_version},
            {"stages", stages},
            {"files", m.files},
            {"complete", m.complete}};
}

namespace {

// Clears files left by an earlier run in the same directory; anything the
// earlier manifest does not list is refused rather than deleted.
void claim_output_dir(const fs::path& dir)
{
    fs::create_directories(dir);
    const fs::path man = dir / "manifest.json";
    if (fs::exists(man)) {
        std::ifstream in(man);
        nlohmann::json old = nlohmann::json::parse(in, nullptr, false);
        if (!old.is_discarded() && old.contains("files"))
            for (const auto& f : old["files"])
                fs::remove(dir / f.get<std::string>());
        fs::remove(man);
    }
    if (!fs::is_empty(dir))
        throw Error(ErrorKind::ConfigError, "output.dir: " + dir.string() + " holds files not owned by a previous run");
}

} // namespace

RunManifest run_pipeline(const RunConfig& cfg)
{
    validate(cfg);
    const fs::path dir(cfg.output_dir);
    claim_output_dir(dir);

    RunManifest m;
    m.config_hash = config_hash(cfg);
    auto emit = [&](const std::string& name, const std::string& text) {
        write_atomic(dir / name, text);
        m.files.push_back(name);
    };
    auto save_manifest = [&] {
        std::vector<std::string> listed = m.files;
        m.files.push_back("manifest.json");
        const std::string text = to_json(m).dump(2) + "\n";
        m.files = listed;
        write_atomic(dir / "manifest.json", text);
    };
    auto stage = [&](const std::string& name, const std::function<bool(std::string&)>& body) {
        StageRecord rec;
        rec.name = name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            rec.pass = body(rec.diagnostic);
        } catch (const std::exception& e) {
            rec.pass = false;
            rec.diagnostic = e.what();
        }
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        m.stages.push_back(rec);
        save_manifest();
        return rec.pass;
    };

    const Grid2D g = make_grid(cfg.half_extent, cfg.grid_n);
    VortexProfile profile;
    VortexBackground bg;
    const double r_max = std::max(16.0, cfg.half_extent);

    bool ok = stage("taubes", [&](std::string& diag) {
        profile = solve_radial_taubes(cfg.winding, r_max, cfg.radial_nodes, cfg.tolerances.at("taubes"));
        bg = lift_to_grid(profile, g);
        const TaubesSummary s = summarize_taubes(profile, bg);
        write_profile((dir / "profile.txt").string(), profile);
        m.files.push_back("profile.txt");
        write_snapshot((dir / "phi0.ncvf").string(), bg.phi);
        m.files.push_back("phi0.ncvf");
        emit("taubes.json", to_json(s).dump(2) + "\n");
        emit("taubes.csv", to_csv(s));
        if (!s.pass)
            diag = "taubes checks failed (n0 = " + std::to_string(s.n0) + ")";
        return s.pass;
    });
    ok = ok && stage("moyal", [&](std::string& diag) {
        const ActionSummary s = summarize_action(profile, bg);
        emit("moyal.json", to_json(s).dump(2) + "\n");
        if (!s.pass)
            diag = "action not saturated: S = " + std::to_string(s.action);
        return s.pass;
    });
    if (cfg.order > 0)
        ok = ok && stage("perturbation", [&](std::string& diag) {
            ThetaSeries s{{bg.phi}, {bg.a}, StarTruncation{cfg.order, cfg.theta}};
            const DeformOptions opt{cfg.tolerances.at("linear"), cfg.mask_radius};
            extend_series(s, cfg.order, opt);
            const PreservationReport rep = preservation_report(s, cfg.order, opt);
            for (int k = 1; k <= cfg.order; ++k) {
                const std::string name = "phi" + std::to_string(k) + ".ncvf";
                write_snapshot((dir / name).string(), s.phi[k]);
                m.files.push_back(name);
            }
            emit("perturb.json", to_json(rep, cfg.theta, cfg.winding).dump(2) + "\n");
            emit("perturb.csv", to_csv(rep));
            if (!rep.pass)
                diag = "flux correction above 1e-2 * 2 pi";
            return rep.pass;
        });
    if (cfg.fock_enabled)
        ok = ok && stage("fock", [&](std::string& diag) {
            const FockSummary s = summarize_fock(cfg.fock_dim, cfg.fock_theta, cfg.fock_margin);
            emit("fock.json", to_json(s).dump(2) + "\n");
            emit("fock.csv", to_csv(s));
            if (!s.pass)
                diag = "operator solution checks failed";
            return s.pass;
        });
    m.complete = ok;
    save_manifest();
    m.files.push_back("manifest.json");
    return m;
}

} // namespace ncvortex
