#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "ncvortex/errors.hpp"
#include "ncvortex/pipeline.hpp"

namespace ncvortex {
namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& why)
{
    throw Error(ErrorKind::ConfigError, key + ": " + why);
}

double to_real(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        bad(key, "expected a real number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v)
{
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        bad(key, "expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    bad(key, "expected true or false, got '" + v + "'");
}

std::string real_text(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            bad("line " + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            bad(key, "duplicate key");
        if (key == "vortex.winding")
            c.winding = static_cast<int>(to_int(key, v));
        else if (key == "grid.n")
            c.grid_n = static_cast<int>(to_int(key, v));
        else if (key == "grid.half_extent")
            c.half_extent = to_real(key, v);
        else if (key == "grid.radial_nodes")
            c.radial_nodes = static_cast<int>(to_int(key, v));
        else if (key == "theta")
            c.theta = to_real(key, v);
        else if (key == "order")
            c.order = static_cast<int>(to_int(key, v));
        else if (key == "mask_radius")
            c.mask_radius = to_real(key, v);
        else if (key.rfind("tol.", 0) == 0) {
            const std::string name = key.substr(4);
            if (!c.tolerances.count(name))
                bad(key, "unknown tolerance");
            c.tolerances[name] = to_real(key, v);
        } else if (key == "output.dir")
            c.output_dir = v;
        else if (key == "seed")
            c.seed = static_cast<std::uint64_t>(to_int(key, v));
        else if (key == "fock.enabled")
            c.fock_enabled = to_bool(key, v);
        else if (key == "fock.dim")
            c.fock_dim = static_cast<int>(to_int(key, v));
        else if (key == "fock.margin")
            c.fock_margin = static_cast<int>(to_int(key, v));
        else if (key == "fock.theta")
            c.fock_theta = to_real(key, v);
        else
            bad(key, "unknown key");
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ConfigError, "cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& c)
{
    if (c.winding < 1 || c.winding > 8)
        bad("vortex.winding", "must lie in 1..8");
    if (c.grid_n < 32)
        bad("grid.n", "must be >= 32");
    if (c.grid_n % 2 != 0)
        bad("grid.n", "must be even");
    if (!(c.half_extent > 0.0))
        bad("grid.half_extent", "must be positive");
    if (c.radial_nodes < 1024)
        bad("grid.radial_nodes", "must be >= 1024");
    if (!(c.theta >= 0.0))
        bad("theta", "must be >= 0");
    if (c.order < 0 || c.order > 6)
        bad("order", "must lie in 0..6");
    if (!(c.mask_radius >= 0.0))
        bad("mask_radius", "must be >= 0");
    for (const auto& [name, v] : c.tolerances)
        if (!(v > 0.0 && v <= 1e-8))
            bad("tol." + name, "must lie in (0, 1e-8]");
    if (c.output_dir.empty())
        bad("output.dir", "must not be empty");
    if (c.fock_dim < 32)
        bad("fock.dim", "must be >= 32");
    if (c.fock_margin < 0 || 2 * c.fock_margin >= c.fock_dim)
        bad("fock.margin", "must satisfy 0 <= margin < dim/2");
    if (!(c.fock_theta > 0.0))
        bad("fock.theta", "must be positive");
}

std::string canonical_config(const RunConfig& c)
{
    std::map<std::string, std::string> kv{
        {"vortex.winding", std::to_string(c.winding)},
        {"grid.n", std::to_string(c.grid_n)},
        {"grid.half_extent", real_text(c.half_extent)},
        {"grid.radial_nodes", std::to_string(c.radial_nodes)},
        {"theta", real_text(c.theta)},
        {"order", std::to_string(c.order)},
        {"mask_radius", real_text(c.mask_radius)},
        {"seed", std::to_string(c.seed)},
        {"fock.enabled", c.fock_enabled ? "true" : "false"},
        {"fock.dim", std::to_string(c.fock_dim)},
        {"fock.margin", std::to_string(c.fock_margin)},
        {"fock.theta", real_text(c.fock_theta)},
    };
    for (const auto& [name, v] : c.tolerances)
        kv["tol." + name] = real_text(v);
    std::string out;
    for (const auto& [k, v] : kv)
        out += k + " = " + v + "\n";
    return out;
}

std::string config_hash(const RunConfig& c)
{
    const std::string text = canonical_config(c);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::IoError, "SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
    return os.str();
}

} // namespace ncvortex
