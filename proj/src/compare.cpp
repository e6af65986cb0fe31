#include <cmath>
#include <fstream>

#include "ncvortex/errors.hpp"
#include "ncvortex/pipeline.hpp"

namespace ncvortex {
namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot read " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SchemaMismatch, p.string() + " does not parse: " + e.what());
    }
}

double tolerance_for(const std::string& path, const std::map<std::string, double>& tol)
{
    if (auto it = tol.find(path); it != tol.end())
        return it->second;
    const std::string top = path.substr(0, path.find_first_of(".["));
    if (auto it = tol.find(top); it != tol.end())
        return it->second;
    if (auto it = tol.find("default"); it != tol.end())
        return it->second;
    return 1e-12;
}

void walk(const json& c, const json& b, const std::string& path, const std::map<std::string, double>& tol,
          CompareVerdict& v)
{
    const std::string where = path.empty() ? "<root>" : path;
    if (b.is_object()) {
        if (!c.is_object())
            throw Error(ErrorKind::SchemaMismatch, where + " is not an object in the candidate");
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!c.contains(it.key()))
                throw Error(ErrorKind::SchemaMismatch, "missing key " + (path.empty() ? "" : path + ".") + it.key());
        for (auto it = c.begin(); it != c.end(); ++it)
            if (!b.contains(it.key()))
                throw Error(ErrorKind::SchemaMismatch, "unexpected key " + (path.empty() ? "" : path + ".") + it.key());
        for (auto it = b.begin(); it != b.end(); ++it)
            walk(c[it.key()], it.value(), path.empty() ? it.key() : path + "." + it.key(), tol, v);
        return;
    }
    if (b.is_array()) {
        if (!c.is_array() || c.size() != b.size())
            throw Error(ErrorKind::SchemaMismatch, where + " differs in length or type");
        for (std::size_t k = 0; k < b.size(); ++k)
            walk(c[k], b[k], path + "[" + std::to_string(k + 1) + "]", tol, v);
        return;
    }
    if (b.is_number()) {
        if (!c.is_number())
            throw Error(ErrorKind::SchemaMismatch, where + " is not a number in the candidate");
        const double x = c.get<double>(), y = b.get<double>();
        if (x == y)
            return;
        if (!(std::abs(x - y) <= tolerance_for(path, tol) * std::abs(y))) {
            v.pass = false;
            v.violations.push_back(where + ": " + c.dump() + " vs " + b.dump());
        }
        return;
    }
    if (c.type() != b.type())
        throw Error(ErrorKind::SchemaMismatch, where + " changes type");
    if (c != b) {
        v.pass = false;
        v.violations.push_back(where + ": " + c.dump() + " vs " + b.dump());
    }
}

} // namespace

CompareVerdict compare_json(const json& candidate, const json& baseline, const std::map<std::string, double>& tol)
{
    CompareVerdict v;
    walk(candidate, baseline, "", tol, v);
    return v;
}

CompareVerdict compare_baseline(const std::filesystem::path& report, const std::filesystem::path& baseline,
                                const std::map<std::string, double>& tol)
{
    return compare_json(read_json(report), read_json(baseline), tol);
}

} // namespace ncvortex
