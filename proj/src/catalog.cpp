#include "cusp_ledger/catalog.hpp"

#include <fstream>
#include <sstream>

namespace cusp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw CatalogError(path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing field");
    return *it;
}

int64_t as_int(const json& j, const std::string& path)
{
    if (!j.is_number_integer()) fail(path, "expected an integer, found " + j.dump());
    return j.get<int64_t>();
}

std::string as_string(const json& j, const std::string& path)
{
    if (!j.is_string()) fail(path, "expected a string, found " + j.dump());
    return j.get<std::string>();
}

int64_t key_to_int(const std::string& key, const std::string& path)
{
    try {
        size_t used = 0;
        int64_t v = std::stoll(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        fail(path, "key '" + key + "' is not an integer");
    }
}

std::map<int64_t, EtaQuotient> eta_table(const json& j, const std::string& path)
{
    if (!j.is_object()) fail(path, "expected an object keyed by alpha");
    std::map<int64_t, EtaQuotient> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string sub = path + "." + it.key();
        out.emplace(key_to_int(it.key(), sub), eta_from_json(it.value(), sub));
    }
    return out;
}

json eta_table_to_json(const std::map<int64_t, EtaQuotient>& table)
{
    json out = json::object();
    for (const auto& [alpha, f] : table) out[std::to_string(alpha)] = eta_to_json(f);
    return out;
}

FamilySpec family_from_json(const json& j, const std::string& path)
{
    FamilySpec f;
    f.name = as_string(require(j, "name", path), path + ".name");
    f.generator = eta_from_json(require(j, "F", path), path + ".F");
    f.ell = as_int(require(j, "ell", path), path + ".ell");
    f.lambda = as_int(require(j, "Lambda", path), path + ".Lambda");
    if (j.contains("target_residue")) f.target_residue = as_int(j["target_residue"], path + ".target_residue");
    f.level = as_int(require(j, "level", path), path + ".level");

    const json& sched = require(j, "beta_schedule", path);
    if (!sched.is_array()) fail(path + ".beta_schedule", "expected an array");
    for (size_t i = 0; i < sched.size(); ++i) {
        std::string sub = path + ".beta_schedule[" + std::to_string(i) + "]";
        int64_t alpha = as_int(require(sched[i], "alpha", sub), sub + ".alpha");
        ScheduleEntry e;
        e.modulus_exponent = as_int(require(sched[i], "modulus_exponent", sub), sub + ".modulus_exponent");
        e.divisibility_exponent = as_int(require(sched[i], "beta", sub), sub + ".beta");
        if (!f.schedule.emplace(alpha, e).second) fail(sub + ".alpha", "duplicate alpha " + std::to_string(alpha));
    }
    if (j.contains("prefactors")) f.prefactors = eta_table(j["prefactors"], path + ".prefactors");
    if (j.contains("multipliers")) f.multipliers = eta_table(j["multipliers"], path + ".multipliers");
    if (j.contains("basis")) f.basis = as_string(j["basis"], path + ".basis");
    if (j.contains("notes")) f.notes = as_string(j["notes"], path + ".notes");

    try {
        f.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return f;
}

json family_to_json(const FamilySpec& f)
{
    json sched = json::array();
    for (const auto& [alpha, e] : f.schedule)
        sched.push_back({{"alpha", alpha}, {"modulus_exponent", e.modulus_exponent}, {"beta", e.divisibility_exponent}});
    json out = {{"name", f.name},     {"F", eta_to_json(f.generator)}, {"ell", f.ell},
                {"Lambda", f.lambda}, {"target_residue", f.target_residue}, {"level", f.level},
                {"beta_schedule", sched}};
    if (!f.prefactors.empty()) out["prefactors"] = eta_table_to_json(f.prefactors);
    if (!f.multipliers.empty()) out["multipliers"] = eta_table_to_json(f.multipliers);
    if (!f.basis.empty()) out["basis"] = f.basis;
    if (!f.notes.empty()) out["notes"] = f.notes;
    return out;
}

BasisSpec basis_from_json(const json& j, const std::string& path)
{
    BasisSpec b;
    b.name = as_string(require(j, "name", path), path + ".name");
    b.level = as_int(require(j, "level", path), path + ".level");
    if (b.level < 1) fail(path + ".level", "must be positive");
    b.x = eta_from_json(require(j, "x", path), path + ".x");
    if (j.contains("ys")) {
        const json& ys = j["ys"];
        if (!ys.is_array()) fail(path + ".ys", "expected an array");
        for (size_t i = 0; i < ys.size(); ++i) b.ys.push_back(eta_from_json(ys[i], path + ".ys[" + std::to_string(i) + "]"));
    }
    if (j.contains("z")) b.z = eta_from_json(j["z"], path + ".z");
    if (j.contains("notes")) b.notes = as_string(j["notes"], path + ".notes");
    auto check = [&](const EtaQuotient& f, const std::string& sub) {
        if (b.level % f.level() != 0) fail(sub, "eta level " + std::to_string(f.level()) + " does not divide the basis level");
        auto v = validate_on_gamma0(f, b.level);
        if (!v.valid()) fail(sub, "not a function on Gamma_0(" + std::to_string(b.level) + "): " + v.reasons.front());
    };
    check(b.x, path + ".x");
    for (size_t i = 0; i < b.ys.size(); ++i) check(b.ys[i], path + ".ys[" + std::to_string(i) + "]");
    if (b.z) check(*b.z, path + ".z");
    return b;
}

json basis_to_json(const BasisSpec& b)
{
    json out = {{"name", b.name}, {"level", b.level}, {"x", eta_to_json(b.x)}};
    json ys = json::array();
    for (const auto& y : b.ys) ys.push_back(eta_to_json(y));
    out["ys"] = ys;
    if (b.z) out["z"] = eta_to_json(*b.z);
    if (!b.notes.empty()) out["notes"] = b.notes;
    return out;
}

} // namespace

ModuleBasis BasisSpec::build(int64_t trunc24) const
{
    return ModuleBasis::from_eta(level, x, ys, z, trunc24);
}

const FamilySpec& Catalog::family(const std::string& name) const
{
    for (const auto& f : families)
        if (f.name == name) return f;
    throw std::out_of_range("no family named '" + name + "' in the catalog");
}

const BasisSpec& Catalog::basis(const std::string& name) const
{
    for (const auto& b : bases)
        if (b.name == name) return b;
    throw std::out_of_range("no basis named '" + name + "' in the catalog");
}

json eta_to_json(const EtaQuotient& f)
{
    json r = json::object();
    for (const auto& [delta, e] : f.exponents()) r[std::to_string(delta)] = e;
    return {{"M", f.level()}, {"r", r}};
}

EtaQuotient eta_from_json(const json& j, const std::string& path)
{
    int64_t level = as_int(require(j, "M", path), path + ".M");
    const json& r = require(j, "r", path);
    if (!r.is_object()) fail(path + ".r", "expected an object keyed by delta");
    std::map<int64_t, int64_t> exps;
    for (auto it = r.begin(); it != r.end(); ++it) {
        std::string sub = path + ".r." + it.key();
        exps[key_to_int(it.key(), sub)] = as_int(it.value(), sub);
    }
    try {
        return EtaQuotient(level, std::move(exps));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

EtaQuotient parse_eta(const std::string& text)
{
    std::string body = text;
    std::optional<int64_t> level;
    if (auto at = body.find('@'); at != std::string::npos) {
        level = std::stoll(body.substr(at + 1));
        body = body.substr(0, at);
    }
    std::map<int64_t, int64_t> exps;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("eta factor '" + item + "' must look like delta:exponent");
        try {
            exps[std::stoll(item.substr(0, colon))] += std::stoll(item.substr(colon + 1));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("eta factor '" + item + "' must look like delta:exponent");
        }
    }
    return level ? EtaQuotient(*level, std::move(exps)) : EtaQuotient::from_exponents(std::move(exps));
}

json catalog_to_json(const Catalog& catalog)
{
    json fams = json::array(), bases = json::array();
    for (const auto& f : catalog.families) fams.push_back(family_to_json(f));
    for (const auto& b : catalog.bases) bases.push_back(basis_to_json(b));
    return {{"schema_version", kSchemaVersion}, {"families", fams}, {"bases", bases}};
}

Catalog catalog_from_json(const json& j)
{
    if (!j.is_object()) fail("catalog", "top level must be an object");
    if (j.contains("schema_version") && as_int(j["schema_version"], "schema_version") != kSchemaVersion)
        fail("schema_version", "unsupported version " + j["schema_version"].dump());
    Catalog c;
    if (j.contains("bases")) {
        const json& bs = j["bases"];
        if (!bs.is_array()) fail("bases", "expected an array");
        for (size_t i = 0; i < bs.size(); ++i) c.bases.push_back(basis_from_json(bs[i], "bases[" + std::to_string(i) + "]"));
    }
    if (j.contains("families")) {
        const json& fs = j["families"];
        if (!fs.is_array()) fail("families", "expected an array");
        for (size_t i = 0; i < fs.size(); ++i) {
            std::string path = "families[" + std::to_string(i) + "]";
            c.families.push_back(family_from_json(fs[i], path));
            const auto& f = c.families.back();
            for (size_t k = 0; k + 1 < c.families.size(); ++k)
                if (c.families[k].name == f.name) fail(path + ".name", "duplicate family '" + f.name + "'");
            if (!f.basis.empty()) {
                bool found = false;
                for (const auto& b : c.bases) found = found || b.name == f.basis;
                if (!found) fail(path + ".basis", "unknown basis '" + f.basis + "'");
            }
        }
    }
    return c;
}

Catalog parse_catalog(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CatalogError(std::string("catalog is not valid JSON: ") + e.what());
    }
    return catalog_from_json(j);
}

Catalog catalog_load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_catalog(buf.str());
    } catch (const CatalogError& e) {
        throw CatalogError(path + ": " + e.what());
    }
}

void catalog_save(const Catalog& catalog, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw CatalogError("cannot write catalog '" + path + "'");
    out << catalog_to_json(catalog).dump(2) << "\n";
}

} // namespace cusp
