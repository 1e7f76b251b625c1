#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cusp_ledger/eta_quotient.hpp"
#include "cusp_ledger/family.hpp"
#include "cusp_ledger/reduction.hpp"

namespace cusp {

// Malformed catalog: the message names the field path (families[2].ell) or
// the parser position.
class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BasisSpec {
    std::string name;
    int64_t level = 0;
    EtaQuotient x;
    std::vector<EtaQuotient> ys; // y_1 .. y_v
    std::optional<EtaQuotient> z;
    std::string notes;

    ModuleBasis build(int64_t trunc24 = 24 * 40) const;

    bool operator==(const BasisSpec&) const = default;
};

struct Catalog {
    std::vector<FamilySpec> families;
    std::vector<BasisSpec> bases;

    const FamilySpec& family(const std::string& name) const;
    const BasisSpec& basis(const std::string& name) const;

    bool operator==(const Catalog&) const = default;
};

inline constexpr int kSchemaVersion = 1;

// {"M": 5, "r": {"1": -6, "5": 6}}
nlohmann::json eta_to_json(const EtaQuotient& f);
EtaQuotient eta_from_json(const nlohmann::json& j, const std::string& path = "eta");

// "1:-6,5:6" with an optional "@M" suffix for the level.
EtaQuotient parse_eta(const std::string& text);

nlohmann::json catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const nlohmann::json& j);
Catalog parse_catalog(const std::string& text);

Catalog catalog_load(const std::string& path);
void catalog_save(const Catalog& catalog, const std::string& path);

} // namespace cusp
