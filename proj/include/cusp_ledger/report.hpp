#pragma once

#include <string>

#include "json.hpp"

#include "cusp_ledger/eta_quotient.hpp"
#include "cusp_ledger/family.hpp"
#include "cusp_ledger/reduction.hpp"
#include "cusp_ledger/series.hpp"
#include "cusp_ledger/topology.hpp"

namespace cusp {

// Report documents: {"schema_version": 1, "kind": ..., <payload fields>}.
// Integers and rationals are written as strings; eta quotients use the
// catalog form {"M": int, "r": {"delta": int}}.
nlohmann::json report_document(const std::string& kind, nlohmann::json payload);

// {"trunc24": "240" or null when exact, "terms": [["exp24", "num", "den"], ...]}
nlohmann::json to_json(const QSeries& a);
QSeries series_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CurveProfile& p);
nlohmann::json to_json(const CuspOrderVector& v);
nlohmann::json to_json(const ModularityCheck& c);
nlohmann::json to_json(const ClassificationReport& r);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const ValuationReport& r);

// coeffs as [["k", "m", "num", "den"], ...]
nlohmann::json to_json(const Representation& r);
Representation representation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValuationTable& t);
nlohmann::json to_json(const GainReport& g);

// Human-readable renderings.
std::string render(const QSeries& a, size_t max_terms = 12);
std::string render(const CurveProfile& p);
std::string render(const ClassificationReport& r);
std::string render(const VerificationReport& r);
std::string render(const Representation& r);
std::string render(const ValuationTable& t);

} // namespace cusp
