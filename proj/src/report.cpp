#include "cusp_ledger/report.hpp"

#include <iomanip>
#include <sstream>

#include "cusp_ledger/catalog.hpp"

namespace cusp {

using nlohmann::json;

namespace {

std::string str(int64_t v) { return std::to_string(v); }

json opt(const std::optional<int64_t>& v) { return v ? json(str(*v)) : json(nullptr); }

int64_t int_field(const json& j)
{
    if (j.is_string()) return std::stoll(j.get<std::string>());
    return j.get<int64_t>();
}

std::string exponent_text(int64_t exp24)
{
    if (exp24 % 24 == 0) return std::to_string(exp24 / 24);
    Rational e(exp24, 24);
    e.canonicalize();
    return "(" + e.get_str() + ")";
}

std::string valuation_text(const std::optional<int64_t>& v) { return v ? std::to_string(*v) : "+inf"; }

} // namespace

json report_document(const std::string& kind, json payload)
{
    json out = {{"schema_version", kSchemaVersion}, {"kind", kind}};
    for (auto it = payload.begin(); it != payload.end(); ++it) out[it.key()] = it.value();
    return out;
}

json to_json(const QSeries& a)
{
    json terms = json::array();
    for (const auto& t : a.terms()) terms.push_back({str(t.exp24), t.coeff.get_num().get_str(), t.coeff.get_den().get_str()});
    return {{"trunc24", a.is_exact() ? json(nullptr) : json(str(a.trunc24()))}, {"terms", terms}};
}

QSeries series_from_json(const json& j)
{
    int64_t trunc = j.at("trunc24").is_null() ? kExact : int_field(j.at("trunc24"));
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
        Rational c(Integer(t.at(1).get<std::string>()), Integer(t.at(2).get<std::string>()));
        c.canonicalize();
        terms.push_back({int_field(t.at(0)), c});
    }
    return QSeries::from_terms(std::move(terms), trunc);
}

json to_json(const CurveProfile& p)
{
    json classes = json::array();
    for (const auto& c : p.cusp_classes)
        classes.push_back({{"denominator", str(c.denominator)}, {"count", str(c.count)}, {"width", str(c.width)}});
    return {{"level", str(p.level)}, {"index", str(p.index)},   {"cusp_classes", classes}, {"cusp_count", str(p.cusp_count)},
            {"nu2", str(p.nu2)},     {"nu3", str(p.nu3)},       {"genus", str(p.genus)}};
}

json to_json(const CuspOrderVector& v)
{
    json entries = json::object();
    for (const auto& [c, ord] : v.entries) entries[str(c)] = ord.get_str();
    return {{"level", str(v.level)}, {"normalization", "local uniformizer"}, {"orders", entries}};
}

json to_json(const ModularityCheck& c)
{
    return {{"valid", c.valid()},
            {"weight_zero", c.weight_zero},
            {"infinity_condition", c.infinity_condition},
            {"zero_condition", c.zero_condition},
            {"square_condition", c.square_condition},
            {"reasons", c.reasons}};
}

json to_json(const ClassificationReport& r)
{
    return {{"level", str(r.level)},
            {"prime", opt(r.prime)},
            {"cusp_count", str(r.cusp_count)},
            {"genus", str(r.genus)},
            {"difficulty_class", to_string(r.difficulty)},
            {"tedium_score", str(r.tedium)},
            {"sporadic_flags", r.sporadic_flags}};
}

json to_json(const VerificationReport& r)
{
    return {{"family", r.family},
            {"alpha", str(r.alpha)},
            {"modulus_exponent", str(r.modulus_exponent)},
            {"beta", str(r.beta)},
            {"n_max", str(r.n_max)},
            {"qualifying", str(r.qualifying)},
            {"min_valuation", opt(r.min_valuation)},
            {"witness_n", opt(r.witness_n)},
            {"passed", r.passed},
            {"counterexample_n", opt(r.counterexample_n)},
            {"counterexample_value", r.counterexample_value ? json(r.counterexample_value->get_str()) : json(nullptr)}};
}

json to_json(const ValuationReport& r)
{
    return {{"prime", str(r.prime)},
            {"min_valuation", opt(r.min_valuation)},
            {"witness_exp24", opt(r.witness_exp24)},
            {"terms_checked", str(r.terms_checked)}};
}

json to_json(const Representation& r)
{
    json coeffs = json::array();
    for (const auto& [km, s] : r.coeffs)
        coeffs.push_back({str(km.first), str(km.second), s.get_num().get_str(), s.get_den().get_str()});
    return {{"localizer_exponent", str(r.localizer_exponent)}, {"coeffs", coeffs}, {"residual", to_json(r.residual)}};
}

Representation representation_from_json(const json& j)
{
    Representation r;
    r.localizer_exponent = int_field(j.at("localizer_exponent"));
    for (const auto& c : j.at("coeffs")) {
        Rational s(Integer(c.at(2).get<std::string>()), Integer(c.at(3).get<std::string>()));
        s.canonicalize();
        r.coeffs[{int_field(c.at(0)), int_field(c.at(1))}] = s;
    }
    r.residual = series_from_json(j.at("residual"));
    return r;
}

json to_json(const ValuationTable& t)
{
    json entries = json::array();
    for (const auto& [km, v] : t.entries) entries.push_back({str(km.first), str(km.second), opt(v)});
    return {{"prime", str(t.prime)}, {"min", opt(t.min())}, {"entries", entries}};
}

json to_json(const GainReport& g)
{
    json flagged = json::array();
    for (const auto& km : g.flagged) flagged.push_back({str(km.first), str(km.second)});
    return {{"prime", str(g.prime)}, {"min_before", opt(g.min_before)}, {"min_after", opt(g.min_after)},
            {"gain", opt(g.gain)},   {"passed", g.passed},                {"flagged", flagged}};
}

std::string render(const QSeries& a, size_t max_terms)
{
    std::ostringstream out;
    size_t shown = 0;
    for (const auto& t : a.terms()) {
        if (shown == max_terms) {
            out << " + ...";
            break;
        }
        bool neg = t.coeff < 0;
        Rational mag = neg ? Rational(-t.coeff) : t.coeff;
        if (shown == 0)
            out << (neg ? "-" : "");
        else
            out << (neg ? " - " : " + ");
        bool unit = mag == 1 && t.exp24 != 0;
        if (!unit) out << mag.get_str();
        if (t.exp24 != 0) {
            if (!unit) out << "*";
            out << "q";
            if (t.exp24 != 24) out << "^" << exponent_text(t.exp24);
        }
        ++shown;
    }
    if (shown == 0) out << "0";
    if (!a.is_exact()) out << " + O(q^" << exponent_text(a.trunc24()) << ")";
    return out.str();
}

std::string render(const CurveProfile& p)
{
    std::ostringstream out;
    out << "X_0(" << p.level << "): index " << p.index << ", cusps " << p.cusp_count << ", nu2 " << p.nu2 << ", nu3 "
        << p.nu3 << ", genus " << p.genus << "\n";
    out << "  denominator  count  width\n";
    for (const auto& c : p.cusp_classes)
        out << "  " << std::setw(11) << c.denominator << "  " << std::setw(5) << c.count << "  " << std::setw(5) << c.width
            << "\n";
    return out.str();
}

std::string render(const ClassificationReport& r)
{
    std::ostringstream out;
    out << "level " << r.level;
    if (r.prime) out << ", ell " << *r.prime;
    out << ": cusp count " << r.cusp_count << ", genus " << r.genus << " -> " << to_string(r.difficulty) << " (tedium "
        << r.tedium << ")";
    for (const auto& f : r.sporadic_flags) out << "\n  sporadic: " << f;
    out << "\n";
    return out.str();
}

std::string render(const VerificationReport& r)
{
    std::ostringstream out;
    out << r.family << " alpha=" << r.alpha << ": ell^" << r.beta << " | a(n) for " << r.qualifying
        << " qualifying n <= " << r.n_max << " (modulus exponent " << r.modulus_exponent << "): "
        << (r.passed ? "PASS" : "FAIL") << "\n";
    out << "  min valuation " << valuation_text(r.min_valuation);
    if (r.witness_n) out << " at n = " << *r.witness_n;
    out << "\n";
    if (r.counterexample_n)
        out << "  counterexample: a(" << *r.counterexample_n << ") = " << r.counterexample_value->get_str() << "\n";
    return out.str();
}

std::string render(const Representation& r)
{
    std::ostringstream out;
    if (r.localizer_exponent > 0) out << "z^" << r.localizer_exponent << " * f = ";
    bool first = true;
    for (auto it = r.coeffs.rbegin(); it != r.coeffs.rend(); ++it) {
        const auto& [km, s] = *it;
        out << (first ? "" : " + ") << "(" << s.get_str() << ")";
        if (km.first > 0) out << "*y" << km.first;
        if (km.second > 0) out << "*x^" << km.second;
        first = false;
    }
    if (first) out << "0";
    out << "\n";
    return out.str();
}

std::string render(const ValuationTable& t)
{
    std::ostringstream out;
    out << "ell = " << t.prime << ", min valuation " << valuation_text(t.min()) << "\n";
    for (const auto& [km, v] : t.entries)
        out << "  (k=" << km.first << ", m=" << km.second << "): " << valuation_text(v) << "\n";
    return out.str();
}

} // namespace cusp
