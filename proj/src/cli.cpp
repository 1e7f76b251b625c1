#include "cusp_ledger/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "cusp_ledger/catalog.hpp"
#include "cusp_ledger/eta_quotient.hpp"
#include "cusp_ledger/family.hpp"
#include "cusp_ledger/reduction.hpp"
#include "cusp_ledger/report.hpp"
#include "cusp_ledger/topology.hpp"

#ifndef CUSP_LEDGER_DEFAULT_CATALOG
#define CUSP_LEDGER_DEFAULT_CATALOG "data/catalog.json"
#endif

namespace cusp::cli {

using nlohmann::json;

namespace {

// A usage problem detected after parsing (bad combination of flags, unknown
// family name, ...).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    bool json = false;
    std::string catalog;
    int jobs = 1;
};

std::string catalog_path(const Options& opt)
{
    if (!opt.catalog.empty()) return opt.catalog;
    if (const char* env = std::getenv("CUSP_LEDGER_CATALOG"); env && *env) return env;
    return CUSP_LEDGER_DEFAULT_CATALOG;
}

Catalog load(const Options& opt) { return catalog_load(catalog_path(opt)); }

void emit(std::ostream& out, const Options& opt, const std::string& kind, const json& payload, const std::string& text)
{
    if (opt.json)
        out << report_document(kind, payload).dump(2) << "\n";
    else
        out << text;
}

const FamilySpec& find_family(const Catalog& cat, const std::string& name)
{
    try {
        return cat.family(name);
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
}

const BasisSpec& find_basis(const Catalog& cat, const std::string& name)
{
    try {
        return cat.basis(name);
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

int cmd_profile(int64_t level, const Options& opt, std::ostream& out)
{
    if (level < 1) throw UsageError("level must be a positive integer");
    auto prof = curve_profile(level);
    json payload = to_json(prof);
    std::string text = render(prof);
    if (prof.cusp_count % 2 == 1) {
        payload["note"] = "odd cusp count: sporadic level";
        text += "  note: odd cusp count (sporadic level)\n";
    }
    emit(out, opt, "profile", payload, text);
    return kSuccess;
}

int cmd_classify(std::optional<int64_t> level, std::optional<int64_t> prime, const std::string& family,
                 const Options& opt, std::ostream& out)
{
    ClassificationReport rep;
    json payload;
    if (!family.empty()) {
        if (level) throw UsageError("give either --level or --family, not both");
        const Catalog cat = load(opt);
        const auto& f = find_family(cat, family);
        rep = classify(f.level, f.ell);
        payload = to_json(rep);
        payload["family"] = f.name;
    } else {
        if (!level) throw UsageError("classify needs --level or --family");
        if (*level < 1) throw UsageError("level must be a positive integer");
        rep = classify(*level, prime);
        payload = to_json(rep);
    }
    emit(out, opt, "classification", payload, (family.empty() ? "" : family + ": ") + render(rep));
    return kSuccess;
}

int cmd_expand(const std::string& eta_spec, const std::string& family, std::optional<int64_t> alpha, int64_t terms,
               const std::string& cusp, std::optional<int64_t> level, const Options& opt, std::ostream& out)
{
    if (terms < 1) throw UsageError("--terms must be at least 1");
    if (eta_spec.empty() == family.empty()) throw UsageError("expand needs exactly one of --eta or --family");
    json payload;
    QSeries series;
    std::string head;
    if (!eta_spec.empty()) {
        EtaQuotient f = parse_eta(eta_spec);
        payload["eta"] = eta_to_json(f);
        if (cusp == "infinity") {
            series = expand_at_infinity(f, f.leading_exp24() + 24 * terms);
            head = f.to_string() + " at infinity: ";
        } else {
            const int64_t N = level.value_or(f.level());
            Rational lead = order_at_cusp(f, N, 1) * 24;
            if (lead.get_den() != 1) throw UsageError("order at cusp 0 is not integral; is the quotient valid?");
            auto z = expand_at_zero(f, N, lead.get_num().get_si() + 24 * terms);
            series = z.value();
            payload["level"] = std::to_string(N);
            payload["scale"] = z.scale.get_str();
            payload["normalized"] = to_json(z.series);
            payload["order_at_zero"] = order_at_cusp(f, N, 1).get_str();
            head = f.to_string() + " at cusp 0 of X_0(" + std::to_string(N) + "), scale " + z.scale.get_str() + ": ";
        }
    } else {
        if (cusp != "infinity") throw UsageError("family expansions are available at infinity only");
        const Catalog cat = load(opt);
        const auto& f = find_family(cat, family);
        payload["family"] = f.name;
        if (alpha) {
            series = build_L_direct(f, *alpha, terms);
            payload["alpha"] = std::to_string(*alpha);
            head = "L_" + std::to_string(*alpha) + " of " + f.name + ": ";
        } else {
            series = family_coefficients(f, terms);
            head = "sum a(n) q^n of " + f.name + ": ";
        }
    }
    payload["series"] = to_json(series);
    emit(out, opt, "expansion", payload, head + render(series, static_cast<size_t>(std::max<int64_t>(terms, 12))) + "\n");
    return kSuccess;
}

int cmd_verify(const std::string& family, int64_t alpha, int64_t n_max, std::optional<int64_t> beta,
               const Options& opt, std::ostream& out)
{
    if (n_max < 0) throw UsageError("--nmax must be non-negative");
    const Catalog cat = load(opt);
    const auto& f = find_family(cat, family);
    VerifyOptions vo;
    vo.divisibility = beta;
    vo.jobs = opt.jobs;
    auto rep = verify_congruence(f, alpha, n_max, vo);
    emit(out, opt, "verification", to_json(rep), render(rep));
    return rep.passed ? kSuccess : kVerificationFailure;
}

int cmd_reduce(const std::string& target, const std::string& basis_name, bool localize, int64_t terms,
               std::optional<int64_t> prime, const Options& opt, std::ostream& out)
{
    const Catalog cat = load(opt);
    const auto& bspec = find_basis(cat, basis_name);
    const ModuleBasis basis = bspec.build();
    const int64_t guard = kDefaultGuard;
    if (terms < guard) throw UsageError("--terms must be at least the safety guard of " + std::to_string(guard));

    auto parts = split(target, ':');
    if (parts.empty()) throw UsageError("empty --target");
    const std::string kind = parts[0];
    json payload = {{"basis", bspec.name}, {"target", target}};
    std::string text;
    Representation rep;

    if (kind == "family") {
        if (parts.size() != 3) throw UsageError("family targets look like family:NAME:ALPHA");
        const auto& f = find_family(cat, parts[1]);
        const int64_t alpha = std::stoll(parts[2]);
        if (f.level != bspec.level)
            throw UsageError("family " + f.name + " lives at level " + std::to_string(f.level) + ", basis " +
                             bspec.name + " at level " + std::to_string(bspec.level));
        auto L = reduce_L(f, alpha, basis, std::max<int64_t>(terms, 4 * guard), 8, guard);
        rep = L.representation;
        if (!prime) prime = f.ell;
        payload["orders_lower_bounds"] = to_json(L.orders);
        payload["infinity_solution"] = to_json(L.infinity_solution);
        text += "L_" + std::to_string(alpha) + " of " + f.name + " at cusp 0: " + render(L.at_zero, 6) + "\n";
    } else {
        QSeries f;
        std::optional<CuspOrderVector> orders;
        if (kind == "eta") {
            EtaQuotient e = parse_eta(target.substr(4));
            if (!validate_on_gamma0(e, bspec.level).valid())
                throw UsageError(e.to_string() + " is not a function on Gamma_0(" + std::to_string(bspec.level) + ")");
            f = expand_at_zero(e, bspec.level, 24 * terms).value();
            orders = cusp_orders(e, bspec.level);
        } else if (kind == "poly" || kind == "module") {
            Representation built;
            if (kind == "poly") {
                if (parts.size() != 2) throw UsageError("poly targets look like poly:c0,c1,c2");
                auto cs = split(parts[1], ',');
                for (size_t m = 0; m < cs.size(); ++m)
                    if (parse_rational(cs[m]) != 0) built.coeffs[{0, static_cast<int64_t>(m)}] = parse_rational(cs[m]);
            } else {
                // module:k/m/c,k/m/c
                if (parts.size() != 2) throw UsageError("module targets look like module:k/m/c,k/m/c");
                for (const auto& item : split(parts[1], ',')) {
                    auto kmc = split(item, '/');
                    if (kmc.size() < 3) throw UsageError("module term '" + item + "' must look like k/m/c");
                    std::string c = kmc[2];
                    for (size_t i = 3; i < kmc.size(); ++i) c += "/" + kmc[i];
                    built.coeffs[{std::stoll(kmc[0]), std::stoll(kmc[1])}] = parse_rational(c);
                }
            }
            f = reexpand(built, basis, 24 * terms);
        } else if (kind == "laurent") {
            // laurent:e/c,e/c with integer exponents at cusp 0.
            if (parts.size() != 2) throw UsageError("laurent targets look like laurent:-1/1,0/3");
            std::vector<Term> ts;
            for (const auto& item : split(parts[1], ',')) {
                auto ec = split(item, '/');
                if (ec.size() < 2) throw UsageError("laurent term '" + item + "' must look like exponent/coefficient");
                std::string c = ec[1];
                for (size_t i = 2; i < ec.size(); ++i) c += "/" + ec[i];
                ts.push_back({24 * std::stoll(ec[0]), parse_rational(c)});
            }
            f = QSeries::from_terms(std::move(ts), 24 * terms);
        } else {
            throw UsageError("unknown target kind '" + kind + "' (family, eta, poly, module, laurent)");
        }
        payload["input"] = to_json(f);
        if (localize) {
            if (!orders) throw UsageError("--localize needs a target with known cusp orders (family or eta)");
            rep = localize_reduce(f, basis, *orders, guard);
        } else {
            rep = reduce_module(f, basis, guard);
        }
    }

    payload["representation"] = to_json(rep);
    text += render(rep);
    if (prime) {
        auto tab = valuation_table(rep, *prime);
        payload["valuations"] = to_json(tab);
        text += render(tab);
    }
    emit(out, opt, "reduction", payload, text);
    return kSuccess;
}

int cmd_find_eta(int64_t level, const std::string& constraints, int64_t bound, int64_t limit, const Options& opt,
                 std::ostream& out)
{
    if (level < 1) throw UsageError("level must be a positive integer");
    if (bound < 1) throw UsageError("--bound must be at least 1");
    auto cons = parse_constraints(constraints);
    auto found = find_eta_quotients(level, cons, bound, opt.jobs);
    json list = json::array();
    std::ostringstream text;
    text << found.size() << " eta quotient(s) on Gamma_0(" << level << ") with |r| <= " << bound;
    if (found.empty()) text << ": none found within bound";
    text << "\n";
    for (size_t i = 0; i < found.size() && static_cast<int64_t>(i) < limit; ++i) {
        auto ov = cusp_orders(found[i], level);
        list.push_back({{"eta", eta_to_json(found[i])}, {"orders", to_json(ov)}});
        text << "  " << found[i].to_string() << "   orders";
        for (const auto& [c, o] : ov.entries) text << " [1/" << c << "]=" << o.get_str();
        text << "\n";
    }
    json cs = json::array();
    for (const auto& c : cons) cs.push_back(c.to_string());
    emit(out, opt, "eta_search",
         {{"level", std::to_string(level)}, {"bound", std::to_string(bound)}, {"constraints", cs},
          {"total", std::to_string(found.size())}, {"results", list}},
         text.str());
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact workbench for modular congruence families", "cusp-ledger"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--json", opt.json, "Emit a JSON report");
    app.add_option("--catalog", opt.catalog, "Catalog file (overrides CUSP_LEDGER_CATALOG)");
    app.add_option("--jobs", opt.jobs, "Worker threads for searches and verification")->check(CLI::PositiveNumber);

    int64_t level_pos = 0;
    auto* profile = app.add_subcommand("profile", "Cusp and genus data of X_0(N)");
    profile->add_option("N", level_pos, "Level")->required();

    std::optional<int64_t> level, prime, alpha_opt, beta;
    std::string family, eta_spec, cusp = "infinity", target, basis_name, constraints;
    int64_t terms = 20, alpha = 1, n_max = 1000, bound = 6, limit = 50;
    bool localize = false;

    auto* classify_cmd = app.add_subcommand("classify", "Place a level or family in the cusp-count table");
    classify_cmd->add_option("--level", level);
    classify_cmd->add_option("--prime", prime);
    classify_cmd->add_option("--family", family);

    auto* expand = app.add_subcommand("expand", "q-expansion of an eta quotient or a family");
    expand->add_option("--eta", eta_spec, "delta:exponent list, e.g. 1:-6,5:6 (optional @M)");
    expand->add_option("--family", family);
    expand->add_option("--alpha", alpha_opt, "Expand L_alpha instead of the generating function");
    expand->add_option("--terms", terms);
    expand->add_option("--at-cusp", cusp)->check(CLI::IsMember({"zero", "infinity"}));
    expand->add_option("--level", level, "Level N for the cusp-0 chart");

    auto* verify = app.add_subcommand("verify", "Check ell^beta | a(n) on qualifying n <= nmax");
    verify->add_option("--family", family)->required();
    verify->add_option("--alpha", alpha)->required();
    verify->add_option("--nmax", n_max);
    verify->add_option("--beta", beta, "Demand this divisibility instead of the schedule's");

    auto* reduce = app.add_subcommand("reduce", "Write a function at cusp 0 in a catalog basis");
    reduce->add_option("--target", target, "family:NAME:ALPHA | eta:SPEC | poly:c0,c1,.. | module:k/m/c,.. | laurent:e/c,..")
        ->required();
    reduce->add_option("--basis", basis_name)->required();
    reduce->add_flag("--localize", localize);
    reduce->add_option("--terms", terms);
    reduce->add_option("--prime", prime, "Report valuations at this prime");

    auto* find = app.add_subcommand("find-eta", "Search eta quotients by cusp orders");
    find->add_option("--level", level)->required();
    find->add_option("--constraints", constraints, "e.g. 1:=-1,5:>=1");
    find->add_option("--bound", bound);
    find->add_option("--limit", limit, "Print at most this many");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*profile) return cmd_profile(level_pos, opt, out);
        if (*classify_cmd) return cmd_classify(level, prime, family, opt, out);
        if (*expand) return cmd_expand(eta_spec, family, alpha_opt, terms, cusp, level, opt, out);
        if (*verify) return cmd_verify(family, alpha, n_max, beta, opt, out);
        if (*reduce) return cmd_reduce(target, basis_name, localize, terms, prime, opt, out);
        if (*find) return cmd_find_eta(*level, constraints, bound, limit, opt, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const CatalogError& e) {
        err << "catalog error: " << e.what() << "\n";
        return kUsageError;
    } catch (const GapError& e) {
        err << "check failed: " << e.what() << "\n";
        if (opt.json)
            out << report_document("error", {{"error", "gap"}, {"pole_order", std::to_string(e.pole_order())},
                                             {"message", e.what()}})
                       .dump(2)
                << "\n";
        return kVerificationFailure;
    } catch (const InconsistencyError& e) {
        err << "internal inconsistency: " << e.what() << "\n";
        return kInconsistency;
    } catch (const MathError& e) {
        err << "check failed: " << e.what() << "\n";
        return kVerificationFailure;
    } catch (const TruncationError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "internal inconsistency: " << e.what() << "\n";
        return kInconsistency;
    }
    return kUsageError;
}

} // namespace cusp::cli
