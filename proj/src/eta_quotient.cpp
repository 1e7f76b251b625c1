#include "cusp_ledger/eta_quotient.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <thread>

#include "cusp_ledger/topology.hpp"

namespace cusp {

EtaQuotient::EtaQuotient(int64_t level, std::map<int64_t, int64_t> exponents) : level_(level)
{
    if (level < 1) throw std::invalid_argument("eta quotient level must be positive");
    for (auto [delta, r] : exponents) {
        if (delta < 1 || level % delta != 0)
            throw std::invalid_argument("eta quotient: delta " + std::to_string(delta) + " does not divide M = " +
                                        std::to_string(level));
        if (r != 0) exponents_.emplace(delta, r);
    }
}

EtaQuotient EtaQuotient::from_exponents(std::map<int64_t, int64_t> exponents)
{
    int64_t level = 1;
    for (auto [delta, r] : exponents) {
        if (delta < 1) throw std::invalid_argument("eta quotient: delta must be positive");
        level = std::lcm(level, delta);
    }
    return EtaQuotient(level, std::move(exponents));
}

int64_t EtaQuotient::exponent(int64_t delta) const
{
    auto it = exponents_.find(delta);
    return it == exponents_.end() ? 0 : it->second;
}

int64_t EtaQuotient::exponent_sum() const
{
    int64_t s = 0;
    for (auto [delta, r] : exponents_) s += r;
    return s;
}

int64_t EtaQuotient::leading_exp24() const
{
    int64_t s = 0;
    for (auto [delta, r] : exponents_) s += delta * r;
    return s;
}

EtaQuotient EtaQuotient::operator*(const EtaQuotient& other) const
{
    auto exps = exponents_;
    for (auto [delta, r] : other.exponents_) exps[delta] += r;
    return EtaQuotient(std::lcm(level_, other.level_), std::move(exps));
}

EtaQuotient EtaQuotient::pow(int64_t k) const
{
    auto exps = exponents_;
    for (auto& [delta, r] : exps) r *= k;
    return EtaQuotient(level_, std::move(exps));
}

std::string EtaQuotient::to_string() const
{
    if (exponents_.empty()) return "1";
    std::ostringstream out;
    bool first = true;
    for (auto [delta, r] : exponents_) {
        if (!first) out << " ";
        first = false;
        out << "eta(" << (delta == 1 ? "" : std::to_string(delta)) << "t)";
        if (r != 1) out << "^" << r;
    }
    return out.str();
}

namespace {

void require_divides(const EtaQuotient& f, int64_t level)
{
    if (level < 1 || level % f.level() != 0)
        throw std::invalid_argument("eta quotient level M = " + std::to_string(f.level()) + " does not divide N = " +
                                    std::to_string(level));
}

bool square_condition(const std::map<int64_t, int64_t>& exps, int64_t level)
{
    for (auto [p, e] : factorize(level)) {
        int64_t total = 0;
        for (auto [delta, r] : exps) {
            int64_t d = delta, v = 0;
            while (d % p == 0) {
                d /= p;
                ++v;
            }
            total += v * r;
        }
        if (total % 2 != 0) return false;
    }
    return true;
}

} // namespace

ModularityCheck validate_on_gamma0(const EtaQuotient& f, int64_t level)
{
    require_divides(f, level);
    ModularityCheck check;
    int64_t weight = f.exponent_sum();
    int64_t at_inf = f.leading_exp24();
    int64_t at_zero = 0;
    for (auto [delta, r] : f.exponents()) at_zero += (level / delta) * r;

    check.weight_zero = weight == 0;
    check.infinity_condition = at_inf % 24 == 0;
    check.zero_condition = at_zero % 24 == 0;
    check.square_condition = square_condition(f.exponents(), level);
    if (!check.weight_zero) check.reasons.push_back("sum r_delta = " + std::to_string(weight) + " != 0");
    if (!check.infinity_condition)
        check.reasons.push_back("sum delta r_delta = " + std::to_string(at_inf) + " is not divisible by 24");
    if (!check.zero_condition)
        check.reasons.push_back("sum (N/delta) r_delta = " + std::to_string(at_zero) + " is not divisible by 24");
    if (!check.square_condition) check.reasons.push_back("prod delta^r_delta is not a rational square");
    return check;
}

const Rational& CuspOrderVector::at(int64_t denominator) const
{
    auto it = entries.find(denominator);
    if (it == entries.end())
        throw std::out_of_range("no cusp class with denominator " + std::to_string(denominator) + " at level " +
                                std::to_string(level));
    return it->second;
}

Rational CuspOrderVector::valence_sum() const
{
    Rational total = 0;
    for (const auto& [c, ord] : entries) total += ord * cusp_class(level, c).count;
    return total;
}

Rational order_at_cusp(const EtaQuotient& f, int64_t level, int64_t c)
{
    require_divides(f, level);
    if (c < 1 || level % c != 0)
        throw std::invalid_argument("cusp denominator " + std::to_string(c) + " does not divide N = " +
                                    std::to_string(level));
    int64_t g = std::gcd(c * c, level);
    Rational sum = 0;
    for (auto [delta, r] : f.exponents()) {
        int64_t h = std::gcd(c, delta);
        sum += Rational(r * h * h, delta);
    }
    Rational out = sum * Rational(level, 24 * g);
    out.canonicalize();
    return out;
}

CuspOrderVector cusp_orders(const EtaQuotient& f, int64_t level)
{
    CuspOrderVector v;
    v.level = level;
    for (int64_t c : divisors(level)) v.entries.emplace(c, order_at_cusp(f, level, c));
    return v;
}

QSeries expand_at_infinity(const EtaQuotient& f, int64_t trunc24)
{
    const int64_t lead = f.leading_exp24();
    if (trunc24 <= lead)
        throw TruncationError("truncation " + std::to_string(trunc24) + "/24 is too small to hold the leading term q^(" +
                              std::to_string(lead) + "/24) of " + f.to_string());
    const int64_t relative = trunc24 - lead;
    QSeries out = QSeries::one().truncated(relative);
    for (auto [delta, r] : f.exponents()) out = out * pow(eta_expansion(delta, delta + relative), r);
    if (out.trunc24() != trunc24) throw InconsistencyError("expand_at_infinity: truncation bookkeeping drifted");
    return out;
}

ZeroExpansion expand_at_zero(const EtaQuotient& f, int64_t level, int64_t trunc24)
{
    require_divides(f, level);
    if (f.exponent_sum() != 0)
        throw std::invalid_argument("expand_at_zero needs a weight-0 quotient; " + f.to_string() + " has sum r = " +
                                    std::to_string(f.exponent_sum()));
    std::map<int64_t, int64_t> dual;
    Rational scale_squared = 1;
    for (auto [delta, r] : f.exponents()) {
        dual[level / delta] += r;
        Rational base(level / delta);
        Rational factor = 1;
        for (int64_t i = 0; i < (r > 0 ? r : -r); ++i) factor *= base;
        scale_squared *= r > 0 ? factor : Rational(1 / factor);
    }
    auto scale = rational_sqrt(scale_squared);
    if (!scale)
        throw MathError("expand_at_zero: multiplier sqrt(" + scale_squared.get_str() + ") of " + f.to_string() +
                        " is not rational");

    ZeroExpansion out{*scale, expand_at_infinity(EtaQuotient(level, std::move(dual)), trunc24)};
    Rational order0 = order_at_cusp(f, level, 1);
    if (!out.series.is_zero() && Rational(out.series.offset24()) != order0 * 24)
        throw InconsistencyError("expand_at_zero: leading exponent " + std::to_string(out.series.offset24()) +
                                 "/24 disagrees with the cusp-0 order " + order0.get_str());
    return out;
}

bool OrderConstraint::holds(const Rational& order) const
{
    int c = cmp(order, value);
    switch (relation) {
    case Relation::Eq: return c == 0;
    case Relation::Ge: return c >= 0;
    case Relation::Le: return c <= 0;
    case Relation::Gt: return c > 0;
    case Relation::Lt: return c < 0;
    }
    return false;
}

std::string OrderConstraint::to_string() const
{
    static const char* ops[] = {"=", ">=", "<=", ">", "<"};
    return std::to_string(denominator) + ":" + ops[static_cast<int>(relation)] + value.get_str();
}

std::vector<OrderConstraint> parse_constraints(const std::string& text)
{
    std::vector<OrderConstraint> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("constraint '" + item + "' must look like c:>=1");
        OrderConstraint con;
        try {
            con.denominator = std::stoll(item.substr(0, colon));
        } catch (const std::exception&) {
            throw std::invalid_argument("constraint '" + item + "': bad cusp denominator");
        }
        std::string rest = item.substr(colon + 1);
        static const std::pair<const char*, OrderConstraint::Relation> table[] = {
            {">=", OrderConstraint::Relation::Ge}, {"<=", OrderConstraint::Relation::Le},
            {"==", OrderConstraint::Relation::Eq}, {"=", OrderConstraint::Relation::Eq},
            {">", OrderConstraint::Relation::Gt},  {"<", OrderConstraint::Relation::Lt},
        };
        bool matched = false;
        for (auto [op, rel] : table) {
            std::string o(op);
            if (rest.rfind(o, 0) == 0) {
                con.relation = rel;
                con.value = parse_rational(rest.substr(o.size()));
                matched = true;
                break;
            }
        }
        if (!matched) throw std::invalid_argument("constraint '" + item + "': expected one of = >= <= > <");
        out.push_back(con);
    }
    return out;
}

namespace {

struct SearchPlan {
    int64_t level;
    int64_t bound;
    std::vector<int64_t> deltas;
    std::vector<std::vector<int64_t>> prime_valuations; // [prime][delta index]
    // Per constraint: weights gcd(c, delta)^2 N/delta and order denominator 24 gcd(c^2, N).
    std::vector<std::vector<int64_t>> weights;
    std::vector<int64_t> order_den;
    std::vector<OrderConstraint> constraints;
};

bool accept(const SearchPlan& plan, const std::vector<int64_t>& r)
{
    const size_t d = r.size();
    int64_t at_inf = 0, at_zero = 0;
    for (size_t i = 0; i < d; ++i) {
        at_inf += plan.deltas[i] * r[i];
        at_zero += (plan.level / plan.deltas[i]) * r[i];
    }
    if (at_inf % 24 != 0 || at_zero % 24 != 0) return false;
    for (const auto& vals : plan.prime_valuations) {
        int64_t total = 0;
        for (size_t i = 0; i < d; ++i) total += vals[i] * r[i];
        if (total % 2 != 0) return false;
    }
    for (size_t k = 0; k < plan.constraints.size(); ++k) {
        int64_t s = 0;
        for (size_t i = 0; i < d; ++i) s += plan.weights[k][i] * r[i];
        if (!plan.constraints[k].holds(Rational(s, plan.order_den[k]))) return false;
    }
    return true;
}

// All vectors whose first coordinate is `first`; the last coordinate is fixed
// by sum r = 0.
void scan_slab(const SearchPlan& plan, int64_t first, std::vector<std::vector<int64_t>>& hits)
{
    const size_t d = plan.deltas.size();
    const int64_t B = plan.bound;
    std::vector<int64_t> r(d, 0);
    if (d == 1) {
        if (first == 0 && accept(plan, r)) hits.push_back(r);
        return;
    }
    r[0] = first;
    const size_t free = d - 2; // coordinates 1 .. d-2
    std::vector<int64_t> inner(free, -B);
    while (true) {
        int64_t sum = first;
        for (size_t i = 0; i < free; ++i) {
            r[i + 1] = inner[i];
            sum += inner[i];
        }
        if (sum >= -B && sum <= B) {
            r[d - 1] = -sum;
            if (accept(plan, r)) hits.push_back(r);
        }
        size_t pos = 0;
        while (pos < free && inner[pos] == B) inner[pos++] = -B;
        if (pos == free) break;
        ++inner[pos];
    }
}

} // namespace

std::vector<EtaQuotient> find_eta_quotients(int64_t level, std::span<const OrderConstraint> constraints,
                                            int64_t bound, int jobs)
{
    if (bound < 1) throw std::invalid_argument("find_eta_quotients: bound must be at least 1");
    if (level < 1) throw std::invalid_argument("find_eta_quotients: level must be positive");
    SearchPlan plan;
    plan.level = level;
    plan.bound = bound;
    plan.deltas = divisors(level);
    for (auto [p, e] : factorize(level)) {
        std::vector<int64_t> vals;
        for (int64_t delta : plan.deltas) {
            int64_t v = 0;
            for (int64_t d = delta; d % p == 0; d /= p) ++v;
            vals.push_back(v);
        }
        plan.prime_valuations.push_back(std::move(vals));
    }
    for (const auto& con : constraints) {
        if (con.denominator < 1 || level % con.denominator != 0)
            throw std::invalid_argument("constraint on denominator " + std::to_string(con.denominator) +
                                        ", which does not divide N = " + std::to_string(level));
        std::vector<int64_t> w;
        for (int64_t delta : plan.deltas) {
            int64_t h = std::gcd(con.denominator, delta);
            w.push_back(h * h * (level / delta));
        }
        plan.weights.push_back(std::move(w));
        plan.order_den.push_back(24 * std::gcd(con.denominator * con.denominator, level));
        plan.constraints.push_back(con);
    }

    std::vector<int64_t> firsts;
    for (int64_t v = -bound; v <= bound; ++v) firsts.push_back(v);
    if (plan.deltas.size() == 1) firsts = {0};

    std::vector<std::vector<int64_t>> hits;
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(firsts.size())));
    if (jobs == 1) {
        for (int64_t v : firsts) scan_slab(plan, v, hits);
    } else {
        std::vector<std::vector<std::vector<int64_t>>> partial(static_cast<size_t>(jobs));
        std::vector<std::thread> workers;
        for (int j = 0; j < jobs; ++j) {
            workers.emplace_back([&, j] {
                for (size_t i = static_cast<size_t>(j); i < firsts.size(); i += static_cast<size_t>(jobs))
                    scan_slab(plan, firsts[i], partial[static_cast<size_t>(j)]);
            });
        }
        for (auto& w : workers) w.join();
        for (auto& p : partial) hits.insert(hits.end(), p.begin(), p.end());
    }

    auto weight = [](const std::vector<int64_t>& r) {
        int64_t s = 0;
        for (int64_t x : r) s += x < 0 ? -x : x;
        return s;
    };
    std::sort(hits.begin(), hits.end(), [&](const auto& a, const auto& b) {
        int64_t wa = weight(a), wb = weight(b);
        if (wa != wb) return wa < wb;
        return a < b;
    });

    std::vector<EtaQuotient> out;
    for (const auto& r : hits) {
        std::map<int64_t, int64_t> exps;
        for (size_t i = 0; i < r.size(); ++i) exps[plan.deltas[i]] = r[i];
        out.emplace_back(level, std::move(exps));
    }
    return out;
}

} // namespace cusp
