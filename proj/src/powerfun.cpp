#include "degcalc/powerfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

// Relative size below which a merged coefficient counts as cancelled.
constexpr double kCancel = 64 * std::numeric_limits<double>::epsilon();

struct Accum {
    Exponent key1;
    Exponent key2;
    double sum = 0.0;
    double abs_sum = 0.0;
};

bool cancelled(double sum, double abs_sum) {
    return sum == 0.0 || std::abs(sum) <= kCancel * abs_sum;
}

// Prefer an exact representative when two tolerant-equal exponents meet.
void prefer_rational(Exponent& kept, const Exponent& other) {
    if (!kept.is_rational() && other.is_rational()) kept = other;
}

// Groups by (key1, key2) with tolerant equality: sort on key1, cluster runs
// of tolerant-equal key1, merge key2 inside each cluster.
std::vector<Accum> merge_pairs(std::vector<Accum> items) {
    std::sort(items.begin(), items.end(),
              [](const Accum& a, const Accum& b) { return a.key1.value() < b.key1.value(); });
    std::vector<Accum> out;
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i + 1;
        while (j < items.size() && items[j].key1 == items[j - 1].key1) ++j;
        std::vector<Accum> cluster;
        for (std::size_t k = i; k < j; ++k) {
            auto it = std::find_if(cluster.begin(), cluster.end(), [&](const Accum& c) {
                return c.key1 == items[k].key1 && c.key2 == items[k].key2;
            });
            if (it == cluster.end()) {
                cluster.push_back(items[k]);
            } else {
                it->sum += items[k].sum;
                it->abs_sum += items[k].abs_sum;
                prefer_rational(it->key1, items[k].key1);
                prefer_rational(it->key2, items[k].key2);
            }
        }
        for (auto& c : cluster)
            if (!cancelled(c.sum, c.abs_sum)) out.push_back(c);
        i = j;
    }
    std::sort(out.begin(), out.end(), [](const Accum& a, const Accum& b) {
        if (a.key1 != b.key1) return a.key1 < b.key1;
        return a.key2 < b.key2;
    });
    return out;
}

void require_same_domain(const RadialFunction& f, const RadialFunction& g) {
    if (f.domain() != g.domain())
        throw PreconditionError("radial functions live on different domains");
}

std::string coeff_text(double c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

double binomial(const Exponent& q, int k) {
    double r = 1.0;
    double qv = q.value();
    for (int i = 0; i < k; ++i) r *= (qv - i) / (i + 1);
    return r;
}

RadialFunction RadialFunction::constant(double c, Domain domain) {
    return monomial(c, 0, 0, domain);
}

RadialFunction RadialFunction::monomial(double c, Exponent p, Exponent q, Domain domain) {
    RadialFunction f(domain);
    if (c != 0.0) f.terms_.push_back({p, q, c});
    return f;
}

RadialFunction RadialFunction::power(Exponent p, Domain domain) { return monomial(1.0, p, 0, domain); }

RadialFunction RadialFunction::from_terms(std::vector<Term> terms, Domain domain) {
    RadialFunction f(domain);
    f.terms_ = std::move(terms);
    f.normalize();
    return f;
}

void RadialFunction::normalize() {
    std::vector<Accum> items;
    items.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!std::isfinite(t.coeff)) throw PreconditionError("non-finite coefficient");
        if (t.coeff != 0.0) items.push_back({t.p, t.q, t.coeff, std::abs(t.coeff)});
    }
    auto merged = merge_pairs(std::move(items));
    terms_.clear();
    for (const auto& m : merged) terms_.push_back({m.key1, m.key2, m.sum});
}

bool RadialFunction::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].p.is_zero() && terms_[0].q.is_zero());
}

double RadialFunction::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
}

RadialFunction RadialFunction::operator-() const { return scaled(-1.0); }

RadialFunction RadialFunction::scaled(double c) const {
    RadialFunction f(domain_);
    if (c == 0.0) return f;
    f.terms_ = terms_;
    for (auto& t : f.terms_) t.coeff *= c;
    return f;
}

RadialFunction operator+(const RadialFunction& f, const RadialFunction& g) {
    require_same_domain(f, g);
    RadialFunction h(f.domain_);
    h.terms_ = f.terms_;
    h.terms_.insert(h.terms_.end(), g.terms_.begin(), g.terms_.end());
    h.normalize();
    return h;
}

RadialFunction operator-(const RadialFunction& f, const RadialFunction& g) { return f + (-g); }

RadialFunction operator*(const RadialFunction& f, const RadialFunction& g) {
    require_same_domain(f, g);
    RadialFunction h(f.domain_);
    h.terms_.reserve(f.terms_.size() * g.terms_.size());
    for (const auto& a : f.terms_)
        for (const auto& b : g.terms_) h.terms_.push_back({a.p + b.p, a.q + b.q, a.coeff * b.coeff});
    h.normalize();
    return h;
}

RadialFunction RadialFunction::derivative() const {
    // d/dt t^p (1 +- t)^q = p t^{p-1} (1 +- t)^q +- q t^p (1 +- t)^{q-1}
    const double sign = domain_ == Domain::half_line ? 1.0 : -1.0;
    RadialFunction h(domain_);
    for (const auto& t : terms_) {
        if (!t.p.is_zero()) h.terms_.push_back({t.p - 1, t.q, t.coeff * t.p.value()});
        if (!t.q.is_zero()) h.terms_.push_back({t.p, t.q - 1, sign * t.coeff * t.q.value()});
    }
    h.normalize();
    return h;
}

RadialFunction RadialFunction::pow(int k) const {
    if (k < 0) throw PreconditionError("negative integer power of a multi-term function");
    RadialFunction r = constant(1.0, domain_);
    RadialFunction base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return r;
}

RadialFunction RadialFunction::pow_single(Exponent k) const {
    if (!is_single_term()) throw PreconditionError("real power of a function that is not a single term");
    const auto& t = terms_[0];
    if (t.coeff < 0.0 && !k.is_integer())
        throw PreconditionError("non-integer power of a negative coefficient");
    return monomial(std::pow(t.coeff, k.value()), t.p * k, t.q * k, domain_);
}

RadialFunction RadialFunction::reciprocal() const {
    if (!is_single_term()) throw PreconditionError("reciprocal of a function that is not a single term");
    const auto& t = terms_[0];
    return monomial(1.0 / t.coeff, -t.p, -t.q, domain_);
}

RadialFunction RadialFunction::inverted() const {
    if (domain_ != Domain::half_line) throw PreconditionError("coordinate inversion needs the half-line");
    RadialFunction h(domain_);
    for (const auto& t : terms_) h.terms_.push_back({-(t.p + t.q), t.q, t.coeff});
    h.normalize();
    return h;
}

double RadialFunction::eval(double t) const {
    const bool interior = domain_ == Domain::half_line ? (t > 0.0 && std::isfinite(t))
                                                       : (t > 0.0 && t < 1.0);
    if (!interior) throw DomainError("eval needs an interior point; use endpoint_limit");
    return eval_split(t, domain_ == Domain::half_line ? 1.0 + t : 1.0 - t);
}

double RadialFunction::eval_split(double t, double other) const {
    double s = 0.0;
    for (const auto& term : terms_) {
        double v = std::pow(t, term.p.value()) * std::pow(other, term.q.value());
        // Factors that over- or underflow separately may still have a
        // representable product.
        if (!std::isfinite(v) || v == 0.0)
            v = std::exp(term.p.value() * std::log(t) + term.q.value() * std::log(other));
        s += term.coeff * v;
    }
    return s;
}

std::vector<LocalTerm> RadialFunction::expansion(Endpoint end, Exponent up_to) const {
    std::vector<Accum> items;
    for (const auto& t : terms_) {
        // Each basis term is c w^{e0} (1 + sgn w)^{m}; expand the binomial.
        Exponent e0;
        Exponent m;
        double sgn = 1.0;
        if (end == Endpoint::origin) {
            e0 = t.p;
            m = t.q;
            sgn = domain_ == Domain::half_line ? 1.0 : -1.0;
        } else if (domain_ == Domain::half_line) {
            e0 = -(t.p + t.q);
            m = t.q;
        } else {
            e0 = t.q;
            m = t.p;
            sgn = -1.0;
        }
        double sign_k = 1.0;
        for (int k = 0;; ++k) {
            Exponent e = e0 + k;
            if (e > up_to) break;
            double b = binomial(m, k);
            if (m.is_integer() && m.value() >= 0 && k > m.value()) break;
            double c = t.coeff * b * sign_k;
            if (c != 0.0) items.push_back({e, 0, c, std::abs(c)});
            sign_k *= sgn;
        }
    }
    auto merged = merge_pairs(std::move(items));
    std::vector<LocalTerm> out;
    out.reserve(merged.size());
    for (const auto& a : merged) out.push_back({a.key1, a.sum});
    return out;
}

std::optional<LocalTerm> RadialFunction::leading(Endpoint end, int extra_orders) const {
    if (terms_.empty()) return std::nullopt;
    Exponent lo = end == Endpoint::origin ? origin_key_exponent() : far_key_exponent();
    auto ex = expansion(end, lo + extra_orders);
    if (ex.empty()) return std::nullopt;
    return ex.front();
}

EndpointValue RadialFunction::endpoint_limit(Endpoint end) const {
    auto ex = expansion(end, 0);
    for (const auto& lt : ex) {
        if (lt.exponent.sign() < 0)
            return {lt.coeff > 0 ? EndpointValue::Kind::plus_infinity : EndpointValue::Kind::minus_infinity,
                    lt.coeff > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity()};
        if (lt.exponent.is_zero()) return EndpointValue::finite(lt.coeff);
    }
    return EndpointValue::finite(0.0);
}

bool RadialFunction::is_continuous() const {
    return endpoint_limit(Endpoint::origin).is_finite() && endpoint_limit(Endpoint::far).is_finite();
}

Exponent RadialFunction::origin_key_exponent() const {
    if (terms_.empty()) throw PreconditionError("zero function has no endpoint exponent");
    Exponent m = terms_[0].p;
    for (const auto& t : terms_)
        if (t.p < m) m = t.p;
    return m;
}

Exponent RadialFunction::far_key_exponent() const {
    if (terms_.empty()) throw PreconditionError("zero function has no endpoint exponent");
    auto key = [&](const Term& t) { return domain_ == Domain::half_line ? -(t.p + t.q) : t.q; };
    Exponent m = key(terms_[0]);
    for (const auto& t : terms_)
        if (key(t) < m) m = key(t);
    return m;
}

RadialFunction RadialFunction::pruned(double abs_tol) const {
    RadialFunction h(domain_);
    for (const auto& t : terms_)
        if (std::abs(t.coeff) > abs_tol) h.terms_.push_back(t);
    return h;
}

bool RadialFunction::approx_equal(const RadialFunction& g, double rel_tol) const {
    if (domain_ != g.domain_) return false;
    const double tol = rel_tol * std::max({1.0, max_abs_coeff(), g.max_abs_coeff()});
    auto diff = *this - g;
    return std::all_of(diff.terms_.begin(), diff.terms_.end(),
                       [&](const Term& t) { return std::abs(t.coeff) <= tol; });
}

RadialFunction RadialFunction::canonical() const {
    const double sign = domain_ == Domain::half_line ? 1.0 : -1.0;
    std::vector<bool> used(terms_.size(), false);
    RadialFunction out(domain_);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> group;
        for (std::size_t j = i; j < terms_.size(); ++j)
            if (!used[j] && (terms_[j].p - terms_[i].p).is_integer() && (terms_[j].q - terms_[i].q).is_integer()) {
                group.push_back(j);
                used[j] = true;
            }
        Exponent p0 = terms_[group[0]].p, q0 = terms_[group[0]].q;
        for (auto j : group) {
            if (terms_[j].p < p0) p0 = terms_[j].p;
            if (terms_[j].q < q0) q0 = terms_[j].q;
        }
        // t^{p0+a} (1 +- t)^{q0+b} = t^{p0} (1 +- t)^{q0} sum_k binom(b,k) (+-1)^k t^{a+k}
        std::vector<double> poly;
        for (auto j : group) {
            const int a = static_cast<int>(std::lround((terms_[j].p - p0).value()));
            const int b = static_cast<int>(std::lround((terms_[j].q - q0).value()));
            if (poly.size() < static_cast<std::size_t>(a + b + 1)) poly.resize(a + b + 1, 0.0);
            double binom = 1.0;
            for (int k = 0; k <= b; ++k) {
                poly[a + k] += terms_[j].coeff * binom * std::pow(sign, k);
                binom = binom * (b - k) / (k + 1);
            }
        }
        for (std::size_t k = 0; k < poly.size(); ++k)
            if (poly[k] != 0.0) out.terms_.push_back({p0 + static_cast<int>(k), q0, poly[k]});
    }
    out.normalize();
    return out;
}

bool RadialFunction::equivalent(const RadialFunction& g, double rel_tol) const {
    if (domain_ != g.domain_) return false;
    const double scale = std::max({1.0, canonical().max_abs_coeff(), g.canonical().max_abs_coeff()});
    const auto diff = (*this - g).canonical();
    return std::all_of(diff.terms_.begin(), diff.terms_.end(),
                       [&](const Term& t) { return std::abs(t.coeff) <= rel_tol * scale; });
}

bool operator==(const RadialFunction& f, const RadialFunction& g) {
    if (f.domain_ != g.domain_ || f.terms_.size() != g.terms_.size()) return false;
    for (std::size_t i = 0; i < f.terms_.size(); ++i) {
        const auto& a = f.terms_[i];
        const auto& b = g.terms_[i];
        if (!(a.p == b.p) || !(a.q == b.q) || a.coeff != b.coeff) return false;
    }
    return true;
}

std::string RadialFunction::to_text() const {
    if (terms_.empty()) return "0\n";
    const char* second = domain_ == Domain::half_line ? "(1+t)^" : "(1-t)^";
    std::string out;
    for (const auto& t : terms_)
        out += coeff_text(t.coeff) + " * t^" + t.p.to_string() + " * " + second + t.q.to_string() + "\n";
    return out;
}

std::string RadialFunction::to_string() const {
    if (terms_.empty()) return "0";
    const char* second = domain_ == Domain::half_line ? "(1+t)^" : "(1-t)^";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", t.coeff);
        os << buf;
        if (!t.p.is_zero()) os << "*t^" << (t.p.is_integer() && t.p.sign() >= 0 ? t.p.to_string() : "(" + t.p.to_string() + ")");
        if (!t.q.is_zero()) os << "*" << second << "(" << t.q.to_string() << ")";
    }
    return os.str();
}

RadialFunction RadialFunction::from_text(std::string_view text, Domain domain) {
    const std::string_view second = domain == Domain::half_line ? "(1+t)^" : "(1-t)^";
    std::vector<Term> terms;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = trim(line);
        if (body.empty() || body == "0") continue;
        auto fail = [&](const std::string& why) {
            return ConfigError("radial function line " + std::to_string(lineno) + ": " + why + " in '" + body + "'");
        };
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto star = body.find('*', start);
            parts.push_back(trim(std::string_view(body).substr(start, star - start)));
            if (star == std::string::npos) break;
            start = star + 1;
        }
        if (parts.size() != 3) throw fail("expected 'coeff * t^p * (1+t)^q'");
        Term t;
        try {
            std::size_t used = 0;
            t.coeff = std::stod(parts[0], &used);
            if (used != parts[0].size()) throw fail("malformed coefficient");
        } catch (const std::logic_error&) {
            throw fail("malformed coefficient");
        }
        if (parts[1].rfind("t^", 0) != 0) throw fail("expected t^p");
        t.p = Exponent::parse(std::string_view(parts[1]).substr(2));
        if (parts[2].rfind(second, 0) != 0) throw fail("expected " + std::string(second) + "q");
        t.q = Exponent::parse(std::string_view(parts[2]).substr(second.size()));
        terms.push_back(t);
    }
    return from_terms(std::move(terms), domain);
}

}  // namespace degcalc
