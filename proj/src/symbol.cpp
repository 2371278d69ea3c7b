#include "degcalc/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

using cd = std::complex<double>;

ComplexRadial apply_x(const Weight& phi, const ComplexRadial& f) {
    return {apply_X(phi, f.re), apply_X(phi, f.im)};
}

XiPolynomial poly_add(const XiPolynomial& x, const XiPolynomial& y, Domain d) {
    XiPolynomial out(std::max(x.size(), y.size()), ComplexRadial(d));
    for (std::size_t k = 0; k < x.size(); ++k) out[k] += x[k];
    for (std::size_t k = 0; k < y.size(); ++k) out[k] += y[k];
    return out;
}

XiPolynomial poly_mul(const XiPolynomial& x, const XiPolynomial& y, Domain d) {
    if (x.empty() || y.empty()) return {};
    XiPolynomial out(x.size() + y.size() - 1, ComplexRadial(d));
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (!y[j].is_zero()) out[i + j] += x[i] * y[j];
    }
    return out;
}

XiPolynomial poly_scale(const XiPolynomial& x, cd c) {
    XiPolynomial out;
    for (const auto& f : x) out.push_back(f.scaled(c));
    return out;
}

XiPolynomial poly_dxi(const XiPolynomial& x) {
    XiPolynomial out;
    for (std::size_t k = 1; k < x.size(); ++k) out.push_back(x[k].scaled(static_cast<double>(k)));
    return out;
}

XiPolynomial poly_x(const Weight& phi, const XiPolynomial& x) {
    XiPolynomial out;
    for (const auto& f : x) out.push_back(apply_x(phi, f));
    return out;
}

XiPolynomial poly_pow(const XiPolynomial& x, int e, Domain d) {
    XiPolynomial out{ComplexRadial(RadialFunction::constant(1.0, d))};
    for (int i = 0; i < e; ++i) out = poly_mul(out, x, d);
    return out;
}

cd poly_eval(const XiPolynomial& p, double t, double xi) {
    cd sum = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) sum = sum * xi + (p[k].is_zero() ? cd(0.0) : p[k].eval(t));
    return sum;
}

std::vector<double> t_grid(Domain d, int n) {
    std::vector<double> t;
    for (int k = 0; k < n; ++k) {
        const double u = -12.0 + 24.0 * k / (n - 1);
        t.push_back(d == Domain::half_line ? std::pow(10.0, u / 2.0) : 1.0 / (1.0 + std::exp(-u)));
    }
    return t;
}

cd endpoint_value(const RadialFunction& f, Endpoint end, bool& finite) {
    if (f.is_zero()) return 0.0;
    const auto v = f.endpoint_limit(end);
    if (!v.is_finite()) {
        finite = false;
        return 0.0;
    }
    return v.value;
}

// Smallest |sigma| over the unit circle relative to the largest, for a
// homogeneous polynomial with numeric coefficients.
double circle_min_ratio(const std::map<OpKey, cd>& s) {
    auto sigma = [&](double alpha) {
        const double c = std::cos(alpha), si = std::sin(alpha);
        cd v = 0.0;
        for (const auto& [k, coeff] : s) v += coeff * std::pow(c, k.i) * std::pow(si, k.j);
        return std::abs(v);
    };
    constexpr int n = 720;
    std::vector<double> val(n);
    double mx = 0.0;
    for (int k = 0; k < n; ++k) {
        val[k] = sigma(std::numbers::pi * k / n);
        mx = std::max(mx, val[k]);
    }
    if (mx == 0.0) return 0.0;
    double mn = *std::min_element(val.begin(), val.end());
    const double h = std::numbers::pi / n;
    for (int k = 0; k < n; ++k) {
        const double prev = val[(k + n - 1) % n], next = val[(k + 1) % n];
        if (val[k] > prev || val[k] > next) continue;
        double lo = (k - 1) * h, hi = (k + 1) * h;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 80; ++it) {
            const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
            if (sigma(a) < sigma(b)) hi = b;
            else lo = a;
        }
        mn = std::min(mn, sigma(0.5 * (lo + hi)));
    }
    return mn / mx;
}

}  // namespace

std::complex<double> PrincipalSymbol::eval(double t, double theta, double xi, double eta) const {
    cd v = 0.0;
    for (const auto& [k, c] : coeffs) v += c.eval(t, theta) * std::pow(xi, k.i) * std::pow(eta, k.j);
    return v;
}

bool PrincipalSymbol::equivalent(const PrincipalSymbol& o, double rel_tol) const {
    if (order != o.order) return false;
    const CylinderFunction zero(coeffs.empty() ? Domain::half_line : coeffs.begin()->second.domain());
    for (const auto& [k, c] : coeffs) {
        auto it = o.coeffs.find(k);
        if (!c.equivalent(it == o.coeffs.end() ? zero : it->second, rel_tol)) return false;
    }
    for (const auto& [k, c] : o.coeffs)
        if (!coeffs.contains(k) && !c.equivalent(zero, rel_tol)) return false;
    return true;
}

PrincipalSymbol operator*(const PrincipalSymbol& a, const PrincipalSymbol& b) {
    PrincipalSymbol out;
    out.order = a.order < 0 || b.order < 0 ? -1 : a.order + b.order;
    for (const auto& [ka, ca] : a.coeffs)
        for (const auto& [kb, cb] : b.coeffs) {
            const OpKey k{ka.i + kb.i, ka.j + kb.j};
            auto it = out.coeffs.find(k);
            if (it == out.coeffs.end()) out.coeffs.emplace(k, ca * cb);
            else it->second += ca * cb;
        }
    return out;
}

std::string PrincipalSymbol::to_string() const {
    if (coeffs.empty()) return "0";
    std::string out;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        out += it->second.to_string();
        if (it->first.i) out += " * xi^" + std::to_string(it->first.i);
        if (it->first.j) out += " * eta^" + std::to_string(it->first.j);
        out += "\n";
    }
    return out;
}

PrincipalSymbol principal_symbol(const DiffOp& op) {
    const DiffOp m = normal_form(op, OpForm::monomial);
    PrincipalSymbol s;
    s.order = m.order();
    for (const auto& [k, c] : m.terms()) {
        if (k.i + k.j != s.order) continue;
        cd unit = 1.0;
        for (int r = 0; r < s.order; ++r) unit *= cd(0.0, 1.0);
        s.coeffs.emplace(k, c.scaled(unit));
    }
    return s;
}

EllipticityReport ellipticity(const DiffOp& op) {
    EllipticityReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    if (op.is_zero()) {
        rep.min_ratio = 0.0;
        rep.reason = "zero operator";
        return rep;
    }
    const PrincipalSymbol s = principal_symbol(op);
    bool radial = true;
    for (const auto& [k, c] : s.coeffs) radial = radial && c.is_radial();
    std::vector<double> thetas{0.0};
    if (!radial)
        for (int k = 1; k < 24; ++k) thetas.push_back(2 * std::numbers::pi * k / 24);

    auto check = [&](const std::map<OpKey, cd>& values, double t) {
        const double r = circle_min_ratio(values);
        if (r < rep.min_ratio) {
            rep.min_ratio = r;
            rep.t_at = t;
        }
    };
    for (double t : t_grid(op.domain(), 64))
        for (double th : thetas) {
            std::map<OpKey, cd> v;
            for (const auto& [k, c] : s.coeffs) v[k] = c.eval(t, th);
            check(v, t);
        }
    const double far_t = op.domain() == Domain::half_line ? std::numeric_limits<double>::infinity() : 1.0;
    for (auto [end, t] : {std::pair{Endpoint::origin, 0.0}, std::pair{Endpoint::far, far_t}}) {
        for (double th : thetas) {
            std::map<OpKey, cd> v;
            bool finite = true;
            for (const auto& [k, c] : s.coeffs) {
                cd sum = 0.0;
                for (const auto& [m, f] : c.modes()) {
                    const cd val(endpoint_value(f.re, end, finite).real(), endpoint_value(f.im, end, finite).real());
                    sum += val * std::polar(1.0, m * th);
                }
                v[k] = sum;
            }
            if (!finite) {
                rep.min_ratio = 0.0;
                rep.t_at = t;
                rep.reason = "principal coefficient unbounded at an endpoint";
                return rep;
            }
            check(v, t);
        }
    }
    rep.elliptic = rep.min_ratio > 1e-9;
    if (!rep.elliptic) rep.reason = "principal symbol vanishes on the unit circle";
    return rep;
}

bool is_elliptic(const DiffOp& op) { return ellipticity(op).elliptic; }

RationalSymbol::RationalSymbol(std::shared_ptr<const Base> base, XiPolynomial numerator, int power)
    : base_(std::move(base)), num_(std::move(numerator)), power_(power) {
    if (power_ < 0) throw PreconditionError("negative denominator power");
    trim();
}

void RationalSymbol::trim() {
    for (auto& c : num_) c = c.canonical();
    const ComplexRadial zero(base_->phi.domain());
    while (!num_.empty() && num_.back().equivalent(zero)) num_.pop_back();
}

int RationalSymbol::order() const noexcept {
    if (num_.empty()) return INT_MIN;
    return numerator_degree() - power_ * (static_cast<int>(base_->a.size()) - 1);
}

std::complex<double> RationalSymbol::eval(double t, double xi) const {
    if (num_.empty()) return 0.0;
    return poly_eval(num_, t, xi) / std::pow(poly_eval(base_->a, t, xi), power_);
}

RationalSymbol RationalSymbol::d_xi() const {
    const Domain d = base_->phi.domain();
    if (power_ == 0) return {base_, poly_dxi(num_), 0};
    // (N' a - e N a') / a^{e+1}
    XiPolynomial n = poly_add(poly_mul(poly_dxi(num_), base_->a, d),
                              poly_scale(poly_mul(num_, poly_dxi(base_->a), d), -power_), d);
    return {base_, std::move(n), power_ + 1};
}

RationalSymbol RationalSymbol::D_s() const {
    const Domain d = base_->phi.domain();
    const cd minus_i(0.0, -1.0);
    if (power_ == 0) return {base_, poly_scale(poly_x(base_->phi, num_), minus_i), 0};
    XiPolynomial n = poly_add(poly_mul(poly_x(base_->phi, num_), base_->a, d),
                              poly_scale(poly_mul(num_, poly_x(base_->phi, base_->a), d), -power_), d);
    return {base_, poly_scale(n, minus_i), power_ + 1};
}

RationalSymbol RationalSymbol::times(const XiPolynomial& p) const {
    return {base_, poly_mul(num_, p, base_->phi.domain()), power_};
}

RationalSymbol RationalSymbol::scaled(std::complex<double> c) const { return {base_, poly_scale(num_, c), power_}; }

RationalSymbol operator+(const RationalSymbol& x, const RationalSymbol& y) {
    if (x.base_ != y.base_) throw PreconditionError("rational symbols over different bases");
    const Domain d = x.base_->phi.domain();
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    const int e = std::max(x.power_, y.power_);
    XiPolynomial nx = poly_mul(x.num_, poly_pow(x.base_->a, e - x.power_, d), d);
    XiPolynomial ny = poly_mul(y.num_, poly_pow(y.base_->a, e - y.power_, d), d);
    return {x.base_, poly_add(nx, ny, d), e};
}

RationalSymbol operator-(const RationalSymbol& x, const RationalSymbol& y) { return x + y.scaled(-1.0); }

bool RationalSymbol::equivalent(const RationalSymbol& other, double) const {
    return (*this - other).is_zero();
}

std::string RationalSymbol::to_string() const {
    if (num_.empty()) return "0";
    std::string out = "(";
    bool first = true;
    for (std::size_t k = num_.size(); k-- > 0;) {
        if (num_[k].is_zero()) continue;
        if (!first) out += " + ";
        first = false;
        out += "[" + num_[k].to_string() + "]";
        if (k > 0) out += " xi^" + std::to_string(k);
    }
    out += ")";
    if (power_ > 0) out += " / a^" + std::to_string(power_);
    return out;
}

RationalSymbol Parametrix::remainder() const {
    const Domain d = base->phi.domain();
    RationalSymbol q(base, {}, 0);
    for (const auto& t : terms) q = q + t;
    RationalSymbol r(base, {ComplexRadial(RadialFunction::constant(-1.0, d))}, 0);
    XiPolynomial da = base->a;
    RationalSymbol dq = q;
    double fact = 1.0;
    for (int alpha = 0; alpha <= order; ++alpha) {
        if (alpha > 0) {
            da = poly_dxi(da);
            dq = dq.D_s();
            fact *= alpha;
        }
        r = r + dq.times(da).scaled(1.0 / fact);
    }
    return r;
}

double Parametrix::xi_bound(double t) const {
    const auto& a = base->a;
    const double lead = std::abs(a.back().eval(t));
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < a.size(); ++k)
        if (!a[k].is_zero()) m = std::max(m, std::abs(a[k].eval(t)) / lead);
    return 1.0 + m;
}

Parametrix parametrix_1d(const DiffOp& op, int N) {
    if (N < 0) throw PreconditionError("negative parametrix length");
    const DiffOp lie = normal_form(op, OpForm::lie);
    const Domain d = op.domain();
    const int m = lie.order();
    if (m < 0) throw PreconditionError("parametrix of the zero operator");
    XiPolynomial a(m + 1, ComplexRadial(d));
    for (const auto& [k, c] : lie.terms()) {
        if (k.j != 0 || !c.is_radial()) throw PreconditionError("parametrix_1d needs a radial operator");
        cd unit = 1.0;
        for (int r = 0; r < k.i; ++r) unit *= cd(0.0, 1.0);
        a[k.i] = c.radial_part().scaled(unit);
    }
    // Ellipticity of the radial sector: the leading coefficient stays away
    // from zero and every lower coefficient stays bounded relative to it.
    const ComplexRadial& lead = a[m];
    for (double t : t_grid(d, 64))
        if (std::abs(lead.eval(t)) == 0.0) throw PreconditionError("parametrix_1d: operator is not elliptic");
    for (Endpoint end : {Endpoint::origin, Endpoint::far}) {
        auto exponent = [&](const ComplexRadial& f) {
            std::optional<Exponent> e;
            for (const RadialFunction* g : {&f.re, &f.im}) {
                if (g->is_zero()) continue;
                const auto l = g->leading(end);
                if (l && (!e || l->exponent < *e)) e = l->exponent;
            }
            return e;
        };
        const auto el = exponent(lead);
        if (!el) throw PreconditionError("parametrix_1d: leading coefficient degenerates at an endpoint");
        for (int k = 0; k <= m; ++k) {
            const auto ek = exponent(a[k]);
            if (ek && *ek < *el)
                throw PreconditionError("parametrix_1d: symbol denominator degenerates at an endpoint");
        }
    }
    Parametrix p;
    p.order = m;
    p.base = std::make_shared<const RationalSymbol::Base>(RationalSymbol::Base{a, op.calculus()->phi()});
    const ComplexRadial one(RadialFunction::constant(1.0, d));
    for (int k = 0; k < N; ++k) {
        if (k == 0) {
            p.terms.emplace_back(p.base, XiPolynomial{one}, 1);
            continue;
        }
        RationalSymbol sum(p.base, {}, 0);
        XiPolynomial da = a;
        double fact = 1.0;
        for (int alpha = 1; alpha <= std::min(k, m); ++alpha) {
            da = poly_dxi(da);
            fact *= alpha;
            RationalSymbol dq = p.terms[k - alpha];
            for (int r = 0; r < alpha; ++r) dq = dq.D_s();
            sum = sum + dq.times(da).scaled(1.0 / fact);
        }
        // multiply by -1/a
        p.terms.emplace_back(p.base, poly_scale(sum.numerator(), -1.0), sum.is_zero() ? 0 : sum.power() + 1);
    }
    return p;
}

}  // namespace degcalc
