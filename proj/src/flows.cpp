#include "degcalc/flows.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTableSpan = 40.0;
// Largest |v| for which the chart point is representable.
constexpr double kVMax = 700.0;
constexpr double kVMaxUnitFar = 36.0;

double logistic(double v) {
    if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

}  // namespace

Completeness completeness(const Weight& phi) {
    Completeness c;
    c.at_origin = !(phi.a() < Exponent(1));
    c.at_far = phi.domain() == Domain::half_line ? !(phi.a_prime() < Exponent(-1)) : !(phi.a_prime() < Exponent(1));
    return c;
}

bool completeness_check(const Weight& phi) { return completeness(phi).complete(); }

const char* to_string(FlowMode m) {
    switch (m) {
        case FlowMode::closed_form_b: return "closed_form_b";
        case FlowMode::closed_form_power: return "closed_form_power";
        case FlowMode::closed_form_tanh: return "closed_form_tanh";
        case FlowMode::numeric: return "numeric";
    }
    return "?";
}

Flow::Flow(Weight phi, FlowOptions options) : phi_(std::move(phi)), options_(options) {
    const Completeness comp = completeness(phi_);
    if (!comp.complete() && !options_.allow_incomplete)
        throw PreconditionError("weight is not complete: " + phi_.profile().to_string());

    const auto& prof = phi_.profile();
    if (!options_.force_numeric && prof.is_single_term()) {
        const Term& t = prof.terms().front();
        c_ = t.coeff;
        if (t.q.is_zero()) {
            a_ = t.p.value();
            mode_ = t.p == Exponent(1) ? FlowMode::closed_form_b : FlowMode::closed_form_power;
        } else if (domain() == Domain::unit_interval && t.p == Exponent(1) && t.q == Exponent(1)) {
            mode_ = FlowMode::closed_form_tanh;
        }
    }

    if (mode_ == FlowMode::numeric) {
        build_table();
        return;
    }
    // Range of F for the closed forms.
    F_lo_ = comp.at_origin ? -kInf : F(std::numeric_limits<double>::min());
    if (comp.at_far) {
        F_hi_ = kInf;
    } else if (mode_ == FlowMode::closed_form_power && domain() == Domain::half_line) {
        const double G_gamma = 1.0 / ((1.0 - a_) * c_);
        F_hi_ = -G_gamma;
    } else {
        // Unit interval, phi = c t^a: G(1) - G(1/2).
        const double G = [&](double x) {
            return mode_ == FlowMode::closed_form_b ? std::log(x) / c_ : std::pow(x, 1.0 - a_) / ((1.0 - a_) * c_);
        }(1.0);
        const double G_gamma = mode_ == FlowMode::closed_form_b ? std::log(0.5) / c_
                                                                : std::pow(0.5, 1.0 - a_) / ((1.0 - a_) * c_);
        F_hi_ = G - G_gamma;
    }
}

double Flow::tolerance() const noexcept { return mode_ == FlowMode::numeric ? 1e-8 : 1e-10; }

bool Flow::is_endpoint(double x) const noexcept { return x == 0.0 || x == far_point(); }

double Flow::far_point() const noexcept { return domain() == Domain::half_line ? kInf : 1.0; }

double Flow::chart(double x) const {
    if (domain() == Domain::half_line) return std::log(x);
    return std::log(x) - std::log1p(-x);
}

double Flow::unchart(double v) const { return domain() == Domain::half_line ? std::exp(v) : logistic(v); }

double Flow::integrand(double v) const {
    if (domain() == Domain::half_line) {
        const double t = std::exp(v);
        if (!(t > 0.0) || !std::isfinite(t)) return 0.0;
        return t / phi_.profile().eval(t);
    }
    const double t = logistic(v);
    const double u = logistic(-v);
    if (!(t > 0.0) || !(u > 0.0)) return 0.0;
    return t * u / phi_.profile().eval_split(t, u);
}

double Flow::integrate(double v0, double v1) const {
    if (v0 == v1) return 0.0;
    auto g = [this](double v) { return integrand(v); };
    // The integrand is analytic in v and varies at most exponentially, so a
    // fixed 31-point rule per panel of width <= h is exact to rounding.
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(v1 - v0) / h_)));
    const double step = (v1 - v0) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = v0 + i * step;
        const double b = i + 1 == panels ? v1 : a + step;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 0, 0.0);
    }
    return total;
}

void Flow::build_table() {
    const Completeness comp = completeness(phi_);
    const double v_floor = -kVMax;
    const double v_ceil = domain() == Domain::half_line ? kVMax : kVMaxUnitFar;

    if (comp.at_origin) {
        F_lo_ = -kInf;
    } else {
        boost::math::quadrature::exp_sinh<double> es;
        F_lo_ = -es.integrate([this](double w) { return integrand(-w); }, 0.0, kInf, 1e-13);
    }
    if (comp.at_far) {
        F_hi_ = kInf;
    } else {
        boost::math::quadrature::exp_sinh<double> es;
        F_hi_ = es.integrate([this](double v) { return integrand(v); }, 0.0, kInf, 1e-13);
    }

    auto settled = [](double F, double limit) {
        return std::isfinite(limit) && std::abs(F - limit) <= 1e-14 * std::max(1.0, std::abs(limit));
    };
    std::vector<double> down{0.0};
    for (double v = 0.0; v > v_floor;) {
        const double F = down.back() - integrate(v - h_, v);
        down.push_back(F);
        v -= h_;
        if (F <= -kTableSpan || settled(F, F_lo_)) break;
    }
    std::vector<double> up{0.0};
    for (double v = 0.0; v < v_ceil;) {
        const double F = up.back() + integrate(v, v + h_);
        up.push_back(F);
        v += h_;
        if (F >= kTableSpan || settled(F, F_hi_)) break;
    }
    v_lo_ = -h_ * static_cast<double>(down.size() - 1);
    table_F_.assign(down.rbegin(), down.rend());
    table_F_.insert(table_F_.end(), up.begin() + 1, up.end());
}

double Flow::F(double x) const {
    if (!(x > 0.0) || !(x < far_point()))
        throw DomainError("F is defined at interior points only (x = " + std::to_string(x) + ")");
    const double gamma = domain() == Domain::half_line ? 1.0 : 0.5;
    switch (mode_) {
        case FlowMode::closed_form_b: return std::log(x / gamma) / c_;
        case FlowMode::closed_form_power:
            return (std::pow(x, 1.0 - a_) - std::pow(gamma, 1.0 - a_)) / ((1.0 - a_) * c_);
        case FlowMode::closed_form_tanh: return chart(x) / c_;
        case FlowMode::numeric: return F_numeric(x);
    }
    return 0.0;
}

double Flow::F_numeric(double x) const {
    const double v = chart(x);
    const double v_hi = v_lo_ + h_ * static_cast<double>(table_F_.size() - 1);
    if (v <= v_lo_) return table_F_.front() - integrate(v, v_lo_);
    if (v >= v_hi) return table_F_.back() + integrate(v_hi, v);
    auto k = static_cast<std::size_t>((v - v_lo_) / h_);
    k = std::min(k, table_F_.size() - 2);
    return table_F_[k] + integrate(v_lo_ + h_ * static_cast<double>(k), v);
}

double Flow::F_inverse(double y) const {
    if (!std::isfinite(y)) throw DomainError("F_inverse of a non-finite value");
    if (!(y > F_lo_) || !(y < F_hi_))
        throw DomainError("target " + std::to_string(y) + " lies outside the range of F; the weight is not complete");
    const double gamma = domain() == Domain::half_line ? 1.0 : 0.5;
    switch (mode_) {
        case FlowMode::closed_form_b: return gamma * std::exp(c_ * y);
        case FlowMode::closed_form_power: {
            const double base = (1.0 - a_) * c_ * y + std::pow(gamma, 1.0 - a_);
            return std::pow(base, 1.0 / (1.0 - a_));
        }
        case FlowMode::closed_form_tanh: return logistic(c_ * y);
        case FlowMode::numeric: return F_inverse_numeric(y);
    }
    return 0.0;
}

double Flow::F_inverse_numeric(double y) const {
    // Bracket [va, vb] with F(va) <= y <= F(vb).
    double va = 0.0;
    double Fa = 0.0;
    double vb = 0.0;
    if (y < table_F_.front()) {
        // Continue downward past the table without storing.
        va = v_lo_;
        Fa = table_F_.front();
        while (Fa > y) {
            if (va <= -kVMax) return 0.0;
            vb = va;
            va -= h_;
            Fa -= integrate(va, vb);
        }
        vb = va + h_;
    } else if (y > table_F_.back()) {
        const double v_cap = domain() == Domain::half_line ? kVMax : kVMaxUnitFar;
        vb = v_lo_ + h_ * static_cast<double>(table_F_.size() - 1);
        double Fb = table_F_.back();
        while (Fb < y) {
            if (vb >= v_cap) return far_point();
            va = vb;
            Fa = Fb;
            vb += h_;
            Fb += integrate(va, vb);
        }
    } else {
        auto it = std::upper_bound(table_F_.begin(), table_F_.end(), y);
        std::size_t k = static_cast<std::size_t>(it - table_F_.begin());
        k = std::clamp<std::size_t>(k, 1, table_F_.size() - 1) - 1;
        va = v_lo_ + h_ * static_cast<double>(k);
        Fa = table_F_[k];
        vb = va + h_;
    }

    // Safeguarded Newton on Phi(v) = Fa + int_{va}^{v} g - y, Phi' = g.
    const double anchor = va;
    double lo = va;
    double hi = vb;
    double v = 0.5 * (va + vb);
    for (int it = 0; it < 100; ++it) {
        const double phi_v = Fa + integrate(anchor, v) - y;
        if (std::abs(phi_v) <= 1e-15 * std::max(1.0, std::abs(y))) return unchart(v);
        if (phi_v > 0)
            hi = v;
        else
            lo = v;
        const double g = integrand(v);
        double next = g > 0 ? v - phi_v / g : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double dv = std::abs(next - v);
        v = next;
        if (dv <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v))) return unchart(v);
    }
    throw ConvergenceError("flow inversion did not converge for F = " + std::to_string(y), 100);
}

double Flow::apply(double s, double x) const {
    if (x < 0.0 || x > far_point() || std::isnan(x)) throw DomainError("point outside the domain of the flow");
    if (is_endpoint(x) || s == 0.0) return x;
    switch (mode_) {
        case FlowMode::closed_form_b: {
            const double r = std::exp(c_ * s) * x;
            if (!(r < far_point())) throw DomainError("flow leaves the domain");
            return r;
        }
        case FlowMode::closed_form_power: {
            const double bracket = 1.0 - (a_ - 1.0) * c_ * s * std::pow(x, a_ - 1.0);
            if (!(bracket > 0.0)) throw DomainError("flow leaves the domain in finite time");
            const double r = std::pow(bracket, 1.0 / (1.0 - a_)) * x;
            if (!(r < far_point())) throw DomainError("flow leaves the domain");
            return r;
        }
        case FlowMode::closed_form_tanh: return logistic(chart(x) + c_ * s);
        case FlowMode::numeric: return F_inverse(F(x) + s);
    }
    return x;
}

double Flow::derivative(double s, double x) const {
    if (is_endpoint(x)) throw DomainError("derivative of the flow at an endpoint");
    return phi_(apply(s, x)) / phi_(x);
}

IntervalFlow::IntervalFlow(const RadialFunction& phi_in_u, double alpha, double beta, FlowOptions options)
    : alpha_(alpha),
      beta_(beta),
      flow_([&] {
          if (!(beta > alpha)) throw PreconditionError("interval needs alpha < beta");
          if (phi_in_u.domain() != Domain::unit_interval)
              throw PreconditionError("interval weight must be written on the unit interval");
          return Weight::make(phi_in_u.scaled(1.0 / (beta - alpha)));
      }(), options) {}

ScalingLimit flow_scaling_limit(const Flow& flow, const Weight& psi, double s) {
    ScalingLimit out;
    const StructureFunction C = structure_function(psi, flow.weight());
    if (!C.at_origin.is_finite() || std::isnan(C.at_origin.value))
        throw PreconditionError("C_{psi,phi} has no finite value at 0");
    out.lambda = C.at_origin.value;
    out.closed_form = std::exp(-out.lambda * s);

    std::vector<double> r;
    for (int k = 4; k <= 10; ++k) {
        const double t = std::pow(10.0, -k);
        r.push_back(psi(t) / psi(flow.apply(s, t)));
    }
    const double r0 = r[r.size() - 3];
    const double r1 = r[r.size() - 2];
    const double r2 = r.back();
    const double den = (r2 - r1) - (r1 - r0);
    out.numeric = r2;
    if (std::abs(den) > 1e-300) {
        const double aitken = r2 - (r2 - r1) * (r2 - r1) / den;
        if (std::isfinite(aitken)) out.numeric = aitken;
    }
    if (std::abs(out.numeric - out.closed_form) > 1e-6)
        throw PropertyViolation("boundary scaling limit " + std::to_string(out.numeric) +
                                " disagrees with e^{-lambda s} = " + std::to_string(out.closed_form));
    return out;
}

std::vector<LocalTerm> flow_series_at_origin(const Flow& flow, double s, int terms) {
    if (flow.mode() != FlowMode::closed_form_b && flow.mode() != FlowMode::closed_form_power)
        throw PreconditionError("origin series needs a pure-power flow");
    const Term& t = flow.weight().profile().terms().front();
    const double c = t.coeff;
    if (flow.mode() == FlowMode::closed_form_b) return {{Exponent(1), std::exp(c * s)}};
    // x (1 - (a-1) c s x^{a-1})^{-1/(a-1)}
    const Exponent am1 = t.p - Exponent(1);
    const Exponent m = Exponent(-1) / am1;
    const double z = -am1.value() * c * s;
    std::vector<LocalTerm> out;
    double zk = 1.0;
    for (int k = 0; k < terms; ++k) {
        out.push_back({Exponent(1) + am1 * Exponent(k), binomial(m, k) * zk});
        zk *= z;
    }
    return out;
}

EndpointValue origin_derivative(const std::vector<LocalTerm>& series, int m) {
    double value = 0.0;
    for (const LocalTerm& lt : series) {
        if (lt.coeff == 0.0) continue;
        const Exponent& e = lt.exponent;
        if (e > Exponent(m)) continue;
        if (e == Exponent(m)) {
            value += std::tgamma(m + 1.0) * lt.coeff;
            continue;
        }
        if (e.is_integer() && e.sign() >= 0) continue;
        // x^e with e < m not a nonnegative integer: the m-th derivative
        // behaves like e(e-1)...(e-m+1) x^{e-m} and blows up.
        double falling = lt.coeff;
        for (int i = 0; i < m; ++i) falling *= e.value() - i;
        return falling > 0 ? EndpointValue{EndpointValue::Kind::plus_infinity, kInf}
                           : EndpointValue{EndpointValue::Kind::minus_infinity, -kInf};
    }
    return EndpointValue::finite(value);
}

std::vector<FlowSample> flow_samples(const Flow& flow, const std::vector<double>& s_values, double x_min,
                                     double x_max, int count) {
    if (!(x_min > 0.0) || !(x_max > x_min) || count < 1) throw PreconditionError("bad flow sample range");
    std::vector<FlowSample> out;
    for (double s : s_values) {
        for (int i = 0; i < count; ++i) {
            const double x = count == 1 ? x_min : x_min * std::pow(x_max / x_min, static_cast<double>(i) / (count - 1));
            out.push_back({s, x, flow.apply(s, x)});
        }
    }
    return out;
}

}  // namespace degcalc
