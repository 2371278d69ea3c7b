#include "degcalc/cylinder.hpp"

#include <algorithm>
#include <cmath>

#include "degcalc/error.hpp"

namespace degcalc {

ComplexRadial ComplexRadial::scaled(std::complex<double> c) const {
    return {re.scaled(c.real()) - im.scaled(c.imag()), re.scaled(c.imag()) + im.scaled(c.real())};
}

bool ComplexRadial::equivalent(const ComplexRadial& g, double rel_tol) const {
    return re.equivalent(g.re, rel_tol) && im.equivalent(g.im, rel_tol);
}

std::string ComplexRadial::to_string() const {
    if (im.is_zero()) return re.to_string();
    if (re.is_zero()) return "i*(" + im.to_string() + ")";
    return "(" + re.to_string() + ") + i*(" + im.to_string() + ")";
}

CylinderFunction CylinderFunction::radial(RadialFunction f) {
    CylinderFunction c(f.domain());
    c.add_mode(0, ComplexRadial(std::move(f)));
    return c;
}

CylinderFunction CylinderFunction::mode(int m, ComplexRadial f) {
    CylinderFunction c(f.domain());
    c.add_mode(m, f);
    return c;
}

CylinderFunction CylinderFunction::constant(std::complex<double> v, Domain domain) {
    CylinderFunction c(domain);
    c.add_mode(0, {RadialFunction::constant(v.real(), domain), RadialFunction::constant(v.imag(), domain)});
    return c;
}

void CylinderFunction::add_mode(int m, const ComplexRadial& f) {
    if (f.domain() != domain_) throw PreconditionError("cylinder functions on different radial domains");
    auto it = modes_.find(m);
    if (it == modes_.end()) {
        if (!f.is_zero()) modes_.emplace(m, f);
        return;
    }
    it->second += f;
    if (it->second.is_zero()) modes_.erase(it);
}

bool CylinderFunction::is_real(double rel_tol) const {
    for (const auto& [m, f] : modes_) {
        auto it = modes_.find(-m);
        const ComplexRadial other = it == modes_.end() ? ComplexRadial(domain_) : it->second;
        if (!f.conj().equivalent(other, rel_tol)) return false;
    }
    return true;
}

bool CylinderFunction::is_radial() const noexcept {
    return modes_.empty() || (modes_.size() == 1 && modes_.begin()->first == 0);
}

ComplexRadial CylinderFunction::radial_part() const {
    auto it = modes_.find(0);
    return it == modes_.end() ? ComplexRadial(domain_) : it->second;
}

double CylinderFunction::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& [k, f] : modes_) m = std::max(m, f.max_abs_coeff());
    return m;
}

CylinderFunction CylinderFunction::scaled(std::complex<double> c) const {
    CylinderFunction out(domain_);
    if (c == 0.0) return out;
    for (const auto& [m, f] : modes_) out.add_mode(m, f.scaled(c));
    return out;
}

CylinderFunction CylinderFunction::times(const RadialFunction& g) const {
    CylinderFunction out(domain_);
    for (const auto& [m, f] : modes_) out.add_mode(m, g * f);
    return out;
}

CylinderFunction CylinderFunction::d_t(int k) const {
    CylinderFunction out(domain_);
    for (const auto& [m, f] : modes_) {
        ComplexRadial g = f;
        for (int i = 0; i < k; ++i) g = g.derivative();
        out.add_mode(m, g);
    }
    return out;
}

CylinderFunction CylinderFunction::d_theta(int k) const {
    CylinderFunction out(domain_);
    for (const auto& [m, f] : modes_) {
        if (m == 0 && k > 0) continue;
        std::complex<double> factor = 1.0;
        for (int i = 0; i < k; ++i) factor *= std::complex<double>(0.0, m);
        out.add_mode(m, f.scaled(factor));
    }
    return out;
}

CylinderFunction CylinderFunction::canonical() const {
    CylinderFunction out(domain_);
    for (const auto& [m, f] : modes_) out.add_mode(m, f.canonical());
    return out;
}

bool CylinderFunction::equivalent(const CylinderFunction& g, double rel_tol) const {
    if (domain_ != g.domain_) return false;
    const ComplexRadial zero(domain_);
    for (const auto& [m, f] : modes_) {
        auto it = g.modes_.find(m);
        if (!f.equivalent(it == g.modes_.end() ? zero : it->second, rel_tol)) return false;
    }
    for (const auto& [m, f] : g.modes_)
        if (!modes_.contains(m) && !f.equivalent(zero, rel_tol)) return false;
    return true;
}

std::complex<double> CylinderFunction::eval(double t, double theta) const {
    std::complex<double> sum = 0.0;
    for (const auto& [m, f] : modes_) sum += f.eval(t) * std::polar(1.0, m * theta);
    return sum;
}

std::string CylinderFunction::to_string() const {
    if (modes_.empty()) return "0";
    std::string out;
    for (const auto& [m, f] : modes_) {
        if (!out.empty()) out += " + ";
        out += m == 0 ? "[" + f.to_string() + "]" : "[" + f.to_string() + "]*e^{" + std::to_string(m) + "i theta}";
    }
    return out;
}

CylinderFunction operator+(const CylinderFunction& f, const CylinderFunction& g) {
    CylinderFunction out = f;
    for (const auto& [m, h] : g.modes_) out.add_mode(m, h);
    return out;
}

CylinderFunction operator-(const CylinderFunction& f, const CylinderFunction& g) { return f + g.scaled(-1.0); }

CylinderFunction operator*(const CylinderFunction& f, const CylinderFunction& g) {
    if (f.domain_ != g.domain_) throw PreconditionError("cylinder functions on different radial domains");
    CylinderFunction out(f.domain_);
    for (const auto& [m, a] : f.modes_)
        for (const auto& [n, b] : g.modes_) out.add_mode(m + n, a * b);
    return out;
}

}  // namespace degcalc
