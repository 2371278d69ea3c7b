#include "degcalc/groupoid.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

constexpr double kPi = std::numbers::pi;

double angle_gap(double a, double b) { return std::abs(wrap_angle(a - b)); }

// lim phi(x)/w at an end, w the local variable; zero unless phi vanishes
// to first order there (a = 1 at 0, phi ~ c x at infinity, phi ~ c (1 - x)
// at t = 1).
double linear_rate(const Weight& phi, Endpoint end) {
    const auto lead = phi.profile().leading(end);
    if (!lead) return 0.0;
    const bool half_far = end == Endpoint::far && phi.domain() == Domain::half_line;
    const Exponent critical = half_far ? Exponent(-1) : Exponent(1);
    return lead->exponent == critical ? lead->coeff : 0.0;
}

}  // namespace

double wrap_angle(double a) {
    double r = std::remainder(a, 2 * kPi);
    if (r <= -kPi) r += 2 * kPi;
    return r;
}

double GPhi::mismatch(double a, double b) const {
    if (a == b) return 0.0;
    if (std::isinf(a) || std::isinf(b)) return std::numeric_limits<double>::infinity();
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

GPhiElement GPhi::compose(const GPhiElement& g, const GPhiElement& h) const {
    const double m = mismatch(g.x, r(h));
    if (m > flow_->tolerance()) throw ComposabilityError("G_phi elements are not composable", m);
    return {h.x, g.t + h.t};
}

SElement GPhi::compose(const SElement& g, const SElement& h) const {
    const double ma = angle_gap(g.theta2, h.theta1);
    if (ma > flow_->tolerance()) throw ComposabilityError("pair factor of S is not composable", ma);
    const double m = mismatch(g.x, flow_->apply(h.t, h.x));
    if (m > flow_->tolerance()) throw ComposabilityError("G_phi factor of S is not composable", m);
    return {g.theta1, h.theta2, h.x, g.t + h.t};
}

HPsiElement hpsi_chart(double theta1, double w, double s, const Weight& psi) {
    if (s < 0.0) throw DomainError("H_psi chart needs s >= 0");
    if (s == 0.0) return HPsiBoundary{theta1, w};
    const double offset = psi(s) * w;
    if (!(std::abs(offset) < kPi)) throw DomainError("H_psi chart: |psi(s) w| must stay below pi");
    return HPsiInterior{theta1, wrap_angle(theta1 + offset), s};
}

HPsiElement hpsi_compose(const HPsiElement& g, const HPsiElement& h) {
    if (const auto* bg = std::get_if<HPsiBoundary>(&g)) {
        const auto* bh = std::get_if<HPsiBoundary>(&h);
        if (!bh) throw ComposabilityError("boundary and interior elements of H_psi do not compose", 1.0);
        const double m = angle_gap(bg->theta, bh->theta);
        if (m > 1e-12) throw ComposabilityError("tangent vectors at different base points", m);
        return HPsiBoundary{bg->theta, bg->v + bh->v};
    }
    const auto& ig = std::get<HPsiInterior>(g);
    const auto* ih = std::get_if<HPsiInterior>(&h);
    if (!ih) throw ComposabilityError("boundary and interior elements of H_psi do not compose", 1.0);
    const double mx = std::abs(ig.x - ih->x) / std::max(1.0, ig.x);
    if (mx > 1e-12) throw ComposabilityError("interior elements of H_psi over different points", mx);
    const double ma = angle_gap(ig.theta2, ih->theta1);
    if (ma > 1e-12) throw ComposabilityError("pair factor of H_psi is not composable", ma);
    return HPsiInterior{ig.theta1, ih->theta2, ig.x};
}

HPsiElement hpsi_action(double s, const HPsiElement& g, const Flow& flow, const Weight& psi) {
    if (const auto* b = std::get_if<HPsiBoundary>(&g)) {
        if (s == 0.0) return *b;
        const StructureFunction C = structure_function(psi, flow.weight());
        if (!C.at_origin.is_finite()) throw PreconditionError("C_{psi,phi}(0) is not finite");
        return HPsiBoundary{b->theta, std::exp(-C.at_origin.value * s) * b->v};
    }
    const auto& i = std::get<HPsiInterior>(g);
    return HPsiInterior{i.theta1, i.theta2, flow.apply(s, i.x)};
}

double rho(BoundaryFace face, Domain domain, double x) {
    if (domain == Domain::half_line) {
        if (std::isinf(x)) return face == BoundaryFace::zero ? 1.0 : 0.0;
        return face == BoundaryFace::zero ? x / (1.0 + x) : 1.0 / (1.0 + x);
    }
    return face == BoundaryFace::zero ? x : 1.0 - x;
}

double zeta_cocycle(const GPhiElement& g, BoundaryFace face, const Flow& flow) {
    if (g.t == 0.0) return 1.0;
    const bool at_zero = g.x == 0.0;
    const bool at_far = g.x == flow.far_point();
    if (face == BoundaryFace::zero) {
        if (at_zero) return std::exp(-linear_rate(flow.weight(), Endpoint::origin) * g.t);
        if (at_far) return 1.0;
    } else {
        if (at_far) return std::exp(linear_rate(flow.weight(), Endpoint::far) * g.t);
        if (at_zero) return 1.0;
    }
    const double y = flow.apply(g.t, g.x);
    if (face == BoundaryFace::infinity && flow.domain() == Domain::half_line) return (1.0 + y) / (1.0 + g.x);
    return rho(face, flow.domain(), g.x) / rho(face, flow.domain(), y);
}

double zeta_cocycle(const SElement& g, BoundaryFace face, const Flow& flow) {
    return zeta_cocycle(GPhiElement{g.x, g.t}, face, flow);
}

KernelFunction KernelFunction::sample(double base_x, std::vector<double> s, std::vector<double> angle,
                                      const std::function<std::complex<double>(double, double)>& k) {
    KernelFunction out;
    out.base_x = base_x;
    out.s = std::move(s);
    out.angle = std::move(angle);
    out.values.reserve(out.s.size() * out.angle.size());
    for (double si : out.s)
        for (double aj : out.angle) out.values.push_back(k(si, aj));
    return out;
}

KernelFunction kernel_conjugate(const KernelFunction& k, double t, double t_prime, const Flow& flow) {
    KernelFunction out = k;
    for (std::size_t i = 0; i < k.s.size(); ++i) {
        const GPhiElement g{k.base_x, k.s[i]};
        double factor = 1.0;
        if (t != 0.0) factor *= std::pow(zeta_cocycle(g, BoundaryFace::zero, flow), t);
        if (t_prime != 0.0) factor *= std::pow(zeta_cocycle(g, BoundaryFace::infinity, flow), t_prime);
        if (!std::isfinite(factor))
            throw PreconditionError("conjugation factor is unbounded on the kernel chart");
        for (std::size_t j = 0; j < k.angle.size(); ++j) out.at(i, j) *= factor;
    }
    return out;
}

void write_kernel_csv(std::ostream& os, const KernelFunction& k) {
    os << "s,angle_offset,value_re,value_im\n";
    char buf[160];
    for (std::size_t i = 0; i < k.s.size(); ++i)
        for (std::size_t j = 0; j < k.angle.size(); ++j) {
            const auto v = k.at(i, j);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", k.s[i], k.angle[j], v.real(), v.imag());
            os << buf;
        }
}

}  // namespace degcalc
