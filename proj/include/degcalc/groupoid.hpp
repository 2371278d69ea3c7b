#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <variant>
#include <vector>

#include "degcalc/flows.hpp"

namespace degcalc {

/// Arrow (x, t) of G_phi = [0, inf] x| R: d = x, r = sigma_t(x).
struct GPhiElement {
    double x = 0.0;
    double t = 0.0;
};

/// Arrow of S = (S^1 x S^1) x G_phi: pair part (theta1, theta2) with
/// r = theta1, d = theta2.
struct SElement {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double x = 0.0;
    double t = 0.0;
};

/// Angle reduced to (-pi, pi].
double wrap_angle(double a);

/// G_phi and S over a fixed flow. Composability is checked to the flow's
/// tolerance (relative for points above 1); near misses are errors.
class GPhi {
public:
    explicit GPhi(const Flow& flow) : flow_(&flow) {}
    const Flow& flow() const noexcept { return *flow_; }

    double d(const GPhiElement& g) const { return g.x; }
    double r(const GPhiElement& g) const { return flow_->apply(g.t, g.x); }
    GPhiElement unit(double x) const { return {x, 0.0}; }
    GPhiElement inverse(const GPhiElement& g) const { return {r(g), -g.t}; }
    /// g h, defined when d(g) = r(h); returns (h.x, g.t + h.t).
    GPhiElement compose(const GPhiElement& g, const GPhiElement& h) const;

    SElement unit(double theta, double x) const { return {theta, theta, x, 0.0}; }
    SElement inverse(const SElement& g) const { return {g.theta2, g.theta1, flow_->apply(g.t, g.x), -g.t}; }
    /// Pair-groupoid law in the angles and G_phi law in (x, t).
    SElement compose(const SElement& g, const SElement& h) const;

    /// Distance between two points of [0, inf] as used for composability.
    double mismatch(double a, double b) const;

private:
    const Flow* flow_;
};

/// Element of H_psi at the 0-end: an interior pair (theta1, theta2) over
/// x > 0, or a tangent vector v at base angle theta over x = 0.
struct HPsiInterior {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double x = 0.0;
};
struct HPsiBoundary {
    double theta = 0.0;
    double v = 0.0;
};
using HPsiElement = std::variant<HPsiInterior, HPsiBoundary>;

/// Rescaled exponential chart at base angle theta1: s = 0 gives the tangent
/// w; s > 0 gives (theta1, theta1 + psi(s) w, s). Needs |psi(s) w| < pi.
HPsiElement hpsi_chart(double theta1, double w, double s, const Weight& psi);

HPsiElement hpsi_compose(const HPsiElement& g, const HPsiElement& h);

/// The R-action: interior points move by sigma_s, boundary tangents scale
/// by e^{-lambda s} with lambda = C_{psi,phi}(0).
HPsiElement hpsi_action(double s, const HPsiElement& g, const Flow& flow, const Weight& psi);

enum class BoundaryFace { zero, infinity };

/// Boundary defining functions: rho_0 = x/(1+x), rho_inf = 1/(1+x) on the
/// half-line; x and 1 - x on the unit interval.
double rho(BoundaryFace face, Domain domain, double x);

/// zeta = rho(d(g)) / rho(r(g)), extended continuously to the faces.
double zeta_cocycle(const GPhiElement& g, BoundaryFace face, const Flow& flow);
double zeta_cocycle(const SElement& g, BoundaryFace face, const Flow& flow);

/// Kernel samples on the chart of S over a fixed source point: rows are the
/// group coordinate s, columns the angle offset theta1 - theta2.
struct KernelFunction {
    double base_x = 0.0;
    std::vector<double> s;
    std::vector<double> angle;
    std::vector<std::complex<double>> values;  // row-major, s.size() x angle.size()

    static KernelFunction sample(double base_x, std::vector<double> s, std::vector<double> angle,
                                 const std::function<std::complex<double>(double, double)>& k);
    std::complex<double>& at(std::size_t i, std::size_t j) { return values[i * angle.size() + j]; }
    const std::complex<double>& at(std::size_t i, std::size_t j) const { return values[i * angle.size() + j]; }
};

/// Pointwise multiplication by zeta_0^t zeta_inf^{t'}. Throws
/// PreconditionError when the factor is not finite on the chart.
KernelFunction kernel_conjugate(const KernelFunction& k, double t, double t_prime, const Flow& flow);

/// CSV with columns s, angle_offset, value_re, value_im.
void write_kernel_csv(std::ostream& os, const KernelFunction& k);

}  // namespace degcalc
