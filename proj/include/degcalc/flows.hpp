#pragma once

#include <utility>
#include <vector>

#include "degcalc/weights.hpp"

namespace degcalc {

/// Divergence of the integral of dt/phi at each end.
struct Completeness {
    bool at_origin = false;
    bool at_far = false;
    bool complete() const noexcept { return at_origin && at_far; }
};

/// Decided from the dominant endpoint exponents: divergence at 0 iff a >= 1;
/// at infinity iff phi grows no faster than t (a' >= -1); at t = 1 of the
/// unit interval iff a' >= 1.
Completeness completeness(const Weight& phi);
bool completeness_check(const Weight& phi);

enum class FlowMode {
    closed_form_b,      ///< phi = c t: sigma_s(x) = e^{cs} x
    closed_form_power,  ///< phi = c t^a, a != 1
    closed_form_tanh,   ///< phi = c t (1 - t) on the unit interval
    numeric,
};

const char* to_string(FlowMode m);

struct FlowOptions {
    /// Accept weights whose integral converges at an end. The flow is then
    /// only defined while F(x) + s stays inside the range of F.
    bool allow_incomplete = false;
    /// Use quadrature even when a closed form applies.
    bool force_numeric = false;
};

/// The one-parameter group sigma_s = F^{-1}(F(x) + s) of X = phi d/dt, with
/// F(x) the integral of dt/phi from gamma to x (gamma = 1 on the half-line,
/// 1/2 on the unit interval).
///
/// Numeric mode integrates in the chart variable v (t = e^v on the
/// half-line, t = 1/(1 + e^{-v}) on the unit interval) and keeps a table of
/// cumulative F at equispaced v nodes covering |F| <= 40. A built Flow is
/// immutable; queries past the table are answered by integrating on from
/// its last node without touching the table.
class Flow {
public:
    explicit Flow(Weight phi, FlowOptions options = {});

    const Weight& weight() const noexcept { return phi_; }
    Domain domain() const noexcept { return phi_.domain(); }
    FlowMode mode() const noexcept { return mode_; }
    /// Tolerance of the group law: 1e-10 for closed forms, 1e-8 otherwise.
    double tolerance() const noexcept;

    /// F at an interior point.
    double F(double x) const;
    double F_inverse(double y) const;
    /// Limits of F at the two ends (+-inf for a complete weight).
    std::pair<double, double> F_range() const noexcept { return {F_lo_, F_hi_}; }

    /// sigma_s(x); endpoints are fixed.
    double apply(double s, double x) const;

    /// d sigma_s / dx, from F'(x) = 1/phi(x).
    double derivative(double s, double x) const;

    bool is_endpoint(double x) const noexcept;
    double far_point() const noexcept;

private:
    double chart(double x) const;
    double unchart(double v) const;
    /// dF/dv at chart coordinate v.
    double integrand(double v) const;
    double integrate(double v0, double v1) const;
    double F_numeric(double x) const;
    double F_inverse_numeric(double y) const;
    void build_table();

    Weight phi_;
    FlowOptions options_;
    FlowMode mode_ = FlowMode::numeric;
    double c_ = 1.0;  // coefficient of a single-term weight
    double a_ = 1.0;  // exponent of a pure-power weight
    double F_lo_ = 0.0;
    double F_hi_ = 0.0;

    // Table nodes v_k = v_lo_ + k h_ with cumulative F_k (monotone).
    double h_ = 0.25;
    double v_lo_ = 0.0;
    std::vector<double> table_F_;
};

/// A flow on [alpha, beta], carried to the unit interval by u = (t - alpha)/(beta - alpha).
/// `phi_in_u` is phi written as a function of u; the unit-interval weight is
/// phi_in_u / (beta - alpha).
class IntervalFlow {
public:
    IntervalFlow(const RadialFunction& phi_in_u, double alpha, double beta, FlowOptions options = {});

    const Flow& unit_flow() const noexcept { return flow_; }
    double F(double t) const { return flow_.F(to_unit(t)); }
    double F_inverse(double y) const { return from_unit(flow_.F_inverse(y)); }
    double apply(double s, double t) const { return from_unit(flow_.apply(s, to_unit(t))); }

private:
    double to_unit(double t) const { return (t - alpha_) / (beta_ - alpha_); }
    double from_unit(double u) const { return alpha_ + (beta_ - alpha_) * u; }

    double alpha_;
    double beta_;
    Flow flow_;
};

/// Both evaluations of lim_{t -> 0} psi(t) / psi(sigma_s(t)).
struct ScalingLimit {
    double closed_form = 1.0;  ///< e^{-lambda s}, lambda = C_{psi,phi}(0)
    double numeric = 1.0;      ///< extrapolated along t = 10^{-k}, k = 4..10
    double lambda = 0.0;
};

/// Throws PropertyViolation when the two evaluations differ by more than 1e-6.
ScalingLimit flow_scaling_limit(const Flow& flow, const Weight& psi, double s);

/// Expansion of a closed-form power flow at 0: sigma_s(x) = sum c_k x^{e_k}
/// with e_k = 1 + k(a - 1), the first `terms` entries.
std::vector<LocalTerm> flow_series_at_origin(const Flow& flow, double s, int terms);

/// The m-th one-sided derivative at 0 of a function given by its expansion
/// at 0 (finite iff every exponent below m with a nonzero coefficient is a
/// nonnegative integer). Needs the expansion to reach past order m.
EndpointValue origin_derivative(const std::vector<LocalTerm>& series, int m);

/// Samples sigma_s(x) for CSV output, x log-spaced on (x_min, x_max).
struct FlowSample {
    double s;
    double x;
    double sigma;
};
std::vector<FlowSample> flow_samples(const Flow& flow, const std::vector<double>& s_values, double x_min,
                                     double x_max, int count);

}  // namespace degcalc
