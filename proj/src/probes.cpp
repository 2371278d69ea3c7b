#include "degcalc/probes.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "degcalc/error.hpp"
#include "degcalc/flows.hpp"
#include "degcalc/groupoid.hpp"
#include "degcalc/symbol.hpp"
#include "tridiag_lu.hpp"

namespace degcalc {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

/// C^inf step: 0 for x <= 1, 1 for x >= 2.
double smooth_step(double x) {
    auto h = [](double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; };
    const double a = h(x - 1.0), b = h(2.0 - x);
    return a + b == 0.0 ? (x >= 2.0 ? 1.0 : 0.0) : a / (a + b);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

ParametrixReport parametrix_residual(const SchrodingerProblem& prob, const ParametrixProbeOptions& opt) {
    prob.validate();
    if (opt.points < 16 || opt.points % 2 != 0) throw PreconditionError("parametrix grid needs an even point count >= 16");
    if (!(opt.length > 0)) throw PreconditionError("parametrix grid length must be positive");
    const DiffOp P = radial_sector_operator(prob, opt.prefactor_scale);
    parametrix_1d(P, 0);  // rejects a degenerate leading coefficient
    const Flow flow(P.calculus()->phi());

    const int M = opt.points;
    const double L = opt.length;
    std::vector<double> s(M), t(M), xi(M);
    for (int j = 0; j < M; ++j) {
        s[j] = -L / 2 + L * j / M;
        t[j] = flow.F_inverse(s[j]);
        xi[j] = 2 * std::numbers::pi * (j < M / 2 ? j : j - M) / L;
    }
    Eigen::MatrixXcd E(M, M);
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) E(j, k) = std::exp(I * xi[k] * s[j]);
    const Eigen::MatrixXcd Einv = E.adjoint() / static_cast<double>(M);
    Eigen::VectorXcd ixi(M);
    for (int k = 0; k < M; ++k) ixi[k] = I * xi[k];
    const Eigen::MatrixXcd D = E * ixi.asDiagonal() * Einv;

    // P = sum_m c_m(t) d_s^m
    Eigen::MatrixXcd PD = Eigen::MatrixXcd::Zero(M, M);
    Eigen::MatrixXcd Dm = Eigen::MatrixXcd::Identity(M, M);
    for (int m = 0; m <= P.order(); ++m) {
        if (m > 0) Dm = D * Dm;
        const ComplexRadial c = P.coeff({m, 0}).radial_part();
        Eigen::VectorXcd cv(M);
        for (int j = 0; j < M; ++j) cv[j] = c.eval(t[j]);
        PD += cv.asDiagonal() * Dm;
    }

    Eigen::MatrixXd taper(M, M);
    for (int j = 0; j < M; ++j)
        for (int l = 0; l < M; ++l) taper(j, l) = 1.0 - smooth_step(2.0 * std::abs(s[j] - s[l]) / opt.conjugation_band);

    ParametrixReport rep;
    rep.t = (prob.gamma_tilde() * opt.prefactor_scale).value();
    rep.t_prime = (prob.gamma_prime_tilde() * opt.prefactor_scale).value();

    for (int N : opt.orders) {
        const Parametrix pm = parametrix_1d(P, N);
        Eigen::MatrixXcd Qtab = Eigen::MatrixXcd::Zero(M, M);
        for (int j = 0; j < M; ++j) {
            const double B = pm.xi_bound(t[j]);
            for (int k = 0; k < M; ++k) {
                const double chi = smooth_step(std::abs(xi[k]) / B);
                if (chi == 0.0) continue;
                cd q = 0;
                for (const auto& term : pm.terms) q += term.eval(t[j], xi[k]);
                Qtab(j, k) = chi * q;
            }
        }
        const Eigen::MatrixXcd Q = Qtab.cwiseProduct(E) * Einv;
        const Eigen::MatrixXcd R = PD * Q - Eigen::MatrixXcd::Identity(M, M);

        // Kernel of R tapered to |s| < band, conjugated column by column.
        Eigen::MatrixXcd Rc = Eigen::MatrixXcd::Zero(M, M);
        for (int l = 0; l < M; ++l) {
            KernelFunction k;
            k.base_x = t[l];
            k.angle = {0.0};
            std::vector<int> rows;
            for (int j = 0; j < M; ++j)
                if (taper(j, l) > 0.0) {
                    rows.push_back(j);
                    k.s.push_back(s[j] - s[l]);
                    k.values.push_back(taper(j, l) * R(j, l));
                }
            const KernelFunction kc = kernel_conjugate(k, rep.t, rep.t_prime, flow);
            for (std::size_t r = 0; r < rows.size(); ++r) Rc(rows[r], l) = kc.values[r];
        }

        for (double K : opt.cutoffs) {
            ParametrixRow row{N, K, 0.0, 0.0};
            for (double c : opt.centers) {
                Eigen::VectorXcd f(M);
                for (int j = 0; j < M; ++j) f[j] = std::exp(-0.5 * (s[j] - c) * (s[j] - c)) * std::exp(I * K * s[j]);
                row.residual_ratio = std::max(row.residual_ratio, (R * f).norm() / f.norm());
                row.conjugated_ratio = std::max(row.conjugated_ratio, (Rc * f).norm() / f.norm());
            }
            rep.rows.push_back(row);
        }
    }
    return rep;
}

std::string ParametrixReport::to_string() const {
    std::ostringstream os;
    os << "conjugation exponents t = " << fmt(t) << ", t' = " << fmt(t_prime) << "\n";
    os << "N K residual_ratio conjugated_ratio\n";
    for (const auto& r : rows)
        os << r.N << " " << fmt(r.K) << " " << fmt(r.residual_ratio) << " " << fmt(r.conjugated_ratio) << "\n";
    return os.str();
}

void write_parametrix_csv(std::ostream& os, const ParametrixReport& rep) {
    os << "N,K,residual_ratio\n";
    char buf[128];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.N, r.K, r.residual_ratio);
        os << buf;
    }
}

namespace {

struct ScaledSystem {
    std::vector<double> d, e;
};

ScaledSystem scaled_system(const SchrodingerProblem& prob, const GeometricGrid& grid, const Exponent& scale) {
    const TridiagonalSystem sys = assemble(prob, grid);
    ScaledSystem out{sys.diag, sys.off};
    if (scale.is_zero()) return out;
    const RadialFunction pref = diff_s_prefactor(prob, scale);
    std::vector<double> D(sys.size());
    for (std::size_t i = 0; i < D.size(); ++i) D[i] = pref.eval(sys.rho[i]);
    for (std::size_t i = 0; i < D.size(); ++i) {
        out.d[i] *= D[i];
        if (i + 1 < D.size()) out.e[i] *= std::sqrt(D[i] * D[i + 1]);
    }
    return out;
}

void check_off_spectrum(const ScaledSystem& S, cd z) {
    if (std::abs(z.imag()) >= 0.1) return;
    if (sturm_count(S.d, S.e, z.real() + 0.1) > sturm_count(S.d, S.e, z.real() - 0.1)) {
        std::ostringstream os;
        os << "z = " << fmt(z.real()) << (z.imag() < 0 ? "-" : "+") << fmt(std::abs(z.imag()))
           << "i lies within 0.1 of the discrete spectrum";
        throw PreconditionError(os.str());
    }
}

void matvec(const ScaledSystem& S, std::vector<cd>& x) {
    const std::size_t n = x.size();
    std::vector<cd> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        cd v = S.d[i] * x[i];
        if (i > 0) v += S.e[i - 1] * x[i - 1];
        if (i + 1 < n) v += S.e[i] * x[i + 1];
        y[i] = v;
    }
    x.swap(y);
}

double l2(const std::vector<cd>& x) {
    double s = 0;
    for (const cd& v : x) s += std::norm(v);
    return std::sqrt(s);
}

/// ||S^i (S - z)^{-1} S^j||: largest Ritz value of M^H M from Lanczos with
/// full reorthogonalization.
double resolvent_norm(const ScaledSystem& S, cd z, int i, int j, const ResolventProbeOptions& opt) {
    const std::size_t n = S.d.size();
    const detail::ShiftedLU<cd> lu(S.d, S.e, z), lu_adj(S.d, S.e, std::conj(z));
    auto apply = [&](std::vector<cd> x) {
        for (int r = 0; r < j; ++r) matvec(S, x);
        lu.solve(x);
        for (int r = 0; r < 2 * i; ++r) matvec(S, x);
        lu_adj.solve(x);
        for (int r = 0; r < j; ++r) matvec(S, x);
        return x;
    };
    auto dot = [](const std::vector<cd>& a, const std::vector<cd>& b) {
        cd s = 0;
        for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
        return s;
    };
    std::vector<std::vector<cd>> V;
    std::vector<double> alpha, beta;
    std::vector<cd> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(k));
    const double nv = l2(v);
    for (cd& c : v) c /= nv;
    const std::size_t kmax = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(opt.max_iterations, 1)));
    double est = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) {
        V.push_back(v);
        std::vector<cd> w = apply(v);
        if (!std::isfinite(l2(w))) throw PreconditionError("resolvent solve failed");
        alpha.push_back(dot(v, w).real());
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : V) {
                const cd c = dot(u, w);
                for (std::size_t m = 0; m < n; ++m) w[m] -= c * u[m];
            }
        const double b = l2(w);
        const bool last = k + 1 == kmax || b <= 1e-14 * std::abs(alpha.back());
        if (k % 10 != 9 && !last) {
            beta.push_back(b);
            for (std::size_t m = 0; m < n; ++m) v[m] = w[m] / b;
            continue;
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(alpha.size(), alpha.size());
        for (std::size_t m = 0; m < alpha.size(); ++m) {
            T(m, m) = alpha[m];
            if (m + 1 < alpha.size()) T(m, m + 1) = T(m + 1, m) = beta[m];
        }
        const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
        const double next = std::sqrt(std::max(top, 0.0));
        const bool done = (est > 0.0 && std::abs(next - est) <= opt.tolerance * next) || last;
        est = next;
        if (done) break;
        beta.push_back(b);
        for (std::size_t m = 0; m < n; ++m) v[m] = w[m] / b;
    }
    return est;
}

}  // namespace

ResolventReport resolvent_probe(const SchrodingerProblem& prob, const ResolventProbeOptions& opt) {
    prob.validate();
    opt.grid.validate();
    GeometricGrid fine = opt.grid;
    fine.points = 2 * (opt.grid.points - 1) + 1;
    const ScaledSystem coarse_sys = scaled_system(prob, opt.grid, opt.prefactor_scale);
    const ScaledSystem fine_sys = scaled_system(prob, fine, opt.prefactor_scale);
    check_off_spectrum(coarse_sys, opt.z);
    check_off_spectrum(fine_sys, opt.z);
    ResolventReport rep;
    rep.z = opt.z;
    for (auto [i, j] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
        ResolventRow row;
        row.i = i;
        row.j = j;
        row.norm_coarse = resolvent_norm(coarse_sys, opt.z, i, j, opt);
        row.norm_fine = resolvent_norm(fine_sys, opt.z, i, j, opt);
        row.ratio = row.norm_fine / row.norm_coarse;
        row.stable = row.ratio >= 0.5 && row.ratio <= 2.0;
        rep.rows.push_back(row);
    }
    return rep;
}

std::string ResolventReport::to_string() const {
    std::ostringstream os;
    os << "z = " << fmt(z.real()) << (z.imag() < 0 ? " - " : " + ") << fmt(std::abs(z.imag())) << "i\n";
    os << "i j norm_coarse norm_fine ratio stable\n";
    for (const auto& r : rows)
        os << r.i << " " << r.j << " " << fmt(r.norm_coarse) << " " << fmt(r.norm_fine) << " " << fmt(r.ratio) << " "
           << (r.stable ? "yes" : "no") << "\n";
    return os.str();
}

void write_resolvent_csv(std::ostream& os, const ResolventReport& rep) {
    os << "i,j,norm_coarse,norm_fine,ratio\n";
    char buf[160];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", r.i, r.j, r.norm_coarse, r.norm_fine, r.ratio);
        os << buf;
    }
}

}  // namespace degcalc
