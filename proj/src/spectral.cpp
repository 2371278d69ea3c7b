#include "degcalc/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "degcalc/error.hpp"
#include "degcalc/flows.hpp"
#include "degcalc/simd/kernels.hpp"
#include "tridiag_lu.hpp"

namespace degcalc {

void GeometricGrid::validate() const {
    if (!(std::isfinite(s_min) && std::isfinite(s_max)) || !(s_min < s_max))
        throw PreconditionError("grid needs s_min < s_max");
    if (points < 5) throw PreconditionError("grid needs at least 5 points");
}

std::vector<double> GeometricGrid::nodes() const {
    validate();
    static const Flow flow(Weight::make(RadialFunction::power(1)));
    std::vector<double> r(points);
    const double h = step();
    for (int i = 0; i < points; ++i) r[i] = flow.F_inverse(i + 1 == points ? s_max : s_min + i * h);
    return r;
}

RadialFunction reduced_potential(const SchrodingerProblem& prob) {
    const double c = prob.angular_eigenvalue() + (prob.n - 1.0) * (prob.n - 3.0) / 4.0;
    RadialFunction w = prob.potential();
    if (c != 0.0) w = w + RadialFunction::monomial(c, -2);
    return w;
}

TridiagonalSystem assemble(const SchrodingerProblem& prob, const GeometricGrid& grid) {
    prob.validate();
    const RadialFunction Wf = reduced_potential(prob);
    const EndpointValue hardy = (RadialFunction::power(2) * Wf).endpoint_limit(Endpoint::origin);
    if (hardy.kind == EndpointValue::Kind::minus_infinity || (hardy.is_finite() && hardy.value < -0.25 - 1e-12))
        throw PreconditionError("reduced potential violates the Hardy bound rho^2 W >= -1/4 at the origin");
    if (Wf.endpoint_limit(Endpoint::far).kind == EndpointValue::Kind::minus_infinity)
        throw PreconditionError("reduced potential is unbounded below at infinity");

    const std::vector<double> r = grid.nodes();
    const std::size_t n = r.size() - 2;
    TridiagonalSystem sys;
    sys.diag.resize(n);
    sys.mass.resize(n);
    sys.rho.assign(r.begin() + 1, r.end() - 1);
    sys.W.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hl = r[i + 1] - r[i], hr = r[i + 2] - r[i + 1];
        const double m = 0.5 * (hl + hr);
        sys.mass[i] = m;
        sys.W[i] = Wf.eval(r[i + 1]);
        sys.diag[i] = (1.0 / hl + 1.0 / hr + m * sys.W[i]) / m;
    }
    sys.off.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double k = -1.0 / (r[i + 2] - r[i + 1]);
        const double upper = k / std::sqrt(sys.mass[i]) / std::sqrt(sys.mass[i + 1]);
        const double lower = k / std::sqrt(sys.mass[i + 1] * sys.mass[i]);
        sys.max_asymmetry = std::max(sys.max_asymmetry, std::abs(upper - lower) / std::abs(upper));
        sys.off[i] = 0.5 * (upper + lower);
    }
    if (sys.max_asymmetry > 1e-12)
        throw PropertyViolation("internal error: assembled matrix asymmetric by " + std::to_string(sys.max_asymmetry));
    return sys;
}

int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
    constexpr double pivmin = 1e-300;
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = d[i] - x - (i == 0 ? 0.0 : e[i - 1] * e[i - 1] / q);
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0) ++count;
    }
    return count;
}

namespace {

double bisect_eigenvalue(const std::vector<double>& d, const std::vector<double>& e, int k, double lo, double hi) {
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;
        if (sturm_count(d, e, mid) >= k + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SpectralResult tridiagonal_lowest(const std::vector<double>& d, const std::vector<double>& e,
                                  const SolveOptions& opt) {
    const std::size_t n = d.size();
    if (n == 0 || e.size() + 1 != n) throw PreconditionError("tridiagonal matrix has inconsistent sizes");
    if (opt.num_eigs < 1 || static_cast<std::size_t>(opt.num_eigs) > n)
        throw PreconditionError("num_eigs must lie in [1, matrix size]");
    const auto& K = simd::active_kernels();

    double glo = d[0], ghi = d[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
        glo = std::min(glo, d[i] - r);
        ghi = std::max(ghi, d[i] + r);
    }
    const double pad = 1e-12 * std::max({1.0, std::abs(glo), std::abs(ghi)});
    glo -= pad;
    ghi += pad;

    SpectralResult res;
    std::vector<std::vector<double>> found;
    std::vector<double> x(n), r(n), Ax(n);
    for (int k = 0; k < opt.num_eigs; ++k) {
        const double sigma = bisect_eigenvalue(d, e, k, glo, ghi);
        const detail::ShiftedLU<double> lu(d, e, sigma);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = std::sin(std::numbers::pi * (k + 1) * (i + 1) / static_cast<double>(n + 1));
        double lambda = sigma, resid = HUGE_VAL;
        int it = 0;
        while (it < opt.max_iterations) {
            ++it;
            lu.solve(v);
            for (const auto& f : found) K.axpy(-K.dot(f.data(), v.data(), n), f.data(), v.data(), n);
            const double nv = K.nrm2(v.data(), n);
            if (!(nv > 0.0) || !std::isfinite(nv)) break;
            for (double& c : v) c /= nv;
            K.tridiag_matvec(d.data(), e.data(), v.data(), Ax.data(), n);
            lambda = K.dot(v.data(), Ax.data(), n);
            resid = K.tridiag_residual(d.data(), e.data(), v.data(), lambda, r.data(), n);
            if (resid <= opt.tolerance * std::max(1.0, std::abs(lambda))) break;
        }
        if (!(resid <= opt.tolerance * std::max(1.0, std::abs(lambda))))
            throw ConvergenceError("eigenvalue " + std::to_string(k) + " did not converge (residual " +
                                       std::to_string(resid) + ")",
                                   it);
        res.eigenvalues.push_back(lambda);
        res.residuals.push_back(resid);
        res.iterations.push_back(it);
        found.push_back(v);
        glo = std::min(glo, lambda);
    }
    if (opt.keep_vectors) res.vectors = std::move(found);
    return res;
}

SpectralResult assemble_and_solve(const SchrodingerProblem& prob, const GeometricGrid& grid,
                                  const SolveOptions& opt) {
    const TridiagonalSystem sys = assemble(prob, grid);
    SpectralResult res = tridiagonal_lowest(sys.diag, sys.off, opt);
    res.l = prob.l;
    res.grid = grid;
    return res;
}

std::vector<double> dense_eigenvalues(const TridiagonalSystem& sys, int k) {
    const auto n = static_cast<Eigen::Index>(sys.size());
    if (n > 3000) throw PreconditionError("dense oracle is limited to 3000 unknowns");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, i) = sys.diag[i];
        if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = sys.off[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0);
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + std::min<Eigen::Index>(k, n));
}

std::vector<SpectralResult> solve_all(const std::vector<SpectralJob>& jobs, int threads) {
    std::vector<SpectralResult> out(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();) {
            try {
                out[i] = assemble_and_solve(jobs[i].problem, jobs[i].grid, jobs[i].options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int t = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (int i = 1; i < t; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectralResult>& results) {
    os << "l,index,eigenvalue,residual,grid_points,s_min,s_max\n";
    char buf[256];
    for (const auto& r : results)
        for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g,%d,%.17g,%.17g\n", r.l, k, r.eigenvalues[k],
                          r.residuals[k], r.grid.points, r.grid.s_min, r.grid.s_max);
            os << buf;
        }
}

}  // namespace degcalc
