#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace degcalc::detail {

/// LU with partial pivoting of T - sigma I for symmetric tridiagonal T
/// (diagonal d, off-diagonal e). U carries two superdiagonals.
template <class Scalar>
class ShiftedLU {
public:
    ShiftedLU(const std::vector<double>& d, const std::vector<double>& e, Scalar sigma) : n_(d.size()) {
        u0_.resize(n_);
        u1_.assign(n_, Scalar(0));
        u2_.assign(n_, Scalar(0));
        l_.assign(n_, Scalar(0));
        swap_.assign(n_, false);
        double scale = 1.0;
        for (std::size_t i = 0; i < n_; ++i) scale = std::max(scale, std::abs(d[i] - sigma));
        const Scalar tiny = scale * std::numeric_limits<double>::epsilon();
        Scalar r0 = d[0] - sigma, r1 = n_ > 1 ? Scalar(e[0]) : Scalar(0);
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            Scalar p0 = r0, p1 = r1, p2 = 0;
            Scalar o0 = e[i], o1 = d[i + 1] - sigma, o2 = i + 2 < n_ ? Scalar(e[i + 1]) : Scalar(0);
            if (std::abs(o0) > std::abs(p0)) {
                swap_[i] = true;
                std::swap(p0, o0);
                std::swap(p1, o1);
                std::swap(p2, o2);
            }
            if (p0 == Scalar(0)) p0 = tiny;
            const Scalar l = o0 / p0;
            l_[i] = l;
            u0_[i] = p0;
            u1_[i] = p1;
            u2_[i] = p2;
            r0 = o1 - l * p1;
            r1 = o2 - l * p2;
        }
        u0_[n_ - 1] = r0 == Scalar(0) ? tiny : r0;
    }

    /// Overwrites b with the solution.
    void solve(std::vector<Scalar>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (swap_[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= l_[i] * b[i];
        }
        for (std::size_t k = n_; k-- > 0;) {
            Scalar v = b[k];
            if (k + 1 < n_) v -= u1_[k] * b[k + 1];
            if (k + 2 < n_) v -= u2_[k] * b[k + 2];
            b[k] = v / u0_[k];
        }
    }

private:
    std::size_t n_;
    std::vector<Scalar> u0_, u1_, u2_, l_;
    std::vector<bool> swap_;
};

}  // namespace degcalc::detail
