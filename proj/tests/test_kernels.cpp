#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "degcalc/simd/kernels.hpp"

using namespace degcalc::simd;

namespace {

std::vector<const KernelTable*> variants() {
    std::vector<const KernelTable*> v;
    if (auto* t = avx2_kernels()) v.push_back(t);
    if (auto* t = neon_kernels()) v.push_back(t);
    return v;
}

std::vector<double> random_vec(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

}  // namespace

TEST_CASE("vector kernels match the scalar reference") {
    const auto& ref = scalar_kernels();
    std::mt19937 rng(1);
    for (const KernelTable* k : variants()) {
        CAPTURE(k->name);
        for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 7u, 8u, 9u, 17u, 100u, 1023u, 4000u}) {
            auto x = random_vec(rng, n);
            auto y = random_vec(rng, n);
            auto d = random_vec(rng, n);
            auto e = random_vec(rng, n > 0 ? n - 1 : 0);
            double abs_dot = 0;
            for (std::size_t i = 0; i < n; ++i) abs_dot += std::abs(x[i] * y[i]);
            CHECK(std::abs(k->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= 1e-15 * (abs_dot + 1));
            CHECK(std::abs(k->nrm2(x.data(), n) - ref.nrm2(x.data(), n)) <= 1e-14 * (ref.nrm2(x.data(), n) + 1));

            auto y1 = y;
            auto y2 = y;
            k->axpy(0.37, x.data(), y1.data(), n);
            ref.axpy(0.37, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15);

            std::vector<double> m1(n), m2(n);
            k->tridiag_matvec(d.data(), e.data(), x.data(), m1.data(), n);
            ref.tridiag_matvec(d.data(), e.data(), x.data(), m2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(m1[i] - m2[i]) <= 1e-15 * 4);

            const double r1 = k->tridiag_residual(d.data(), e.data(), x.data(), 0.3, m1.data(), n);
            const double r2 = ref.tridiag_residual(d.data(), e.data(), x.data(), 0.3, m2.data(), n);
            CHECK(std::abs(r1 - r2) <= 1e-14 * (r2 + 1));
        }
    }
}

TEST_CASE("dispatch picks a table") {
    const auto& k = active_kernels();
    CHECK(k.name != nullptr);
    std::vector<double> d{2, 2, 2}, e{-1, -1}, x{1, 1, 1}, y(3);
    k.tridiag_matvec(d.data(), e.data(), x.data(), y.data(), 3);
    CHECK(y[0] == 1);
    CHECK(y[1] == 0);
    CHECK(y[2] == 1);
}
