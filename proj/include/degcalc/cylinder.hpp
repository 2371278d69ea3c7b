#pragma once

#include <complex>
#include <map>
#include <string>

#include "degcalc/powerfun.hpp"

namespace degcalc {

/// re + i im with radial real and imaginary parts.
struct ComplexRadial {
    RadialFunction re;
    RadialFunction im;

    explicit ComplexRadial(Domain domain = Domain::half_line) : re(domain), im(domain) {}
    ComplexRadial(RadialFunction r, RadialFunction i) : re(std::move(r)), im(std::move(i)) {}
    explicit ComplexRadial(RadialFunction r) : re(std::move(r)), im(re.domain()) {}

    Domain domain() const noexcept { return re.domain(); }
    bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
    ComplexRadial scaled(std::complex<double> c) const;
    ComplexRadial conj() const { return {re, -im}; }
    ComplexRadial derivative() const { return {re.derivative(), im.derivative()}; }
    ComplexRadial canonical() const { return {re.canonical(), im.canonical()}; }
    bool equivalent(const ComplexRadial& g, double rel_tol = 1e-12) const;
    std::complex<double> eval(double t) const { return {re.eval(t), im.eval(t)}; }
    double max_abs_coeff() const noexcept { return std::max(re.max_abs_coeff(), im.max_abs_coeff()); }
    std::string to_string() const;

    friend ComplexRadial operator+(const ComplexRadial& f, const ComplexRadial& g) {
        return {f.re + g.re, f.im + g.im};
    }
    friend ComplexRadial operator-(const ComplexRadial& f, const ComplexRadial& g) {
        return {f.re - g.re, f.im - g.im};
    }
    friend ComplexRadial operator*(const ComplexRadial& f, const ComplexRadial& g) {
        return {f.re * g.re - f.im * g.im, f.re * g.im + f.im * g.re};
    }
    friend ComplexRadial operator*(const RadialFunction& f, const ComplexRadial& g) { return {f * g.re, f * g.im}; }
    ComplexRadial& operator+=(const ComplexRadial& g) { return *this = *this + g; }
    ComplexRadial& operator-=(const ComplexRadial& g) { return *this = *this - g; }
};

/// sum_m f_m(t) e^{i m theta} over finitely many Fourier modes.
class CylinderFunction {
public:
    explicit CylinderFunction(Domain domain = Domain::half_line) : domain_(domain) {}
    /// Mode-0 function f(t).
    static CylinderFunction radial(RadialFunction f);
    static CylinderFunction mode(int m, ComplexRadial f);
    static CylinderFunction constant(std::complex<double> c, Domain domain = Domain::half_line);

    Domain domain() const noexcept { return domain_; }
    const std::map<int, ComplexRadial>& modes() const noexcept { return modes_; }
    bool is_zero() const noexcept { return modes_.empty(); }
    /// Conjugate symmetry f_{-m} = conj(f_m), i.e. real values.
    bool is_real(double rel_tol = 1e-12) const;
    /// Independent of theta.
    bool is_radial() const noexcept;
    /// The mode-0 part.
    ComplexRadial radial_part() const;
    double max_abs_coeff() const noexcept;

    CylinderFunction scaled(std::complex<double> c) const;
    CylinderFunction times(const RadialFunction& f) const;
    CylinderFunction d_t(int k = 1) const;
    /// d/dtheta^k: mode m picks up (i m)^k.
    CylinderFunction d_theta(int k = 1) const;
    CylinderFunction canonical() const;
    bool equivalent(const CylinderFunction& g, double rel_tol = 1e-12) const;

    std::complex<double> eval(double t, double theta) const;
    std::string to_string() const;

    friend CylinderFunction operator+(const CylinderFunction& f, const CylinderFunction& g);
    friend CylinderFunction operator-(const CylinderFunction& f, const CylinderFunction& g);
    friend CylinderFunction operator*(const CylinderFunction& f, const CylinderFunction& g);
    CylinderFunction operator-() const { return scaled(-1.0); }
    CylinderFunction& operator+=(const CylinderFunction& g) { return *this = *this + g; }
    CylinderFunction& operator-=(const CylinderFunction& g) { return *this = *this - g; }

private:
    void add_mode(int m, const ComplexRadial& f);
    Domain domain_;
    std::map<int, ComplexRadial> modes_;
};

}  // namespace degcalc
