#pragma once

#include <random>
#include <vector>

#include "degcalc/powerfun.hpp"

namespace testing_support {

using degcalc::Domain;
using degcalc::Exponent;
using degcalc::RadialFunction;
using degcalc::Term;

inline Exponent q_(std::int64_t n, std::int64_t d = 1) { return Exponent::rational(n, d); }

inline RadialFunction mono(double c, Exponent p, Exponent q = 0, Domain d = Domain::half_line) {
    return RadialFunction::monomial(c, p, q, d);
}

/// Random ring element with small rational exponents and integer coefficients.
inline RadialFunction random_radial(std::mt19937& rng, int max_terms = 3, Domain d = Domain::half_line) {
    static const std::vector<Exponent> ps{q_(0), q_(1, 2), q_(1), q_(3, 2), q_(2), q_(-1, 3), q_(1, 4)};
    static const std::vector<Exponent> qs{q_(0), q_(-1), q_(-2), q_(1, 2), q_(-3, 2), q_(1)};
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<std::size_t> pi(0, ps.size() - 1);
    std::uniform_int_distribution<std::size_t> qi(0, qs.size() - 1);
    std::uniform_int_distribution<int> ci(-4, 4);
    std::vector<Term> terms;
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        int c = ci(rng);
        if (c == 0) c = 1;
        terms.push_back({ps[pi(rng)], qs[qi(rng)], static_cast<double>(c)});
    }
    return RadialFunction::from_terms(terms, d);
}

}  // namespace testing_support
