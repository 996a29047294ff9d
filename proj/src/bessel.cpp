#include "hiermod/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hiermod {

namespace {

// sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!)
double series(double x) {
    const double h = 0.5 * x;
    const double h2 = h * h;
    double term = h;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -h2 / (static_cast<double>(k) * static_cast<double>(k + 1));
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

// J1(x) ~ sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)), chi = x - 3pi/4, mu = 4.
double asymptotic(double x) {
    constexpr double mu = 4.0;
    const double z = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    // Terms a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! z^k); P takes even k with
    // alternating sign, Q the odd ones.
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (static_cast<double>(k) * z);
        if (std::abs(term) > last) break;  // divergent tail
        last = std::abs(term);
        const int r = k % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (std::abs(term) < 1e-17) break;
    }
    const double chi = x - 0.75 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace

double bessel_j1(double x) {
    if (x < 0.0) return -bessel_j1(-x);
    return x <= 12.0 ? series(x) : asymptotic(x);
}

double airy_amplitude(double u) {
    if (std::abs(u) < 1e-8) return 1.0 - u * u / 8.0;
    return 2.0 * bessel_j1(u) / u;
}

} // namespace hiermod
