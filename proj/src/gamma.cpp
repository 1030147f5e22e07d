#include <array>
#include <cmath>
#include <numbers>

#include "fracpl/errors.hpp"
#include "fracpl/fracops.hpp"

namespace fracpl {

namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

double lanczos(double x) {
    // x >= 0.5
    const double z = x - 1.0;
    double a = kLanczos[0];
    const double t = z + kG + 0.5;
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * a;
}

} // namespace

double gamma(double x) {
    if (std::isnan(x)) return x;
    if (is_pole(x)) throw DomainError("gamma: pole at non-positive integer");
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos(1.0 - x));
    return lanczos(x);
}

double rgamma(double x) {
    if (is_pole(x)) return 0.0;
    return 1.0 / gamma(x);
}

} // namespace fracpl
