#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace hsl {

// Perturbation budget f: R+ -> R+, non-decreasing with f(0) = 0.
struct ZeroNoise {};

// f(r) = scale * r^(1+c)
struct PolynomialNoise {
    double c = 1.0;
    double scale = 0.25;
};

// f(r) = scale * e^(-1/r), f(0) = 0 by continuity
struct ExponentialNoise {
    double scale = 0.25;
};

// f(r) = slope * r, slope in (0, 1]
struct LinearNoise {
    double slope = 1.0;
};

// monotone piecewise-linear interpolation of empirical samples (r, f(r))
struct TabulatedNoise {
    std::vector<std::pair<double, double>> table;
};

class NoiseFunction {
public:
    using Family =
        std::variant<ZeroNoise, PolynomialNoise, ExponentialNoise, LinearNoise, TabulatedNoise>;

    NoiseFunction() : family_(ZeroNoise{}) {}
    explicit NoiseFunction(Family f);

    static NoiseFunction zero() { return NoiseFunction(ZeroNoise{}); }
    static NoiseFunction polynomial(double c, double scale) {
        return NoiseFunction(PolynomialNoise{c, scale});
    }
    static NoiseFunction exponential(double scale) {
        return NoiseFunction(ExponentialNoise{scale});
    }
    static NoiseFunction linear(double slope) { return NoiseFunction(LinearNoise{slope}); }
    static NoiseFunction tabulated(std::vector<std::pair<double, double>> table) {
        return NoiseFunction(TabulatedNoise{std::move(table)});
    }

    const Family& family() const { return family_; }

    double eval(double r) const;

    // Generalized inverse inf{r : f(r) >= y}, closed form where available.
    // Throws std::domain_error (naming the achievable maximum) when y is above
    // the range on [0, r_max].
    double inverse(double y, double r_max = 1.0) const;

    // g(r) = f(r)/r, with g(0) taken as the limit where it exists
    double ratio_g(double r) const;
    double ratio_g_inverse(double y, double r_max = 1.0) const;

private:
    Family family_;
};

// f(u) where u solves u + f(u) = d; equals tilde_f(2d). Used by the version
// interval update of the deterministic threshold learner and its adversary.
double contraction_from_gap(const NoiseFunction& f, double d);

// tilde_f(r) = f((f + I)^(-1)(r/2))
double tilde_f(const NoiseFunction& f, double r);

inline constexpr std::size_t kStopInfinity = std::numeric_limits<std::size_t>::max();

// Least n >= 0 with h^(n)(u) <= b. Returns kStopInfinity when the cap is hit
// or when an iterate stops decreasing while still above b.
std::size_t stop_count(const std::function<double(double)>& h, double u, double b,
                       std::size_t cap = 1'000'000);

inline std::size_t stop_count(const NoiseFunction& f, double u, double b,
                              std::size_t cap = 1'000'000) {
    return stop_count([&f](double r) { return f.eval(r); }, u, b, cap);
}

}  // namespace hsl
