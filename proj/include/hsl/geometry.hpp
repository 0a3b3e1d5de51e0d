#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hsl/rng.hpp"

namespace hsl {

using Point = std::vector<double>;

double dot(const Point& a, const Point& b);
double norm(const Point& a);
Point sub(const Point& a, const Point& b);
Point add(const Point& a, const Point& b);
Point scale(const Point& a, double s);

// 1{x <= theta} over [0, 1]
struct Threshold {
    double theta = 0.0;
};

// 1{<omega, x> >= b} over the ball B(0, 1/2); omega stored as a unit vector.
struct Halfspace {
    Point omega;
    double b = 0.0;
    bool homogeneous = false;
};

// Rejects omega = 0 and normalizes; homogeneous forces b = 0.
Halfspace make_halfspace(Point omega, double b, bool homogeneous);

class Concept {
public:
    Concept() : rule_(Threshold{0.5}) {}
    explicit Concept(Threshold t) : rule_(t) {}
    explicit Concept(Halfspace h) : rule_(std::move(h)) {}

    bool is_threshold() const { return std::holds_alternative<Threshold>(rule_); }
    const Threshold& threshold() const { return std::get<Threshold>(rule_); }
    const Halfspace& halfspace() const { return std::get<Halfspace>(rule_); }

    // 1 for the threshold interval [0,1], k for the ball B(0,1/2)
    int dim() const {
        return is_threshold() ? 1 : static_cast<int>(halfspace().omega.size());
    }

private:
    std::variant<Threshold, Halfspace> rule_;
};

// Boundary ties label 1 in both classes.
int label(const Concept& c, const Point& x);
int label(const Threshold& t, double x);
int label(const Halfspace& h, const Point& x);

Point project_onto_boundary(const Point& x, const Halfspace& h);
double distance_to_boundary(const Point& x, const Halfspace& h);

// |theta_a - theta_b|: exact disagreement mass under U[0,1]
double threshold_error(const Threshold& a, const Threshold& b);

// angle(omega_a, omega_b) / pi: exact disagreement mass under U[B(0,1/2)]
double homogeneous_error(const Halfspace& a, const Halfspace& b);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Disagreement fraction over n uniform ball samples, plus binomial standard
// error. Chunked so the result is identical for the parallel and serial
// kernels and independent of the thread count.
McEstimate monte_carlo_error(const Concept& a, const Concept& b, std::size_t n,
                             std::uint64_t seed);
McEstimate monte_carlo_error_serial(const Concept& a, const Concept& b,
                                    std::size_t n, std::uint64_t seed);

// Exact error where a closed form exists, Monte Carlo otherwise.
double concept_error(const Concept& a, const Concept& b, std::size_t mc_samples,
                     std::uint64_t seed);

// Uniform on B(0, 1/2): Gaussian direction, radius (1/2) * U^(1/k).
Point sample_uniform_ball(int k, Rng& rng);

// Half-space perpendicular to x' - x through x', oriented so label(x) = label_x.
Halfspace induced_halfspace(const Point& x, const Point& x_prime, int label_x);

// Homogeneous half-space perpendicular to x' - x, oriented so label(x) = label_x.
// Degenerate when x lies on the candidate boundary (<x'-x, x> = 0).
std::optional<Halfspace> induced_homogeneous(const Point& x, const Point& x_prime,
                                             int label_x);

// Angle at vertex x in the triangle (x', x, x_proj), in [0, pi].
double angle_at(const Point& x_prime, const Point& x, const Point& x_proj);

}  // namespace hsl
