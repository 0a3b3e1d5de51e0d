// Benchmark: OpenMP Monte Carlo disagreement kernel vs the serial reference.
// The two must agree bit-for-bit (same chunked seeding scheme).
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "hsl/geometry.hpp"
#include "hsl/rng.hpp"

int main(int argc, char** argv) {
    std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20'000'000;
    int k = argc > 2 ? std::atoi(argv[2]) : 8;

    hsl::Rng rng(42);
    auto unit = [&](double b, bool hom) {
        hsl::Point w(static_cast<std::size_t>(k));
        for (auto& v : w) v = rng.gaussian();
        return hsl::make_halfspace(w, b, hom);
    };
    hsl::Concept a(unit(0.05, false));
    hsl::Concept b(unit(-0.1, false));

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    hsl::McEstimate par = hsl::monte_carlo_error(a, b, n, 7);
    auto t1 = clock::now();
    hsl::McEstimate ser = hsl::monte_carlo_error_serial(a, b, n, 7);
    auto t2 = clock::now();

    double tp = std::chrono::duration<double>(t1 - t0).count();
    double ts = std::chrono::duration<double>(t2 - t1).count();
    std::printf("n=%zu k=%d\n", n, k);
    std::printf("parallel: %.3fs  estimate=%.9f\n", tp, par.estimate);
    std::printf("serial:   %.3fs  estimate=%.9f\n", ts, ser.estimate);
    std::printf("speedup:  %.2fx\n", ts / tp);
    if (par.estimate != ser.estimate || par.std_error != ser.std_error) {
        std::printf("MISMATCH: parallel and serial kernels disagree\n");
        return 1;
    }
    std::printf("kernels agree bit-for-bit\n");
    return 0;
}
