#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace satqkd {

// bad input: maps to CLI exit code 2
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// quadrature / series / root-finding failure: exit code 3
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace satqkd

namespace satqkd::num {

inline constexpr double pi = 3.14159265358979323846;

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    unsigned max_depth = 18;
};

struct QuadResult {
    double value;
    double error;
};

// Adaptive Gauss-Kronrod (G15/K31). b may be +infinity.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec = {});

// convenience: value only, throws on non-convergence
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {}) {
    return integrate_adaptive(f, a, b, spec).value;
}

// Generalized hypergeometric 2F3 for x <= 0.
struct Hyp2F3Info {
    double value;
    bool used_fallback;
    double cancellation;  // max|term| / |sum| of the double-width pass
};
Hyp2F3Info hyp2f3_info(double a1, double a2, double b1, double b2, double b3, double x);
inline double hyp2f3(double a1, double a2, double b1, double b2, double b3, double x) {
    return hyp2f3_info(a1, a2, b1, b2, b3, x).value;
}

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_i0(double x);
double bessel_i1(double x);
// exp(-x) I_n(x), finite for all x >= 0
double bessel_i0e(double x);
double bessel_i1e(double x);

double normal_cdf(double x);
double normal_quantile(double p);

// Bisection; requires a sign change on [lo, hi].
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double tol = 1e-12, int max_iter = 400);

// ---------------------------------------------------------------------------
// Counter-based random streams. Draw i of stream (seed, id) is a pure function
// of (seed, id, i), so partitioning samples across workers cannot alias.

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // (0, 1), never exactly 0 or 1
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Box-Muller pair
    std::array<double, 2> normal_pair() {
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct McSpec {
    std::uint64_t seed = 20190801;
    std::uint64_t max_samples = 1u << 22;
    double target_rel_se = 0.01;
    int workers = 0;  // 0: OpenMP default
    std::uint64_t block_size = 4096;
};

// Running sums of K observables and their cross products.
template <std::size_t K>
struct McSums {
    std::array<double, K> sum{};
    std::array<double, K * K> cross{};
    std::uint64_t n = 0;

    void add(const std::array<double, K>& x) {
        for (std::size_t i = 0; i < K; ++i) {
            sum[i] += x[i];
            for (std::size_t j = 0; j < K; ++j) cross[i * K + j] += x[i] * x[j];
        }
        ++n;
    }
    void merge(const McSums& o) {
        for (std::size_t i = 0; i < K; ++i) sum[i] += o.sum[i];
        for (std::size_t i = 0; i < K * K; ++i) cross[i] += o.cross[i];
        n += o.n;
    }
    double mean(std::size_t i) const { return sum[i] / static_cast<double>(n); }
    double cov(std::size_t i, std::size_t j) const {
        const double nn = static_cast<double>(n);
        return (cross[i * K + j] - sum[i] * sum[j] / nn) / (nn - 1.0);
    }
    // standard error of the mean of observable i
    double se(std::size_t i) const { return std::sqrt(std::max(cov(i, i), 0.0) / static_cast<double>(n)); }
};

// Evaluate blocks [first, last). Block b draws from stream (seed, b) only and the
// block sums are merged in block order, so the result does not depend on how
// blocks are spread over threads.
template <std::size_t K, class Kernel>
McSums<K> mc_blocks_serial(const Kernel& kernel, const McSpec& spec, std::uint64_t first,
                           std::uint64_t last) {
    McSums<K> total;
    for (std::uint64_t b = first; b < last; ++b) {
        CounterRng rng(spec.seed, b);
        McSums<K> block;
        for (std::uint64_t s = 0; s < spec.block_size; ++s) block.add(kernel(rng));
        total.merge(block);
    }
    return total;
}

template <std::size_t K, class Kernel>
McSums<K> mc_blocks_parallel(const Kernel& kernel, const McSpec& spec, std::uint64_t first,
                             std::uint64_t last) {
    const auto nb = static_cast<std::int64_t>(last - first);
    std::vector<McSums<K>> blocks(static_cast<std::size_t>(nb));
#ifdef _OPENMP
    const int nt = spec.workers > 0 ? spec.workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (std::int64_t i = 0; i < nb; ++i) {
        CounterRng rng(spec.seed, first + static_cast<std::uint64_t>(i));
        McSums<K> block;
        for (std::uint64_t s = 0; s < spec.block_size; ++s) block.add(kernel(rng));
        blocks[static_cast<std::size_t>(i)] = block;
    }
    McSums<K> total;
    for (const auto& b : blocks) total.merge(b);
    return total;
}

}  // namespace satqkd::num
