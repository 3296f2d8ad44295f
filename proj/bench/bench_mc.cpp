// Serial reference vs OpenMP kernel for the second-moment Monte Carlo.
#include <benchmark/benchmark.h>

#include "satqkd/beam.hpp"
#include "satqkd/constants.hpp"
#include "satqkd/refraction.hpp"
#include "satqkd/turbulence.hpp"

using namespace satqkd;

namespace {

beam::ChannelContext context(double za_deg) {
    static const turb::TurbulenceProfile p(turb::AfglWk{});
    const double za = za_deg * kDeg;
    return beam::make_context(beam::BeamParams{}, p, {refr::refracted_slant_range(za, 780e3), za});
}

void BM_second_moment(benchmark::State& st, bool parallel) {
    const auto c = context(static_cast<double>(st.range(0)));
    num::McSpec mc;
    std::size_t samples = 0;
    for (auto _ : st) {
        const auto s = beam::eta_second_moment(c, mc, parallel);
        samples = s.samples;
        benchmark::DoNotOptimize(s.value);
    }
    st.counters["samples"] = static_cast<double>(samples);
}

void BM_serial(benchmark::State& st) { BM_second_moment(st, false); }
void BM_openmp(benchmark::State& st) { BM_second_moment(st, true); }

}  // namespace

BENCHMARK(BM_serial)->Arg(0)->Arg(40)->Arg(70)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_openmp)->Arg(0)->Arg(40)->Arg(70)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
