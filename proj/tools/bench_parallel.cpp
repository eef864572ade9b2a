// Timing comparison of the OpenMP kernels against their serial reference
// implementations. Also asserts that both paths produce identical output,
// which is the determinism contract the parallel code must keep.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "expander/matrix.hpp"
#include "expander/montecarlo.hpp"
#include "expander/phase.hpp"

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_once(F&& fn) {
    const double t0 = now_s();
    fn();
    return now_s() - t0;
}

int hw_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void report(const char* name, double serial_s, double parallel_s, int threads,
            bool identical) {
    std::printf("%-28s serial %8.3f s   omp(%d) %8.3f s   speedup %5.2fx   %s\n", name,
                serial_s, threads, parallel_s, serial_s / parallel_s,
                identical ? "outputs identical" : "OUTPUT MISMATCH");
    if (!identical) std::exit(1);
}

}  // namespace

int main() {
    const int threads = hw_threads();
    std::printf("hardware threads: %d\n\n", threads);

    {
        expander::SimulationConfig config;
        config.n = 1024;
        config.d = 8;
        config.ensemble = expander::Ensemble::SE;
        config.k_grid = expander::default_k_grid(config.n);
        config.trials = 2000;
        config.seed = 42;

        expander::SimulationResult serial, parallel;
        const double ts = time_once([&] { serial = expander::simulate_cardinalities_serial(config); });
        const double tp = time_once([&] { parallel = expander::simulate_cardinalities(config, threads); });
        bool same = serial.per_k.size() == parallel.per_k.size();
        for (size_t i = 0; same && i < serial.per_k.size(); ++i)
            same = serial.per_k[i].samples == parallel.per_k[i].samples;
        report("simulate_cardinalities", ts, tp, threads, same);
    }

    {
        expander::TailEstimate serial, parallel;
        const double ts = time_once(
            [&] { serial = expander::empirical_tail_serial(1024, 8, 64, 363.7, 200000, 7); });
        const double tp = time_once(
            [&] { parallel = expander::empirical_tail(1024, 8, 64, 363.7, 200000, 7, threads); });
        report("empirical_tail", ts, tp, threads, serial.hits == parallel.hits);
    }

    {
        std::vector<double> grid(50);
        for (int i = 0; i < 50; ++i) grid[i] = 0.05 + (0.95 - 0.05) * i / 49.0;
        expander::PhaseCurve serial, parallel;
        const double ts = time_once([&] { serial = expander::sweep_serial(grid, 8, 1.0 / 6.0, 1024); });
        const double tp = time_once([&] { parallel = expander::sweep(grid, 8, 1.0 / 6.0, 1024, threads); });
        report("phase sweep", ts, tp, threads,
               expander::curve_to_csv(serial) == expander::curve_to_csv(parallel));
    }

    {
        expander::SparseColumnMatrix serial, parallel;
        const double ts = time_once(
            [&] { serial = expander::generate(4096, 200000, 8, expander::Ensemble::SSE, 3, 1); });
        const double tp = time_once(
            [&] { parallel = expander::generate(4096, 200000, 8, expander::Ensemble::SSE, 3, threads); });
        report("generate", ts, tp, threads,
               serial.supports == parallel.supports && serial.signs == parallel.signs);
    }

    return 0;
}
