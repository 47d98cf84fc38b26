// Serial vs parallel throughput of the thrust-parameter sweep: the grid
// points are independent propagations, the natural parallel axis of this
// library.

#include "ascent/orbital.hpp"
#include "ascent/solver.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ascent;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
    int n_side = argc > 1 ? std::atoi(argv[1]) : 8;

    solver::Scenario sc;
    const Constants C;
    sc.initial = {C.earth_radius + 150e3, 5000.0, deg2rad(30.0), 0.0};
    sc.initial_mass = 10000.0;
    sc.target = orbital::shape_from_apsides(36000e3, 300e3, C);
    sc.propulsion = dynamics::Propulsion{2942.0};
    sc.constants = C;

    std::vector<std::array<double, 2>> grid;
    for (int i = 0; i < n_side; ++i)
        for (int j = 0; j < n_side; ++j)
            grid.push_back({24000.0 + 500.0 * i, -14.0 + 1.0 * j});

#ifdef _OPENMP
    std::printf("OpenMP threads: %d, grid: %zu propagations\n", omp_get_max_threads(),
                grid.size());
#else
    std::printf("OpenMP disabled, grid: %zu propagations\n", grid.size());
#endif

    auto t0 = Clock::now();
    auto serial = solver::sweep_profiles(sc, grid, solver::Execution::Serial);
    auto t1 = Clock::now();
    auto parallel = solver::sweep_profiles(sc, grid, solver::Execution::Parallel);
    auto t2 = Clock::now();

    for (size_t i = 0; i < grid.size(); ++i) {
        if (serial[i].final_mass != parallel[i].final_mass ||
            serial[i].feasible != parallel[i].feasible) {
            std::printf("MISMATCH at grid point %zu\n", i);
            return 1;
        }
    }

    double ms_serial = std::chrono::duration<double, std::milli>(t1 - t0).count();
    double ms_parallel = std::chrono::duration<double, std::milli>(t2 - t1).count();
    std::printf("serial:   %8.1f ms\n", ms_serial);
    std::printf("parallel: %8.1f ms\n", ms_parallel);
    std::printf("speedup:  %8.2fx (results bit-identical)\n", ms_serial / ms_parallel);
    return 0;
}
