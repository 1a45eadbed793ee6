#ifndef ATLAS_PARALLEL_HPP
#define ATLAS_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace atlas {

// Execution mode for the data-parallel kernels (seed sweeps, band scans,
// coverage grids). Serial is the reference path; OpenMP must produce
// identical results because every kernel writes to a disjoint slot per
// index and reductions run afterwards in input order.
enum class Exec { Serial, OpenMP };

Exec default_exec();
void set_default_exec(Exec e);
void set_worker_count(int n);
int worker_count();

// Runs fn(i) for i in [0, n). Results must be stored per-index by fn.
// The first exception thrown by any index is rethrown on the caller's
// thread after the loop finishes.
template <typename Fn>
void par_for(std::size_t n, Fn&& fn, Exec exec) {
    if (exec == Exec::OpenMP) {
#ifdef _OPENMP
        std::exception_ptr first;
        std::mutex mu;
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first) first = std::current_exception();
            }
        }
        if (first) std::rethrow_exception(first);
        return;
#endif
    }
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <typename Fn>
void par_for(std::size_t n, Fn&& fn) {
    par_for(n, fn, default_exec());
}

}  // namespace atlas

#endif
