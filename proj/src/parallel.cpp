#include "atlas/parallel.hpp"

#include <thread>

namespace atlas {

namespace {
Exec g_exec =
#ifdef _OPENMP
    Exec::OpenMP;
#else
    Exec::Serial;
#endif
int g_workers = 0;  // 0 = hardware default
}  // namespace

Exec default_exec() { return g_exec; }
void set_default_exec(Exec e) { g_exec = e; }
void set_worker_count(int n) { g_workers = n; }

int worker_count() {
    if (g_workers > 0) return g_workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace atlas
