#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lakedis {

// Worker count resolution: explicit request > LAKEDIS_THREADS env > hardware.
int resolve_workers(int requested = 0);

// Runs fn(i) for i in [0, count). Work is handed out in contiguous blocks via
// an atomic cursor; outputs must go to disjoint slots, which keeps results
// independent of scheduling.
void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn);

// Deterministic reduction of per-chunk double vectors: compute(chunk, local)
// runs in parallel, but locals are added into accum strictly in chunk order.
// The result is bitwise identical for any worker count.
void ordered_chunk_reduce(size_t chunk_count, int workers, size_t vector_size,
                          const std::function<void(size_t, std::vector<double>&)>& compute,
                          std::vector<double>& accum);

}  // namespace lakedis
