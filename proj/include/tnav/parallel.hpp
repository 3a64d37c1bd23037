#pragma once

#include <cstddef>
#include <functional>

namespace tnav {

// Number of worker threads used by parallel_for. Defaults to hardware
// concurrency; override via set_num_threads (0 restores the default).
int num_threads();
void set_num_threads(int n);

// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks,
// one per worker; each index must write only to its own output slots so
// results are identical to the serial loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Block variant: fn(block_index, begin, end). Blocks are a fixed partition
// of [0, n) in index order, so per-block partial results can be reduced
// deterministically by block index.
void parallel_for_blocks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

std::size_t parallel_block_count(std::size_t n);

}  // namespace tnav
