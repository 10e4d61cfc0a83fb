#ifndef FLIPMESH_PARALLEL_HPP
#define FLIPMESH_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace flipmesh {

/// Worker count for read-only checkers. FLIPMESH_THREADS caps it.
inline unsigned checker_threads()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if(const char* env = std::getenv("FLIPMESH_THREADS"))
    {
        try
        {
            const long cap = std::stol(env);
            if(cap >= 1)
                n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        }
        catch(...)
        {
        }
    }
    return n;
}

/// Calls fn(begin, end) on contiguous chunks of [0, n). Chunk boundaries are
/// fixed by n and the thread count, so callers writing into per-index slots
/// get deterministic results.
template <class Fn>
void parallel_chunks(std::size_t n, Fn&& fn)
{
    const std::size_t threads = std::min<std::size_t>(checker_threads(), std::max<std::size_t>(n / 256, 1));
    if(threads <= 1)
    {
        fn(std::size_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for(std::size_t t = 0; t < threads; ++t)
    {
        const std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if(b >= e)
            break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for(auto& th : pool)
        th.join();
}

} // namespace flipmesh

#endif
