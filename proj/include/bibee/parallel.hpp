// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_PARALLEL_HPP
#define BIBEE_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bibee
{

// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is visited by
// exactly one chunk, so writes to per-index slots are deterministic regardless of
// the thread count. The first exception thrown by any chunk is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn &&fn)
{
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1)
  {
    if (n > 0)
    {
      fn(std::size_t{0}, n);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; w++)
    {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end)
      {
        break;
      }
      pool.emplace_back([&, w, begin, end] {
        try
        {
          fn(begin, end);
        }
        catch (...)
        {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace bibee

#endif  // BIBEE_PARALLEL_HPP
