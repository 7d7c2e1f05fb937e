#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace speclab::detail {

// Runs fn(chunk_id, begin, end) over fixed-size chunks of [0, n). Chunk
// boundaries depend only on n and chunk_size, never on the thread count, so
// per-chunk results merged in chunk order are bitwise reproducible.
template <class Fn>
void for_chunks(int n, int chunk_size, Fn&& fn) {
  const int n_chunks = (n + chunk_size - 1) / chunk_size;
  if (n_chunks <= 1) {
    if (n > 0) fn(0, 0, n);
    return;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  const int n_threads = static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw,
                                                            static_cast<unsigned>(n_chunks)));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const int begin = c * chunk_size;
      const int end = std::min(n, begin + chunk_size);
      fn(c, begin, end);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// Pairwise (tree) summation; permutation-stable to ~log2(n) ulps.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace speclab::detail
