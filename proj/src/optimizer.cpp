#include "tanglebound/optimizer.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace tanglebound {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t restart_seed(std::uint64_t base_seed, std::uint64_t restart_index) {
  std::uint64_t state = base_seed;
  std::uint64_t mixed = splitmix64_next(state);
  state = mixed ^ (restart_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64_next(state);
}

Rng::Rng(std::uint64_t seed) : state_(seed) {}

double Rng::uniform() {
  return static_cast<double>(splitmix64_next(state_) >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

int thread_budget() {
  if (const char* env = std::getenv("TANGLEBOUND_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_index(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::min(count, thread_budget());
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tanglebound
