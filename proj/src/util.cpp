#include "orbitherm/config.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace orbitherm {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::NumericalDegeneracy: return "NumericalDegeneracy";
    case Errc::NotACartan: return "NotACartan";
    case Errc::NotCompactlyEmbedded: return "NotCompactlyEmbedded";
    case Errc::NoRegularElement: return "NoRegularElement";
    case Errc::ClosureOverflow: return "ClosureOverflow";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::NotRegular: return "NotRegular";
    case Errc::NotAdmissibleFunctional: return "NotAdmissibleFunctional";
    case Errc::OutsideCmax: return "OutsideCmax";
    case Errc::NoDecayDirection: return "NoDecayDirection";
    case Errc::Divergent: return "Divergent";
    case Errc::MissingMeta: return "MissingMeta";
    case Errc::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t s = seed ^ (0xa0761d6478bd642fULL * (stream + 1));
  uint64_t a = splitmix64(s);
  uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

int thread_cap() {
  if (const char* env = std::getenv("ORBIT_THERMO_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_chunks(int n, const std::function<void(int)>& body) {
  int workers = std::min(thread_cap(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace orbitherm
