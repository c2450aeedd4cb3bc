#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace lakedis {

// Seeded RNG with portable derived operations. std::uniform_int_distribution
// is implementation-defined, so bounded draws are done by rejection on the
// raw mt19937_64 stream: same seed, same sequence, on every platform.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform in [0, bound). bound must be > 0.
    uint64_t below(uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be > 0");
        const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    // k distinct indices from [0, population), in randomized draw order.
    std::vector<uint32_t> sample_without_replacement(uint32_t population, uint32_t k) {
        if (k > population)
            throw std::invalid_argument("sample_without_replacement: k exceeds population");
        std::vector<uint32_t> pool(population);
        for (uint32_t i = 0; i < population; ++i) pool[i] = i;
        for (uint32_t i = 0; i < k; ++i) {
            uint32_t j = i + static_cast<uint32_t>(below(population - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    // Derive an independent sub-seed for a named stream (splitmix64 mix).
    static uint64_t mix(uint64_t seed, uint64_t stream) {
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace lakedis
