#ifndef MOEC_RNG_HPP
#define MOEC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace moec {

// Seeded random stream. All distribution mappings are spelled out here
// instead of using std::*_distribution, so that identical seeds give
// identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform integer in [0, bound)
    std::size_t next_index(std::size_t bound) {
        // modulo bias is negligible for bound << 2^64 and keeps the stream simple
        return static_cast<std::size_t>(gen_() % bound);
    }

    // uniform integer in [lo, hi] inclusive
    long next_int(long lo, long hi) {
        return lo + static_cast<long>(next_index(static_cast<std::size_t>(hi - lo + 1)));
    }

    // uniform real in [0, 1)
    double next_real() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_real() < p; }

    double normal() {
        // Box-Muller, one value per call (cache the pair)
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = next_real();
        double u2 = next_real();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // draw m distinct indices from [0, bound) (partial Fisher-Yates)
    std::vector<std::size_t> sample_indices(std::size_t bound, std::size_t m) {
        std::vector<std::size_t> pool(bound);
        for (std::size_t i = 0; i < bound; ++i) pool[i] = i;
        if (m > bound) m = bound;
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j = i + next_index(bound - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(m);
        return pool;
    }

    // derive an independent child stream, e.g. one per run or per crossover
    Rng spawn() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ULL); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace moec

#endif
