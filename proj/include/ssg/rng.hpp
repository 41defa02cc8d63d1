#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ssg {

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream. All distribution transforms live here instead
// of std:: distributions, whose output sequences are implementation-defined;
// the streams below depend only on std::mt19937_64, which is pinned by the
// standard, so the same seed reproduces the same draws everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent stream for sub-task `index` (splits, multi-starts, ...).
    static Rng child(std::uint64_t master, std::uint64_t index);

    std::uint64_t next_u64() { return eng_(); }

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);
    double uniform_pos();                   // (0, 1], safe under log()
    double normal();                        // standard normal, Box-Muller
    double exponential();                   // rate 1
    int uniform_int(int n);                 // {0, ..., n-1}
    int categorical(const std::vector<double>& probs);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(static_cast<int>(i)));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace ssg
