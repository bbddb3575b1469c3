#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace moralsim {

// Abstract draw source so action resolvers can be driven by forced values in tests.
struct RandomSource {
  virtual ~RandomSource() = default;
  virtual double uniform01() = 0;  // [0, 1)
  virtual bool bernoulli(double p) = 0;
  virtual double gaussian(double mean, double stddev) = 0;
};

// Seeded stream over mt19937_64 with portable output. The standard distribution
// templates are not bit-identical across library implementations, so the mapping
// from raw engine output to uniform/gaussian/integer draws is done here:
//   uniform01  : one engine draw, top 53 bits scaled to [0,1)
//   bernoulli  : uniform01() < p (exactly one draw)
//   gaussian   : Box-Muller, exactly two draws per sample
//   below(n)   : rejection sampling over the top multiple of n
class RngStream final : public RandomSource {
 public:
  RngStream() : engine_(0) {}
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double uniform01() override { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) override { return uniform01() < p; }

  double gaussian(double mean, double stddev) override {
    // u1 in (0,1] keeps the log finite
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    return mean + stddev * z;
  }

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::mt19937_64::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  std::string save_state() const;
  void load_state(const std::string& text);

  bool operator==(const RngStream& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

// Fixed-value source for forcing Bernoulli branches in resolver tests.
class ForcedRandom final : public RandomSource {
 public:
  explicit ForcedRandom(double uniform_value, double gaussian_value = 0.0)
      : uniform_(uniform_value), gaussian_(gaussian_value) {}

  double uniform01() override { return uniform_; }
  bool bernoulli(double p) override { return uniform_ < p; }
  double gaussian(double mean, double stddev) override { return mean + stddev * gaussian_; }

 private:
  double uniform_;
  double gaussian_;
};

}  // namespace moralsim
