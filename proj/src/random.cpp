#include "pps/random.hpp"

#include "pps/parallel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace pps {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t key = mix64(seed + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t t : tags) key = mix64(key ^ mix64(t + 0x632be59bd9b4e019ULL));
  return key;
}

Rng Rng::stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  return Rng(stream_key(seed, tags));
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Rng::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

Eigen::MatrixXd gaussian_panel(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                               std::initializer_list<std::uint64_t> tags) {
  Eigen::MatrixXd z(rows, cols);
  const std::uint64_t key = stream_key(seed, tags);
  parallel_for(0, cols, [&](Eigen::Index c) {
    Rng rng(mix64(key ^ mix64(static_cast<std::uint64_t>(c) + 0x2545f4914f6cdd1dULL)));
    for (Eigen::Index r = 0; r < rows; ++r) z(r, c) = rng.normal();
  });
  return z;
}

}  // namespace pps
