#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace pps {

// Counter-based generator: SplitMix64 over a key derived from (seed, stream
// tags). Every (seed, tags) pair names an independent, reproducible stream,
// so results never depend on the order in which streams are consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();

  std::vector<int> permutation(int n);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

// L x S standard Gaussian panel; column c is drawn from stream (seed, tags..., c).
Eigen::MatrixXd gaussian_panel(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                               std::initializer_list<std::uint64_t> tags);

// Stream tags used across the library.
namespace stream_tag {
inline constexpr std::uint64_t kStrongPanel = 0x5354524f4e47ULL;
inline constexpr std::uint64_t kWeakPanel = 0x5745414bULL;
inline constexpr std::uint64_t kLanczos = 0x4c414e43ULL;
inline constexpr std::uint64_t kMasked = 0x4d41534bULL;
inline constexpr std::uint64_t kEncoding = 0x454e43ULL;
inline constexpr std::uint64_t kPivot = 0x5049564fULL;
inline constexpr std::uint64_t kSynthSizes = 0x53495a45ULL;
inline constexpr std::uint64_t kSynthTruth = 0x54525554ULL;
inline constexpr std::uint64_t kSynthPair = 0x50414952ULL;
inline constexpr std::uint64_t kSpectral = 0x53504543ULL;
inline constexpr std::uint64_t kGmm = 0x474d4dULL;
}  // namespace stream_tag

}  // namespace pps
