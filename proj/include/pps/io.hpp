#pragma once

#include "pps/core_types.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace pps::io {

// PPSQ v1 correspondence files:
//   PPSQ v1
//   N
//   K_1 ... K_N
//   i j k l        one line per stored match, 1-based, i < j
void write_correspondence(std::ostream& out, const CorrespondenceMatrix& q);
CorrespondenceMatrix read_correspondence(std::istream& in, const std::string& name = "<stream>");
void save_correspondence(const std::string& path, const CorrespondenceMatrix& q);
CorrespondenceMatrix load_correspondence(const std::string& path);

// PPSR v1 registration / ground-truth files:
//   PPSR v1
//   N M
//   K_1 ... K_N
//   i k m          one line per keypoint, 1-based
struct Registration {
  BlockPartition partition;
  int registry_size = 0;
  std::vector<int> assignment;  // 0-based registry index per global keypoint
};
void write_registration(std::ostream& out, const Registration& r);
Registration read_registration(std::istream& in, const std::string& name = "<stream>");
void save_registration(const std::string& path, const Registration& r);
Registration load_registration(const std::string& path);

Registration to_registration(const GroundTruth& truth);
GroundTruth to_ground_truth(const Registration& r);

// Dual files: one JSON header line
//   {"format":"PPSD v1","formulation":"strong"|"weak","beta":...,"iteration":t,"blocks":[K_1,...]}
// followed by little-endian doubles: strong stores each Lambda_i column-major,
// weak stores lambda (L values) then mu (N values).
struct DualFile {
  BlockPartition partition;
  double beta = 0.0;
  std::variant<DualStrong, DualWeak> duals;

  bool strong() const noexcept { return std::holds_alternative<DualStrong>(duals); }
};
void write_duals(std::ostream& out, const DualFile& d);
DualFile read_duals(std::istream& in, const std::string& name = "<stream>");
void save_duals(const std::string& path, const DualFile& d);
DualFile load_duals(const std::string& path);

// Writes `content` to `path`, throwing Io on failure.
void save_text(const std::string& path, const std::string& content);

// Shortest round-trip representation of x.
std::string format_double(double x);

}  // namespace pps::io
