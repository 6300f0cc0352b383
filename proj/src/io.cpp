#include "pps/io.hpp"

#include "pps/error.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pps::io {

namespace {

constexpr const char* kCorrespondenceMagic = "PPSQ v1";
constexpr const char* kRegistrationMagic = "PPSR v1";
constexpr const char* kDualMagic = "PPSD v1";

class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      return true;
    }
    return false;
  }

  std::string require_line(const char* what) {
    std::string line;
    if (!next(line)) fail(ErrorCode::Parse, where() + ": missing " + what);
    return line;
  }

  [[noreturn]] void error(const std::string& msg) const { fail(ErrorCode::Parse, where() + ": " + msg); }

  std::string where() const { return name_ + ":" + std::to_string(number_); }

 private:
  std::istream& in_;
  std::string name_;
  int number_ = 0;
};

std::vector<long long> parse_ints(const LineReader& reader, const std::string& line) {
  std::vector<long long> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || (ptr < end && *ptr != ' ' && *ptr != '\t'))
      reader.error("expected integers, got '" + line + "'");
    out.push_back(v);
    p = ptr;
  }
  return out;
}

void expect_magic(LineReader& reader, const char* magic) {
  const std::string line = reader.require_line("header");
  if (line != magic) reader.error(std::string("expected header '") + magic + "', got '" + line + "'");
}

BlockPartition read_sizes(LineReader& reader, long long n) {
  const auto sizes = parse_ints(reader, reader.require_line("block sizes"));
  if (static_cast<long long>(sizes.size()) != n)
    reader.error("expected " + std::to_string(n) + " block sizes, got " + std::to_string(sizes.size()));
  std::vector<int> k;
  for (long long s : sizes) {
    if (s < 1 || s > (1LL << 30)) reader.error("block size must be positive");
    k.push_back(static_cast<int>(s));
  }
  return BlockPartition(std::move(k));
}

void write_sizes(std::ostream& out, const BlockPartition& part) {
  for (int i = 0; i < part.images(); ++i) out << (i ? " " : "") << part.size(i);
  out << '\n';
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  require(in.good(), ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  require(out.good(), ErrorCode::Io, "write to '" + path + "' failed");
}

void put_doubles(std::ostream& out, const double* data, std::size_t count) {
  static_assert(std::endian::native == std::endian::little, "dual files assume a little-endian host");
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void get_doubles(std::istream& in, double* data, std::size_t count, const std::string& name) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  require(static_cast<std::size_t>(in.gcount()) == count * sizeof(double), ErrorCode::Parse,
          name + ": dual payload truncated");
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void save_text(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  finish(out, path);
}

// --- PPSQ ---------------------------------------------------------------------

void write_correspondence(std::ostream& out, const CorrespondenceMatrix& q) {
  const BlockPartition& part = q.partition();
  out << kCorrespondenceMagic << '\n' << part.images() << '\n';
  write_sizes(out, part);
  for (const Match& m : q.matches())
    out << m.a.image + 1 << ' ' << m.b.image + 1 << ' ' << m.a.index + 1 << ' ' << m.b.index + 1 << '\n';
}

CorrespondenceMatrix read_correspondence(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  expect_magic(reader, kCorrespondenceMagic);
  const auto n = parse_ints(reader, reader.require_line("image count"));
  if (n.size() != 1 || n[0] < 1) reader.error("expected a positive image count");
  BlockPartition part = read_sizes(reader, n[0]);
  std::vector<Match> matches;
  std::string line;
  while (reader.next(line)) {
    const auto v = parse_ints(reader, line);
    if (v.size() != 4) reader.error("expected 'i j k l', got '" + line + "'");
    for (long long x : v)
      if (x < 1 || x > (1LL << 30)) reader.error("indices are 1-based positive integers");
    matches.push_back(Match{{static_cast<int>(v[0] - 1), static_cast<int>(v[2] - 1)},
                            {static_cast<int>(v[1] - 1), static_cast<int>(v[3] - 1)}});
  }
  try {
    return CorrespondenceMatrix::build(std::move(part), std::move(matches));
  } catch (const Error& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    fail(e.code(), name + ": " + (colon == std::string::npos ? msg : msg.substr(colon + 2)));
  }
}

void save_correspondence(const std::string& path, const CorrespondenceMatrix& q) {
  auto out = open_out(path);
  write_correspondence(out, q);
  finish(out, path);
}

CorrespondenceMatrix load_correspondence(const std::string& path) {
  auto in = open_in(path);
  return read_correspondence(in, path);
}

// --- PPSR ---------------------------------------------------------------------

void write_registration(std::ostream& out, const Registration& r) {
  const BlockPartition& part = r.partition;
  out << kRegistrationMagic << '\n' << part.images() << ' ' << r.registry_size << '\n';
  write_sizes(out, part);
  for (int i = 0; i < part.images(); ++i)
    for (int k = 0; k < part.size(i); ++k)
      out << i + 1 << ' ' << k + 1 << ' ' << r.assignment[static_cast<std::size_t>(part.global(i, k))] + 1 << '\n';
}

Registration read_registration(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  expect_magic(reader, kRegistrationMagic);
  const auto nm = parse_ints(reader, reader.require_line("'N M' line"));
  if (nm.size() != 2 || nm[0] < 1 || nm[1] < 0 || nm[1] > (1LL << 30)) reader.error("expected 'N M'");
  Registration r;
  r.partition = read_sizes(reader, nm[0]);
  r.registry_size = static_cast<int>(nm[1]);
  r.assignment.assign(static_cast<std::size_t>(r.partition.total()), -1);
  std::string line;
  while (reader.next(line)) {
    const auto v = parse_ints(reader, line);
    if (v.size() != 3) reader.error("expected 'i k m', got '" + line + "'");
    if (v[0] < 1 || v[0] > r.partition.images()) reader.error("image index out of range");
    const int i = static_cast<int>(v[0] - 1);
    if (v[1] < 1 || v[1] > r.partition.size(i)) reader.error("keypoint index out of range");
    if (v[2] < 1 || v[2] > r.registry_size) reader.error("registry index out of range");
    int& slot = r.assignment[static_cast<std::size_t>(r.partition.global(i, static_cast<int>(v[1] - 1)))];
    if (slot >= 0) reader.error("keypoint assigned twice");
    slot = static_cast<int>(v[2] - 1);
  }
  for (int m : r.assignment)
    if (m < 0) fail(ErrorCode::Parse, name + ": not every keypoint is assigned");
  return r;
}

void save_registration(const std::string& path, const Registration& r) {
  auto out = open_out(path);
  write_registration(out, r);
  finish(out, path);
}

Registration load_registration(const std::string& path) {
  auto in = open_in(path);
  return read_registration(in, path);
}

Registration to_registration(const GroundTruth& truth) {
  return Registration{truth.partition(), truth.registry_size(),
                      std::vector<int>(truth.assignment().begin(), truth.assignment().end())};
}

GroundTruth to_ground_truth(const Registration& r) { return GroundTruth(r.partition, r.registry_size, r.assignment); }

// --- Duals --------------------------------------------------------------------

void write_duals(std::ostream& out, const DualFile& d) {
  nlohmann::ordered_json header;
  header["format"] = kDualMagic;
  header["formulation"] = d.strong() ? "strong" : "weak";
  header["beta"] = d.beta;
  header["iteration"] = d.strong() ? std::get<DualStrong>(d.duals).iteration : std::get<DualWeak>(d.duals).iteration;
  header["blocks"] = std::vector<int>(d.partition.sizes().begin(), d.partition.sizes().end());
  out << header.dump() << '\n';
  if (const auto* s = std::get_if<DualStrong>(&d.duals)) {
    for (const MatrixXd& b : s->blocks) put_doubles(out, b.data(), static_cast<std::size_t>(b.size()));
  } else {
    const auto& w = std::get<DualWeak>(d.duals);
    put_doubles(out, w.lambda.data(), static_cast<std::size_t>(w.lambda.size()));
    put_doubles(out, w.mu.data(), static_cast<std::size_t>(w.mu.size()));
  }
}

DualFile read_duals(std::istream& in, const std::string& name) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::Parse, name + ": missing dual header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, name + ": malformed dual header (" + e.what() + ")");
  }
  DualFile d;
  try {
    require(header.at("format").get<std::string>() == kDualMagic, ErrorCode::Parse, name + ": not a PPSD v1 file");
    const auto formulation = header.at("formulation").get<std::string>();
    d.beta = header.at("beta").get<double>();
    const int iteration = header.at("iteration").get<int>();
    d.partition = BlockPartition(header.at("blocks").get<std::vector<int>>());
    if (formulation == "strong") {
      DualStrong s = DualStrong::zeros(d.partition);
      s.iteration = iteration;
      for (MatrixXd& b : s.blocks) get_doubles(in, b.data(), static_cast<std::size_t>(b.size()), name);
      d.duals = std::move(s);
    } else if (formulation == "weak") {
      DualWeak w = DualWeak::zeros(d.partition);
      w.iteration = iteration;
      get_doubles(in, w.lambda.data(), static_cast<std::size_t>(w.lambda.size()), name);
      get_doubles(in, w.mu.data(), static_cast<std::size_t>(w.mu.size()), name);
      d.duals = std::move(w);
    } else {
      fail(ErrorCode::Parse, name + ": unknown formulation '" + formulation + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, name + ": malformed dual header (" + e.what() + ")");
  }
  require(in.peek() == std::char_traits<char>::eof(), ErrorCode::Parse, name + ": trailing bytes after dual payload");
  return d;
}

void save_duals(const std::string& path, const DualFile& d) {
  auto out = open_out(path);
  write_duals(out, d);
  finish(out, path);
}

DualFile load_duals(const std::string& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  return read_duals(in, path);
}

}  // namespace pps::io
