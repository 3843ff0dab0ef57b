#include "bmild/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <locale>

#include "bmild/error.hpp"

namespace bmild {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes little-endian");

namespace {

constexpr char kMagic[4] = {'B', 'M', 'S', 'F'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8 + 4;

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T take(const std::vector<char>& buf, std::size_t& pos) {
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof v);
  pos += sizeof v;
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
  const std::size_t cells = static_cast<std::size_t>(snap.n) * snap.n * snap.n;
  for (const auto& c : snap.components) {
    if (c.size() != cells) throw FormatError("snapshot component size does not match n^3");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  put(out, kSnapshotVersion);
  put(out, snap.n);
  put(out, snap.box_length);
  put(out, snap.t);
  put(out, static_cast<std::uint32_t>(snap.components.size()));
  for (const auto& c : snap.components) {
    out.write(reinterpret_cast<const char*>(c.data()),
              static_cast<std::streamsize>(c.size() * sizeof(double)));
  }
  if (!out) throw FormatError("write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot '" + path + "'");
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes) throw FormatError("snapshot '" + path + "' is truncated (header)");
  if (std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw FormatError("snapshot '" + path + "' has bad magic (expected BMSF)");
  }
  std::size_t pos = 4;
  const auto version = take<std::uint32_t>(buf, pos);
  if (version != kSnapshotVersion) {
    throw FormatError("snapshot '" + path + "': unsupported version " + std::to_string(version));
  }
  Snapshot snap;
  snap.n = take<std::uint32_t>(buf, pos);
  snap.box_length = take<double>(buf, pos);
  snap.t = take<double>(buf, pos);
  const auto count = take<std::uint32_t>(buf, pos);
  const std::size_t cells = static_cast<std::size_t>(snap.n) * snap.n * snap.n;
  const std::size_t expected = kHeaderBytes + static_cast<std::size_t>(count) * cells * sizeof(double);
  if (buf.size() < expected) throw FormatError("snapshot '" + path + "' is truncated");
  if (buf.size() > expected) throw FormatError("snapshot '" + path + "' has trailing bytes");
  snap.components.resize(count);
  for (auto& c : snap.components) {
    c.resize(cells);
    std::memcpy(c.data(), buf.data() + pos, cells * sizeof(double));
    pos += cells * sizeof(double);
  }
  return snap;
}

namespace {
std::vector<double> samples_of(const ScalarField& f) {
  const ScalarField r = to_real(f);
  return {r.values().begin(), r.values().end()};
}
}  // namespace

Snapshot make_snapshot(const VectorField& u, double t) {
  Snapshot s{static_cast<std::uint32_t>(u.grid().n()), u.grid().box_length(), t, {}};
  for (int a = 0; a < 3; ++a) s.components.push_back(samples_of(u[a]));
  return s;
}

Snapshot make_snapshot(const ScalarField& theta, double t) {
  return {static_cast<std::uint32_t>(theta.grid().n()), theta.grid().box_length(), t,
          {samples_of(theta)}};
}

Snapshot make_snapshot(const VectorField& u, const ScalarField& theta, double t) {
  Snapshot s = make_snapshot(u, t);
  s.components.push_back(samples_of(theta));
  return s;
}

ScalarField snapshot_scalar(const Snapshot& snap, std::size_t component) {
  if (component >= snap.components.size()) throw FormatError("snapshot has too few components");
  const Grid3 g = make_grid(static_cast<int>(snap.n), snap.box_length);
  ScalarField f(g);
  std::copy(snap.components[component].begin(), snap.components[component].end(),
            f.values().begin());
  return f;
}

VectorField snapshot_velocity(const Snapshot& snap) {
  if (snap.components.size() < 3) throw FormatError("velocity snapshot needs 3 components");
  return VectorField(snapshot_scalar(snap, 0), snapshot_scalar(snap, 1), snapshot_scalar(snap, 2));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header,
                     const std::map<std::string, std::string>& metadata)
    : out_(path, std::ios::trunc), columns_(header.size()) {
  if (!out_) throw FormatError("cannot open '" + path + "' for writing");
  out_.imbue(std::locale::classic());
  for (const auto& [k, v] : metadata) out_ << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }
CsvWriter& CsvWriter::cell(bool v) { return cell(std::string(v ? "true" : "false")); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (in_row_ == columns_) throw FormatError("CSV row has more cells than the header");
  out_ << (in_row_ ? "," : "") << v;
  ++in_row_;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw FormatError("CSV row has fewer cells than the header");
  out_ << "\n";
  in_row_ = 0;
}

void write_profile_csv(const std::string& path, const NormProfile& profile,
                       const std::map<std::string, std::string>& metadata) {
  auto meta = metadata;
  meta["norm"] = profile.kind.name();
  CsvWriter csv(path, {"t", "value", "weighted_value"}, meta);
  for (const auto& s : profile.samples) {
    csv.cell(s.t).cell(s.value).cell(s.weighted).end_row();
  }
}

}  // namespace bmild
