#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "bmild/field.hpp"
#include "bmild/norms.hpp"

namespace bmild {

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Flat field snapshot: "BMSF", version u32, n u32, L f64, t f64, component count u32,
/// then each component as n^3 f64 values, x fastest. Little-endian.
struct Snapshot {
  std::uint32_t n = 0;
  double box_length = 0.0;
  double t = 0.0;
  std::vector<std::vector<double>> components;
};

void write_snapshot(const std::string& path, const Snapshot& snap);
/// Throws FormatError on bad magic, unsupported version, or truncated/oversized files.
Snapshot read_snapshot(const std::string& path);

Snapshot make_snapshot(const VectorField& u, double t);
Snapshot make_snapshot(const ScalarField& theta, double t);
Snapshot make_snapshot(const VectorField& u, const ScalarField& theta, double t);
VectorField snapshot_velocity(const Snapshot& snap);  // components 0..2
ScalarField snapshot_scalar(const Snapshot& snap, std::size_t component = 0);

/// CSV report: '#'-prefixed key=value metadata lines, then the header row. Numbers are
/// written with 17 significant digits in the classic locale.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header,
            const std::map<std::string, std::string>& metadata);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(bool v);
  CsvWriter& cell(const std::string& v);
  CsvWriter& cell(const char* v) { return cell(std::string(v)); }
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

std::string format_double(double v);

/// One profile: header t,value,weighted_value.
void write_profile_csv(const std::string& path, const NormProfile& profile,
                       const std::map<std::string, std::string>& metadata);

}  // namespace bmild
