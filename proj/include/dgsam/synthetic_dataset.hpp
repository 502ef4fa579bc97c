#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dgsam {

struct LabeledPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  int label = 0;  // 0 or 1
};

struct DomainData {
  std::vector<LabeledPoint> points;
};

/// Geometry of the shifted-domain blob task. Domain i rotates the two class
/// blobs (centered at -/+ separation/2 along the first axis) by
/// rotation_step * i radians and shifts them by shift_step * i along the
/// second axis.
struct SyntheticDatasetParams {
  std::size_t domains = 3;
  std::size_t points_per_domain = 500;
  double separation = 3.0;
  double blob_std = 1.0;
  double rotation_step = 0.6;
  double shift_step = 0.5;
  std::uint64_t seed = 7;
};

class SyntheticDomainDataset {
 public:
  static SyntheticDomainDataset generate(const SyntheticDatasetParams& params);
  explicit SyntheticDomainDataset(std::vector<DomainData> domains);

  std::size_t domain_count() const { return domains_.size(); }
  const DomainData& domain(std::size_t i) const { return domains_.at(i); }

  /// CSV with header `domain,x1,x2,label`; domains are 0-based.
  void write_csv(std::ostream& out) const;
  static SyntheticDomainDataset read_csv(std::istream& in);

 private:
  std::vector<DomainData> domains_;
};

}  // namespace dgsam
