#include "dgsam/synthetic_dataset.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dgsam/errors.hpp"
#include "dgsam/seeded_rng.hpp"

namespace dgsam {

SyntheticDomainDataset::SyntheticDomainDataset(std::vector<DomainData> domains)
    : domains_(std::move(domains)) {
  if (domains_.empty()) throw ConfigError("SyntheticDomainDataset: no domains");
  for (const auto& d : domains_) {
    if (d.points.empty()) throw ConfigError("SyntheticDomainDataset: empty domain");
  }
}

SyntheticDomainDataset SyntheticDomainDataset::generate(const SyntheticDatasetParams& params) {
  if (params.domains == 0 || params.points_per_domain < 2) {
    throw ConfigError("synthetic dataset: need >= 1 domain and >= 2 points per domain");
  }
  SeededRng rng(params.seed);
  std::vector<DomainData> domains(params.domains);
  for (std::size_t i = 0; i < params.domains; ++i) {
    const double angle = params.rotation_step * static_cast<double>(i);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double shift = params.shift_step * static_cast<double>(i);
    auto& pts = domains[i].points;
    pts.reserve(params.points_per_domain);
    for (std::size_t n = 0; n < params.points_per_domain; ++n) {
      const int label = static_cast<int>(n % 2);
      const double cx = (label == 1 ? 0.5 : -0.5) * params.separation;
      const double px = cx + params.blob_std * rng.normal();
      const double py = params.blob_std * rng.normal();
      pts.push_back({c * px - s * py, s * px + c * py + shift, label});
    }
  }
  return SyntheticDomainDataset(std::move(domains));
}

void SyntheticDomainDataset::write_csv(std::ostream& out) const {
  out << "domain,x1,x2,label\n";
  out.precision(17);
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    for (const auto& p : domains_[i].points) {
      out << i << ',' << p.x1 << ',' << p.x2 << ',' << p.label << '\n';
    }
  }
}

SyntheticDomainDataset SyntheticDomainDataset::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "domain,x1,x2,label") {
    throw ConfigError("dataset CSV: expected header 'domain,x1,x2,label'");
  }
  std::vector<DomainData> domains;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c, d;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') ||
        !std::getline(fields, c, ',') || !std::getline(fields, d)) {
      throw ConfigError("dataset CSV: malformed row " + std::to_string(row));
    }
    try {
      const auto domain = static_cast<std::size_t>(std::stoul(a));
      const int label = std::stoi(d);
      if (label != 0 && label != 1) throw ConfigError("label must be 0 or 1");
      if (domain >= domains.size()) domains.resize(domain + 1);
      domains[domain].points.push_back({std::stod(b), std::stod(c), label});
    } catch (const std::exception& e) {
      throw ConfigError("dataset CSV: bad row " + std::to_string(row) + ": " + e.what());
    }
  }
  return SyntheticDomainDataset(std::move(domains));
}

}  // namespace dgsam
