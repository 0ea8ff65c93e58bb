#ifndef CARNOTKIT_CLOUD_IO_HPP
#define CARNOTKIT_CLOUD_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "carnotkit/semigroup.hpp"

namespace carnotkit {

enum class CloudFormat { csv, json };

/// CSV: header row of basis labels, then one row per point with 17
/// significant digits. JSON: object with algebra, nu, seed, params,
/// points, and the generating control of every point. Both are
/// byte-stable for a fixed seed and build.
void export_cloud(const SemigroupCloud& cloud, std::ostream& out, CloudFormat format);
void export_cloud_file(const SemigroupCloud& cloud, const std::string& path, CloudFormat format);

/// Reads a point set from a CSV or JSON cloud file (sniffed by leading
/// character). Coordinate count must match the algebra dimension.
std::vector<DblElement> load_points(const AlgebraPtr& alg, const std::string& path);
std::vector<DblElement> parse_points(const AlgebraPtr& alg, const std::string& content);

}  // namespace carnotkit

#endif
