// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0
//
// PCD v0.7 (ascii + binary) read/write, ascii PLY import, and uniform
// downsampling.

#ifndef DYNAHULL_CLOUD_IO_HPP_
#define DYNAHULL_CLOUD_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "dynahull/point_cloud.hpp"

namespace dynahull {

enum class CloudFormat { kAuto, kPcdAscii, kPcdBinary, kPlyAscii };

CloudFormat parse_cloud_format(std::string_view name);

// Fields other than x/y/z/label are skipped with a warning. Throws
// Error(kMalformedHeader) for missing FIELDS/POINTS/DATA or x/y/z, and
// Error(kNonFiniteCoordinate) for NaN/Inf coordinates. A zero-point cloud
// is valid.
PointCloud load_cloud(const std::filesystem::path& path,
                      CloudFormat format = CloudFormat::kAuto);

// Writes PCD v0.7 with FIELDS x y z [label]. Coordinates are stored as
// FLOAT64 so binary round trips are exact; ascii prints 9 significant
// digits. kAuto writes binary. PLY output is not supported.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path,
                CloudFormat format = CloudFormat::kPcdBinary);

// Labels sidecar: a JSON array of 0/1 values.
std::vector<MotionLabel> load_label_sidecar(const std::filesystem::path& path);

// min(n, size) points drawn uniformly without replacement, kept in their
// original relative order. Deterministic for a fixed seed.
PointCloud downsample_uniform(const PointCloud& cloud, std::size_t n,
                              std::uint64_t seed);

// The index set downsample_uniform() selects, ascending.
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n,
                                        std::uint64_t seed);

}  // namespace dynahull

#endif  // DYNAHULL_CLOUD_IO_HPP_
