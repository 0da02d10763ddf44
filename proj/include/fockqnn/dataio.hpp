// Copyright 2026 The fockqnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * MNIST ingestion from IDX files (optionally gzip-wrapped) and seeded,
 * class-balanced subset selection.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockqnn {

/// Malformed or missing data. Parser messages carry the failing byte offset.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr int kImageSide = 28;
inline constexpr int kImagePixels = kImageSide * kImageSide;
inline constexpr int kDigitClasses = 10;

using Bytes = std::vector<std::uint8_t>;
using Image = std::vector<double>;

struct Dataset {
    std::vector<Image> images; // 784 values in [0, 1]
    std::vector<int> labels;   // 0..9

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    /// Throws DataError on length mismatch or out-of-range values.
    void validate() const;
};

/// Pixels are divided by 255.
std::vector<Image> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

/// Inverse of the parsers; pixels are rounded back to bytes.
Bytes serialize_idx_images(const std::vector<Image> &images);
Bytes serialize_idx_labels(const std::vector<int> &labels);

/// Inflates when the payload starts with the gzip magic 1F 8B, else returns it unchanged.
Bytes maybe_gunzip(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path &path);

/// Pairs images with labels; throws DataError when the counts differ.
Dataset make_dataset(std::vector<Image> images, std::vector<int> labels);

/// Reads train-images-idx3-ubyte and train-labels-idx1-ubyte (each optionally
/// with a .gz suffix) from `dir`.
Dataset load_mnist(const std::filesystem::path &dir);

/// Indices (ascending) of a seeded selection of `total` samples from classes
/// 0..classes-1. Class c gets total/classes samples, plus one for the first
/// total % classes classes. Indices in `exclude` are never chosen.
std::vector<std::size_t> select_balanced(const std::vector<int> &labels, int total, int classes,
                                         std::uint64_t seed,
                                         const std::vector<std::size_t> &exclude = {});

Dataset subset(const Dataset &data, const std::vector<std::size_t> &indices);

Dataset take_balanced(const Dataset &data, int total, int classes, std::uint64_t seed);

} // namespace fockqnn
