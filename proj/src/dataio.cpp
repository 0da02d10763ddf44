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

#include "fockqnn/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>

#include <zlib.h>

namespace fockqnn {

namespace {

std::string at_offset(const std::string &what, std::size_t offset) {
    return what + " at byte offset " + std::to_string(offset);
}

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    if (bytes.size() < offset + 4) {
        throw DataError(at_offset("truncated IDX header", bytes.size()));
    }
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(Bytes &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void check_magic(std::uint32_t magic, std::uint32_t expected) {
    if (magic != expected) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "bad IDX magic 0x%08X, expected 0x%08X", magic, expected);
        throw DataError(at_offset(buf, 0));
    }
}

void check_payload(std::span<const std::uint8_t> bytes, std::size_t header, std::size_t needed) {
    if (bytes.size() < header + needed) {
        throw DataError(at_offset("IDX payload truncated: declared " + std::to_string(needed) +
                                      " bytes, data ends",
                                  bytes.size()));
    }
}

std::filesystem::path find_file(const std::filesystem::path &dir, const std::string &stem) {
    for (const std::string &name : {stem, stem + ".gz"}) {
        const auto p = dir / name;
        if (std::filesystem::is_regular_file(p)) {
            return p;
        }
    }
    throw DataError("missing " + stem + "[.gz] in " + dir.string());
}

} // namespace

void Dataset::validate() const {
    if (images.size() != labels.size()) {
        throw DataError("image count " + std::to_string(images.size()) + " != label count " +
                        std::to_string(labels.size()));
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != kImagePixels) {
            throw DataError("image " + std::to_string(i) + " does not have 784 pixels");
        }
        for (double v : images[i]) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw DataError("pixel outside [0, 1] in image " + std::to_string(i));
            }
        }
        if (labels[i] < 0 || labels[i] >= kDigitClasses) {
            throw DataError("label outside 0..9 at sample " + std::to_string(i));
        }
    }
}

std::vector<Image> parse_idx_images(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kHeader = 16;
    check_magic(read_be32(bytes, 0), kIdxImageMagic);
    const std::uint32_t count = read_be32(bytes, 4);
    const std::uint32_t rows = read_be32(bytes, 8);
    const std::uint32_t cols = read_be32(bytes, 12);
    if (rows != kImageSide || cols != kImageSide) {
        throw DataError(at_offset("image dims " + std::to_string(rows) + "x" + std::to_string(cols) +
                                      ", expected 28x28",
                                  8));
    }
    check_payload(bytes, kHeader, std::size_t{count} * kImagePixels);
    std::vector<Image> images(count, Image(kImagePixels));
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t base = kHeader + i * kImagePixels;
        for (std::size_t j = 0; j < kImagePixels; ++j) {
            images[i][j] = bytes[base + j] / 255.0;
        }
    }
    return images;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kHeader = 8;
    check_magic(read_be32(bytes, 0), kIdxLabelMagic);
    const std::uint32_t count = read_be32(bytes, 4);
    check_payload(bytes, kHeader, count);
    std::vector<int> labels(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int v = bytes[kHeader + i];
        if (v >= kDigitClasses) {
            throw DataError(at_offset("label " + std::to_string(v) + " outside 0..9", kHeader + i));
        }
        labels[i] = v;
    }
    return labels;
}

Bytes serialize_idx_images(const std::vector<Image> &images) {
    Bytes out;
    out.reserve(16 + images.size() * kImagePixels);
    write_be32(out, kIdxImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.size()));
    write_be32(out, kImageSide);
    write_be32(out, kImageSide);
    for (const Image &img : images) {
        if (img.size() != kImagePixels) {
            throw DataError("image does not have 784 pixels");
        }
        for (double v : img) {
            out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
        }
    }
    return out;
}

Bytes serialize_idx_labels(const std::vector<int> &labels) {
    Bytes out;
    out.reserve(8 + labels.size());
    write_be32(out, kIdxLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int v : labels) {
        if (v < 0 || v >= kDigitClasses) {
            throw DataError("label outside 0..9");
        }
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

Bytes maybe_gunzip(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 0x1F || bytes[1] != 0x8B) {
        return Bytes(bytes.begin(), bytes.end());
    }
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) {
        throw DataError("zlib initialisation failed");
    }
    zs.next_in = const_cast<Bytef *>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    Bytes out;
    std::uint8_t chunk[1 << 16];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = chunk;
        zs.avail_out = sizeof chunk;
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            const std::size_t offset = zs.total_in;
            inflateEnd(&zs);
            throw DataError(at_offset("corrupt gzip stream", offset));
        }
        out.insert(out.end(), chunk, chunk + (sizeof chunk - zs.avail_out));
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            const std::size_t offset = zs.total_in;
            inflateEnd(&zs);
            throw DataError(at_offset("truncated gzip stream", offset));
        }
    }
    inflateEnd(&zs);
    return out;
}

Bytes read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Dataset make_dataset(std::vector<Image> images, std::vector<int> labels) {
    Dataset d{std::move(images), std::move(labels)};
    d.validate();
    return d;
}

Dataset load_mnist(const std::filesystem::path &dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("MNIST directory not found: " + dir.string());
    }
    const Bytes img = maybe_gunzip(read_file(find_file(dir, "train-images-idx3-ubyte")));
    const Bytes lbl = maybe_gunzip(read_file(find_file(dir, "train-labels-idx1-ubyte")));
    return make_dataset(parse_idx_images(img), parse_idx_labels(lbl));
}

std::vector<std::size_t> select_balanced(const std::vector<int> &labels, int total, int classes,
                                         std::uint64_t seed,
                                         const std::vector<std::size_t> &exclude) {
    if (classes < 1 || classes > kDigitClasses) {
        throw std::invalid_argument("classes must be in 1..10");
    }
    if (total < 1) {
        throw std::invalid_argument("total must be positive");
    }
    std::vector<bool> banned(labels.size(), false);
    for (std::size_t i : exclude) {
        if (i < banned.size()) {
            banned[i] = true;
        }
    }
    std::vector<std::vector<std::size_t>> pools(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!banned[i] && labels[i] >= 0 && labels[i] < classes) {
            pools[static_cast<std::size_t>(labels[i])].push_back(i);
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> picked;
    picked.reserve(static_cast<std::size_t>(total));
    for (int c = 0; c < classes; ++c) {
        const auto quota = static_cast<std::size_t>(total / classes + (c < total % classes ? 1 : 0));
        auto &pool = pools[static_cast<std::size_t>(c)];
        if (pool.size() < quota) {
            throw DataError("class " + std::to_string(c) + " has " + std::to_string(pool.size()) +
                            " samples, need " + std::to_string(quota));
        }
        // Partial Fisher-Yates with explicit index draws keeps the result
        // independent of the standard library's shuffle implementation.
        for (std::size_t k = 0; k < quota; ++k) {
            const std::size_t j = k + static_cast<std::size_t>(rng() % (pool.size() - k));
            std::swap(pool[k], pool[j]);
        }
        picked.insert(picked.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(quota));
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

Dataset subset(const Dataset &data, const std::vector<std::size_t> &indices) {
    Dataset out;
    out.images.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        out.images.push_back(data.images.at(i));
        out.labels.push_back(data.labels.at(i));
    }
    return out;
}

Dataset take_balanced(const Dataset &data, int total, int classes, std::uint64_t seed) {
    return subset(data, select_balanced(data.labels, total, classes, seed));
}

} // namespace fockqnn
