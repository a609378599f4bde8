// Copyright 2026 The PMI Channel Estimation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pmi/dataset.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pmi/linalg.hpp"

namespace pmi {

namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void matrix(const CMat& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        f64(m(i, j).real());
        f64(m(i, j).imag());
      }
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  std::uint64_t offset() const { return pos_; }

  void need(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) throw FormatError(std::string("truncated file while reading ") + what, pos_);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return in_[pos_++];
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64(const char* what) {
    need(8, what);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  CMat matrix(Eigen::Index rows, Eigen::Index cols, const char* what) {
    CMat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) {
        const std::uint64_t at = pos_;
        const double re = f64(what);
        const double im = f64(what);
        if (!std::isfinite(re) || !std::isfinite(im)) throw FormatError(std::string("non-finite value in ") + what, at);
        m(i, j) = cd(re, im);
      }
    return m;
  }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_dataset(const ChannelDataset& data) {
  require(data.d >= 1 && data.n_r >= 1, "encode_dataset: dimensions must be >= 1");
  require(data.covariances.empty() || data.covariances.size() == data.channels.size(),
          "encode_dataset: covariance count must match channel count");
  Writer w;
  w.bytes(kDatasetMagic, sizeof(kDatasetMagic));
  w.u32(kDatasetVersion);
  w.u32(static_cast<std::uint32_t>(data.d));
  w.u32(static_cast<std::uint32_t>(data.n_r));
  w.u32(static_cast<std::uint32_t>(data.channels.size()));
  w.u8(data.has_covariance() ? 1 : 0);
  for (const auto& h : data.channels) {
    require(h.rows() == data.d && h.cols() == data.n_r, "encode_dataset: channel has the wrong shape");
    require(h.allFinite(), "encode_dataset: channel entries must be finite");
    w.matrix(h);
  }
  for (const auto& s : data.covariances) {
    require(s.rows() == data.d && s.cols() == data.d, "encode_dataset: covariance has the wrong shape");
    require(s.allFinite(), "encode_dataset: covariance entries must be finite");
    w.matrix(s);
  }
  return w.take();
}

ChannelDataset decode_dataset(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(sizeof(kDatasetMagic), "magic");
  if (std::memcmp(bytes.data(), kDatasetMagic, sizeof(kDatasetMagic)) != 0) throw FormatError("bad magic", 0);
  for (std::size_t i = 0; i < sizeof(kDatasetMagic); ++i) r.u8("magic");
  const std::uint64_t version_at = r.offset();
  const std::uint32_t version = r.u32("version");
  if (version != kDatasetVersion)
    throw FormatError("unsupported version " + std::to_string(version), version_at);
  ChannelDataset data;
  const std::uint64_t dims_at = r.offset();
  data.d = r.u32("d");
  data.n_r = r.u32("N_r");
  const std::uint32_t m = r.u32("sample count");
  if (data.d == 0 || data.n_r == 0) throw FormatError("zero dimension in header", dims_at);
  const std::uint64_t flag_at = r.offset();
  const std::uint8_t has_cov = r.u8("covariance flag");
  if (has_cov > 1) throw FormatError("covariance flag must be 0 or 1", flag_at);

  // validate the total length before allocating
  const std::uint64_t per_channel = static_cast<std::uint64_t>(data.d) * data.n_r * 16;
  const std::uint64_t per_cov = static_cast<std::uint64_t>(data.d) * data.d * 16;
  const std::uint64_t payload = m * (per_channel + (has_cov ? per_cov : 0));
  const std::uint64_t available = bytes.size() - r.offset();
  if (available < payload)
    throw FormatError("truncated payload: header announces " + std::to_string(payload) + " bytes, found " +
                          std::to_string(available),
                      bytes.size());
  if (available > payload) throw FormatError("trailing bytes after payload", r.offset() + payload);

  data.channels.reserve(m);
  for (std::uint32_t s = 0; s < m; ++s) data.channels.push_back(r.matrix(data.d, data.n_r, "channel block"));
  if (has_cov) {
    data.covariances.reserve(m);
    for (std::uint32_t s = 0; s < m; ++s) {
      const std::uint64_t at = r.offset();
      CMat c = r.matrix(data.d, data.d, "covariance block");
      if (!is_hermitian(c)) throw FormatError("covariance block is not Hermitian", at);
      data.covariances.push_back(std::move(c));
    }
  }
  return data;
}

void write_dataset(const std::string& path, const ChannelDataset& data) {
  const auto bytes = encode_dataset(data);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

ChannelDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_dataset(bytes);
}

}  // namespace pmi
