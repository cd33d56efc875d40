// Copyright 2026 The qrec Authors
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

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrec/errors.hpp"
#include "qrec/rng.hpp"

namespace qrec {

/// Absolute tolerance on the unit-norm invariant of ImageVector and
/// QuantumState.
inline constexpr double kNormTolerance = 1e-12;

/// Monochrome raster as parsed from disk. Intensities are stored as doubles
/// (CSV input may be fractional) and satisfy 0 <= p <= maxval.
struct RawImage {
  std::size_t width = 0;
  std::size_t height = 0;
  double maxval = 1.0;
  std::vector<double> pixels;  // row-major, width * height entries

  std::size_t size() const noexcept { return width * height; }
};

enum class ImageFormat { pgm_ascii, pgm_binary, csv };

/// Magic-number sniff for the two PGM variants. Returns nullopt for anything
/// that does not begin with "P2" or "P5".
inline std::optional<ImageFormat> sniff_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') return std::nullopt;
  if (bytes[1] == '2') return ImageFormat::pgm_ascii;
  if (bytes[1] == '5') return ImageFormat::pgm_binary;
  return std::nullopt;
}

namespace detail {

inline bool is_pnm_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

// Token scanner over the full input. '#' starts a comment running to end of
// line; comments count as whitespace. Offsets in errors are absolute.
class PnmCursor {
 public:
  PnmCursor(std::string_view bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t pos() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  void skip_separators() {
    while (!at_end()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (!at_end() && bytes_[pos_] != '\n') ++pos_;
      } else if (is_pnm_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads one unsigned decimal token. `what` names the field for error
  // messages; range violations are reported at the token start.
  std::uint64_t read_uint(const char* what, std::uint64_t min_value,
                          std::uint64_t max_value) {
    skip_separators();
    if (at_end())
      throw ParseError(std::string("truncated input: missing ") + what, pos_);
    const std::size_t start = pos_;
    if (bytes_[pos_] < '0' || bytes_[pos_] > '9')
      throw ParseError(std::string("malformed ") + what, pos_);
    std::uint64_t value = 0;
    while (!at_end() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      const auto digit = static_cast<std::uint64_t>(bytes_[pos_] - '0');
      if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
        throw ParseError(std::string(what) + " overflows", start);
      value = value * 10 + digit;
      ++pos_;
    }
    if (value < min_value || value > max_value)
      throw ParseError(std::string(what) + " out of range", start);
    return value;
  }

  // Exactly one whitespace byte; separates the P5 header from its payload.
  void read_single_space() {
    if (at_end())
      throw ParseError("truncated input: missing payload separator", pos_);
    if (!is_pnm_space(bytes_[pos_]))
      throw ParseError("expected whitespace after maxval", pos_);
    ++pos_;
  }

  std::string_view rest() const { return bytes_.substr(pos_); }

 private:
  std::string_view bytes_;
  std::size_t pos_;
};

// Keep parsed rasters to a sane allocation size.
inline constexpr std::uint64_t kMaxPixels = 1ull << 26;

inline RawImage parse_pgm(std::string_view bytes, bool binary) {
  const auto magic = sniff_pgm(bytes);
  if (!magic) throw ParseError("not a PGM file (expected P2 or P5 magic)", 0);
  const ImageFormat want =
      binary ? ImageFormat::pgm_binary : ImageFormat::pgm_ascii;
  if (*magic != want)
    throw ParseError(binary ? "expected binary PGM (P5), found P2"
                            : "expected ASCII PGM (P2), found P5",
                     0);

  PnmCursor c(bytes, 2);
  const std::uint64_t width = c.read_uint("width", 1, 1ull << 20);
  const std::uint64_t height = c.read_uint("height", 1, 1ull << 20);
  if (width * height > kMaxPixels) throw ParseError("image too large", 2);
  const std::uint64_t maxval =
      c.read_uint("maxval", 1, binary ? 255ull : 65535ull);

  RawImage img;
  img.width = static_cast<std::size_t>(width);
  img.height = static_cast<std::size_t>(height);
  img.maxval = static_cast<double>(maxval);
  const std::size_t npix = img.width * img.height;
  img.pixels.reserve(npix);

  if (!binary) {
    for (std::size_t i = 0; i < npix; ++i)
      img.pixels.push_back(
          static_cast<double>(c.read_uint("pixel", 0, maxval)));
  } else {
    c.read_single_space();
    if (bytes.size() - c.pos() < npix)
      throw ParseError("truncated payload", bytes.size());
    for (std::size_t i = 0; i < npix; ++i) {
      const auto v = static_cast<unsigned char>(bytes[c.pos() + i]);
      if (v > maxval) throw ParseError("pixel out of range", c.pos() + i);
      img.pixels.push_back(static_cast<double>(v));
    }
  }
  return img;
}

inline RawImage parse_csv(std::string_view bytes) {
  RawImage img;
  std::size_t width = 0;
  std::size_t line_start = 0;
  bool seen_row = false;
  bool blank_after_data = false;

  const auto parse_field = [&](std::string_view field, std::size_t offset) {
    std::size_t lead = 0;
    while (lead < field.size() && (field[lead] == ' ' || field[lead] == '\t'))
      ++lead;
    std::size_t tail = field.size();
    while (tail > lead && (field[tail - 1] == ' ' || field[tail - 1] == '\t'))
      --tail;
    const std::string_view body = field.substr(lead, tail - lead);
    if (body.empty()) throw ParseError("empty CSV field", offset);
    double value = 0;
    const auto [ptr, ec] =
        std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size())
      throw ParseError("malformed CSV value", offset + lead);
    if (!std::isfinite(value))
      throw ParseError("non-finite CSV value", offset + lead);
    if (value < 0) throw ParseError("pixel out of range (negative)", offset + lead);
    img.pixels.push_back(value);
  };

  while (line_start <= bytes.size()) {
    std::size_t line_end = bytes.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = bytes.size();
    std::string_view line = bytes.substr(line_start, line_end - line_start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const bool blank =
        line.find_first_not_of(" \t") == std::string_view::npos;
    if (blank) {
      if (seen_row) blank_after_data = true;
    } else {
      if (blank_after_data)
        throw ParseError("blank row inside CSV image", line_start);
      std::size_t field_start = 0;
      std::size_t cols = 0;
      while (true) {
        std::size_t comma = line.find(',', field_start);
        const std::size_t field_end =
            comma == std::string_view::npos ? line.size() : comma;
        parse_field(line.substr(field_start, field_end - field_start),
                    line_start + field_start);
        ++cols;
        if (comma == std::string_view::npos) break;
        field_start = comma + 1;
      }
      if (!seen_row) {
        width = cols;
        seen_row = true;
      } else if (cols != width) {
        throw ParseError("ragged CSV row", line_start);
      }
      ++img.height;
      if (img.height * width > kMaxPixels)
        throw ParseError("image too large", line_start);
    }
    if (line_end == bytes.size()) break;
    line_start = line_end + 1;
  }

  if (!seen_row) throw ParseError("empty CSV image", 0);
  img.width = width;
  img.maxval = std::max(
      1.0, *std::max_element(img.pixels.begin(), img.pixels.end()));
  return img;
}

inline double vec_norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double vec_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

/// Parses `bytes` in the declared format. Throws ParseError carrying the
/// byte offset of the first offending position.
inline RawImage parse_image(std::string_view bytes, ImageFormat format) {
  switch (format) {
    case ImageFormat::pgm_ascii:
      return detail::parse_pgm(bytes, /*binary=*/false);
    case ImageFormat::pgm_binary:
      return detail::parse_pgm(bytes, /*binary=*/true);
    case ImageFormat::csv:
      return detail::parse_csv(bytes);
  }
  throw ConfigError("unknown image format");
}

/// Unit vector on the sphere S^(N-1); the classical representation every
/// image is reduced to before being handed to a recognizer.
class ImageVector {
 public:
  explicit ImageVector(std::vector<double> components)
      : comps_(std::move(components)) {
    if (comps_.empty())
      throw ConfigError("ImageVector requires dimension >= 1");
    const double n = detail::vec_norm(comps_);
    if (std::abs(n - 1.0) > kNormTolerance)
      throw InvariantViolation("ImageVector is not unit length");
  }

  /// Scales `components` to unit length. Throws ZeroVectorError when the
  /// input has no direction to keep.
  static ImageVector normalized(std::vector<double> components) {
    if (components.empty())
      throw ConfigError("ImageVector requires dimension >= 1");
    const double n = detail::vec_norm(components);
    if (n == 0.0) throw ZeroVectorError("cannot normalize a zero vector");
    for (double& x : components) x /= n;
    return ImageVector(std::move(components), unchecked{});
  }

  std::size_t dim() const noexcept { return comps_.size(); }
  std::span<const double> components() const noexcept { return comps_; }
  double operator[](std::size_t i) const { return comps_[i]; }

 private:
  struct unchecked {};
  ImageVector(std::vector<double> components, unchecked)
      : comps_(std::move(components)) {}

  std::vector<double> comps_;
};

/// Subtracts half the mean intensity from every pixel, then normalizes.
/// The offset kills the DC component that would otherwise dominate the
/// direction of bright images while keeping the vector nonzero for every
/// image that has any intensity at all.
inline ImageVector center_and_normalize(const RawImage& img) {
  const std::size_t n = img.pixels.size();
  if (n == 0 || n != img.size())
    throw ConfigError("image has no pixels or inconsistent shape");
  const double sum = std::accumulate(img.pixels.begin(), img.pixels.end(), 0.0);
  const double offset = sum / (2.0 * static_cast<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = img.pixels[i] - offset;
  if (detail::vec_norm(y) == 0.0)
    throw ZeroVectorError("zero vector after centering");
  return ImageVector::normalized(std::move(y));
}

inline double euclidean_distance(const ImageVector& a, const ImageVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  double s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double cosine_similarity(const ImageVector& a, const ImageVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  return detail::vec_dot(a.components(), b.components());
}

/// Perturbation applied to a unit image vector.
struct NoiseSpec {
  enum class Kind { gaussian, dropout };

  Kind kind = Kind::gaussian;
  double sigma = 0.0;             // gaussian: per-component amplitude
  double dropout_fraction = 0.0;  // dropout: fraction of components zeroed

  static NoiseSpec gaussian(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
      throw ConfigError("gaussian noise requires sigma >= 0");
    return NoiseSpec{Kind::gaussian, sigma, 0.0};
  }

  static NoiseSpec dropout(double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
      throw ConfigError("dropout fraction must lie in [0, 1]");
    return NoiseSpec{Kind::dropout, 0.0, fraction};
  }
};

/// Adds the requested perturbation and renormalizes. Pure in (v, spec,
/// seed). A zero-strength spec returns the input unchanged, bit for bit.
inline ImageVector apply_noise(const ImageVector& v, const NoiseSpec& spec,
                               std::uint64_t seed) {
  const std::size_t n = v.dim();
  switch (spec.kind) {
    case NoiseSpec::Kind::gaussian: {
      if (!(spec.sigma >= 0.0))
        throw ConfigError("gaussian noise requires sigma >= 0");
      if (spec.sigma == 0.0) return v;
      RngStream g = make_stream(seed);
      std::vector<double> out(v.components().begin(), v.components().end());
      std::normal_distribution<double> dist;
      for (double& x : out) x += spec.sigma * dist(g);
      if (detail::vec_norm(out) == 0.0)
        throw ZeroVectorError("noise cancelled the image exactly");
      return ImageVector::normalized(std::move(out));
    }
    case NoiseSpec::Kind::dropout: {
      if (!(spec.dropout_fraction >= 0.0 && spec.dropout_fraction <= 1.0))
        throw ConfigError("dropout fraction must lie in [0, 1]");
      const auto count = static_cast<std::size_t>(
          spec.dropout_fraction * static_cast<double>(n));
      if (count == 0) return v;
      std::vector<double> out(v.components().begin(), v.components().end());
      // Partial Fisher-Yates: the first `count` slots end up holding a
      // uniform random subset of indices.
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      RngStream g = make_stream(seed);
      for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(g)]);
        out[idx[i]] = 0.0;
      }
      if (detail::vec_norm(out) == 0.0)
        throw ZeroVectorError("dropout removed every nonzero component");
      return ImageVector::normalized(std::move(out));
    }
  }
  throw ConfigError("unknown noise kind");
}

/// Uniform random direction: i.i.d. gaussian components, normalized.
inline ImageVector random_unit_vector(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("random_unit_vector requires dim >= 1");
  RngStream g = make_stream(seed);
  std::vector<double> out(dim);
  do {
    fill_gaussian(g, out);
  } while (detail::vec_norm(out) == 0.0);
  const double n = detail::vec_norm(out);
  for (double& x : out) x /= n;
  return ImageVector(std::move(out));
}

/// Mean |(w, v)| over `trials` independent pairs of random unit vectors.
/// Concentration of measure drives this to ~sqrt(2/(pi*dim)) as the
/// dimension grows, which is why unrelated images look mutually orthogonal.
inline double concentration_estimate(std::size_t dim, std::size_t trials,
                                     std::uint64_t seed) {
  if (dim == 0) throw ConfigError("concentration_estimate requires dim >= 1");
  if (trials == 0)
    throw ConfigError("concentration_estimate requires trials >= 1");
  RngStream g = make_stream(seed);
  std::vector<double> a(dim), b(dim);
  double sum = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    double na = 0, nb = 0;
    do {
      fill_gaussian(g, a);
      na = detail::vec_norm(a);
    } while (na == 0.0);
    do {
      fill_gaussian(g, b);
      nb = detail::vec_norm(b);
    } while (nb == 0.0);
    sum += std::abs(detail::vec_dot(a, b)) / (na * nb);
  }
  return sum / static_cast<double>(trials);
}

}  // namespace qrec
