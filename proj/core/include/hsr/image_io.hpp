#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hsr/grid.hpp"
#include "hsr/normal_field.hpp"

namespace hsr {

// 8-bit interleaved RGB.
struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  Rgb8Image() = default;
  Rgb8Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0) {}

  std::uint8_t* at(int u, int v) { return &pixels[(static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + static_cast<std::size_t>(u)) * 3]; }
  const std::uint8_t* at(int u, int v) const {
    return &pixels[(static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + static_cast<std::size_t>(u)) * 3];
  }
  bool operator==(const Rgb8Image&) const = default;
};

// Interleaved single-precision image with 1 or 3 channels; used for HDR
// colour, lossless normals and scalar grids.
class FloatImage {
 public:
  FloatImage() = default;
  FloatImage(int width, int height, int channels, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  float& at(int u, int v, int c) { return data_[offset(u, v, c)]; }
  float at(int u, int v, int c) const { return data_[offset(u, v, c)]; }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  bool operator==(const FloatImage&) const = default;

 private:
  std::size_t offset(int u, int v, int c) const {
    return (static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(u)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 3;
  std::vector<float> data_;
};

// Normal <-> colour: channel = round((n + 1) / 2 * 255) with ties rounded
// down, so 0 maps to 127. Masked-out pixels are written as (0, 0, 0), which no
// unit vector can produce.
Rgb8Image encode_normal_png(const NormalField& field);
std::uint8_t encode_normal_component(double n);
double decode_normal_component(std::uint8_t c);

// Inverse map n = 2c/255 - 1, renormalised. Black pixels and pixels whose
// decoded vector is shorter than kMinDecodedNorm (e.g. mid-gray) become
// masked out.
inline constexpr double kMinDecodedNorm = 0.5;
NormalField decode_normal_png(const Rgb8Image& img);

// Only 8-bit RGB files are accepted; other layouts raise kNotRgb.
Rgb8Image read_png(const std::filesystem::path& path);
void write_png(const Rgb8Image& img, const std::filesystem::path& path);
void write_png_gray(const Grid<std::uint8_t>& img, const std::filesystem::path& path);

enum class Endian { kLittle, kBig };

// PFM ("PF" colour, "Pf" gray). Negative scale marks little-endian data;
// scanlines are stored bottom-up.
std::string encode_pfm(const FloatImage& img, Endian endian = Endian::kLittle);
FloatImage decode_pfm(std::string_view bytes);
void write_pfm(const FloatImage& img, const std::filesystem::path& path, Endian endian = Endian::kLittle);
FloatImage read_pfm(const std::filesystem::path& path);

// Masked-out pixels are stored as zero vectors; on the way back any pixel
// with norm below kMinDecodedNorm is masked out and the rest renormalised.
FloatImage normals_to_image(const NormalField& field);
NormalField normals_from_image(const FloatImage& img);

FloatImage scalar_grid_to_image(const ScalarGrid& grid);
ScalarGrid scalar_grid_from_image(const FloatImage& img);

// 8-bit colour scaled to [0, 1] and back (clamped, rounded to nearest).
FloatImage to_float(const Rgb8Image& img);
Rgb8Image to_rgb8(const FloatImage& img);

// Extension-dispatched helpers used by the CLI: ".png" or ".pfm".
NormalField read_normals(const std::filesystem::path& path);
void write_normals(const NormalField& field, const std::filesystem::path& path);
FloatImage read_color(const std::filesystem::path& path);
void write_color(const FloatImage& img, const std::filesystem::path& path);

}  // namespace hsr
