#include "hsr/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hsr {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

bool host_is_little() { return std::endian::native == std::endian::little; }

std::uint32_t byteswap32(std::uint32_t x) {
  return ((x & 0xffu) << 24) | ((x & 0xff00u) << 8) | ((x >> 8) & 0xff00u) | (x >> 24);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

bool is_space(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

// Reads one whitespace-delimited header token starting at `pos`.
std::string next_token(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size() && is_space(bytes[pos])) ++pos;
  const std::size_t start = pos;
  while (pos < bytes.size() && !is_space(bytes[pos])) ++pos;
  if (start == pos) throw Error(ErrorCode::kMalformedHeader, "unexpected end of PFM header");
  return std::string(bytes.substr(start, pos - start));
}

int parse_dimension(const std::string& token) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(token, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformedHeader, "bad PFM dimension '" + token + "'");
  }
  if (used != token.size() || value <= 0 || value > (1L << 20)) {
    throw Error(ErrorCode::kMalformedHeader, "bad PFM dimension '" + token + "'");
  }
  return static_cast<int>(value);
}

}  // namespace

FloatImage::FloatImage(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || (channels != 1 && channels != 3)) {
    throw Error(ErrorCode::kInvalidArgument, "float image needs non-negative size and 1 or 3 channels");
  }
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * static_cast<std::size_t>(channels),
               fill);
}

std::uint8_t encode_normal_component(double n) {
  const double x = (n + 1.0) * 0.5 * 255.0;
  const double r = std::ceil(x - 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

double decode_normal_component(std::uint8_t c) { return 2.0 * static_cast<double>(c) / 255.0 - 1.0; }

Rgb8Image encode_normal_png(const NormalField& field) {
  Rgb8Image img(field.width(), field.height());
  for (int v = 0; v < field.height(); ++v) {
    for (int u = 0; u < field.width(); ++u) {
      if (!field.valid(u, v)) continue;
      const Vector3& n = field.normal(u, v);
      std::uint8_t* px = img.at(u, v);
      px[0] = encode_normal_component(n.x);
      px[1] = encode_normal_component(n.y);
      px[2] = encode_normal_component(n.z);
    }
  }
  return img;
}

NormalField decode_normal_png(const Rgb8Image& img) {
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3) {
    throw Error(ErrorCode::kNotRgb, "pixel buffer is not interleaved 8-bit RGB");
  }
  NormalField field(img.width, img.height);
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      const std::uint8_t* px = img.at(u, v);
      const Vector3 n{decode_normal_component(px[0]), decode_normal_component(px[1]), decode_normal_component(px[2])};
      if ((px[0] | px[1] | px[2]) == 0 || norm(n) < kMinDecodedNorm) {
        field.normals()(u, v) = Vector3{};
        field.invalidate(u, v);
      } else {
        field.set(u, v, normalize(n));
      }
    }
  }
  return field;
}

Rgb8Image read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw Error(ErrorCode::kIo, "cannot read PNG " + path.string() + ": " + image.message);
  }
  const auto fmt = image.format;
  const bool rgb = (fmt & PNG_FORMAT_FLAG_COLOR) != 0 && (fmt & PNG_FORMAT_FLAG_ALPHA) == 0 &&
                   (fmt & PNG_FORMAT_FLAG_LINEAR) == 0 && (fmt & PNG_FORMAT_FLAG_COLORMAP) == 0;
  if (!rgb) {
    png_image_free(&image);
    throw Error(ErrorCode::kNotRgb, path.string() + " is not an 8-bit RGB PNG");
  }
  image.format = PNG_FORMAT_RGB;
  Rgb8Image img(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::kIo, "PNG decode failed for " + path.string());
  }
  return img;
}

void write_png(const Rgb8Image& img, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIo, "cannot write PNG " + path.string() + ": " + image.message);
  }
}

void write_png_gray(const Grid<std::uint8_t>& img, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.data().data(), 0, nullptr)) {
    throw Error(ErrorCode::kIo, "cannot write PNG " + path.string() + ": " + image.message);
  }
}

std::string encode_pfm(const FloatImage& img, Endian endian) {
  if (img.width() <= 0 || img.height() <= 0) throw Error(ErrorCode::kInvalidArgument, "PFM needs positive dimensions");
  std::ostringstream header;
  header << (img.channels() == 3 ? "PF" : "Pf") << '\n'
         << img.width() << ' ' << img.height() << '\n'
         << (endian == Endian::kLittle ? "-1.0" : "1.0") << '\n';
  std::string out = header.str();
  const std::size_t row = static_cast<std::size_t>(img.width()) * static_cast<std::size_t>(img.channels());
  const bool swap = (endian == Endian::kLittle) != host_is_little();
  out.reserve(out.size() + row * static_cast<std::size_t>(img.height()) * 4);
  for (int v = img.height() - 1; v >= 0; --v) {
    const float* src = img.data().data() + static_cast<std::size_t>(v) * row;
    for (std::size_t i = 0; i < row; ++i) {
      auto bits = std::bit_cast<std::uint32_t>(src[i]);
      if (swap) bits = byteswap32(bits);
      char buf[4];
      std::memcpy(buf, &bits, 4);
      out.append(buf, 4);
    }
  }
  return out;
}

FloatImage decode_pfm(std::string_view bytes) {
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos);
  int channels = 0;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    throw Error(ErrorCode::kMalformedHeader, "bad PFM magic '" + magic + "'");
  }
  const int width = parse_dimension(next_token(bytes, pos));
  const int height = parse_dimension(next_token(bytes, pos));
  const std::string scale_token = next_token(bytes, pos);
  double scale = 0.0;
  try {
    std::size_t used = 0;
    scale = std::stod(scale_token, &used);
    if (used != scale_token.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformedHeader, "bad PFM scale '" + scale_token + "'");
  }
  if (scale == 0.0 || !std::isfinite(scale)) throw Error(ErrorCode::kMalformedHeader, "PFM scale must be non-zero");
  // Exactly one whitespace byte separates the header from the raster.
  if (pos >= bytes.size() || !is_space(bytes[pos])) throw Error(ErrorCode::kMalformedHeader, "PFM header not terminated");
  ++pos;

  FloatImage img(width, height, channels);
  const std::size_t row = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  const std::size_t need = row * static_cast<std::size_t>(height) * 4;
  if (bytes.size() - pos < need) {
    throw Error(ErrorCode::kTruncatedData,
                "PFM raster has " + std::to_string(bytes.size() - pos) + " bytes, expected " + std::to_string(need));
  }
  const bool little = scale < 0.0;
  const bool swap = little != host_is_little();
  for (int v = height - 1; v >= 0; --v) {
    float* dst = img.data().data() + static_cast<std::size_t>(v) * row;
    for (std::size_t i = 0; i < row; ++i) {
      std::uint32_t bits = 0;
      std::memcpy(&bits, bytes.data() + pos, 4);
      pos += 4;
      if (swap) bits = byteswap32(bits);
      dst[i] = std::bit_cast<float>(bits);
    }
  }
  return img;
}

void write_pfm(const FloatImage& img, const std::filesystem::path& path, Endian endian) {
  dump(encode_pfm(img, endian), path);
}

FloatImage read_pfm(const std::filesystem::path& path) { return decode_pfm(slurp(path)); }

FloatImage normals_to_image(const NormalField& field) {
  FloatImage img(field.width(), field.height(), 3);
  for (int v = 0; v < field.height(); ++v) {
    for (int u = 0; u < field.width(); ++u) {
      if (!field.valid(u, v)) continue;
      const Vector3& n = field.normal(u, v);
      img.at(u, v, 0) = static_cast<float>(n.x);
      img.at(u, v, 1) = static_cast<float>(n.y);
      img.at(u, v, 2) = static_cast<float>(n.z);
    }
  }
  return img;
}

NormalField normals_from_image(const FloatImage& img) {
  if (img.channels() != 3) throw Error(ErrorCode::kNotRgb, "normal maps need 3 channels");
  NormalField field(img.width(), img.height());
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      const Vector3 n{img.at(u, v, 0), img.at(u, v, 1), img.at(u, v, 2)};
      if (!is_finite(n)) throw Error(ErrorCode::kNonFinite, "non-finite normal in image");
      if (norm(n) < kMinDecodedNorm) {
        field.normals()(u, v) = Vector3{};
        field.invalidate(u, v);
      } else {
        field.set(u, v, normalize(n));
      }
    }
  }
  return field;
}

FloatImage scalar_grid_to_image(const ScalarGrid& grid) {
  FloatImage img(grid.width(), grid.height(), 1);
  for (std::size_t i = 0; i < grid.size(); ++i) img.data()[i] = static_cast<float>(grid[i]);
  return img;
}

ScalarGrid scalar_grid_from_image(const FloatImage& img) {
  if (img.channels() != 1) throw Error(ErrorCode::kInvalidArgument, "scalar grids need 1 channel");
  ScalarGrid grid(img.width(), img.height());
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = img.data()[i];
  return grid;
}

FloatImage to_float(const Rgb8Image& img) {
  FloatImage out(img.width, img.height, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) out.data()[i] = static_cast<float>(img.pixels[i]) / 255.0f;
  return out;
}

Rgb8Image to_rgb8(const FloatImage& img) {
  if (img.channels() != 3) throw Error(ErrorCode::kNotRgb, "colour conversion needs 3 channels");
  Rgb8Image out(img.width(), img.height());
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const float x = img.data()[i];
    const float c = std::isfinite(x) ? std::clamp(x, 0.0f, 1.0f) : 0.0f;
    out.pixels[i] = static_cast<std::uint8_t>(std::lround(c * 255.0f));
  }
  return out;
}

NormalField read_normals(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return decode_normal_png(read_png(path));
  if (ext == ".pfm") return normals_from_image(read_pfm(path));
  throw Error(ErrorCode::kInvalidArgument, "unsupported normal map extension '" + ext + "'");
}

void write_normals(const NormalField& field, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(encode_normal_png(field), path);
  if (ext == ".pfm") return write_pfm(normals_to_image(field), path);
  throw Error(ErrorCode::kInvalidArgument, "unsupported normal map extension '" + ext + "'");
}

FloatImage read_color(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return to_float(read_png(path));
  if (ext == ".pfm") {
    FloatImage img = read_pfm(path);
    if (img.channels() != 3) throw Error(ErrorCode::kNotRgb, path.string() + " is not a 3-channel PFM");
    return img;
  }
  throw Error(ErrorCode::kInvalidArgument, "unsupported image extension '" + ext + "'");
}

void write_color(const FloatImage& img, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(to_rgb8(img), path);
  if (ext == ".pfm") return write_pfm(img, path);
  throw Error(ErrorCode::kInvalidArgument, "unsupported image extension '" + ext + "'");
}

}  // namespace hsr
