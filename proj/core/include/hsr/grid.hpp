#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hsr/error.hpp"

namespace hsr {

// Row-major width x height grid. (u, v) = (column, row); v grows downward.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, const T& fill = T{})
      : width_(width), height_(height), data_(checked_size(width, height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(u);
  }
  bool contains(int u, int v) const { return u >= 0 && v >= 0 && u < width_ && v < height_; }

  T& operator()(int u, int v) { return data_[index(u, v)]; }
  const T& operator()(int u, int v) const { return data_[index(u, v)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(int width, int height) const { return width_ == width && height_ == height; }
  template <class U>
  bool same_shape(const Grid<U>& o) const {
    return same_shape(o.width(), o.height());
  }

  bool operator==(const Grid&) const = default;

 private:
  static std::size_t checked_size(int width, int height) {
    if (width < 0 || height < 0) throw Error(ErrorCode::kInvalidArgument, "negative grid dimension");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Mask = Grid<std::uint8_t>;
using ScalarGrid = Grid<double>;

}  // namespace hsr
