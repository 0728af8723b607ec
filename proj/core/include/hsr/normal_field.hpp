#pragma once

#include <cstddef>
#include <cstdint>

#include "hsr/geometry.hpp"
#include "hsr/grid.hpp"

namespace hsr {

// H x W grid of normals with a {0,1} validity mask. Masked-in pixels hold
// unit vectors; masked-out pixels may hold anything (usually zero).
class NormalField {
 public:
  NormalField() = default;
  // All pixels set to `fill` and masked in.
  NormalField(int width, int height, const UnitVector3& fill = UnitVector3{});

  int width() const { return normals_.width(); }
  int height() const { return normals_.height(); }
  std::size_t size() const { return normals_.size(); }

  const Vector3& normal(int u, int v) const { return normals_(u, v); }
  bool valid(int u, int v) const { return mask_(u, v) != 0; }

  void set(int u, int v, const UnitVector3& n) {
    normals_(u, v) = n.vec();
    mask_(u, v) = 1;
  }
  void invalidate(int u, int v) { mask_(u, v) = 0; }

  Grid<Vector3>& normals() { return normals_; }
  const Grid<Vector3>& normals() const { return normals_; }
  Mask& mask() { return mask_; }
  const Mask& mask() const { return mask_; }

  std::size_t valid_count() const;
  bool same_shape(const NormalField& o) const { return normals_.same_shape(o.normals_); }

  // Checks mask values are 0/1 and masked-in normals are finite and unit
  // within 1e-6. Throws Error(kInvalidArgument) otherwise.
  void validate() const;

  bool operator==(const NormalField&) const = default;

 private:
  Grid<Vector3> normals_;
  Mask mask_;
};

// Throws kShapeMismatch unless a and b share dimensions.
void require_same_shape(const NormalField& a, const NormalField& b);
Mask intersect(const Mask& a, const Mask& b);

}  // namespace hsr
