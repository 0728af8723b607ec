#include "hsr/normal_field.hpp"

#include <string>

namespace hsr {

NormalField::NormalField(int width, int height, const UnitVector3& fill)
    : normals_(width, height, fill.vec()), mask_(width, height, 1) {}

std::size_t NormalField::valid_count() const {
  std::size_t n = 0;
  for (auto m : mask_.data()) n += (m != 0);
  return n;
}

void NormalField::validate() const {
  for (std::size_t i = 0; i < size(); ++i) {
    const auto m = mask_[i];
    if (m > 1) throw Error(ErrorCode::kInvalidArgument, "mask values must be 0 or 1");
    if (m == 0) continue;
    const Vector3& n = normals_[i];
    if (!is_finite(n) || std::abs(dot(n, n) - 1.0) > UnitVector3::kTolerance) {
      throw Error(ErrorCode::kInvalidArgument, "masked-in pixel " + std::to_string(i) + " is not unit length");
    }
  }
}

void require_same_shape(const NormalField& a, const NormalField& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::kShapeMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                                               std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

Mask intersect(const Mask& a, const Mask& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::kShapeMismatch, "mask dimensions differ");
  Mask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] != 0 && b[i] != 0) ? 1 : 0;
  return out;
}

}  // namespace hsr
