#include "hsr/synthetic.hpp"

#include <cmath>

#include "hsr/projection.hpp"
#include "hsr/random.hpp"

namespace hsr {

Vector3 smooth_offset(const Vector3& d) {
  return {0.4 * std::sin(2.0 * d.y + 0.3), 0.3 * std::cos(3.0 * d.x), 0.4 * std::sin(2.0 * d.z - 0.2)};
}

NormalField make_room_field(int width, int height, double curvature) {
  require_equirect(width, height);
  NormalField field(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const UnitVector3 d = pixel_to_direction(u, v, width, height);
      const Vector3 wall = -(face_rotation(select_face(d)) * Vector3{0, 0, 1});
      field.set(u, v, normalize(wall + smooth_offset(d) * curvature));
    }
  }
  return field;
}

NormalField make_smooth_field(int width, int height) {
  require_equirect(width, height);
  NormalField field(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const Vector3 d = pixel_to_direction(u, v, width, height);
      field.set(u, v, normalize(smooth_offset(d) - d));
    }
  }
  return field;
}

Vector3 random_unit_vector(std::uint64_t seed, std::uint64_t counter) {
  const CounterRng rng(seed);
  // Gaussian triples are isotropic; retry on the (practically impossible)
  // near-zero draw with a shifted counter.
  for (std::uint64_t k = 0;; ++k) {
    const std::uint64_t base = (counter * 4 + k) * 3;
    const Vector3 g{rng.normal(base), rng.normal(base + 1), rng.normal(base + 2)};
    if (norm(g) > 1e-6) return normalize(g).vec();
  }
}

NormalField random_unit_field(int width, int height, std::uint64_t seed) {
  NormalField field(width, height);
  for (std::size_t i = 0; i < field.size(); ++i) field.normals()[i] = random_unit_vector(seed, i);
  return field;
}

FieldPair make_random_pair(int width, int height, std::uint64_t seed, int masked) {
  FieldPair pair{random_unit_field(width, height, seed), random_unit_field(width, height, seed + 1)};
  const CounterRng rng(seed + 2);
  const std::uint64_t n = pair.gt.size();
  for (int k = 0; k < masked && n > 0; ++k) {
    const std::size_t i = static_cast<std::size_t>(rng.bits(static_cast<std::uint64_t>(k)) % n);
    const int u = static_cast<int>(i % static_cast<std::size_t>(width));
    const int v = static_cast<int>(i / static_cast<std::size_t>(width));
    pair.gt.invalidate(u, v);
    if (k % 2 == 0) pair.pred.invalidate(u, v);
  }
  return pair;
}

}  // namespace hsr
