#include "calodiff/geometry.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "calodiff/hash.hpp"

namespace calodiff {

void GeometrySpec::validate() const {
  if (n_cells_per_axis < 1) throw std::invalid_argument("geometry: n_cells_per_axis must be >= 1");
  if (voxel_group < 1) throw std::invalid_argument("geometry: voxel_group must be >= 1");
  if (n_cells_per_axis % voxel_group != 0)
    throw std::invalid_argument("geometry: n_cells_per_axis must be divisible by voxel_group");
  if (!(cell_pitch_xy > 0) || !(cell_pitch_z > 0))
    throw std::invalid_argument("geometry: cell pitches must be positive");
  if (energy_threshold < 0) throw std::invalid_argument("geometry: energy_threshold must be >= 0");
  if (max_points < 1) throw std::invalid_argument("geometry: max_points must be >= 1");
}

std::uint64_t GeometrySpec::content_hash() const {
  // Canonical field order; doubles hashed by bit pattern.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix_i = [&h](std::int64_t v) { h = fnv1a64(&v, sizeof v, h); };
  auto mix_d = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h = fnv1a64(&bits, sizeof bits, h);
  };
  mix_i(n_cells_per_axis);
  mix_d(cell_pitch_xy);
  mix_d(cell_pitch_z);
  mix_d(front_face_z);
  mix_d(energy_threshold);
  mix_i(voxel_group);
  mix_i(max_points);
  return h;
}

GeometrySpec GeometrySpec::from_config(const Config& cfg) {
  GeometrySpec g;
  g.n_cells_per_axis = cfg.get_int("geometry.n_cells_per_axis", g.n_cells_per_axis);
  g.cell_pitch_xy = cfg.get_double("geometry.cell_pitch_xy_cm", g.cell_pitch_xy);
  g.cell_pitch_z = cfg.get_double("geometry.cell_pitch_z_cm", g.cell_pitch_z);
  g.front_face_z = cfg.get_double("geometry.front_face_z_m", g.front_face_z);
  g.energy_threshold = cfg.get_double("geometry.energy_threshold_mev", g.energy_threshold);
  g.voxel_group = cfg.get_int("geometry.voxel_group", g.voxel_group);
  g.max_points = cfg.get_int("geometry.max_points", g.max_points);
  g.validate();
  return g;
}

void GeometrySpec::to_config(Config& cfg) const {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    return s;
  };
  cfg.set("geometry.n_cells_per_axis", std::to_string(n_cells_per_axis));
  cfg.set("geometry.cell_pitch_xy_cm", num(cell_pitch_xy));
  cfg.set("geometry.cell_pitch_z_cm", num(cell_pitch_z));
  cfg.set("geometry.front_face_z_m", num(front_face_z));
  cfg.set("geometry.energy_threshold_mev", num(energy_threshold));
  cfg.set("geometry.voxel_group", std::to_string(voxel_group));
  cfg.set("geometry.max_points", std::to_string(max_points));
}

bool in_bounds(const GeometrySpec& g, const CellIndex& idx) {
  const int n = g.n_cells_per_axis;
  return idx.ix >= 0 && idx.ix < n && idx.iy >= 0 && idx.iy < n && idx.iz >= 0 && idx.iz < n;
}

Vec3 cell_center(const GeometrySpec& g, const CellIndex& idx) {
  if (!in_bounds(g, idx))
    throw std::out_of_range("cell_center: index (" + std::to_string(idx.ix) + "," +
                            std::to_string(idx.iy) + "," + std::to_string(idx.iz) +
                            ") outside lattice");
  const double mid = 0.5 * (g.n_cells_per_axis - 1);
  return Vec3{(idx.ix - mid) * g.cell_pitch_xy, (idx.iy - mid) * g.cell_pitch_xy,
              (idx.iz + 0.5) * g.cell_pitch_z};
}

namespace {

int axis_bin(double coord, double lo, double pitch, int n, const char* axis) {
  const double hi = lo + pitch * n;
  if (coord < lo || coord > hi)
    throw std::out_of_range(std::string("quantize: ") + axis + " coordinate " +
                            std::to_string(coord) + " outside lattice extent");
  if (coord == hi) return n - 1;  // global upper edge is inclusive
  const int bin = static_cast<int>(std::floor((coord - lo) / pitch));
  return bin < 0 ? 0 : (bin >= n ? n - 1 : bin);
}

}  // namespace

CellIndex quantize(const GeometrySpec& g, const Vec3& position) {
  const int n = g.n_cells_per_axis;
  const double lo_xy = -g.half_extent_xy();
  CellIndex idx;
  idx.ix = axis_bin(position[0], lo_xy, g.cell_pitch_xy, n, "x");
  idx.iy = axis_bin(position[1], lo_xy, g.cell_pitch_xy, n, "y");
  idx.iz = axis_bin(position[2], 0.0, g.cell_pitch_z, n, "z");
  return idx;
}

CellHit smear(const GeometrySpec& g, const CellHit& hit, Rng& rng) {
  if (hit.is_smeared) throw std::logic_error("smear: hit is already smeared");
  CellHit out = hit;
  out.position[0] += (rng.uniform01() - 0.5) * g.cell_pitch_xy;
  out.position[1] += (rng.uniform01() - 0.5) * g.cell_pitch_xy;
  out.position[2] += (rng.uniform01() - 0.5) * g.cell_pitch_z;
  out.is_smeared = true;
  return out;
}

std::vector<CellHit> apply_threshold(const GeometrySpec& g,
                                     const std::vector<CellHit>& hits) {
  std::vector<CellHit> out;
  out.reserve(hits.size());
  for (const auto& h : hits)
    if (h.energy >= g.energy_threshold) out.push_back(h);
  return out;
}

}  // namespace calodiff
