#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "calodiff/event.hpp"
#include "calodiff/geometry.hpp"
#include "calodiff/parallel.hpp"

namespace calodiff {

// On-disk event container: 64-byte header, chunks of length-prefixed event
// records, chunk table at the end. pointcloud and image11 chunks are
// deflate-compressed; image_full chunks are stored raw, since the full-
// granularity format exists to measure the cost of the dense representation
// and deflate would erase exactly the size signal it is meant to expose.
enum class DatasetFormat : std::uint32_t { pointcloud = 0, image11 = 1, image_full = 2 };

struct DatasetInfo {
  DatasetFormat format = DatasetFormat::pointcloud;
  std::uint32_t version = 0;
  std::uint64_t geometry_hash = 0;
  std::uint64_t n_events = 0;
  std::uint32_t events_per_chunk = 0;
  std::uint32_t codec = 0;  // 0 = deflate, 1 = stored
  bool smeared = false;
  std::uint64_t file_bytes = 0;
};

DatasetInfo inspect_dataset(const std::string& path);

// Encodes point-cloud events in any of the three formats. image11 voxelizes
// first; image_full rasterizes cells onto the dense 55^3 grid.
void write_dataset(const GeometrySpec& g, const std::vector<PointCloudEvent>& events,
                   const std::string& path, DatasetFormat format);

// Writes images (already voxelized, e.g. sampled from the image model).
void write_dataset(const GeometrySpec& g, const std::vector<VoxelImage>& images,
                   const std::string& path);

std::vector<PointCloudEvent> read_pointcloud_dataset(const std::string& path,
                                                     const GeometrySpec& g);
std::vector<VoxelImage> read_image_dataset(const std::string& path, const GeometrySpec& g);

}  // namespace calodiff
