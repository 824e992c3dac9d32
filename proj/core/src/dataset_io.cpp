#include "calodiff/dataset_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "calodiff/repr.hpp"

namespace calodiff {

namespace {

constexpr char kMagic[8] = {'C', 'A', 'L', 'O', 'D', 'S', '0', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kCodecDeflate = 0;
constexpr std::uint32_t kCodecStored = 1;

struct ChunkEntry {
  std::uint64_t offset = 0;
  std::uint64_t comp_bytes = 0;
  std::uint64_t raw_bytes = 0;
};

class ByteBuffer {
public:
  void put_bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    data_.insert(data_.end(), c, c + n);
  }
  void put_u32(std::uint32_t v) { put_bytes(&v, sizeof v); }
  void put_u64(std::uint64_t v) { put_bytes(&v, sizeof v); }
  void put_f64(double v) { put_bytes(&v, sizeof v); }
  const std::vector<char>& bytes() const { return data_; }
  void clear() { data_.clear(); }
  std::size_t size() const { return data_.size(); }

private:
  std::vector<char> data_;
};

class ByteReader {
public:
  ByteReader(const char* p, std::size_t n) : p_(p), end_(p + n) {}
  void get_bytes(void* out, std::size_t n) {
    if (p_ + n > end_) throw std::runtime_error("dataset: corrupt record (short read)");
    std::memcpy(out, p_, n);
    p_ += n;
  }
  std::uint32_t get_u32() {
    std::uint32_t v;
    get_bytes(&v, sizeof v);
    return v;
  }
  double get_f64() {
    double v;
    get_bytes(&v, sizeof v);
    return v;
  }
  bool done() const { return p_ == end_; }

private:
  const char* p_;
  const char* end_;
};

void encode_pointcloud(ByteBuffer& buf, const PointCloudEvent& ev) {
  ByteBuffer rec;
  rec.put_f64(ev.incident.momentum);
  rec.put_f64(ev.incident.theta);
  rec.put_f64(ev.incident.phi);
  rec.put_u32(static_cast<std::uint32_t>(ev.hits.size()));
  rec.put_u32(0);
  for (const auto& h : ev.hits) {
    rec.put_f64(h.position[0]);
    rec.put_f64(h.position[1]);
    rec.put_f64(h.position[2]);
    rec.put_f64(h.energy);
  }
  buf.put_u32(static_cast<std::uint32_t>(rec.size()));
  buf.put_bytes(rec.bytes().data(), rec.size());
}

void encode_image(ByteBuffer& buf, const IncidentParticle& inc,
                  const std::vector<double>& energies, int n_per_axis) {
  ByteBuffer rec;
  rec.put_f64(inc.momentum);
  rec.put_f64(inc.theta);
  rec.put_f64(inc.phi);
  rec.put_u32(static_cast<std::uint32_t>(n_per_axis));
  rec.put_u32(0);
  rec.put_bytes(energies.data(), energies.size() * sizeof(double));
  buf.put_u32(static_cast<std::uint32_t>(rec.size()));
  buf.put_bytes(rec.bytes().data(), rec.size());
}

std::vector<char> deflate_bytes(const std::vector<char>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<char> out(bound);
  if (compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                6) != Z_OK)
    throw std::runtime_error("dataset: deflate failed");
  out.resize(bound);
  return out;
}

std::vector<char> inflate_bytes(const std::vector<char>& comp, std::size_t raw_bytes) {
  std::vector<char> out(raw_bytes);
  uLongf n = static_cast<uLongf>(raw_bytes);
  if (uncompress(reinterpret_cast<Bytef*>(out.data()), &n,
                 reinterpret_cast<const Bytef*>(comp.data()),
                 static_cast<uLong>(comp.size())) != Z_OK ||
      n != raw_bytes)
    throw std::runtime_error("dataset: corrupt chunk (inflate failed)");
  return out;
}

struct Header {
  std::uint32_t format = 0;
  std::uint64_t geometry_hash = 0;
  std::uint64_t n_events = 0;
  std::uint32_t events_per_chunk = 0;
  std::uint32_t codec = 0;
  std::uint64_t table_offset = 0;
  std::uint32_t flags = 0;
};

void write_header(std::ostream& out, const Header& h) {
  char raw[64] = {};
  std::memcpy(raw, kMagic, 8);
  std::memcpy(raw + 8, &kVersion, 4);
  std::memcpy(raw + 12, &h.format, 4);
  std::memcpy(raw + 16, &h.geometry_hash, 8);
  std::memcpy(raw + 24, &h.n_events, 8);
  std::memcpy(raw + 32, &h.events_per_chunk, 4);
  std::memcpy(raw + 36, &h.codec, 4);
  std::memcpy(raw + 40, &h.table_offset, 8);
  std::memcpy(raw + 48, &h.flags, 4);
  out.write(raw, 64);
}

Header read_header(std::istream& in, std::uint32_t* version_out = nullptr) {
  char raw[64];
  in.read(raw, 64);
  if (!in) throw std::runtime_error("dataset: corrupt file (header too short)");
  if (std::memcmp(raw, kMagic, 8) != 0)
    throw std::runtime_error("dataset: bad magic (not a calodiff dataset)");
  std::uint32_t version;
  std::memcpy(&version, raw + 8, 4);
  if (version != kVersion)
    throw std::runtime_error("dataset: unsupported format version " + std::to_string(version));
  if (version_out) *version_out = version;
  Header h;
  std::memcpy(&h.format, raw + 12, 4);
  std::memcpy(&h.geometry_hash, raw + 16, 8);
  std::memcpy(&h.n_events, raw + 24, 8);
  std::memcpy(&h.events_per_chunk, raw + 32, 4);
  std::memcpy(&h.codec, raw + 36, 4);
  std::memcpy(&h.table_offset, raw + 40, 8);
  std::memcpy(&h.flags, raw + 48, 4);
  return h;
}

std::vector<ChunkEntry> read_chunk_table(std::istream& in, const Header& h,
                                         std::uint64_t file_bytes) {
  const std::uint64_t n_chunks =
      h.events_per_chunk == 0 ? 0 : (h.n_events + h.events_per_chunk - 1) / h.events_per_chunk;
  const std::uint64_t table_bytes = n_chunks * sizeof(ChunkEntry);
  if (h.table_offset + table_bytes > file_bytes)
    throw std::runtime_error("dataset: corrupt file (truncated chunk table)");
  std::vector<ChunkEntry> table(n_chunks);
  in.seekg(static_cast<std::streamoff>(h.table_offset));
  in.read(reinterpret_cast<char*>(table.data()),
          static_cast<std::streamsize>(table_bytes));
  if (!in) throw std::runtime_error("dataset: corrupt file (truncated chunk table)");
  for (const auto& c : table)
    if (c.offset + c.comp_bytes > file_bytes)
      throw std::runtime_error("dataset: corrupt file (chunk beyond end of file)");
  return table;
}

std::uint64_t stream_size(std::istream& in) {
  in.seekg(0, std::ios::end);
  const auto n = in.tellg();
  in.seekg(0);
  return static_cast<std::uint64_t>(n);
}

class DatasetWriter {
public:
  DatasetWriter(const std::string& path, Header header) : out_(path, std::ios::binary),
                                                          header_(header), path_(path) {
    if (!out_) throw std::runtime_error("dataset: cannot open for writing: " + path);
    write_header(out_, header_);  // placeholder; table offset patched in finish()
  }

  void add_record_buffer(ByteBuffer& chunk, std::uint64_t events_in_chunk) {
    ChunkEntry entry;
    entry.offset = static_cast<std::uint64_t>(out_.tellp());
    entry.raw_bytes = chunk.size();
    if (header_.codec == kCodecDeflate) {
      const auto comp = deflate_bytes(chunk.bytes());
      entry.comp_bytes = comp.size();
      out_.write(comp.data(), static_cast<std::streamsize>(comp.size()));
    } else {
      entry.comp_bytes = chunk.size();
      out_.write(chunk.bytes().data(), static_cast<std::streamsize>(chunk.size()));
    }
    table_.push_back(entry);
    total_events_ += events_in_chunk;
    chunk.clear();
  }

  void finish() {
    header_.table_offset = static_cast<std::uint64_t>(out_.tellp());
    header_.n_events = total_events_;
    out_.write(reinterpret_cast<const char*>(table_.data()),
               static_cast<std::streamsize>(table_.size() * sizeof(ChunkEntry)));
    out_.seekp(0);
    write_header(out_, header_);
    out_.flush();
    if (!out_) throw std::runtime_error("dataset: write failed: " + path_);
  }

private:
  std::ofstream out_;
  Header header_;
  std::string path_;
  std::vector<ChunkEntry> table_;
  std::uint64_t total_events_ = 0;
};

std::vector<double> rasterize_full(const GeometrySpec& g, const PointCloudEvent& ev) {
  std::vector<double> dense(static_cast<std::size_t>(g.cells_total()), 0.0);
  for (const auto& h : ev.hits)
    dense[flat_cell_index(g, quantize(g, h.position))] += h.energy;
  return dense;
}

}  // namespace

DatasetInfo inspect_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("dataset: file not found: " + path);
  const std::uint64_t bytes = stream_size(in);
  const Header h = read_header(in);
  read_chunk_table(in, h, bytes);  // validates reachability
  DatasetInfo info;
  info.format = static_cast<DatasetFormat>(h.format);
  info.version = kVersion;
  info.geometry_hash = h.geometry_hash;
  info.n_events = h.n_events;
  info.events_per_chunk = h.events_per_chunk;
  info.codec = h.codec;
  info.smeared = (h.flags & 1u) != 0;
  info.file_bytes = bytes;
  return info;
}

void write_dataset(const GeometrySpec& g, const std::vector<PointCloudEvent>& events,
                   const std::string& path, DatasetFormat format) {
  g.validate();
  Header h;
  h.format = static_cast<std::uint32_t>(format);
  h.geometry_hash = g.content_hash();
  h.codec = format == DatasetFormat::image_full ? kCodecStored : kCodecDeflate;
  h.events_per_chunk = format == DatasetFormat::image_full ? 64 : 1024;
  bool smeared = false;
  for (const auto& ev : events)
    for (const auto& hit : ev.hits) smeared = smeared || hit.is_smeared;
  h.flags = smeared ? 1u : 0u;

  DatasetWriter writer(path, h);
  ByteBuffer chunk;
  std::uint64_t in_chunk = 0;
  for (const auto& ev : events) {
    switch (format) {
      case DatasetFormat::pointcloud:
        encode_pointcloud(chunk, ev);
        break;
      case DatasetFormat::image11: {
        const VoxelImage img = voxelize(g, ev);
        encode_image(chunk, ev.incident, img.energies, img.n_per_axis);
        break;
      }
      case DatasetFormat::image_full: {
        const auto dense = rasterize_full(g, ev);
        encode_image(chunk, ev.incident, dense, g.n_cells_per_axis);
        break;
      }
    }
    if (++in_chunk == h.events_per_chunk) {
      writer.add_record_buffer(chunk, in_chunk);
      in_chunk = 0;
    }
  }
  if (in_chunk > 0) writer.add_record_buffer(chunk, in_chunk);
  writer.finish();
}

void write_dataset(const GeometrySpec& g, const std::vector<VoxelImage>& images,
                   const std::string& path) {
  g.validate();
  Header h;
  h.format = static_cast<std::uint32_t>(DatasetFormat::image11);
  h.geometry_hash = g.content_hash();
  h.codec = kCodecDeflate;
  h.events_per_chunk = 1024;

  DatasetWriter writer(path, h);
  ByteBuffer chunk;
  std::uint64_t in_chunk = 0;
  for (const auto& img : images) {
    encode_image(chunk, img.incident, img.energies, img.n_per_axis);
    if (++in_chunk == h.events_per_chunk) {
      writer.add_record_buffer(chunk, in_chunk);
      in_chunk = 0;
    }
  }
  if (in_chunk > 0) writer.add_record_buffer(chunk, in_chunk);
  writer.finish();
}

namespace {

template <class OnRecord>
void for_each_record(const std::string& path, const GeometrySpec& g,
                     DatasetFormat* format_out, bool* smeared_out, OnRecord&& on_record) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("dataset: file not found: " + path);
  const std::uint64_t bytes = stream_size(in);
  const Header h = read_header(in);
  if (h.geometry_hash != g.content_hash())
    throw std::runtime_error("dataset: geometry mismatch (file written with a different spec)");
  const auto table = read_chunk_table(in, h, bytes);
  if (format_out) *format_out = static_cast<DatasetFormat>(h.format);
  if (smeared_out) *smeared_out = (h.flags & 1u) != 0;

  std::uint64_t seen = 0;
  for (const auto& entry : table) {
    in.seekg(static_cast<std::streamoff>(entry.offset));
    std::vector<char> comp(entry.comp_bytes);
    in.read(comp.data(), static_cast<std::streamsize>(comp.size()));
    if (!in) throw std::runtime_error("dataset: corrupt file (truncated chunk)");
    const std::vector<char> raw =
        h.codec == kCodecDeflate ? inflate_bytes(comp, entry.raw_bytes) : std::move(comp);
    if (raw.size() != entry.raw_bytes)
      throw std::runtime_error("dataset: corrupt chunk (size mismatch)");
    ByteReader reader(raw.data(), raw.size());
    while (!reader.done()) {
      const std::uint32_t rec_bytes = reader.get_u32();
      std::vector<char> rec(rec_bytes);
      reader.get_bytes(rec.data(), rec_bytes);
      on_record(static_cast<DatasetFormat>(h.format), rec);
      ++seen;
    }
  }
  if (seen != h.n_events)
    throw std::runtime_error("dataset: corrupt file (event count mismatch)");
}

}  // namespace

std::vector<PointCloudEvent> read_pointcloud_dataset(const std::string& path,
                                                     const GeometrySpec& g) {
  std::vector<PointCloudEvent> events;
  bool smeared = false;
  for_each_record(path, g, nullptr, &smeared,
                  [&](DatasetFormat format, const std::vector<char>& rec) {
    if (format != DatasetFormat::pointcloud)
      throw std::runtime_error("dataset: expected pointcloud format");
    ByteReader r(rec.data(), rec.size());
    PointCloudEvent ev;
    ev.incident.momentum = r.get_f64();
    ev.incident.theta = r.get_f64();
    ev.incident.phi = r.get_f64();
    const std::uint32_t n = r.get_u32();
    r.get_u32();
    ev.hits.resize(n);
    for (auto& h : ev.hits) {
      h.position[0] = r.get_f64();
      h.position[1] = r.get_f64();
      h.position[2] = r.get_f64();
      h.energy = r.get_f64();
      h.is_smeared = smeared;
    }
    events.push_back(std::move(ev));
  });
  return events;
}

std::vector<VoxelImage> read_image_dataset(const std::string& path, const GeometrySpec& g) {
  std::vector<VoxelImage> images;
  for_each_record(path, g, nullptr, nullptr,
                  [&](DatasetFormat format, const std::vector<char>& rec) {
    if (format != DatasetFormat::image11 && format != DatasetFormat::image_full)
      throw std::runtime_error("dataset: expected an image format");
    ByteReader r(rec.data(), rec.size());
    VoxelImage img;
    img.incident.momentum = r.get_f64();
    img.incident.theta = r.get_f64();
    img.incident.phi = r.get_f64();
    img.n_per_axis = static_cast<int>(r.get_u32());
    r.get_u32();
    img.energies.resize(static_cast<std::size_t>(img.n_per_axis) * img.n_per_axis *
                        img.n_per_axis);
    r.get_bytes(img.energies.data(), img.energies.size() * sizeof(double));
    images.push_back(std::move(img));
  });
  return images;
}

}  // namespace calodiff
