#include "cham/manifest.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unordered_set>

#include "cham/error.hpp"

namespace cham {

namespace {

constexpr char kEmbeddingMagic[8] = {'C', 'H', 'A', 'M', 'E', 'M', 'B', '1'};

void put_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32_le(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32_le(os, bits);
}

float get_f32_le(std::istream& is) {
  const std::uint32_t bits = get_u32_le(is);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

[[noreturn]] void load_fail(const std::filesystem::path& path,
                            std::streamoff offset, const std::string& what) {
  std::ostringstream os;
  os << path.string() << " @ byte " << offset << ": " << what;
  throw IoError(os.str());
}

}  // namespace

void DomainManifest::validate() const {
  if (dims == 0) {
    throw InputError("manifest dims must be positive");
  }
  if (domains.empty()) {
    throw InputError("manifest lists no domains");
  }
  std::unordered_set<std::string> seen;
  for (const auto& d : domains) {
    if (!seen.insert(d.name).second) {
      throw InputError("duplicate domain name in manifest: " + d.name);
    }
  }
}

std::filesystem::path DomainManifest::resolve(const ManifestDomain& d) const {
  std::filesystem::path p(d.file);
  if (p.is_relative() && !base_dir.empty()) {
    return base_dir / p;
  }
  return p;
}

const ManifestDomain* DomainManifest::find(const std::string& name) const {
  for (const auto& d : domains) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

DomainManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("manifest " + path.string() + ": " + e.what());
  }

  DomainManifest m;
  m.base_dir = path.parent_path();
  try {
    m.dims = j.at("dims").get<std::uint32_t>();
    for (const auto& dj : j.at("domains")) {
      ManifestDomain d;
      d.name = dj.at("name").get<std::string>();
      d.file = dj.at("file").get<std::string>();
      d.count = dj.at("count").get<std::uint64_t>();
      if (dj.contains("layer")) d.layer = dj["layer"].get<int>();
      if (dj.contains("content")) d.content_hash = dj["content"].get<std::string>();
      m.domains.push_back(std::move(d));
    }
    if (j.contains("embedder_fingerprint")) {
      m.embedder_fingerprint = j["embedder_fingerprint"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("manifest " + path.string() + ": " + e.what());
  }
  m.validate();
  return m;
}

void write_manifest(const DomainManifest& manifest,
                    const std::filesystem::path& path) {
  manifest.validate();
  nlohmann::ordered_json j;
  j["dims"] = manifest.dims;
  j["domains"] = nlohmann::ordered_json::array();
  for (const auto& d : manifest.domains) {
    nlohmann::ordered_json dj;
    dj["name"] = d.name;
    dj["file"] = d.file;
    dj["count"] = d.count;
    if (d.layer) dj["layer"] = *d.layer;
    if (!d.content_hash.empty()) dj["content"] = d.content_hash;
    j["domains"].push_back(std::move(dj));
  }
  if (!manifest.embedder_fingerprint.empty()) {
    j["embedder_fingerprint"] = manifest.embedder_fingerprint;
  }

  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write manifest " + path.string());
  }
  out << j.dump(2) << '\n';
}

SampleEmbeddingSet read_embedding_file(const std::filesystem::path& path,
                                       const std::string& domain_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open embedding file " + path.string());
  }

  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kEmbeddingMagic, 8) != 0) {
    load_fail(path, 0, "bad magic, expected CHAMEMB1");
  }
  const std::uint32_t count = get_u32_le(in);
  const std::uint32_t dim = get_u32_le(in);
  if (!in) {
    load_fail(path, 8, "truncated header");
  }
  if (count == 0 || dim == 0) {
    load_fail(path, 8, "count and dim must be positive");
  }

  SampleEmbeddingSet set;
  set.domain = domain_name;
  set.vectors.resize(count, dim);
  for (std::uint32_t r = 0; r < count; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c) {
      const std::streamoff offset =
          16 + (static_cast<std::streamoff>(r) * dim + c) * 4;
      const float v = get_f32_le(in);
      if (!in) {
        load_fail(path, offset, "truncated payload");
      }
      if (!std::isfinite(v)) {
        load_fail(path, offset, "non-finite value");
      }
      set.vectors(r, c) = v;
    }
  }
  return set;
}

void write_embedding_file(const std::filesystem::path& path,
                          const SampleEmbeddingSet& set) {
  if (set.count() < 1 || set.dim() < 1) {
    throw InputError("refusing to write empty embedding set for domain " +
                     set.domain);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write embedding file " + path.string());
  }
  out.write(kEmbeddingMagic, 8);
  put_u32_le(out, static_cast<std::uint32_t>(set.count()));
  put_u32_le(out, static_cast<std::uint32_t>(set.dim()));
  for (Eigen::Index r = 0; r < set.count(); ++r) {
    for (Eigen::Index c = 0; c < set.dim(); ++c) {
      put_f32_le(out, set.vectors(r, c));
    }
  }
  if (!out) {
    throw IoError("short write on " + path.string());
  }
}

std::vector<SampleEmbeddingSet> load_manifest(const DomainManifest& manifest) {
  manifest.validate();
  std::vector<SampleEmbeddingSet> sets;
  sets.reserve(manifest.domains.size());
  for (const auto& d : manifest.domains) {
    const std::filesystem::path path = manifest.resolve(d);
    SampleEmbeddingSet set = read_embedding_file(path, d.name);
    if (set.dim() != static_cast<Eigen::Index>(manifest.dims)) {
      std::ostringstream os;
      os << path.string() << ": dim " << set.dim()
         << " does not match manifest dims " << manifest.dims;
      throw IoError(os.str());
    }
    if (set.count() != static_cast<Eigen::Index>(d.count)) {
      std::ostringstream os;
      os << path.string() << ": file holds " << set.count()
         << " vectors, manifest declares " << d.count;
      throw IoError(os.str());
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace cham
