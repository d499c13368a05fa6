#include "cham/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cham/error.hpp"
#include "cham/hashing.hpp"

namespace cham {

namespace {

void put_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64_le(std::ostream& os, std::uint64_t v) {
  put_u32_le(os, static_cast<std::uint32_t>(v));
  put_u32_le(os, static_cast<std::uint32_t>(v >> 32));
}

void put_u16_le(std::ostream& os, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<const char*>(b), 2);
}

std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64_le(std::istream& is) {
  const std::uint64_t lo = get_u32_le(is);
  const std::uint64_t hi = get_u32_le(is);
  return lo | (hi << 32);
}

std::uint16_t get_u16_le(std::istream& is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(static_cast<std::uint16_t>(b[0]) |
                                    (static_cast<std::uint16_t>(b[1]) << 8));
}

constexpr char kMixMagic[8] = {'C', 'H', 'A', 'M', 'M', 'I', 'X', '1'};

void check_simplex(const MixtureWeights& weights) {
  if (weights.values.size() < 1) {
    throw InputError("mixture weights are empty");
  }
  if ((weights.values.array() <= 0.0).any()) {
    throw InputError("mixture weights must be strictly positive");
  }
  if (std::abs(weights.values.sum() - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "mixture weights sum to " << weights.values.sum() << ", not 1";
    throw InputError(os.str());
  }
}

}  // namespace

RecordSource read_jsonl_source(const std::filesystem::path& path,
                               std::string name) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open record source " + path.string());
  }
  RecordSource source;
  source.name = std::move(name);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) source.records.push_back(line);
  }
  return source;
}

WrapPolicy wrap_policy_from_string(const std::string& s) {
  if (s == "cycle") return WrapPolicy::cycle;
  if (s == "reshuffle-cycle") return WrapPolicy::reshuffle_cycle;
  throw ConfigError("unknown wrap policy '" + s +
                    "', expected cycle or reshuffle-cycle");
}

std::string to_string(WrapPolicy policy) {
  return policy == WrapPolicy::cycle ? "cycle" : "reshuffle-cycle";
}

int sample_domain(const MixtureWeights& weights, Xoshiro256ss& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  const Eigen::Index k = weights.values.size();
  for (Eigen::Index i = 0; i < k; ++i) {
    acc += weights.values(i);
    if (u < acc) return static_cast<int>(i);
  }
  // u landed past the last partial sum by rounding; fold into last bin.
  return static_cast<int>(k - 1);
}

MixStream::MixStream(const std::vector<RecordSource>& sources,
                     const MixPlan& plan)
    : sources_(sources), plan_(plan), rng_(plan.seed) {
  check_simplex(plan_.weights);
  if (plan_.length < 1) {
    throw ConfigError("mix length must be at least 1");
  }
  const std::size_t k = static_cast<std::size_t>(plan_.weights.values.size());
  if (sources_.size() != k) {
    std::ostringstream os;
    os << "plan names " << k << " domains but " << sources_.size()
       << " sources were given";
    throw ConfigError(os.str());
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (sources_[i].records.empty()) {
      throw ConfigError("record source " + sources_[i].name + " is empty");
    }
    if (!plan_.weights.labels.empty() &&
        sources_[i].name != plan_.weights.labels[i]) {
      throw ConfigError("source order mismatch: expected " +
                        plan_.weights.labels[i] + " at position " +
                        std::to_string(i) + ", got " + sources_[i].name);
    }
  }

  cdf_.resize(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    acc += plan_.weights.values(static_cast<Eigen::Index>(i));
    cdf_[i] = acc;
  }

  state_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    state_[i].order.resize(sources_[i].records.size());
    std::iota(state_[i].order.begin(), state_[i].order.end(), 0);
  }
}

MixRecord MixStream::next() {
  if (done()) {
    throw Error("mix stream exhausted");
  }
  const double u = rng_.next_double();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t domain = it == cdf_.end()
                                 ? cdf_.size() - 1
                                 : static_cast<std::size_t>(it - cdf_.begin());

  SourceState& st = state_[domain];
  if (st.cursor >= st.order.size()) {
    st.epoch += 1;
    st.cursor = 0;
    if (plan_.wrap == WrapPolicy::reshuffle_cycle) {
      Xoshiro256ss shuffle_rng(
          mix_seed(mix_seed(plan_.seed, domain), st.epoch));
      for (std::size_t i = 0; i + 1 < st.order.size(); ++i) {
        const std::uint64_t j =
            i + shuffle_rng.next_bounded(st.order.size() - i);
        std::swap(st.order[i], st.order[j]);
      }
    }
  }

  MixRecord rec;
  rec.position = emitted_;
  rec.domain_index = static_cast<int>(domain);
  rec.domain_name = sources_[domain].name;
  rec.payload = sources_[domain].records[st.order[st.cursor]];
  st.cursor += 1;
  emitted_ += 1;
  return rec;
}

std::vector<MixRecord> mix_stream(const std::vector<RecordSource>& sources,
                                  const MixPlan& plan) {
  MixStream stream(sources, plan);
  std::vector<MixRecord> out;
  out.reserve(plan.length);
  while (!stream.done()) {
    out.push_back(stream.next());
  }
  return out;
}

std::vector<double> empirical_frequencies(const std::vector<MixRecord>& stream,
                                          int k) {
  if (stream.empty()) {
    throw InputError("cannot compute frequencies of an empty stream");
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(k), 0);
  for (const auto& rec : stream) {
    if (rec.domain_index < 0 || rec.domain_index >= k) {
      std::ostringstream os;
      os << "corrupt stream: domain index " << rec.domain_index
         << " out of range [0, " << k << ")";
      throw InputError(os.str());
    }
    counts[static_cast<std::size_t>(rec.domain_index)] += 1;
  }
  std::vector<double> freq(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < freq.size(); ++i) {
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(stream.size());
  }
  return freq;
}

void write_mix_jsonl(std::ostream& os, const std::vector<MixRecord>& stream) {
  for (const auto& rec : stream) {
    nlohmann::ordered_json j;
    j["pos"] = rec.position;
    j["domain"] = rec.domain_name;
    j["payload"] = rec.payload;
    os << j.dump() << '\n';
  }
}

void write_mix_binary(const std::filesystem::path& path, int k,
                      const std::vector<std::uint16_t>& indices) {
  if (k < 1 || k > 65535) {
    throw InputError("mix binary format requires 1 <= k <= 65535");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write mix stream " + path.string());
  }
  out.write(kMixMagic, 8);
  put_u32_le(out, static_cast<std::uint32_t>(k));
  put_u64_le(out, indices.size());
  for (std::uint16_t idx : indices) {
    put_u16_le(out, idx);
  }
  if (!out) {
    throw IoError("short write on " + path.string());
  }
}

MixBinary read_mix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open mix stream " + path.string());
  }
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMixMagic, 8) != 0) {
    throw IoError(path.string() + ": bad magic, expected CHAMMIX1");
  }
  MixBinary mix;
  mix.k = static_cast<int>(get_u32_le(in));
  const std::uint64_t length = get_u64_le(in);
  if (!in) {
    throw IoError(path.string() + ": truncated header");
  }
  mix.indices.resize(length);
  for (std::uint64_t i = 0; i < length; ++i) {
    mix.indices[i] = get_u16_le(in);
    if (!in) {
      std::ostringstream os;
      os << path.string() << ": truncated at index " << i;
      throw IoError(os.str());
    }
    if (mix.indices[i] >= mix.k) {
      std::ostringstream os;
      os << path.string() << ": corrupt stream, index " << mix.indices[i]
         << " out of range [0, " << mix.k << ")";
      throw IoError(os.str());
    }
  }
  return mix;
}

}  // namespace cham
