#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cham/rng.hpp"
#include "cham/weights.hpp"

namespace cham {

// One domain's records, in file order. Payloads are opaque lines.
struct RecordSource {
  std::string name;
  std::vector<std::string> records;
};

// JSONL, one opaque record per line.
RecordSource read_jsonl_source(const std::filesystem::path& path,
                               std::string name);

enum class WrapPolicy { cycle, reshuffle_cycle };

WrapPolicy wrap_policy_from_string(const std::string& s);
std::string to_string(WrapPolicy policy);

struct MixPlan {
  MixtureWeights weights;
  std::uint64_t seed = 0;
  std::uint64_t length = 0;
  WrapPolicy wrap = WrapPolicy::cycle;
};

struct MixRecord {
  std::uint64_t position = 0;
  int domain_index = 0;
  std::string domain_name;
  std::string payload;
};

// Categorical draw from the weights via inverse CDF on a canonical double.
int sample_domain(const MixtureWeights& weights, Xoshiro256ss& rng);

// Reproducible interleaving: per position, draw a domain i.i.d. from the
// weights and take that source's next record. Exhausted sources restart
// per the wrap policy; an epoch's reshuffle seed derives from (plan seed,
// source index, epoch number). Single consumer; sources must stay alive
// and untouched while the stream is active.
class MixStream {
 public:
  MixStream(const std::vector<RecordSource>& sources, const MixPlan& plan);

  bool done() const { return emitted_ >= plan_.length; }
  std::uint64_t emitted() const { return emitted_; }
  MixRecord next();

 private:
  struct SourceState {
    std::vector<std::uint32_t> order;
    std::uint64_t cursor = 0;
    std::uint64_t epoch = 0;
  };

  const std::vector<RecordSource>& sources_;
  MixPlan plan_;
  std::vector<double> cdf_;
  std::vector<SourceState> state_;
  Xoshiro256ss rng_;
  std::uint64_t emitted_ = 0;
};

// Materializes the whole stream.
std::vector<MixRecord> mix_stream(const std::vector<RecordSource>& sources,
                                  const MixPlan& plan);

// Normalized domain-index histogram. Indices at or above k are a corrupt
// stream.
std::vector<double> empirical_frequencies(const std::vector<MixRecord>& stream,
                                          int k);

// JSONL output: {"pos": int, "domain": str, "payload": str} per record.
void write_mix_jsonl(std::ostream& os, const std::vector<MixRecord>& stream);

// Compact index-only binary: magic "CHAMMIX1", u32 LE k, u64 LE length,
// then length u16 LE domain indices. Requires k <= 65535.
void write_mix_binary(const std::filesystem::path& path, int k,
                      const std::vector<std::uint16_t>& indices);

struct MixBinary {
  int k = 0;
  std::vector<std::uint16_t> indices;
};

MixBinary read_mix_binary(const std::filesystem::path& path);

}  // namespace cham
