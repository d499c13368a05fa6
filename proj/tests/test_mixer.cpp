#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cham/error.hpp"
#include "cham/mixer.hpp"
#include "test_support.hpp"

using namespace cham;

namespace {

MixtureWeights make_weights(std::vector<double> values,
                            std::vector<std::string> labels) {
  MixtureWeights w;
  w.values = Eigen::Map<Eigen::VectorXd>(values.data(),
                                         static_cast<Eigen::Index>(values.size()));
  w.labels = std::move(labels);
  return w;
}

RecordSource make_source(std::string name, std::vector<std::string> records) {
  return RecordSource{std::move(name), std::move(records)};
}

}  // namespace

TEST_SUITE("prng") {
  TEST_CASE("splitmix64 known-answer test") {
    // Outputs for seed 1234567 from the published reference implementation.
    SplitMix64 sm(1234567);
    CHECK(sm.next() == 6457827717110365317ULL);
    CHECK(sm.next() == 3203168211198807973ULL);
    CHECK(sm.next() == 9817491932198370423ULL);
  }

  TEST_CASE("xoshiro256** known-answer test") {
    // State {1,2,3,4} per the published reference implementation.
    Xoshiro256ss rng;
    rng.s[0] = 1;
    rng.s[1] = 2;
    rng.s[2] = 3;
    rng.s[3] = 4;
    CHECK(rng.next() == 11520ULL);
    CHECK(rng.next() == 0ULL);
    CHECK(rng.next() == 1509978240ULL);
    CHECK(rng.next() == 1215971899390074240ULL);
    CHECK(rng.next() == 1216172134540287360ULL);
  }

  TEST_CASE("splitmix-seeded xoshiro known-answer test") {
    Xoshiro256ss rng(42);
    CHECK(rng.next() == 1546998764402558742ULL);
    CHECK(rng.next() == 6990951692964543102ULL);
    CHECK(rng.next() == 12544586762248559009ULL);
  }

  TEST_CASE("canonical doubles live in the unit interval") {
    Xoshiro256ss rng(9);
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.next_double();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("bounded draws stay in range") {
    Xoshiro256ss rng(10);
    for (int i = 0; i < 10000; ++i) {
      CHECK(rng.next_bounded(7) < 7);
    }
  }
}

TEST_SUITE("sample_domain") {
  TEST_CASE("single domain always wins") {
    MixtureWeights w = make_weights({1.0}, {"only"});
    Xoshiro256ss rng(1);
    for (int i = 0; i < 100; ++i) {
      CHECK(sample_domain(w, rng) == 0);
    }
  }

  TEST_CASE("empirical frequency tracks the weights") {
    MixtureWeights w = make_weights({0.5, 0.5}, {"a", "b"});
    Xoshiro256ss rng(1);
    int zero = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      if (sample_domain(w, rng) == 0) ++zero;
    }
    // 3 sigma for p=0.5, n=1e5 is ~0.0047; the contract allows 0.01.
    CHECK(std::abs(static_cast<double>(zero) / draws - 0.5) < 0.01);
  }

  TEST_CASE("fixed seed reproduces the draw sequence") {
    MixtureWeights w = make_weights({0.3, 0.3, 0.4}, {"a", "b", "c"});
    Xoshiro256ss r1(77), r2(77);
    for (int i = 0; i < 1000; ++i) {
      CHECK(sample_domain(w, r1) == sample_domain(w, r2));
    }
  }
}

TEST_SUITE("mix_stream") {
  TEST_CASE("single source cycles in order") {
    MixPlan plan;
    plan.weights = make_weights({1.0}, {"solo"});
    plan.seed = 5;
    plan.length = 5;
    auto records =
        mix_stream({make_source("solo", {"a", "b", "c"})}, plan);
    REQUIRE(records.size() == 5);
    CHECK(records[0].payload == "a");
    CHECK(records[1].payload == "b");
    CHECK(records[2].payload == "c");
    CHECK(records[3].payload == "a");
    CHECK(records[4].payload == "b");
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(records[i].position == i);
      CHECK(records[i].domain_index == 0);
    }
  }

  TEST_CASE("same plan twice gives identical streams") {
    MixPlan plan;
    plan.weights = make_weights({0.6, 0.4}, {"x", "y"});
    plan.seed = 123;
    plan.length = 500;
    std::vector<RecordSource> sources = {
        make_source("x", {"x0", "x1", "x2"}),
        make_source("y", {"y0", "y1"})};
    auto a = mix_stream(sources, plan);
    auto b = mix_stream(sources, plan);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].domain_index == b[i].domain_index);
      CHECK(a[i].payload == b[i].payload);
    }
  }

  TEST_CASE("stream draws match sample_domain on the same seed") {
    MixPlan plan;
    plan.weights = make_weights({0.2, 0.5, 0.3}, {"a", "b", "c"});
    plan.seed = 9;
    plan.length = 300;
    std::vector<RecordSource> sources = {make_source("a", {"1"}),
                                         make_source("b", {"2"}),
                                         make_source("c", {"3"})};
    auto records = mix_stream(sources, plan);
    Xoshiro256ss rng(9);
    for (const auto& rec : records) {
      CHECK(rec.domain_index == sample_domain(plan.weights, rng));
    }
  }

  TEST_CASE("per-domain counts track an 80/20 mixture") {
    MixPlan plan;
    plan.weights = make_weights({0.8, 0.2}, {"big", "small"});
    plan.seed = 31;
    plan.length = 100000;
    std::vector<RecordSource> sources = {make_source("big", {"b"}),
                                         make_source("small", {"s"})};
    auto records = mix_stream(sources, plan);
    auto freq = empirical_frequencies(records, 2);
    CHECK(std::abs(freq[0] - 0.8) < 0.01);
    CHECK(std::abs(freq[1] - 0.2) < 0.01);
  }

  TEST_CASE("reshuffle-cycle revisits every record each epoch") {
    MixPlan plan;
    plan.weights = make_weights({1.0}, {"solo"});
    plan.seed = 4;
    plan.length = 12;
    plan.wrap = WrapPolicy::reshuffle_cycle;
    auto records =
        mix_stream({make_source("solo", {"a", "b", "c", "d"})}, plan);
    // Each epoch of 4 sees all payloads exactly once.
    for (int epoch = 0; epoch < 3; ++epoch) {
      std::set<std::string> seen;
      for (int i = 0; i < 4; ++i) {
        seen.insert(std::string(
            records[static_cast<std::size_t>(epoch * 4 + i)].payload));
      }
      CHECK(seen.size() == 4);
    }
    // First epoch is input order; later epochs are seeded shuffles.
    CHECK(records[0].payload == "a");
    CHECK(records[3].payload == "d");
  }

  TEST_CASE("cycle policy covers every record given generous length") {
    MixPlan plan;
    plan.weights = make_weights({0.7, 0.3}, {"a", "b"});
    plan.seed = 8;
    // Sum of source sizes over min weight is 7/0.3 = 24; run 20x that so
    // a coverage miss has negligible probability.
    plan.length = 480;
    std::vector<RecordSource> sources = {
        make_source("a", {"a0", "a1", "a2", "a3"}),
        make_source("b", {"b0", "b1", "b2"})};
    auto records = mix_stream(sources, plan);
    std::set<std::string> seen;
    std::uint64_t prev_pos = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      seen.insert(std::string(records[i].payload));
      if (i > 0) CHECK(records[i].position > prev_pos);
      prev_pos = records[i].position;
      CHECK(records[i].domain_index >= 0);
      CHECK(records[i].domain_index < 2);
    }
    CHECK(seen.size() == 7);
  }

  TEST_CASE("empty source is a configuration error before drawing") {
    MixPlan plan;
    plan.weights = make_weights({0.5, 0.5}, {"a", "b"});
    plan.length = 10;
    std::vector<RecordSource> sources = {make_source("a", {"x"}),
                                         make_source("b", {})};
    CHECK_THROWS_AS(MixStream(sources, plan), ConfigError);
  }

  TEST_CASE("misaligned source names are rejected") {
    MixPlan plan;
    plan.weights = make_weights({0.5, 0.5}, {"a", "b"});
    plan.length = 10;
    std::vector<RecordSource> sources = {make_source("b", {"x"}),
                                         make_source("a", {"y"})};
    CHECK_THROWS_AS(MixStream(sources, plan), ConfigError);
  }

  TEST_CASE("non-simplex weights are rejected") {
    MixPlan plan;
    plan.weights = make_weights({0.9, 0.3}, {"a", "b"});
    plan.length = 10;
    std::vector<RecordSource> sources = {make_source("a", {"x"}),
                                         make_source("b", {"y"})};
    CHECK_THROWS_AS(MixStream(sources, plan), InputError);
  }
}

TEST_SUITE("empirical_frequencies") {
  TEST_CASE("all one domain") {
    std::vector<MixRecord> stream(4);
    for (std::size_t i = 0; i < 4; ++i) {
      stream[i].position = i;
      stream[i].domain_index = 0;
    }
    auto freq = empirical_frequencies(stream, 2);
    CHECK(freq[0] == 1.0);
    CHECK(freq[1] == 0.0);
  }

  TEST_CASE("concatenation is the length-weighted average") {
    std::vector<MixRecord> a(6), b(2);
    for (auto& r : a) r.domain_index = 0;
    for (auto& r : b) r.domain_index = 1;
    std::vector<MixRecord> both = a;
    both.insert(both.end(), b.begin(), b.end());
    auto freq = empirical_frequencies(both, 2);
    CHECK(freq[0] == doctest::Approx(0.75));
    CHECK(freq[1] == doctest::Approx(0.25));
  }

  TEST_CASE("out-of-range index is a corrupt stream") {
    std::vector<MixRecord> stream(1);
    stream[0].domain_index = 5;
    CHECK_THROWS_WITH_AS(empirical_frequencies(stream, 2),
                         doctest::Contains("corrupt"), InputError);
    CHECK_THROWS_AS(empirical_frequencies({}, 2), InputError);
  }
}

TEST_SUITE("mix_formats") {
  TEST_CASE("binary round-trip over random payloads") {
    test::TempDir dir("mix-bin");
    Xoshiro256ss rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
      const int k = 1 + static_cast<int>(rng.next_bounded(200));
      const std::uint64_t length = 1 + rng.next_bounded(800);
      std::vector<std::uint16_t> indices(length);
      for (auto& idx : indices) {
        idx = static_cast<std::uint16_t>(rng.next_bounded(
            static_cast<std::uint64_t>(k)));
      }
      const auto path = dir.path() / ("t" + std::to_string(trial) + ".mix");
      write_mix_binary(path, k, indices);
      MixBinary back = read_mix_binary(path);
      CHECK(back.k == k);
      CHECK(back.indices == indices);
    }
  }

  TEST_CASE("binary reader rejects corrupt indices") {
    test::TempDir dir("mix-corrupt");
    write_mix_binary(dir.path() / "s.mix", 3, {0, 1, 2});
    // Flip an index byte beyond k.
    std::fstream f(dir.path() / "s.mix",
                   std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(20);  // first index slot
    const char big = 9;
    f.write(&big, 1);
    f.close();
    CHECK_THROWS_AS(read_mix_binary(dir.path() / "s.mix"), IoError);
  }

  TEST_CASE("jsonl output is one parseable object per record") {
    MixPlan plan;
    plan.weights = make_weights({1.0}, {"solo"});
    plan.length = 3;
    auto records = mix_stream({make_source("solo", {"p\"q", "r"})}, plan);
    std::ostringstream os;
    write_mix_jsonl(os, records);
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
      CHECK(line.find("\"pos\":") != std::string::npos);
      CHECK(line.find("\"domain\":\"solo\"") != std::string::npos);
      ++lines;
    }
    CHECK(lines == 3);
    // Quotes in payloads survive escaping.
    CHECK(os.str().find("p\\\"q") != std::string::npos);
  }
}
