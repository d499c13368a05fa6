#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "cham/embedding_matrix.hpp"
#include "cham/scores.hpp"

namespace cham {

enum class Phase { pretrain, finetune };

std::string to_string(Phase phase);
Phase phase_from_string(const std::string& s);

// Pipeline defaults. Lambda sits where the score computation is flattest;
// the temperatures are the midpoints of the ranges that work well per
// phase.
inline constexpr double kDefaultLambda = 10.0;
inline constexpr double kDefaultPretrainTau = 7.5;
inline constexpr double kDefaultFinetuneTau = 0.35;
inline constexpr std::uint64_t kDefaultSamplesPerDomain = 4096;

// Scores at or below this are treated as degenerate: their inverse is
// meaningless and almost always signals a broken upstream embedding.
inline constexpr double kScoreEpsilon = 1e-12;

// Probability vector on the k-simplex: strictly positive, sums to 1.
struct MixtureWeights {
  Eigen::VectorXd values;
  Phase phase = Phase::pretrain;
  double lambda = 0.0;
  double temperature = 1.0;
  std::vector<std::string> labels;
  std::string embedder_fingerprint;

  // Lowest index among maximal entries.
  Eigen::Index argmax() const;
};

// Numerically stable temperature softmax: exp((z_i - max z)/tau),
// normalized. Exponents that underflow are floored at DBL_MIN so the
// output stays strictly positive.
Eigen::VectorXd softmax(const Eigen::VectorXd& scores, double temperature);

// Weights from softmax of inverse scores: common, well-covered domains get
// the mass. Errors out if any score is at or below kScoreEpsilon.
MixtureWeights pretrain_weights(const ScoreVector& scores,
                                const std::vector<std::string>& labels,
                                double temperature = kDefaultPretrainTau);

// Weights from softmax of the scores themselves: unique domains get the
// mass.
MixtureWeights finetune_weights(const ScoreVector& scores,
                                const std::vector<std::string>& labels,
                                double temperature = kDefaultFinetuneTau);

// Full recomputation on a changed domain set: affinity, scores, weights.
// Scores are relational, so there is no incremental shortcut. When
// expected_fingerprint is non-empty, new_x must carry the same fingerprint.
MixtureWeights weights_for_new_domains(const EmbeddingMatrix& new_x,
                                       double lambda, Phase phase,
                                       double temperature,
                                       const std::string& expected_fingerprint = "");

// Weight report, one JSON object:
// {"phase": .., "lambda": .., "temperature": .., "scores": {name: num},
//  "weights": {name: num}, "embedder_fingerprint": ..}
// Numbers are serialized at 17 significant digits so parsing recovers the
// exact doubles.
std::string weight_report_json(const MixtureWeights& weights,
                               const ScoreVector& scores);
void write_weight_report(const std::filesystem::path& path,
                         const MixtureWeights& weights,
                         const ScoreVector& scores);

struct WeightReport {
  MixtureWeights weights;
  Eigen::VectorXd scores;
};

WeightReport read_weight_report(const std::filesystem::path& path);

}  // namespace cham
