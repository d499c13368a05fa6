#include "cham/weights.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "cham/affinity.hpp"
#include "cham/error.hpp"

namespace cham {

namespace {

void check_temperature(double tau) {
  if (!(tau > 0.0)) {
    std::ostringstream os;
    os << "temperature must be positive, got " << tau;
    throw ParamError(os.str());
  }
}

void check_labels(const ScoreVector& scores,
                  const std::vector<std::string>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != scores.size()) {
    std::ostringstream os;
    os << "label count " << labels.size() << " does not match score count "
       << scores.size();
    throw InputError(os.str());
  }
}

std::string format_17g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string json_quote(const std::string& s) {
  return nlohmann::json(s).dump();
}

}  // namespace

std::string to_string(Phase phase) {
  return phase == Phase::pretrain ? "pretrain" : "finetune";
}

Phase phase_from_string(const std::string& s) {
  if (s == "pretrain") return Phase::pretrain;
  if (s == "finetune") return Phase::finetune;
  throw ConfigError("unknown phase '" + s + "', expected pretrain or finetune");
}

Eigen::Index MixtureWeights::argmax() const {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = i;
  }
  return best;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores, double temperature) {
  check_temperature(temperature);
  if (scores.size() < 1) {
    throw InputError("softmax needs at least one score");
  }
  if (!scores.allFinite()) {
    throw InputError("non-finite score passed to softmax");
  }

  const double shift = scores.maxCoeff();
  Eigen::VectorXd w =
      ((scores.array() - shift) / temperature).exp().matrix();
  // exp() underflows to exact zero around -745; floor so the simplex stays
  // strictly positive even at extreme temperatures.
  w = w.cwiseMax(std::numeric_limits<double>::min());
  return w / w.sum();
}

MixtureWeights pretrain_weights(const ScoreVector& scores,
                                const std::vector<std::string>& labels,
                                double temperature) {
  check_temperature(temperature);
  check_labels(scores, labels);
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (scores.values(i) <= kScoreEpsilon) {
      std::ostringstream os;
      os << "degenerate score " << scores.values(i) << " for domain "
         << labels[static_cast<std::size_t>(i)]
         << "; its inverse diverges (zero embedding upstream?)";
      throw InputError(os.str());
    }
  }
  MixtureWeights w;
  w.values = softmax(scores.values.cwiseInverse(), temperature);
  w.phase = Phase::pretrain;
  w.lambda = scores.lambda;
  w.temperature = temperature;
  w.labels = labels;
  return w;
}

MixtureWeights finetune_weights(const ScoreVector& scores,
                                const std::vector<std::string>& labels,
                                double temperature) {
  check_temperature(temperature);
  check_labels(scores, labels);
  MixtureWeights w;
  w.values = softmax(scores.values, temperature);
  w.phase = Phase::finetune;
  w.lambda = scores.lambda;
  w.temperature = temperature;
  w.labels = labels;
  return w;
}

MixtureWeights weights_for_new_domains(const EmbeddingMatrix& new_x,
                                       double lambda, Phase phase,
                                       double temperature,
                                       const std::string& expected_fingerprint) {
  if (!expected_fingerprint.empty() &&
      new_x.fingerprint() != expected_fingerprint) {
    std::ostringstream os;
    os << "incompatible embedder: expected fingerprint "
       << expected_fingerprint << ", embedding matrix carries '"
       << new_x.fingerprint() << "'";
    throw InputError(os.str());
  }
  const AffinityMatrix omega = build_affinity(new_x);
  const ScoreVector scores = krls_direct(omega, lambda);
  MixtureWeights w = phase == Phase::pretrain
                         ? pretrain_weights(scores, new_x.labels(), temperature)
                         : finetune_weights(scores, new_x.labels(), temperature);
  w.embedder_fingerprint = new_x.fingerprint();
  return w;
}

std::string weight_report_json(const MixtureWeights& weights,
                               const ScoreVector& scores) {
  if (weights.values.size() != scores.size() ||
      static_cast<Eigen::Index>(weights.labels.size()) != scores.size()) {
    throw InputError("weight report requires aligned scores, weights, labels");
  }
  // Hand-rolled writer: object key order and 17-significant-digit numbers
  // are part of the format.
  std::ostringstream os;
  os << "{\"phase\":" << json_quote(to_string(weights.phase))
     << ",\"lambda\":" << format_17g(weights.lambda)
     << ",\"temperature\":" << format_17g(weights.temperature);
  os << ",\"scores\":{";
  for (std::size_t i = 0; i < weights.labels.size(); ++i) {
    if (i > 0) os << ',';
    os << json_quote(weights.labels[i]) << ':'
       << format_17g(scores.values(static_cast<Eigen::Index>(i)));
  }
  os << "},\"weights\":{";
  for (std::size_t i = 0; i < weights.labels.size(); ++i) {
    if (i > 0) os << ',';
    os << json_quote(weights.labels[i]) << ':'
       << format_17g(weights.values(static_cast<Eigen::Index>(i)));
  }
  os << "},\"embedder_fingerprint\":"
     << json_quote(weights.embedder_fingerprint) << "}";
  return os.str();
}

void write_weight_report(const std::filesystem::path& path,
                         const MixtureWeights& weights,
                         const ScoreVector& scores) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write weight report " + path.string());
  }
  out << weight_report_json(weights, scores) << '\n';
}

WeightReport read_weight_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open weight report " + path.string());
  }
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("weight report " + path.string() + ": " + e.what());
  }

  WeightReport report;
  try {
    report.weights.phase = phase_from_string(j.at("phase").get<std::string>());
    report.weights.lambda = j.at("lambda").get<double>();
    report.weights.temperature = j.at("temperature").get<double>();
    const auto& wj = j.at("weights");
    const auto& sj = j.at("scores");
    report.weights.values.resize(static_cast<Eigen::Index>(wj.size()));
    report.scores.resize(static_cast<Eigen::Index>(wj.size()));
    Eigen::Index i = 0;
    for (const auto& [name, value] : wj.items()) {
      report.weights.labels.push_back(name);
      report.weights.values(i) = value.get<double>();
      if (!sj.contains(name)) {
        throw IoError("weight report " + path.string() +
                      ": scores missing domain " + name);
      }
      report.scores(i) = sj.at(name).get<double>();
      ++i;
    }
    if (j.contains("embedder_fingerprint")) {
      report.weights.embedder_fingerprint =
          j["embedder_fingerprint"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("weight report " + path.string() + ": " + e.what());
  }
  if (report.weights.values.size() == 0) {
    throw IoError("weight report " + path.string() + " lists no domains");
  }
  return report;
}

}  // namespace cham
