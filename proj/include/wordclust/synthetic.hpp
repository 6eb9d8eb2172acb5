#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wordclust/cluster.hpp"
#include "wordclust/corpus.hpp"
#include "wordclust/model.hpp"

namespace wordclust {

// Hand-specified generating model: non-empty noun and verb clusters with a
// joint cluster distribution summing to 1.
struct TrueModel {
  PartitionModel model;

  // Cell probabilities P(n,v), noun-major.
  std::vector<double> distribution() const;
};

// Throws DataError on empty clusters or a distribution that does not sum to 1.
TrueModel make_true_model(std::vector<std::vector<std::string>> noun_clusters,
                          std::vector<std::vector<std::string>> verb_clusters,
                          std::vector<double> cluster_probs);

// 12 nouns in 4 clusters of 3, 6 verbs in 3 clusters of 2, each noun cluster
// concentrated on its own verb profile.
TrueModel default_true_model();

// Sections, tab-separated, '#' comments:
//   [nouns]   one noun cluster per line
//   [verbs]   one verb cluster per line
//   [probs]   one row per noun cluster, one weight per verb cluster
// Weights are normalized to sum to 1.
TrueModel parse_true_model(std::istream& in, const std::string& source = "<model>");
TrueModel load_true_model(const std::filesystem::path& path);
void write_true_model(std::ostream& out, const TrueModel& model);

// n i.i.d. draws: cluster pair by its probability, then uniform members.
// The table keeps the model's full vocabulary, zero rows included.
CoocData sample(const TrueModel& model, std::int64_t n, std::uint64_t seed);

inline constexpr double kDefaultKlClamp = 1e-12;

// sum p log2(p / max(q, clamp)) over cells with p > 0.
double kl_divergence(std::span<const double> p, std::span<const double> q,
                     double clamp = kDefaultKlClamp);

struct ConvergenceRecord {
  std::int64_t sample_size = 0;
  int trial = 0;
  Criterion criterion = Criterion::MDL;
  std::size_t num_noun_clusters = 0;
  double kl = 0;
};

struct ExperimentOptions {
  std::vector<std::int64_t> sizes{50, 100, 200, 400, 800, 1600, 3200};
  int trials = 10;
  // One clustering run per config; each config carries its criterion and
  // schedule. Its seed field is ignored in favour of per-trial seeds.
  std::vector<AnnealConfig> configs{AnnealConfig{.criterion = Criterion::MDL},
                                    AnnealConfig{.criterion = Criterion::MLE}};
  std::uint64_t seed = 0;
  double kl_clamp = kDefaultKlClamp;
  bool parallel = false;
};

// Records ordered by (size, trial, config) regardless of scheduling.
std::vector<ConvergenceRecord> run_convergence_experiment(const TrueModel& model,
                                                          const ExperimentOptions& options);

struct ConvergenceSummary {
  std::int64_t sample_size = 0;
  Criterion criterion = Criterion::MDL;
  int trials = 0;
  double mean_clusters = 0;
  double mean_kl = 0;
};

std::vector<ConvergenceSummary> summarize(std::span<const ConvergenceRecord> records);

// sample_size,trial,criterion,num_clusters,kl
void write_records_csv(std::ostream& out, std::span<const ConvergenceRecord> records);
// sample_size,criterion,trials,mean_num_clusters,mean_kl,kl_clamp
void write_summary_csv(std::ostream& out, std::span<const ConvergenceSummary> summary, double kl_clamp);

}  // namespace wordclust
