#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wordclust/corpus.hpp"

namespace wordclust {

enum class Criterion { MDL, MLE };

std::string_view criterion_name(Criterion c);  // "mdl" / "mle"
Criterion parse_criterion(std::string_view name);

// Clusters as index lists into a vocabulary.
using Partition = std::vector<std::vector<std::size_t>>;

Partition singleton_partition(std::size_t size);
Partition whole_partition(std::size_t size);
// Looks names up in `vocabulary`; throws DataError for unknown names.
Partition partition_from_names(const std::vector<std::string>& vocabulary,
                               const std::vector<std::vector<std::string>>& clusters);

// Joint distribution over (noun cluster, verb cluster) with uniform mass
// inside each cluster.
class PartitionModel {
 public:
  // Throws DataError if either partition does not partition its vocabulary
  // or a probability is negative.
  PartitionModel(std::vector<std::string> nouns, std::vector<std::string> verbs,
                 Partition noun_clusters, Partition verb_clusters,
                 std::vector<double> cluster_probs);

  const std::vector<std::string>& nouns() const { return nouns_; }
  const std::vector<std::string>& verbs() const { return verbs_; }
  const Partition& noun_clusters() const { return noun_clusters_; }
  const Partition& verb_clusters() const { return verb_clusters_; }
  std::size_t k_n() const { return noun_clusters_.size(); }
  std::size_t k_v() const { return verb_clusters_.size(); }

  double cluster_prob(std::size_t noun_cluster, std::size_t verb_cluster) const {
    return cluster_probs_[noun_cluster * k_v() + verb_cluster];
  }
  std::size_t noun_cluster_of(std::size_t noun) const { return noun_owner_[noun]; }
  std::size_t verb_cluster_of(std::size_t verb) const { return verb_owner_[verb]; }

 private:
  std::vector<std::string> nouns_;
  std::vector<std::string> verbs_;
  Partition noun_clusters_;
  Partition verb_clusters_;
  std::vector<double> cluster_probs_;  // row-major k_n x k_v
  std::vector<std::size_t> noun_owner_;
  std::vector<std::size_t> verb_owner_;
};

struct DescriptionLength {
  double l_mod = 0;
  double l_par = 0;
  double l_dat = 0;
  double l_prime = 0;  // l_par + l_dat
  double l_total = 0;  // l_mod + l_prime
};

// P(Cn,Cv) = f(Cn,Cv) / |S|. Requires |S| > 0.
PartitionModel fit(const Partition& noun_clusters, const Partition& verb_clusters,
                   const CoocData& data);

// P(Cn,Cv) / |Cn x Cv|
double word_prob(const PartitionModel& model, std::size_t noun, std::size_t verb);
double word_prob(const PartitionModel& model, std::string_view noun, std::string_view verb);

// Bits to name one binary noun partition: |N| - 1.
double model_dl(std::size_t num_nouns);
// (k_n k_v - 1)/2 * log2 |S|
double param_dl(std::size_t k_n, std::size_t k_v, std::int64_t sample_size);
// -sum f(n,v) log2 P(n,v) over observed pairs.
double data_dl(const PartitionModel& model, const CoocData& data);
DescriptionLength total_dl(const PartitionModel& model, const CoocData& data);
// MDL: l_par + l_dat.  MLE: l_dat.
double criterion_value(const PartitionModel& model, const CoocData& data, Criterion criterion);

}  // namespace wordclust
