#include "wordclust/model.hpp"

#include <cmath>
#include <limits>

#include "wordclust/errors.hpp"

namespace wordclust {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> owners(const Partition& partition, std::size_t size, const char* what) {
  std::vector<std::size_t> owner(size, kUnassigned);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (partition[c].empty()) throw DataError(std::string(what) + " partition has an empty cluster");
    for (std::size_t w : partition[c]) {
      if (w >= size) throw DataError(std::string(what) + " partition references an unknown word");
      if (owner[w] != kUnassigned)
        throw DataError(std::string(what) + " partition clusters overlap");
      owner[w] = c;
    }
  }
  for (std::size_t w = 0; w < size; ++w)
    if (owner[w] == kUnassigned)
      throw DataError(std::string(what) + " partition does not cover the vocabulary");
  return owner;
}

void require_same_vocabulary(const PartitionModel& model, const CoocData& data) {
  if (model.nouns() != data.nouns() || model.verbs() != data.verbs())
    throw DataError("model and data vocabularies differ");
}

}  // namespace

std::string_view criterion_name(Criterion c) { return c == Criterion::MDL ? "mdl" : "mle"; }

Criterion parse_criterion(std::string_view name) {
  if (name == "mdl" || name == "MDL") return Criterion::MDL;
  if (name == "mle" || name == "MLE") return Criterion::MLE;
  throw ConfigError("unknown criterion '" + std::string(name) + "' (expected mdl or mle)");
}

Partition singleton_partition(std::size_t size) {
  Partition p(size);
  for (std::size_t i = 0; i < size; ++i) p[i] = {i};
  return p;
}

Partition whole_partition(std::size_t size) {
  Partition p(1);
  for (std::size_t i = 0; i < size; ++i) p[0].push_back(i);
  return p;
}

Partition partition_from_names(const std::vector<std::string>& vocabulary,
                               const std::vector<std::vector<std::string>>& clusters) {
  Partition p;
  for (const auto& cluster : clusters) {
    auto& out = p.emplace_back();
    for (const auto& name : cluster) {
      std::size_t i = 0;
      while (i < vocabulary.size() && vocabulary[i] != name) ++i;
      if (i == vocabulary.size()) throw DataError("unknown word '" + name + "'");
      out.push_back(i);
    }
  }
  return p;
}

PartitionModel::PartitionModel(std::vector<std::string> nouns, std::vector<std::string> verbs,
                               Partition noun_clusters, Partition verb_clusters,
                               std::vector<double> cluster_probs)
    : nouns_(std::move(nouns)),
      verbs_(std::move(verbs)),
      noun_clusters_(std::move(noun_clusters)),
      verb_clusters_(std::move(verb_clusters)),
      cluster_probs_(std::move(cluster_probs)) {
  noun_owner_ = owners(noun_clusters_, nouns_.size(), "noun");
  verb_owner_ = owners(verb_clusters_, verbs_.size(), "verb");
  if (cluster_probs_.size() != k_n() * k_v())
    throw DataError("cluster probability table has the wrong shape");
  for (double p : cluster_probs_)
    if (!(p >= 0.0)) throw DataError("cluster probabilities must be non-negative");
}

PartitionModel fit(const Partition& noun_clusters, const Partition& verb_clusters,
                   const CoocData& data) {
  if (data.total() <= 0) throw PreconditionError("fit: data has |S| = 0");
  auto noun_owner = owners(noun_clusters, data.num_nouns(), "noun");
  auto verb_owner = owners(verb_clusters, data.num_verbs(), "verb");

  std::size_t kv = verb_clusters.size();
  std::vector<std::int64_t> freq(noun_clusters.size() * kv, 0);
  for (std::size_t n = 0; n < data.num_nouns(); ++n) {
    auto verbs = data.row_verbs(n);
    auto counts = data.row_counts(n);
    for (std::size_t i = 0; i < verbs.size(); ++i)
      freq[noun_owner[n] * kv + verb_owner[static_cast<std::size_t>(verbs[i])]] += counts[i];
  }

  std::vector<double> probs(freq.size());
  auto total = static_cast<double>(data.total());
  for (std::size_t i = 0; i < freq.size(); ++i) probs[i] = static_cast<double>(freq[i]) / total;
  return PartitionModel(data.nouns(), data.verbs(), noun_clusters, verb_clusters, std::move(probs));
}

double word_prob(const PartitionModel& model, std::size_t noun, std::size_t verb) {
  if (noun >= model.nouns().size() || verb >= model.verbs().size())
    throw DataError("word_prob: index out of range");
  std::size_t cn = model.noun_cluster_of(noun);
  std::size_t cv = model.verb_cluster_of(verb);
  double cells = static_cast<double>(model.noun_clusters()[cn].size()) *
                 static_cast<double>(model.verb_clusters()[cv].size());
  return model.cluster_prob(cn, cv) / cells;
}

double word_prob(const PartitionModel& model, std::string_view noun, std::string_view verb) {
  auto find = [](const std::vector<std::string>& vocab, std::string_view word) {
    for (std::size_t i = 0; i < vocab.size(); ++i)
      if (vocab[i] == word) return i;
    throw DataError("unknown word '" + std::string(word) + "'");
  };
  return word_prob(model, find(model.nouns(), noun), find(model.verbs(), verb));
}

double model_dl(std::size_t num_nouns) {
  if (num_nouns == 0) throw PreconditionError("model_dl: no nouns");
  return static_cast<double>(num_nouns - 1);
}

double param_dl(std::size_t k_n, std::size_t k_v, std::int64_t sample_size) {
  if (k_n == 0 || k_v == 0) throw PreconditionError("param_dl: empty partition");
  if (sample_size <= 0) throw PreconditionError("param_dl: log|S| undefined for |S| = 0");
  double free_params = static_cast<double>(k_n * k_v - 1);
  return free_params / 2.0 * std::log2(static_cast<double>(sample_size));
}

double data_dl(const PartitionModel& model, const CoocData& data) {
  require_same_vocabulary(model, data);
  double bits = 0.0;
  for (std::size_t n = 0; n < data.num_nouns(); ++n) {
    auto verbs = data.row_verbs(n);
    auto counts = data.row_counts(n);
    for (std::size_t i = 0; i < verbs.size(); ++i) {
      double p = word_prob(model, n, static_cast<std::size_t>(verbs[i]));
      if (!(p > 0.0)) throw DataError("data_dl: observed pair has zero model probability");
      bits -= static_cast<double>(counts[i]) * std::log2(p);
    }
  }
  return bits;
}

DescriptionLength total_dl(const PartitionModel& model, const CoocData& data) {
  DescriptionLength dl;
  dl.l_mod = model_dl(data.num_nouns());
  dl.l_par = param_dl(model.k_n(), model.k_v(), data.total());
  dl.l_dat = data_dl(model, data);
  dl.l_prime = dl.l_par + dl.l_dat;
  dl.l_total = dl.l_mod + dl.l_prime;
  return dl;
}

double criterion_value(const PartitionModel& model, const CoocData& data, Criterion criterion) {
  double dat = data_dl(model, data);
  if (criterion == Criterion::MLE) return dat;
  return param_dl(model.k_n(), model.k_v(), data.total()) + dat;
}

}  // namespace wordclust
