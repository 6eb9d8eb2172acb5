#include "wordclust/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "wordclust/errors.hpp"
#include "wordclust/format.hpp"

namespace wordclust {

namespace {

std::vector<std::string> flatten_names(const std::vector<std::vector<std::string>>& clusters) {
  std::vector<std::string> out;
  for (const auto& c : clusters) out.insert(out.end(), c.begin(), c.end());
  return out;
}

Partition consecutive_partition(const std::vector<std::vector<std::string>>& clusters) {
  Partition p;
  std::size_t next = 0;
  for (const auto& c : clusters) {
    auto& out = p.emplace_back();
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(next++);
  }
  return p;
}

double parse_weight(std::string_view field, const std::string& source, std::size_t line) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value))
    throw ParseError(source, line, "not a number: '" + std::string(field) + "'");
  if (value < 0) throw ParseError(source, line, "negative weight");
  return value;
}

}  // namespace

std::vector<double> TrueModel::distribution() const {
  std::vector<double> out;
  out.reserve(model.nouns().size() * model.verbs().size());
  for (std::size_t n = 0; n < model.nouns().size(); ++n)
    for (std::size_t v = 0; v < model.verbs().size(); ++v) out.push_back(word_prob(model, n, v));
  return out;
}

TrueModel make_true_model(std::vector<std::vector<std::string>> noun_clusters,
                          std::vector<std::vector<std::string>> verb_clusters,
                          std::vector<double> cluster_probs) {
  if (noun_clusters.empty() || verb_clusters.empty()) throw DataError("true model needs clusters");
  double sum = std::accumulate(cluster_probs.begin(), cluster_probs.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw DataError("true model cluster probabilities must sum to 1");
  auto nouns = flatten_names(noun_clusters);
  auto verbs = flatten_names(verb_clusters);
  Partition np = consecutive_partition(noun_clusters);
  Partition vp = consecutive_partition(verb_clusters);
  return TrueModel{PartitionModel(std::move(nouns), std::move(verbs), std::move(np), std::move(vp),
                                  std::move(cluster_probs))};
}

TrueModel default_true_model() {
  std::vector<std::vector<std::string>> nouns{{"n0", "n1", "n2"},
                                             {"n3", "n4", "n5"},
                                             {"n6", "n7", "n8"},
                                             {"n9", "n10", "n11"}};
  std::vector<std::vector<std::string>> verbs{{"v0", "v1"}, {"v2", "v3"}, {"v4", "v5"}};
  std::vector<double> weights{0.21, 0.01, 0.01,  //
                              0.01, 0.21, 0.01,  //
                              0.01, 0.01, 0.21,  //
                              0.11, 0.11, 0.01};
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= sum;
  return make_true_model(std::move(nouns), std::move(verbs), std::move(weights));
}

TrueModel parse_true_model(std::istream& in, const std::string& source) {
  enum class Section { None, Nouns, Verbs, Probs } section = Section::None;
  std::vector<std::vector<std::string>> nouns, verbs;
  std::vector<std::vector<double>> rows;
  std::size_t probs_line = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable_line(line)) continue;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view == "[nouns]") {
      section = Section::Nouns;
      continue;
    }
    if (view == "[verbs]") {
      section = Section::Verbs;
      continue;
    }
    if (view == "[probs]") {
      section = Section::Probs;
      probs_line = line_no;
      continue;
    }
    auto fields = split_tabs(view);
    for (auto f : fields)
      if (f.empty()) throw ParseError(source, line_no, "empty field");
    switch (section) {
      case Section::None:
        throw ParseError(source, line_no, "line outside of a [nouns]/[verbs]/[probs] section");
      case Section::Nouns:
        nouns.emplace_back(fields.begin(), fields.end());
        break;
      case Section::Verbs:
        verbs.emplace_back(fields.begin(), fields.end());
        break;
      case Section::Probs: {
        auto& row = rows.emplace_back();
        for (auto f : fields) row.push_back(parse_weight(f, source, line_no));
        if (!verbs.empty() && row.size() != verbs.size())
          throw ParseError(source, line_no,
                           "expected " + std::to_string(verbs.size()) + " weights, got " +
                               std::to_string(row.size()));
        break;
      }
    }
  }
  if (nouns.empty()) throw ParseError(source, line_no, "missing [nouns] section");
  if (verbs.empty()) throw ParseError(source, line_no, "missing [verbs] section");
  if (rows.size() != nouns.size())
    throw ParseError(source, probs_line,
                     "expected " + std::to_string(nouns.size()) + " probability rows, got " +
                         std::to_string(rows.size()));
  std::vector<double> weights;
  for (const auto& r : rows) {
    if (r.size() != verbs.size()) throw ParseError(source, probs_line, "ragged probability table");
    weights.insert(weights.end(), r.begin(), r.end());
  }
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0)) throw ParseError(source, probs_line, "probability weights sum to zero");
  for (double& w : weights) w /= sum;
  try {
    return make_true_model(std::move(nouns), std::move(verbs), std::move(weights));
  } catch (const DataError& e) {
    throw ParseError(source, 0, e.what());
  }
}

TrueModel load_true_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_true_model(in, path.string());
}

void write_true_model(std::ostream& out, const TrueModel& tm) {
  const auto& m = tm.model;
  auto cluster_lines = [&](const Partition& p, const std::vector<std::string>& names) {
    for (const auto& c : p) {
      for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "\t" : "") << names[c[i]];
      out << '\n';
    }
  };
  out << "[nouns]\n";
  cluster_lines(m.noun_clusters(), m.nouns());
  out << "[verbs]\n";
  cluster_lines(m.verb_clusters(), m.verbs());
  out << "[probs]\n";
  for (std::size_t i = 0; i < m.k_n(); ++i) {
    for (std::size_t j = 0; j < m.k_v(); ++j)
      out << (j ? "\t" : "") << format_significant(m.cluster_prob(i, j), 17);
    out << '\n';
  }
}

CoocData sample(const TrueModel& tm, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("sample size must be at least 1");
  const auto& m = tm.model;
  std::vector<double> weights;
  for (std::size_t i = 0; i < m.k_n(); ++i)
    for (std::size_t j = 0; j < m.k_v(); ++j) weights.push_back(m.cluster_prob(i, j));

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> cell(weights.begin(), weights.end());

  CoocData::Builder builder;
  for (const auto& noun : m.nouns()) builder.add_noun(noun);
  for (const auto& verb : m.verbs()) builder.add_verb(verb);
  for (std::int64_t k = 0; k < n; ++k) {
    std::size_t c = cell(rng);
    const auto& nc = m.noun_clusters()[c / m.k_v()];
    const auto& vc = m.verb_clusters()[c % m.k_v()];
    std::size_t noun = nc[std::uniform_int_distribution<std::size_t>(0, nc.size() - 1)(rng)];
    std::size_t verb = vc[std::uniform_int_distribution<std::size_t>(0, vc.size() - 1)(rng)];
    builder.add(verb, noun, 1);
  }
  return std::move(builder).build();
}

double kl_divergence(std::span<const double> p, std::span<const double> q, double clamp) {
  if (p.size() != q.size()) throw DataError("kl_divergence: distributions over different domains");
  if (!(clamp > 0)) throw PreconditionError("kl_divergence: clamp must be positive");
  double bits = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0)) continue;
    bits += p[i] * std::log2(p[i] / std::max(q[i], clamp));
  }
  return bits;
}

namespace {

std::vector<ConvergenceRecord> run_one(const TrueModel& tm, const std::vector<double>& truth,
                                       const ExperimentOptions& options, std::size_t size_index,
                                       int trial) {
  std::int64_t size = options.sizes[size_index];
  std::uint64_t sample_seed = child_seed(child_seed(options.seed, size_index), static_cast<std::uint64_t>(trial));
  CoocData data = sample(tm, size, sample_seed);
  std::uint64_t anneal_seed = child_seed(sample_seed, 0xA11EA1);

  std::vector<ConvergenceRecord> out;
  for (const auto& base : options.configs) {
    AnnealConfig config = base;
    config.seed = anneal_seed;
    ThesaurusTree tree = build_tree(data, config);

    Partition leaves;
    for (int leaf : tree.leaves()) {
      auto& cluster = leaves.emplace_back();
      for (const auto& noun : tree.node(leaf).members) cluster.push_back(*data.noun_index(noun));
    }
    PartitionModel estimate = fit(leaves, singleton_partition(data.num_verbs()), data);
    std::vector<double> q;
    q.reserve(truth.size());
    for (std::size_t n = 0; n < data.num_nouns(); ++n)
      for (std::size_t v = 0; v < data.num_verbs(); ++v) q.push_back(word_prob(estimate, n, v));

    out.push_back({size, trial, config.criterion, leaves.size(), kl_divergence(truth, q, options.kl_clamp)});
  }
  return out;
}

}  // namespace

std::vector<ConvergenceRecord> run_convergence_experiment(const TrueModel& tm,
                                                          const ExperimentOptions& options) {
  if (options.trials < 1) throw ConfigError("trials must be at least 1");
  if (options.configs.empty()) throw ConfigError("at least one clustering config is required");
  for (std::size_t i = 0; i < options.sizes.size(); ++i) {
    if (options.sizes[i] < 1) throw ConfigError("sample sizes must be positive");
    if (i > 0 && options.sizes[i] < options.sizes[i - 1]) throw ConfigError("sample sizes must be ascending");
  }
  for (const auto& c : options.configs) c.validate();

  // Sample vocabulary order equals the model's, so the truth vector lines up.
  std::vector<double> truth = tm.distribution();
  std::vector<std::vector<ConvergenceRecord>> jobs(options.sizes.size() * static_cast<std::size_t>(options.trials));
  auto job_index = [&](std::size_t s, int t) { return s * static_cast<std::size_t>(options.trials) + static_cast<std::size_t>(t); };

  if (options.parallel) {
    std::vector<std::future<std::vector<ConvergenceRecord>>> futures;
    for (std::size_t s = 0; s < options.sizes.size(); ++s)
      for (int t = 0; t < options.trials; ++t)
        futures.push_back(std::async(std::launch::async, run_one, std::cref(tm), std::cref(truth),
                                     std::cref(options), s, t));
    for (std::size_t i = 0; i < futures.size(); ++i) jobs[i] = futures[i].get();
  } else {
    for (std::size_t s = 0; s < options.sizes.size(); ++s)
      for (int t = 0; t < options.trials; ++t) jobs[job_index(s, t)] = run_one(tm, truth, options, s, t);
  }

  std::vector<ConvergenceRecord> records;
  for (auto& j : jobs) records.insert(records.end(), j.begin(), j.end());
  return records;
}

std::vector<ConvergenceSummary> summarize(std::span<const ConvergenceRecord> records) {
  // Keyed by first appearance of (size, criterion) to keep record order.
  std::vector<ConvergenceSummary> out;
  std::map<std::pair<std::int64_t, int>, std::size_t> slot;
  for (const auto& r : records) {
    auto key = std::make_pair(r.sample_size, static_cast<int>(r.criterion));
    auto [it, inserted] = slot.emplace(key, out.size());
    if (inserted) out.push_back({r.sample_size, r.criterion, 0, 0, 0});
    auto& s = out[it->second];
    s.trials++;
    s.mean_clusters += static_cast<double>(r.num_noun_clusters);
    s.mean_kl += r.kl;
  }
  for (auto& s : out) {
    s.mean_clusters /= s.trials;
    s.mean_kl /= s.trials;
  }
  return out;
}

void write_records_csv(std::ostream& out, std::span<const ConvergenceRecord> records) {
  out << "sample_size,trial,criterion,num_clusters,kl\n";
  for (const auto& r : records)
    out << r.sample_size << ',' << r.trial << ',' << criterion_name(r.criterion) << ','
        << r.num_noun_clusters << ',' << format_significant(r.kl) << '\n';
}

void write_summary_csv(std::ostream& out, std::span<const ConvergenceSummary> summary, double kl_clamp) {
  out << "sample_size,criterion,trials,mean_num_clusters,mean_kl,kl_clamp\n";
  for (const auto& s : summary)
    out << s.sample_size << ',' << criterion_name(s.criterion) << ',' << s.trials << ','
        << format_significant(s.mean_clusters) << ',' << format_significant(s.mean_kl) << ','
        << format_significant(kl_clamp) << '\n';
}

}  // namespace wordclust
