#include "wordclust/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <random>

#include "wordclust/errors.hpp"
#include "wordclust/kernels.hpp"

namespace wordclust {

namespace {

bool is_improvement(double candidate, double best) {
  return candidate < best - 1e-9 * std::max(1.0, std::abs(best));
}

// Two-cluster noun partition with every verb its own cluster. Tracks the
// cluster rows f(C,v), cluster sizes and totals, and
// X = sum_C sum_v f(C,v) log2 f(C,v), so that
//   L_dat = |S| log2|S| + sum_C f(C) log2|C| - X.
class SplitObjective {
 public:
  SplitObjective(const CoocData& data, Criterion criterion, const kernels::KernelSet& kernels,
                 const kernels::XLogXTable* table)
      : data_(data), criterion_(criterion), kernels_(kernels), table_(table) {
    auto total = static_cast<double>(data.total());
    log2_total_ = std::log2(total);
    xlogx_total_ = kernels::xlogx(total);
    num_verbs_ = static_cast<double>(data.num_verbs());
    rows_[0].assign(data.num_verbs(), 0);
    rows_[1].assign(data.num_verbs(), 0);
  }

  void assign(const std::vector<std::uint8_t>& side) {
    side_ = side;
    for (auto& row : rows_) std::fill(row.begin(), row.end(), 0);
    sizes_[0] = sizes_[1] = 0;
    totals_[0] = totals_[1] = 0;
    for (std::size_t n = 0; n < side_.size(); ++n) {
      int s = side_[n];
      auto verbs = data_.row_verbs(n);
      auto counts = data_.row_counts(n);
      for (std::size_t i = 0; i < verbs.size(); ++i) rows_[s][static_cast<std::size_t>(verbs[i])] += counts[i];
      sizes_[s]++;
      totals_[s] += data_.row_total(n);
    }
    resync();
  }

  void resync() { xlogx_ = row_sum(rows_[0]) + row_sum(rows_[1]); }

  double value() const { return evaluate(sizes_, totals_, xlogx_); }

  // Criterion value if `noun` moved to the other side; `dx` receives the
  // change of X for apply().
  double propose(std::size_t noun, double& dx) const {
    int from = side_[noun];
    int to = 1 - from;
    auto verbs = data_.row_verbs(noun);
    auto counts = data_.row_counts(noun);
    dx = move_delta(verbs, counts, rows_[from], rows_[to]);

    std::size_t sizes[2] = {sizes_[0], sizes_[1]};
    std::int64_t totals[2] = {totals_[0], totals_[1]};
    sizes[from]--;
    sizes[to]++;
    totals[from] -= data_.row_total(noun);
    totals[to] += data_.row_total(noun);
    return evaluate(sizes, totals, xlogx_ + dx);
  }

  void apply(std::size_t noun, double dx) {
    int from = side_[noun];
    int to = 1 - from;
    auto verbs = data_.row_verbs(noun);
    auto counts = data_.row_counts(noun);
    for (std::size_t i = 0; i < verbs.size(); ++i) {
      auto v = static_cast<std::size_t>(verbs[i]);
      rows_[from][v] -= counts[i];
      rows_[to][v] += counts[i];
    }
    sizes_[from]--;
    sizes_[to]++;
    totals_[from] -= data_.row_total(noun);
    totals_[to] += data_.row_total(noun);
    xlogx_ += dx;
    side_[noun] = static_cast<std::uint8_t>(to);
  }

  const std::vector<std::uint8_t>& side() const { return side_; }

 private:
  double evaluate(const std::size_t sizes[2], const std::int64_t totals[2], double x) const {
    double dat = xlogx_total_ - x;
    for (int s = 0; s < 2; ++s)
      if (sizes[s] > 0) dat += static_cast<double>(totals[s]) * std::log2(static_cast<double>(sizes[s]));
    if (criterion_ == Criterion::MLE) return dat;
    double k_n = (sizes[0] > 0 && sizes[1] > 0) ? 2.0 : 1.0;
    return (k_n * num_verbs_ - 1.0) / 2.0 * log2_total_ + dat;
  }

  double row_sum(const std::vector<std::int32_t>& row) const {
    if (table_) return kernels_.xlogx_sum(row.data(), row.size(), table_->data());
    double sum = 0.0;
    for (std::int32_t c : row) sum += kernels::xlogx(c);
    return sum;
  }

  double move_delta(std::span<const std::int32_t> verbs, std::span<const Count> counts,
                    const std::vector<std::int32_t>& from, const std::vector<std::int32_t>& to) const {
    if (table_)
      return kernels_.move_delta(verbs.data(), counts.data(), verbs.size(), from.data(), to.data(),
                                 table_->data());
    double sum = 0.0;
    for (std::size_t i = 0; i < verbs.size(); ++i) {
      double f = from[static_cast<std::size_t>(verbs[i])];
      double t = to[static_cast<std::size_t>(verbs[i])];
      double c = counts[i];
      sum += (kernels::xlogx(f - c) - kernels::xlogx(f)) + (kernels::xlogx(t + c) - kernels::xlogx(t));
    }
    return sum;
  }

  const CoocData& data_;
  Criterion criterion_;
  const kernels::KernelSet& kernels_;
  const kernels::XLogXTable* table_;
  double log2_total_ = 0;
  double xlogx_total_ = 0;
  double num_verbs_ = 0;
  std::vector<std::uint8_t> side_;
  std::vector<std::int32_t> rows_[2];
  std::size_t sizes_[2] = {0, 0};
  std::int64_t totals_[2] = {0, 0};
  double xlogx_ = 0;
};

std::uint64_t membership_mask(const std::vector<std::uint8_t>& side) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < side.size() && i < 64; ++i)
    if (side[i]) mask |= std::uint64_t{1} << i;
  return mask;
}

Split make_split(const CoocData& data, const std::vector<std::uint8_t>& side, double value) {
  Split split;
  split.value = value;
  std::uint8_t first_side = side.empty() ? 0 : side[0];
  for (std::size_t n = 0; n < side.size(); ++n)
    (side[n] == first_side ? split.first : split.second).push_back(data.nouns()[n]);
  return split;
}

Split anneal_core(const CoocData& data, const AnnealConfig& config, const kernels::KernelSet& kernels,
                  const kernels::XLogXTable* table, std::vector<AnnealStep>* trace) {
  config.validate();
  std::size_t m = data.num_nouns();
  if (m < 2) throw PreconditionError("anneal_split needs at least two nouns");
  if (data.total() <= 0) throw PreconditionError("anneal_split needs |S| > 0");
  if (table && !table->covers(data.total())) table = nullptr;

  std::mt19937_64 rng(config.seed);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::uint8_t> side(m);
  for (auto& s : side) s = coin(rng) ? 1 : 0;

  SplitObjective objective(data, config.criterion, kernels, table);
  objective.assign(side);
  double current = objective.value();
  double best = current;
  std::vector<std::uint8_t> best_side = side;

  double temperature = config.t_init;
  std::size_t window = static_cast<std::size_t>(config.window_mult) * m;
  std::size_t trial = 0;
  while (true) {
    bool improved = false;
    for (std::size_t w = 0; w < window; ++w, ++trial) {
      std::size_t noun = pick(rng);
      double dx = 0;
      double candidate = objective.propose(noun, dx);
      double delta = candidate - current;
      bool accept = delta < 0 || unit(rng) < std::exp(-delta / temperature);
      if (accept) {
        objective.apply(noun, dx);
        current = candidate;
      }
      if (is_improvement(current, best)) {
        best = current;
        best_side = objective.side();
        improved = true;
      }
      if (trace)
        trace->push_back({trial, noun, delta, accept, current, best, temperature,
                          membership_mask(objective.side())});
    }
    objective.resync();
    current = objective.value();
    if (!improved) break;
    temperature *= config.cool;
  }

  objective.assign(best_side);
  return make_split(data, best_side, objective.value());
}

const kernels::XLogXTable* usable(const kernels::XLogXTable& table, const CoocData& data) {
  return table.covers(data.total()) ? &table : nullptr;
}

}  // namespace

void AnnealConfig::validate() const {
  if (!(t_init > 0.0)) throw ConfigError("t_init must be positive");
  if (!(cool > 0.0 && cool < 1.0)) throw ConfigError("cool must lie in (0, 1)");
  if (window_mult < 1) throw ConfigError("window_mult must be at least 1");
}

double split_criterion(const CoocData& data, const std::vector<bool>& second, Criterion criterion) {
  if (second.size() != data.num_nouns()) throw PreconditionError("split_criterion: wrong side vector size");
  Partition nouns(2);
  for (std::size_t n = 0; n < second.size(); ++n) nouns[second[n] ? 1 : 0].push_back(n);
  std::erase_if(nouns, [](const auto& c) { return c.empty(); });
  auto model = fit(nouns, singleton_partition(data.num_verbs()), data);
  return criterion_value(model, data, criterion);
}

Split anneal_split(const CoocData& data, const AnnealConfig& config, std::vector<AnnealStep>* trace) {
  return anneal_split_with(kernels::active(), data, config, trace);
}

Split anneal_split(std::span<const std::string> nouns, const CoocData& data, const AnnealConfig& config,
                   std::vector<AnnealStep>* trace) {
  if (nouns.size() < 2) throw PreconditionError("anneal_split needs at least two nouns");
  return anneal_split(restrict(data, nouns), config, trace);
}

Split anneal_split_with(const kernels::KernelSet& kernels, const CoocData& data,
                        const AnnealConfig& config, std::vector<AnnealStep>* trace) {
  kernels::XLogXTable table(data.total());
  return anneal_core(data, config, kernels, usable(table, data), trace);
}

Split exhaustive_split(const CoocData& data, Criterion criterion, std::size_t* evaluated) {
  std::size_t m = data.num_nouns();
  if (m > 20) throw PreconditionError("exhaustive_split is limited to 20 nouns");
  if (data.total() <= 0) throw PreconditionError("exhaustive_split needs |S| > 0");

  std::uint64_t candidates = std::uint64_t{1} << (m - 1);
  std::vector<bool> second(m, false);
  std::vector<bool> best_second;
  double best = 0;
  std::vector<std::size_t> best_first_idx, best_second_idx;

  for (std::uint64_t mask = 0; mask < candidates; ++mask) {
    std::vector<std::size_t> a{0}, b;
    for (std::size_t i = 1; i < m; ++i) {
      second[i] = (mask >> (i - 1)) & 1u;
      (second[i] ? b : a).push_back(i);
    }
    double value = split_criterion(data, second, criterion);
    bool take = best_second.empty();
    if (!take) {
      double tol = 1e-9 * std::max(1.0, std::abs(best));
      if (value < best - tol)
        take = true;
      else if (std::abs(value - best) <= tol)
        take = std::tie(a, b) < std::tie(best_first_idx, best_second_idx);
    }
    if (take) {
      best = value;
      best_second = second;
      best_first_idx = std::move(a);
      best_second_idx = std::move(b);
    }
  }
  if (evaluated) *evaluated = static_cast<std::size_t>(candidates);

  Split split;
  split.value = best;
  for (std::size_t i : best_first_idx) split.first.push_back(data.nouns()[i]);
  for (std::size_t i : best_second_idx) split.second.push_back(data.nouns()[i]);
  return split;
}

Split exhaustive_split(std::span<const std::string> nouns, const CoocData& data, Criterion criterion,
                       std::size_t* evaluated) {
  if (nouns.size() > 20) throw PreconditionError("exhaustive_split is limited to 20 nouns");
  return exhaustive_split(restrict(data, nouns), criterion, evaluated);
}

std::uint64_t child_seed(std::uint64_t parent_seed, std::uint64_t child_index) {
  std::uint64_t z = parent_seed + 0x9E3779B97F4A7C15ull * (child_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

struct ProtoNode {
  std::vector<std::string> members;
  std::unique_ptr<ProtoNode> left;
  std::unique_ptr<ProtoNode> right;
};

struct GrowContext {
  const AnnealConfig& config;
  const BuildOptions& options;
  const kernels::KernelSet& kernels;
  const kernels::XLogXTable& table;
};

std::unique_ptr<ProtoNode> grow(const CoocData& data, std::uint64_t seed, int depth, const GrowContext& ctx) {
  auto node = std::make_unique<ProtoNode>();
  if (data.num_nouns() == 1 || data.total() == 0) {
    node->members = data.nouns();
    return node;
  }
  AnnealConfig config = ctx.config;
  config.seed = seed;
  Split split = anneal_core(data, config, ctx.kernels, usable(ctx.table, data), nullptr);
  if (!split.is_split()) {
    node->members = data.nouns();
    return node;
  }
  CoocData left_data = restrict(data, split.first);
  CoocData right_data = restrict(data, split.second);
  std::uint64_t left_seed = child_seed(seed, 0);
  std::uint64_t right_seed = child_seed(seed, 1);
  if (ctx.options.parallel && depth < ctx.options.max_parallel_depth) {
    auto left = std::async(std::launch::async, [&] { return grow(left_data, left_seed, depth + 1, ctx); });
    node->right = grow(right_data, right_seed, depth + 1, ctx);
    node->left = left.get();
  } else {
    node->left = grow(left_data, left_seed, depth + 1, ctx);
    node->right = grow(right_data, right_seed, depth + 1, ctx);
  }
  return node;
}

void flatten(const ProtoNode& node, int parent, int& next_label, ThesaurusTree::Builder& builder) {
  if (!node.left) {
    builder.add_leaf(node.members, parent);
    return;
  }
  int id = builder.add_internal("#" + std::to_string(next_label++), parent);
  flatten(*node.left, id, next_label, builder);
  flatten(*node.right, id, next_label, builder);
}

void collect_members(const ThesaurusTree& tree, int id, std::vector<std::string>& out) {
  const auto& n = tree.node(id);
  if (n.is_leaf()) {
    out.insert(out.end(), n.members.begin(), n.members.end());
    return;
  }
  for (int c : n.children) collect_members(tree, c, out);
}

}  // namespace

ThesaurusTree build_tree(const CoocData& data, const AnnealConfig& config, const BuildOptions& options) {
  config.validate();
  if (data.num_nouns() == 0) throw PreconditionError("build_tree needs at least one noun");
  kernels::XLogXTable table(data.total());
  GrowContext ctx{config, options, kernels::active(), table};
  auto root = grow(data, config.seed, 0, ctx);
  ThesaurusTree::Builder builder;
  int next_label = 0;
  flatten(*root, -1, next_label, builder);
  return std::move(builder).build(/*require_binary=*/true);
}

std::vector<NodeLength> tree_description_lengths(const ThesaurusTree& tree, const CoocData& data) {
  std::vector<NodeLength> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    int id = static_cast<int>(i);
    const auto& n = tree.node(id);
    if (n.is_leaf()) continue;
    std::vector<std::string> members;
    collect_members(tree, id, members);
    CoocData local = restrict(data, members);
    if (local.total() <= 0) continue;
    std::vector<std::vector<std::string>> clusters;
    for (int c : n.children) {
      auto& cluster = clusters.emplace_back();
      collect_members(tree, c, cluster);
    }
    auto model = fit(partition_from_names(local.nouns(), clusters),
                     singleton_partition(local.num_verbs()), local);
    out.push_back({n.label, members.size(), total_dl(model, local)});
  }
  return out;
}

}  // namespace wordclust
