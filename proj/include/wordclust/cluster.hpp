#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wordclust/corpus.hpp"
#include "wordclust/model.hpp"
#include "wordclust/tree.hpp"

namespace wordclust {

namespace kernels {
struct KernelSet;
}

// Annealing schedule: T starts at t_init and is multiplied by `cool` after
// every window of window_mult * |N| trials that improved the best value.
struct AnnealConfig {
  std::uint64_t seed = 0;
  double t_init = 1.0;
  double cool = 0.9;
  int window_mult = 10;
  Criterion criterion = Criterion::MDL;

  void validate() const;  // throws ConfigError
};

// A binary noun partition. `first` holds the side containing the earliest
// noun; `second` is empty when the search chose not to split.
struct Split {
  std::vector<std::string> first;
  std::vector<std::string> second;
  double value = 0;  // criterion value in bits

  bool is_split() const { return !first.empty() && !second.empty(); }
};

// One proposal of the annealing loop, recorded when a trace is requested.
struct AnnealStep {
  std::size_t trial = 0;
  std::size_t noun = 0;  // index into the data's noun list
  double delta = 0;
  bool accepted = false;
  double current = 0;  // criterion after the decision
  double best = 0;
  double temperature = 0;
  std::uint64_t membership = 0;  // bit i set: noun i on the second side (first 64 nouns)
};

// Binary noun-clustering objective for one side assignment, computed from
// the model layer (independent of the annealing bookkeeping). `second[i]`
// places noun i on the second side.
double split_criterion(const CoocData& data, const std::vector<bool>& second, Criterion criterion);

// Simulated annealing over binary partitions of all nouns in `data`.
// Requires |N| >= 2 and |S| > 0.
Split anneal_split(const CoocData& data, const AnnealConfig& config,
                   std::vector<AnnealStep>* trace = nullptr);
// Restricts `data` to `nouns` first.
Split anneal_split(std::span<const std::string> nouns, const CoocData& data,
                   const AnnealConfig& config, std::vector<AnnealStep>* trace = nullptr);
// Uses the given kernel set instead of the runtime choice.
Split anneal_split_with(const kernels::KernelSet& kernels, const CoocData& data,
                        const AnnealConfig& config, std::vector<AnnealStep>* trace = nullptr);

// Enumerates all 2^(|N|-1) binary partitions (no-split included). |N| <= 20.
Split exhaustive_split(const CoocData& data, Criterion criterion, std::size_t* evaluated = nullptr);
Split exhaustive_split(std::span<const std::string> nouns, const CoocData& data,
                       Criterion criterion, std::size_t* evaluated = nullptr);

// splitmix64(parent + golden * (index + 1))
std::uint64_t child_seed(std::uint64_t parent_seed, std::uint64_t child_index);

struct BuildOptions {
  bool parallel = false;
  int max_parallel_depth = 4;
};

// Recursive divisive clustering. Internal nodes are labelled #k in preorder.
ThesaurusTree build_tree(const CoocData& data, const AnnealConfig& config,
                         const BuildOptions& options = {});

// Per internal node: the binary model's description length on that node's
// data (l_mod is |N_node| - 1). Summed over nodes for tree-level reporting.
struct NodeLength {
  std::string label;
  std::size_t num_nouns = 0;
  DescriptionLength dl;
};
std::vector<NodeLength> tree_description_lengths(const ThesaurusTree& tree, const CoocData& data);

}  // namespace wordclust
