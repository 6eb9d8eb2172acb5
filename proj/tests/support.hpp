#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance binary. Nothing here calls the library's own objective code:
// description lengths are recomputed from raw counts with std::log2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wordclust/corpus.hpp"
#include "wordclust/patterns.hpp"
#include "wordclust/tree.hpp"

namespace testsupport {

using wordclust::CoocData;
using wordclust::ThesaurusTree;

inline CoocData food_data() {
  CoocData::Builder b;
  b.add("eat", "rice", 4);
  b.add("eat", "bread", 4);
  b.add("drink", "beer", 5);
  b.add("drink", "wine", 3);
  b.add("make", "bread", 2);
  b.add("make", "beer", 1);
  b.add("make", "wine", 1);
  return std::move(b).build();
}

inline const char* food_tsv() {
  return "eat\trice\t4\neat\tbread\t4\ndrink\tbeer\t5\ndrink\twine\t3\n"
         "make\tbread\t2\nmake\tbeer\t1\nmake\twine\t1\n";
}

// Root children: leaf <strength>, #80 over 26 nouns, #122 over 5 nouns.
inline const char* toy_tree_text() {
  return "(#0 (strength)\n"
         "  (#80 (#81 (ground wake success network game rest art organization plane output)\n"
         "            (television benefit letter holder support nation corporation review thousand manufacturer))\n"
         "       (margin man meeting customer agent help))\n"
         "  (#122 (reorganization attitude relief) (competition constitution)))\n";
}

inline std::vector<wordclust::SlotSample> toy_samples() {
  return {{"buy", "for", "attitude", 1, 0}, {"buy", "for", "corporation", 1, 0}, {"buy", "for", "strength", 2, 0}};
}

// Dense copy of a table: m[noun][verb].
using Dense = std::vector<std::vector<std::int64_t>>;

inline Dense dense(const CoocData& d) {
  Dense m(d.num_nouns(), std::vector<std::int64_t>(d.num_verbs(), 0));
  for (std::size_t n = 0; n < d.num_nouns(); ++n)
    for (std::size_t v = 0; v < d.num_verbs(); ++v) m[n][v] = d.count(n, v);
  return m;
}

// Criterion for an arbitrary noun partition with singleton verbs, straight
// from the definition: P(n,v) = f(C,v) / (|S| |C|).
inline double partition_criterion(const Dense& m, const std::vector<std::vector<std::size_t>>& clusters, bool mdl) {
  std::size_t nv = m.empty() ? 0 : m[0].size();
  double s = 0;
  for (const auto& row : m)
    for (auto c : row) s += static_cast<double>(c);
  double l_dat = 0;
  for (const auto& cl : clusters) {
    for (std::size_t v = 0; v < nv; ++v) {
      double fc = 0;
      for (auto n : cl) fc += static_cast<double>(m[n][v]);
      for (auto n : cl) {
        double f = static_cast<double>(m[n][v]);
        if (f > 0) l_dat -= f * std::log2(fc / (s * static_cast<double>(cl.size())));
      }
    }
  }
  if (!mdl) return l_dat;
  double k = static_cast<double>(clusters.size() * nv);
  return (k - 1) / 2 * std::log2(s) + l_dat;
}

// Binary split given as membership; an empty side collapses to one cluster.
inline double split_value(const Dense& m, std::uint64_t second_mask, bool mdl) {
  std::vector<std::size_t> a, b;
  for (std::size_t n = 0; n < m.size(); ++n) ((second_mask >> n) & 1 ? b : a).push_back(n);
  std::vector<std::vector<std::size_t>> cl;
  if (!a.empty()) cl.push_back(a);
  if (!b.empty()) cl.push_back(b);
  return partition_criterion(m, cl, mdl);
}

// Minimum over all 2^|N| memberships.
inline double brute_force_min(const Dense& m, bool mdl) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.size()); ++mask)
    best = std::min(best, split_value(m, mask, mdl));
  return best;
}

inline CoocData random_table(std::mt19937_64& rng, std::size_t nouns, std::size_t verbs, int max_count,
                             double density = 0.6) {
  CoocData::Builder b;
  for (std::size_t n = 0; n < nouns; ++n) b.add_noun("n" + std::to_string(n));
  for (std::size_t v = 0; v < verbs; ++v) b.add_verb("v" + std::to_string(v));
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> c(1, max_count);
  bool any = false;
  for (std::size_t n = 0; n < nouns; ++n)
    for (std::size_t v = 0; v < verbs; ++v)
      if (u(rng) < density) {
        b.add(v, n, c(rng));
        any = true;
      }
  if (!any) b.add(std::size_t{0}, std::size_t{0}, 1);
  return std::move(b).build();
}

// ---- tree cuts

// Every cut of the subtree at `node`: the node itself, or any combination of
// cuts of its children.
inline std::vector<std::vector<int>> enumerate_cuts(const ThesaurusTree& t, int node) {
  std::vector<std::vector<int>> out{{node}};
  const auto& kids = t.node(node).children;
  if (kids.empty()) return out;
  std::vector<std::vector<int>> combos{{}};
  for (int k : kids) {
    auto sub = enumerate_cuts(t, k);
    std::vector<std::vector<int>> next;
    for (const auto& prefix : combos)
      for (const auto& s : sub) {
        auto c = prefix;
        c.insert(c.end(), s.begin(), s.end());
        next.push_back(std::move(c));
      }
    combos = std::move(next);
  }
  out.insert(out.end(), combos.begin(), combos.end());
  return out;
}

// f(C) for every node by walking leaf membership upwards.
inline std::vector<std::int64_t> oracle_node_counts(const ThesaurusTree& t,
                                                    const std::vector<wordclust::SlotSample>& samples) {
  std::vector<std::int64_t> f(t.size(), 0);
  for (const auto& s : samples) {
    for (int n = *t.leaf_of(s.filler); n >= 0; n = t.node(n).parent) f[static_cast<std::size_t>(n)] += s.count;
  }
  return f;
}

inline double oracle_cut_cost(const ThesaurusTree& t, const std::vector<std::int64_t>& f, const std::vector<int>& cut) {
  double s = static_cast<double>(f[0]);
  double cost = (static_cast<double>(cut.size()) - 1) / 2 * std::log2(s);
  for (int c : cut) {
    double fc = static_cast<double>(f[static_cast<std::size_t>(c)]);
    if (fc > 0) cost -= fc * std::log2(fc / (s * static_cast<double>(t.noun_count(c))));
  }
  return cost;
}

// Random tree over nouns w0..w{nouns-1}; internal nodes have 2 or 3 children,
// leaves hold one to three nouns.
inline ThesaurusTree random_tree(std::mt19937_64& rng, std::size_t nouns) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < nouns; ++i) words.push_back("w" + std::to_string(i));
  ThesaurusTree::Builder b;
  int next_label = 0;
  std::function<void(std::vector<std::string>, int)> grow = [&](std::vector<std::string> ws, int parent) {
    std::uniform_int_distribution<int> coin(0, 3);
    if (ws.size() == 1 || (ws.size() <= 3 && coin(rng) == 0)) {
      b.add_leaf(ws, parent);
      return;
    }
    std::size_t parts = std::min<std::size_t>(ws.size(), std::uniform_int_distribution<std::size_t>(2, 3)(rng));
    std::vector<std::size_t> cuts;
    std::vector<std::size_t> idx(ws.size() - 1);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
    std::shuffle(idx.begin(), idx.end(), rng);
    cuts.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(parts - 1));
    std::sort(cuts.begin(), cuts.end());
    int id = b.add_internal("#" + std::to_string(next_label++), parent);
    std::size_t from = 0;
    cuts.push_back(ws.size());
    for (auto to : cuts) {
      grow(std::vector<std::string>(ws.begin() + static_cast<std::ptrdiff_t>(from),
                                    ws.begin() + static_cast<std::ptrdiff_t>(to)),
           id);
      from = to;
    }
  };
  grow(words, -1);
  return std::move(b).build();
}

inline std::vector<wordclust::SlotSample> random_samples(std::mt19937_64& rng, const ThesaurusTree& t, int draws) {
  auto nouns = t.nouns();
  // skewed towards a few nouns so that coarse and fine cuts both win sometimes
  std::vector<double> w;
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < nouns.size(); ++i) w.push_back(std::pow(u(rng), 3));
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::map<std::string, std::int64_t> counts;
  for (int i = 0; i < draws; ++i) ++counts[nouns[pick(rng)]];
  std::vector<wordclust::SlotSample> out;
  for (const auto& [noun, c] : counts) out.push_back({"h", "p", noun, c, 0});
  return out;
}

}  // namespace testsupport
