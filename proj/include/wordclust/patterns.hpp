#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordclust/corpus.hpp"
#include "wordclust/tree.hpp"

namespace wordclust {

struct SlotSample {
  std::string head;
  std::string prep;
  std::string filler;
  std::int64_t count = 1;
  std::size_t line = 0;  // source line, 0 when built in code
};

// `head \t prep \t filler \t count`
std::vector<SlotSample> parse_slot_samples(std::istream& in, const std::string& source = "<samples>");
std::vector<SlotSample> load_slot_samples(const std::filesystem::path& path);

// Conditional class distribution P(Class | head, prep) over a cut of one tree.
struct TreeCutPattern {
  std::string head;
  std::string prep;
  std::vector<int> cut;       // node ids in preorder
  std::vector<double> probs;  // aligned with cut
  std::int64_t sample_size = 0;

  std::optional<double> class_prob(int node) const;
};

// Antichain of nodes whose leaf sets partition the tree's nouns.
bool is_cut(const ThesaurusTree& tree, std::span<const int> cut);

// Description length of a cut for the given per-node counts:
//   (|cut| - 1)/2 log2|S| + sum_C -f(C) log2(f(C) / (|S| |C|))
// `node_counts` holds f(C) for every node of the tree.
double cut_description_length(const ThesaurusTree& tree, std::span<const std::int64_t> node_counts,
                              std::span<const int> cut);

// f(C) for every node from samples; throws DataError naming a filler that is
// not in the tree.
std::vector<std::int64_t> node_counts(const ThesaurusTree& tree, std::span<const SlotSample> samples);

// MDL-optimal cut by bottom-up dynamic programming. All samples must share
// one (head, prep) and total at least 1. Ties go to the coarser cut.
TreeCutPattern learn_cut(const ThesaurusTree& tree, std::span<const SlotSample> samples);

// P(C)/|C| for the cut member above `noun`. Throws DataError for unknown nouns.
double cut_prob(const TreeCutPattern& pattern, const ThesaurusTree& tree, std::string_view noun);

// Patterns for every (head, prep) in the samples, learned over one tree.
// The tree must outlive the set.
class PatternSet {
 public:
  PatternSet(const ThesaurusTree& tree, std::vector<TreeCutPattern> patterns);

  const ThesaurusTree& tree() const { return *tree_; }
  const std::vector<TreeCutPattern>& patterns() const { return patterns_; }
  const TreeCutPattern* find(std::string_view head, std::string_view prep) const;

  // 0 when the pattern is absent or the noun is outside the tree.
  double prob(std::string_view head, std::string_view prep, std::string_view noun) const;

 private:
  const ThesaurusTree* tree_;
  std::vector<TreeCutPattern> patterns_;
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> index_;
};

// Groups by (head, prep) in first-appearance order.
PatternSet learn_patterns(const ThesaurusTree& tree, std::span<const SlotSample> samples);

// Dump lines: head \t prep \t node-label \t class-prob
void write_patterns(std::ostream& out, const PatternSet& patterns);
PatternSet parse_patterns(std::istream& in, const ThesaurusTree& tree, const std::string& source = "<patterns>");
PatternSet load_patterns(const std::filesystem::path& path, const ThesaurusTree& tree);

enum class Verdict { Verb, Noun1, NoDecision };
enum class Stage { AutoThesaurus, ExternalThesaurus, LexicalAssoc, Default, None };

std::string_view verdict_name(Verdict v);
std::string_view stage_name(Stage s);  // auto / external / la / default / none

struct AttachmentDecision {
  Verdict verdict = Verdict::NoDecision;
  Stage stage = Stage::None;
  double p_verb = 0;
  double p_noun1 = 0;
};

// Strict comparison; equal values (0,0 included) give NoDecision.
AttachmentDecision decide_from_probs(double p_verb, double p_noun1, Stage stage);

// Missing patterns and nouns outside the tree count as probability 0.
AttachmentDecision decide(std::string_view verb, std::string_view noun1, std::string_view prep,
                          std::string_view noun2, const PatternSet& vpatterns,
                          const PatternSet& npatterns, Stage stage = Stage::AutoThesaurus);

// f(w, prep) and f(w, .) tables for the lexical-association backoff.
class AssocCounts {
 public:
  AssocCounts() = default;
  explicit AssocCounts(std::span<const SlotSample> samples);

  void add(std::string_view word, std::string_view prep, std::int64_t count);
  std::int64_t pair_count(std::string_view word, std::string_view prep) const;
  std::int64_t word_count(std::string_view word) const;

 private:
  std::map<std::pair<std::string, std::string>, std::int64_t, std::less<>> pair_;
  std::map<std::string, std::int64_t, std::less<>> word_;
};

// Compares (f(w,prep) + 0.5) / (f(w,.) + 1) for the verb and for noun1.
AttachmentDecision lexical_assoc(std::string_view verb, std::string_view noun1, std::string_view prep,
                                 const AssocCounts& assoc);

struct Decider {
  Stage stage = Stage::None;
  std::function<AttachmentDecision(const AttachmentTuple&)> decide;
};

Decider thesaurus_stage(const PatternSet& patterns, Stage stage);
Decider lexical_stage(const AssocCounts& assoc);
Decider default_stage();

// First stage that decides wins.
AttachmentDecision decide_chain(const AttachmentTuple& tuple, std::span<const Decider> stages);

struct StageTally {
  Stage stage = Stage::None;
  std::size_t decided = 0;
  std::size_t correct = 0;
};

struct EvalReport {
  std::size_t total = 0;
  std::size_t decided = 0;
  std::size_t correct = 0;
  double coverage = 0;              // percent
  std::optional<double> accuracy;   // percent; absent when nothing was decided
  std::vector<StageTally> stages;   // chain order
  std::vector<AttachmentDecision> decisions;  // per tuple
};

EvalReport evaluate(std::span<const AttachmentTuple> tuples, std::span<const Decider> chain);

// chain,coverage,accuracy
void write_report_csv(std::ostream& out, std::string_view chain_name, const EvalReport& report);
// stage,decided,correct,accuracy
void write_stage_csv(std::ostream& out, const EvalReport& report);
// verb \t noun1 \t prep \t noun2 \t verdict \t stage
void write_decisions_tsv(std::ostream& out, std::span<const AttachmentTuple> tuples, const EvalReport& report);

}  // namespace wordclust
