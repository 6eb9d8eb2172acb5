#include "wordclust/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "wordclust/errors.hpp"
#include "wordclust/format.hpp"

namespace wordclust {

namespace {

std::string where(const SlotSample& s) {
  return s.line ? " (line " + std::to_string(s.line) + ")" : std::string();
}

// One class's share of the cut description length, including its
// parameter cost.
double class_cost(std::int64_t count, std::size_t size, double total, double half_log_total) {
  double cost = half_log_total;
  if (count > 0) {
    auto f = static_cast<double>(count);
    cost -= f * std::log2(f / (total * static_cast<double>(size)));
  }
  return cost;
}

}  // namespace

std::vector<SlotSample> parse_slot_samples(std::istream& in, const std::string& source) {
  std::vector<SlotSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 4)
      throw ParseError(source, line_no, "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    for (auto f : fields)
      if (f.empty()) throw ParseError(source, line_no, "empty field");
    std::int64_t count = 0;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), count);
    if (ec != std::errc() || ptr != fields[3].data() + fields[3].size())
      throw ParseError(source, line_no, "count is not an integer: '" + std::string(fields[3]) + "'");
    if (count < 1) throw ParseError(source, line_no, "count must be positive");
    out.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), count, line_no});
  }
  return out;
}

std::vector<SlotSample> load_slot_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_slot_samples(in, path.string());
}

std::optional<double> TreeCutPattern::class_prob(int node) const {
  for (std::size_t i = 0; i < cut.size(); ++i)
    if (cut[i] == node) return probs[i];
  return std::nullopt;
}

bool is_cut(const ThesaurusTree& tree, std::span<const int> cut) {
  if (cut.empty()) return false;
  for (int c : cut)
    if (c < 0 || static_cast<std::size_t>(c) >= tree.size()) return false;
  for (int leaf : tree.leaves()) {
    int covering = 0;
    for (int c : cut)
      if (tree.dominates(c, leaf)) ++covering;
    if (covering != 1) return false;
  }
  return true;
}

std::vector<std::int64_t> node_counts(const ThesaurusTree& tree, std::span<const SlotSample> samples) {
  std::vector<std::int64_t> counts(tree.size(), 0);
  for (const auto& s : samples) {
    auto leaf = tree.leaf_of(s.filler);
    if (!leaf) throw DataError("filler '" + s.filler + "' is not in the thesaurus" + where(s));
    for (int node = *leaf; node >= 0; node = tree.node(node).parent)
      counts[static_cast<std::size_t>(node)] += s.count;
  }
  return counts;
}

double cut_description_length(const ThesaurusTree& tree, std::span<const std::int64_t> counts,
                              std::span<const int> cut) {
  auto total = static_cast<double>(counts[static_cast<std::size_t>(ThesaurusTree::root())]);
  if (!(total > 0)) throw PreconditionError("cut description length needs |S| >= 1");
  double half_log_total = 0.5 * std::log2(total);
  double bits = -half_log_total;
  for (int c : cut)
    bits += class_cost(counts[static_cast<std::size_t>(c)], tree.noun_count(c), total, half_log_total);
  return bits;
}

TreeCutPattern learn_cut(const ThesaurusTree& tree, std::span<const SlotSample> samples) {
  if (samples.empty()) throw PreconditionError("learn_cut needs at least one sample");
  for (const auto& s : samples)
    if (s.head != samples[0].head || s.prep != samples[0].prep)
      throw PreconditionError("learn_cut samples must share one (head, prep)");

  auto counts = node_counts(tree, samples);
  auto total = static_cast<double>(counts[static_cast<std::size_t>(ThesaurusTree::root())]);
  double half_log_total = 0.5 * std::log2(total);

  // Children have larger preorder ids than their parent.
  std::vector<double> best(tree.size());
  std::vector<std::vector<int>> best_cut(tree.size());
  for (std::size_t i = tree.size(); i-- > 0;) {
    int id = static_cast<int>(i);
    const auto& node = tree.node(id);
    double here = class_cost(counts[i], tree.noun_count(id), total, half_log_total);
    if (node.is_leaf()) {
      best[i] = here;
      best_cut[i] = {id};
      continue;
    }
    double below = 0;
    for (int c : node.children) below += best[static_cast<std::size_t>(c)];
    if (here <= below + 1e-12 * std::max(1.0, std::abs(below))) {
      best[i] = here;
      best_cut[i] = {id};
    } else {
      best[i] = below;
      for (int c : node.children) {
        auto& child = best_cut[static_cast<std::size_t>(c)];
        best_cut[i].insert(best_cut[i].end(), child.begin(), child.end());
        std::vector<int>().swap(child);
      }
    }
  }

  TreeCutPattern pattern;
  pattern.head = samples[0].head;
  pattern.prep = samples[0].prep;
  pattern.cut = std::move(best_cut[0]);
  pattern.sample_size = counts[0];
  for (int c : pattern.cut) pattern.probs.push_back(static_cast<double>(counts[static_cast<std::size_t>(c)]) / total);
  return pattern;
}

double cut_prob(const TreeCutPattern& pattern, const ThesaurusTree& tree, std::string_view noun) {
  auto leaf = tree.leaf_of(noun);
  if (!leaf) throw DataError("noun '" + std::string(noun) + "' is not in the thesaurus");
  for (int node = *leaf; node >= 0; node = tree.node(node).parent)
    if (auto p = pattern.class_prob(node)) return *p / static_cast<double>(tree.noun_count(node));
  throw DataError("pattern cut does not cover noun '" + std::string(noun) + "'");
}

PatternSet::PatternSet(const ThesaurusTree& tree, std::vector<TreeCutPattern> patterns)
    : tree_(&tree), patterns_(std::move(patterns)) {
  for (std::size_t i = 0; i < patterns_.size(); ++i)
    if (!index_.emplace(std::make_pair(patterns_[i].head, patterns_[i].prep), i).second)
      throw DataError("duplicate pattern for (" + patterns_[i].head + ", " + patterns_[i].prep + ")");
}

const TreeCutPattern* PatternSet::find(std::string_view head, std::string_view prep) const {
  auto it = index_.find(std::make_pair(std::string(head), std::string(prep)));
  return it == index_.end() ? nullptr : &patterns_[it->second];
}

double PatternSet::prob(std::string_view head, std::string_view prep, std::string_view noun) const {
  const TreeCutPattern* p = find(head, prep);
  if (!p || !tree_->leaf_of(noun)) return 0.0;
  return cut_prob(*p, *tree_, noun);
}

PatternSet learn_patterns(const ThesaurusTree& tree, std::span<const SlotSample> samples) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<SlotSample>> groups;
  for (const auto& s : samples) {
    auto key = std::make_pair(s.head, s.prep);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(s);
  }
  std::vector<TreeCutPattern> patterns;
  for (const auto& key : order) patterns.push_back(learn_cut(tree, groups[key]));
  return PatternSet(tree, std::move(patterns));
}

void write_patterns(std::ostream& out, const PatternSet& set) {
  for (const auto& p : set.patterns())
    for (std::size_t i = 0; i < p.cut.size(); ++i)
      out << p.head << '\t' << p.prep << '\t' << set.tree().display_label(p.cut[i]) << '\t'
          << format_significant(p.probs[i]) << '\n';
}

PatternSet parse_patterns(std::istream& in, const ThesaurusTree& tree, const std::string& source) {
  std::vector<TreeCutPattern> patterns;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  std::vector<std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 4)
      throw ParseError(source, line_no, "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    auto node = tree.find_label(fields[2]);
    if (!node) throw ParseError(source, line_no, "unknown node '" + std::string(fields[2]) + "'");
    double prob = 0;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), prob);
    if (ec != std::errc() || ptr != fields[3].data() + fields[3].size() || !(prob >= 0 && prob <= 1))
      throw ParseError(source, line_no, "bad probability '" + std::string(fields[3]) + "'");
    auto key = std::make_pair(std::string(fields[0]), std::string(fields[1]));
    auto [it, inserted] = slot.emplace(key, patterns.size());
    if (inserted) {
      patterns.push_back({key.first, key.second, {}, {}, 0});
      first_line.push_back(line_no);
    }
    patterns[it->second].cut.push_back(*node);
    patterns[it->second].probs.push_back(prob);
  }
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    auto& p = patterns[i];
    if (!is_cut(tree, p.cut))
      throw ParseError(source, first_line[i], "nodes for (" + p.head + ", " + p.prep + ") do not form a cut");
    // Dumps list members in preorder; keep that invariant for loaded sets too.
    std::vector<std::size_t> order(p.cut.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p.cut[a] < p.cut[b]; });
    TreeCutPattern sorted{p.head, p.prep, {}, {}, 0};
    for (auto k : order) {
      sorted.cut.push_back(p.cut[k]);
      sorted.probs.push_back(p.probs[k]);
    }
    p = std::move(sorted);
  }
  return PatternSet(tree, std::move(patterns));
}

PatternSet load_patterns(const std::filesystem::path& path, const ThesaurusTree& tree) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_patterns(in, tree, path.string());
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Verb: return "VERB";
    case Verdict::Noun1: return "NOUN1";
    case Verdict::NoDecision: break;
  }
  return "NO_DECISION";
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::AutoThesaurus: return "auto";
    case Stage::ExternalThesaurus: return "external";
    case Stage::LexicalAssoc: return "la";
    case Stage::Default: return "default";
    case Stage::None: break;
  }
  return "none";
}

AttachmentDecision decide_from_probs(double p_verb, double p_noun1, Stage stage) {
  AttachmentDecision d{Verdict::NoDecision, stage, p_verb, p_noun1};
  if (p_verb > p_noun1)
    d.verdict = Verdict::Verb;
  else if (p_noun1 > p_verb)
    d.verdict = Verdict::Noun1;
  return d;
}

AttachmentDecision decide(std::string_view verb, std::string_view noun1, std::string_view prep,
                          std::string_view noun2, const PatternSet& vpatterns, const PatternSet& npatterns,
                          Stage stage) {
  return decide_from_probs(vpatterns.prob(verb, prep, noun2), npatterns.prob(noun1, prep, noun2), stage);
}

AssocCounts::AssocCounts(std::span<const SlotSample> samples) {
  for (const auto& s : samples) add(s.head, s.prep, s.count);
}

void AssocCounts::add(std::string_view word, std::string_view prep, std::int64_t count) {
  pair_[std::make_pair(std::string(word), std::string(prep))] += count;
  word_[std::string(word)] += count;
}

std::int64_t AssocCounts::pair_count(std::string_view word, std::string_view prep) const {
  auto it = pair_.find(std::make_pair(std::string(word), std::string(prep)));
  return it == pair_.end() ? 0 : it->second;
}

std::int64_t AssocCounts::word_count(std::string_view word) const {
  auto it = word_.find(word);
  return it == word_.end() ? 0 : it->second;
}

AttachmentDecision lexical_assoc(std::string_view verb, std::string_view noun1, std::string_view prep,
                                 const AssocCounts& assoc) {
  auto ratio = [&](std::string_view w) {
    return (static_cast<double>(assoc.pair_count(w, prep)) + 0.5) /
           (static_cast<double>(assoc.word_count(w)) + 1.0);
  };
  return decide_from_probs(ratio(verb), ratio(noun1), Stage::LexicalAssoc);
}

Decider thesaurus_stage(const PatternSet& patterns, Stage stage) {
  return {stage, [&patterns, stage](const AttachmentTuple& t) {
            return decide(t.verb, t.noun1, t.prep, t.noun2, patterns, patterns, stage);
          }};
}

Decider lexical_stage(const AssocCounts& assoc) {
  return {Stage::LexicalAssoc,
          [&assoc](const AttachmentTuple& t) { return lexical_assoc(t.verb, t.noun1, t.prep, assoc); }};
}

Decider default_stage() {
  return {Stage::Default, [](const AttachmentTuple&) { return decide_from_probs(0.0, 1.0, Stage::Default); }};
}

AttachmentDecision decide_chain(const AttachmentTuple& tuple, std::span<const Decider> stages) {
  for (const auto& stage : stages) {
    AttachmentDecision d = stage.decide(tuple);
    if (d.verdict != Verdict::NoDecision) {
      d.stage = stage.stage;
      return d;
    }
  }
  return {};
}

EvalReport evaluate(std::span<const AttachmentTuple> tuples, std::span<const Decider> chain) {
  if (tuples.empty()) throw PreconditionError("evaluate needs at least one tuple");
  EvalReport report;
  report.total = tuples.size();
  for (const auto& stage : chain) report.stages.push_back({stage.stage, 0, 0});
  for (const auto& t : tuples) {
    AttachmentDecision d = decide_chain(t, chain);
    if (d.verdict != Verdict::NoDecision) {
      bool right = (d.verdict == Verdict::Verb) == (t.gold == Attachment::Verb);
      report.decided++;
      if (right) report.correct++;
      for (auto& tally : report.stages)
        if (tally.stage == d.stage) {
          tally.decided++;
          if (right) tally.correct++;
          break;
        }
    }
    report.decisions.push_back(d);
  }
  report.coverage = 100.0 * static_cast<double>(report.decided) / static_cast<double>(report.total);
  if (report.decided > 0)
    report.accuracy = 100.0 * static_cast<double>(report.correct) / static_cast<double>(report.decided);
  return report;
}

void write_report_csv(std::ostream& out, std::string_view chain_name, const EvalReport& report) {
  out << "chain,coverage,accuracy\n";
  // multi-stage chains contain commas
  if (chain_name.find(',') != std::string_view::npos)
    out << '"' << chain_name << '"';
  else
    out << chain_name;
  out << ',' << format_significant(report.coverage) << ','
      << (report.accuracy ? format_significant(*report.accuracy) : std::string()) << '\n';
}

void write_stage_csv(std::ostream& out, const EvalReport& report) {
  out << "stage,decided,correct,accuracy\n";
  for (const auto& s : report.stages) {
    out << stage_name(s.stage) << ',' << s.decided << ',' << s.correct << ',';
    if (s.decided > 0)
      out << format_significant(100.0 * static_cast<double>(s.correct) / static_cast<double>(s.decided));
    out << '\n';
  }
}

void write_decisions_tsv(std::ostream& out, std::span<const AttachmentTuple> tuples, const EvalReport& report) {
  for (std::size_t i = 0; i < tuples.size() && i < report.decisions.size(); ++i) {
    const auto& t = tuples[i];
    const auto& d = report.decisions[i];
    out << t.verb << '\t' << t.noun1 << '\t' << t.prep << '\t' << t.noun2 << '\t' << verdict_name(d.verdict)
        << '\t' << stage_name(d.stage) << '\n';
  }
}

}  // namespace wordclust
