#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordclust {

using Count = std::int32_t;

// Verb-noun frequency table f(n,v). Rows are per noun, stored sparse and
// sorted by verb index. Noun and verb order is first appearance, which fixes
// iteration order for everything seeded downstream. Immutable once built.
class CoocData {
 public:
  class Builder {
   public:
    // Declares a word without adding mass; used to keep zero rows.
    std::size_t add_noun(std::string_view noun);
    std::size_t add_verb(std::string_view verb);

    // Accumulates across repeated (verb, noun) pairs.
    void add(std::string_view verb, std::string_view noun, std::int64_t count);
    void add(std::size_t verb, std::size_t noun, std::int64_t count);

    // Throws EmptyDataError if either vocabulary is empty.
    CoocData build() &&;

   private:
    std::vector<std::string> nouns_;
    std::vector<std::string> verbs_;
    std::unordered_map<std::string, std::size_t> noun_index_;
    std::unordered_map<std::string, std::size_t> verb_index_;
    std::unordered_map<std::uint64_t, std::int64_t> cells_;
  };

  const std::vector<std::string>& nouns() const { return nouns_; }
  const std::vector<std::string>& verbs() const { return verbs_; }
  std::size_t num_nouns() const { return nouns_.size(); }
  std::size_t num_verbs() const { return verbs_.size(); }

  // |S|
  std::int64_t total() const { return total_; }

  std::span<const std::int32_t> row_verbs(std::size_t noun) const;
  std::span<const Count> row_counts(std::size_t noun) const;
  std::int64_t row_total(std::size_t noun) const { return row_totals_[noun]; }

  Count count(std::size_t noun, std::size_t verb) const;
  // Throws DataError for words outside the vocabulary.
  Count count(std::string_view noun, std::string_view verb) const;

  std::optional<std::size_t> noun_index(std::string_view noun) const;
  std::optional<std::size_t> verb_index(std::string_view verb) const;

  friend bool operator==(const CoocData& a, const CoocData& b) {
    return a.nouns_ == b.nouns_ && a.verbs_ == b.verbs_ && a.offsets_ == b.offsets_ &&
           a.entry_verbs_ == b.entry_verbs_ && a.entry_counts_ == b.entry_counts_;
  }

 private:
  std::vector<std::string> nouns_;
  std::vector<std::string> verbs_;
  std::unordered_map<std::string, std::size_t> noun_index_;
  std::unordered_map<std::string, std::size_t> verb_index_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int32_t> entry_verbs_;
  std::vector<Count> entry_counts_;
  std::vector<std::int64_t> row_totals_;
  std::int64_t total_ = 0;
};

enum class Attachment { Verb, Noun1 };

struct AttachmentTuple {
  std::string verb;
  std::string noun1;
  std::string prep;
  std::string noun2;
  Attachment gold = Attachment::Noun1;

  friend bool operator==(const AttachmentTuple&, const AttachmentTuple&) = default;
};

// `verb \t noun [\t count]` lines; `#` comments and blank lines skipped.
CoocData parse_cooc(std::istream& in, const std::string& source = "<cooc>");
CoocData load_cooc(const std::filesystem::path& path);
void write_cooc(std::ostream& out, const CoocData& data);

// `verb \t noun1 \t prep \t noun2 \t V|N` lines.
std::vector<AttachmentTuple> parse_tuples(std::istream& in, const std::string& source = "<tuples>");
std::vector<AttachmentTuple> load_tuples(const std::filesystem::path& path);

// Keeps only the rows of the given nouns (original order preserved) and the
// full verb vocabulary. Throws DataError naming an unknown noun.
CoocData restrict(const CoocData& data, std::span<const std::string> nouns);
CoocData restrict(const CoocData& data, std::span<const std::size_t> noun_indices);

// Splits a line on tabs; shared by every TSV reader in the library.
std::vector<std::string_view> split_tabs(std::string_view line);
bool is_skippable_line(std::string_view line);

}  // namespace wordclust
