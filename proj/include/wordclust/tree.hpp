#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordclust {

// Noun hierarchy. Text form, one tree per file:
//   internal  (#<id> <child> <child> ...)
//   leaf      (<noun> <noun> ...)
// e.g. (#0 (wine beer) (bread rice)). Trees produced by clustering are binary;
// hand-made thesauri loaded from disk may have wider internal nodes.
class ThesaurusTree {
 public:
  struct Node {
    std::string label;                 // "#k" for internal nodes, empty for leaves
    int parent = -1;
    std::vector<int> children;         // empty for leaves
    std::vector<std::string> members;  // leaf nouns, first-appearance order
    bool is_leaf() const { return children.empty(); }
  };

  // Incremental construction in preorder: a parent must be added before its
  // children.
  class Builder {
   public:
    int add_internal(std::string label, int parent = -1);
    int add_leaf(std::vector<std::string> members, int parent = -1);
    // Validates structure; throws DataError.
    ThesaurusTree build(bool require_binary = false) &&;

   private:
    std::vector<Node> nodes_;
  };

  static ThesaurusTree parse(std::string_view text, const std::string& source = "<tree>");
  static ThesaurusTree load(const std::filesystem::path& path);
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return nodes_.size(); }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  static constexpr int root() { return 0; }

  std::vector<int> leaves() const;
  // Leaf members in preorder.
  std::vector<std::string> nouns() const;
  std::size_t num_nouns() const { return leaf_of_.size(); }
  std::optional<int> leaf_of(std::string_view noun) const;
  // Number of nouns under the node.
  std::size_t noun_count(int id) const { return noun_counts_[static_cast<std::size_t>(id)]; }
  bool dominates(int ancestor, int descendant) const;
  bool is_binary() const;

  // Internal nodes keep their label; a leaf is named by its members joined
  // with ','.
  std::string display_label(int id) const;
  std::optional<int> find_label(std::string_view label) const;

  friend bool operator==(const ThesaurusTree& a, const ThesaurusTree& b) {
    return a.serialize() == b.serialize();
  }

 private:
  void index(bool require_binary);

  std::vector<Node> nodes_;
  std::vector<std::size_t> noun_counts_;
  std::unordered_map<std::string, int> leaf_of_;
  std::unordered_map<std::string, int> label_index_;
};

}  // namespace wordclust
