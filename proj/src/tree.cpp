#include "wordclust/tree.hpp"

#include <fstream>
#include <sstream>

#include "wordclust/errors.hpp"

namespace wordclust {

namespace {

bool valid_noun(std::string_view noun) {
  if (noun.empty() || noun.front() == '#') return false;
  for (char ch : noun)
    if (ch == '(' || ch == ')' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') return false;
  return true;
}

class TreeParser {
 public:
  TreeParser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  ThesaurusTree run() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty tree");
    group(-1);
    skip_space();
    if (pos_ < text_.size()) fail("trailing text after tree");
    try {
      return std::move(builder_).build();
    } catch (const DataError& e) {
      throw ParseError(source_, 0, e.what());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line;
    throw ParseError(source_, line, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  std::string_view word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ' ' &&
           text_[pos_] != '\t' && text_[pos_] != '\n' && text_[pos_] != '\r')
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect(char ch) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  void group(int parent) {
    expect('(');
    skip_space();
    if (pos_ >= text_.size()) fail("unterminated group");
    if (text_[pos_] == '#') {
      std::string label(word());
      if (label.size() < 2) fail("internal node label needs a name after '#'");
      int id = builder_.add_internal(std::move(label), parent);
      std::size_t children = 0;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated internal node");
        if (text_[pos_] == ')') break;
        if (text_[pos_] != '(') fail("internal node children must be parenthesized");
        group(id);
        ++children;
      }
      if (children < 2) fail("internal node needs at least two children");
      ++pos_;
      return;
    }
    std::vector<std::string> members;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated leaf");
      if (text_[pos_] == ')') break;
      if (text_[pos_] == '(') fail("leaf groups cannot nest; internal nodes need a #label");
      auto w = word();
      if (!valid_noun(w)) fail("invalid noun '" + std::string(w) + "'");
      members.emplace_back(w);
    }
    if (members.empty()) fail("empty leaf");
    ++pos_;
    builder_.add_leaf(std::move(members), parent);
  }

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  ThesaurusTree::Builder builder_;
};

}  // namespace

int ThesaurusTree::Builder::add_internal(std::string label, int parent) {
  Node node;
  node.label = std::move(label);
  node.parent = parent;
  nodes_.push_back(std::move(node));
  int id = static_cast<int>(nodes_.size()) - 1;
  if (parent >= 0) nodes_.at(static_cast<std::size_t>(parent)).children.push_back(id);
  return id;
}

int ThesaurusTree::Builder::add_leaf(std::vector<std::string> members, int parent) {
  Node node;
  node.members = std::move(members);
  node.parent = parent;
  nodes_.push_back(std::move(node));
  int id = static_cast<int>(nodes_.size()) - 1;
  if (parent >= 0) nodes_.at(static_cast<std::size_t>(parent)).children.push_back(id);
  return id;
}

ThesaurusTree ThesaurusTree::Builder::build(bool require_binary) && {
  int root = -1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].parent < 0) {
      if (root >= 0) throw DataError("tree has more than one root");
      root = static_cast<int>(i);
    }
  }
  if (root < 0) throw DataError("tree has no root");

  // Renumber into preorder so subtrees are contiguous.
  ThesaurusTree tree;
  std::vector<std::pair<int, int>> stack{{root, -1}};
  while (!stack.empty()) {
    auto [old_id, new_parent] = stack.back();
    stack.pop_back();
    Node node = std::move(nodes_[static_cast<std::size_t>(old_id)]);
    std::vector<int> old_children = std::move(node.children);
    node.children.clear();
    node.parent = new_parent;
    int new_id = static_cast<int>(tree.nodes_.size());
    if (new_parent >= 0) tree.nodes_[static_cast<std::size_t>(new_parent)].children.push_back(new_id);
    tree.nodes_.push_back(std::move(node));
    for (auto it = old_children.rbegin(); it != old_children.rend(); ++it) stack.emplace_back(*it, new_id);
  }
  if (tree.nodes_.size() != nodes_.size()) throw DataError("tree nodes are not connected to the root");
  tree.index(require_binary);
  return tree;
}

void ThesaurusTree::index(bool require_binary) {
  noun_counts_.assign(nodes_.size(), 0);
  leaf_of_.clear();
  label_index_.clear();
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const Node& n = nodes_[i];
    if (n.is_leaf()) {
      if (!n.label.empty()) throw DataError("leaf nodes carry no label");
      if (n.members.empty()) throw DataError("empty leaf");
      for (const auto& m : n.members) {
        if (!valid_noun(m)) throw DataError("invalid noun '" + m + "'");
        if (!leaf_of_.emplace(m, static_cast<int>(i)).second)
          throw DataError("noun '" + m + "' appears in more than one leaf");
      }
      noun_counts_[i] = n.members.size();
    } else {
      if (n.label.size() < 2 || n.label.front() != '#')
        throw DataError("internal node label must look like #k");
      if (!n.members.empty()) throw DataError("internal node with members");
      if (n.children.size() < 2) throw DataError("internal node needs at least two children");
      if (require_binary && n.children.size() != 2)
        throw DataError("internal node " + n.label + " is not binary");
      for (int c : n.children) noun_counts_[i] += noun_counts_[static_cast<std::size_t>(c)];
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (!label_index_.emplace(display_label(static_cast<int>(i)), static_cast<int>(i)).second)
      throw DataError("duplicate node label '" + display_label(static_cast<int>(i)) + "'");
}

ThesaurusTree ThesaurusTree::parse(std::string_view text, const std::string& source) {
  return TreeParser(text, source).run();
}

ThesaurusTree ThesaurusTree::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::string ThesaurusTree::serialize() const {
  std::string out;
  auto emit = [&](auto&& self, int id) -> void {
    const Node& n = node(id);
    out += '(';
    if (n.is_leaf()) {
      for (std::size_t i = 0; i < n.members.size(); ++i) {
        if (i) out += ' ';
        out += n.members[i];
      }
    } else {
      out += n.label;
      for (int c : n.children) {
        out += ' ';
        self(self, c);
      }
    }
    out += ')';
  };
  if (!nodes_.empty()) emit(emit, root());
  return out;
}

void ThesaurusTree::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<int> ThesaurusTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].is_leaf()) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<std::string> ThesaurusTree::nouns() const {
  std::vector<std::string> out;
  for (int leaf : leaves())
    for (const auto& m : node(leaf).members) out.push_back(m);
  return out;
}

std::optional<int> ThesaurusTree::leaf_of(std::string_view noun) const {
  auto it = leaf_of_.find(std::string(noun));
  if (it == leaf_of_.end()) return std::nullopt;
  return it->second;
}

bool ThesaurusTree::dominates(int ancestor, int descendant) const {
  for (int cur = descendant; cur >= 0; cur = node(cur).parent)
    if (cur == ancestor) return true;
  return false;
}

bool ThesaurusTree::is_binary() const {
  for (const auto& n : nodes_)
    if (!n.is_leaf() && n.children.size() != 2) return false;
  return true;
}

std::string ThesaurusTree::display_label(int id) const {
  const Node& n = node(id);
  if (!n.is_leaf()) return n.label;
  std::string out;
  for (std::size_t i = 0; i < n.members.size(); ++i) {
    if (i) out += ',';
    out += n.members[i];
  }
  return out;
}

std::optional<int> ThesaurusTree::find_label(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace wordclust
