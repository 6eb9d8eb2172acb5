#include "wordclust/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "wordclust/errors.hpp"

namespace wordclust {

namespace {

constexpr std::int64_t kMaxCount = std::numeric_limits<Count>::max();

std::uint64_t cell_key(std::size_t noun, std::size_t verb) {
  return (static_cast<std::uint64_t>(noun) << 32) | static_cast<std::uint64_t>(verb);
}

std::size_t intern(std::string_view word, std::vector<std::string>& words,
                   std::unordered_map<std::string, std::size_t>& index) {
  std::string key(word);
  auto it = index.find(key);
  if (it != index.end()) return it->second;
  std::size_t id = words.size();
  words.push_back(key);
  index.emplace(std::move(key), id);
  return id;
}

std::int64_t parse_count(std::string_view field, const std::string& source, std::size_t line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec == std::errc::result_out_of_range || (ec == std::errc() && value > kMaxCount))
    throw ParseError(source, line, "count too large: '" + std::string(field) + "'");
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(source, line, "count is not an integer: '" + std::string(field) + "'");
  if (value < 0) throw ParseError(source, line, "negative count: '" + std::string(field) + "'");
  return value;
}

void require_nonempty_fields(const std::vector<std::string_view>& fields, const std::string& source,
                             std::size_t line) {
  for (auto f : fields)
    if (f.empty()) throw ParseError(source, line, "empty field");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<std::string_view> split_tabs(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool is_skippable_line(std::string_view line) {
  auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

std::size_t CoocData::Builder::add_noun(std::string_view noun) {
  return intern(noun, nouns_, noun_index_);
}

std::size_t CoocData::Builder::add_verb(std::string_view verb) {
  return intern(verb, verbs_, verb_index_);
}

void CoocData::Builder::add(std::string_view verb, std::string_view noun, std::int64_t count) {
  std::size_t v = add_verb(verb);
  std::size_t n = add_noun(noun);
  add(v, n, count);
}

void CoocData::Builder::add(std::size_t verb, std::size_t noun, std::int64_t count) {
  if (count < 0) throw PreconditionError("negative count");
  if (count == 0) return;
  cells_[cell_key(noun, verb)] += count;
}

CoocData CoocData::Builder::build() && {
  if (nouns_.empty() || verbs_.empty()) throw EmptyDataError("co-occurrence data has no entries");

  std::vector<std::pair<std::uint64_t, std::int64_t>> cells(cells_.begin(), cells_.end());
  std::sort(cells.begin(), cells.end());

  CoocData data;
  data.nouns_ = std::move(nouns_);
  data.verbs_ = std::move(verbs_);
  data.noun_index_ = std::move(noun_index_);
  data.verb_index_ = std::move(verb_index_);
  data.offsets_.assign(data.nouns_.size() + 1, 0);
  data.row_totals_.assign(data.nouns_.size(), 0);
  data.entry_verbs_.reserve(cells.size());
  data.entry_counts_.reserve(cells.size());

  for (const auto& [key, count] : cells) {
    auto noun = static_cast<std::size_t>(key >> 32);
    auto verb = static_cast<std::int32_t>(key & 0xffffffffu);
    if (count > kMaxCount) throw DataError("cell count exceeds 32-bit range");
    data.entry_verbs_.push_back(verb);
    data.entry_counts_.push_back(static_cast<Count>(count));
    data.offsets_[noun + 1]++;
    data.row_totals_[noun] += count;
    data.total_ += count;
  }
  if (data.total_ > kMaxCount) throw DataError("total count exceeds 32-bit range");
  for (std::size_t i = 1; i < data.offsets_.size(); ++i) data.offsets_[i] += data.offsets_[i - 1];
  return data;
}

std::span<const std::int32_t> CoocData::row_verbs(std::size_t noun) const {
  return {entry_verbs_.data() + offsets_[noun], offsets_[noun + 1] - offsets_[noun]};
}

std::span<const Count> CoocData::row_counts(std::size_t noun) const {
  return {entry_counts_.data() + offsets_[noun], offsets_[noun + 1] - offsets_[noun]};
}

Count CoocData::count(std::size_t noun, std::size_t verb) const {
  auto verbs = row_verbs(noun);
  auto it = std::lower_bound(verbs.begin(), verbs.end(), static_cast<std::int32_t>(verb));
  if (it == verbs.end() || *it != static_cast<std::int32_t>(verb)) return 0;
  return row_counts(noun)[static_cast<std::size_t>(it - verbs.begin())];
}

Count CoocData::count(std::string_view noun, std::string_view verb) const {
  auto n = noun_index(noun);
  if (!n) throw DataError("unknown noun '" + std::string(noun) + "'");
  auto v = verb_index(verb);
  if (!v) throw DataError("unknown verb '" + std::string(verb) + "'");
  return count(*n, *v);
}

std::optional<std::size_t> CoocData::noun_index(std::string_view noun) const {
  auto it = noun_index_.find(std::string(noun));
  if (it == noun_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CoocData::verb_index(std::string_view verb) const {
  auto it = verb_index_.find(std::string(verb));
  if (it == verb_index_.end()) return std::nullopt;
  return it->second;
}

CoocData parse_cooc(std::istream& in, const std::string& source) {
  CoocData::Builder builder;
  std::string line;
  std::size_t line_no = 0;
  std::size_t usable = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(source, line_no,
                       "expected 2 or 3 tab-separated fields, got " + std::to_string(fields.size()));
    require_nonempty_fields(fields, source, line_no);
    std::int64_t count = fields.size() == 3 ? parse_count(fields[2], source, line_no) : 1;
    builder.add(fields[0], fields[1], count);
    ++usable;
  }
  if (usable == 0) throw EmptyDataError(source + ": no co-occurrence lines");
  return std::move(builder).build();
}

CoocData load_cooc(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_cooc(in, path.string());
}

void write_cooc(std::ostream& out, const CoocData& data) {
  for (std::size_t n = 0; n < data.num_nouns(); ++n) {
    auto verbs = data.row_verbs(n);
    auto counts = data.row_counts(n);
    for (std::size_t i = 0; i < verbs.size(); ++i)
      out << data.verbs()[static_cast<std::size_t>(verbs[i])] << '\t' << data.nouns()[n] << '\t'
          << counts[i] << '\n';
  }
}

std::vector<AttachmentTuple> parse_tuples(std::istream& in, const std::string& source) {
  std::vector<AttachmentTuple> tuples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 5)
      throw ParseError(source, line_no,
                       "expected 5 tab-separated fields, got " + std::to_string(fields.size()));
    require_nonempty_fields(fields, source, line_no);
    AttachmentTuple t{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                      std::string(fields[3]), Attachment::Noun1};
    if (fields[4] == "V")
      t.gold = Attachment::Verb;
    else if (fields[4] == "N")
      t.gold = Attachment::Noun1;
    else
      throw ParseError(source, line_no, "gold label must be V or N, got '" + std::string(fields[4]) + "'");
    tuples.push_back(std::move(t));
  }
  return tuples;
}

std::vector<AttachmentTuple> load_tuples(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_tuples(in, path.string());
}

CoocData restrict(const CoocData& data, std::span<const std::string> nouns) {
  if (nouns.empty()) throw PreconditionError("restrict: empty noun subset");
  std::vector<std::size_t> indices;
  indices.reserve(nouns.size());
  for (const auto& noun : nouns) {
    auto idx = data.noun_index(noun);
    if (!idx) throw DataError("restrict: unknown noun '" + noun + "'");
    indices.push_back(*idx);
  }
  return restrict(data, indices);
}

CoocData restrict(const CoocData& data, std::span<const std::size_t> noun_indices) {
  if (noun_indices.empty()) throw PreconditionError("restrict: empty noun subset");
  std::vector<std::size_t> sorted(noun_indices.begin(), noun_indices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  CoocData::Builder builder;
  for (std::size_t n : sorted) {
    if (n >= data.num_nouns()) throw DataError("restrict: noun index out of range");
    builder.add_noun(data.nouns()[n]);
  }
  for (const auto& verb : data.verbs()) builder.add_verb(verb);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    auto verbs = data.row_verbs(sorted[i]);
    auto counts = data.row_counts(sorted[i]);
    for (std::size_t k = 0; k < verbs.size(); ++k)
      builder.add(static_cast<std::size_t>(verbs[k]), i, counts[k]);
  }
  return std::move(builder).build();
}

}  // namespace wordclust
