#include "lorank/sdpa_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "lorank/errors.hpp"

namespace lorank {

namespace {

struct Line {
  std::string text;
  std::size_t number;  // 1-based
};

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string s;
  std::size_t no = 0;
  while (std::getline(in, s)) {
    ++no;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    lines.push_back({std::move(s), no});
  }
  return lines;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

bool is_comment(std::string_view s) {
  const auto p = s.find_first_not_of(" \t");
  return p != std::string_view::npos && (s[p] == '"' || s[p] == '*');
}

std::vector<std::string> tokens(std::string_view s, bool punctuation_is_space) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    const bool sep = c == ' ' || c == '\t' ||
                     (punctuation_is_space && (c == '{' || c == '}' || c == '(' || c == ')' || c == ','));
    if (sep) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<double> to_double(std::string tok) {
  // Fortran-style exponents (1.0D+00) appear in some older files.
  std::replace(tok.begin(), tok.end(), 'D', 'e');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  if (!tok.empty() && tok.front() == '+') tok.erase(tok.begin());
  double v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<long> to_long(const std::string& tok) {
  long v = 0;
  const char* b = tok.data();
  if (!tok.empty() && tok.front() == '+') ++b;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end) {
    // Integers written as reals ("2.0") are accepted when exact.
    const auto d = to_double(tok);
    if (d && std::isfinite(*d) && *d == std::floor(*d)) return static_cast<long>(*d);
    return std::nullopt;
  }
  return v;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Line> lines) : lines_(std::move(lines)) {}

  /// Next line that is neither blank nor a comment, or nullptr at EOF.
  const Line* next_content() {
    while (pos_ < lines_.size()) {
      const Line& l = lines_[pos_++];
      if (!is_blank(l.text) && !is_comment(l.text)) return &l;
    }
    return nullptr;
  }

  std::size_t last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

long leading_integer(Cursor& cur, const char* section) {
  const Line* l = cur.next_content();
  if (!l) throw ParseError(std::string("missing section: ") + section, cur.last_line());
  const auto toks = tokens(l->text, true);
  const auto v = toks.empty() ? std::nullopt : to_long(toks.front());
  if (!v) throw ParseError(std::string("malformed ") + section + " line", l->number);
  return *v;
}

/// Collects `count` numbers that may span several lines; trailing
/// non-numeric text on a line ends that line.
template <typename T, typename Conv>
std::vector<T> numbers(Cursor& cur, std::size_t count, const char* section, Conv conv) {
  std::vector<T> out;
  std::size_t last = cur.last_line();
  while (out.size() < count) {
    const Line* l = cur.next_content();
    if (!l) throw ParseError(std::string("missing section: ") + section, last);
    last = l->number;
    bool any = false;
    for (const auto& tok : tokens(l->text, true)) {
      if (out.size() == count) break;
      const auto v = conv(tok);
      if (!v) break;
      out.push_back(static_cast<T>(*v));
      any = true;
    }
    if (!any) throw ParseError(std::string("malformed ") + section + " line", l->number);
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

SdpProblemd parse_sdpa(std::istream& in) {
  Cursor cur(read_lines(in));
  const long m = leading_integer(cur, "constraint count");
  if (m < 1) throw ParseError("constraint count must be positive", 0);
  const long nblocks = leading_integer(cur, "block count");
  if (nblocks < 1) throw ParseError("block count must be positive", 0);

  const auto sizes = numbers<long>(cur, static_cast<std::size_t>(nblocks), "block sizes",
                                   [](const std::string& t) { return to_long(t); });
  std::vector<Index> block_sizes;
  std::vector<Index> offset;
  Index n = 0;
  for (long s : sizes) {
    if (s == 0) throw ParseError("zero block size", 0);
    block_sizes.push_back(s);
    offset.push_back(n);
    n += std::abs(s);
  }
  const auto c = numbers<double>(cur, static_cast<std::size_t>(m), "objective vector",
                                 [](const std::string& t) { return to_double(t); });

  using Entry = SymEntry<double>;
  std::vector<std::vector<Entry>> mats(static_cast<std::size_t>(m) + 1);
  std::vector<std::set<std::pair<Index, Index>>> seen(static_cast<std::size_t>(m) + 1);
  while (const Line* l = cur.next_content()) {
    const auto toks = tokens(l->text, true);
    if (toks.size() < 5) throw ParseError("malformed entry line", l->number);
    const auto matno = to_long(toks[0]);
    const auto blk = to_long(toks[1]);
    const auto i = to_long(toks[2]);
    const auto j = to_long(toks[3]);
    const auto v = to_double(toks[4]);
    if (!matno || !blk || !i || !j || !v || !std::isfinite(*v))
      throw ParseError("malformed entry line", l->number);
    if (*matno < 0 || *matno > m) throw ParseError("matrix number out of range", l->number);
    if (*blk < 1 || *blk > nblocks) throw ParseError("block number out of range", l->number);
    const Index size = block_sizes[static_cast<std::size_t>(*blk - 1)];
    if (*i < 1 || *j < 1 || *i > std::abs(size) || *j > std::abs(size))
      throw ParseError("index outside block " + std::to_string(*blk), l->number);
    if (size < 0 && *i != *j)
      throw ParseError("off-diagonal entry in diagonal block " + std::to_string(*blk), l->number);
    if (*v == 0.0) continue;
    const Index base = offset[static_cast<std::size_t>(*blk - 1)];
    Index r = base + *i - 1;
    Index s = base + *j - 1;
    if (r > s) std::swap(r, s);
    auto& mark = seen[static_cast<std::size_t>(*matno)];
    if (!mark.emplace(r, s).second) throw ParseError("duplicate entry", l->number);
    mats[static_cast<std::size_t>(*matno)].push_back({r, s, *v});
  }

  // Stored objective is -F0 (see header).
  for (auto& e : mats[0]) e.value = -e.value;
  SparseSymMatrixd objective(n, std::move(mats[0]));
  std::vector<SparseSymMatrixd> constraints;
  constraints.reserve(static_cast<std::size_t>(m));
  for (long k = 1; k <= m; ++k)
    constraints.emplace_back(n, std::move(mats[static_cast<std::size_t>(k)]));
  Vectord b = Eigen::Map<const Vectord>(c.data(), static_cast<Index>(c.size()));
  return SdpProblemd(std::move(objective), std::move(constraints), std::move(b), ProblemClass::generic,
                     ObjectiveSense::maximize, std::move(block_sizes));
}

SdpProblemd parse_sdpa_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_sdpa(in).with_name(path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.line());
  }
}

void write_sdpa(const SdpProblemd& problem, std::ostream& out) {
  const auto& blocks = problem.block_sizes();
  std::vector<Index> offset;
  Index total = 0;
  for (Index s : blocks) {
    offset.push_back(total);
    total += std::abs(s);
  }
  if (total != problem.n()) throw InvalidInput("write_sdpa: block sizes do not sum to n");

  auto locate = [&](Index row, Index col) {
    const auto it = std::upper_bound(offset.begin(), offset.end(), row);
    const auto b = static_cast<std::size_t>(std::distance(offset.begin(), it) - 1);
    if (col >= offset[b] + std::abs(blocks[b]))
      throw InvalidInput("write_sdpa: entry (" + std::to_string(row) + "," + std::to_string(col) +
                         ") crosses a block boundary");
    return b;
  };

  out << "\"" << (problem.name().empty() ? "lorank problem" : problem.name()) << "\n";
  out << problem.m() << " =mdim\n" << blocks.size() << " =nblocks\n";
  for (std::size_t k = 0; k < blocks.size(); ++k) out << (k ? " " : "") << blocks[k];
  out << "\n";
  for (Index i = 0; i < problem.m(); ++i) out << (i ? " " : "") << format_double(problem.rhs()[i]);
  out << "\n";

  auto emit = [&](Index matno, const SparseSymMatrixd& M, double sign) {
    for (const auto& e : M.entries()) {
      const auto b = locate(e.row, e.col);
      out << matno << ' ' << b + 1 << ' ' << e.row - offset[b] + 1 << ' ' << e.col - offset[b] + 1
          << ' ' << format_double(sign * e.value) << '\n';
    }
  };
  emit(0, problem.objective(), -1.0);
  for (Index i = 0; i < problem.m(); ++i) emit(i + 1, problem.constraint(i), 1.0);
}

void write_sdpa_file(const SdpProblemd& problem, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_sdpa(problem, out);
  if (!out) throw IoError("write failed: " + path.string());
}

void validate(const GsetGraph& graph) {
  if (graph.n < 1) throw InvalidInput("graph: vertex count must be positive");
  std::set<std::pair<Index, Index>> seen;
  for (const auto& e : graph.edges) {
    if (e.i < 1 || e.j < 1 || e.i > graph.n || e.j > graph.n)
      throw InvalidInput("graph: edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                         ") outside 1.." + std::to_string(graph.n));
    if (e.i == e.j) throw InvalidInput("graph: self loop at " + std::to_string(e.i));
    if (!std::isfinite(e.w)) throw InvalidInput("graph: non-finite weight");
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second)
      throw InvalidInput("graph: duplicate edge (" + std::to_string(e.i) + "," +
                         std::to_string(e.j) + ")");
  }
}

GsetGraph parse_gset(std::istream& in) {
  Cursor cur(read_lines(in));
  const Line* head = cur.next_content();
  if (!head) throw ParseError("missing section: header", 0);
  const auto ht = tokens(head->text, false);
  const auto n = ht.size() >= 2 ? to_long(ht[0]) : std::nullopt;
  const auto count = ht.size() >= 2 ? to_long(ht[1]) : std::nullopt;
  if (!n || !count || *n < 1 || *count < 0) throw ParseError("malformed header", head->number);

  GsetGraph g;
  g.n = *n;
  g.edges.reserve(static_cast<std::size_t>(*count));
  std::set<std::pair<Index, Index>> seen;
  while (const Line* l = cur.next_content()) {
    const auto t = tokens(l->text, false);
    if (t.size() < 3) throw ParseError("malformed edge line", l->number);
    const auto i = to_long(t[0]);
    const auto j = to_long(t[1]);
    const auto w = to_double(t[2]);
    if (!i || !j || !w || !std::isfinite(*w)) throw ParseError("malformed edge line", l->number);
    if (*i < 1 || *j < 1 || *i > g.n || *j > g.n) throw ParseError("vertex out of range", l->number);
    if (*i == *j) throw ParseError("self loop", l->number);
    if (!seen.emplace(std::min(*i, *j), std::max(*i, *j)).second)
      throw ParseError("duplicate edge", l->number);
    if (static_cast<long>(g.edges.size()) == *count)
      throw ParseError("more edges than declared", l->number);
    g.edges.push_back({*i, *j, *w});
  }
  if (static_cast<long>(g.edges.size()) != *count)
    throw ParseError("missing section: expected " + std::to_string(*count) + " edges, found " +
                         std::to_string(g.edges.size()),
                     cur.last_line());
  return g;
}

GsetGraph parse_gset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_gset(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.line());
  }
}

void write_gset(const GsetGraph& graph, std::ostream& out) {
  out << graph.n << ' ' << graph.edges.size() << '\n';
  for (const auto& e : graph.edges) out << e.i << ' ' << e.j << ' ' << format_double(e.w) << '\n';
}

}  // namespace lorank
