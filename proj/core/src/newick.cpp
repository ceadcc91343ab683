#include "kslog/newick.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <memory>
#include <optional>
#include <vector>

namespace kslog {

NewickError::NewickError(const std::string& what, std::size_t position)
    : ValidationError("newick: " + what + " at position " + std::to_string(position)),
      position_(position) {}

namespace {

struct RawNode {
  std::string name;
  std::optional<double> length;
  std::size_t position = 0;
  std::vector<std::unique_ptr<RawNode>> children;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<RawNode> parse() {
    skip_space();
    auto root = parse_node();
    skip_space();
    expect(';');
    skip_space();
    if (pos_ != text_.size()) throw NewickError("trailing characters after ';'", pos_);
    return root;
  }

 private:
  std::unique_ptr<RawNode> parse_node() {
    auto node = std::make_unique<RawNode>();
    node->position = pos_;
    skip_space();
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        node->children.push_back(parse_node());
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    skip_space();
    node->name = read_token();
    skip_space();
    if (peek() == ':') {
      ++pos_;
      skip_space();
      const std::size_t start = pos_;
      const std::string tok = read_token();
      double value = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw NewickError("invalid branch length '" + tok + "'", start);
      node->length = value;
    }
    return node;
  }

  std::string read_token() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || std::isspace(static_cast<unsigned char>(c)))
        break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) {
      if (pos_ >= text_.size()) throw NewickError(std::string("expected '") + c + "' but input ended", pos_);
      throw NewickError(std::string("expected '") + c + "', found '" + text_[pos_] + "'", pos_);
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int leaf_label(const RawNode& node) {
  int value = -1;
  const auto& s = node.name;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || value < 0)
    throw NewickError("leaf label '" + s + "' is not a non-negative integer", node.position);
  return value;
}

struct Flattened {
  std::vector<NodeId> parents;
  std::vector<double> lengths;
  std::vector<int> labels;
  std::vector<std::size_t> positions;
  std::vector<std::size_t> child_count;
  std::vector<char> has_length;
};

void flatten(const RawNode& node, NodeId parent, Flattened& out) {
  const auto id = static_cast<NodeId>(out.parents.size());
  out.parents.push_back(parent);
  out.lengths.push_back(node.length.value_or(0.0));
  out.has_length.push_back(node.length.has_value());
  out.labels.push_back(node.children.empty() ? leaf_label(node) : -1);
  out.positions.push_back(node.position);
  out.child_count.push_back(node.children.size());
  for (const auto& c : node.children) flatten(*c, id, out);
}

void check_labels(const Flattened& f) {
  std::vector<int> labs;
  for (int l : f.labels)
    if (l >= 0) labs.push_back(l);
  std::sort(labs.begin(), labs.end());
  for (std::size_t i = 0; i < labs.size(); ++i)
    if (labs[i] != static_cast<int>(i))
      throw NewickError("leaf labels must be exactly 0..n-1", 0);
}

}  // namespace

Phylogeny parse_phylogeny(std::string_view text) {
  const auto raw = Parser(text).parse();
  Flattened f;
  flatten(*raw, kNoNode, f);
  check_labels(f);
  for (std::size_t v = 0; v < f.parents.size(); ++v) {
    if (f.child_count[v] != 0 && f.child_count[v] != 2)
      throw NewickError("non-binary node with " + std::to_string(f.child_count[v]) + " children", f.positions[v]);
    if (v != 0 && !f.has_length[v]) throw NewickError("missing branch length", f.positions[v]);
  }
  return Phylogeny(std::move(f.parents), std::move(f.lengths), std::move(f.labels));
}

UnrootedTopology parse_topology(std::string_view text) {
  const auto raw = Parser(text).parse();
  Flattened f;
  flatten(*raw, kNoNode, f);
  check_labels(f);
  for (std::size_t v = 0; v < f.parents.size(); ++v) {
    const std::size_t c = f.child_count[v];
    const bool ok = c == 0 || c == 2 || (v == 0 && c == 3);
    if (!ok) throw NewickError("non-binary node with " + std::to_string(c) + " children", f.positions[v]);
  }
  return UnrootedTopology::from_rooted(f.parents, f.labels);
}

std::string format_length(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_newick(const Phylogeny& tree) {
  std::vector<int> min_label(tree.num_nodes(), 0);
  for (NodeId v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      min_label[v] = tree.label(v);
    } else {
      const auto kids = tree.children(v);
      min_label[v] = std::min(min_label[kids[0]], min_label[kids[1]]);
    }
  }
  std::string out;
  auto emit = [&](auto&& self, NodeId v) -> void {
    if (tree.is_leaf(v)) {
      out += std::to_string(tree.label(v));
    } else {
      auto kids = std::vector<NodeId>(tree.children(v).begin(), tree.children(v).end());
      if (min_label[kids[1]] < min_label[kids[0]]) std::swap(kids[0], kids[1]);
      out += '(';
      self(self, kids[0]);
      out += ',';
      self(self, kids[1]);
      out += ')';
    }
    if (v != tree.root()) {
      out += ':';
      out += format_length(tree.length(v));
    }
  };
  emit(emit, tree.root());
  out += ';';
  return out;
}

}  // namespace kslog
