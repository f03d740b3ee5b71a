#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isoresidual/stratum_core.hpp"

namespace isoresidual {

enum class Direction : std::uint8_t { Incoming, Outgoing };

inline Direction opposite(Direction d) { return d == Direction::Incoming ? Direction::Outgoing : Direction::Incoming; }

// One end of an edge as seen from the vertex that stores it. gap_after counts the
// half-edges met before the next end when turning counterclockwise.
struct EdgeEnd {
  int neighbor = 0;
  Direction direction = Direction::Incoming;
  int gap_after = 0;
  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
};

struct Vertex {
  int half_edges = 0;
  std::vector<EdgeEnd> ends;  // counterclockwise
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  int source = 0;
  int target = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Labels are 1-based. A tree may temporarily be a forest while surgery is in progress.
class DecoratedTree {
 public:
  DecoratedTree() = default;
  explicit DecoratedTree(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {}

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const Vertex& vertex(int label) const { return vertices_.at(static_cast<std::size_t>(label - 1)); }
  Vertex& vertex(int label) { return vertices_.at(static_cast<std::size_t>(label - 1)); }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  int end_index(int v, int w) const {
    const auto& ends = vertex(v).ends;
    for (std::size_t k = 0; k < ends.size(); ++k)
      if (ends[k].neighbor == w) return static_cast<int>(k);
    return -1;
  }

  // Each edge once, ordered by (min label, max label).
  std::vector<Edge> edges() const {
    std::vector<std::pair<std::pair<int, int>, Edge>> tmp;
    for (int v = 1; v <= vertex_count(); ++v) {
      for (const auto& e : vertex(v).ends) {
        if (e.direction == Direction::Outgoing) {
          tmp.push_back({{std::min(v, e.neighbor), std::max(v, e.neighbor)}, Edge{v, e.neighbor}});
        }
      }
    }
    std::sort(tmp.begin(), tmp.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Edge> out;
    for (const auto& t : tmp) out.push_back(t.second);
    return out;
  }

  // Vertices reachable from `start` without using the edge start--avoid.
  Mask side_mask(int start, int avoid) const {
    Mask seen = label_bit(start);
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& e : vertex(v).ends) {
        if (v == start && e.neighbor == avoid) continue;
        if (seen & label_bit(e.neighbor)) continue;
        seen |= label_bit(e.neighbor);
        stack.push_back(e.neighbor);
      }
    }
    return seen;
  }

  friend bool operator==(const DecoratedTree&, const DecoratedTree&) = default;

 private:
  std::vector<Vertex> vertices_;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  bool ok = true;
  std::string violation;
  explicit operator bool() const { return ok; }
};

inline ValidationReport validate(const DecoratedTree& t, const StratumSignature& sig) {
  auto fail = [](std::string msg) { return ValidationReport{false, std::move(msg)}; };
  const int p = sig.poles();
  if (t.vertex_count() != p) {
    return fail("vertex count " + std::to_string(t.vertex_count()) + " differs from pole count " + std::to_string(p));
  }
  int end_total = 0;
  for (int v = 1; v <= p; ++v) {
    const auto& vx = t.vertex(v);
    const std::string at = " at vertex " + std::to_string(v);
    if (vx.half_edges != 2 * sig.order(v) - 2) {
      return fail("half-edge count " + std::to_string(vx.half_edges) + at + ", expected " +
                  std::to_string(2 * sig.order(v) - 2));
    }
    int gaps = 0;
    for (std::size_t k = 0; k < vx.ends.size(); ++k) {
      const auto& e = vx.ends[k];
      if (e.neighbor < 1 || e.neighbor > p || e.neighbor == v) return fail("bad neighbor label" + at);
      if (e.gap_after < 0) return fail("negative gap" + at);
      for (std::size_t j = 0; j < k; ++j)
        if (vx.ends[j].neighbor == e.neighbor) return fail("repeated edge" + at);
      int back = t.end_index(e.neighbor, v);
      if (back < 0) return fail("edge " + std::to_string(v) + "-" + std::to_string(e.neighbor) + " has no matching end");
      if (t.vertex(e.neighbor).ends[static_cast<std::size_t>(back)].direction != opposite(e.direction)) {
        return fail("edge " + std::to_string(v) + "-" + std::to_string(e.neighbor) + " has inconsistent orientation");
      }
      gaps += e.gap_after;
    }
    if (vx.ends.empty()) return fail("isolated vertex" + at);
    if (gaps != vx.half_edges) return fail("gap total differs from half-edge count" + at);
    for (std::size_t k = 0; k < vx.ends.size(); ++k) {
      const auto& e = vx.ends[k];
      const auto& next = vx.ends[(k + 1) % vx.ends.size()];
      if (vx.ends.size() == 1) break;
      bool same = e.direction == next.direction;
      if ((e.gap_after % 2 == 0) != same) {
        return fail("parity violation between ends to " + std::to_string(e.neighbor) + " and " +
                    std::to_string(next.neighbor) + at);
      }
    }
    end_total += static_cast<int>(vx.ends.size());
  }
  if (end_total != 2 * (p - 1)) return fail("edge count differs from p-1");
  if (t.side_mask(1, 0) != full_mask(p)) return fail("graph is not connected");
  return {};
}

// ---------------------------------------------------------------------------
// Canonical key

namespace detail {

inline int key_rank(char ch) {
  switch (ch) {
    case '<': return 0;
    case '>': return 1;
    case '*': return 2;
    case '(': return 3;
    case ')': return 4;
    default: return 5 + (ch - '0');
  }
}

inline bool key_less(const std::string& x, const std::string& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                      [](char l, char r) { return key_rank(l) < key_rank(r); });
}

inline void serialize_from(const DecoratedTree& t, int v, int start, bool skip_first, std::string& out) {
  const auto& vx = t.vertex(v);
  if (v >= 10) out += static_cast<char>('0' + v / 10);
  out += static_cast<char>('0' + v % 10);
  out += '(';
  if (vx.ends.empty()) {
    out.append(static_cast<std::size_t>(vx.half_edges), '*');
  } else {
    const std::size_t n = vx.ends.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = vx.ends[(static_cast<std::size_t>(start) + i) % n];
      if (!(skip_first && i == 0)) {
        out += e.direction == Direction::Outgoing ? '>' : '<';
        serialize_from(t, e.neighbor, t.end_index(e.neighbor, v), true, out);
      }
      out.append(static_cast<std::size_t>(e.gap_after), '*');
    }
  }
  out += ')';
}

// Smallest rotation at `root` of the component containing it.
inline std::string component_key(const DecoratedTree& t, int root) {
  const auto& ends = t.vertex(root).ends;
  if (ends.empty()) {
    std::string out;
    serialize_from(t, root, 0, false, out);
    return out;
  }
  std::string best, cand;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    cand.clear();
    serialize_from(t, root, static_cast<int>(k), false, cand);
    if (k == 0 || key_less(cand, best)) std::swap(best, cand);
  }
  return best;
}

}  // namespace detail

// Root is vertex 1; the root rotation is the least one in the order '<' < '>' < '*' < '(' < ')' < digits.
inline std::string canonical_key(const DecoratedTree& t) { return detail::component_key(t, 1); }

namespace detail {

class KeyParser {
 public:
  explicit KeyParser(std::string_view text) : text_(text) {}

  DecoratedTree parse() {
    parse_vertex(0, Direction::Incoming);
    if (pos_ != text_.size()) fail("trailing characters");
    int n = vertices_.empty() ? 0 : vertices_.rbegin()->first;
    if (static_cast<int>(vertices_.size()) != n) fail("labels are not 1..n");
    std::vector<Vertex> out;
    for (auto& [label, vx] : vertices_) out.push_back(std::move(vx));
    return DecoratedTree(std::move(out));
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::BadInput, "tree key '" + std::string(text_) + "': " + why);
  }

  int parse_vertex(int parent, Direction dir_here) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (start == pos_ || pos_ - start > 3) fail("expected a label");
    int label = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (label < 1) fail("labels start at 1");
    if (vertices_.count(label)) fail("label " + std::to_string(label) + " repeated");
    vertices_[label] = Vertex{};
    expect('(');
    std::vector<EdgeEnd> ends;
    int leading = 0;
    int stars = 0;
    if (parent) ends.push_back(EdgeEnd{parent, dir_here, 0});
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated vertex");
      char ch = text_[pos_];
      if (ch == '*') {
        ++pos_;
        ++stars;
        if (ends.empty()) {
          ++leading;
        } else {
          ++ends.back().gap_after;
        }
      } else if (ch == '<' || ch == '>') {
        ++pos_;
        Direction here = ch == '>' ? Direction::Outgoing : Direction::Incoming;
        int child = parse_vertex(label, opposite(here));
        ends.push_back(EdgeEnd{child, here, 0});
      } else if (ch == ')') {
        ++pos_;
        break;
      } else {
        fail(std::string("unexpected character '") + ch + "'");
      }
    }
    if (!ends.empty()) ends.back().gap_after += leading;
    Vertex& vx = vertices_[label];
    vx.half_edges = stars;
    vx.ends = std::move(ends);
    return label;
  }

  void expect(char ch) {
    if (pos_ >= text_.size() || text_[pos_] != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<int, Vertex> vertices_;
};

}  // namespace detail

// Inverse of canonical_key. The result is stored with vertex 1 starting at its least end
// and every other vertex starting at the end towards vertex 1.
inline DecoratedTree parse_key(std::string_view key) { return detail::KeyParser(key).parse(); }

// ---------------------------------------------------------------------------
// Edges, partitions and compatibility

struct EdgePartition {
  Mask source_side = 0;  // the side the orientation leaves
  PoleSubset subset;     // canonical representative of the same partition
};

inline EdgePartition edge_partition(const DecoratedTree& t, const Edge& e) {
  int k = t.end_index(e.source, e.target);
  if (k < 0) throw Error(ErrorKind::BadInput, "no such edge");
  if (t.vertex(e.source).ends[static_cast<std::size_t>(k)].direction != Direction::Outgoing) {
    throw Error(ErrorKind::BadInput, "edge is oriented the other way");
  }
  Mask side = t.side_mask(e.source, e.target);
  return EdgePartition{side, PoleSubset::from_mask(side, t.vertex_count())};
}

// One pass from vertex 1, comparing each subtree below an edge with I.
inline std::optional<Edge> find_edge_with_partition(const DecoratedTree& t, const PoleSubset& I) {
  const int p = t.vertex_count();
  if (p < 2) return std::nullopt;
  std::array<int, kMaxPoles + 1> order{}, parent{};
  std::array<Mask, kMaxPoles + 1> below{};
  int count = 1;
  order[0] = 1;
  for (int k = 0; k < count; ++k) {
    int v = order[static_cast<std::size_t>(k)];
    for (const auto& e : t.vertex(v).ends) {
      if (e.neighbor == parent[static_cast<std::size_t>(v)]) continue;
      parent[static_cast<std::size_t>(e.neighbor)] = v;
      order[static_cast<std::size_t>(count++)] = e.neighbor;
    }
  }
  for (int k = count - 1; k >= 0; --k) {
    int v = order[static_cast<std::size_t>(k)];
    below[static_cast<std::size_t>(v)] |= label_bit(v);
    int up = parent[static_cast<std::size_t>(v)];
    if (up == 0) continue;
    below[static_cast<std::size_t>(up)] |= below[static_cast<std::size_t>(v)];
    if (canonical_mask(below[static_cast<std::size_t>(v)], p) == I.mask()) {
      const auto& end = t.vertex(v).ends[static_cast<std::size_t>(t.end_index(v, up))];
      return end.direction == Direction::Outgoing ? Edge{v, up} : Edge{up, v};
    }
  }
  return std::nullopt;
}

inline bool is_compatible(const DecoratedTree& t, const SignFunction& psi) {
  for (const auto& e : t.edges()) {
    Mask source = t.side_mask(e.source, e.target);
    if (psi.at(source) != Sign::Negative) return false;
  }
  return true;
}

inline bool is_compatible(const DecoratedTree& t, const StratumSignature& sig, const SignFunction& psi) {
  return validate(t, sig).ok && is_compatible(t, psi);
}

inline bool is_degenerate(const DecoratedTree& t, const SignFunction& psi) {
  for (const auto& e : t.edges()) {
    if (psi.at(t.side_mask(e.source, e.target)) == Sign::Zero) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Corners and local surgery

// Position after end `end_index` and `offset` further half-edges. end_index is -1 on a
// vertex without ends.
struct CornerRef {
  int vertex = 0;
  int end_index = -1;
  int offset = 0;
  friend bool operator==(const CornerRef&, const CornerRef&) = default;
};

struct Corner {
  CornerRef at;
  bool legal = false;  // an incoming end may be inserted here
};

namespace detail {

inline CornerRef next_corner(const DecoratedTree& t, CornerRef c) {
  const auto& vx = t.vertex(c.vertex);
  if (vx.ends.empty()) return CornerRef{c.vertex, -1, (c.offset + 1) % std::max(vx.half_edges, 1)};
  const auto& here = vx.ends[static_cast<std::size_t>(c.end_index)];
  if (c.offset < here.gap_after) return CornerRef{c.vertex, c.end_index, c.offset + 1};
  const auto& next = vx.ends[(static_cast<std::size_t>(c.end_index) + 1) % vx.ends.size()];
  return CornerRef{next.neighbor, t.end_index(next.neighbor, c.vertex), 0};
}

inline CornerRef prev_corner(const DecoratedTree& t, CornerRef c) {
  const auto& vx = t.vertex(c.vertex);
  if (vx.ends.empty()) {
    int m = std::max(vx.half_edges, 1);
    return CornerRef{c.vertex, -1, (c.offset + m - 1) % m};
  }
  if (c.offset > 0) return CornerRef{c.vertex, c.end_index, c.offset - 1};
  int w = vx.ends[static_cast<std::size_t>(c.end_index)].neighbor;
  const auto& wx = t.vertex(w);
  int j = t.end_index(w, c.vertex);
  int before = (j + static_cast<int>(wx.ends.size()) - 1) % static_cast<int>(wx.ends.size());
  return CornerRef{w, before, wx.ends[static_cast<std::size_t>(before)].gap_after};
}

inline CornerRef step_corner(const DecoratedTree& t, CornerRef c, int steps) {
  for (; steps > 0; --steps) c = next_corner(t, c);
  for (; steps < 0; ++steps) c = prev_corner(t, c);
  return c;
}

// Removes the end at v pointing to w and returns the corner it occupied.
inline CornerRef detach_end(DecoratedTree& t, int v, int w) {
  auto& ends = t.vertex(v).ends;
  int k = t.end_index(v, w);
  if (k < 0) throw Error(ErrorKind::BadInput, "detach: no such end");
  int n = static_cast<int>(ends.size());
  if (n == 1) {
    ends.clear();
    return CornerRef{v, -1, 0};
  }
  int prev = (k + n - 1) % n;
  int offset = ends[static_cast<std::size_t>(prev)].gap_after;
  ends[static_cast<std::size_t>(prev)].gap_after += ends[static_cast<std::size_t>(k)].gap_after;
  ends.erase(ends.begin() + k);
  if (prev > k) --prev;
  return CornerRef{v, prev, offset};
}

inline void attach_end(DecoratedTree& t, CornerRef c, int w, Direction d) {
  auto& vx = t.vertex(c.vertex);
  if (c.end_index < 0) {
    vx.ends.assign(1, EdgeEnd{w, d, vx.half_edges});
    return;
  }
  auto& here = vx.ends[static_cast<std::size_t>(c.end_index)];
  int rest = here.gap_after - c.offset;
  here.gap_after = c.offset;
  vx.ends.insert(vx.ends.begin() + c.end_index + 1, EdgeEnd{w, d, rest});
}

inline bool corner_is_legal(const DecoratedTree& t, CornerRef c) {
  const auto& vx = t.vertex(c.vertex);
  if (vx.ends.empty()) return vx.half_edges % 2 == 0;
  bool after_outgoing = vx.ends[static_cast<std::size_t>(c.end_index)].direction == Direction::Outgoing;
  return (c.offset % 2 == 1) == after_outgoing;
}

}  // namespace detail

// Corners in boundary-walk order starting right after the first stored end of vertex 1.
inline std::vector<Corner> corners(const DecoratedTree& t) {
  std::vector<Corner> out;
  if (t.vertex_count() == 0) return out;
  CornerRef start{1, t.vertex(1).ends.empty() ? -1 : 0, 0};
  CornerRef c = start;
  do {
    out.push_back(Corner{c, detail::corner_is_legal(t, c)});
    c = detail::next_corner(t, c);
  } while (!(c == start));
  return out;
}

// ---------------------------------------------------------------------------
// Collapse along zero-sum edges

struct CollapseCut {
  Edge edge;           // original labels
  CornerRef source_corner;  // where the source end sat, in the forest state right after the cut
  CornerRef target_corner;
  int source_slot = 0;  // index of the end in its list before the cut
  int target_slot = 0;
};

struct CollapseComponent {
  std::vector<int> labels;       // original labels; component label k is labels[k-1]
  std::vector<int> pole_orders;  // b of each member
  DecoratedTree tree;            // relabeled 1..m
  std::optional<SignFunction> psi;  // restriction to subsets of the component, absent when m = 1
};

struct CollapseResult {
  DecoratedTree forest;  // original labels, zero-sum edges removed
  std::vector<CollapseCut> cuts;
  std::vector<CollapseComponent> components;  // ordered by smallest original label
};

inline CollapseResult collapse(const DecoratedTree& t, const SignFunction& psi) {
  const int p = t.vertex_count();
  CollapseResult r;
  r.forest = t;
  for (const auto& e : t.edges()) {
    if (psi.at(t.side_mask(e.source, e.target)) != Sign::Zero) continue;
    CollapseCut cut{e, {}, {}, r.forest.end_index(e.source, e.target), 0};
    cut.source_corner = detail::detach_end(r.forest, e.source, e.target);
    cut.target_slot = r.forest.end_index(e.target, e.source);
    cut.target_corner = detail::detach_end(r.forest, e.target, e.source);
    r.cuts.push_back(cut);
  }
  Mask done = 0;
  for (int v = 1; v <= p; ++v) {
    if (done & label_bit(v)) continue;
    Mask comp = r.forest.side_mask(v, 0);
    done |= comp;
    CollapseComponent c;
    std::vector<int> relabel(static_cast<std::size_t>(p + 1), 0);
    for (int j = 1; j <= p; ++j) {
      if (comp & label_bit(j)) {
        c.labels.push_back(j);
        relabel[static_cast<std::size_t>(j)] = static_cast<int>(c.labels.size());
        c.pole_orders.push_back(r.forest.vertex(j).half_edges / 2 + 1);
      }
    }
    std::vector<Vertex> vs;
    for (int j : c.labels) {
      Vertex vx = r.forest.vertex(j);
      for (auto& e : vx.ends) e.neighbor = relabel[static_cast<std::size_t>(e.neighbor)];
      vs.push_back(std::move(vx));
    }
    c.tree = DecoratedTree(std::move(vs));
    const int m = static_cast<int>(c.labels.size());
    if (m >= 2) {
      std::vector<Sign> signs;
      for (Mask sub = 1; sub < (Mask{1} << (m - 1)); ++sub) {
        Mask orig = 0;
        for (int k = 1; k <= m; ++k)
          if (sub & label_bit(k)) orig |= label_bit(c.labels[static_cast<std::size_t>(k - 1)]);
        signs.push_back(psi.at(orig));
      }
      c.psi = SignFunction(m, std::move(signs));
    }
    r.components.push_back(std::move(c));
  }
  return r;
}

// Undo a collapse by re-inserting the cut edges in reverse order. Each end goes back to its
// old slot, not just its old cyclic position, because later corners refer to slots.
inline DecoratedTree reglue(const CollapseResult& r) {
  DecoratedTree t = r.forest;
  auto put_back = [&t](const CornerRef& c, int v, int w, Direction d, int slot) {
    detail::attach_end(t, c, w, d);
    auto& ends = t.vertex(v).ends;
    const int at = t.end_index(v, w);
    if (at > slot) std::rotate(ends.begin() + slot, ends.begin() + at, ends.begin() + at + 1);
  };
  for (auto it = r.cuts.rbegin(); it != r.cuts.rend(); ++it) {
    put_back(it->target_corner, it->edge.target, it->edge.source, Direction::Incoming, it->target_slot);
    put_back(it->source_corner, it->edge.source, it->edge.target, Direction::Outgoing, it->source_slot);
  }
  return t;
}

}  // namespace isoresidual
