#ifndef PHEAP_HEAP_HPP
#define PHEAP_HEAP_HPP

#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pheap/errors.hpp"

namespace pheap {

// Stable identifier of a node within one heap's node store. Slots are
// never reused: deleted roots are tombstoned, so a Handle stays
// meaningful (though dead) for the lifetime of the heap.
struct Handle {
  static constexpr std::uint32_t npos = UINT32_MAX;
  std::uint32_t idx = npos;

  bool valid() const { return idx != npos; }
  friend bool operator==(Handle a, Handle b) { return a.idx == b.idx; }
  friend bool operator!=(Handle a, Handle b) { return a.idx != b.idx; }
};

struct HandleHash {
  std::size_t operator()(Handle h) const { return std::hash<std::uint32_t>{}(h.idx); }
};

struct Node {
  std::int64_t key = 0;
  std::uint32_t child = Handle::npos;    // leftmost child
  std::uint32_t sibling = Handle::npos;  // right sibling
  std::uint32_t parent = Handle::npos;
  bool alive = false;
};

struct ValidationReport {
  bool ok = true;
  std::string message;
};

// Multiway tree as a parsed structure, used by the text serialization
// and by structural tests.
struct TreeSpec {
  std::int64_t key = 0;
  std::vector<TreeSpec> children;

  friend bool operator==(const TreeSpec& a, const TreeSpec& b) {
    return a.key == b.key && a.children == b.children;
  }
};

// Min-heap ordered multiway tree in leftmost-child / right-sibling
// representation, backed by an arena of nodes.
class Heap {
 public:
  Heap() = default;
  Heap(Heap&&) = default;
  Heap& operator=(Heap&&) = default;
  Heap(const Heap&) = delete;
  Heap& operator=(const Heap&) = delete;

  bool empty() const { return !root_.valid(); }
  std::size_t size() const { return count_; }
  std::size_t store_size() const { return store_.size(); }
  Handle root() const { return root_; }
  std::uint64_t comparisons() const { return comparisons_; }

  std::int64_t key_of(Handle x) const { return at(x).key; }
  Handle parent_of(Handle x) const { return Handle{at(x).parent}; }
  Handle leftmost_child_of(Handle x) const { return Handle{at(x).child}; }
  Handle right_sibling_of(Handle x) const { return Handle{at(x).sibling}; }
  bool is_alive(Handle x) const {
    return x.valid() && x.idx < store_.size() && store_[x.idx].alive;
  }

  // Binary-tree view of the same structure: left child = leftmost
  // child, right child = right sibling.
  Handle binary_left(Handle x) const { return Handle{at(x).child}; }
  Handle binary_right(Handle x) const { return Handle{at(x).sibling}; }

  std::optional<Handle> find(std::int64_t key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Registers a detached node. The node is not reachable from the root
  // until it is attached via link (or adopted as root by the caller).
  Handle make_node(std::int64_t key) {
    if (index_.count(key)) fail(errc::duplicate_key, "key " + std::to_string(key));
    Handle h{static_cast<std::uint32_t>(store_.size())};
    store_.push_back(Node{key, Handle::npos, Handle::npos, Handle::npos, true});
    index_.emplace(key, h);
    return h;
  }

  // Unit-cost link: one comparison, the larger-key root becomes the
  // leftmost child of the smaller. Returns the winner.
  Handle link(Handle a, Handle b) {
    if (a == b) fail(errc::self_link, "link(x, x)");
    Node& na = at_mut(a);
    Node& nb = at_mut(b);
    if (na.parent != Handle::npos) fail(errc::not_a_root, "first argument has a parent");
    if (nb.parent != Handle::npos) fail(errc::not_a_root, "second argument has a parent");
    ++comparisons_;
    Handle w = a, l = b;
    if (nb.key < na.key) { w = b; l = a; }
    Node& nw = at_mut(w);
    Node& nl = at_mut(l);
    nl.sibling = nw.child;
    nl.parent = w.idx;
    nw.child = l.idx;
    return w;
  }

  std::vector<Handle> children(Handle x) const {
    std::vector<Handle> out;
    for (std::uint32_t c = at(x).child; c != Handle::npos; c = store_[c].sibling)
      out.push_back(Handle{c});
    return out;
  }

  // Detaches x (and its subtree) from its parent, splicing the sibling
  // list. No-op structure change beyond the splice; x becomes a root.
  void cut(Handle x) {
    Node& nx = at_mut(x);
    if (nx.parent == Handle::npos) return;
    Node& p = store_[nx.parent];
    if (p.child == x.idx) {
      p.child = nx.sibling;
    } else {
      std::uint32_t c = p.child;
      while (store_[c].sibling != x.idx) c = store_[c].sibling;
      store_[c].sibling = nx.sibling;
    }
    nx.parent = Handle::npos;
    nx.sibling = Handle::npos;
  }

  // Tombstones a childless, parentless node and drops its key.
  void retire(Handle x) {
    Node& nx = at_mut(x);
    if (nx.parent != Handle::npos || nx.child != Handle::npos)
      fail(errc::invalid_handle, "retire of attached node");
    index_.erase(nx.key);
    nx.alive = false;
    if (root_ == x) root_ = Handle{};
  }

  void set_root(Handle x, std::size_t new_count) {
    root_ = x;
    count_ = new_count;
  }
  void bump_count(std::int64_t d) { count_ = static_cast<std::size_t>(count_ + d); }

  void change_key(Handle x, std::int64_t new_key) {
    if (index_.count(new_key)) fail(errc::duplicate_key, "key " + std::to_string(new_key));
    Node& nx = at_mut(x);
    index_.erase(nx.key);
    nx.key = new_key;
    index_.emplace(new_key, x);
  }

  ValidationReport validate_heap_order() const {
    ValidationReport rep;
    if (!root_.valid()) {
      if (count_ != 0) rep = {false, "empty root but count != 0"};
      return rep;
    }
    std::size_t seen = 0;
    std::vector<Handle> stack{root_};
    std::vector<bool> visited(store_.size(), false);
    if (at(root_).parent != Handle::npos) return {false, "root has a parent"};
    while (!stack.empty()) {
      Handle x = stack.back();
      stack.pop_back();
      if (visited[x.idx]) return {false, "cycle at key " + std::to_string(at(x).key)};
      visited[x.idx] = true;
      if (!at(x).alive) return {false, "reachable dead node"};
      ++seen;
      for (std::uint32_t c = at(x).child; c != Handle::npos; c = store_[c].sibling) {
        if (store_[c].parent != x.idx)
          return {false, "bad parent link at key " + std::to_string(store_[c].key)};
        if (!(at(x).key < store_[c].key))
          return {false, "heap order violated on edge " + std::to_string(at(x).key) +
                             " -> " + std::to_string(store_[c].key)};
        stack.push_back(Handle{c});
      }
    }
    if (seen != count_)
      return {false, "count " + std::to_string(count_) + " but reachable " + std::to_string(seen)};
    return rep;
  }

  TreeSpec to_structure(Handle x) const {
    TreeSpec t;
    t.key = at(x).key;
    for (Handle c : children(x)) t.children.push_back(to_structure(c));
    return t;
  }

  std::string to_binary_view() const {
    if (empty()) return "()";
    std::ostringstream os;
    emit(root_, os);
    return os.str();
  }

  // Moves another heap's arena into this one, remapping its handles.
  // Returns the other heap's root as a handle into this store. Key
  // overlap is rejected while merging the key index.
  Handle adopt(Heap other) {
    const std::uint32_t off = static_cast<std::uint32_t>(store_.size());
    for (Node& n : other.store_) {
      if (n.child != Handle::npos) n.child += off;
      if (n.sibling != Handle::npos) n.sibling += off;
      if (n.parent != Handle::npos) n.parent += off;
      store_.push_back(n);
    }
    for (auto [key, h] : other.index_) {
      auto [it, fresh] = index_.emplace(key, Handle{h.idx + off});
      (void)it;
      if (!fresh) fail(errc::duplicate_key, "meld with overlapping key " + std::to_string(key));
    }
    count_ += other.count_;
    return Handle{other.root_.idx + off};
  }

  // Test hook: corrupts the store by swapping two keys in place.
  void testing_swap_keys(Handle a, Handle b) {
    std::swap(at_mut(a).key, at_mut(b).key);
    index_[at(a).key] = a;
    index_[at(b).key] = b;
  }

 private:
  const Node& at(Handle x) const {
    if (!x.valid() || x.idx >= store_.size() || !store_[x.idx].alive)
      fail(errc::invalid_handle, "handle " + std::to_string(x.idx));
    return store_[x.idx];
  }
  Node& at_mut(Handle x) { return const_cast<Node&>(at(x)); }

  void emit(Handle x, std::ostringstream& os) const {
    os << '(' << at(x).key;
    for (Handle c : children(x)) {
      os << ' ';
      emit(c, os);
    }
    os << ')';
  }

  std::vector<Node> store_;
  std::unordered_map<std::int64_t, Handle> index_;
  Handle root_;
  std::size_t count_ = 0;
  std::uint64_t comparisons_ = 0;
};

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline TreeSpec parse_tree(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size() || s[i] != '(') fail(errc::parse_error, "expected '('");
  ++i;
  skip_ws(s, i);
  TreeSpec t;
  std::size_t start = i;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == start) fail(errc::parse_error, "expected key");
  t.key = std::stoll(s.substr(start, i - start));
  skip_ws(s, i);
  while (i < s.size() && s[i] == '(') {
    t.children.push_back(parse_tree(s, i));
    skip_ws(s, i);
  }
  if (i >= s.size() || s[i] != ')') fail(errc::parse_error, "expected ')'");
  ++i;
  return t;
}

}  // namespace detail

// Parses the nested-parenthesis serialization. Returns nullopt for the
// empty encoding "()".
inline std::optional<TreeSpec> parse_binary_view(const std::string& s) {
  std::size_t i = 0;
  detail::skip_ws(s, i);
  if (i + 1 < s.size() && s[i] == '(') {
    std::size_t j = i + 1;
    detail::skip_ws(s, j);
    if (j < s.size() && s[j] == ')') {
      j++;
      detail::skip_ws(s, j);
      if (j == s.size()) return std::nullopt;
    }
  }
  TreeSpec t = detail::parse_tree(s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) fail(errc::parse_error, "trailing input");
  return t;
}

inline std::string to_text(const TreeSpec& t) {
  std::ostringstream os;
  os << '(' << t.key;
  for (const auto& c : t.children) os << ' ' << to_text(c);
  os << ')';
  return os.str();
}

}  // namespace pheap

#endif  // PHEAP_HEAP_HPP
