#ifndef PHEAP_ORACLE_HPP
#define PHEAP_ORACLE_HPP

// Independent brute-force references. These are intentionally slow,
// value-semantic, and share no structural code with the production
// heap: they exist so tests have a second opinion.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pheap/errors.hpp"
#include "pheap/heap.hpp"
#include "pheap/workloads.hpp"

namespace pheap::oracle {

// The exact key sequence a correct min-heap must emit for the trace's
// delete-mins, computed with a plain sorted vector.
inline std::vector<std::int64_t> reference_extract(const Trace& tr) {
  std::vector<std::int64_t> live;  // kept sorted
  std::vector<std::int64_t> out;
  for (const TraceOp& op : tr.ops) {
    switch (op.kind) {
      case TraceOp::Kind::insert:
        live.insert(std::lower_bound(live.begin(), live.end(), op.key), op.key);
        break;
      case TraceOp::Kind::delete_min:
        if (live.empty()) fail(errc::empty_heap, "trace deletes from empty heap");
        out.push_back(live.front());
        live.erase(live.begin());
        break;
      case TraceOp::Kind::decrease_key: {
        auto it = std::lower_bound(live.begin(), live.end(), op.key);
        if (it == live.end() || *it != op.key)
          fail(errc::invalid_handle, "decrease-key of absent key");
        live.erase(it);
        live.insert(std::lower_bound(live.begin(), live.end(), op.new_key),
                    op.new_key);
        break;
      }
    }
  }
  return out;
}

// Literal count of smaller keys.
inline std::int64_t brute_rank(const std::vector<std::int64_t>& universe,
                               std::int64_t x) {
  std::int64_t r = 0;
  bool present = false;
  for (std::int64_t k : universe) {
    if (k < x) ++r;
    if (k == x) present = true;
  }
  if (!present) fail(errc::key_not_in_table, "key " + std::to_string(x));
  return r;
}

// Value-semantic key tree for the step simulator.
struct OTree {
  std::int64_t key = 0;
  std::vector<OTree> kids;
};

enum class Variant { forward, standard, multipass };

inline OTree olink(OTree a, OTree b) {
  if (a.key < b.key) {
    a.kids.insert(a.kids.begin(), std::move(b));
    return a;
  }
  b.kids.insert(b.kids.begin(), std::move(a));
  return b;
}

inline std::vector<OTree> opairing(std::vector<OTree> xs) {
  std::vector<OTree> ys;
  std::size_t i = 0;
  for (; i + 1 < xs.size(); i += 2)
    ys.push_back(olink(std::move(xs[i]), std::move(xs[i + 1])));
  if (i < xs.size()) ys.push_back(std::move(xs[i]));
  return ys;
}

// Post-delete-min structure for a root whose children are `xs`,
// transcribed directly from the textbook two-round (or multipass)
// procedure.
inline OTree simulate_step(std::vector<OTree> xs, Variant variant) {
  if (xs.empty()) fail(errc::empty_heap, "no children to consolidate");
  if (variant == Variant::multipass) {
    while (xs.size() > 1) xs = opairing(std::move(xs));
    return std::move(xs[0]);
  }
  std::vector<OTree> ys = opairing(std::move(xs));
  if (variant == Variant::forward) {
    OTree p = std::move(ys[0]);
    for (std::size_t i = 1; i < ys.size(); ++i)
      p = olink(std::move(p), std::move(ys[i]));
    return p;
  }
  // standard: right-to-left accumulation
  OTree p = std::move(ys.back());
  for (std::size_t i = ys.size() - 1; i-- > 0;)
    p = olink(std::move(p), std::move(ys[i]));
  return p;
}

inline bool same_shape(const OTree& a, const TreeSpec& b) {
  if (a.key != b.key || a.kids.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!same_shape(a.kids[i], b.children[i])) return false;
  return true;
}

inline OTree from_spec(const TreeSpec& t) {
  OTree o;
  o.key = t.key;
  for (const auto& c : t.children) o.kids.push_back(from_spec(c));
  return o;
}

}  // namespace pheap::oracle

#endif  // PHEAP_ORACLE_HPP
