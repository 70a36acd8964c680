#ifndef PHEAP_VARIANTS_HPP
#define PHEAP_VARIANTS_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pheap/errors.hpp"
#include "pheap/heap.hpp"

namespace pheap {

enum class RoundKind : std::uint8_t {
  pairing,
  accumulation,
  multipass,
  arbitrary_schedule,
};

struct LinkEvent {
  Handle winner;
  Handle loser;
  RoundKind round = RoundKind::pairing;
  int pass = 0;      // multipass round index, 0 otherwise
  int position = 0;  // index of the link within its round
  // Accumulation only: true when the winner was the running minimum
  // before the link (i.e. the minimum did not change).
  bool winner_was_ltr_minimum = false;
};

enum class OpKind : std::uint8_t { insert, delete_min, decrease_key, meld };

struct OpStats {
  OpKind kind = OpKind::delete_min;
  std::int64_t deleted_key = 0;
  std::size_t k = 0;  // children of the deleted root
  std::vector<Handle> root_children;  // left-to-right, pre-pairing
  std::vector<LinkEvent> events;
  std::size_t link_count = 0;
};

namespace detail {

inline LinkEvent metered_link(Heap& h, Handle a, Handle b, RoundKind round,
                              int pass, int position) {
  Handle w = h.link(a, b);
  LinkEvent ev;
  ev.winner = w;
  ev.loser = (w == a) ? b : a;
  ev.round = round;
  ev.pass = pass;
  ev.position = position;
  return ev;
}

// Detaches all children of the root, returning them left-to-right.
inline std::vector<Handle> detach_children(Heap& h, Handle r) {
  std::vector<Handle> xs = h.children(r);
  for (Handle x : xs) h.cut(x);
  return xs;
}

inline void finish_delete(Heap& h, Handle old_root, Handle survivor) {
  std::size_t n = h.size();
  h.retire(old_root);
  h.set_root(survivor, n - 1);
}

}  // namespace detail

inline Handle insert(Heap& h, std::int64_t key, OpStats* stats = nullptr) {
  Handle x = h.make_node(key);
  if (stats) {
    stats->kind = OpKind::insert;
    stats->k = 0;
  }
  if (h.empty()) {
    h.set_root(x, 1);
    return x;
  }
  Handle r = h.root();
  LinkEvent ev = detail::metered_link(h, r, x, RoundKind::pairing, 0, 0);
  h.set_root(ev.winner, h.size() + 1);
  if (stats) {
    stats->events.push_back(ev);
    stats->link_count = 1;
  }
  return x;
}

// Consumes both heaps. All node handles of `a` stay valid in the
// result; handles of `b` are remapped (meld moves b's arena into a's).
inline Heap meld(Heap a, Heap b, OpStats* stats = nullptr) {
  if (stats) stats->kind = OpKind::meld;
  if (b.empty()) return a;
  if (a.empty()) return b;
  Handle rb = a.adopt(std::move(b));
  Handle ra = a.root();
  std::size_t total = a.size();
  LinkEvent ev = detail::metered_link(a, ra, rb, RoundKind::pairing, 0, 0);
  a.set_root(ev.winner, total);
  if (stats) {
    stats->events.push_back(ev);
    stats->link_count = 1;
  }
  return a;
}

inline void decrease_key(Heap& h, Handle x, std::int64_t new_key,
                         OpStats* stats = nullptr) {
  if (!(new_key < h.key_of(x)))
    fail(errc::key_not_decreased, "new key " + std::to_string(new_key) +
                                      " not below " + std::to_string(h.key_of(x)));
  if (stats) stats->kind = OpKind::decrease_key;
  if (x == h.root()) {
    h.change_key(x, new_key);
    return;
  }
  h.cut(x);
  h.change_key(x, new_key);
  Handle r = h.root();
  LinkEvent ev = detail::metered_link(h, r, x, RoundKind::pairing, 0, 0);
  h.set_root(ev.winner, h.size());
  if (stats) {
    stats->events.push_back(ev);
    stats->link_count = 1;
  }
}

namespace detail {

// Left-to-right pairing round over xs; returns the surviving roots
// (winners plus the unpaired odd last root).
inline std::vector<Handle> pairing_round(Heap& h, const std::vector<Handle>& xs,
                                         RoundKind round, int pass, OpStats* stats) {
  std::vector<Handle> ys;
  ys.reserve(xs.size() / 2 + 1);
  std::size_t i = 0;
  int pos = 0;
  for (; i + 1 < xs.size(); i += 2) {
    LinkEvent ev = metered_link(h, xs[i], xs[i + 1], round, pass, pos++);
    ys.push_back(ev.winner);
    if (stats) {
      stats->events.push_back(ev);
      ++stats->link_count;
    }
  }
  if (i < xs.size()) ys.push_back(xs[i]);
  return ys;
}

inline std::pair<std::int64_t, Handle> start_delete(Heap& h, OpStats* stats,
                                                    std::vector<Handle>& xs) {
  if (h.empty()) fail(errc::empty_heap, "delete-min on empty heap");
  Handle r = h.root();
  std::int64_t key = h.key_of(r);
  xs = detach_children(h, r);
  if (stats) {
    stats->kind = OpKind::delete_min;
    stats->deleted_key = key;
    stats->k = xs.size();
    stats->root_children = xs;
  }
  return {key, r};
}

}  // namespace detail

inline std::int64_t delete_min_forward(Heap& h, OpStats* stats = nullptr) {
  std::vector<Handle> xs;
  auto [key, r] = detail::start_delete(h, stats, xs);
  if (xs.empty()) {
    detail::finish_delete(h, r, Handle{});
    return key;
  }
  std::vector<Handle> ys = detail::pairing_round(h, xs, RoundKind::pairing, 0, stats);
  Handle p = ys[0];
  for (std::size_t i = 1; i < ys.size(); ++i) {
    LinkEvent ev = detail::metered_link(h, p, ys[i], RoundKind::accumulation, 0,
                                        static_cast<int>(i - 1));
    ev.winner_was_ltr_minimum = (ev.winner == p);
    p = ev.winner;
    if (stats) {
      stats->events.push_back(ev);
      ++stats->link_count;
    }
  }
  detail::finish_delete(h, r, p);
  return key;
}

inline std::int64_t delete_min_standard(Heap& h, OpStats* stats = nullptr) {
  std::vector<Handle> xs;
  auto [key, r] = detail::start_delete(h, stats, xs);
  if (xs.empty()) {
    detail::finish_delete(h, r, Handle{});
    return key;
  }
  std::vector<Handle> ys = detail::pairing_round(h, xs, RoundKind::pairing, 0, stats);
  Handle p = ys.back();
  int pos = 0;
  for (std::size_t i = ys.size() - 1; i-- > 0;) {
    LinkEvent ev = detail::metered_link(h, p, ys[i], RoundKind::accumulation, 0, pos++);
    ev.winner_was_ltr_minimum = (ev.winner == p);
    p = ev.winner;
    if (stats) {
      stats->events.push_back(ev);
      ++stats->link_count;
    }
  }
  detail::finish_delete(h, r, p);
  return key;
}

inline std::int64_t delete_min_multipass(Heap& h, OpStats* stats = nullptr) {
  std::vector<Handle> xs;
  auto [key, r] = detail::start_delete(h, stats, xs);
  if (xs.empty()) {
    detail::finish_delete(h, r, Handle{});
    return key;
  }
  int pass = 0;
  while (xs.size() > 1) {
    xs = detail::pairing_round(h, xs, RoundKind::multipass, pass, stats);
    ++pass;
  }
  detail::finish_delete(h, r, xs[0]);
  return key;
}

// Pre-pairing permutation of the root's children plus a post-pairing
// linking schedule. Schedule indices are 0-based positions into the
// current list of surviving roots; after each link the winner stays at
// the smaller position and the larger position is removed.
struct ArbitraryPolicy {
  std::vector<std::size_t> permutation;                    // 0-based, size k
  std::vector<std::pair<std::size_t, std::size_t>> schedule;
};

inline void validate_policy(const ArbitraryPolicy& pol, std::size_t k) {
  if (pol.permutation.size() != k) fail(errc::invalid_policy, "permutation size != k");
  std::vector<bool> seen(k, false);
  for (std::size_t p : pol.permutation) {
    if (p >= k || seen[p]) fail(errc::invalid_policy, "permutation is not a bijection");
    seen[p] = true;
  }
  std::size_t live = k - k / 2;  // survivors after the pairing round
  if (k == 0) live = 0;
  for (auto [i, j] : pol.schedule) {
    if (i == j || i >= live || j >= live)
      fail(errc::invalid_policy, "stale or out-of-range schedule index");
    --live;
  }
  if (k > 0 && live != 1)
    fail(errc::invalid_policy, "schedule leaves " + std::to_string(live) + " roots");
}

inline std::int64_t delete_min_arbitrary(Heap& h, const ArbitraryPolicy& pol,
                                         OpStats* stats = nullptr) {
  if (h.empty()) fail(errc::empty_heap, "delete-min on empty heap");
  validate_policy(pol, h.children(h.root()).size());
  std::vector<Handle> xs;
  auto [key, r] = detail::start_delete(h, stats, xs);
  if (xs.empty()) {
    detail::finish_delete(h, r, Handle{});
    return key;
  }
  std::vector<Handle> perm(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) perm[i] = xs[pol.permutation[i]];
  std::vector<Handle> ys = detail::pairing_round(h, perm, RoundKind::pairing, 0, stats);
  int pos = 0;
  for (auto [i, j] : pol.schedule) {
    std::size_t lo = std::min(i, j), hi = std::max(i, j);
    LinkEvent ev = detail::metered_link(h, ys[lo], ys[hi],
                                        RoundKind::arbitrary_schedule, 0, pos++);
    ys[lo] = ev.winner;
    ys.erase(ys.begin() + static_cast<std::ptrdiff_t>(hi));
    if (stats) {
      stats->events.push_back(ev);
      ++stats->link_count;
    }
  }
  detail::finish_delete(h, r, ys[0]);
  return key;
}

// Schedules reproducing the forward / standard accumulation rounds
// through the arbitrary-policy interface.
inline ArbitraryPolicy forward_policy(std::size_t k) {
  ArbitraryPolicy pol;
  pol.permutation.resize(k);
  for (std::size_t i = 0; i < k; ++i) pol.permutation[i] = i;
  std::size_t m = k - k / 2;
  for (std::size_t i = 1; i < m; ++i) pol.schedule.emplace_back(0, 1);
  return pol;
}

inline ArbitraryPolicy standard_policy(std::size_t k) {
  ArbitraryPolicy pol;
  pol.permutation.resize(k);
  for (std::size_t i = 0; i < k; ++i) pol.permutation[i] = i;
  std::size_t m = k - k / 2;
  for (std::size_t i = m; i-- > 1;) pol.schedule.emplace_back(i - 1, i);
  return pol;
}

inline ArbitraryPolicy random_policy(std::size_t k, std::mt19937_64& rng) {
  ArbitraryPolicy pol;
  pol.permutation.resize(k);
  for (std::size_t i = 0; i < k; ++i) pol.permutation[i] = i;
  for (std::size_t i = k; i > 1; --i)
    std::swap(pol.permutation[i - 1], pol.permutation[rng() % i]);
  std::size_t live = k - k / 2;
  while (live > 1) {
    std::size_t i = rng() % live;
    std::size_t j = rng() % (live - 1);
    if (j >= i) ++j;
    pol.schedule.emplace_back(i, j);
    --live;
  }
  return pol;
}

}  // namespace pheap

#endif  // PHEAP_VARIANTS_HPP
