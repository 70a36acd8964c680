#ifndef PHEAP_ACCOUNTING_HPP
#define PHEAP_ACCOUNTING_HPP

// Runtime reproduction of the amortized-analysis bookkeeping: epoch
// universes and ranks, good-link classification, the box lifecycle
// across pairing and accumulation rounds, and a per-operation ledger.
// Everything here is observation only; it never mutates the heap.

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pheap/errors.hpp"
#include "pheap/heap.hpp"
#include "pheap/potential.hpp"
#include "pheap/rational.hpp"
#include "pheap/variants.hpp"

namespace pheap {

// Contiguous sibling group tracked by the analysis. Size is 2^b - 1.
struct Box {
  std::vector<Handle> members;
  std::int64_t b = 0;
  bool alive = false;
};

enum class LinkClass : std::uint8_t { plain, good1, good2 };

struct OpRecord {
  std::int64_t op_index = 0;
  OpKind op_type = OpKind::insert;
  std::int64_t key = 0;
  std::int64_t k = 0;
  std::int64_t link_count = 0;
  std::int64_t good1 = 0;
  std::int64_t good2 = 0;
  Rational phi_N_before, phi_N_after;
  Rational phi_B_before, phi_B_after;
  Rational delta_phi;
  std::int64_t epoch_id = 0;
  std::int64_t n_epoch = 0, t = 0, q = 0;
  std::int64_t box_count = 0;
  bool rollover = false;
  Rational rollover_jump;
};

struct EpochState {
  AnalysisParams params;
  RankTable rank_table;              // over the epoch universe
  std::vector<std::int64_t> rank_of;  // by handle index, -1 = unranked
  std::vector<std::int64_t> phi_tab;  // rd -> phi * phi_den
  std::int64_t phi_den = 1;
  std::int64_t phi_N_scaled = 0;
  std::int64_t phi_B_times_t = 0;     // Phi_B * t, always an integer
  std::vector<Box> boxes;
  std::unordered_map<std::uint32_t, std::size_t> box_of;
  std::int64_t distinct_keys_seen = 0;
  std::int64_t epoch_id = 0;
  std::int64_t ops_in_epoch = 0;
  std::size_t epoch_start_size = 0;
  std::int64_t fallback_box_deletions = 0;

  std::int64_t rank_of_handle(Handle x) const {
    if (x.idx >= rank_of.size() || rank_of[x.idx] < 0)
      fail(errc::key_not_in_table, "unranked handle " + std::to_string(x.idx));
    return rank_of[x.idx];
  }

  void set_rank(Handle x, std::int64_t r) {
    if (x.idx >= rank_of.size()) rank_of.resize(x.idx + 1, -1);
    rank_of[x.idx] = r;
  }

  std::int64_t phi_of_rd(std::int64_t rd) const {
    if (rd < 0 || rd >= static_cast<std::int64_t>(phi_tab.size()))
      fail(errc::invariant_violation, "rank-difference " + std::to_string(rd) +
                                          " outside epoch range");
    return phi_tab[static_cast<std::size_t>(rd)];
  }

  std::int64_t alive_box_count() const {
    std::int64_t c = 0;
    for (const Box& b : boxes) c += b.alive ? 1 : 0;
    return c;
  }

  Rational phi_N_value() const { return Rational(phi_N_scaled, phi_den); }
  Rational phi_B_value() const { return Rational(phi_B_times_t, params.t); }
  Rational phi_total() const { return phi_N_value() + phi_B_value(); }
};

inline Rational box_potential(const EpochState& st) { return st.phi_B_value(); }

// Universe = keys currently in the heap plus the next future inserts,
// up to n distinct keys total.
inline EpochState begin_epoch(const Heap& h,
                              const std::vector<std::int64_t>& future_keys,
                              std::size_t future_pos, std::int64_t epoch_id) {
  EpochState st;
  const std::int64_t n =
      std::max<std::int64_t>(4, 2 * static_cast<std::int64_t>(h.size()));
  st.params = derive_params(n);
  st.phi_den = phi_denominator(st.params);
  st.epoch_id = epoch_id;
  st.epoch_start_size = h.size();
  st.distinct_keys_seen = static_cast<std::int64_t>(h.size());

  std::vector<std::int64_t> universe;
  universe.reserve(static_cast<std::size_t>(n));
  std::unordered_set<std::int64_t> present;
  detail::for_each_reachable(h, [&](Handle x) {
    universe.push_back(h.key_of(x));
    present.insert(h.key_of(x));
  });
  for (std::size_t i = future_pos;
       i < future_keys.size() && universe.size() < static_cast<std::size_t>(n); ++i) {
    if (present.insert(future_keys[i]).second) universe.push_back(future_keys[i]);
  }
  st.rank_table = RankTable(std::move(universe));

  st.phi_tab.resize(static_cast<std::size_t>(n));
  for (std::int64_t rd = 0; rd < n; ++rd)
    st.phi_tab[static_cast<std::size_t>(rd)] = phi_scaled(rd, st.params);

  st.rank_of.assign(h.store_size(), -1);
  detail::for_each_reachable(h, [&](Handle x) {
    st.set_rank(x, st.rank_table.rank(h.key_of(x)));
  });
  detail::for_each_reachable(h, [&](Handle x) {
    if (x != h.root())
      st.phi_N_scaled +=
          st.phi_of_rd(st.rank_of_handle(x) - st.rank_of_handle(h.parent_of(x)));
  });
  return st;
}

// Good link classification from pre-link rank-differences; both
// participants are children of the (about to be deleted) root.
inline LinkClass classify_link(const EpochState& st, const LinkEvent& ev,
                               std::int64_t rank_root) {
  std::int64_t rd_w = st.rank_of_handle(ev.winner) - rank_root;
  std::int64_t rd_l = st.rank_of_handle(ev.loser) - rank_root;
  if (category(rd_w, st.params.q) == category(rd_l, st.params.q))
    return LinkClass::good1;
  if (ev.round == RoundKind::accumulation && !ev.winner_was_ltr_minimum)
    return LinkClass::good2;
  return LinkClass::plain;
}

namespace detail {

inline void delete_box(EpochState& st, std::size_t id) {
  Box& B = st.boxes[id];
  for (Handle m : B.members) st.box_of.erase(m.idx);
  st.phi_B_times_t -= B.b - st.params.t - 1;
  B.alive = false;
  B.members.clear();
}

inline void create_box(EpochState& st, std::vector<Handle> members,
                       std::int64_t rank_root) {
  const std::int64_t t = st.params.t;
  for (Handle m : members) {
    if (st.box_of.count(m.idx))
      fail(errc::invariant_violation, "new box overlaps an existing box");
    std::int64_t c = category(st.rank_of_handle(m) - rank_root, st.params.q);
    if (c > t - 2)
      fail(errc::invariant_violation, "category " + std::to_string(c) +
                                          " member in a fresh box");
  }
  std::size_t id = st.boxes.size();
  for (Handle m : members) st.box_of.emplace(m.idx, id);
  st.boxes.push_back(Box{std::move(members), t, true});
  st.phi_B_times_t += -1;  // (t - t - 1)
}

}  // namespace detail

struct AccountingChecks {
  bool strict = false;
  // Sorting mode: delete-mins consume keys in rank order, so the
  // survivor's rank-difference at root detachment must be exactly 1.
  bool frozen_sorting = false;
};

// Applies one delete-min's link stream to the analysis state: node
// potential deltas, good-link counting, and the full box lifecycle.
// `h` is the heap after the operation.
inline OpRecord process_delete_min(EpochState& st, const OpStats& stats,
                                   const Heap& h,
                                   const AccountingChecks& chk = {}) {
  for (const LinkEvent& ev : stats.events)
    if (ev.round == RoundKind::multipass || ev.round == RoundKind::arbitrary_schedule)
      fail(errc::not_analysis_order, "link stream is not from a two-round variant");

  OpRecord rec;
  rec.op_type = OpKind::delete_min;
  rec.key = stats.deleted_key;
  rec.k = static_cast<std::int64_t>(stats.k);
  rec.link_count = static_cast<std::int64_t>(stats.link_count);
  rec.phi_N_before = st.phi_N_value();
  rec.phi_B_before = st.phi_B_value();

  const std::int64_t t = st.params.t;
  const std::int64_t T = (std::int64_t{1} << t) - 1;
  const std::int64_t rank_root = st.rank_table.rank(stats.deleted_key);
  const auto& kids = stats.root_children;
  const std::size_t P = stats.k / 2;

  // Classify every link and apply its node-potential delta. Only the
  // loser's rank-difference changes: from rank(l)-rank(root) to
  // rank(l)-rank(winner).
  std::vector<LinkClass> cls(stats.events.size());
  for (std::size_t e = 0; e < stats.events.size(); ++e) {
    const LinkEvent& ev = stats.events[e];
    cls[e] = classify_link(st, ev, rank_root);
    std::int64_t rd_old = st.rank_of_handle(ev.loser) - rank_root;
    std::int64_t rd_new = st.rank_of_handle(ev.loser) - st.rank_of_handle(ev.winner);
    std::int64_t d = st.phi_of_rd(rd_new) - st.phi_of_rd(rd_old);
    st.phi_N_scaled += d;
    if (cls[e] == LinkClass::good1) {
      ++rec.good1;
      if (d > -st.phi_den)
        fail(errc::invariant_violation,
             "same-category link decreased the node potential by < 1");
    }
  }

  // --- Pairing round ---------------------------------------------------
  // Original box membership per child position; the per-box list of
  // touching links (with an internal flag) drives shrink decisions.
  std::vector<std::size_t> box_at(kids.size(), SIZE_MAX);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    auto it = st.box_of.find(kids[i].idx);
    if (it != st.box_of.end()) box_at[i] = it->second;
  }
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, bool>>> touching;
  for (std::size_t j = 0; j < P; ++j) {
    std::size_t ba = box_at[2 * j], bb = box_at[2 * j + 1];
    bool internal = ba != SIZE_MAX && ba == bb;
    if (ba != SIZE_MAX) touching[ba].emplace_back(j, internal);
    if (bb != SIZE_MAX && bb != ba) touching[bb].emplace_back(j, false);
  }

  auto process_box = [&](std::size_t id) {
    Box& B = st.boxes[id];
    const auto& links = touching[id];
    bool any_good = false;
    for (auto [j, internal] : links) any_good |= cls[j] == LinkClass::good1;
    if (any_good) {
      detail::delete_box(st, id);
      return;
    }
    if (B.b == 2)
      fail(errc::invariant_violation,
           "minimal box survived its pairing links without a good link");
    std::vector<Handle> winners;
    for (auto [j, internal] : links)
      if (internal) winners.push_back(stats.events[j].winner);
    const std::int64_t expected = (std::int64_t{1} << (B.b - 1)) - 1;
    if (static_cast<std::int64_t>(winners.size()) != expected) {
      // Conservative fallback: an irregular overlap (possible only at
      // the unpaired tail) gives up the box instead of shrinking it.
      ++st.fallback_box_deletions;
      detail::delete_box(st, id);
      return;
    }
    for (Handle m : B.members) st.box_of.erase(m.idx);
    B.members = std::move(winners);
    B.b -= 1;
    for (Handle m : B.members) {
      st.box_of.emplace(m.idx, id);
      std::int64_t c = category(st.rank_of_handle(m) - rank_root, st.params.q);
      if (c > B.b - 2)
        fail(errc::invariant_violation, "box shrink kept a category-" +
                                            std::to_string(c) + " node");
    }
    st.phi_B_times_t -= 1;
  };

  std::vector<Handle> run;
  std::unordered_set<std::size_t> processed;
  for (std::size_t j = 0; j < P; ++j) {
    const LinkEvent& ev = stats.events[j];
    if (ev.round != RoundKind::pairing)
      fail(errc::not_analysis_order, "pairing links must come first");
    std::size_t ba = box_at[2 * j], bb = box_at[2 * j + 1];
    if (ba != SIZE_MAX || bb != SIZE_MAX) {
      if (ba != SIZE_MAX && processed.insert(ba).second) process_box(ba);
      if (bb != SIZE_MAX && bb != ba && processed.insert(bb).second) process_box(bb);
      run.clear();
      continue;
    }
    if (cls[j] != LinkClass::plain) {
      run.clear();
      continue;
    }
    run.push_back(ev.winner);
    if (static_cast<std::int64_t>(run.size()) == T) {
      detail::create_box(st, run, rank_root);
      run.clear();
    }
  }
  run.clear();  // counter dies at end of round

  // --- Accumulation round ----------------------------------------------
  // Boxes travel with their parent as the prefix folds; a box is given
  // up whenever the running minimum changes while the scan is inside
  // it, or when the initial running minimum itself is a member (its
  // wins would break the members' sibling contiguity).
  std::int64_t type2 = 0;
  for (std::size_t e = P; e < stats.events.size(); ++e) {
    const LinkEvent& ev = stats.events[e];
    if (ev.round != RoundKind::accumulation)
      fail(errc::not_analysis_order, "unexpected round in accumulation phase");
    Handle old_min = ev.winner_was_ltr_minimum ? ev.winner : ev.loser;
    if (e == P) {
      if (auto it = st.box_of.find(old_min.idx); it != st.box_of.end())
        detail::delete_box(st, it->second);
    }
    if (!ev.winner_was_ltr_minimum) {
      if (cls[e] == LinkClass::good2) {
        ++type2;
        ++rec.good2;
      }
      // New minimum taken while the scan is inside a box.
      if (auto it = st.box_of.find(ev.winner.idx); it != st.box_of.end())
        detail::delete_box(st, it->second);
    }
  }
  if (type2 > t - 1)
    fail(errc::invariant_violation, "more than t-1 type-2 good links");

  // --- Root detachment --------------------------------------------------
  if (stats.k >= 1) {
    Handle surv = h.root();
    std::int64_t rd = st.rank_of_handle(surv) - rank_root;
    if (rd < 1) fail(errc::invariant_violation, "survivor not below deleted root");
    if (chk.frozen_sorting && rd != 1)
      fail(errc::invariant_violation,
           "survivor rank-difference " + std::to_string(rd) + " in sorting mode");
    if (st.box_of.count(surv.idx))
      fail(errc::invariant_violation, "new root is inside a box");
    st.phi_N_scaled -= st.phi_of_rd(rd);
  }

  rec.phi_N_after = st.phi_N_value();
  rec.phi_B_after = st.phi_B_value();
  rec.delta_phi = rec.phi_N_after + rec.phi_B_after - rec.phi_N_before - rec.phi_B_before;
  rec.box_count = st.alive_box_count();
  ++st.ops_in_epoch;
  return rec;
}

// Ledger row for an already-applied insert. `stats` carries the single
// insert link (empty if the heap was empty before).
inline OpRecord record_insert(EpochState& st, const OpStats& stats, const Heap& h,
                              std::int64_t key) {
  OpRecord rec;
  rec.op_type = OpKind::insert;
  rec.key = key;
  rec.link_count = static_cast<std::int64_t>(stats.link_count);
  rec.phi_N_before = st.phi_N_value();
  rec.phi_B_before = st.phi_B_value();

  if (!st.rank_table.contains(key))
    fail(errc::invariant_violation,
         "inserted key " + std::to_string(key) + " outside the epoch universe");
  auto x = h.find(key);
  if (!x) fail(errc::invalid_handle, "inserted key not in heap");
  st.set_rank(*x, st.rank_table.rank(key));

  if (!stats.events.empty()) {
    const LinkEvent& ev = stats.events[0];
    // The loser was a root (rd 0); it now hangs under the winner.
    std::int64_t d =
        st.phi_of_rd(st.rank_of_handle(ev.loser) - st.rank_of_handle(ev.winner));
    st.phi_N_scaled += d;
    if (d > st.params.t * st.params.q * st.phi_den)
      fail(errc::invariant_violation, "insert raised the node potential above t*q");
  }
  ++st.distinct_keys_seen;
  ++st.ops_in_epoch;

  rec.phi_N_after = st.phi_N_value();
  rec.phi_B_after = st.phi_B_value();
  rec.delta_phi = rec.phi_N_after + rec.phi_B_after - rec.phi_N_before - rec.phi_B_before;
  rec.box_count = st.alive_box_count();
  return rec;
}

inline std::unordered_map<std::int64_t, std::int64_t> rd_by_key(
    const Heap& h, const RankTable& rt) {
  std::unordered_map<std::int64_t, std::int64_t> out;
  detail::for_each_reachable(h, [&](Handle x) {
    std::int64_t rd =
        x == h.root() ? 0 : rt.rank(h.key_of(x)) - rt.rank(h.key_of(h.parent_of(x)));
    out.emplace(h.key_of(x), rd);
  });
  return out;
}

// Ledger row for an already-applied meld. `rd_before` is the per-key
// rank-difference map over both input heaps; exactly one entry (the
// losing root) may change.
inline OpRecord record_meld(EpochState& st, const Heap& merged, const OpStats& stats,
                            const std::unordered_map<std::int64_t, std::int64_t>& rd_before) {
  OpRecord rec;
  rec.op_type = OpKind::meld;
  rec.link_count = static_cast<std::int64_t>(stats.link_count);
  rec.phi_N_before = st.phi_N_value();
  rec.phi_B_before = st.phi_B_value();

  // Meld remaps handles; re-rank the merged heap wholesale.
  st.rank_of.assign(merged.store_size(), -1);
  detail::for_each_reachable(merged, [&](Handle x) {
    st.set_rank(x, st.rank_table.rank(merged.key_of(x)));
  });

  auto rd_after = rd_by_key(merged, st.rank_table);
  if (rd_after.size() != rd_before.size())
    fail(errc::invariant_violation, "meld changed the key population");
  std::int64_t changed = 0;
  std::int64_t delta_scaled = 0;
  for (const auto& [key, rd_new] : rd_after) {
    auto it = rd_before.find(key);
    if (it == rd_before.end())
      fail(errc::invariant_violation, "meld introduced key " + std::to_string(key));
    if (rd_new != it->second) {
      ++changed;
      delta_scaled += st.phi_of_rd(rd_new) - st.phi_of_rd(it->second);
    }
  }
  if (changed != (stats.events.empty() ? 0 : 1))
    fail(errc::invariant_violation,
         std::to_string(changed) + " rank-differences changed in meld");
  st.phi_N_scaled += delta_scaled;
  ++st.ops_in_epoch;

  rec.phi_N_after = st.phi_N_value();
  rec.phi_B_after = st.phi_B_value();  // boxes untouched by meld
  rec.delta_phi = rec.phi_N_after + rec.phi_B_after - rec.phi_N_before - rec.phi_B_before;
  rec.box_count = st.alive_box_count();
  return rec;
}

// Recomputes the scaled node potential from scratch (strict-mode
// cross-check of the incremental value).
inline std::int64_t compute_phi_N_scaled(const EpochState& st, const Heap& h) {
  std::int64_t sum = 0;
  detail::for_each_reachable(h, [&](Handle x) {
    if (x != h.root())
      sum += st.phi_of_rd(st.rank_of_handle(x) - st.rank_of_handle(h.parent_of(x)));
  });
  return sum;
}

inline ValidationReport validate_boxes(const EpochState& st, const Heap& h) {
  for (std::size_t id = 0; id < st.boxes.size(); ++id) {
    const Box& B = st.boxes[id];
    if (!B.alive) continue;
    auto viol = [&](const std::string& why) {
      return ValidationReport{false, "box " + std::to_string(id) + ": " + why};
    };
    if (B.b < 2 || B.b > st.params.t) return viol("b out of range (A)");
    if (static_cast<std::int64_t>(B.members.size()) != (std::int64_t{1} << B.b) - 1)
      return viol("size is not 2^b - 1 (A)");
    for (Handle m : B.members) {
      if (!h.is_alive(m)) return viol("dead member");
      auto it = st.box_of.find(m.idx);
      if (it == st.box_of.end() || it->second != id)
        return viol("membership map mismatch (B)");
      if (m == h.root()) return viol("root is a member");
    }
    Handle parent = h.parent_of(B.members[0]);
    std::vector<Handle> sibs = h.children(parent);
    std::unordered_set<std::uint32_t> member_set;
    for (Handle m : B.members) member_set.insert(m.idx);
    std::size_t first = sibs.size(), last = 0;
    for (std::size_t i = 0; i < sibs.size(); ++i) {
      if (member_set.count(sibs[i].idx)) {
        first = std::min(first, i);
        last = i;
      }
    }
    std::size_t found = 0;
    for (std::size_t i = first; i <= last && i < sibs.size(); ++i)
      if (member_set.count(sibs[i].idx)) ++found;
    if (found != member_set.size() || last - first + 1 != member_set.size())
      return viol("members are not a contiguous sibling group (B')");
    const std::int64_t rp = st.rank_of_handle(parent);
    for (Handle m : B.members) {
      if (h.parent_of(m) != parent) return viol("members have different parents");
      std::int64_t c = category(st.rank_of_handle(m) - rp, st.params.q);
      if (c > B.b - 2)
        return viol("member of category " + std::to_string(c) + " (C)");
    }
  }
  return {};
}

// The three epoch-ending conditions.
inline bool epoch_should_rollover(const EpochState& st, const Heap& h, OpKind last) {
  const std::int64_t n = st.params.n;
  const auto size = static_cast<std::int64_t>(h.size());
  if (last == OpKind::insert && size >= n) return true;
  if (last == OpKind::delete_min && size <= n / 4) return true;
  if (st.distinct_keys_seen >= n) return true;
  return false;
}

}  // namespace pheap

#endif  // PHEAP_ACCOUNTING_HPP
