#ifndef PHEAP_POTENTIAL_HPP
#define PHEAP_POTENTIAL_HPP

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pheap/errors.hpp"
#include "pheap/heap.hpp"
#include "pheap/rational.hpp"

namespace pheap {

// All integer helpers below avoid floating point: category and
// parameter derivation are exact by construction.

inline std::int64_t ipow(std::int64_t base, std::int64_t exp) {
  std::int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

inline std::int64_t floor_log2(std::int64_t n) {
  std::int64_t r = 0;
  while (n > 1) { n >>= 1; ++r; }
  return r;
}

inline std::int64_t isqrt(std::int64_t n) {
  std::int64_t r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Largest e with base^e <= n.
inline std::int64_t floor_log(std::int64_t n, std::int64_t base) {
  std::int64_t e = 0, p = base;
  while (p <= n) { p *= base; ++e; }
  return e;
}

// Smallest q with q^exp >= n, by binary search over integers.
inline std::int64_t ceil_root(std::int64_t n, std::int64_t exp) {
  auto covers = [&](std::int64_t q) {
    std::int64_t p = 1;
    for (std::int64_t i = 0; i < exp; ++i) {
      p *= q;
      if (p >= n) return true;
    }
    return p >= n;
  };
  std::int64_t lo = 1, hi = 2;
  while (!covers(hi)) hi *= 2;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (covers(mid)) hi = mid; else lo = mid + 1;
  }
  return lo;
}

struct AnalysisParams {
  std::int64_t n = 4;  // epoch capacity
  std::int64_t q = 2;  // scaling factor
  std::int64_t t = 2;  // category count
};

// t is targeted at floor(sqrt(log2 n)), q is the smallest integer
// whose t-th power covers n-1, and t is then recomputed from q so that
// t = floor(log_q(n-1)) + 1 holds exactly.
inline AnalysisParams derive_params(std::int64_t n) {
  if (n < 4) fail(errc::invariant_violation, "derive_params needs n >= 4");
  AnalysisParams p;
  p.n = n;
  std::int64_t t_target = std::max<std::int64_t>(2, isqrt(floor_log2(n)));
  p.q = std::max<std::int64_t>(2, ceil_root(n - 1, t_target));
  p.t = floor_log(n - 1, p.q) + 1;
  return p;
}

// Ranks over the epoch universe: position in sorted key order. The
// universe may include keys not currently in the heap (already deleted
// or to be inserted later in the epoch).
class RankTable {
 public:
  RankTable() = default;

  explicit RankTable(std::vector<std::int64_t> keys) {
    std::sort(keys.begin(), keys.end());
    rank_.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
      rank_.emplace(keys[i], static_cast<std::int64_t>(i));
  }

  std::int64_t rank(std::int64_t key) const {
    auto it = rank_.find(key);
    if (it == rank_.end())
      fail(errc::key_not_in_table, "key " + std::to_string(key));
    return it->second;
  }

  bool contains(std::int64_t key) const { return rank_.count(key) != 0; }
  std::size_t universe_size() const { return rank_.size(); }

 private:
  std::unordered_map<std::int64_t, std::int64_t> rank_;
};

inline RankTable build_rank_table(std::vector<std::int64_t> keys) {
  return RankTable(std::move(keys));
}

inline std::int64_t rank_diff(const Heap& h, const RankTable& rt, Handle x) {
  if (x == h.root()) return 0;
  return rt.rank(h.key_of(x)) - rt.rank(h.key_of(h.parent_of(x)));
}

// The unique c with q^c <= rd < q^{c+1}.
inline std::int64_t category(std::int64_t rd, std::int64_t q) {
  std::int64_t c = 0, p = q;
  while (p <= rd) { p *= q; ++c; }
  return c;
}

// Common denominator q^{t-1}(q-1) clearing phi_node for every
// category, so phi values scale to exact 64-bit integers.
inline std::int64_t phi_denominator(const AnalysisParams& p) {
  return ipow(p.q, p.t - 1) * (p.q - 1);
}

// phi(rd) * phi_denominator, as an integer. The c = 0 bucket has
// denominator (q-1)/q, which the q^{t-c} factor also clears.
inline std::int64_t phi_scaled(std::int64_t rd, const AnalysisParams& p) {
  if (rd == 0) return 0;
  std::int64_t c = category(rd, p.q);
  return (rd - ipow(p.q, c)) * ipow(p.q, p.t - c) + c * p.q * phi_denominator(p);
}

inline Rational phi_node(std::int64_t rd, const AnalysisParams& p) {
  return Rational(phi_scaled(rd, p), phi_denominator(p));
}

namespace detail {

template <typename Fn>
void for_each_reachable(const Heap& h, Fn&& fn) {
  if (h.empty()) return;
  std::vector<Handle> stack{h.root()};
  while (!stack.empty()) {
    Handle x = stack.back();
    stack.pop_back();
    fn(x);
    for (Handle c = h.leftmost_child_of(x); c.valid(); c = h.right_sibling_of(c))
      stack.push_back(c);
  }
}

}  // namespace detail

inline Rational phi_N(const Heap& h, const RankTable& rt, const AnalysisParams& p) {
  std::int64_t scaled = 0;
  detail::for_each_reachable(h, [&](Handle x) {
    scaled += phi_scaled(rank_diff(h, rt, x), p);
  });
  return Rational(scaled, phi_denominator(p));
}

inline std::int64_t phi_simple(const Heap& h, const RankTable& rt) {
  std::int64_t sum = 0;
  detail::for_each_reachable(h, [&](Handle x) { sum += rank_diff(h, rt, x); });
  return sum;
}

// Light/heavy split with s = floor(sqrt(n)): light nodes count their
// rank-difference, heavy nodes s - 1 + rd/s.
inline bool is_heavy(std::int64_t rd, std::int64_t n) {
  return rd > isqrt(n) - 1;
}

inline Rational phi_sqrt_node(std::int64_t rd, std::int64_t n) {
  std::int64_t s = isqrt(n);
  if (rd <= s - 1) return Rational(rd);
  return Rational(s - 1) + Rational(rd, s);
}

inline Rational phi_sqrt(const Heap& h, const RankTable& rt, std::int64_t n) {
  Rational sum = 0;
  detail::for_each_reachable(h, [&](Handle x) {
    sum += phi_sqrt_node(rank_diff(h, rt, x), n);
  });
  return sum;
}

}  // namespace pheap

#endif  // PHEAP_POTENTIAL_HPP
