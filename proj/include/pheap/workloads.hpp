#ifndef PHEAP_WORKLOADS_HPP
#define PHEAP_WORKLOADS_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pheap/errors.hpp"

namespace pheap {

struct TraceOp {
  enum class Kind : std::uint8_t { insert, delete_min, decrease_key };
  Kind kind = Kind::insert;
  std::int64_t key = 0;
  std::int64_t new_key = 0;  // decrease_key only
};

struct Trace {
  std::vector<std::pair<std::string, std::string>> header;  // key=value lines
  std::vector<TraceOp> ops;
};

namespace detail {

// Seeded Fisher-Yates, independent of std::shuffle so traces are
// byte-identical across standard library implementations.
inline void shuffle_keys(std::vector<std::int64_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace detail

enum class KeyOrder { random, sorted, reverse };

inline const char* key_order_name(KeyOrder o) {
  switch (o) {
    case KeyOrder::random: return "random";
    case KeyOrder::sorted: return "sorted";
    case KeyOrder::reverse: return "reverse";
  }
  return "?";
}

// n inserts in the chosen key order followed by n delete-mins.
inline Trace gen_sorting(std::int64_t n, std::uint64_t seed, KeyOrder order) {
  Trace tr;
  tr.header = {{"generator", "sorting"},
               {"n", std::to_string(n)},
               {"seed", std::to_string(seed)},
               {"order", key_order_name(order)}};
  std::vector<std::int64_t> keys(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = i + 1;
  if (order == KeyOrder::reverse) {
    std::reverse(keys.begin(), keys.end());
  } else if (order == KeyOrder::random) {
    std::mt19937_64 rng(seed);
    detail::shuffle_keys(keys, rng);
  }
  tr.ops.reserve(static_cast<std::size_t>(2 * n));
  for (std::int64_t k : keys) tr.ops.push_back({TraceOp::Kind::insert, k, 0});
  for (std::int64_t i = 0; i < n; ++i) tr.ops.push_back({TraceOp::Kind::delete_min, 0, 0});
  return tr;
}

// m operations; each step inserts with probability `ratio`, else
// deletes the minimum; inserts are forced while the heap is empty.
inline Trace gen_mixed(std::int64_t m, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0))
    fail(errc::parse_error, "insert ratio must be in (0, 1)");
  Trace tr;
  tr.header = {{"generator", "mixed"},
               {"ops", std::to_string(m)},
               {"ratio", std::to_string(ratio)},
               {"seed", std::to_string(seed)}};
  std::vector<std::int64_t> pool(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  std::mt19937_64 rng(seed);
  detail::shuffle_keys(pool, rng);
  const auto threshold =
      static_cast<std::uint64_t>(ratio * 18446744073709551616.0 /* 2^64 */);
  std::size_t next = 0;
  std::int64_t live = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    bool ins = live == 0 || rng() < threshold;
    if (ins && next == pool.size()) ins = false;  // key pool exhausted
    if (ins) {
      tr.ops.push_back({TraceOp::Kind::insert, pool[next++], 0});
      ++live;
    } else {
      tr.ops.push_back({TraceOp::Kind::delete_min, 0, 0});
      --live;
    }
  }
  return tr;
}

inline void write_trace(const Trace& tr, std::ostream& os) {
  for (const auto& [k, v] : tr.header) os << "# " << k << "=" << v << "\n";
  for (const TraceOp& op : tr.ops) {
    switch (op.kind) {
      case TraceOp::Kind::insert: os << "I " << op.key << "\n"; break;
      case TraceOp::Kind::delete_min: os << "D\n"; break;
      case TraceOp::Kind::decrease_key:
        os << "K " << op.key << " " << op.new_key << "\n";
        break;
    }
  }
}

inline Trace parse_trace(std::istream& is) {
  Trace tr;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto bad = [&](const std::string& why) {
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": " + why);
    };
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::size_t s = body.find_first_not_of(' ');
      std::size_t eq = body.find('=');
      if (s == std::string::npos || eq == std::string::npos || eq <= s)
        bad("malformed header line");
      tr.header.emplace_back(body.substr(s, eq - s), body.substr(eq + 1));
      continue;
    }
    std::istringstream ls(line);
    char tag = 0;
    ls >> tag;
    TraceOp op;
    if (tag == 'I') {
      op.kind = TraceOp::Kind::insert;
      if (!(ls >> op.key)) bad("I needs a key");
    } else if (tag == 'D') {
      op.kind = TraceOp::Kind::delete_min;
    } else if (tag == 'K') {
      op.kind = TraceOp::Kind::decrease_key;
      if (!(ls >> op.key >> op.new_key)) bad("K needs two keys");
    } else {
      bad(std::string("unknown op '") + tag + "'");
    }
    std::string rest;
    if (ls >> rest) bad("trailing tokens");
    tr.ops.push_back(op);
  }
  return tr;
}

inline std::string trace_to_string(const Trace& tr) {
  std::ostringstream os;
  write_trace(tr, os);
  return os.str();
}

}  // namespace pheap

#endif  // PHEAP_WORKLOADS_HPP
