#ifndef PHEAP_RUNNER_HPP
#define PHEAP_RUNNER_HPP

// Trace replay drivers: plain replay with per-op cost rows, the
// instrumented (epoch/box/ledger) replay, the frozen-epoch sorting
// analysis, and the variant comparison harness.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "pheap/accounting.hpp"
#include "pheap/errors.hpp"
#include "pheap/heap.hpp"
#include "pheap/oracle.hpp"
#include "pheap/variants.hpp"
#include "pheap/workloads.hpp"

namespace pheap {

enum class VariantKind { forward, standard, multipass, arbitrary };
enum class PolicyKind { forward, standard, random };
enum class CheckLevel { off, fast, strict };

inline const char* variant_name(VariantKind v) {
  switch (v) {
    case VariantKind::forward: return "forward";
    case VariantKind::standard: return "standard";
    case VariantKind::multipass: return "multipass";
    case VariantKind::arbitrary: return "arbitrary";
  }
  return "?";
}

struct CostRow {
  std::int64_t op_index = 0;
  char op = 'I';
  std::int64_t k = 0;
  std::int64_t links = 0;
};

struct ReplayResult {
  std::vector<CostRow> rows;
  std::vector<std::int64_t> extracted;
  std::int64_t total_links = 0;
  std::int64_t max_k = 0;
};

struct ReplayOptions {
  VariantKind variant = VariantKind::forward;
  PolicyKind policy = PolicyKind::forward;  // arbitrary variant only
  std::uint64_t policy_seed = 0;
  bool collect_rows = true;
  bool validate_each_op = false;  // property-test hook
};

inline std::int64_t dispatch_delete_min(Heap& h, const ReplayOptions& opt,
                                        std::mt19937_64& policy_rng, OpStats* stats) {
  switch (opt.variant) {
    case VariantKind::forward: return delete_min_forward(h, stats);
    case VariantKind::standard: return delete_min_standard(h, stats);
    case VariantKind::multipass: return delete_min_multipass(h, stats);
    case VariantKind::arbitrary: {
      std::size_t k = h.empty() ? 0 : h.children(h.root()).size();
      ArbitraryPolicy pol;
      switch (opt.policy) {
        case PolicyKind::forward: pol = forward_policy(k); break;
        case PolicyKind::standard: pol = standard_policy(k); break;
        case PolicyKind::random: pol = random_policy(k, policy_rng); break;
      }
      return delete_min_arbitrary(h, pol, stats);
    }
  }
  fail(errc::invalid_policy, "unknown variant");
}

inline ReplayResult replay_trace(const Trace& tr, const ReplayOptions& opt) {
  ReplayResult res;
  Heap h;
  std::mt19937_64 policy_rng(opt.policy_seed);
  std::int64_t idx = 0;
  for (const TraceOp& op : tr.ops) {
    OpStats stats;
    CostRow row;
    row.op_index = idx;
    try {
      switch (op.kind) {
        case TraceOp::Kind::insert:
          insert(h, op.key, &stats);
          row.op = 'I';
          break;
        case TraceOp::Kind::delete_min:
          res.extracted.push_back(dispatch_delete_min(h, opt, policy_rng, &stats));
          row.op = 'D';
          row.k = static_cast<std::int64_t>(stats.k);
          res.max_k = std::max(res.max_k, row.k);
          break;
        case TraceOp::Kind::decrease_key: {
          auto x = h.find(op.key);
          if (!x) fail(errc::invalid_handle, "key " + std::to_string(op.key));
          decrease_key(h, *x, op.new_key, &stats);
          row.op = 'K';
          break;
        }
      }
    } catch (const error& e) {
      throw error(e.code(), "op " + std::to_string(idx) + ": " + e.what());
    }
    row.links = static_cast<std::int64_t>(stats.link_count);
    res.total_links += row.links;
    if (opt.collect_rows) res.rows.push_back(row);
    if (opt.validate_each_op) {
      ValidationReport rep = h.validate_heap_order();
      if (!rep.ok) fail(errc::invariant_violation,
                        "op " + std::to_string(idx) + ": " + rep.message);
    }
    ++idx;
  }
  return res;
}

// Uninstrumented fast path used by the performance smoke test: no
// per-op stats, link total read from the comparison counter.
inline std::int64_t replay_trace_fast(const Trace& tr, VariantKind v) {
  Heap h;
  std::mt19937_64 rng(0);
  ReplayOptions opt;
  opt.variant = v;
  std::int64_t checksum = 0;
  for (const TraceOp& op : tr.ops) {
    if (op.kind == TraceOp::Kind::insert)
      insert(h, op.key);
    else if (op.kind == TraceOp::Kind::delete_min)
      checksum ^= dispatch_delete_min(h, opt, rng, nullptr);
    else {
      auto x = h.find(op.key);
      if (!x) fail(errc::invalid_handle, "key " + std::to_string(op.key));
      decrease_key(h, *x, op.new_key);
    }
  }
  return checksum;
}

struct AnalyzeOptions {
  VariantKind variant = VariantKind::forward;  // forward or standard
  CheckLevel check = CheckLevel::fast;
};

struct AnalyzeResult {
  std::vector<OpRecord> records;
  std::int64_t rollovers = 0;
  std::int64_t final_epoch_id = 0;
};

namespace detail {

inline void strict_epoch_checks(const EpochState& st, const Heap& h) {
  if (compute_phi_N_scaled(st, h) != st.phi_N_scaled)
    fail(errc::invariant_violation, "incremental node potential drifted");
  std::int64_t bt = 0;
  for (const Box& B : st.boxes)
    if (B.alive) bt += B.b - st.params.t - 1;
  if (bt != st.phi_B_times_t)
    fail(errc::invariant_violation, "incremental box potential drifted");
  ValidationReport rep = validate_boxes(st, h);
  if (!rep.ok) fail(errc::invariant_violation, rep.message);
}

}  // namespace detail

// Instrumented replay with epoch management. Rejects decrease-key:
// a key change reorders the rank universe mid-epoch.
inline AnalyzeResult analyze_trace(const Trace& tr, const AnalyzeOptions& opt) {
  if (opt.variant != VariantKind::forward && opt.variant != VariantKind::standard)
    fail(errc::not_analysis_order, "instrumented analysis needs a two-round variant");
  std::vector<std::int64_t> future_keys;
  for (const TraceOp& op : tr.ops) {
    if (op.kind == TraceOp::Kind::decrease_key)
      fail(errc::unsupported_op, "instrumented replay rejects decrease-key traces");
    if (op.kind == TraceOp::Kind::insert) future_keys.push_back(op.key);
  }

  AnalyzeResult res;
  Heap h;
  std::size_t future_pos = 0;
  EpochState st = begin_epoch(h, future_keys, 0, 0);
  AccountingChecks chk;
  chk.strict = opt.check == CheckLevel::strict;

  std::int64_t idx = 0;
  for (const TraceOp& op : tr.ops) {
    OpStats stats;
    OpRecord rec;
    try {
      if (op.kind == TraceOp::Kind::insert) {
        insert(h, op.key, &stats);
        ++future_pos;
        rec = record_insert(st, stats, h, op.key);
      } else {
        if (opt.variant == VariantKind::forward)
          delete_min_forward(h, &stats);
        else
          delete_min_standard(h, &stats);
        rec = process_delete_min(st, stats, h, chk);
      }
      rec.op_index = idx;
      rec.epoch_id = st.epoch_id;
      rec.n_epoch = st.params.n;
      rec.t = st.params.t;
      rec.q = st.params.q;

      if (opt.check == CheckLevel::strict) detail::strict_epoch_checks(st, h);

      if (opt.check != CheckLevel::off &&
          static_cast<std::int64_t>(h.size()) > st.params.n)
        fail(errc::invariant_violation, "heap size exceeded the epoch capacity");

      if (epoch_should_rollover(st, h, rec.op_type)) {
        const std::int64_t old_n = st.params.n;
        if (opt.check != CheckLevel::off && st.ops_in_epoch < (old_n + 3) / 4)
          fail(errc::invariant_violation,
               "epoch finished after only " + std::to_string(st.ops_in_epoch) + " ops");
        Rational phi_old = st.phi_total();
        EpochState fresh = begin_epoch(h, future_keys, future_pos, st.epoch_id + 1);
        Rational jump = fresh.phi_total() - phi_old;
        if (opt.check != CheckLevel::off &&
            jump > Rational(fresh.params.n * fresh.params.t * fresh.params.q +
                            fresh.params.n))
          fail(errc::invariant_violation, "rollover potential jump too large");
        rec.rollover = true;
        rec.rollover_jump = jump;
        st = std::move(fresh);
        ++res.rollovers;
      } else if (opt.check != CheckLevel::off &&
                 static_cast<std::int64_t>(h.size()) < st.params.n / 4) {
        fail(errc::invariant_violation, "heap size fell below n/4 inside an epoch");
      }
    } catch (const error& e) {
      throw error(e.code(), "op " + std::to_string(idx) + ": " + e.what());
    }
    res.records.push_back(std::move(rec));
    ++idx;
  }
  res.final_epoch_id = st.epoch_id;
  return res;
}

struct SortingAnalysis {
  AnalysisParams params;
  std::vector<OpRecord> records;
  std::int64_t sum_k = 0;
  Rational total_decrease;
};

// Sorting mode with the epoch frozen: build the heap from the key
// sequence, fix n = 2 * size, then run delete-mins to empty. Asserts
// the per-operation potential-decrease bound and the total-cost bound.
inline SortingAnalysis analyze_sorting_frozen(const std::vector<std::int64_t>& keys,
                                              VariantKind variant,
                                              CheckLevel check = CheckLevel::fast) {
  if (variant != VariantKind::forward && variant != VariantKind::standard)
    fail(errc::not_analysis_order, "instrumented analysis needs a two-round variant");
  SortingAnalysis out;
  Heap h;
  for (std::int64_t k : keys) insert(h, k);
  EpochState st = begin_epoch(h, {}, 0, 0);
  out.params = st.params;
  AccountingChecks chk;
  chk.strict = check == CheckLevel::strict;
  chk.frozen_sorting = true;

  const std::int64_t t = st.params.t, q = st.params.q, n = st.params.n;
  const Rational slope(1, 4 * t * (std::int64_t{1} << t));
  Rational start_phi = st.phi_total();

  std::int64_t idx = 0;
  while (!h.empty()) {
    OpStats stats;
    if (variant == VariantKind::forward)
      delete_min_forward(h, &stats);
    else
      delete_min_standard(h, &stats);
    OpRecord rec = process_delete_min(st, stats, h, chk);
    rec.op_index = idx++;
    rec.n_epoch = n;
    rec.t = t;
    rec.q = q;
    if (check == CheckLevel::strict) detail::strict_epoch_checks(st, h);

    Rational decrease = -rec.delta_phi;
    Rational bound = slope * rec.k - Rational(2, t) - (t - 1);
    if (decrease < bound)
      fail(errc::invariant_violation,
           "delete-min " + std::to_string(rec.op_index) + " decreased potential by " +
               ratio_str(decrease) + " < required " + ratio_str(bound));
    out.sum_k += rec.k;
    out.records.push_back(std::move(rec));
  }
  out.total_decrease = start_phi - st.phi_total();
  const std::int64_t cost_cap = (n * t * q + n * t) * (4 * t * (std::int64_t{1} << t));
  if (out.sum_k > cost_cap)
    fail(errc::invariant_violation, "total delete-min cost " +
                                        std::to_string(out.sum_k) + " exceeds " +
                                        std::to_string(cost_cap));
  return out;
}

// --- CSV / report emission ---------------------------------------------

inline void write_cost_csv(const ReplayResult& res, std::ostream& os) {
  os << "op_index,op_type,k,links\n";
  for (const CostRow& r : res.rows)
    os << r.op_index << ',' << r.op << ',' << r.k << ',' << r.links << '\n';
}

inline const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::insert: return "insert";
    case OpKind::delete_min: return "delete_min";
    case OpKind::decrease_key: return "decrease_key";
    case OpKind::meld: return "meld";
  }
  return "?";
}

inline void write_ledger_csv(const std::vector<OpRecord>& recs, std::ostream& os) {
  os << "op_index,op_type,key,k,links,good1,good2,phi_N_num,phi_N_den,"
        "phi_B_num,phi_B_den,delta_phi,epoch_id,n_epoch,t,q,box_count,rollover\n";
  for (const OpRecord& r : recs) {
    os << r.op_index << ',' << op_kind_name(r.op_type) << ',' << r.key << ','
       << r.k << ',' << r.link_count << ',' << r.good1 << ',' << r.good2 << ','
       << num_str(r.phi_N_after) << ',' << den_str(r.phi_N_after) << ','
       << num_str(r.phi_B_after) << ',' << den_str(r.phi_B_after) << ','
       << ratio_str(r.delta_phi) << ',' << r.epoch_id << ',' << r.n_epoch << ','
       << r.t << ',' << r.q << ',' << r.box_count << ',' << (r.rollover ? 1 : 0)
       << '\n';
  }
}

struct CompareRow {
  std::uint64_t seed = 0;
  std::int64_t links_forward = 0;
  std::int64_t links_standard = 0;
  std::int64_t links_multipass = 0;
};

inline std::vector<CompareRow> compare_variants(const std::vector<Trace>& traces,
                                                const std::vector<std::uint64_t>& seeds) {
  std::vector<CompareRow> rows;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    CompareRow row;
    row.seed = seeds[i];
    ReplayOptions opt;
    opt.collect_rows = false;
    opt.variant = VariantKind::forward;
    row.links_forward = replay_trace(traces[i], opt).total_links;
    opt.variant = VariantKind::standard;
    row.links_standard = replay_trace(traces[i], opt).total_links;
    opt.variant = VariantKind::multipass;
    row.links_multipass = replay_trace(traces[i], opt).total_links;
    rows.push_back(row);
  }
  return rows;
}

inline void write_compare_report(const std::vector<CompareRow>& rows,
                                 const std::string& workload_desc, std::ostream& os) {
  os << "# Variant comparison\n\n";
  os << "Workload: " << workload_desc << "\n\n";
  os << "| seed | forward | standard | multipass | forward/standard |\n";
  os << "|------|---------|----------|-----------|------------------|\n";
  std::int64_t tf = 0, ts = 0, tm = 0;
  for (const CompareRow& r : rows) {
    double ratio = r.links_standard == 0
                       ? 1.0
                       : static_cast<double>(r.links_forward) /
                             static_cast<double>(r.links_standard);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", ratio);
    os << "| " << r.seed << " | " << r.links_forward << " | " << r.links_standard
       << " | " << r.links_multipass << " | " << buf << " |\n";
    tf += r.links_forward;
    ts += r.links_standard;
    tm += r.links_multipass;
  }
  os << "\nTotals: forward " << tf << ", standard " << ts << ", multipass " << tm
     << "\n";
  if (ts > 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f",
                  static_cast<double>(tf) / static_cast<double>(ts));
    os << "Aggregate forward/standard link ratio: " << buf << "\n";
  }
}

}  // namespace pheap

#endif  // PHEAP_RUNNER_HPP
