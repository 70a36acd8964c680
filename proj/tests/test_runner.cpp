#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "pheap/oracle.hpp"
#include "pheap/runner.hpp"

using namespace pheap;

TEST_CASE("replay matches the reference extraction on every variant") {
  for (auto v : {VariantKind::forward, VariantKind::standard,
                 VariantKind::multipass, VariantKind::arbitrary}) {
    Trace tr = gen_mixed(2000, 0.5, 99);
    ReplayOptions opt;
    opt.variant = v;
    opt.policy = PolicyKind::random;
    opt.policy_seed = 99;
    ReplayResult res = replay_trace(tr, opt);
    CHECK(res.extracted == oracle::reference_extract(tr));
    CHECK(res.rows.size() == tr.ops.size());
  }
}

TEST_CASE("cost CSV shape and determinism") {
  Trace tr = gen_sorting(50, 1, KeyOrder::random);
  ReplayOptions opt;
  auto emit = [&] {
    std::ostringstream os;
    write_cost_csv(replay_trace(tr, opt), os);
    return os.str();
  };
  std::string csv = emit();
  CHECK(csv == emit());
  CHECK(csv.rfind("op_index,op_type,k,links\n", 0) == 0);
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n' ? 1 : 0;
  CHECK(rows == 101);  // header + 100 ops
}

TEST_CASE("ledger CSV column order") {
  Trace tr = gen_sorting(32, 4, KeyOrder::random);
  AnalyzeResult res = analyze_trace(tr, {});
  std::ostringstream os;
  write_ledger_csv(res.records, os);
  std::string first_line = os.str().substr(0, os.str().find('\n'));
  CHECK(first_line ==
        "op_index,op_type,key,k,links,good1,good2,phi_N_num,phi_N_den,"
        "phi_B_num,phi_B_den,delta_phi,epoch_id,n_epoch,t,q,box_count,rollover");
}

TEST_CASE("replay errors carry the op index") {
  std::istringstream is("I 1\nD\nD\n");
  Trace tr = parse_trace(is);
  try {
    replay_trace(tr, {});
    FAIL("expected EmptyHeap");
  } catch (const error& e) {
    CHECK(e.code() == errc::empty_heap);
    CHECK(std::string(e.what()).find("op 2") != std::string::npos);
  }
}

TEST_CASE("frozen sorting analysis holds its bounds") {
  for (auto v : {VariantKind::forward, VariantKind::standard}) {
    std::mt19937_64 rng(13);
    std::vector<std::int64_t> keys;
    for (std::int64_t i = 1; i <= 256; ++i) keys.push_back(i);
    for (std::size_t i = keys.size(); i > 1; --i)
      std::swap(keys[i - 1], keys[rng() % i]);
    SortingAnalysis sa = analyze_sorting_frozen(keys, v, CheckLevel::strict);
    CHECK(sa.records.size() == 256);
    CHECK(sa.sum_k >= 255);  // every key but the last leaves via some link
    const auto& p = sa.params;
    CHECK(sa.sum_k <=
          (p.n * p.t * p.q + p.n * p.t) * (4 * p.t * (std::int64_t{1} << p.t)));
  }
}

TEST_CASE("comparison harness produces a finite ratio table") {
  std::vector<Trace> traces;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s : {1ull, 2ull, 3ull}) {
    traces.push_back(gen_sorting(200, s, KeyOrder::random));
    seeds.push_back(s);
  }
  auto rows = compare_variants(traces, seeds);
  REQUIRE(rows.size() == 3);
  std::ostringstream os;
  write_compare_report(rows, "sorting n=200", os);
  std::string report = os.str();
  CHECK(report.find("| 1 |") != std::string::npos);
  CHECK(report.find("forward/standard") != std::string::npos);
  for (const CompareRow& r : rows) {
    CHECK(r.links_forward > 0);
    CHECK(r.links_standard > 0);
    CHECK(r.links_multipass > 0);
  }
  // determinism
  std::ostringstream os2;
  write_compare_report(compare_variants(traces, seeds), "sorting n=200", os2);
  CHECK(os2.str() == report);
}

TEST_CASE("fast replay agrees with the metered replay") {
  Trace tr = gen_sorting(500, 8, KeyOrder::random);
  ReplayOptions opt;
  ReplayResult res = replay_trace(tr, opt);
  std::int64_t checksum = 0;
  for (std::int64_t k : res.extracted) checksum ^= k;
  CHECK(replay_trace_fast(tr, VariantKind::forward) == checksum);
}
