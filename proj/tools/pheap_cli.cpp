// Command-line front end: generate and replay workloads, run the
// instrumented analysis, and compare variant link costs.
//
// Exit codes: 0 ok, 1 correctness mismatch, 2 usage or input error,
// 3 invariant violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pheap/oracle.hpp"
#include "pheap/runner.hpp"

namespace {

using namespace pheap;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;

int exit_code_for(const error& e) {
  return e.code() == errc::invariant_violation ? kExitInvariant : kExitUsage;
}

VariantKind parse_variant(const std::string& s) {
  if (s == "forward") return VariantKind::forward;
  if (s == "standard") return VariantKind::standard;
  if (s == "multipass") return VariantKind::multipass;
  return VariantKind::arbitrary;
}

PolicyKind parse_policy(const std::string& s) {
  if (s == "forward") return PolicyKind::forward;
  if (s == "standard") return PolicyKind::standard;
  return PolicyKind::random;
}

CheckLevel parse_check(const std::string& s) {
  if (s == "off") return CheckLevel::off;
  if (s == "strict") return CheckLevel::strict;
  return CheckLevel::fast;
}

KeyOrder parse_order(const std::string& s) {
  if (s == "sorted") return KeyOrder::sorted;
  if (s == "reverse") return KeyOrder::reverse;
  return KeyOrder::random;
}

struct WorkloadFlags {
  std::string workload = "sorting";
  std::string order = "random";
  std::int64_t n = 1000;
  std::int64_t ops = 10000;
  double ratio = 0.5;
};

void add_workload_flags(CLI::App* cmd, WorkloadFlags& w) {
  cmd->add_option("--workload", w.workload, "Workload family")
      ->check(CLI::IsMember({"sorting", "mixed"}));
  cmd->add_option("--order", w.order, "Key order for sorting workloads")
      ->check(CLI::IsMember({"random", "sorted", "reverse"}));
  cmd->add_option("--n", w.n, "Sorting workload size")->check(CLI::PositiveNumber);
  cmd->add_option("--ops", w.ops, "Mixed workload operation count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ratio", w.ratio, "Mixed workload insert probability");
}

Trace make_workload(const WorkloadFlags& w, std::uint64_t seed) {
  if (w.workload == "sorting")
    return gen_sorting(w.n, seed, parse_order(w.order));
  return gen_mixed(w.ops, w.ratio, seed);
}

Trace load_trace(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(errc::parse_error, "cannot open trace file " + path);
  return parse_trace(is);
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(errc::parse_error, "cannot open output file " + path);
  os << body;
}

int cmd_run(const WorkloadFlags& w, const std::string& variant,
            const std::string& policy, std::uint64_t seed,
            const std::string& out) {
  Trace tr = make_workload(w, seed);
  ReplayOptions opt;
  opt.variant = parse_variant(variant);
  opt.policy = parse_policy(policy);
  opt.policy_seed = seed;
  ReplayResult res = replay_trace(tr, opt);
  std::ostringstream csv;
  write_cost_csv(res, csv);
  if (!out.empty()) write_file(out, csv.str());
  double mean = tr.ops.empty()
                    ? 0.0
                    : static_cast<double>(res.total_links) /
                          static_cast<double>(tr.ops.size());
  std::printf("ops %zu, total links %lld, max k %lld, mean links/op %.4f\n",
              tr.ops.size(), static_cast<long long>(res.total_links),
              static_cast<long long>(res.max_k), mean);
  return kExitOk;
}

int cmd_analyze(const std::string& variant, const std::string& trace_path,
                const std::string& out, const std::string& check) {
  Trace tr = load_trace(trace_path);
  AnalyzeOptions opt;
  opt.variant = parse_variant(variant);
  opt.check = parse_check(check);
  AnalyzeResult res = analyze_trace(tr, opt);
  std::ostringstream csv;
  write_ledger_csv(res.records, csv);
  if (!out.empty()) write_file(out, csv.str());
  std::printf("ops %zu, epochs %lld, rollovers %lld\n", res.records.size(),
              static_cast<long long>(res.final_epoch_id + 1),
              static_cast<long long>(res.rollovers));
  return kExitOk;
}

int cmd_compare(const WorkloadFlags& w, const std::vector<std::uint64_t>& seeds,
                const std::string& out) {
  std::vector<Trace> traces;
  for (std::uint64_t s : seeds) traces.push_back(make_workload(w, s));
  auto rows = compare_variants(traces, seeds);
  std::ostringstream report;
  std::string desc = w.workload == "sorting"
                         ? "sorting n=" + std::to_string(w.n) + " order=" + w.order
                         : "mixed ops=" + std::to_string(w.ops) +
                               " ratio=" + std::to_string(w.ratio);
  write_compare_report(rows, desc, report);
  if (!out.empty()) write_file(out, report.str());
  std::fputs(report.str().c_str(), stdout);
  return kExitOk;
}

int cmd_replay(const std::string& variant, const std::string& policy,
               const std::string& trace_path, std::uint64_t seed) {
  Trace tr = load_trace(trace_path);
  std::vector<std::int64_t> expect;
  try {
    expect = oracle::reference_extract(tr);
  } catch (const error& e) {
    // invalid trace (e.g. deletes from empty): input error, not mismatch
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  }
  ReplayOptions opt;
  opt.variant = parse_variant(variant);
  opt.policy = parse_policy(policy);
  opt.policy_seed = seed;
  opt.collect_rows = false;
  ReplayResult res = replay_trace(tr, opt);
  if (res.extracted != expect) {
    std::printf("fail: delete-min output diverges from the reference\n");
    return kExitMismatch;
  }
  std::printf("pass: %zu ops, %zu delete-mins match the reference\n",
              tr.ops.size(), res.extracted.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairing-heap workload runner and analysis harness"};
  app.require_subcommand(1);

  std::string variant = "forward";
  std::string policy = "forward";
  std::string check = "fast";
  std::string out;
  std::string trace_path;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  WorkloadFlags w;

  auto add_variant = [&](CLI::App* cmd, bool two_round_only) {
    auto members = two_round_only
                       ? CLI::IsMember({"forward", "standard"})
                       : CLI::IsMember({"forward", "standard", "multipass",
                                        "arbitrary"});
    cmd->add_option("--variant", variant, "Delete-min variant")->check(members);
    if (!two_round_only)
      cmd->add_option("--policy", policy,
                      "Link schedule for the arbitrary variant")
          ->check(CLI::IsMember({"forward", "standard", "random"}));
  };

  CLI::App* run = app.add_subcommand("run", "Generate a workload and replay it");
  add_variant(run, false);
  add_workload_flags(run, w);
  run->add_option("--seed", seed, "Workload seed");
  run->add_option("--out", out, "Per-op cost CSV path");

  CLI::App* analyze =
      app.add_subcommand("analyze", "Instrumented replay of a trace file");
  add_variant(analyze, true);
  analyze->add_option("--trace", trace_path, "Trace file")->required();
  analyze->add_option("--out", out, "Ledger CSV path");
  analyze->add_option("--check", check, "Invariant checking level")
      ->check(CLI::IsMember({"off", "fast", "strict"}));

  CLI::App* compare =
      app.add_subcommand("compare", "Compare variants on identical traces");
  add_workload_flags(compare, w);
  compare->add_option("--seeds", seeds, "Workload seeds")->required();
  compare->add_option("--out", out, "Markdown report path");

  CLI::App* replay =
      app.add_subcommand("replay", "Replay a trace and verify against the oracle");
  add_variant(replay, false);
  replay->add_option("--trace", trace_path, "Trace file")->required();
  replay->add_option("--seed", seed, "Policy seed for the arbitrary variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(w, variant, policy, seed, out);
    if (analyze->parsed()) return cmd_analyze(variant, trace_path, out, check);
    if (compare->parsed()) return cmd_compare(w, seeds, out);
    return cmd_replay(variant, policy, trace_path, seed);
  } catch (const pheap::error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
