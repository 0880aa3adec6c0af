#pragma once

// The `bodenhu` command line: check | scan | counterexample | walls | fiber | selftest.
// Exit codes: 0 holds / success, 1 fails with a witness (or a failed check), 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bodenhu/bodenhu.hpp"

namespace bodenhu::cli {

using Json = nlohmann::ordered_json;

enum class Format { table, json };

struct RunConfig {
  Format format = Format::table;
  bool deterministic = true;
  int cap = kDefaultCap;
  Int genus = 2;
};

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;

/// Reads BODENHU_CAP_N; unset means the default cap.
inline int cap_from_env() {
  const char* raw = std::getenv("BODENHU_CAP_N");
  if (!raw || !*raw) return kDefaultCap;
  std::size_t used = 0;
  int cap = 0;
  try {
    cap = std::stoi(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string_view(raw).size() || cap < 1 || cap > 31)
    throw InvalidArgument(std::string("BODENHU_CAP_N must be an integer in [1, 31], got '") + raw + "'");
  return cap;
}

// ---------------------------------------------------------------------------
// Serialization.

inline Json to_json(const Rational& q) { return q.str(); }

inline Json to_json(const WeightVector& alpha) {
  Json out = Json::array();
  for (const auto& a : alpha.entries()) out.push_back(a.str());
  return out;
}

inline Json to_json(const MultiplicityVector& m) {
  return Json{{"support", m.support()}, {"degree", m.degree()}, {"rank", m.rank()}};
}

inline Json to_json(std::span<const MultiplicityVector> blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) out.push_back(to_json(b));
  return out;
}

inline std::string block_str(const MultiplicityVector& m) {
  std::string out = "{";
  for (int i : m.support()) out += (out.size() > 1 ? "," : "") + std::to_string(i);
  return out + "}:" + std::to_string(m.degree());
}

inline std::string blocks_str(std::span<const MultiplicityVector> blocks) {
  std::string out;
  for (const auto& b : blocks) out += (out.empty() ? "" : " ") + block_str(b);
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs, int width = 0) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ' ';
    out << std::setw(width) << xs[i];
  }
  return out.str();
}

// 1-based positions of the ordered blocks within the partition's canonical block list.
inline std::vector<std::size_t> order_of(const Partition& p, const OrderedPartition& sigma) {
  std::vector<std::size_t> out;
  for (const auto& m : sigma.seq())
    for (std::size_t i = 0; i < p.length(); ++i)
      if (p[i] == m) out.push_back(i + 1);
  return out;
}

inline std::vector<std::size_t> one_based(std::span<const std::size_t> order) {
  std::vector<std::size_t> out;
  for (auto i : order) out.push_back(i + 1);
  return out;
}

inline Json witness_json(const Witness& w) {
  const Partition p = w.ordering.partition();
  Json out{{"blocks", to_json(std::span(p.blocks()))},
           {"order", order_of(p, w.ordering)},
           {"rotation_deltas", w.rotation_deltas}};
  out["alpha"] = w.alpha ? to_json(*w.alpha) : Json(nullptr);
  return out;
}

inline std::string witness_str(const Witness& w) {
  return blocks_str(w.ordering.seq()) + "  deltas " + join(w.rotation_deltas);
}

// ---------------------------------------------------------------------------
// Commands. Each writes its report to `out` and returns the exit code.

struct CheckArgs {
  std::string alpha;
  std::optional<Int> s;
  std::string mode = "small";
};

inline WeightVector parse_alpha(const std::string& text, std::optional<Int> s) {
  auto entries = WeightVector::parse_entries(text);
  WeightVector alpha(std::move(entries));
  if (s && alpha.weight_sum() != *s)
    throw InvalidArgument("weights sum to " + std::to_string(alpha.weight_sum()) + ", not s = " + std::to_string(*s));
  return alpha;
}

inline int cmd_check(const CheckArgs& args, const RunConfig& cfg, std::ostream& out) {
  const Mode mode = parse_mode(args.mode);
  const auto alpha = parse_alpha(args.alpha, args.s);
  require_within_cap(alpha.size(), cfg.cap);
  const auto report = audit_criterion(alpha, mode, cfg.cap);
  const auto& v = report.verdict;

  if (cfg.format == Format::json) {
    Json j{{"n", alpha.size()}, {"s", alpha.weight_sum()}, {"mode", to_string(mode)}, {"holds", v.holds}};
    j["witness"] = v.witness ? witness_json(*v.witness) : Json(nullptr);
    Json parts = Json::array();
    for (std::size_t i = 0; i < report.partitions.size(); ++i) {
      const auto& pa = report.partitions[i];
      Json orderings = Json::array();
      for (const auto& o : pa.orderings)
        orderings.push_back({{"order", one_based(o.order)}, {"rotation_deltas", o.rotation_deltas}, {"passes", o.passes}});
      parts.push_back({{"id", i + 1}, {"blocks", to_json(std::span(pa.partition.blocks()))}, {"orderings", orderings}});
    }
    j["partitions"] = parts;
    out << j.dump(2) << '\n';
  } else {
    out << "N = " << alpha.size() << ", s = " << alpha.weight_sum() << ", mode = " << to_string(mode) << ": "
        << (v.holds ? "holds" : "fails") << '\n';
    out << "alpha = " << alpha.str() << '\n';
    out << report.partitions.size() << " alpha-partition(s) of length >= 3\n";
    for (std::size_t i = 0; i < report.partitions.size(); ++i) {
      const auto& pa = report.partitions[i];
      out << "partition " << i + 1 << ": " << blocks_str(pa.partition.blocks()) << '\n';
      for (const auto& o : pa.orderings)
        out << "  order " << join(one_based(o.order)) << "   deltas " << join(o.rotation_deltas, 4) << "   "
            << (o.passes ? "ok" : "violates") << '\n';
    }
    if (v.witness) out << "witness: " << witness_str(*v.witness) << '\n';
  }
  return v.holds ? kExitHolds : kExitFails;
}

struct ScanArgs {
  int nmin = 2;
  int nmax = 0;
  std::string mode = "small";
  bool counts = true;
};

struct ScanRow {
  int n;
  Int s;
  Verdict verdict;
  Classification oracle;
  VerificationStats stats;
  std::optional<std::size_t> walls;
  std::optional<std::size_t> partitions;
  double elapsed_ms;

  bool agree() const { return verdict.holds == (oracle == Classification::holds); }
};

inline ScanRow scan_row(int n, Int s, Mode mode, bool counts, int cap) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModuliContext ctx(n, s);
  ScanRow row{n, s, {true, mode, std::nullopt}, classify(ctx), {}, std::nullopt, std::nullopt, 0.0};
  row.verdict = verify_conjecture(ctx, mode, cap, &row.stats);
  if (counts) {
    row.walls = enumerate_walls(ctx, cap).size();
    std::size_t count = 0;
    for_each_feasible_partition(ctx, 3, [&](const FeasiblePartition&) { return ++count, true; }, cap);
    row.partitions = count;
  }
  row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

inline int cmd_scan(const ScanArgs& args, const RunConfig& cfg, std::ostream& out) {
  const Mode mode = parse_mode(args.mode);
  if (args.nmax < 2) throw InvalidArgument("--nmax must be at least 2");
  if (args.nmin < 2 || args.nmin > args.nmax) throw InvalidArgument("--nmin must lie in [2, nmax]");
  require_within_cap(args.nmax, cfg.cap);

  const bool table = cfg.format == Format::table;
  if (table) {
    out << std::setw(3) << "N" << std::setw(4) << "s" << std::setw(8) << "verdict" << std::setw(8) << "oracle"
        << std::setw(7) << "agree" << std::setw(7) << "walls" << std::setw(9) << "examined" << std::setw(7) << "parts";
    if (!cfg.deterministic) out << std::setw(10) << "ms";
    out << "  witness\n";
  }
  Json rows = Json::array();
  bool all_agree = true;
  for (int n = args.nmin; n <= args.nmax; ++n)
    for (Int s = 1; s < n; ++s) {
      const auto row = scan_row(n, s, mode, args.counts, cfg.cap);
      all_agree = all_agree && row.agree();
      const std::string verdict = row.verdict.holds ? "holds" : "fails";
      if (table) {
        auto opt = [](const std::optional<std::size_t>& x) { return x ? std::to_string(*x) : std::string("-"); };
        out << std::setw(3) << n << std::setw(4) << s << std::setw(8) << verdict << std::setw(8)
            << to_string(row.oracle) << std::setw(7) << (row.agree() ? "yes" : "NO") << std::setw(7) << opt(row.walls)
            << std::setw(9) << row.stats.shapes << std::setw(7) << opt(row.partitions);
        if (!cfg.deterministic) out << std::setw(10) << std::fixed << std::setprecision(1) << row.elapsed_ms;
        out << "  " << (row.verdict.witness ? witness_str(*row.verdict.witness) : "") << '\n';
      } else {
        Json r{{"n", n},
               {"s", s},
               {"verdict", verdict},
               {"oracle", to_string(row.oracle)},
               {"agree", row.agree()},
               {"shapes_examined", row.stats.shapes},
               {"failing_shapes", row.stats.failing_shapes}};
        r["walls"] = row.walls ? Json(*row.walls) : Json(nullptr);
        r["partitions"] = row.partitions ? Json(*row.partitions) : Json(nullptr);
        r["witness"] = row.verdict.witness ? witness_json(*row.verdict.witness) : Json(nullptr);
        if (!cfg.deterministic) r["elapsed_ms"] = row.elapsed_ms;
        rows.push_back(std::move(r));
      }
    }
  if (table)
    out << (all_agree ? "all rows agree with the oracle\n" : "DISAGREEMENT with the oracle\n");
  else
    out << Json{{"mode", to_string(mode)}, {"all_agree", all_agree}, {"rows", rows}}.dump(2) << '\n';
  return all_agree ? kExitHolds : kExitFails;
}

struct CounterexampleArgs {
  int n = 0;
  Int s = 0;
  Int t = 1;
};

struct TranscriptCheck {
  std::string name;
  std::string value;
  bool ok;
};

inline std::vector<TranscriptCheck> counterexample_checks(const Counterexample& ce, int cap) {
  std::vector<TranscriptCheck> checks;
  checks.push_back({"alpha in W(" + std::to_string(ce.n) + ", " + std::to_string(ce.s) + ")",
                    "sum = " + std::to_string(ce.alpha.weight_sum()),
                    in_weight_space(ce.alpha.entries(), ce.s)});
  for (std::size_t i = 0; i < ce.triple.length(); ++i) {
    const auto& m = ce.triple[i];
    const Rational d = deg_alpha(m, ce.alpha);
    checks.push_back({"deg_alpha(m" + std::to_string(i + 1) + ") = 0", block_str(m) + " -> " + d.str(), d.is_zero()});
  }
  checks.push_back({"rotation deltas = expected", join(ce.rotation_deltas) + " vs " + join(ce.expected_rotation_deltas),
                    ce.rotation_deltas == ce.expected_rotation_deltas});
  const Int bound = static_cast<Int>(ce.triple.length()) - 1;
  checks.push_back({"every rotation delta > L - 1 = " + std::to_string(bound), join(ce.rotation_deltas),
                    std::all_of(ce.rotation_deltas.begin(), ce.rotation_deltas.end(), [&](Int d) { return d > bound; })});
  const auto verdict = check_criterion(ce.alpha, Mode::semismall, cap);
  checks.push_back({"semismall criterion fails at alpha",
                    verdict.witness ? witness_str(*verdict.witness) : std::string("no violating ordering"),
                    !verdict.holds});
  return checks;
}

inline int cmd_counterexample(const CounterexampleArgs& args, const RunConfig& cfg, std::ostream& out) {
  const ModuliContext ctx(args.n, args.s, cfg.genus);
  require_within_cap(ctx.n, cfg.cap);
  const auto ce = construct_counterexample(ctx, args.t);
  const auto checks = counterexample_checks(ce, cfg.cap);
  const bool verified = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });

  if (cfg.format == Format::json) {
    Json cj = Json::array();
    for (const auto& c : checks) cj.push_back({{"name", c.name}, {"value", c.value}, {"ok", c.ok}});
    Json j{{"n", ce.n},
           {"s", ce.s},
           {"construction", ce.construction},
           {"t", ce.t},
           {"dualized", ce.dualized},
           {"reference", ce.reference},
           {"alpha", to_json(ce.alpha)},
           {"triple", to_json(std::span(ce.triple.seq()))},
           {"rotation_deltas", ce.rotation_deltas},
           {"expected_rotation_deltas", ce.expected_rotation_deltas},
           {"checks", cj},
           {"verified", verified}};
    out << j.dump(2) << '\n';
  } else {
    out << "counterexample for (N, s) = (" << ce.n << ", " << ce.s << "): construction " << ce.construction;
    if (ce.construction == 1) out << ", t = " << ce.t;
    if (ce.dualized) out << ", dualized";
    if (ce.reference) out << ", reference vector";
    out << '\n' << "alpha = " << ce.alpha.str() << '\n';
    for (std::size_t i = 0; i < ce.triple.length(); ++i) out << "m" << i + 1 << " = " << ce.triple[i].str() << '\n';
    for (const auto& c : checks) out << (c.ok ? "ok    " : "FAIL  ") << c.name << ": " << c.value << '\n';
  }
  return verified ? kExitHolds : kExitFails;
}

struct WallsArgs {
  int n = 0;
  Int s = 0;
};

inline int cmd_walls(const WallsArgs& args, const RunConfig& cfg, std::ostream& out) {
  const ModuliContext ctx(args.n, args.s, cfg.genus);
  const auto walls = enumerate_walls(ctx, cfg.cap);
  if (cfg.format == Format::json) {
    Json list = Json::array();
    for (const auto& w : walls) list.push_back(to_json(w.m));
    out << Json{{"n", ctx.n}, {"s", ctx.s}, {"count", walls.size()}, {"walls", list}}.dump(2) << '\n';
  } else {
    out << walls.size() << " wall(s) in W(" << ctx.n << ", " << ctx.s << ")\n";
    for (const auto& w : walls) out << "  " << block_str(w.m) << "  rank " << w.m.rank() << '\n';
  }
  return kExitHolds;
}

struct FiberArgs {
  std::string alpha;
  std::optional<Int> s;
  std::size_t partition = 0;  // 1-based id from `check`
};

inline int cmd_fiber(const FiberArgs& args, const RunConfig& cfg, std::ostream& out) {
  const auto alpha = parse_alpha(args.alpha, args.s);
  require_within_cap(alpha.size(), cfg.cap);
  const auto parts = alpha_partitions(alpha, 3, cfg.cap);
  if (args.partition < 1 || args.partition > parts.size())
    throw InvalidArgument("unknown partition id " + std::to_string(args.partition) + " (alpha has " +
                          std::to_string(parts.size()) + " partition(s) of length >= 3)");
  const Partition& xi = parts[args.partition - 1];
  const auto beta = find_generic_near(alpha);
  const auto report = fiber_report(xi, beta, cfg.genus);
  const Int bound = static_cast<Int>(xi.length()) - 1;

  if (cfg.format == Format::json) {
    Json comps = Json::array();
    for (std::size_t i = 0; i < report.components.size(); ++i) {
      const auto& c = report.components[i];
      comps.push_back({{"order", order_of(xi, c.ordering)},
                       {"dim", c.dim},
                       {"delta", delta_seq(c.ordering.seq())},
                       {"margin", report.margins[i]}});
    }
    Json j{{"n", alpha.size()},
           {"s", alpha.weight_sum()},
           {"genus", cfg.genus},
           {"partition_id", args.partition},
           {"partition", to_json(std::span(xi.blocks()))},
           {"beta", to_json(beta)},
           {"stratum_codim", report.stratum_codim},
           {"components", comps}};
    out << j.dump(2) << '\n';
  } else {
    out << "partition " << args.partition << ": " << blocks_str(xi.blocks()) << '\n';
    out << "beta = " << beta.str() << '\n';
    out << "genus " << cfg.genus << ", stratum codim " << report.stratum_codim << ", " << report.components.size()
        << " component(s)\n";
    out << "  order      dim  delta  margin\n";
    for (std::size_t i = 0; i < report.components.size(); ++i) {
      const auto& c = report.components[i];
      out << "  " << std::left << std::setw(9) << join(order_of(xi, c.ordering)) << std::right << std::setw(5) << c.dim
          << std::setw(7) << delta_seq(c.ordering.seq()) << std::setw(8) << report.margins[i]
          << (report.margins[i] == bound - delta_seq(c.ordering.seq()) ? "" : "  (margin mismatch)") << '\n';
    }
  }
  return kExitHolds;
}

struct SelftestArgs {
  std::uint64_t seed = SelftestOptions{}.seed;
  std::size_t trials = SelftestOptions{}.random_trials;
};

inline int cmd_selftest(const SelftestArgs& args, const RunConfig& cfg, std::ostream& out) {
  SelftestOptions opt;
  opt.seed = args.seed;
  opt.random_trials = args.trials;
  const auto results = run_selftest(opt);
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
  if (cfg.format == Format::json) {
    Json suites = Json::array();
    for (const auto& r : results) {
      Json x{{"name", r.name}, {"checked", r.checked}, {"failed", r.failed}};
      x["first_failure"] = r.first_failure ? Json(*r.first_failure) : Json(nullptr);
      suites.push_back(std::move(x));
    }
    out << Json{{"seed", args.seed}, {"passed", ok}, {"suites", suites}}.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      out << (r.passed() ? "pass  " : "FAIL  ") << std::left << std::setw(28) << r.name << std::right << std::setw(10)
          << r.checked << " checked" << std::setw(6) << r.failed << " failed";
      if (r.first_failure) out << "  first: " << *r.first_failure;
      out << '\n';
    }
  }
  return ok ? kExitHolds : kExitFails;
}

// ---------------------------------------------------------------------------

/// Parses argv and runs one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smallness of resolutions of parabolic bundle moduli spaces", "bodenhu"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "table";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--genus", cfg.genus, "Curve genus (>= 2)");
  app.add_flag("!--no-deterministic", cfg.deterministic, "Include wall-clock timings in scan output");

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Decide the criterion at one weight vector");
  c_check->add_option("--alpha", check.alpha, "Comma-separated rationals p/q")->required();
  c_check->add_option("--s", check.s, "Expected weight sum");
  c_check->add_option("--mode", check.mode, "small or semismall");

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Decide every (N, s) up to --nmax and compare with the known classification");
  c_scan->add_option("--nmax", scan.nmax, "Largest N")->required();
  c_scan->add_option("--nmin", scan.nmin, "Smallest N");
  c_scan->add_option("--mode", scan.mode, "small or semismall");
  c_scan->add_flag("!--no-counts", scan.counts, "Skip wall and partition counts");

  CounterexampleArgs ce;
  auto* c_ce = app.add_subcommand("counterexample", "Build and verify an explicit counterexample");
  c_ce->add_option("--n", ce.n, "Number of weights")->required();
  c_ce->add_option("--s", ce.s, "Weight sum")->required();
  c_ce->add_option("--t", ce.t, "Block scale of the three-group construction");

  WallsArgs walls;
  auto* c_walls = app.add_subcommand("walls", "List the walls of W(N, s)");
  c_walls->add_option("--n", walls.n, "Number of weights")->required();
  c_walls->add_option("--s", walls.s, "Weight sum")->required();

  FiberArgs fiber;
  auto* c_fiber = app.add_subcommand("fiber", "Fibre components over one alpha-partition");
  c_fiber->add_option("--alpha", fiber.alpha, "Comma-separated rationals p/q")->required();
  c_fiber->add_option("--s", fiber.s, "Expected weight sum");
  c_fiber->add_option("--partition", fiber.partition, "Partition id as listed by check")->required();

  SelftestArgs st;
  auto* c_st = app.add_subcommand("selftest", "Run the property suites");
  c_st->add_option("--seed", st.seed, "Random seed");
  c_st->add_option("--trials", st.trials, "Random trials per randomized suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    cfg.format = format == "json" ? Format::json : Format::table;
    cfg.cap = cap_from_env();
    require_genus(cfg.genus);
    if (c_check->parsed()) return cmd_check(check, cfg, out);
    if (c_scan->parsed()) return cmd_scan(scan, cfg, out);
    if (c_ce->parsed()) return cmd_counterexample(ce, cfg, out);
    if (c_walls->parsed()) return cmd_walls(walls, cfg, out);
    if (c_fiber->parsed()) return cmd_fiber(fiber, cfg, out);
    if (c_st->parsed()) return cmd_selftest(st, cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bodenhu::cli
