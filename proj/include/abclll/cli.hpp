#pragma once

// Command-line front end: verify, reduce, search, tables, estimate.
// run_cli() is the whole program minus main(), so tests can drive it.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "abclll/lattice.hpp"
#include "abclll/numt.hpp"
#include "abclll/search.hpp"
#include "abclll/triples.hpp"

namespace abclll {

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnwritable = 3;

inline std::string sig10(double x) { return format_real(x); }

/// Accepts "10000000", "1e7" or "1.5e3"; the value must be a non-negative integer.
inline Int parse_count(const std::string& text, const std::string& flag) {
  const bool plain = !text.empty() && std::all_of(text.begin(), text.end(), [](char ch) {
    return std::isdigit(static_cast<unsigned char>(ch));
  });
  if (plain) return Int(text, 10);
  std::size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v) || v < 0 || std::floor(v) != v || v > 1e30L)
    throw CLI::ValidationError(flag, "expected a non-negative integer, got '" + text + "'");
  std::ostringstream digits;
  digits << std::fixed << std::setprecision(0) << v;
  return Int(digits.str(), 10);
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& flag) {
  const Int v = parse_count(text, flag);
  if (!fits_u64(v)) throw CLI::ValidationError(flag, "value too large: " + text);
  return to_u64(v);
}

inline std::string format_relation(const RelationVector& r) {
  return "(" + r.alpha.get_str() + ", " + r.beta.get_str() + ", " + r.gamma.get_str() + ")";
}

inline void print_metrics(std::ostream& out, const Factorization& a, const Factorization& b, const Factorization& c,
                          double p_threshold, double rho_threshold) {
  const Factorization& largest =
      a.value() >= b.value() && a.value() >= c.value() ? a : (b.value() >= c.value() ? b : c);
  const Factorization rad = radical(a, b, c);
  out << "rad: " << format_factored(rad) << " = " << rad.value().get_str() << '\n';
  if (rad.is_one()) {
    out << "P: undefined (radical is 1)\n";
    return;
  }
  // The largest entry plays the role of C in the power.
  const Factorization* rest[2];
  std::size_t n = 0;
  for (const Factorization* f : {&a, &b, &c})
    if (f != &largest && n < 2) rest[n++] = f;
  const TripleMetrics m = compute_metrics(*rest[0], *rest[1], largest);
  out << "P: " << sig10(m.power) << '\n';
  out << "rho: " << sig10(m.szpiro) << '\n';
  out << "size_log10: " << sig10(m.size_log10) << '\n';
  out << "good ABC triple (P > " << p_threshold << "): " << (m.power > p_threshold ? "yes" : "no") << '\n';
  out << "good Szpiro triple (rho > " << rho_threshold << "): " << (m.szpiro > rho_threshold ? "yes" : "no") << '\n';
}

inline int cmd_verify(const std::vector<std::string>& exprs, bool reduce_gcd, std::ostream& out) {
  Factorization a = parse_factored(exprs[0]);
  Factorization b = parse_factored(exprs[1]);
  Factorization c = parse_factored(exprs[2]);
  const bool sum_ok = a.value() + b.value() == c.value();
  out << "A = " << format_factored(a) << '\n';
  out << "B = " << format_factored(b) << '\n';
  out << "C = " << format_factored(c) << '\n';
  out << "sum: " << (sum_ok ? "A + B = C holds" : "FAILED, A + B != C") << '\n';
  if (reduce_gcd) {
    const Factorization g = gcd_factored(gcd_factored(a, b), c);
    if (!g.is_one()) {
      a = divide_exact(a, g);
      b = divide_exact(b, g);
      c = divide_exact(c, g);
      out << "reduced by common factor " << format_factored(g) << ": " << format_factored(a) << " + "
          << format_factored(b) << " = " << format_factored(c) << '\n';
    }
  }
  out << "coprime: " << (pairwise_coprime(a, b, c) ? "yes" : "no") << '\n';
  print_metrics(out, a, b, c, kGoodAbcThreshold, kGoodSzpiroThreshold);
  return sum_ok ? kExitOk : kExitFailed;
}

inline int cmd_reduce(const std::vector<std::string>& exprs, std::size_t cf_depth, long box,
                      const FactorEffort& effort, std::ostream& out, std::ostream& err) {
  BaseTriple base;
  try {
    base = BaseTriple::make(parse_factored(exprs[0], effort), parse_factored(exprs[1], effort),
                            parse_factored(exprs[2], effort));
  } catch (const std::invalid_argument& e) {
    err << "reduce: " << e.what() << '\n';
    return kExitUsage;
  }
  const Int& a0 = base.a0.value();
  const Int& b0 = base.b0.value();
  const Int& c0 = base.c0.value();
  const auto [v1, v2] = relation_basis(a0, b0, c0);
  const Int det = gram_determinant({v1.to_vector(), v2.to_vector()});
  const Int g = gcd(gcd(a0, b0), c0);
  const Int expected = (a0 / g) * (a0 / g) + (b0 / g) * (b0 / g) + (c0 / g) * (c0 / g);
  out << "base: " << format_factored(base.a0) << ", " << format_factored(base.b0) << ", "
      << format_factored(base.c0) << '\n';
  out << "v1 = " << format_relation(v1) << '\n';
  out << "v2 = " << format_relation(v2) << '\n';
  out << "gram determinant: " << det.get_str() << " (|(A0,B0,C0)/g|^2 = " << expected.get_str() << ", "
      << (det == expected ? "full kernel" : "NOT the full kernel") << ")\n";

  const auto candidates = combine_candidates(v1, v2, cf_depth, box);
  out << "candidates: " << candidates.size() << '\n';
  for (const RelationVector& rel : candidates) {
    out << "  " << format_relation(rel) << "  ";
    try {
      const AbcTriple t = build_triple(rel, base, effort);
      out << canonical_key(t) << "  P=" << sig10(t.p_metric) << " rho=" << sig10(t.rho_metric) << '\n';
    } catch (const DegenerateRelation&) {
      out << "degenerate (zero coefficient)\n";
    } catch (const IncompleteFactorization& e) {
      out << "skipped: " << e.what() << '\n';
    }
  }
  return kExitOk;
}

inline int cmd_tables(const std::string& fixture, std::ostream& out, std::ostream& err) {
  const TableReport report = verify_tables(fixture);
  if (report.rows.empty()) {
    err << "warning: fixture '" << fixture << "' has no rows\n";
    out << "rows: 0\n";
    return kExitOk;
  }
  for (const auto& r : report.rows) {
    out << (r.passed() ? "PASS" : "FAIL") << "  line " << r.row.line << "  " << r.row.kind << "  " << r.row.a << " + "
        << r.row.b << " = " << r.row.c << "  metric " << std::fixed << std::setprecision(8) << r.metric
        << " (printed " << r.row.expected_metric << ")  log10C " << std::setprecision(2) << r.log10c << '\n'
        << std::defaultfloat;
    if (!r.passed()) {
      out << "      " << (r.sum_ok ? "" : "sum-mismatch ") << (r.coprime_ok ? "" : "not-coprime ")
          << (r.metric_ok ? "" : "metric-out-of-tolerance ") << (r.log10_ok ? "" : "log10-out-of-tolerance") << '\n';
    }
  }
  out << "rows: " << report.rows.size() << " (szpiro " << report.count_kind("szpiro") << ", abc "
      << report.count_kind("abc") << "), passed: " << report.passed_count() << '\n';
  return report.all_passed() ? kExitOk : kExitFailed;
}

inline int cmd_estimate(double size, const std::vector<double>& primes, std::ostream& out, std::ostream& err) {
  if (primes.size() != 3) {
    err << "estimate: --primes needs exactly three values, got " << primes.size() << '\n';
    return kExitUsage;
  }
  out << "worst-case P estimate: " << sig10(estimate_worst_case_power(size, primes[0], primes[1], primes[2])) << '\n';
  return kExitOk;
}

inline void print_stats(std::ostream& out, const SearchStats& s, std::size_t records) {
  out << "bases examined: " << s.bases_examined << '\n'
      << "candidates built: " << s.candidates_built << '\n'
      << "degenerate skips: " << s.degenerate_skips << '\n'
      << "factorization skips: " << s.factorization_skips << '\n'
      << "duplicates merged: " << s.duplicates << '\n'
      << "records: " << records << '\n'
      << "good ABC: " << s.good_abc_found << '\n'
      << "good Szpiro: " << s.good_szpiro_found << '\n'
      << "wall time: " << std::fixed << std::setprecision(2) << s.wall_seconds << " s\n"
      << std::defaultfloat;
}

}  // namespace cli

/// Parses `args` (program name excluded) and runs one subcommand.
/// Exit codes: 0 success, 1 check failed, 2 usage or parse error,
/// 3 unwritable output.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Search and verify ABC and Szpiro triples via LLL-reduced relation lattices", "abclll"};
  app.require_subcommand(1);

  std::vector<std::string> triple_args;
  bool reduce_gcd = false;
  auto* verify = app.add_subcommand("verify", "Check A + B = C and report rad, P, rho and classification");
  verify->add_option("exprs", triple_args, "A B C as factored expressions, e.g. 3^10*109")->expected(3)->required();
  verify->add_flag("--reduce-gcd", reduce_gcd, "Divide out a common factor before the coprimality check");

  std::string cf_depth_text = std::to_string(kDefaultCfDepth);
  std::string box_text = std::to_string(kDefaultBox);
  std::string effort_text = std::to_string(FactorEffort{}.rho_iterations);
  auto* reduce = app.add_subcommand("reduce", "Reduce the relation lattice of A0, B0, C0 and list candidate triples");
  reduce->add_option("exprs", triple_args, "A0 B0 C0 as factored expressions")->expected(3)->required();
  reduce->add_option("--cf-depth", cf_depth_text, "Convergents tried per coordinate");
  reduce->add_option("--box", box_text, "Coefficient box for c1*v1 + c2*v2");
  reduce->add_option("--factor-effort", effort_text, "Pollard-Brent iterations per cofactor");

  SearchConfig cfg;
  std::string max_value_text = cfg.value_bound.get_str();
  std::string prime_bound_text = std::to_string(cfg.prime_bound);
  std::string mode_text = to_string(cfg.mode);
  std::string workers_text = std::to_string(std::max(1u, std::thread::hardware_concurrency()));
  cfg.output_path = "abc_search.jsonl";
  auto* search = app.add_subcommand("search", "Run the lattice search over a smooth set");
  search->add_option("--max-value", max_value_text, "M: members are below this value");
  search->add_option("--prime-bound", prime_bound_text, "N: member primes are below this bound");
  search->add_option("--mode", mode_text, "smooth | prime-powers | pp-products-2")
      ->check(CLI::IsMember({"smooth", "prime-powers", "pp-products-2"}));
  search->add_flag("--include-one", cfg.include_one, "Add 1 to the member set");
  search->add_option("--p-threshold", cfg.p_threshold, "Keep triples with P above this");
  search->add_option("--rho-threshold", cfg.rho_threshold, "Keep triples with rho above this");
  search->add_option("--cf-depth", cf_depth_text, "Convergents tried per coordinate");
  search->add_option("--box", box_text, "Coefficient box for c1*v1 + c2*v2");
  search->add_option("--factor-effort", effort_text, "Pollard-Brent iterations per cofactor");
  search->add_option("--workers", workers_text, "Worker threads");
  search->add_option("--out", cfg.output_path, "JSONL file the records are appended to");

  std::string fixture = "data/published_tables.tsv";
  auto* tables = app.add_subcommand("tables", "Verify the published table fixture");
  tables->add_option("--fixture", fixture, "TSV fixture path");

  double size = 0;
  std::vector<double> primes;
  auto* estimate = app.add_subcommand("estimate", "Worst-case power estimate for bases of a given size");
  estimate->add_option("--size", size, "Approximate size N of the base values")->required();
  estimate->add_option("--primes", primes, "Three primes p,q,r")->delimiter(',')->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (*verify) return cli::cmd_verify(triple_args, reduce_gcd, out);

    const auto cf_depth = static_cast<std::size_t>(cli::parse_u64(cf_depth_text, "--cf-depth"));
    const Int box_value = cli::parse_count(box_text, "--box");
    if (box_value > 1000) throw CLI::ValidationError("--box", "at most 1000");
    const long box = box_value.get_si();
    FactorEffort effort;
    effort.rho_iterations = cli::parse_u64(effort_text, "--factor-effort");

    if (*reduce) return cli::cmd_reduce(triple_args, cf_depth, box, effort, out, err);

    if (*search) {
      cfg.value_bound = cli::parse_count(max_value_text, "--max-value");
      cfg.prime_bound = cli::parse_u64(prime_bound_text, "--prime-bound");
      cfg.mode = parse_mode(mode_text);
      cfg.cf_depth = cf_depth;
      cfg.box = box;
      cfg.factor_effort = effort;
      const std::uint64_t workers = cli::parse_u64(workers_text, "--workers");
      if (workers < 1 || workers > 4096) throw CLI::ValidationError("--workers", "must be between 1 and 4096");
      cfg.worker_count = static_cast<unsigned>(workers);
      cfg.validate();
      err << "search: mode " << to_string(cfg.mode) << ", M = " << cfg.value_bound.get_str()
          << ", N = " << cfg.prime_bound << ", " << cfg.worker_count << " worker(s)\n";
      std::size_t last_percent = 101;
      const SearchResult result = run_search(cfg, [&err, &last_percent](std::size_t done, std::size_t total) {
        const std::size_t percent = total ? done * 100 / total : 100;
        if (percent / 5 != last_percent / 5 || done == total) {
          err << "  " << done << " / " << total << " bases (" << percent << "%)\n";
          last_percent = percent;
        }
      });
      for (const auto& r : result.records) {
        out << canonical_key(r.triple) << "  P=" << cli::sig10(r.triple.p_metric)
            << " rho=" << cli::sig10(r.triple.rho_metric) << '\n';
      }
      cli::print_stats(out, result.stats, result.records.size());
      out << "records appended to " << cfg.output_path << '\n';
      return cli::kExitOk;
    }

    if (*tables) return cli::cmd_tables(fixture, out, err);
    if (*estimate) return cli::cmd_estimate(size, primes, out, err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return cli::kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return cli::kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const IncompleteFactorization& e) {
    err << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const OutputUnwritable& e) {
    err << "error: " << e.what() << '\n';
    return cli::kExitUnwritable;
  } catch (const BoundsTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}

}  // namespace abclll
