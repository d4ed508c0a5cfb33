#pragma once

// The search pipeline: enumerate base triples from a smooth set, reduce
// their relation lattices, build triples from small combinations, keep the
// good ones. Results are independent of the worker count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "abclll/bigint.hpp"
#include "abclll/errors.hpp"
#include "abclll/lattice.hpp"
#include "abclll/numt.hpp"
#include "abclll/triples.hpp"

namespace abclll {

enum class SearchMode { smooth, prime_powers, prime_power_products_2 };

inline std::string to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::smooth: return "smooth";
    case SearchMode::prime_powers: return "prime-powers";
    case SearchMode::prime_power_products_2: return "pp-products-2";
  }
  return "?";
}

inline SearchMode parse_mode(const std::string& text) {
  if (text == "smooth") return SearchMode::smooth;
  if (text == "prime-powers" || text == "prime_powers") return SearchMode::prime_powers;
  if (text == "pp-products-2" || text == "prime_power_products_2") return SearchMode::prime_power_products_2;
  throw std::invalid_argument("unknown search mode '" + text + "'");
}

struct SearchConfig {
  Int value_bound = 10'000'000;
  std::uint64_t prime_bound = 24;
  SearchMode mode = SearchMode::prime_powers;
  bool include_one = false;
  double p_threshold = kGoodAbcThreshold;
  double rho_threshold = kGoodSzpiroThreshold;
  std::size_t cf_depth = kDefaultCfDepth;
  long box = kDefaultBox;
  FactorEffort factor_effort;
  unsigned worker_count = 1;
  std::string output_path;
  std::size_t member_cap = kDefaultMemberCap;

  void validate() const {
    if (value_bound < 2 || prime_bound < 2) throw std::invalid_argument("search bounds require M >= 2 and N >= 2");
    if (std::isnan(p_threshold) || std::isnan(rho_threshold)) throw std::invalid_argument("thresholds must be numbers");
    if (worker_count < 1) throw std::invalid_argument("worker count must be at least 1");
    if (box < 0) throw std::invalid_argument("box must be non-negative");
  }
};

struct SearchRecord {
  AbcTriple triple;
  BaseTriple base;
  RelationVector relation;
};

struct SearchStats {
  std::size_t bases_examined = 0;
  std::size_t candidates_built = 0;
  std::size_t degenerate_skips = 0;
  std::size_t factorization_skips = 0;
  std::size_t duplicates = 0;
  std::size_t good_abc_found = 0;
  std::size_t good_szpiro_found = 0;
  double wall_seconds = 0;

  SearchStats& operator+=(const SearchStats& o) {
    bases_examined += o.bases_examined;
    candidates_built += o.candidates_built;
    degenerate_skips += o.degenerate_skips;
    factorization_skips += o.factorization_skips;
    duplicates += o.duplicates;
    return *this;
  }
};

/// "A+B=C" in canonical factored text.
inline std::string canonical_key(const AbcTriple& t) {
  return format_factored(t.a) + "+" + format_factored(t.b) + "=" + format_factored(t.c);
}

inline SmoothSet build_member_set(const SearchConfig& cfg) {
  SmoothSet set;
  switch (cfg.mode) {
    case SearchMode::smooth:
      set = smooth_numbers(cfg.value_bound, cfg.prime_bound, cfg.member_cap);
      if (!cfg.include_one) set.members.erase(set.members.begin());
      break;
    case SearchMode::prime_powers:
      set = prime_powers(cfg.value_bound, cfg.prime_bound, cfg.include_one, cfg.member_cap);
      break;
    case SearchMode::prime_power_products_2:
      set = prime_power_products(cfg.value_bound, cfg.prime_bound, cfg.include_one, cfg.member_cap);
      break;
  }
  return set;
}

/// Streams every 3-subset of a smooth set once, ascending lexicographic by value.
class BaseEnumerator {
 public:
  explicit BaseEnumerator(const SmoothSet& set) : members_(&set.members) {}

  std::size_t total() const {
    const std::size_t n = members_->size();
    return n < 3 ? 0 : n * (n - 1) / 2 * (n - 2) / 3;
  }

  std::optional<BaseTriple> next() {
    const std::size_t n = members_->size();
    if (n < 3 || i_ + 2 >= n) return std::nullopt;
    BaseTriple out{(*members_)[i_], (*members_)[j_], (*members_)[k_]};
    if (++k_ == n) {
      if (++j_ + 1 == n) {
        ++i_;
        j_ = i_ + 1;
      }
      k_ = j_ + 1;
    }
    return out;
  }

 private:
  const std::vector<Factorization>* members_;
  std::size_t i_ = 0, j_ = 1, k_ = 2;
};

inline BaseEnumerator enumerate_bases(const SmoothSet& set) { return BaseEnumerator(set); }

namespace detail {

// Scores a candidate relation with 64-bit factoring and plain vectors,
// mirroring build_triple's arithmetic. Used to screen candidates before the
// exact construction; falls back (nullopt) whenever a value leaves 64 bits.
class CandidateScorer {
 public:
  enum class Outcome { scored, stuck, fallback };
  struct Score {
    Outcome outcome = Outcome::fallback;
    long double power = 0;
    long double szpiro = 0;
  };

  CandidateScorer(const BaseTriple& base, const FactorEffort& effort) : effort_(effort) {
    for (std::size_t t = 0; t < 3; ++t) {
      for (const auto& pp : base[t].factors()) {
        if (!fits_u64(pp.prime)) usable_ = false;
        else base_.push_back({to_u64(pp.prime), static_cast<int>(t), pp.exponent});
      }
    }
  }

  Score score(const RelationVector& rel) {
    if (!usable_) return {};
    const IntVector coef = rel.to_vector();
    entries_ = base_;
    for (std::size_t t = 0; t < 3; ++t) {
      const Int magnitude = abs(coef[t]);
      if (!fits_u64(magnitude)) return {};
      std::uint64_t stuck = 1;
      if (!factorize_u64(to_u64(magnitude), effort_, factors_, stuck)) return {Outcome::stuck};
      for (const auto& [p, e] : factors_) entries_.push_back({p, static_cast<int>(t), e});
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& x, const Entry& y) { return x.prime < y.prime; });

    long double logs[3] = {0, 0, 0};
    long double log_rad = 0;
    for (std::size_t i = 0; i < entries_.size();) {
      const std::uint64_t p = entries_[i].prime;
      unsigned long e[3] = {0, 0, 0};
      for (; i < entries_.size() && entries_[i].prime == p; ++i) e[entries_[i].term] += entries_[i].exponent;
      const unsigned long g = std::min({e[0], e[1], e[2]});
      if (e[0] == g && e[1] == g && e[2] == g) continue;
      const long double lp = std::log(static_cast<long double>(p));
      for (int t = 0; t < 3; ++t) logs[t] += static_cast<long double>(e[t] - g) * lp;
      log_rad += lp;
    }
    if (log_rad == 0) return {};
    std::size_t odd = 0;
    if (sgn(coef[0]) == sgn(coef[1])) odd = 2;
    else if (sgn(coef[0]) == sgn(coef[2])) odd = 1;
    return {Outcome::scored, logs[odd] / log_rad, (logs[0] + logs[1] + logs[2]) / log_rad};
  }

 private:
  struct Entry {
    std::uint64_t prime;
    int term;
    unsigned long exponent;
  };

  FactorEffort effort_;
  bool usable_ = true;
  std::vector<Entry> base_;
  std::vector<Entry> entries_;
  SmallFactors factors_;
};

// Screening slack; the exact construction makes the final decision.
inline constexpr long double kScreenSlack = 1e-9L;

}  // namespace detail

/// Reduce, combine, build and filter for one base triple. Candidates that
/// are degenerate or too hard to factor are skipped and counted in `stats`.
inline std::vector<SearchRecord> evaluate_base(const BaseTriple& base, const SearchConfig& cfg,
                                               SearchStats* stats = nullptr) {
  SearchStats local;
  std::vector<SearchRecord> out;
  const auto [v1, v2] = relation_basis(base.a0.value(), base.b0.value(), base.c0.value());
  detail::CandidateScorer scorer(base, cfg.factor_effort);
  for (const RelationVector& rel : combine_candidates(v1, v2, cfg.cf_depth, cfg.box)) {
    if (sgn(rel.alpha) == 0 || sgn(rel.beta) == 0 || sgn(rel.gamma) == 0) {
      ++local.degenerate_skips;
      continue;
    }
    // A multiple k*v builds the same triple as v, which is also a candidate.
    if (gcd(gcd(rel.alpha, rel.beta), rel.gamma) != 1) continue;

    const auto quick = scorer.score(rel);
    if (quick.outcome == detail::CandidateScorer::Outcome::stuck) {
      ++local.factorization_skips;
      continue;
    }
    if (quick.outcome == detail::CandidateScorer::Outcome::scored) {
      ++local.candidates_built;
      if (quick.power <= cfg.p_threshold - detail::kScreenSlack &&
          quick.szpiro <= cfg.rho_threshold - detail::kScreenSlack)
        continue;
    }

    std::optional<AbcTriple> triple;
    try {
      triple = build_triple(rel, base, cfg.factor_effort);
    } catch (const IncompleteFactorization&) {
      ++local.factorization_skips;
      continue;
    }
    if (quick.outcome == detail::CandidateScorer::Outcome::fallback) ++local.candidates_built;
    if (triple->p_metric > cfg.p_threshold || triple->rho_metric > cfg.rho_threshold)
      out.push_back({std::move(*triple), base, rel});
  }
  ++local.bases_examined;
  if (stats) *stats += local;
  return out;
}

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

/// One JSONL line (no trailing newline). Coefficients are written as bare
/// decimal integers of any length.
inline std::string record_to_jsonl(const SearchRecord& r) {
  std::string s = "{";
  auto text = [&s](const char* key, const std::string& v, bool comma = true) {
    s += std::string("\"") + key + "\":\"" + v + "\"" + (comma ? "," : "");
  };
  auto raw = [&s](const char* key, const std::string& v, bool comma = true) {
    s += std::string("\"") + key + "\":" + v + (comma ? "," : "");
  };
  text("a", format_factored(r.triple.a));
  text("b", format_factored(r.triple.b));
  text("c", format_factored(r.triple.c));
  raw("p", format_real(r.triple.p_metric));
  raw("rho", format_real(r.triple.rho_metric));
  raw("size_log10", format_real(r.triple.size_log10));
  text("base_a0", format_factored(r.base.a0));
  text("base_b0", format_factored(r.base.b0));
  text("base_c0", format_factored(r.base.c0));
  raw("alpha", r.relation.alpha.get_str());
  raw("beta", r.relation.beta.get_str());
  raw("gamma", r.relation.gamma.get_str(), false);
  s += "}";
  return s;
}

struct ParsedRecord {
  SearchRecord record;
  double stored_p = 0;
  double stored_rho = 0;
  double stored_size_log10 = 0;
};

/// Parses a record line and rebuilds the triple from its factored text.
inline ParsedRecord record_from_jsonl(const std::string& line, const FactorEffort& effort = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSONL record: ") + e.what());
  }
  if (!j.contains("a")) throw ParseError("not a record line");
  auto coefficient = [&line](const std::string& key) {
    static const std::regex digits_after(R"(^\s*(-?\d+))");
    const std::string tag = "\"" + key + "\":";
    const auto at = line.find(tag);
    std::smatch m;
    const std::string tail = at == std::string::npos ? "" : line.substr(at + tag.size());
    if (!std::regex_search(tail, m, digits_after)) throw ParseError("record lacks integer '" + key + "'");
    return Int(m[1].str(), 10);
  };
  ParsedRecord out{
      {make_triple(parse_factored(j.at("a").get<std::string>(), effort),
                   parse_factored(j.at("b").get<std::string>(), effort),
                   parse_factored(j.at("c").get<std::string>(), effort)),
       BaseTriple::make(parse_factored(j.at("base_a0").get<std::string>(), effort),
                        parse_factored(j.at("base_b0").get<std::string>(), effort),
                        parse_factored(j.at("base_c0").get<std::string>(), effort)),
       {coefficient("alpha"), coefficient("beta"), coefficient("gamma")}},
      j.at("p").get<double>(),
      j.at("rho").get<double>(),
      j.at("size_log10").get<double>()};
  return out;
}

inline std::string header_to_jsonl(const SearchConfig& cfg) {
  nlohmann::ordered_json h;
  h["mode"] = to_string(cfg.mode);
  h["max_value"] = cfg.value_bound.get_str();
  h["prime_bound"] = cfg.prime_bound;
  h["include_one"] = cfg.include_one;
  h["p_threshold"] = cfg.p_threshold;
  h["rho_threshold"] = cfg.rho_threshold;
  h["cf_depth"] = cfg.cf_depth;
  h["box"] = cfg.box;
  h["trial_bound"] = cfg.factor_effort.trial_bound;
  h["rho_iterations"] = cfg.factor_effort.rho_iterations;
  h["workers"] = cfg.worker_count;
  nlohmann::ordered_json line;
  line["header"] = h;
  // Infinite thresholds are not JSON numbers; nlohmann writes them as null.
  return line.dump();
}

struct SearchResult {
  std::vector<SearchRecord> records;
  SearchStats stats;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

namespace detail {

inline constexpr std::size_t kChunkSize = 256;

inline double record_score(const SearchRecord& r, const SearchConfig& cfg) {
  return std::max(r.triple.p_metric - cfg.p_threshold, r.triple.rho_metric - cfg.rho_threshold);
}

}  // namespace detail

/// Runs the whole search. Chunks of the canonical base order are handed to
/// workers; results are merged by chunk index, deduplicated (first
/// occurrence wins) and sorted by best margin over the thresholds, then by
/// canonical key. When output_path is set, a config header and the records
/// are appended to it as JSONL.
inline SearchResult run_search(const SearchConfig& cfg, const ProgressFn& progress = {}) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();

  std::ofstream out;
  if (!cfg.output_path.empty()) {
    out.open(cfg.output_path, std::ios::app);
    if (!out) throw OutputUnwritable(cfg.output_path);
  }

  const SmoothSet set = build_member_set(cfg);
  BaseEnumerator bases(set);
  const std::size_t total = bases.total();

  std::mutex lock;
  std::size_t next_chunk = 0;
  std::size_t done = 0;
  std::map<std::size_t, std::vector<SearchRecord>> by_chunk;
  SearchStats merged;
  std::exception_ptr failure;

  auto worker = [&] {
    SearchStats local;
    while (true) {
      std::vector<BaseTriple> batch;
      std::size_t chunk = 0;
      {
        std::lock_guard<std::mutex> guard(lock);
        if (failure) break;
        while (batch.size() < detail::kChunkSize) {
          auto b = bases.next();
          if (!b) break;
          batch.push_back(std::move(*b));
        }
        if (batch.empty()) break;
        chunk = next_chunk++;
      }
      std::vector<SearchRecord> found;
      try {
        for (const BaseTriple& b : batch) {
          auto recs = evaluate_base(b, cfg, &local);
          std::move(recs.begin(), recs.end(), std::back_inserter(found));
        }
      } catch (...) {
        std::lock_guard<std::mutex> guard(lock);
        if (!failure) failure = std::current_exception();
        break;
      }
      std::lock_guard<std::mutex> guard(lock);
      by_chunk.emplace(chunk, std::move(found));
      done += batch.size();
      if (progress) progress(done, total);
    }
    std::lock_guard<std::mutex> guard(lock);
    merged += local;
  };

  if (cfg.worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < cfg.worker_count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SearchResult result;
  std::unordered_set<std::string> seen;
  std::vector<std::pair<std::string, SearchRecord>> keyed;
  for (auto& [chunk, recs] : by_chunk) {
    for (auto& r : recs) {
      std::string key = canonical_key(r.triple);
      if (!seen.insert(key).second) {
        ++merged.duplicates;
        continue;
      }
      keyed.emplace_back(std::move(key), std::move(r));
    }
  }
  std::sort(keyed.begin(), keyed.end(), [&cfg](const auto& x, const auto& y) {
    const double sx = detail::record_score(x.second, cfg);
    const double sy = detail::record_score(y.second, cfg);
    if (sx != sy) return sx > sy;
    return x.first < y.first;
  });
  for (auto& [key, r] : keyed) {
    const Classification c = classify(r.triple, cfg.p_threshold, cfg.rho_threshold);
    merged.good_abc_found += c.good_abc;
    merged.good_szpiro_found += c.good_szpiro;
    result.records.push_back(std::move(r));
  }
  merged.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.stats = merged;

  if (out.is_open()) {
    out << header_to_jsonl(cfg) << '\n';
    for (const auto& r : result.records) out << record_to_jsonl(r) << '\n';
    out.flush();
    if (!out) throw OutputUnwritable(cfg.output_path);
  }
  return result;
}

// --- Published-table verification -------------------------------------------

struct TableRow {
  long line = 0;
  std::string kind;  // "szpiro" or "abc"
  std::string a, b, c;
  double expected_metric = 0;
  double expected_log10c = 0;
};

struct TableTolerance {
  double metric = 1e-6;
  double log10c = 0.05;
};

struct TableRowResult {
  TableRow row;
  bool sum_ok = false;
  bool coprime_ok = false;
  bool metric_ok = false;
  bool log10_ok = false;
  double metric = 0;
  double log10c = 0;

  bool passed() const { return sum_ok && coprime_ok && metric_ok && log10_ok; }
};

struct TableReport {
  std::vector<TableRowResult> rows;

  std::size_t passed_count() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.passed(); }));
  }
  bool all_passed() const { return passed_count() == rows.size(); }
  std::size_t count_kind(const std::string& kind) const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [&](const auto& r) { return r.row.kind == kind; }));
  }
};

/// Reads the TSV fixture: kind, a, b, c, expected_metric, expected_log10c.
/// Blank lines and lines starting with '#' are skipped.
inline std::vector<TableRow> read_table_fixture(std::istream& in) {
  std::vector<TableRow> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 6) throw ParseError("expected 6 tab-separated columns, got " + std::to_string(cols.size()), lineno);
    if (cols[0] != "szpiro" && cols[0] != "abc") throw ParseError("kind must be szpiro or abc", lineno);
    TableRow r{lineno, cols[0], cols[1], cols[2], cols[3], 0, 0};
    try {
      std::size_t used = 0;
      r.expected_metric = std::stod(cols[4], &used);
      if (used != cols[4].size()) throw std::invalid_argument("trailing text");
      r.expected_log10c = std::stod(cols[5], &used);
      if (used != cols[5].size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ParseError("expected decimal metric and log10 columns", lineno);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline TableRowResult verify_row(const TableRow& row, const TableTolerance& tol = {}) {
  TableRowResult res{row};
  Factorization a, b, c;
  try {
    a = parse_factored(row.a);
    b = parse_factored(row.b);
    c = parse_factored(row.c);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), row.line);
  } catch (const IncompleteFactorization& e) {
    throw ParseError(e.what(), row.line);
  }
  res.sum_ok = a.value() + b.value() == c.value();
  res.coprime_ok = pairwise_coprime(a, b, c);
  const TripleMetrics m = compute_metrics(a, b, c);
  res.metric = row.kind == "szpiro" ? m.szpiro : m.power;
  res.log10c = m.size_log10;
  res.metric_ok = std::abs(res.metric - row.expected_metric) <= tol.metric;
  res.log10_ok = std::abs(res.log10c - row.expected_log10c) <= tol.log10c;
  return res;
}

inline TableReport verify_tables(std::istream& in, const TableTolerance& tol = {}) {
  TableReport report;
  for (const TableRow& row : read_table_fixture(in)) report.rows.push_back(verify_row(row, tol));
  return report;
}

inline TableReport verify_tables(const std::string& fixture_path, const TableTolerance& tol = {}) {
  std::ifstream in(fixture_path);
  if (!in) throw ParseError("cannot open fixture '" + fixture_path + "'");
  return verify_tables(in, tol);
}

}  // namespace abclll
