// Command-line front end for the durable-patterns shared library. Talks to
// the library exclusively through the C API; records go to stdout as NDJSON,
// the run summary goes to stderr.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "durablepatterns.h"

namespace {

struct TriangleRow {
  int32_t anchor, q, s;
  double t0, t1;
};

struct PatternRow {
  char kind;
  std::vector<int32_t> members;
  double t0, t1;
};

struct PairRow {
  int32_t p, q;
  double value;
};

struct Output {
  bool sorted = false;
  const char* agg = nullptr;  // "sum" or "union" for pair records
  size_t count = 0;
  std::string line;
  std::vector<TriangleRow> triangles;
  std::vector<PatternRow> patterns;
  std::vector<PairRow> pairs;

  void append(const char* s) { line += s; }
  void append(int32_t v) { line += std::to_string(v); }
  void append(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    line.append(buf, res.ptr);
  }
  void flushLine() {
    line += '\n';
    std::fwrite(line.data(), 1, line.size(), stdout);
    line.clear();
  }

  void printTriangle(const TriangleRow& r) {
    append("{\"anchor\":");
    append(r.anchor);
    append(",\"q\":");
    append(r.q);
    append(",\"s\":");
    append(r.s);
    append(",\"t0\":");
    append(r.t0);
    append(",\"t1\":");
    append(r.t1);
    append("}");
    flushLine();
  }
  void printPattern(const PatternRow& r) {
    append("{\"kind\":\"");
    append(r.kind == 'c' ? "clique" : r.kind == 'p' ? "path" : "star");
    append("\",\"m\":");
    append(static_cast<int32_t>(r.members.size()));
    append(",\"members\":[");
    for (size_t i = 0; i < r.members.size(); ++i) {
      if (i) append(",");
      append(r.members[i]);
    }
    append("],\"t0\":");
    append(r.t0);
    append(",\"t1\":");
    append(r.t1);
    append("}");
    flushLine();
  }
  void printPair(const PairRow& r) {
    append("{\"p\":");
    append(r.p);
    append(",\"q\":");
    append(r.q);
    append(",\"agg\":\"");
    append(agg);
    append("\",\"value\":");
    append(r.value);
    append("}");
    flushLine();
  }

  void onTriangle(const TriangleRow& r) {
    ++count;
    if (sorted) {
      triangles.push_back(r);
    } else {
      printTriangle(r);
    }
  }
  void onPattern(PatternRow r) {
    ++count;
    if (sorted) {
      patterns.push_back(std::move(r));
    } else {
      printPattern(r);
    }
  }
  void onPair(const PairRow& r) {
    ++count;
    if (sorted) {
      pairs.push_back(r);
    } else {
      printPair(r);
    }
  }

  void flushSorted() {
    if (!sorted) return;
    std::sort(triangles.begin(), triangles.end(), [](const TriangleRow& a, const TriangleRow& b) {
      if (a.anchor != b.anchor) return a.anchor < b.anchor;
      if (a.q != b.q) return a.q < b.q;
      return a.s < b.s;
    });
    std::sort(patterns.begin(), patterns.end(),
              [](const PatternRow& a, const PatternRow& b) { return a.members < b.members; });
    std::sort(pairs.begin(), pairs.end(), [](const PairRow& a, const PairRow& b) {
      if (a.p != b.p) return a.p < b.p;
      return a.q < b.q;
    });
    for (const auto& r : triangles) printTriangle(r);
    for (const auto& r : patterns) printPattern(r);
    for (const auto& r : pairs) printPair(r);
  }
};

extern "C" {

void cbTriangle(void* user, int32_t anchor, int32_t q, int32_t s, double t0, double t1) {
  static_cast<Output*>(user)->onTriangle({anchor, q, s, t0, t1});
}

void cbPattern(void* user, char kind, int32_t m, const int32_t* members, double t0,
               double t1) {
  static_cast<Output*>(user)->onPattern(
      {kind, std::vector<int32_t>(members, members + m), t0, t1});
}

void cbPair(void* user, int32_t p, int32_t q, double value) {
  static_cast<Output*>(user)->onPair({p, q, value});
}

}  // extern "C"

char gErr[512];

int fail(dp_status status) {
  std::fprintf(stderr, "error: %s\n", gErr[0] ? gErr : "unspecified failure");
  gErr[0] = '\0';
  return status == DP_OK ? 1 : 1;
}

double msSince(std::chrono::steady_clock::time_point from) {
  auto d = std::chrono::steady_clock::now() - from;
  return std::chrono::duration<double, std::milli>(d).count();
}

void printSummary(int32_t n, double eps, double tau, size_t out, double buildMs,
                  double queryMs) {
  std::fprintf(stderr, "n=%d eps=%g tau=%g out=%zu build_ms=%.3f query_ms=%.3f\n", n, eps,
               tau, out, buildMs, queryMs);
}

// Strips leading/trailing blanks; returns false for empty results.
bool trimmed(std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return false;
  size_t e = s.find_last_not_of(" \t\r\n");
  s = s.substr(b, e - b + 1);
  return true;
}

int runIncremental(dp_dataset* ds, double eps, bool sorted) {
  dp_engine* engine = nullptr;
  auto t0 = std::chrono::steady_clock::now();
  if (dp_engine_build(ds, DP_ENGINE_BALLS, &engine, gErr, sizeof(gErr)) != DP_OK) {
    return fail(DP_ERR_INPUT);
  }
  dp_session* session = nullptr;
  dp_status st = dp_session_begin(engine, eps, &session, gErr, sizeof(gErr));
  if (st != DP_OK) {
    dp_engine_free(engine);
    return fail(st);
  }
  double buildMs = msSince(t0);
  double queryMs = 0.0;
  double lastTau = 0.0;
  Output out;
  out.sorted = sorted;
  int rc = 0;
  std::string lineBuf;
  char raw[4096];
  while (std::fgets(raw, sizeof(raw), stdin)) {
    lineBuf.assign(raw);
    if (!trimmed(lineBuf)) continue;
    if (lineBuf == "quit") break;
    if (lineBuf == "reset") {
      if (dp_session_reset(session, gErr, sizeof(gErr)) != DP_OK) {
        rc = fail(DP_ERR_INPUT);
        break;
      }
      continue;
    }
    if (lineBuf.rfind("tau ", 0) == 0) {
      char* end = nullptr;
      double tau = std::strtod(lineBuf.c_str() + 4, &end);
      if (end == lineBuf.c_str() + 4) {
        std::fprintf(stderr, "warning: ignoring malformed line '%s'\n", lineBuf.c_str());
        continue;
      }
      size_t delta = 0;
      auto q0 = std::chrono::steady_clock::now();
      st = dp_session_query(session, tau, cbTriangle, &out, &delta, gErr, sizeof(gErr));
      queryMs += msSince(q0);
      if (st != DP_OK) {
        rc = fail(st);
        break;
      }
      out.flushSorted();
      out.triangles.clear();
      std::printf("#delta=%zu #cumulative=%zu\n", delta, dp_session_cumulative(session));
      std::fflush(stdout);
      lastTau = tau;
      continue;
    }
    std::fprintf(stderr, "warning: ignoring unknown command '%s'\n", lineBuf.c_str());
  }
  if (rc == 0) {
    printSummary(dp_dataset_size(ds), eps, lastTau, dp_session_cumulative(session), buildMs,
                 queryMs);
  }
  dp_session_free(session);
  dp_engine_free(engine);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"durable pattern reporting over temporal proximity graphs"};
  app.set_version_flag("--version", dp_version());
  app.require_subcommand(1);

  std::string input, metric = "l2", outputPath = "-";
  double tau = 0.0, eps = 0.1;
  int threads = 1, m = 3, kappa = 2;
  bool sorted = false, oracle = false;

  auto addInput = [&](CLI::App* sub) {
    sub->add_option("input", input, "input CSV (id,x1,...,xd,t_start,t_end)")->required();
    sub->add_option("--metric", metric, "l1, l2, linf or lalpha:<a>")->capture_default_str();
    sub->add_flag("--sorted", sorted, "buffer and sort records before printing");
  };
  auto addRelaxed = [&](CLI::App* sub) {
    addInput(sub);
    sub->add_option("--tau", tau, "durability threshold")->required();
    sub->add_option("--eps", eps, "relaxation in (0,1]")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads")->capture_default_str();
    sub->add_flag("--oracle", oracle, "use the brute-force reference at threshold 1");
  };

  CLI::App* cmdTriangles = app.add_subcommand("triangles", "tau-durable triangles");
  addRelaxed(cmdTriangles);
  CLI::App* cmdCliques = app.add_subcommand("cliques", "durable m-cliques");
  addRelaxed(cmdCliques);
  cmdCliques->add_option("--m", m, "clique size (3..6)")->capture_default_str();
  CLI::App* cmdPaths = app.add_subcommand("paths", "durable m-paths");
  addRelaxed(cmdPaths);
  cmdPaths->add_option("--m", m, "path size (2..6)")->capture_default_str();
  CLI::App* cmdStars = app.add_subcommand("stars", "durable m-stars");
  addRelaxed(cmdStars);
  cmdStars->add_option("--m", m, "star size (3..6)")->capture_default_str();
  CLI::App* cmdSum = app.add_subcommand("sum-pairs", "pairs durable under summed support");
  addRelaxed(cmdSum);
  CLI::App* cmdUnion = app.add_subcommand("union-pairs", "pairs durable under capped union");
  addRelaxed(cmdUnion);
  cmdUnion->add_option("--kappa", kappa, "witness cap (>= 1)")->capture_default_str();

  CLI::App* cmdExact = app.add_subcommand("linf-exact", "exact triangles, l_inf metric");
  cmdExact->add_option("input", input, "input CSV (id,x1,...,xd,t_start,t_end)")->required();
  std::string exactMetric = "linf";
  cmdExact->add_option("--metric", exactMetric, "must be linf")->capture_default_str();
  cmdExact->add_option("--tau", tau, "durability threshold")->required();
  cmdExact->add_option("--threads", threads, "worker threads")->capture_default_str();
  cmdExact->add_flag("--sorted", sorted, "buffer and sort records before printing");
  cmdExact->add_flag("--oracle", oracle, "use the brute-force reference at threshold 1");

  CLI::App* cmdIncr = app.add_subcommand(
      "incremental", "interactive threshold session (stdin: tau <v> | reset | quit)");
  addInput(cmdIncr);
  cmdIncr->add_option("--eps", eps, "relaxation in (0,1]")->capture_default_str();

  CLI::App* cmdGen = app.add_subcommand("generate", "synthetic clustered dataset CSV");
  int32_t gn = 100, gdim = 2, gclusters = 5;
  double gstd = 0.05, glen = 0.2;
  uint64_t gseed = 0;
  cmdGen->add_option("--n", gn, "points")->capture_default_str();
  cmdGen->add_option("--dim", gdim, "dimension")->capture_default_str();
  cmdGen->add_option("--clusters", gclusters, "cluster count")->capture_default_str();
  cmdGen->add_option("--cluster-std", gstd, "cluster spread")->capture_default_str();
  cmdGen->add_option("--mean-length", glen, "mean lifespan length")->capture_default_str();
  cmdGen->add_option("--seed", gseed, "rng seed")->capture_default_str();
  cmdGen->add_option("--metric", metric, "metric tag stored with the dataset")
      ->capture_default_str();
  cmdGen->add_option("-o,--output", outputPath, "output path, - for stdout")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmdGen->parsed()) {
    dp_generate_params params{gn, gdim, gclusters, gstd, glen, gseed};
    dp_dataset* ds = nullptr;
    dp_status st = dp_dataset_generate(&params, metric.c_str(), &ds, gErr, sizeof(gErr));
    if (st != DP_OK) return fail(st);
    st = dp_dataset_save_csv(ds, outputPath == "-" ? "/dev/stdout" : outputPath.c_str(),
                             gErr, sizeof(gErr));
    dp_dataset_free(ds);
    return st == DP_OK ? 0 : fail(st);
  }

  const bool exact = cmdExact->parsed();
  dp_dataset* ds = nullptr;
  dp_status st = dp_dataset_load_csv(input.c_str(), (exact ? exactMetric : metric).c_str(),
                                     &ds, gErr, sizeof(gErr));
  if (st != DP_OK) return fail(st);

  if (cmdIncr->parsed()) {
    int rc = runIncremental(ds, eps, sorted);
    dp_dataset_free(ds);
    return rc;
  }

  Output out;
  out.sorted = sorted;
  double buildMs = 0.0, queryMs = 0.0;
  dp_engine* engine = nullptr;
  if (!oracle) {
    dp_engine_mode mode = exact ? DP_ENGINE_LINF_EXACT
                                : (cmdSum->parsed() || cmdUnion->parsed()) ? DP_ENGINE_BALLS_AGG
                                                                           : DP_ENGINE_BALLS;
    auto t0 = std::chrono::steady_clock::now();
    st = dp_engine_build(ds, mode, &engine, gErr, sizeof(gErr));
    buildMs = msSince(t0);
    if (st != DP_OK) {
      dp_dataset_free(ds);
      return fail(st);
    }
  }

  auto q0 = std::chrono::steady_clock::now();
  if (cmdTriangles->parsed()) {
    st = oracle ? dp_oracle_triangles(ds, tau, 1.0, cbTriangle, &out, gErr, sizeof(gErr))
                : dp_report_triangles(engine, tau, eps, threads, cbTriangle, &out, gErr,
                                      sizeof(gErr));
  } else if (cmdCliques->parsed()) {
    st = oracle ? dp_oracle_cliques(ds, m, tau, 1.0, cbPattern, &out, gErr, sizeof(gErr))
                : dp_report_cliques(engine, m, tau, eps, threads, cbPattern, &out, gErr,
                                    sizeof(gErr));
  } else if (cmdPaths->parsed()) {
    st = oracle ? dp_oracle_paths(ds, m, tau, 1.0, cbPattern, &out, gErr, sizeof(gErr))
                : dp_report_paths(engine, m, tau, eps, threads, cbPattern, &out, gErr,
                                  sizeof(gErr));
  } else if (cmdStars->parsed()) {
    st = oracle ? dp_oracle_stars(ds, m, tau, 1.0, cbPattern, &out, gErr, sizeof(gErr))
                : dp_report_stars(engine, m, tau, eps, threads, cbPattern, &out, gErr,
                                  sizeof(gErr));
  } else if (cmdSum->parsed()) {
    out.agg = "sum";
    st = oracle ? dp_oracle_sum_pairs(ds, tau, 1.0, cbPair, &out, gErr, sizeof(gErr))
                : dp_report_sum_pairs(engine, tau, eps, threads, cbPair, &out, gErr,
                                      sizeof(gErr));
  } else if (cmdUnion->parsed()) {
    out.agg = "union";
    st = oracle ? dp_oracle_union_pairs(ds, tau, kappa, 1.0, cbPair, &out, gErr, sizeof(gErr))
                : dp_report_union_pairs(engine, tau, kappa, eps, threads, cbPair, &out, gErr,
                                        sizeof(gErr));
  } else if (exact) {
    st = oracle ? dp_oracle_triangles(ds, tau, 1.0, cbTriangle, &out, gErr, sizeof(gErr))
                : dp_report_triangles_exact(engine, tau, threads, cbTriangle, &out, gErr,
                                            sizeof(gErr));
  }
  queryMs = msSince(q0);
  int rc = 0;
  if (st != DP_OK) {
    rc = fail(st);
  } else {
    out.flushSorted();
    printSummary(dp_dataset_size(ds), exact ? 0.0 : eps, tau, out.count, buildMs, queryMs);
  }
  if (engine) dp_engine_free(engine);
  dp_dataset_free(ds);
  return rc;
}
