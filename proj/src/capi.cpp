#include "durablepatterns.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <variant>
#include <vector>

#include "durable/aggregate.hpp"
#include "durable/core.hpp"
#include "durable/durable_ball.hpp"
#include "durable/incremental.hpp"
#include "durable/io.hpp"
#include "durable/linf_exact.hpp"
#include "durable/oracle.hpp"
#include "durable/report.hpp"

using namespace durable;

struct dp_dataset {
  Dataset ds;
};

struct dp_engine {
  const dp_dataset* owner;
  std::variant<DurableBallStructure, DurableRangeStructure> impl;
  dp_engine_mode mode;
};

struct dp_session {
  IncrementalSession session;
};

namespace {

void setErr(char* errbuf, size_t errbuf_len, const char* msg) {
  if (!errbuf || errbuf_len == 0) return;
  std::snprintf(errbuf, errbuf_len, "%s", msg);
}

// Runs fn, translating exceptions into status codes and errbuf text.
template <typename Fn>
dp_status guarded(char* errbuf, size_t errbuf_len, Fn&& fn) {
  try {
    fn();
    return DP_OK;
  } catch (const ParseError& e) {
    setErr(errbuf, errbuf_len, e.what());
    return DP_ERR_PARSE;
  } catch (const LimitError& e) {
    setErr(errbuf, errbuf_len, e.what());
    return DP_ERR_LIMIT;
  } catch (const InputError& e) {
    setErr(errbuf, errbuf_len, e.what());
    return DP_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    setErr(errbuf, errbuf_len, "out of memory");
    return DP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    setErr(errbuf, errbuf_len, e.what());
    return DP_ERR_INTERNAL;
  } catch (...) {
    setErr(errbuf, errbuf_len, "unknown error");
    return DP_ERR_INTERNAL;
  }
}

Metric parseMetric(const char* metric) {
  if (!metric) throw InputError("metric must not be null");
  std::string m(metric);
  if (m == "l1") return Metric::l1();
  if (m == "l2") return Metric::l2();
  if (m == "linf") return Metric::linf();
  if (m.rfind("lalpha:", 0) == 0) {
    std::string arg = m.substr(7);
    try {
      size_t used = 0;
      double a = std::stod(arg, &used);
      if (used != arg.size()) throw InputError("");
      return Metric::lalpha(a);
    } catch (const InputError&) {
      throw InputError("invalid lalpha argument '" + arg + "'");
    } catch (const std::exception&) {
      throw InputError("invalid lalpha argument '" + arg + "'");
    }
  }
  throw InputError("unknown metric '" + m + "' (expected l1, l2, linf or lalpha:<a>)");
}

const DurableBallStructure& ballsOf(const dp_engine* engine, bool needAggregates) {
  if (!engine) throw InputError("engine must not be null");
  const auto* dbs = std::get_if<DurableBallStructure>(&engine->impl);
  if (!dbs) throw InputError("operation requires a balls engine");
  if (needAggregates && !dbs->withAggregates()) {
    throw InputError("operation requires an engine built with aggregates");
  }
  return *dbs;
}

const DurableRangeStructure& rangeOf(const dp_engine* engine) {
  if (!engine) throw InputError("engine must not be null");
  const auto* drs = std::get_if<DurableRangeStructure>(&engine->impl);
  if (!drs) throw InputError("operation requires an exact engine");
  return *drs;
}

TriangleSink triangleSink(dp_triangle_cb cb, void* user) {
  if (!cb) throw InputError("callback must not be null");
  return [cb, user](const TriangleRecord& r) {
    cb(user, r.anchor, r.q, r.s, r.lifespan.start, r.lifespan.end);
  };
}

PatternSink patternSink(dp_pattern_cb cb, void* user) {
  if (!cb) throw InputError("callback must not be null");
  return [cb, user](const PatternRecord& r) {
    cb(user, r.kind, static_cast<int32_t>(r.members.size()), r.members.data(),
       r.lifespan.start, r.lifespan.end);
  };
}

PairSink pairSink(dp_pair_cb cb, void* user) {
  if (!cb) throw InputError("callback must not be null");
  return [cb, user](const PairRecord& r) { cb(user, r.p, r.q, r.value); };
}

const Dataset& datasetOf(const dp_dataset* ds) {
  if (!ds) throw InputError("dataset must not be null");
  return ds->ds;
}

}  // namespace

extern "C" {

const char* dp_version(void) { return "1.0.0"; }

dp_status dp_dataset_load_csv(const char* path, const char* metric, dp_dataset** out,
                              char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!path || !out) throw InputError("path and out must not be null");
    auto ds = std::make_unique<dp_dataset>();
    ds->ds = loadCsvFile(path, parseMetric(metric));
    *out = ds.release();
  });
}

dp_status dp_dataset_create(int32_t n, int32_t dim, const char* metric, const double* coords,
                            const double* t_start, const double* t_end, dp_dataset** out,
                            char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!out) throw InputError("out must not be null");
    if (n < 0 || dim < 1) throw InputError("n must be >= 0 and dim >= 1");
    if (n > 0 && (!coords || !t_start || !t_end)) {
      throw InputError("coords, t_start and t_end must not be null");
    }
    std::vector<TemporalPoint> pts(static_cast<size_t>(n));
    for (int32_t i = 0; i < n; ++i) {
      auto& pt = pts[static_cast<size_t>(i)];
      pt.id = i;
      pt.coords.assign(coords + static_cast<size_t>(i) * dim,
                       coords + static_cast<size_t>(i + 1) * dim);
      pt.lifespan = {t_start[i], t_end[i]};
    }
    auto ds = std::make_unique<dp_dataset>();
    ds->ds = makeDataset(std::move(pts), parseMetric(metric));
    *out = ds.release();
  });
}

dp_status dp_dataset_generate(const dp_generate_params* params, const char* metric,
                              dp_dataset** out, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!params || !out) throw InputError("params and out must not be null");
    GenerateParams gp;
    gp.n = params->n;
    gp.dim = params->dim;
    gp.clusters = params->clusters;
    gp.clusterStd = params->cluster_std;
    gp.meanLength = params->mean_length;
    gp.seed = params->seed;
    auto ds = std::make_unique<dp_dataset>();
    ds->ds = generateClustered(gp, parseMetric(metric));
    *out = ds.release();
  });
}

dp_status dp_dataset_save_csv(const dp_dataset* ds, const char* path, char* errbuf,
                              size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!path) throw InputError("path must not be null");
    saveCsvFile(datasetOf(ds), path);
  });
}

int32_t dp_dataset_size(const dp_dataset* ds) {
  return ds ? static_cast<int32_t>(ds->ds.size()) : 0;
}

int32_t dp_dataset_dim(const dp_dataset* ds) { return ds ? ds->ds.dim : 0; }

dp_status dp_dataset_point(const dp_dataset* ds, int32_t id, double* coords, double* t_start,
                           double* t_end, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    const Dataset& d = datasetOf(ds);
    if (id < 0 || static_cast<size_t>(id) >= d.size()) throw InputError("id out of range");
    const TemporalPoint& pt = d.pt(id);
    if (coords) std::memcpy(coords, pt.coords.data(), pt.coords.size() * sizeof(double));
    if (t_start) *t_start = pt.lifespan.start;
    if (t_end) *t_end = pt.lifespan.end;
  });
}

void dp_dataset_free(dp_dataset* ds) { delete ds; }

dp_status dp_engine_build(const dp_dataset* ds, dp_engine_mode mode, dp_engine** out,
                          char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!out) throw InputError("out must not be null");
    const Dataset& d = datasetOf(ds);
    auto engine = std::make_unique<dp_engine>();
    engine->owner = ds;
    engine->mode = mode;
    switch (mode) {
      case DP_ENGINE_BALLS:
        engine->impl = DurableBallStructure::build(d, /*withAggregates=*/false);
        break;
      case DP_ENGINE_BALLS_AGG:
        engine->impl = DurableBallStructure::build(d, /*withAggregates=*/true);
        break;
      case DP_ENGINE_LINF_EXACT:
        engine->impl = DurableRangeStructure::build(d);
        break;
      default:
        throw InputError("unknown engine mode");
    }
    *out = engine.release();
  });
}

void dp_engine_free(dp_engine* engine) { delete engine; }

dp_status dp_report_triangles(const dp_engine* engine, double tau, double eps, int threads,
                              dp_triangle_cb cb, void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    reportTriangles(ballsOf(engine, false), tau, eps, triangleSink(cb, user), threads);
  });
}

dp_status dp_report_cliques(const dp_engine* engine, int32_t m, double tau, double eps,
                            int threads, dp_pattern_cb cb, void* user, char* errbuf,
                            size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    reportCliques(ballsOf(engine, false), m, tau, eps, patternSink(cb, user), threads);
  });
}

dp_status dp_report_paths(const dp_engine* engine, int32_t m, double tau, double eps,
                          int threads, dp_pattern_cb cb, void* user, char* errbuf,
                          size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    reportPaths(ballsOf(engine, false), m, tau, eps, patternSink(cb, user), threads);
  });
}

dp_status dp_report_stars(const dp_engine* engine, int32_t m, double tau, double eps,
                          int threads, dp_pattern_cb cb, void* user, char* errbuf,
                          size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    reportStars(ballsOf(engine, false), m, tau, eps, patternSink(cb, user), threads);
  });
}

dp_status dp_report_sum_pairs(const dp_engine* engine, double tau, double eps, int threads,
                              dp_pair_cb cb, void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    reportSumPairs(ballsOf(engine, true), tau, eps, pairSink(cb, user), threads);
  });
}

dp_status dp_report_union_pairs(const dp_engine* engine, double tau, int32_t kappa,
                                double eps, int threads, dp_pair_cb cb, void* user,
                                char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    reportUnionPairs(ballsOf(engine, true), tau, kappa, eps, pairSink(cb, user), threads);
  });
}

dp_status dp_report_triangles_exact(const dp_engine* engine, double tau, int threads,
                                    dp_triangle_cb cb, void* user, char* errbuf,
                                    size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    reportTrianglesExactLinf(rangeOf(engine), tau, triangleSink(cb, user), threads);
  });
}

dp_status dp_session_begin(const dp_engine* engine, double eps, dp_session** out,
                           char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!out) throw InputError("out must not be null");
    const DurableBallStructure& dbs = ballsOf(engine, false);
    *out = new dp_session{IncrementalSession(dbs, eps)};
  });
}

dp_status dp_session_query(dp_session* session, double tau, dp_triangle_cb cb, void* user,
                           size_t* delta_count, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!session) throw InputError("session must not be null");
    size_t count = session->session.query(tau, triangleSink(cb, user));
    if (delta_count) *delta_count = count;
  });
}

dp_status dp_session_reset(dp_session* session, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!session) throw InputError("session must not be null");
    session->session.reset();
  });
}

size_t dp_session_cumulative(const dp_session* session) {
  return session ? session->session.cumulativeCount() : 0;
}

void dp_session_free(dp_session* session) { delete session; }

dp_status dp_oracle_triangles(const dp_dataset* ds, double tau, double thr, dp_triangle_cb cb,
                              void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    oracleTriangles(datasetOf(ds), tau, thr, triangleSink(cb, user));
  });
}

dp_status dp_oracle_cliques(const dp_dataset* ds, int32_t m, double tau, double thr,
                            dp_pattern_cb cb, void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    oracleCliques(datasetOf(ds), m, tau, thr, patternSink(cb, user));
  });
}

dp_status dp_oracle_paths(const dp_dataset* ds, int32_t m, double tau, double thr,
                          dp_pattern_cb cb, void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    oraclePaths(datasetOf(ds), m, tau, thr, patternSink(cb, user));
  });
}

dp_status dp_oracle_stars(const dp_dataset* ds, int32_t m, double tau, double thr,
                          dp_pattern_cb cb, void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    oracleStars(datasetOf(ds), m, tau, thr, patternSink(cb, user));
  });
}

dp_status dp_oracle_sum_pairs(const dp_dataset* ds, double tau, double thr, dp_pair_cb cb,
                              void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    oracleSumPairs(datasetOf(ds), tau, thr, pairSink(cb, user));
  });
}

dp_status dp_oracle_union_pairs(const dp_dataset* ds, double tau, int32_t kappa, double thr,
                                dp_pair_cb cb, void* user, char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    oracleUnionPairs(datasetOf(ds), tau, kappa, thr, pairSink(cb, user));
  });
}

dp_status dp_oracle_activation(const dp_dataset* ds, int32_t p, double thr, double* alpha,
                               char* errbuf, size_t errbuf_len) {
  return guarded(errbuf, errbuf_len, [&] {
    if (!alpha) throw InputError("alpha must not be null");
    const Dataset& d = datasetOf(ds);
    if (p < 0 || static_cast<size_t>(p) >= d.size()) throw InputError("id out of range");
    *alpha = oracleActivation(d, p, thr);
  });
}

}  // extern "C"
