#ifndef DURABLEPATTERNS_H
#define DURABLEPATTERNS_H

/* C API for the durable-patterns library. All handles are opaque; every
 * fallible call returns a dp_status and, on failure, copies a NUL-terminated
 * message into errbuf (if errbuf_len > 0). Handles stay valid until freed;
 * engines and sessions borrow their dataset, which must outlive them.
 * Reporting callbacks are always serialized, even with threads > 1. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DP_API __declspec(dllexport)
#else
#define DP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dp_status {
  DP_OK = 0,
  DP_ERR_INPUT = 1,    /* invalid argument or unsupported combination */
  DP_ERR_PARSE = 2,    /* malformed CSV or IO failure */
  DP_ERR_LIMIT = 3,    /* oracle size guard exceeded */
  DP_ERR_INTERNAL = 4
} dp_status;

typedef struct dp_dataset dp_dataset;
typedef struct dp_engine dp_engine;
typedef struct dp_session dp_session;

typedef enum dp_engine_mode {
  DP_ENGINE_BALLS = 0,     /* triangles, cliques, paths, stars, sessions */
  DP_ENGINE_BALLS_AGG = 1, /* additionally SUM / UNION pairs */
  DP_ENGINE_LINF_EXACT = 2 /* exact triangles, l_inf metric, dim <= 4 */
} dp_engine_mode;

typedef void (*dp_triangle_cb)(void* user, int32_t anchor, int32_t q, int32_t s,
                               double t0, double t1);
/* kind is 'c' (clique), 'p' (path, members in path order) or 's' (star,
 * center first); members has m entries. */
typedef void (*dp_pattern_cb)(void* user, char kind, int32_t m,
                              const int32_t* members, double t0, double t1);
typedef void (*dp_pair_cb)(void* user, int32_t p, int32_t q, double value);

DP_API const char* dp_version(void);

/* metric: "l1", "l2", "linf" or "lalpha:<a>" with a >= 1. */
DP_API dp_status dp_dataset_load_csv(const char* path, const char* metric,
                                     dp_dataset** out, char* errbuf, size_t errbuf_len);
DP_API dp_status dp_dataset_create(int32_t n, int32_t dim, const char* metric,
                                   const double* coords /* n*dim row-major */,
                                   const double* t_start, const double* t_end,
                                   dp_dataset** out, char* errbuf, size_t errbuf_len);

typedef struct dp_generate_params {
  int32_t n;
  int32_t dim;
  int32_t clusters;
  double cluster_std;
  double mean_length;
  uint64_t seed;
} dp_generate_params;

DP_API dp_status dp_dataset_generate(const dp_generate_params* params, const char* metric,
                                     dp_dataset** out, char* errbuf, size_t errbuf_len);
DP_API dp_status dp_dataset_save_csv(const dp_dataset* ds, const char* path,
                                     char* errbuf, size_t errbuf_len);
DP_API int32_t dp_dataset_size(const dp_dataset* ds);
DP_API int32_t dp_dataset_dim(const dp_dataset* ds);
/* coords must hold dim doubles; any out pointer may be NULL. */
DP_API dp_status dp_dataset_point(const dp_dataset* ds, int32_t id, double* coords,
                                  double* t_start, double* t_end,
                                  char* errbuf, size_t errbuf_len);
DP_API void dp_dataset_free(dp_dataset* ds);

DP_API dp_status dp_engine_build(const dp_dataset* ds, dp_engine_mode mode,
                                 dp_engine** out, char* errbuf, size_t errbuf_len);
DP_API void dp_engine_free(dp_engine* engine);

/* Sandwich-relaxed reporting on a balls engine; eps in (0,1]. */
DP_API dp_status dp_report_triangles(const dp_engine* engine, double tau, double eps,
                                     int threads, dp_triangle_cb cb, void* user,
                                     char* errbuf, size_t errbuf_len);
DP_API dp_status dp_report_cliques(const dp_engine* engine, int32_t m, double tau,
                                   double eps, int threads, dp_pattern_cb cb, void* user,
                                   char* errbuf, size_t errbuf_len);
DP_API dp_status dp_report_paths(const dp_engine* engine, int32_t m, double tau,
                                 double eps, int threads, dp_pattern_cb cb, void* user,
                                 char* errbuf, size_t errbuf_len);
DP_API dp_status dp_report_stars(const dp_engine* engine, int32_t m, double tau,
                                 double eps, int threads, dp_pattern_cb cb, void* user,
                                 char* errbuf, size_t errbuf_len);
DP_API dp_status dp_report_sum_pairs(const dp_engine* engine, double tau, double eps,
                                     int threads, dp_pair_cb cb, void* user,
                                     char* errbuf, size_t errbuf_len);
DP_API dp_status dp_report_union_pairs(const dp_engine* engine, double tau, int32_t kappa,
                                       double eps, int threads, dp_pair_cb cb, void* user,
                                       char* errbuf, size_t errbuf_len);
/* Exact reporting on a DP_ENGINE_LINF_EXACT engine. */
DP_API dp_status dp_report_triangles_exact(const dp_engine* engine, double tau,
                                           int threads, dp_triangle_cb cb, void* user,
                                           char* errbuf, size_t errbuf_len);

/* Incremental sessions over a balls engine (decreasing tau reports deltas;
 * increasing tau resets the baseline and re-reports). */
DP_API dp_status dp_session_begin(const dp_engine* engine, double eps, dp_session** out,
                                  char* errbuf, size_t errbuf_len);
DP_API dp_status dp_session_query(dp_session* session, double tau, dp_triangle_cb cb,
                                  void* user, size_t* delta_count,
                                  char* errbuf, size_t errbuf_len);
DP_API dp_status dp_session_reset(dp_session* session, char* errbuf, size_t errbuf_len);
DP_API size_t dp_session_cumulative(const dp_session* session);
DP_API void dp_session_free(dp_session* session);

/* Brute-force reference implementations (size-guarded; see DP_ERR_LIMIT).
 * thr is the distance threshold: 1 for the exact set, 1+eps for the relaxed
 * superset. */
DP_API dp_status dp_oracle_triangles(const dp_dataset* ds, double tau, double thr,
                                     dp_triangle_cb cb, void* user,
                                     char* errbuf, size_t errbuf_len);
DP_API dp_status dp_oracle_cliques(const dp_dataset* ds, int32_t m, double tau, double thr,
                                   dp_pattern_cb cb, void* user,
                                   char* errbuf, size_t errbuf_len);
DP_API dp_status dp_oracle_paths(const dp_dataset* ds, int32_t m, double tau, double thr,
                                 dp_pattern_cb cb, void* user,
                                 char* errbuf, size_t errbuf_len);
DP_API dp_status dp_oracle_stars(const dp_dataset* ds, int32_t m, double tau, double thr,
                                 dp_pattern_cb cb, void* user,
                                 char* errbuf, size_t errbuf_len);
DP_API dp_status dp_oracle_sum_pairs(const dp_dataset* ds, double tau, double thr,
                                     dp_pair_cb cb, void* user,
                                     char* errbuf, size_t errbuf_len);
DP_API dp_status dp_oracle_union_pairs(const dp_dataset* ds, double tau, int32_t kappa,
                                       double thr, dp_pair_cb cb, void* user,
                                       char* errbuf, size_t errbuf_len);
/* Largest tau at which p anchors a triangle at threshold thr; -inf if none. */
DP_API dp_status dp_oracle_activation(const dp_dataset* ds, int32_t p, double thr,
                                      double* alpha, char* errbuf, size_t errbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* DURABLEPATTERNS_H */
