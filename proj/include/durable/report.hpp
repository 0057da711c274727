#pragma once

// Reporting of durable patterns: triangles, cliques, paths and stars of
// constant size. All reporters guarantee the sandwich: every pattern durable
// at distance 1 is emitted, and everything emitted is durable at distance
// (1+eps). Triangles are attributed to their anchor (latest start, ties to
// the larger id); general patterns are emitted once per anchored occurrence.

#include <cstdint>
#include <functional>
#include <vector>

#include "durable/core.hpp"
#include "durable/durable_ball.hpp"

namespace durable {

struct TriangleRecord {
  int32_t anchor;
  int32_t q;
  int32_t s;
  Lifespan lifespan;     // common lifespan of the three points
  double maxPairDist;    // diagnostic; <= 1+eps
};

// Patterns other than triangles.
struct PatternRecord {
  char kind;                     // 'c' clique, 'p' path, 's' star
  std::vector<int32_t> members;  // path: in path order; star: center first
  Lifespan lifespan;
};

using TriangleSink = std::function<void(const TriangleRecord&)>;
using PatternSink = std::function<void(const PatternRecord&)>;

// All tau-durable triangles (sandwich semantics). With threads > 1 anchors
// are processed in parallel; sink calls stay serialized, each anchor's
// records contiguous, anchor order unspecified. Also exposed per anchor so
// drivers (incremental, range queries) can control the outer loop.
void reportTriangles(const DurableBallStructure& dbs, double tau, double eps,
                     const TriangleSink& sink, int threads = 1);
void reportTrianglesForAnchor(const DurableBallStructure& dbs, int32_t p, double tau,
                              double eps, const TriangleSink& sink);

// Cliques of size m (3..6): pairwise distance within the sandwich bounds,
// common lifespan >= tau.
void reportCliques(const DurableBallStructure& dbs, int m, double tau, double eps,
                   const PatternSink& sink, int threads = 1);
void reportCliquesForAnchor(const DurableBallStructure& dbs, int32_t p, int m,
                            double tau, double eps, const PatternSink& sink);

// Paths on m vertices (2..6): consecutive distance within bounds, vertices
// distinct, reported once per undirected occurrence (first id < last id).
void reportPaths(const DurableBallStructure& dbs, int m, double tau, double eps,
                 const PatternSink& sink, int threads = 1);
void reportPathsForAnchor(const DurableBallStructure& dbs, int32_t p, int m,
                          double tau, double eps, const PatternSink& sink);

// Stars with m vertices (3..6): one center adjacent to m-1 distinct leaves.
void reportStars(const DurableBallStructure& dbs, int m, double tau, double eps,
                 const PatternSink& sink, int threads = 1);
void reportStarsForAnchor(const DurableBallStructure& dbs, int32_t p, int m,
                          double tau, double eps, const PatternSink& sink);

}  // namespace durable
