#pragma once

// Core value types for temporal point sets: lifespans (closed time intervals),
// points with coordinates and a lifespan, metrics, and the immutable dataset
// that every structure in this library is built over.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace durable {

// Thrown on precondition violations (bad parameters, metric/dimension mismatch).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown by ingest when a file does not meet the format contract.
// line 0 means the failure is not tied to a line (e.g. the file cannot open).
struct ParseError : std::runtime_error {
  size_t line;
  ParseError(size_t line_, const std::string& msg)
      : std::runtime_error(line_ ? "line " + std::to_string(line_) + ": " + msg : msg),
        line(line_) {}
};

// Thrown by oracles when an instance exceeds their size limits.
struct LimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed interval [start, end]; length of a degenerate [a,a] is 0.
struct Lifespan {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

// Intersection of closed intervals, or nullopt when max-start > min-end.
std::optional<Lifespan> intersect(const Lifespan& a, const Lifespan& b);
std::optional<Lifespan> intersect(const Lifespan& a, const Lifespan& b, const Lifespan& c);

// Length of a possibly-empty intersection (0 for empty).
inline double durabilityOf(const std::optional<Lifespan>& s) {
  return s ? s->length() : 0.0;
}

// Shared durability predicate: an anchored pattern whose common lifespan
// starts at anchorStart reaches tau iff the common end reaches
// anchorStart + tau. Every engine and oracle uses this exact expression so
// their results agree bitwise.
inline bool reachesTau(double anchorStart, double commonEnd, double tau) {
  return commonEnd >= anchorStart + tau;
}

struct TemporalPoint {
  int32_t id = 0;                // dense, 0..n-1, defines all tie-break orders
  std::vector<double> coords;    // dimension shared across the dataset
  Lifespan lifespan;
};

enum class MetricKind { L1, L2, LInf, LAlpha, Custom };

// Distance callback for Custom metrics; must be a metric on the dataset's points.
using DistanceFn = std::function<double(const TemporalPoint&, const TemporalPoint&)>;

struct Metric {
  MetricKind kind = MetricKind::L2;
  double alpha = 2.0;   // only for LAlpha, requires alpha >= 1
  DistanceFn custom;    // only for Custom

  static Metric l1() { return {MetricKind::L1, 1.0, nullptr}; }
  static Metric l2() { return {MetricKind::L2, 2.0, nullptr}; }
  static Metric linf() { return {MetricKind::LInf, 0.0, nullptr}; }
  static Metric lalpha(double a);
  static Metric customFn(DistanceFn fn);
};

// Immutable after construction; points are stored so that points[i].id == i.
struct Dataset {
  std::vector<TemporalPoint> points;
  Metric metric;
  int dim = 0;

  size_t size() const { return points.size(); }
  const TemporalPoint& pt(int32_t id) const { return points[static_cast<size_t>(id)]; }
};

// Builds a dataset from points with arbitrary order but ids forming {0..n-1}.
// Validates dimensions, finite values, start <= end, id density.
Dataset makeDataset(std::vector<TemporalPoint> points, Metric metric);

double distance(const TemporalPoint& a, const TemporalPoint& b, const Metric& m);
// Distance from a point to a raw coordinate vector; Custom metrics cannot
// evaluate this and throw InputError.
double distanceToCoords(const TemporalPoint& a, const double* coords, int dim, const Metric& m);

inline double distance(const Dataset& ds, int32_t a, int32_t b) {
  return distance(ds.pt(a), ds.pt(b), ds.metric);
}

// Ratio of max to min pairwise distance; +inf (with a log warning) when
// duplicate coordinates make the min 0. Exhaustive scan, diagnostic use only.
double spread(const Dataset& ds);

// Single source of truth for the anchor rule: q precedes p in the
// (lifespan start, id) order. The anchor of a pattern is the member with
// the latest start, ties broken towards the larger id.
inline bool anchorPrecedes(const TemporalPoint& q, const TemporalPoint& p) {
  return q.lifespan.start < p.lifespan.start ||
         (q.lifespan.start == p.lifespan.start && q.id < p.id);
}

// Anchor of a triple under the rule above.
int32_t anchorOf(const Dataset& ds, int32_t a, int32_t b, int32_t c);

}  // namespace durable
