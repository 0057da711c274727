#include "durable/core.hpp"

#include <algorithm>
#include <cmath>

#include "durable/log.hpp"

namespace durable {

std::optional<Lifespan> intersect(const Lifespan& a, const Lifespan& b) {
  double lo = std::max(a.start, b.start);
  double hi = std::min(a.end, b.end);
  if (lo > hi) return std::nullopt;
  return Lifespan{lo, hi};
}

std::optional<Lifespan> intersect(const Lifespan& a, const Lifespan& b, const Lifespan& c) {
  double lo = std::max(a.start, std::max(b.start, c.start));
  double hi = std::min(a.end, std::min(b.end, c.end));
  if (lo > hi) return std::nullopt;
  return Lifespan{lo, hi};
}

Metric Metric::lalpha(double a) {
  if (!(a >= 1.0) || !std::isfinite(a)) {
    throw InputError("lalpha metric requires finite alpha >= 1");
  }
  return {MetricKind::LAlpha, a, nullptr};
}

Metric Metric::customFn(DistanceFn fn) {
  if (!fn) throw InputError("custom metric requires a distance function");
  return {MetricKind::Custom, 0.0, std::move(fn)};
}

Dataset makeDataset(std::vector<TemporalPoint> points, Metric metric) {
  Dataset ds;
  ds.metric = std::move(metric);
  if (ds.metric.kind == MetricKind::LAlpha && !(ds.metric.alpha >= 1.0)) {
    throw InputError("lalpha metric requires alpha >= 1");
  }
  if (ds.metric.kind == MetricKind::Custom && !ds.metric.custom) {
    throw InputError("custom metric requires a distance function");
  }
  size_t n = points.size();
  ds.dim = n == 0 ? 0 : static_cast<int>(points[0].coords.size());
  std::vector<char> seen(n, 0);
  for (const TemporalPoint& p : points) {
    if (p.id < 0 || static_cast<size_t>(p.id) >= n || seen[static_cast<size_t>(p.id)]) {
      throw InputError("point ids must form a dense 0..n-1 range (bad id " +
                       std::to_string(p.id) + ")");
    }
    seen[static_cast<size_t>(p.id)] = 1;
    if (static_cast<int>(p.coords.size()) != ds.dim) {
      throw InputError("point " + std::to_string(p.id) + " has dimension " +
                       std::to_string(p.coords.size()) + ", expected " +
                       std::to_string(ds.dim));
    }
    for (double c : p.coords) {
      if (!std::isfinite(c)) {
        throw InputError("point " + std::to_string(p.id) + " has a non-finite coordinate");
      }
    }
    if (!std::isfinite(p.lifespan.start) || !std::isfinite(p.lifespan.end)) {
      throw InputError("point " + std::to_string(p.id) + " has a non-finite lifespan");
    }
    if (p.lifespan.start > p.lifespan.end) {
      throw InputError("point " + std::to_string(p.id) + " has start > end");
    }
  }
  ds.points.resize(n);
  for (TemporalPoint& p : points) {
    size_t slot = static_cast<size_t>(p.id);
    ds.points[slot] = std::move(p);
  }
  return ds;
}

double distanceToCoords(const TemporalPoint& a, const double* coords, int dim, const Metric& m) {
  if (static_cast<int>(a.coords.size()) != dim) {
    throw InputError("dimension mismatch in distance evaluation");
  }
  switch (m.kind) {
    case MetricKind::L1: {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) s += std::fabs(a.coords[static_cast<size_t>(i)] - coords[i]);
      return s;
    }
    case MetricKind::L2: {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        double d = a.coords[static_cast<size_t>(i)] - coords[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case MetricKind::LInf: {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        s = std::max(s, std::fabs(a.coords[static_cast<size_t>(i)] - coords[i]));
      }
      return s;
    }
    case MetricKind::LAlpha: {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        s += std::pow(std::fabs(a.coords[static_cast<size_t>(i)] - coords[i]), m.alpha);
      }
      return std::pow(s, 1.0 / m.alpha);
    }
    case MetricKind::Custom:
      throw InputError("custom metrics cannot evaluate coordinate queries");
  }
  throw InputError("unknown metric kind");
}

double distance(const TemporalPoint& a, const TemporalPoint& b, const Metric& m) {
  if (m.kind == MetricKind::Custom) return m.custom(a, b);
  return distanceToCoords(a, b.coords.data(), static_cast<int>(b.coords.size()), m);
}

double spread(const Dataset& ds) {
  size_t n = ds.size();
  if (n < 2) return 1.0;
  double mn = std::numeric_limits<double>::infinity();
  double mx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double d = distance(ds, static_cast<int32_t>(i), static_cast<int32_t>(j));
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
  }
  if (mn == 0.0) {
    DP_LOG_INFO("spread: duplicate coordinates present, spread is infinite");
    return std::numeric_limits<double>::infinity();
  }
  return mx / mn;
}

int32_t anchorOf(const Dataset& ds, int32_t a, int32_t b, int32_t c) {
  int32_t best = a;
  if (anchorPrecedes(ds.pt(best), ds.pt(b))) best = b;
  if (anchorPrecedes(ds.pt(best), ds.pt(c))) best = c;
  return best;
}

}  // namespace durable
