#include "durable/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace durable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void checkCommon(const Dataset& ds, int maxN, double tau, double thr) {
  if (static_cast<int>(ds.size()) > maxN) {
    throw LimitError("oracle limited to " + std::to_string(maxN) + " points");
  }
  if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
  if (!(thr > 0.0)) throw InputError("distance threshold must be positive");
}

void checkM(int m, int lo) {
  if (m < lo || m > 6) {
    throw InputError("pattern size must be between " + std::to_string(lo) + " and 6");
  }
}

// Measure of J covered by the union of the given clipped intervals.
double sweepCoverage(std::vector<Lifespan>& parts) {
  std::sort(parts.begin(), parts.end(), [](const Lifespan& a, const Lifespan& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  double covered = 0.0, curLo = 0.0, curHi = -kInf;
  bool open = false;
  for (const Lifespan& s : parts) {
    if (!open) {
      curLo = s.start;
      curHi = s.end;
      open = true;
    } else if (s.start <= curHi) {
      curHi = std::max(curHi, s.end);
    } else {
      covered += curHi - curLo;
      curLo = s.start;
      curHi = s.end;
    }
  }
  if (open) covered += curHi - curLo;
  return covered;
}

}  // namespace

void oracleTriangles(const Dataset& ds, double tau, double thr, const TriangleSink& sink) {
  checkCommon(ds, kOracleTriangleMaxN, tau, thr);
  const int32_t n = static_cast<int32_t>(ds.size());
  for (int32_t p = 0; p < n; ++p) {
    const TemporalPoint& P = ds.pt(p);
    for (int32_t q = 0; q < n; ++q) {
      if (q == p || !anchorPrecedes(ds.pt(q), P)) continue;
      if (distance(ds, p, q) > thr) continue;
      for (int32_t s = q + 1; s < n; ++s) {
        if (s == p || !anchorPrecedes(ds.pt(s), P)) continue;
        if (distance(ds, p, s) > thr || distance(ds, q, s) > thr) continue;
        auto cmn = intersect(P.lifespan, ds.pt(q).lifespan, ds.pt(s).lifespan);
        if (!cmn || !reachesTau(cmn->start, cmn->end, tau)) continue;
        double mx = std::max({distance(ds, p, q), distance(ds, p, s), distance(ds, q, s)});
        sink({p, q, s, *cmn, mx});
      }
    }
  }
}

void oracleCliques(const Dataset& ds, int m, double tau, double thr, const PatternSink& sink) {
  checkCommon(ds, kOraclePatternMaxN, tau, thr);
  checkM(m, 3);
  const int32_t n = static_cast<int32_t>(ds.size());
  std::vector<int32_t> chosen;
  auto extend = [&](auto&& self, int32_t from, const Lifespan& cmn) -> void {
    if (static_cast<int>(chosen.size()) == m) {
      if (reachesTau(cmn.start, cmn.end, tau)) sink({'c', chosen, cmn});
      return;
    }
    for (int32_t v = from; v < n; ++v) {
      bool ok = true;
      for (int32_t u : chosen) {
        if (distance(ds, u, v) > thr) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      auto next = intersect(cmn, ds.pt(v).lifespan);
      if (!next) continue;
      chosen.push_back(v);
      self(self, v + 1, *next);
      chosen.pop_back();
    }
  };
  for (int32_t v = 0; v < n; ++v) {
    chosen.assign(1, v);
    extend(extend, v + 1, ds.pt(v).lifespan);
  }
}

void oraclePaths(const Dataset& ds, int m, double tau, double thr, const PatternSink& sink) {
  checkCommon(ds, kOraclePatternMaxN, tau, thr);
  checkM(m, 2);
  const int32_t n = static_cast<int32_t>(ds.size());
  std::vector<int32_t> seq;
  std::vector<bool> used(static_cast<size_t>(n), false);
  auto extend = [&](auto&& self, const Lifespan& cmn) -> void {
    if (static_cast<int>(seq.size()) == m) {
      if (seq.front() < seq.back() && reachesTau(cmn.start, cmn.end, tau)) {
        sink({'p', seq, cmn});
      }
      return;
    }
    int32_t last = seq.back();
    for (int32_t v = 0; v < n; ++v) {
      if (used[static_cast<size_t>(v)] || distance(ds, last, v) > thr) continue;
      auto next = intersect(cmn, ds.pt(v).lifespan);
      if (!next) continue;
      used[static_cast<size_t>(v)] = true;
      seq.push_back(v);
      self(self, *next);
      seq.pop_back();
      used[static_cast<size_t>(v)] = false;
    }
  };
  for (int32_t v = 0; v < n; ++v) {
    seq.assign(1, v);
    used[static_cast<size_t>(v)] = true;
    extend(extend, ds.pt(v).lifespan);
    used[static_cast<size_t>(v)] = false;
  }
}

void oracleStars(const Dataset& ds, int m, double tau, double thr, const PatternSink& sink) {
  checkCommon(ds, kOraclePatternMaxN, tau, thr);
  checkM(m, 3);
  const int32_t n = static_cast<int32_t>(ds.size());
  std::vector<int32_t> members;  // center first, then leaves ascending
  auto extend = [&](auto&& self, int32_t center, int32_t from, const Lifespan& cmn) -> void {
    if (static_cast<int>(members.size()) == m) {
      if (reachesTau(cmn.start, cmn.end, tau)) sink({'s', members, cmn});
      return;
    }
    for (int32_t v = from; v < n; ++v) {
      if (v == center || distance(ds, center, v) > thr) continue;
      auto next = intersect(cmn, ds.pt(v).lifespan);
      if (!next) continue;
      members.push_back(v);
      self(self, center, v + 1, *next);
      members.pop_back();
    }
  };
  for (int32_t c = 0; c < n; ++c) {
    members.assign(1, c);
    extend(extend, c, 0, ds.pt(c).lifespan);
  }
}

double oracleSumSupport(const Dataset& ds, int32_t p, int32_t q, double thr) {
  auto J = intersect(ds.pt(p).lifespan, ds.pt(q).lifespan);
  if (!J) return 0.0;
  double total = 0.0;
  for (const TemporalPoint& w : ds.points) {
    if (w.id == p || w.id == q) continue;
    if (distance(ds, w.id, p) > thr || distance(ds, w.id, q) > thr) continue;
    total += durabilityOf(intersect(w.lifespan, *J));
  }
  return total;
}

void oracleSumPairs(const Dataset& ds, double tau, double thr, const PairSink& sink) {
  checkCommon(ds, kOracleTriangleMaxN, tau, thr);
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  const int32_t n = static_cast<int32_t>(ds.size());
  for (int32_t p = 0; p < n; ++p) {
    const TemporalPoint& P = ds.pt(p);
    for (int32_t q = 0; q < n; ++q) {
      if (q == p || !anchorPrecedes(ds.pt(q), P)) continue;
      if (distance(ds, p, q) > thr) continue;
      double support = oracleSumSupport(ds, p, q, thr);
      if (support >= tau) sink({p, q, support});
    }
  }
}

double oracleUnionOpt(const Dataset& ds, int32_t p, int32_t q, int kappa, double thr) {
  auto J = intersect(ds.pt(p).lifespan, ds.pt(q).lifespan);
  if (!J || kappa < 1) return 0.0;
  std::vector<Lifespan> clipped;
  for (const TemporalPoint& w : ds.points) {
    if (w.id == p || w.id == q) continue;
    if (distance(ds, w.id, p) > thr || distance(ds, w.id, q) > thr) continue;
    auto part = intersect(w.lifespan, *J);
    if (part && part->end > part->start) clipped.push_back(*part);
  }
  double bestCover = 0.0;
  std::vector<Lifespan> subset;
  auto pick = [&](auto&& self, size_t from, int left) -> void {
    double cover = sweepCoverage(subset);
    bestCover = std::max(bestCover, cover);
    if (left == 0) return;
    for (size_t i = from; i < clipped.size(); ++i) {
      subset.push_back(clipped[i]);
      self(self, i + 1, left - 1);
      subset.pop_back();
    }
  };
  pick(pick, 0, kappa);
  return bestCover;
}

void oracleUnionPairs(const Dataset& ds, double tau, int kappa, double thr,
                      const PairSink& sink) {
  checkCommon(ds, kOracleUnionMaxN, tau, thr);
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  if (kappa < 1) throw InputError("kappa must be at least 1");
  if (kappa > kOracleUnionMaxKappa) {
    throw LimitError("union oracle supports kappa up to " +
                     std::to_string(kOracleUnionMaxKappa));
  }
  const int32_t n = static_cast<int32_t>(ds.size());
  for (int32_t p = 0; p < n; ++p) {
    const TemporalPoint& P = ds.pt(p);
    for (int32_t q = 0; q < n; ++q) {
      if (q == p || !anchorPrecedes(ds.pt(q), P)) continue;
      if (distance(ds, p, q) > thr) continue;
      double opt = oracleUnionOpt(ds, p, q, kappa, thr);
      if (opt >= tau) sink({p, q, opt});
    }
  }
}

double oracleActivation(const Dataset& ds, int32_t p, double thr) {
  if (static_cast<int>(ds.size()) > kOracleTriangleMaxN) {
    throw LimitError("oracle limited to " + std::to_string(kOracleTriangleMaxN) + " points");
  }
  if (!(thr > 0.0)) throw InputError("distance threshold must be positive");
  const int32_t n = static_cast<int32_t>(ds.size());
  const TemporalPoint& P = ds.pt(p);
  double best = -kInf;
  for (int32_t q = 0; q < n; ++q) {
    if (q == p || !anchorPrecedes(ds.pt(q), P)) continue;
    if (distance(ds, p, q) > thr) continue;
    for (int32_t s = q + 1; s < n; ++s) {
      if (s == p || !anchorPrecedes(ds.pt(s), P)) continue;
      if (distance(ds, p, s) > thr || distance(ds, q, s) > thr) continue;
      auto cmn = intersect(P.lifespan, ds.pt(q).lifespan, ds.pt(s).lifespan);
      if (cmn) best = std::max(best, cmn->end - cmn->start);
    }
  }
  return best;
}

TriangleKey keyOf(const TriangleRecord& r) {
  return {r.anchor, std::min(r.q, r.s), std::max(r.q, r.s)};
}

}  // namespace durable
