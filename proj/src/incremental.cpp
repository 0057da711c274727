#include "durable/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace durable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> distinctEnds(const Dataset& ds) {
  std::vector<double> ends;
  ends.reserve(ds.size());
  for (const auto& pt : ds.points) ends.push_back(pt.lifespan.end);
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  return ends;
}

// True if p anchors a triangle whose common lifespan end lies in
// [endLo, endHi). With endHi = +inf this degrades to plain detection.
bool detectTriangleBand(const DurableBallStructure& dbs, int32_t p, double endLo,
                        double endHi, double eps) {
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  if (P.lifespan.end < endLo) return false;
  // When the anchor's own end falls inside the band, any durable pair gives a
  // common end in the band; otherwise at least one member must end there.
  bool anyPair = P.lifespan.end < endHi;
  auto subsets = anyPair ? dbs.durableBallsAbs(p, endLo, kInf, eps, 1.0, false)
                         : dbs.durableBallsAbs(p, endLo, endHi, eps, 1.0, true);
  if (subsets.empty()) return false;
  const double repThr = 1.0 + eps / 2.0;
  if (anyPair) {
    for (const auto& sub : subsets) {
      if (sub.candidateCount >= 2) return true;
    }
    for (size_t i = 0; i < subsets.size(); ++i) {
      for (size_t j = i + 1; j < subsets.size(); ++j) {
        if (distance(ds, subsets[i].ball.repId, subsets[j].ball.repId) <= repThr) return true;
      }
    }
    return false;
  }
  for (const auto& sub : subsets) {
    size_t lambda = sub.candidateCount - sub.lambdaBarCount;
    if (sub.candidateCount >= 2 && lambda >= 1) return true;
  }
  for (size_t i = 0; i < subsets.size(); ++i) {
    for (size_t j = i + 1; j < subsets.size(); ++j) {
      size_t lambdaI = subsets[i].candidateCount - subsets[i].lambdaBarCount;
      size_t lambdaJ = subsets[j].candidateCount - subsets[j].lambdaBarCount;
      if (lambdaI + lambdaJ == 0) continue;
      if (distance(ds, subsets[i].ball.repId, subsets[j].ball.repId) <= repThr) return true;
    }
  }
  return false;
}

// Largest e in ends with a triangle anchored at p whose common end lies in
// [e, capAbs); that e is exactly the common end of some triangle, so the
// returned durability e - start is attained. -inf when none exists.
double activationFromEnds(const DurableBallStructure& dbs, int32_t p, double tauCap,
                          double eps, const std::vector<double>& ends) {
  const TemporalPoint& P = dbs.dataset().pt(p);
  double capAbs = std::isinf(tauCap) ? kInf : P.lifespan.start + tauCap;
  auto first = std::lower_bound(ends.begin(), ends.end(), P.lifespan.start);
  auto last = std::lower_bound(ends.begin(), ends.end(), capAbs);
  ptrdiff_t lo = first - ends.begin();
  ptrdiff_t hi = (last - ends.begin()) - 1;
  ptrdiff_t found = -1;
  while (lo <= hi) {
    ptrdiff_t mid = lo + (hi - lo) / 2;
    if (detectTriangleBand(dbs, p, ends[static_cast<size_t>(mid)], capAbs, eps)) {
      found = mid;
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  if (found < 0) return -kInf;
  return ends[static_cast<size_t>(found)] - P.lifespan.start;
}

}  // namespace

double computeActivation(const DurableBallStructure& dbs, int32_t p, double tauCap,
                         double eps) {
  if (!(tauCap > 0.0)) throw InputError("tauCap must be positive");
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must be in (0,1]");
  return activationFromEnds(dbs, p, tauCap, eps, distinctEnds(dbs.dataset()));
}

bool detectTriangle(const DurableBallStructure& dbs, int32_t p, double endLo, double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must be in (0,1]");
  return detectTriangleBand(dbs, p, endLo, kInf, eps);
}

void reportDeltaTriangle(const DurableBallStructure& dbs, int32_t p, double tauNew,
                         double tauOld, double eps, const TriangleSink& sink) {
  if (!(tauNew >= 0.0) || !(tauNew < tauOld)) {
    throw InputError("delta reporting requires 0 <= tauNew < tauOld");
  }
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  if (!reachesTau(P.lifespan.start, P.lifespan.end, tauNew)) return;
  // If the anchor itself cannot reach tauOld, nothing anchored at p was
  // reported at tauOld: every durable pair is new.
  bool allNew = std::isinf(tauOld) || P.lifespan.end < P.lifespan.start + tauOld;
  auto subsets = dbs.durableBallQPrime(p, tauNew, tauOld, eps);
  if (subsets.empty()) return;

  std::vector<std::vector<std::pair<int32_t, bool>>> members(subsets.size());
  for (size_t i = 0; i < subsets.size(); ++i) {
    members[i].reserve(subsets[i].candidateCount);
    forEachCandidate(subsets[i], [&](int32_t pid, bool inBand) {
      members[i].emplace_back(pid, inBand);
    });
  }
  const double repThr = 1.0 + eps / 2.0;
  auto emit = [&](int32_t q, int32_t s) {
    if (s < q) std::swap(q, s);  // records carry the non-anchor pair in id order
    double end = std::min({P.lifespan.end, ds.pt(q).lifespan.end, ds.pt(s).lifespan.end});
    double mx = std::max({distance(ds, p, q), distance(ds, p, s), distance(ds, q, s)});
    sink({p, q, s, {P.lifespan.start, end}, mx});
  };
  for (size_t i = 0; i < subsets.size(); ++i) {
    const auto& mi = members[i];
    for (size_t a = 0; a < mi.size(); ++a) {
      for (size_t b = a + 1; b < mi.size(); ++b) {
        if (allNew || mi[a].second || mi[b].second) emit(mi[a].first, mi[b].first);
      }
    }
    for (size_t j = i + 1; j < subsets.size(); ++j) {
      if (distance(ds, subsets[i].ball.repId, subsets[j].ball.repId) > repThr) continue;
      for (const auto& [q, qBand] : mi) {
        for (const auto& [s, sBand] : members[j]) {
          if (allNew || qBand || sBand) emit(q, s);
        }
      }
    }
  }
}

IncrementalSession::IncrementalSession(const DurableBallStructure& dbs, double eps)
    : dbs_(&dbs), eps_(eps), prevTau_(kInf) {
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must be in (0,1]");
  ends_ = distinctEnds(dbs.dataset());
  int32_t n = static_cast<int32_t>(dbs.dataset().size());
  activationDesc_.reserve(static_cast<size_t>(n));
  for (int32_t p = 0; p < n; ++p) {
    double alpha = activationFromEnds(dbs, p, kInf, eps_, ends_);
    if (alpha != -kInf) activationDesc_.emplace_back(alpha, p);
  }
  std::sort(activationDesc_.begin(), activationDesc_.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
}

size_t IncrementalSession::query(double tau, const TriangleSink& sink) {
  if (!(tau > 0.0) || std::isinf(tau)) throw InputError("tau must be finite and positive");
  if (tau == prevTau_) return 0;
  size_t emitted = 0;
  TriangleSink counting = [&](const TriangleRecord& r) {
    ++emitted;
    sink(r);
  };
  if (tau > prevTau_) {
    // Baseline reset: report everything durable at the larger threshold.
    pending_.clear();
    for (const auto& [alpha, p] : activationDesc_) {
      if (alpha < tau) break;
      reportTrianglesForAnchor(*dbs_, p, tau, eps_, counting);
      double beta = activationFromEnds(*dbs_, p, tau, eps_, ends_);
      if (beta != -kInf) pending_[p] = beta;
    }
    prevTau_ = tau;
    cumulative_ = emitted;
    return emitted;
  }
  // Newly activated anchors: first triangle appears in [tau, prevTau).
  for (const auto& [alpha, p] : activationDesc_) {
    if (alpha < tau) break;
    if (alpha >= prevTau_) continue;
    reportTrianglesForAnchor(*dbs_, p, tau, eps_, counting);
    double beta = activationFromEnds(*dbs_, p, tau, eps_, ends_);
    if (beta != -kInf) pending_[p] = beta;
  }
  // Already-active anchors whose next activation crossed the new threshold.
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (it->second >= tau) {
      int32_t p = it->first;
      reportDeltaTriangle(*dbs_, p, tau, prevTau_, eps_, counting);
      double beta = activationFromEnds(*dbs_, p, tau, eps_, ends_);
      if (beta == -kInf) {
        it = pending_.erase(it);
        continue;
      }
      it->second = beta;
    }
    ++it;
  }
  prevTau_ = tau;
  cumulative_ += emitted;
  return emitted;
}

void IncrementalSession::reset() {
  pending_.clear();
  prevTau_ = kInf;
  cumulative_ = 0;
}

}  // namespace durable
