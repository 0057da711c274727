#include "durable/aggregate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <span>

#include "durable/interval_index.hpp"
#include "durable/parallel.hpp"

namespace durable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validateAggregateArgs(const DurableBallStructure& dbs, double tau, double eps) {
  if (!dbs.withAggregates()) {
    throw InputError("aggregate reporting requires a structure built with aggregates");
  }
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must be in (0,1]");
}

// Canonical balls around p at radius 1 with candidate lists and witness
// links. Candidates drive the q enumeration; every ball (with or without
// candidates) contributes interval mass near its linked balls, so the
// anchor's own ball is always available as a witness.
struct PairContext {
  const Dataset* ds = nullptr;
  const DurableBallStructure* dbs = nullptr;
  std::vector<CoverTree::Ball> balls;
  std::vector<std::vector<IntervalEntry>> candidates;  // (start,end,pid), end desc, pid asc
  std::vector<std::vector<size_t>> links;              // witness balls near each ball

  PairContext(const DurableBallStructure& s, int32_t p, double eps) : ds(&s.dataset()), dbs(&s) {
    const TemporalPoint& P = ds->pt(p);
    balls = s.tree().ballReport(p, 1.0, eps / 2.0);
    StartKey key{P.lifespan.start, P.id};
    candidates.resize(balls.size());
    std::vector<CanonicalRange> ranges;
    for (size_t j = 0; j < balls.size(); ++j) {
      const IntervalIndex& idx = s.nodeIndex(balls[j].nodeIdx);
      if (idx.maxEnd() < P.lifespan.start || idx.minStart() > key.t0) continue;
      ranges.clear();
      idx.durableCandidates(key, P.lifespan.start, kInf, ranges);
      auto& list = candidates[j];
      for (const CanonicalRange& cr : ranges) {
        for (uint32_t k = 0; k < cr.count(); ++k) {
          int32_t pid = cr.pidAt(k);
          list.push_back({ds->pt(pid).lifespan.start, cr.endAt(k), pid});
        }
      }
      std::sort(list.begin(), list.end(), [](const IntervalEntry& a, const IntervalEntry& b) {
        if (a.end != b.end) return a.end > b.end;
        return a.pid < b.pid;
      });
    }
    const double repThr = 1.0 + eps / 2.0;
    links.resize(balls.size());
    for (size_t j = 0; j < balls.size(); ++j) {
      for (size_t i = 0; i < balls.size(); ++i) {
        if (distance(*ds, balls[i].repId, balls[j].repId) <= repThr) links[j].push_back(i);
      }
    }
  }
};

}  // namespace

void reportSumPairsForAnchor(const DurableBallStructure& dbs, int32_t p, double tau,
                             double eps, const PairSink& sink) {
  validateAggregateArgs(dbs, tau, eps);
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  PairContext ctx(dbs, p, eps);
  for (size_t j = 0; j < ctx.balls.size(); ++j) {
    for (const IntervalEntry& cand : ctx.candidates[j]) {
      Lifespan J{P.lifespan.start, std::min(P.lifespan.end, cand.end)};
      double t = 0.0;
      for (size_t i : ctx.links[j]) {
        t += dbs.nodeIndex(ctx.balls[i].nodeIdx).computeSumD(J);
      }
      // The joint lifespan J is counted once for the anchor and once for the
      // candidate; the support is everything else.
      double value = t - 2.0 * J.length();
      if (value >= tau) {
        sink({p, cand.pid, value});
      } else {
        // Support is nonincreasing as candidate ends shrink within a ball.
        break;
      }
    }
  }
}

void reportSumPairs(const DurableBallStructure& dbs, double tau, double eps,
                    const PairSink& sink, int threads) {
  validateAggregateArgs(dbs, tau, eps);
  forEachAnchorParallel<PairRecord>(
      static_cast<int32_t>(dbs.dataset().size()), threads, sink,
      [&](int32_t p, const PairSink& s) { reportSumPairsForAnchor(dbs, p, tau, eps, s); });
}

namespace {

// One maximal uncovered sub-segment of the joint lifespan, with the best
// remaining witness overlap inside it. Ordered for a max-heap: larger overlap
// first, then smaller pid, then smaller left endpoint.
struct Segment {
  double lo, hi;
  double overlap;
  int32_t pid;
};

struct SegmentLess {
  bool operator()(const Segment& a, const Segment& b) const {
    if (a.overlap != b.overlap) return a.overlap < b.overlap;
    if (a.pid != b.pid) return a.pid > b.pid;
    return a.lo > b.lo;
  }
};

}  // namespace

void reportUnionPairsForAnchor(const DurableBallStructure& dbs, int32_t p, double tau,
                               int kappa, double eps, const PairSink& sink) {
  validateAggregateArgs(dbs, tau, eps);
  if (kappa < 1) throw InputError("kappa must be at least 1");
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  const double need = (1.0 - 1.0 / std::numbers::e) * tau;
  PairContext ctx(dbs, p, eps);
  for (size_t j = 0; j < ctx.balls.size(); ++j) {
    for (const IntervalEntry& cand : ctx.candidates[j]) {
      Lifespan J{P.lifespan.start, std::min(P.lifespan.end, cand.end)};
      std::array<int32_t, 2> excl{p, cand.pid};
      // (pid, overlap) of the best witness inside [lo, hi] across linked balls.
      auto best = [&](double lo, double hi) -> std::optional<std::pair<int32_t, double>> {
        std::optional<std::pair<int32_t, double>> out;
        for (size_t i : ctx.links[j]) {
          auto got = dbs.nodeIndex(ctx.balls[i].nodeIdx)
                         .computeMaxUnionD({lo, hi}, std::span<const int32_t>(excl));
          if (!got) continue;
          if (!out || got->second > out->second ||
              (got->second == out->second && got->first < out->first)) {
            out = got;
          }
        }
        return out;
      };
      std::priority_queue<Segment, std::vector<Segment>, SegmentLess> heap;
      auto push = [&](double lo, double hi) {
        if (!(hi > lo)) return;
        if (auto got = best(lo, hi)) heap.push({lo, hi, got->second, got->first});
      };
      push(J.start, J.end);
      double total = 0.0;
      for (int round = 0; round < kappa && !heap.empty(); ++round) {
        Segment seg = heap.top();
        heap.pop();
        total += seg.overlap;
        const Lifespan& w = ds.pt(seg.pid).lifespan;
        push(seg.lo, std::max(seg.lo, w.start));
        push(std::min(seg.hi, w.end), seg.hi);
      }
      if (total >= need) {
        sink({p, cand.pid, total});
      } else {
        // The optimal coverage only shrinks as candidate ends shrink, so no
        // later candidate in this ball can qualify either.
        break;
      }
    }
  }
}

void reportUnionPairs(const DurableBallStructure& dbs, double tau, int kappa, double eps,
                      const PairSink& sink, int threads) {
  validateAggregateArgs(dbs, tau, eps);
  if (kappa < 1) throw InputError("kappa must be at least 1");
  forEachAnchorParallel<PairRecord>(
      static_cast<int32_t>(dbs.dataset().size()), threads, sink,
      [&](int32_t p, const PairSink& s) {
        reportUnionPairsForAnchor(dbs, p, tau, kappa, eps, s);
      });
}

}  // namespace durable
