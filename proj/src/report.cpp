#include "durable/report.hpp"

#include <algorithm>
#include <cmath>

#include "durable/parallel.hpp"

namespace durable {

namespace {

// Materialized view of one anchored ball query: per-subset member pid lists
// in canonical enumeration order, plus the representative distances needed by
// the pattern drivers.
struct BallMembers {
  std::vector<DurableSubset> subsets;
  std::vector<std::vector<int32_t>> members;

  explicit BallMembers(std::vector<DurableSubset> subs) : subsets(std::move(subs)) {
    members.resize(subsets.size());
    for (size_t i = 0; i < subsets.size(); ++i) {
      members[i].reserve(subsets[i].candidateCount);
      forEachCandidate(subsets[i], [&](int32_t pid, bool) { members[i].push_back(pid); });
    }
  }
  size_t size() const { return subsets.size(); }
  int32_t rep(size_t i) const { return subsets[i].ball.repId; }
  double repDistToAnchor(size_t i) const { return subsets[i].ball.repDist; }
};

Lifespan commonLifespan(const Dataset& ds, int32_t anchor, const std::vector<int32_t>& others) {
  const Lifespan& a = ds.pt(anchor).lifespan;
  double end = a.end;
  for (int32_t id : others) end = std::min(end, ds.pt(id).lifespan.end);
  return {a.start, end};
}

double maxPairwiseDist(const Dataset& ds, const std::vector<int32_t>& ids) {
  double mx = 0.0;
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t j = i + 1; j < ids.size(); ++j) {
      mx = std::max(mx, distance(ds, ids[i], ids[j]));
    }
  }
  return mx;
}

// Enumerates, in deterministic order, every way to pick `want` distinct
// members across the eligible balls (multiset of balls in ascending index,
// ascending positions within a ball). ballOk gates a ball before any member
// is taken from it; emit receives (ballIdx, pid) pairs for the selection.
struct MultisetChooser {
  const BallMembers& view;
  const std::vector<size_t>& eligible;  // indices into view.subsets, ascending
  int32_t excludePid = -1;

  std::vector<std::pair<size_t, int32_t>> picked;
  std::function<bool(size_t)> ballOk;                // checked once per ball
  std::function<void(const std::vector<std::pair<size_t, int32_t>>&)> emit;

  void run(int want) { chooseBall(0, want); }

  void chooseBall(size_t ei, int remaining) {
    if (remaining == 0) {
      emit(picked);
      return;
    }
    if (ei == eligible.size()) return;
    size_t bi = eligible[ei];
    const auto& mem = view.members[bi];
    int avail = static_cast<int>(mem.size());
    if (excludePid >= 0) {
      for (int32_t pid : mem) {
        if (pid == excludePid) {
          --avail;
          break;
        }
      }
    }
    int maxT = std::min(remaining, avail);
    if (maxT >= 1 && (!ballOk || ballOk(bi))) {
      for (int t = maxT; t >= 1; --t) {
        choosePositions(ei, 0, t, remaining - t);
      }
    }
    chooseBall(ei + 1, remaining);
  }

  // Ascending-position combinations of t members from ball eligible[ei],
  // then recurse to the next ball.
  void choosePositions(size_t ei, size_t from, int t, int remainingAfter) {
    if (t == 0) {
      chooseBall(ei + 1, remainingAfter);
      return;
    }
    size_t bi = eligible[ei];
    const auto& mem = view.members[bi];
    for (size_t k = from; k < mem.size(); ++k) {
      if (mem[k] == excludePid) continue;
      picked.emplace_back(bi, mem[k]);
      choosePositions(ei, k + 1, t - 1, remainingAfter);
      picked.pop_back();
    }
  }
};

void validatePatternArgs(int m, int lo, int hi, double tau, double eps) {
  if (m < lo || m > hi) {
    throw InputError("pattern size must be between " + std::to_string(lo) + " and " +
                     std::to_string(hi));
  }
  if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must be in (0,1]");
}

}  // namespace

void reportTrianglesForAnchor(const DurableBallStructure& dbs, int32_t p, double tau,
                              double eps, const TriangleSink& sink) {
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  if (!reachesTau(P.lifespan.start, P.lifespan.end, tau)) return;
  BallMembers view(dbs.durableBallQ(p, tau, eps));
  if (view.size() == 0) return;
  const double repThr = 1.0 + eps / 2.0;
  auto emit = [&](int32_t q, int32_t s) {
    if (s < q) std::swap(q, s);  // records carry the non-anchor pair in id order
    double end = std::min({P.lifespan.end, ds.pt(q).lifespan.end, ds.pt(s).lifespan.end});
    double mx = std::max({distance(ds, p, q), distance(ds, p, s), distance(ds, q, s)});
    sink({p, q, s, {P.lifespan.start, end}, mx});
  };
  for (size_t i = 0; i < view.size(); ++i) {
    const auto& mi = view.members[i];
    for (size_t a = 0; a < mi.size(); ++a) {
      for (size_t b = a + 1; b < mi.size(); ++b) emit(mi[a], mi[b]);
    }
    for (size_t j = i + 1; j < view.size(); ++j) {
      if (distance(ds, view.rep(i), view.rep(j)) > repThr) continue;
      for (int32_t q : mi) {
        for (int32_t s : view.members[j]) emit(q, s);
      }
    }
  }
}

void reportTriangles(const DurableBallStructure& dbs, double tau, double eps,
                     const TriangleSink& sink, int threads) {
  if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must be in (0,1]");
  forEachAnchorParallel<TriangleRecord>(
      static_cast<int32_t>(dbs.dataset().size()), threads, sink,
      [&](int32_t p, const TriangleSink& s) { reportTrianglesForAnchor(dbs, p, tau, eps, s); });
}

void reportCliquesForAnchor(const DurableBallStructure& dbs, int32_t p, int m, double tau,
                            double eps, const PatternSink& sink) {
  validatePatternArgs(m, 3, 6, tau, eps);
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  if (!reachesTau(P.lifespan.start, P.lifespan.end, tau)) return;
  BallMembers view(dbs.durableBallQ(p, tau, eps));
  if (view.size() == 0) return;
  const double repThr = 1.0 + eps / 2.0;

  std::vector<size_t> eligible(view.size());
  for (size_t i = 0; i < view.size(); ++i) eligible[i] = i;

  MultisetChooser chooser{view, eligible};
  std::vector<size_t> activeBalls;  // balls already holding picked members
  chooser.ballOk = [&](size_t bi) {
    activeBalls.clear();
    for (const auto& [b, pid] : chooser.picked) {
      if (activeBalls.empty() || activeBalls.back() != b) activeBalls.push_back(b);
    }
    for (size_t b : activeBalls) {
      if (distance(ds, view.rep(b), view.rep(bi)) > repThr) return false;
    }
    return true;
  };
  chooser.emit = [&](const std::vector<std::pair<size_t, int32_t>>& picked) {
    PatternRecord rec;
    rec.kind = 'c';
    rec.members.reserve(static_cast<size_t>(m));
    rec.members.push_back(p);
    for (const auto& [b, pid] : picked) rec.members.push_back(pid);
    std::vector<int32_t> others(rec.members.begin() + 1, rec.members.end());
    rec.lifespan = commonLifespan(ds, p, others);
    sink(rec);
  };
  chooser.run(m - 1);
}

void reportCliques(const DurableBallStructure& dbs, int m, double tau, double eps,
                   const PatternSink& sink, int threads) {
  validatePatternArgs(m, 3, 6, tau, eps);
  forEachAnchorParallel<PatternRecord>(
      static_cast<int32_t>(dbs.dataset().size()), threads, sink,
      [&](int32_t p, const PatternSink& s) { reportCliquesForAnchor(dbs, p, m, tau, eps, s); });
}

void reportPathsForAnchor(const DurableBallStructure& dbs, int32_t p, int m, double tau,
                          double eps, const PatternSink& sink) {
  validatePatternArgs(m, 2, 6, tau, eps);
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  if (!reachesTau(P.lifespan.start, P.lifespan.end, tau)) return;
  const double radius = static_cast<double>(m - 1);
  BallMembers view(dbs.durableBallQ(p, tau, eps, radius));
  if (view.size() == 0) return;
  const double repThr = 1.0 + eps / 2.0;

  std::vector<size_t> eligible(view.size());
  for (size_t i = 0; i < view.size(); ++i) eligible[i] = i;

  // A consecutive pair is admissible if it involves the anchor and the other
  // endpoint's representative is near the anchor, or two members of one ball,
  // or two balls with near representatives.
  auto edgeOk = [&](int u, int v, const std::vector<std::pair<size_t, int32_t>>& picked) {
    if (u == 0 || v == 0) {
      size_t b = picked[static_cast<size_t>((u == 0 ? v : u) - 1)].first;
      return view.repDistToAnchor(b) <= repThr;
    }
    size_t bu = picked[static_cast<size_t>(u - 1)].first;
    size_t bv = picked[static_cast<size_t>(v - 1)].first;
    if (bu == bv) return true;
    return distance(ds, view.rep(bu), view.rep(bv)) <= repThr;
  };

  MultisetChooser chooser{view, eligible};
  std::vector<int> order(static_cast<size_t>(m));
  chooser.emit = [&](const std::vector<std::pair<size_t, int32_t>>& picked) {
    // Vertex 0 is the anchor, 1..m-1 the picked members; try every ordering,
    // keeping those whose consecutive pairs are admissible, reported in the
    // direction that starts at the smaller endpoint id.
    for (int k = 0; k < m; ++k) order[static_cast<size_t>(k)] = k;
    auto idOf = [&](int v) { return v == 0 ? p : picked[static_cast<size_t>(v - 1)].second; };
    do {
      if (idOf(order.front()) >= idOf(order.back())) continue;
      bool ok = true;
      for (int k = 0; k + 1 < m && ok; ++k) {
        ok = edgeOk(order[static_cast<size_t>(k)], order[static_cast<size_t>(k + 1)], picked);
      }
      if (!ok) continue;
      PatternRecord rec;
      rec.kind = 'p';
      rec.members.reserve(static_cast<size_t>(m));
      for (int v : order) rec.members.push_back(idOf(v));
      std::vector<int32_t> others;
      for (int32_t id : rec.members) {
        if (id != p) others.push_back(id);
      }
      rec.lifespan = commonLifespan(ds, p, others);
      sink(rec);
    } while (std::next_permutation(order.begin(), order.end()));
  };
  chooser.run(m - 1);
}

void reportPaths(const DurableBallStructure& dbs, int m, double tau, double eps,
                 const PatternSink& sink, int threads) {
  validatePatternArgs(m, 2, 6, tau, eps);
  forEachAnchorParallel<PatternRecord>(
      static_cast<int32_t>(dbs.dataset().size()), threads, sink,
      [&](int32_t p, const PatternSink& s) { reportPathsForAnchor(dbs, p, m, tau, eps, s); });
}

void reportStarsForAnchor(const DurableBallStructure& dbs, int32_t p, int m, double tau,
                          double eps, const PatternSink& sink) {
  validatePatternArgs(m, 3, 6, tau, eps);
  const Dataset& ds = dbs.dataset();
  const TemporalPoint& P = ds.pt(p);
  if (!reachesTau(P.lifespan.start, P.lifespan.end, tau)) return;
  BallMembers view(dbs.durableBallQ(p, tau, eps, 2.0));
  if (view.size() == 0) return;
  const double repThr = 1.0 + eps / 2.0;

  auto emitStar = [&](int32_t center, const std::vector<int32_t>& leaves) {
    PatternRecord rec;
    rec.kind = 's';
    rec.members.reserve(static_cast<size_t>(m));
    rec.members.push_back(center);
    for (int32_t id : leaves) rec.members.push_back(id);
    std::vector<int32_t> others;
    for (int32_t id : rec.members) {
      if (id != p) others.push_back(id);
    }
    rec.lifespan = commonLifespan(ds, p, others);
    sink(rec);
  };

  // Anchor as center: leaves come from balls near the anchor.
  {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < view.size(); ++i) {
      if (view.repDistToAnchor(i) <= repThr) eligible.push_back(i);
    }
    MultisetChooser chooser{view, eligible};
    std::vector<int32_t> leaves;
    chooser.emit = [&](const std::vector<std::pair<size_t, int32_t>>& picked) {
      leaves.clear();
      for (const auto& [b, pid] : picked) leaves.push_back(pid);
      emitStar(p, leaves);
    };
    chooser.run(m - 1);
  }

  // Anchor as leaf: any candidate near the anchor can center the star; the
  // other leaves come from balls near the center's ball.
  for (size_t j = 0; j < view.size(); ++j) {
    if (view.repDistToAnchor(j) > repThr) continue;
    std::vector<size_t> eligible;
    for (size_t h = 0; h < view.size(); ++h) {
      if (distance(ds, view.rep(j), view.rep(h)) <= repThr) eligible.push_back(h);
    }
    for (int32_t q : view.members[j]) {
      MultisetChooser chooser{view, eligible};
      chooser.excludePid = q;
      std::vector<int32_t> leaves;
      chooser.emit = [&](const std::vector<std::pair<size_t, int32_t>>& picked) {
        leaves.clear();
        leaves.push_back(p);
        for (const auto& [b, pid] : picked) leaves.push_back(pid);
        emitStar(q, leaves);
      };
      chooser.run(m - 2);
    }
  }
}

void reportStars(const DurableBallStructure& dbs, int m, double tau, double eps,
                 const PatternSink& sink, int threads) {
  validatePatternArgs(m, 3, 6, tau, eps);
  forEachAnchorParallel<PatternRecord>(
      static_cast<int32_t>(dbs.dataset().size()), threads, sink,
      [&](int32_t p, const PatternSink& s) { reportStarsForAnchor(dbs, p, m, tau, eps, s); });
}

}  // namespace durable
