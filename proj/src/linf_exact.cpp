#include "durable/linf_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "durable/parallel.hpp"

namespace durable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DurableRangeStructure DurableRangeStructure::build(const Dataset& ds) {
  if (ds.metric.kind != MetricKind::LInf) {
    throw InputError("exact reporting requires the l_inf metric");
  }
  if (ds.dim < 1 || ds.dim > 4) {
    throw InputError("exact reporting supports dimensions 1 through 4");
  }
  DurableRangeStructure drs;
  drs.ds_ = &ds;
  drs.dim_ = ds.dim;
  if (ds.size() > 0) {
    std::vector<int32_t> ids(ds.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int32_t>(i);
    drs.root_ = drs.buildAxis(ids, 0);
  }
  return drs;
}

int32_t DurableRangeStructure::buildAxis(std::vector<int32_t>& ids, int axis) {
  std::sort(ids.begin(), ids.end(), [&](int32_t a, int32_t b) {
    double ca = ds_->pt(a).coords[static_cast<size_t>(axis)];
    double cb = ds_->pt(b).coords[static_cast<size_t>(axis)];
    if (ca != cb) return ca < cb;
    return a < b;
  });
  return buildRange(ids, 0, ids.size(), axis);
}

int32_t DurableRangeStructure::buildRange(const std::vector<int32_t>& ids, size_t lo,
                                          size_t hi, int axis) {
  int32_t idx = static_cast<int32_t>(nodes_.size());
  nodes_.emplace_back();
  double minKey = ds_->pt(ids[lo]).coords[static_cast<size_t>(axis)];
  double maxKey = ds_->pt(ids[hi - 1]).coords[static_cast<size_t>(axis)];
  int32_t left = -1, right = -1, next = -1;
  if (hi - lo >= 2) {
    size_t mid = lo + (hi - lo) / 2;
    left = buildRange(ids, lo, mid, axis);
    right = buildRange(ids, mid, hi, axis);
  }
  if (axis + 1 < dim_) {
    std::vector<int32_t> sub(ids.begin() + static_cast<ptrdiff_t>(lo),
                             ids.begin() + static_cast<ptrdiff_t>(hi));
    next = buildAxis(sub, axis + 1);
  }
  RangeNode& node = nodes_[static_cast<size_t>(idx)];
  node.minKey = minKey;
  node.maxKey = maxKey;
  node.left = left;
  node.right = right;
  node.next = next;
  if (axis + 1 == dim_) {
    std::vector<IntervalEntry> entries;
    entries.reserve(hi - lo);
    for (size_t k = lo; k < hi; ++k) {
      const TemporalPoint& pt = ds_->pt(ids[k]);
      entries.push_back({pt.lifespan.start, pt.lifespan.end, pt.id});
    }
    node.index = IntervalIndex::build(entries, /*withAggregates=*/false);
  }
  return idx;
}

template <typename Fn>
void DurableRangeStructure::forEachCanonical(int32_t root, int axis, const Box& box,
                                             const Fn& fn) const {
  if (root < 0) return;
  const double lo = box.lo[static_cast<size_t>(axis)];
  const double hi = box.hi[static_cast<size_t>(axis)];
  const bool loC = box.loClosed[static_cast<size_t>(axis)];
  const bool hiC = box.hiClosed[static_cast<size_t>(axis)];
  auto aboveLo = [&](double v) { return loC ? v >= lo : v > lo; };
  auto belowHi = [&](double v) { return hiC ? v <= hi : v < hi; };
  // Iterative stack; a node is emitted when its whole key range fits.
  std::vector<int32_t> stack{root};
  while (!stack.empty()) {
    const RangeNode& node = nodes_[static_cast<size_t>(stack.back())];
    int32_t at = stack.back();
    stack.pop_back();
    if (!aboveLo(node.maxKey) || !belowHi(node.minKey)) continue;
    if (aboveLo(node.minKey) && belowHi(node.maxKey)) {
      fn(at);
      continue;
    }
    // A leaf's range is a single key, always fully in or out.
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
}

std::vector<int32_t> DurableRangeStructure::durableRangeQuery(int32_t p, const Box& box,
                                                              double tau) const {
  if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
  if (box.dim != dim_) throw InputError("box dimension mismatch");
  const TemporalPoint& P = ds_->pt(p);
  StartKey key{P.lifespan.start, P.id};
  double endLo = P.lifespan.start + tau;
  std::vector<int32_t> out;
  std::vector<CanonicalRange> ranges;
  // Recursion over axes: canonical nodes on axis a descend into their
  // next-axis tree; on the last axis the interval index filters by time.
  auto descend = [&](auto&& self, int32_t root, int axis) -> void {
    forEachCanonical(root, axis, box, [&](int32_t at) {
      const RangeNode& node = nodes_[static_cast<size_t>(at)];
      if (axis + 1 < dim_) {
        self(self, node.next, axis + 1);
        return;
      }
      ranges.clear();
      node.index.durableCandidates(key, endLo, kInf, ranges);
      for (const CanonicalRange& cr : ranges) {
        for (uint32_t k = 0; k < cr.count(); ++k) out.push_back(cr.pidAt(k));
      }
    });
  };
  descend(descend, root_, 0);
  std::sort(out.begin(), out.end());
  return out;
}

size_t DurableRangeStructure::countRangeQuery(int32_t p, const Box& box, double tau) const {
  if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
  if (box.dim != dim_) throw InputError("box dimension mismatch");
  const TemporalPoint& P = ds_->pt(p);
  StartKey key{P.lifespan.start, P.id};
  double endLo = P.lifespan.start + tau;
  size_t total = 0;
  auto descend = [&](auto&& self, int32_t root, int axis) -> void {
    forEachCanonical(root, axis, box, [&](int32_t at) {
      const RangeNode& node = nodes_[static_cast<size_t>(at)];
      if (axis + 1 < dim_) {
        self(self, node.next, axis + 1);
        return;
      }
      total += node.index.countCandidates(key, endLo, kInf);
    });
  };
  descend(descend, root_, 0);
  return total;
}

namespace {

// Intersection of two boxes; empty unless every axis keeps a nonempty
// (possibly degenerate-closed) range.
bool intersectBox(const Box& a, const Box& b, Box& out) {
  out.dim = a.dim;
  for (int ax = 0; ax < a.dim; ++ax) {
    size_t i = static_cast<size_t>(ax);
    if (a.lo[i] > b.lo[i] || (a.lo[i] == b.lo[i] && !a.loClosed[i])) {
      out.lo[i] = a.lo[i];
      out.loClosed[i] = a.loClosed[i];
      if (a.lo[i] == b.lo[i] && !b.loClosed[i]) out.loClosed[i] = false;
    } else {
      out.lo[i] = b.lo[i];
      out.loClosed[i] = b.loClosed[i];
      if (a.lo[i] == b.lo[i] && !a.loClosed[i]) out.loClosed[i] = false;
    }
    if (a.hi[i] < b.hi[i] || (a.hi[i] == b.hi[i] && !a.hiClosed[i])) {
      out.hi[i] = a.hi[i];
      out.hiClosed[i] = a.hiClosed[i];
      if (a.hi[i] == b.hi[i] && !b.hiClosed[i]) out.hiClosed[i] = false;
    } else {
      out.hi[i] = b.hi[i];
      out.hiClosed[i] = b.hiClosed[i];
      if (a.hi[i] == b.hi[i] && !a.hiClosed[i]) out.hiClosed[i] = false;
    }
    if (out.lo[i] > out.hi[i]) return false;
    if (out.lo[i] == out.hi[i] && !(out.loClosed[i] && out.hiClosed[i])) return false;
  }
  return true;
}

}  // namespace

void reportTrianglesExactLinfForAnchor(const DurableRangeStructure& drs, int32_t p,
                                       double tau, const TriangleSink& sink) {
  const Dataset& ds = drs.dataset();
  const TemporalPoint& P = ds.pt(p);
  if (!reachesTau(P.lifespan.start, P.lifespan.end, tau)) return;
  const int dim = ds.dim;
  // 2^d unit squares tiling the unit cube around the anchor: per axis either
  // [c-1, c) or [c, c+1], so squares are disjoint and each has diameter <= 1.
  const int nSquares = 1 << dim;
  std::vector<Box> squares(static_cast<size_t>(nSquares));
  for (int mask = 0; mask < nSquares; ++mask) {
    Box& sq = squares[static_cast<size_t>(mask)];
    sq.dim = dim;
    for (int a = 0; a < dim; ++a) {
      size_t i = static_cast<size_t>(a);
      double c = P.coords[i];
      if (mask & (1 << a)) {
        sq.lo[i] = c;
        sq.hi[i] = c + 1.0;
        sq.loClosed[i] = true;
        sq.hiClosed[i] = true;
      } else {
        sq.lo[i] = c - 1.0;
        sq.hi[i] = c;
        sq.loClosed[i] = true;
        sq.hiClosed[i] = false;
      }
    }
  }
  std::vector<std::vector<int32_t>> inSquare(static_cast<size_t>(nSquares));
  for (int mask = 0; mask < nSquares; ++mask) {
    inSquare[static_cast<size_t>(mask)] =
        drs.durableRangeQuery(p, squares[static_cast<size_t>(mask)], tau);
  }
  auto emit = [&](int32_t q, int32_t s) {
    if (s < q) std::swap(q, s);  // records carry the non-anchor pair in id order
    double end = std::min({P.lifespan.end, ds.pt(q).lifespan.end, ds.pt(s).lifespan.end});
    double mx = std::max({distance(ds, p, q), distance(ds, p, s), distance(ds, q, s)});
    sink({p, q, s, {P.lifespan.start, end}, mx});
  };
  for (int mj = 0; mj < nSquares; ++mj) {
    const auto& qs = inSquare[static_cast<size_t>(mj)];
    // Same square: diameter <= 1, every ordered pair is a triangle.
    for (size_t a = 0; a < qs.size(); ++a) {
      for (size_t b = a + 1; b < qs.size(); ++b) emit(qs[a], qs[b]);
    }
    for (int mk = mj + 1; mk < nSquares; ++mk) {
      for (int32_t q : qs) {
        // Cross square: restrict the far square to the unit cube around q.
        Box cube;
        cube.dim = dim;
        const TemporalPoint& Q = ds.pt(q);
        for (int a = 0; a < dim; ++a) {
          size_t i = static_cast<size_t>(a);
          cube.lo[i] = Q.coords[i] - 1.0;
          cube.hi[i] = Q.coords[i] + 1.0;
          cube.loClosed[i] = true;
          cube.hiClosed[i] = true;
        }
        Box both;
        if (!intersectBox(squares[static_cast<size_t>(mk)], cube, both)) continue;
        for (int32_t s : drs.durableRangeQuery(p, both, tau)) emit(q, s);
      }
    }
  }
}

void reportTrianglesExactLinf(const DurableRangeStructure& drs, double tau,
                              const TriangleSink& sink, int threads) {
  if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
  forEachAnchorParallel<TriangleRecord>(
      static_cast<int32_t>(drs.dataset().size()), threads, sink,
      [&](int32_t p, const TriangleSink& s) {
        reportTrianglesExactLinfForAnchor(drs, p, tau, s);
      });
}

}  // namespace durable
