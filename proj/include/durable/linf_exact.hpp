#pragma once

// Exact durable triangles under the l_inf metric in dimension <= 4. A
// multi-level range tree answers anchored orthogonal range queries with
// durability filtering; the unit cube around the anchor is split into 2^d
// unit squares so that cross-square pairs are certified by a second query.

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "durable/core.hpp"
#include "durable/interval_index.hpp"
#include "durable/report.hpp"

namespace durable {

// Axis-aligned box with per-axis closedness flags.
struct Box {
  int dim = 0;
  std::array<double, 4> lo{}, hi{};
  std::array<bool, 4> loClosed{}, hiClosed{};

  bool contains(const std::vector<double>& c) const {
    for (int a = 0; a < dim; ++a) {
      if (loClosed[a] ? (c[a] < lo[a]) : (c[a] <= lo[a])) return false;
      if (hiClosed[a] ? (c[a] > hi[a]) : (c[a] >= hi[a])) return false;
    }
    return true;
  }
};

class DurableRangeStructure {
 public:
  // Requires an l_inf dataset with dim <= 4.
  static DurableRangeStructure build(const Dataset& ds);

  const Dataset& dataset() const { return *ds_; }

  // Ids in `box` that precede p in the (start,id) order and whose end reaches
  // I_p^- + tau. Exact (no relaxation).
  std::vector<int32_t> durableRangeQuery(int32_t p, const Box& box, double tau) const;
  size_t countRangeQuery(int32_t p, const Box& box, double tau) const;

  size_t nodeCount() const { return nodes_.size(); }

 private:
  struct RangeNode {
    int32_t left = -1, right = -1;
    double minKey = 0, maxKey = 0;  // key range covered by the subtree
    int32_t next = -1;        // root of the next-axis tree over this subtree
    IntervalIndex index;      // last axis only
  };

  int32_t buildAxis(std::vector<int32_t>& ids, int axis);
  int32_t buildRange(const std::vector<int32_t>& ids, size_t lo, size_t hi, int axis);
  template <typename Fn>
  void forEachCanonical(int32_t root, int axis, const Box& box, const Fn& fn) const;

  const Dataset* ds_ = nullptr;
  int dim_ = 0;
  std::vector<RangeNode> nodes_;
  int32_t root_ = -1;
};

// Exactly the tau-durable triangles of an l_inf dataset (no relaxation).
void reportTrianglesExactLinf(const DurableRangeStructure& drs, double tau,
                              const TriangleSink& sink, int threads = 1);
void reportTrianglesExactLinfForAnchor(const DurableRangeStructure& drs, int32_t p,
                                       double tau, const TriangleSink& sink);

}  // namespace durable
