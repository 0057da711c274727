#pragma once

// Cover tree over a dataset's points (base 2). A node at level i separates its
// children by more than 2^i and covers them within 2^i; every subtree member
// lies within 2^(i+1) of the node's representative. Single-child chains are
// path-compressed: a stored node keeps the level at which it actually branches,
// which is also the tightest subtree radius bound. Co-located points share a
// leaf bucket. Immutable once built; a finalize pass links leaves into a chain
// so any subtree enumerates its members in O(size).

#include <limits>
#include <string>
#include <vector>

#include "durable/core.hpp"

namespace durable {

class CoverTree {
 public:
  static constexpr int kLeafLevel = std::numeric_limits<int>::min();

  struct Node {
    int32_t repId = -1;
    int level = kLeafLevel;            // branch level; kLeafLevel for leaves
    int32_t parent = -1;
    std::vector<int32_t> children;     // internal nodes only, >= 2 entries
    std::vector<int32_t> bucket;       // leaves only: co-located point ids, ascending
    int32_t leftmostLeaf = -1;         // node index of first leaf in subtree
    int32_t nextLeaf = -1;             // leaf chain (leaves only)
    int32_t leafCount = 0;             // leaves in subtree
    int32_t pointCount = 0;            // points in subtree (buckets expanded)

    bool isLeaf() const { return level == kLeafLevel; }
    double sepRadius() const { return std::ldexp(1.0, level); }
    double coverRadius() const { return std::ldexp(1.0, level + 1); }
  };

  // One canonical ball from ballReport: a whole subtree whose members all lie
  // within eps*radius/2 of the representative.
  struct Ball {
    int32_t nodeIdx = -1;
    int32_t repId = -1;
    double repDist = 0.0;  // distance from the query center to the representative
  };

  static CoverTree build(const Dataset& ds);

  const Dataset& dataset() const { return *ds_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int32_t idx) const { return nodes_[static_cast<size_t>(idx)]; }
  int32_t root() const { return root_; }
  bool empty() const { return root_ < 0; }

  // Pairwise-disjoint canonical balls whose union covers the closed ball of the
  // given radius around the center and stays inside the (1+eps)*radius ball.
  // Balls are returned sorted by representative id. eps in (0,1], radius > 0.
  std::vector<Ball> ballReport(int32_t centerId, double radius, double eps) const;
  std::vector<Ball> ballReport(const double* center, int dim, double radius, double eps) const;

  // Member enumeration via the leaf chain.
  template <typename Fn>
  void forEachMember(int32_t nodeIdx, Fn&& fn) const {
    const Node& v = nodes_[static_cast<size_t>(nodeIdx)];
    int32_t leaf = v.leftmostLeaf;
    for (int32_t k = 0; k < v.leafCount; ++k) {
      for (int32_t pid : nodes_[static_cast<size_t>(leaf)].bucket) fn(pid);
      leaf = nodes_[static_cast<size_t>(leaf)].nextLeaf;
    }
  }
  std::vector<int32_t> memberIds(int32_t nodeIdx) const;

  // Exhaustive structural checks (nesting, covering, separation on the logical
  // chain expansion, leaf-chain and count consistency). Throws std::logic_error
  // with a description on the first violation. Intended for tests; O(N^2).
  void checkInvariants() const;

  // Indented structural dump: level, rep id, separating radius, subtree size.
  std::string debugDump() const;

 private:
  double dist(int32_t a, int32_t b) const { return distance(*ds_, a, b); }

  void insertPoint(int32_t pid);
  void finalize();
  int32_t newLeaf(int32_t pid);
  void replaceChild(int32_t parent, int32_t oldChild, int32_t newChild);

  const Dataset* ds_ = nullptr;
  std::vector<Node> nodes_;
  int32_t root_ = -1;
};

}  // namespace durable
