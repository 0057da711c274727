#include "durable/cover_tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace durable {

namespace {

// Smallest integer j with d <= 2^j, for finite d > 0.
int ceilLog2(double d) {
  int e;
  double m = std::frexp(d, &e);
  return m == 0.5 ? e - 1 : e;
}

constexpr int kTopUnbounded = std::numeric_limits<int>::max();

}  // namespace

CoverTree CoverTree::build(const Dataset& ds) {
  CoverTree t;
  t.ds_ = &ds;
  t.nodes_.reserve(ds.size() * 2);
  for (int32_t pid = 0; pid < static_cast<int32_t>(ds.size()); ++pid) {
    t.insertPoint(pid);
  }
  t.finalize();
  return t;
}

int32_t CoverTree::newLeaf(int32_t pid) {
  Node n;
  n.repId = pid;
  n.level = kLeafLevel;
  n.bucket.push_back(pid);
  nodes_.push_back(std::move(n));
  return static_cast<int32_t>(nodes_.size() - 1);
}

void CoverTree::replaceChild(int32_t parent, int32_t oldChild, int32_t newChild) {
  for (int32_t& c : nodes_[static_cast<size_t>(parent)].children) {
    if (c == oldChild) {
      c = newChild;
      return;
    }
  }
}

// A new point attaches one level below its "entry level": the lowest level at
// which some existing point both persists and covers it. Searching for that
// minimum keeps global per-level separation: a violation at any lower level
// would itself be a deeper entry candidate.
void CoverTree::insertPoint(int32_t pid) {
  if (root_ < 0) {
    root_ = newLeaf(pid);
    return;
  }
  int bestS = kTopUnbounded;
  int32_t bestNode = -1;
  int bestTop = 0;
  int32_t colocated = -1;

  struct Item {
    int32_t idx;
    double d;
    int top;
  };
  std::vector<Item> stack;
  stack.push_back({root_, dist(pid, nodes_[static_cast<size_t>(root_)].repId), kTopUnbounded});
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const Node& v = nodes_[static_cast<size_t>(it.idx)];
    bool firstOccurrence =
        v.parent < 0 || nodes_[static_cast<size_t>(v.parent)].repId != v.repId;
    if (firstOccurrence) {
      if (it.d == 0.0) {
        colocated = it.idx;
        break;
      }
      int s = ceilLog2(it.d);
      if (s <= it.top && s < bestS) {
        bestS = s;
        bestNode = it.idx;
        bestTop = it.top;
      }
    }
    if (v.isLeaf()) continue;
    int childTop = v.level - 1;
    for (int32_t c : v.children) {
      const Node& cn = nodes_[static_cast<size_t>(c)];
      double dc = cn.repId == v.repId ? it.d : dist(pid, cn.repId);
      // Everything under c lies within its cover radius of its rep, so no
      // descendant can enter above ceilLog2(dc - cover); skip subtrees that
      // cannot beat the current best.
      double margin = dc - cn.coverRadius();
      int cap = std::min(childTop, bestS == kTopUnbounded ? kTopUnbounded : bestS - 1);
      if (margin <= 0.0 || ceilLog2(margin) <= cap) {
        stack.push_back({c, dc, childTop});
      }
    }
  }

  if (colocated >= 0) {
    int32_t w = colocated;
    while (!nodes_[static_cast<size_t>(w)].isLeaf()) {
      int32_t rep = nodes_[static_cast<size_t>(w)].repId;
      for (int32_t c : nodes_[static_cast<size_t>(w)].children) {
        if (nodes_[static_cast<size_t>(c)].repId == rep) {
          w = c;
          break;
        }
      }
    }
    nodes_[static_cast<size_t>(w)].bucket.push_back(pid);
    return;
  }

  // Walk the witness's chain down to the stored node whose span holds the
  // entry level, then attach the new leaf there (splitting the chain unless
  // the entry level is exactly the branch level).
  int32_t w = bestNode;
  int wTop = bestTop;
  while (!nodes_[static_cast<size_t>(w)].isLeaf() && bestS < nodes_[static_cast<size_t>(w)].level) {
    wTop = nodes_[static_cast<size_t>(w)].level - 1;
    int32_t rep = nodes_[static_cast<size_t>(w)].repId;
    for (int32_t c : nodes_[static_cast<size_t>(w)].children) {
      if (nodes_[static_cast<size_t>(c)].repId == rep) {
        w = c;
        break;
      }
    }
  }
  if (!nodes_[static_cast<size_t>(w)].isLeaf() && nodes_[static_cast<size_t>(w)].level == bestS) {
    int32_t leaf = newLeaf(pid);
    nodes_[static_cast<size_t>(leaf)].parent = w;
    nodes_[static_cast<size_t>(w)].children.push_back(leaf);
  } else {
    int32_t u = static_cast<int32_t>(nodes_.size());
    nodes_.push_back(Node{});
    int32_t leaf = newLeaf(pid);
    Node& un = nodes_[static_cast<size_t>(u)];
    Node& wn = nodes_[static_cast<size_t>(w)];
    un.repId = wn.repId;
    un.level = bestS;
    un.parent = wn.parent;
    un.children = {w, leaf};
    if (wn.parent < 0) {
      root_ = u;
    } else {
      replaceChild(wn.parent, w, u);
    }
    wn.parent = u;
    nodes_[static_cast<size_t>(leaf)].parent = u;
  }
}

void CoverTree::finalize() {
  if (root_ < 0) return;
  std::vector<std::pair<int32_t, size_t>> st;
  int32_t prevLeaf = -1;
  st.emplace_back(root_, 0);
  while (!st.empty()) {
    auto [v, k] = st.back();
    Node& n = nodes_[static_cast<size_t>(v)];
    if (n.isLeaf()) {
      n.leftmostLeaf = v;
      n.leafCount = 1;
      n.pointCount = static_cast<int32_t>(n.bucket.size());
      if (prevLeaf >= 0) nodes_[static_cast<size_t>(prevLeaf)].nextLeaf = v;
      prevLeaf = v;
      st.pop_back();
      continue;
    }
    if (k < n.children.size()) {
      ++st.back().second;
      st.emplace_back(n.children[k], 0);
    } else {
      n.leftmostLeaf = nodes_[static_cast<size_t>(n.children.front())].leftmostLeaf;
      n.leafCount = 0;
      n.pointCount = 0;
      for (int32_t c : n.children) {
        n.leafCount += nodes_[static_cast<size_t>(c)].leafCount;
        n.pointCount += nodes_[static_cast<size_t>(c)].pointCount;
      }
      st.pop_back();
    }
  }
}

std::vector<int32_t> CoverTree::memberIds(int32_t nodeIdx) const {
  std::vector<int32_t> out;
  out.reserve(static_cast<size_t>(nodes_[static_cast<size_t>(nodeIdx)].pointCount));
  forEachMember(nodeIdx, [&out](int32_t pid) { out.push_back(pid); });
  return out;
}

template <typename DistFn>
static void ballReportImpl(const std::vector<CoverTree::Node>& nodes, int32_t root,
                           double radius, double eps, const DistFn& distToCenter,
                           std::vector<CoverTree::Ball>& out) {
  if (root < 0) return;
  const double cutThr = eps * radius / 4.0;         // canonical once sepRadius fits
  const double keepThr = (1.0 + eps / 2.0) * radius;
  std::vector<int32_t> st{root};
  while (!st.empty()) {
    int32_t vi = st.back();
    st.pop_back();
    const CoverTree::Node& v = nodes[static_cast<size_t>(vi)];
    double d = distToCenter(v.repId);
    if (v.isLeaf() || v.sepRadius() <= cutThr) {
      if (d <= keepThr) out.push_back({vi, v.repId, d});
      continue;
    }
    if (d > radius + v.coverRadius()) continue;  // no member can lie within radius
    for (int32_t c : v.children) st.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const CoverTree::Ball& a, const CoverTree::Ball& b) { return a.repId < b.repId; });
}

std::vector<CoverTree::Ball> CoverTree::ballReport(int32_t centerId, double radius,
                                                   double eps) const {
  if (!(radius > 0.0) || !(eps > 0.0) || eps > 1.0) {
    throw InputError("ballReport requires radius > 0 and eps in (0,1]");
  }
  if (centerId < 0 || static_cast<size_t>(centerId) >= ds_->size()) {
    throw InputError("ballReport: center id out of range");
  }
  std::vector<Ball> out;
  ballReportImpl(nodes_, root_, radius, eps,
                 [&](int32_t repId) { return dist(centerId, repId); }, out);
  return out;
}

std::vector<CoverTree::Ball> CoverTree::ballReport(const double* center, int dim, double radius,
                                                   double eps) const {
  if (!(radius > 0.0) || !(eps > 0.0) || eps > 1.0) {
    throw InputError("ballReport requires radius > 0 and eps in (0,1]");
  }
  std::vector<Ball> out;
  ballReportImpl(nodes_, root_, radius, eps,
                 [&](int32_t repId) {
                   return distanceToCoords(ds_->pt(repId), center, dim, ds_->metric);
                 },
                 out);
  return out;
}

void CoverTree::checkInvariants() const {
  auto fail = [](const std::string& msg) { throw std::logic_error("cover tree: " + msg); };
  if (root_ < 0) {
    if (!nodes_.empty()) fail("empty tree with allocated nodes");
    return;
  }
  size_t n = nodes_.size();
  // Reachability and local structure.
  std::vector<char> seen(n, 0);
  std::vector<int32_t> st{root_};
  size_t visited = 0;
  if (nodes_[static_cast<size_t>(root_)].parent != -1) fail("root has a parent");
  while (!st.empty()) {
    int32_t vi = st.back();
    st.pop_back();
    if (seen[static_cast<size_t>(vi)]) fail("node reachable twice");
    seen[static_cast<size_t>(vi)] = 1;
    ++visited;
    const Node& v = nodes_[static_cast<size_t>(vi)];
    if (v.isLeaf()) {
      if (v.bucket.empty()) fail("leaf with empty bucket");
      if (!v.children.empty()) fail("leaf with children");
      if (v.bucket.front() != v.repId) fail("leaf rep is not the first bucket entry");
      if (!std::is_sorted(v.bucket.begin(), v.bucket.end())) fail("bucket ids not ascending");
      for (size_t i = 1; i < v.bucket.size(); ++i) {
        if (v.bucket[i] == v.bucket[i - 1]) fail("duplicate id in bucket");
      }
      for (int32_t pid : v.bucket) {
        if (distance(*ds_, pid, v.repId) != 0.0) fail("bucket member not co-located with rep");
      }
    } else {
      if (!v.bucket.empty()) fail("internal node with bucket");
      if (v.children.size() < 2) fail("internal node with fewer than two children");
      int selfChildren = 0;
      for (int32_t c : v.children) {
        const Node& cn = nodes_[static_cast<size_t>(c)];
        if (cn.parent != vi) fail("child parent backlink wrong");
        if (!cn.isLeaf() && cn.level >= v.level) fail("child branch level not below parent");
        if (cn.repId == v.repId) ++selfChildren;
        if (distance(*ds_, v.repId, cn.repId) > v.sepRadius()) {
          fail("child rep outside parent covering radius");
        }
        st.push_back(c);
      }
      if (selfChildren != 1) fail("internal node must continue its rep in exactly one child");
    }
  }
  if (visited != n) fail("unreachable nodes present");

  // Subtree member bound and count/chain consistency.
  for (size_t vi = 0; vi < n; ++vi) {
    const Node& v = nodes_[vi];
    std::vector<int32_t> members = memberIds(static_cast<int32_t>(vi));
    if (members.size() != static_cast<size_t>(v.pointCount)) fail("pointCount mismatch");
    std::vector<int32_t> expected;
    std::vector<int32_t> sub{static_cast<int32_t>(vi)};
    int32_t leaves = 0;
    while (!sub.empty()) {
      int32_t u = sub.back();
      sub.pop_back();
      const Node& un = nodes_[static_cast<size_t>(u)];
      if (un.isLeaf()) {
        ++leaves;
        expected.insert(expected.end(), un.bucket.begin(), un.bucket.end());
      }
      for (int32_t c : un.children) sub.push_back(c);
    }
    if (leaves != v.leafCount) fail("leafCount mismatch");
    std::sort(expected.begin(), expected.end());
    std::vector<int32_t> got = members;
    std::sort(got.begin(), got.end());
    if (got != expected) fail("leaf chain does not enumerate the subtree");
    if (!v.isLeaf()) {
      for (int32_t pid : members) {
        if (distance(*ds_, pid, v.repId) > v.coverRadius()) {
          fail("subtree member outside cover radius");
        }
      }
    }
  }

  // Global per-level separation over the logical chains.
  auto topOf = [&](int32_t vi) {
    const Node& v = nodes_[static_cast<size_t>(vi)];
    return v.parent < 0 ? kTopUnbounded : nodes_[static_cast<size_t>(v.parent)].level - 1;
  };
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a + 1; b < n; ++b) {
      const Node& u = nodes_[a];
      const Node& v = nodes_[b];
      int lo = std::max(u.level, v.level);  // kLeafLevel acts as -inf
      int hi = std::min(topOf(static_cast<int32_t>(a)), topOf(static_cast<int32_t>(b)));
      if (lo > hi) continue;
      if (u.repId == v.repId) fail("one rep present twice at a level");
      double d = distance(*ds_, u.repId, v.repId);
      if (!(d > std::ldexp(1.0, hi))) fail("separation violated");
    }
  }
}

std::string CoverTree::debugDump() const {
  std::ostringstream oss;
  if (root_ < 0) {
    oss << "(empty)\n";
    return oss.str();
  }
  std::vector<std::pair<int32_t, int>> st{{root_, 0}};
  while (!st.empty()) {
    auto [vi, depth] = st.back();
    st.pop_back();
    const Node& v = nodes_[static_cast<size_t>(vi)];
    for (int i = 0; i < depth; ++i) oss << "  ";
    if (v.isLeaf()) {
      oss << "leaf rep=" << v.repId << " bucket=" << v.bucket.size() << "\n";
    } else {
      oss << "node rep=" << v.repId << " level=" << v.level << " sep=" << v.sepRadius()
          << " pts=" << v.pointCount << "\n";
    }
    for (auto it = v.children.rbegin(); it != v.children.rend(); ++it) {
      st.emplace_back(*it, depth + 1);
    }
  }
  return oss.str();
}

}  // namespace durable
