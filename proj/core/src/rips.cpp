#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <unordered_map>

#include "topcap/error.hpp"
#include "topcap/persistence.hpp"
#include "topcap/union_find.hpp"

namespace topcap {
namespace {

using Index = std::uint64_t;

// C(v, k) for k <= 3, v <= n.
class BinomialTable {
 public:
  explicit BinomialTable(std::size_t n) : table_(4 * (n + 1), 0) {
    for (std::size_t v = 0; v <= n; ++v) {
      table_[v * 4 + 0] = 1;
      for (std::size_t k = 1; k <= 3 && k <= v; ++k)
        table_[v * 4 + k] = table_[(v - 1) * 4 + k - 1] + (k <= v - 1 ? table_[(v - 1) * 4 + k] : 0);
    }
  }
  Index operator()(std::size_t v, std::size_t k) const noexcept { return table_[v * 4 + k]; }

 private:
  std::vector<Index> table_;
};

// Triangles are ordered by diameter, ties going to the larger combinatorial
// index. Scanning cofaces by descending index then lets the search stop at the
// first coface whose diameter equals the edge's own.
struct Entry {
  double diam;
  Index index;
  friend bool operator==(const Entry&, const Entry&) = default;
};

struct EntryBefore {
  bool operator()(const Entry& a, const Entry& b) const noexcept {
    return a.diam < b.diam || (a.diam == b.diam && a.index > b.index);
  }
};

struct Edge {
  double diam;
  Index index;
  std::uint32_t i;  // i > j
  std::uint32_t j;
};

// Vertices of a triangle sorted descending, for the combinatorial number system.
Index triangle_index(const BinomialTable& binom, std::size_t a, std::size_t b, std::size_t c) {
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  return binom(a, 3) + binom(b, 2) + c;
}

class CoboundaryReducer {
 public:
  CoboundaryReducer(const DistanceMatrix& dmat, double threshold, const BinomialTable& binom)
      : dmat_(dmat), threshold_(threshold), binom_(binom) {}

  // Earliest triangle of the coboundary of `e`, or nullopt if it is empty.
  std::optional<Entry> first_coface(const Edge& e) const {
    const auto ri = dmat_.row(e.i);
    const auto rj = dmat_.row(e.j);
    double best = kInfinity;
    std::size_t best_k = 0;
    bool found = false;
    // Triangle index decreases strictly with k for a fixed edge.
    for (std::size_t k = dmat_.size(); k-- > 0;) {
      if (k == e.i || k == e.j) continue;
      const double diam = std::max(e.diam, std::max(ri[k], rj[k]));
      if (diam > threshold_ || diam >= best) continue;
      best = diam;
      best_k = k;
      found = true;
      if (diam == e.diam) break;
    }
    if (!found) return std::nullopt;
    return Entry{best, triangle_index(binom_, e.i, e.j, best_k)};
  }

  template <class Heap>
  void push_coboundary(const Edge& e, Heap& heap) const {
    const auto ri = dmat_.row(e.i);
    const auto rj = dmat_.row(e.j);
    const std::size_t n = dmat_.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (k == e.i || k == e.j) continue;
      const double diam = std::max(e.diam, std::max(ri[k], rj[k]));
      if (diam > threshold_) continue;
      heap.push(Entry{diam, triangle_index(binom_, e.i, e.j, k)});
    }
  }

 private:
  const DistanceMatrix& dmat_;
  double threshold_;
  const BinomialTable& binom_;
};

// Min-heap in filtration order.
struct EntryAfter {
  bool operator()(const Entry& a, const Entry& b) const noexcept { return EntryBefore{}(b, a); }
};
using WorkingColumn = std::priority_queue<Entry, std::vector<Entry>, EntryAfter>;

// Pops entries that cancel in pairs over Z/2 and returns the surviving
// minimum, leaving it in the heap.
std::optional<Entry> pivot_of(WorkingColumn& column) {
  while (!column.empty()) {
    const Entry top = column.top();
    column.pop();
    if (!column.empty() && column.top() == top) {
      column.pop();
      continue;
    }
    column.push(top);
    return top;
  }
  return std::nullopt;
}

}  // namespace

std::vector<PersistenceDiagram> rips_persistence(const DistanceMatrix& dmat, const RipsOptions& opts) {
  const std::size_t n = dmat.size();
  if (n == 0) throw EmptyInput("rips_persistence: no points");
  if (opts.max_dim < 0 || opts.max_dim > 1) throw InvalidArgument("max_dim must be 0 or 1");
  if (opts.threshold && !(*opts.threshold > 0.0))
    throw InvalidArgument("filtration threshold must be positive");
  if (n > (std::size_t{1} << 20)) throw TooLarge("rips_persistence: too many points");
  const double threshold = opts.threshold ? *opts.threshold : enclosing_radius(dmat);

  const BinomialTable binom(n);

  std::vector<Edge> edges;
  for (std::uint32_t i = 1; i < n; ++i) {
    const auto row = dmat.row(i);
    for (std::uint32_t j = 0; j < i; ++j)
      if (row[j] <= threshold) edges.push_back(Edge{row[j], binom(i, 2) + j, i, j});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.diam < b.diam || (a.diam == b.diam && a.index < b.index);
  });

  std::vector<PersistenceDiagram> result;
  PersistenceDiagram dim0{0, {}};
  std::vector<bool> merges(edges.size(), false);
  {
    UnionFind components(n);
    std::size_t remaining = n;
    for (std::size_t p = 0; p < edges.size(); ++p) {
      if (!components.unite(edges[p].i, edges[p].j)) continue;
      merges[p] = true;
      --remaining;
      if (edges[p].diam > 0.0) dim0.points.push_back({0.0, edges[p].diam});
    }
    for (std::size_t c = 0; c < remaining; ++c) dim0.points.push_back({0.0, kInfinity});
  }
  dim0.canonicalize();
  result.push_back(std::move(dim0));
  if (opts.max_dim == 0) return result;

  // Columns: non-merging edges, latest first. Merging edges are cleared: their
  // cohomology columns would reduce to zero.
  std::vector<Edge> columns;
  for (std::size_t p = edges.size(); p-- > 0;)
    if (!merges[p]) columns.push_back(edges[p]);
  edges.clear();
  edges.shrink_to_fit();

  const CoboundaryReducer reducer(dmat, threshold, binom);

  // Pivot triangle -> reducing column, plus the column's reduction chain
  // (the set of original coboundaries summed into it) when nontrivial.
  struct Owner {
    std::uint32_t column;
    std::uint32_t chain;  // kTrivialChain: just the column itself
  };
  constexpr std::uint32_t kTrivialChain = ~std::uint32_t{0};
  std::unordered_map<Index, Owner> owners;
  owners.reserve(columns.size());
  std::vector<std::vector<std::uint32_t>> chains;

  PersistenceDiagram dim1{1, {}};
  auto record = [&](double birth, double death) {
    if (death > birth) dim1.points.push_back({birth, death});
  };

  std::vector<std::uint32_t> chain;
  for (std::uint32_t c = 0; c < columns.size(); ++c) {
    const Edge& edge = columns[c];
    const auto first = reducer.first_coface(edge);
    if (!first) {
      record(edge.diam, kInfinity);
      continue;
    }
    if (!owners.count(first->index)) {
      owners.emplace(first->index, Owner{c, kTrivialChain});
      record(edge.diam, first->diam);
      continue;
    }

    WorkingColumn working;
    reducer.push_coboundary(edge, working);
    chain.assign(1, c);
    std::optional<Entry> pivot;
    while ((pivot = pivot_of(working))) {
      const auto it = owners.find(pivot->index);
      if (it == owners.end()) break;
      const Owner owner = it->second;
      if (owner.chain == kTrivialChain) {
        reducer.push_coboundary(columns[owner.column], working);
        chain.push_back(owner.column);
      } else {
        for (std::uint32_t k : chains[owner.chain]) reducer.push_coboundary(columns[k], working);
        chain.insert(chain.end(), chains[owner.chain].begin(), chains[owner.chain].end());
      }
    }
    if (!pivot) {
      record(edge.diam, kInfinity);
      continue;
    }
    // Reduce the chain mod 2.
    std::sort(chain.begin(), chain.end());
    std::vector<std::uint32_t> reduced;
    for (std::size_t k = 0; k < chain.size();) {
      std::size_t run = k;
      while (run < chain.size() && chain[run] == chain[k]) ++run;
      if ((run - k) % 2 == 1) reduced.push_back(chain[k]);
      k = run;
    }
    owners.emplace(pivot->index, Owner{c, static_cast<std::uint32_t>(chains.size())});
    chains.push_back(std::move(reduced));
    record(edge.diam, pivot->diam);
  }
  dim1.canonicalize();
  result.push_back(std::move(dim1));
  return result;
}

}  // namespace topcap
