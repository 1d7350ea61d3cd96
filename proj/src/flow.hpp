#pragma once

#include <algorithm>
#include <vector>

namespace linkage::detail {

// Augmenting-path max flow for small integral capacities. Adjacency is kept
// in insertion order, so BFS and decomposition are deterministic.
class FlowNetwork {
 public:
  struct Edge {
    int to;
    int cap;
    int flow;
  };

  explicit FlowNetwork(int nodes) : adj_(nodes) {}

  int nodes() const { return static_cast<int>(adj_.size()); }

  int add_edge(int from, int to, int cap) {
    int id = static_cast<int>(edges_.size());
    edges_.push_back({to, cap, 0});
    edges_.push_back({from, 0, 0});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  void reset() {
    for (auto& e : edges_) e.flow = 0;
  }

  const Edge& edge(int id) const { return edges_[id]; }
  const std::vector<int>& adjacent(int node) const { return adj_[node]; }

  // Shortest augmenting paths, one unit each, until `limit` or saturation.
  int max_flow(int s, int t, int limit) {
    int total = 0;
    std::vector<int> parent_edge(adj_.size());
    std::vector<int> queue;
    queue.reserve(adj_.size());
    while (total < limit) {
      std::fill(parent_edge.begin(), parent_edge.end(), -1);
      queue.clear();
      queue.push_back(s);
      parent_edge[s] = -2;
      bool found = false;
      for (std::size_t head = 0; head < queue.size() && !found; ++head) {
        int u = queue[head];
        for (int id : adj_[u]) {
          const Edge& e = edges_[id];
          if (e.cap - e.flow > 0 && parent_edge[e.to] == -1) {
            parent_edge[e.to] = id;
            if (e.to == t) {
              found = true;
              break;
            }
            queue.push_back(e.to);
          }
        }
      }
      if (!found) break;
      for (int v = t; v != s;) {
        int id = parent_edge[v];
        edges_[id].flow += 1;
        edges_[id ^ 1].flow -= 1;
        v = edges_[id ^ 1].to;
      }
      ++total;
    }
    return total;
  }

  // Nodes reachable from s in the residual network.
  std::vector<char> residual_reach(int s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int id : adj_[u]) {
        const Edge& e = edges_[id];
        if (e.cap - e.flow > 0 && !seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace linkage::detail
