// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shortest-augmenting-path (Edmonds-Karp) max flow on real capacities.

#ifndef SEQSUB_NUMERICS_MAX_FLOW_H_
#define SEQSUB_NUMERICS_MAX_FLOW_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "seqsub/error.h"

namespace seqsub {

struct FlowEdge {
  int from;
  int to;
  double capacity;
};

class FlowNetwork {
 public:
  FlowNetwork(int num_nodes, int source, int sink)
      : num_nodes_(num_nodes), source_(source), sink_(sink) {
    if (num_nodes < 2 || source < 0 || sink < 0 || source >= num_nodes ||
        sink >= num_nodes || source == sink) {
      throw Error(ErrorCode::kInvalidArgument, "numerics",
                  "flow network needs distinct source and sink nodes");
    }
  }

  int AddEdge(int from, int to, double capacity) {
    if (from < 0 || to < 0 || from >= num_nodes_ || to >= num_nodes_) {
      throw Error(ErrorCode::kInvalidArgument, "numerics",
                  "edge endpoint out of range");
    }
    if (!(capacity >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "numerics",
                  "edge capacity must be nonnegative");
    }
    edges_.push_back({from, to, capacity});
    return static_cast<int>(edges_.size()) - 1;
  }

  int num_nodes() const { return num_nodes_; }
  int source() const { return source_; }
  int sink() const { return sink_; }
  const std::vector<FlowEdge>& edges() const { return edges_; }

 private:
  int num_nodes_;
  int source_;
  int sink_;
  std::vector<FlowEdge> edges_;
};

struct MaxFlowResult {
  double value = 0.0;
  std::vector<double> edge_flow;  // parallel to FlowNetwork::edges()
  // Nodes reachable from the source in the final residual graph.
  std::vector<bool> source_side;
  double cut_capacity = 0.0;
};

inline constexpr double kFlowSaturationTolerance = 1e-12;

inline MaxFlowResult MaxFlow(const FlowNetwork& net) {
  const int n = net.num_nodes();
  const auto& edges = net.edges();
  const int m = static_cast<int>(edges.size());
  // Arc 2e is edge e forward, 2e+1 its reverse.
  std::vector<double> residual(2 * m);
  std::vector<std::vector<int>> adj(n);
  for (int e = 0; e < m; ++e) {
    residual[2 * e] = edges[e].capacity;
    residual[2 * e + 1] = 0.0;
    adj[edges[e].from].push_back(2 * e);
    adj[edges[e].to].push_back(2 * e + 1);
  }
  auto head = [&](int arc) {
    return arc % 2 == 0 ? edges[arc / 2].to : edges[arc / 2].from;
  };

  MaxFlowResult result;
  std::vector<int> parent_arc(n);
  while (true) {
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(net.source());
    seen[net.source()] = true;
    while (!q.empty() && !seen[net.sink()]) {
      const int u = q.front();
      q.pop();
      for (int arc : adj[u]) {
        const int v = head(arc);
        if (!seen[v] && residual[arc] > kFlowSaturationTolerance) {
          seen[v] = true;
          parent_arc[v] = arc;
          q.push(v);
        }
      }
    }
    if (!seen[net.sink()]) {
      result.source_side = std::move(seen);
      break;
    }
    double push = std::numeric_limits<double>::infinity();
    for (int v = net.sink(); v != net.source(); v = head(parent_arc[v] ^ 1)) {
      push = std::min(push, residual[parent_arc[v]]);
    }
    for (int v = net.sink(); v != net.source(); v = head(parent_arc[v] ^ 1)) {
      residual[parent_arc[v]] -= push;
      residual[parent_arc[v] ^ 1] += push;
    }
    result.value += push;
  }

  result.edge_flow.resize(m);
  std::vector<double> balance(n, 0.0);
  for (int e = 0; e < m; ++e) {
    const double flow = std::clamp(residual[2 * e + 1], 0.0, edges[e].capacity);
    result.edge_flow[e] = flow;
    balance[edges[e].from] -= flow;
    balance[edges[e].to] += flow;
    if (result.source_side[edges[e].from] && !result.source_side[edges[e].to]) {
      result.cut_capacity += edges[e].capacity;
    }
  }
  const double tol = 1e-9 * std::max(1.0, result.value);
  for (int v = 0; v < n; ++v) {
    if (v == net.source() || v == net.sink()) continue;
    if (std::abs(balance[v]) > tol) {
      throw Error(ErrorCode::kInternal, "numerics",
                  "flow conservation violated at node " + std::to_string(v));
    }
  }
  if (std::abs(result.value - result.cut_capacity) > tol) {
    throw Error(ErrorCode::kInternal, "numerics",
                "max-flow value differs from min-cut capacity");
  }
  return result;
}

}  // namespace seqsub

#endif  // SEQSUB_NUMERICS_MAX_FLOW_H_
