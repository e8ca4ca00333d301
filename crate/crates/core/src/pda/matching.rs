//! Capacitated bipartite matching via Dinic's max-flow.

use std::collections::VecDeque;

struct Arc {
    to: usize,
    cap: u64,
}

struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<i64>,
    next: Vec<usize>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
            level: vec![-1; nodes],
            next: vec![0; nodes],
        }
    }

    /// Returns the index of the forward arc; its residual twin is `index ^ 1`.
    fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.adj[from].push(id);
        self.arcs.push(Arc { to: from, cap: 0 });
        self.adj[to].push(id + 1);
        id
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let arc = &self.arcs[id];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[sink] >= 0
    }

    fn dfs(&mut self, u: usize, sink: usize, pushed: u64) -> u64 {
        if u == sink {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let id = self.adj[u][self.next[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, sink, pushed.min(cap));
                if got > 0 {
                    self.arcs[id].cap -= got;
                    self.arcs[id ^ 1].cap += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut total = 0;
        while self.bfs(source, sink) {
            self.next.iter_mut().for_each(|n| *n = 0);
            loop {
                let pushed = self.dfs(source, sink, u64::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}

/// Maximum flow from left vertices (capacity `left_caps[i]`) to right
/// vertices (capacity `right_caps[j]`) along `edges`, each edge carrying at
/// most `edge_cap`. Returns the flow on every edge (in input order) and the
/// total. Arcs are explored in input order, so the result is deterministic.
pub fn max_flow_assignment(
    left_caps: &[u64],
    right_caps: &[u64],
    edges: &[(usize, usize)],
    edge_cap: u64,
) -> (Vec<u64>, u64) {
    let nl = left_caps.len();
    let nr = right_caps.len();
    let source = 0;
    let sink = nl + nr + 1;
    let mut net = FlowNetwork::new(nl + nr + 2);
    for (i, &cap) in left_caps.iter().enumerate() {
        net.add_arc(source, 1 + i, cap);
    }
    let edge_ids: Vec<usize> = edges
        .iter()
        .map(|&(l, r)| net.add_arc(1 + l, 1 + nl + r, edge_cap))
        .collect();
    for (j, &cap) in right_caps.iter().enumerate() {
        net.add_arc(1 + nl + j, sink, cap);
    }
    let total = net.max_flow(source, sink);
    let flows = edge_ids.iter().map(|&id| net.arcs[id ^ 1].cap).collect();
    (flows, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_matching_on_cycle() {
        // 3×3 with each left vertex adjacent to two right vertices
        let edges = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)];
        let (flows, total) = max_flow_assignment(&[1, 1, 1], &[1, 1, 1], &edges, 1);
        assert_eq!(total, 3);
        for v in 0..3 {
            let left: u64 = edges.iter().zip(&flows).filter(|((l, _), _)| *l == v).map(|(_, f)| f).sum();
            let right: u64 = edges.iter().zip(&flows).filter(|((_, r), _)| *r == v).map(|(_, f)| f).sum();
            assert_eq!((left, right), (1, 1));
        }
    }

    #[test]
    fn hall_violation_limits_flow() {
        // two left vertices both only adjacent to right vertex 0
        let (_, total) = max_flow_assignment(&[1, 1], &[1, 1], &[(0, 0), (1, 0)], 1);
        assert_eq!(total, 1);
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy 0→0 blocks 1; the flow must reroute 0→1
        let edges = [(0, 0), (0, 1), (1, 0)];
        let (flows, total) = max_flow_assignment(&[1, 1], &[1, 1], &edges, 1);
        assert_eq!(total, 2);
        assert_eq!(flows, vec![0, 1, 1]);
    }

    #[test]
    fn capacitated_b_matching() {
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let (flows, total) = max_flow_assignment(&[4, 2], &[3, 3], &edges, 3);
        assert_eq!(total, 6);
        assert_eq!(flows.iter().sum::<u64>(), 6);
    }
}
