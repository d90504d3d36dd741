//! Dinic's max-flow on integer capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        if cap <= 0 || from == to {
            return;
        }
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0 });
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        let nodes = self.adj.len();
        let mut total = 0i64;
        let mut level = vec![-1i32; nodes];
        let mut next = vec![0usize; nodes];
        while self.bfs(source, sink, &mut level) {
            next.iter_mut().for_each(|v| *v = 0);
            loop {
                let pushed = self.dfs(source, sink, i64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    fn bfs(&self, source: usize, sink: usize, level: &mut [i32]) -> bool {
        level.iter_mut().for_each(|l| *l = -1);
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && level[to] < 0 {
                    level[to] = level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
        level[sink] >= 0
    }

    // Recursion depth is bounded by the BFS level of the sink (< node count).
    fn dfs(&mut self, u: usize, sink: usize, limit: i64, level: &[i32], next: &mut [usize]) -> i64 {
        if u == sink {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let Edge { to, cap } = self.edges[e];
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.dfs(to, sink, limit.min(cap), level, next);
                if pushed > 0 {
                    self.edges[e].cap -= pushed;
                    self.edges[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }
}
