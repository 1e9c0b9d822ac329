//! Dinic max-flow and the maximum-weight closure built on it.

use std::collections::VecDeque;

const INF: i64 = i64::MAX / 4;

struct Arc {
    to: usize,
    cap: i64,
}

pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> FlowNetwork {
        FlowNetwork { arcs: Vec::new(), out: vec![Vec::new(); nodes], level: vec![0; nodes], cursor: vec![0; nodes] }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.out[u] {
                let v = self.arcs[a].to;
                if self.arcs[a].cap > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.cursor[u] < self.out[u].len() {
            let a = self.out[u][self.cursor[u]];
            let v = self.arcs[a].to;
            if self.arcs[a].cap > 0 && self.level[v] == self.level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.arcs[a].cap));
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// After `max_flow`, the nodes that cannot reach `t` in the residual graph.
    /// This is the largest source side among all minimum cuts.
    pub fn cannot_reach(&self, t: usize) -> Vec<bool> {
        let n = self.out.len();
        let mut reach = vec![false; n];
        reach[t] = true;
        let mut q = VecDeque::from([t]);
        while let Some(v) = q.pop_front() {
            for &a in &self.out[v] {
                // Arc a leaves v; its partner a^1 enters v from `u` with residual cap.
                let u = self.arcs[a].to;
                if !reach[u] && self.arcs[a ^ 1].cap > 0 {
                    reach[u] = true;
                    q.push_back(u);
                }
            }
        }
        reach.into_iter().map(|r| !r).collect()
    }
}

/// Largest vertex set `S` maximising `edge_weight * e(S) - vertex_weight * |S|`,
/// where `e(S)` counts the listed edges inside `S` and every vertex in
/// `forced` must be in `S`. Returns the optimum value and the set as a mask.
pub fn max_closure(
    n: usize,
    edges: &[(usize, usize)],
    edge_weight: i64,
    vertex_weight: i64,
    forced: &[usize],
) -> (i64, Vec<bool>) {
    let m = edges.len();
    let s = n + m;
    let t = s + 1;
    let mut net = FlowNetwork::new(n + m + 2);
    for (k, &(a, b)) in edges.iter().enumerate() {
        net.add_arc(s, n + k, edge_weight);
        net.add_arc(n + k, a, INF);
        net.add_arc(n + k, b, INF);
    }
    let mut is_forced = vec![false; n];
    for &v in forced {
        is_forced[v] = true;
    }
    for v in 0..n {
        if is_forced[v] {
            net.add_arc(s, v, INF);
        } else {
            net.add_arc(v, t, vertex_weight);
        }
    }
    let cut = net.max_flow(s, t);
    let side = net.cannot_reach(t);
    let value = edge_weight * m as i64 - cut - vertex_weight * forced.len() as i64;
    (value, side[..n].to_vec())
}
