//! Dinic's maximum flow on compact integer nodes.
//!
//! Edges are tried in insertion order, so the resulting flow is a
//! deterministic function of the order in which the network was built.

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    head: Vec<u32>,
    next: Vec<u32>,
    to: Vec<u32>,
    cap: Vec<i64>,
    /// Edge lists are built as linked lists in reverse; `order` restores insertion order.
    order: Vec<Vec<u32>>,
    sealed: bool,
}

const NIL: u32 = u32::MAX;

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            head: vec![NIL; nodes],
            next: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            order: Vec::new(),
            sealed: false,
        }
    }

    pub fn nodes(&self) -> usize {
        self.head.len()
    }

    /// Adds `u → v` with capacity `c`; returns the edge id. Its reverse is `id ^ 1`.
    pub fn add_edge(&mut self, u: usize, v: usize, c: i64) -> usize {
        assert!(!self.sealed, "edges added after solving");
        let id = self.to.len();
        for (a, b, cc) in [(u, v, c), (v, u, 0)] {
            self.to.push(b as u32);
            self.cap.push(cc);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() as u32 - 1;
        }
        id
    }

    fn seal(&mut self) {
        if self.sealed {
            return;
        }
        self.sealed = true;
        let mut order = vec![Vec::new(); self.head.len()];
        for (u, list) in order.iter_mut().enumerate() {
            let mut e = self.head[u];
            while e != NIL {
                list.push(e);
                e = self.next[e as usize];
            }
            list.reverse();
        }
        self.order = order;
    }

    /// Flow currently on edge `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![NIL; self.nodes()];
        let mut queue = std::collections::VecDeque::from([s]);
        level[s] = 0;
        while let Some(u) = queue.pop_front() {
            for &e in &self.order[u] {
                let v = self.to[e as usize] as usize;
                if self.cap[e as usize] > 0 && level[v] == NIL {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[t] != NIL).then_some(level)
    }

    /// Pushes up to `limit` units from `s` to `t`; returns the amount pushed.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        self.seal();
        let mut total = 0;
        while total < limit {
            let Some(level) = self.levels(s, t) else { break };
            let mut iter = vec![0usize; self.nodes()];
            loop {
                let pushed = self.augment(s, t, limit - total, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
                if total >= limit {
                    break;
                }
            }
        }
        total
    }

    /// One augmenting path in the level graph, found iteratively.
    fn augment(&mut self, s: usize, t: usize, limit: i64, level: &[u32], iter: &mut [usize]) -> i64 {
        let mut path: Vec<u32> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let bottleneck = path
                    .iter()
                    .map(|&e| self.cap[e as usize])
                    .min()
                    .unwrap_or(limit)
                    .min(limit);
                for &e in &path {
                    self.cap[e as usize] -= bottleneck;
                    self.cap[e as usize ^ 1] += bottleneck;
                }
                return bottleneck;
            }
            let mut advanced = false;
            while iter[u] < self.order[u].len() {
                let e = self.order[u][iter[u]] as usize;
                let v = self.to[e] as usize;
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    path.push(e as u32);
                    u = v;
                    advanced = true;
                    break;
                }
                iter[u] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the edge that led here
                let Some(e) = path.pop() else { return 0 };
                u = self.to[e as usize ^ 1] as usize;
                iter[u] += 1;
            }
        }
    }
}
