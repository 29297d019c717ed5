//! Parallel growth-based branch and bound.
//!
//! A search node holds a connected forced-in region `S` plus sets of
//! forced-out vertices and edges. Branching picks a frontier edge `e` from
//! `S` to an undecided vertex `b` and either adds it (with `b`) or forbids
//! it; in the second case all other edges between `b` and `S` go too, since
//! `e` is the heaviest of them and swapping one in for `e` keeps a
//! completion connected. Every node stays connected and its forced-in part
//! is itself a feasible solution.
//!
//! Two cheap closure rules run after each change:
//! * an undecided edge with both ends in `S` is taken if positive and
//!   forbidden otherwise;
//! * a frontier edge `e = (a, b)` with `w(e) >= 0` and `w(e) + w(b) >= 0` is
//!   taken together with `b` (any completion stays feasible and does not get
//!   lighter after adding them).
//!
//! For the bound, view a completion as a tree grown from `S`: every vertex
//! outside `S` has a parent edge, and a negative vertex `u` outside `S` can
//! spread its weight over its children, each of which then carries at least
//! `w(u) / (deg(u) - 1)`. So each reachable undecided vertex `v` contributes
//! at most `max(0, max(w(v), 0) + a(v))`, where `a(v)` is the best
//! `min(w(e), 0) + share(u)` over available edges `e = (u, v)`. Positive
//! reachable edges are added in full on top.
//!
//! Unrooted instances become one subproblem per start vertex: vertices are
//! ordered heaviest first, and subproblem `i` forces in vertex `i` and
//! forbids vertices `0..i`.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Instant;

use fixedbitset::FixedBitSet;

use crate::formulation::precedes;
use crate::graph::{EdgeId, Instance, Subgraph, VertexId};

use super::{SolveConfig, SolveError, SolveResult, Status};

const SLACK: f64 = 1e-9;
const CLOCK_EVERY: u64 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub donations: u64,
}

struct Compact {
    vw: Vec<f64>,
    ew: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>,
    vid: Vec<VertexId>,
    eid: Vec<EdgeId>,
}

impl Compact {
    fn new(instance: &Instance) -> Self {
        let g = &instance.graph;
        let vid: Vec<VertexId> = g.vertices().collect();
        let pos = |v: VertexId| vid.binary_search(&v).unwrap();
        let mut adj = vec![Vec::new(); vid.len()];
        let (mut ew, mut eid) = (Vec::new(), Vec::new());
        for (id, e) in g.edges() {
            let (a, b) = (pos(e.ends.0), pos(e.ends.1));
            adj[a].push((b, eid.len()));
            adj[b].push((a, eid.len()));
            ew.push(e.weight);
            eid.push(id);
        }
        Compact {
            vw: vid.iter().map(|&v| g.vertex_weight(v).unwrap()).collect(),
            ew,
            adj,
            vid,
            eid,
        }
    }

    fn n(&self) -> usize {
        self.vw.len()
    }

    fn m(&self) -> usize {
        self.ew.len()
    }
}

#[derive(Clone)]
struct Node {
    in_v: FixedBitSet,
    out_v: FixedBitSet,
    in_e: FixedBitSet,
    out_e: FixedBitSet,
    weight: f64,
    bound: f64,
}

impl Node {
    fn empty(c: &Compact, bound: f64) -> Self {
        Node {
            in_v: FixedBitSet::with_capacity(c.n()),
            out_v: FixedBitSet::with_capacity(c.n()),
            in_e: FixedBitSet::with_capacity(c.m()),
            out_e: FixedBitSet::with_capacity(c.m()),
            weight: 0.0,
            bound,
        }
    }

    fn undecided_vertex(&self, v: usize) -> bool {
        !self.in_v[v] && !self.out_v[v]
    }

    fn undecided_edge(&self, e: usize) -> bool {
        !self.in_e[e] && !self.out_e[e]
    }

    /// Adds `v` and applies the closure rules.
    fn grow(&mut self, c: &Compact, v: usize) {
        self.in_v.insert(v);
        self.weight += c.vw[v];
        let mut stack = vec![v];
        while let Some(b) = stack.pop() {
            for &(u, e) in &c.adj[b] {
                if !self.undecided_edge(e) {
                    continue;
                }
                if self.in_v[u] {
                    if c.ew[e] > 0.0 {
                        self.in_e.insert(e);
                        self.weight += c.ew[e];
                    } else {
                        self.out_e.insert(e);
                    }
                } else if !self.out_v[u] && c.ew[e] >= 0.0 && c.ew[e] + c.vw[u] >= 0.0 {
                    self.in_e.insert(e);
                    self.in_v.insert(u);
                    self.weight += c.ew[e] + c.vw[u];
                    stack.push(u);
                }
            }
        }
    }

    fn available(&self, e: usize, u: usize) -> bool {
        self.undecided_edge(e) && !self.out_v[u]
    }

    fn bound(&self, c: &Compact) -> f64 {
        let mut seen = self.in_v.clone();
        let mut stack: Vec<usize> = self.in_v.ones().collect();
        let mut total = self.weight;
        while let Some(b) = stack.pop() {
            for &(u, e) in &c.adj[b] {
                if self.available(e, u) && !seen[u] {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        // Share of a negative vertex's weight that each of its children must
        // carry if it is used as a connector.
        let mut share = vec![0.0; c.n()];
        for u in seen.ones() {
            if self.in_v[u] || c.vw[u] >= 0.0 {
                continue;
            }
            let deg = c.adj[u].iter().filter(|&&(x, e)| self.available(e, x) && seen[x]).count();
            share[u] = if deg >= 2 { c.vw[u] / (deg - 1) as f64 } else { f64::NEG_INFINITY };
        }
        let mut positive = 0.0;
        for v in seen.ones() {
            if self.in_v[v] {
                continue;
            }
            let mut attach = f64::NEG_INFINITY;
            for &(u, e) in &c.adj[v] {
                if !self.available(e, u) || !seen[u] {
                    continue;
                }
                attach = attach.max(c.ew[e].min(0.0) + share[u]);
                if c.ew[e] > 0.0 && (self.in_v[u] || u > v) {
                    positive += c.ew[e];
                }
            }
            total += (c.vw[v].max(0.0) + attach).max(0.0);
        }
        total + positive
    }

    /// Frontier edge `e = (a, b)` with the largest `w(b) + w(e)`; ties by
    /// vertex, then edge index.
    fn branch_vertex(&self, c: &Compact) -> Option<(usize, usize)> {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in self.in_v.ones() {
            for &(b, e) in &c.adj[a] {
                if !self.undecided_edge(e) || !self.undecided_vertex(b) {
                    continue;
                }
                let gain = c.vw[b] + c.ew[e];
                let better = match best {
                    None => true,
                    Some((g, bb, be)) => gain > g || (gain == g && (b, e) < (bb, be)),
                };
                if better {
                    best = Some((gain, b, e));
                }
            }
        }
        best.map(|(_, b, e)| (b, e))
    }
}

struct Incumbent {
    value: AtomicU64,
    solution: Mutex<Option<(f64, FixedBitSet, FixedBitSet)>>,
}

impl Incumbent {
    fn get(&self) -> f64 {
        f64::from_bits(self.value.load(Ordering::Acquire))
    }

    fn offer(&self, node: &Node) {
        if node.weight <= self.get() {
            return;
        }
        let mut slot = self.solution.lock().unwrap();
        if slot.as_ref().map_or(true, |(w, ..)| node.weight > *w) {
            *slot = Some((node.weight, node.in_v.clone(), node.in_e.clone()));
            self.value.store(node.weight.to_bits(), Ordering::Release);
        }
    }
}

struct Pool {
    nodes: Vec<Node>,
    idle: usize,
    done: bool,
}

struct Shared<'a> {
    compact: &'a Compact,
    incumbent: Incumbent,
    pool: Mutex<Pool>,
    wake: Condvar,
    hungry: AtomicUsize,
    stop: AtomicBool,
    timed_out: AtomicBool,
    deadline: Option<Instant>,
    workers: usize,
    nodes: AtomicU64,
    donations: AtomicU64,
}

impl Shared<'_> {
    /// Blocks until a node is available; `None` once the search is over.
    fn take(&self) -> Option<Node> {
        let mut pool = self.pool.lock().unwrap();
        loop {
            if pool.done {
                return None;
            }
            if let Some(node) = pool.nodes.pop() {
                return Some(node);
            }
            pool.idle += 1;
            if pool.idle == self.workers {
                pool.done = true;
                self.wake.notify_all();
                return None;
            }
            self.hungry.fetch_add(1, Ordering::AcqRel);
            pool = self.wake.wait(pool).unwrap();
            self.hungry.fetch_sub(1, Ordering::AcqRel);
            pool.idle -= 1;
        }
    }

    fn donate(&self, local: &mut Vec<Node>) {
        if self.hungry.load(Ordering::Acquire) == 0 || local.len() < 2 {
            return;
        }
        let mut pool = self.pool.lock().unwrap();
        // The oldest nodes sit at the bottom and carry the largest subtrees.
        let give = (local.len() / 2).max(1);
        pool.nodes.extend(local.drain(..give));
        self.donations.fetch_add(1, Ordering::Relaxed);
        self.wake.notify_all();
    }

    fn halt(&self) {
        self.stop.store(true, Ordering::Release);
        let mut pool = self.pool.lock().unwrap();
        pool.done = true;
        self.wake.notify_all();
    }

    /// Runs one worker; returns the largest bound among nodes it abandoned.
    fn work(&self) -> f64 {
        let c = self.compact;
        let mut local: Vec<Node> = Vec::new();
        let mut leftover = f64::NEG_INFINITY;
        let mut count: u64 = 0;
        loop {
            let node = match local.pop() {
                Some(node) => node,
                None => match self.take() {
                    Some(node) => node,
                    None => break,
                },
            };
            if self.stop.load(Ordering::Acquire) {
                leftover = leftover.max(node.bound);
                leftover = local.iter().map(|n| n.bound).fold(leftover, f64::max);
                break;
            }
            count += 1;
            if count % CLOCK_EVERY == 0 {
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        self.timed_out.store(true, Ordering::Release);
                        self.halt();
                        leftover = leftover.max(node.bound);
                        leftover = local.iter().map(|n| n.bound).fold(leftover, f64::max);
                        break;
                    }
                }
            }
            if node.bound <= self.incumbent.get() + SLACK {
                continue;
            }
            self.incumbent.offer(&node);
            let bound = node.bound(c).min(node.bound);
            if bound <= self.incumbent.get() + SLACK {
                continue;
            }
            let Some((b, e)) = node.branch_vertex(c) else {
                continue;
            };
            // Without `e`, `b` may not attach to `S` directly either: any
            // such completion swaps its edge for the heavier `e` and lands in
            // the other child.
            let mut without = node.clone();
            for &(a, f) in &c.adj[b] {
                if node.in_v[a] && node.undecided_edge(f) {
                    without.out_e.insert(f);
                }
            }
            without.bound = bound;
            let mut with = node;
            with.in_e.insert(e);
            with.weight += c.ew[e];
            with.grow(c, b);
            with.bound = bound;
            local.push(without);
            local.push(with);
            self.donate(&mut local);
        }
        self.nodes.fetch_add(count, Ordering::Relaxed);
        leftover
    }
}

fn trivial_bound(c: &Compact) -> f64 {
    c.vw.iter().chain(&c.ew).map(|w| w.max(0.0)).sum()
}

/// Search on an instance whose root (if any) is a vertex of its graph.
pub(crate) fn search(
    instance: &Instance,
    config: &SolveConfig,
    deadline: Option<Instant>,
    allow_empty: bool,
) -> (SolveResult, SearchStats) {
    let c = Compact::new(instance);
    let g = &instance.graph;
    let top = trivial_bound(&c);

    let mut start = Vec::new();
    match instance.root {
        Some(root) => {
            let mut node = Node::empty(&c, top);
            node.grow(&c, c.vid.binary_search(&root).unwrap());
            node.bound = node.bound(&c);
            start.push(node);
        }
        None => {
            let mut order: Vec<usize> = (0..c.n()).collect();
            order.sort_by(|&a, &b| {
                if precedes(g, c.vid[a], c.vid[b]) {
                    std::cmp::Ordering::Greater
                } else if a == b {
                    std::cmp::Ordering::Equal
                } else {
                    std::cmp::Ordering::Less
                }
            });
            let mut node = Node::empty(&c, top);
            for &v in &order {
                let mut sub = node.clone();
                sub.grow(&c, v);
                sub.bound = sub.bound(&c);
                start.push(sub);
                node.out_v.insert(v);
            }
            // Workers pop from the back; heavy start vertices go first.
            start.reverse();
        }
    }

    let incumbent = Incumbent {
        value: AtomicU64::new(if allow_empty && instance.root.is_none() { 0.0 } else { f64::NEG_INFINITY }.to_bits()),
        solution: Mutex::new(None),
    };
    // Every start node is already a feasible selection, so even an instant
    // timeout has something to report.
    for node in &start {
        incumbent.offer(node);
    }
    let workers = config.workers.max(1);
    let shared = Shared {
        compact: &c,
        incumbent,
        pool: Mutex::new(Pool {
            nodes: start,
            idle: 0,
            done: false,
        }),
        wake: Condvar::new(),
        hungry: AtomicUsize::new(0),
        stop: AtomicBool::new(false),
        timed_out: AtomicBool::new(false),
        deadline,
        workers,
        nodes: AtomicU64::new(0),
        donations: AtomicU64::new(0),
    };
    if deadline.is_some_and(|d| Instant::now() >= d) {
        shared.timed_out.store(true, Ordering::Release);
        shared.stop.store(true, Ordering::Release);
    }

    let leftover = if workers == 1 {
        shared.work()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|_| s.spawn(|| shared.work())).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .fold(f64::NEG_INFINITY, f64::max)
        })
    };
    let timed_out = shared.timed_out.load(Ordering::Acquire);
    let pool_bound = shared
        .pool
        .lock()
        .unwrap()
        .nodes
        .iter()
        .map(|n| n.bound)
        .fold(f64::NEG_INFINITY, f64::max);

    let stats = SearchStats {
        nodes: shared.nodes.load(Ordering::Relaxed),
        donations: shared.donations.load(Ordering::Relaxed),
    };
    let found = shared.incumbent.solution.into_inner().unwrap();
    let (weight, solution) = match found {
        Some((w, vs, es)) => (
            w,
            Subgraph {
                vertices: vs.ones().map(|i| c.vid[i]).collect::<BTreeSet<_>>(),
                edges: es.ones().map(|i| c.eid[i]).collect(),
            },
        ),
        None if allow_empty && instance.root.is_none() => (0.0, Subgraph::new()),
        None => (f64::NEG_INFINITY, Subgraph::new()),
    };
    let weight = if solution.is_empty() { weight } else { g.total_weight(&solution) };

    let result = if timed_out {
        SolveResult {
            upper_bound: leftover.max(pool_bound).max(weight),
            solution,
            weight,
            status: Status::Timeout,
        }
    } else if weight == f64::NEG_INFINITY {
        SolveResult {
            solution,
            weight,
            upper_bound: weight,
            status: Status::InfeasibleRooted,
        }
    } else {
        SolveResult {
            solution,
            weight,
            upper_bound: weight,
            status: Status::Optimal,
        }
    };
    (result, stats)
}

/// Runs the search directly on `instance` (no reductions or decomposition).
pub fn branch_and_bound(instance: &Instance, config: &SolveConfig) -> Result<(SolveResult, SearchStats), SolveError> {
    if config.workers == 0 {
        return Err(SolveError::InvalidConfig("worker_count must be at least 1".into()));
    }
    if let Some(root) = instance.root {
        if !instance.graph.contains_vertex(root) {
            return Err(SolveError::UnknownRoot(root));
        }
    }
    let deadline = config.time_limit.map(|t| Instant::now() + t);
    Ok(search(instance, config, deadline, config.allow_empty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::oracle;
    use std::time::Duration;

    fn cycle(vw: &[f64], ew: f64) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        let vs: Vec<_> = vw.iter().map(|&w| g.add_vertex(w).unwrap()).collect();
        for i in 0..vs.len() {
            g.add_edge(vs[i], vs[(i + 1) % vs.len()], ew).unwrap();
        }
        g
    }

    #[test]
    fn matches_oracle_on_cycle() {
        let g = cycle(&[3.0, -4.0, 2.0, -1.0, 5.0, -6.0], -0.5);
        let inst = Instance::unrooted(g);
        let (r, _) = branch_and_bound(&inst, &SolveConfig::default()).unwrap();
        let o = oracle::brute_force(&inst).unwrap();
        assert_eq!(r.weight, o.weight);
        assert!(inst.graph.is_connected_subgraph(&r.solution));
    }

    #[test]
    fn parallel_agrees() {
        let g = cycle(&[1.0, -2.0, 4.0, -1.0, 2.0, -3.0, 6.0, -2.0], -1.0);
        let inst = Instance::unrooted(g);
        let one = branch_and_bound(&inst, &SolveConfig::default()).unwrap().0;
        let four = branch_and_bound(
            &inst,
            &SolveConfig {
                workers: 4,
                ..SolveConfig::default()
            },
        )
        .unwrap()
        .0;
        assert_eq!(one.weight, four.weight);
    }

    #[test]
    fn expired_deadline_reports_timeout() {
        let g = cycle(&[1.0, 1.0, 1.0], -0.5);
        let inst = Instance::unrooted(g);
        let config = SolveConfig {
            time_limit: Some(Duration::ZERO),
            ..SolveConfig::default()
        };
        let (r, _) = branch_and_bound(&inst, &config).unwrap();
        assert_eq!(r.status, Status::Timeout);
        assert!(r.upper_bound >= r.weight);

        // A rooted search that never runs still reports a selection holding the root.
        let root = inst.graph.vertices().next().unwrap();
        let rooted = Instance::rooted(inst.graph.clone(), root).unwrap();
        let (r, _) = branch_and_bound(&rooted, &config).unwrap();
        assert_eq!(r.status, Status::Timeout);
        assert!(r.solution.vertices.contains(&root));
        assert!(rooted.graph.is_connected_subgraph(&r.solution));
    }

    #[test]
    fn rooted_keeps_root() {
        let g = cycle(&[-5.0, 1.0, 1.0], -1.0);
        let root = g.vertices().next().unwrap();
        let inst = Instance::rooted(g, root).unwrap();
        let (r, _) = branch_and_bound(&inst, &SolveConfig::default()).unwrap();
        assert!(r.solution.vertices.contains(&root));
        assert_eq!(r.weight, oracle::brute_force(&inst).unwrap().weight);
    }
}
