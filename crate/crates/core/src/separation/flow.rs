//! Edmonds–Karp maximum flow.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
}

/// Directed network over nodes `0..node_count`. Antiparallel arcs are fine.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowNetwork {
    pub node_count: usize,
    pub arcs: Vec<Arc>,
    pub source: usize,
    pub sink: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxFlow {
    pub value: f64,
    /// Indices into `FlowNetwork::arcs` leaving the source side.
    pub cut: Vec<usize>,
    /// `source_side[v]` iff `v` is reachable from the source in the final
    /// residual network.
    pub source_side: Vec<bool>,
    pub augmentations: usize,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            node_count,
            arcs: Vec::new(),
            source,
            sink,
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: f64) -> usize {
        assert!(capacity.is_finite() && capacity >= 0.0, "capacity must be finite and non-negative");
        self.arcs.push(Arc { from, to, capacity });
        self.arcs.len() - 1
    }

    /// Total capacity of the arcs leaving `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> f64 {
        self.arcs
            .iter()
            .filter(|a| side[a.from] && !side[a.to])
            .map(|a| a.capacity)
            .sum()
    }

    /// Shortest augmenting paths until none is left. The cut returned is the
    /// residual reachability cut, so `value` equals its capacity up to
    /// floating-point rounding.
    pub fn max_flow(&self) -> MaxFlow {
        assert_ne!(self.source, self.sink, "source and sink must differ");
        // residual arc 2k is arc k, 2k+1 its reverse
        let mut residual: Vec<f64> = Vec::with_capacity(2 * self.arcs.len());
        let mut head: Vec<usize> = Vec::with_capacity(2 * self.arcs.len());
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.node_count];
        for (k, a) in self.arcs.iter().enumerate() {
            residual.push(a.capacity);
            head.push(a.to);
            out[a.from].push(2 * k);
            residual.push(0.0);
            head.push(a.from);
            out[a.to].push(2 * k + 1);
        }

        let mut value = 0.0;
        let mut augmentations = 0;
        loop {
            let mut via: Vec<Option<usize>> = vec![None; self.node_count];
            let mut seen = vec![false; self.node_count];
            seen[self.source] = true;
            let mut queue = VecDeque::from([self.source]);
            while let Some(v) = queue.pop_front() {
                if v == self.sink {
                    break;
                }
                for &r in &out[v] {
                    let u = head[r];
                    if residual[r] > 0.0 && !seen[u] {
                        seen[u] = true;
                        via[u] = Some(r);
                        queue.push_back(u);
                    }
                }
            }
            if !seen[self.sink] {
                let cut = self
                    .arcs
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| seen[a.from] && !seen[a.to])
                    .map(|(k, _)| k)
                    .collect();
                return MaxFlow {
                    value,
                    cut,
                    source_side: seen,
                    augmentations,
                };
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = self.sink;
            while let Some(r) = via[v] {
                bottleneck = bottleneck.min(residual[r]);
                v = head[r ^ 1];
            }
            let mut v = self.sink;
            while let Some(r) = via[v] {
                residual[r] -= bottleneck;
                residual[r ^ 1] += bottleneck;
                v = head[r ^ 1];
            }
            value += bottleneck;
            augmentations += 1;
        }
    }
}
