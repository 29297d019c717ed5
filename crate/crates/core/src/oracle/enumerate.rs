//! Exhaustive integer-point search over a [`MipModel`].
//!
//! A plain depth-first enumeration with interval propagation on every
//! linear row. Nothing here knows what the rows mean, so it serves as an
//! independent check of the formulation.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use crate::formulation::{Assignment, MipModel, Sense, VarKind};
use crate::graph::Subgraph;

use super::OracleError;

/// Largest graph whose full point list `enumerate_feasible` will produce.
pub const MAX_ENUMERATION_VERTICES: usize = 5;
/// Largest graph the projection and maximisation searches accept.
pub const MAX_SEARCH_VERTICES: usize = 8;

const EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct FeasiblePoint {
    pub assignment: Assignment,
    pub objective: f64,
}

struct Search<'a> {
    model: &'a MipModel,
    rows_of: Vec<Vec<usize>>,
    order: Vec<usize>,
}

type Domains = (Vec<f64>, Vec<f64>);

impl<'a> Search<'a> {
    fn new(model: &'a MipModel) -> Self {
        let mut rows_of = vec![Vec::new(); model.variables().len()];
        for (ci, c) in model.constraints().iter().enumerate() {
            for (i, _) in &c.terms {
                rows_of[i.0].push(ci);
            }
        }
        let rank = |k: &VarKind| match k {
            VarKind::Vertex(_) => 0,
            VarKind::Edge(_) => 1,
            VarKind::Root(_) => 2,
            VarKind::Arc(..) => 3,
            VarKind::Depth(_) => 4,
        };
        let mut order: Vec<usize> = (0..model.variables().len()).collect();
        order.sort_by_key(|&i| (rank(&model.variables()[i].kind), i));
        Search { model, rows_of, order }
    }

    fn initial(&self) -> Domains {
        self.model
            .variables()
            .iter()
            .map(|v| {
                let (lo, hi) = v.bounds();
                ((lo - EPS).ceil(), (hi + EPS).floor())
            })
            .unzip()
    }

    /// Tightens domains until no row changes them; false on a wipe-out.
    fn propagate(&self, lo: &mut [f64], hi: &mut [f64], seed: Option<usize>) -> bool {
        let rows = self.model.constraints();
        let mut queued = vec![false; rows.len()];
        let mut queue: VecDeque<usize> = match seed {
            Some(var) => self.rows_of[var].iter().copied().collect(),
            None => (0..rows.len()).collect(),
        };
        for &r in &queue {
            queued[r] = true;
        }
        while let Some(ri) = queue.pop_front() {
            queued[ri] = false;
            let row = &rows[ri];
            let (mut min_act, mut max_act) = (0.0, 0.0);
            for &(i, a) in &row.terms {
                if a > 0.0 {
                    min_act += a * lo[i.0];
                    max_act += a * hi[i.0];
                } else {
                    min_act += a * hi[i.0];
                    max_act += a * lo[i.0];
                }
            }
            let upper = matches!(row.sense, Sense::Le | Sense::Eq);
            let lower = matches!(row.sense, Sense::Ge | Sense::Eq);
            if (upper && min_act > row.rhs + EPS) || (lower && max_act < row.rhs - EPS) {
                return false;
            }
            for &(i, a) in &row.terms {
                let i = i.0;
                let (own_min, own_max) = if a > 0.0 { (a * lo[i], a * hi[i]) } else { (a * hi[i], a * lo[i]) };
                let (mut new_lo, mut new_hi) = (lo[i], hi[i]);
                if upper {
                    let slack = row.rhs - (min_act - own_min);
                    if a > 0.0 {
                        new_hi = new_hi.min((slack / a + EPS).floor());
                    } else {
                        new_lo = new_lo.max((slack / a - EPS).ceil());
                    }
                }
                if lower {
                    let need = row.rhs - (max_act - own_max);
                    if a > 0.0 {
                        new_lo = new_lo.max((need / a - EPS).ceil());
                    } else {
                        new_hi = new_hi.min((need / a + EPS).floor());
                    }
                }
                if new_lo > new_hi {
                    return false;
                }
                if new_lo != lo[i] || new_hi != hi[i] {
                    lo[i] = new_lo;
                    hi[i] = new_hi;
                    for &r in &self.rows_of[i] {
                        if !queued[r] {
                            queued[r] = true;
                            queue.push_back(r);
                        }
                    }
                }
            }
        }
        true
    }

    fn next_unfixed(&self, lo: &[f64], hi: &[f64], kinds: fn(&VarKind) -> bool) -> Option<usize> {
        self.order
            .iter()
            .copied()
            .find(|&i| lo[i] < hi[i] && kinds(&self.model.variables()[i].kind))
    }

    /// Visits every integer point of the domains; `descending` tries larger
    /// values first.
    fn walk(
        &self,
        lo: Vec<f64>,
        hi: Vec<f64>,
        kinds: fn(&VarKind) -> bool,
        descending: bool,
        prune: &mut dyn FnMut(&[f64], &[f64]) -> bool,
        leaf: &mut dyn FnMut(&[f64], &[f64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if prune(&lo, &hi) {
            return ControlFlow::Continue(());
        }
        let Some(var) = self.next_unfixed(&lo, &hi, kinds) else {
            return leaf(&lo, &hi);
        };
        let values: Vec<f64> = {
            let mut v: Vec<f64> = (lo[var] as i64..=hi[var] as i64).map(|x| x as f64).collect();
            if descending {
                v.reverse();
            }
            v
        };
        for value in values {
            let (mut l, mut h) = (lo.clone(), hi.clone());
            l[var] = value;
            h[var] = value;
            if self.propagate(&mut l, &mut h, Some(var)) {
                self.walk(l, h, kinds, descending, prune, leaf)?;
            }
        }
        ControlFlow::Continue(())
    }
}

fn any_kind(_: &VarKind) -> bool {
    true
}

fn selection_kind(k: &VarKind) -> bool {
    matches!(k, VarKind::Vertex(_) | VarKind::Edge(_))
}

fn guard(model: &MipModel, limit: usize) -> Result<(), OracleError> {
    if model.n() > limit {
        return Err(OracleError::TooLarge {
            actual: model.n(),
            limit,
        });
    }
    Ok(())
}

/// Streams every feasible integer point to `visit`, stopping early when it
/// returns `Break`.
pub fn for_each_feasible(
    model: &MipModel,
    mut visit: impl FnMut(&[f64], f64) -> ControlFlow<()>,
) -> Result<(), OracleError> {
    guard(model, MAX_ENUMERATION_VERTICES)?;
    let search = Search::new(model);
    let (mut lo, mut hi) = search.initial();
    if !search.propagate(&mut lo, &mut hi, None) {
        return Ok(());
    }
    let _ = search.walk(lo, hi, any_kind, false, &mut |_, _| false, &mut |values, _| {
        visit(values, model.objective_value(values))
    });
    Ok(())
}

/// Every feasible integer point with its objective value.
pub fn enumerate_feasible(model: &MipModel) -> Result<Vec<FeasiblePoint>, OracleError> {
    let mut out = Vec::new();
    for_each_feasible(model, |values, objective| {
        out.push(FeasiblePoint {
            assignment: Assignment::from_values(values.to_vec()),
            objective,
        });
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Distinct `(y, w)` selections that extend to a feasible integer point,
/// each with its objective value.
pub fn feasible_projections(model: &MipModel) -> Result<Vec<(Subgraph, f64)>, OracleError> {
    guard(model, MAX_SEARCH_VERTICES)?;
    let search = Search::new(model);
    let (mut lo, mut hi) = search.initial();
    let mut out = Vec::new();
    if !search.propagate(&mut lo, &mut hi, None) {
        return Ok(out);
    }
    let _ = search.walk(lo, hi, selection_kind, false, &mut |_, _| false, &mut |lo, hi| {
        let mut found = false;
        let _ = search.walk(lo.to_vec(), hi.to_vec(), any_kind, false, &mut |_, _| false, &mut |_, _| {
            found = true;
            ControlFlow::Break(())
        });
        if found {
            out.push((model.decode_subgraph(lo), model.objective_value(lo)));
        }
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Optimal integer point (exhaustive search with objective bounding).
pub fn maximize(model: &MipModel) -> Result<Option<FeasiblePoint>, OracleError> {
    guard(model, MAX_SEARCH_VERTICES)?;
    let search = Search::new(model);
    let (mut lo, mut hi) = search.initial();
    if !search.propagate(&mut lo, &mut hi, None) {
        return Ok(None);
    }
    let objective = model.objective();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let best_value = std::cell::Cell::new(f64::NEG_INFINITY);
    let mut prune = |lo: &[f64], hi: &[f64]| {
        let bound: f64 = objective
            .iter()
            .map(|&(i, c)| if c > 0.0 { c * hi[i.0] } else { c * lo[i.0] })
            .sum();
        bound <= best_value.get() + EPS
    };
    let _ = search.walk(lo, hi, any_kind, true, &mut prune, &mut |values, _| {
        let value = model.objective_value(values);
        if value > best_value.get() {
            best_value.set(value);
            best = Some((values.to_vec(), value));
        }
        ControlFlow::Continue(())
    });
    Ok(best.map(|(values, objective)| FeasiblePoint {
        assignment: Assignment::from_values(values),
        objective,
    }))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::formulation::{build_model, check_assignment, ModelOptions};
    use crate::graph::{Instance, WeightedGraph};

    #[test]
    fn single_vertex_points() {
        let mut g = WeightedGraph::new();
        let v = g.add_vertex(2.0).unwrap();
        let m = build_model(&Instance::unrooted(g), ModelOptions::default()).unwrap();
        let points = enumerate_feasible(&m).unwrap();
        let selections: BTreeSet<_> = points
            .iter()
            .map(|p| m.decode_subgraph(&p.assignment.dense(&m).unwrap()).vertices)
            .collect();
        assert_eq!(selections, BTreeSet::from([BTreeSet::new(), BTreeSet::from([v])]));
        for p in &points {
            assert!(check_assignment(&m, &p.assignment).unwrap().is_empty());
        }
    }

    #[test]
    fn single_edge_projections() {
        let mut g = WeightedGraph::new();
        let u = g.add_vertex(1.0).unwrap();
        let v = g.add_vertex(1.0).unwrap();
        let e = g.add_edge(u, v, 1.0).unwrap();
        let m = build_model(&Instance::unrooted(g), ModelOptions::default()).unwrap();
        let got: BTreeSet<_> = feasible_projections(&m)
            .unwrap()
            .into_iter()
            .map(|(s, _)| (s.vertices, s.edges))
            .collect();
        let want = BTreeSet::from([
            (BTreeSet::new(), BTreeSet::new()),
            (BTreeSet::from([u]), BTreeSet::new()),
            (BTreeSet::from([v]), BTreeSet::new()),
            (BTreeSet::from([u, v]), BTreeSet::from([e])),
        ]);
        assert_eq!(got, want);
        assert_eq!(maximize(&m).unwrap().unwrap().objective, 3.0);
    }

    #[test]
    fn guards() {
        let mut g = WeightedGraph::new();
        let mut prev = g.add_vertex(1.0).unwrap();
        for _ in 0..8 {
            let v = g.add_vertex(1.0).unwrap();
            g.add_edge(prev, v, 1.0).unwrap();
            prev = v;
        }
        let m = build_model(&Instance::unrooted(g), ModelOptions::default()).unwrap();
        assert!(enumerate_feasible(&m).is_err());
        assert!(maximize(&m).is_err());
    }
}
