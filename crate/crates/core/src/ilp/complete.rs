//! Optimal values of the auxiliary variables once the edge selection is fixed.

use super::{Constraint, Domain, IlpModel};
use crate::decomposition::{CapMatching, SiblingSet};
use crate::diagram::{EdgeKind, MultiDiagram};
use crate::error::{Error, Result};
use crate::singular::trace_components;

/// Completes an edge selection with the cycle labels `y`, representatives
/// `z`, run labels `r`, transitions `t` and singleton flags `s` that maximize
/// the objective. Fails when the selection is not a cycle cover.
pub fn complete_assignment(m: &IlpModel, d: &MultiDiagram, selected: &[bool]) -> Result<Vec<i64>> {
    let mut values = vec![0i64; m.variables().len()];
    let chosen: Vec<usize> = (0..d.edge_count()).filter(|&e| selected[e]).collect();
    for &e in &chosen {
        values[m.x(e)] = 1;
    }
    let components = trace_components(d, &chosen)
        .map_err(|e| Error::InfeasibleAssignment(e.to_string()))?;
    let covered: usize = components.iter().map(|c| c.vertices.len()).sum();
    if covered != d.vertex_count() || components.iter().any(|c| !c.kind.is_cycle()) {
        return Err(Error::InfeasibleAssignment(
            "selected edges do not form a cycle cover".into(),
        ));
    }

    let edges = d.edges();
    let touches_selected_indel_a = |e: usize| {
        let edge = &edges[e];
        chosen.iter().any(|&f| {
            edges[f].kind == EdgeKind::IndelA && (edges[f].touches(edge.u) || edges[f].touches(edge.v))
        })
    };

    for comp in &components {
        if comp.is_indel_free() {
            let min = *comp.vertices.iter().min().unwrap();
            for &v in &comp.vertices {
                values[m.y(v)] = min as i64 + 1;
            }
            values[m.z(min)] = 1;
        }

        let n = comp.vertices.len();
        let mut forced: Vec<Option<usize>> = vec![None; n];
        let pos = |v: usize| comp.vertices.iter().position(|&w| w == v).unwrap();
        for &e in &comp.edges {
            let label = match edges[e].kind {
                EdgeKind::IndelA => 0,
                EdgeKind::IndelB => 1,
                _ => continue,
            };
            for w in [edges[e].u, edges[e].v] {
                forced[pos(w)] = Some(label);
            }
        }
        let may_flip: Vec<bool> = comp
            .edges
            .iter()
            .map(|&e| {
                !m.options().canonical
                    || (edges[e].kind.is_adjacency_a() && touches_selected_indel_a(e))
            })
            .collect();
        let labels = min_flip_labels(&forced, &may_flip).ok_or_else(|| {
            Error::InfeasibleAssignment("run labels cannot be assigned on a cycle".into())
        })?;
        for (k, &v) in comp.vertices.iter().enumerate() {
            values[m.r(v)] = labels[k] as i64;
        }
        for (k, &e) in comp.edges.iter().enumerate() {
            if labels[k] != labels[(k + 1) % n] {
                values[m.t(e)] = 1;
            }
        }
    }

    for (ki, &id) in m.circular_ids().iter().enumerate() {
        let k = d
            .circular_chromosomes()
            .iter()
            .find(|k| k.id == id)
            .expect("model built from this diagram");
        if k.indel_edges.iter().all(|&e| selected[e]) {
            values[m.s(ki)] = 1;
        }
    }
    Ok(values)
}

/// Labels for the vertices of a cycle minimizing label changes. Edge `k`
/// joins positions `k` and `k + 1` (cyclically) and may change the label only
/// when `may_flip[k]` holds.
fn min_flip_labels(forced: &[Option<usize>], may_flip: &[bool]) -> Option<Vec<usize>> {
    let n = forced.len();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for first in 0..2 {
        if forced[0].is_some_and(|f| f != first) {
            continue;
        }
        const INF: usize = usize::MAX / 4;
        let mut cost = [INF; 2];
        cost[first] = 0;
        let mut back = vec![[0usize; 2]; n];
        for k in 1..n {
            let mut next = [INF; 2];
            for l in 0..2 {
                if forced[k].is_some_and(|f| f != l) {
                    continue;
                }
                for p in 0..2 {
                    let step = if p == l {
                        0
                    } else if may_flip[k - 1] {
                        1
                    } else {
                        continue;
                    };
                    if cost[p] + step < next[l] {
                        next[l] = cost[p] + step;
                        back[k][l] = p;
                    }
                }
            }
            cost = next;
        }
        for last in 0..2 {
            let close = if last == first {
                0
            } else if may_flip[n - 1] {
                1
            } else {
                continue;
            };
            let total = cost[last].saturating_add(close);
            if total >= INF || best.as_ref().is_some_and(|(b, _)| *b <= total) {
                continue;
            }
            let mut labels = vec![0; n];
            labels[n - 1] = last;
            for k in (1..n).rev() {
                labels[k - 1] = back[k][labels[k]];
            }
            best = Some((total, labels));
        }
    }
    best.map(|(_, l)| l)
}

/// Best completion of the decomposition induced by a maximal sibling set and
/// a cap matching.
pub fn optimal_completion(
    m: &IlpModel,
    d: &MultiDiagram,
    s: &SiblingSet,
    caps: &CapMatching,
) -> Result<Vec<i64>> {
    let mut selected = vec![false; d.edge_count()];
    for (e, edge) in d.edges().iter().enumerate() {
        if edge.kind.is_adjacency() {
            selected[e] = true;
        }
    }
    for e in s.edges(d) {
        selected[e] = true;
    }
    for e in caps.edges(d)? {
        selected[e] = true;
    }
    let matched = s.matched_occurrences(d);
    for (occ, &mtc) in matched.iter().enumerate() {
        if !mtc {
            if let Some(e) = d.indel_edge_of(occ) {
                selected[e] = true;
            }
        }
    }
    complete_assignment(m, d, &selected)
}

/// Twice the objective value of an assignment.
pub fn objective_x2(m: &IlpModel, values: &[i64]) -> i64 {
    m.objective_x2().iter().map(|&(v, c)| c * values[v]).sum()
}

/// First domain or constraint violation, if any. Domain violations are
/// reported through a synthetic constraint labelled with the variable name.
pub fn violated_constraint(m: &IlpModel, values: &[i64]) -> Option<Constraint> {
    for (i, var) in m.variables().iter().enumerate() {
        let upper = match var.domain {
            Domain::Binary => 1,
            Domain::Integer { upper } => upper,
        };
        if values[i] < 0 || values[i] > upper {
            return Some(Constraint {
                label: format!("domain of {}", var.name),
                family: super::Family::C01,
                terms: vec![(i, 1)],
                sense: super::Sense::Le,
                rhs: upper,
            });
        }
    }
    m.constraints().iter().find(|c| !c.holds(values)).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flips_only_where_allowed() {
        let forced = [Some(0), None, Some(1), None];
        assert_eq!(min_flip_labels(&forced, &[true; 4]).map(|l| l.len()), Some(4));
        let l = min_flip_labels(&forced, &[true, false, false, true]).unwrap();
        assert_eq!(l, [0, 1, 1, 1]);
        assert!(min_flip_labels(&forced, &[false; 4]).is_none());
        let free = [None, None, None];
        assert_eq!(min_flip_labels(&free, &[false; 3]).unwrap(), [0, 0, 0]);
    }
}
