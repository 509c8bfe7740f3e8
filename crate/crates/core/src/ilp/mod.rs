//! Integer linear program over the capped multi-relational diagram.
//!
//! Variables are named `x_e<edge>`, `y_<vertex>`, `z_<vertex>`, `r_<vertex>`,
//! `t_e<edge>` and `s_k<chromosome>` with 1-based ids following the diagram's
//! deterministic ordering.

mod complete;
mod lp;
mod solution;

pub use complete::{complete_assignment, objective_x2, optimal_completion, violated_constraint};
pub use lp::{fingerprint_of, parse_lp_structure, write_lp, LpStructure, ParsedConstraint};
pub use solution::{extract_result, read_solution, write_solution, Assignment, IlpResult, SolverSolution};

use crate::diagram::{EdgeKind, MultiDiagram};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    X,
    Y,
    Z,
    R,
    T,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Binary,
    Integer { upper: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub domain: Domain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    C01,
    C02,
    C03,
    C04,
    C05,
    C06,
    C07,
    C08,
    C09,
    C10,
    C11,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub label: String,
    pub family: Family,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    pub fn lhs(&self, values: &[i64]) -> i64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn holds(&self, values: &[i64]) -> bool {
        self.sense.holds(self.lhs(values), self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpOptions {
    /// Emit the constraints that fix where transitions are counted.
    pub canonical: bool,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions { canonical: true }
    }
}

#[derive(Debug, Clone)]
pub struct IlpModel {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    /// Objective coefficients doubled so that they are integral.
    objective_x2: Vec<(usize, i64)>,
    edges: usize,
    vertices: usize,
    circular_ids: Vec<usize>,
    n_star: usize,
    p_star: usize,
    a_star: usize,
    options: IlpOptions,
}

pub fn build_ilp(d: &MultiDiagram) -> Result<IlpModel> {
    build_ilp_with(d, IlpOptions::default())
}

pub fn build_ilp_with(d: &MultiDiagram, options: IlpOptions) -> Result<IlpModel> {
    let plan = d.capping().ok_or(Error::NotCapped)?;
    let ne = d.edge_count();
    let nv = d.vertex_count();
    let circulars: Vec<_> = d
        .circular_chromosomes()
        .iter()
        .filter(|k| k.fully_indel())
        .collect();

    let mut variables = Vec::with_capacity(2 * ne + 3 * nv + circulars.len());
    let binary = |name: String, kind| Variable {
        name,
        kind,
        domain: Domain::Binary,
    };
    for e in 1..=ne {
        variables.push(binary(format!("x_e{e}"), VarKind::X));
    }
    for i in 1..=nv {
        variables.push(Variable {
            name: format!("y_{i}"),
            kind: VarKind::Y,
            domain: Domain::Integer { upper: i as i64 },
        });
    }
    for i in 1..=nv {
        variables.push(binary(format!("z_{i}"), VarKind::Z));
    }
    for i in 1..=nv {
        variables.push(binary(format!("r_{i}"), VarKind::R));
    }
    for e in 1..=ne {
        variables.push(binary(format!("t_e{e}"), VarKind::T));
    }
    for k in &circulars {
        variables.push(binary(format!("s_k{}", k.id), VarKind::S));
    }

    let mut m = IlpModel {
        variables,
        constraints: Vec::new(),
        objective_x2: Vec::new(),
        edges: ne,
        vertices: nv,
        circular_ids: circulars.iter().map(|k| k.id).collect(),
        n_star: d.n_star(),
        p_star: plan.p_star,
        a_star: plan.a_star,
        options,
    };
    let mut objective: Vec<(usize, i64)> = (0..nv).map(|v| (m.z(v), 2)).collect();
    objective.extend((0..ne).map(|e| (m.t(e), -1)));
    objective.extend((0..circulars.len()).map(|k| (m.s(k), -2)));
    m.objective_x2 = objective;

    let mut cs = Vec::new();
    let mut push = |label: String, family, terms: Vec<(usize, i64)>, sense, rhs| {
        cs.push(Constraint {
            label,
            family,
            terms,
            sense,
            rhs,
        })
    };
    let edges = d.edges();

    for (e, edge) in edges.iter().enumerate() {
        if edge.kind.is_adjacency() {
            push(format!("c01_e{}", e + 1), Family::C01, vec![(m.x(e), 1)], Sense::Eq, 1);
        }
    }

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, edge) in edges.iter().enumerate() {
        incident[edge.u].push(e);
        incident[edge.v].push(e);
    }
    for (v, inc) in incident.iter().enumerate() {
        let terms = inc.iter().map(|&e| (m.x(e), 1)).collect();
        push(format!("c02_v{}", v + 1), Family::C02, terms, Sense::Eq, 2);
    }

    for p in d.pairs() {
        push(
            format!("c03_e{}", p.tail + 1),
            Family::C03,
            vec![(m.x(p.tail), 1), (m.x(p.head), -1)],
            Sense::Eq,
            0,
        );
    }

    for (e, edge) in edges.iter().enumerate() {
        let (i, j) = (edge.u, edge.v);
        for (suffix, a, b) in [("f", i, j), ("r", j, i)] {
            let id = a as i64 + 1;
            push(
                format!("c04_e{}_{suffix}", e + 1),
                Family::C04,
                vec![(m.y(a), 1), (m.y(b), -1), (m.x(e), id)],
                Sense::Le,
                id,
            );
        }
    }

    for (e, edge) in edges.iter().enumerate() {
        if edge.kind.indel_side().is_none() {
            continue;
        }
        for (suffix, w) in [("u", edge.u), ("v", edge.v)] {
            let id = w as i64 + 1;
            push(
                format!("c05_e{}_{suffix}", e + 1),
                Family::C05,
                vec![(m.y(w), 1), (m.x(e), id)],
                Sense::Le,
                id,
            );
        }
    }

    for v in 0..nv {
        push(
            format!("c06_v{}", v + 1),
            Family::C06,
            vec![(m.z(v), v as i64 + 1), (m.y(v), -1)],
            Sense::Le,
            0,
        );
    }

    for (e, edge) in edges.iter().enumerate() {
        let Some(side) = edge.kind.indel_side() else {
            continue;
        };
        for (suffix, w) in [("u", edge.u), ("v", edge.v)] {
            let label = format!("c07_e{}_{suffix}", e + 1);
            match side {
                crate::diagram::Side::A => {
                    push(label, Family::C07, vec![(m.r(w), 1), (m.x(e), 1)], Sense::Le, 1)
                }
                crate::diagram::Side::B => {
                    push(label, Family::C07, vec![(m.r(w), 1), (m.x(e), -1)], Sense::Ge, 0)
                }
            }
        }
    }

    for (e, edge) in edges.iter().enumerate() {
        for (suffix, u, v) in [("f", edge.u, edge.v), ("r", edge.v, edge.u)] {
            push(
                format!("c08_e{}_{suffix}", e + 1),
                Family::C08,
                vec![(m.t(e), 1), (m.r(v), -1), (m.r(u), 1), (m.x(e), -1)],
                Sense::Ge,
                -1,
            );
        }
    }

    if options.canonical {
        for (e, edge) in edges.iter().enumerate() {
            if edge.kind.is_adjacency_a() {
                let mut terms: Vec<(usize, i64)> = incident[edge.u]
                    .iter()
                    .chain(&incident[edge.v])
                    .filter(|&&f| edges[f].kind == EdgeKind::IndelA)
                    .map(|&f| (m.x(f), 1))
                    .collect();
                terms.push((m.t(e), -1));
                push(format!("c09_e{}", e + 1), Family::C09, terms, Sense::Ge, 0);
            }
        }
        for (e, edge) in edges.iter().enumerate() {
            if !edge.kind.is_adjacency_a() {
                push(format!("c10_e{}", e + 1), Family::C10, vec![(m.t(e), 1)], Sense::Eq, 0);
            }
        }
    }

    for (ki, k) in circulars.iter().enumerate() {
        let mut terms: Vec<(usize, i64)> = k.indel_edges.iter().map(|&e| (m.x(e), 1)).collect();
        terms.push((m.s(ki), -1));
        push(
            format!("c11_k{}", k.id),
            Family::C11,
            terms,
            Sense::Le,
            k.occurrences.len() as i64 - 1,
        );
    }

    m.constraints = cs;
    Ok(m)
}

impl IlpModel {
    pub fn x(&self, edge: usize) -> usize {
        edge
    }

    pub fn y(&self, vertex: usize) -> usize {
        self.edges + vertex
    }

    pub fn z(&self, vertex: usize) -> usize {
        self.edges + self.vertices + vertex
    }

    pub fn r(&self, vertex: usize) -> usize {
        self.edges + 2 * self.vertices + vertex
    }

    pub fn t(&self, edge: usize) -> usize {
        self.edges + 3 * self.vertices + edge
    }

    /// Variable of the `k`-th entry of [`IlpModel::circular_ids`].
    pub fn s(&self, k: usize) -> usize {
        2 * self.edges + 3 * self.vertices + k
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        parse_name(name).and_then(|(kind, id)| {
            let idx = match kind {
                VarKind::X if (1..=self.edges).contains(&id) => self.x(id - 1),
                VarKind::T if (1..=self.edges).contains(&id) => self.t(id - 1),
                VarKind::Y if (1..=self.vertices).contains(&id) => self.y(id - 1),
                VarKind::Z if (1..=self.vertices).contains(&id) => self.z(id - 1),
                VarKind::R if (1..=self.vertices).contains(&id) => self.r(id - 1),
                VarKind::S => self.s(self.circular_ids.iter().position(|&k| k == id)?),
                _ => return None,
            };
            Some(idx)
        })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_x2(&self) -> &[(usize, i64)] {
        &self.objective_x2
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Global ids of the circular chromosomes that carry an `s` variable.
    pub fn circular_ids(&self) -> &[usize] {
        &self.circular_ids
    }

    pub fn n_star(&self) -> usize {
        self.n_star
    }

    pub fn p_star(&self) -> usize {
        self.p_star
    }

    pub fn a_star(&self) -> usize {
        self.a_star
    }

    pub fn options(&self) -> IlpOptions {
        self.options
    }

    pub fn count_family(&self, family: Family) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }
}

fn parse_name(name: &str) -> Option<(VarKind, usize)> {
    let (kind, digits) = [
        (VarKind::X, "x_e"),
        (VarKind::T, "t_e"),
        (VarKind::S, "s_k"),
        (VarKind::Y, "y_"),
        (VarKind::Z, "z_"),
        (VarKind::R, "r_"),
    ]
    .into_iter()
    .find_map(|(kind, prefix)| Some((kind, name.strip_prefix(prefix)?)))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok().map(|id| (kind, id))
}
