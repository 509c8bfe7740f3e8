//! Multi-relational diagram of two natural genomes and its capped version.
//!
//! Vertices are marker extremities (plus cap extremities once capped). Ids are
//! deterministic: all extremities of A in reading order (left extremity of an
//! occurrence first), then those of B, then the A caps, then the B caps. Edge
//! ids follow construction order: adjacencies of A, adjacencies of B,
//! extremity edges (sibling pairs, tail edge first), indel edges of A, indel
//! edges of B, and when capped: telomere-to-cap adjacencies and artificial
//! adjacencies of A, the same for B, then the cap extremity edges.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::genome::{Genome, MarkerCensus, Orientation};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    fn idx(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    Tail,
    Head,
}

/// One marker occurrence of either genome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub side: Side,
    pub chromosome: usize,
    pub position: usize,
    /// Index within its genome in reading order.
    pub index: usize,
    pub family: usize,
    pub orientation: Orientation,
    pub tail: VertexId,
    pub head: VertexId,
}

impl Occurrence {
    /// Extremity met first when reading the chromosome left to right.
    pub fn left(&self) -> VertexId {
        match self.orientation {
            Orientation::Forward => self.tail,
            Orientation::Reverse => self.head,
        }
    }

    pub fn right(&self) -> VertexId {
        match self.orientation {
            Orientation::Forward => self.head,
            Orientation::Reverse => self.tail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Extremity { occurrence: usize, end: End },
    /// Cap extremity with its 1-based index within its genome.
    Cap { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub side: Side,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    AdjacencyA,
    AdjacencyB,
    ArtificialA,
    ArtificialB,
    Extremity,
    IndelA,
    IndelB,
    CapExtremity,
}

impl EdgeKind {
    /// Adjacency of either genome, artificial ones included.
    pub fn is_adjacency(self) -> bool {
        matches!(
            self,
            EdgeKind::AdjacencyA | EdgeKind::AdjacencyB | EdgeKind::ArtificialA | EdgeKind::ArtificialB
        )
    }

    /// Adjacency (regular or artificial) belonging to genome A.
    pub fn is_adjacency_a(self) -> bool {
        matches!(self, EdgeKind::AdjacencyA | EdgeKind::ArtificialA)
    }

    /// Edges crossing between the genomes.
    pub fn is_crossing(self) -> bool {
        matches!(self, EdgeKind::Extremity | EdgeKind::CapExtremity)
    }

    pub fn indel_side(self) -> Option<Side> {
        match self {
            EdgeKind::IndelA => Some(Side::A),
            EdgeKind::IndelB => Some(Side::B),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }
}

/// The two sibling extremity edges joining an occurrence of A with an
/// occurrence of B of the same family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiblingPair {
    pub family: usize,
    pub a: usize,
    pub b: usize,
    pub tail: EdgeId,
    pub head: EdgeId,
}

/// A circular chromosome together with the indel edges on its occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularChromosome {
    /// 1-based id over the chromosomes of A followed by those of B.
    pub id: usize,
    pub side: Side,
    pub chromosome: usize,
    pub occurrences: Vec<usize>,
    pub indel_edges: Vec<EdgeId>,
}

impl CircularChromosome {
    /// True when every occurrence carries an indel edge, i.e. the chromosome
    /// can become a circular singleton.
    pub fn fully_indel(&self) -> bool {
        self.indel_edges.len() == self.occurrences.len()
    }
}

/// Number of caps and artificial adjacencies of an optimal capping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CappingPlan {
    pub p_star: usize,
    pub a_star: usize,
    pub artificial_side: Option<Side>,
}

impl CappingPlan {
    pub fn new(kappa_a: usize, kappa_b: usize) -> Self {
        let artificial_side = match kappa_a.cmp(&kappa_b) {
            std::cmp::Ordering::Less => Some(Side::A),
            std::cmp::Ordering::Greater => Some(Side::B),
            std::cmp::Ordering::Equal => None,
        };
        CappingPlan {
            p_star: kappa_a.max(kappa_b),
            a_star: kappa_a.abs_diff(kappa_b),
            artificial_side,
        }
    }

    pub fn from_census(census: &MarkerCensus) -> Self {
        Self::new(census.kappa_a(), census.kappa_b())
    }
}

#[derive(Debug, Clone)]
pub struct MultiDiagram {
    families: Vec<String>,
    occurrences: Vec<Occurrence>,
    a_len: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    pairs: Vec<SiblingPair>,
    pairs_of: Vec<Vec<usize>>,
    indel_of: Vec<Option<EdgeId>>,
    circulars: Vec<CircularChromosome>,
    telomeres: [Vec<VertexId>; 2],
    caps: [Vec<VertexId>; 2],
    kappa: [usize; 2],
    n_star: usize,
    capping: Option<CappingPlan>,
}

fn push_edge(edges: &mut Vec<Edge>, u: VertexId, v: VertexId, kind: EdgeKind) -> EdgeId {
    edges.push(Edge { u, v, kind });
    edges.len() - 1
}

/// Builds the multi-relational diagram MR(A, B).
pub fn build_mrd(a: &Genome, b: &Genome, census: &MarkerCensus) -> MultiDiagram {
    let families: Vec<String> = census.families().map(|(f, _)| f.to_string()).collect();
    let family_id: HashMap<&str, usize> = families
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_str(), i))
        .collect();

    let mut occurrences = Vec::with_capacity(a.len() + b.len());
    let mut vertices = Vec::with_capacity(2 * (a.len() + b.len()));
    for (side, genome) in [(Side::A, a), (Side::B, b)] {
        let mut index = 0;
        for (ci, chrom) in genome.chromosomes.iter().enumerate() {
            for (pi, m) in chrom.markers().iter().enumerate() {
                let occ = occurrences.len();
                let left = vertices.len();
                let (tail, head) = match m.orientation() {
                    Orientation::Forward => (left, left + 1),
                    Orientation::Reverse => (left + 1, left),
                };
                let (first, second) = match m.orientation() {
                    Orientation::Forward => (End::Tail, End::Head),
                    Orientation::Reverse => (End::Head, End::Tail),
                };
                for end in [first, second] {
                    vertices.push(Vertex {
                        side,
                        kind: VertexKind::Extremity {
                            occurrence: occ,
                            end,
                        },
                    });
                }
                occurrences.push(Occurrence {
                    side,
                    chromosome: ci,
                    position: pi,
                    index,
                    family: family_id[m.family()],
                    orientation: m.orientation(),
                    tail,
                    head,
                });
                index += 1;
            }
        }
    }
    let a_len = a.len();

    let mut edges = Vec::new();
    let mut telomeres: [Vec<VertexId>; 2] = [Vec::new(), Vec::new()];
    let mut circular_occs: Vec<(Side, usize, Vec<usize>)> = Vec::new();
    for (side, genome, offset) in [(Side::A, a, 0), (Side::B, b, a_len)] {
        let kind = match side {
            Side::A => EdgeKind::AdjacencyA,
            Side::B => EdgeKind::AdjacencyB,
        };
        let mut start = offset;
        for (ci, chrom) in genome.chromosomes.iter().enumerate() {
            let occs: Vec<usize> = (start..start + chrom.len()).collect();
            for w in occs.windows(2) {
                push_edge(
                    &mut edges,
                    occurrences[w[0]].right(),
                    occurrences[w[1]].left(),
                    kind,
                );
            }
            let first = occs[0];
            let last = *occs.last().unwrap();
            if chrom.is_circular() {
                push_edge(
                    &mut edges,
                    occurrences[last].right(),
                    occurrences[first].left(),
                    kind,
                );
                circular_occs.push((side, ci, occs.clone()));
            } else {
                telomeres[side.idx()].push(occurrences[first].left());
                telomeres[side.idx()].push(occurrences[last].right());
            }
            start += chrom.len();
        }
    }

    let mut by_family_b: Vec<Vec<usize>> = vec![Vec::new(); families.len()];
    for occ in &occurrences[a_len..] {
        by_family_b[occ.family].push(occ.index + a_len);
    }
    let mut pairs = Vec::new();
    let mut pairs_of = vec![Vec::new(); occurrences.len()];
    for ao in 0..a_len {
        let fam = occurrences[ao].family;
        for &bo in &by_family_b[fam] {
            let tail = push_edge(
                &mut edges,
                occurrences[ao].tail,
                occurrences[bo].tail,
                EdgeKind::Extremity,
            );
            let head = push_edge(
                &mut edges,
                occurrences[ao].head,
                occurrences[bo].head,
                EdgeKind::Extremity,
            );
            pairs_of[ao].push(pairs.len());
            pairs_of[bo].push(pairs.len());
            pairs.push(SiblingPair {
                family: fam,
                a: ao,
                b: bo,
                tail,
                head,
            });
        }
    }

    let mut indel_of = vec![None; occurrences.len()];
    for (side, kind) in [(Side::A, EdgeKind::IndelA), (Side::B, EdgeKind::IndelB)] {
        for (oi, occ) in occurrences.iter().enumerate() {
            if occ.side != side {
                continue;
            }
            let count = census.get(&families[occ.family]);
            let surplus = match side {
                Side::A => count.occ_a > count.occ_b,
                Side::B => count.occ_b > count.occ_a,
            };
            if surplus {
                indel_of[oi] = Some(push_edge(&mut edges, occ.tail, occ.head, kind));
            }
        }
    }

    let circulars = circular_occs
        .into_iter()
        .map(|(side, ci, occs)| {
            let id = match side {
                Side::A => ci + 1,
                Side::B => a.chromosomes.len() + ci + 1,
            };
            let indel_edges = occs.iter().filter_map(|&o| indel_of[o]).collect();
            CircularChromosome {
                id,
                side,
                chromosome: ci,
                occurrences: occs,
                indel_edges,
            }
        })
        .collect();

    MultiDiagram {
        families,
        occurrences,
        a_len,
        vertices,
        edges,
        pairs,
        pairs_of,
        indel_of,
        circulars,
        telomeres,
        caps: [Vec::new(), Vec::new()],
        kappa: [census.kappa_a(), census.kappa_b()],
        n_star: census.n_star(),
        capping: None,
    }
}

/// Adds caps, telomere adjacencies, artificial adjacencies and cap extremity
/// edges, producing MRC(A, B).
pub fn cap_mrd(d: &MultiDiagram, plan: CappingPlan) -> Result<MultiDiagram> {
    if d.capping.is_some() {
        return Err(Error::InvalidCapping("diagram is already capped".into()));
    }
    let expected = CappingPlan::new(d.kappa[0], d.kappa[1]);
    if plan != expected {
        return Err(Error::InvalidCapping(format!(
            "plan {plan:?} does not match the linear chromosome counts ({}, {})",
            d.kappa[0], d.kappa[1]
        )));
    }
    let mut out = d.clone();
    for side in [Side::A, Side::B] {
        let first = out.vertices.len();
        for index in 1..=2 * plan.p_star {
            out.vertices.push(Vertex {
                side,
                kind: VertexKind::Cap { index },
            });
        }
        out.caps[side.idx()] = (first..out.vertices.len()).collect();
    }
    for side in [Side::A, Side::B] {
        let (adj, art) = match side {
            Side::A => (EdgeKind::AdjacencyA, EdgeKind::ArtificialA),
            Side::B => (EdgeKind::AdjacencyB, EdgeKind::ArtificialB),
        };
        let caps = out.caps[side.idx()].clone();
        let telomeres = out.telomeres[side.idx()].clone();
        for (t, &cap) in telomeres.iter().zip(&caps) {
            push_edge(&mut out.edges, *t, cap, adj);
        }
        for pair in caps[telomeres.len()..].chunks(2) {
            push_edge(&mut out.edges, pair[0], pair[1], art);
        }
    }
    let (caps_a, caps_b) = (out.caps[0].clone(), out.caps[1].clone());
    for &ca in &caps_a {
        for &cb in &caps_b {
            push_edge(&mut out.edges, ca, cb, EdgeKind::CapExtremity);
        }
    }
    out.capping = Some(plan);
    Ok(out)
}

impl MultiDiagram {
    pub fn families(&self) -> &[String] {
        &self.families
    }

    pub fn family_name(&self, family: usize) -> &str {
        &self.families[family]
    }

    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn occurrence(&self, id: usize) -> &Occurrence {
        &self.occurrences[id]
    }

    /// Global occurrence id of the `index`-th occurrence (reading order) of a genome.
    pub fn occurrence_id(&self, side: Side, index: usize) -> Option<usize> {
        let id = match side {
            Side::A => index,
            Side::B => self.a_len + index,
        };
        (self.occurrences.get(id)?.side == side).then_some(id)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn pairs(&self) -> &[SiblingPair] {
        &self.pairs
    }

    /// Sibling pairs incident to an occurrence.
    pub fn pairs_of(&self, occurrence: usize) -> &[usize] {
        &self.pairs_of[occurrence]
    }

    pub fn indel_edge_of(&self, occurrence: usize) -> Option<EdgeId> {
        self.indel_of[occurrence]
    }

    pub fn circular_chromosomes(&self) -> &[CircularChromosome] {
        &self.circulars
    }

    pub fn telomeres(&self, side: Side) -> &[VertexId] {
        &self.telomeres[side.idx()]
    }

    pub fn caps(&self, side: Side) -> &[VertexId] {
        &self.caps[side.idx()]
    }

    pub fn capping(&self) -> Option<CappingPlan> {
        self.capping
    }

    pub fn is_capped(&self) -> bool {
        self.capping.is_some()
    }

    pub fn p_star(&self) -> usize {
        self.capping.map_or(0, |p| p.p_star)
    }

    pub fn n_star(&self) -> usize {
        self.n_star
    }

    pub fn kappa(&self, side: Side) -> usize {
        self.kappa[side.idx()]
    }

    /// Id of the cap extremity edge joining the `i`-th A cap with the `j`-th B cap (0-based).
    pub fn cap_edge(&self, i: usize, j: usize) -> Option<EdgeId> {
        let k = self.caps[1].len();
        if i >= self.caps[0].len() || j >= k {
            return None;
        }
        Some(self.edges.len() - self.caps[0].len() * k + i * k + j)
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.kind == kind)
            .map(|(i, _)| i)
    }

    /// Short human-readable vertex label such as `A:3h` or `B:cap2`.
    pub fn vertex_label(&self, v: VertexId) -> String {
        let vx = &self.vertices[v];
        let side = match vx.side {
            Side::A => "A",
            Side::B => "B",
        };
        match vx.kind {
            VertexKind::Extremity { occurrence, end } => {
                let occ = &self.occurrences[occurrence];
                let e = match end {
                    End::Tail => "t",
                    End::Head => "h",
                };
                format!(
                    "{side}:{}{e}@{}",
                    self.families[occ.family],
                    occ.index + 1
                )
            }
            VertexKind::Cap { index } => format!("{side}:cap{index}"),
        }
    }

    /// Vertex degrees over all edges.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::{census, parse_genomes};

    fn pair(text: &str) -> (Genome, Genome) {
        let mut gs = parse_genomes(text).unwrap();
        let b = gs.pop().unwrap();
        (gs.pop().unwrap(), b)
    }

    fn count(d: &MultiDiagram, kind: EdgeKind) -> usize {
        d.edges_of_kind(kind).count()
    }

    #[test]
    fn natural_example_edge_counts() {
        let (a, b) = pair(">A\n1 3 2 -5 -4 3 5 4 |\n>B\n1 6 2 3 1 7 3 4 1 3 |");
        let c = census(&a, &b);
        let d = build_mrd(&a, &b, &c);
        assert_eq!(d.vertex_count(), 36);
        assert_eq!(count(&d, EdgeKind::AdjacencyA), 7);
        assert_eq!(count(&d, EdgeKind::AdjacencyB), 9);
        assert_eq!(count(&d, EdgeKind::Extremity), 24);
        let fam3 = d.families().iter().position(|f| f == "3").unwrap();
        let fam3_edges = d.pairs().iter().filter(|p| p.family == fam3).count() * 2;
        assert_eq!(fam3_edges, 12);
        assert_eq!(count(&d, EdgeKind::IndelA), 4);
        assert_eq!(count(&d, EdgeKind::IndelB), 8);
        assert_eq!(d.telomeres(Side::A).len(), 2);

        let capped = cap_mrd(&d, CappingPlan::from_census(&c)).unwrap();
        assert_eq!(capped.p_star(), 1);
        assert_eq!(capped.caps(Side::A).len(), 2);
        assert_eq!(capped.caps(Side::B).len(), 2);
        assert_eq!(count(&capped, EdgeKind::CapExtremity), 4);
        assert_eq!(count(&capped, EdgeKind::ArtificialA), 0);
        assert_eq!(count(&capped, EdgeKind::ArtificialB), 0);
        assert_eq!(count(&capped, EdgeKind::AdjacencyA), 9);
        let ca = capped.caps(Side::A)[1];
        let cb = capped.caps(Side::B)[0];
        let e = capped.edge(capped.cap_edge(1, 0).unwrap());
        assert_eq!((e.u, e.v), (ca, cb));
    }

    #[test]
    fn vertex_order_follows_reading_direction() {
        let (a, b) = pair(">A\n1 -2 |\n>B\n2 1 |");
        let d = build_mrd(&a, &b, &census(&a, &b));
        let labels: Vec<_> = (0..d.vertex_count()).map(|v| d.vertex_label(v)).collect();
        assert_eq!(
            labels,
            ["A:1t@1", "A:1h@1", "A:2h@2", "A:2t@2", "B:2t@1", "B:2h@1", "B:1t@2", "B:1h@2"]
        );
    }

    #[test]
    fn identical_singular_genomes_have_degree_two_or_less() {
        let (a, b) = pair(">A\n1 2 -3 |\n4 )\n>B\n1 2 -3 |\n4 )");
        let d = build_mrd(&a, &b, &census(&a, &b));
        assert!(d.degrees().iter().all(|&k| k <= 2));
        assert_eq!(count(&d, EdgeKind::IndelA) + count(&d, EdgeKind::IndelB), 0);
    }

    #[test]
    fn circular_singletons_have_parallel_edges() {
        let (a, b) = pair(">A\n6 )\n>B\n1 )");
        let c = census(&a, &b);
        let d = build_mrd(&a, &b, &c);
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(count(&d, EdgeKind::AdjacencyA) + count(&d, EdgeKind::AdjacencyB), 2);
        assert_eq!(count(&d, EdgeKind::IndelA) + count(&d, EdgeKind::IndelB), 2);
        assert_eq!(count(&d, EdgeKind::Extremity), 0);
        let adj = d.edge(0);
        let indel = d.edge(d.indel_edge_of(0).unwrap());
        assert_eq!((adj.u.min(adj.v), adj.u.max(adj.v)), (indel.u.min(indel.v), indel.u.max(indel.v)));
        assert!(d.circular_chromosomes().iter().all(|k| k.fully_indel()));
        let capped = cap_mrd(&d, CappingPlan::from_census(&c)).unwrap();
        assert_eq!(capped.vertex_count(), 4);
        assert_eq!(capped.edge_count(), d.edge_count());
    }

    #[test]
    fn artificial_adjacencies_fill_the_deficient_genome() {
        let (a, b) = pair(">A\n1 |\n>B\n1 )");
        let c = census(&a, &b);
        let plan = CappingPlan::from_census(&c);
        assert_eq!(plan, CappingPlan { p_star: 1, a_star: 1, artificial_side: Some(Side::B) });
        let capped = cap_mrd(&build_mrd(&a, &b, &c), plan).unwrap();
        let art: Vec<_> = capped.edges_of_kind(EdgeKind::ArtificialB).collect();
        assert_eq!(art.len(), 1);
        let e = capped.edge(art[0]);
        assert_eq!((e.u, e.v), (capped.caps(Side::B)[0], capped.caps(Side::B)[1]));
        assert!(cap_mrd(&capped, plan).is_err());
        assert!(cap_mrd(&build_mrd(&a, &b, &c), CappingPlan::new(2, 1)).is_err());
    }
}
