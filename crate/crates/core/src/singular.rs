//! Relational diagram of singular genomes, component classification and the
//! closed distance formula with the greedy recombination deduction.

use std::fmt;

use crate::diagram::{build_mrd, EdgeId, MultiDiagram, Side, VertexId};
use crate::error::{Error, Result};
use crate::genome::{census, Genome, MarkerCensus};

/// Relational diagram R(A, B): a multi-relational diagram in which every
/// common family occurs once per genome, so all edges are selected.
#[derive(Debug, Clone)]
pub struct RelationalDiagram(MultiDiagram);

impl RelationalDiagram {
    pub fn diagram(&self) -> &MultiDiagram {
        &self.0
    }

    pub fn into_inner(self) -> MultiDiagram {
        self.0
    }
}

pub fn build_relational_diagram(
    a: &Genome,
    b: &Genome,
    census: &MarkerCensus,
) -> Result<RelationalDiagram> {
    if let Some((family, c)) = census.first_duplicate() {
        return Err(Error::NotSingular {
            family: family.to_string(),
            occ_a: c.occ_a,
            occ_b: c.occ_b,
        });
    }
    Ok(RelationalDiagram(build_mrd(a, b, census)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    AbCycle,
    IndelOnlyCycle,
    AaPath,
    BbPath,
    AbPath,
}

impl ComponentKind {
    pub fn is_cycle(self) -> bool {
        matches!(self, ComponentKind::AbCycle | ComponentKind::IndelOnlyCycle)
    }
}

/// Genomes of the first and last runs of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathClass {
    Epsilon,
    A,
    B,
    AB,
    BA,
    NotApplicable,
}

impl fmt::Display for PathClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathClass::Epsilon => "eps",
            PathClass::A => "a",
            PathClass::B => "b",
            PathClass::AB => "ab",
            PathClass::BA => "ba",
            PathClass::NotApplicable => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// Edges in traversal order.
    pub edges: Vec<EdgeId>,
    /// Vertices in traversal order.
    pub vertices: Vec<VertexId>,
    /// Genome of each indel edge in traversal order.
    pub indel_sides: Vec<Side>,
    pub runs: usize,
    pub path_class: PathClass,
    pub circular_singleton: bool,
    pub linear_singleton: bool,
}

impl Component {
    pub fn indel_potential(&self) -> usize {
        indel_potential(self.runs)
    }

    pub fn is_indel_free(&self) -> bool {
        self.indel_sides.is_empty()
    }

    /// Indel-free subpaths flanked by indel edges of different genomes.
    pub fn transitions(&self) -> usize {
        let s = &self.indel_sides;
        if s.len() < 2 {
            return 0;
        }
        let inner = s.windows(2).filter(|w| w[0] != w[1]).count();
        let wrap = self.kind.is_cycle() && s[0] != s[s.len() - 1];
        inner + usize::from(wrap)
    }
}

/// Indel-potential: 0 for no runs, otherwise the ceiling of (runs + 1) / 2.
pub fn indel_potential(runs: usize) -> usize {
    if runs == 0 {
        0
    } else {
        (runs + 2) / 2
    }
}

fn count_runs(sides: &[Side], cyclic: bool) -> usize {
    if sides.is_empty() {
        return 0;
    }
    let changes = sides.windows(2).filter(|w| w[0] != w[1]).count();
    if !cyclic {
        return changes + 1;
    }
    let changes = changes + usize::from(sides[0] != sides[sides.len() - 1]);
    changes.max(1)
}

fn classify_path(sides: &[Side], kind: ComponentKind) -> PathClass {
    let (Some(&first), Some(&last)) = (sides.first(), sides.last()) else {
        return PathClass::Epsilon;
    };
    match (first, last) {
        (Side::A, Side::A) => PathClass::A,
        (Side::B, Side::B) => PathClass::B,
        (Side::A, Side::B) => PathClass::AB,
        (Side::B, Side::A) if kind == ComponentKind::AbPath => PathClass::BA,
        (Side::B, Side::A) => PathClass::AB,
    }
}

/// Splits the subgraph formed by `edges` into cycles and paths. Every vertex
/// must have degree at most two in the subgraph; vertices not touched by any
/// selected edge are ignored.
pub fn trace_components(d: &MultiDiagram, edges: &[EdgeId]) -> Result<Vec<Component>> {
    let n = d.vertex_count();
    let mut inc: Vec<[Option<EdgeId>; 2]> = vec![[None, None]; n];
    for &e in edges {
        let edge = d.edge(e);
        for w in [edge.u, edge.v] {
            let slot = &mut inc[w];
            if slot[0].is_none() {
                slot[0] = Some(e);
            } else if slot[1].is_none() {
                slot[1] = Some(e);
            } else {
                return Err(Error::InvalidSiblingSet(format!(
                    "vertex {} has degree above two",
                    d.vertex_label(w)
                )));
            }
        }
    }
    let degree = |w: VertexId| inc[w].iter().flatten().count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();

    // Paths: start from degree-1 vertices in id order; AB-paths from the A end.
    for start in 0..n {
        if seen[start] || degree(start) != 1 {
            continue;
        }
        let (vs, es) = walk(d, &inc, start);
        let end = *vs.last().unwrap();
        let (sa, sb) = (d.vertices()[start].side, d.vertices()[end].side);
        let (vs, es) = if sa == Side::B && sb == Side::A {
            let mut vs = vs;
            let mut es = es;
            vs.reverse();
            es.reverse();
            (vs, es)
        } else {
            (vs, es)
        };
        for &v in &vs {
            seen[v] = true;
        }
        let kind = match (sa, sb) {
            (Side::A, Side::A) => ComponentKind::AaPath,
            (Side::B, Side::B) => ComponentKind::BbPath,
            _ => ComponentKind::AbPath,
        };
        out.push(finish(d, kind, vs, es));
    }
    for start in 0..n {
        if seen[start] || degree(start) == 0 {
            continue;
        }
        let (mut vs, es) = walk(d, &inc, start);
        vs.pop(); // closing vertex repeats the start
        for &v in &vs {
            seen[v] = true;
        }
        let kind = if es.iter().any(|&e| d.edge(e).kind.is_crossing()) {
            ComponentKind::AbCycle
        } else {
            ComponentKind::IndelOnlyCycle
        };
        out.push(finish(d, kind, vs, es));
    }
    Ok(out)
}

fn walk(
    d: &MultiDiagram,
    inc: &[[Option<EdgeId>; 2]],
    start: VertexId,
) -> (Vec<VertexId>, Vec<EdgeId>) {
    let mut vs = vec![start];
    let mut es = Vec::new();
    // on cycles the lower edge id decides the direction
    let mut next = match inc[start] {
        [Some(x), Some(y)] => Some(x.min(y)),
        [x, _] => x,
    };
    let mut cur = start;
    while let Some(e) = next {
        es.push(e);
        cur = d.edge(e).other(cur);
        vs.push(cur);
        if cur == start {
            break;
        }
        next = inc[cur].iter().flatten().copied().find(|&f| f != e);
    }
    (vs, es)
}

fn finish(d: &MultiDiagram, kind: ComponentKind, vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Component {
    let indel_sides: Vec<Side> = edges
        .iter()
        .filter_map(|&e| d.edge(e).kind.indel_side())
        .collect();
    let cyclic = kind.is_cycle();
    let runs = count_runs(&indel_sides, cyclic);
    let no_crossing = !edges.iter().any(|&e| d.edge(e).kind.is_crossing());
    let path_class = if cyclic {
        PathClass::NotApplicable
    } else {
        classify_path(&indel_sides, kind)
    };
    Component {
        kind,
        runs,
        path_class,
        circular_singleton: cyclic && no_crossing && !indel_sides.is_empty(),
        linear_singleton: !cyclic && no_crossing && !indel_sides.is_empty(),
        edges,
        vertices,
        indel_sides,
    }
}

/// Components of the relational diagram (all of its edges).
pub fn decompose_components(d: &RelationalDiagram) -> Vec<Component> {
    let all: Vec<EdgeId> = (0..d.0.edge_count()).collect();
    trace_components(&d.0, &all).expect("relational diagrams have maximum degree two")
}

/// Counters of indel-enclosing paths that can take part in recombinations.
/// `w*` count AA-paths, `m*` BB-paths; the suffix gives the path class.
/// `z` counts AB-paths of class ab and `n` those of class ba.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PathCounts {
    pub w: usize,
    pub wa: usize,
    pub wb: usize,
    pub m: usize,
    pub ma: usize,
    pub mb: usize,
    pub z: usize,
    pub n: usize,
}

impl PathCounts {
    pub fn to_array(self) -> [usize; 8] {
        [self.w, self.wa, self.wb, self.m, self.ma, self.mb, self.z, self.n]
    }

    pub fn from_array(c: [usize; 8]) -> Self {
        PathCounts {
            w: c[0],
            wa: c[1],
            wb: c[2],
            m: c[3],
            ma: c[4],
            mb: c[5],
            z: c[6],
            n: c[7],
        }
    }

    pub fn from_components<'a>(components: impl IntoIterator<Item = &'a Component>) -> Self {
        let mut c = PathCounts::default();
        for comp in components {
            let slot = match (comp.kind, comp.path_class) {
                (ComponentKind::AaPath, PathClass::AB) => &mut c.w,
                (ComponentKind::AaPath, PathClass::A) => &mut c.wa,
                (ComponentKind::AaPath, PathClass::B) => &mut c.wb,
                (ComponentKind::BbPath, PathClass::AB) => &mut c.m,
                (ComponentKind::BbPath, PathClass::A) => &mut c.ma,
                (ComponentKind::BbPath, PathClass::B) => &mut c.mb,
                (ComponentKind::AbPath, PathClass::AB) => &mut c.z,
                (ComponentKind::AbPath, PathClass::BA) => &mut c.n,
                _ => continue,
            };
            *slot += 1;
        }
        c
    }

    /// Counters with the roles of the two genomes exchanged. An AB-path is
    /// then read from its other end, so its class is preserved.
    pub fn swapped(self) -> Self {
        PathCounts {
            w: self.m,
            wa: self.mb,
            wb: self.ma,
            m: self.w,
            ma: self.wb,
            mb: self.wa,
            z: self.z,
            n: self.n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    P,
    Q,
    T,
    S,
    M,
    N,
}

impl Part {
    pub const ALL: [Part; 6] = [Part::P, Part::Q, Part::T, Part::S, Part::M, Part::N];

    pub fn deduction(self) -> usize {
        match self {
            Part::P => 2,
            Part::Q => 3,
            Part::T => 2,
            Part::S => 1,
            Part::M => 2,
            Part::N => 1,
        }
    }
}

/// A chained recombination group: path counters consumed by one application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecombinationGroup {
    pub id: &'static str,
    pub part: Part,
    /// Consumption in counter order W, WA, WB, M, MA, MB, Z, N.
    pub needs: [usize; 8],
}

const fn group(id: &'static str, part: Part, needs: [usize; 8]) -> RecombinationGroup {
    RecombinationGroup { id, part, needs }
}

/// All groups in the order of greedy application.
pub const GROUPS: [RecombinationGroup; 32] = [
    group("WM", Part::P, [1, 0, 0, 1, 0, 0, 0, 0]),
    group("WWMAMB", Part::Q, [2, 0, 0, 0, 1, 1, 0, 0]),
    group("MMWAWB", Part::Q, [0, 1, 1, 2, 0, 0, 0, 0]),
    group("WZMA", Part::T, [1, 0, 0, 0, 1, 0, 1, 0]),
    group("WWMA", Part::T, [2, 0, 0, 0, 1, 0, 0, 0]),
    group("WNMB", Part::T, [1, 0, 0, 0, 0, 1, 0, 1]),
    group("WWMB", Part::T, [2, 0, 0, 0, 0, 1, 0, 0]),
    group("MNWA", Part::T, [0, 1, 0, 1, 0, 0, 0, 1]),
    group("MMWA", Part::T, [0, 1, 0, 2, 0, 0, 0, 0]),
    group("MZWB", Part::T, [0, 0, 1, 1, 0, 0, 1, 0]),
    group("MMWB", Part::T, [0, 0, 1, 2, 0, 0, 0, 0]),
    group("ZN", Part::S, [0, 0, 0, 0, 0, 0, 1, 1]),
    group("WAMA", Part::S, [0, 1, 0, 0, 1, 0, 0, 0]),
    group("WBMB", Part::S, [0, 0, 1, 0, 0, 1, 0, 0]),
    group("WMA", Part::S, [1, 0, 0, 0, 1, 0, 0, 0]),
    group("WMB", Part::S, [1, 0, 0, 0, 0, 1, 0, 0]),
    group("WZ", Part::S, [1, 0, 0, 0, 0, 0, 1, 0]),
    group("WN", Part::S, [1, 0, 0, 0, 0, 0, 0, 1]),
    group("WW", Part::S, [2, 0, 0, 0, 0, 0, 0, 0]),
    group("MWA", Part::S, [0, 1, 0, 1, 0, 0, 0, 0]),
    group("MWB", Part::S, [0, 0, 1, 1, 0, 0, 0, 0]),
    group("MZ", Part::S, [0, 0, 0, 1, 0, 0, 1, 0]),
    group("MN", Part::S, [0, 0, 0, 1, 0, 0, 0, 1]),
    group("MM", Part::S, [0, 0, 0, 2, 0, 0, 0, 0]),
    group("ZZWBMA", Part::M, [0, 0, 1, 0, 1, 0, 2, 0]),
    group("NNWAMB", Part::M, [0, 1, 0, 0, 0, 1, 0, 2]),
    group("ZWBMA", Part::N, [0, 0, 1, 0, 1, 0, 1, 0]),
    group("ZZWB", Part::N, [0, 0, 1, 0, 0, 0, 2, 0]),
    group("ZZMA", Part::N, [0, 0, 0, 0, 1, 0, 2, 0]),
    group("NWAMB", Part::N, [0, 1, 0, 0, 0, 1, 0, 1]),
    group("NNWA", Part::N, [0, 1, 0, 0, 0, 0, 0, 2]),
    group("NNMB", Part::N, [0, 0, 0, 0, 0, 1, 0, 2]),
];

/// Result of greedy group application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTally {
    pub counts: PathCounts,
    /// Applications per entry of [`GROUPS`].
    pub applied: [usize; 32],
    pub delta: usize,
}

impl GroupTally {
    pub fn part_count(&self, part: Part) -> usize {
        GROUPS
            .iter()
            .zip(&self.applied)
            .filter(|(g, _)| g.part == part)
            .map(|(_, &k)| k)
            .sum()
    }
}

/// Applies each group top-down as often as the remaining counters allow.
pub fn greedy_delta(counts: PathCounts) -> GroupTally {
    let mut left = counts.to_array();
    let mut applied = [0; 32];
    let mut delta = 0;
    for (gi, g) in GROUPS.iter().enumerate() {
        let times = g
            .needs
            .iter()
            .zip(&left)
            .filter(|(&need, _)| need > 0)
            .map(|(&need, &have)| have / need)
            .min()
            .unwrap_or(0);
        if times == 0 {
            continue;
        }
        for (l, need) in left.iter_mut().zip(g.needs) {
            *l -= need * times;
        }
        applied[gi] = times;
        delta += times * g.part.deduction();
    }
    GroupTally {
        counts,
        applied,
        delta,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularBreakdown {
    pub common: usize,
    pub cycles: usize,
    pub ab_paths: usize,
    pub lambda_sum: usize,
    pub tally: GroupTally,
}

impl SingularBreakdown {
    pub fn from_components(common: usize, components: &[Component]) -> Self {
        let cycles = components
            .iter()
            .filter(|c| c.kind == ComponentKind::AbCycle)
            .count();
        let ab_paths = components
            .iter()
            .filter(|c| c.kind == ComponentKind::AbPath)
            .count();
        let lambda_sum = components.iter().map(Component::indel_potential).sum();
        let tally = greedy_delta(PathCounts::from_components(components));
        SingularBreakdown {
            common,
            cycles,
            ab_paths,
            lambda_sum,
            tally,
        }
    }

    pub fn delta(&self) -> usize {
        self.tally.delta
    }

    /// Twice the weight c + i/2 − Σλ + δ.
    pub fn weight_x2(&self) -> i64 {
        2 * self.cycles as i64 + self.ab_paths as i64 - 2 * self.lambda_sum as i64
            + 2 * self.tally.delta as i64
    }

    /// |G| − c − i/2 + Σλ − δ.
    pub fn distance(&self) -> i64 {
        (2 * self.common as i64 - self.weight_x2()) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularDistance {
    pub distance: i64,
    pub breakdown: SingularBreakdown,
    pub components: Vec<Component>,
}

pub fn singular_distance(a: &Genome, b: &Genome) -> Result<SingularDistance> {
    let c = census(a, b);
    let d = build_relational_diagram(a, b, &c)?;
    let components = decompose_components(&d);
    let breakdown = SingularBreakdown::from_components(c.common_count(), &components);
    Ok(SingularDistance {
        distance: breakdown.distance(),
        breakdown,
        components,
    })
}

/// |G| − c + Σλ for singular genomes made of circular chromosomes only.
pub fn circular_distance(a: &Genome, b: &Genome) -> Result<i64> {
    let c = census(a, b);
    let d = build_relational_diagram(a, b, &c)?;
    for g in [a, b] {
        if !g.is_all_circular() {
            return Err(Error::NotCircular(g.name.clone()));
        }
    }
    let components = decompose_components(&d);
    let cycles = components
        .iter()
        .filter(|c| c.kind == ComponentKind::AbCycle)
        .count() as i64;
    let lambda: usize = components.iter().map(Component::indel_potential).sum();
    Ok(c.common_count() as i64 - cycles + lambda as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::parse_genomes;
    use proptest::prelude::*;

    fn pair(text: &str) -> (Genome, Genome) {
        let mut gs = parse_genomes(text).unwrap();
        let b = gs.pop().unwrap();
        (gs.pop().unwrap(), b)
    }

    fn kinds(cs: &[Component]) -> [usize; 5] {
        let mut k = [0; 5];
        for c in cs {
            k[c.kind as usize] += 1;
        }
        k
    }

    #[test]
    fn mixed_example_census() {
        let (a, b) = pair(">A\n1 -6 5 3 |\n4 2 |\n>B\n1 7 2 3 4 5 |\n7 -8 |");
        let d = build_relational_diagram(&a, &b, &census(&a, &b)).unwrap();
        let cs = decompose_components(&d);
        // AbCycle, IndelOnlyCycle, AaPath, BbPath, AbPath
        assert_eq!(kinds(&cs), [1, 0, 1, 1, 2]);
        let covered: usize = cs.iter().map(|c| c.vertices.len()).sum();
        assert_eq!(covered, d.diagram().vertex_count());
    }

    #[test]
    fn four_runs_on_a_bb_path() {
        let (a, b) = pair(">A\n2 x 1 4 y 3 |\n>B\n1 2 u 3 4 v |");
        let d = build_relational_diagram(&a, &b, &census(&a, &b)).unwrap();
        let cs = decompose_components(&d);
        let bb: Vec<_> = cs.iter().filter(|c| c.kind == ComponentKind::BbPath).collect();
        assert_eq!(bb.len(), 1);
        assert_eq!(bb[0].runs, 4);
        assert_eq!(bb[0].path_class, PathClass::AB);
        assert_eq!(bb[0].indel_potential(), 3);
    }

    #[test]
    fn identity_single_marker_cycle() {
        let (a, b) = pair(">A\n1 )\n>B\n1 )");
        let d = build_relational_diagram(&a, &b, &census(&a, &b)).unwrap();
        let cs = decompose_components(&d);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].kind, ComponentKind::AbCycle);
        assert_eq!(cs[0].edges.len(), 4);
    }

    #[test]
    fn pure_deletion_is_a_linear_singleton() {
        let (a, b) = pair(">A\n1 |\n>B\n");
        let r = singular_distance(&a, &b).unwrap();
        assert_eq!(r.components.len(), 1);
        let c = &r.components[0];
        assert_eq!((c.kind, c.runs, c.path_class), (ComponentKind::AaPath, 1, PathClass::A));
        assert!(c.linear_singleton);
        assert_eq!(r.distance, 1);
    }

    #[test]
    fn circular_singletons_are_indel_only_cycles() {
        let (a, b) = pair(">A\n6 )\n>B\n1 )");
        let r = singular_distance(&a, &b).unwrap();
        assert!(r.components.iter().all(|c| c.kind == ComponentKind::IndelOnlyCycle && c.circular_singleton));
        assert_eq!(r.distance, 2);
        assert_eq!(circular_distance(&a, &b).unwrap(), 2);
    }

    #[test]
    fn potential_table() {
        let got: Vec<_> = (0..6).map(indel_potential).collect();
        assert_eq!(got, [0, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn greedy_examples() {
        let t = greedy_delta(PathCounts { w: 1, m: 1, ..Default::default() });
        assert_eq!((t.part_count(Part::P), t.delta), (1, 2));
        let t = greedy_delta(PathCounts { w: 2, ma: 1, mb: 1, ..Default::default() });
        assert_eq!((t.part_count(Part::Q), t.delta), (1, 3));
        let t = greedy_delta(PathCounts { z: 1, n: 1, ..Default::default() });
        assert_eq!((t.part_count(Part::S), t.delta), (1, 1));
        let t = greedy_delta(PathCounts { w: 2, ma: 1, z: 1, ..Default::default() });
        assert_eq!(t.delta, 2);
        assert_eq!(greedy_delta(PathCounts::default()).delta, 0);
    }

    #[test]
    fn delta_decomposes_by_part() {
        let t = greedy_delta(PathCounts::from_array([3, 1, 2, 1, 2, 0, 3, 1]));
        let sum: usize = Part::ALL.iter().map(|&p| p.deduction() * t.part_count(p)).sum();
        assert_eq!(sum, t.delta);
    }

    #[test]
    fn distance_examples() {
        let (a, b) = pair(">A\n2 1 |\n4 3 |\n>B\n1 2 |\n3 4 |");
        let r = singular_distance(&a, &b).unwrap();
        assert_eq!(r.distance, 4);
        assert_eq!(r.breakdown.cycles, 0);
        assert_eq!(r.breakdown.ab_paths, 0);

        let (a, b) = pair(">A\n1 2 )\n>B\n1 -2 )");
        assert_eq!(circular_distance(&a, &b).unwrap(), 1);
        assert_eq!(singular_distance(&a, &b).unwrap().distance, 1);

        let (a, b) = pair(">A\n1 2 )\n>B\n1 2 )");
        assert_eq!(circular_distance(&a, &b).unwrap(), 0);
    }

    #[test]
    fn errors() {
        let (a, b) = pair(">A\n1 1 |\n>B\n1 |");
        assert!(matches!(singular_distance(&a, &b), Err(Error::NotSingular { .. })));
        let (a, b) = pair(">A\n1 |\n>B\n1 )");
        assert!(matches!(circular_distance(&a, &b), Err(Error::NotCircular(_))));
        // repeated exclusive markers stay singular
        let (a, b) = pair(">A\n1 x x |\n>B\n1 |");
        assert_eq!(singular_distance(&a, &b).unwrap().distance, 1);
    }

    #[test]
    fn swapping_counters_swaps_groups() {
        for g in GROUPS {
            let c = PathCounts::from_array(g.needs);
            let swapped = c.swapped();
            assert!(
                GROUPS.iter().any(|h| h.needs == swapped.to_array() && h.part == g.part),
                "{} has no mirror",
                g.id
            );
        }
    }

    fn arb_singular_pair() -> impl Strategy<Value = (Genome, Genome)> {
        use crate::genome::{Chromosome, Marker};
        let chroms = |names: Vec<String>, flips: Vec<bool>, cuts: Vec<usize>, circ: Vec<bool>| {
            let mut ms: Vec<Marker> = names
                .into_iter()
                .zip(flips)
                .map(|(n, f)| {
                    let m = Marker::forward(n).unwrap();
                    if f { m.reversed() } else { m }
                })
                .collect();
            let mut out = Vec::new();
            let mut k = 0;
            while !ms.is_empty() {
                let take = (cuts[k % cuts.len()] % ms.len()) + 1;
                let rest = ms.split_off(take);
                out.push(if circ[k % circ.len()] {
                    Chromosome::circular(ms).unwrap()
                } else {
                    Chromosome::linear(ms).unwrap()
                });
                ms = rest;
                k += 1;
            }
            out
        };
        (
            Just((1..=7).map(|i| i.to_string()).collect::<Vec<_>>()).prop_shuffle(),
            Just((1..=7).map(|i| i.to_string()).collect::<Vec<_>>()).prop_shuffle(),
            0usize..3,
            0usize..3,
            prop::collection::vec(any::<bool>(), 10),
            prop::collection::vec(any::<bool>(), 10),
            prop::collection::vec(0usize..5, 4),
            prop::collection::vec(any::<bool>(), 4),
        )
            .prop_map(move |(mut fa, mut fb, xa, xb, fla, flb, cuts, circ)| {
                fa.truncate(5);
                fb.truncate(5);
                fa.extend((0..xa).map(|i| format!("a{i}")));
                fb.extend((0..xb).map(|i| format!("b{i}")));
                let na = fa.len();
                let nb = fb.len();
                let a = Genome::new("A", chroms(fa, fla[..na].to_vec(), cuts.clone(), circ.clone()));
                let b = Genome::new("B", chroms(fb, flb[..nb].to_vec(), cuts.iter().rev().copied().collect(), circ.clone()));
                (a, b)
            })
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded((a, b) in arb_singular_pair()) {
            let ab = singular_distance(&a, &b).unwrap();
            let ba = singular_distance(&b, &a).unwrap();
            prop_assert_eq!(ab.distance, ba.distance);
            prop_assert!(ab.distance >= 0);
            prop_assert_eq!(ab.breakdown.ab_paths % 2, 0);
            let br = &ab.breakdown;
            let upper = (2 * br.common as i64 - 2 * br.cycles as i64 - br.ab_paths as i64) / 2
                + br.lambda_sum as i64;
            prop_assert!(ab.distance <= upper);
            for c in &ab.components {
                prop_assert!(indel_potential(c.runs) <= c.runs);
                if c.runs >= 1 {
                    prop_assert_eq!(indel_potential(c.runs + 2), indel_potential(c.runs) + 1);
                }
                prop_assert_eq!(c.runs == 0, c.is_indel_free());
            }
            if a.is_all_circular() && b.is_all_circular() {
                prop_assert_eq!(circular_distance(&a, &b).unwrap(), ab.distance);
            }
            prop_assert_eq!(singular_distance(&a, &a).unwrap().distance, 0);
        }
    }
}
