//! Sibling sets, cap matchings and the decompositions they induce.

use std::fmt;

use crate::diagram::{EdgeId, MultiDiagram, Side};
use crate::error::{Error, Result};
use crate::singular::{trace_components, Component, ComponentKind, SingularBreakdown};

/// A set of sibling pairs, no two of them sharing an occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SiblingSet {
    pairs: Vec<usize>,
}

impl SiblingSet {
    pub fn new(d: &MultiDiagram, mut pairs: Vec<usize>) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut used = vec![false; d.occurrences().len()];
        for &p in &pairs {
            let pair = d
                .pairs()
                .get(p)
                .ok_or_else(|| Error::InvalidSiblingSet(format!("unknown sibling pair {p}")))?;
            for occ in [pair.a, pair.b] {
                if std::mem::replace(&mut used[occ], true) {
                    return Err(Error::InvalidSiblingSet(format!(
                        "occurrence {} of family {} is matched twice",
                        d.occurrence(occ).index + 1,
                        d.family_name(pair.family)
                    )));
                }
            }
        }
        Ok(SiblingSet { pairs })
    }

    /// Builds a set from occurrence pairs given as 0-based reading-order
    /// indices within A and within B.
    pub fn from_matching(d: &MultiDiagram, matching: &[(usize, usize)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(matching.len());
        for &(ia, ib) in matching {
            let bad = || Error::InvalidSiblingSet(format!("no sibling pair joins A[{ia}] and B[{ib}]"));
            let oa = d.occurrence_id(Side::A, ia).ok_or_else(bad)?;
            let ob = d.occurrence_id(Side::B, ib).ok_or_else(bad)?;
            let p = d
                .pairs_of(oa)
                .iter()
                .copied()
                .find(|&p| d.pairs()[p].b == ob)
                .ok_or_else(bad)?;
            pairs.push(p);
        }
        Self::new(d, pairs)
    }

    pub fn pairs(&self) -> &[usize] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Selected sibling edges, tail edge before head edge.
    pub fn edges(&self, d: &MultiDiagram) -> Vec<EdgeId> {
        self.pairs
            .iter()
            .flat_map(|&p| [d.pairs()[p].tail, d.pairs()[p].head])
            .collect()
    }

    /// Matched occurrences as 0-based reading-order indices (A, B).
    pub fn matching(&self, d: &MultiDiagram) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .map(|&p| {
                let pair = &d.pairs()[p];
                (d.occurrence(pair.a).index, d.occurrence(pair.b).index)
            })
            .collect()
    }

    /// True when every common family is matched as often as its scarcer genome allows.
    pub fn is_maximal(&self, d: &MultiDiagram) -> bool {
        let fams = d.families().len();
        let mut matched = vec![0usize; fams];
        for &p in &self.pairs {
            matched[d.pairs()[p].family] += 1;
        }
        let mut occ = vec![[0usize; 2]; fams];
        for o in d.occurrences() {
            occ[o.family][o.side as usize] += 1;
        }
        occ.iter()
            .zip(&matched)
            .all(|(c, &m)| m == c[0].min(c[1]))
    }

    /// Whether each occurrence is covered by a selected pair.
    pub fn matched_occurrences(&self, d: &MultiDiagram) -> Vec<bool> {
        let mut used = vec![false; d.occurrences().len()];
        for &p in &self.pairs {
            used[d.pairs()[p].a] = true;
            used[d.pairs()[p].b] = true;
        }
        used
    }
}

/// A perfect matching between the caps of A and those of B: A cap `i` is
/// joined to B cap `partner[i]` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CapMatching {
    partner: Vec<usize>,
}

impl CapMatching {
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; partner.len()];
        for &j in &partner {
            if j >= partner.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidCapping(format!(
                    "{partner:?} is not a permutation"
                )));
            }
        }
        Ok(CapMatching { partner })
    }

    pub fn identity(n: usize) -> Self {
        CapMatching {
            partner: (0..n).collect(),
        }
    }

    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    pub fn edges(&self, d: &MultiDiagram) -> Result<Vec<EdgeId>> {
        if self.partner.len() != d.caps(Side::A).len() {
            return Err(Error::InvalidCapping(format!(
                "matching covers {} caps but the diagram has {}",
                self.partner.len(),
                d.caps(Side::A).len()
            )));
        }
        Ok(self
            .partner
            .iter()
            .enumerate()
            .map(|(i, &j)| d.cap_edge(i, j).expect("cap indices checked"))
            .collect())
    }
}

/// Components statistics of a capped decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CappedScore {
    pub ab_cycles: usize,
    pub indel_free_cycles: usize,
    pub transitions: usize,
    pub circular_singletons: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Score {
    Uncapped(SingularBreakdown),
    Capped(CappedScore),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredDecomposition {
    pub edges: Vec<EdgeId>,
    pub components: Vec<Component>,
    pub score: Score,
    /// Twice the weight, so that it stays integral.
    pub weight_x2: i64,
    pub distance: i64,
}

impl ScoredDecomposition {
    pub fn weight(&self) -> f64 {
        self.weight_x2 as f64 / 2.0
    }
}

/// Weight with denominator at most two, printed as an integer or `k.5`.
pub struct HalfInteger(pub i64);

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        if x % 2 == 0 {
            write!(f, "{}", x / 2)
        } else {
            let sign = if x < 0 { "-" } else { "" };
            write!(f, "{sign}{}.5", x.abs() / 2)
        }
    }
}

/// Number of indel-free subpaths of a cycle flanked by indel edges of
/// different genomes.
pub fn transitions(component: &Component) -> usize {
    component.transitions()
}

/// Indel-potential of a cycle recomputed from its transitions.
pub fn lambda_via_transitions(component: &Component) -> usize {
    transitions(component) / 2 + usize::from(component.runs >= 1)
}

/// Selects adjacencies, the sibling set and the cap matching, then the indel
/// edge of every occurrence left unmatched, and scores the result.
pub fn induce_decomposition(
    d: &MultiDiagram,
    s: &SiblingSet,
    caps: Option<&CapMatching>,
) -> Result<ScoredDecomposition> {
    if !s.is_maximal(d) {
        return Err(Error::InvalidSiblingSet("sibling set is not maximal".into()));
    }
    let mut edges: Vec<EdgeId> = d
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind.is_adjacency())
        .map(|(i, _)| i)
        .collect();
    edges.extend(s.edges(d));
    match (d.is_capped(), caps) {
        (true, Some(p)) => edges.extend(p.edges(d)?),
        (true, None) => {
            return Err(Error::InvalidCapping("capped diagram needs a cap matching".into()))
        }
        (false, Some(_)) => {
            return Err(Error::InvalidCapping("uncapped diagram takes no cap matching".into()))
        }
        (false, None) => {}
    }
    let matched = s.matched_occurrences(d);
    for (occ, m) in matched.iter().enumerate() {
        if !m {
            if let Some(e) = d.indel_edge_of(occ) {
                edges.push(e);
            }
        }
    }
    let components = trace_components(d, &edges)?;
    Ok(score(d, edges, components))
}

fn score(d: &MultiDiagram, edges: Vec<EdgeId>, components: Vec<Component>) -> ScoredDecomposition {
    if d.is_capped() {
        debug_assert!(components.iter().all(|c| c.kind.is_cycle()));
        let sc = CappedScore {
            ab_cycles: components
                .iter()
                .filter(|c| c.kind == ComponentKind::AbCycle)
                .count(),
            indel_free_cycles: components
                .iter()
                .filter(|c| c.kind == ComponentKind::AbCycle && c.is_indel_free())
                .count(),
            transitions: components.iter().map(transitions).sum(),
            circular_singletons: components.iter().filter(|c| c.circular_singleton).count(),
        };
        let weight_x2 =
            2 * sc.indel_free_cycles as i64 - sc.transitions as i64 - 2 * sc.circular_singletons as i64;
        let total = (d.n_star() + d.p_star()) as i64;
        ScoredDecomposition {
            edges,
            components,
            score: Score::Capped(sc),
            weight_x2,
            distance: (2 * total - weight_x2) / 2,
        }
    } else {
        let br = SingularBreakdown::from_components(d.n_star(), &components);
        let weight_x2 = br.weight_x2();
        ScoredDecomposition {
            edges,
            components,
            distance: (2 * d.n_star() as i64 - weight_x2) / 2,
            weight_x2,
            score: Score::Uncapped(br),
        }
    }
}
