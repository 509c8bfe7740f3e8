//! Exact distances for small instances by enumerating maximal sibling sets,
//! and an exhaustive search for the path-recombination bonus.

use std::collections::HashMap;

use crate::decomposition::{induce_decomposition, CapMatching, ScoredDecomposition, SiblingSet};
use crate::diagram::{build_mrd, cap_mrd, CappingPlan, MultiDiagram, Side};
use crate::error::{Error, Result};
use crate::genome::{census, Genome};
use crate::ilp::{build_ilp_with, objective_x2, optimal_completion, violated_constraint, IlpOptions};
use crate::singular::PathCounts;

pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// All `k`-permutations of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct InjectiveAssignments {
    n: usize,
    current: Option<Vec<usize>>,
}

impl InjectiveAssignments {
    pub fn new(n: usize, k: usize) -> Self {
        InjectiveAssignments {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for InjectiveAssignments {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for i in (0..next.len()).rev() {
            if let Some(v) = (next[i] + 1..self.n).find(|v| !next[..i].contains(v)) {
                next[i] = v;
                for j in i + 1..next.len() {
                    next[j] = (0..self.n).find(|v| !next[..j].contains(v)).expect("k <= n");
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

fn falling_factorial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128))
}

/// Occurrence ids of each common family, as (A side, B side) in reading order.
fn common_occurrences(d: &MultiDiagram) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut by_family = vec![(Vec::new(), Vec::new()); d.families().len()];
    for (id, occ) in d.occurrences().iter().enumerate() {
        match occ.side {
            Side::A => by_family[occ.family].0.push(id),
            Side::B => by_family[occ.family].1.push(id),
        }
    }
    let mut order: Vec<usize> = (0..by_family.len()).collect();
    order.sort_by(|&x, &y| d.family_name(x).cmp(d.family_name(y)));
    order
        .into_iter()
        .map(|f| std::mem::take(&mut by_family[f]))
        .filter(|(a, b)| !a.is_empty() && !b.is_empty())
        .collect()
}

/// Number of maximal sibling sets (saturating).
pub fn count_max_sibling_sets(d: &MultiDiagram) -> u128 {
    common_occurrences(d).iter().fold(1u128, |acc, (a, b)| {
        acc.saturating_mul(falling_factorial(a.len().max(b.len()), a.len().min(b.len())))
    })
}

/// Streams every maximal sibling set once. Families are taken in
/// lexicographic order of their names, each contributing its injective
/// assignments in lexicographic order, the last family varying fastest.
pub struct MaxSiblingSets<'a> {
    d: &'a MultiDiagram,
    options: Vec<Vec<Vec<usize>>>,
    odometer: Option<Vec<usize>>,
}

impl Iterator for MaxSiblingSets<'_> {
    type Item = SiblingSet;

    fn next(&mut self) -> Option<SiblingSet> {
        let odo = self.odometer.as_mut()?;
        let pairs: Vec<usize> = odo
            .iter()
            .zip(&self.options)
            .flat_map(|(&i, opts)| opts[i].iter().copied())
            .collect();
        let mut k = odo.len();
        loop {
            if k == 0 {
                self.odometer = None;
                break;
            }
            k -= 1;
            odo[k] += 1;
            if odo[k] < self.options[k].len() {
                break;
            }
            odo[k] = 0;
        }
        Some(SiblingSet::new(self.d, pairs).expect("injective assignments never share occurrences"))
    }
}

pub fn enumerate_max_sibling_sets(d: &MultiDiagram, budget: u128) -> Result<MaxSiblingSets<'_>> {
    let count = count_max_sibling_sets(d);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let pair_of = |oa: usize, ob: usize| {
        d.pairs_of(oa)
            .iter()
            .copied()
            .find(|&p| d.pairs()[p].b == ob)
            .expect("common occurrences are siblings")
    };
    let options = common_occurrences(d)
        .into_iter()
        .map(|(a, b)| {
            if a.len() <= b.len() {
                InjectiveAssignments::new(b.len(), a.len())
                    .map(|img| a.iter().zip(&img).map(|(&oa, &j)| pair_of(oa, b[j])).collect())
                    .collect()
            } else {
                InjectiveAssignments::new(a.len(), b.len())
                    .map(|img| b.iter().zip(&img).map(|(&ob, &j)| pair_of(a[j], ob)).collect())
                    .collect()
            }
        })
        .collect::<Vec<Vec<Vec<usize>>>>();
    Ok(MaxSiblingSets {
        d,
        odometer: Some(vec![0; options.len()]),
        options,
    })
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub distance: i64,
    pub sibling_set: SiblingSet,
    pub decomposition: ScoredDecomposition,
    pub sets_scored: u128,
}

/// Best uncapped decomposition over all maximal sibling sets of `d`; the first
/// optimum in enumeration order wins.
pub fn solve_diagram(d: &MultiDiagram, budget: u128) -> Result<ExactSolution> {
    let mut best: Option<ExactSolution> = None;
    let mut scored = 0;
    for s in enumerate_max_sibling_sets(d, budget)? {
        let dec = induce_decomposition(d, &s, None)?;
        scored += 1;
        if best.as_ref().is_none_or(|b| dec.distance < b.distance) {
            best = Some(ExactSolution {
                distance: dec.distance,
                sibling_set: s,
                decomposition: dec,
                sets_scored: 0,
            });
        }
    }
    let mut best = best.expect("at least one maximal sibling set exists");
    best.sets_scored = scored;
    Ok(best)
}

pub fn solve_by_enumeration(a: &Genome, b: &Genome, budget: u128) -> Result<ExactSolution> {
    let c = census(a, b);
    solve_diagram(&build_mrd(a, b, &c), budget)
}

/// Best assignment of the ILP found by completing every pair of a maximal
/// sibling set and a cap matching.
#[derive(Debug, Clone)]
pub struct IlpOptimum {
    pub objective_x2: i64,
    pub distance: i64,
    pub sibling_set: SiblingSet,
    pub cap_matching: CapMatching,
    pub values: Vec<i64>,
}

fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    InjectiveAssignments::new(n, n)
}

/// Maximizes the ILP objective by exhausting sibling sets and cap matchings.
/// Every completion is checked against all constraints and against the
/// rescored decomposition.
pub fn ilp_optimum_by_enumeration(a: &Genome, b: &Genome, options: IlpOptions, budget: u128) -> Result<IlpOptimum> {
    let c = census(a, b);
    let d = cap_mrd(&build_mrd(a, b, &c), CappingPlan::from_census(&c))?;
    let m = build_ilp_with(&d, options)?;
    let caps = d.caps(Side::A).len();
    let count = count_max_sibling_sets(&d).saturating_mul(falling_factorial(caps, caps));
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let total_x2 = 2 * (m.n_star() + m.p_star()) as i64;
    let mut best: Option<IlpOptimum> = None;
    for s in enumerate_max_sibling_sets(&d, budget)? {
        for perm in permutations(caps) {
            let p = CapMatching::new(perm)?;
            let values = optimal_completion(&m, &d, &s, &p)?;
            if let Some(c) = violated_constraint(&m, &values) {
                return Err(Error::InfeasibleAssignment(format!("completion violates {}", c.label)));
            }
            let obj = objective_x2(&m, &values);
            let dec = induce_decomposition(&d, &s, Some(&p))?;
            if obj != dec.weight_x2 {
                return Err(Error::ScoreMismatch {
                    objective_distance: crate::decomposition::HalfInteger(total_x2 - obj).to_string(),
                    rescored: dec.distance.to_string(),
                });
            }
            if best.as_ref().is_none_or(|b| obj > b.objective_x2) {
                best = Some(IlpOptimum {
                    objective_x2: obj,
                    distance: (total_x2 - obj) / 2,
                    sibling_set: s.clone(),
                    cap_matching: p,
                    values,
                });
            }
        }
    }
    Ok(best.expect("at least one maximal sibling set exists"))
}

// Groups as written in the chained-recombination table with their deductions.
const ORACLE_GROUPS: [(&str, u32); 32] = [
    ("W M", 2),
    ("W W MA MB", 3),
    ("M M WA WB", 3),
    ("W Z MA", 2),
    ("W W MA", 2),
    ("W N MB", 2),
    ("W W MB", 2),
    ("M N WA", 2),
    ("M M WA", 2),
    ("M Z WB", 2),
    ("M M WB", 2),
    ("Z N", 1),
    ("WA MA", 1),
    ("WB MB", 1),
    ("W MA", 1),
    ("W MB", 1),
    ("W Z", 1),
    ("W N", 1),
    ("W W", 1),
    ("M WA", 1),
    ("M WB", 1),
    ("M Z", 1),
    ("M N", 1),
    ("M M", 1),
    ("Z Z WB MA", 2),
    ("N N WA MB", 2),
    ("Z WB MA", 1),
    ("Z Z WB", 1),
    ("Z Z MA", 1),
    ("N WA MB", 1),
    ("N N WA", 1),
    ("N N MB", 1),
];

const COUNTERS: [&str; 8] = ["W", "WA", "WB", "M", "MA", "MB", "Z", "N"];

fn oracle_groups() -> Vec<([usize; 8], u32)> {
    ORACLE_GROUPS
        .iter()
        .map(|&(text, ded)| {
            let mut needs = [0usize; 8];
            for tok in text.split_whitespace() {
                needs[COUNTERS.iter().position(|&c| c == tok).expect("known counter")] += 1;
            }
            (needs, ded)
        })
        .collect()
}

fn search(c: [usize; 8], groups: &[([usize; 8], u32)], memo: &mut HashMap<[usize; 8], u32>) -> u32 {
    if let Some(&v) = memo.get(&c) {
        return v;
    }
    let mut best = 0;
    for (needs, ded) in groups {
        if needs.iter().zip(&c).all(|(n, have)| n <= have) {
            let mut rest = c;
            for k in 0..8 {
                rest[k] -= needs[k];
            }
            best = best.max(ded + search(rest, groups, memo));
        }
    }
    memo.insert(c, best);
    best
}

/// Largest total deduction over all multisets of groups that fit the
/// counters, by exhaustive memoized search.
pub fn delta_oracle(counts: PathCounts) -> u32 {
    search(counts.to_array(), &oracle_groups(), &mut HashMap::new())
}

/// [`delta_oracle`] for every counter vector with entries at most `bound`.
pub struct DeltaTable {
    bound: usize,
    values: Vec<u32>,
}

impl DeltaTable {
    pub fn new(bound: usize) -> Self {
        let base = bound + 1;
        let size = base.pow(8);
        let groups = oracle_groups();
        let mut values = vec![0u32; size];
        let mut c = [0usize; 8];
        for idx in 0..size {
            let mut rest = idx;
            for slot in c.iter_mut() {
                *slot = rest % base;
                rest /= base;
            }
            let mut best = 0;
            for (needs, ded) in &groups {
                if needs.iter().zip(&c).all(|(n, have)| n <= have) {
                    let sub: usize = (0..8).rev().fold(0, |acc, k| acc * base + (c[k] - needs[k]));
                    best = best.max(ded + values[sub]);
                }
            }
            values[idx] = best;
        }
        DeltaTable { bound, values }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn get(&self, counts: PathCounts) -> Option<u32> {
        let base = self.bound + 1;
        let a = counts.to_array();
        if a.iter().any(|&x| x > self.bound) {
            return None;
        }
        Some(self.values[(0..8).rev().fold(0, |acc, k| acc * base + a[k])])
    }

    /// Every counter vector covered by the table.
    pub fn inputs(&self) -> impl Iterator<Item = PathCounts> + '_ {
        let base = self.bound + 1;
        (0..self.values.len()).map(move |idx| {
            let mut a = [0usize; 8];
            let mut rest = idx;
            for slot in a.iter_mut() {
                *slot = rest % base;
                rest /= base;
            }
            PathCounts::from_array(a)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::parse_genomes;
    use crate::singular::greedy_delta;

    const NATURAL: &str = ">A\n1 3 2 -5 -4 3 5 4 |\n>B\n1 6 2 3 1 7 3 4 1 3 |";

    fn pair(text: &str) -> (Genome, Genome) {
        let mut gs = parse_genomes(text).unwrap();
        let b = gs.pop().unwrap();
        (gs.pop().unwrap(), b)
    }

    #[test]
    fn injective_assignments_are_lexicographic() {
        let all: Vec<Vec<usize>> = InjectiveAssignments::new(3, 2).collect();
        assert_eq!(all, [[0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]]);
        assert_eq!(InjectiveAssignments::new(3, 0).count(), 1);
        assert_eq!(InjectiveAssignments::new(2, 3).count(), 0);
        assert_eq!(InjectiveAssignments::new(5, 3).count(), 60);
    }

    #[test]
    fn natural_example_count_and_optimum() {
        let (a, b) = pair(NATURAL);
        let d = build_mrd(&a, &b, &census(&a, &b));
        assert_eq!(count_max_sibling_sets(&d), 36);
        let sets: Vec<SiblingSet> = enumerate_max_sibling_sets(&d, DEFAULT_BUDGET).unwrap().collect();
        assert_eq!(sets.len(), 36);
        let unique: std::collections::HashSet<_> = sets.iter().collect();
        assert_eq!(unique.len(), 36);
        assert!(sets.iter().all(|s| s.is_maximal(&d)));
        assert!(matches!(
            enumerate_max_sibling_sets(&d, 10),
            Err(Error::BudgetExceeded { count: 36, budget: 10 })
        ));
        let best = solve_by_enumeration(&a, &b, DEFAULT_BUDGET).unwrap();
        assert_eq!(best.distance, 6);
        assert_eq!(best.sets_scored, 36);
        assert_eq!(solve_by_enumeration(&b, &a, DEFAULT_BUDGET).unwrap().distance, 6);
    }

    #[test]
    fn small_cases() {
        let (a, b) = pair(">A\n1 2 1 3 |\n>B\n1 2 1 3 |");
        assert_eq!(solve_by_enumeration(&a, &b, DEFAULT_BUDGET).unwrap().distance, 0);
        let (a, _) = pair(">A\n1 )\n>B\n2 )");
        assert_eq!(solve_by_enumeration(&a, &Genome::empty("B"), DEFAULT_BUDGET).unwrap().distance, 1);
        let (a, b) = pair(">A\n1 2 3 |\n>B\n1 -2 3 |");
        let d = build_mrd(&a, &b, &census(&a, &b));
        assert_eq!(enumerate_max_sibling_sets(&d, 1).unwrap().count(), 1);
    }

    #[test]
    fn ilp_enumeration_matches() {
        for text in [
            ">A\n1 )\n>B\n1 )",
            ">A\n6 )\n>B\n1 )",
            ">A\n1 2 x |\n>B\n2 1 |",
            ">A\n1 2 1 |\n>B\n1 1 y 2 |",
            ">A\n1 3 2 -5 -4 3 5 4 |\n>B\n1 6 2 3 1 7 3 4 1 3 |",
        ] {
            let (a, b) = pair(text);
            let exact = solve_by_enumeration(&a, &b, DEFAULT_BUDGET).unwrap().distance;
            let full = ilp_optimum_by_enumeration(&a, &b, IlpOptions::default(), DEFAULT_BUDGET).unwrap();
            let free = ilp_optimum_by_enumeration(&a, &b, IlpOptions { canonical: false }, DEFAULT_BUDGET).unwrap();
            assert_eq!(full.distance, exact, "{text}");
            assert_eq!(free.objective_x2, full.objective_x2, "{text}");
        }
    }

    #[test]
    fn oracle_examples() {
        let c = |w, m, ma, mb| PathCounts::from_array([w, 0, 0, m, ma, mb, 0, 0]);
        assert_eq!(delta_oracle(c(1, 1, 0, 0)), 2);
        assert_eq!(delta_oracle(PathCounts::default()), 0);
        assert_eq!(delta_oracle(c(2, 0, 1, 1)), 3);
    }

    #[test]
    fn table_agrees_with_oracle_and_greedy_on_small_inputs() {
        let t = DeltaTable::new(2);
        for counts in t.inputs() {
            let v = t.get(counts).unwrap();
            assert_eq!(v as usize, greedy_delta(counts).delta, "{counts:?}");
        }
        let probe = PathCounts::from_array([2, 1, 0, 1, 2, 0, 1, 2]);
        assert_eq!(t.get(probe), Some(delta_oracle(probe)));
    }
}
