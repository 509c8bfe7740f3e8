//! Small random instances shared by the integration suites.
#![allow(dead_code)]

use std::collections::HashMap;

use dcjindel::diagram::{build_mrd, cap_mrd, CappingPlan, Side};
use dcjindel::exact::count_max_sibling_sets;
use dcjindel::genome::{census, parse_genomes, Genome};
use dcjindel::sim::{simulate_pair, SimConfig};

pub const NATURAL: &str = ">A\n1 3 2 -5 -4 3 5 4 |\n>B\n1 6 2 3 1 7 3 4 1 3 |";

pub fn pair(text: &str) -> (Genome, Genome) {
    let mut gs = parse_genomes(text).unwrap();
    let b = gs.pop().unwrap();
    (gs.pop().unwrap(), b)
}

pub fn max_multiplicity(g: &Genome) -> usize {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for m in g.markers() {
        *count.entry(m.family()).or_default() += 1;
    }
    count.into_values().max().unwrap_or(0)
}

/// Product of maximal sibling sets and cap matchings of the capped diagram.
pub fn search_space(a: &Genome, b: &Genome) -> u128 {
    let c = census(a, b);
    let d = cap_mrd(&build_mrd(a, b, &c), CappingPlan::from_census(&c)).unwrap();
    let caps = d.caps(Side::A).len() as u128;
    count_max_sibling_sets(&d).saturating_mul((1..=caps).product())
}

fn config(seed: u64) -> SimConfig {
    let root_length = 3 + (seed % 8) as usize;
    SimConfig {
        root_length,
        edge_weights: [0.5 + (seed % 5) as f64 * 0.5, 0.5 + (seed % 3) as f64 * 0.7],
        insertion_rate: 0.3,
        deletion_rate: 0.3,
        duplication_rate: 0.8,
        zipf_indel: 3.0,
        zipf_dup: 3.0,
        chromosomes: 1 + (seed % 2) as usize,
        circular: seed.is_multiple_of(3),
        seed,
    }
}

/// Simulated pairs from a root of at most 10 markers, with at most 10
/// occurrences per genome, multiplicity at most 3, at most 2 linear
/// chromosomes per genome and at most `space` (sibling set, cap matching)
/// combinations.
pub fn small_instances(count: usize, first_seed: u64, space: u128) -> Vec<(u64, Genome, Genome)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = first_seed;
    while out.len() < count {
        let r = simulate_pair(&config(seed)).unwrap();
        let ok = [&r.a, &r.b]
            .iter()
            .all(|g| g.len() <= 10 && max_multiplicity(g) <= 3 && g.linear_count() <= 2)
            && search_space(&r.a, &r.b) <= space;
        if ok {
            out.push((seed, r.a, r.b));
        }
        seed += 1;
    }
    out
}

/// Random singular pairs: duplications switched off.
pub fn singular_instances(count: usize, first_seed: u64) -> Vec<(u64, Genome, Genome)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = first_seed;
    while out.len() < count {
        let cfg = SimConfig {
            duplication_rate: 0.0,
            chromosomes: 1 + (seed % 3) as usize,
            ..config(seed)
        };
        let r = simulate_pair(&cfg).unwrap();
        if census(&r.a, &r.b).is_singular() && search_space(&r.a, &r.b) <= 5040 {
            out.push((seed, r.a, r.b));
        }
        seed += 1;
    }
    out
}
