//! Evolution of a root genome along the two edges of a weighted tree.

mod ops;

pub use ops::{apply_dcj, apply_deletion, apply_duplication, apply_insertion, Cut, FamilyMinter, Join, Location};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, Zipf};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genome::{Chromosome, Genome, Marker, Topology};
use ops::Strand;

/// Largest segment length drawn for insertions, deletions and duplications.
pub const ZIPF_CUTOFF: u64 = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub root_length: usize,
    /// Expected number of DCJ operations on the edges leading to A and B.
    pub edge_weights: [f64; 2],
    pub insertion_rate: f64,
    pub deletion_rate: f64,
    pub duplication_rate: f64,
    pub zipf_indel: f64,
    pub zipf_dup: f64,
    pub chromosomes: usize,
    pub circular: bool,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            root_length: 20_000,
            edge_weights: [100.0, 100.0],
            insertion_rate: 0.1,
            deletion_rate: 0.2,
            duplication_rate: 0.4,
            zipf_indel: 4.0,
            zipf_dup: 6.0,
            chromosomes: 1,
            circular: false,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.root_length == 0 {
            return bad("root length must be at least 1".into());
        }
        if self.chromosomes == 0 || self.chromosomes > self.root_length {
            return bad(format!(
                "chromosome count {} must lie in 1..={}",
                self.chromosomes, self.root_length
            ));
        }
        for (name, v) in [
            ("edge weight", self.edge_weights[0]),
            ("edge weight", self.edge_weights[1]),
            ("insertion rate", self.insertion_rate),
            ("deletion rate", self.deletion_rate),
            ("duplication rate", self.duplication_rate),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be a nonnegative number, got {v}"));
            }
        }
        for (name, s) in [("indel exponent", self.zipf_indel), ("duplication exponent", self.zipf_dup)] {
            if !(s.is_finite() && s > 1.0) {
                return bad(format!("{name} must exceed 1, got {s}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Leaf {
    A,
    B,
}

/// One applied operation, serialized as a JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Event {
    Dcj {
        leaf: Leaf,
        first: Cut,
        second: Cut,
        join: Join,
    },
    Duplication {
        leaf: Leaf,
        source: Location,
        length: usize,
        target: Cut,
    },
    Deletion {
        leaf: Leaf,
        at: Location,
        length: usize,
    },
    Insertion {
        leaf: Leaf,
        at: Cut,
        length: usize,
        first_family: u64,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EventCounts {
    pub dcj: usize,
    pub duplications: usize,
    pub deletions: usize,
    pub insertions: usize,
}

#[derive(Debug, Clone)]
pub struct SimResult {
    pub root: Genome,
    pub a: Genome,
    pub b: Genome,
    pub events: Vec<Event>,
    /// Applied events on the edges to A and B.
    pub counts: [EventCounts; 2],
}

impl SimResult {
    pub fn event_log(&self) -> String {
        self.events
            .iter()
            .map(|e| serde_json::to_string(e).expect("events serialize") + "\n")
            .collect()
    }
}

/// Segment lengths from a Zipf law truncated at [`ZIPF_CUTOFF`].
#[derive(Debug, Clone, Copy)]
pub struct TruncatedZipf(Zipf<f64>);

impl TruncatedZipf {
    pub fn new(exponent: f64) -> Result<Self> {
        Zipf::new(ZIPF_CUTOFF as f64, exponent)
            .map(TruncatedZipf)
            .map_err(|e| Error::ConfigInvalid(format!("Zipf exponent {exponent}: {e}")))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.0.sample(rng) as usize
    }
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive finite mean").sample(rng) as usize
}

pub fn root_genome(cfg: &SimConfig) -> Genome {
    let topology = if cfg.circular {
        Topology::Circular
    } else {
        Topology::Linear
    };
    let per = cfg.root_length / cfg.chromosomes;
    let extra = cfg.root_length % cfg.chromosomes;
    let mut next = 1usize;
    let chromosomes = (0..cfg.chromosomes)
        .map(|k| {
            let len = per + usize::from(k < extra);
            let markers = (next..next + len)
                .map(|f| Marker::forward(f.to_string()).expect("numeric names are valid"))
                .collect();
            next += len;
            Chromosome::new(topology, markers).expect("chromosomes are non-empty")
        })
        .collect();
    Genome::new("root", chromosomes)
}

/// Maps a genome-wide index to (chromosome, offset) given per-chromosome sizes.
fn locate(sizes: impl Iterator<Item = usize>, mut k: usize) -> (usize, usize) {
    for (c, n) in sizes.enumerate() {
        if k < n {
            return (c, k);
        }
        k -= n;
    }
    unreachable!("index within total size")
}

struct Evolver<'a> {
    cfg: &'a SimConfig,
    rng: ChaCha8Rng,
    minter: FamilyMinter,
    indel_len: TruncatedZipf,
    dup_len: TruncatedZipf,
    events: Vec<Event>,
}

impl Evolver<'_> {
    fn random_gap(&mut self, work: &[Strand]) -> Option<Cut> {
        let total: usize = work.iter().map(Strand::gaps).sum();
        (total > 0).then(|| {
            let (chromosome, gap) = locate(work.iter().map(Strand::gaps), self.rng.random_range(0..total));
            Cut { chromosome, gap }
        })
    }

    fn random_segment(&mut self, work: &[Strand], len: usize) -> Option<(Location, usize)> {
        let total: usize = work.iter().map(|s| s.markers.len()).sum();
        if total == 0 {
            return None;
        }
        let (chromosome, position) = locate(work.iter().map(|s| s.markers.len()), self.rng.random_range(0..total));
        let s = &work[chromosome];
        let room = match s.topology {
            Topology::Linear => s.markers.len() - position,
            Topology::Circular => s.markers.len(),
        };
        Some((Location { chromosome, position }, len.min(room)))
    }

    fn evolve(&mut self, leaf: Leaf, weight: f64, work: &mut Vec<Strand>) -> EventCounts {
        let cfg = self.cfg;
        let mut counts = EventCounts::default();
        let n_dcj = poisson(weight, &mut self.rng);
        let n_dup = poisson(weight * cfg.duplication_rate, &mut self.rng);
        let n_del = poisson(weight * cfg.deletion_rate, &mut self.rng);
        let n_ins = poisson(weight * cfg.insertion_rate, &mut self.rng);

        for _ in 0..n_dcj {
            let total: usize = work.iter().map(Strand::gaps).sum();
            if total < 2 {
                continue;
            }
            let k1 = self.rng.random_range(0..total);
            let mut k2 = self.rng.random_range(0..total - 1);
            if k2 >= k1 {
                k2 += 1;
            }
            let at = |k| {
                let (chromosome, gap) = locate(work.iter().map(Strand::gaps), k);
                Cut { chromosome, gap }
            };
            let (first, second) = (at(k1), at(k2));
            let join = if self.rng.random_bool(0.5) {
                Join::Inverting
            } else {
                Join::Crossing
            };
            ops::dcj(work, first, second, join).expect("sampled cuts are distinct and valid");
            self.events.push(Event::Dcj {
                leaf,
                first,
                second,
                join,
            });
            counts.dcj += 1;
        }
        for _ in 0..n_dup {
            let len = self.dup_len.sample(&mut self.rng);
            let Some((source, length)) = self.random_segment(work, len) else {
                continue;
            };
            let target = self.random_gap(work).expect("genome is non-empty");
            ops::duplicate(work, source, length, target).expect("sampled segment is valid");
            self.events.push(Event::Duplication {
                leaf,
                source,
                length,
                target,
            });
            counts.duplications += 1;
        }
        for _ in 0..n_del {
            let len = self.indel_len.sample(&mut self.rng);
            let Some((at, length)) = self.random_segment(work, len) else {
                continue;
            };
            ops::delete(work, at, length).expect("sampled segment is valid");
            self.events.push(Event::Deletion { leaf, at, length });
            counts.deletions += 1;
        }
        for _ in 0..n_ins {
            let length = self.indel_len.sample(&mut self.rng);
            let at = self.random_gap(work).unwrap_or(Cut { chromosome: 0, gap: 0 });
            let first_family = self.minter.peek();
            let markers = (0..length).map(|_| self.minter.mint()).collect();
            ops::insert(work, at, markers).expect("sampled gap is valid");
            self.events.push(Event::Insertion {
                leaf,
                at,
                length,
                first_family,
            });
            counts.insertions += 1;
        }
        counts
    }
}

/// Evolves the root along both edges. Per edge the numbers of DCJ operations,
/// duplications, deletions and insertions are Poisson with means `weight`,
/// `weight * rate`, and are applied in that order.
pub fn simulate_pair(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let root = root_genome(cfg);
    let mut ev = Evolver {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        minter: FamilyMinter::new(cfg.root_length as u64 + 1),
        indel_len: TruncatedZipf::new(cfg.zipf_indel)?,
        dup_len: TruncatedZipf::new(cfg.zipf_dup)?,
        events: Vec::new(),
    };
    let mut leaves = Vec::with_capacity(2);
    let mut counts = [EventCounts::default(); 2];
    for (k, leaf) in [Leaf::A, Leaf::B].into_iter().enumerate() {
        let mut work = ops::strands(&root);
        counts[k] = ev.evolve(leaf, cfg.edge_weights[k], &mut work);
        let name = if k == 0 { "A" } else { "B" };
        leaves.push(ops::genome(name, &work));
    }
    let b = leaves.pop().expect("two leaves");
    let a = leaves.pop().expect("two leaves");
    Ok(SimResult {
        root,
        a,
        b,
        events: ev.events,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn small(seed: u64) -> SimConfig {
        SimConfig {
            root_length: 60,
            edge_weights: [8.0, 5.0],
            chromosomes: 2,
            seed,
            ..SimConfig::default()
        }
    }

    #[test]
    fn no_events_keeps_the_root() {
        let cfg = SimConfig {
            root_length: 30,
            edge_weights: [0.0, 0.0],
            insertion_rate: 0.0,
            deletion_rate: 0.0,
            duplication_rate: 0.0,
            ..SimConfig::default()
        };
        let r = simulate_pair(&cfg).unwrap();
        assert_eq!(r.a.chromosomes, r.root.chromosomes);
        assert_eq!(r.b.chromosomes, r.root.chromosomes);
        assert!(r.events.is_empty());
    }

    #[test]
    fn deterministic_under_seed() {
        let x = simulate_pair(&small(11)).unwrap();
        let y = simulate_pair(&small(11)).unwrap();
        assert_eq!((&x.a, &x.b, x.event_log()), (&y.a, &y.b, y.event_log()));
        let z = simulate_pair(&small(12)).unwrap();
        assert_ne!(x.event_log(), z.event_log());
    }

    #[test]
    fn families_descend_from_root_or_insertions() {
        for seed in 0..20 {
            let r = simulate_pair(&small(seed)).unwrap();
            let mut allowed: HashSet<String> = r.root.markers().map(|m| m.family().to_string()).collect();
            for e in &r.events {
                if let Event::Insertion { first_family, length, .. } = e {
                    allowed.extend((*first_family..first_family + *length as u64).map(|f| f.to_string()));
                }
            }
            for m in r.a.markers().chain(r.b.markers()) {
                assert!(allowed.contains(m.family()), "seed {seed}: {}", m.family());
            }
            let logged: usize = r.counts.iter().map(|c| c.dcj + c.duplications + c.deletions + c.insertions).sum();
            assert_eq!(logged, r.events.len());
            assert_eq!(r.event_log().lines().count(), r.events.len());
        }
    }

    #[test]
    fn invalid_configs() {
        for cfg in [
            SimConfig { root_length: 0, ..small(0) },
            SimConfig { deletion_rate: -1.0, ..small(0) },
            SimConfig { zipf_dup: 1.0, ..small(0) },
            SimConfig { chromosomes: 61, ..small(0) },
            SimConfig { edge_weights: [f64::NAN, 1.0], ..small(0) },
        ] {
            assert!(matches!(simulate_pair(&cfg), Err(Error::ConfigInvalid(_))));
        }
    }

    #[test]
    fn zipf_lengths_in_range() {
        let z = TruncatedZipf::new(4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws: Vec<usize> = (0..2000).map(|_| z.sample(&mut rng)).collect();
        assert!(draws.iter().all(|&l| (1..=ZIPF_CUTOFF as usize).contains(&l)));
        assert!(draws.iter().filter(|&&l| l == 1).count() > 1700);
    }

    #[test]
    fn root_layout() {
        let g = root_genome(&SimConfig {
            root_length: 7,
            chromosomes: 3,
            circular: true,
            ..SimConfig::default()
        });
        let lens: Vec<usize> = g.chromosomes.iter().map(Chromosome::len).collect();
        assert_eq!(lens, [3, 2, 2]);
        assert!(g.is_all_circular());
    }
}
