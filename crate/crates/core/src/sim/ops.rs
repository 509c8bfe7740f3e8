//! DCJ, deletion, insertion and duplication on marker-order genomes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::genome::{Chromosome, Genome, Marker, Topology};

/// A cut between two consecutive markers. On a linear chromosome of length
/// `L` gaps run over `0..=L`, with `0` and `L` at the telomeres; on a circular
/// one gap `g` precedes marker `g` and gap `L` is the same as gap `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub chromosome: usize,
    pub gap: usize,
}

/// First marker of a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Location {
    pub chromosome: usize,
    pub position: usize,
}

/// How the four open ends left by two cuts are rejoined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Join {
    /// Left end of the first cut with the left end of the second.
    Inverting,
    /// Left end of the first cut with the right end of the second.
    Crossing,
}

/// Issues fresh numeric family names.
#[derive(Debug, Clone)]
pub struct FamilyMinter {
    next: u64,
}

impl FamilyMinter {
    pub fn new(first: u64) -> Self {
        FamilyMinter { next: first }
    }

    /// Starts after the largest numeric family of the genomes.
    pub fn after<'a>(genomes: impl IntoIterator<Item = &'a Genome>) -> Self {
        let max = genomes
            .into_iter()
            .flat_map(|g| g.markers())
            .filter_map(|m| m.family().parse::<u64>().ok())
            .max()
            .unwrap_or(0);
        FamilyMinter::new(max + 1)
    }

    pub fn peek(&self) -> u64 {
        self.next
    }

    pub fn mint(&mut self) -> Marker {
        let m = Marker::forward(self.next.to_string()).expect("numeric names are valid");
        self.next += 1;
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Strand {
    pub topology: Topology,
    pub markers: Vec<Marker>,
}

impl Strand {
    pub fn gaps(&self) -> usize {
        match self.topology {
            Topology::Linear => self.markers.len() + 1,
            Topology::Circular => self.markers.len(),
        }
    }

    fn is_circular(&self) -> bool {
        self.topology == Topology::Circular
    }
}

pub(crate) fn strands(g: &Genome) -> Vec<Strand> {
    g.chromosomes
        .iter()
        .map(|c| Strand {
            topology: c.topology(),
            markers: c.markers().to_vec(),
        })
        .collect()
}

pub(crate) fn genome(name: &str, work: &[Strand]) -> Genome {
    Genome::new(
        name,
        work.iter()
            .map(|s| Chromosome::new(s.topology, s.markers.clone()).expect("strands are never empty"))
            .collect(),
    )
}

fn reversed(seg: &[Marker]) -> Vec<Marker> {
    let mut out: Vec<Marker> = seg.iter().rev().cloned().collect();
    out.iter_mut().for_each(Marker::flip);
    out
}

fn cat(parts: &[&[Marker]]) -> Vec<Marker> {
    parts.concat()
}

fn linear(markers: Vec<Marker>) -> Strand {
    Strand {
        topology: Topology::Linear,
        markers,
    }
}

fn circular(markers: Vec<Marker>) -> Strand {
    Strand {
        topology: Topology::Circular,
        markers,
    }
}

fn check_cut(work: &[Strand], c: Cut) -> Result<usize> {
    let s = work
        .get(c.chromosome)
        .ok_or_else(|| Error::InvalidCut(format!("no chromosome {}", c.chromosome)))?;
    let len = s.markers.len();
    match s.topology {
        Topology::Linear if c.gap <= len => Ok(c.gap),
        Topology::Circular if c.gap <= len => Ok(c.gap % len),
        _ => Err(Error::InvalidCut(format!(
            "gap {} outside chromosome {} of length {len}",
            c.gap, c.chromosome
        ))),
    }
}

/// Circular sequence read from gap `g`.
fn opened(s: &Strand, g: usize) -> Vec<Marker> {
    cat(&[&s.markers[g..], &s.markers[..g]])
}

pub(crate) fn dcj(work: &mut Vec<Strand>, c1: Cut, c2: Cut, join: Join) -> Result<()> {
    let g1 = check_cut(work, c1)?;
    let g2 = check_cut(work, c2)?;
    if c1.chromosome == c2.chromosome {
        if g1 == g2 {
            return Err(Error::InvalidCut(format!(
                "both cuts at gap {g1} of chromosome {}",
                c1.chromosome
            )));
        }
        let (i, j) = (g1.min(g2), g1.max(g2));
        let s = &work[c1.chromosome];
        let m = &s.markers;
        let out = match (s.is_circular(), join) {
            (false, Join::Inverting) => vec![linear(cat(&[&m[..i], &reversed(&m[i..j]), &m[j..]]))],
            (false, Join::Crossing) => vec![linear(cat(&[&m[..i], &m[j..]])), circular(m[i..j].to_vec())],
            (true, Join::Inverting) => vec![circular(cat(&[&m[j..], &m[..i], &reversed(&m[i..j])]))],
            (true, Join::Crossing) => vec![circular(m[i..j].to_vec()), circular(cat(&[&m[j..], &m[..i]]))],
        };
        replace(work, &[c1.chromosome], out);
        return Ok(());
    }

    let (s1, s2) = (&work[c1.chromosome], &work[c2.chromosome]);
    let out = match (s1.is_circular(), s2.is_circular()) {
        (false, false) => {
            let (l1, r1) = s1.markers.split_at(g1);
            let (l2, r2) = s2.markers.split_at(g2);
            match join {
                Join::Crossing => vec![linear(cat(&[l1, r2])), linear(cat(&[l2, r1]))],
                Join::Inverting => vec![
                    linear(cat(&[l1, &reversed(l2)])),
                    linear(cat(&[&reversed(r2), r1])),
                ],
            }
        }
        (false, true) | (true, false) => {
            let (lin, g, circ, h) = if s1.is_circular() {
                (s2, g2, s1, g1)
            } else {
                (s1, g1, s2, g2)
            };
            let (l, r) = lin.markers.split_at(g);
            let c = opened(circ, h);
            let c = match join {
                Join::Crossing => c,
                Join::Inverting => reversed(&c),
            };
            vec![linear(cat(&[l, &c, r]))]
        }
        (true, true) => {
            let a = opened(s1, g1);
            let b = opened(s2, g2);
            let b = match join {
                Join::Crossing => b,
                Join::Inverting => reversed(&b),
            };
            vec![circular(cat(&[&a, &b]))]
        }
    };
    replace(work, &[c1.chromosome, c2.chromosome], out);
    Ok(())
}

/// Removes the given chromosomes and inserts the non-empty results where the
/// first of them stood.
fn replace(work: &mut Vec<Strand>, remove: &[usize], out: Vec<Strand>) {
    let at = *remove.iter().min().expect("at least one chromosome");
    let mut sorted = remove.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for i in sorted {
        work.remove(i);
    }
    let keep: Vec<Strand> = out.into_iter().filter(|s| !s.markers.is_empty()).collect();
    work.splice(at..at, keep);
}

fn segment_bounds(work: &[Strand], at: Location, len: usize) -> Result<()> {
    let s = work
        .get(at.chromosome)
        .ok_or_else(|| Error::InvalidLocation(format!("no chromosome {}", at.chromosome)))?;
    let n = s.markers.len();
    let fits = match s.topology {
        Topology::Linear => at.position + len <= n,
        Topology::Circular => at.position < n && len <= n,
    };
    if len == 0 || !fits {
        return Err(Error::InvalidLocation(format!(
            "segment of length {len} at position {} does not fit chromosome {} of length {n}",
            at.position, at.chromosome
        )));
    }
    Ok(())
}

fn segment(s: &Strand, pos: usize, len: usize) -> Vec<Marker> {
    let n = s.markers.len();
    (0..len).map(|k| s.markers[(pos + k) % n].clone()).collect()
}

pub(crate) fn delete(work: &mut Vec<Strand>, at: Location, len: usize) -> Result<()> {
    segment_bounds(work, at, len)?;
    let s = &mut work[at.chromosome];
    if s.is_circular() {
        s.markers.rotate_left(at.position);
        s.markers.drain(..len);
    } else {
        s.markers.drain(at.position..at.position + len);
    }
    if s.markers.is_empty() {
        work.remove(at.chromosome);
    }
    Ok(())
}

pub(crate) fn insert(work: &mut Vec<Strand>, at: Cut, markers: Vec<Marker>) -> Result<()> {
    if markers.is_empty() {
        return Err(Error::InvalidLocation("insertion length must be positive".into()));
    }
    if work.is_empty() && at.chromosome == 0 && at.gap == 0 {
        work.push(linear(markers));
        return Ok(());
    }
    let s = work
        .get_mut(at.chromosome)
        .ok_or_else(|| Error::InvalidLocation(format!("no chromosome {}", at.chromosome)))?;
    if at.gap > s.markers.len() {
        return Err(Error::InvalidLocation(format!(
            "gap {} outside chromosome {} of length {}",
            at.gap,
            at.chromosome,
            s.markers.len()
        )));
    }
    s.markers.splice(at.gap..at.gap, markers);
    Ok(())
}

pub(crate) fn duplicate(work: &mut Vec<Strand>, source: Location, len: usize, target: Cut) -> Result<()> {
    segment_bounds(work, source, len)?;
    let copy = segment(&work[source.chromosome], source.position, len);
    insert(work, target, copy)
}

/// Applies a DCJ with the given cuts and rejoining.
pub fn apply_dcj(g: &Genome, first: Cut, second: Cut, join: Join) -> Result<Genome> {
    let mut w = strands(g);
    dcj(&mut w, first, second, join)?;
    Ok(genome(&g.name, &w))
}

/// Deletes `len` markers starting at `at`; circular chromosomes wrap around.
pub fn apply_deletion(g: &Genome, at: Location, len: usize) -> Result<Genome> {
    let mut w = strands(g);
    delete(&mut w, at, len)?;
    Ok(genome(&g.name, &w))
}

/// Inserts `len` markers of fresh families at a gap.
pub fn apply_insertion(g: &Genome, at: Cut, len: usize, minter: &mut FamilyMinter) -> Result<Genome> {
    let mut w = strands(g);
    insert(&mut w, at, (0..len).map(|_| minter.mint()).collect())?;
    Ok(genome(&g.name, &w))
}

/// Copies `len` markers starting at `source` into the gap `target`.
pub fn apply_duplication(g: &Genome, source: Location, len: usize, target: Cut) -> Result<Genome> {
    let mut w = strands(g);
    duplicate(&mut w, source, len, target)?;
    Ok(genome(&g.name, &w))
}
