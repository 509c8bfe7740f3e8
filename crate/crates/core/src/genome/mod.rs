//! Genomes as ordered sets of chromosomes made of signed markers.

mod census;
mod format;

pub use census::{census, FamilyCount, MarkerCensus};
pub use format::{parse_genomes, write_genomes};

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Forward,
    Reverse,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        }
    }
}

/// One oriented occurrence of a marker family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marker {
    family: String,
    orientation: Orientation,
}

pub(crate) fn valid_family(family: &str) -> bool {
    !family.is_empty()
        && !family.starts_with('-')
        && !family
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '|' | ')' | '>' | '#'))
}

impl Marker {
    pub fn new(family: impl Into<String>, orientation: Orientation) -> Result<Self> {
        let family = family.into();
        if !valid_family(&family) {
            return Err(Error::InvalidFamily(family));
        }
        Ok(Marker {
            family,
            orientation,
        })
    }

    pub fn forward(family: impl Into<String>) -> Result<Self> {
        Self::new(family, Orientation::Forward)
    }

    /// Parses a signed token such as `5` or `-5`.
    pub fn parse(token: &str) -> Result<Self> {
        match token.strip_prefix('-') {
            Some(rest) => Self::new(rest, Orientation::Reverse),
            None => Self::new(token, Orientation::Forward),
        }
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_reverse(&self) -> bool {
        self.orientation == Orientation::Reverse
    }

    pub fn reversed(&self) -> Self {
        Marker {
            family: self.family.clone(),
            orientation: self.orientation.flipped(),
        }
    }

    pub(crate) fn flip(&mut self) {
        self.orientation = self.orientation.flipped();
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_reverse() {
            write!(f, "-{}", self.family)
        } else {
            f.write_str(&self.family)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Linear,
    Circular,
}

/// A non-empty marker sequence. Circular chromosomes are stored in canonical
/// form: the lexicographically smallest rotation over both strand readings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    topology: Topology,
    markers: Vec<Marker>,
}

impl Chromosome {
    pub fn new(topology: Topology, markers: Vec<Marker>) -> Result<Self> {
        if markers.is_empty() {
            return Err(Error::EmptyChromosome);
        }
        let mut markers = markers;
        if topology == Topology::Circular {
            canonicalize_circular(&mut markers);
        }
        Ok(Chromosome { topology, markers })
    }

    pub fn linear(markers: Vec<Marker>) -> Result<Self> {
        Self::new(Topology::Linear, markers)
    }

    pub fn circular(markers: Vec<Marker>) -> Result<Self> {
        Self::new(Topology::Circular, markers)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn is_linear(&self) -> bool {
        self.topology == Topology::Linear
    }

    pub fn is_circular(&self) -> bool {
        self.topology == Topology::Circular
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }

    pub fn into_markers(self) -> Vec<Marker> {
        self.markers
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.markers {
            write!(f, "{m} ")?;
        }
        f.write_str(match self.topology {
            Topology::Linear => "|",
            Topology::Circular => ")",
        })
    }
}

/// Index of the lexicographically least rotation of `s` (two-pointer scan, linear time).
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => k += 1,
            Ordering::Greater => {
                i += k + 1;
                if i <= j {
                    i = j + 1;
                }
                k = 0;
            }
            Ordering::Less => {
                j += k + 1;
                if j <= i {
                    j = i + 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

fn canonicalize_circular(markers: &mut Vec<Marker>) {
    let n = markers.len();
    let fwd = least_rotation(markers);
    let mut rev: Vec<Marker> = markers.iter().rev().map(Marker::reversed).collect();
    let back = least_rotation(&rev);
    let cmp = (0..n)
        .map(|k| markers[(fwd + k) % n].cmp(&rev[(back + k) % n]))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal);
    if cmp == Ordering::Greater {
        rev.rotate_left(back);
        *markers = rev;
    } else {
        markers.rotate_left(fwd);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genome {
    pub name: String,
    pub chromosomes: Vec<Chromosome>,
}

impl Genome {
    pub fn new(name: impl Into<String>, chromosomes: Vec<Chromosome>) -> Self {
        Genome {
            name: name.into(),
            chromosomes,
        }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self::new(name, Vec::new())
    }

    /// Total number of marker occurrences.
    pub fn len(&self) -> usize {
        self.chromosomes.iter().map(Chromosome::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.chromosomes.is_empty()
    }

    pub fn linear_count(&self) -> usize {
        self.chromosomes.iter().filter(|c| c.is_linear()).count()
    }

    pub fn markers(&self) -> impl Iterator<Item = &Marker> {
        self.chromosomes.iter().flat_map(|c| c.markers().iter())
    }

    pub fn is_all_circular(&self) -> bool {
        self.chromosomes.iter().all(Chromosome::is_circular)
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, ">{}", self.name)?;
        for c in &self.chromosomes {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Vec<Marker> {
        s.split_whitespace().map(|t| Marker::parse(t).unwrap()).collect()
    }

    #[test]
    fn marker_tokens() {
        let m = Marker::parse("-5").unwrap();
        assert_eq!(m.family(), "5");
        assert!(m.is_reverse());
        assert_eq!(m.to_string(), "-5");
        assert!(Marker::parse("-").is_err());
        assert!(Marker::parse("--5").is_err());
        assert!(Marker::parse("a|b").is_err());
        assert!(Marker::parse("x>").is_err());
    }

    #[test]
    fn circular_rotation_and_reversal_are_equal() {
        let a = Chromosome::circular(seq("1 2 3")).unwrap();
        let b = Chromosome::circular(seq("3 1 2")).unwrap();
        let c = Chromosome::circular(seq("-2 -1 -3")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.markers(), seq("1 2 3").as_slice());
        let d = Chromosome::circular(seq("1 3 2")).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn circular_prefers_smaller_strand() {
        // forward rotations start with "-1"/"-2"/"-3"; the reverse strand reads "1 2 3"
        let c = Chromosome::circular(seq("-3 -2 -1")).unwrap();
        assert_eq!(c.markers(), seq("1 2 3").as_slice());
    }

    #[test]
    fn linear_is_kept_verbatim() {
        let c = Chromosome::linear(seq("3 -1 2")).unwrap();
        assert_eq!(c.markers(), seq("3 -1 2").as_slice());
        assert!(Chromosome::linear(vec![]).is_err());
    }

    #[test]
    fn least_rotation_with_repeats() {
        assert_eq!(least_rotation(&[2, 1, 2, 1]), 1);
        assert_eq!(least_rotation(&[1, 1, 1]), 0);
        assert_eq!(least_rotation(&[3, 1, 2, 1, 1]), 3);
    }
}
