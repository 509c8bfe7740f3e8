use std::collections::BTreeMap;

use super::Genome;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FamilyCount {
    pub occ_a: usize,
    pub occ_b: usize,
}

impl FamilyCount {
    pub fn delta(&self) -> i64 {
        self.occ_a as i64 - self.occ_b as i64
    }

    pub fn is_common(&self) -> bool {
        self.occ_a > 0 && self.occ_b > 0
    }

    /// Number of occurrence pairs any maximal matching selects.
    pub fn matched(&self) -> usize {
        if self.is_common() {
            self.occ_a.min(self.occ_b)
        } else {
            0
        }
    }
}

/// Per-family occurrence counts of a genome pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerCensus {
    families: BTreeMap<String, FamilyCount>,
    n_star: usize,
    kappa_a: usize,
    kappa_b: usize,
}

pub fn census(a: &Genome, b: &Genome) -> MarkerCensus {
    let mut families: BTreeMap<String, FamilyCount> = BTreeMap::new();
    for m in a.markers() {
        families.entry(m.family().to_string()).or_default().occ_a += 1;
    }
    for m in b.markers() {
        families.entry(m.family().to_string()).or_default().occ_b += 1;
    }
    let n_star = families.values().map(FamilyCount::matched).sum();
    MarkerCensus {
        families,
        n_star,
        kappa_a: a.linear_count(),
        kappa_b: b.linear_count(),
    }
}

impl MarkerCensus {
    /// All families in lexicographic order (the set U).
    pub fn families(&self) -> impl Iterator<Item = (&str, FamilyCount)> {
        self.families.iter().map(|(f, c)| (f.as_str(), *c))
    }

    /// Families occurring in both genomes (the set G).
    pub fn common(&self) -> impl Iterator<Item = (&str, FamilyCount)> {
        self.families().filter(|(_, c)| c.is_common())
    }

    pub fn get(&self, family: &str) -> FamilyCount {
        self.families.get(family).copied().unwrap_or_default()
    }

    pub fn delta(&self, family: &str) -> i64 {
        self.get(family).delta()
    }

    pub fn common_count(&self) -> usize {
        self.common().count()
    }

    pub fn n_star(&self) -> usize {
        self.n_star
    }

    pub fn kappa_a(&self) -> usize {
        self.kappa_a
    }

    pub fn kappa_b(&self) -> usize {
        self.kappa_b
    }

    /// First common family occurring more than once in either genome.
    pub fn first_duplicate(&self) -> Option<(&str, FamilyCount)> {
        self.common().find(|(_, c)| c.occ_a > 1 || c.occ_b > 1)
    }

    pub fn is_singular(&self) -> bool {
        self.first_duplicate().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::parse_genomes;

    fn natural_pair() -> (Genome, Genome) {
        let mut gs = parse_genomes(">A\n1 3 2 -5 -4 3 5 4 |\n>B\n1 6 2 3 1 7 3 4 1 3 |").unwrap();
        let b = gs.pop().unwrap();
        (gs.pop().unwrap(), b)
    }

    #[test]
    fn deltas_of_the_natural_example() {
        let (a, b) = natural_pair();
        let c = census(&a, &b);
        let expected = [
            ("1", -2),
            ("2", 0),
            ("3", -1),
            ("4", 1),
            ("5", 2),
            ("6", -1),
            ("7", -1),
        ];
        for (f, d) in expected {
            assert_eq!(c.delta(f), d, "family {f}");
        }
        assert_eq!(c.n_star(), 5);
        assert_eq!(c.kappa_a(), 1);
        assert_eq!(c.kappa_b(), 1);
        let g: Vec<_> = c.common().map(|(f, _)| f).collect();
        assert_eq!(g, ["1", "2", "3", "4"]);
        assert!(!c.is_singular());
    }

    #[test]
    fn self_census_is_balanced() {
        let (a, _) = natural_pair();
        let c = census(&a, &a);
        assert!(c.families().all(|(_, x)| x.delta() == 0));
        assert_eq!(c.n_star(), a.len());
    }

    #[test]
    fn census_is_antisymmetric() {
        let (a, b) = natural_pair();
        let ab = census(&a, &b);
        let ba = census(&b, &a);
        for (f, x) in ab.families() {
            assert_eq!(x.delta(), -ba.delta(f));
        }
        assert_eq!(ab.n_star(), ba.n_star());
    }
}
