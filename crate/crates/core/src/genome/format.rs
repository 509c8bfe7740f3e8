//! The genome file format: `>name` headers, signed marker tokens, `|` closing a
//! linear chromosome, `)` closing a circular one and `#` comments.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{Chromosome, Genome, Marker, Topology};
use crate::error::ParseError;

struct Pending {
    start_line: usize,
    markers: Vec<Marker>,
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split_whitespace().flat_map(|word| {
        // terminators are self-delimiting so "4|" reads as "4" "|"
        let mut parts = Vec::new();
        let mut start = 0;
        for (i, c) in word.char_indices() {
            if c == '|' || c == ')' {
                if start < i {
                    parts.push(&word[start..i]);
                }
                parts.push(&word[i..i + 1]);
                start = i + 1;
            }
        }
        if start < word.len() {
            parts.push(&word[start..]);
        }
        parts
    })
}

pub fn parse_genomes(text: &str) -> Result<Vec<Genome>, ParseError> {
    let mut genomes: Vec<Genome> = Vec::new();
    let mut names = HashSet::new();
    let mut pending: Option<Pending> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('>') {
            if let Some(p) = pending.take() {
                return Err(ParseError::UnterminatedChromosome { line: p.start_line });
            }
            let name = header
                .split_whitespace()
                .next()
                .ok_or(ParseError::MissingGenomeName { line: line_no })?;
            if !names.insert(name.to_string()) {
                return Err(ParseError::DuplicateGenome {
                    line: line_no,
                    name: name.to_string(),
                });
            }
            genomes.push(Genome::empty(name));
            continue;
        }
        for token in tokens(trimmed) {
            let genome = genomes
                .last_mut()
                .ok_or_else(|| ParseError::MarkerOutsideGenome {
                    line: line_no,
                    token: token.to_string(),
                })?;
            let topology = match token {
                "|" => Some(Topology::Linear),
                ")" => Some(Topology::Circular),
                _ => None,
            };
            match topology {
                Some(topology) => {
                    let markers = pending.take().map(|p| p.markers).unwrap_or_default();
                    if markers.is_empty() {
                        return Err(ParseError::EmptyChromosome { line: line_no });
                    }
                    let chromosome = Chromosome::new(topology, markers)
                        .map_err(|_| ParseError::EmptyChromosome { line: line_no })?;
                    genome.chromosomes.push(chromosome);
                }
                None => {
                    let marker = Marker::parse(token).map_err(|_| ParseError::InvalidMarker {
                        line: line_no,
                        token: token.to_string(),
                    })?;
                    pending
                        .get_or_insert_with(|| Pending {
                            start_line: line_no,
                            markers: Vec::new(),
                        })
                        .markers
                        .push(marker);
                }
            }
        }
    }
    if let Some(p) = pending {
        return Err(ParseError::UnterminatedChromosome { line: p.start_line });
    }
    Ok(genomes)
}

/// Serializes genomes, one chromosome per line.
pub fn write_genomes<'a>(genomes: impl IntoIterator<Item = &'a Genome>) -> String {
    let mut out = String::new();
    for g in genomes {
        let _ = write!(out, "{g}");
    }
    out
}
