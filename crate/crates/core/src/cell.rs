//! Edges of the complete graph and the matchings built from them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An edge `a-b` of `K_n`, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPair {
    a: u8,
    b: u8,
}

impl VertexPair {
    pub fn new(a: u8, b: u8) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::CellSyntax {
                text: format!("{a}-{b}"),
                reason: "vertices are numbered from 1".into(),
            });
        }
        if a == b {
            return Err(Error::CellSyntax {
                text: format!("{a}-{b}"),
                reason: "loops are not edges".into(),
            });
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Ok(Self { a, b })
    }

    pub fn a(self) -> u8 {
        self.a
    }

    pub fn b(self) -> u8 {
        self.b
    }

    pub fn touches(self, v: u8) -> bool {
        self.a == v || self.b == v
    }

    pub fn is_disjoint(self, other: VertexPair) -> bool {
        !(other.touches(self.a) || other.touches(self.b))
    }

    /// Vertex bitmask, bit `v` set for each endpoint.
    pub fn mask(self) -> u32 {
        (1 << self.a) | (1 << self.b)
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// A matching of `K_n`, i.e. a simplex of the matching complex.
///
/// Pairs are kept sorted and pairwise vertex-disjoint. The derived ordering
/// compares the sorted pair lists lexicographically, which is the canonical
/// cell order used everywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    pairs: Vec<VertexPair>,
}

impl Matching {
    /// Canonicalizes `pairs`; rejects duplicates, shared vertices and the
    /// empty matching.
    pub fn new(mut pairs: Vec<VertexPair>) -> Result<Self> {
        pairs.sort_unstable();
        let text = || {
            pairs
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        if pairs.is_empty() {
            return Err(Error::CellSyntax {
                text: String::new(),
                reason: "a cell needs at least one pair".into(),
            });
        }
        let mut seen = 0u32;
        for p in &pairs {
            if seen & p.mask() != 0 {
                return Err(Error::CellSyntax {
                    text: text(),
                    reason: "pairs share a vertex".into(),
                });
            }
            seen |= p.mask();
        }
        Ok(Self { pairs })
    }

    pub(crate) fn from_sorted_unchecked(pairs: Vec<VertexPair>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        Self { pairs }
    }

    pub fn pairs(&self) -> &[VertexPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn max_vertex(&self) -> u8 {
        self.pairs.iter().map(|p| p.b).max().unwrap_or(0)
    }

    pub fn vertex_mask(&self) -> u32 {
        self.pairs.iter().fold(0, |m, p| m | p.mask())
    }

    /// The face obtained by deleting the `i`-th pair.
    pub fn without(&self, i: usize) -> Option<Matching> {
        if self.pairs.len() < 2 {
            return None;
        }
        let mut pairs = self.pairs.clone();
        pairs.remove(i);
        Some(Self { pairs })
    }

    /// Adds a pair disjoint from every existing one.
    pub fn with(&self, pair: VertexPair) -> Option<Matching> {
        if self.vertex_mask() & pair.mask() != 0 {
            return None;
        }
        let mut pairs = self.pairs.clone();
        let at = pairs.binary_search(&pair).unwrap_err();
        pairs.insert(at, pair);
        Some(Self { pairs })
    }

    pub fn is_face_of(&self, other: &Matching) -> bool {
        self.pairs.iter().all(|p| other.pairs.binary_search(p).is_ok())
    }

    /// Position of the pair that `face` omits, when `face` is a facet.
    pub fn omitted_index(&self, face: &Matching) -> Option<usize> {
        if face.len() + 1 != self.len() {
            return None;
        }
        let mut skipped = None;
        let mut j = 0;
        for (i, p) in self.pairs.iter().enumerate() {
            if j < face.pairs.len() && face.pairs[j] == *p {
                j += 1;
            } else if skipped.is_none() {
                skipped = Some(i);
            } else {
                return None;
            }
        }
        if j == face.pairs.len() {
            skipped
        } else {
            None
        }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Matching {
    type Err = Error;

    /// Parses `a-b,c-d,...`. Input must already be canonical: sorted pairs,
    /// each written smaller vertex first, no whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::CellSyntax {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(bad("empty cell"));
        }
        let mut pairs = Vec::new();
        for token in s.split(',') {
            let (a, b) = token.split_once('-').ok_or_else(|| bad("expected `a-b`"))?;
            let parse = |t: &str| -> Result<u8> {
                if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(bad("vertex is not a number"));
                }
                t.parse::<u8>().map_err(|_| bad("vertex out of range"))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if a >= b {
                return Err(bad("pair must be written smaller vertex first"));
            }
            pairs.push(VertexPair::new(a, b)?);
        }
        if pairs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("pairs must be sorted and distinct"));
        }
        let m = Matching::new(pairs)?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Matching {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let cell = m("1-5,2-6,4-7");
        assert_eq!(cell.to_string(), "1-5,2-6,4-7");
        assert_eq!(cell.dim(), 2);
    }

    #[test]
    fn parser_is_strict() {
        for bad in ["", "1-1", "2-1", "1-2,1-3", "3-4,1-2", "1-2,1-2", "a-b", "1-2,", "1 -2", "0-3"] {
            assert!(bad.parse::<Matching>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn omitted_index_finds_deleted_pair() {
        let s = m("1-5,2-6,4-7");
        assert_eq!(s.omitted_index(&m("1-5,2-6")), Some(2));
        assert_eq!(s.omitted_index(&m("2-6,4-7")), Some(0));
        assert_eq!(s.omitted_index(&m("1-5,4-7")), Some(1));
        assert_eq!(s.omitted_index(&m("1-5,3-6")), None);
    }

    #[test]
    fn with_keeps_canonical_order() {
        let t = m("1-3,4-6");
        let s = t.with(VertexPair::new(2, 5).unwrap()).unwrap();
        assert_eq!(s.to_string(), "1-3,2-5,4-6");
        assert!(t.with(VertexPair::new(3, 5).unwrap()).is_none());
    }
}
