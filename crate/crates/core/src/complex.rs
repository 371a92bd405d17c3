//! The matching complex `M_n` of the complete graph `K_n`.
//!
//! Cells are stored explicitly, one sorted array per dimension, together with
//! facet and cofacet adjacency expressed as indices into the neighbouring
//! dimension.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::cell::{Matching, VertexPair};
use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 12;

/// Position of a cell: its dimension and its index in that dimension's
/// canonical array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

impl CellId {
    pub fn new(dim: usize, index: usize) -> Self {
        Self { dim, index }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    cells: Vec<Vec<Matching>>,
    index: HashMap<Matching, CellId>,
    facets: Vec<Vec<Vec<usize>>>,
    cofacets: Vec<Vec<Vec<usize>>>,
}

/// All matchings of `K_n`, grouped by number of pairs.
fn enumerate_matchings(n: usize) -> Vec<Vec<Matching>> {
    let edges: Vec<VertexPair> = (1..=n as u8)
        .flat_map(|a| ((a + 1)..=n as u8).map(move |b| (a, b)))
        .map(|(a, b)| VertexPair::new(a, b).expect("valid edge"))
        .collect();
    let mut by_size: Vec<Vec<Matching>> = vec![Vec::new(); n / 2];
    let mut stack = Vec::new();
    fn extend(
        edges: &[VertexPair],
        start: usize,
        used: u32,
        stack: &mut Vec<VertexPair>,
        out: &mut Vec<Vec<Matching>>,
    ) {
        for (i, &e) in edges.iter().enumerate().skip(start) {
            if used & e.mask() != 0 {
                continue;
            }
            stack.push(e);
            out[stack.len() - 1].push(Matching::from_sorted_unchecked(stack.clone()));
            extend(edges, i + 1, used | e.mask(), stack, out);
            stack.pop();
        }
    }
    extend(&edges, 0, 0, &mut stack, &mut by_size);
    by_size.retain(|level| !level.is_empty());
    by_size
}

/// Builds `M_n`. Supports `2 <= n <= 12`.
pub fn build_matching_complex(n: usize) -> Result<SimplicialComplex> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
        return Err(Error::OrderOutOfRange(n));
    }
    Ok(SimplicialComplex::from_levels(n, enumerate_matchings(n)))
}

impl SimplicialComplex {
    /// Downward closure of the given matchings, as a subcomplex of `M_n`.
    pub fn from_cells<I>(n: usize, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = Matching>,
    {
        if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
            return Err(Error::OrderOutOfRange(n));
        }
        let mut levels: Vec<BTreeSet<Matching>> = Vec::new();
        for cell in cells {
            if cell.max_vertex() as usize > n {
                return Err(Error::CellSyntax {
                    text: cell.to_string(),
                    reason: format!("vertex exceeds n={n}"),
                });
            }
            let d = cell.dim();
            if levels.len() <= d {
                levels.resize_with(d + 1, BTreeSet::new);
            }
            levels[d].insert(cell);
        }
        for d in (1..levels.len()).rev() {
            let faces: Vec<Matching> = levels[d]
                .iter()
                .flat_map(|c| (0..c.len()).filter_map(move |i| c.without(i)))
                .collect();
            levels[d - 1].extend(faces);
        }
        Ok(Self::from_levels(
            n,
            levels.into_iter().map(|l| l.into_iter().collect()).collect(),
        ))
    }

    fn from_levels(n: usize, cells: Vec<Vec<Matching>>) -> Self {
        let mut index = HashMap::new();
        for (dim, level) in cells.iter().enumerate() {
            debug_assert!(level.windows(2).all(|w| w[0] < w[1]));
            for (i, c) in level.iter().enumerate() {
                index.insert(c.clone(), CellId::new(dim, i));
            }
        }
        let mut facets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cells.len());
        let mut cofacets: Vec<Vec<Vec<usize>>> =
            cells.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for (dim, level) in cells.iter().enumerate() {
            let mut per_dim = Vec::with_capacity(level.len());
            for (i, c) in level.iter().enumerate() {
                let mut fs: Vec<usize> = if dim == 0 {
                    Vec::new()
                } else {
                    (0..c.len())
                        .filter_map(|k| c.without(k))
                        .map(|f| index[&f].index)
                        .collect()
                };
                fs.sort_unstable();
                for &f in &fs {
                    cofacets[dim - 1][f].push(i);
                }
                per_dim.push(fs);
            }
            facets.push(per_dim);
        }
        // cofacets were pushed in increasing coface index, so they are sorted
        Self {
            n,
            cells,
            index,
            facets,
            cofacets,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Top dimension, or `None` for an empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn num_dims(&self) -> usize {
        self.cells.len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn cells(&self, dim: usize) -> &[Matching] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn cell(&self, id: CellId) -> &Matching {
        &self.cells[id.dim][id.index]
    }

    pub fn id_of(&self, cell: &Matching) -> Result<CellId> {
        self.index
            .get(cell)
            .copied()
            .ok_or_else(|| Error::CellNotFound(cell.clone()))
    }

    pub fn contains(&self, cell: &Matching) -> bool {
        self.index.contains_key(cell)
    }

    /// Facet indices (in dimension `id.dim - 1`), ascending.
    pub fn facet_ids(&self, id: CellId) -> &[usize] {
        &self.facets[id.dim][id.index]
    }

    /// Cofacet indices (in dimension `id.dim + 1`), ascending.
    pub fn cofacet_ids(&self, id: CellId) -> &[usize] {
        self.cofacets
            .get(id.dim)
            .map_or(&[], |level| level[id.index].as_slice())
    }

    pub fn facets(&self, cell: &Matching) -> Result<Vec<Matching>> {
        let id = self.id_of(cell)?;
        Ok(self
            .facet_ids(id)
            .iter()
            .map(|&i| self.cells[id.dim - 1][i].clone())
            .collect())
    }

    pub fn cofacets(&self, cell: &Matching) -> Result<Vec<Matching>> {
        let id = self.id_of(cell)?;
        Ok(self
            .cofacet_ids(id)
            .iter()
            .map(|&i| self.cells[id.dim + 1][i].clone())
            .collect())
    }

    /// Incidence sign `(-1)^i` of `facet` in the boundary of `cell`, where
    /// `i` is the position of the omitted pair.
    pub fn incidence(&self, cell: CellId, facet: CellId) -> i64 {
        debug_assert_eq!(cell.dim, facet.dim + 1);
        match self.cell(cell).omitted_index(self.cell(facet)) {
            Some(i) if i % 2 == 0 => 1,
            Some(_) => -1,
            None => 0,
        }
    }

    /// Serializes the complex, listing only maximal cells.
    pub fn to_text(&self) -> String {
        let mut out = format!("matching-complex n={}\n", self.n);
        for (dim, level) in self.cells.iter().enumerate() {
            for (i, c) in level.iter().enumerate() {
                if self.cofacet_ids(CellId::new(dim, i)).is_empty() {
                    let _ = writeln!(out, "{c}");
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let n: usize = header
            .strip_prefix("matching-complex n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                reason: format!("expected `matching-complex n=<n>`, found `{header}`"),
            })?;
        if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
            return Err(Error::OrderOutOfRange(n));
        }
        let mut cells = Vec::new();
        for (i, line) in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let cell: Matching = line.parse().map_err(|e: Error| Error::Parse {
                line: i + 1,
                reason: e.to_string(),
            })?;
            if cell.max_vertex() as usize > n {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("cell `{line}` uses a vertex above n={n}"),
                });
            }
            cells.push(cell);
        }
        Self::from_cells(n, cells)
    }
}
