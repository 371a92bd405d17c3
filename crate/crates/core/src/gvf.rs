//! Gradient vector fields: acyclic matchings on the Hasse diagram.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::cell::Matching;
use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};

/// Role of a cell in a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Critical,
    /// Paired with the cofacet at this index in the next dimension.
    Up(usize),
    /// Paired with the facet at this index in the previous dimension.
    Down(usize),
}

/// Number of critical cells per dimension.
///
/// Ordering is lexicographic from dimension 0 upward.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CriticalVector(pub Vec<usize>);

impl CriticalVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn get(&self, dim: usize) -> usize {
        self.0.get(dim).copied().unwrap_or(0)
    }
}

impl fmt::Display for CriticalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// An alternating sequence `tau_0, sigma_0, tau_1, ..., tau_k` leaving a
/// facet of `source` and ending at a critical cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradientPath {
    pub source: CellId,
    pub cells: Vec<CellId>,
}

impl GradientPath {
    /// Number of pairs traversed (`k`).
    pub fn len(&self) -> usize {
        self.cells.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn start(&self) -> CellId {
        self.cells[0]
    }

    pub fn end(&self) -> CellId {
        *self.cells.last().expect("paths are never empty")
    }

    pub fn taus(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().step_by(2).copied()
    }

    pub fn sigmas(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().skip(1).step_by(2).copied()
    }

    /// `tau_0 -> sigma_0 -> ... -> tau_k` in cell text form.
    pub fn describe(&self, cplx: &SimplicialComplex) -> String {
        self.cells
            .iter()
            .map(|&id| cplx.cell(id).to_string())
            .collect::<Vec<_>>()
            .join(" -> ")
    }
}

#[derive(Debug, Clone)]
pub struct GradientVectorField {
    complex: Arc<SimplicialComplex>,
    status: Vec<Vec<Status>>,
}

impl PartialEq for GradientVectorField {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex)
            && self.status == other.status
    }
}

impl Eq for GradientVectorField {}

impl GradientVectorField {
    /// The field with no pairs: every cell is critical.
    pub fn empty(complex: Arc<SimplicialComplex>) -> Self {
        let status = (0..complex.num_dims())
            .map(|d| vec![Status::Critical; complex.cells(d).len()])
            .collect();
        Self { complex, status }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn status(&self, id: CellId) -> Status {
        self.status[id.dim][id.index]
    }

    pub fn is_critical(&self, id: CellId) -> bool {
        self.status(id) == Status::Critical
    }

    pub fn num_pairs(&self) -> usize {
        self.status
            .iter()
            .flatten()
            .filter(|s| matches!(s, Status::Up(_)))
            .count()
    }

    /// Adds `(tau, sigma)` without checking acyclicity.
    pub fn add_pair(&mut self, tau: &Matching, sigma: &Matching) -> Result<()> {
        let t = self.complex.id_of(tau)?;
        let s = self.complex.id_of(sigma)?;
        self.add_pair_ids(t, s)
    }

    pub fn add_pair_ids(&mut self, tau: CellId, sigma: CellId) -> Result<()> {
        if sigma.dim != tau.dim + 1 || self.complex.facet_ids(sigma).binary_search(&tau.index).is_err() {
            return Err(Error::NotAFacet {
                tau: self.complex.cell(tau).clone(),
                sigma: self.complex.cell(sigma).clone(),
            });
        }
        for id in [tau, sigma] {
            if !self.is_critical(id) {
                return Err(Error::AlreadyPaired(self.complex.cell(id).clone()));
            }
        }
        self.status[tau.dim][tau.index] = Status::Up(sigma.index);
        self.status[sigma.dim][sigma.index] = Status::Down(tau.index);
        Ok(())
    }

    /// Unpairs `tau` (and its partner). No-op when `tau` is not paired upward.
    pub(crate) fn remove_pair_ids(&mut self, tau: CellId) {
        if let Status::Up(s) = self.status(tau) {
            self.status[tau.dim][tau.index] = Status::Critical;
            self.status[tau.dim + 1][s] = Status::Critical;
        }
    }

    /// All pairs `(tau, sigma)`, ordered by `tau`.
    pub fn pairs(&self) -> Vec<(CellId, CellId)> {
        let mut out = Vec::new();
        for (dim, level) in self.status.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                if let Status::Up(j) = *s {
                    out.push((CellId::new(dim, i), CellId::new(dim + 1, j)));
                }
            }
        }
        out
    }

    pub fn critical_ids(&self, dim: usize) -> Vec<CellId> {
        self.status
            .get(dim)
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| **s == Status::Critical)
                    .map(|(i, _)| CellId::new(dim, i))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Unpaired cells per dimension, canonical order.
    pub fn critical_cells(&self) -> Vec<Vec<Matching>> {
        (0..self.status.len())
            .map(|d| {
                self.critical_ids(d)
                    .into_iter()
                    .map(|id| self.complex.cell(id).clone())
                    .collect()
            })
            .collect()
    }

    pub fn critical_vector(&self) -> CriticalVector {
        CriticalVector(
            self.status
                .iter()
                .map(|l| l.iter().filter(|s| **s == Status::Critical).count())
                .collect(),
        )
    }

    /// Successors of `id` in the modified Hasse digraph that can continue a
    /// V-path: the partner for an upward-paired cell, otherwise facets that
    /// are themselves paired upward (excluding the cell's own partner).
    fn vpath_successors(&self, id: CellId, out: &mut Vec<CellId>) {
        out.clear();
        match self.status(id) {
            Status::Up(s) => out.push(CellId::new(id.dim + 1, s)),
            own => {
                if id.dim == 0 {
                    return;
                }
                for &f in self.complex.facet_ids(id) {
                    if own == Status::Down(f) {
                        continue;
                    }
                    let fid = CellId::new(id.dim - 1, f);
                    if matches!(self.status(fid), Status::Up(_)) {
                        out.push(fid);
                    }
                }
            }
        }
    }

    /// True iff the modified Hasse diagram has no closed V-path.
    pub fn is_acyclic(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let mut mark: Vec<Vec<Mark>> = self.status.iter().map(|l| vec![Mark::New; l.len()]).collect();
        let mut succ = Vec::new();
        for (tau, _) in self.pairs() {
            if mark[tau.dim][tau.index] != Mark::New {
                continue;
            }
            mark[tau.dim][tau.index] = Mark::Open;
            self.vpath_successors(tau, &mut succ);
            let mut stack = vec![(tau, succ.clone(), 0usize)];
            while let Some((node, next, pos)) = stack.last_mut() {
                if *pos == next.len() {
                    mark[node.dim][node.index] = Mark::Done;
                    stack.pop();
                    continue;
                }
                let child = next[*pos];
                *pos += 1;
                match mark[child.dim][child.index] {
                    Mark::Open => return false,
                    Mark::Done => {}
                    Mark::New => {
                        mark[child.dim][child.index] = Mark::Open;
                        self.vpath_successors(child, &mut succ);
                        stack.push((child, succ.clone(), 0));
                    }
                }
            }
        }
        true
    }

    /// Whether adding `(tau, sigma)` would close a V-path, i.e. whether some
    /// V-path leaves `sigma` through a facet other than `tau` and returns to
    /// `tau`. Both cells must currently be critical.
    pub fn would_close_cycle(&self, tau: CellId, sigma: CellId) -> bool {
        let mut seen = HashSet::new();
        let mut stack = Vec::new();
        for &f in self.complex.facet_ids(sigma) {
            if f != tau.index {
                stack.push(CellId::new(tau.dim, f));
            }
        }
        while let Some(id) = stack.pop() {
            if id == tau {
                return true;
            }
            if !seen.insert(id) {
                continue;
            }
            if let Status::Up(s) = self.status(id) {
                for &f in self.complex.facet_ids(CellId::new(id.dim + 1, s)) {
                    if f != id.index {
                        stack.push(CellId::new(id.dim, f));
                    }
                }
            }
        }
        false
    }

    fn critical_source(&self, source: &Matching) -> Result<CellId> {
        let id = self.complex.id_of(source)?;
        if !self.is_critical(id) {
            return Err(Error::NotCritical(source.clone()));
        }
        Ok(id)
    }

    /// Every maximal gradient path from a facet of `source` to a critical
    /// cell, by exhaustive depth-first expansion in canonical order.
    pub fn enumerate_paths(&self, source: &Matching) -> Result<Vec<GradientPath>> {
        let id = self.critical_source(source)?;
        Ok(self.enumerate_paths_from(id))
    }

    pub fn enumerate_paths_from(&self, source: CellId) -> Vec<GradientPath> {
        let mut out = Vec::new();
        if source.dim == 0 {
            return out;
        }
        let mut trail = Vec::new();
        for &f in self.complex.facet_ids(source) {
            trail.clear();
            self.expand(source, CellId::new(source.dim - 1, f), &mut trail, &mut out);
        }
        out
    }

    fn expand(&self, source: CellId, tau: CellId, trail: &mut Vec<CellId>, out: &mut Vec<GradientPath>) {
        trail.push(tau);
        match self.status(tau) {
            Status::Critical => out.push(GradientPath {
                source,
                cells: trail.clone(),
            }),
            Status::Down(_) => {}
            Status::Up(s) => {
                let sigma = CellId::new(tau.dim + 1, s);
                trail.push(sigma);
                for &f in self.complex.facet_ids(sigma) {
                    if f != tau.index {
                        self.expand(source, CellId::new(tau.dim, f), trail, out);
                    }
                }
                trail.pop();
            }
        }
        trail.pop();
    }

    /// Gradient path counts from facets of `source`, grouped by the critical
    /// cell they end at, in canonical order of that cell.
    pub fn path_endpoints(&self, source: &Matching) -> Result<Vec<(Matching, usize)>> {
        let id = self.critical_source(source)?;
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for p in self.enumerate_paths_from(id) {
            *counts.entry(p.end().index).or_default() += 1;
        }
        Ok(counts
            .into_iter()
            .map(|(i, c)| (self.complex.cell(CellId::new(id.dim - 1, i)).clone(), c))
            .collect())
    }

    /// Indices of `p`-cells reachable by V-paths from `starts`, in
    /// topological order (every cell precedes the cells it leads to).
    fn reachable_in_order(&self, p: usize, starts: &[usize]) -> Vec<usize> {
        let mut order = Vec::new();
        let mut seen = HashSet::new();
        for &start in starts {
            if !seen.insert(start) {
                continue;
            }
            let mut stack = vec![(start, self.next_taus(CellId::new(p, start)), 0usize)];
            while let Some((node, next, pos)) = stack.last_mut() {
                if *pos == next.len() {
                    order.push(*node);
                    stack.pop();
                    continue;
                }
                let child = next[*pos];
                *pos += 1;
                if seen.insert(child) {
                    let grand = self.next_taus(CellId::new(p, child));
                    stack.push((child, grand, 0));
                }
            }
        }
        order.reverse();
        order
    }

    /// Path counts per critical endpoint (index in dimension
    /// `source.dim - 1`), computed by dynamic programming over the V-path
    /// digraph rather than by enumeration. Counts saturate at `u64::MAX`.
    pub fn path_counts_from(&self, source: CellId) -> BTreeMap<usize, u64> {
        let mut result = BTreeMap::new();
        if source.dim == 0 {
            return result;
        }
        let p = source.dim - 1;
        let starts = self.complex.facet_ids(source);
        let mut count: HashMap<usize, u64> = HashMap::new();
        for &s in starts {
            *count.entry(s).or_default() += 1;
        }
        for tau in self.reachable_in_order(p, starts) {
            let c = count.get(&tau).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            let id = CellId::new(p, tau);
            match self.status(id) {
                Status::Critical => {
                    result.insert(tau, c);
                }
                Status::Down(_) => {}
                Status::Up(_) => {
                    for next in self.next_taus(id) {
                        let e = count.entry(next).or_default();
                        *e = e.saturating_add(c);
                    }
                }
            }
        }
        result
    }

    /// The gradient paths from facets of `source` that end at `target`,
    /// enumerating at most `limit` of them. Branches that cannot reach
    /// `target` are pruned.
    pub fn paths_between(&self, source: CellId, target: CellId, limit: usize) -> Vec<GradientPath> {
        let mut out = Vec::new();
        if source.dim == 0 || target.dim + 1 != source.dim {
            return out;
        }
        let p = target.dim;
        let starts = self.complex.facet_ids(source);
        let mut reaches: HashMap<usize, bool> = HashMap::new();
        for tau in self.reachable_in_order(p, starts).into_iter().rev() {
            let r = if tau == target.index {
                self.is_critical(target)
            } else {
                self.next_taus(CellId::new(p, tau))
                    .iter()
                    .any(|n| reaches.get(n).copied().unwrap_or(false))
            };
            reaches.insert(tau, r);
        }
        let mut trail = Vec::new();
        for &f in starts {
            if reaches.get(&f).copied().unwrap_or(false) {
                self.walk_to(source, CellId::new(p, f), target, &reaches, &mut trail, &mut out, limit);
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_to(
        &self,
        source: CellId,
        tau: CellId,
        target: CellId,
        reaches: &HashMap<usize, bool>,
        trail: &mut Vec<CellId>,
        out: &mut Vec<GradientPath>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        trail.push(tau);
        if tau == target {
            out.push(GradientPath {
                source,
                cells: trail.clone(),
            });
        } else if let Status::Up(s) = self.status(tau) {
            let sigma = CellId::new(tau.dim + 1, s);
            trail.push(sigma);
            for next in self.next_taus(tau) {
                if reaches.get(&next).copied().unwrap_or(false) {
                    self.walk_to(source, CellId::new(tau.dim, next), target, reaches, trail, out, limit);
                }
            }
            trail.pop();
        }
        trail.pop();
    }

    fn next_taus(&self, tau: CellId) -> Vec<usize> {
        match self.status(tau) {
            Status::Up(s) => self
                .complex
                .facet_ids(CellId::new(tau.dim + 1, s))
                .iter()
                .copied()
                .filter(|&f| f != tau.index)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Content hash of the pairing, used to bind plans to a field.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.complex.n().hash(&mut h);
        self.complex.f_vector().hash(&mut h);
        self.status.hash(&mut h);
        h.finish()
    }

    /// `gvf complex=<n>` followed by one `tau => sigma` line per pair.
    pub fn to_text(&self) -> String {
        let mut out = format!("gvf complex={}\n", self.complex.n());
        for (t, s) in self.pairs() {
            let _ = writeln!(out, "{} => {}", self.complex.cell(t), self.complex.cell(s));
        }
        out
    }

    /// Parses the pair listing and rejects it unless the result is acyclic.
    pub fn from_text(complex: Arc<SimplicialComplex>, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let n: usize = header
            .strip_prefix("gvf complex=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                reason: format!("expected `gvf complex=<n>`, found `{header}`"),
            })?;
        if n != complex.n() {
            return Err(Error::Parse {
                line: 1,
                reason: format!("field is for n={n} but the complex has n={}", complex.n()),
            });
        }
        let mut field = Self::empty(complex);
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| Error::Parse {
                line: i + 1,
                reason: e.to_string(),
            };
            let (tau, sigma) = line.split_once(" => ").ok_or_else(|| Error::Parse {
                line: i + 1,
                reason: "expected `<tau> => <sigma>`".into(),
            })?;
            let tau: Matching = tau.parse().map_err(at)?;
            let sigma: Matching = sigma.parse().map_err(at)?;
            field.add_pair(&tau, &sigma).map_err(at)?;
        }
        if !field.is_acyclic() {
            return Err(Error::Cyclic);
        }
        Ok(field)
    }

    /// Graphviz rendering of the modified Hasse diagram: matched arcs point
    /// up, all other facet arcs point down, critical cells are boxed.
    pub fn to_dot(&self) -> String {
        let c = &self.complex;
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for d in 0..c.num_dims() {
            for (i, cell) in c.cells(d).iter().enumerate() {
                let id = CellId::new(d, i);
                let style = if self.is_critical(id) {
                    ", shape=box, color=red, critical=true"
                } else {
                    ""
                };
                let _ = writeln!(out, "  \"{cell}\" [dim={d}{style}];");
            }
        }
        for d in 1..c.num_dims() {
            for (i, cell) in c.cells(d).iter().enumerate() {
                let id = CellId::new(d, i);
                for &f in c.facet_ids(id) {
                    let face = &c.cells(d - 1)[f];
                    if self.status(id) == Status::Down(f) {
                        let _ = writeln!(out, "  \"{face}\" -> \"{cell}\" [dir=up, color=blue];");
                    } else {
                        let _ = writeln!(out, "  \"{cell}\" -> \"{face}\" [dir=down];");
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_matching_complex;

    fn m(s: &str) -> Matching {
        s.parse().unwrap()
    }

    fn complex(n: usize) -> Arc<SimplicialComplex> {
        Arc::new(build_matching_complex(n).unwrap())
    }

    #[test]
    fn empty_field_is_all_critical() {
        assert_eq!(GradientVectorField::empty(complex(3)).critical_vector().0, vec![3]);
        assert_eq!(GradientVectorField::empty(complex(4)).critical_vector().0, vec![6, 3]);
        let f = GradientVectorField::empty(complex(7));
        assert_eq!(f.critical_vector().0, vec![21, 105, 105]);
        assert_eq!(f.critical_cells().iter().map(Vec::len).sum::<usize>(), 231);
        assert!(f.is_acyclic());
    }

    #[test]
    fn add_pair_rules() {
        let mut f = GradientVectorField::empty(complex(4));
        f.add_pair(&m("1-2"), &m("1-2,3-4")).unwrap();
        assert_eq!(f.critical_vector().0, vec![5, 2]);
        assert!(f.is_acyclic());
        assert_eq!(
            f.add_pair(&m("1-2"), &m("1-2,3-4")),
            Err(Error::AlreadyPaired(m("1-2")))
        );
        assert_eq!(
            f.add_pair(&m("3-4"), &m("1-2,3-4")),
            Err(Error::AlreadyPaired(m("1-2,3-4")))
        );
        let mut g = GradientVectorField::empty(complex(5));
        assert!(matches!(
            g.add_pair(&m("1-2"), &m("1-3,4-5")),
            Err(Error::NotAFacet { .. })
        ));
    }

    #[test]
    fn trivial_paths_on_empty_field() {
        let f = GradientVectorField::empty(complex(7));
        let paths = f.enumerate_paths(&m("1-5,2-6,4-7")).unwrap();
        assert_eq!(paths.len(), 3);
        assert!(paths.iter().all(|p| p.is_empty()));
        let ends: Vec<String> = paths.iter().map(|p| f.complex().cell(p.end()).to_string()).collect();
        assert_eq!(ends, ["1-5,2-6", "1-5,4-7", "2-6,4-7"]);
    }

    #[test]
    fn non_critical_source_is_rejected() {
        let mut f = GradientVectorField::empty(complex(4));
        f.add_pair(&m("1-2"), &m("1-2,3-4")).unwrap();
        assert_eq!(
            f.enumerate_paths(&m("1-2,3-4")),
            Err(Error::NotCritical(m("1-2,3-4")))
        );
    }

    #[test]
    fn closing_a_triangle_of_vertices_is_detected() {
        // M_6 contains the triangle 1-2, 3-4, 5-6 (pairwise disjoint edges).
        let c = complex(6);
        let mut f = GradientVectorField::empty(c.clone());
        f.add_pair(&m("1-2"), &m("1-2,3-4")).unwrap();
        f.add_pair(&m("3-4"), &m("3-4,5-6")).unwrap();
        assert!(f.is_acyclic());
        let t = c.id_of(&m("5-6")).unwrap();
        let s = c.id_of(&m("1-2,5-6")).unwrap();
        assert!(f.would_close_cycle(t, s));
        f.add_pair(&m("5-6"), &m("1-2,5-6")).unwrap();
        assert!(!f.is_acyclic());
    }

    #[test]
    fn dot_of_empty_m4() {
        let f = GradientVectorField::empty(complex(4));
        let dot = f.to_dot();
        assert_eq!(dot.matches("[dim=").count(), 9);
        assert_eq!(dot.matches("[dir=down]").count(), 6);
        assert_eq!(dot.matches("[dir=up").count(), 0);
    }
}
