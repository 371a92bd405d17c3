//! Exact integer homology of simplicial and Morse chain complexes.
//!
//! All arithmetic is over arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cell::Matching;
use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::gvf::{CriticalVector, GradientVectorField};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt, from_col: usize) {
        for j in from_col..self.cols {
            let v = &self.data[src * self.cols + j];
            if !v.is_zero() {
                let delta = factor * v;
                self.data[dst * self.cols + j] += delta;
            }
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt, from_row: usize) {
        for i in from_row..self.rows {
            let v = &self.data[i * self.cols + src];
            if !v.is_zero() {
                let delta = factor * v;
                self.data[i * self.cols + dst] += delta;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = -v;
        }
    }
}

/// Diagonal form `D = U * A * V` with `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<(IntegerMatrix, IntegerMatrix, IntegerMatrix)>,
}

/// Invariant factors and rank of `m`.
pub fn smith_normal_form(m: &IntegerMatrix) -> (Vec<BigInt>, usize) {
    let f = reduce(m.clone(), false);
    (f.invariant_factors, f.rank)
}

/// Like [`smith_normal_form`], also returning `(U, D, V)` with `U * m * V = D`.
pub fn smith_normal_form_with_transforms(m: &IntegerMatrix) -> SmithForm {
    reduce(m.clone(), true)
}

struct Tracker {
    u: IntegerMatrix,
    v: IntegerMatrix,
}

fn reduce(mut a: IntegerMatrix, track: bool) -> SmithForm {
    let (rows, cols) = (a.rows, a.cols);
    let mut tr = track.then(|| Tracker {
        u: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
    });
    let mut t = 0;
    while t < rows.min(cols) {
        // nonzero entry of least absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                    if v.abs().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| a.get(bi, bj).abs().is_one()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut a, &mut tr, t, pi);
        swap_cols(&mut a, &mut tr, t, pj);
        loop {
            let mut dirty = false;
            for i in (t + 1)..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                add_row(&mut a, &mut tr, i, t, &-q);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                add_col(&mut a, &mut tr, j, t, &-q);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // bring the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in (t + 1)..rows {
                    let v = a.get(i, t);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in (t + 1)..cols {
                    let v = a.get(t, j);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                swap_rows(&mut a, &mut tr, t, best.0);
                swap_cols(&mut a, &mut tr, t, best.1);
                continue;
            }
            // row and column cleared; enforce divisibility of the rest
            let p = a.get(t, t).clone();
            let offender = ((t + 1)..rows).find(|&i| {
                ((t + 1)..cols).any(|j| !a.get(i, j).is_multiple_of(&p))
            });
            match offender {
                Some(i) => add_row(&mut a, &mut tr, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(tr) = tr.as_mut() {
                tr.u.negate_row(t);
            }
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> = (0..t).map(|i| a.get(i, i).clone()).collect();
    let rank = invariant_factors.len();
    SmithForm {
        invariant_factors,
        rank,
        transforms: tr.map(|tr| (tr.u, a, tr.v)),
    }
}

fn swap_rows(a: &mut IntegerMatrix, tr: &mut Option<Tracker>, x: usize, y: usize) {
    a.swap_rows(x, y);
    if let Some(tr) = tr {
        tr.u.swap_rows(x, y);
    }
}

fn swap_cols(a: &mut IntegerMatrix, tr: &mut Option<Tracker>, x: usize, y: usize) {
    a.swap_cols(x, y);
    if let Some(tr) = tr {
        tr.v.swap_cols(x, y);
    }
}

fn add_row(a: &mut IntegerMatrix, tr: &mut Option<Tracker>, dst: usize, src: usize, f: &BigInt) {
    a.add_row(dst, src, f, 0);
    if let Some(tr) = tr {
        tr.u.add_row(dst, src, f, 0);
    }
}

fn add_col(a: &mut IntegerMatrix, tr: &mut Option<Tracker>, dst: usize, src: usize, f: &BigInt) {
    a.add_col(dst, src, f, 0);
    if let Some(tr) = tr {
        tr.v.add_col(dst, src, f, 0);
    }
}

/// Free chain complex over the integers. `boundary(k)` maps `C_k` to
/// `C_{k-1}` for `k >= 1`.
#[derive(Debug, Clone)]
pub struct ChainComplexZ {
    bases: Vec<Vec<Matching>>,
    boundaries: Vec<IntegerMatrix>,
}

impl ChainComplexZ {
    /// Checks shapes and `∂_k ∘ ∂_{k+1} = 0`.
    pub fn new(bases: Vec<Vec<Matching>>, boundaries: Vec<IntegerMatrix>) -> Result<Self> {
        assert_eq!(boundaries.len(), bases.len().saturating_sub(1), "one boundary per positive degree");
        for (k, d) in boundaries.iter().enumerate() {
            assert_eq!(d.rows(), bases[k].len());
            assert_eq!(d.cols(), bases[k + 1].len());
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k]).is_zero() {
                return Err(Error::BoundaryNotNilpotent(k));
            }
        }
        Ok(Self { bases, boundaries })
    }

    pub fn num_degrees(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, k: usize) -> &[Matching] {
        &self.bases[k]
    }

    pub fn boundary(&self, k: usize) -> Option<&IntegerMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }
}

/// Betti numbers and torsion coefficients per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologySummary {
    fn group(&self, k: usize) -> String {
        let mut parts = Vec::new();
        match self.betti[k] {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion[k].iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// One `H_<k> = ...` line per degree followed by `lower_bounds = (...)`.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for k in 0..self.betti.len() {
            out.push_str(&format!("H_{k} = {}\n", self.group(k)));
        }
        out.push_str(&format!("lower_bounds = {}\n", morse_lower_bounds(self)));
        out
    }

    /// Single-line form, e.g. `H_0=Z, H_1=Z/3, H_2=Z^20; lower_bounds=(1,1,21)`.
    pub fn summary_line(&self) -> String {
        let groups: Vec<String> = (0..self.betti.len())
            .map(|k| format!("H_{k}={}", self.group(k)))
            .collect();
        let bounds: Vec<String> = morse_lower_bounds(self).0.iter().map(ToString::to_string).collect();
        format!("{}; lower_bounds=({})", groups.join(", "), bounds.join(","))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

/// Boundary `∂_k` of the complex: rows are `(k-1)`-cells, columns are
/// `k`-cells, entry `(-1)^i` when the row cell omits the `i`-th pair.
pub fn simplicial_boundary(cplx: &SimplicialComplex, k: usize) -> Result<IntegerMatrix> {
    let max = cplx.dim().unwrap_or(0);
    if k == 0 || k > max {
        return Err(Error::DegreeOutOfRange { k, max });
    }
    let mut m = IntegerMatrix::zeros(cplx.cells(k - 1).len(), cplx.cells(k).len());
    for j in 0..cplx.cells(k).len() {
        let sigma = CellId::new(k, j);
        for &i in cplx.facet_ids(sigma) {
            m.set(i, j, BigInt::from(cplx.incidence(sigma, CellId::new(k - 1, i))));
        }
    }
    Ok(m)
}

pub fn simplicial_chain_complex(cplx: &SimplicialComplex) -> Result<ChainComplexZ> {
    let top = cplx.num_dims();
    let bases = (0..top).map(|d| cplx.cells(d).to_vec()).collect();
    let boundaries = (1..top)
        .map(|k| simplicial_boundary(cplx, k))
        .collect::<Result<Vec<_>>>()?;
    ChainComplexZ::new(bases, boundaries)
}

pub fn homology_of(cc: &ChainComplexZ) -> Result<HomologySummary> {
    let n = cc.num_degrees();
    let snfs: Vec<(Vec<BigInt>, usize)> = (1..n)
        .map(|k| smith_normal_form(cc.boundary(k).expect("degree in range")))
        .collect();
    let rank = |k: usize| -> usize {
        if k == 0 || k >= n {
            0
        } else {
            snfs[k - 1].1
        }
    };
    let mut betti = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for k in 0..n {
        betti.push(cc.basis(k).len() - rank(k) - rank(k + 1));
        let t = if k + 1 < n {
            snfs[k].0.iter().filter(|d| !d.is_one()).cloned().collect()
        } else {
            Vec::new()
        };
        torsion.push(t);
    }
    Ok(HomologySummary { betti, torsion })
}

pub fn simplicial_homology(cplx: &SimplicialComplex) -> Result<HomologySummary> {
    homology_of(&simplicial_chain_complex(cplx)?)
}

/// The Morse complex of an acyclic field: critical cells as bases, and
/// `<∂η, σ>` the signed count of gradient paths from facets of `η` to `σ`.
pub fn morse_boundary(field: &GradientVectorField) -> Result<ChainComplexZ> {
    if !field.is_acyclic() {
        return Err(Error::Cyclic);
    }
    let cplx = field.complex();
    let n = cplx.num_dims();
    let crit: Vec<Vec<CellId>> = (0..n).map(|d| field.critical_ids(d)).collect();
    let bases = crit
        .iter()
        .map(|ids| ids.iter().map(|&id| cplx.cell(id).clone()).collect())
        .collect();
    let mut boundaries = Vec::new();
    for k in 1..n {
        let row_of: std::collections::HashMap<usize, usize> =
            crit[k - 1].iter().enumerate().map(|(r, id)| (id.index, r)).collect();
        let mut m = IntegerMatrix::zeros(crit[k - 1].len(), crit[k].len());
        for (col, &eta) in crit[k].iter().enumerate() {
            for path in field.enumerate_paths_from(eta) {
                let w = path_weight(cplx, &path);
                let row = row_of[&path.end().index];
                let cur = m.get(row, col).clone();
                m.set(row, col, cur + w);
            }
        }
        boundaries.push(m);
    }
    ChainComplexZ::new(bases, boundaries)
}

/// `<∂η, τ_0> · Π -<∂σ_i, τ_i><∂σ_i, τ_{i+1}>`.
pub(crate) fn path_weight(cplx: &SimplicialComplex, path: &crate::gvf::GradientPath) -> i64 {
    let c = &path.cells;
    let mut w = cplx.incidence(path.source, c[0]);
    let mut i = 1;
    while i + 1 < c.len() {
        w *= -cplx.incidence(c[i], c[i - 1]) * cplx.incidence(c[i], c[i + 1]);
        i += 2;
    }
    w
}

/// Right-hand sides of the strong Morse inequalities with torsion:
/// `c_k >= b_k + t_k + t_{k-1}`.
pub fn morse_lower_bounds(h: &HomologySummary) -> CriticalVector {
    CriticalVector(
        (0..h.betti.len())
            .map(|k| {
                let below = if k > 0 { h.torsion[k - 1].len() } else { 0 };
                h.betti[k] + h.torsion[k].len() + below
            })
            .collect(),
    )
}
