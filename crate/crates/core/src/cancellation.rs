//! Cancellation of critical pairs by reversing gradient paths, one pair at a
//! time or several at once.

use std::collections::HashSet;

use crate::cell::Matching;
use crate::complex::CellId;
use crate::error::{Error, Result};
use crate::gvf::{GradientPath, GradientVectorField};

/// One pair of a [`CancellationPlan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedCancellation {
    pub eta: CellId,
    pub sigma: CellId,
    pub path: GradientPath,
    /// Exactly one gradient path joins a facet of `eta` to `sigma`.
    pub unique: bool,
}

/// A set of pairs to cancel simultaneously, bound to the field it was checked
/// against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellationPlan {
    entries: Vec<PlannedCancellation>,
    fingerprint: u64,
}

impl CancellationPlan {
    pub fn empty_for(field: &GradientVectorField) -> Self {
        Self {
            entries: Vec::new(),
            fingerprint: field.fingerprint(),
        }
    }

    pub fn entries(&self) -> &[PlannedCancellation] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The realized bijection as `(eta, sigma)` cells.
    pub fn bijection(&self, field: &GradientVectorField) -> Vec<(Matching, Matching)> {
        let c = field.complex();
        self.entries
            .iter()
            .map(|e| (c.cell(e.eta).clone(), c.cell(e.sigma).clone()))
            .collect()
    }
}

/// One line of a cancellation log.
pub fn log_line(field: &GradientVectorField, eta: CellId, sigma: CellId, path: &GradientPath) -> String {
    let c = field.complex();
    format!(
        "cancel p={} eta={} sigma={} path_len={}",
        sigma.dim,
        c.cell(eta),
        c.cell(sigma),
        path.len()
    )
}

fn reversal(eta: CellId, path: &GradientPath) -> (Vec<CellId>, Vec<(CellId, CellId)>) {
    let cells = &path.cells;
    let removed: Vec<CellId> = cells.iter().step_by(2).take(path.len()).copied().collect();
    let mut added = vec![(cells[0], eta)];
    let mut i = 1;
    while i + 1 < cells.len() {
        added.push((cells[i + 1], cells[i]));
        i += 2;
    }
    (removed, added)
}

/// Reverses the pairing along `path` with no uniqueness or acyclicity check.
/// The result may contain a closed V-path.
pub fn force_reverse(field: &GradientVectorField, eta: CellId, path: &GradientPath) -> GradientVectorField {
    let (removed, added) = reversal(eta, path);
    let mut out = field.clone();
    for tau in removed {
        out.remove_pair_ids(tau);
    }
    for (t, s) in added {
        out.add_pair_ids(t, s).expect("reversal pairs are facet pairs of freed cells");
    }
    out
}

fn check_critical(field: &GradientVectorField, id: CellId) -> Result<()> {
    if field.is_critical(id) {
        Ok(())
    } else {
        Err(Error::NotCritical(field.complex().cell(id).clone()))
    }
}

fn unique_path(field: &GradientVectorField, eta: CellId, sigma: CellId) -> Result<GradientPath> {
    let c = field.complex();
    check_critical(field, eta)?;
    check_critical(field, sigma)?;
    if eta.dim != sigma.dim + 1 {
        return Err(Error::InvalidRequest(format!(
            "{} and {} are not in adjacent dimensions",
            c.cell(eta),
            c.cell(sigma)
        )));
    }
    let mut paths = field.paths_between(eta, sigma, 2);
    match paths.len() {
        0 => Err(Error::NoPath {
            eta: c.cell(eta).clone(),
            sigma: c.cell(sigma).clone(),
        }),
        1 => Ok(paths.pop().expect("one path")),
        _ => {
            let count = field.path_counts_from(eta).get(&sigma.index).copied().unwrap_or(0);
            Err(Error::NonUniquePath {
                eta: c.cell(eta).clone(),
                sigma: c.cell(sigma).clone(),
                count,
            })
        }
    }
}

/// Cancels the critical pair `(eta, sigma)`, which must be joined by exactly
/// one gradient path.
pub fn cancel_pair(field: &GradientVectorField, eta: &Matching, sigma: &Matching) -> Result<GradientVectorField> {
    let c = field.complex();
    let (e, s) = (c.id_of(eta)?, c.id_of(sigma)?);
    cancel_pair_ids(field, e, s).map(|(f, _)| f)
}

/// Id-based [`cancel_pair`], also returning the reversed path.
pub fn cancel_pair_ids(
    field: &GradientVectorField,
    eta: CellId,
    sigma: CellId,
) -> Result<(GradientVectorField, GradientPath)> {
    let path = unique_path(field, eta, sigma)?;
    let out = force_reverse(field, eta, &path);
    if !out.is_acyclic() {
        return Err(Error::Cyclic);
    }
    Ok((out, path))
}

/// Every pair of critical cells in adjacent dimensions joined by exactly one
/// gradient path, ordered by dimension, then `eta`, then `sigma`.
pub fn find_cancellable_pair_ids(field: &GradientVectorField) -> Vec<(CellId, CellId)> {
    let mut out = Vec::new();
    for dim in 1..field.complex().num_dims() {
        for eta in field.critical_ids(dim) {
            for (sigma, count) in field.path_counts_from(eta) {
                if count == 1 {
                    out.push((eta, CellId::new(dim - 1, sigma)));
                }
            }
        }
    }
    out
}

pub fn find_cancellable_pairs(field: &GradientVectorField) -> Vec<(Matching, Matching)> {
    let c = field.complex();
    find_cancellable_pair_ids(field)
        .into_iter()
        .map(|(e, s)| (c.cell(e).clone(), c.cell(s).clone()))
        .collect()
}

/// All perfect matchings of the bipartite relation `edges[i][j]`, stopping
/// once `limit` have been found.
fn perfect_matchings(edges: &[Vec<bool>], limit: usize) -> Vec<Vec<usize>> {
    fn go(row: usize, edges: &[Vec<bool>], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if row == edges.len() {
            out.push(cur.clone());
            return;
        }
        for (j, &ok) in edges[row].iter().enumerate() {
            if ok && !used[j] {
                used[j] = true;
                cur.push(j);
                go(row + 1, edges, used, cur, out, limit);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    let cols = edges.first().map_or(0, Vec::len);
    go(0, edges, &mut vec![false; cols], &mut Vec::new(), &mut out, limit);
    out
}

/// Checks whether the critical cells `etas` (dimension `p+1`) and `sigmas`
/// (dimension `p`) can be cancelled simultaneously: the relation "some
/// gradient path joins a facet of `eta` to `sigma`" must admit exactly one
/// bijection, and each pair of that bijection must be joined by exactly one
/// path.
pub fn check_simultaneous(
    field: &GradientVectorField,
    etas: &[Matching],
    sigmas: &[Matching],
) -> Result<CancellationPlan> {
    let c = field.complex();
    let etas = etas.iter().map(|m| c.id_of(m)).collect::<Result<Vec<_>>>()?;
    let sigmas = sigmas.iter().map(|m| c.id_of(m)).collect::<Result<Vec<_>>>()?;
    check_simultaneous_ids(field, &etas, &sigmas)
}

pub fn check_simultaneous_ids(
    field: &GradientVectorField,
    etas: &[CellId],
    sigmas: &[CellId],
) -> Result<CancellationPlan> {
    if etas.len() != sigmas.len() {
        return Err(Error::InvalidRequest(format!(
            "{} etas but {} sigmas",
            etas.len(),
            sigmas.len()
        )));
    }
    if etas.is_empty() {
        return Ok(CancellationPlan::empty_for(field));
    }
    let distinct = |ids: &[CellId]| ids.iter().collect::<HashSet<_>>().len() == ids.len();
    if !distinct(etas) || !distinct(sigmas) {
        return Err(Error::InvalidRequest("cells must be distinct".into()));
    }
    let p = sigmas[0].dim;
    if sigmas.iter().any(|s| s.dim != p) || etas.iter().any(|e| e.dim != p + 1) {
        return Err(Error::InvalidRequest(
            "etas must share dimension p+1 and sigmas dimension p".into(),
        ));
    }
    for &id in etas.iter().chain(sigmas) {
        check_critical(field, id)?;
    }
    let counts: Vec<Vec<u64>> = etas
        .iter()
        .map(|&e| {
            let reach = field.path_counts_from(e);
            sigmas
                .iter()
                .map(|s| reach.get(&s.index).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    let exists: Vec<Vec<bool>> = counts.iter().map(|r| r.iter().map(|&c| c > 0).collect()).collect();
    let matchings = perfect_matchings(&exists, 2);
    let bijection = match matchings.len() {
        0 => return Err(Error::Infeasible),
        1 => &matchings[0],
        _ => return Err(Error::AmbiguousBijection),
    };
    let cplx = field.complex();
    let mut entries = Vec::with_capacity(etas.len());
    for (i, &j) in bijection.iter().enumerate() {
        if counts[i][j] != 1 {
            return Err(Error::NonUniquePath {
                eta: cplx.cell(etas[i]).clone(),
                sigma: cplx.cell(sigmas[j]).clone(),
                count: counts[i][j],
            });
        }
        let path = unique_path(field, etas[i], sigmas[j])?;
        entries.push(PlannedCancellation {
            eta: etas[i],
            sigma: sigmas[j],
            path,
            unique: true,
        });
    }
    Ok(CancellationPlan {
        entries,
        fingerprint: field.fingerprint(),
    })
}

/// Reverses every path of `plan` at once.
pub fn apply_plan(field: &GradientVectorField, plan: &CancellationPlan) -> Result<GradientVectorField> {
    if plan.fingerprint != field.fingerprint() {
        return Err(Error::StalePlan);
    }
    let mut touched = HashSet::new();
    for entry in &plan.entries {
        for &id in std::iter::once(&entry.eta).chain(entry.path.cells.iter()) {
            if !touched.insert(id) {
                return Err(Error::OverlappingPaths(field.complex().cell(id).clone()));
            }
        }
    }
    let mut out = field.clone();
    for entry in &plan.entries {
        out = force_reverse(&out, entry.eta, &entry.path);
    }
    if !out.is_acyclic() {
        return Err(Error::Cyclic);
    }
    Ok(out)
}
