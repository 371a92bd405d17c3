#![allow(dead_code)]

use std::collections::VecDeque;
use std::sync::Arc;

use matching_morse::{build_matching_complex, CellId, GradientVectorField, SimplicialComplex, Status};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn complex(n: usize) -> Arc<SimplicialComplex> {
    Arc::new(build_matching_complex(n).unwrap())
}

fn incidences(c: &SimplicialComplex) -> Vec<(CellId, CellId)> {
    let mut out = Vec::new();
    for d in 1..c.num_dims() {
        for i in 0..c.cells(d).len() {
            let s = CellId::new(d, i);
            for &f in c.facet_ids(s) {
                out.push((CellId::new(d - 1, f), s));
            }
        }
    }
    out
}

/// Random acyclic field: incidences in shuffled order, each kept with
/// probability `keep` when both ends are free and no V-path closes.
pub fn random_field(c: &Arc<SimplicialComplex>, seed: u64, keep: f64) -> GradientVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inc = incidences(c);
    inc.shuffle(&mut rng);
    let mut f = GradientVectorField::empty(Arc::clone(c));
    for (t, s) in inc {
        if rng.gen_bool(keep) && f.is_critical(t) && f.is_critical(s) && !f.would_close_cycle(t, s) {
            f.add_pair_ids(t, s).unwrap();
        }
    }
    f
}

/// Random matching of the Hasse diagram with no acyclicity filter.
pub fn random_matching(c: &Arc<SimplicialComplex>, seed: u64, keep: f64) -> GradientVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inc = incidences(c);
    inc.shuffle(&mut rng);
    let mut f = GradientVectorField::empty(Arc::clone(c));
    for (t, s) in inc {
        if rng.gen_bool(keep) && f.is_critical(t) && f.is_critical(s) {
            f.add_pair_ids(t, s).unwrap();
        }
    }
    f
}

/// Acyclicity by Kahn's algorithm on the modified Hasse digraph: matched
/// arcs point up, all other facet arcs point down.
pub fn kahn_acyclic(f: &GradientVectorField) -> bool {
    let c = f.complex();
    let offset: Vec<usize> = (0..c.num_dims())
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += c.cells(d).len();
            Some(o)
        })
        .collect();
    let node = |id: CellId| offset[id.dim] + id.index;
    let total = c.total_cells();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut indeg = vec![0usize; total];
    for (t, s) in incidences(c) {
        let (a, b) = if f.status(s) == Status::Down(t.index) {
            (node(t), node(s))
        } else {
            (node(s), node(t))
        };
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: VecDeque<usize> = (0..total).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    seen == total
}

/// Number of k-matchings of K_n by brute force over edge subsets.
pub fn brute_force_f_vector(n: usize) -> Vec<usize> {
    let edges: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let mut counts = vec![0usize; n / 2 + 1];
    for mask in 1u64..(1u64 << edges.len()) {
        let mut used = 0u32;
        let mut ok = true;
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let m = (1 << a) | (1 << b);
                if used & m != 0 {
                    ok = false;
                    break;
                }
                used |= m;
            }
        }
        if ok {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    counts.into_iter().skip(1).take_while(|&c| c > 0).collect()
}

/// n! / (k! 2^k (n-2k)!)
pub fn formula_count(n: usize, k: usize) -> u128 {
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    fact(n) / (fact(k) * (1u128 << k) * fact(n - 2 * k))
}

/// Outcome of [`check_cancellations`] on one field.
#[derive(Debug, Default, Clone, Copy)]
pub struct CancelStats {
    pub cancelled: usize,
    pub forced: usize,
    pub forced_cycles: usize,
}

/// Cancels every pair reported by `find_cancellable_pairs` (each against the
/// original field) and checks the bookkeeping; force-reverses one path of
/// every critical pair joined by two or more paths and records whether a
/// closed V-path appeared.
pub fn check_cancellations(f: &GradientVectorField) -> Result<CancelStats, String> {
    use matching_morse::cancellation::{cancel_pair_ids, find_cancellable_pair_ids, force_reverse};
    let c = f.complex();
    let mut stats = CancelStats::default();
    let before = f.critical_vector();
    for (eta, sigma) in find_cancellable_pair_ids(f) {
        let (g, path) = cancel_pair_ids(f, eta, sigma).map_err(|e| format!("cancel failed: {e}"))?;
        stats.cancelled += 1;
        if !g.is_acyclic() || !kahn_acyclic(&g) {
            return Err(format!("cyclic after cancelling {} / {}", c.cell(eta), c.cell(sigma)));
        }
        let after = g.critical_vector();
        for d in 0..before.0.len() {
            let expected = if d == sigma.dim || d == eta.dim { before.0[d] - 1 } else { before.0[d] };
            if after.0[d] != expected {
                return Err(format!("dimension {d}: {before} -> {after}"));
            }
        }
        let on_path: std::collections::HashSet<CellId> =
            std::iter::once(eta).chain(path.cells.iter().copied()).collect();
        for d in 0..c.num_dims() {
            for i in 0..c.cells(d).len() {
                let id = CellId::new(d, i);
                if !on_path.contains(&id) && f.status(id) != g.status(id) {
                    return Err(format!("off-path cell {} changed", c.cell(id)));
                }
            }
        }
    }
    for dim in 1..c.num_dims() {
        for eta in f.critical_ids(dim) {
            for (sigma, count) in f.path_counts_from(eta) {
                if count < 2 {
                    continue;
                }
                let paths = f.paths_between(eta, CellId::new(dim - 1, sigma), 1);
                let g = force_reverse(f, eta, &paths[0]);
                stats.forced += 1;
                if !g.is_acyclic() {
                    stats.forced_cycles += 1;
                }
                if g.is_acyclic() != kahn_acyclic(&g) {
                    return Err("is_acyclic disagrees with Kahn after forced reversal".into());
                }
            }
        }
    }
    Ok(stats)
}

/// Morse-complex homology equals simplicial homology.
pub fn morse_matches_simplicial(f: &GradientVectorField) -> bool {
    use matching_morse::homology::simplicial_homology;
    use matching_morse::{homology_of, morse_boundary};
    let h = simplicial_homology(f.complex()).unwrap();
    let m = homology_of(&morse_boundary(f).unwrap()).unwrap();
    h == m
}
