//! Restart-based search for a gradient vector field attaining the Morse
//! lower bounds, and the certificate that records the result.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cancellation::{apply_plan, cancel_pair_ids, check_simultaneous_ids, log_line};
use crate::cell::Matching;
use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::gvf::{CriticalVector, GradientVectorField};
use crate::homology::{homology_of, morse_boundary, morse_lower_bounds, simplicial_homology, HomologySummary};

/// Default number of restarts for [`optimize`].
pub const DEFAULT_MAX_RESTARTS: usize = 1000;
/// Default cap on cancellations within one restart.
pub const DEFAULT_MAX_CANCELLATIONS: usize = 10_000;
/// Largest eta/sigma subset tried by the simultaneous search.
pub const MAX_SIMULTANEOUS: usize = 4;

/// Restarts are evaluated in fixed-size batches so the stopping point does
/// not depend on the thread pool.
const BATCH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Lexicographic,
    Random,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Lexicographic => "lex",
            Strategy::Random => "random",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(Strategy::Lexicographic),
            "random" => Ok(Strategy::Random),
            other => Err(Error::InvalidRequest(format!(
                "unknown strategy `{other}` (expected lex or random)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub seed: u64,
    pub max_restarts: usize,
    pub max_cancellations: usize,
    pub simultaneous: bool,
    /// Assert acyclicity and monotonicity after every move.
    pub debug_assert: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Random,
            seed: 0,
            max_restarts: DEFAULT_MAX_RESTARTS,
            max_cancellations: DEFAULT_MAX_CANCELLATIONS,
            simultaneous: true,
            debug_assert: false,
        }
    }
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Greedy acyclic matching: scanning dimensions bottom-up, each critical cell
/// is paired with its first critical cofacet that keeps the field acyclic.
/// The lexicographic strategy scans cells and cofacets in canonical order;
/// the random strategy shuffles both with a stream seeded by `config.seed`.
pub fn initial_field(cplx: &Arc<SimplicialComplex>, config: &SearchConfig) -> GradientVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut field = GradientVectorField::empty(Arc::clone(cplx));
    for dim in 0..cplx.num_dims().saturating_sub(1) {
        let mut order: Vec<usize> = (0..cplx.cells(dim).len()).collect();
        if config.strategy == Strategy::Random {
            order.shuffle(&mut rng);
        }
        for i in order {
            let tau = CellId::new(dim, i);
            if !field.is_critical(tau) {
                continue;
            }
            let mut cof: Vec<usize> = cplx.cofacet_ids(tau).to_vec();
            if config.strategy == Strategy::Random {
                cof.shuffle(&mut rng);
            }
            for j in cof {
                let sigma = CellId::new(dim + 1, j);
                if field.is_critical(sigma) && !field.would_close_cycle(tau, sigma) {
                    field.add_pair_ids(tau, sigma).expect("both cells critical");
                    break;
                }
            }
        }
    }
    field
}

/// First cancellable pair in (dimension, eta, sigma) order.
fn first_cancellable(field: &GradientVectorField) -> Option<(CellId, CellId)> {
    for dim in 1..field.complex().num_dims() {
        for eta in field.critical_ids(dim) {
            if let Some((&sigma, _)) = field.path_counts_from(eta).iter().find(|(_, &c)| c == 1) {
                return Some((eta, CellId::new(dim - 1, sigma)));
            }
        }
    }
    None
}

fn subsets(items: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::new(), out);
}

/// Searches eta/sigma subsets of size 2..=`MAX_SIMULTANEOUS` for a plan
/// accepted by the simultaneous-cancellation check. Every matched pair of an
/// accepted plan is joined by exactly one path, so only cells with such a
/// partner take part.
fn find_simultaneous(field: &GradientVectorField) -> Option<(GradientVectorField, Vec<String>)> {
    let cplx = field.complex();
    for dim in 1..cplx.num_dims() {
        let etas = field.critical_ids(dim);
        let sigmas = field.critical_ids(dim - 1);
        let counts: Vec<_> = etas.iter().map(|&e| field.path_counts_from(e)).collect();
        let eta_pool: Vec<usize> = (0..etas.len())
            .filter(|&i| counts[i].values().any(|&c| c == 1))
            .collect();
        let sigma_pool: Vec<usize> = (0..sigmas.len())
            .filter(|&j| counts.iter().any(|m| m.get(&sigmas[j].index) == Some(&1)))
            .collect();
        for k in 2..=MAX_SIMULTANEOUS {
            let (mut es, mut ss) = (Vec::new(), Vec::new());
            subsets(&eta_pool, k, &mut es);
            subsets(&sigma_pool, k, &mut ss);
            for e in &es {
                for s in &ss {
                    let e_ids: Vec<CellId> = e.iter().map(|&i| etas[i]).collect();
                    let s_ids: Vec<CellId> = s.iter().map(|&j| sigmas[j]).collect();
                    let Ok(plan) = check_simultaneous_ids(field, &e_ids, &s_ids) else {
                        continue;
                    };
                    if let Ok(next) = apply_plan(field, &plan) {
                        let log = plan
                            .entries()
                            .iter()
                            .map(|p| log_line(field, p.eta, p.sigma, &p.path))
                            .collect();
                        return Some((next, log));
                    }
                }
            }
        }
    }
    None
}

/// Outcome of one restart.
#[derive(Debug, Clone)]
struct RunResult {
    restart: usize,
    field: GradientVectorField,
    log: Vec<String>,
}

fn run_restart(
    cplx: &Arc<SimplicialComplex>,
    config: &SearchConfig,
    restart: usize,
    bounds: &CriticalVector,
) -> RunResult {
    let cfg = SearchConfig {
        seed: restart_seed(config.seed, restart),
        ..config.clone()
    };
    let mut field = initial_field(cplx, &cfg);
    let mut log = Vec::new();
    let mut moves = 0;
    while moves < config.max_cancellations && field.critical_vector() != *bounds {
        let before = field.critical_vector();
        let next = first_cancellable(&field)
            .and_then(|(eta, sigma)| cancel_pair_ids(&field, eta, sigma).ok().map(|r| (eta, sigma, r)));
        if let Some((eta, sigma, (f, path))) = next {
            log.push(log_line(&field, eta, sigma, &path));
            field = f;
        } else if config.simultaneous {
            match find_simultaneous(&field) {
                Some((f, lines)) => {
                    log.extend(lines);
                    field = f;
                }
                None => break,
            }
        } else {
            break;
        }
        moves += 1;
        if config.debug_assert {
            assert!(field.is_acyclic(), "closed V-path after move {moves}");
            let after = field.critical_vector();
            assert!(
                before.0.iter().zip(&after.0).all(|(b, a)| a <= b),
                "critical vector grew from {before} to {after}"
            );
        }
    }
    RunResult { restart, field, log }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Optimal,
    BudgetExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Optimal => "optimal",
            Verdict::BudgetExhausted => "budget-exhausted",
        })
    }
}

/// The result of [`optimize`]: the best field found, how it was obtained, and
/// the homological bounds it is measured against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityCertificate {
    pub n: usize,
    pub strategy: Strategy,
    pub seed: u64,
    pub max_restarts: usize,
    pub max_cancellations: usize,
    pub simultaneous: bool,
    pub restarts_run: usize,
    /// Restart that produced the field, if any restart ran.
    pub best_restart: Option<usize>,
    pub critical: CriticalVector,
    pub bounds: CriticalVector,
    pub critical_cells: Vec<Vec<Matching>>,
    pub pairs: Vec<(Matching, Matching)>,
    pub log: Vec<String>,
    pub homology: String,
    pub verdict: Verdict,
}

/// Runs up to `config.max_restarts` restarts and certifies the best field.
/// Fields are compared by critical vector, lexicographically from dimension 0;
/// ties go to the lower restart index.
pub fn optimize(cplx: &Arc<SimplicialComplex>, config: &SearchConfig) -> Result<OptimalityCertificate> {
    let homology = simplicial_homology(cplx)?;
    let bounds = morse_lower_bounds(&homology);
    let restarts = match config.strategy {
        Strategy::Lexicographic => config.max_restarts.min(1),
        Strategy::Random => config.max_restarts,
    };
    let mut best: Option<RunResult> = None;
    let mut run = 0;
    while run < restarts {
        let end = (run + BATCH).min(restarts);
        let batch: Vec<RunResult> = (run..end)
            .into_par_iter()
            .map(|r| run_restart(cplx, config, r, &bounds))
            .collect();
        run = end;
        for r in batch {
            let better = match &best {
                None => true,
                Some(b) => r.field.critical_vector() < b.field.critical_vector(),
            };
            if better {
                best = Some(r);
            }
        }
        if best.as_ref().is_some_and(|b| b.field.critical_vector() == bounds) {
            break;
        }
    }
    let (field, log, best_restart) = match best {
        Some(b) => (b.field, b.log, Some(b.restart)),
        None => (GradientVectorField::empty(Arc::clone(cplx)), Vec::new(), None),
    };
    let critical = field.critical_vector();
    let verdict = if critical == bounds {
        Verdict::Optimal
    } else {
        Verdict::BudgetExhausted
    };
    let c = field.complex();
    Ok(OptimalityCertificate {
        n: cplx.n(),
        strategy: config.strategy,
        seed: config.seed,
        max_restarts: config.max_restarts,
        max_cancellations: config.max_cancellations,
        simultaneous: config.simultaneous,
        restarts_run: run,
        best_restart,
        critical,
        bounds,
        critical_cells: field.critical_cells(),
        pairs: field
            .pairs()
            .into_iter()
            .map(|(t, s)| (c.cell(t).clone(), c.cell(s).clone()))
            .collect(),
        log,
        homology: homology.report(),
        verdict,
    })
}

impl OptimalityCertificate {
    /// Rebuilds the certified field. Fails on invalid or cyclic pairings.
    pub fn field(&self, cplx: &Arc<SimplicialComplex>) -> Result<GradientVectorField> {
        let mut field = GradientVectorField::empty(Arc::clone(cplx));
        for (t, s) in &self.pairs {
            field.add_pair(t, s)?;
        }
        if !field.is_acyclic() {
            return Err(Error::Cyclic);
        }
        Ok(field)
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let on_off = |b: bool| if b { "on" } else { "off" };
        let _ = writeln!(o, "[meta]");
        let _ = writeln!(o, "complex = {}", self.n);
        let _ = writeln!(o, "strategy = {}", self.strategy.name());
        let _ = writeln!(o, "seed = {}", self.seed);
        let _ = writeln!(o, "max_restarts = {}", self.max_restarts);
        let _ = writeln!(o, "max_cancellations = {}", self.max_cancellations);
        let _ = writeln!(o, "simultaneous = {}", on_off(self.simultaneous));
        let _ = writeln!(o, "restarts_run = {}", self.restarts_run);
        match self.best_restart {
            Some(r) => {
                let _ = writeln!(o, "best_restart = {r}");
            }
            None => {
                let _ = writeln!(o, "best_restart = none");
            }
        }
        let _ = writeln!(o, "\n[critical]");
        let _ = writeln!(o, "vector = {}", self.critical);
        let _ = writeln!(o, "bounds = {}", self.bounds);
        for (d, cells) in self.critical_cells.iter().enumerate() {
            for c in cells {
                let _ = writeln!(o, "{d} {c}");
            }
        }
        let _ = writeln!(o, "\n[pairs]");
        for (t, s) in &self.pairs {
            let _ = writeln!(o, "{t} => {s}");
        }
        let _ = writeln!(o, "\n[log]");
        for l in &self.log {
            let _ = writeln!(o, "{l}");
        }
        let _ = writeln!(o, "\n[homology]");
        o.push_str(&self.homology);
        let _ = writeln!(o, "\n[verdict]");
        let _ = writeln!(o, "{}", self.verdict);
        o
    }

    pub fn from_text(text: &str) -> Result<Self> {
        const SECTIONS: [&str; 6] = ["meta", "critical", "pairs", "log", "homology", "verdict"];
        let mut body: Vec<Vec<(usize, &str)>> = vec![Vec::new(); SECTIONS.len()];
        let mut current: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let idx = SECTIONS.iter().position(|s| *s == name).ok_or_else(|| Error::Parse {
                    line: i + 1,
                    reason: format!("unknown section [{name}]"),
                })?;
                current = Some(idx);
                continue;
            }
            let idx = current.ok_or_else(|| Error::Parse {
                line: i + 1,
                reason: "content before the first section".into(),
            })?;
            body[idx].push((i + 1, line));
        }
        let err = |line: usize, reason: String| Error::Parse { line, reason };
        let key_values = |sec: usize| -> Result<Vec<(usize, &str, &str)>> {
            body[sec]
                .iter()
                .map(|&(l, s)| {
                    s.split_once(" = ")
                        .map(|(k, v)| (l, k, v))
                        .ok_or_else(|| err(l, format!("expected `key = value`, found `{s}`")))
                })
                .collect()
        };
        let meta = key_values(0)?;
        let get = |key: &str| -> Result<(usize, &str)> {
            meta.iter()
                .find(|(_, k, _)| *k == key)
                .map(|&(l, _, v)| (l, v))
                .ok_or_else(|| err(0, format!("[meta] is missing `{key}`")))
        };
        fn num<T: std::str::FromStr>(l: usize, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Parse {
                line: l,
                reason: format!("invalid number `{v}`"),
            })
        }
        let (l, v) = get("complex")?;
        let n = num(l, v)?;
        let (l, v) = get("strategy")?;
        let strategy = v.parse().map_err(|e: Error| err(l, e.to_string()))?;
        let (l, v) = get("seed")?;
        let seed = num(l, v)?;
        let (l, v) = get("max_restarts")?;
        let max_restarts = num(l, v)?;
        let (l, v) = get("max_cancellations")?;
        let max_cancellations = num(l, v)?;
        let (l, v) = get("simultaneous")?;
        let simultaneous = match v {
            "on" => true,
            "off" => false,
            _ => return Err(err(l, format!("expected on or off, found `{v}`"))),
        };
        let (l, v) = get("restarts_run")?;
        let restarts_run = num(l, v)?;
        let (l, v) = get("best_restart")?;
        let best_restart = if v == "none" { None } else { Some(num(l, v)?) };

        let parse_vector = |l: usize, v: &str| -> Result<CriticalVector> {
            let inner = v
                .strip_prefix('(')
                .and_then(|v| v.strip_suffix(')'))
                .ok_or_else(|| err(l, format!("expected a parenthesized vector, found `{v}`")))?;
            inner.split(',').map(|x| num(l, x.trim())).collect::<Result<_>>().map(CriticalVector)
        };
        let mut critical = None;
        let mut bounds = None;
        let mut critical_cells: Vec<Vec<Matching>> = Vec::new();
        for &(l, s) in &body[1] {
            if let Some(v) = s.strip_prefix("vector = ") {
                critical = Some(parse_vector(l, v)?);
            } else if let Some(v) = s.strip_prefix("bounds = ") {
                bounds = Some(parse_vector(l, v)?);
            } else {
                let (d, cell) = s
                    .split_once(' ')
                    .ok_or_else(|| err(l, format!("expected `<dim> <cell>`, found `{s}`")))?;
                let d: usize = num(l, d)?;
                let cell: Matching = cell.parse().map_err(|e: Error| err(l, e.to_string()))?;
                if critical_cells.len() <= d {
                    critical_cells.resize(d + 1, Vec::new());
                }
                critical_cells[d].push(cell);
            }
        }
        let critical = critical.ok_or_else(|| err(0, "[critical] is missing `vector`".into()))?;
        let bounds = bounds.ok_or_else(|| err(0, "[critical] is missing `bounds`".into()))?;
        critical_cells.resize(critical.0.len().max(critical_cells.len()), Vec::new());

        let mut pairs = Vec::new();
        for &(l, s) in &body[2] {
            let (t, sg) = s
                .split_once(" => ")
                .ok_or_else(|| err(l, "expected `<tau> => <sigma>`".into()))?;
            let t: Matching = t.parse().map_err(|e: Error| err(l, e.to_string()))?;
            let sg: Matching = sg.parse().map_err(|e: Error| err(l, e.to_string()))?;
            pairs.push((t, sg));
        }
        let log = body[3].iter().map(|&(_, s)| s.to_string()).collect();
        let homology: String = body[4].iter().map(|&(_, s)| format!("{s}\n")).collect();
        let verdict = match body[5].as_slice() {
            [(_, "optimal")] => Verdict::Optimal,
            [(_, "budget-exhausted")] => Verdict::BudgetExhausted,
            [(l, other)] => return Err(err(*l, format!("unknown verdict `{other}`"))),
            _ => return Err(err(0, "[verdict] must hold exactly one line".into())),
        };
        Ok(Self {
            n,
            strategy,
            seed,
            max_restarts,
            max_cancellations,
            simultaneous,
            restarts_run,
            best_restart,
            critical,
            bounds,
            critical_cells,
            pairs,
            log,
            homology,
            verdict,
        })
    }
}

/// Re-checks a certificate from scratch: the pairing is valid and acyclic,
/// the recorded critical cells and vector match it, the homology report and
/// bounds match a fresh computation, the Morse complex has the same homology
/// as the complex, and the verdict agrees with the comparison to the bounds.
pub fn verify_certificate(cplx: &Arc<SimplicialComplex>, cert: &OptimalityCertificate) -> bool {
    if cert.n != cplx.n() {
        return false;
    }
    let Ok(field) = cert.field(cplx) else {
        return false;
    };
    if field.critical_vector() != cert.critical || field.critical_cells() != cert.critical_cells {
        return false;
    }
    let Ok(h) = simplicial_homology(cplx) else {
        return false;
    };
    if h.report() != cert.homology || morse_lower_bounds(&h) != cert.bounds {
        return false;
    }
    let morse: Option<HomologySummary> = morse_boundary(&field).and_then(|cc| homology_of(&cc)).ok();
    if morse.as_ref() != Some(&h) {
        return false;
    }
    let optimal = cert.critical == cert.bounds;
    optimal == (cert.verdict == Verdict::Optimal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_matching_complex;

    fn complex(n: usize) -> Arc<SimplicialComplex> {
        Arc::new(build_matching_complex(n).unwrap())
    }

    #[test]
    fn initial_field_small_cases() {
        let c3 = complex(3);
        for strategy in [Strategy::Lexicographic, Strategy::Random] {
            let cfg = SearchConfig { strategy, ..Default::default() };
            assert_eq!(initial_field(&c3, &cfg).critical_vector().0, vec![3]);
        }
        let cfg = SearchConfig {
            strategy: Strategy::Lexicographic,
            ..Default::default()
        };
        let f = initial_field(&complex(4), &cfg);
        assert_eq!(f.critical_vector().0, vec![3, 0]);
        assert_eq!(f.num_pairs(), 3);
    }

    #[test]
    fn initial_field_is_deterministic_and_acyclic() {
        let c = complex(6);
        for seed in 0..5 {
            let cfg = SearchConfig { seed, ..Default::default() };
            let a = initial_field(&c, &cfg);
            assert!(a.is_acyclic());
            assert_eq!(a, initial_field(&c, &cfg));
        }
    }

    #[test]
    fn optimize_small() {
        let cert = optimize(&complex(5), &SearchConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Optimal);
        assert_eq!(cert.critical.0, vec![1, 6]);
        assert!(verify_certificate(&complex(5), &cert));
    }

    #[test]
    fn debug_assertions_hold_on_m6() {
        let cfg = SearchConfig {
            debug_assert: true,
            max_restarts: 8,
            ..Default::default()
        };
        let cert = optimize(&complex(6), &cfg).unwrap();
        assert_eq!(cert.critical.0, vec![1, 16, 0]);
    }

    #[test]
    fn zero_restarts_exhausts_budget() {
        let cfg = SearchConfig {
            max_restarts: 0,
            ..Default::default()
        };
        let c = complex(4);
        let cert = optimize(&c, &cfg).unwrap();
        assert_eq!(cert.verdict, Verdict::BudgetExhausted);
        assert!(verify_certificate(&c, &cert));
    }

    #[test]
    fn certificate_text_round_trip() {
        let c = complex(5);
        let cert = optimize(&c, &SearchConfig::default()).unwrap();
        let text = cert.to_text();
        let back = OptimalityCertificate::from_text(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn certificate_parse_errors() {
        assert!(matches!(
            OptimalityCertificate::from_text("[bogus]\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            OptimalityCertificate::from_text("complex = 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(OptimalityCertificate::from_text("[meta]\ncomplex = 3\n").is_err());
    }
}
