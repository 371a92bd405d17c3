mod common;

use common::{brute_force_f_vector, complex, formula_count, kahn_acyclic, random_field, random_matching};
use matching_morse::homology::{simplicial_homology, IntegerMatrix};
use matching_morse::{smith_normal_form, simplicial_boundary};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

#[test]
fn f_vectors_match_brute_force_enumeration() {
    for n in 2..=7 {
        assert_eq!(complex(n).f_vector(), brute_force_f_vector(n), "n = {n}");
    }
}

#[test]
fn f_vectors_match_closed_formula() {
    for n in 2..=12 {
        let f = complex(n).f_vector();
        for (d, &count) in f.iter().enumerate() {
            assert_eq!(count as u128, formula_count(n, d + 1), "n = {n}, dim = {d}");
        }
        assert_eq!(f.len(), n / 2);
    }
}

#[test]
fn petersen_shape() {
    let c = complex(5);
    assert_eq!(c.f_vector(), vec![10, 15]);
    for v in c.cells(0) {
        assert_eq!(c.cofacets(v).unwrap().len(), 3);
    }
}

#[test]
fn m7_boundaries_compose_to_zero() {
    let c = complex(7);
    let d1 = simplicial_boundary(&c, 1).unwrap();
    let d2 = simplicial_boundary(&c, 2).unwrap();
    assert_eq!((d1.rows(), d1.cols()), (21, 105));
    assert_eq!((d2.rows(), d2.cols()), (105, 105));
    assert!(d1.mul(&d2).is_zero());
    for j in 0..d2.cols() {
        let s: BigInt = (0..d2.rows()).map(|i| d2.get(i, j).abs()).sum();
        assert_eq!(s, BigInt::from(3));
    }
}

#[test]
fn betti_sums_match_euler_characteristic() {
    for n in 2..=8 {
        let c = complex(n);
        let h = simplicial_homology(&c).unwrap();
        assert_eq!(h.euler_characteristic(), c.euler_characteristic(), "n = {n}");
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors as ratios of determinantal divisors.
fn determinantal_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for r in combinations(rows, k) {
            for c in combinations(cols, k) {
                let sub: Vec<Vec<i128>> = r.iter().map(|&i| c.iter().map(|&j| m[i][j] as i128).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

#[test]
fn snf_spec_examples() {
    let (f, r) = smith_normal_form(&IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
    assert_eq!(f, vec![BigInt::from(1), BigInt::from(6)]);
    assert_eq!(r, 2);
    let (f, r) = smith_normal_form(&IntegerMatrix::zeros(3, 4));
    assert!(f.is_empty());
    assert_eq!(r, 0);
    let (f, _) = smith_normal_form(&IntegerMatrix::identity(3));
    assert_eq!(f, vec![BigInt::from(1); 3]);
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_matches_determinantal_divisors(m in small_matrix()) {
        let (factors, rank) = smith_normal_form(&IntegerMatrix::from_rows(&m));
        let expected = determinantal_factors(&m);
        prop_assert_eq!(rank, expected.len());
        let got: Vec<i128> = factors.iter().map(|d| i128::try_from(d).unwrap()).collect();
        prop_assert_eq!(&got, &expected);
        for w in factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn is_acyclic_agrees_with_kahn(seed in any::<u64>(), keep in 0.1f64..1.0, n in 4usize..=6) {
        let c = complex(n);
        let f = random_matching(&c, seed, keep);
        prop_assert_eq!(f.is_acyclic(), kahn_acyclic(&f));
        let g = random_field(&c, seed, keep);
        prop_assert!(kahn_acyclic(&g));
    }
}
