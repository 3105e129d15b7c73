use super::*;
use crate::mlpoly::{MLPoly, Monomial};
use crate::orbits::{legendre_lower_bound, VertexPermutation};
use crate::ring::RingElem;
use crate::ring::{rat, ratio};
use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

fn m(rows: &[&[i64]]) -> ExactMatrix {
    ExactMatrix::new(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
}

fn sign(p: &VertexPermutation) -> i64 {
    let v = p.image();
    let inversions = (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| (i, j))).filter(|&(i, j)| v[i] > v[j]).count();
    if inversions % 2 == 0 { 1 } else { -1 }
}

// Oracles: Leibniz sums over every permutation.
fn leibniz_det(a: &ExactMatrix) -> Rational {
    VertexPermutation::all(a.n())
        .iter()
        .map(|p| (0..a.n()).map(|i| a.get(i, p.apply(i)).clone()).product::<Rational>() * rat(sign(p)))
        .sum()
}

fn leibniz_per(a: &ExactMatrix) -> Rational {
    VertexPermutation::all(a.n()).iter().map(|p| (0..a.n()).map(|i| a.get(i, p.apply(i)).clone()).product::<Rational>()).sum()
}

fn lcg(state: &mut u64) -> u64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    *state >> 33
}

fn random_matrix(n: usize, st: &mut u64, nonzero_first: bool) -> ExactMatrix {
    ExactMatrix::from_fn(n, |_, j| {
        let mut p = (lcg(st) % 13) as i64 - 6;
        if nonzero_first && j == 0 && p == 0 {
            p = 1;
        }
        ratio(p, (lcg(st) % 4) as i64 + 1)
    })
}

#[test]
fn theta_examples() {
    let a = IntMatrix::from_rows(&[&[0, 0], &[1, 0]]);
    assert_eq!(grassmann_theta(0, 1).unwrap(), a);
    let t0 = grassmann_theta(0, 2).unwrap();
    let t1 = grassmann_theta(1, 2).unwrap();
    let p = t0.mul(&t1);
    assert_eq!(p, a.kron(&a));
    assert_eq!(p.nonzeros(), vec![(3, 0, 1)]);
    assert_eq!(t1.mul(&t0), IntMatrix::from_rows(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[-1, 0, 0, 0]]));
    assert!(grassmann_theta(7, 7).is_err());
}

#[test]
fn theta_anticommute() {
    for n in 1..=4 {
        let thetas: Vec<IntMatrix> = (0..n).map(|j| grassmann_theta(j, n).unwrap()).collect();
        for i in 0..n {
            assert!(thetas[i].mul(&thetas[i]).is_zero());
            for j in 0..n {
                if i != j {
                    assert!(thetas[i].mul(&thetas[j]).add(&thetas[j].mul(&thetas[i])).is_zero());
                }
            }
        }
    }
}

#[test]
fn determinant_examples() {
    for mode in [GrassmannMode::Literal, GrassmannMode::Exterior] {
        assert_eq!(det_grassmann(&ExactMatrix::identity(4), mode).unwrap(), rat(1));
        assert_eq!(det_grassmann(&m(&[&[0, 1], &[1, 0]]), mode).unwrap(), rat(-1));
    }
    assert_eq!(det_vandermonde(&m(&[&[2, 3], &[5, 7]])).unwrap(), rat(2 * 7 - 3 * 5));
    assert!(matches!(det_vandermonde(&ExactMatrix::identity(2)), Err(Error::Precondition(_))));
    assert_eq!(det_cofactor(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])).unwrap(), rat(-3));
}

#[test]
fn determinants_agree_with_leibniz() {
    let mut st = 42;
    for n in 2..=5 {
        for _ in 0..50 {
            let a = random_matrix(n, &mut st, true);
            let expect = leibniz_det(&a);
            assert_eq!(det_grassmann(&a, GrassmannMode::Literal).unwrap(), expect);
            assert_eq!(det_grassmann(&a, GrassmannMode::Exterior).unwrap(), expect);
            assert_eq!(det_vandermonde(&a).unwrap(), expect);
            assert_eq!(det_cofactor(&a).unwrap(), expect);
        }
    }
}

#[test]
fn large_exterior_determinant() {
    // 2 on the diagonal, 1 on the cyclic superdiagonal: det = 2^n - (-1)^n.
    let n = 10;
    let a = ExactMatrix::from_fn(n, |i, j| {
        if i == j {
            rat(2)
        } else if j == (i + 1) % n {
            rat(1)
        } else {
            rat(0)
        }
    });
    assert_eq!(det_grassmann(&a, GrassmannMode::Exterior).unwrap(), det_cofactor(&a).unwrap());
    assert_eq!(det_cofactor(&a).unwrap(), rat(1024 - 1));
}

#[test]
fn permanent_examples() {
    assert_eq!(permanent(&m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]])).unwrap(), rat(6));
    assert_eq!(permanent(&ExactMatrix::identity(5)).unwrap(), rat(1));
    let mut st = 9;
    for n in 1..=6 {
        for _ in 0..10 {
            let a = ExactMatrix::from_fn(n, |_, _| rat((lcg(&mut st) % 2) as i64));
            assert_eq!(permanent(&a).unwrap(), leibniz_per(&a));
            let b = random_matrix(n, &mut st, false);
            assert_eq!(permanent(&b).unwrap(), leibniz_per(&b));
        }
    }
    assert!(permanent(&ExactMatrix::identity(13)).is_err());
}

#[test]
fn p_tree_examples() {
    let p = p_tree_symbolic(2).unwrap();
    // A00*A10 + A11*A01 with A[i,j] = x[2i+j].
    let expect = MLPoly::from_terms(
        4,
        RingKind::Rational,
        [(Monomial::from_vars([0, 2]), RingKind::Rational.one()), (Monomial::from_vars([3, 1]), RingKind::Rational.one())],
    )
    .unwrap();
    assert_eq!(p, expect);
    assert_eq!(p_tree_value(&ExactMatrix::from_fn(4, |_, _| rat(0))).unwrap(), rat(0));
    for n in 1..=5 {
        assert_eq!(p_tree_symbolic(n).unwrap().term_count(), n.pow(n as u32 - 1));
    }
}

#[test]
fn p_tree_symbolic_matches_value() {
    let mut st = 17;
    let p = p_tree_symbolic(4).unwrap();
    for _ in 0..5 {
        let a = random_matrix(4, &mut st, false);
        let point: Vec<RingElem> = (0..16).map(|k| RingElem::Rational(a.get(k / 4, k % 4).clone())).collect();
        assert_eq!(p.evaluate(&point).unwrap(), RingElem::Rational(p_tree_value(&a).unwrap()));
    }
}

#[test]
fn f_tree_matches_functional_oracle() {
    assert!(f_tree(&BitMatrix::from_fn(2, |i, j| (i, j) == (0, 1) || (i, j) == (1, 1))).unwrap());
    assert!(!f_tree(&BitMatrix::from_fn(3, |_, _| false)).unwrap());
    let ft = FTree::new(3).unwrap();
    let mut yes = 0;
    for index in 0..512 {
        let mat = BitMatrix::from_index(3, index).unwrap();
        let expect = tree_oracle(&mat);
        assert_eq!(ft.evaluate(&mat).unwrap(), expect, "{mat}");
        yes += usize::from(expect);
    }
    assert_eq!(yes, 9);
}

#[test]
fn f_cycles_matches_permutation_oracle() {
    let perms = VertexPermutation::all(3);
    for index in 0..512 {
        let mat = BitMatrix::from_index(3, index).unwrap();
        let is_perm = perms.iter().any(|p| mat == BitMatrix::from_fn(3, |i, j| p.apply(i) == j));
        assert_eq!(f_cycles(&mat).unwrap(), is_perm);
    }
    assert!(!f_cycles(&BitMatrix::from_fn(4, |i, j| i != 0 && i == j)).unwrap());
    let cycles = cycles_polynomial(4).unwrap();
    assert_eq!(cycles.term_count(), 24);
    for index in (0..1u64 << 16).step_by(97) {
        let mat = BitMatrix::from_index(4, index).unwrap();
        assert_eq!(crate::boolean::pde_evaluate(&cycles, mat.monomial(), 1).unwrap(), f_cycles(&mat).unwrap());
    }
}

#[test]
fn cycles_width_matches_legendre() {
    for n in 1..=30 {
        let w = cycles_width(n).unwrap();
        let l = legendre_lower_bound(n).unwrap();
        assert_eq!(w.factorization, l.alphas);
        assert_eq!(w.width, l.alpha_sum);
    }
    assert_eq!(cycles_width(6).unwrap().terms, num_bigint::BigUint::from(720u32));
}

#[test]
fn gf2_determinant() {
    assert_eq!(gl2_polynomial(2).unwrap().term_count(), 6);
    assert_eq!(gl2_polynomial(3).unwrap().term_count(), 168);
    assert!(f_det_gf2(0b1001, 2).unwrap());
    assert!(f_det_gf2(0b100_010_001, 3).unwrap());
    for n in 1..=3usize {
        for bits in 0..1u64 << (n * n) {
            let mat = BitMatrix::from_index(n, bits).unwrap();
            // Oracle: the integer determinant is odd.
            let det = leibniz_det(&mat.to_exact());
            let odd = det.to_integer() % 2u8 != num_bigint::BigInt::from(0);
            assert_eq!(f_det_gf2(bits, n).unwrap(), odd);
            assert_eq!(gf2_invertible(&mat), odd);
        }
    }
}

#[test]
fn transcendental_roots() {
    let r = integer_roots_check(5, 1e-9, 0.05).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(r.at_roots.iter().all(|&(_, v)| v < 1e-9));
    assert!((r.at_zero - 5.0).abs() < 1e-9);
    let r2 = integer_roots_check(2, 1e-9, 0.05).unwrap();
    assert!(r2.passed());
    assert_eq!(r2.at_roots.len(), 1);
    // The quotient also vanishes at integers that are not multiples of d.
    assert_eq!(r2.extra_integer_roots, vec![-1, 3]);
    assert!(integer_roots_check(1, 1e-9, 0.1).is_err());
}

#[test]
fn matrix_json_round_trip() {
    let a = ExactMatrix::new(vec![vec![ratio(1, 2), rat(3)], vec![rat(-1), rat(0)]]).unwrap();
    let v = a.to_json();
    assert_eq!(v, serde_json::json!([["1/2", "3"], ["-1", "0"]]));
    assert_eq!(ExactMatrix::from_json(&v).unwrap(), a);
    assert_eq!(ExactMatrix::from_json(&serde_json::json!([[1, "2/4"], [0, 1]])).unwrap().get(0, 1), &ratio(1, 2));
    assert!(ExactMatrix::from_json(&serde_json::json!([[1, 2]])).is_err());
    let b = BitMatrix::from_json(&serde_json::json!([[0, 1], [1, 1]])).unwrap();
    assert_eq!(BitMatrix::from_json(&b.to_json()).unwrap(), b);
}

proptest! {
    #[test]
    fn grassmann_is_multiplicative(seed in 0u64..1000) {
        let mut st = seed;
        let a = random_matrix(3, &mut st, false);
        let b = random_matrix(3, &mut st, false);
        let ab = ExactMatrix::from_fn(3, |i, j| (0..3).map(|k| a.get(i, k) * b.get(k, j)).sum());
        let da = det_grassmann(&a, GrassmannMode::Exterior).unwrap();
        let db = det_grassmann(&b, GrassmannMode::Exterior).unwrap();
        prop_assert_eq!(det_grassmann(&ab, GrassmannMode::Literal).unwrap(), da * db);
    }

    #[test]
    fn permanent_is_row_permutation_invariant(seed in 0u64..1000) {
        let mut st = seed;
        let a = random_matrix(4, &mut st, false);
        let swapped = ExactMatrix::from_fn(4, |i, j| a.get(3 - i, j).clone());
        prop_assert_eq!(permanent(&a).unwrap(), permanent(&swapped).unwrap());
        prop_assert!(det_cofactor(&a).unwrap() == -det_cofactor(&ExactMatrix::from_fn(4, |i, j| a.get([1, 0, 2, 3][i], j).clone())).unwrap());
    }
}
