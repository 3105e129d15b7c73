use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{det_cofactor, permanent, ExactMatrix};
use crate::boolean::pde_evaluate;
use crate::error::{guard, Error, Result};
use crate::mlpoly::{MLPoly, Monomial};
use crate::orbits::VertexPermutation;
use crate::ring::{Rational, RingKind};

/// Square 0/1 matrix; entry `(i, j)` is variable `n*i + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let n = rows.len();
        let mut bits = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: row.len() });
            }
            bits.extend(row);
        }
        Ok(BitMatrix { n, bits })
    }

    /// Bit `n*i + j` of `index` is entry `(i, j)`.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        guard("bit matrix order", n as u128, 8)?;
        if n * n < 64 && index >> (n * n) != 0 {
            return Err(Error::Precondition(format!("index {index} has bits beyond an {n}x{n} matrix")));
        }
        Ok(BitMatrix { n, bits: (0..n * n).map(|k| index >> k & 1 == 1).collect() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        BitMatrix { n, bits: (0..n * n).map(|k| f(k / n, k % n)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::from_vars(self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k))
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.n, |i, j| if self.get(i, j) { Rational::one() } else { Rational::zero() })
    }

    pub fn to_json(&self) -> Value {
        json!((0..self.n).map(|i| (0..self.n).map(|j| u8::from(self.get(i, j))).collect::<Vec<_>>()).collect::<Vec<_>>())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("0/1 matrix must be an array of rows of 0 and 1".into());
        let rows = v
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|x| match x.as_u64() {
                        Some(0) => Ok(false),
                        Some(1) => Ok(true),
                        _ => Err(bad()),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::new(rows)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Determinant of a matrix of polynomials, memoised Laplace expansion.
fn det_poly(entries: &[Vec<MLPoly>], nvars: usize) -> Result<MLPoly> {
    let n = entries.len();
    let ring = RingKind::Rational;
    let full = (1usize << n) - 1;
    let mut memo = vec![MLPoly::zero(nvars, ring)?; 1 << n];
    memo[0] = MLPoly::one(nvars, ring)?;
    for cols in 1..=full {
        let row = n - cols.count_ones() as usize;
        let mut acc = MLPoly::zero(nvars, ring)?;
        for (k, j) in (0..n).filter(|&j| cols & (1 << j) != 0).enumerate() {
            let term = entries[row][j].checked_mul(&memo[cols & !(1 << j)])?;
            acc = if k % 2 == 0 { acc.checked_add(&term)? } else { acc.checked_sub(&term)? };
        }
        memo[cols] = acc;
    }
    Ok(memo.swap_remove(full))
}

/// `sum_i A[i,i] * det((diag(A·1) - A) without row and column i)` over the
/// symbolic entries `A[i,j] = x[n*i + j]`.
pub fn p_tree_symbolic(n: usize) -> Result<MLPoly> {
    guard("symbolic tree order", n as u128, 6)?;
    let ring = RingKind::Rational;
    let nv = n * n;
    let x = |i: usize, j: usize| MLPoly::var(nv, ring, n * i + j);
    let mut total = MLPoly::zero(nv, ring)?;
    for root in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&k| k != root).collect();
        let mut rows = Vec::with_capacity(keep.len());
        for &r in &keep {
            let mut row = Vec::with_capacity(keep.len());
            for &c in &keep {
                row.push(if r == c {
                    let mut deg = MLPoly::zero(nv, ring)?;
                    for k in (0..n).filter(|&k| k != r) {
                        deg = deg.checked_add(&x(r, k)?)?;
                    }
                    deg
                } else {
                    x(r, c)?.neg()
                });
            }
            rows.push(row);
        }
        total = total.checked_add(&x(root, root)?.checked_mul(&det_poly(&rows, nv)?)?)?;
    }
    Ok(total)
}

/// The same polynomial evaluated at an exact matrix.
pub fn p_tree_value(a: &ExactMatrix) -> Result<Rational> {
    let n = a.n();
    guard("tree evaluation order", n as u128, 10)?;
    let laplacian = ExactMatrix::from_fn(n, |i, j| {
        if i == j {
            (0..n).filter(|&k| k != i).map(|k| a.get(i, k).clone()).sum()
        } else {
            -a.get(i, j).clone()
        }
    });
    let mut total = Rational::zero();
    for root in 0..n {
        if !a.get(root, root).is_zero() {
            total += a.get(root, root) * det_cofactor(&laplacian.minor(root, root))?;
        }
    }
    Ok(total)
}

/// Decision polynomial for "M is the matrix of a map f with one fixed point
/// that every vertex reaches".
#[derive(Debug, Clone)]
pub struct FTree {
    n: usize,
    poly: MLPoly,
}

impl FTree {
    pub fn new(n: usize) -> Result<Self> {
        Ok(FTree { n, poly: p_tree_symbolic(n)? })
    }

    pub fn polynomial(&self) -> &MLPoly {
        &self.poly
    }

    pub fn evaluate(&self, m: &BitMatrix) -> Result<bool> {
        if m.n() != self.n {
            return Err(Error::ArityMismatch(m.n(), self.n));
        }
        pde_evaluate(&self.poly, m.monomial(), 1)
    }
}

pub fn f_tree(m: &BitMatrix) -> Result<bool> {
    FTree::new(m.n())?.evaluate(m)
}

/// Direct test: every row has a single one at `f(i)` and `f^(n-1)` is constant.
pub fn tree_oracle(m: &BitMatrix) -> bool {
    let n = m.n();
    let mut f = Vec::with_capacity(n);
    for i in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&j| m.get(i, j)).collect();
        match cols.as_slice() {
            [j] => f.push(*j),
            _ => return false,
        }
    }
    let mut image: Vec<usize> = (0..n).collect();
    for _ in 1..n {
        image = image.iter().map(|&v| f[v]).collect();
    }
    image.sort_unstable();
    image.dedup();
    image.len() == 1
}

/// Coefficient of `x^M` in `sum_σ prod_i x[i, σ(i)]`, read as a bit.
pub fn f_cycles(m: &BitMatrix) -> Result<bool> {
    guard("cycle cover order", m.n() as u128, 10)?;
    let coeff = if m.ones() == m.n() { permanent(&m.to_exact())? } else { Rational::zero() };
    if coeff.is_zero() {
        Ok(false)
    } else if coeff.is_one() {
        Ok(true)
    } else {
        Err(Error::InvalidPde { monomial: m.monomial().to_string(), m: 1, value: coeff.to_string() })
    }
}

/// `sum_σ prod_i x[n*i + σ(i)]`, one term per permutation.
pub fn cycles_polynomial(n: usize) -> Result<MLPoly> {
    guard("symbolic cycle cover order", n as u128, 7)?;
    let ring = RingKind::Rational;
    MLPoly::from_terms(
        n * n,
        ring,
        VertexPermutation::all(n)
            .into_iter()
            .map(|s| (Monomial::from_vars((0..n).map(|i| n * i + s.apply(i))), ring.one())),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclesWidth {
    pub n: usize,
    pub terms: BigUint,
    pub factorization: Vec<(usize, u64)>,
    /// `sum_p α_p` for `n! = prod p^α_p`.
    pub width: u64,
}

impl CyclesWidth {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "terms": self.terms.to_string(),
            "factorization": self.factorization.iter().map(|(p, a)| json!({ "p": p, "alpha": a })).collect::<Vec<_>>(),
            "width": self.width,
        })
    }
}

/// Term count `n!` of the cycle-cover polynomial and its prime factorisation,
/// found by factoring each of `2..=n`.
pub fn cycles_width(n: usize) -> Result<CyclesWidth> {
    guard("cycle cover order", n as u128, 1000)?;
    let mut alpha = vec![0u64; n + 1];
    for k in 2..=n {
        let mut k = k;
        let mut p = 2;
        while k > 1 {
            while k % p == 0 {
                alpha[p] += 1;
                k /= p;
            }
            p += 1;
        }
    }
    let factorization: Vec<(usize, u64)> = alpha.iter().enumerate().filter(|(_, &a)| a > 0).map(|(p, &a)| (p, a)).collect();
    Ok(CyclesWidth {
        n,
        terms: (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k)),
        width: factorization.iter().map(|(_, a)| a).sum(),
        factorization,
    })
}

/// Indicator polynomial over `n^2` variables of the ordered bases of `GF(2)^n`:
/// basis vector `v_j` is column `j`, with entry `i` at variable `n*i + j`.
pub fn gl2_polynomial(n: usize) -> Result<MLPoly> {
    guard("GF(2) basis order", n as u128, 3)?;
    fn extend(n: usize, chosen: &mut Vec<u32>, span: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if chosen.len() == n {
            let vars = chosen
                .iter()
                .enumerate()
                .flat_map(|(j, &v)| (0..n).filter(move |&i| v >> i & 1 == 1).map(move |i| n * i + j));
            out.push(Monomial::from_vars(vars));
            return;
        }
        for v in 1..(1u32 << n) {
            if span.contains(&v) {
                continue;
            }
            let old = span.len();
            for k in 0..old {
                span.push(span[k] ^ v);
            }
            chosen.push(v);
            extend(n, chosen, span, out);
            chosen.pop();
            span.truncate(old);
        }
    }
    let mut monomials = Vec::new();
    extend(n, &mut Vec::new(), &mut vec![0], &mut monomials);
    let ring = RingKind::Rational;
    MLPoly::from_terms(n * n, ring, monomials.into_iter().map(|m| (m, ring.one())))
}

/// Reads invertibility of the GF(2) matrix with bit `n*i + j` = entry `(i, j)`
/// off the basis polynomial.
pub fn f_det_gf2(bits: u64, n: usize) -> Result<bool> {
    let m = BitMatrix::from_index(n, bits)?;
    pde_evaluate(&gl2_polynomial(n)?, m.monomial(), 1)
}

/// Gaussian elimination over GF(2).
pub fn gf2_invertible(m: &BitMatrix) -> bool {
    let n = m.n();
    let mut rows: Vec<u64> = (0..n).map(|i| (0..n).fold(0, |acc, j| acc | (u64::from(m.get(i, j)) << j))).collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| rows[r] >> col & 1 == 1) else {
            return false;
        };
        rows.swap(col, p);
        for r in 0..n {
            if r != col && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[col];
            }
        }
    }
    true
}
