//! Determinant and permanent by reduction: Grassmann-variable products,
//! Vandermonde substitution and nilpotent-variable expansion, plus the
//! matrix-defined decision polynomials built on top of them.

mod pde;
mod roots;

pub use pde::{
    cycles_polynomial, cycles_width, f_cycles, f_det_gf2, f_tree, gf2_invertible, gl2_polynomial, p_tree_symbolic,
    p_tree_value, tree_oracle, BitMatrix, CyclesWidth, FTree,
};
pub use roots::{integer_roots_check, transcendental_value, RootsReport};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{guard, Error, Result};
use crate::mlpoly::GeneralPoly;
use crate::ring::{rational_from_json, Rational, RingKind};

/// Largest order for the literal `2^n x 2^n` Grassmann matrices.
pub const LITERAL_MAX_ORDER: usize = 6;
/// Largest order for the exterior-algebra path and the cofactor expansion.
pub const EXTERIOR_MAX_ORDER: usize = 16;
/// Largest order for the permanent's subset dynamic programme.
pub const PERMANENT_MAX_ORDER: usize = 12;

/// Square matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: row.len() });
            }
            entries.extend(row);
        }
        Ok(ExactMatrix { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        ExactMatrix { n, entries: (0..n * n).map(|k| f(k / n, k % n)).collect() }
    }

    pub fn identity(n: usize) -> Self {
        ExactMatrix::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Matrix without row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> ExactMatrix {
        let keep: Vec<usize> = (0..self.n).filter(|&k| k != c).collect();
        let rows = (0..self.n).filter(|&k| k != r).map(|i| keep.iter().map(|&j| self.get(i, j).clone()).collect());
        ExactMatrix::new(rows.collect()).expect("minor of a square matrix is square")
    }

    pub fn to_json(&self) -> Value {
        json!((0..self.n).map(|i| self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
    }

    /// Array of rows whose entries are integers or `"p/q"` strings.
    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse(format!("matrix row must be an array, got {r}")))?
                    .iter()
                    .map(rational_from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::new(rows)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dense integer matrix, used for the literal Grassmann generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = IntMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let dim = rows.len();
        IntMatrix { dim, entries: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let dim = self.dim * other.dim;
        let mut out = IntMatrix::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.entries[(i * other.dim + k) * dim + j * other.dim + l] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let d = self.dim;
        let mut out = IntMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn nonzeros(&self) -> Vec<(usize, usize, i64)> {
        (0..self.dim * self.dim)
            .filter(|&k| self.entries[k] != 0)
            .map(|k| (k / self.dim, k % self.dim, self.entries[k]))
            .collect()
    }
}

/// `Θ_j = Z^{⊗j} ⊗ a ⊗ I^{⊗(n-1-j)}` with `Z = diag(1,-1)` and `a = [[0,0],[1,0]]`.
pub fn grassmann_theta(j: usize, n: usize) -> Result<IntMatrix> {
    guard("literal Grassmann order", n as u128, LITERAL_MAX_ORDER as u128)?;
    if j >= n {
        return Err(Error::VariableOutOfRange { index: j, n });
    }
    let z = IntMatrix::from_rows(&[&[1, 0], &[0, -1]]);
    let a = IntMatrix::from_rows(&[&[0, 0], &[1, 0]]);
    let id = IntMatrix::identity(2);
    let mut out = IntMatrix::identity(1);
    for k in 0..n {
        let factor = match k.cmp(&j) {
            std::cmp::Ordering::Less => &z,
            std::cmp::Ordering::Equal => &a,
            std::cmp::Ordering::Greater => &id,
        };
        out = out.kron(factor);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrassmannMode {
    /// Dense `2^n x 2^n` generator matrices.
    Literal,
    /// Exterior-algebra elements keyed by subset bitsets.
    Exterior,
}

/// Entry `[2^n - 1, 0]` of `prod_i (sum_j A[i,j] Θ_j)`, factors in increasing `i`.
pub fn det_grassmann(a: &ExactMatrix, mode: GrassmannMode) -> Result<Rational> {
    let n = a.n;
    if n == 0 {
        return Ok(Rational::one());
    }
    match mode {
        GrassmannMode::Literal => {
            let thetas = (0..n).map(|j| grassmann_theta(j, n)).collect::<Result<Vec<_>>>()?;
            let dim = 1usize << n;
            // Product applied to e_0, rightmost factor first.
            let mut v = vec![Rational::zero(); dim];
            v[0] = Rational::one();
            for i in (0..n).rev() {
                let mut next = vec![Rational::zero(); dim];
                for (j, theta) in thetas.iter().enumerate() {
                    let aij = a.get(i, j);
                    if aij.is_zero() {
                        continue;
                    }
                    for (r, c, s) in theta.nonzeros() {
                        if !v[c].is_zero() {
                            next[r] += aij * &v[c] * Rational::from_integer(s.into());
                        }
                    }
                }
                v = next;
            }
            Ok(v[dim - 1].clone())
        }
        GrassmannMode::Exterior => {
            guard("exterior Grassmann order", n as u128, EXTERIOR_MAX_ORDER as u128)?;
            // θ_j acting on basis state S (θ's applied so far) adds bit j with
            // sign (-1)^{|S ∩ [0, j)|}, matching the literal generators.
            let mut layer: std::collections::BTreeMap<u32, Rational> = [(0u32, Rational::one())].into();
            for i in (0..n).rev() {
                let mut next = std::collections::BTreeMap::new();
                for (s, c) in &layer {
                    for j in 0..n {
                        let aij = a.get(i, j);
                        if s & (1 << j) != 0 || aij.is_zero() {
                            continue;
                        }
                        let term = aij * c;
                        let signed = if (s & ((1 << j) - 1)).count_ones() % 2 == 1 { -term } else { term };
                        let slot: &mut Rational = next.entry(s | (1 << j)).or_insert_with(Rational::zero);
                        *slot += signed;
                    }
                }
                next.retain(|_, c: &mut Rational| !c.is_zero());
                layer = next;
            }
            Ok(layer.remove(&((1u32 << n) - 1)).unwrap_or_else(Rational::zero))
        }
    }
}

/// `prod_i A[i,0] * prod_{i<j} (t_j - t_i)` expanded, then `t_i^j -> A[i,j] / A[i,0]`
/// substituted in decreasing `j`.
pub fn det_vandermonde(a: &ExactMatrix) -> Result<Rational> {
    let n = a.n;
    guard("Vandermonde order", n as u128, 8)?;
    if n == 0 {
        return Ok(Rational::one());
    }
    if let Some(i) = (0..n).find(|&i| a.get(i, 0).is_zero()) {
        return Err(Error::Precondition(format!("A[{i},0] = 0; the Vandermonde reduction divides by the first column")));
    }
    let ring = RingKind::Rational;
    let mut v = GeneralPoly::constant(n, ring.one());
    for j in 0..n {
        for i in 0..j {
            let mut coeffs = vec![ring.zero(); n];
            coeffs[j] = ring.one();
            coeffs[i] = ring.from_i64(-1);
            v = v.checked_mul(&GeneralPoly::linear(ring.zero(), &coeffs)?)?;
        }
    }
    let mut terms: Vec<(Vec<u32>, Rational)> = v
        .terms()
        .map(|(e, c)| (e.clone(), c.as_rational().expect("rational ring").clone()))
        .collect();
    for j in (1..n as u32).rev() {
        for (e, c) in terms.iter_mut() {
            for (i, x) in e.iter_mut().enumerate() {
                if *x >= j {
                    *x -= j;
                    *c = &*c * a.get(i, j as usize) / a.get(i, 0);
                }
            }
        }
    }
    if let Some((e, _)) = terms.iter().find(|(e, _)| e.iter().any(|&x| x != 0)) {
        return Err(Error::Precondition(format!("exponents {e:?} survived the substitution")));
    }
    let scale: Rational = (0..n).map(|i| a.get(i, 0).clone()).product();
    Ok(terms.into_iter().map(|(_, c)| c).sum::<Rational>() * scale)
}

/// Laplace expansion along the first row, memoised on the remaining column set.
pub fn det_cofactor(a: &ExactMatrix) -> Result<Rational> {
    let n = a.n;
    guard("cofactor order", n as u128, EXTERIOR_MAX_ORDER as u128)?;
    // memo[cols] = determinant of rows (n - |cols|).. restricted to `cols`.
    let full = (1usize << n) - 1;
    let mut memo = vec![Rational::zero(); 1 << n];
    memo[0] = Rational::one();
    for cols in 1..=full {
        let row = n - (cols as u32).count_ones() as usize;
        let mut acc = Rational::zero();
        for (k, j) in (0..n).filter(|&j| cols & (1 << j) != 0).enumerate() {
            let aij = a.get(row, j);
            if aij.is_zero() {
                continue;
            }
            let term = aij * &memo[cols & !(1 << j)];
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        memo[cols] = acc;
    }
    Ok(memo.swap_remove(full))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetMethod {
    Grassmann,
    Vandermonde,
    Cofactor,
}

impl FromStr for DetMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grassmann" => Ok(DetMethod::Grassmann),
            "vandermonde" => Ok(DetMethod::Vandermonde),
            "cofactor" => Ok(DetMethod::Cofactor),
            _ => Err(Error::Parse(format!("unknown determinant method {s:?}"))),
        }
    }
}

pub fn determinant(a: &ExactMatrix, method: DetMethod) -> Result<Rational> {
    match method {
        DetMethod::Grassmann if a.n <= LITERAL_MAX_ORDER => det_grassmann(a, GrassmannMode::Literal),
        DetMethod::Grassmann => det_grassmann(a, GrassmannMode::Exterior),
        DetMethod::Vandermonde => det_vandermonde(a),
        DetMethod::Cofactor => det_cofactor(a),
    }
}

/// Coefficient of `y_0 ... y_{n-1}` in `prod_i (sum_j A[i,j] y_j)` with `y_j^2 = 0`.
pub fn permanent(a: &ExactMatrix) -> Result<Rational> {
    let n = a.n;
    guard("permanent order", n as u128, PERMANENT_MAX_ORDER as u128)?;
    // dp[used] = coefficient of y^used after the first |used| factors.
    let mut dp = vec![Rational::zero(); 1 << n];
    dp[0] = Rational::one();
    for used in 0..(1usize << n) {
        if dp[used].is_zero() {
            continue;
        }
        let row = used.count_ones() as usize;
        if row == n {
            continue;
        }
        let c = dp[used].clone();
        for j in (0..n).filter(|&j| used & (1 << j) == 0) {
            let aij = a.get(row, j);
            if !aij.is_zero() {
                dp[used | (1 << j)] += aij * &c;
            }
        }
    }
    Ok(dp.swap_remove((1 << n) - 1))
}

#[cfg(test)]
mod tests;
