//! Boolean functions: truth tables, De Morgan formulas, Boole's algebraic
//! encoding, Lagrange interpolation over the cube, and evaluation of
//! partial differential encodings.
//!
//! Truth tables are little-endian: entry `b = sum_i b_i 2^i` holds
//! `F(b_0, ..., b_{N-1})`. A point of the cube is identified with the set
//! of its one-coordinates, so the same `Monomial` type names both a vertex
//! `1_T` and the monomial `x^T`.

use std::fmt;

use serde_json::{json, Value};

use crate::circuit::{NumericCircuit, SigmaPiSigma};
use crate::error::{guard, Error, Result};
use crate::exec::{self, Strategy};
use crate::mlpoly::{GeneralPoly, MLPoly, Monomial};
use crate::ring::{rat, RingElem, RingKind};

/// Largest input count for truth tables.
pub const TABLE_MAX_VARS: usize = 20;
/// Largest input count for exhaustive verification.
pub const VERIFY_MAX_VARS: usize = 16;
/// Largest input count for the binary-encoding interpolation.
pub const BINARY_MAX_VARS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        guard("truth table inputs", n as u128, TABLE_MAX_VARS as u128)?;
        if bits.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: bits.len() });
        }
        Ok(TruthTable { n, bits })
    }

    pub fn from_fn<F: FnMut(usize) -> bool>(n: usize, f: F) -> Result<Self> {
        guard("truth table inputs", n as u128, TABLE_MAX_VARS as u128)?;
        Ok(TruthTable { n, bits: (0..1usize << n).map(f).collect() })
    }

    /// The `index`-th table on `n` inputs, bit `b` of `index` being `F(b)`.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        guard("enumerated table inputs", n as u128, 6)?;
        TruthTable::from_fn(n, |b| index >> b & 1 == 1)
    }

    /// Parses a string of '0'/'1' with the index-0 entry first.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad truth-table character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if !bits.len().is_power_of_two() {
            return Err(Error::Parse(format!("table length {} is not a power of two", bits.len())));
        }
        TruthTable::new(bits.len().trailing_zeros() as usize, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, b: usize) -> bool {
        self.bits[b]
    }

    pub fn at(&self, point: Monomial) -> bool {
        self.bits[point.bits() as usize]
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &v)| v).map(|(b, _)| b)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "bits": self.to_string() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bits = v
            .get("bits")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("truth table JSON lacks bits".into()))?;
        let t = TruthTable::parse_bits(bits)?;
        match v.get("n").and_then(Value::as_u64) {
            Some(n) if n as usize != t.n => Err(Error::LengthMismatch { expected: 1 << n, got: t.bits.len() }),
            _ => Ok(t),
        }
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// De Morgan formula with binary fan-in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(usize),
    Const(bool),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn negation(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Value at the cube point whose one-coordinates are the bits of `b`.
    pub fn eval(&self, b: usize) -> bool {
        match self {
            Formula::Var(i) => b >> i & 1 == 1,
            Formula::Const(c) => *c,
            Formula::Not(f) => !f.eval(b),
            Formula::And(l, r) => l.eval(b) && r.eval(b),
            Formula::Or(l, r) => l.eval(b) || r.eval(b),
        }
    }

    /// De Morgan size: number of leaves.
    pub fn leaf_count(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::Not(f) => f.leaf_count(),
            Formula::And(l, r) | Formula::Or(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Node levels on the longest root-to-leaf path; a leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Formula::Var(i) => Some(*i),
            Formula::Const(_) => None,
            Formula::Not(f) => f.max_var(),
            Formula::And(l, r) | Formula::Or(l, r) => l.max_var().max(r.max_var()),
        }
    }

    pub fn truth_table(&self, n: usize) -> Result<TruthTable> {
        TruthTable::from_fn(n, |b| self.eval(b))
    }

    /// Every formula over `n` variables with depth at most `depth`.
    pub fn enumerate(n: usize, depth: usize) -> Vec<Formula> {
        if depth == 0 {
            return Vec::new();
        }
        let mut out: Vec<Formula> = (0..n).map(Formula::Var).collect();
        out.push(Formula::Const(false));
        out.push(Formula::Const(true));
        for _ in 1..depth {
            let prev = out.clone();
            let mut next: Vec<Formula> = (0..n).map(Formula::Var).collect();
            next.push(Formula::Const(false));
            next.push(Formula::Const(true));
            for f in &prev {
                next.push(Formula::negation(f.clone()));
            }
            for a in &prev {
                for b in &prev {
                    next.push(Formula::and(a.clone(), b.clone()));
                    next.push(Formula::or(a.clone(), b.clone()));
                }
            }
            out = next;
        }
        out
    }

    /// Parses `!`, `&`, `|`, parentheses, `x<i>`, `0` and `1`; `&` binds tighter than `|`.
    pub fn parse(src: &str) -> Result<Formula> {
        let tokens: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { tokens, pos: 0 };
        let f = p.or_expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input at {} in {src:?}", p.pos)));
        }
        Ok(f)
    }
}

struct Parser {
    tokens: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).copied()
    }

    fn or_expr(&mut self) -> Result<Formula> {
        let mut f = self.and_expr()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            f = Formula::or(f, self.and_expr()?);
        }
        Ok(f)
    }

    fn and_expr(&mut self) -> Result<Formula> {
        let mut f = self.atom()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            f = Formula::and(f, self.atom()?);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(Formula::negation(self.atom()?))
            }
            Some('(') => {
                self.pos += 1;
                let f = self.or_expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse(format!("expected ')' at {}", self.pos)));
                }
                self.pos += 1;
                Ok(f)
            }
            Some('0') => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Some('x') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.tokens[start..self.pos].iter().collect();
                digits
                    .parse()
                    .map(Formula::Var)
                    .map_err(|_| Error::Parse(format!("bad variable at {start}")))
            }
            other => Err(Error::Parse(format!("unexpected {other:?} at {}", self.pos))),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(i) => write!(f, "x{i}"),
            Formula::Const(c) => write!(f, "{}", u8::from(*c)),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} | {r})"),
        }
    }
}

/// Boole's correspondence: not x -> 1-x, x or y -> x+y-xy, x and y -> xy.
pub fn boole_encode(f: &Formula, n: usize) -> Result<MLPoly> {
    if let Some(i) = f.max_var().filter(|&i| i >= n) {
        return Err(Error::VariableOutOfRange { index: i, n });
    }
    let ring = RingKind::Rational;
    Ok(match f {
        Formula::Var(i) => MLPoly::var(n, ring, *i)?,
        Formula::Const(c) => MLPoly::constant(n, ring.from_i64(i64::from(*c)))?,
        Formula::Not(g) => MLPoly::one(n, ring)?.checked_sub(&boole_encode(g, n)?)?,
        Formula::And(l, r) => boole_encode(l, n)?.checked_mul(&boole_encode(r, n)?)?,
        Formula::Or(l, r) => {
            let (a, b) = (boole_encode(l, n)?, boole_encode(r, n)?);
            a.checked_add(&b)?.checked_sub(&a.checked_mul(&b)?)?
        }
    })
}

/// The pointwise interpolant `sum_{F(b)=1} prod_i (x_i - (1-b_i)) / (2 b_i - 1)`.
pub fn lagrange_sumproduct(t: &TruthTable, ring: RingKind) -> Result<MLPoly> {
    let n = t.n();
    let mut total = MLPoly::zero(n, ring)?;
    for b in t.ones() {
        let mut prod = MLPoly::one(n, ring)?;
        for i in 0..n {
            let bi = (b >> i & 1) as i64;
            let shift = MLPoly::constant(n, ring.from_i64(1 - bi))?;
            let factor = MLPoly::var(n, ring, i)?.checked_sub(&shift)?;
            let denom = ring.from_i64(2 * bi - 1).inverse()?;
            prod = prod.checked_mul(&factor.scale(&denom)?)?;
        }
        total = total.checked_add(&prod)?;
    }
    Ok(total)
}

/// Lagrange bases over the integer encoding `X = sum_j 2^j x_j`, each
/// expanded with exponents and then reduced modulo `x_i^2 - x_i`.
#[derive(Debug, Clone)]
pub struct BinaryInterpolator {
    n: usize,
    bases: Vec<MLPoly>,
}

impl BinaryInterpolator {
    pub fn new(n: usize) -> Result<Self> {
        guard("binary interpolation inputs", n as u128, BINARY_MAX_VARS as u128)?;
        let ring = RingKind::Rational;
        let weights: Vec<RingElem> = (0..n).map(|j| ring.from_i64(1 << j)).collect();
        let bases = (0..1i64 << n)
            .map(|b| {
                let mut prod = GeneralPoly::constant(n, ring.one());
                for d in (0..1i64 << n).filter(|&d| d != b) {
                    let factor = GeneralPoly::linear(ring.from_i64(-d), &weights)?;
                    let denom = RingElem::Rational(rat(b - d)).inverse()?;
                    prod = prod.checked_mul(&factor.scale(&denom)?)?;
                }
                prod.reduce_multilinear()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BinaryInterpolator { n, bases })
    }

    /// Pointwise interpolant of `t` over GF(2).
    pub fn interpolate(&self, t: &TruthTable) -> Result<MLPoly> {
        if t.n() != self.n {
            return Err(Error::ArityMismatch(self.n, t.n()));
        }
        let mut total = MLPoly::zero(self.n, RingKind::Rational)?;
        for b in t.ones() {
            total = total.checked_add(&self.bases[b])?;
        }
        total.change_ring(RingKind::Gf2)
    }
}

/// The pointwise interpolant built from integer binary encodings, over GF(2).
pub fn lagrange_binary(t: &TruthTable) -> Result<MLPoly> {
    BinaryInterpolator::new(t.n())?.interpolate(t)
}

/// Re-expresses a polynomial by its values: the coefficient of `x^T` in
/// the result is `f(1_T)`.
pub fn values_as_coefficients(f: &MLPoly) -> Result<MLPoly> {
    let n = f.n();
    guard("value transform inputs", n as u128, TABLE_MAX_VARS as u128)?;
    let ring = f.ring();
    let mut dense = vec![ring.zero(); 1 << n];
    for (m, c) in f.terms() {
        dense[m.bits() as usize] = c.clone();
    }
    for i in 0..n {
        for s in 0..dense.len() {
            if s >> i & 1 == 1 {
                dense[s] = dense[s].checked_add(&dense[s ^ (1 << i)])?;
            }
        }
    }
    MLPoly::from_terms(n, ring, dense.into_iter().enumerate().map(|(s, c)| (Monomial::from_bits(s as u128), c)))
}

/// Partial differential encoding of `t` by the sum-product construction:
/// the interpolant's value at `1_T` becomes the coefficient of `x^T`, so
/// extracting that coefficient returns `F(1_T)`.
pub fn interpolate_sumproduct(t: &TruthTable, ring: RingKind) -> Result<MLPoly> {
    if !matches!(ring, RingKind::Rational | RingKind::Gf2) {
        return Err(Error::Precondition(format!("interpolation ring must be q or gf2, got {ring}")));
    }
    values_as_coefficients(&lagrange_sumproduct(t, ring)?)
}

/// Partial differential encoding of `t` by the binary-encoding construction, over GF(2).
pub fn interpolate_binary(t: &TruthTable) -> Result<MLPoly> {
    values_as_coefficients(&lagrange_binary(t)?)
}

fn monomial_of_power(c: &RingElem, m: u32, t: Monomial) -> Result<bool> {
    let p = c.pow(m);
    if p.is_zero() {
        Ok(false)
    } else if p.is_one() {
        Ok(true)
    } else {
        Err(Error::InvalidPde { monomial: t.to_string(), m, value: p.to_string() })
    }
}

/// `(coefficient of x^T)^m`, which must be exactly 0 or 1.
pub fn pde_evaluate(p: &MLPoly, t: Monomial, m: u32) -> Result<bool> {
    monomial_of_power(&p.diff_extract(t)?, m, t)
}

/// Tolerance for numeric coefficients.
pub const NUMERIC_TOL: f64 = 1e-6;

/// A reduced representative, ready for coefficient extraction.
#[derive(Debug, Clone)]
pub enum Canonical {
    Exact(MLPoly),
    /// Dense numeric coefficients indexed by monomial bits.
    Numeric { n: usize, coeffs: Vec<f64> },
    /// Symmetric polynomial given by one coefficient per monomial degree.
    BySize { n: usize, coeffs: Vec<RingElem> },
}

impl Canonical {
    pub fn n(&self) -> usize {
        match self {
            Canonical::Exact(p) => p.n(),
            Canonical::Numeric { n, .. } | Canonical::BySize { n, .. } => *n,
        }
    }

    pub fn evaluate(&self, t: Monomial, m: u32) -> Result<bool> {
        if t.span() > self.n() {
            return Err(Error::VariableOutOfRange { index: t.span() - 1, n: self.n() });
        }
        match self {
            Canonical::Exact(p) => pde_evaluate(p, t, m),
            Canonical::BySize { coeffs, .. } => monomial_of_power(&coeffs[t.degree()], m, t),
            Canonical::Numeric { coeffs, .. } => {
                let v = coeffs[t.bits() as usize].powi(m as i32);
                if v.abs() <= NUMERIC_TOL {
                    Ok(false)
                } else if (v - 1.0).abs() <= NUMERIC_TOL {
                    Ok(true)
                } else {
                    Err(Error::InvalidPde { monomial: t.to_string(), m, value: format!("{v:e}") })
                }
            }
        }
    }
}

/// Anything that reduces to a multilinear representative.
pub trait Reducible {
    fn reduce(&self) -> Result<Canonical>;
}

impl Reducible for MLPoly {
    fn reduce(&self) -> Result<Canonical> {
        Ok(Canonical::Exact(self.clone()))
    }
}

impl Reducible for SigmaPiSigma {
    fn reduce(&self) -> Result<Canonical> {
        Ok(Canonical::Exact(self.expand(true)?))
    }
}

impl Reducible for NumericCircuit {
    fn reduce(&self) -> Result<Canonical> {
        Ok(Canonical::Numeric { n: self.n(), coeffs: self.expand_dense() })
    }
}

pub fn pdp_evaluate<R: Reducible + ?Sized>(q: &R, t: Monomial, m: u32) -> Result<bool> {
    q.reduce()?.evaluate(t, m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub point: Monomial,
    pub expected: bool,
    pub got: std::result::Result<bool, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub n: usize,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "checked": self.checked,
            "pass": self.passed(),
            "mismatches": self.mismatches.iter().map(|m| json!({
                "t": m.point.vars().collect::<Vec<_>>(),
                "expected": u8::from(m.expected),
                "got": match &m.got {
                    Ok(b) => json!(u8::from(*b)),
                    Err(e) => json!(e),
                },
            })).collect::<Vec<_>>(),
        })
    }
}

fn collect_report<F>(n: usize, strategy: Strategy, check: F) -> VerifyReport
where
    F: Fn(Monomial) -> Option<Mismatch> + Sync + Send,
{
    let found = exec::map_range(0..1u64 << n, strategy, |s| check(Monomial::from_bits(u128::from(s))));
    VerifyReport { n, checked: 1 << n, mismatches: found.into_iter().flatten().collect() }
}

/// Compares the encoding against `t` on every subset T.
pub fn verify_pde<R: Reducible + ?Sized>(q: &R, t: &TruthTable, m: u32, strategy: Strategy) -> Result<VerifyReport> {
    let canon = q.reduce()?;
    if canon.n() != t.n() {
        return Err(Error::ArityMismatch(canon.n(), t.n()));
    }
    guard("verification inputs", t.n() as u128, VERIFY_MAX_VARS as u128)?;
    Ok(collect_report(t.n(), strategy, |point| {
        let expected = t.at(point);
        let got = canon.evaluate(point, m).map_err(|e| e.to_string());
        (got != Ok(expected)).then_some(Mismatch { point, expected, got })
    }))
}

/// Compares ordinary evaluation of `p` on the cube against `t`.
pub fn verify_evaluation(p: &MLPoly, t: &TruthTable, strategy: Strategy) -> Result<VerifyReport> {
    if p.n() != t.n() {
        return Err(Error::ArityMismatch(p.n(), t.n()));
    }
    guard("verification inputs", t.n() as u128, VERIFY_MAX_VARS as u128)?;
    Ok(collect_report(t.n(), strategy, |point| {
        let expected = t.at(point);
        let v = p.evaluate_at_set(point);
        let got = if v.is_zero() {
            Ok(false)
        } else if v.is_one() {
            Ok(true)
        } else {
            Err(format!("value {v} is not 0 or 1"))
        };
        (got != Ok(expected)).then_some(Mismatch { point, expected, got })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::superset_product;
    use crate::ring::rat;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, Just, Strategy as _};

    fn q(v: i64) -> RingElem {
        RingElem::Rational(rat(v))
    }

    fn poly(n: usize, ring: RingKind, terms: &[(u128, i64)]) -> MLPoly {
        MLPoly::from_terms(n, ring, terms.iter().map(|&(m, c)| (Monomial::from_bits(m), ring.from_i64(c)))).unwrap()
    }

    /// Direct construction: coefficient of x^T is F(1_T).
    fn table_polynomial(t: &TruthTable, ring: RingKind) -> MLPoly {
        MLPoly::from_terms(
            t.n(),
            ring,
            (0..1usize << t.n()).map(|b| (Monomial::from_bits(b as u128), ring.from_i64(i64::from(t.get(b))))),
        )
        .unwrap()
    }

    /// Mobius coefficients of the table: the unique multilinear interpolant.
    fn mobius_interpolant(t: &TruthTable) -> MLPoly {
        let n = t.n();
        let mut terms = Vec::new();
        for s in 0..1usize << n {
            let mut c = 0i64;
            for r in Monomial::from_bits(s as u128).subsets() {
                let sign = if (s.count_ones() - r.degree() as u32) % 2 == 1 { -1 } else { 1 };
                c += sign * i64::from(t.get(r.bits() as usize));
            }
            terms.push((Monomial::from_bits(s as u128), q(c)));
        }
        MLPoly::from_terms(n, RingKind::Rational, terms).unwrap()
    }

    #[test]
    fn boole_examples() {
        let or = Formula::or(Formula::Var(0), Formula::Var(1));
        assert_eq!(boole_encode(&or, 2).unwrap(), poly(2, RingKind::Rational, &[(1, 1), (2, 1), (3, -1)]));
        let not = Formula::negation(Formula::Var(0));
        assert_eq!(boole_encode(&not, 1).unwrap(), poly(1, RingKind::Rational, &[(0, 1), (1, -1)]));
        assert_eq!(boole_encode(&Formula::Const(true), 2).unwrap(), poly(2, RingKind::Rational, &[(0, 1)]));
        assert!(boole_encode(&Formula::Var(3), 2).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let t = TruthTable::parse_bits("1101").unwrap();
        let expected = poly(2, RingKind::Rational, &[(0, 1), (1, 1), (3, 1)]);
        assert_eq!(interpolate_sumproduct(&t, RingKind::Rational).unwrap(), expected);
        assert_eq!(
            lagrange_sumproduct(&t, RingKind::Rational).unwrap(),
            poly(2, RingKind::Rational, &[(0, 1), (2, -1), (3, 1)])
        );
        let zeros = TruthTable::parse_bits("0000").unwrap();
        assert!(interpolate_sumproduct(&zeros, RingKind::Rational).unwrap().is_zero());
        let top = TruthTable::parse_bits("0001").unwrap();
        assert_eq!(interpolate_sumproduct(&top, RingKind::Rational).unwrap(), poly(2, RingKind::Rational, &[(3, 1)]));
        let xor = TruthTable::parse_bits("0110").unwrap();
        assert_eq!(interpolate_binary(&xor).unwrap(), poly(2, RingKind::Gf2, &[(1, 1), (2, 1)]));
        assert_eq!(lagrange_binary(&xor).unwrap(), poly(2, RingKind::Gf2, &[(1, 1), (2, 1)]));
        let ones = TruthTable::parse_bits("1111").unwrap();
        assert_eq!(lagrange_binary(&ones).unwrap(), poly(2, RingKind::Gf2, &[(0, 1)]));
        assert!(interpolate_sumproduct(&ones, RingKind::Cyclotomic(3)).is_err());
        assert!(matches!(lagrange_binary(&TruthTable::from_index(5, 3).unwrap()), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn all_two_input_tables_agree_mod_two() {
        let interp = BinaryInterpolator::new(2).unwrap();
        for idx in 0..16 {
            let t = TruthTable::from_index(2, idx).unwrap();
            let sp = lagrange_sumproduct(&t, RingKind::Gf2).unwrap();
            assert_eq!(interp.interpolate(&t).unwrap(), sp);
            assert_eq!(interpolate_binary(&t).unwrap(), interpolate_sumproduct(&t, RingKind::Gf2).unwrap());
        }
    }

    #[test]
    fn pde_evaluate_examples() {
        let p = poly(2, RingKind::Rational, &[(0, 1), (1, 1), (3, 1)]);
        assert!(!pde_evaluate(&p, Monomial::var(1), 1).unwrap());
        assert!(pde_evaluate(&p, Monomial::from_bits(3), 1).unwrap());
        let bad = poly(1, RingKind::Rational, &[(1, 2)]);
        match pde_evaluate(&bad, Monomial::var(0), 2) {
            Err(Error::InvalidPde { monomial, .. }) => assert_eq!(monomial, "x0"),
            other => panic!("{other:?}"),
        }
        let minus = poly(1, RingKind::Rational, &[(1, -1)]);
        assert!(pde_evaluate(&minus, Monomial::var(0), 2).unwrap());
        assert!(pde_evaluate(&minus, Monomial::var(0), 1).is_err());
    }

    #[test]
    fn corrupted_coefficient_is_reported_alone() {
        let t = TruthTable::from_index(3, 0b1011_0110).unwrap();
        let mut p = interpolate_sumproduct(&t, RingKind::Rational).unwrap();
        let target = Monomial::from_bits(0b101);
        p.add_term(target, q(5)).unwrap();
        let rep = verify_pde(&p, &t, 1, Strategy::default()).unwrap();
        assert_eq!(rep.mismatches.len(), 1);
        assert_eq!(rep.mismatches[0].point, target);
        assert!(rep.mismatches[0].got.is_err());
    }

    #[test]
    fn formulas_of_depth_three_encode_correctly() {
        let all = Formula::enumerate(3, 3);
        assert_eq!(all.len(), 7265);
        for f in &all {
            let t = f.truth_table(3).unwrap();
            let p = boole_encode(f, 3).unwrap();
            assert!(verify_evaluation(&p, &t, Strategy::Sequential).unwrap().passed(), "{f}");
        }
    }

    #[test]
    fn every_three_input_table_round_trips() {
        let interp = BinaryInterpolator::new(3).unwrap();
        for idx in 0..256 {
            let t = TruthTable::from_index(3, idx).unwrap();
            let p = interpolate_sumproduct(&t, RingKind::Rational).unwrap();
            assert_eq!(p, table_polynomial(&t, RingKind::Rational));
            assert!(verify_pde(&p, &t, 1, Strategy::Sequential).unwrap().passed());
            let lq = lagrange_sumproduct(&t, RingKind::Rational).unwrap();
            assert_eq!(lq, mobius_interpolant(&t));
            assert!(verify_evaluation(&lq, &t, Strategy::Sequential).unwrap().passed());
            assert_eq!(interp.interpolate(&t).unwrap(), lagrange_sumproduct(&t, RingKind::Gf2).unwrap());
            assert_eq!(
                values_as_coefficients(&interp.interpolate(&t).unwrap()).unwrap(),
                interpolate_sumproduct(&t, RingKind::Gf2).unwrap()
            );
        }
    }

    #[test]
    fn formula_parser_round_trips() {
        let f = Formula::parse("!(x0 & x1) | x2 & 1").unwrap();
        assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
        assert_eq!(f.leaf_count(), 4);
        assert!(Formula::parse("x0 &").is_err());
        assert!(Formula::parse("(x0").is_err());
    }

    #[test]
    fn truth_table_json() {
        let t = TruthTable::parse_bits("1101").unwrap();
        assert_eq!(t.to_json(), json!({"n": 2, "bits": "1101"}));
        assert_eq!(TruthTable::from_json(&t.to_json()).unwrap(), t);
        assert!(TruthTable::parse_bits("110").is_err());
        assert!(TruthTable::from_json(&json!({"n": 3, "bits": "1101"})).is_err());
    }

    #[test]
    fn monotone_link_with_superset_products() {
        for n in [3usize, 6, 10] {
            for mask in [0u128, 1, 0b101, (1 << n) - 1] {
                let s: Vec<usize> = Monomial::from_bits(mask).vars().collect();
                let and = s.iter().fold(Formula::Const(true), |acc, &i| Formula::and(acc, Formula::Var(i)));
                let enc = boole_encode(&and, n).unwrap();
                let sup = superset_product(&s, n).unwrap();
                let sm = Monomial::from_bits(mask);
                assert!(enc.coeff(sm).is_one());
                assert!(sup.expand(true).unwrap().coeff(sm).is_one());
                let t = TruthTable::from_fn(n, |b| sm.is_subset_of(Monomial::from_bits(b as u128))).unwrap();
                assert!(verify_pde(&sup, &t, 2, Strategy::default()).unwrap().passed());
            }
        }
    }

    fn arb_formula(n: usize) -> impl proptest::strategy::Strategy<Value = Formula> {
        let leaf = proptest::prop_oneof![(0..n).prop_map(Formula::Var), any::<bool>().prop_map(Formula::Const)];
        leaf.prop_recursive(6, 40, 2, |inner| {
            proptest::prop_oneof![
                inner.clone().prop_map(Formula::negation),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
            ]
        })
    }

    proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn random_formulas_encode_correctly(f in arb_formula(10)) {
            let t = f.truth_table(10).unwrap();
            let p = boole_encode(&f, 10).unwrap();
            prop_assert!(verify_evaluation(&p, &t, crate::exec::Strategy::default()).unwrap().passed());
        }

        #[test]
        fn random_tables_round_trip(n in Just(12usize), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let t = TruthTable::from_fn(n, |_| rng.gen_bool(0.003)).unwrap();
            let p = interpolate_sumproduct(&t, RingKind::Rational).unwrap();
            prop_assert!(verify_pde(&p, &t, 1, crate::exec::Strategy::default()).unwrap().passed());
            prop_assert_eq!(p.term_count(), t.ones().count());
        }
    }
}
