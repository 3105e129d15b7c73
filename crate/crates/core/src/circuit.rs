//! Sum-of-products-of-linear-forms circuits stored as rho x d x (1+N)
//! hypermatrices, in an exact flavour (ring entries) and a numeric one
//! (`f64` entries, used by the local search).
//!
//! Slot `w = 0` of a linear form is its constant term and slot `w = 1 + i`
//! multiplies `x_i`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{guard, Error, Result};
use crate::exec::{self, Strategy};
use crate::mlpoly::{GeneralPoly, MLPoly, Monomial};
use crate::ring::{rational_to_f64, RingElem, RingKind};

/// Shape and size `rho * d * (1+N)` of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeReport {
    pub rho: usize,
    pub d: usize,
    pub width: usize,
    pub product: u128,
}

impl SizeReport {
    pub fn new(rho: usize, d: usize, n: usize) -> Self {
        SizeReport { rho, d, width: n + 1, product: rho as u128 * d as u128 * (n as u128 + 1) }
    }

    pub fn to_json(&self) -> Value {
        json!({ "rho": self.rho, "d": self.d, "width": self.width, "product": self.product.to_string() })
    }
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{} = {}", self.rho, self.d, self.width, self.product)
    }
}

/// Exact circuit `sum_u prod_v (B[u][v][0] + sum_i B[u][v][1+i] x_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPiSigma {
    rho: usize,
    d: usize,
    n: usize,
    ring: RingKind,
    entries: Vec<RingElem>,
}

impl SigmaPiSigma {
    pub fn zeros(rho: usize, d: usize, n: usize, ring: RingKind) -> Result<Self> {
        if rho == 0 || d == 0 {
            return Err(Error::Precondition("a circuit needs rho >= 1 and d >= 1".into()));
        }
        guard("hypermatrix size", SizeReport::new(rho, d, n).product, 1 << 24)?;
        Ok(SigmaPiSigma { rho, d, n, ring, entries: vec![ring.zero(); rho * d * (n + 1)] })
    }

    pub fn from_entries(rho: usize, d: usize, n: usize, ring: RingKind, entries: Vec<RingElem>) -> Result<Self> {
        let mut c = SigmaPiSigma::zeros(rho, d, n, ring)?;
        if entries.len() != c.entries.len() {
            return Err(Error::LengthMismatch { expected: c.entries.len(), got: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|e| e.kind() != ring) {
            return Err(Error::IncompatibleRing(ring.to_string(), bad.kind().to_string()));
        }
        c.entries = entries;
        Ok(c)
    }

    fn idx(&self, u: usize, v: usize, w: usize) -> usize {
        (u * self.d + v) * (self.n + 1) + w
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn get(&self, u: usize, v: usize, w: usize) -> &RingElem {
        &self.entries[self.idx(u, v, w)]
    }

    pub fn set(&mut self, u: usize, v: usize, w: usize, value: RingElem) -> Result<()> {
        if value.kind() != self.ring {
            return Err(Error::IncompatibleRing(self.ring.to_string(), value.kind().to_string()));
        }
        if u >= self.rho || v >= self.d || w > self.n {
            return Err(Error::Precondition(format!("entry ({u},{v},{w}) outside the hypermatrix")));
        }
        let i = self.idx(u, v, w);
        self.entries[i] = value;
        Ok(())
    }

    pub fn size(&self) -> u128 {
        self.size_report().product
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport::new(self.rho, self.d, self.n)
    }

    fn linear_form(&self, u: usize, v: usize) -> Result<MLPoly> {
        let mut p = MLPoly::zero(self.n, self.ring)?;
        p.add_term(Monomial::ONE, self.get(u, v, 0).clone())?;
        for i in 0..self.n {
            p.add_term(Monomial::var(i), self.get(u, v, i + 1).clone())?;
        }
        Ok(p)
    }

    /// Raw expansion with exponents kept.
    pub fn expand_general(&self) -> Result<GeneralPoly> {
        let mut total = GeneralPoly::zero(self.n, self.ring);
        for u in 0..self.rho {
            let mut prod = GeneralPoly::constant(self.n, self.ring.one());
            for v in 0..self.d {
                let coeffs: Vec<RingElem> = (1..=self.n).map(|w| self.get(u, v, w).clone()).collect();
                prod = prod.checked_mul(&GeneralPoly::linear(self.get(u, v, 0).clone(), &coeffs)?)?;
            }
            total = total.checked_add(&prod)?;
        }
        Ok(total)
    }

    /// Expands the circuit. With `reduce` every square collapses; without
    /// it a non-multilinear raw monomial is an error.
    pub fn expand(&self, reduce: bool) -> Result<MLPoly> {
        if !reduce {
            let g = self.expand_general()?;
            if let Some((e, _)) = g.terms().find(|(e, _)| e.iter().any(|&x| x > 1)) {
                return Err(Error::NonMultilinear(format!("{e:?}")));
            }
            return g.reduce_multilinear();
        }
        let mut total = MLPoly::zero(self.n, self.ring)?;
        for u in 0..self.rho {
            let mut prod = MLPoly::one(self.n, self.ring)?;
            for v in 0..self.d {
                prod = prod.checked_mul(&self.linear_form(u, v)?)?;
            }
            total = total.checked_add(&prod)?;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Vec<Vec<Value>>> = (0..self.rho)
            .map(|u| {
                (0..self.d)
                    .map(|v| (0..=self.n).map(|w| self.get(u, v, w).to_json()).collect())
                    .collect()
            })
            .collect();
        json!({ "rho": self.rho, "d": self.d, "n": self.n, "ring": self.ring.to_json(), "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (rho, d, n, raw) = parse_shape(v)?;
        let ring = match v.get("ring") {
            Some(r) => RingKind::from_json(r)?,
            None => RingKind::Rational,
        };
        let entries = raw.iter().map(|e| RingElem::from_json(ring, e)).collect::<Result<Vec<_>>>()?;
        SigmaPiSigma::from_entries(rho, d, n, ring, entries)
    }
}

fn parse_shape(v: &Value) -> Result<(usize, usize, usize, Vec<Value>)> {
    let field = |k: &str| {
        v.get(k)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| Error::Parse(format!("hypermatrix JSON lacks {k}")))
    };
    let (rho, d, n) = (field("rho")?, field("d")?, field("n")?);
    let bad = || Error::Parse("hypermatrix entries must be rho x d x (1+n)".into());
    let mut flat = Vec::with_capacity(rho * d * (n + 1));
    let layers = v.get("entries").and_then(Value::as_array).ok_or_else(bad)?;
    if layers.len() != rho {
        return Err(bad());
    }
    for layer in layers {
        let rows = layer.as_array().filter(|r| r.len() == d).ok_or_else(bad)?;
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == n + 1).ok_or_else(bad)?;
            flat.extend(row.iter().cloned());
        }
    }
    Ok((rho, d, n, flat))
}

fn one_factor_circuit(n: usize, ring: RingKind, factors: &[Option<usize>]) -> Result<SigmaPiSigma> {
    let mut c = SigmaPiSigma::zeros(1, factors.len(), n, ring)?;
    for (v, f) in factors.iter().enumerate() {
        match f {
            None => c.set(0, v, 0, ring.one())?,
            Some(i) => c.set(0, v, i + 1, ring.one())?,
        }
    }
    Ok(c)
}

fn check_index_set(s: &[usize], n: usize) -> Result<()> {
    match s.iter().find(|&&i| i >= n) {
        Some(&i) => Err(Error::VariableOutOfRange { index: i, n }),
        None => Ok(()),
    }
}

/// `prod_{i in S} (1 + x_i)`; the empty set gives the constant 1 with d = 1.
pub fn subset_product(s: &[usize], n: usize) -> Result<SigmaPiSigma> {
    check_index_set(s, n)?;
    let ring = RingKind::Rational;
    if s.is_empty() {
        return one_factor_circuit(n, ring, &[None]);
    }
    let mut c = SigmaPiSigma::zeros(1, s.len(), n, ring)?;
    for (v, &i) in s.iter().enumerate() {
        c.set(0, v, 0, ring.one())?;
        c.set(0, v, i + 1, ring.one())?;
    }
    Ok(c)
}

/// `prod_{i in S} x_i * prod_{i not in S} (1 + x_i)`, one factor per variable.
pub fn superset_product(s: &[usize], n: usize) -> Result<SigmaPiSigma> {
    check_index_set(s, n)?;
    let ring = RingKind::Rational;
    if n == 0 {
        return one_factor_circuit(0, ring, &[None]);
    }
    let mut c = SigmaPiSigma::zeros(1, n, n, ring)?;
    for i in 0..n {
        if !s.contains(&i) {
            c.set(0, i, 0, ring.one())?;
        }
        c.set(0, i, i + 1, ring.one())?;
    }
    Ok(c)
}

/// One summand per term, padded with constant-1 factors up to the top degree.
pub fn trivial_circuit(p: &MLPoly) -> Result<SigmaPiSigma> {
    if p.is_zero() {
        return Err(Error::Precondition("the zero polynomial has no trivial circuit".into()));
    }
    let ring = p.ring();
    let d = p.degree().max(1);
    let mut c = SigmaPiSigma::zeros(p.term_count(), d, p.n(), ring)?;
    for (u, (m, coeff)) in p.terms().enumerate() {
        let vars: Vec<usize> = m.vars().collect();
        for v in 0..d {
            match vars.get(v) {
                Some(&i) => c.set(u, v, i + 1, ring.one())?,
                None => c.set(u, v, 0, ring.one())?,
            }
        }
        let w = vars.first().map_or(0, |i| i + 1);
        c.set(u, 0, w, coeff.clone())?;
    }
    Ok(c)
}

/// Double-precision circuit, kept apart from the exact type.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCircuit {
    rho: usize,
    d: usize,
    n: usize,
    entries: Vec<f64>,
}

/// Largest variable count handled by the dense numeric routines.
pub const NUMERIC_MAX_VARS: usize = 16;

impl NumericCircuit {
    pub fn zeros(rho: usize, d: usize, n: usize) -> Result<Self> {
        if rho == 0 || d == 0 {
            return Err(Error::Precondition("a circuit needs rho >= 1 and d >= 1".into()));
        }
        guard("numeric circuit variables", n as u128, NUMERIC_MAX_VARS as u128)?;
        Ok(NumericCircuit { rho, d, n, entries: vec![0.0; rho * d * (n + 1)] })
    }

    pub fn from_exact(c: &SigmaPiSigma) -> Result<Self> {
        let mut out = NumericCircuit::zeros(c.rho, c.d, c.n)?;
        for (dst, src) in out.entries.iter_mut().zip(&c.entries) {
            *dst = match src {
                RingElem::Gf2(b) => f64::from(u8::from(*b)),
                RingElem::Rational(q) => rational_to_f64(q),
                other => return Err(Error::NotRepresentable(other.to_string(), "f64".into())),
            };
        }
        Ok(out)
    }

    fn idx(&self, u: usize, v: usize, w: usize) -> usize {
        (u * self.d + v) * (self.n + 1) + w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize, w: usize) -> f64 {
        self.entries[self.idx(u, v, w)]
    }

    pub fn set(&mut self, u: usize, v: usize, w: usize, x: f64) {
        let i = self.idx(u, v, w);
        self.entries[i] = x;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport::new(self.rho, self.d, self.n)
    }

    /// Value of linear form (u, v) at the 0/1 point `s`.
    fn form_value(&self, u: usize, v: usize, s: usize) -> f64 {
        let base = self.idx(u, v, 0);
        let mut acc = self.entries[base];
        let mut bits = s;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc += self.entries[base + 1 + i];
            bits &= bits - 1;
        }
        acc
    }

    /// Dense reduced coefficient vector indexed by monomial bits.
    pub fn expand_dense(&self) -> Vec<f64> {
        let size = 1usize << self.n;
        let mut values = vec![0.0; size];
        for (s, val) in values.iter_mut().enumerate() {
            for u in 0..self.rho {
                *val += (0..self.d).map(|v| self.form_value(u, v, s)).product::<f64>();
            }
        }
        mobius(&mut values, self.n);
        values
    }

    /// Reduced expansion by walking every choice of one slot per factor.
    /// Independent of [`NumericCircuit::expand_dense`]; used to re-check search results.
    pub fn expand_by_terms(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << self.n];
        for u in 0..self.rho {
            self.walk(u, 0, 0, 1.0, &mut out);
        }
        out
    }

    fn walk(&self, u: usize, v: usize, mono: usize, coeff: f64, out: &mut [f64]) {
        if v == self.d {
            out[mono] += coeff;
            return;
        }
        for w in 0..=self.n {
            let b = self.get(u, v, w);
            if b != 0.0 {
                let m = if w == 0 { mono } else { mono | 1 << (w - 1) };
                self.walk(u, v + 1, m, coeff * b, out);
            }
        }
    }

    pub fn coefficient(&self, t: Monomial) -> f64 {
        self.expand_dense()[t.bits() as usize]
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Vec<Vec<f64>>> = (0..self.rho)
            .map(|u| (0..self.d).map(|v| (0..=self.n).map(|w| self.get(u, v, w)).collect()).collect())
            .collect();
        json!({ "rho": self.rho, "d": self.d, "n": self.n, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (rho, d, n, raw) = parse_shape(v)?;
        let mut c = NumericCircuit::zeros(rho, d, n)?;
        for (dst, src) in c.entries.iter_mut().zip(&raw) {
            *dst = src.as_f64().ok_or_else(|| Error::Parse(format!("not a number: {src}")))?;
        }
        Ok(c)
    }
}

/// In-place Mobius transform: values on the cube to multilinear coefficients.
pub(crate) fn mobius(v: &mut [f64], n: usize) {
    for i in 0..n {
        let bit = 1 << i;
        for s in 0..v.len() {
            if s & bit != 0 {
                v[s] -= v[s ^ bit];
            }
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Entry pinned to a value during the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedEntry {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub rho: usize,
    pub d: usize,
    /// Number of random starts.
    pub starts: u32,
    /// Seed of the first start; start k uses `seed + k`.
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    pub fixed: Vec<FixedEntry>,
    pub strategy: Strategy,
}

impl SearchConfig {
    pub fn new(rho: usize, d: usize) -> Self {
        SearchConfig {
            rho,
            d,
            starts: 8,
            seed: 0,
            tol: 1e-9,
            max_iters: 400,
            fixed: Vec::new(),
            strategy: Strategy::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub circuit: NumericCircuit,
    /// Max-abs coefficient residual of the returned circuit.
    pub residual: f64,
    /// The same residual recomputed by term enumeration.
    pub verified_residual: f64,
    pub converged: bool,
    pub seed: u64,
    pub iterations: usize,
    /// Euclidean residual norm after each accepted step of the winning start.
    pub history: Vec<f64>,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "circuit": self.circuit.to_json(),
            "size": self.circuit.size_report().to_json(),
            "residual": self.residual,
            "verified_residual": self.verified_residual,
            "converged": self.converged,
            "seed": self.seed,
            "iterations": self.iterations,
        })
    }
}

struct Problem<'a> {
    rho: usize,
    d: usize,
    n: usize,
    target: &'a [f64],
    fixed: &'a [FixedEntry],
    free: Vec<usize>,
}

impl Problem<'_> {
    fn assemble(&self, params: &[f64]) -> NumericCircuit {
        let mut c = NumericCircuit::zeros(self.rho, self.d, self.n).expect("checked shape");
        for f in self.fixed {
            c.set(f.u, f.v, f.w, f.value);
        }
        for (&slot, &p) in self.free.iter().zip(params) {
            c.entries[slot] = p;
        }
        c
    }

    fn residual(&self, c: &NumericCircuit) -> Vec<f64> {
        c.expand_dense().iter().zip(self.target).map(|(a, b)| a - b).collect()
    }

    /// Jacobian of the coefficient vector with respect to the free entries.
    fn jacobian(&self, c: &NumericCircuit) -> DMatrix<f64> {
        let size = 1usize << self.n;
        let width = self.n + 1;
        let mut jac = DMatrix::zeros(size, self.free.len());
        for (col, &slot) in self.free.iter().enumerate() {
            let u = slot / (self.d * width);
            let v = (slot / width) % self.d;
            let w = slot % width;
            let mut column: Vec<f64> = (0..size)
                .map(|s| {
                    if w > 0 && s >> (w - 1) & 1 == 0 {
                        return 0.0;
                    }
                    (0..self.d).filter(|&k| k != v).map(|k| c.form_value(u, k, s)).product()
                })
                .collect();
            mobius(&mut column, self.n);
            for (r, x) in column.into_iter().enumerate() {
                jac[(r, col)] = x;
            }
        }
        jac
    }

    fn levenberg_marquardt(&self, start: Vec<f64>, tol: f64, max_iters: usize) -> (Vec<f64>, Vec<f64>, usize) {
        let mut params = start;
        let mut c = self.assemble(&params);
        let mut r = self.residual(&c);
        let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut history = vec![norm(&r)];
        let mut lambda = 1e-3;
        let mut iters = 0;
        while iters < max_iters {
            iters += 1;
            if r.iter().fold(0.0f64, |m, x| m.max(x.abs())) <= tol * 1e-4 {
                break;
            }
            let jac = self.jacobian(&c);
            let rv = DVector::from_column_slice(&r);
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * rv;
            let mut accepted = false;
            while lambda < 1e12 {
                let mut a = jtj.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += lambda * (jtj[(i, i)] + 1e-9);
                }
                let Some(delta) = a.cholesky().map(|ch| ch.solve(&g)) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = params.iter().zip(delta.iter()).map(|(p, dp)| p - dp).collect();
                let tc = self.assemble(&trial);
                let tr = self.residual(&tc);
                if norm(&tr) < *history.last().expect("non-empty") {
                    params = trial;
                    c = tc;
                    r = tr;
                    history.push(norm(&r));
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        (params, history, iters)
    }
}

/// Rescales each product so every factor after the first has unit max-abs
/// entry, then rounds near-integers; kept only if the residual does not grow.
fn tidy(c: &NumericCircuit, target: &[f64]) -> NumericCircuit {
    let mut t = c.clone();
    let width = t.n + 1;
    for u in 0..t.rho {
        let mut carry = 1.0;
        for v in 1..t.d {
            let base = t.idx(u, v, 0);
            let s = t.entries[base..base + width].iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
            if s != 0.0 {
                t.entries[base..base + width].iter_mut().for_each(|x| *x /= s);
                carry *= s;
            }
        }
        let base = t.idx(u, 0, 0);
        t.entries[base..base + width].iter_mut().for_each(|x| *x *= carry);
    }
    for x in &mut t.entries {
        let r = x.round();
        if (*x - r).abs() < 1e-6 {
            *x = r;
        }
    }
    let before = max_abs_diff(&c.expand_dense(), target);
    let after = max_abs_diff(&t.expand_dense(), target);
    if after <= before {
        t
    } else {
        c.clone()
    }
}

/// Greedily pins entries to zero while the search still converges.
fn sparsify(problem: &Problem<'_>, mut best: NumericCircuit, cfg: &SearchConfig) -> NumericCircuit {
    let mut fixed: Vec<FixedEntry> = cfg.fixed.clone();
    let width = problem.n + 1;
    for slot in problem.free.clone() {
        if best.entries[slot] == 0.0 {
            continue;
        }
        let (u, v, w) = (slot / (problem.d * width), (slot / width) % problem.d, slot % width);
        let mut trial_fixed = fixed.clone();
        trial_fixed.push(FixedEntry { u, v, w, value: 0.0 });
        let pinned: Vec<usize> = trial_fixed.iter().map(|f| best.idx(f.u, f.v, f.w)).collect();
        let free: Vec<usize> = (0..best.entries.len()).filter(|i| !pinned.contains(i)).collect();
        let start: Vec<f64> = free.iter().map(|&i| best.entries[i]).collect();
        let sub = Problem { fixed: &trial_fixed, free, ..*problem };
        let (params, _, _) = sub.levenberg_marquardt(start, cfg.tol, cfg.max_iters);
        let c = sub.assemble(&params);
        if max_abs_diff(&c.expand_dense(), problem.target) <= cfg.tol {
            best = c;
            fixed = trial_fixed;
        }
    }
    best
}

/// Multi-start damped least squares for a rho x d x (1+N) circuit whose
/// reduced expansion matches `target`. Failure is reported, not raised.
pub fn pdp_search(target: &MLPoly, cfg: &SearchConfig) -> Result<SearchReport> {
    let n = target.n();
    guard("search variables", n as u128, NUMERIC_MAX_VARS as u128)?;
    if cfg.starts == 0 {
        return Err(Error::Precondition("at least one start is needed".into()));
    }
    let mut dense = vec![0.0; 1usize << n];
    for (m, c) in target.terms() {
        dense[m.bits() as usize] = match c {
            RingElem::Rational(q) => rational_to_f64(q),
            RingElem::Gf2(b) => f64::from(u8::from(*b)),
            other => return Err(Error::NotRepresentable(other.to_string(), "f64".into())),
        };
    }
    let shape = NumericCircuit::zeros(cfg.rho, cfg.d, n)?;
    let width = n + 1;
    for f in &cfg.fixed {
        if f.u >= cfg.rho || f.v >= cfg.d || f.w >= width {
            return Err(Error::Precondition(format!("fixed entry ({},{},{}) outside the shape", f.u, f.v, f.w)));
        }
    }
    let pinned: Vec<usize> = cfg.fixed.iter().map(|f| shape.idx(f.u, f.v, f.w)).collect();
    let free: Vec<usize> = (0..shape.entries.len()).filter(|i| !pinned.contains(i)).collect();
    let problem = Problem { rho: cfg.rho, d: cfg.d, n, target: &dense, fixed: &cfg.fixed, free };

    let runs = exec::map_range(0..u64::from(cfg.starts), cfg.strategy, |k| {
        let seed = cfg.seed.wrapping_add(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start: Vec<f64> = (0..problem.free.len()).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let (params, history, iters) = problem.levenberg_marquardt(start, cfg.tol, cfg.max_iters);
        let c = problem.assemble(&params);
        let res = max_abs_diff(&c.expand_dense(), &dense);
        (res, seed, c, history, iters)
    });
    let (_, seed, best, history, iterations) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one start");
    let best = if max_abs_diff(&best.expand_dense(), &dense) <= cfg.tol {
        sparsify(&problem, best, cfg)
    } else {
        best
    };
    let circuit = if cfg.fixed.is_empty() { tidy(&best, &dense) } else { best };
    let residual = max_abs_diff(&circuit.expand_dense(), &dense);
    let verified_residual = max_abs_diff(&circuit.expand_by_terms(), &dense);
    Ok(SearchReport {
        converged: verified_residual <= cfg.tol,
        circuit,
        residual,
        verified_residual,
        seed,
        iterations,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use proptest::prelude::{prop_assert, prop_assert_eq, prop_assume, proptest};

    fn q(v: i64) -> RingElem {
        RingElem::Rational(rat(v))
    }

    fn poly(n: usize, terms: &[(u128, i64)]) -> MLPoly {
        MLPoly::from_terms(n, RingKind::Rational, terms.iter().map(|&(m, c)| (Monomial::from_bits(m), q(c)))).unwrap()
    }

    #[test]
    fn subset_product_examples() {
        let c = subset_product(&[0, 1], 2).unwrap();
        assert_eq!(c.expand(true).unwrap(), poly(2, &[(0, 1), (1, 1), (2, 1), (3, 1)]));
        assert_eq!(subset_product(&[0], 3).unwrap().expand(true).unwrap(), poly(3, &[(0, 1), (1, 1)]));
        let e = subset_product(&[0, 1, 2], 3).unwrap().expand(true).unwrap();
        assert_eq!(e.term_count(), 8);
        assert!(e.terms().all(|(_, c)| c.is_one()));
        let empty = subset_product(&[], 4).unwrap();
        assert_eq!((empty.rho(), empty.d()), (1, 1));
        assert_eq!(empty.expand(true).unwrap(), MLPoly::one(4, RingKind::Rational).unwrap());
        assert_eq!(subset_product(&[0, 1, 2], 9).unwrap().size_report(), SizeReport::new(1, 3, 9));
        assert_eq!(SizeReport::new(1, 3, 9).product, 30);
        assert!(subset_product(&[3], 3).is_err());
    }

    #[test]
    fn superset_product_examples() {
        let all = superset_product(&[], 3).unwrap().expand(true).unwrap();
        assert_eq!(all.term_count(), 8);
        let top = superset_product(&[0, 1, 2], 3).unwrap().expand(true).unwrap();
        assert_eq!(top, poly(3, &[(7, 1)]));
        let e = superset_product(&[0], 3).unwrap().expand(true).unwrap();
        assert_eq!(e.term_count(), 4);
        assert!(e.terms().all(|(m, _)| m.contains(0)));
        assert_eq!(superset_product(&[], 4).unwrap().size_report().product, 20);
    }

    #[test]
    fn trivial_circuit_shape() {
        let p = poly(2, &[(0, 1), (1, 1), (3, 1)]);
        let c = trivial_circuit(&p).unwrap();
        assert_eq!(c.size_report(), SizeReport { rho: 3, d: 2, width: 3, product: 18 });
        assert_eq!(c.expand(true).unwrap(), p);
        let x0 = poly(4, &[(1, 1)]);
        assert_eq!(trivial_circuit(&x0).unwrap().size_report(), SizeReport::new(1, 1, 4));
        assert!(trivial_circuit(&MLPoly::zero(2, RingKind::Rational).unwrap()).is_err());
    }

    #[test]
    fn raw_and_reduced_modes() {
        let mut c = SigmaPiSigma::zeros(1, 1, 1, RingKind::Rational).unwrap();
        c.set(0, 0, 0, q(3)).unwrap();
        c.set(0, 0, 1, q(1)).unwrap();
        assert_eq!(c.expand(false).unwrap(), poly(1, &[(0, 3), (1, 1)]));

        // 1 + x0 (1 + x1) as two summands
        let mut c = SigmaPiSigma::zeros(2, 2, 2, RingKind::Rational).unwrap();
        c.set(0, 0, 0, q(1)).unwrap();
        c.set(0, 1, 0, q(1)).unwrap();
        c.set(1, 0, 1, q(1)).unwrap();
        c.set(1, 1, 0, q(1)).unwrap();
        c.set(1, 1, 2, q(1)).unwrap();
        assert_eq!(c.expand(true).unwrap(), poly(2, &[(0, 1), (1, 1), (3, 1)]));
        assert_eq!(c.expand(false).unwrap(), poly(2, &[(0, 1), (1, 1), (3, 1)]));

        let sq = trivial_circuit(&poly(1, &[(1, 1)])).unwrap();
        let mut sq2 = SigmaPiSigma::zeros(1, 2, 1, RingKind::Rational).unwrap();
        sq2.set(0, 0, 1, q(1)).unwrap();
        sq2.set(0, 1, 1, q(1)).unwrap();
        assert!(matches!(sq2.expand(false), Err(Error::NonMultilinear(_))));
        assert_eq!(sq2.expand(true).unwrap(), sq.expand(true).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let c = subset_product(&[0, 2], 3).unwrap();
        assert_eq!(SigmaPiSigma::from_json(&c.to_json()).unwrap(), c);
        let nc = NumericCircuit::from_exact(&c).unwrap();
        assert_eq!(NumericCircuit::from_json(&nc.to_json()).unwrap(), nc);
    }

    #[test]
    fn search_finds_monomial_factors_exactly() {
        let target = poly(2, &[(3, 1)]);
        let rep = pdp_search(&target, &SearchConfig::new(1, 2)).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.residual, 0.0, "{:?}", rep.circuit);
        let e = rep.circuit.expand_by_terms();
        assert_eq!(e, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn search_history_is_monotone_and_deterministic() {
        let target = poly(2, &[(0, 1), (1, 1), (3, 1)]);
        let cfg = SearchConfig::new(1, 2);
        let a = pdp_search(&target, &cfg).unwrap();
        assert!(a.converged, "residual {}", a.residual);
        assert!(a.history.windows(2).all(|w| w[1] <= w[0]));
        let mut seq = cfg.clone();
        seq.strategy = Strategy::Sequential;
        let b = pdp_search(&target, &seq).unwrap();
        assert_eq!(a.circuit, b.circuit);
        assert_eq!(a.seed, b.seed);
    }

    #[test]
    fn hopeless_search_reports_failure() {
        // x0 x1 + x2 x3 is not a single product of linear forms
        let target = poly(4, &[(3, 1), (12, 1)]);
        let mut cfg = SearchConfig::new(1, 2);
        cfg.starts = 3;
        let rep = pdp_search(&target, &cfg).unwrap();
        assert!(!rep.converged);
        assert!(rep.residual > 1e-3);
    }

    proptest! {
        #[test]
        fn trivial_circuit_round_trips(terms in proptest::collection::vec((0u128..(1 << 10), -4i64..5), 1..12)) {
            let p = poly(10, &terms);
            prop_assume!(!p.is_zero());
            let c = trivial_circuit(&p).unwrap();
            prop_assert_eq!(c.expand(true).unwrap(), p);
        }

        #[test]
        fn subset_products_list_every_subset(mask in 0u128..(1 << 10)) {
            let s: Vec<usize> = Monomial::from_bits(mask).vars().collect();
            let e = subset_product(&s, 10).unwrap().expand(true).unwrap();
            prop_assert_eq!(e.term_count(), 1usize << s.len());
            for r in Monomial::from_bits(mask).subsets() {
                prop_assert!(e.coeff(r).is_one());
            }
            let sup = superset_product(&s, 10).unwrap().expand(true).unwrap();
            prop_assert_eq!(sup.term_count(), 1usize << (10 - s.len()));
        }

        #[test]
        fn numeric_expansions_agree(entries in proptest::collection::vec(-3i64..4, 2 * 3 * 4)) {
            let c = SigmaPiSigma::from_entries(2, 3, 3, RingKind::Rational, entries.iter().map(|&e| q(e)).collect()).unwrap();
            let nc = NumericCircuit::from_exact(&c).unwrap();
            prop_assert_eq!(nc.expand_dense(), nc.expand_by_terms());
            let exact = c.expand(true).unwrap();
            let dense = nc.expand_dense();
            for (s, x) in dense.iter().enumerate() {
                prop_assert_eq!(q(*x as i64), exact.coeff(Monomial::from_bits(s as u128)));
            }
        }
    }
}
