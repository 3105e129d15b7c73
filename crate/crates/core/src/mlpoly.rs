//! Sparse multilinear polynomials, i.e. elements of R[x]/(x_i^2 - x_i).
//!
//! A monomial is the set of variables it contains; multiplying two
//! monomials is set union. Terms are kept in a `BTreeMap` ordered by
//! (degree, bit pattern), and zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{RingElem, RingKind};

pub const MAX_VARS: usize = 128;

/// A set of variable indices below [`MAX_VARS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u128) -> Self {
        Monomial(bits)
    }

    pub fn var(i: usize) -> Self {
        Monomial(1u128 << i)
    }

    pub fn from_vars<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        Monomial(vars.into_iter().fold(0u128, |acc, i| acc | (1u128 << i)))
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_VARS && self.0 >> i & 1 == 1
    }

    pub fn union(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Monomial) -> bool {
        self.0 & !other.0 == 0
    }

    /// Highest variable index plus one, or 0 for the constant monomial.
    pub fn span(self) -> usize {
        MAX_VARS - self.0.leading_zeros() as usize
    }

    pub fn vars(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of this monomial, the empty one first.
    pub fn subsets(self) -> impl Iterator<Item = Monomial> {
        let full = self.0;
        let mut cur = 0u128;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Monomial(cur);
            if cur == full {
                done = true;
            } else {
                cur = (cur.wrapping_sub(full)) & full;
            }
            Some(out)
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.0).cmp(&(other.degree(), other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let names: Vec<String> = self.vars().map(|i| format!("x{i}")).collect();
        write!(f, "{}", names.join("*"))
    }
}

/// Multilinear polynomial in `n` variables over a fixed ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MLPoly {
    n: usize,
    ring: RingKind,
    terms: BTreeMap<Monomial, RingElem>,
}

fn check_arity(n: usize) -> Result<()> {
    crate::error::guard("variable count", n as u128, MAX_VARS as u128)
}

impl MLPoly {
    pub fn zero(n: usize, ring: RingKind) -> Result<Self> {
        check_arity(n)?;
        Ok(MLPoly { n, ring, terms: BTreeMap::new() })
    }

    pub fn constant(n: usize, c: RingElem) -> Result<Self> {
        let mut p = MLPoly::zero(n, c.kind())?;
        p.add_term(Monomial::ONE, c)?;
        Ok(p)
    }

    pub fn one(n: usize, ring: RingKind) -> Result<Self> {
        MLPoly::constant(n, ring.one())
    }

    pub fn var(n: usize, ring: RingKind, i: usize) -> Result<Self> {
        MLPoly::monomial(n, Monomial::var(i), ring.one())
    }

    pub fn monomial(n: usize, m: Monomial, c: RingElem) -> Result<Self> {
        let mut p = MLPoly::zero(n, c.kind())?;
        p.add_term(m, c)?;
        Ok(p)
    }

    pub fn from_terms<I>(n: usize, ring: RingKind, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, RingElem)>,
    {
        let mut p = MLPoly::zero(n, ring)?;
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial degree; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: RingElem) -> Result<()> {
        if c.kind() != self.ring {
            return Err(Error::IncompatibleRing(self.ring.to_string(), c.kind().to_string()));
        }
        if m.span() > self.n {
            return Err(Error::VariableOutOfRange { index: m.span() - 1, n: self.n });
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().checked_add(&c)?;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    fn same_space(&self, other: &MLPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        if self.ring != other.ring {
            return Err(Error::IncompatibleRing(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MLPoly) -> Result<MLPoly> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MLPoly) -> Result<MLPoly> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> MLPoly {
        MLPoly {
            n: self.n,
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn checked_mul(&self, other: &MLPoly) -> Result<MLPoly> {
        self.same_space(other)?;
        let mut out = MLPoly::zero(self.n, self.ring)?;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.union(*mb), ca.checked_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<MLPoly> {
        let mut acc = MLPoly::one(self.n, self.ring)?;
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &RingElem) -> Result<MLPoly> {
        let mut out = MLPoly::zero(self.n, self.ring)?;
        for (m, a) in &self.terms {
            out.add_term(*m, a.checked_mul(c)?)?;
        }
        Ok(out)
    }

    /// Coefficient of `x^T`.
    pub fn coeff(&self, t: Monomial) -> RingElem {
        self.terms.get(&t).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// The mixed partial derivative in the variables of `t`, evaluated at
    /// the origin. For a multilinear polynomial this is the coefficient of `x^T`.
    pub fn diff_extract(&self, t: Monomial) -> Result<RingElem> {
        if t.span() > self.n {
            return Err(Error::VariableOutOfRange { index: t.span() - 1, n: self.n });
        }
        Ok(self.coeff(t))
    }

    /// Multiplies the coefficient of `x^T` by `mu * prod_{i in T} u_i`.
    pub fn scale_vars(&self, u: &[RingElem], mu: &RingElem) -> Result<MLPoly> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: u.len() });
        }
        let mut out = MLPoly::zero(self.n, self.ring)?;
        for (m, c) in &self.terms {
            let mut s = c.checked_mul(mu)?;
            for i in m.vars() {
                s = s.checked_mul(&u[i])?;
            }
            out.add_term(*m, s)?;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[RingElem]) -> Result<RingElem> {
        if point.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: point.len() });
        }
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in m.vars() {
                t = t.checked_mul(&point[i])?;
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Evaluation at the 0/1 point whose set bits are `x`.
    pub fn evaluate_at_set(&self, x: Monomial) -> RingElem {
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            if m.is_subset_of(x) {
                acc = acc.checked_add(c).expect("single ring");
            }
        }
        acc
    }

    /// Maps every coefficient through `f`, landing in `ring`.
    pub fn map_coeffs<F>(&self, ring: RingKind, f: F) -> Result<MLPoly>
    where
        F: Fn(&RingElem) -> Result<RingElem>,
    {
        MLPoly::from_terms(
            self.n,
            ring,
            self.terms
                .iter()
                .map(|(m, c)| Ok((*m, f(c)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Image of a rational polynomial in another ring.
    pub fn change_ring(&self, ring: RingKind) -> Result<MLPoly> {
        if ring == self.ring {
            return Ok(self.clone());
        }
        self.map_coeffs(ring, |c| match c {
            RingElem::Rational(q) => ring.from_rational(q),
            RingElem::Gf2(b) => Ok(ring.from_i64(i64::from(*b))),
            other => Err(Error::NotRepresentable(other.to_string(), ring.to_string())),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "ring": self.ring.to_json(),
            "terms": self.terms.iter().map(|(m, c)| json!({
                "vars": m.vars().collect::<Vec<_>>(),
                "coeff": c.to_json(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<MLPoly> {
        let bad = |what: &str| Error::Parse(format!("polynomial JSON: {what}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
        let ring = match v.get("ring") {
            Some(r) => RingKind::from_json(r)?,
            None => RingKind::Rational,
        };
        let mut p = MLPoly::zero(n, ring)?;
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let vars = t
                .get("vars")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without vars"))?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| bad("bad variable")))
                .collect::<Result<Vec<_>>>()?;
            if let Some(&i) = vars.iter().find(|&&i| i >= n) {
                return Err(Error::VariableOutOfRange { index: i, n });
            }
            let c = RingElem::from_json(ring, t.get("coeff").ok_or_else(|| bad("term without coeff"))?)?;
            p.add_term(Monomial::from_vars(vars), c)?;
        }
        Ok(p)
    }
}

impl fmt::Display for MLPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| match (m.degree(), c.is_one()) {
                (0, _) => format!("{c}"),
                (_, true) => format!("{m}"),
                _ => format!("({c})*{m}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Ordinary polynomial with explicit exponent vectors. Used only as a
/// staging area before reduction modulo `x_i^2 - x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralPoly {
    n: usize,
    ring: RingKind,
    terms: BTreeMap<Vec<u32>, RingElem>,
}

/// Cap on the number of stored terms in a [`GeneralPoly`].
pub const GENERAL_TERM_LIMIT: usize = 1 << 20;

impl GeneralPoly {
    pub fn zero(n: usize, ring: RingKind) -> Self {
        GeneralPoly { n, ring, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: RingElem) -> Self {
        let mut p = GeneralPoly::zero(n, c.kind());
        p.add_term(vec![0; n], c).expect("constant term");
        p
    }

    pub fn var(n: usize, ring: RingKind, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut p = GeneralPoly::zero(n, ring);
        p.add_term(e, ring.one()).expect("variable term");
        p
    }

    /// `c0 + sum_i c_i x_i`.
    pub fn linear(c0: RingElem, coeffs: &[RingElem]) -> Result<Self> {
        let n = coeffs.len();
        let mut p = GeneralPoly::constant(n, c0);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone())?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RingElem)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: RingElem) -> Result<()> {
        if e.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: e.len() });
        }
        if c.kind() != self.ring {
            return Err(Error::IncompatibleRing(self.ring.to_string(), c.kind().to_string()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let s = match self.terms.get(&e) {
            Some(old) => old.checked_add(&c)?,
            None => c,
        };
        if s.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, s);
        }
        crate::error::guard("general polynomial terms", self.terms.len() as u128, GENERAL_TERM_LIMIT as u128)
    }

    pub fn checked_add(&self, other: &GeneralPoly) -> Result<GeneralPoly> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &GeneralPoly) -> Result<GeneralPoly> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg())?;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &GeneralPoly) -> Result<GeneralPoly> {
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        let mut out = GeneralPoly::zero(self.n, self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.checked_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<GeneralPoly> {
        let mut acc = GeneralPoly::constant(self.n, self.ring.one());
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &RingElem) -> Result<GeneralPoly> {
        let mut out = GeneralPoly::zero(self.n, self.ring);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.checked_mul(c)?)?;
        }
        Ok(out)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x <= 1))
    }

    /// Reduction modulo `x_i^2 - x_i`: every positive exponent becomes 1.
    pub fn reduce_multilinear(&self) -> Result<MLPoly> {
        let mut out = MLPoly::zero(self.n, self.ring)?;
        for (e, c) in &self.terms {
            let m = Monomial::from_vars(e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i));
            out.add_term(m, c.clone())?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use proptest::prelude::*;

    fn q(v: i64) -> RingElem {
        RingElem::Rational(rat(v))
    }

    /// Coefficient of `x^T` by Mobius inversion of the values on the cube.
    fn mobius_coeff(p: &MLPoly, t: Monomial) -> RingElem {
        let mut acc = p.ring().zero();
        for r in t.subsets() {
            let v = p.evaluate_at_set(r);
            let v = if (t.degree() - r.degree()) % 2 == 1 { v.neg() } else { v };
            acc = acc.checked_add(&v).unwrap();
        }
        acc
    }

    fn arb_poly(n: usize) -> impl proptest::strategy::Strategy<Value = MLPoly> {
        proptest::collection::vec((0u128..(1 << n), -3i64..4), 0..8).prop_map(move |ts| {
            MLPoly::from_terms(n, RingKind::Rational, ts.into_iter().map(|(m, c)| (Monomial(m), q(c)))).unwrap()
        })
    }

    #[test]
    fn monomial_order_is_degree_then_bits() {
        let mut ms = vec![Monomial(0b100), Monomial(0b011), Monomial(0), Monomial(0b001)];
        ms.sort();
        assert_eq!(ms, vec![Monomial(0), Monomial(0b001), Monomial(0b100), Monomial(0b011)]);
    }

    #[test]
    fn subsets_enumerates_the_power_set() {
        let subs: Vec<u128> = Monomial(0b1010).subsets().map(|m| m.0).collect();
        assert_eq!(subs, vec![0, 0b0010, 0b1000, 0b1010]);
        assert_eq!(Monomial::ONE.subsets().count(), 1);
    }

    #[test]
    fn squares_collapse() {
        let x0 = MLPoly::var(2, RingKind::Rational, 0).unwrap();
        assert_eq!(x0.checked_mul(&x0).unwrap(), x0);
        let g = GeneralPoly::var(2, RingKind::Rational, 0);
        let sq = g.checked_mul(&g).unwrap();
        assert!(!sq.is_multilinear());
        assert_eq!(sq.reduce_multilinear().unwrap(), x0);
    }

    #[test]
    fn no_zero_coefficients_are_stored() {
        let x0 = MLPoly::var(1, RingKind::Rational, 0).unwrap();
        let z = x0.checked_sub(&x0).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.term_count(), 0);
    }

    #[test]
    fn ring_mismatch_and_range_errors() {
        let a = MLPoly::var(2, RingKind::Rational, 0).unwrap();
        let b = MLPoly::var(2, RingKind::Gf2, 0).unwrap();
        assert!(a.checked_add(&b).is_err());
        assert!(MLPoly::var(2, RingKind::Rational, 5).is_err());
        assert!(a.diff_extract(Monomial::var(3)).is_err());
        assert!(MLPoly::zero(MAX_VARS + 1, RingKind::Gf2).is_err());
    }

    #[test]
    fn scale_vars_multiplies_by_unit_products() {
        let p = MLPoly::from_terms(
            2,
            RingKind::Rational,
            [(Monomial(0), q(1)), (Monomial(1), q(1)), (Monomial(3), q(1))],
        )
        .unwrap();
        let s = p.scale_vars(&[q(-1), q(-1)], &q(1)).unwrap();
        assert_eq!(s.coeff(Monomial(1)), q(-1));
        assert_eq!(s.coeff(Monomial(3)), q(1));
        assert!(s.scale_vars(&[q(1)], &q(1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = MLPoly::from_terms(3, RingKind::Rational, [(Monomial(5), q(-2)), (Monomial(0), q(7))]).unwrap();
        assert_eq!(MLPoly::from_json(&p.to_json()).unwrap(), p);
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(4), b in arb_poly(4), c in arb_poly(4)) {
            prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
            prop_assert_eq!(
                a.checked_mul(&b).unwrap().checked_mul(&c).unwrap(),
                a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.checked_mul(&b.checked_add(&c).unwrap()).unwrap(),
                a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn extraction_matches_mobius_oracle(p in arb_poly(5), t in 0u128..32) {
            prop_assert_eq!(p.diff_extract(Monomial(t)).unwrap(), mobius_coeff(&p, Monomial(t)));
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(3), b in arb_poly(3), x in 0u128..8) {
            let x = Monomial(x);
            let prod = a.checked_mul(&b).unwrap().evaluate_at_set(x);
            prop_assert_eq!(prod, a.evaluate_at_set(x).checked_mul(&b.evaluate_at_set(x)).unwrap());
            let point: Vec<RingElem> = (0..3).map(|i| q(i64::from(x.contains(i)))).collect();
            prop_assert_eq!(a.evaluate(&point).unwrap(), a.evaluate_at_set(x));
        }

        #[test]
        fn reduction_commutes_with_product(
            a in proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -3i64..4), 0..5),
            b in proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -3i64..4), 0..5),
        ) {
            let mk = |ts: Vec<(Vec<u32>, i64)>| {
                let mut p = GeneralPoly::zero(3, RingKind::Rational);
                for (e, c) in ts { p.add_term(e, q(c)).unwrap(); }
                p
            };
            let (a, b) = (mk(a), mk(b));
            let lhs = a.checked_mul(&b).unwrap().reduce_multilinear().unwrap();
            let rhs = a.reduce_multilinear().unwrap().checked_mul(&b.reduce_multilinear().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
