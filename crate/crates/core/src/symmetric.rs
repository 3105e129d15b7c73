//! Symmetric polynomials on the cube. Modulo `x_i^2 - x_i` every power sum
//! collapses to `l = sum_i x_i`, so a symmetric multilinear polynomial is a
//! univariate polynomial in `l`; [`UnivariateInL`] stores it in the basis
//! `C(l, t)`, whose reduction is exactly `e_t`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::boolean::{Canonical, Reducible};
use crate::circuit::SizeReport;
use crate::error::{guard, Error, Result};
use crate::mlpoly::{GeneralPoly, MLPoly, Monomial};
use crate::ring::{rat, rational_to_f64, Rational, RingElem, RingKind};

/// Bit patterns of all `t`-subsets of `0..n`, in increasing numeric order.
pub fn k_subsets(n: usize, t: usize) -> impl Iterator<Item = u128> {
    let limit = if n >= 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut cur = if t == 0 {
        Some(0u128)
    } else if t <= n {
        Some((1u128 << t) - 1)
    } else {
        None
    };
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == 0 {
            None
        } else {
            // Gosper's hack
            let c = out & out.wrapping_neg();
            let r = out.checked_add(c);
            r.and_then(|r| {
                let next = (((r ^ out) >> 2) / c) | r;
                (next <= limit && next != 0).then_some(next)
            })
        };
        Some(out)
    })
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// `e_t(x_0, ..., x_{N-1})` with unit coefficients.
pub fn elementary_symmetric(n: usize, t: usize) -> Result<MLPoly> {
    if t > n {
        return Err(Error::Precondition(format!("e_{t} needs t <= N = {n}")));
    }
    guard("e_t term count", binomial(n as u64, t as u64), 1 << 22)?;
    let ring = RingKind::Rational;
    MLPoly::from_terms(n, ring, k_subsets(n, t).map(|m| (Monomial::from_bits(m), ring.one())))
}

/// `p_t = sum_i x_i^t` with exponents kept.
pub fn power_sum(n: usize, t: u32) -> GeneralPoly {
    let ring = RingKind::Rational;
    let mut p = GeneralPoly::zero(n, ring);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = t;
        p.add_term(e, ring.one()).expect("within limits");
    }
    p
}

/// One term of Newton's expression of `e_t`: `coeff * prod_i p_i^{m_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonTerm {
    /// `multiplicities[i - 1] = m_i`.
    pub multiplicities: Vec<u32>,
    pub coeff: Rational,
}

fn partitions(t: usize) -> Vec<Vec<u32>> {
    fn go(rest: usize, part: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if part == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=rest / part {
            cur[part - 1] = m as u32;
            go(rest - m * part, part - 1, cur, out);
        }
        cur[part - 1] = 0;
    }
    let mut out = Vec::new();
    go(t, t, &mut vec![0; t], &mut out);
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `e_t = (-1)^t sum prod_i (-p_i)^{m_i} / (m_i! i^{m_i})` over partitions of `t`.
pub fn newton_e_from_p(t: usize) -> Vec<NewtonTerm> {
    partitions(t)
        .into_iter()
        .map(|ms| {
            let parts: u32 = ms.iter().sum();
            let mut denom = BigInt::one();
            for (i, &m) in ms.iter().enumerate() {
                denom *= factorial(m) * BigInt::from(i + 1).pow(m);
            }
            let sign = if (t as u32 + parts).is_multiple_of(2) { 1 } else { -1 };
            NewtonTerm { multiplicities: ms, coeff: Rational::new(BigInt::from(sign), denom) }
        })
        .collect()
}

/// Substitutes true power sums in `n` variables into a Newton expression.
pub fn newton_substitute(terms: &[NewtonTerm], n: usize) -> Result<GeneralPoly> {
    let ring = RingKind::Rational;
    let mut total = GeneralPoly::zero(n, ring);
    for term in terms {
        let mut prod = GeneralPoly::constant(n, RingElem::Rational(term.coeff.clone()));
        for (i, &m) in term.multiplicities.iter().enumerate() {
            if m > 0 {
                prod = prod.checked_mul(&power_sum(n, i as u32 + 1).pow(m)?)?;
            }
        }
        total = total.checked_add(&prod)?;
    }
    Ok(total)
}

/// Monomial-basis coefficients of `C(l, t) = prod_{j<t} (l - j) / t!`.
pub fn binomial_in_monomials(t: usize) -> Vec<Rational> {
    let mut c = vec![Rational::one()];
    for j in 0..t {
        let mut next = vec![Rational::zero(); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * rat(j as i64);
        }
        c = next;
    }
    let f = Rational::from_integer(factorial(t as u32));
    c.into_iter().map(|a| a / &f).collect()
}

/// A polynomial in `l = sum_i x_i` stored as `sum_t a_t C(l, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateInL {
    n: usize,
    binomial: Vec<Rational>,
}

impl UnivariateInL {
    pub fn new(n: usize, mut binomial: Vec<Rational>) -> Result<Self> {
        while binomial.last().is_some_and(Zero::is_zero) {
            binomial.pop();
        }
        if binomial.len() > n + 1 {
            return Err(Error::Precondition(format!("degree {} exceeds N = {n}", binomial.len() - 1)));
        }
        Ok(UnivariateInL { n, binomial })
    }

    /// Converts `sum_k c_k l^k` into the binomial basis.
    pub fn from_monomial_basis(n: usize, monomial: &[Rational]) -> Result<Self> {
        let mut rest: Vec<Rational> = monomial.to_vec();
        let mut a = vec![Rational::zero(); rest.len()];
        for t in (0..rest.len()).rev() {
            if rest[t].is_zero() {
                continue;
            }
            let basis = binomial_in_monomials(t);
            let scale = &rest[t] / &basis[t];
            for (k, b) in basis.iter().enumerate() {
                rest[k] -= &scale * b;
            }
            a[t] = scale;
        }
        UnivariateInL::new(n, a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn binomial(&self) -> &[Rational] {
        &self.binomial
    }

    pub fn degree(&self) -> usize {
        self.binomial.len().saturating_sub(1)
    }

    /// `a_t`, the coefficient carried by every size-`t` monomial.
    pub fn coeff_for_size(&self, t: usize) -> Rational {
        self.binomial.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monomial_basis(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.binomial.len()];
        for (t, a) in self.binomial.iter().enumerate() {
            for (k, b) in binomial_in_monomials(t).iter().enumerate() {
                out[k] += a * b;
            }
        }
        out
    }

    /// `sum_t a_t e_t(x)`.
    pub fn to_mlpoly(&self) -> Result<MLPoly> {
        let mut total = MLPoly::zero(self.n, RingKind::Rational)?;
        for (t, a) in self.binomial.iter().enumerate() {
            if !a.is_zero() {
                let e = elementary_symmetric(self.n, t)?;
                total = total.checked_add(&e.scale(&RingElem::Rational(a.clone()))?)?;
            }
        }
        Ok(total)
    }

    /// Expands `sum_k c_k l^k` by repeated reduced multiplication.
    pub fn expand_via_l(&self) -> Result<MLPoly> {
        let ring = RingKind::Rational;
        let n = self.n;
        let l = MLPoly::from_terms(n, ring, (0..n).map(|i| (Monomial::var(i), ring.one())))?;
        let mut power = MLPoly::one(n, ring)?;
        let mut total = MLPoly::zero(n, ring)?;
        for c in self.monomial_basis() {
            if !c.is_zero() {
                total = total.checked_add(&power.scale(&RingElem::Rational(c))?)?;
            }
            power = power.checked_mul(&l)?;
        }
        Ok(total)
    }

    /// Shape of the single-product circuit `c * prod_j (l - r_j)`.
    pub fn size_report(&self) -> SizeReport {
        SizeReport::new(1, self.degree().max(1), self.n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "degree": self.degree(),
            "binomial": self.binomial.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "monomial": self.monomial_basis().iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

impl Reducible for UnivariateInL {
    fn reduce(&self) -> Result<Canonical> {
        Ok(Canonical::BySize {
            n: self.n,
            coeffs: (0..=self.n).map(|t| RingElem::Rational(self.coeff_for_size(t))).collect(),
        })
    }
}

/// The reduced form of `e_t` as a polynomial in `l`.
pub fn e_to_binomial(n: usize, t: usize) -> Result<UnivariateInL> {
    let mut a = vec![Rational::zero(); t + 1];
    a[t] = Rational::one();
    UnivariateInL::new(n, a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardinalityKind {
    AtMost,
    AtLeast,
    Exactly,
}

impl FromStr for CardinalityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "le" => Ok(CardinalityKind::AtMost),
            "ge" => Ok(CardinalityKind::AtLeast),
            "eq" => Ok(CardinalityKind::Exactly),
            _ => Err(Error::Parse(format!("cardinality kind must be le, ge or eq, got {s:?}"))),
        }
    }
}

impl fmt::Display for CardinalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CardinalityKind::AtMost => "le",
            CardinalityKind::AtLeast => "ge",
            CardinalityKind::Exactly => "eq",
        })
    }
}

impl CardinalityKind {
    pub fn holds(self, size: usize, s: usize) -> bool {
        match self {
            CardinalityKind::AtMost => size <= s,
            CardinalityKind::AtLeast => size >= s,
            CardinalityKind::Exactly => size == s,
        }
    }
}

/// Encoding of `|T| <= s`, `|T| >= s` or `|T| = s` over `N` inputs.
pub fn cardinality_pdp(kind: CardinalityKind, s: usize, n: usize) -> Result<UnivariateInL> {
    if s > n {
        return Err(Error::Precondition(format!("threshold {s} exceeds N = {n}")));
    }
    let a = (0..=n).map(|t| if kind.holds(t, s) { Rational::one() } else { Rational::zero() }).collect();
    UnivariateInL::new(n, a)
}

pub fn pdp_evaluate_cardinality(q: &UnivariateInL, t: Monomial) -> Result<bool> {
    q.reduce()?.evaluate(t, 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    /// Leading monomial-basis coefficient.
    pub leading: f64,
    /// Roots in `l`, sorted by (real, imaginary).
    pub roots: Vec<Complex64>,
    /// Largest scaled residual `|q(r)| / sum_k |c_k| max(1, |r|)^k`.
    pub max_residual: f64,
}

impl RootReport {
    pub fn to_json(&self) -> Value {
        json!({
            "leading": self.leading,
            "roots": self.roots.iter().map(|r| json!([r.re, r.im])).collect::<Vec<_>>(),
            "max_residual": self.max_residual,
        })
    }
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for &a in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

/// Numeric roots of `q` in `l` from companion-matrix eigenvalues, polished by Newton steps.
pub fn factor_roots(q: &UnivariateInL, tol: f64) -> Result<RootReport> {
    let c: Vec<f64> = q.monomial_basis().iter().map(rational_to_f64).collect();
    let deg = q.degree();
    if c.is_empty() {
        return Err(Error::Precondition("the zero polynomial has no root factorisation".into()));
    }
    let leading = c[deg];
    if deg == 0 {
        return Ok(RootReport { leading, roots: Vec::new(), max_residual: 0.0 });
    }
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / leading;
    }
    let mut roots: Vec<Complex64> = comp.complex_eigenvalues().iter().copied().collect();
    let scaled = |z: Complex64| {
        let (v, _) = horner(&c, z);
        let norm: f64 = c.iter().enumerate().map(|(k, a)| a.abs() * z.norm().max(1.0).powi(k as i32)).sum();
        v.norm() / norm.max(f64::MIN_POSITIVE)
    };
    for r in &mut roots {
        for _ in 0..50 {
            let (v, dv) = horner(&c, *r);
            if dv.norm() == 0.0 {
                break;
            }
            let next = *r - v / dv;
            if scaled(next) > scaled(*r) {
                break;
            }
            *r = next;
        }
        if r.im.abs() <= tol {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let max_residual = roots.iter().map(|&r| scaled(r)).fold(0.0, f64::max);
    if max_residual > tol {
        return Err(Error::NoConvergence(max_residual));
    }
    Ok(RootReport { leading, roots, max_residual })
}

/// Monomial coefficients of `leading * prod (l - r)`.
pub fn reconstruct_from_roots(report: &RootReport) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(report.leading, 0.0)];
    for &r in &report.roots {
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

/// True when every coefficient of `p` depends only on the size of its monomial.
pub fn fit_binomial(p: &MLPoly) -> Option<UnivariateInL> {
    let n = p.n();
    let mut a: Vec<Option<RingElem>> = vec![None; n + 1];
    for (m, c) in p.terms() {
        match &a[m.degree()] {
            Some(prev) if prev != c => return None,
            _ => a[m.degree()] = Some(c.clone()),
        }
    }
    let coeffs: Vec<Rational> = a
        .into_iter()
        .map(|c| c.and_then(|c| c.as_rational().cloned()).unwrap_or_else(Rational::zero))
        .collect();
    for (t, c) in coeffs.iter().enumerate() {
        if !c.is_zero() && binomial(n as u64, t as u64) != p.terms().filter(|(m, _)| m.degree() == t).count() as u128 {
            return None;
        }
    }
    UnivariateInL::new(n, coeffs).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{verify_pde, TruthTable};
    use crate::exec::Strategy;
    use crate::ring::ratio;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    #[test]
    fn k_subsets_counts() {
        for n in 0..9 {
            for t in 0..=n {
                let v: Vec<u128> = k_subsets(n, t).collect();
                assert_eq!(v.len() as u128, binomial(n as u64, t as u64), "n={n} t={t}");
                assert!(v.iter().all(|m| m.count_ones() as usize == t && *m < 1 << n));
                assert!(v.windows(2).all(|w| w[0] < w[1]));
            }
            assert_eq!(k_subsets(n, n + 1).count(), 0);
        }
    }

    #[test]
    fn elementary_examples() {
        let e = elementary_symmetric(3, 2).unwrap();
        assert_eq!(e.term_count(), 3);
        assert!(e.coeff(Monomial::from_bits(0b011)).is_one());
        assert!(e.coeff(Monomial::from_bits(0b110)).is_one());
        assert_eq!(elementary_symmetric(4, 0).unwrap(), MLPoly::one(4, RingKind::Rational).unwrap());
        assert_eq!(elementary_symmetric(4, 4).unwrap().term_count(), 1);
        assert!(elementary_symmetric(3, 4).is_err());
    }

    #[test]
    fn newton_small_cases() {
        let e1 = newton_e_from_p(1);
        assert_eq!(e1, vec![NewtonTerm { multiplicities: vec![1], coeff: rat(1) }]);
        let e2 = newton_e_from_p(2);
        assert!(e2.contains(&NewtonTerm { multiplicities: vec![2, 0], coeff: ratio(1, 2) }));
        assert!(e2.contains(&NewtonTerm { multiplicities: vec![0, 1], coeff: ratio(-1, 2) }));
        let e3 = newton_e_from_p(3);
        assert_eq!(e3.len(), 3);
        assert!(e3.contains(&NewtonTerm { multiplicities: vec![3, 0, 0], coeff: ratio(1, 6) }));
        assert!(e3.contains(&NewtonTerm { multiplicities: vec![1, 1, 0], coeff: ratio(-1, 2) }));
        assert!(e3.contains(&NewtonTerm { multiplicities: vec![0, 0, 1], coeff: ratio(1, 3) }));
    }

    #[test]
    fn newton_substitution_reproduces_e_t() {
        for n in 1..=6 {
            for t in 1..=n {
                let g = newton_substitute(&newton_e_from_p(t), n).unwrap();
                assert!(g.is_multilinear(), "n={n} t={t}");
                assert_eq!(g.reduce_multilinear().unwrap(), elementary_symmetric(n, t).unwrap());
            }
        }
    }

    #[test]
    fn newton_with_collapsed_power_sums_is_the_binomial() {
        for t in 1..=7 {
            let mut c = vec![Rational::zero(); t + 1];
            for term in newton_e_from_p(t) {
                let k: u32 = term.multiplicities.iter().sum();
                c[k as usize] += term.coeff;
            }
            assert_eq!(c, binomial_in_monomials(t), "t={t}");
        }
    }

    #[test]
    fn e_to_binomial_examples() {
        let q = e_to_binomial(3, 2).unwrap();
        assert_eq!(q.monomial_basis(), vec![rat(0), ratio(-1, 2), ratio(1, 2)]);
        assert_eq!(q.expand_via_l().unwrap(), elementary_symmetric(3, 2).unwrap());
        assert_eq!(e_to_binomial(3, 1).unwrap().monomial_basis(), vec![rat(0), rat(1)]);
        assert_eq!(e_to_binomial(3, 0).unwrap().monomial_basis(), vec![rat(1)]);
    }

    #[test]
    fn cardinality_examples() {
        let le1 = cardinality_pdp(CardinalityKind::AtMost, 1, 4).unwrap();
        assert_eq!(le1.monomial_basis(), vec![rat(1), rat(1)]);
        assert!(pdp_evaluate_cardinality(&le1, Monomial::ONE).unwrap());
        assert!(!pdp_evaluate_cardinality(&le1, Monomial::from_bits(0b11)).unwrap());
        let ge1 = cardinality_pdp(CardinalityKind::AtLeast, 1, 4).unwrap();
        assert_eq!(ge1.binomial(), &[rat(0), rat(1), rat(1), rat(1), rat(1)]);
        let all = crate::circuit::superset_product(&[], 4).unwrap().expand(true).unwrap();
        let one = MLPoly::one(4, RingKind::Rational).unwrap();
        assert_eq!(ge1.to_mlpoly().unwrap(), all.checked_sub(&one).unwrap());
        let le3 = cardinality_pdp(CardinalityKind::AtMost, 3, 4).unwrap();
        let top = elementary_symmetric(4, 4).unwrap();
        assert_eq!(le3.to_mlpoly().unwrap(), all.checked_sub(&top).unwrap());
        let le2 = cardinality_pdp(CardinalityKind::AtMost, 2, 5).unwrap();
        assert!(pdp_evaluate_cardinality(&le2, Monomial::from_bits(0b101)).unwrap());
        assert!(!pdp_evaluate_cardinality(&le2, Monomial::from_bits(0b10101)).unwrap());
        let eq0 = cardinality_pdp(CardinalityKind::Exactly, 0, 3).unwrap();
        assert!(pdp_evaluate_cardinality(&eq0, Monomial::ONE).unwrap());
        assert_eq!(eq0.size_report().d, 1);
        assert_eq!(cardinality_pdp(CardinalityKind::AtLeast, 1, 9).unwrap().degree(), 9);
        let bad = UnivariateInL::new(3, vec![rat(2)]).unwrap();
        assert!(pdp_evaluate_cardinality(&bad, Monomial::ONE).is_err());
    }

    #[test]
    fn roots_of_binomials() {
        let r2 = factor_roots(&cardinality_pdp(CardinalityKind::Exactly, 2, 5).unwrap(), 1e-9).unwrap();
        assert_eq!(r2.roots.len(), 2);
        assert!((r2.roots[0] - Complex64::new(0.0, 0.0)).norm() < 1e-9);
        assert!((r2.roots[1] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        let r3 = factor_roots(&cardinality_pdp(CardinalityKind::Exactly, 3, 5).unwrap(), 1e-9).unwrap();
        for (r, want) in r3.roots.iter().zip([0.0, 1.0, 2.0]) {
            assert!((r - Complex64::new(want, 0.0)).norm() < 1e-9);
        }
        let le = factor_roots(&cardinality_pdp(CardinalityKind::AtMost, 2, 4).unwrap(), 1e-9).unwrap();
        assert_eq!(le.roots.len(), 2);
        assert!(le.max_residual < 1e-9);
        assert!((le.roots[0] - Complex64::new(-0.5, -(7f64).sqrt() / 2.0)).norm() < 1e-9);
    }

    #[test]
    fn roots_rebuild_the_polynomial() {
        for n in 1..=9 {
            for s in 0..=n {
                for kind in [CardinalityKind::AtMost, CardinalityKind::AtLeast, CardinalityKind::Exactly] {
                    let q = cardinality_pdp(kind, s, n).unwrap();
                    let rep = factor_roots(&q, 1e-9).unwrap();
                    assert_eq!(rep.roots.len(), q.degree());
                    let rebuilt = reconstruct_from_roots(&rep);
                    let mono: Vec<f64> = q.monomial_basis().iter().map(rational_to_f64).collect();
                    let scale = mono.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    for (a, b) in rebuilt.iter().zip(&mono) {
                        assert!((a - b).norm() <= 1e-8 * scale, "{kind} s={s} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn consistency_square() {
        for n in 0..=8 {
            for t in 0..=n {
                let q = e_to_binomial(n, t).unwrap();
                assert_eq!(q.expand_via_l().unwrap(), elementary_symmetric(n, t).unwrap(), "n={n} t={t}");
            }
            for kind in [CardinalityKind::AtMost, CardinalityKind::AtLeast, CardinalityKind::Exactly] {
                let q = cardinality_pdp(kind, n / 2, n).unwrap();
                assert_eq!(q.expand_via_l().unwrap(), q.to_mlpoly().unwrap());
                assert_eq!(fit_binomial(&q.to_mlpoly().unwrap()), Some(q));
            }
        }
    }

    #[test]
    fn cardinality_matches_threshold_tables() {
        for n in 0..=12 {
            for s in 0..=n {
                for kind in [CardinalityKind::AtMost, CardinalityKind::AtLeast, CardinalityKind::Exactly] {
                    let q = cardinality_pdp(kind, s, n).unwrap();
                    let t = TruthTable::from_fn(n, |b| kind.holds(b.count_ones() as usize, s)).unwrap();
                    assert!(verify_pde(&q, &t, 1, Strategy::default()).unwrap().passed());
                    if n <= 8 {
                        assert!(verify_pde(&q.to_mlpoly().unwrap(), &t, 1, Strategy::default()).unwrap().passed());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn basis_change_round_trips(a in proptest::collection::vec(-20i64..20, 0..8)) {
            let q = UnivariateInL::new(8, a.into_iter().map(rat).collect()).unwrap();
            let back = UnivariateInL::from_monomial_basis(8, &q.monomial_basis()).unwrap();
            prop_assert_eq!(&back, &q);
            let p = q.to_mlpoly().unwrap();
            for (m, c) in p.terms() {
                prop_assert_eq!(c.as_rational().unwrap(), &q.coeff_for_size(m.degree()));
            }
            prop_assert!(fit_binomial(&p).is_some());
        }
    }
}
