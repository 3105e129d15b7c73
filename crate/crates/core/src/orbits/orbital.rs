//! Literal symbolic checks of the orbital-vector identities.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{GraphSet, InducedGroup, VertexPermutation};
use crate::error::{guard, Result};
use crate::exec::{self, Strategy};
use crate::mlpoly::{MLPoly, Monomial};
use crate::ring::{Rational, RingKind};
use crate::symmetric::{binomial, fit_binomial, k_subsets};

/// Variables of the orbital expansion: `Z[j, lex(σ)]` before rewriting,
/// `Y[j, lex(R)]` after.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Sym {
    Z { j: u8, perm: u16 },
    Y { j: u8, set: u16 },
}

type SymMono = BTreeMap<Sym, u64>;
type SymPoly = BTreeMap<SymMono, BigInt>;

fn mono_mul(a: &SymMono, b: &SymMono) -> SymMono {
    let mut out = a.clone();
    for (v, e) in b {
        *out.entry(*v).or_default() += e;
    }
    out
}

fn poly_mul(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let mut out = SymPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_term(&mut out, mono_mul(ma, mb), ca * cb);
        }
    }
    out
}

fn add_term(p: &mut SymPoly, m: SymMono, c: BigInt) {
    let slot = p.entry(m.clone()).or_default();
    *slot += c;
    if slot.is_zero() {
        p.remove(&m);
    }
}

/// Replaces each block `prod_{j in R} Z[j, σ]` by `prod_{j in R} Y[j, R]`,
/// visiting sets `R` by size in the given order. `None` if some `Z` survives.
fn rewrite(p: &SymPoly, nvars: usize, perms: usize, descending: bool) -> Option<SymPoly> {
    let sizes: Vec<usize> = if descending { (1..=nvars).rev().collect() } else { (1..=nvars).collect() };
    let mut out = SymPoly::new();
    for (m, c) in p {
        let mut m = m.clone();
        for &t in &sizes {
            for r in k_subsets(nvars, t) {
                let members: Vec<u8> = Monomial::from_bits(r).vars().map(|j| j as u8).collect();
                for perm in 0..perms as u16 {
                    let e = members
                        .iter()
                        .map(|&j| m.get(&Sym::Z { j, perm }).copied().unwrap_or(0))
                        .min()
                        .unwrap_or(0);
                    if e == 0 {
                        continue;
                    }
                    for &j in &members {
                        let z = Sym::Z { j, perm };
                        let left = m[&z] - e;
                        if left == 0 {
                            m.remove(&z);
                        } else {
                            m.insert(z, left);
                        }
                        *m.entry(Sym::Y { j, set: r as u16 }).or_default() += e;
                    }
                }
            }
        }
        if m.keys().any(|v| matches!(v, Sym::Z { .. })) {
            return None;
        }
        add_term(&mut out, m, c.clone());
    }
    Some(out)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentRow {
    pub t: usize,
    pub expected: u64,
    pub observed: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop3Report {
    pub nvars: usize,
    pub s: Vec<usize>,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub equal: bool,
    pub exponents: Vec<ExponentRow>,
    /// Whether rewriting smallest sets first would also have matched.
    pub ascending_equal: bool,
}

impl Prop3Report {
    pub fn to_json(&self) -> Value {
        json!({
            "nvars": self.nvars,
            "s": self.s,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "equal": self.equal,
            "exponents": self.exponents.iter().map(|r| json!({
                "t": r.t, "expected": r.expected, "observed": r.observed,
            })).collect::<Vec<_>>(),
            "ascending_equal": self.ascending_equal,
        })
    }
}

/// Expands `prod_{i in S} (1 + O_Z[i])` with `O_Z[i] = prod_σ Z[σ(i), lex(σ)]`,
/// rewrites it into `Y` blocks largest sets first, and compares with
/// `sum_t C(|S|,t) prod_{|R|=t} (prod_{j in R} Y[j, R])^((N-t)! t!)`.
pub fn prop3_literal_verify(nvars: usize, s: Monomial) -> Result<Prop3Report> {
    guard("variables for literal orbital expansion", nvars as u128, 4)?;
    if s.span() > nvars {
        return Err(crate::Error::VariableOutOfRange { index: s.span() - 1, n: nvars });
    }
    let perms = VertexPermutation::all(nvars);
    let one: SymPoly = [(SymMono::new(), BigInt::one())].into_iter().collect();

    let mut lhs = one.clone();
    for i in s.vars() {
        let orbital: SymMono = perms
            .iter()
            .enumerate()
            .map(|(k, p)| (Sym::Z { j: p.apply(i) as u8, perm: k as u16 }, 1))
            .collect();
        let mut factor = one.clone();
        add_term(&mut factor, orbital, BigInt::one());
        lhs = poly_mul(&lhs, &factor);
    }

    let size = s.degree();
    let mut rhs = SymPoly::new();
    for t in 0..=size {
        let exponent = factorial(nvars - t) * factorial(t);
        let mut m = SymMono::new();
        for r in k_subsets(nvars, t) {
            for j in Monomial::from_bits(r).vars() {
                m.insert(Sym::Y { j: j as u8, set: r as u16 }, exponent);
            }
        }
        add_term(&mut rhs, m, BigInt::from(binomial(size as u64, t as u64)));
    }

    let rewritten = rewrite(&lhs, nvars, perms.len(), true);
    let ascending = rewrite(&lhs, nvars, perms.len(), false);
    let exponents = (1..=size)
        .map(|t| {
            let observed: BTreeSet<u64> = rewritten
                .iter()
                .flat_map(|p| p.keys())
                .flat_map(|m| m.iter())
                .filter_map(|(v, e)| match v {
                    Sym::Y { set, .. } if set.count_ones() as usize == t => Some(*e),
                    _ => None,
                })
                .collect();
            ExponentRow { t, expected: factorial(nvars - t) * factorial(t), observed: observed.into_iter().collect() }
        })
        .collect();

    Ok(Prop3Report {
        nvars,
        s: s.vars().collect(),
        lhs_terms: lhs.len(),
        rhs_terms: rhs.len(),
        equal: rewritten.as_ref() == Some(&rhs),
        exponents,
        ascending_equal: ascending.as_ref() == Some(&rhs),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventRow {
    pub t: usize,
    pub term_count: usize,
    pub symmetric: bool,
    pub binomial: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventReport {
    pub s: GraphSet,
    pub group_order: usize,
    pub cosets: usize,
    pub rows: Vec<ResolventRow>,
}

impl ResolventReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.symmetric)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s.to_json(),
            "group_order": self.group_order,
            "cosets": self.cosets,
            "rows": self.rows.iter().map(|r| json!({
                "t": r.t,
                "term_count": r.term_count,
                "symmetric": r.symmetric,
                "binomial": r.binomial.as_ref().map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>()),
            })).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }
}

/// Builds `z[σ] = sum_Λ prod_{i in S} x[σΛ(i)]` over left coset representatives of the
/// induced edge group in `S_E`, expands `e_t(z)` modulo `x^2 = x` for `t <= t_max`,
/// and fits each result in the binomial basis.
pub fn resolvent_check(s: &GraphSet, t_max: usize, strategy: Strategy) -> Result<ResolventReport> {
    guard("vertices for resolvent check", s.n() as u128, 3)?;
    guard("resolvent degree", t_max as u128, 3)?;
    let group = InducedGroup::new(s.n())?;
    let e = s.n() * s.n().saturating_sub(1);
    let edge_perms = VertexPermutation::all(e);

    let compose = |sigma: &VertexPermutation, k: usize| -> Vec<usize> {
        group.edge_map(k).iter().map(|&l| sigma.apply(l as usize)).collect()
    };
    let reps: BTreeSet<Vec<usize>> = edge_perms
        .iter()
        .map(|sigma| (0..group.order()).map(|k| compose(sigma, k)).min().expect("group is nonempty"))
        .collect();
    let reps: Vec<VertexPermutation> =
        reps.into_iter().map(|r| VertexPermutation::new(r).expect("composition of bijections")).collect();

    let ring = RingKind::Rational;
    let zs = exec::map_slice(&reps, strategy, |sigma| {
        let mut z = MLPoly::zero(e, ring)?;
        for k in 0..group.order() {
            let image = compose(sigma, k);
            z.add_term(Monomial::from_vars(s.edge_indices().map(|i| image[i])), ring.one())?;
        }
        Ok(z)
    })
    .into_iter()
    .collect::<Result<Vec<MLPoly>>>()?;

    let mut elementary = vec![MLPoly::one(e, ring)?];
    elementary.extend((0..t_max).map(|_| MLPoly::zero(e, ring)).collect::<Result<Vec<_>>>()?);
    for z in &zs {
        for k in (1..=t_max).rev() {
            let step = elementary[k - 1].checked_mul(z)?;
            elementary[k] = elementary[k].checked_add(&step)?;
        }
    }

    let rows = (1..=t_max)
        .map(|t| {
            let p = &elementary[t];
            let fit = fit_binomial(p);
            ResolventRow {
                t,
                term_count: p.term_count(),
                symmetric: fit.is_some(),
                binomial: fit.map(|f| f.binomial().to_vec()),
            }
        })
        .collect();
    Ok(ResolventReport { s: *s, group_order: group.order(), cosets: reps.len(), rows })
}
