//! Vertex permutations acting on loopless directed graphs on `n` vertices.
//!
//! Edges are the ordered pairs `(i, j)`, `i != j`, numbered `0..2*C(n,2)` in
//! increasing order of `i + j*n`. A graph is a bitset over those numbers,
//! and edge `e` is also variable `x_e` of the orbit polynomials.

mod bounds;
mod orbital;

pub use bounds::{
    constraint_system, legendre_lower_bound, polya_count, Constraint, ConstraintReport, ConstraintSystem,
    LegendreReport,
};
pub use orbital::{prop3_literal_verify, resolvent_check, Prop3Report, ResolventReport, ResolventRow};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{guard, Error, Result};
use crate::exec::{self, Strategy};
use crate::mlpoly::{MLPoly, Monomial};
use crate::ring::{RingElem, RingKind};

/// Largest vertex count for brute force over `S_n`.
pub const BRUTE_MAX_VERTICES: usize = 8;
/// Largest vertex count for routines that sweep every edge subset.
pub const SWEEP_MAX_VERTICES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpace {
    n: usize,
    pairs: Vec<(usize, usize)>,
    by_lex: Vec<Option<usize>>,
}

impl EdgeSpace {
    pub fn new(n: usize) -> Result<Self> {
        guard("vertices", n as u128, BRUTE_MAX_VERTICES as u128)?;
        let mut pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        pairs.sort_by_key(|&(i, j)| i + j * n);
        let mut by_lex = vec![None; n * n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            by_lex[i + j * n] = Some(k);
        }
        Ok(EdgeSpace { n, pairs, by_lex })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges, `2 * C(n, 2)`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        self.pairs[index]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn lex(&self, i: usize, j: usize) -> usize {
        i + j * self.n
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n {
            return None;
        }
        self.by_lex[self.lex(i, j)]
    }
}

/// A loopless directed graph on `n` vertices as a set of edge indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphSet {
    n: usize,
    bits: u64,
}

impl GraphSet {
    pub fn empty(n: usize) -> Self {
        GraphSet { n, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        let e = n * n.saturating_sub(1);
        GraphSet { n, bits: if e == 64 { u64::MAX } else { (1u64 << e) - 1 } }
    }

    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        let full = GraphSet::full(n).bits;
        if bits & !full != 0 {
            return Err(Error::Precondition(format!("bits {bits:#x} outside the {n}-vertex edge space")));
        }
        Ok(GraphSet { n, bits })
    }

    pub fn from_edges(space: &EdgeSpace, edges: &[(usize, usize)]) -> Result<Self> {
        let mut bits = 0u64;
        for &(i, j) in edges {
            let k = space
                .index_of(i, j)
                .ok_or_else(|| Error::Precondition(format!("({i},{j}) is not an edge on {} vertices", space.n)))?;
            bits |= 1 << k;
        }
        Ok(GraphSet { n: space.n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(&self, other: &GraphSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = usize> {
        Monomial::from_bits(u128::from(self.bits)).vars()
    }

    pub fn edges(&self, space: &EdgeSpace) -> Vec<(usize, usize)> {
        self.edge_indices().map(|k| space.pair(k)).collect()
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::from_bits(u128::from(self.bits))
    }

    /// All subgraphs, the empty one first.
    pub fn subsets(&self) -> impl Iterator<Item = GraphSet> {
        let n = self.n;
        self.monomial().subsets().map(move |m| GraphSet { n, bits: m.bits() as u64 })
    }

    pub fn to_json(&self) -> Value {
        let space = EdgeSpace::new(self.n).expect("graph vertex count already checked");
        json!({ "n": self.n, "edges": self.edges(&space) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("graph JSON lacks n".into()))? as usize;
        let space = EdgeSpace::new(n)?;
        let edges = v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("graph JSON lacks edges".into()))?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                    (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                    _ => Err(Error::Parse(format!("bad edge {e}"))),
                },
                _ => Err(Error::Parse(format!("bad edge {e}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        GraphSet::from_edges(&space, &edges)
    }
}

/// A bijection of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPermutation(Vec<usize>);

impl VertexPermutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v >= image.len() || seen[v] {
                return Err(Error::Precondition(format!("{image:?} is not a permutation")));
            }
            seen[v] = true;
        }
        Ok(VertexPermutation(image))
    }

    pub fn identity(n: usize) -> Self {
        VertexPermutation((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &VertexPermutation) -> VertexPermutation {
        VertexPermutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> VertexPermutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        VertexPermutation(inv)
    }

    /// All permutations of `0..n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<VertexPermutation> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![VertexPermutation(cur.clone())];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(VertexPermutation(cur.clone()));
        }
    }

    /// Position in the lexicographic enumeration of [`VertexPermutation::all`].
    pub fn lex_index(&self) -> usize {
        let n = self.0.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&v| v < self.0[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }
}

impl fmt::Display for VertexPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Image of `s` under `(i, j) -> (λ(i), λ(j))`.
pub fn act(lambda: &VertexPermutation, s: &GraphSet) -> Result<GraphSet> {
    if lambda.n() != s.n {
        return Err(Error::ArityMismatch(lambda.n(), s.n));
    }
    let space = EdgeSpace::new(s.n)?;
    let mut bits = 0u64;
    for k in s.edge_indices() {
        let (i, j) = space.pair(k);
        let target = space.index_of(lambda.apply(i), lambda.apply(j)).expect("loopless image");
        bits |= 1 << target;
    }
    Ok(GraphSet { n: s.n, bits })
}

/// `S_n` with each element's induced permutation of edge indices.
#[derive(Debug, Clone)]
pub struct InducedGroup {
    n: usize,
    perms: Vec<VertexPermutation>,
    edge_maps: Vec<Vec<u8>>,
}

impl InducedGroup {
    pub fn new(n: usize) -> Result<Self> {
        let space = EdgeSpace::new(n)?;
        let perms = VertexPermutation::all(n);
        let edge_maps = perms
            .iter()
            .map(|p| {
                space
                    .pairs()
                    .iter()
                    .map(|&(i, j)| space.index_of(p.apply(i), p.apply(j)).expect("loopless image") as u8)
                    .collect()
            })
            .collect();
        Ok(InducedGroup { n, perms, edge_maps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[VertexPermutation] {
        &self.perms
    }

    /// Induced permutation of edge indices for element `k`.
    pub fn edge_map(&self, k: usize) -> &[u8] {
        &self.edge_maps[k]
    }

    pub fn image_bits(&self, k: usize, mut bits: u64) -> u64 {
        let map = &self.edge_maps[k];
        let mut out = 0u64;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            out |= 1 << map[e];
            bits &= bits - 1;
        }
        out
    }

    pub fn image(&self, k: usize, s: &GraphSet) -> GraphSet {
        GraphSet { n: self.n, bits: self.image_bits(k, s.bits) }
    }

    pub fn canonical_bits(&self, bits: u64) -> u64 {
        (0..self.order()).map(|k| self.image_bits(k, bits)).min().unwrap_or(bits)
    }

    pub fn canonical(&self, s: &GraphSet) -> GraphSet {
        GraphSet { n: self.n, bits: self.canonical_bits(s.bits) }
    }

    pub fn orbit(&self, s: &GraphSet) -> BTreeSet<GraphSet> {
        (0..self.order()).map(|k| self.image(k, s)).collect()
    }

    pub fn automorphisms(&self, s: &GraphSet) -> Vec<VertexPermutation> {
        (0..self.order())
            .filter(|&k| self.image_bits(k, s.bits) == s.bits)
            .map(|k| self.perms[k].clone())
            .collect()
    }
}

pub fn automorphisms(s: &GraphSet) -> Result<Vec<VertexPermutation>> {
    Ok(InducedGroup::new(s.n)?.automorphisms(s))
}

pub fn orbit(s: &GraphSet) -> Result<BTreeSet<GraphSet>> {
    Ok(InducedGroup::new(s.n)?.orbit(s))
}

/// One lexicographically least representative per isomorphism class,
/// optionally restricted to graphs with at most `max_size` edges.
pub fn iso_classes(n: usize, max_size: Option<usize>, strategy: Strategy) -> Result<Vec<GraphSet>> {
    guard("vertices for class sweep", n as u128, 5)?;
    let group = InducedGroup::new(n)?;
    let e = n * n.saturating_sub(1);
    let keep = exec::map_range(0..1u64 << e, strategy, |bits| {
        let fits = max_size.is_none_or(|m| bits.count_ones() as usize <= m);
        fits && group.canonical_bits(bits) == bits
    });
    Ok(keep
        .into_iter()
        .enumerate()
        .filter(|(_, k)| *k)
        .map(|(bits, _)| GraphSet { n, bits: bits as u64 })
        .collect())
}

fn unit_poly(n_vars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<MLPoly> {
    let ring = RingKind::Rational;
    let mut p = MLPoly::zero(n_vars, ring)?;
    for m in monomials {
        p.add_term(m, ring.one())?;
    }
    Ok(p)
}

/// `sum over the orbit of S of x^T`.
pub fn orbit_polynomial(s: &GraphSet) -> Result<MLPoly> {
    let group = InducedGroup::new(s.n)?;
    unit_poly(s.n * s.n.saturating_sub(1), group.orbit(s).iter().map(GraphSet::monomial))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoKind {
    Iso,
    Sub,
    Super,
}

impl FromStr for IsoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iso" => Ok(IsoKind::Iso),
            "sub" => Ok(IsoKind::Sub),
            "super" => Ok(IsoKind::Super),
            _ => Err(Error::Parse(format!("kind must be iso, sub or super, got {s:?}"))),
        }
    }
}

impl fmt::Display for IsoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsoKind::Iso => "iso",
            IsoKind::Sub => "sub",
            IsoKind::Super => "super",
        })
    }
}

/// `sum_{R ⊆ S} P_{≃R}`: the coefficient of `x^T` counts the subgraphs of `S` isomorphic to `T`.
pub fn sub_iso_listing(s: &GraphSet) -> Result<MLPoly> {
    guard("vertices for sub-isomorphism", s.n as u128, SWEEP_MAX_VERTICES as u128)?;
    let group = InducedGroup::new(s.n)?;
    let mut counts: BTreeMap<u64, i64> = BTreeMap::new();
    for r in s.subsets() {
        for t in group.orbit(&r) {
            *counts.entry(t.bits).or_default() += 1;
        }
    }
    listing_poly(s.n, counts)
}

/// `sum_{T ⊇ S} P_{≃T}`: the coefficient of `x^R` counts the supergraphs of `S` isomorphic to `R`.
pub fn super_iso_listing(s: &GraphSet) -> Result<MLPoly> {
    guard("vertices for super-isomorphism", s.n as u128, SWEEP_MAX_VERTICES as u128)?;
    let group = InducedGroup::new(s.n)?;
    let complement = GraphSet { n: s.n, bits: GraphSet::full(s.n).bits & !s.bits };
    let mut counts: BTreeMap<u64, i64> = BTreeMap::new();
    for extra in complement.subsets() {
        let t = GraphSet { n: s.n, bits: s.bits | extra.bits };
        for r in group.orbit(&t) {
            *counts.entry(r.bits).or_default() += 1;
        }
    }
    listing_poly(s.n, counts)
}

fn listing_poly(n: usize, counts: BTreeMap<u64, i64>) -> Result<MLPoly> {
    let ring = RingKind::Rational;
    MLPoly::from_terms(
        n * n.saturating_sub(1),
        ring,
        counts.into_iter().map(|(b, c)| (Monomial::from_bits(u128::from(b)), ring.from_i64(c))),
    )
}

/// Listing normalised to unit coefficients: the indicator of `{T : T ⊂∼ S}`.
pub fn sub_iso_polynomial(s: &GraphSet) -> Result<MLPoly> {
    normalise(&sub_iso_listing(s)?)
}

/// Indicator of `{T : T ⊃∼ S}`.
pub fn super_iso_polynomial(s: &GraphSet) -> Result<MLPoly> {
    normalise(&super_iso_listing(s)?)
}

fn normalise(listing: &MLPoly) -> Result<MLPoly> {
    listing.map_coeffs(listing.ring(), |c| c.checked_mul(&c.inverse()?))
}

pub fn iso_polynomial(kind: IsoKind, s: &GraphSet) -> Result<MLPoly> {
    match kind {
        IsoKind::Iso => orbit_polynomial(s),
        IsoKind::Sub => sub_iso_polynomial(s),
        IsoKind::Super => super_iso_polynomial(s),
    }
}

pub fn iso_pde_evaluate(kind: IsoKind, s: &GraphSet, t: &GraphSet, m: u32) -> Result<bool> {
    if s.n != t.n {
        return Err(Error::ArityMismatch(s.n, t.n));
    }
    crate::boolean::pde_evaluate(&iso_polynomial(kind, s)?, t.monomial(), m)
}

/// Encodes a permutation as `sum_v 2^(n*v + σ(v))`.
pub fn encode_certificate(sigma: &VertexPermutation) -> BigUint {
    let n = sigma.n();
    sigma.image().iter().enumerate().fold(BigUint::zero(), |acc, (v, &s)| acc + (BigUint::one() << (n * v + s)))
}

/// Inverse of [`encode_certificate`]; `None` for zero or malformed values.
pub fn decode_certificate(n: usize, cert: &BigUint) -> Option<VertexPermutation> {
    if cert.is_zero() || cert.bits() > (n * n) as u64 {
        return None;
    }
    let mut image = Vec::with_capacity(n);
    for v in 0..n {
        let row: Vec<usize> = (0..n).filter(|&s| cert.bit((n * v + s) as u64)).collect();
        match row.as_slice() {
            [s] => image.push(*s),
            _ => return None,
        }
    }
    VertexPermutation::new(image).ok()
}

/// Row `v` has its one in column `σ(v)`.
pub fn certificate_matrix(n: usize, cert: &BigUint) -> Vec<Vec<u8>> {
    (0..n).map(|v| (0..n).map(|s| u8::from(cert.bit((n * v + s) as u64))).collect()).collect()
}

/// Certificate of the lexicographically least `σ` with `σS = T`, or 0.
pub fn np_certificate(s: &GraphSet, t: &GraphSet) -> Result<BigUint> {
    if s.n != t.n {
        return Err(Error::ArityMismatch(s.n, t.n));
    }
    let group = InducedGroup::new(s.n)?;
    Ok((0..group.order())
        .find(|&k| group.image_bits(k, s.bits) == t.bits)
        .map(|k| encode_certificate(&group.perms[k]))
        .unwrap_or_default())
}

/// Polynomial whose coefficient at `x^T` is the certificate for `(S, T)`.
pub fn np_pde_polynomial(s: &GraphSet) -> Result<MLPoly> {
    let group = InducedGroup::new(s.n)?;
    let mut seen: BTreeMap<u64, BigUint> = BTreeMap::new();
    for k in 0..group.order() {
        seen.entry(group.image_bits(k, s.bits)).or_insert_with(|| encode_certificate(&group.perms[k]));
    }
    let ring = RingKind::Rational;
    MLPoly::from_terms(
        s.n * s.n.saturating_sub(1),
        ring,
        seen.into_iter().map(|(b, c)| {
            let q = crate::ring::Rational::from_integer(num_bigint::BigInt::from(c));
            (Monomial::from_bits(u128::from(b)), RingElem::Rational(q))
        }),
    )
}

/// Reads the certificate back out of an NP-PDE polynomial.
pub fn np_pde_evaluate(p: &MLPoly, t: &GraphSet) -> Result<BigUint> {
    match p.diff_extract(t.monomial())? {
        RingElem::Rational(q) if q.is_integer() => q
            .to_integer()
            .to_biguint()
            .ok_or_else(|| Error::Precondition("negative certificate".into())),
        other => Err(Error::Precondition(format!("{other} is not a certificate"))),
    }
}

pub fn certificate_to_json(n: usize, cert: &BigUint) -> Value {
    json!({
        "decimal": cert.to_string(),
        "matrix": certificate_matrix(n, cert),
        "permutation": decode_certificate(n, cert).map(|p| p.image().to_vec()),
        "bits": cert.to_u64().map(|_| cert.bits()),
    })
}
