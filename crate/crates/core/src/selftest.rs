//! The acceptance suite: eighteen oracle- and property-based checks shared by
//! the `acceptance` integration test and `pdeforge selftest`.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::boolean::{
    boole_encode, interpolate_binary, interpolate_sumproduct, lagrange_sumproduct, pde_evaluate, verify_evaluation,
    verify_pde, BinaryInterpolator, Formula, TruthTable,
};
use crate::circuit::{pdp_search, subset_product, superset_product, FixedEntry, SearchConfig};
use crate::error::Error;
use crate::exec::Strategy;
use crate::matrixalg::{
    det_cofactor, det_grassmann, det_vandermonde, f_cycles, f_det_gf2, gf2_invertible, gl2_polynomial,
    grassmann_theta, integer_roots_check, p_tree_symbolic, permanent, tree_oracle, BitMatrix, ExactMatrix, FTree,
    GrassmannMode,
};
use crate::mlpoly::{MLPoly, Monomial};
use crate::orbits::{
    act, automorphisms, decode_certificate, iso_classes, iso_polynomial, legendre_lower_bound, np_certificate,
    orbit, polya_count, prop3_literal_verify, resolvent_check, EdgeSpace, GraphSet, IsoKind, VertexPermutation,
};
use crate::ring::{ratio, Rational, RingKind};
use crate::symmetric::{
    cardinality_pdp, e_to_binomial, elementary_symmetric, newton_e_from_p, newton_substitute, CardinalityKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Reduced sampling, for smoke runs.
    Quick,
    /// Every criterion at its stated scale.
    Full,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "quick" => Ok(Suite::Quick),
            "full" => Ok(Suite::Full),
            _ => Err(Error::Parse(format!("suite must be quick or full, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": self.elapsed.as_secs_f64(),
        })
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {:<28} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn(&Ctx) -> Outcome;
type Outcome = std::result::Result<String, String>;

struct Ctx {
    suite: Suite,
    seed: u64,
    strategy: Strategy,
}

impl Ctx {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn full(&self) -> bool {
        self.suite == Suite::Full
    }
}

pub const CRITERIA: [(u8, &str); 18] = [
    (1, "worked interpolation example"),
    (2, "binary vs sum-product"),
    (3, "boole correspondence"),
    (4, "subset/superset counts"),
    (5, "cardinality programs"),
    (6, "newton identities"),
    (7, "determinant agreement"),
    (8, "permanent"),
    (9, "anticommutation"),
    (10, "tree and cycle covers"),
    (11, "gf2 determinant"),
    (12, "orbit machinery"),
    (13, "np certificates"),
    (14, "orbital expansion"),
    (15, "legendre bound"),
    (16, "pdp search"),
    (17, "integer roots"),
    (18, "resolvent"),
];

const CHECKS: [Check; 18] = [
    c01_worked_example,
    c02_binary_vs_sumproduct,
    c03_boole,
    c04_product_counts,
    c05_cardinality,
    c06_newton,
    c07_determinants,
    c08_permanent,
    c09_anticommutation,
    c10_tree_cycles,
    c11_gf2_det,
    c12_orbits,
    c13_certificates,
    c14_prop3,
    c15_legendre,
    c16_pdp_search,
    c17_integer_roots,
    c18_resolvent,
];

pub fn run_criterion(id: u8, suite: Suite, seed: u64, strategy: Strategy) -> Result<CriterionResult, Error> {
    let k = (id as usize)
        .checked_sub(1)
        .filter(|&k| k < CHECKS.len())
        .ok_or_else(|| Error::Precondition(format!("no criterion {id}")))?;
    let ctx = Ctx { suite, seed, strategy };
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| CHECKS[k](&ctx)))
        .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Ok(CriterionResult { id, name: CRITERIA[k].1, passed, detail, elapsed: start.elapsed() })
}

pub fn run_all(suite: Suite, seed: u64, strategy: Strategy) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, suite, seed, strategy).expect("listed id")).collect()
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(String::new())
    } else {
        Err(msg())
    }
}

fn e<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn c01_worked_example(_: &Ctx) -> Outcome {
    let t = e(TruthTable::parse_bits("1101"))?;
    let p = e(interpolate_sumproduct(&t, RingKind::Rational))?;
    let ring = RingKind::Rational;
    let expected = e(MLPoly::from_terms(
        2,
        ring,
        [(Monomial::ONE, ring.one()), (Monomial::var(0), ring.one()), (Monomial::from_vars([0, 1]), ring.one())],
    ))?;
    ensure(p == expected, || format!("got {p}"))?;
    for b in 0..4 {
        let got = e(pde_evaluate(&p, Monomial::from_bits(b), 1))?;
        ensure(got == t.get(b as usize), || format!("row {b}: {got}"))?;
    }
    Ok(format!("P = {p}; 4/4 rows"))
}

fn c02_binary_vs_sumproduct(_: &Ctx) -> Outcome {
    let interp = e(BinaryInterpolator::new(3))?;
    for index in 0..256 {
        let t = e(TruthTable::from_index(3, index))?;
        let bin = e(interpolate_binary(&t))?;
        let sp = e(interpolate_sumproduct(&t, RingKind::Gf2))?;
        ensure(bin == sp, || format!("table {index}: {bin} vs {sp}"))?;
        let lit_bin = e(interp.interpolate(&t))?;
        let lit_sp = e(lagrange_sumproduct(&t, RingKind::Gf2))?;
        ensure(lit_bin == lit_sp, || format!("table {index}: interpolants {lit_bin} vs {lit_sp}"))?;
    }
    Ok("256/256 tables".into())
}

fn c03_boole(ctx: &Ctx) -> Outcome {
    let formulas = Formula::enumerate(3, 3);
    let bad: Vec<String> = crate::exec::map_slice(&formulas, ctx.strategy, |f| {
        let ok = boole_encode(f, 3)
            .and_then(|p| Ok(verify_evaluation(&p, &f.truth_table(3)?, Strategy::Sequential)?.passed()))
            .unwrap_or(false);
        (!ok).then(|| f.to_string())
    })
    .into_iter()
    .flatten()
    .collect();
    ensure(bad.is_empty(), || format!("{} formulas disagree, first {}", bad.len(), bad[0]))?;
    Ok(format!("{} formulas x 8 points", formulas.len()))
}

fn c04_product_counts(ctx: &Ctx) -> Outcome {
    let max_n = if ctx.full() { 12 } else { 10 };
    let mut rng = ctx.rng(4);
    let mut checked = 0;
    for n in 0..=max_n {
        let sets: Vec<u128> = if n <= 8 {
            (0..1u128 << n).collect()
        } else {
            (0..24).map(|_| rng.gen_range(0..1u128 << n)).collect()
        };
        for bits in sets {
            let s: Vec<usize> = Monomial::from_bits(bits).vars().collect();
            let k = s.len();
            let sub = e(e(subset_product(&s, n))?.expand(true))?;
            let sup = e(e(superset_product(&s, n))?.expand(true))?;
            let sm = Monomial::from_bits(bits);
            ensure(
                sub.term_count() == 1 << k && sub.terms().all(|(m, c)| c.is_one() && m.is_subset_of(sm)),
                || format!("subset product N={n} S={s:?}"),
            )?;
            ensure(
                sup.term_count() == 1 << (n - k) && sup.terms().all(|(m, c)| c.is_one() && sm.is_subset_of(*m)),
                || format!("superset product N={n} S={s:?}"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} sets, N <= {max_n}"))
}

fn c05_cardinality(ctx: &Ctx) -> Outcome {
    let max_n = if ctx.full() { 12 } else { 9 };
    let kinds = [CardinalityKind::AtMost, CardinalityKind::AtLeast, CardinalityKind::Exactly];
    let mut programs = 0;
    for n in 0..=max_n {
        for s in 0..=n {
            for kind in kinds {
                let q = e(cardinality_pdp(kind, s, n))?;
                let t = e(TruthTable::from_fn(n, |b| kind.holds(b.count_ones() as usize, s)))?;
                ensure(e(verify_pde(&q, &t, 1, ctx.strategy))?.passed(), || format!("{kind} {s} N={n} (by size)"))?;
                if n <= 8 {
                    let full = e(q.expand_via_l())?;
                    ensure(e(verify_pde(&full, &t, 1, ctx.strategy))?.passed(), || format!("{kind} {s} N={n} (expanded)"))?;
                }
                programs += 1;
            }
        }
    }
    for n in 0..=8 {
        for t in 0..=n {
            let q = e(e_to_binomial(n, t))?;
            let mut unit = vec![Rational::zero(); t + 1];
            unit[t] = ratio(1, 1);
            ensure(q.binomial() == unit.as_slice(), || format!("e_{t} on {n} is not C(l,{t})"))?;
            ensure(e(q.expand_via_l())? == e(elementary_symmetric(n, t))?, || format!("e_{t} expansion on {n}"))?;
        }
    }
    Ok(format!("{programs} programs, N <= {max_n}; e_t identity N <= 8"))
}

fn c06_newton(_: &Ctx) -> Outcome {
    for n in 1..=6 {
        for t in 1..=n {
            let g = e(newton_substitute(&newton_e_from_p(t), n))?;
            let reduced = e(g.reduce_multilinear())?;
            ensure(g.is_multilinear() && reduced == e(elementary_symmetric(n, t))?, || format!("N={n} t={t}"))?;
        }
    }
    Ok("N <= 6, 1 <= t <= N".into())
}

fn random_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let p = rng.gen_range(-9i64..=9);
        if p != 0 || !nonzero {
            return ratio(p, rng.gen_range(1i64..=5));
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, nonzero_first: bool) -> ExactMatrix {
    ExactMatrix::from_fn(n, |_, j| random_rational(rng, nonzero_first && j == 0))
}

fn c07_determinants(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(7);
    let per_n = if ctx.full() { 50 } else { 10 };
    for n in 2..=5 {
        for _ in 0..per_n {
            let a = random_matrix(&mut rng, n, true);
            let oracle = e(det_cofactor(&a))?;
            let lit = e(det_grassmann(&a, GrassmannMode::Literal))?;
            let ext = e(det_grassmann(&a, GrassmannMode::Exterior))?;
            let van = e(det_vandermonde(&a))?;
            ensure(lit == oracle && ext == oracle && van == oracle, || {
                format!("n={n}: grassmann {lit}, exterior {ext}, vandermonde {van}, cofactor {oracle}\n{a}")
            })?;
        }
    }
    Ok(format!("{per_n} matrices per n in 2..=5"))
}

fn c08_permanent(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(8);
    let per_n = if ctx.full() { 50 } else { 10 };
    for n in 1..=6 {
        let perms = VertexPermutation::all(n);
        for _ in 0..per_n {
            let a = random_matrix(&mut rng, n, false);
            let oracle: Rational =
                perms.iter().map(|p| (0..n).map(|i| a.get(i, p.apply(i)).clone()).product::<Rational>()).sum();
            let got = e(permanent(&a))?;
            ensure(got == oracle, || format!("n={n}: {got} vs {oracle}"))?;
        }
    }
    Ok(format!("{per_n} matrices per n in 1..=6"))
}

fn c09_anticommutation(_: &Ctx) -> Outcome {
    for n in 1..=4 {
        let thetas = (0..n).map(|j| grassmann_theta(j, n)).collect::<crate::Result<Vec<_>>>().map_err(|x| x.to_string())?;
        for i in 0..n {
            ensure(thetas[i].mul(&thetas[i]).is_zero(), || format!("theta_{i}^2 != 0 at n={n}"))?;
            for j in i + 1..n {
                let anti = thetas[i].mul(&thetas[j]).add(&thetas[j].mul(&thetas[i]));
                ensure(anti.is_zero(), || format!("theta_{i}, theta_{j} commute badly at n={n}"))?;
            }
        }
    }
    Ok("n <= 4".into())
}

fn c10_tree_cycles(_: &Ctx) -> Outcome {
    let ft = e(FTree::new(3))?;
    let perms = VertexPermutation::all(3);
    let (mut trees, mut covers) = (0, 0);
    for index in 0..512 {
        let m = e(BitMatrix::from_index(3, index))?;
        let tree = e(ft.evaluate(&m))?;
        ensure(tree == tree_oracle(&m), || format!("tree mismatch at\n{m}"))?;
        let is_perm = perms.iter().any(|p| (0..3).all(|i| (0..3).all(|j| m.get(i, j) == (p.apply(i) == j))));
        let cyc = e(f_cycles(&m))?;
        ensure(cyc == is_perm, || format!("cycle cover mismatch at\n{m}"))?;
        trees += usize::from(tree);
        covers += usize::from(cyc);
    }
    for n in 1..=5usize {
        let count = e(p_tree_symbolic(n))?.term_count();
        ensure(count == n.pow(n as u32 - 1), || format!("p_tree({n}) has {count} terms"))?;
    }
    Ok(format!("512 matrices: {trees} trees, {covers} covers; n^(n-1) terms for n <= 5"))
}

fn c11_gf2_det(_: &Ctx) -> Outcome {
    for n in 2..=3usize {
        let expected: usize = (0..n).map(|k| (1usize << n) - (1 << k)).product();
        let terms = e(gl2_polynomial(n))?.term_count();
        ensure(terms == expected, || format!("n={n}: {terms} terms, formula {expected}"))?;
        for bits in 0..1u64 << (n * n) {
            let m = e(BitMatrix::from_index(n, bits))?;
            ensure(e(f_det_gf2(bits, n))? == gf2_invertible(&m), || format!("n={n} bits={bits}"))?;
        }
    }
    Ok("16 + 512 matrices; 6 and 168 terms".into())
}

/// Relation tests straight from the definitions, over explicit edge pairs.
mod oracle {
    use super::*;

    pub struct Relations {
        space: EdgeSpace,
        perms: Vec<VertexPermutation>,
    }

    impl Relations {
        pub fn new(n: usize) -> Self {
            Relations { space: EdgeSpace::new(n).expect("small n"), perms: VertexPermutation::all(n) }
        }

        fn image(&self, p: &VertexPermutation, bits: u64) -> u64 {
            let mut out = 0;
            for k in 0..self.space.len() {
                if bits >> k & 1 == 1 {
                    let (i, j) = self.space.pair(k);
                    out |= 1 << self.space.index_of(p.apply(i), p.apply(j)).expect("loopless");
                }
            }
            out
        }

        /// Some relabelling carries `t` onto `s`.
        pub fn iso(&self, s: u64, t: u64) -> bool {
            s.count_ones() == t.count_ones() && self.perms.iter().any(|p| self.image(p, t) == s)
        }

        /// `t` is isomorphic to a subgraph of `s`.
        pub fn sub(&self, s: u64, t: u64) -> bool {
            self.perms.iter().any(|p| self.image(p, t) & !s == 0)
        }

        /// `t` contains a copy of `s`.
        pub fn sup(&self, s: u64, t: u64) -> bool {
            self.perms.iter().any(|p| self.image(p, s) & !t == 0)
        }
    }
}

fn c12_orbits(ctx: &Ctx) -> Outcome {
    let classes = e(iso_classes(3, None, ctx.strategy))?.len();
    let polya = e(polya_count(3))?;
    ensure(classes == 16 && polya == BigUint::from(16u8), || format!("classes {classes}, polya {polya}"))?;
    for n in 1..=4 {
        let c = e(iso_classes(n, None, ctx.strategy))?.len();
        ensure(e(polya_count(n))? == BigUint::from(c), || format!("n={n}: {c} classes"))?;
    }

    let mut rng = ctx.rng(12);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5usize);
        let e_count = n * (n - 1);
        let bits = if e_count == 0 { 0 } else { rng.gen_range(0..1u64 << e_count) };
        let s = e(GraphSet::from_bits(n, bits))?;
        let product = e(orbit(&s))?.len() * e(automorphisms(&s))?.len();
        let fact: usize = (1..=n).product();
        ensure(product == fact, || format!("orbit-stabilizer n={n} S={bits:#x}: {product}"))?;
    }

    let rel3 = oracle::Relations::new(3);
    let bad3: Vec<String> = crate::exec::map_range(0..64, ctx.strategy, |s| pde_vs_oracle(3, s, 0..64, &rel3).err())
        .into_iter()
        .flatten()
        .collect();
    ensure(bad3.is_empty(), || bad3.join("; "))?;

    let rel4 = oracle::Relations::new(4);
    let samples = if ctx.full() { 6 } else { 2 };
    let s4: Vec<u64> = (0..samples).map(|_| rng.gen_range(0..1u64 << 12) & rng.gen_range(0..1u64 << 12)).collect();
    let bad4: Vec<String> = crate::exec::map_slice(&s4, ctx.strategy, |&s| pde_vs_oracle(4, s, 0..4096, &rel4).err())
        .into_iter()
        .flatten()
        .collect();
    ensure(bad4.is_empty(), || bad4.join("; "))?;
    Ok(format!("16 classes; 100 orbit-stabilizer checks; n=3 64x64, n=4 {samples}x4096 for iso/sub/super"))
}

fn pde_vs_oracle(n: usize, s_bits: u64, ts: std::ops::Range<u64>, rel: &oracle::Relations) -> Outcome {
    let s = e(GraphSet::from_bits(n, s_bits))?;
    for kind in [IsoKind::Iso, IsoKind::Sub, IsoKind::Super] {
        let p = e(iso_polynomial(kind, &s))?;
        for t in ts.clone() {
            let got = e(pde_evaluate(&p, Monomial::from_bits(u128::from(t)), 1))?;
            let want = match kind {
                IsoKind::Iso => rel.iso(s_bits, t),
                IsoKind::Sub => rel.sub(s_bits, t),
                IsoKind::Super => rel.sup(s_bits, t),
            };
            ensure(got == want, || format!("{kind} n={n} S={s_bits:#x} T={t:#x}: {got} vs {want}"))?;
        }
    }
    Ok(String::new())
}

fn c13_certificates(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(13);
    let mut negatives = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=5usize);
        let edges = n * (n - 1);
        let rel = oracle::Relations::new(n);
        let s = e(GraphSet::from_bits(n, rng.gen_range(0..1u64 << edges)))?;
        let perms = VertexPermutation::all(n);
        let lambda = &perms[rng.gen_range(0..perms.len())];
        let t = e(act(lambda, &s))?;
        let cert = e(np_certificate(&s, &t))?;
        let sigma = decode_certificate(n, &cert).ok_or_else(|| format!("undecodable certificate {cert}"))?;
        ensure(e(act(&sigma, &s))? == t, || format!("certificate {cert} does not map S onto T"))?;

        let other = e(GraphSet::from_bits(n, rng.gen_range(0..1u64 << edges)))?;
        let cert = e(np_certificate(&s, &other))?;
        let iso = rel.iso(other.bits(), s.bits());
        ensure(cert.is_zero() != iso, || format!("certificate {cert} but iso = {iso}"))?;
        if !iso {
            negatives += 1;
        }
    }
    Ok(format!("100 mapped pairs; {negatives} non-isomorphic random pairs gave 0"))
}

fn c14_prop3(_: &Ctx) -> Outcome {
    for bits in 0..8u128 {
        let r = e(prop3_literal_verify(3, Monomial::from_bits(bits)))?;
        ensure(r.equal, || format!("S={:?} not equal", r.s))?;
        for row in &r.exponents {
            ensure(row.observed == [row.expected], || format!("S={:?} t={} exponents {:?}", r.s, row.t, row.observed))?;
        }
    }
    Ok("all 8 subsets of 3 variables".into())
}

fn c15_legendre(_: &Ctx) -> Outcome {
    let r = e(legendre_lower_bound(4))?;
    ensure(r.bound == 52 && r.alpha_sum == 4, || format!("n=4: bound {} alpha sum {}", r.bound, r.alpha_sum))?;
    for n in 1..=10usize {
        let mut rest: u64 = (1..=n as u64).product();
        let mut alphas = Vec::new();
        let mut p = 2;
        while rest > 1 {
            let mut a = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                a += 1;
            }
            if a > 0 {
                alphas.push((p as usize, a));
            }
            p += 1;
        }
        let r = e(legendre_lower_bound(n))?;
        ensure(r.alphas == alphas, || format!("n={n}: {:?} vs {alphas:?}", r.alphas))?;
        let sum: u64 = alphas.iter().map(|(_, a)| a).sum();
        ensure(r.bound == (1 + (n * (n - 1)) as u128) * u128::from(sum), || format!("n={n}: bound {}", r.bound))?;
    }
    Ok("52 at n=4; n! factored for n <= 10".into())
}

fn c16_pdp_search(ctx: &Ctx) -> Outcome {
    let ring = RingKind::Rational;
    let target = e(MLPoly::from_terms(
        2,
        ring,
        [(Monomial::ONE, ring.one()), (Monomial::var(0), ring.one()), (Monomial::from_vars([0, 1]), ring.one())],
    ))?;
    let mut cfg = SearchConfig::new(1, 2);
    cfg.seed = ctx.seed;
    cfg.strategy = ctx.strategy;
    let rep = e(pdp_search(&target, &cfg))?;
    ensure(rep.residual < 1e-8 && rep.verified_residual < 1e-8, || format!("free search residual {:e}", rep.residual))?;

    let s15 = 15f64.sqrt();
    let r = (4.0 * s15 + 17.0).sqrt();
    let b001 = -((5f64.sqrt() * 2f64.sqrt() * (r * (s15 + 6.0) + 8.0 * s15 + 34.0).sqrt()) + s15 + 3.0 * r + 8.0)
        / (2.0 * (s15 + r + 4.0));
    let b011 = -r / 2.0 - 0.5;
    cfg.fixed = vec![
        FixedEntry { u: 0, v: 0, w: 1, value: b001 },
        FixedEntry { u: 0, v: 0, w: 2, value: -1.0 },
        FixedEntry { u: 0, v: 1, w: 1, value: b011 },
        FixedEntry { u: 0, v: 1, w: 2, value: 1.0 },
    ];
    let pinned = e(pdp_search(&target, &cfg))?;
    ensure(pinned.residual < 1e-6, || format!("partial assignment residual {:e}", pinned.residual))?;
    Ok(format!(
        "free residual {:.1e}; partial assignment residual {:.1e} with B[0,0,0]={:.6}, B[0,1,0]={:.6}",
        rep.residual,
        pinned.residual,
        pinned.circuit.get(0, 0, 0),
        pinned.circuit.get(0, 1, 0)
    ))
}

fn c17_integer_roots(_: &Ctx) -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2, 3, 5, 12] {
        let r = e(integer_roots_check(d, 1e-9, 0.01))?;
        ensure(r.passed(), || format!("d={d}: {}", r.failures.join("; ")))?;
        worst = r.at_roots.iter().fold(worst, |m, &(_, v)| m.max(v));
    }
    Ok(format!("d in {{2,3,5,12}}; worst |f(k)| = {worst:.1e}"))
}

fn c18_resolvent(ctx: &Ctx) -> Outcome {
    let s = e(GraphSet::from_bits(3, 1))?;
    let r = e(resolvent_check(&s, 2, ctx.strategy))?;
    ensure(r.passed(), || format!("non-symmetric rows: {:?}", r.rows.iter().filter(|x| !x.symmetric).map(|x| x.t).collect::<Vec<_>>()))?;
    let summary: Vec<String> = r
        .rows
        .iter()
        .map(|row| {
            let b = row.binomial.as_ref().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).unwrap_or_default();
            format!("e_{}: [{}]", row.t, b)
        })
        .collect();
    Ok(format!("{} cosets; {}", r.cosets, summary.join("; ")))
}
