use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{iso_classes, GraphSet, InducedGroup, IsoKind, SWEEP_MAX_VERTICES};
use crate::circuit::NumericCircuit;
use crate::error::{guard, Error, Result};
use crate::exec::Strategy;

/// Number of isomorphism classes of loopless directed graphs on `n` vertices,
/// by Burnside's lemma over the cycle types of `S_n`.
pub fn polya_count(n: usize) -> Result<BigUint> {
    guard("vertices for cycle index", n as u128, 10)?;
    let mut total = BigUint::zero();
    let mut parts = Vec::new();
    cycle_types(n, n, &mut parts, &mut |cycles| {
        // Permutations with this cycle type: n! / prod(a^m_a * m_a!).
        let mut class_size = factorial(n);
        let mut i = 0;
        while i < cycles.len() {
            let a = cycles[i];
            let m = cycles[i..].iter().take_while(|&&b| b == a).count();
            class_size /= BigUint::from(a).pow(m as u32) * factorial(m);
            i += m;
        }
        let mut pair_cycles = 0usize;
        for (k, &a) in cycles.iter().enumerate() {
            pair_cycles += a - 1;
            for &b in &cycles[k + 1..] {
                pair_cycles += 2 * a.gcd(&b);
            }
        }
        total += class_size << pair_cycles;
    });
    Ok(total / factorial(n))
}

fn cycle_types(rest: usize, max: usize, parts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if rest == 0 {
        visit(parts);
        return;
    }
    for a in (1..=rest.min(max)).rev() {
        parts.push(a);
        cycle_types(rest - a, a, parts, visit);
        parts.pop();
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreReport {
    pub n: usize,
    /// `(p, α_p)` with `n! = prod p^α_p`.
    pub alphas: Vec<(usize, u64)>,
    pub alpha_sum: u64,
    pub bound: u128,
}

impl LegendreReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "alphas": self.alphas.iter().map(|(p, a)| json!({ "p": p, "alpha": a })).collect::<Vec<_>>(),
            "alpha_sum": self.alpha_sum,
            "bound": self.bound.to_string(),
        })
    }
}

fn digit_sum(mut n: usize, p: usize) -> usize {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// `(1 + 2*C(n,2)) * sum_p (n - s_p(n)) / (p - 1)`, where `s_p` is the base-`p` digit sum.
pub fn legendre_lower_bound(n: usize) -> Result<LegendreReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let primes = (2..=n).filter(|&p| (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0));
    let alphas: Vec<(usize, u64)> = primes.map(|p| (p, ((n - digit_sum(n, p)) / (p - 1)) as u64)).collect();
    let alpha_sum = alphas.iter().map(|(_, a)| a).sum::<u64>();
    let width = 1 + (n as u128) * (n as u128 - 1);
    Ok(LegendreReport { n, alphas, alpha_sum, bound: width * u128::from(alpha_sum) })
}

/// One orbit-grouped equation `sum_{R in class} K_R(B) / norm = target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub class: GraphSet,
    pub members: Vec<u64>,
    pub norm: f64,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub unknowns: u128,
    pub equations: usize,
    pub ones: usize,
    pub zeros: usize,
    /// Class count on the right-hand side of the size inequality.
    pub class_count: usize,
    pub holds: bool,
}

impl ConstraintReport {
    pub fn to_json(&self) -> Value {
        json!({
            "unknowns": self.unknowns.to_string(),
            "equations": self.equations,
            "ones": self.ones,
            "zeros": self.zeros,
            "class_count": self.class_count,
            "inequality_holds": self.holds,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub kind: IsoKind,
    pub s: GraphSet,
    pub rho: usize,
    pub d: usize,
    pub constraints: Vec<Constraint>,
    pub report: ConstraintReport,
}

impl ConstraintSystem {
    /// Per-equation residuals for a numeric hypermatrix over the edge variables.
    pub fn residuals(&self, b: &NumericCircuit) -> Result<Vec<f64>> {
        let e = self.s.n() * self.s.n().saturating_sub(1);
        if b.n() != e {
            return Err(Error::ArityMismatch(b.n(), e));
        }
        let k = b.expand_dense();
        Ok(self
            .constraints
            .iter()
            .map(|c| c.members.iter().map(|&r| k[r as usize]).sum::<f64>() / c.norm - c.target)
            .collect())
    }

    /// Euclidean norm of [`ConstraintSystem::residuals`].
    pub fn residual(&self, b: &NumericCircuit) -> Result<f64> {
        Ok(self.residuals(b)?.iter().map(|r| r * r).sum::<f64>().sqrt())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.to_string(),
            "s": self.s.to_json(),
            "rho": self.rho,
            "d": self.d,
            "constraints": self.constraints.iter().map(|c| json!({
                "class": c.class.to_json(),
                "orbit_size": c.members.len(),
                "norm": c.norm,
                "target": c.target,
            })).collect::<Vec<_>>(),
            "report": self.report.to_json(),
        })
    }
}

/// Orbit-grouped coefficient equations a `ρ × d × (1+E)` hypermatrix must satisfy
/// to compute the iso, sub or super polynomial of `s`.
pub fn constraint_system(kind: IsoKind, s: &GraphSet, rho: usize, d: usize) -> Result<ConstraintSystem> {
    guard("vertices for constraint system", s.n() as u128, SWEEP_MAX_VERTICES as u128)?;
    if rho == 0 || d == 0 {
        return Err(Error::Precondition("a circuit needs rho >= 1 and d >= 1".into()));
    }
    let n = s.n();
    let group = InducedGroup::new(n)?;
    let order = group.order();
    let maps_into = |a: u64, b: u64| (0..order).any(|k| group.image_bits(k, a) & !b == 0);
    let s_canon = group.canonical_bits(s.bits());

    let mut constraints = Vec::new();
    let mut ones = 0;
    let mut zeros = 0;
    for class in iso_classes(n, None, Strategy::default())? {
        let r = class.bits();
        let size = class.len();
        let (is_one, is_zero) = match kind {
            IsoKind::Iso => (r == s_canon, r != s_canon && size <= d),
            IsoKind::Sub => {
                let sub = maps_into(r, s.bits());
                (sub, !sub && size <= d)
            }
            IsoKind::Super => {
                let sup = maps_into(s.bits(), r);
                (sup, !sup)
            }
        };
        if !(is_one || is_zero) {
            continue;
        }
        let members: Vec<u64> = group.orbit(&class).iter().map(GraphSet::bits).collect();
        let (norm, target) = if is_one {
            ones += 1;
            (members.len() as f64, 1.0)
        } else {
            zeros += 1;
            (1.0, 0.0)
        };
        constraints.push(Constraint { class, members, norm, target });
    }
    let unknowns = rho as u128 * d as u128 * (1 + (n * n.saturating_sub(1)) as u128);
    let class_count = ones + zeros;
    let report = ConstraintReport {
        unknowns,
        equations: constraints.len(),
        ones,
        zeros,
        class_count,
        holds: unknowns <= class_count as u128,
    };
    Ok(ConstraintSystem { kind, s: *s, rho, d, constraints, report })
}
