use pdeforge_core::boolean::{
    boole_encode, interpolate_binary, interpolate_sumproduct, lagrange_sumproduct, pdp_evaluate, verify_evaluation,
    verify_pde, Formula, TruthTable, VerifyReport, VERIFY_MAX_VARS,
};
use pdeforge_core::circuit::{pdp_search, subset_product, superset_product, trivial_circuit, NumericCircuit, SearchConfig, SigmaPiSigma};
use pdeforge_core::exec::Strategy;
use pdeforge_core::matrixalg::{
    determinant, f_cycles, f_det_gf2, f_tree, gf2_invertible, integer_roots_check, permanent, tree_oracle, BitMatrix,
    DetMethod, ExactMatrix,
};
use pdeforge_core::mlpoly::{MLPoly, Monomial};
use pdeforge_core::orbits::{
    certificate_to_json, constraint_system, iso_classes, iso_polynomial, legendre_lower_bound, np_certificate,
    orbit_polynomial, polya_count, prop3_literal_verify, resolvent_check, GraphSet, InducedGroup, IsoKind,
};
use pdeforge_core::ring::RingKind;
use pdeforge_core::selftest::{run_criterion, Suite, CRITERIA};
use pdeforge_core::symmetric::{cardinality_pdp, factor_roots, CardinalityKind};
use serde_json::{json, Value};

use crate::input::{load_json, parse_fixed, parse_indices, parse_monomial, CliError};
use crate::{
    CardKind, CircuitCommand, Command, DetMethodArg, GraphKind, InterpMethod, PolySource, RingArg, SuiteArg, VerifyMode,
};

/// A successful run: the JSON body and whether every check in it passed.
pub struct Output {
    pub body: Value,
    pub passed: bool,
}

impl Output {
    fn new(schema: &str, mut body: Value, passed: bool) -> Output {
        let mut map = serde_json::Map::new();
        map.insert("schema".into(), json!(format!("pdeforge.{schema}/1")));
        if let Value::Object(fields) = body.take() {
            map.extend(fields);
        }
        Output { body: Value::Object(map), passed }
    }

    fn ok(schema: &str, body: Value) -> Output {
        Output::new(schema, body, true)
    }
}

type Run = Result<Output, CliError>;

enum Encoding {
    Poly(MLPoly),
    Exact(SigmaPiSigma),
    Numeric(NumericCircuit),
}

impl Encoding {
    fn load(src: &PolySource) -> Result<Encoding, CliError> {
        Ok(match (&src.poly, &src.circuit, &src.numeric) {
            (Some(p), _, _) => Encoding::Poly(MLPoly::from_json(&load_json(p)?)?),
            (_, Some(c), _) => Encoding::Exact(SigmaPiSigma::from_json(&load_json(c)?)?),
            (_, _, Some(c)) => Encoding::Numeric(NumericCircuit::from_json(&load_json(c)?)?),
            _ => return Err(CliError::Input("one of --poly, --circuit, --numeric is required".into())),
        })
    }

    fn n(&self) -> usize {
        match self {
            Encoding::Poly(p) => p.n(),
            Encoding::Exact(c) => c.n(),
            Encoding::Numeric(c) => c.n(),
        }
    }

    fn evaluate(&self, t: Monomial, m: u32) -> pdeforge_core::Result<bool> {
        match self {
            Encoding::Poly(p) => pdp_evaluate(p, t, m),
            Encoding::Exact(c) => pdp_evaluate(c, t, m),
            Encoding::Numeric(c) => pdp_evaluate(c, t, m),
        }
    }

    fn verify(&self, table: &TruthTable, m: u32, mode: VerifyMode, strategy: Strategy) -> Result<VerifyReport, CliError> {
        Ok(match (mode, self) {
            (VerifyMode::Pde, Encoding::Poly(p)) => verify_pde(p, table, m, strategy)?,
            (VerifyMode::Pde, Encoding::Exact(c)) => verify_pde(c, table, m, strategy)?,
            (VerifyMode::Pde, Encoding::Numeric(c)) => verify_pde(c, table, m, strategy)?,
            (VerifyMode::Eval, Encoding::Poly(p)) => verify_evaluation(p, table, strategy)?,
            (VerifyMode::Eval, Encoding::Exact(c)) => verify_evaluation(&c.expand(true)?, table, strategy)?,
            (VerifyMode::Eval, Encoding::Numeric(_)) => {
                return Err(CliError::Input("evaluation mode needs an exact polynomial or circuit".into()))
            }
        })
    }
}

fn poly_json(p: &MLPoly) -> Value {
    json!({ "polynomial": p.to_json(), "display": p.to_string(), "terms": p.term_count() })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

fn load_graph(arg: &str) -> Result<GraphSet, CliError> {
    Ok(GraphSet::from_json(&load_json(arg)?)?)
}

fn graph_kind(k: GraphKind) -> IsoKind {
    match k {
        GraphKind::Iso => IsoKind::Iso,
        GraphKind::Sub => IsoKind::Sub,
        GraphKind::Super => IsoKind::Super,
    }
}

pub fn run(cmd: Command, strategy: Strategy) -> Run {
    match cmd {
        Command::Interpolate { table, method, ring } => interpolate(&table, method, ring, strategy),
        Command::Boole { formula, n } => boole(&formula, n, strategy),
        Command::PdeEval { source, t, m } => {
            let enc = Encoding::load(&source)?;
            let t = parse_monomial(&t)?;
            let value = enc.evaluate(t, m)?;
            Ok(Output::ok(
                "pde-eval",
                json!({ "n": enc.n(), "t": t.vars().collect::<Vec<_>>(), "m": m, "value": u8::from(value) }),
            ))
        }
        Command::PdeVerify { source, table, m, mode } => {
            let enc = Encoding::load(&source)?;
            let table = TruthTable::from_json(&load_json(&table)?)?;
            let report = enc.verify(&table, m, mode, strategy)?;
            let mode = match mode {
                VerifyMode::Pde => "pde",
                VerifyMode::Eval => "eval",
            };
            let passed = report.passed();
            Ok(Output::new("pde-verify", merge(json!({ "mode": mode, "m": m }), report.to_json()), passed))
        }
        Command::Circuit { action } => circuit(action),
        Command::PdpSearch { poly, table, rho, d, starts, seed, tol, max_iters, fix } => {
            let target = match (poly, table) {
                (Some(p), _) => MLPoly::from_json(&load_json(&p)?)?,
                (None, Some(t)) => interpolate_sumproduct(&TruthTable::from_json(&load_json(&t)?)?, RingKind::Rational)?,
                (None, None) => return Err(CliError::Input("one of --poly or --table is required".into())),
            };
            let cfg = SearchConfig {
                starts,
                seed,
                tol,
                max_iters,
                fixed: fix.iter().map(|f| parse_fixed(f)).collect::<Result<_, _>>()?,
                strategy,
                ..SearchConfig::new(rho, d)
            };
            let report = pdp_search(&target, &cfg)?;
            let passed = report.converged;
            Ok(Output::new("pdp-search", merge(json!({ "target": poly_json(&target) }), report.to_json()), passed))
        }
        Command::Cardinality { kind, s, n, roots, tol } => cardinality(kind, s, n, roots, tol, strategy),
        Command::Orbit { graph, classes, max_size } => match (graph, classes) {
            (Some(g), _) => orbit(&load_graph(&g)?),
            (None, Some(n)) => {
                let reps = iso_classes(n, max_size, strategy)?;
                let count = if max_size.is_none() && n <= 10 { Some(polya_count(n)?.to_string()) } else { None };
                Ok(Output::ok(
                    "orbit-classes",
                    json!({
                        "n": n,
                        "max_size": max_size,
                        "count": reps.len(),
                        "polya_count": count,
                        "classes": reps.iter().map(GraphSet::to_json).collect::<Vec<_>>(),
                    }),
                ))
            }
            (None, None) => Err(CliError::Input("one of --graph or --classes is required".into())),
        },
        Command::IsoPde { kind, s, t, m, polynomial } => {
            let (s, t) = (load_graph(&s)?, load_graph(&t)?);
            if s.n() != t.n() {
                return Err(pdeforge_core::Error::ArityMismatch(s.n(), t.n()).into());
            }
            let kind = graph_kind(kind);
            let p = iso_polynomial(kind, &s)?;
            let value = pdeforge_core::boolean::pde_evaluate(&p, t.monomial(), m)?;
            let mut body = json!({
                "kind": kind.to_string(),
                "s": s.to_json(),
                "t": t.to_json(),
                "m": m,
                "value": u8::from(value),
                "terms": p.term_count(),
            });
            if polynomial {
                body["polynomial"] = p.to_json();
            }
            Ok(Output::ok("iso-pde", body))
        }
        Command::Certificate { s, t } => {
            let (s, t) = (load_graph(&s)?, load_graph(&t)?);
            let cert = np_certificate(&s, &t)?;
            let isomorphic = cert != Default::default();
            Ok(Output::ok(
                "certificate",
                merge(
                    json!({ "s": s.to_json(), "t": t.to_json(), "isomorphic": isomorphic }),
                    certificate_to_json(s.n(), &cert),
                ),
            ))
        }
        Command::Bounds { n, kind, s, rho, d } => bounds(n, kind, s, rho, d),
        Command::Prop3Verify { nvars, s } => {
            let report = prop3_literal_verify(nvars, parse_monomial(&s)?)?;
            let passed = report.equal;
            Ok(Output::new("prop3-verify", report.to_json(), passed))
        }
        Command::ResolventCheck { graph, t_max } => {
            let report = resolvent_check(&load_graph(&graph)?, t_max, strategy)?;
            let passed = report.passed();
            Ok(Output::new("resolvent-check", report.to_json(), passed))
        }
        Command::Det { method, matrix } => {
            let a = ExactMatrix::from_json(&load_json(&matrix)?)?;
            let (method, name) = match method {
                DetMethodArg::Grassmann => (DetMethod::Grassmann, "grassmann"),
                DetMethodArg::Vandermonde => (DetMethod::Vandermonde, "vandermonde"),
                DetMethodArg::Cofactor => (DetMethod::Cofactor, "cofactor"),
            };
            let value = determinant(&a, method)?;
            Ok(Output::ok("det", json!({ "method": name, "n": a.n(), "value": value.to_string() })))
        }
        Command::Perm { matrix } => {
            let a = ExactMatrix::from_json(&load_json(&matrix)?)?;
            Ok(Output::ok("perm", json!({ "n": a.n(), "value": permanent(&a)?.to_string() })))
        }
        Command::Ftree { matrix } => {
            let m = BitMatrix::from_json(&load_json(&matrix)?)?;
            let value = f_tree(&m)?;
            let oracle = tree_oracle(&m);
            Ok(Output::new(
                "ftree",
                json!({ "n": m.n(), "value": u8::from(value), "oracle": u8::from(oracle) }),
                value == oracle,
            ))
        }
        Command::Fcycles { matrix } => {
            let m = BitMatrix::from_json(&load_json(&matrix)?)?;
            let value = f_cycles(&m)?;
            Ok(Output::ok("fcycles", json!({ "n": m.n(), "value": u8::from(value) })))
        }
        Command::Fdet2 { bits, n } => {
            let value = f_det_gf2(bits, n)?;
            let oracle = gf2_invertible(&BitMatrix::from_index(n, bits)?);
            Ok(Output::new(
                "fdet2",
                json!({ "n": n, "bits": bits, "value": u8::from(value), "oracle": u8::from(oracle) }),
                value == oracle,
            ))
        }
        Command::RootsTranscendental { d, tol, grid_step } => {
            let report = integer_roots_check(d, tol, grid_step)?;
            let passed = report.passed();
            Ok(Output::new("roots-transcendental", report.to_json(), passed))
        }
        Command::Selftest { suite, seed, criterion, timings } => selftest(suite, seed, &criterion, timings, strategy),
    }
}

fn interpolate(table: &str, method: InterpMethod, ring: Option<RingArg>, strategy: Strategy) -> Run {
    let table = TruthTable::from_json(&load_json(table)?)?;
    let ring = match ring {
        Some(RingArg::Gf2) => RingKind::Gf2,
        Some(RingArg::Q) => RingKind::Rational,
        None if matches!(method, InterpMethod::Binary) => RingKind::Gf2,
        None => RingKind::Rational,
    };
    let (p, report, name) = match method {
        InterpMethod::Sumproduct => {
            let p = interpolate_sumproduct(&table, ring)?;
            let r = verify_pde(&p, &table, 1, strategy)?;
            (p, r, "sumproduct")
        }
        InterpMethod::Binary => {
            if ring != RingKind::Gf2 {
                return Err(CliError::Input("binary interpolation works over gf2 only".into()));
            }
            let p = interpolate_binary(&table)?;
            let r = verify_pde(&p, &table, 1, strategy)?;
            (p, r, "binary")
        }
        InterpMethod::Lagrange => {
            let p = lagrange_sumproduct(&table, ring)?;
            let r = verify_evaluation(&p, &table, strategy)?;
            (p, r, "lagrange")
        }
    };
    let passed = report.passed();
    let body = merge(
        json!({ "method": name, "ring": ring.to_string(), "table": table.to_json(), "verify": report.to_json() }),
        poly_json(&p),
    );
    Ok(Output::new("interpolate", body, passed))
}

fn boole(src: &str, n: Option<usize>, strategy: Strategy) -> Run {
    let f = Formula::parse(src)?;
    let n = n.unwrap_or_else(|| f.max_var().map_or(0, |i| i + 1));
    let p = boole_encode(&f, n)?;
    let table = f.truth_table(n)?;
    let report = verify_evaluation(&p, &table, strategy)?;
    let passed = report.passed();
    let body = merge(
        json!({
            "formula": f.to_string(),
            "n": n,
            "leaves": f.leaf_count(),
            "depth": f.depth(),
            "table": table.to_json(),
            "verify": report.to_json(),
        }),
        poly_json(&p),
    );
    Ok(Output::new("boole", body, passed))
}

fn circuit(action: CircuitCommand) -> Run {
    let (c, label) = match action {
        CircuitCommand::Subset { s, n } => (subset_product(&parse_indices(&s)?, n)?, "subset"),
        CircuitCommand::Superset { s, n } => (superset_product(&parse_indices(&s)?, n)?, "superset"),
        CircuitCommand::Trivial { poly } => (trivial_circuit(&MLPoly::from_json(&load_json(&poly)?)?)?, "trivial"),
        CircuitCommand::Expand { circuit, no_reduce } => {
            let c = SigmaPiSigma::from_json(&load_json(&circuit)?)?;
            let body = if no_reduce {
                let g = c.expand_general()?;
                json!({ "terms": g.term_count(), "multilinear": g.is_multilinear() })
            } else {
                poly_json(&c.expand(true)?)
            };
            return Ok(Output::ok(
                "circuit",
                merge(json!({ "kind": "expand", "reduce": !no_reduce, "size": c.size_report().to_json() }), body),
            ));
        }
    };
    let expanded = c.expand(true)?;
    Ok(Output::ok(
        "circuit",
        merge(
            json!({ "kind": label, "circuit": c.to_json(), "size": c.size_report().to_json() }),
            poly_json(&expanded),
        ),
    ))
}

fn cardinality(kind: CardKind, s: usize, n: usize, roots: bool, tol: f64, strategy: Strategy) -> Run {
    let kind = match kind {
        CardKind::Le => CardinalityKind::AtMost,
        CardKind::Ge => CardinalityKind::AtLeast,
        CardKind::Eq => CardinalityKind::Exactly,
    };
    let q = cardinality_pdp(kind, s, n)?;
    let mut body = merge(json!({ "kind": kind.to_string(), "s": s, "size": q.size_report().to_json() }), q.to_json());
    let mut passed = true;
    if n <= VERIFY_MAX_VARS {
        let table = TruthTable::from_fn(n, |b| kind.holds(b.count_ones() as usize, s))?;
        let report = verify_pde(&q, &table, 1, strategy)?;
        passed &= report.passed();
        body["verify"] = report.to_json();
    } else {
        body["verify"] = Value::Null;
    }
    if roots {
        body["roots"] = if q.degree() == 0 { json!({ "leading": null, "roots": [], "max_residual": 0.0 }) } else { factor_roots(&q, tol)?.to_json() };
    }
    Ok(Output::new("cardinality", body, passed))
}

fn orbit(s: &GraphSet) -> Run {
    let group = InducedGroup::new(s.n())?;
    let orbit = group.orbit(s);
    let autos = group.automorphisms(s);
    let p = orbit_polynomial(s)?;
    Ok(Output::ok(
        "orbit",
        json!({
            "graph": s.to_json(),
            "canonical": group.canonical(s).to_json(),
            "group_order": group.order(),
            "orbit_size": orbit.len(),
            "automorphism_count": autos.len(),
            "automorphisms": autos.iter().map(|a| a.image().to_vec()).collect::<Vec<_>>(),
            "orbit": orbit.iter().map(GraphSet::to_json).collect::<Vec<_>>(),
            "polynomial": p.to_json(),
        }),
    ))
}

fn bounds(n: usize, kind: Option<GraphKind>, s: Option<String>, rho: Option<usize>, d: Option<usize>) -> Run {
    let legendre = legendre_lower_bound(n)?;
    let polya = if n <= 10 { Some(polya_count(n)?.to_string()) } else { None };
    let mut body = json!({ "n": n, "legendre": legendre.to_json(), "polya_count": polya });
    if let (Some(kind), Some(s), Some(rho), Some(d)) = (kind, s, rho, d) {
        let s = load_graph(&s)?;
        if s.n() != n {
            return Err(pdeforge_core::Error::ArityMismatch(n, s.n()).into());
        }
        body["constraints"] = constraint_system(graph_kind(kind), &s, rho, d)?.to_json();
    }
    Ok(Output::ok("bounds", body))
}

fn selftest(suite: SuiteArg, seed: u64, only: &[u8], timings: bool, strategy: Strategy) -> Run {
    let (suite, name) = match suite {
        SuiteArg::Quick => (Suite::Quick, "quick"),
        SuiteArg::Full => (Suite::Full, "full"),
    };
    let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|&(id, _)| id).collect() } else { only.to_vec() };
    let results = ids.iter().map(|&id| run_criterion(id, suite, seed, strategy)).collect::<Result<Vec<_>, _>>()?;
    let passed = results.iter().filter(|r| r.passed).count();
    let rows: Vec<Value> = results
        .iter()
        .map(|r| {
            let mut v = r.to_json();
            if !timings {
                v.as_object_mut().expect("criterion JSON is an object").remove("seconds");
            }
            v
        })
        .collect();
    Ok(Output::new(
        "selftest",
        json!({ "suite": name, "seed": seed, "passed": passed, "total": results.len(), "results": rows }),
        passed == results.len(),
    ))
}
