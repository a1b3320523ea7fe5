use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use symplie::catalog::{self, CatalogEntry, ExpectedInvariants};
use symplie::exactla::{Subspace, Vector, Q};
use symplie::lagext::{FlatLieAlgebra, extension_condition_witness, lagrangian_cohomology, lagrangian_extension, ExtensionTriple};
use symplie::liealg::{center, coboundary_matrix, form_derive_unchecked, series, Cochain, LieAlgebra, Representation, SeriesKind};
use symplie::oxidation::{oxidation_obstruction, symplectic_oxidation, OxidationData};
use symplie::reduction::{corank_of, irreducible_base, reduce, BaseStatus, Strategy};
use symplie::search::{
    isotropic_ideals_enumerate, lagrangian_ideal, lagrangian_subalgebra, symplectic_rank_bounds, EnumMode,
    LagrangianIdealResult, RankBounds,
};
use symplie::symplectic::SymplecticLieAlgebra;

use crate::format::{self, AlgebraFile, Diagnostic, Loaded, ParseError};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "symplie", version, about = "Exact analysis of symplectic Lie algebras over the rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Compact single-line JSON instead of indented output.
    #[arg(long, global = true)]
    json: bool,
    /// Search budget for candidate enumeration.
    #[arg(long, global = true, default_value_t = 2000)]
    budget: usize,
    /// Adds a seeded randomized search for isotropic ideals.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a file.
    Validate { input: String },
    /// Series, centre, cohomology, rank bounds and Lagrangian-ideal status.
    Analyze { input: String },
    /// One reduction step by an isotropic ideal.
    Reduce {
        input: String,
        /// Marked subspace name, comma-separated indices or labels, or `span:v1;v2`.
        #[arg(long)]
        ideal: String,
    },
    /// Reduces repeatedly to an irreducible base.
    Base {
        input: String,
        #[arg(long, default_value = "central", value_parser = parse_strategy)]
        strategy: Strategy,
    },
    /// Symplectic rank bounds with certificates.
    Rank { input: String },
    /// Lagrangian ideal and Lagrangian subalgebra search.
    Lagrangian { input: String },
    /// Symplectic oxidation by the `phi` and optional `lambda` data of the file.
    Oxidize { input: String },
    /// Lagrangian extension of the flat algebra in the file by its `alpha` cocycle.
    Extend { input: String },
    /// Trivial-coefficient cohomology, and Lagrangian cohomology for flat algebras.
    Cohomology { input: String },
    /// Lists catalog entries, or prints one as a file with its expected invariants.
    Catalog { name: Option<String> },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    Strategy::parse(s).ok_or_else(|| format!("unknown strategy {s:?}; expected central, any or greedy"))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(ParseError),
    Invalid(Diagnostic),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Diagnostic> for Failure {
    fn from(e: Diagnostic) -> Self {
        Failure::Invalid(e)
    }
}

struct Outcome {
    code: i32,
    report: Value,
}

fn ok(report: Value) -> Result<Outcome, Failure> {
    Ok(Outcome { code: EXIT_OK, report })
}

struct Input {
    loaded: Loaded,
    /// Flat base carried by a catalog entry built as a Lagrangian extension.
    base_flat: Option<FlatLieAlgebra>,
}

fn parse_params(s: &str) -> Result<Vec<Q>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<Q>().map_err(|_| Failure::Usage(format!("bad catalog parameter {t:?}"))))
        .collect()
}

/// `catalog:NAME[:p1,p2,...]`.
fn catalog_entry(spec: &str) -> Result<CatalogEntry, Failure> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n, parse_params(p)?),
        None => (spec, vec![]),
    };
    catalog::build(name, &params).map_err(|e| Failure::Usage(e.to_string()))
}

fn read_input(input: &str) -> Result<Input, Failure> {
    let (file, base_flat) = match input.strip_prefix("catalog:") {
        Some(spec) => {
            let e = catalog_entry(spec)?;
            (AlgebraFile::from_entry(&e), e.flat)
        }
        None => {
            let text = std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{input}: {e}")))?;
            (format::parse(&text)?, None)
        }
    };
    Ok(Input { loaded: file.load()?, base_flat })
}

fn require_symplectic(inp: &Input) -> Result<&SymplecticLieAlgebra, Failure> {
    inp.loaded.symplectic.as_ref().ok_or_else(|| Failure::Invalid(Diagnostic::Other("no omega given".into())))
}

fn resolve_subspace(spec: &str, l: &Loaded) -> Result<Subspace, Failure> {
    let n = l.algebra.dim();
    if let Some((_, s)) = l.marked.iter().find(|(m, _)| m == spec) {
        return Ok(s.clone());
    }
    if let Some(body) = spec.strip_prefix("span:") {
        let vs: Vec<Vector> = body
            .split(';')
            .map(|v| {
                let v: Vec<Q> = v.split(',').map(|t| t.trim().parse::<Q>()).collect::<Result<_, _>>().map_err(|_| Failure::Usage(format!("bad vector {v:?}")))?;
                if v.len() != n {
                    return Err(Failure::Usage(format!("vector {v:?} does not have {n} entries")));
                }
                Ok(v)
            })
            .collect::<Result<_, _>>()?;
        return Ok(Subspace::span(n, &vs));
    }
    let labels = l.algebra.labels();
    let idx: Vec<usize> = spec
        .split(',')
        .map(|t| {
            let t = t.trim();
            labels.iter().position(|x| x == t).or_else(|| t.parse::<usize>().ok().filter(|&i| i < n)).ok_or_else(|| Failure::Usage(format!("unknown subspace or index {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    Ok(Subspace::coordinate(n, &idx))
}

/// Rank bounds, with the lower bound raised by a seeded randomized search when requested.
fn rank_bounds(s: &SymplecticLieAlgebra, budget: usize, seed: Option<u64>) -> RankBounds {
    let mut rb = symplectic_rank_bounds(s, budget);
    if let Some(seed) = seed {
        if let Some(j) = isotropic_ideals_enumerate(s, EnumMode::Randomized { seed }, budget).into_iter().next() {
            if j.dim() > rb.lower {
                rb.lower = j.dim();
                rb.lower_witness = j;
            }
        }
    }
    rb
}

/// `(degree, dim Z, dim B, dim H)` for degrees 0, 1, 2 with trivial coefficients.
fn trivial_cohomology(g: &LieAlgebra) -> Vec<(usize, usize, usize, usize)> {
    let n = g.dim();
    if n == 0 {
        return vec![(0, 1, 0, 1)];
    }
    let rep = Representation::trivial(g, 1);
    let ranks: Vec<usize> = (0..=2).map(|d| coboundary_matrix(&rep, d).map(|m| m.rank()).unwrap_or(0)).collect();
    (0..=2usize.min(n))
        .map(|d| {
            let cd = symplie::liealg::binomial(n, d);
            let z = cd - ranks[d];
            let b = if d == 0 { 0 } else { ranks[d - 1] };
            (d, z, b, z - b)
        })
        .collect()
}

fn validate(inp: Input) -> Result<Outcome, Failure> {
    let names: Vec<&str> = inp.loaded.marked.iter().map(|(n, _)| n.as_str()).collect();
    ok(json!({
        "valid": true,
        "dim": inp.loaded.algebra.dim(),
        "symplectic": inp.loaded.symplectic.is_some(),
        "flat": inp.loaded.flat.is_some(),
        "subspaces": names,
    }))
}

fn analyze(inp: Input, budget: usize, seed: Option<u64>) -> Result<Outcome, Failure> {
    let g = &inp.loaded.algebra;
    let desc = series(g, SeriesKind::Descending);
    let asc = series(g, SeriesKind::Ascending);
    let der = series(g, SeriesKind::Derived);
    let coh = trivial_cohomology(g);
    let find = |d: usize| coh.iter().find(|c| c.0 == d).copied().unwrap_or((d, 0, 0, 0));
    let mut r = json!({
        "dim": g.dim(),
        "labels": g.labels(),
        "nilpotent": desc.class.is_some(),
        "nilpotency_class": desc.class,
        "solvability_degree": der.class,
        "lower_central": desc.dims(),
        "upper_central": asc.dims(),
        "derived": der.dims(),
        "center": report::subspace(&center(g)),
        "h1_dim": find(1).3,
        "h2_dim": find(2).3,
        "z2_dim": find(2).1,
        "b2_dim": find(2).2,
        "d_lambda2_dim": if g.dim() >= 2 { symplie::liealg::binomial(g.dim(), 2) - find(2).1 } else { 0 },
        "symplectic": inp.loaded.symplectic.is_some(),
    });
    if let Some(s) = &inp.loaded.symplectic {
        r["rank"] = report::rank(&rank_bounds(s, budget, seed));
        r["lagrangian_ideal"] = report::lagrangian_ideal(&lagrangian_ideal(s, budget));
    }
    ok(r)
}

fn reduce_cmd(inp: Input, ideal: &str) -> Result<Outcome, Failure> {
    let s = require_symplectic(&inp)?;
    let j = resolve_subspace(ideal, &inp.loaded)?;
    let step = reduce(s, &j).map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
    let red = &step.reduced;
    let rg = red.algebra();
    let text = format::serialize(&AlgebraFile::from_symplectic(red, &[]));
    ok(json!({
        "ideal": report::subspace(&j),
        "kind": step.kind.name(),
        "corank": corank_of(s, &j),
        "reduced": {
            "dim": red.dim(),
            "abelian": rg.is_abelian(),
            "lower_central": series(rg, SeriesKind::Descending).dims(),
            "derived": series(rg, SeriesKind::Derived).dims(),
            "file": text,
        },
    }))
}

fn base_cmd(inp: Input, strategy: Strategy, budget: usize) -> Result<Outcome, Failure> {
    let s = require_symplectic(&inp)?;
    let b = irreducible_base(s, strategy, budget).map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
    let steps: Vec<Value> = b
        .sequence
        .steps
        .iter()
        .map(|st| json!({ "ideal_dim": st.ideal.dim(), "kind": st.kind.name(), "reduced_dim": st.reduced.dim() }))
        .collect();
    let status = match b.status {
        BaseStatus::Irreducible => "irreducible",
        BaseStatus::Unresolved => "unresolved",
    };
    let r = json!({
        "strategy": strategy.name(),
        "status": status,
        "certificate": b.certificate,
        "length": b.sequence.len(),
        "steps": steps,
        "base": { "dim": b.base.dim(), "fingerprint": report::fingerprint(&b.fingerprint) },
    });
    let code = if b.status == BaseStatus::Unresolved { EXIT_UNRESOLVED } else { EXIT_OK };
    Ok(Outcome { code, report: r })
}

fn rank_cmd(inp: Input, budget: usize, seed: Option<u64>) -> Result<Outcome, Failure> {
    let s = require_symplectic(&inp)?;
    let rb = rank_bounds(s, budget, seed);
    let code = if rb.is_exact() { EXIT_OK } else { EXIT_UNRESOLVED };
    Ok(Outcome { code, report: report::rank(&rb) })
}

fn lagrangian_cmd(inp: Input, budget: usize) -> Result<Outcome, Failure> {
    let s = require_symplectic(&inp)?;
    let li = lagrangian_ideal(s, budget);
    let mut r = report::lagrangian_ideal(&li);
    r["subalgebra"] = report::lagrangian_subalgebra(&lagrangian_subalgebra(s, budget));
    let code = if matches!(li, LagrangianIdealResult::Unresolved { .. }) { EXIT_UNRESOLVED } else { EXIT_OK };
    Ok(Outcome { code, report: r })
}

fn oxidize_cmd(inp: Input) -> Result<Outcome, Failure> {
    let s = require_symplectic(&inp)?;
    let n = s.dim();
    let phi = inp.loaded.phi.clone().ok_or_else(|| Failure::Invalid(Diagnostic::Other("no phi given".into())))?;
    let lambda = match &inp.loaded.lambda {
        Some(l) => l.clone(),
        None => {
            let ob = oxidation_obstruction(s, &phi).map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
            ob.lambda.ok_or_else(|| Failure::Invalid(Diagnostic::Other("omega(phi, phi) is not exact".into())))?
        }
    };
    let d = OxidationData {
        base: s.algebra().clone(),
        omega_bar: Some(s.form().clone()),
        alpha: form_derive_unchecked(&Cochain::from_skew_matrix(s.form()), &phi),
        phi,
        lambda: lambda.clone(),
    };
    let ox = symplectic_oxidation(&d).map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
    let mut labels = vec![String::from("xi")];
    labels.extend(s.algebra().labels().iter().cloned());
    labels.push(String::from("H"));
    let unique = labels.iter().enumerate().all(|(i, a)| labels[..i].iter().all(|b| b != a));
    let g = if unique { ox.algebra().clone().with_labels(labels) } else { ox.algebra().clone() };
    let ox = SymplecticLieAlgebra::new(&g, ox.form()).map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
    let text = format::serialize(&AlgebraFile::from_symplectic(&ox, &[]));
    ok(json!({ "dim": n + 2, "lambda": report::vector(lambda.coeffs()), "file": text }))
}

fn extend_cmd(inp: Input) -> Result<Outcome, Failure> {
    let flat = inp.loaded.flat.clone().or(inp.base_flat).ok_or_else(|| Failure::Invalid(Diagnostic::Other("no nabla given".into())))?;
    let n = flat.dim();
    let alpha = inp.loaded.alpha.clone().unwrap_or_else(|| Cochain::zero(2, n, n));
    if let Some((i, j, k)) = extension_condition_witness(&alpha) {
        return Err(Failure::Invalid(Diagnostic::Other(format!("alpha violates the cyclic condition on ({i}, {j}, {k})"))));
    }
    let p = lagrangian_extension(&ExtensionTriple { flat: flat.clone(), alpha })
        .map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
    let mut labels = flat.algebra().labels().to_vec();
    labels.extend(flat.algebra().labels().iter().map(|l| format!("{l}*")));
    let g = p.s.algebra().clone().with_labels(labels);
    let s = SymplecticLieAlgebra::new(&g, p.s.form()).map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
    let marked = vec![(String::from("ideal"), p.a.clone()), (String::from("complement"), p.n.clone())];
    ok(json!({ "dim": 2 * n, "file": format::serialize(&AlgebraFile::from_symplectic(&s, &marked)) }))
}

fn cohomology_cmd(inp: Input) -> Result<Outcome, Failure> {
    let degrees: Vec<Value> = trivial_cohomology(&inp.loaded.algebra)
        .into_iter()
        .map(|(d, z, b, h)| json!({ "degree": d, "z_dim": z, "b_dim": b, "h_dim": h }))
        .collect();
    let mut r = json!({ "trivial": degrees });
    if let Some(flat) = &inp.loaded.flat {
        let c = lagrangian_cohomology(flat).map_err(|e| Failure::Invalid(Diagnostic::Other(e.to_string())))?;
        r["lagrangian"] = json!({
            "c1l_dim": c.c1l_dim,
            "c2l_dim": c.c2l.dim(),
            "z2_rho_dim": c.z2_rho.dim(),
            "b2_rho_dim": c.b2_rho.dim(),
            "z2l_dim": c.z2l.dim(),
            "b2l_dim": c.b2l.dim(),
            "h2l_dim": c.h2l_dim,
            "kappa_dim": c.kappa_dim,
        });
    }
    ok(r)
}

fn expected_json(x: &ExpectedInvariants) -> Value {
    json!({
        "dim": x.dim,
        "c_series": x.c_series,
        "class": x.class,
        "solvability_degree": x.solvability_degree,
        "rank": x.rank,
        "lagrangian_ideal": x.lagrangian_ideal,
        "z2_dim": x.z2_dim,
        "b2_dim": x.b2_dim,
        "d_lambda2_dim": x.d_lambda2_dim,
        "max_abelian_ideal_dim": x.max_abelian_ideal_dim,
        "base_steps": x.base_steps,
        "nilpotent": x.nilpotent,
    })
}

fn catalog_cmd(name: Option<String>) -> Result<Outcome, Failure> {
    match name {
        None => ok(json!({ "entries": catalog::NAMES })),
        Some(spec) => {
            let spec = spec.strip_prefix("catalog:").unwrap_or(&spec);
            let e = catalog_entry(spec)?;
            ok(json!({
                "name": e.name,
                "params": e.params.iter().map(report::rational).collect::<Vec<_>>(),
                "file": format::serialize(&AlgebraFile::from_entry(&e)),
                "expected": expected_json(&e.expected),
            }))
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, Failure> {
    let (budget, seed) = (cli.budget, cli.seed);
    match cli.command {
        Command::Validate { input } => validate(read_input(&input)?),
        Command::Analyze { input } => analyze(read_input(&input)?, budget, seed),
        Command::Reduce { input, ideal } => reduce_cmd(read_input(&input)?, &ideal),
        Command::Base { input, strategy } => base_cmd(read_input(&input)?, strategy, budget),
        Command::Rank { input } => rank_cmd(read_input(&input)?, budget, seed),
        Command::Lagrangian { input } => lagrangian_cmd(read_input(&input)?, budget),
        Command::Oxidize { input } => oxidize_cmd(read_input(&input)?),
        Command::Extend { input } => extend_cmd(read_input(&input)?),
        Command::Cohomology { input } => cohomology_cmd(read_input(&input)?),
        Command::Catalog { name } => catalog_cmd(name),
    }
}

fn emit(out: &mut dyn Write, v: &Value, compact: bool) {
    let s = if compact { serde_json::to_string(v) } else { serde_json::to_string_pretty(v) }.expect("json");
    let _ = writeln!(out, "{s}");
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let compact = cli.json;
    match dispatch(cli) {
        Ok(o) => {
            emit(out, &o.report, compact);
            o.code
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Parse(p)) => {
            let v = json!({ "valid": false, "invariant": "syntax", "line": p.line, "column": p.column, "message": p.message });
            emit(out, &v, compact);
            EXIT_INVALID
        }
        Err(Failure::Invalid(d)) => {
            emit(out, &report::diagnostic(&d), compact);
            EXIT_INVALID
        }
    }
}
