//! Batch front end: file ingestion, the bundled algebra catalog, subcommand
//! dispatch, and machine-readable reports.
//!
//! Exit codes: 0 verdict computed, 1 input error (files, flags, parsing),
//! 2 invariant or precondition violation.

use clap::{Args, Parser, Subcommand};
use dixmier_core::coadjoint::{
    coad, exp_ad, lattice_bound, lattice_containment, orbit_kernel_compare, scale_exponent,
    twist_stabilizer_check,
};
use dixmier_core::dixmier::{
    control_check_kernel, ideal_generated_truncated, kernel_truncated, ordered_basis_names,
    perp_basis, perp_partials_in_image, AdaptedBasis, InducedModuleOracle, RhoMap,
};
use dixmier_core::forms::{
    irreducible_polarisation, is_metabelian, is_polarisation, is_special, reducing_quadruple,
    stabilizer, vergne_polarisation, LinearForm,
};
use dixmier_core::lie::LieAlgebra;
use dixmier_core::linalg::format_vector;
use dixmier_core::pbw::monomials_up_to;
use dixmier_core::scalars::Rat;
use dixmier_core::{catalog, corpus, io};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const SCHEMA_VERSION: u32 = 1;
const DEGREE_ENV: &str = "DIXMIER_DEGREE";

#[derive(Parser)]
#[command(
    name = "dixmier",
    version,
    about = "Exact polarisations, operator realisations and truncated annihilator kernels \
             for nilpotent Lie algebras over Q with p-adic lattice bookkeeping"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CommonArgs {
    /// Algebra file (JSON)
    #[arg(long)]
    file: PathBuf,
    /// Degree truncation D (default 3, or DIXMIER_DEGREE)
    #[arg(long)]
    degree: Option<u32>,
    /// Deformation level applied to the input lattice before computing
    #[arg(long, default_value_t = 0)]
    level: u32,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Algebra file; without it the whole bundled catalog is checked
    #[arg(long)]
    file: Option<PathBuf>,
    /// Maximum monomial degree for the cross-check (default 4)
    #[arg(long)]
    max_degree: Option<u32>,
    /// Seed for the extra randomised forms
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    file: PathBuf,
    /// Generator vector u, comma-separated rationals
    #[arg(long)]
    u: String,
    #[arg(long, default_value_t = 0)]
    level: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    file: PathBuf,
    /// Second form, comma-separated rationals
    #[arg(long)]
    lambda2: String,
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, default_value_t = 0)]
    level: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    json: bool,
    /// Prime used to instantiate the bundled algebras
    #[arg(long, default_value_t = 3)]
    prime: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an algebra file and report every violated invariant
    Check(CommonArgs),
    /// Stabiliser and polarisations of the file's linear form
    Polarize(CommonArgs),
    /// Deterministic reducing quadruple
    Reduce(CommonArgs),
    /// Operator table of the differential-operator realisation
    Rho(CommonArgs),
    /// Truncated annihilator kernel and the two-sided span it generates
    Kernel(CommonArgs),
    /// Cross-check the operator realisation against module straightening
    Oracle(OracleArgs),
    /// Coadjoint twist by exp(ad u) with lattice bounds
    Orbit(OrbitArgs),
    /// Compare truncated kernels of two forms
    Compare(CompareArgs),
    /// Special-form and metabelian predicates
    Special(CommonArgs),
    /// Control check of the kernel against the reducing quadruple
    Control(CommonArgs),
    /// Perpendicular basis extraction for the induced ideal
    Perp(CommonArgs),
    /// List the bundled algebras
    Catalog(CatalogArgs),
}

enum Failure {
    /// Exit 1: unreadable input, malformed files or flags.
    Input(String),
    /// Exit 2: violated invariants or math preconditions.
    Math(String),
}

type CmdResult = Result<(String, Value), Failure>;

impl From<dixmier_core::Error> for Failure {
    fn from(e: dixmier_core::Error) -> Self {
        match e {
            dixmier_core::Error::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json_wanted, outcome) = run(cli.cmd);
    match outcome {
        Ok((text, value)) => {
            if json_wanted {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("valid json")
                );
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Print without panicking when the consumer closes the pipe early.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.write_all(b"\n").is_err() {
        std::process::exit(0);
    }
}

fn run(cmd: Cmd) -> (bool, CmdResult) {
    match cmd {
        Cmd::Check(a) => (a.json, cmd_check(&a)),
        Cmd::Polarize(a) => (a.json, cmd_polarize(&a)),
        Cmd::Reduce(a) => (a.json, cmd_reduce(&a)),
        Cmd::Rho(a) => (a.json, cmd_rho(&a)),
        Cmd::Kernel(a) => (a.json, cmd_kernel(&a)),
        Cmd::Oracle(a) => (a.json, cmd_oracle(&a)),
        Cmd::Orbit(a) => (a.json, cmd_orbit(&a)),
        Cmd::Compare(a) => (a.json, cmd_compare(&a)),
        Cmd::Special(a) => (a.json, cmd_special(&a)),
        Cmd::Control(a) => (a.json, cmd_control(&a)),
        Cmd::Perp(a) => (a.json, cmd_perp(&a)),
        Cmd::Catalog(a) => (a.json, cmd_catalog(&a)),
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &PathBuf, level: u32) -> Result<(LieAlgebra, Option<LinearForm>), Failure> {
    let text = read_file(path)?;
    let (g, lambda) = io::parse_algebra(&text)?;
    Ok((g.deform(level), lambda))
}

fn require_lambda(lambda: Option<LinearForm>) -> Result<LinearForm, Failure> {
    lambda.ok_or_else(|| Failure::Input("the algebra file has no `lambda` block".into()))
}

fn effective_degree(flag: Option<u32>) -> Result<u32, Failure> {
    let degree = match flag {
        Some(d) => d,
        None => match std::env::var(DEGREE_ENV) {
            Ok(s) => s
                .parse::<u32>()
                .map_err(|_| Failure::Input(format!("{DEGREE_ENV} must be an integer")))?,
            Err(_) => 3,
        },
    };
    if degree < 1 {
        return Err(Failure::Input("degree must be at least 1".into()));
    }
    Ok(degree)
}

fn parse_rational_list(s: &str, expected: usize, what: &str) -> Result<Vec<Rat>, Failure> {
    let coords: Result<Vec<Rat>, _> = s.split(',').map(|t| Rat::from_str(t.trim())).collect();
    let coords = coords.map_err(|e| Failure::Input(format!("cannot parse {what} {s:?}: {e}")))?;
    if coords.len() != expected {
        return Err(Failure::Input(format!(
            "{what} has {} entries, expected {expected}",
            coords.len()
        )));
    }
    Ok(coords)
}

fn report_header(command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("command".into(), command.into());
    m
}

fn cmd_check(a: &CommonArgs) -> CmdResult {
    let text = read_file(&a.file)?;
    match io::parse_algebra(&text) {
        Ok((g, lambda)) => {
            let g = g.deform(a.level);
            let mut doc = report_header("check");
            doc.insert("ok".into(), true.into());
            doc.insert("dimension".into(), g.dim().into());
            doc.insert("prime".into(), g.prime().into());
            doc.insert("nilpotency_class".into(), g.nilpotency_class().into());
            doc.insert("powerful".into(), g.is_powerful().into());
            doc.insert("has_lambda".into(), lambda.is_some().into());
            let text = format!(
                "check: all invariants pass\n  dimension {}\n  prime {}\n  class {}\n  powerful {}\n  lambda present: {}",
                g.dim(),
                g.prime(),
                g.nilpotency_class(),
                g.is_powerful(),
                lambda.is_some()
            );
            Ok((text, doc.into()))
        }
        Err(dixmier_core::Error::Validation(report)) => {
            Err(Failure::Math(format!("validation failed:\n{report}")))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_polarize(a: &CommonArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let stab = stabilizer(&g, &lambda);
    let vergne = vergne_polarisation(&g, &lambda, None)?;
    let irred = irreducible_polarisation(&g, &lambda)?;
    let check = is_polarisation(&g, &lambda, &vergne.subspace).is_ok();
    let fmt_rows = |s: &dixmier_core::linalg::Subspace| -> Vec<String> {
        s.basis().iter().map(|r| g.format_element(r)).collect()
    };
    let mut doc = report_header("polarize");
    doc.insert("stabilizer".into(), fmt_rows(&stab).into());
    doc.insert("stabilizer_dim".into(), stab.dim().into());
    doc.insert("vergne".into(), fmt_rows(&vergne.subspace).into());
    doc.insert("irreducible".into(), fmt_rows(&irred.subspace).into());
    doc.insert("codim".into(), vergne.codim.into());
    doc.insert("passes_check".into(), check.into());
    let text = format!(
        "polarize at lambda = {lambda}\n  stabilizer ({} dim): {}\n  vergne polarisation: {}\n  induction polarisation: {}\n  codimension r = {}\n  is_polarisation: {}",
        stab.dim(),
        fmt_rows(&stab).join("; "),
        fmt_rows(&vergne.subspace).join("; "),
        fmt_rows(&irred.subspace).join("; "),
        vergne.codim,
        check
    );
    Ok((text, doc.into()))
}

fn cmd_reduce(a: &CommonArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let q = reducing_quadruple(&g, &lambda)?;
    let mut doc = report_header("reduce");
    doc.insert("x".into(), g.format_element(&q.x).into());
    doc.insert("y".into(), g.format_element(&q.y).into());
    doc.insert("z".into(), g.format_element(&q.z).into());
    doc.insert("alpha".into(), q.alpha.to_string().into());
    doc.insert(
        "gprime".into(),
        q.gprime
            .basis()
            .iter()
            .map(|r| g.format_element(r))
            .collect::<Vec<_>>()
            .into(),
    );
    let text = format!(
        "reducing quadruple\n  x = {}\n  y = {}\n  z = {}\n  alpha = {}\n  g' = {}",
        g.format_element(&q.x),
        g.format_element(&q.y),
        g.format_element(&q.z),
        q.alpha,
        q.gprime
    );
    Ok((text, doc.into()))
}

fn cmd_rho(a: &CommonArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let b = irreducible_polarisation(&g, &lambda)?;
    let rm = RhoMap::new(&g, &lambda, &b)?;
    let mut doc = report_header("rho");
    let mut table = serde_json::Map::new();
    let mut lines = vec![format!(
        "rho: U(g) -> A_{}(Q), polarisation {}",
        rm.adapted.rank(),
        b.subspace
    )];
    for (i, img) in rm.images.iter().enumerate() {
        table.insert(g.name(i).to_string(), img.to_string().into());
        lines.push(format!("  rho({}) = {}", g.name(i), img));
    }
    doc.insert("rank".into(), rm.adapted.rank().into());
    doc.insert(
        "unimodular_adapted_basis".into(),
        rm.adapted.unimodular.into(),
    );
    doc.insert("images".into(), table.into());
    Ok((lines.join("\n"), doc.into()))
}

fn cmd_kernel(a: &CommonArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let degree = effective_degree(a.degree)?;
    let b = irreducible_polarisation(&g, &lambda)?;
    let ker = kernel_truncated(&g, &lambda, &b, degree)?;
    let names = ordered_basis_names(&g, &ker.ordered_basis);
    let elems = ker.elements();
    let std = ker.to_standard(&g)?;
    let ideal = ideal_generated_truncated(&g, &std.elements(), degree)?;
    let generated = ideal == std;
    let mut doc = report_header("kernel");
    doc.insert("degree".into(), degree.into());
    doc.insert("kernel_dim".into(), ker.dim().into());
    doc.insert(
        "basis".into(),
        elems
            .iter()
            .map(|e| e.format(&names))
            .collect::<Vec<_>>()
            .into(),
    );
    doc.insert("ideal_span_dim".into(), ideal.rank().into());
    doc.insert("kernel_equals_ideal_span".into(), generated.into());
    let mut lines = vec![format!(
        "kernel of rho on U(g)_<= {degree}: dimension {}",
        ker.dim()
    )];
    for e in &elems {
        lines.push(format!("  {}", e.format(&names)));
    }
    lines.push(format!(
        "two-sided span of the kernel basis at degree {degree}: dimension {} ({})",
        ideal.rank(),
        if generated {
            "equals the kernel"
        } else {
            "proper subspace"
        }
    ));
    Ok((lines.join("\n"), doc.into()))
}

fn oracle_one(g: &LieAlgebra, lambda: &LinearForm, max_degree: u32) -> Result<usize, Failure> {
    let b = irreducible_polarisation(g, lambda)?;
    let rm = RhoMap::new(g, lambda, &b)?;
    let ab = AdaptedBasis::new(g, lambda, &b)?;
    let oracle = InducedModuleOracle::new(g, lambda, &ab)?;
    let mut checked = 0usize;
    for m in monomials_up_to(ab.rank(), max_degree) {
        for i in 0..g.dim() {
            let u = dixmier_core::linalg::unit(g.dim(), i);
            let via_rho = rm.images[i].apply(&dixmier_core::weyl::Poly::monomial(
                ab.rank(),
                m.clone(),
                Rat::from_integer(1.into()),
            ));
            let via_module = oracle.act(&u, &m)?;
            if via_rho != via_module {
                return Err(Failure::Math(format!(
                    "oracle mismatch on {} at monomial {m:?}",
                    g.name(i)
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn cmd_oracle(a: &OracleArgs) -> CmdResult {
    let max_degree = a.max_degree.unwrap_or(4);
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut total = 0usize;
    match &a.file {
        Some(path) => {
            let text = read_file(path)?;
            let (g, lambda) = io::parse_algebra(&text)?;
            let lambda = require_lambda(lambda)?;
            let checked = oracle_one(&g, &lambda, max_degree)?;
            total += checked;
            lines.push(format!("{}: {} checks", path.display(), checked));
            items.push(json!({ "input": path.display().to_string(), "checks": checked }));
        }
        None => {
            let mut rng = corpus::FormSampler::new(a.seed);
            for entry in catalog::catalog(3) {
                let checked = oracle_one(&entry.algebra, &entry.lambda, max_degree)?;
                total += checked;
                lines.push(format!("{}: {} checks", entry.name, checked));
                items.push(json!({ "input": entry.name, "checks": checked }));
                let extra = rng.form(&entry.algebra);
                let checked = oracle_one(&entry.algebra, &extra, max_degree)?;
                total += checked;
                lines.push(format!("{} (random form): {} checks", entry.name, checked));
                items.push(json!({
                    "input": format!("{} (random form)", entry.name),
                    "checks": checked
                }));
            }
        }
    }
    let mut doc = report_header("oracle");
    doc.insert("max_degree".into(), max_degree.into());
    doc.insert("total_checks".into(), total.into());
    doc.insert("items".into(), items.into());
    doc.insert("ok".into(), true.into());
    lines.push(format!(
        "oracle: {total} checks passed (max degree {max_degree})"
    ));
    Ok((lines.join("\n"), doc.into()))
}

fn cmd_orbit(a: &OrbitArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let u = parse_rational_list(&a.u, g.dim(), "--u")?;
    let sigma = exp_ad(&g, &u)?;
    let twisted = coad(&sigma, &lambda);
    let twist_ok = twist_stabilizer_check(&g, &sigma, &lambda);
    let p = g.prime();
    let c = g.nilpotency_class() as u32;
    let n_scale = scale_exponent(&u, p, 64);
    let (bound, contained) = match n_scale {
        Some(n) => {
            let n0 = lattice_bound(n, c, p);
            (Some(n0), Some(lattice_containment(&sigma, n0, p)))
        }
        None => (None, None),
    };
    let mut doc = report_header("orbit");
    doc.insert(
        "sigma".into(),
        sigma
            .matrix
            .rows()
            .iter()
            .map(|r| format_vector(r))
            .collect::<Vec<_>>()
            .into(),
    );
    doc.insert("twisted_lambda".into(), twisted.to_string().into());
    doc.insert("twisted_integral".into(), twisted.is_integral().into());
    doc.insert("twist_stabilizer_check".into(), twist_ok.into());
    doc.insert("scale_exponent".into(), n_scale.into());
    doc.insert("lattice_bound".into(), bound.into());
    doc.insert("containment_at_bound".into(), contained.into());
    let text = format!(
        "orbit twist by exp(ad u), u = {}\n  sigma =\n{}  sigma.lambda = {} (integral: {})\n  stabiliser twist check: {}\n  u in p^-N L for N = {}\n  bound n0 = cN + vp(c!) = {}\n  p^n0-containment: {}",
        format_vector(&u),
        sigma
            .matrix
            .rows()
            .iter()
            .map(|r| format!("    {}\n", format_vector(r)))
            .collect::<String>(),
        twisted,
        twisted.is_integral(),
        twist_ok,
        n_scale.map_or("?".into(), |n| n.to_string()),
        bound.map_or("?".into(), |n| n.to_string()),
        contained.map_or("?".into(), |c| c.to_string()),
    );
    Ok((text, doc.into()))
}

fn cmd_compare(a: &CompareArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let degree = effective_degree(a.degree)?;
    let coords = parse_rational_list(&a.lambda2, g.dim(), "--lambda2")?;
    let mu = LinearForm::integral(coords, g.prime())?;
    let report = orbit_kernel_compare(&g, &lambda, &mu, degree)?;
    let d = g.dim();
    let std_names: Vec<String> = (0..d).map(|i| g.name(i).to_string()).collect();
    let mut gens = Vec::new();
    let mut lines = vec![format!(
        "kernel comparison at degree {degree}: {}",
        if report.equal { "equal" } else { "different" }
    )];
    lines.push(format!(
        "  dim ker(lambda) = {}, dim ker(lambda2) = {}",
        report.dim_left, report.dim_right
    ));
    for gl in &report.generators {
        let pretty = gl.element.format(&std_names);
        lines.push(format!(
            "  generator {pretty}: w_0 = {}, integral up to level {}",
            gl.valuation_at_zero,
            gl.max_integral_level
                .map_or("none".to_string(), |n| n.to_string())
        ));
        gens.push(json!({
            "element": pretty,
            "w0": gl.valuation_at_zero.to_string(),
            "max_integral_level": gl.max_integral_level,
        }));
    }
    let mut doc = report_header("compare");
    doc.insert("degree".into(), degree.into());
    doc.insert(
        "verdict".into(),
        if report.equal { "equal" } else { "different" }.into(),
    );
    doc.insert("dim_left".into(), report.dim_left.into());
    doc.insert("dim_right".into(), report.dim_right.into());
    doc.insert("deformation_report".into(), gens.into());
    Ok((lines.join("\n"), doc.into()))
}

fn cmd_special(a: &CommonArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let check = is_special(&g, &lambda);
    let metabelian = is_metabelian(&g);
    let mut doc = report_header("special");
    doc.insert("special".into(), check.special.into());
    doc.insert("metabelian".into(), metabelian.into());
    doc.insert(
        "generated_ideal".into(),
        check
            .ideal
            .basis()
            .iter()
            .map(|r| g.format_element(r))
            .collect::<Vec<_>>()
            .into(),
    );
    let mut text = format!(
        "special form check\n  ideal generated by the stabiliser: {}\n  special: {}\n  metabelian algebra: {}",
        check.ideal, check.special, metabelian
    );
    if let Some((x, y)) = &check.witness {
        text.push_str(&format!(
            "\n  witness pair: ({}, {})",
            g.format_element(x),
            g.format_element(y)
        ));
        doc.insert(
            "witness".into(),
            vec![g.format_element(x), g.format_element(y)].into(),
        );
    }
    Ok((text, doc.into()))
}

fn cmd_control(a: &CommonArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let degree = effective_degree(a.degree)?;
    let b = irreducible_polarisation(&g, &lambda)?;
    let q = reducing_quadruple(&g, &lambda)?;
    let ker = kernel_truncated(&g, &lambda, &b, degree)?;
    let report = control_check_kernel(&g, &ker, &q)?;
    let mut doc = report_header("control");
    doc.insert("degree".into(), degree.into());
    doc.insert("kernel_dim".into(), ker.dim().into());
    doc.insert("controlled".into(), report.controlled.into());
    let mut text = format!(
        "control check at degree {degree}\n  kernel dimension {}\n  controlled by g' = {}: {}",
        ker.dim(),
        q.gprime,
        report.controlled
    );
    if let Some(w) = &report.witness {
        let pretty = w.format(&report.frame_names);
        doc.insert("witness".into(), pretty.clone().into());
        doc.insert("witness_x_power".into(), report.x_power.into());
        text.push_str(&format!(
            "\n  witness coefficient at x^{}: {}",
            report.x_power.unwrap_or(0),
            pretty
        ));
    }
    Ok((text, doc.into()))
}

fn cmd_perp(a: &CommonArgs) -> CmdResult {
    let (g, lambda) = load(&a.file, a.level)?;
    let lambda = require_lambda(lambda)?;
    let degree = effective_degree(a.degree)?;
    let b = irreducible_polarisation(&g, &lambda)?;
    // Default abelian ideal: the polarisation itself when it qualifies,
    // otherwise the ideal generated by the stabiliser.
    let candidate = if g.is_ideal(&b.subspace) && is_abelian(&g, &b.subspace) {
        b.subspace.clone()
    } else {
        let closure = g.ideal_closure(&stabilizer(&g, &lambda));
        if is_abelian(&g, &closure) && b.subspace.contains(&closure) {
            closure
        } else {
            return Err(Failure::Math(
                "no canonical abelian ideal inside the polarisation; perp is not applicable".into(),
            ));
        }
    };
    let pb = perp_basis(&g, &lambda, &candidate, &b.subspace)?;
    let extracted = perp_partials_in_image(&g, &lambda, &candidate, &b.subspace, degree)?;
    let mut doc = report_header("perp");
    doc.insert("degree".into(), degree.into());
    doc.insert(
        "ideal".into(),
        candidate
            .basis()
            .iter()
            .map(|r| g.format_element(r))
            .collect::<Vec<_>>()
            .into(),
    );
    doc.insert("s".into(), pb.s.into());
    let pairs: Vec<Value> = pb
        .us
        .iter()
        .zip(&pb.ys)
        .map(|(u, y)| json!({ "u": g.format_element(u), "y": g.format_element(y) }))
        .collect();
    doc.insert("pairs".into(), pairs.into());
    doc.insert("partials_in_image".into(), extracted.into());
    let mut text = format!(
        "perp extraction over a = {}\n  s = codim a^perp = {}",
        candidate, pb.s
    );
    for (u, y) in pb.us.iter().zip(&pb.ys) {
        text.push_str(&format!(
            "\n  pair: u = {}, y = {}",
            g.format_element(u),
            g.format_element(y)
        ));
    }
    text.push_str(&format!(
        "\n  all d_i in rho(U(a)) at degree {degree}: {extracted}"
    ));
    Ok((text, doc.into()))
}

fn is_abelian(g: &LieAlgebra, s: &dixmier_core::linalg::Subspace) -> bool {
    let rows = s.basis();
    rows.iter().enumerate().all(|(i, x)| {
        rows.iter()
            .skip(i + 1)
            .all(|y| dixmier_core::linalg::vec_is_zero(&g.bracket(x, y).expect("sized")))
    })
}

fn cmd_catalog(a: &CatalogArgs) -> CmdResult {
    let entries = catalog::catalog(a.prime);
    let mut lines = vec![format!("bundled algebras (prime {}):", a.prime)];
    let mut items = Vec::new();
    for e in &entries {
        lines.push(format!(
            "  {:<6} dim {}  {}",
            e.name,
            e.algebra.dim(),
            e.description
        ));
        items.push(json!({
            "name": e.name,
            "dimension": e.algebra.dim(),
            "description": e.description,
            "default_lambda": e.lambda.to_string(),
            "file": io::algebra_to_json(&e.algebra, Some(&e.lambda)),
        }));
    }
    let mut doc = report_header("catalog");
    doc.insert("prime".into(), a.prime.into());
    doc.insert("entries".into(), items.into());
    Ok((lines.join("\n"), doc.into()))
}
