//! `farey`: tables, spectra and verification reports from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use farey_core::exact_farey::{farey_sequence, growth_rate_estimate_with, knauf_partition_exact, knauf_partition_with};
use farey_core::hankel::{reciprocity_residual, FamilyKind};
use farey_core::laguerre_space::SpaceParams;
use farey_core::par::Exec;
use farey_core::polynomial_eigen::{
    bernoulli_eigenfunction, build_mk, eigenpair_to_eigenfunction, leading_bounds, mk_spectrum, period_search,
    pseudo_scalar_checks,
};
use farey_core::rational::{fmt_fraction, parse_fraction, to_f64};
use farey_core::report::{checks_table, Format, Table};
use farey_core::transfer_operators::{
    assemble_derived, assemble_m_with, assemble_n_with, drift_diagnostic, j_diagnostic, nuclearity_surrogate,
    spectrum, verify_structure, NMethod, OpKind,
};
use farey_core::verify::{run_criterion, Profile, VerifyOptions, VerifyReport, CRITERIA};
use farey_core::Error;
use output::{destination, emit, Artifact};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "farey", version, about = "Farey map transfer operators: tables, spectra and checks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output encoding.
    #[arg(long, global = true, default_value = "text", value_parser = ["csv", "json", "text"])]
    format: String,
    /// Output file; standard output when neither this nor the output directory is set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Default directory for output files.
    #[arg(long, global = true, env = "FAREY_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    /// Run data-parallel loops sequentially.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The Farey sequence F_n.
    Farey {
        #[arg(long)]
        level: usize,
    },
    /// Partition sums 2 Σ b^{-2q} over F_n without 0/1.
    Partition {
        #[arg(long)]
        n: usize,
        /// Exponent q, as a decimal or a fraction such as 1/2.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Ratio estimates of the growth rate of the partition sums.
    Growth {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 25)]
        n_max: usize,
    },
    /// Truncated operator matrices and diagnostics.
    Operator {
        /// M, N, P+, P-, Q+, Q- or J.
        #[arg(long, default_value = "N")]
        kind: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// exact or kernel; only used for N.
        #[arg(long, default_value = "exact")]
        method: String,
        /// structure, j, drift or nuclearity instead of the matrix.
        #[arg(long)]
        diagnostic: Option<String>,
    },
    /// Eigenvalues of a symmetric truncation (M, N, P+ or P-).
    Spectrum {
        #[arg(long, default_value = "N")]
        kind: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 40)]
        k: usize,
    },
    /// Self-reciprocity residuals of a Laguerre-type family.
    HankelCheck {
        /// phi, psi, smallphi, h+ or h-.
        #[arg(long, default_value = "phi")]
        family: String,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Spectrum and eigen-polynomials of the integer matrix M_k.
    Mk {
        #[arg(long)]
        k: usize,
        /// Print the matrix instead of the spectrum.
        #[arg(long)]
        matrix: bool,
        /// Print bounds for the leading eigenvalue.
        #[arg(long)]
        bounds: bool,
        /// Tabulate the λ = 1 eigenspace for every level up to k.
        #[arg(long)]
        periods: bool,
        /// Seed for the random vectors of the pseudo-scalar product checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The Bernoulli-number eigenfunction f_k.
    Bernoulli {
        #[arg(long)]
        k: usize,
    },
    /// Runs every acceptance check.
    VerifyAll {
        #[arg(long, default_value = "quick", value_parser = ["quick", "full"])]
        profile: String,
        /// Only this criterion.
        #[arg(long)]
        criterion: Option<u8>,
        /// Adds this amount to N(0,0) to confirm that the checks can fail.
        #[arg(long, allow_hyphen_values = true)]
        corrupt_n00: Option<f64>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::InvalidParameter(_) | Error::Parse(_) | Error::Pole(_) => {
                Failure::Usage(e.to_string())
            }
            Error::CheckFailed { .. } => Failure::Check(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Parameters echoed into every header.
struct Params(Vec<(String, String)>);

impl Params {
    fn new(command: &str) -> Self {
        Params(vec![("command".into(), command.into())])
    }

    fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.into(), value.to_string()));
        self
    }
}

struct Outcome {
    artifact: Artifact,
    passed: bool,
}

fn ok(artifact: Artifact) -> Result<Outcome, Failure> {
    Ok(Outcome { artifact, passed: true })
}

fn parse_q(s: &str) -> Result<(f64, Option<num_rational::BigRational>), Failure> {
    if s.contains('/') {
        let r = parse_fraction(s)?;
        Ok((to_f64(&r), Some(r)))
    } else {
        let x: f64 = s.parse().map_err(|_| Failure::Usage(format!("cannot parse q = `{s}`")))?;
        Ok((x, farey_core::rational::detect_rational(x, 64)))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format: Format = cli.common.format.parse().expect("validated by clap");
    let exec = if cli.common.sequential { Exec::Sequential } else { Exec::default() };
    let name = command_name(&cli.command);
    let mut params = Params::new(name);
    params.set("format", &cli.common.format);
    let result = run(&cli.command, exec, &mut params).and_then(|out| {
        let text = out.artifact.render(format, &params.0)?;
        let dest = destination(cli.common.output.as_deref(), cli.common.output_dir.as_deref(), name, format);
        emit(&text, dest.as_deref())?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) | Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Farey { .. } => "farey",
        Command::Partition { .. } => "partition",
        Command::Growth { .. } => "growth",
        Command::Operator { .. } => "operator",
        Command::Spectrum { .. } => "spectrum",
        Command::HankelCheck { .. } => "hankel-check",
        Command::Mk { .. } => "mk",
        Command::Bernoulli { .. } => "bernoulli",
        Command::VerifyAll { .. } => "verify-all",
    }
}

fn run(cmd: &Command, exec: Exec, params: &mut Params) -> Result<Outcome, Failure> {
    params.set("exec", format!("{exec:?}").to_lowercase());
    match cmd {
        Command::Farey { level } => {
            params.set("level", level);
            farey(*level)
        }
        Command::Partition { n, q } => {
            let (qf, qr) = parse_q(q)?;
            let shown = match &qr {
                Some(r) if r.is_integer() => r.to_integer().to_string(),
                Some(r) => fmt_fraction(r),
                None => qf.to_string(),
            };
            params.set("n", n).set("q", shown);
            partition(exec, *n, qf, qr)
        }
        Command::Growth { q, n_max } => {
            let (qf, _) = parse_q(q)?;
            params.set("q", qf).set("n_max", n_max);
            growth(exec, qf, *n_max)
        }
        Command::Operator { kind, q, k, method, diagnostic } => {
            let sp = space(q, *k)?;
            params.set("kind", kind).set("q", sp.q).set("K", k).set("method", method);
            if let Some(d) = diagnostic {
                params.set("diagnostic", d);
                return operator_diagnostic(&sp, d);
            }
            let op = operator(exec, &sp, OpKind::parse(kind)?, method)?;
            let mut t = Table::new(format!("{} truncation in the {} basis", op.kind, op.basis), &["row", "col", "value"]);
            t.comment(identity_note(op.kind));
            for i in 0..op.dim() {
                for j in 0..op.dim() {
                    t.push(vec![i.into(), j.into(), op.entries[(i, j)].into()]);
                }
            }
            ok(Artifact::new(t).with("trace", json!(op.trace())))
        }
        Command::Spectrum { kind, q, k } => {
            let sp = space(q, *k)?;
            params.set("kind", kind).set("q", sp.q).set("K", k);
            let kind = OpKind::parse(kind)?;
            let op = operator(exec, &sp, kind, "exact")?;
            let spec = spectrum(&op)?;
            let mut t = Table::new(format!("eigenvalues of the {kind} truncation"), &["index", "eigenvalue", "residual"]);
            t.comment(identity_note(kind));
            for (i, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
                t.push(vec![i.into(), (*l).into(), (*r).into()]);
            }
            ok(Artifact::new(t).with("eigenvalues", json!(spec.eigenvalues)))
        }
        Command::HankelCheck { family, p, n_max } => {
            params.set("family", family).set("p", p).set("n_max", n_max);
            let kind = FamilyKind::parse(family)?;
            let r = reciprocity_residual(exec, kind, *p, *n_max)?;
            let mut t = checks_table(&format!("{} self-reciprocity under {}", r.family, r.transform), &r.checks);
            t.comment("L2 residual ||T f_n - σ_n f_n|| / ||f_n|| on a composite Gauss-Legendre grid");
            let passed = r.passed();
            Ok(Outcome { artifact: Artifact::new(t).with("residuals", json!(r.residuals)), passed })
        }
        Command::Mk { k, matrix, bounds, periods, seed } => {
            params.set("k", k);
            if *matrix {
                params.set("view", "matrix");
                return mk_matrix(*k);
            }
            if *bounds {
                params.set("view", "bounds");
                return mk_bounds(*k);
            }
            if *periods {
                params.set("view", "periods");
                return mk_periods(*k);
            }
            params.set("view", "spectrum").set("seed", seed);
            mk(*k, *seed)
        }
        Command::Bernoulli { k } => {
            params.set("k", k);
            let f = bernoulli_eigenfunction(*k);
            let mut t = Table::new(format!("f_{k} = {}", f.display), &["exponent", "coefficient", "value"]);
            t.comment("Laurent polynomial built from Bernoulli numbers; fixed by P+ at q = -k/2 for even k");
            for (e, c) in &f.coefficients {
                let v = parse_fraction(c).map(|r| to_f64(&r)).unwrap_or(f64::NAN);
                t.push(vec![(*e).into(), c.clone().into(), v.into()]);
            }
            let passed = f.checks.iter().all(|c| c.passed);
            let artifact = Artifact::new(t).with("checks", json!(f.checks));
            Ok(Outcome { artifact, passed })
        }
        Command::VerifyAll { profile, criterion, corrupt_n00 } => {
            params.set("profile", profile);
            if let Some(c) = criterion {
                params.set("criterion", c);
            }
            if let Some(d) = corrupt_n00 {
                params.set("corrupt_n00", d);
            }
            let mut opts = VerifyOptions::new(Profile::parse(profile)?);
            opts.exec = exec;
            opts.corrupt_n00 = *corrupt_n00;
            verify(&opts, *criterion)
        }
    }
}

fn farey(level: usize) -> Result<Outcome, Failure> {
    let f = farey_sequence(level)?;
    let fresh: std::collections::BTreeSet<_> = f.new_fractions().into_iter().collect();
    let mut t = Table::new(format!("Farey sequence F_{level}"), &["index", "fraction", "a", "b", "value", "new"]);
    t.comment("ascending mediant insertion; neighbours satisfy a'' b' - a' b'' = 1");
    for (i, x) in f.fractions.iter().enumerate() {
        t.push(vec![
            i.into(),
            x.to_string().into(),
            (x.a as usize).into(),
            (x.b as usize).into(),
            x.to_f64().into(),
            (level > 1 && fresh.contains(x)).into(),
        ]);
    }
    ok(Artifact::new(t))
}

fn partition(exec: Exec, n: usize, q: f64, exact: Option<num_rational::BigRational>) -> Result<Outcome, Failure> {
    let mut t = Table::new("partition sum Z_n", &["n", "q", "value", "exact"]);
    t.comment("2 Σ b^(-2q) over F_n without 0/1, equal to the n-th transfer iterate of 1 at 0");
    let value = knauf_partition_with(exec, n, q)?;
    let two_q = exact.as_ref().map(|r| r * num_rational::BigRational::from_integer(2.into()));
    let exact_str = match two_q.as_ref().and_then(farey_core::rational::as_integer) {
        Some(tq) => {
            let tq: i64 = tq.try_into().map_err(|_| Failure::Usage("2q out of range".into()))?;
            fmt_fraction(&knauf_partition_exact(n, tq)?)
        }
        None => String::new(),
    };
    t.push(vec![n.into(), q.into(), value.into(), exact_str.clone().into()]);
    let mut a = Artifact::new(t);
    if !exact_str.is_empty() {
        a.preamble.push(exact_str.clone());
        a = a.with("exact", json!(exact_str));
    }
    ok(a)
}

fn growth(exec: Exec, q: f64, n_max: usize) -> Result<Outcome, Failure> {
    let est = growth_rate_estimate_with(exec, q, n_max)?;
    let mut t = Table::new("growth of the partition sums", &["n", "ratio", "log_rate"]);
    t.comment("ratio Z_n / Z_(n-1) and (1/n) log Z_n, both tending to the leading eigenvalue");
    for n in 1..=n_max {
        let ratio = if n >= 2 { est.ratios[n - 2] } else { f64::NAN };
        t.push(vec![n.into(), ratio.into(), est.log_rates[n - 1].into()]);
    }
    ok(Artifact::new(t).with("ratio", json!(est.ratio)))
}

fn space(q: &str, k: usize) -> Result<SpaceParams, Failure> {
    let (qf, qr) = parse_q(q)?;
    Ok(match qr {
        Some(r) if qf > 0.0 => SpaceParams::exact(r, k)?,
        _ => SpaceParams::new(qf, k)?,
    })
}

fn operator(
    exec: Exec,
    sp: &SpaceParams,
    kind: OpKind,
    method: &str,
) -> Result<farey_core::transfer_operators::OperatorMatrix, Failure> {
    let method = match method {
        "exact" => NMethod::Exact,
        "kernel" => NMethod::Kernel,
        other => return Err(Failure::Usage(format!("unknown method `{other}`"))),
    };
    let m = assemble_m_with(exec, sp)?;
    if kind == OpKind::M {
        return Ok(m);
    }
    let n = assemble_n_with(exec, sp, method)?;
    if kind == OpKind::N {
        return Ok(n);
    }
    Ok(assemble_derived(&m, &n, kind)?)
}

fn identity_note(kind: OpKind) -> &'static str {
    match kind {
        OpKind::M => "multiplication by e^(-t) on L2(m_q)",
        OpKind::N => "Bessel-kernel part; spectrum (-1)^k α^(2(q+k)), trace α^p/√5",
        OpKind::PPlus | OpKind::PMinus => "P± = M ± N",
        OpKind::QPlus | OpKind::QMinus => "Q± = I ± M^(-1) N, exact in the e basis",
        OpKind::J => "J = N M^(-1) through a Cholesky solve; diagnostic only",
    }
}

fn operator_diagnostic(sp: &SpaceParams, which: &str) -> Result<Outcome, Failure> {
    let mut t = Table::new(format!("{which} diagnostic"), &["quantity", "value"]);
    let mut row = |name: &str, v: f64| t.push(vec![name.into(), v.into()]);
    match which {
        "structure" => {
            let r = verify_structure(sp, sp.k.saturating_sub(1))?;
            let passed = r.passed();
            let t = checks_table("exact structure of the truncated operators", &r.checks);
            return Ok(Outcome { artifact: Artifact::new(t), passed });
        }
        "j" => {
            let d = j_diagnostic(sp)?;
            row("j_norm_solve", d.j_norm_solve.unwrap_or(f64::NAN));
            row("j_norm_structural", d.j_norm_structural);
            row("m_condition", d.m_condition);
            row("q_plus_norm", d.q_plus_norm);
            row("q_minus_norm", d.q_minus_norm);
            row("q_plus_radius", d.q_plus_radius);
            row("q_minus_radius", d.q_minus_radius);
            row("bound", d.bound);
        }
        "drift" => {
            let d = drift_diagnostic(sp, 0.5)?;
            row("target", d.target);
            row("nearest_K", d.nearest_k);
            row("nearest_2K", d.nearest_2k);
            row("drift", d.drift);
            row("residual_scale", d.residual_scale);
        }
        "nuclearity" => {
            let r = nuclearity_surrogate(sp, sp.k.max(7))?;
            let mut t = Table::new("partial sums of ||e_n|| ||g_n||", &["n", "term", "partial_sum", "ratio"]);
            for (i, (term, s)) in r.terms.iter().zip(&r.partial_sums).enumerate() {
                let ratio = if i > 0 { r.ratios[i - 1] } else { f64::NAN };
                t.push(vec![i.into(), (*term).into(), (*s).into(), ratio.into()]);
            }
            t.comment(format!("tail ratio {}, norm defect {:e}", r.max_ratio_tail, r.g_norm_defect));
            return ok(Artifact::new(t));
        }
        other => return Err(Failure::Usage(format!("unknown diagnostic `{other}`"))),
    }
    ok(Artifact::new(t))
}

fn mk(k: usize, seed: u64) -> Result<Outcome, Failure> {
    let spec = mk_spectrum(k)?;
    let mut t = Table::new(
        format!("spectrum of M_{k}"),
        &["index", "lambda", "exact", "multiplicity", "class", "polynomial"],
    );
    t.comment("M_k b = λ b; h(x) = Σ C(k,i) b_i x^i solves the three-term equation with q = -k/2");
    let mut checks = Vec::new();
    let mut polys = Vec::new();
    for (i, pair) in spec.pairs.iter().enumerate() {
        let display = if pair.lambda.abs() > 1e-8 {
            let f = eigenpair_to_eigenfunction(k, pair)?;
            checks.extend(f.checks.iter().cloned().map(|mut c| {
                c.id = format!("{}-pair{i}", c.id);
                c
            }));
            f.display
        } else {
            String::new()
        };
        polys.push(display.clone());
        t.push(vec![
            i.into(),
            pair.lambda.into(),
            pair.lambda_exact.clone().unwrap_or_default().into(),
            pair.multiplicity.into(),
            format!("{:?}", pair.class).to_lowercase().into(),
            display.into(),
        ]);
    }
    if k >= 1 {
        checks.extend(pseudo_scalar_checks(k, seed)?.checks);
    }
    checks.extend(build_mk(k)?.invariants());
    checks.push(farey_core::report::Check::boolean(
        "real-spectrum",
        spec.real_certified,
        "Sturm count of real roots",
    ));
    let passed = checks.iter().all(|c| c.passed);
    let artifact = Artifact::new(t)
        .with("eigenvalues", json!(spec.eigenvalues()))
        .with("char_poly", json!(spec.char_poly))
        .with("pairs", json!(spec.pairs))
        .with("polynomials", json!(polys))
        .with("checks", json!(checks));
    Ok(Outcome { artifact, passed })
}

fn mk_matrix(k: usize) -> Result<Outcome, Failure> {
    let m = build_mk(k)?;
    let cols: Vec<String> = (0..=k).map(|j| format!("c{j}")).collect();
    let mut header = vec!["row"];
    header.extend(cols.iter().map(String::as_str));
    let mut t = Table::new(format!("M_{k}"), &header);
    t.comment("row sums 2^i + 2^(k-i), column sums C(k+2, j+1), M(i,j) = M(k-i,k-j)");
    for (i, r) in m.entries.iter().enumerate() {
        let mut row = vec![i.into()];
        row.extend(r.iter().map(|&x| farey_core::report::Cell::Int(x)));
        t.push(row);
    }
    ok(Artifact::new(t).with("entries", json!(m.entries)))
}

fn mk_bounds(k: usize) -> Result<Outcome, Failure> {
    let b = leading_bounds(k)?;
    let mut t = Table::new(format!("bounds for the leading eigenvalue of M_{k}"), &["quantity", "value"]);
    t.comment("row-sum bounds; closed_form columns evaluate the printed formulas for s");
    for (name, v) in [
        ("S", b.big_s),
        ("s", b.small_s),
        ("h", b.h),
        ("g", b.g),
        ("lower", b.lower),
        ("lambda", b.lambda),
        ("upper", b.upper),
        ("s_closed_form", b.small_s_closed_form),
        ("lower_closed_form", b.lower_closed_form),
        ("upper_closed_form", b.upper_closed_form),
    ] {
        t.push(vec![name.into(), v.into()]);
    }
    let passed = b.holds;
    Ok(Outcome { artifact: Artifact::new(t).with("bounds", json!(b)), passed })
}

fn mk_periods(k_max: usize) -> Result<Outcome, Failure> {
    let mut t = Table::new("λ = 1 eigenspace of M_k", &["k", "dimension", "palindromic", "skew"]);
    t.comment("exploratory; no expected counts");
    for k in 1..=k_max {
        let r = period_search(k)?;
        t.push(vec![r.k.into(), r.dimension.into(), r.palindromic.into(), r.skew.into()]);
    }
    ok(Artifact::new(t))
}

fn verify(opts: &VerifyOptions, only: Option<u8>) -> Result<Outcome, Failure> {
    let ids: Vec<u8> = match only {
        Some(c) if CRITERIA.iter().any(|x| x.0 == c) => vec![c],
        Some(c) => return Err(Failure::Usage(format!("no criterion {c}"))),
        None => CRITERIA.iter().map(|x| x.0).collect(),
    };
    let criteria: Vec<_> = ids.into_iter().map(|id| run_criterion(id, opts)).collect();
    let report = VerifyReport {
        profile: opts.profile,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    };
    let mut artifact = Artifact::new(report.table());
    artifact.preamble = report.criteria.iter().map(|c| c.summary()).collect();
    artifact.preamble.push(format!("overall: {}", if report.passed { "PASS" } else { "FAIL" }));
    artifact.preamble.push(String::new());
    let artifact = artifact
        .with("passed", json!(report.passed))
        .with("criteria", serde_json::to_value(&report.criteria).map_err(anyhow::Error::from)?);
    Ok(Outcome { artifact, passed: report.passed })
}
