//! Command-line front end: validate equivariant systems, decompose their
//! resultants (or the discriminant of an invariant polynomial), verify the
//! identities at random rational points, and benchmark direct versus
//! decomposed evaluation.

mod input;
mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};

use equires::combinatorics::{enumerate_partitions, multinomial_m};
use equires::decompose::{
    decompose_discriminant, decompose_resultant, DecomposeError, DecompositionResult,
};
use equires::equivariant::{check_equivariance, BlockPermutation, EquivariantSystem};
use equires::oracle::{
    direct_resultant_at, draw_point, verify_decomposition, verify_discriminant,
};
use equires::polyring::{parse, Polynomial, RingContext, Scalar};
use equires::resultant::{
    macaulay_resultant, HomogeneousSystem, ResultantError, ResultantOptions,
};

use input::{load_system_file, parse_assignments, Loaded, LoadedInput};
use output::*;

#[derive(Debug)]
pub enum CliError {
    /// Semantic validation failure (exit 1).
    Validation(String),
    /// A verification counterexample was found (exit 2); the report has
    /// already been printed.
    Counterexample,
    /// I/O or parse failure (exit 3).
    IoParse(String),
}

#[derive(Parser)]
#[command(
    name = "equires",
    version,
    about = "Decompose resultants of block-equivariant polynomial systems and discriminants of block-invariant polynomials, with randomized exact verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the equivariance (or invariance) of a system file.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decompose the resultant of an equivariant system into small factors.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Largest Macaulay matrix evaluated symbolically.
        #[arg(long, default_value_t = 64)]
        symbolic_cap: usize,
        /// Evaluate every factor at `name=value,...` parameter assignments.
        #[arg(long)]
        at: Option<String>,
    },
    /// Decompose the discriminant of an invariant homogeneous polynomial.
    Discriminant {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 64)]
        symbolic_cap: usize,
        #[arg(long)]
        at: Option<String>,
    },
    /// Compute the direct Macaulay resultant of the system.
    Resultant {
        file: PathBuf,
        /// Direct computation (no decomposition); required.
        #[arg(long)]
        direct: bool,
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 64)]
        symbolic_cap: usize,
    },
    /// Verify the decomposition against direct computation at random points.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Numerators and denominators of random points stay within this bound.
        #[arg(long, default_value_t = 10)]
        bound: u32,
        #[arg(long)]
        json: bool,
    },
    /// Re-evaluate a decomposition document produced by `decompose --json`.
    Evaluate {
        file: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long)]
        json: bool,
    },
    /// List the partitions of an integer with their multinomial weights.
    Partitions {
        p: u32,
        #[arg(long)]
        max_length: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Time direct versus decomposed evaluation at random points.
    Bench {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        bound: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            println!("invalid: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Counterexample) => ExitCode::from(2),
        Err(CliError::IoParse(msg)) => {
            println!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Check { file, json } => cmd_check(&file, json),
        Command::Decompose {
            file,
            json,
            symbolic_cap,
            at,
        } => cmd_decompose(&file, json, symbolic_cap, at.as_deref()),
        Command::Discriminant {
            file,
            json,
            symbolic_cap,
            at,
        } => cmd_discriminant(&file, json, symbolic_cap, at.as_deref()),
        Command::Resultant {
            file,
            direct,
            at,
            json,
            symbolic_cap,
        } => cmd_resultant(&file, direct, at.as_deref(), json, symbolic_cap),
        Command::Verify {
            file,
            trials,
            seed,
            bound,
            json,
        } => cmd_verify(&file, trials, seed, bound, json),
        Command::Evaluate { file, at, json } => cmd_evaluate(&file, &at, json),
        Command::Partitions { p, max_length, json } => cmd_partitions(p, max_length, json),
        Command::Bench {
            file,
            trials,
            seed,
            bound,
        } => cmd_bench(&file, trials, seed, bound),
    }
}

fn validated_system(loaded: &Loaded) -> Result<EquivariantSystem, CliError> {
    match &loaded.input {
        LoadedInput::System(polys) => check_equivariance(polys.clone(), &loaded.ctx)
            .map_err(|e| CliError::Validation(e.to_string())),
        LoadedInput::Invariant(_) => Err(CliError::Validation(
            "this command needs a `system` file (resultant mode)".into(),
        )),
    }
}

fn check_invariance(f: &Polynomial, ctx: &Arc<RingContext>) -> Result<(), CliError> {
    let n = ctx.n();
    let p = ctx.p();
    for block in [0..p, p..n] {
        for i in block.start..block.end.saturating_sub(1) {
            let tau = BlockPermutation::transposition(n, p, i, i + 1)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let image = tau
                .apply(f)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            if image != *f {
                return Err(CliError::Validation(format!(
                    "polynomial is not invariant under transposition ({} {})",
                    i + 1,
                    i + 2
                )));
            }
        }
    }
    Ok(())
}

fn cmd_check(file: &Path, json: bool) -> Result<(), CliError> {
    let loaded = load_system_file(file)?;
    let (mode, outcome) = match &loaded.input {
        LoadedInput::System(_) => ("equivariant system", validated_system(&loaded).map(|_| ())),
        LoadedInput::Invariant(f) => ("invariant polynomial", check_invariance(f, &loaded.ctx)),
    };
    match outcome {
        Ok(()) => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "valid": true,
                        "mode": mode,
                        "n": loaded.ctx.n(),
                        "p": loaded.ctx.p(),
                        "q": loaded.ctx.q(),
                        "degree": loaded.degree,
                    })
                );
            } else {
                println!(
                    "valid {mode}: n={}, p={}, q={}, degree={}",
                    loaded.ctx.n(),
                    loaded.ctx.p(),
                    loaded.ctx.q(),
                    loaded.degree
                );
            }
            Ok(())
        }
        Err(CliError::Validation(msg)) if json => {
            println!(
                "{}",
                serde_json::json!({ "valid": false, "mode": mode, "diagnostic": msg })
            );
            Err(CliError::Validation(msg))
        }
        Err(e) => Err(e),
    }
}

/// Render a decomposition (shared by `decompose` and `discriminant`).
fn render_decomposition(
    result: &DecompositionResult,
    source_vars: Vec<String>,
    opts: &ResultantOptions,
    at: Option<&BTreeMap<String, Scalar>>,
    json: bool,
) -> Result<(), CliError> {
    let mut doc = decompose_doc_base(result, source_vars);
    // symbolic factor values, where the cap (and the layout) allow
    for (factor, fdoc) in result.factors.iter().zip(doc.factors.iter_mut()) {
        match factor.resultant_symbolic(opts) {
            Ok(value) => fdoc.resultant = Some(value.to_string()),
            Err(DecomposeError::Resultant(ResultantError::SymbolicTooLarge { .. }))
            | Err(DecomposeError::Resultant(ResultantError::DegenerateSpecialization)) => {}
            Err(e) => return Err(CliError::Validation(e.to_string())),
        }
    }
    let mut product_at: Option<Scalar> = None;
    if let Some(values) = at {
        let product = result
            .evaluate_at(values, opts)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        for (factor, fdoc) in result.factors.iter().zip(doc.factors.iter_mut()) {
            let v = factor
                .resultant_at(values, opts)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            fdoc.value_at = Some(scalar_string(&v));
        }
        for (constant, cdoc) in result
            .constant_factors
            .iter()
            .zip(doc.constant_factors.iter_mut())
        {
            let mut assignment = BTreeMap::new();
            for (name, value) in values {
                if let Some(id) = constant.value.ctx().symbol(name) {
                    assignment.insert(id, value.clone());
                }
            }
            let v = constant
                .value
                .evaluate_full(&assignment)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            cdoc.value_at = Some(scalar_string(&v));
        }
        doc.at = Some(point_strings(values));
        doc.product_at = Some(scalar_string(&product));
        product_at = Some(product);
    }

    if json {
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        return Ok(());
    }

    println!(
        "decomposition ({}) for n={}, p={}, q={}, system degree {}",
        doc.variant, result.n, result.p, result.q, result.system_degree
    );
    println!("case: {}", result.case);
    if let Some((base, exponent)) = result.disc_prefactor {
        println!("discriminant prefactor: {base}^{exponent}");
    }
    for c in &doc.constant_factors {
        print!("constant factor (block {}): ({})^{}", c.block, c.value, c.exponent);
        match &c.value_at {
            Some(v) => println!("  value {v}"),
            None => println!(),
        }
    }
    for f in &doc.factors {
        println!(
            "factor L=({},{}) exponent {} in [{}]:",
            partition_text(&f.lambda.0),
            partition_text(&f.lambda.1),
            f.exponent,
            f.variables.join(", ")
        );
        for (poly, degree) in f.system.iter().zip(f.degrees.iter()) {
            println!("  [{degree}] {poly}");
        }
        if let Some(r) = &f.resultant {
            println!("  resultant = {r}");
        }
        if let Some(v) = &f.value_at {
            println!("  value at point = {v}");
        }
    }
    if let Some(product) = product_at {
        println!("product at point = {product}");
    }
    Ok(())
}

fn partition_text(parts: &[u32]) -> String {
    let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    format!("({})", inner.join(","))
}

fn cmd_decompose(
    file: &Path,
    json: bool,
    symbolic_cap: usize,
    at: Option<&str>,
) -> Result<(), CliError> {
    let loaded = load_system_file(file)?;
    let sys = validated_system(&loaded)?;
    let result = decompose_resultant(&sys).map_err(|e| CliError::Validation(e.to_string()))?;
    let opts = ResultantOptions {
        symbolic_cap,
        ..Default::default()
    };
    let at = at
        .map(|spec| parse_assignments(spec, &loaded.ctx))
        .transpose()?;
    render_decomposition(
        &result,
        loaded.ctx.main_vars().to_vec(),
        &opts,
        at.as_ref(),
        json,
    )
}

fn cmd_discriminant(
    file: &Path,
    json: bool,
    symbolic_cap: usize,
    at: Option<&str>,
) -> Result<(), CliError> {
    let loaded = load_system_file(file)?;
    let f = match &loaded.input {
        LoadedInput::Invariant(f) => f,
        LoadedInput::System(_) => {
            return Err(CliError::Validation(
                "this command needs a `polynomial` file (discriminant mode)".into(),
            ))
        }
    };
    let (_, result) =
        decompose_discriminant(f, &loaded.ctx).map_err(|e| CliError::Validation(e.to_string()))?;
    let opts = ResultantOptions {
        symbolic_cap,
        ..Default::default()
    };
    let at = at
        .map(|spec| parse_assignments(spec, &loaded.ctx))
        .transpose()?;
    render_decomposition(
        &result,
        loaded.ctx.main_vars().to_vec(),
        &opts,
        at.as_ref(),
        json,
    )
}

fn cmd_resultant(
    file: &Path,
    direct: bool,
    at: Option<&str>,
    json: bool,
    symbolic_cap: usize,
) -> Result<(), CliError> {
    if !direct {
        return Err(CliError::Validation(
            "only the direct mode is available; pass --direct".into(),
        ));
    }
    let loaded = load_system_file(file)?;
    let (polys, degree) = match &loaded.input {
        LoadedInput::System(polys) => (polys.clone(), loaded.degree),
        LoadedInput::Invariant(f) => {
            // discriminant-mode files contribute their partial derivatives
            let partials = (0..loaded.ctx.n())
                .map(|i| f.partial_derivative(i))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            (partials, loaded.degree - 1)
        }
    };
    let opts = ResultantOptions {
        symbolic_cap,
        ..Default::default()
    };
    match at {
        Some(spec) => {
            let values = parse_assignments(spec, &loaded.ctx)?;
            let value = direct_resultant_at(&polys, degree, &values, &opts)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "resultant": scalar_string(&value),
                        "at": point_strings(&values),
                    })
                );
            } else {
                println!("resultant at point = {value}");
            }
        }
        None => {
            let degrees = vec![degree; polys.len()];
            let sys = HomogeneousSystem::with_degrees(polys, degrees)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let value = macaulay_resultant(&sys, &opts).map_err(|e| match e {
                ResultantError::SymbolicTooLarge { size, cap } => CliError::Validation(format!(
                    "symbolic Macaulay matrix of size {size} exceeds the cap {cap}; pass --at name=value,... to specialize the parameters"
                )),
                other => CliError::Validation(other.to_string()),
            })?;
            if json {
                println!("{}", serde_json::json!({ "resultant": value.to_string() }));
            } else {
                println!("resultant = {value}");
            }
        }
    }
    Ok(())
}

fn cmd_verify(
    file: &Path,
    trials: u64,
    seed: u64,
    bound: u32,
    json: bool,
) -> Result<(), CliError> {
    let loaded = load_system_file(file)?;
    let report = match &loaded.input {
        LoadedInput::System(_) => {
            let sys = validated_system(&loaded)?;
            verify_decomposition(&sys, trials, seed, bound)
        }
        LoadedInput::Invariant(f) => verify_discriminant(f, &loaded.ctx, trials, seed, bound),
    }
    .map_err(|e| CliError::Validation(e.to_string()))?;

    let doc = verify_doc(&report);
    if json {
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!(
            "verify: {} trials requested, {} completed, {} skipped (degenerate)",
            doc.trials_requested, doc.completed, doc.skipped_degenerate
        );
        println!("sign: {}", doc.sign);
        if let Some(ce) = &doc.counterexample {
            println!("counterexample at trial {}:", ce.trial);
            for (name, value) in &ce.point {
                println!("  {name} = {value}");
            }
            println!("  direct  = {}", ce.lhs);
            println!("  product = {}", ce.rhs);
        }
        println!("verdict: {}", doc.verdict.to_uppercase());
    }
    if report.counterexample.is_some() {
        Err(CliError::Counterexample)
    } else if !report.passed() {
        Err(CliError::Validation(
            "verification completed no trials".into(),
        ))
    } else {
        Ok(())
    }
}

fn cmd_evaluate(file: &Path, at: &str, json: bool) -> Result<(), CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::IoParse(format!("cannot read {}: {e}", file.display())))?;
    let doc: DecomposeDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::IoParse(format!("invalid decomposition document: {e}")))?;

    // reconstruct the source ring to evaluate constants and validate --at
    let source_ctx = RingContext::new(doc.variables.clone(), doc.parameters.clone())
        .map_err(|e| CliError::IoParse(e.to_string()))?;
    let values = parse_assignments(at, &source_ctx)?;
    let opts = ResultantOptions::default();

    let mut product = Scalar::from_integer(1.into());
    let mut constant_values = Vec::new();
    for c in &doc.constant_factors {
        let poly = parse(&c.value, &source_ctx)
            .map_err(|e| CliError::IoParse(format!("constant factor does not parse: {e}")))?;
        let assignment: BTreeMap<usize, Scalar> = values
            .iter()
            .filter_map(|(name, v)| source_ctx.symbol(name).map(|id| (id, v.clone())))
            .collect();
        let v = poly
            .evaluate_full(&assignment)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        product *= equires::resultant::scalar_pow(&v, c.exponent);
        constant_values.push(v);
    }

    let mut factor_values = Vec::new();
    for f in &doc.factors {
        let ctx = RingContext::new(f.variables.clone(), doc.parameters.clone())
            .map_err(|e| CliError::IoParse(e.to_string()))?;
        let polys = f
            .system
            .iter()
            .map(|s| parse(s, &ctx))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::IoParse(format!("factor polynomial does not parse: {e}")))?;
        let assignment: BTreeMap<usize, Scalar> = values
            .iter()
            .filter_map(|(name, v)| ctx.symbol(name).map(|id| (id, v.clone())))
            .collect();
        let specialized: Vec<Polynomial> = polys.iter().map(|p| p.evaluate(&assignment)).collect();
        let sys = HomogeneousSystem::with_degrees(specialized, f.degrees.clone())
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let value = macaulay_resultant(&sys, &opts)
            .map_err(|e| CliError::Validation(e.to_string()))?
            .as_constant()
            .expect("specialized resultant is a scalar");
        let exponent: u64 = f
            .exponent
            .parse::<u128>()
            .map_err(|e| CliError::IoParse(format!("bad exponent: {e}")))?
            .try_into()
            .map_err(|_| CliError::Validation("exponent exceeds evaluation range".into()))?;
        product *= equires::resultant::scalar_pow(&value, exponent);
        factor_values.push(value);
    }

    if json {
        println!(
            "{}",
            serde_json::json!({
                "at": point_strings(&values),
                "constant_values": constant_values.iter().map(scalar_string).collect::<Vec<_>>(),
                "factor_values": factor_values.iter().map(scalar_string).collect::<Vec<_>>(),
                "product": scalar_string(&product),
            })
        );
    } else {
        for (c, v) in doc.constant_factors.iter().zip(&constant_values) {
            println!(
                "constant (block {}) value = {v}  exponent {}",
                c.block, c.exponent
            );
        }
        for (f, v) in doc.factors.iter().zip(&factor_values) {
            println!(
                "factor L=({},{}) value = {v}  exponent {}",
                partition_text(&f.lambda.0),
                partition_text(&f.lambda.1),
                f.exponent
            );
        }
        println!("product at point = {product}");
    }
    Ok(())
}

fn cmd_partitions(p: u32, max_length: Option<usize>, json: bool) -> Result<(), CliError> {
    let partitions =
        enumerate_partitions(p, max_length).map_err(|e| CliError::Validation(e.to_string()))?;
    if json {
        let items: Vec<serde_json::Value> = partitions
            .iter()
            .map(|l| {
                serde_json::json!({
                    "parts": l.parts(),
                    "r": l.len(),
                    "m": multinomial_m(l).map(|m| m.to_string()).unwrap_or_default(),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({ "p": p, "count": partitions.len(), "partitions": items })
        );
    } else {
        println!("partitions of {p} ({} total):", partitions.len());
        for l in &partitions {
            let m = multinomial_m(l).map(|m| m.to_string()).unwrap_or_default();
            println!("{l}  r={}  m={m}", l.len());
        }
    }
    Ok(())
}

fn cmd_bench(file: &Path, trials: u64, seed: u64, bound: u32) -> Result<(), CliError> {
    let loaded = load_system_file(file)?;
    let opts = ResultantOptions::default();
    let (sys, result): (EquivariantSystem, DecompositionResult) = match &loaded.input {
        LoadedInput::System(_) => {
            let sys = validated_system(&loaded)?;
            let result =
                decompose_resultant(&sys).map_err(|e| CliError::Validation(e.to_string()))?;
            (sys, result)
        }
        LoadedInput::Invariant(f) => decompose_discriminant(f, &loaded.ctx)
            .map_err(|e| CliError::Validation(e.to_string()))?,
    };
    println!(
        "bench: n={}, p={}, q={}, system degree {}, {} resultant factors, {} constant factors",
        result.n,
        result.p,
        result.q,
        result.system_degree,
        result.factors.len(),
        result.constant_factors.len()
    );
    let mut direct_total = Duration::ZERO;
    let mut decomposed_total = Duration::ZERO;
    let mut measured = 0u64;
    for t in 0..trials {
        let point = draw_point(sys.ctx(), seed, t, bound);
        let start = Instant::now();
        let direct = direct_resultant_at(sys.polys(), sys.degree(), &point.values, &opts);
        let direct_time = start.elapsed();
        if matches!(direct, Err(ResultantError::DegenerateSpecialization)) {
            println!("trial {t}: degenerate specialization, skipped");
            continue;
        }
        direct.map_err(|e| CliError::Validation(e.to_string()))?;

        let mut sum = Duration::ZERO;
        let mut max = Duration::ZERO;
        let mut degenerate = false;
        for factor in &result.factors {
            let start = Instant::now();
            match factor.resultant_at(&point.values, &opts) {
                Ok(_) => {}
                Err(DecomposeError::Resultant(ResultantError::DegenerateSpecialization)) => {
                    degenerate = true;
                    break;
                }
                Err(e) => return Err(CliError::Validation(e.to_string())),
            }
            let elapsed = start.elapsed();
            sum += elapsed;
            max = max.max(elapsed);
        }
        if degenerate {
            println!("trial {t}: degenerate factor specialization, skipped");
            continue;
        }
        let speedup = direct_time.as_secs_f64() / sum.as_secs_f64().max(1e-9);
        println!(
            "trial {t}: direct {:.3?} | factor sum {:.3?}, max {:.3?} | speedup {speedup:.1}x",
            direct_time, sum, max
        );
        direct_total += direct_time;
        decomposed_total += sum;
        measured += 1;
    }
    if measured > 0 {
        let speedup = direct_total.as_secs_f64() / decomposed_total.as_secs_f64().max(1e-9);
        println!(
            "mean over {measured} trials: direct {:.3?}, decomposed {:.3?}, speedup {speedup:.1}x",
            direct_total / measured as u32,
            decomposed_total / measured as u32
        );
    }
    Ok(())
}
