//! Randomized-specialization certification: every decomposition identity is
//! checked against a direct Macaulay computation at seeded random rational
//! points, up to one global sign resolved on the first trial where both
//! sides are nonzero.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{CombinatoricsError, Partition};
use crate::decompose::{
    decompose_discriminant, decompose_resultant, DecomposeError, DecompositionResult,
};
use crate::equivariant::{check_equivariance, EquivarianceError, EquivariantSystem};
use crate::polyring::{Monomial, PolyError, Polynomial, RingContext, Scalar};
use crate::resultant::{
    macaulay_resultant, HomogeneousSystem, ResultantError, ResultantOptions,
};

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// Every trial hit a degenerate specialization.
    AllTrialsDegenerate,
    /// Set-partition enumeration bound exceeded.
    TooLargeForEnumeration { p: u32, max: u32 },
    InvalidParameters(String),
    Decompose(Box<DecomposeError>),
    Equivariance(EquivarianceError),
    Resultant(ResultantError),
    Combinatorics(CombinatoricsError),
    Poly(PolyError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::AllTrialsDegenerate => {
                write!(f, "all trials were degenerate specializations")
            }
            OracleError::TooLargeForEnumeration { p, max } => {
                write!(f, "p = {p} exceeds the brute-force enumeration bound {max}")
            }
            OracleError::InvalidParameters(msg) => write!(f, "{msg}"),
            OracleError::Decompose(e) => write!(f, "{e}"),
            OracleError::Equivariance(e) => write!(f, "{e}"),
            OracleError::Resultant(e) => write!(f, "{e}"),
            OracleError::Combinatorics(e) => write!(f, "{e}"),
            OracleError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for OracleError {}

impl From<DecomposeError> for OracleError {
    fn from(e: DecomposeError) -> Self {
        OracleError::Decompose(Box::new(e))
    }
}

impl From<EquivarianceError> for OracleError {
    fn from(e: EquivarianceError) -> Self {
        OracleError::Equivariance(e)
    }
}

impl From<ResultantError> for OracleError {
    fn from(e: ResultantError) -> Self {
        OracleError::Resultant(e)
    }
}

impl From<CombinatoricsError> for OracleError {
    fn from(e: CombinatoricsError) -> Self {
        OracleError::Combinatorics(e)
    }
}

impl From<PolyError> for OracleError {
    fn from(e: PolyError) -> Self {
        OracleError::Poly(e)
    }
}

/// splitmix64; stable across platforms and releases, which keeps seeded
/// reports reproducible.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Rational with numerator in `[-bound, bound]` and denominator in
    /// `[1, bound]`.
    pub fn rational(&mut self, bound: u32) -> Scalar {
        let span = 2 * bound as u64 + 1;
        let num = (self.next_u64() % span) as i64 - bound as i64;
        let den = (self.next_u64() % bound as u64) as i64 + 1;
        Scalar::new(num.into(), den.into())
    }

    /// Nonzero rational in the same range.
    pub fn nonzero_rational(&mut self, bound: u32) -> Scalar {
        loop {
            let r = self.rational(bound);
            if !r.is_zero() {
                return r;
            }
        }
    }
}

/// One parameter specialization, reproducible from `(seed, index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializationPoint {
    pub values: BTreeMap<String, Scalar>,
    pub seed: u64,
    pub index: u64,
}

/// Draw values for every parameter of the context: numerators in
/// `[-bound, bound]`, denominators in `[1, bound]`, deterministic in
/// `(seed, index)`.
pub fn draw_point(
    ctx: &Arc<RingContext>,
    seed: u64,
    index: u64,
    bound: u32,
) -> SpecializationPoint {
    let mut rng = SplitMix64::new(seed ^ index.wrapping_mul(0xA24BAED4963EE407));
    // decorrelate nearby seeds
    rng.next_u64();
    let mut values = BTreeMap::new();
    for name in ctx.params() {
        values.insert(name.clone(), rng.rational(bound));
    }
    SpecializationPoint {
        values,
        seed,
        index,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    Undetermined,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
            Sign::Undetermined => write!(f, "undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: u64,
    pub point: SpecializationPoint,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Outcome of a verification run. Equality and serialization ignore the
/// wall-clock timings, so reports are bit-identical across runs for fixed
/// `(system, trials, seed)`.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub trials_requested: u64,
    pub completed: u64,
    pub skipped_degenerate: u64,
    pub sign: Sign,
    pub counterexample: Option<Counterexample>,
    pub trial_times: Vec<Duration>,
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.trials_requested == other.trials_requested
            && self.completed == other.completed
            && self.skipped_degenerate == other.skipped_degenerate
            && self.sign == other.sign
            && self.counterexample == other.counterexample
    }
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.completed >= 1 && self.counterexample.is_none() && self.sign != Sign::Undetermined
    }
}

enum TrialOutcome {
    /// Both sides nonzero; records the sign of lhs/rhs and the point so an
    /// inconsistent sign across trials can name its witness.
    Completed {
        positive: bool,
        point: SpecializationPoint,
        lhs: Scalar,
        rhs: Scalar,
    },
    /// Both sides zero, or the Macaulay layout stayed degenerate: no sign
    /// information.
    Degenerate,
    Counterexample {
        point: SpecializationPoint,
        lhs: Scalar,
        rhs: Scalar,
    },
}

fn run_trials<F>(trials: u64, eval: F) -> Result<VerificationReport, OracleError>
where
    F: Fn(u64) -> Result<(TrialOutcome, Duration), OracleError> + Sync,
{
    let outcomes: Vec<Result<(TrialOutcome, Duration), OracleError>> =
        (0..trials).into_par_iter().map(&eval).collect();

    let mut completed = 0u64;
    let mut skipped = 0u64;
    let mut sign = Sign::Undetermined;
    let mut counterexample = None;
    let mut times = Vec::with_capacity(outcomes.len());
    for (t, outcome) in outcomes.into_iter().enumerate() {
        let (outcome, time) = outcome?;
        times.push(time);
        match outcome {
            TrialOutcome::Completed {
                positive,
                point,
                lhs,
                rhs,
            } => {
                completed += 1;
                let this = if positive { Sign::Plus } else { Sign::Minus };
                match sign {
                    Sign::Undetermined => sign = this,
                    s if s == this => {}
                    _ => {
                        // inconsistent sign across trials is a counterexample
                        if counterexample.is_none() {
                            counterexample = Some(Counterexample {
                                trial: t as u64,
                                point,
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
            TrialOutcome::Degenerate => skipped += 1,
            TrialOutcome::Counterexample { point, lhs, rhs } => {
                if counterexample.is_none() {
                    counterexample = Some(Counterexample {
                        trial: t as u64,
                        point,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(VerificationReport {
        trials_requested: trials,
        completed,
        skipped_degenerate: skipped,
        sign,
        counterexample,
        trial_times: times,
    })
}

/// Compare one specialized identity: `lhs = ±rhs` with both sides computed.
fn compare_sides(lhs: Scalar, rhs: Scalar, point: &SpecializationPoint) -> TrialOutcome {
    if lhs.is_zero() && rhs.is_zero() {
        return TrialOutcome::Degenerate;
    }
    if lhs == rhs {
        TrialOutcome::Completed {
            positive: true,
            point: point.clone(),
            lhs,
            rhs,
        }
    } else if lhs == -rhs.clone() {
        TrialOutcome::Completed {
            positive: false,
            point: point.clone(),
            lhs,
            rhs,
        }
    } else {
        TrialOutcome::Counterexample {
            point: point.clone(),
            lhs,
            rhs,
        }
    }
}

/// Verify the resultant decomposition of `sys` at `trials` seeded points:
/// the direct Macaulay resultant of the specialized system must equal the
/// decomposition product up to one global sign fixed across trials.
pub fn verify_decomposition(
    sys: &EquivariantSystem,
    trials: u64,
    seed: u64,
    bound: u32,
) -> Result<VerificationReport, OracleError> {
    let decomposition = decompose_resultant(sys)?;
    let report = run_trials(trials, |t| {
        let start = Instant::now();
        let point = draw_point(sys.ctx(), seed, t, bound);
        let outcome = decomposition_trial(sys, &decomposition, &point)?;
        Ok((outcome, start.elapsed()))
    })?;
    finalize(report, trials)
}

fn decomposition_trial(
    sys: &EquivariantSystem,
    decomposition: &DecompositionResult,
    point: &SpecializationPoint,
) -> Result<TrialOutcome, OracleError> {
    let opts = ResultantOptions::default();
    let lhs = match direct_resultant_at(sys.polys(), sys.degree(), &point.values, &opts) {
        Ok(v) => v,
        Err(ResultantError::DegenerateSpecialization) => return Ok(TrialOutcome::Degenerate),
        Err(e) => return Err(e.into()),
    };
    let rhs = match decomposition.evaluate_at(&point.values, &opts) {
        Ok(v) => v,
        Err(DecomposeError::Resultant(ResultantError::DegenerateSpecialization)) => {
            return Ok(TrialOutcome::Degenerate)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(compare_sides(lhs, rhs, point))
}

/// Direct Macaulay resultant of a system specialized at a parameter point.
pub fn direct_resultant_at(
    polys: &[Polynomial],
    degree: u32,
    values: &BTreeMap<String, Scalar>,
    opts: &ResultantOptions,
) -> Result<Scalar, ResultantError> {
    let specialized: Vec<Polynomial> = polys
        .iter()
        .map(|f| {
            let ctx = f.ctx();
            let mut assignment: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (name, value) in values {
                if let Some(id) = ctx.symbol(name) {
                    if !ctx.is_main(id) {
                        assignment.insert(id, value.clone());
                    }
                }
            }
            f.evaluate(&assignment)
        })
        .collect();
    let degrees = vec![degree; polys.len()];
    let sys = HomogeneousSystem::with_degrees(specialized, degrees)?;
    let res = macaulay_resultant(&sys, opts)?;
    Ok(res.as_constant().expect("specialized resultant is a scalar"))
}

/// Verify the discriminant decomposition of an invariant polynomial: at each
/// point, the decomposition product must equal the direct resultant of the
/// specialized partial derivatives up to one global sign. (Both sides equal
/// `d^{a(n,d)} Disc`.)
pub fn verify_discriminant(
    f: &Polynomial,
    ctx: &Arc<RingContext>,
    trials: u64,
    seed: u64,
    bound: u32,
) -> Result<VerificationReport, OracleError> {
    let (partials, decomposition) = decompose_discriminant(f, ctx)?;
    let report = run_trials(trials, |t| {
        let start = Instant::now();
        let point = draw_point(ctx, seed, t, bound);
        let outcome = decomposition_trial(&partials, &decomposition, &point)?;
        Ok((outcome, start.elapsed()))
    })?;
    finalize(report, trials)
}

fn finalize(report: VerificationReport, trials: u64) -> Result<VerificationReport, OracleError> {
    if trials > 0 && report.completed == 0 && report.counterexample.is_none() {
        return Err(OracleError::AllTrialsDegenerate);
    }
    Ok(report)
}

/// Coefficient mode for the random generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Fresh parameters `t1, t2, ...` / `u1, u2, ...` per seed shape.
    Parameters,
    /// Random rationals baked into the coefficients.
    Rational { bound: u32 },
}

/// Sample an equivariant system: the first polynomial of each block is a
/// random homogeneous degree-`d` combination of its leading variable, the
/// elementary symmetric polynomials of the rest of its block and the
/// elementary symmetric polynomials of the other block (invariance by
/// construction); the rest of the block is its transposition orbit. Output
/// always passes `check_equivariance`.
pub fn random_equivariant_system(
    n: usize,
    p: usize,
    d: u32,
    seed: u64,
    mode: CoefficientMode,
) -> Result<EquivariantSystem, OracleError> {
    if p == 0 || p >= n {
        return Err(OracleError::InvalidParameters(format!(
            "require 1 <= p < n, got p={p}, n={n}"
        )));
    }
    if d == 0 {
        return Err(OracleError::InvalidParameters("degree must be >= 1".into()));
    }
    let q = n - p;
    let shapes_first = generator_shapes(p, q, d);
    let shapes_second = generator_shapes(q, p, d);
    let main_vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let params: Vec<String> = match mode {
        CoefficientMode::Parameters => (1..=shapes_first.len())
            .map(|i| format!("t{i}"))
            .chain((1..=shapes_second.len()).map(|i| format!("u{i}")))
            .collect(),
        CoefficientMode::Rational { .. } => Vec::new(),
    };
    let ctx = RingContext::with_split(main_vars, params, p)?;
    let mut rng = SplitMix64::new(seed);

    let lead_first = build_seed_poly(
        &ctx,
        &shapes_first,
        0,
        0..p,
        p..n,
        &mode,
        &mut rng,
        0,
    );
    let lead_second = build_seed_poly(
        &ctx,
        &shapes_second,
        p,
        p..n,
        0..p,
        &mode,
        &mut rng,
        shapes_first.len(),
    );

    let mut polys = Vec::with_capacity(n);
    for i in 0..p {
        polys.push(orbit_image(&lead_first, 0, i, &ctx)?);
    }
    for i in p..n {
        polys.push(orbit_image(&lead_second, p, i, &ctx)?);
    }
    Ok(check_equivariance(polys, &ctx)?)
}

/// Exponent shapes `(lead, own_sym[..], other_sym[..])` with
/// `lead + sum j*own[j] + sum k*other[k] = d`. `own` covers the elementary
/// symmetric polynomials of the block minus its leading variable (sizes
/// 1..own_len), `other` those of the full other block.
fn generator_shapes(own_block: usize, other_block: usize, d: u32) -> Vec<(u32, Vec<u32>, Vec<u32>)> {
    let own_len = own_block - 1;
    let mut shapes = Vec::new();
    let mut own = vec![0u32; own_len];
    let mut other = vec![0u32; other_block];

    fn fill(
        slot: usize,
        remaining: u32,
        own: &mut Vec<u32>,
        other: &mut Vec<u32>,
        shapes: &mut Vec<(u32, Vec<u32>, Vec<u32>)>,
    ) {
        let own_len = own.len();
        let total = own_len + other.len();
        if slot == total {
            shapes.push((remaining, own.clone(), other.clone()));
            return;
        }
        // weight of this generator: elementary symmetric of size (index + 1)
        let weight = if slot < own_len {
            slot as u32 + 1
        } else {
            (slot - own_len) as u32 + 1
        };
        let max = remaining / weight;
        for e in 0..=max {
            if slot < own_len {
                own[slot] = e;
            } else {
                other[slot - own_len] = e;
            }
            fill(slot + 1, remaining - e * weight, own, other, shapes);
        }
        if slot < own_len {
            own[slot] = 0;
        } else {
            other[slot - own_len] = 0;
        }
    }
    fill(0, d, &mut own, &mut other, &mut shapes);
    shapes
}

/// Elementary symmetric polynomial `e_k` of the given variables.
fn elementary_symmetric(ctx: &Arc<RingContext>, vars: &[usize], k: usize) -> Polynomial {
    let mut acc = Polynomial::zero(ctx);
    let mut choice = vec![0usize; k];
    fn choose(
        vars: &[usize],
        k: usize,
        start: usize,
        depth: usize,
        choice: &mut Vec<usize>,
        ctx: &Arc<RingContext>,
        acc: &mut Polynomial,
    ) {
        if depth == k {
            let mono = Monomial::from_pairs(choice.iter().map(|&v| (v, 1u16)));
            *acc = &*acc + &Polynomial::from_terms(ctx, [(mono, Scalar::one())]);
            return;
        }
        for i in start..vars.len() {
            choice[depth] = vars[i];
            choose(vars, k, i + 1, depth + 1, choice, ctx, acc);
        }
    }
    choose(vars, k, 0, 0, &mut choice, ctx, &mut acc);
    acc
}

#[allow(clippy::too_many_arguments)]
fn build_seed_poly(
    ctx: &Arc<RingContext>,
    shapes: &[(u32, Vec<u32>, Vec<u32>)],
    lead_var: usize,
    own_block: std::ops::Range<usize>,
    other_block: std::ops::Range<usize>,
    mode: &CoefficientMode,
    rng: &mut SplitMix64,
    param_offset: usize,
) -> Polynomial {
    let own_rest: Vec<usize> = own_block.clone().filter(|&v| v != lead_var).collect();
    let other: Vec<usize> = other_block.collect();
    let mut acc = Polynomial::zero(ctx);
    for (idx, (lead_exp, own_exps, other_exps)) in shapes.iter().enumerate() {
        let coeff = match mode {
            CoefficientMode::Parameters => {
                Polynomial::var_id(ctx, ctx.n() + param_offset + idx)
            }
            CoefficientMode::Rational { bound } => {
                Polynomial::constant(ctx, rng.rational(*bound))
            }
        };
        let mut term = coeff;
        if *lead_exp > 0 {
            term = &term
                * &Polynomial::from_terms(
                    ctx,
                    [(Monomial::var(lead_var, *lead_exp as u16), Scalar::one())],
                );
        }
        for (j, &e) in own_exps.iter().enumerate() {
            if e > 0 {
                term = &term * &elementary_symmetric(ctx, &own_rest, j + 1).pow(e);
            }
        }
        for (k, &e) in other_exps.iter().enumerate() {
            if e > 0 {
                term = &term * &elementary_symmetric(ctx, &other, k + 1).pow(e);
            }
        }
        acc = &acc + &term;
    }
    acc
}

fn orbit_image(
    lead: &Polynomial,
    lead_var: usize,
    target: usize,
    ctx: &Arc<RingContext>,
) -> Result<Polynomial, OracleError> {
    if lead_var == target {
        return Ok(lead.clone());
    }
    let mut map: BTreeMap<usize, usize> = (0..ctx.n()).map(|i| (i, i)).collect();
    map.insert(lead_var, target);
    map.insert(target, lead_var);
    Ok(lead.substitute_variables(ctx, &map)?)
}

/// Count set partitions of `{1..p}` whose block-size multiset equals
/// `lambda`, by exhaustive enumeration; independent of the multinomial
/// formula.
pub fn brute_force_multinomial(lambda: &Partition) -> Result<u128, OracleError> {
    const MAX: u32 = 9;
    let p = lambda.total();
    if p > MAX {
        return Err(OracleError::TooLargeForEnumeration { p, max: MAX });
    }
    let mut target: Vec<u32> = lambda.parts().to_vec();
    target.sort_unstable();
    let mut count = 0u128;
    // enumerate set partitions: element i joins an existing block or opens
    // a new one
    let mut blocks: Vec<u32> = Vec::new();
    fn recurse(i: u32, p: u32, blocks: &mut Vec<u32>, target: &[u32], count: &mut u128) {
        if i == p {
            let mut sizes = blocks.clone();
            sizes.sort_unstable();
            if sizes == target {
                *count += 1;
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] += 1;
            recurse(i + 1, p, blocks, target, count);
            blocks[b] -= 1;
        }
        if blocks.len() < target.len() {
            blocks.push(1);
            recurse(i + 1, p, blocks, target, count);
            blocks.pop();
        }
    }
    recurse(0, p, &mut blocks, &target, &mut count);
    Ok(count)
}
