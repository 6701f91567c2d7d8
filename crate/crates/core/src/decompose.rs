//! The decomposition of an equivariant resultant into a constant divided
//! difference raised to an explicit exponent times one small resultant per
//! partition pair, and the induced decomposition of the discriminant of a
//! block-invariant polynomial.
//!
//! Four cases partition the `(p, q, d)` space: a block contributes its
//! constant factor `f^{(1..d+1)}` (with exponent `mu`) exactly when it has
//! more than `d` variables; the partition pairs range under the caps
//! `r1 <= d`, `r2 <= d`. The discriminant variant decomposes the partial
//! derivatives (degree `d - 1`), so its thresholds and caps are strict, and
//! it carries the scalar prefactor `d^{a(n,d)}` on the discriminant side.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::combinatorics::{
    enumerate_pairs, enumerate_partitions, falling_product, multinomial_m, CombinatoricsError,
    PartitionPair,
};
use crate::equivariant::{
    build_factor_system, check_equivariance, BlockPermutation, EquivarianceError,
    EquivariantSystem,
};
use crate::polyring::{PolyError, Polynomial, RingContext, Scalar};
use crate::resultant::{
    macaulay_resultant, scalar_pow, split_resultant, HomogeneousSystem, ResultantError,
    ResultantOptions,
};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub enum DecomposeError {
    /// `f` is not invariant under a block generator.
    NotInvariant { transposition: (usize, usize) },
    /// Discriminants need degree at least 2.
    DegreeTooSmall { degree: u32 },
    /// The constant factor (and its exponent) does not occur in this case.
    ConstantFactorAbsent { block: usize },
    /// A computed exponent came out negative (formula misuse).
    NegativeExponent { value: i128 },
    /// Exponent does not fit the evaluation range.
    ExponentOverflow,
    /// A parameter needed for evaluation was not assigned.
    MissingParameter { name: String },
    Equivariance(EquivarianceError),
    Combinatorics(CombinatoricsError),
    Resultant(ResultantError),
    Poly(PolyError),
}

impl fmt::Display for DecomposeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecomposeError::NotInvariant { transposition } => write!(
                f,
                "polynomial is not invariant under transposition ({} {})",
                transposition.0, transposition.1
            ),
            DecomposeError::DegreeTooSmall { degree } => {
                write!(f, "discriminant requires degree >= 2, got {degree}")
            }
            DecomposeError::ConstantFactorAbsent { block } => {
                write!(f, "no constant factor occurs for block {block} in this case")
            }
            DecomposeError::NegativeExponent { value } => {
                write!(f, "exponent formula produced a negative value {value}")
            }
            DecomposeError::ExponentOverflow => write!(f, "exponent exceeds evaluation range"),
            DecomposeError::MissingParameter { name } => {
                write!(f, "parameter `{name}` has no assigned value")
            }
            DecomposeError::Equivariance(e) => write!(f, "{e}"),
            DecomposeError::Combinatorics(e) => write!(f, "{e}"),
            DecomposeError::Resultant(e) => write!(f, "{e}"),
            DecomposeError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DecomposeError {}

impl From<EquivarianceError> for DecomposeError {
    fn from(e: EquivarianceError) -> Self {
        DecomposeError::Equivariance(e)
    }
}

impl From<CombinatoricsError> for DecomposeError {
    fn from(e: CombinatoricsError) -> Self {
        DecomposeError::Combinatorics(e)
    }
}

impl From<ResultantError> for DecomposeError {
    fn from(e: ResultantError) -> Self {
        DecomposeError::Resultant(e)
    }
}

impl From<PolyError> for DecomposeError {
    fn from(e: PolyError) -> Self {
        DecomposeError::Poly(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Resultant,
    Discriminant,
}

/// Which of the four inequalities of the decomposition held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub first_large: bool,
    pub second_large: bool,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = |large: bool| if large { ">" } else { "<=" };
        write!(
            f,
            "p {} d, q {} d",
            rel(self.first_large),
            rel(self.second_large)
        )
    }
}

/// Constant factor `(f^{(1..d+1)})^mu` of one block.
#[derive(Debug, Clone)]
pub struct ConstantFactor {
    pub block: usize,
    /// Parameter-only polynomial (the degree-zero divided difference).
    pub value: Polynomial,
    pub exponent: u64,
}

/// One `Res(...)^{m_lambda m_lambda'}` factor.
#[derive(Debug, Clone)]
pub struct ResultantFactor {
    pub pair: PartitionPair,
    /// The specialized divided-difference chain in the `y`/`y'` variables.
    pub system: Vec<Polynomial>,
    /// Declared degrees `d, d-1, ..., d-r1+1, d, d-1, ..., d-r2+1`.
    pub degrees: Vec<u32>,
    pub exponent: u128,
}

impl ResultantFactor {
    pub fn target_ctx(&self) -> &Arc<RingContext> {
        self.system[0].ctx()
    }

    /// Evaluate the factor's resultant symbolically over the parameters.
    /// The variable-disjoint product rule keeps matrices small when the
    /// specialized chains decouple.
    pub fn resultant_symbolic(&self, opts: &ResultantOptions) -> Result<Polynomial, DecomposeError> {
        let sys = HomogeneousSystem::with_degrees(self.system.clone(), self.degrees.clone())?;
        Ok(split_resultant(&sys, opts)?)
    }

    /// Evaluate the factor's resultant at a full parameter assignment.
    pub fn resultant_at(
        &self,
        values: &BTreeMap<String, Scalar>,
        opts: &ResultantOptions,
    ) -> Result<Scalar, DecomposeError> {
        let specialized = specialize_by_name(&self.system, values)?;
        let sys = HomogeneousSystem::with_degrees(specialized, self.degrees.clone())?;
        let res = macaulay_resultant(&sys, opts)?;
        res.as_constant().ok_or_else(|| {
            let name = first_symbol_name(&res);
            DecomposeError::MissingParameter { name }
        })
    }
}

/// The sign-ambiguous product decomposition: constant factors with their `mu`
/// exponents and one resultant factor per partition pair, in canonical pair
/// order. `Res(system) = ± prod constants^mu * prod factors^exponent`; for
/// the discriminant variant the left side is `d^{a(n,d)} * Disc(f)`.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub variant: Variant,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// Degree of the decomposed system (`d`, or `d - 1` for discriminants).
    pub system_degree: u32,
    /// Degree of the invariant polynomial for discriminants, else
    /// `system_degree`.
    pub original_degree: u32,
    pub case: Case,
    pub constant_factors: Vec<ConstantFactor>,
    pub factors: Vec<ResultantFactor>,
    /// `(d, a(n, d))` for the discriminant variant.
    pub disc_prefactor: Option<(u32, u64)>,
}

impl DecompositionResult {
    /// Evaluate the full product (constants and factor resultants, with
    /// exponents) at a parameter assignment. For the discriminant variant
    /// this is the value of `d^{a(n,d)} * Disc(f)` up to the global sign.
    pub fn evaluate_at(
        &self,
        values: &BTreeMap<String, Scalar>,
        opts: &ResultantOptions,
    ) -> Result<Scalar, DecomposeError> {
        let mut acc = Scalar::one();
        for c in &self.constant_factors {
            let v = eval_param_poly(&c.value, values)?;
            acc *= scalar_pow(&v, c.exponent);
        }
        for factor in &self.factors {
            let v = factor.resultant_at(values, opts)?;
            let exp: u64 = factor
                .exponent
                .try_into()
                .map_err(|_| DecomposeError::ExponentOverflow)?;
            acc *= scalar_pow(&v, exp);
        }
        Ok(acc)
    }

    /// The discriminant prefactor `d^{a(n,d)}` as an exact scalar.
    pub fn prefactor_value(&self) -> Scalar {
        match self.disc_prefactor {
            None => Scalar::one(),
            Some((base, exp)) => scalar_pow(&Scalar::from_integer(base.into()), exp),
        }
    }
}

fn specialize_by_name(
    polys: &[Polynomial],
    values: &BTreeMap<String, Scalar>,
) -> Result<Vec<Polynomial>, DecomposeError> {
    polys
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
            Ok(f.evaluate(&assignment))
        })
        .collect()
}

fn first_symbol_name(f: &Polynomial) -> String {
    f.terms()
        .flat_map(|(m, _)| m.iter())
        .next()
        .map(|(s, _)| f.ctx().symbol_name(s).to_string())
        .unwrap_or_default()
}

fn eval_param_poly(
    f: &Polynomial,
    values: &BTreeMap<String, Scalar>,
) -> Result<Scalar, DecomposeError> {
    let ctx = f.ctx();
    let mut assignment: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (name, value) in values {
        if let Some(id) = ctx.symbol(name) {
            assignment.insert(id, value.clone());
        }
    }
    f.evaluate_full(&assignment).map_err(|_| {
        let name = first_symbol_name(&f.evaluate(&assignment));
        DecomposeError::MissingParameter { name }
    })
}

/// The exponent of a block's constant divided-difference factor, exactly as
/// the counting formula states it:
///
/// ```text
/// mu_1 = n d^{n-1} - sum_{lambda |- p, r1 <= d} m_lambda *
///        ( sum_{j=1}^{r1} d(d-1)...(d-r1+1) d^q / (d-j+1)
///          + d(d-1)...(d-r1+1) q d^{q-1} )
/// ```
///
/// with the block-2 version obtained by swapping the roles of `p` and `q`.
/// The discriminant variant is the same formula with `d` replaced by
/// `d - 1` (the partial derivatives have degree `d - 1`), which also turns
/// the caps into the strict `r < d`.
pub fn mu_exponent(
    n: usize,
    d: u32,
    p: usize,
    q: usize,
    block: usize,
    variant: Variant,
) -> Result<u64, DecomposeError> {
    let d_eff = match variant {
        Variant::Resultant => d,
        Variant::Discriminant => {
            if d < 2 {
                return Err(DecomposeError::DegreeTooSmall { degree: d });
            }
            d - 1
        }
    };
    let (own, other) = match block {
        1 => (p, q),
        2 => (q, p),
        _ => return Err(DecomposeError::ConstantFactorAbsent { block }),
    };
    if own <= d_eff as usize {
        return Err(DecomposeError::ConstantFactorAbsent { block });
    }
    let de = d_eff as i128;
    let mut total: i128 = (n as i128) * de.pow((n - 1) as u32);
    for lambda in enumerate_partitions(own as u32, Some(d_eff as usize))? {
        let r = lambda.len() as u32;
        let m = multinomial_m(&lambda)? as i128;
        let fall = falling_product(d_eff as i64, r);
        let mut inner: i128 = 0;
        for j in 1..=r {
            let divisor = de - j as i128 + 1;
            debug_assert!(divisor > 0 && fall % divisor == 0);
            inner += (fall / divisor) * de.pow(other as u32);
        }
        if other > 0 {
            inner += fall * other as i128 * de.pow((other - 1) as u32);
        }
        total -= m * inner;
    }
    u64::try_from(total).map_err(|_| DecomposeError::NegativeExponent { value: total })
}

/// `a(n, d) = ((d-1)^n - (-1)^n) / d`, always an exact division.
pub fn a_exponent(n: usize, d: u32) -> u64 {
    let sign: i128 = if n.is_multiple_of(2) { 1 } else { -1 };
    let value = ((d as i128 - 1).pow(n as u32) - sign) / d as i128;
    u64::try_from(value).expect("a(n,d) is non-negative")
}

/// Decompose the resultant of a validated equivariant system.
pub fn decompose_resultant(sys: &EquivariantSystem) -> Result<DecompositionResult, DecomposeError> {
    let result = decompose_system(sys, Variant::Resultant, sys.degree(), None)?;
    Ok(result)
}

/// Decompose the discriminant of a block-invariant homogeneous polynomial:
/// forms the partial-derivative system (degree `d - 1`), validates its
/// equivariance, decomposes it, and records the prefactor `d^{a(n,d)}` on
/// the discriminant side. Returns the partials system alongside so callers
/// can verify against the direct resultant.
pub fn decompose_discriminant(
    f: &Polynomial,
    ctx: &Arc<RingContext>,
) -> Result<(EquivariantSystem, DecompositionResult), DecomposeError> {
    let p = ctx
        .split()
        .ok_or_else(|| {
            DecomposeError::Equivariance(EquivarianceError::InvalidSystem(
                "ring context has no block split".into(),
            ))
        })?;
    let n = ctx.n();
    let (degree, homogeneous) = f.degree_and_homogeneity();
    let degree = degree.unwrap_or(0);
    if !homogeneous {
        return Err(DecomposeError::Equivariance(EquivarianceError::Inhomogeneous {
            label: 1,
        }));
    }
    if degree < 2 {
        return Err(DecomposeError::DegreeTooSmall { degree });
    }
    // invariance on the adjacent transpositions of both blocks
    for (i, j) in block_generators(n, p) {
        let tau = BlockPermutation::transposition(n, p, i, j)?;
        if tau.apply(f)? != *f {
            return Err(DecomposeError::NotInvariant {
                transposition: (i + 1, j + 1),
            });
        }
    }
    let partials = (0..n)
        .map(|i| f.partial_derivative(i))
        .collect::<Result<Vec<_>, _>>()?;
    let sys = check_equivariance(partials, ctx)?;
    let prefactor = (degree, a_exponent(n, degree));
    let mut result = decompose_system(&sys, Variant::Discriminant, degree, Some(prefactor))?;
    result.original_degree = degree;
    Ok((sys, result))
}

fn block_generators(n: usize, p: usize) -> Vec<(usize, usize)> {
    let mut generators = Vec::new();
    for i in 0..p.saturating_sub(1) {
        generators.push((i, i + 1));
    }
    for i in p..n.saturating_sub(1) {
        generators.push((i, i + 1));
    }
    generators
}

fn decompose_system(
    sys: &EquivariantSystem,
    variant: Variant,
    original_degree: u32,
    disc_prefactor: Option<(u32, u64)>,
) -> Result<DecompositionResult, DecomposeError> {
    let n = sys.n();
    let p = sys.p();
    let q = sys.q();
    let d = sys.degree();
    let case = Case {
        first_large: p > d as usize,
        second_large: q > d as usize,
    };

    let mut constant_factors = Vec::new();
    // The mu formulas take the degree of the decomposed system directly:
    // for discriminants the partials already have degree d - 1, which is
    // exactly the substitution the discriminant variant makes.
    if case.first_large {
        constant_factors.push(ConstantFactor {
            block: 1,
            value: sys.constant_divided_difference(1)?,
            exponent: mu_exponent(n, d, p, q, 1, Variant::Resultant)?,
        });
    }
    if case.second_large {
        constant_factors.push(ConstantFactor {
            block: 2,
            value: sys.constant_divided_difference(2)?,
            exponent: mu_exponent(n, d, p, q, 2, Variant::Resultant)?,
        });
    }

    let cap = d as usize;
    let pairs = enumerate_pairs(p as u32, q as u32, Some(cap), Some(cap))?;
    let mut factors = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let (_, system) = build_factor_system(sys, &pair)?;
        let mut degrees = Vec::with_capacity(pair.r1() + pair.r2());
        for t in 0..pair.r1() as u32 {
            degrees.push(d - t);
        }
        for t in 0..pair.r2() as u32 {
            degrees.push(d - t);
        }
        let exponent = pair.weight()?;
        factors.push(ResultantFactor {
            pair,
            system,
            degrees,
            exponent,
        });
    }

    Ok(DecompositionResult {
        variant,
        n,
        p,
        q,
        system_degree: d,
        original_degree,
        case,
        constant_factors,
        factors,
        disc_prefactor,
    })
}

/// Per-factor degree ledger: with every input coefficient of parameter
/// degree at most 1, the parameter degrees of the evaluated factors times
/// their exponents must add up to `n * d^{n-1}` for the decomposed system.
/// Report-only.
#[derive(Debug, Clone)]
pub struct DegreeAuditEntry {
    pub label: String,
    pub exponent: u128,
    pub factor_degree: u32,
    pub contribution: u128,
}

#[derive(Debug, Clone)]
pub struct DegreeAuditReport {
    pub expected_total: u128,
    pub total: u128,
    pub matches: bool,
    pub entries: Vec<DegreeAuditEntry>,
}

impl fmt::Display for DegreeAuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{}: degree {} x exponent {} = {}",
                e.label, e.factor_degree, e.exponent, e.contribution
            )?;
        }
        write!(
            f,
            "total {} (expected {}): {}",
            self.total,
            self.expected_total,
            if self.matches { "match" } else { "MISMATCH" }
        )
    }
}

pub fn degree_audit(
    result: &DecompositionResult,
    opts: &ResultantOptions,
) -> Result<DegreeAuditReport, DecomposeError> {
    let d = result.system_degree as u128;
    let expected_total = result.n as u128 * d.pow((result.n - 1) as u32);
    let mut entries = Vec::new();
    let mut total: u128 = 0;
    for c in &result.constant_factors {
        let degree = c.value.param_degree().unwrap_or(0);
        let contribution = c.exponent as u128 * degree as u128;
        total += contribution;
        entries.push(DegreeAuditEntry {
            label: format!("constant block {}", c.block),
            exponent: c.exponent as u128,
            factor_degree: degree,
            contribution,
        });
    }
    for factor in &result.factors {
        let value = factor.resultant_symbolic(opts)?;
        let degree = value.param_degree().unwrap_or(0);
        let contribution = factor.exponent * degree as u128;
        total += contribution;
        entries.push(DegreeAuditEntry {
            label: format!("Res {}", factor.pair),
            exponent: factor.exponent,
            factor_degree: degree,
            contribution,
        });
    }
    Ok(DegreeAuditReport {
        expected_total,
        total,
        matches: total == expected_total,
        entries,
    })
}
