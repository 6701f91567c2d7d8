//! Exact resultants of square homogeneous systems via the Macaulay
//! construction, with a Sylvester engine for bivariate cross-checks.
//!
//! Values are canonical for the fixed layout and normalized so that the
//! resultant of the pure-power system `(x_1^{d_1}, ..., x_m^{d_m})` is 1;
//! cross-engine comparisons are made up to sign.

mod determinant;

pub use determinant::{determinant_fraction_free, determinant_scalar, DetEntry};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::polyring::{Monomial, PolyError, Polynomial, RingContext, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum ResultantError {
    /// Input polynomial is not homogeneous (or its degree disagrees with the
    /// declared degree vector).
    NotHomogeneous { index: usize },
    /// Degrees must all be at least 1.
    ZeroDegree { index: usize },
    /// Number of polynomials must equal the number of main variables.
    NotSquare { polys: usize, vars: usize },
    /// Sylvester requires exactly two main variables.
    NotBivariate,
    /// `det(M') = 0` persisted through all random changes of variables.
    DegenerateSpecialization,
    /// A symbolic Macaulay matrix exceeded the configured size cap.
    SymbolicTooLarge { size: usize, cap: usize },
    /// The Macaulay quotient failed to divide exactly (internal invariant).
    InexactQuotient,
    Poly(PolyError),
}

impl fmt::Display for ResultantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResultantError::NotHomogeneous { index } => {
                write!(f, "polynomial {index} is not homogeneous of its declared degree")
            }
            ResultantError::ZeroDegree { index } => {
                write!(f, "polynomial {index} must have degree >= 1")
            }
            ResultantError::NotSquare { polys, vars } => {
                write!(f, "{polys} polynomials in {vars} variables; the system must be square")
            }
            ResultantError::NotBivariate => {
                write!(f, "Sylvester resultants require exactly two variables")
            }
            ResultantError::DegenerateSpecialization => {
                write!(f, "degenerate specialization: reduced Macaulay minor stayed singular")
            }
            ResultantError::SymbolicTooLarge { size, cap } => write!(
                f,
                "symbolic Macaulay matrix of size {size} exceeds the cap {cap}; specialize parameters first"
            ),
            ResultantError::InexactQuotient => {
                write!(f, "Macaulay quotient division was not exact")
            }
            ResultantError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ResultantError {}

impl From<PolyError> for ResultantError {
    fn from(e: PolyError) -> Self {
        ResultantError::Poly(e)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ResultantOptions {
    /// Largest Macaulay matrix computed over `Q[parameters]`; larger systems
    /// must be specialized to rational coefficients first.
    pub symbolic_cap: usize,
    /// Random changes of variables attempted when `det(M') = 0`.
    pub max_retries: u32,
}

impl Default for ResultantOptions {
    fn default() -> Self {
        ResultantOptions {
            symbolic_cap: 64,
            max_retries: 5,
        }
    }
}

/// A square homogeneous system: `m` polynomials in the `m` main variables of
/// one context, the i-th homogeneous of declared degree `d_i >= 1`.
/// Individual polynomials may be identically zero (after a parameter
/// specialization); their resultant is zero.
#[derive(Debug, Clone)]
pub struct HomogeneousSystem {
    ctx: Arc<RingContext>,
    polys: Vec<Polynomial>,
    degrees: Vec<u32>,
}

impl HomogeneousSystem {
    /// Degrees inferred from the polynomials, which must all be nonzero.
    pub fn new(polys: Vec<Polynomial>) -> Result<Self, ResultantError> {
        let degrees = polys
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let (deg, homogeneous) = f.degree_and_homogeneity();
                if !homogeneous {
                    return Err(ResultantError::NotHomogeneous { index: i });
                }
                deg.filter(|&d| d >= 1)
                    .ok_or(ResultantError::ZeroDegree { index: i })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_degrees(polys, degrees)
    }

    /// Declared degrees; polynomials may be zero or must match the declared
    /// homogeneous degree.
    pub fn with_degrees(polys: Vec<Polynomial>, degrees: Vec<u32>) -> Result<Self, ResultantError> {
        if polys.is_empty() {
            return Err(ResultantError::NotSquare { polys: 0, vars: 0 });
        }
        let ctx = Arc::clone(polys[0].ctx());
        if polys.len() != ctx.n() || polys.len() != degrees.len() {
            return Err(ResultantError::NotSquare {
                polys: polys.len(),
                vars: ctx.n(),
            });
        }
        for (i, f) in polys.iter().enumerate() {
            if !RingContext::same(f.ctx(), &ctx) {
                return Err(ResultantError::Poly(PolyError::ContextMismatch));
            }
            if degrees[i] == 0 {
                return Err(ResultantError::ZeroDegree { index: i });
            }
            let (deg, homogeneous) = f.degree_and_homogeneity();
            if !homogeneous || deg.is_some_and(|d| d != degrees[i] && !f.is_zero()) {
                return Err(ResultantError::NotHomogeneous { index: i });
            }
        }
        Ok(HomogeneousSystem { ctx, polys, degrees })
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True when every coefficient is a rational constant (no parameters).
    pub fn is_numeric(&self) -> bool {
        self.polys.iter().all(|f| f.param_degree().unwrap_or(0) == 0)
    }

    /// Product of all degrees (the change-of-variables exponent).
    pub fn degree_product(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).product()
    }
}

/// The classical Macaulay layout for a degree vector `(d_1, ..., d_m)`:
/// columns are the монomials of critical degree `nu = 1 + sum (d_i - 1)` in
/// `m` variables; the row for column monomial `x^alpha` holds
/// `(x^alpha / x_i^{d_i}) * f_i` for the smallest `i` with `alpha_i >= d_i`;
/// a monomial is flagged *reduced* when it is divisible by `x_i^{d_i}` for at
/// least two indices `i`. `Res = det(M) / det(M')` with `M'` the submatrix on
/// reduced rows and columns.
#[derive(Debug, Clone)]
pub struct MacaulayLayout {
    pub degrees: Vec<u32>,
    pub nu: u32,
    /// Column monomials in descending canonical order.
    pub columns: Vec<Monomial>,
    /// Assigned polynomial index per column monomial.
    pub row_poly: Vec<usize>,
    /// `x^alpha / x_i^{d_i}` per column monomial.
    pub row_multiplier: Vec<Monomial>,
    /// Reduced flag per column monomial.
    pub reduced: Vec<bool>,
}

impl MacaulayLayout {
    pub fn new(degrees: &[u32]) -> Self {
        let m = degrees.len();
        let nu: u32 = 1 + degrees.iter().map(|&d| d - 1).sum::<u32>();
        let mut columns = monomials_of_degree(m, nu);
        columns.sort_unstable_by(|a, b| b.cmp(a));
        let mut row_poly = Vec::with_capacity(columns.len());
        let mut row_multiplier = Vec::with_capacity(columns.len());
        let mut reduced = Vec::with_capacity(columns.len());
        for alpha in &columns {
            let mut divisible = (0..m).filter(|&i| alpha.exponent(i) >= degrees[i] as u16);
            let i = divisible
                .next()
                .expect("every degree-nu monomial is divisible by some x_i^{d_i}");
            let extra = divisible.next().is_some();
            row_poly.push(i);
            row_multiplier.push(
                alpha
                    .div(&Monomial::var(i, degrees[i] as u16))
                    .expect("division by the assigned prime power"),
            );
            reduced.push(extra);
        }
        MacaulayLayout {
            degrees: degrees.to_vec(),
            nu,
            columns,
            row_poly,
            row_multiplier,
            reduced,
        }
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn reduced_size(&self) -> usize {
        self.reduced.iter().filter(|&&r| r).count()
    }
}

/// All monomials of total degree `deg` in variables `0..m`.
fn monomials_of_degree(m: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u16)> = Vec::new();
    fn run(var: usize, left: u32, m: usize, stack: &mut Vec<(usize, u16)>, out: &mut Vec<Monomial>) {
        if var + 1 == m {
            let mut pairs = stack.clone();
            if left > 0 {
                pairs.push((var, left as u16));
            }
            out.push(Monomial::from_pairs(pairs));
            return;
        }
        for e in (0..=left).rev() {
            if e > 0 {
                stack.push((var, e as u16));
            }
            run(var + 1, left - e, m, stack, out);
            if e > 0 {
                stack.pop();
            }
        }
    }
    run(0, deg, m, &mut stack, &mut out);
    out
}

/// Direct Macaulay resultant of a square homogeneous system, over `Q` or
/// `Q[parameters]`: the quotient `det(M) / det(M')` for the fixed layout,
/// with an automatic random change of variables (and the
/// `det(A)^{d_1...d_m}` correction) when `det(M') = 0`.
pub fn macaulay_resultant(
    sys: &HomogeneousSystem,
    opts: &ResultantOptions,
) -> Result<Polynomial, ResultantError> {
    let ctx = sys.ctx();
    if sys.polys().iter().any(|f| f.is_zero()) {
        return Ok(Polynomial::zero(ctx));
    }
    if sys.len() == 1 {
        // Res(c * x^d) = c by convention; falls out of the layout too, but
        // short-circuit to keep the m = 1 path obvious.
        let d = sys.degrees()[0];
        return Ok(sys.polys()[0].coefficient_of_main(&Monomial::var(0, d as u16)));
    }
    let layout = MacaulayLayout::new(sys.degrees());
    if !sys.is_numeric() && layout.size() > opts.symbolic_cap {
        return Err(ResultantError::SymbolicTooLarge {
            size: layout.size(),
            cap: opts.symbolic_cap,
        });
    }

    let mut rng = RetryRng::new(0x9a6c_01da_5eed_0001);
    for _attempt in 0..=opts.max_retries {
        let (polys, correction) = if _attempt == 0 {
            (sys.polys().to_vec(), Scalar::one())
        } else {
            let (transformed, det_a) = random_change_of_variables(sys, &mut rng)?;
            let corr = scalar_pow(&det_a, sys.degree_product());
            (transformed, corr)
        };
        match macaulay_quotient(ctx, &polys, &layout)? {
            Some(res) => {
                let res = if correction.is_one() {
                    res
                } else {
                    res.mul_scalar(&correction.recip())
                };
                return Ok(res);
            }
            None => continue,
        }
    }
    Err(ResultantError::DegenerateSpecialization)
}

/// One Macaulay quotient attempt; `None` signals `det(M') = 0`.
fn macaulay_quotient(
    ctx: &Arc<RingContext>,
    polys: &[Polynomial],
    layout: &MacaulayLayout,
) -> Result<Option<Polynomial>, ResultantError> {
    let numeric = polys.iter().all(|f| f.param_degree().unwrap_or(0) == 0);
    let col_index: HashMap<&Monomial, usize> = layout
        .columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    if numeric {
        let decomposed: Vec<Vec<(Monomial, Scalar)>> = polys
            .iter()
            .map(|f| {
                f.main_support()
                    .into_iter()
                    .map(|m| {
                        let c = f
                            .coefficient_of_main(&m)
                            .as_constant()
                            .expect("numeric system");
                        (m, c)
                    })
                    .collect()
            })
            .collect();
        let n = layout.size();
        let mut matrix: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); n]; n];
        for (r, row) in matrix.iter_mut().enumerate() {
            let poly = layout.row_poly[r];
            let mult = &layout.row_multiplier[r];
            for (mono, coeff) in &decomposed[poly] {
                let col = col_index[&mult.mul(mono)];
                row[col] = coeff.clone();
            }
        }
        let reduced_idx: Vec<usize> = (0..n).filter(|&i| layout.reduced[i]).collect();
        let m_prime: Vec<Vec<Scalar>> = reduced_idx
            .iter()
            .map(|&r| reduced_idx.iter().map(|&c| matrix[r][c].clone()).collect())
            .collect();
        let det_prime = determinant_scalar(&m_prime);
        if Zero::is_zero(&det_prime) {
            return Ok(None);
        }
        let det_full = determinant_scalar(&matrix);
        Ok(Some(Polynomial::constant(ctx, det_full / det_prime)))
    } else {
        let decomposed: Vec<Vec<(Monomial, Polynomial)>> = polys
            .iter()
            .map(|f| {
                f.main_support()
                    .into_iter()
                    .map(|m| {
                        let c = f.coefficient_of_main(&m);
                        (m, c)
                    })
                    .collect()
            })
            .collect();
        let n = layout.size();
        let mut matrix: Vec<Vec<Polynomial>> = vec![vec![Polynomial::zero(ctx); n]; n];
        for (r, row) in matrix.iter_mut().enumerate() {
            let poly = layout.row_poly[r];
            let mult = &layout.row_multiplier[r];
            for (mono, coeff) in &decomposed[poly] {
                let col = col_index[&mult.mul(mono)];
                row[col] = coeff.clone();
            }
        }
        let reduced_idx: Vec<usize> = (0..n).filter(|&i| layout.reduced[i]).collect();
        let det_prime = if reduced_idx.is_empty() {
            Polynomial::one(ctx)
        } else {
            let m_prime: Vec<Vec<Polynomial>> = reduced_idx
                .iter()
                .map(|&r| reduced_idx.iter().map(|&c| matrix[r][c].clone()).collect())
                .collect();
            match determinant_fraction_free(m_prime) {
                Some(d) => d,
                None => return Ok(None),
            }
        };
        let det_full = match determinant_fraction_free(matrix) {
            Some(d) => d,
            None => return Ok(Some(Polynomial::zero(ctx))),
        };
        let quotient = det_full
            .exact_divide(&det_prime)
            .map_err(|_| ResultantError::InexactQuotient)?;
        Ok(Some(quotient))
    }
}

/// Resultant with the variable-disjoint product rule: when the system splits
/// into square groups sharing no main variables, the resultant is the
/// product over groups `Res(group)^{prod of the other groups' degrees}`
/// (up to sign), each group computed by the Macaulay quotient. Falls back to
/// the direct construction for connected systems. Keeps symbolic matrices
/// small when factors decouple; the direct engine never uses this rule.
pub fn split_resultant(
    sys: &HomogeneousSystem,
    opts: &ResultantOptions,
) -> Result<Polynomial, ResultantError> {
    let ctx = sys.ctx();
    if sys.polys().iter().any(|f| f.is_zero()) {
        return Ok(Polynomial::zero(ctx));
    }
    let components = variable_components(sys);
    if components.len() <= 1 {
        return macaulay_resultant(sys, opts);
    }
    // Every component must be square for the product rule; otherwise defer
    // to the direct construction.
    for comp in &components {
        if comp.polys.len() != comp.vars.len() {
            return macaulay_resultant(sys, opts);
        }
    }
    let mut result = Polynomial::one(ctx);
    for (i, comp) in components.iter().enumerate() {
        let sub = restrict_system(sys, comp)?;
        let sub_res = split_resultant(&sub, opts)?;
        // translate back: the sub-result is a parameter-only polynomial
        let back = lift_param_only(&sub_res, ctx)?;
        let mut exponent: u64 = 1;
        for (j, other) in components.iter().enumerate() {
            if i != j {
                exponent *= other
                    .polys
                    .iter()
                    .map(|&k| sys.degrees()[k] as u64)
                    .product::<u64>();
            }
        }
        result = &result * &poly_pow_u64(&back, exponent);
    }
    Ok(result)
}

struct Component {
    polys: Vec<usize>,
    vars: Vec<usize>,
}

/// Connected components of the polynomial/variable incidence graph.
fn variable_components(sys: &HomogeneousSystem) -> Vec<Component> {
    let m = sys.len();
    let used: Vec<Vec<usize>> = sys.polys().iter().map(|f| f.used_main_vars()).collect();
    let mut poly_comp: Vec<Option<usize>> = vec![None; m];
    let mut var_comp: Vec<Option<usize>> = vec![None; sys.ctx().n()];
    let mut components: Vec<Component> = Vec::new();
    for start in 0..m {
        if poly_comp[start].is_some() {
            continue;
        }
        let id = components.len();
        let mut comp = Component {
            polys: Vec::new(),
            vars: Vec::new(),
        };
        let mut queue = vec![start];
        poly_comp[start] = Some(id);
        while let Some(pi) = queue.pop() {
            comp.polys.push(pi);
            for &v in &used[pi] {
                if var_comp[v].is_none() {
                    var_comp[v] = Some(id);
                    comp.vars.push(v);
                    for (pj, uj) in used.iter().enumerate() {
                        if poly_comp[pj].is_none() && uj.contains(&v) {
                            poly_comp[pj] = Some(id);
                            queue.push(pj);
                        }
                    }
                }
            }
        }
        comp.polys.sort_unstable();
        comp.vars.sort_unstable();
        components.push(comp);
    }
    components
}

/// Re-express a component's polynomials in a context holding only its own
/// variables (parameters carried over unchanged).
fn restrict_system(
    sys: &HomogeneousSystem,
    comp: &Component,
) -> Result<HomogeneousSystem, ResultantError> {
    let ctx = sys.ctx();
    let names: Vec<String> = comp
        .vars
        .iter()
        .map(|&v| ctx.symbol_name(v).to_string())
        .collect();
    let sub_ctx = RingContext::new(names, ctx.params().to_vec())?;
    let map: std::collections::BTreeMap<usize, usize> = comp
        .vars
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let polys = comp
        .polys
        .iter()
        .map(|&i| sys.polys()[i].substitute_variables(&sub_ctx, &map))
        .collect::<Result<Vec<_>, _>>()?;
    let degrees = comp.polys.iter().map(|&i| sys.degrees()[i]).collect();
    HomogeneousSystem::with_degrees(polys, degrees)
}

/// Move a parameter-only polynomial into another context sharing the same
/// parameter names.
fn lift_param_only(
    f: &Polynomial,
    target: &Arc<RingContext>,
) -> Result<Polynomial, ResultantError> {
    let empty = std::collections::BTreeMap::new();
    Ok(f.substitute_variables(target, &empty)?)
}

/// Homogeneous Sylvester resultant of two bivariate forms: the determinant
/// of the `(d1 + d2)`-square matrix of shifted coefficient sequences of the
/// dehomogenizations (formal degree kept, so vanishing leading coefficients
/// are handled). Independent of the Macaulay construction; agrees with it up
/// to sign.
pub fn sylvester_resultant(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, ResultantError> {
    let ctx = f.ctx();
    if !RingContext::same(ctx, g.ctx()) {
        return Err(ResultantError::Poly(PolyError::ContextMismatch));
    }
    if ctx.n() != 2 {
        return Err(ResultantError::NotBivariate);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Polynomial::zero(ctx));
    }
    let (d1, hom1) = f.degree_and_homogeneity();
    let (d2, hom2) = g.degree_and_homogeneity();
    if !hom1 {
        return Err(ResultantError::NotHomogeneous { index: 0 });
    }
    if !hom2 {
        return Err(ResultantError::NotHomogeneous { index: 1 });
    }
    let d1 = d1.filter(|&d| d >= 1).ok_or(ResultantError::ZeroDegree { index: 0 })?;
    let d2 = d2.filter(|&d| d >= 1).ok_or(ResultantError::ZeroDegree { index: 1 })?;

    // coefficient of x^i y^{d-i}, i descending (leading coefficient first)
    let coeffs = |h: &Polynomial, d: u32| -> Vec<Polynomial> {
        (0..=d)
            .rev()
            .map(|i| {
                h.coefficient_of_main(&Monomial::from_pairs([
                    (0usize, i as u16),
                    (1usize, (d - i) as u16),
                ]))
            })
            .collect()
    };
    let fc = coeffs(f, d1);
    let gc = coeffs(g, d2);
    let n = (d1 + d2) as usize;
    let mut matrix: Vec<Vec<Polynomial>> = vec![vec![Polynomial::zero(ctx); n]; n];
    for s in 0..d2 as usize {
        for (j, c) in fc.iter().enumerate() {
            matrix[s][s + j] = c.clone();
        }
    }
    for s in 0..d1 as usize {
        for (j, c) in gc.iter().enumerate() {
            matrix[d2 as usize + s][s + j] = c.clone();
        }
    }
    let numeric = matrix
        .iter()
        .flatten()
        .all(|e| e.as_constant().is_some());
    if numeric {
        let rows: Vec<Vec<Scalar>> = matrix
            .iter()
            .map(|row| row.iter().map(|e| e.as_constant().unwrap()).collect())
            .collect();
        Ok(Polynomial::constant(ctx, determinant_scalar(&rows)))
    } else {
        Ok(determinant_fraction_free(matrix).unwrap_or_else(|| Polynomial::zero(ctx)))
    }
}

/// Scalar power with a u64 exponent.
pub fn scalar_pow(s: &Scalar, exp: u64) -> Scalar {
    let mut acc = Scalar::one();
    let mut base = s.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

fn poly_pow_u64(f: &Polynomial, exp: u64) -> Polynomial {
    let mut acc = Polynomial::one(f.ctx());
    let mut base = f.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Deterministic generator for the change-of-variables retries.
struct RetryRng(u64);

impl RetryRng {
    fn new(seed: u64) -> Self {
        RetryRng(seed)
    }

    fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    fn small_int(&mut self) -> i64 {
        (self.next() % 7) as i64 - 3
    }
}

/// Apply a random invertible rational change of variables `x -> A x`;
/// returns the transformed system and `det(A)`.
fn random_change_of_variables(
    sys: &HomogeneousSystem,
    rng: &mut RetryRng,
) -> Result<(Vec<Polynomial>, Scalar), ResultantError> {
    let ctx = sys.ctx();
    let n = ctx.n();
    loop {
        let entries: Vec<Vec<Scalar>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Scalar::from_integer(rng.small_int().into()))
                    .collect()
            })
            .collect();
        let det = determinant_scalar(&entries);
        if Zero::is_zero(&det) {
            continue;
        }
        let forms: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut acc = Polynomial::zero(ctx);
                for (j, e) in entries[i].iter().enumerate() {
                    acc = &acc + &Polynomial::var_id(ctx, j).mul_scalar(e);
                }
                acc
            })
            .collect();
        let transformed = sys
            .polys()
            .iter()
            .map(|f| f.substitute_linear(&forms))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((transformed, det));
    }
}
