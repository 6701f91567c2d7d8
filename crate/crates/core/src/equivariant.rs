//! Block-equivariant polynomial systems: validation, divided differences and
//! the specialization maps that collapse variable blocks.
//!
//! A system `f^{1},...,f^{n}` of homogeneous polynomials of common degree `d`
//! is *equivariant* for the block product of symmetric groups when
//! `sigma(f^{k}) = f^{sigma(k)}` for every block-preserving permutation
//! `sigma`. Verifying it on the adjacent transpositions of each block
//! suffices because the law is a group action.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::combinatorics::PartitionPair;
use crate::polyring::{Monomial, PolyError, Polynomial, RingContext, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum EquivarianceError {
    /// A polynomial is not homogeneous in the main variables.
    Inhomogeneous { label: usize },
    /// Polynomials do not share one degree.
    DegreeMismatch { label: usize, expected: u32, found: u32 },
    /// The system is empty, has the wrong length, or degree 0.
    InvalidSystem(String),
    /// `sigma(f^{k}) != f^{sigma(k)}` for the named transposition.
    Violation {
        /// 1-based indices of the failing transposition.
        transposition: (usize, usize),
        /// 1-based label of the polynomial that fails.
        label: usize,
    },
    /// Divided-difference indices cross the block boundary.
    IndicesCrossBlocks,
    /// More than `d + 1` indices requested.
    TooManyIndices { len: usize, max: usize },
    /// Duplicate or out-of-range index.
    BadIndex(usize),
    /// Block too small for the requested constant divided difference.
    BlockTooSmall { block: usize, size: usize, needed: usize },
    /// Exact division failed: the input family is not equivariant.
    NotEquivariantDivision,
    Poly(PolyError),
}

impl fmt::Display for EquivarianceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivarianceError::Inhomogeneous { label } => {
                write!(f, "f^{{{label}}} is not homogeneous in the main variables")
            }
            EquivarianceError::DegreeMismatch { label, expected, found } => write!(
                f,
                "f^{{{label}}} has degree {found}, expected common degree {expected}"
            ),
            EquivarianceError::InvalidSystem(msg) => write!(f, "invalid system: {msg}"),
            EquivarianceError::Violation { transposition, label } => write!(
                f,
                "equivariance fails for transposition ({} {}) at f^{{{label}}}",
                transposition.0, transposition.1
            ),
            EquivarianceError::IndicesCrossBlocks => {
                write!(f, "divided-difference indices must stay within one block")
            }
            EquivarianceError::TooManyIndices { len, max } => {
                write!(f, "{len} indices requested, at most {max} allowed")
            }
            EquivarianceError::BadIndex(i) => write!(f, "bad index {i}"),
            EquivarianceError::BlockTooSmall { block, size, needed } => write!(
                f,
                "block {block} has {size} variables but {needed} are needed"
            ),
            EquivarianceError::NotEquivariantDivision => {
                write!(f, "exact division failed; the family is not equivariant")
            }
            EquivarianceError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EquivarianceError {}

impl From<PolyError> for EquivarianceError {
    fn from(e: PolyError) -> Self {
        EquivarianceError::Poly(e)
    }
}

/// A permutation of `{0..n-1}` preserving the blocks `{0..p-1}` and
/// `{p..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPermutation {
    images: Vec<usize>,
    p: usize,
}

impl BlockPermutation {
    pub fn identity(n: usize, p: usize) -> Self {
        BlockPermutation {
            images: (0..n).collect(),
            p,
        }
    }

    /// Transposition of `i` and `j` (0-based); both must lie in one block.
    pub fn transposition(n: usize, p: usize, i: usize, j: usize) -> Result<Self, EquivarianceError> {
        if i >= n || j >= n {
            return Err(EquivarianceError::BadIndex(i.max(j)));
        }
        if (i < p) != (j < p) {
            return Err(EquivarianceError::IndicesCrossBlocks);
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Ok(BlockPermutation { images, p })
    }

    pub fn from_images(images: Vec<usize>, p: usize) -> Result<Self, EquivarianceError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &img) in images.iter().enumerate() {
            if img >= n || seen[img] {
                return Err(EquivarianceError::BadIndex(img));
            }
            if (i < p) != (img < p) {
                return Err(EquivarianceError::IndicesCrossBlocks);
            }
            seen[img] = true;
        }
        Ok(BlockPermutation { images, p })
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &BlockPermutation) -> BlockPermutation {
        BlockPermutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
            p: self.p,
        }
    }

    /// Action on polynomials: `sigma(f)(x_1..x_n) = f(x_{sigma(1)}, ...,
    /// x_{sigma(n)})`, i.e. substitute `x_i -> x_{sigma(i)}`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, PolyError> {
        let map: BTreeMap<usize, usize> = self.images.iter().copied().enumerate().collect();
        f.substitute_variables(f.ctx(), &map)
    }
}

/// A validated equivariant system: `n` homogeneous polynomials of common
/// degree `d` over a split ring context, satisfying the block action law.
///
/// Divided differences are memoized per index set in a thread-safe cache;
/// systems are otherwise immutable and safe to share.
#[derive(Debug)]
pub struct EquivariantSystem {
    ctx: Arc<RingContext>,
    polys: Vec<Polynomial>,
    degree: u32,
    cache: Mutex<HashMap<Vec<usize>, Polynomial>>,
}

/// Verify homogeneity, common degree and the equivariance law on the
/// adjacent transpositions of both blocks, returning the validated system.
pub fn check_equivariance(
    polys: Vec<Polynomial>,
    ctx: &Arc<RingContext>,
) -> Result<EquivariantSystem, EquivarianceError> {
    let n = ctx.n();
    let p = ctx.split().ok_or_else(|| {
        EquivarianceError::InvalidSystem("ring context has no block split".into())
    })?;
    if polys.len() != n {
        return Err(EquivarianceError::InvalidSystem(format!(
            "{} polynomials supplied for {n} variables",
            polys.len()
        )));
    }
    for f in &polys {
        if !RingContext::same(f.ctx(), ctx) {
            return Err(EquivarianceError::Poly(PolyError::ContextMismatch));
        }
    }
    let mut degree = None;
    for (k, f) in polys.iter().enumerate() {
        let (deg, homogeneous) = f.degree_and_homogeneity();
        if !homogeneous {
            return Err(EquivarianceError::Inhomogeneous { label: k + 1 });
        }
        let deg = deg.filter(|&d| d > 0).ok_or(EquivarianceError::InvalidSystem(
            format!("f^{{{}}} is zero or constant", k + 1),
        ))?;
        match degree {
            None => degree = Some(deg),
            Some(d) if d != deg => {
                return Err(EquivarianceError::DegreeMismatch {
                    label: k + 1,
                    expected: d,
                    found: deg,
                })
            }
            _ => {}
        }
    }
    let degree = degree.unwrap();

    // Adjacent transpositions generate each block's symmetric group, so the
    // action law checked on them holds for the whole group.
    let mut generators = Vec::new();
    for i in 0..p.saturating_sub(1) {
        generators.push((i, i + 1));
    }
    for i in p..n.saturating_sub(1) {
        generators.push((i, i + 1));
    }
    for &(i, j) in &generators {
        let tau = BlockPermutation::transposition(n, p, i, j)?;
        for k in 0..n {
            let image_label = tau.image(k);
            let lhs = tau.apply(&polys[k])?;
            if lhs != polys[image_label] {
                return Err(EquivarianceError::Violation {
                    transposition: (i + 1, j + 1),
                    label: k + 1,
                });
            }
        }
    }

    Ok(EquivariantSystem {
        ctx: Arc::clone(ctx),
        polys,
        degree,
        cache: Mutex::new(HashMap::new()),
    })
}

impl EquivariantSystem {
    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn poly(&self, index: usize) -> &Polynomial {
        &self.polys[index]
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn p(&self) -> usize {
        self.ctx.p()
    }

    pub fn q(&self) -> usize {
        self.ctx.q()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn validate_indices(&self, indices: &[usize]) -> Result<(), EquivarianceError> {
        if indices.is_empty() {
            return Err(EquivarianceError::InvalidSystem("empty index list".into()));
        }
        let p = self.p();
        let n = self.n();
        let first_block = indices[0] < p;
        let mut seen = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(EquivarianceError::BadIndex(i));
            }
            if (i < p) != first_block {
                return Err(EquivarianceError::IndicesCrossBlocks);
            }
            if seen[i] {
                return Err(EquivarianceError::BadIndex(i));
            }
            seen[i] = true;
        }
        let max = self.degree as usize + 1;
        if indices.len() > max {
            return Err(EquivarianceError::TooManyIndices {
                len: indices.len(),
                max,
            });
        }
        Ok(())
    }

    /// Iterated divided difference `f^{(i_1,...,i_k)}` over distinct indices
    /// of one block (0-based):
    ///
    /// ```text
    /// f^{(i1)}     = f^{i1}
    /// f^{(i1..ik)} = (f^{(i1..i_{k-1})} - f^{(i1..i_{k-2}, i_k)}) / (x_{i_{k-1}} - x_{i_k})
    /// ```
    ///
    /// The division is exact precisely because the family is equivariant.
    /// The result is homogeneous of degree `d - k + 1` (or zero) and
    /// symmetric in the index set.
    pub fn divided_difference(&self, indices: &[usize]) -> Result<Polynomial, EquivarianceError> {
        self.validate_indices(indices)?;
        self.divided_difference_inner(indices)
    }

    fn divided_difference_inner(&self, indices: &[usize]) -> Result<Polynomial, EquivarianceError> {
        if indices.len() == 1 {
            return Ok(self.polys[indices[0]].clone());
        }
        // cache key: sorted index set (the value is symmetric in the set)
        let mut key: Vec<usize> = indices.to_vec();
        key.sort_unstable();
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let k = indices.len();
        let left = self.divided_difference_inner(&indices[..k - 1])?;
        let mut skipped: Vec<usize> = indices[..k - 2].to_vec();
        skipped.push(indices[k - 1]);
        let right = self.divided_difference_inner(&skipped)?;
        let x_prev = Polynomial::var_id(&self.ctx, indices[k - 2]);
        let x_last = Polynomial::var_id(&self.ctx, indices[k - 1]);
        let quotient = (&left - &right)
            .exact_divide(&(&x_prev - &x_last))
            .map_err(|e| match e {
                PolyError::DivisionNotExact => EquivarianceError::NotEquivariantDivision,
                other => EquivarianceError::Poly(other),
            })?;
        self.cache.lock().unwrap().insert(key, quotient.clone());
        Ok(quotient)
    }

    /// The degree-zero divided difference over `d + 1` indices of one block:
    /// `f^{(1..d+1)}` for block 1 or `f^{(p+1..p+d+1)}` for block 2. Only
    /// defined when the block has more than `d` variables.
    pub fn constant_divided_difference(
        &self,
        block: usize,
    ) -> Result<Polynomial, EquivarianceError> {
        let d = self.degree as usize;
        let (offset, size) = match block {
            1 => (0, self.p()),
            2 => (self.p(), self.q()),
            _ => return Err(EquivarianceError::BadIndex(block)),
        };
        if size <= d {
            return Err(EquivarianceError::BlockTooSmall {
                block,
                size,
                needed: d + 1,
            });
        }
        let indices: Vec<usize> = (offset..offset + d + 1).collect();
        self.divided_difference(&indices)
    }
}

/// The ring map `rho_Lambda` collapsing each run of `lambda_t` consecutive
/// first-block variables to a fresh variable `y_t`, and each run of
/// `lambda'_t` second-block variables to `y'_t`.
#[derive(Debug, Clone)]
pub struct SpecializationMap {
    pair: PartitionPair,
    source: Arc<RingContext>,
    target: Arc<RingContext>,
    /// `var_map[i]` is the target main variable index for source variable `i`.
    var_map: Vec<usize>,
    /// Leftmost source index of each first-block fiber.
    reps_first: Vec<usize>,
    /// Leftmost source index of each second-block fiber.
    reps_second: Vec<usize>,
}

impl SpecializationMap {
    pub fn new(source: &Arc<RingContext>, pair: &PartitionPair) -> Result<Self, EquivarianceError> {
        let p = source
            .split()
            .ok_or_else(|| EquivarianceError::InvalidSystem("context has no block split".into()))?;
        let q = source.n() - p;
        if pair.first.total() as usize != p || pair.second.total() as usize != q {
            return Err(EquivarianceError::InvalidSystem(format!(
                "partition pair {pair} does not match block sizes ({p},{q})"
            )));
        }
        let r1 = pair.r1();
        let r2 = pair.r2();
        let mut names: Vec<String> = (1..=r1).map(|t| format!("y{t}")).collect();
        names.extend((1..=r2).map(|t| format!("y'{t}")));
        for name in &names {
            if source.symbol(name).is_some_and(|id| !source.is_main(id)) {
                return Err(EquivarianceError::InvalidSystem(format!(
                    "parameter name `{name}` collides with a specialization variable"
                )));
            }
        }
        let target = RingContext::with_split(names, source.params().to_vec(), r1)
            .map_err(EquivarianceError::Poly)?;

        let mut var_map = Vec::with_capacity(source.n());
        let mut reps_first = Vec::with_capacity(r1);
        let mut cursor = 0usize;
        for (t, &part) in pair.first.parts().iter().enumerate() {
            reps_first.push(cursor);
            for _ in 0..part {
                var_map.push(t);
                cursor += 1;
            }
        }
        let mut reps_second = Vec::with_capacity(r2);
        for (t, &part) in pair.second.parts().iter().enumerate() {
            reps_second.push(cursor);
            for _ in 0..part {
                var_map.push(r1 + t);
                cursor += 1;
            }
        }

        Ok(SpecializationMap {
            pair: pair.clone(),
            source: Arc::clone(source),
            target,
            var_map,
            reps_first,
            reps_second,
        })
    }

    pub fn pair(&self) -> &PartitionPair {
        &self.pair
    }

    pub fn source(&self) -> &Arc<RingContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingContext> {
        &self.target
    }

    pub fn var_map(&self) -> &[usize] {
        &self.var_map
    }

    /// Leftmost source index of each fiber: block 1 gives
    /// `i_t = 1 + sum_{u<t} lambda_u` (0-based here), block 2 the analogue
    /// offset by `p`.
    pub fn representatives(&self, block: usize) -> &[usize] {
        match block {
            1 => &self.reps_first,
            2 => &self.reps_second,
            _ => panic!("block must be 1 or 2"),
        }
    }

    /// Apply the ring homomorphism to a polynomial of the source context.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, EquivarianceError> {
        let map: BTreeMap<usize, usize> = self.var_map.iter().copied().enumerate().collect();
        Ok(f.substitute_variables(&self.target, &map)?)
    }
}

/// The per-pair factor system of the decomposition:
///
/// ```text
/// [rho(f^{(i1)}), rho(f^{(i1,i2)}), ..., rho(f^{(i1..i_{r1})}),
///  rho(f^{(j1)}), ..., rho(f^{(j1..j_{r2})})]
/// ```
///
/// using the leftmost representative of each fiber; the entries are
/// homogeneous of degrees `d, d-1, ..., d-r1+1, d, d-1, ..., d-r2+1` in the
/// `r1 + r2` target variables.
pub fn build_factor_system(
    sys: &EquivariantSystem,
    pair: &PartitionPair,
) -> Result<(SpecializationMap, Vec<Polynomial>), EquivarianceError> {
    let d = sys.degree() as usize;
    if pair.r1() > d || pair.r2() > d {
        return Err(EquivarianceError::TooManyIndices {
            len: pair.r1().max(pair.r2()),
            max: d,
        });
    }
    let map = SpecializationMap::new(sys.ctx(), pair)?;
    let mut polys = Vec::with_capacity(pair.r1() + pair.r2());
    for t in 1..=pair.r1() {
        let indices = &map.reps_first[..t];
        let dd = sys.divided_difference(indices)?;
        polys.push(map.apply(&dd)?);
    }
    for t in 1..=pair.r2() {
        let indices = &map.reps_second[..t];
        let dd = sys.divided_difference(indices)?;
        polys.push(map.apply(&dd)?);
    }
    Ok((map, polys))
}

/// Evaluate polynomials at a parameter assignment given by name; symbols not
/// present in a polynomial's context are ignored.
pub fn specialize_params(
    polys: &[Polynomial],
    values: &BTreeMap<String, Scalar>,
) -> Vec<Polynomial> {
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
            f.evaluate(&assignment)
        })
        .collect()
}

/// Convenience: the main-variable monomial of a single variable.
pub fn main_var_monomial(i: usize, exp: u16) -> Monomial {
    Monomial::var(i, exp)
}
