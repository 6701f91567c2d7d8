use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, RingContext, Scalar};

/// Sparse multivariate polynomial over `Q[parameters ∪ main variables]`.
///
/// Canonical form: no zero coefficients are stored and the `BTreeMap` keeps
/// terms in graded-lexicographic order, so iteration and formatting are
/// deterministic. Polynomials are immutable after construction; all
/// operations are pure functions.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ctx: Arc<RingContext>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        RingContext::same(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::constant(ctx, Scalar::one())
    }

    pub fn constant(ctx: &Arc<RingContext>, value: Scalar) -> Self {
        let mut p = Self::zero(ctx);
        if !value.is_zero() {
            p.terms.insert(Monomial::one(), value);
        }
        p
    }

    /// The symbol `name` as a polynomial.
    pub fn var(ctx: &Arc<RingContext>, name: &str) -> Result<Self, PolyError> {
        let id = ctx.symbol(name).ok_or_else(|| PolyError::UnknownSymbol {
            name: name.to_string(),
            offset: 0,
        })?;
        Ok(Self::var_id(ctx, id))
    }

    pub fn var_id(ctx: &Arc<RingContext>, id: usize) -> Self {
        let mut p = Self::zero(ctx);
        p.terms.insert(Monomial::var(id, 1), Scalar::one());
        p
    }

    pub fn from_terms(
        ctx: &Arc<RingContext>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Leading term in the graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// `Some(c)` iff the polynomial is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn assert_same_ctx(&self, other: &Polynomial) {
        assert!(
            RingContext::same(&self.ctx, &other.ctx),
            "operands come from different ring contexts"
        );
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !RingContext::same(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !RingContext::same(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !RingContext::same(&self.ctx, &other.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        Ok(self * other)
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Self::zero(&self.ctx);
        }
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / g`; fails unless the remainder is identically
    /// zero. Leading-term elimination in the canonical order: exactness of
    /// the division forces every intermediate leading term to be divisible by
    /// the divisor's leading term.
    pub fn exact_divide(&self, g: &Polynomial) -> Result<Polynomial, PolyError> {
        if !RingContext::same(&self.ctx, &g.ctx) {
            return Err(PolyError::ContextMismatch);
        }
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (g_lm, g_lc) = g.leading_term().unwrap();
        let g_lm = g_lm.clone();
        let g_lc = g_lc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((lm, lc)) = rem.leading_term() {
            let qm = lm.div(&g_lm).ok_or(PolyError::DivisionNotExact)?;
            let qc = lc / &g_lc;
            // rem -= (qc * qm) * g
            let mut update = Vec::with_capacity(g.terms.len());
            for (m, c) in g.terms.iter() {
                update.push((qm.mul(m), -(&qc * c)));
            }
            for (m, c) in update {
                rem.add_term(m, c);
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Formal partial derivative with respect to a main variable.
    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial, PolyError> {
        if var >= self.ctx.num_symbols() || !self.ctx.is_main(var) {
            let name = if var < self.ctx.num_symbols() {
                self.ctx.symbol_name(var).to_string()
            } else {
                format!("#{var}")
            };
            return Err(PolyError::NotMainVariable { name });
        }
        let mut out = Self::zero(&self.ctx);
        for (m, c) in self.terms.iter() {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let lowered = m.div(&Monomial::var(var, 1)).unwrap();
            out.add_term(lowered, c * Scalar::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Ring homomorphism renaming main variables through `map` (source main
    /// index -> target main index); parameters pass through by name and must
    /// all be declared in `target`.
    pub fn substitute_variables(
        &self,
        target: &Arc<RingContext>,
        map: &BTreeMap<usize, usize>,
    ) -> Result<Polynomial, PolyError> {
        for (&from, &to) in map {
            if !self.ctx.is_main(from) {
                return Err(PolyError::NotMainVariable {
                    name: self.ctx.symbol_name(from).to_string(),
                });
            }
            if to >= target.n() {
                return Err(PolyError::UnknownSymbol {
                    name: format!("main variable #{to}"),
                    offset: 0,
                });
            }
        }
        let mut param_map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut out = Self::zero(target);
        let mut translated: Vec<(Monomial, Scalar)> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.iter() {
            let mut pairs = Vec::new();
            for (sym, exp) in m.iter() {
                let target_sym = if self.ctx.is_main(sym) {
                    match map.get(&sym) {
                        Some(&t) => t,
                        None => {
                            return Err(PolyError::UnknownSymbol {
                                name: self.ctx.symbol_name(sym).to_string(),
                                offset: 0,
                            })
                        }
                    }
                } else if let Some(&t) = param_map.get(&sym) {
                    t
                } else {
                    let name = self.ctx.symbol_name(sym);
                    let t = target
                        .symbol(name)
                        .filter(|&t| !target.is_main(t))
                        .ok_or_else(|| PolyError::UnknownSymbol {
                            name: name.to_string(),
                            offset: 0,
                        })?;
                    param_map.insert(sym, t);
                    t
                };
                pairs.push((target_sym, exp));
            }
            translated.push((Monomial::from_pairs(pairs), c.clone()));
        }
        for (m, c) in translated {
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Substitute each main variable by a polynomial (`forms[i]` replaces the
    /// i-th main variable); parameters pass through. All forms must share one
    /// context, which becomes the context of the result.
    pub fn substitute_linear(&self, forms: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if forms.len() != self.ctx.n() {
            return Err(PolyError::InvalidContext(format!(
                "expected {} substitution forms, got {}",
                self.ctx.n(),
                forms.len()
            )));
        }
        let target = match forms.first() {
            Some(f) => Arc::clone(f.ctx()),
            None => Arc::clone(&self.ctx),
        };
        for f in forms {
            if !RingContext::same(f.ctx(), &target) {
                return Err(PolyError::ContextMismatch);
            }
        }
        let mut out = Self::zero(&target);
        for (m, c) in self.terms.iter() {
            let mut term = Self::constant(&target, c.clone());
            for (sym, exp) in m.iter() {
                if self.ctx.is_main(sym) {
                    term = &term * &forms[sym].pow(exp as u32);
                } else {
                    let name = self.ctx.symbol_name(sym);
                    let t = target
                        .symbol(name)
                        .filter(|&t| !target.is_main(t))
                        .ok_or_else(|| PolyError::UnknownSymbol {
                            name: name.to_string(),
                            offset: 0,
                        })?;
                    term = &term
                        * &Polynomial::from_terms(
                            &target,
                            [(Monomial::var(t, exp), Scalar::one())],
                        );
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Exact partial evaluation: symbols present in `assignment` are replaced
    /// by their values, the rest stay symbolic.
    pub fn evaluate(&self, assignment: &BTreeMap<usize, Scalar>) -> Polynomial {
        if assignment.is_empty() {
            return self.clone();
        }
        let mut out = Self::zero(&self.ctx);
        for (m, c) in self.terms.iter() {
            let mut coeff = c.clone();
            let mut pairs = Vec::new();
            for (sym, exp) in m.iter() {
                match assignment.get(&sym) {
                    Some(v) => {
                        let mut pw = Scalar::one();
                        for _ in 0..exp {
                            pw *= v;
                        }
                        coeff *= pw;
                    }
                    None => pairs.push((sym, exp)),
                }
            }
            out.add_term(Monomial::from_pairs(pairs), coeff);
        }
        out
    }

    /// Full evaluation; errors if any symbol remains unassigned.
    pub fn evaluate_full(&self, assignment: &BTreeMap<usize, Scalar>) -> Result<Scalar, PolyError> {
        let v = self.evaluate(assignment);
        v.as_constant().ok_or_else(|| {
            let (m, _) = v.leading_term().unwrap();
            let (sym, _) = m.iter().next().unwrap();
            PolyError::UnknownSymbol {
                name: v.ctx.symbol_name(sym).to_string(),
                offset: 0,
            }
        })
    }

    /// Degree in the main variables (`None` marks the zero polynomial, the
    /// "minus infinity" degree) and whether every term has that same
    /// main-variable degree.
    pub fn degree_and_homogeneity(&self) -> (Option<u32>, bool) {
        let n = self.ctx.n();
        let mut degree: Option<u32> = None;
        let mut homogeneous = true;
        for m in self.terms.keys() {
            let d = m.main_degree(n);
            match degree {
                None => degree = Some(d),
                Some(cur) => {
                    if d != cur {
                        homogeneous = false;
                        if d > cur {
                            degree = Some(d);
                        }
                    }
                }
            }
        }
        (degree, homogeneous)
    }

    pub fn main_degree(&self) -> Option<u32> {
        self.degree_and_homogeneity().0
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_and_homogeneity().1
    }

    /// Maximum parameter degree over all terms (`None` for zero).
    pub fn param_degree(&self) -> Option<u32> {
        let n = self.ctx.n();
        self.terms.keys().map(|m| m.param_degree(n)).max()
    }

    /// True if no main variable occurs (a polynomial in parameters only).
    pub fn is_param_only(&self) -> bool {
        self.main_degree().is_none_or(|d| d == 0)
    }

    /// The coefficient of the main-variable monomial `main` as a polynomial
    /// in parameters only.
    pub fn coefficient_of_main(&self, main: &Monomial) -> Polynomial {
        let n = self.ctx.n();
        let mut out = Self::zero(&self.ctx);
        for (m, c) in self.terms.iter() {
            let main_part = Monomial::from_pairs(m.iter().filter(|&(s, _)| s < n));
            if &main_part == main {
                let param_part = Monomial::from_pairs(m.iter().filter(|&(s, _)| s >= n));
                out.add_term(param_part, c.clone());
            }
        }
        out
    }

    /// Distinct main-variable monomials occurring in the polynomial, in
    /// canonical ascending order.
    pub fn main_support(&self) -> Vec<Monomial> {
        let n = self.ctx.n();
        let set: std::collections::BTreeSet<Monomial> = self
            .terms
            .keys()
            .map(|m| Monomial::from_pairs(m.iter().filter(|&(s, _)| s < n)))
            .collect();
        set.into_iter().collect()
    }

    /// Indices of main variables that actually occur.
    pub fn used_main_vars(&self) -> Vec<usize> {
        let n = self.ctx.n();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (s, _) in m.iter() {
                if s < n {
                    used[s] = true;
                }
            }
        }
        (0..n).filter(|&i| used[i]).collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ctx(rhs);
        let mut out = Polynomial::zero(&self.ctx);
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (m1, c1) in small.terms.iter() {
            for (m2, c2) in large.terms.iter() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

fn write_scalar_abs(f: &mut fmt::Formatter<'_>, c: &Scalar) -> fmt::Result {
    let a = c.abs();
    if a.is_integer() {
        write!(f, "{}", a.numer())
    } else {
        write!(f, "{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = c.abs().is_one();
            if !unit || m.is_one() {
                write_scalar_abs(f, c)?;
            }
            let mut first_sym = true;
            for (sym, exp) in m.iter() {
                if !first_sym || !unit {
                    write!(f, "*")?;
                }
                first_sym = false;
                write!(f, "{}", self.ctx.symbol_name(sym))?;
                if exp > 1 {
                    write!(f, "^{exp}")?;
                }
            }
        }
        Ok(())
    }
}
