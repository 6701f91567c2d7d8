use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use super::PolyError;

/// Declares the symbols of a polynomial ring: an ordered list of main
/// variables (weight 1) followed by an ordered list of parameters (weight 0).
///
/// Symbols are addressed by index: main variables occupy `0..n`, parameters
/// `n..n + params.len()`. A context may carry a *block split* `p`
/// (`1 <= p < n`) partitioning the main variables into `{x_1..x_p}` and
/// `{x_{p+1}..x_n}`; contexts built for plain resultant work leave it unset.
///
/// Contexts are immutable after construction and shared via `Arc`.
#[derive(Debug, PartialEq, Eq)]
pub struct RingContext {
    main_vars: Vec<String>,
    params: Vec<String>,
    split: Option<usize>,
    by_name: HashMap<String, usize>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '\'' || c == '_')
}

impl RingContext {
    fn build(
        main_vars: Vec<String>,
        params: Vec<String>,
        split: Option<usize>,
    ) -> Result<Arc<Self>, PolyError> {
        if main_vars.is_empty() {
            return Err(PolyError::InvalidContext(
                "at least one main variable is required".into(),
            ));
        }
        if let Some(p) = split {
            if p == 0 || p >= main_vars.len() {
                return Err(PolyError::InvalidContext(format!(
                    "block split must satisfy 1 <= p < n, got p={p}, n={}",
                    main_vars.len()
                )));
            }
        }
        let mut by_name = HashMap::new();
        for (idx, name) in main_vars.iter().chain(params.iter()).enumerate() {
            if !valid_name(name) {
                return Err(PolyError::InvalidContext(format!(
                    "`{name}` is not a valid symbol name"
                )));
            }
            if by_name.insert(name.clone(), idx).is_some() {
                return Err(PolyError::InvalidContext(format!(
                    "duplicate symbol `{name}`"
                )));
            }
        }
        Ok(Arc::new(RingContext {
            main_vars,
            params,
            split,
            by_name,
        }))
    }

    /// Context without a block split.
    pub fn new<S: Into<String>>(
        main_vars: Vec<S>,
        params: Vec<S>,
    ) -> Result<Arc<Self>, PolyError> {
        Self::build(
            main_vars.into_iter().map(Into::into).collect(),
            params.into_iter().map(Into::into).collect(),
            None,
        )
    }

    /// Context whose main variables are split into blocks `{1..p}` and
    /// `{p+1..n}` (1-based in the notation, `0..p` and `p..n` as indices).
    pub fn with_split<S: Into<String>>(
        main_vars: Vec<S>,
        params: Vec<S>,
        p: usize,
    ) -> Result<Arc<Self>, PolyError> {
        Self::build(
            main_vars.into_iter().map(Into::into).collect(),
            params.into_iter().map(Into::into).collect(),
            Some(p),
        )
    }

    /// Number of main variables.
    pub fn n(&self) -> usize {
        self.main_vars.len()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.main_vars.len() + self.params.len()
    }

    pub fn split(&self) -> Option<usize> {
        self.split
    }

    /// Size of the first block. Panics if the context has no split.
    pub fn p(&self) -> usize {
        self.split.expect("ring context has no block split")
    }

    /// Size of the second block. Panics if the context has no split.
    pub fn q(&self) -> usize {
        self.n() - self.p()
    }

    /// Indices of the first block of main variables.
    pub fn first_block(&self) -> Range<usize> {
        0..self.p()
    }

    /// Indices of the second block of main variables.
    pub fn second_block(&self) -> Range<usize> {
        self.p()..self.n()
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn symbol_name(&self, id: usize) -> &str {
        if id < self.main_vars.len() {
            &self.main_vars[id]
        } else {
            &self.params[id - self.main_vars.len()]
        }
    }

    pub fn is_main(&self, id: usize) -> bool {
        id < self.main_vars.len()
    }

    pub fn main_vars(&self) -> &[String] {
        &self.main_vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Contexts are interchangeable when their declarations agree; `Arc`
    /// identity is only a fast path.
    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_accessors() {
        let ctx =
            RingContext::with_split(vec!["x1", "x2", "x3", "x4", "x5"], vec!["a", "b"], 3).unwrap();
        assert_eq!(ctx.n(), 5);
        assert_eq!(ctx.p(), 3);
        assert_eq!(ctx.q(), 2);
        assert_eq!(ctx.first_block(), 0..3);
        assert_eq!(ctx.second_block(), 3..5);
        assert_eq!(ctx.symbol("a"), Some(5));
        assert!(ctx.is_main(2));
        assert!(!ctx.is_main(5));
        assert_eq!(ctx.symbol_name(6), "b");
    }

    #[test]
    fn rejects_bad_declarations() {
        assert!(RingContext::with_split(vec!["x", "y"], vec!["x"], 1).is_err());
        assert!(RingContext::with_split(vec!["x", "y"], vec![], 0).is_err());
        assert!(RingContext::with_split(vec!["x", "y"], vec![], 2).is_err());
        assert!(RingContext::new(vec!["2x"], vec![]).is_err());
        assert!(RingContext::new(Vec::<&str>::new(), vec!["a"]).is_err());
    }

    #[test]
    fn primed_names_are_valid() {
        let ctx = RingContext::new(vec!["y1", "y'1"], vec!["a"]).unwrap();
        assert_eq!(ctx.symbol("y'1"), Some(1));
    }
}
