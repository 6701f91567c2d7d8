use std::cmp::Ordering;

/// Sparse exponent vector: `(symbol index, exponent)` pairs sorted by symbol,
/// never storing zero exponents. Symbol indices resolve against one
/// [`super::RingContext`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u16, u16)>);

impl Monomial {
    /// The empty monomial (constant 1).
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(symbol: usize, exp: u16) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(symbol as u16, exp)])
        }
    }

    /// From arbitrary `(symbol, exponent)` pairs; merges duplicates, drops
    /// zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u16)>) -> Self {
        let mut v: Vec<(u16, u16)> = Vec::new();
        for (s, e) in pairs {
            if e > 0 {
                v.push((s as u16, e));
            }
        }
        v.sort_unstable_by_key(|&(s, _)| s);
        let mut merged: Vec<(u16, u16)> = Vec::with_capacity(v.len());
        for (s, e) in v {
            match merged.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => merged.push((s, e)),
            }
        }
        Monomial(merged)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, symbol: usize) -> u16 {
        self.0
            .binary_search_by_key(&(symbol as u16), |&(s, _)| s)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.0.iter().map(|&(s, e)| (s as usize, e))
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    /// Degree counting only symbols below `n_main` (the main variables).
    pub fn main_degree(&self, n_main: usize) -> u32 {
        self.0
            .iter()
            .filter(|&&(s, _)| (s as usize) < n_main)
            .map(|&(_, e)| e as u32)
            .sum()
    }

    /// Degree counting only symbols at or above `n_main` (the parameters).
    pub fn param_degree(&self, n_main: usize) -> u32 {
        self.total_degree() - self.main_degree(n_main)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Exact quotient, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut i = 0;
        for &(s, e) in &other.0 {
            loop {
                if i >= self.0.len() || self.0[i].0 > s {
                    return None;
                }
                let (cs, ce) = self.0[i];
                if cs < s {
                    out.push((cs, ce));
                    i += 1;
                    continue;
                }
                if ce < e {
                    return None;
                }
                if ce > e {
                    out.push((cs, ce - e));
                }
                i += 1;
                break;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        Some(Monomial(out))
    }

    pub fn pow(&self, k: u16) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(s, e)| (s, e * k)).collect())
    }

    /// Rename symbols through `f`; used for moving monomials between contexts.
    pub fn map_symbols(&self, mut f: impl FnMut(usize) -> usize) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(s, e)| (f(s as usize), e)))
    }
}

/// Graded-lexicographic order on the full symbol list: higher total degree is
/// greater; ties are broken lexicographically with earlier symbols dominant
/// (so `x1^2 > x1*x2 > x2^2`).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                // Unreachable at equal total degree once all shared entries
                // matched, but keep the order total.
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(&(s1, e1)), Some(&(s2, e2))) => match s1.cmp(&s2) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match e1.cmp(&e2) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
