//! Integer partitions, partition pairs and the multinomial weights attached
//! to them.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

/// Weakly decreasing sequence of positive integers.
#[allow(clippy::len_without_is_empty)]
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    EmptyPartition,
    NotWeaklyDecreasing,
    /// `p <= 0` passed to an enumeration.
    NonPositiveInput,
    /// A count overflowed the u128 range used for exact integers.
    Overflow,
}

impl fmt::Display for CombinatoricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombinatoricsError::EmptyPartition => write!(f, "partition must have at least one part"),
            CombinatoricsError::NotWeaklyDecreasing => {
                write!(f, "parts must be weakly decreasing and positive")
            }
            CombinatoricsError::NonPositiveInput => write!(f, "input must be positive"),
            CombinatoricsError::Overflow => write!(f, "count exceeds the exact integer range"),
        }
    }
}

impl std::error::Error for CombinatoricsError {}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, CombinatoricsError> {
        if parts.is_empty() {
            return Err(CombinatoricsError::EmptyPartition);
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CombinatoricsError::NotWeaklyDecreasing);
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts, written `r` throughout. Never zero.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Multiplicity of the part size `j`.
    pub fn multiplicity(&self, j: u32) -> usize {
        self.parts.iter().filter(|&&p| p == j).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A pair `(lambda, lambda')` of partitions of the two block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionPair {
    pub first: Partition,
    pub second: Partition,
}

impl PartitionPair {
    pub fn r1(&self) -> usize {
        self.first.len()
    }

    pub fn r2(&self) -> usize {
        self.second.len()
    }

    /// `m_lambda * m_lambda'`, the exponent the pair contributes.
    pub fn weight(&self) -> Result<u128, CombinatoricsError> {
        multinomial_m(&self.first)?
            .checked_mul(multinomial_m(&self.second)?)
            .ok_or(CombinatoricsError::Overflow)
    }
}

impl fmt::Display for PartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// All partitions of `p` in descending lexicographic order on the parts,
/// optionally keeping only those with at most `max_length` parts.
pub fn enumerate_partitions(
    p: u32,
    max_length: Option<usize>,
) -> Result<Vec<Partition>, CombinatoricsError> {
    if p == 0 {
        return Err(CombinatoricsError::NonPositiveInput);
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(p, p, max_length, &mut current, &mut out);
    Ok(out)
}

fn descend(
    remaining: u32,
    max_part: u32,
    max_length: Option<usize>,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    if let Some(cap) = max_length {
        if current.len() >= cap {
            return;
        }
    }
    let top = remaining.min(max_part);
    for part in (1..=top).rev() {
        current.push(part);
        descend(remaining - part, part, max_length, current, out);
        current.pop();
    }
}

/// The multinomial coefficient `m_lambda`: the number of ways to split a set
/// of `p` elements into unordered blocks whose sizes are the parts of
/// `lambda`. Equals `p! / ((prod_j s_j!) * prod_i lambda_i!)` where `s_j`
/// counts the parts equal to `j`.
pub fn multinomial_m(lambda: &Partition) -> Result<u128, CombinatoricsError> {
    let p = lambda.total();
    let mut denom = BigUint::one();
    for j in 1..=p {
        denom *= factorial(lambda.multiplicity(j) as u32);
    }
    for &part in lambda.parts() {
        denom *= factorial(part);
    }
    let m = factorial(p) / denom;
    u128::try_from(&m).map_err(|_| CombinatoricsError::Overflow)
}

fn factorial(n: u32) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

/// Cartesian product of the partition lists of `p` and `q` under optional
/// length caps, in first-major order (the first partition varies slowest).
pub fn enumerate_pairs(
    p: u32,
    q: u32,
    cap1: Option<usize>,
    cap2: Option<usize>,
) -> Result<Vec<PartitionPair>, CombinatoricsError> {
    let firsts = enumerate_partitions(p, cap1)?;
    let seconds = enumerate_partitions(q, cap2)?;
    let mut out = Vec::with_capacity(firsts.len() * seconds.len());
    for first in &firsts {
        for second in &seconds {
            out.push(PartitionPair {
                first: first.clone(),
                second: second.clone(),
            });
        }
    }
    Ok(out)
}

/// Falling factorial `d * (d-1) * ... * (d-r+1)`, exactly `r` factors.
/// Zero whenever `r > d >= 0`.
pub fn falling_product(d: i64, r: u32) -> i128 {
    let mut acc: i128 = 1;
    for t in 0..r as i64 {
        acc *= (d - t) as i128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partition(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_order_is_descending_lex() {
        let parts = enumerate_partitions(3, None).unwrap();
        assert_eq!(
            parts,
            vec![partition(&[3]), partition(&[2, 1]), partition(&[1, 1, 1])]
        );
        assert_eq!(enumerate_partitions(4, None).unwrap().len(), 5);
        assert_eq!(
            enumerate_partitions(3, Some(2)).unwrap(),
            vec![partition(&[3]), partition(&[2, 1])]
        );
        assert!(enumerate_partitions(0, None).is_err());
    }

    #[test]
    fn partition_counts_match_reference_table() {
        // p(1)..p(30), independent table
        const TABLE: [usize; 30] = [
            1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627,
            792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565, 5604,
        ];
        for (i, &expected) in TABLE.iter().enumerate() {
            let p = (i + 1) as u32;
            assert_eq!(
                enumerate_partitions(p, None).unwrap().len(),
                expected,
                "partition count mismatch at p={p}"
            );
        }
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial_m(&partition(&[2, 1])).unwrap(), 3);
        assert_eq!(multinomial_m(&partition(&[3])).unwrap(), 1);
        assert_eq!(multinomial_m(&partition(&[2, 2, 1])).unwrap(), 15);
        assert_eq!(multinomial_m(&partition(&[1, 1])).unwrap(), 1);
    }

    #[test]
    fn multinomials_sum_to_bell_numbers() {
        // Bell numbers via the Bell triangle, independent of multinomial_m.
        let mut bell = vec![1u128];
        let mut row = vec![1u128];
        for _ in 0..10 {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                next.push(next.last().unwrap() + v);
            }
            bell.push(next[0]);
            row = next;
        }
        for p in 1..=8u32 {
            let total: u128 = enumerate_partitions(p, None)
                .unwrap()
                .iter()
                .map(|l| multinomial_m(l).unwrap())
                .sum();
            assert_eq!(total, bell[p as usize], "Bell number mismatch at p={p}");
        }
    }

    #[test]
    fn pair_enumeration() {
        let pairs = enumerate_pairs(3, 2, None, None).unwrap();
        assert_eq!(pairs.len(), 6);
        // first-major: the first partition varies slowest
        assert_eq!(pairs[0].first, partition(&[3]));
        assert_eq!(pairs[0].second, partition(&[2]));
        assert_eq!(pairs[1].first, partition(&[3]));
        assert_eq!(pairs[1].second, partition(&[1, 1]));

        let capped = enumerate_pairs(3, 2, Some(2), None).unwrap();
        assert_eq!(capped.len(), 4);
        let square = enumerate_pairs(2, 2, Some(3), Some(3)).unwrap();
        assert_eq!(square.len(), 4);
    }

    #[test]
    fn falling_products() {
        assert_eq!(falling_product(2, 2), 2);
        assert_eq!(falling_product(4, 1), 4);
        assert_eq!(falling_product(2, 3), 0);
        assert_eq!(falling_product(5, 5), 120);
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }
}
