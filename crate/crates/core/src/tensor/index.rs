use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Row-major rank of a zero-based index tuple: `Σ j_λ · n^(q-1-λ)`.
pub fn rank_of(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &j| acc * n + j)
}

/// Inverse of [`rank_of`] for tuples of length `q`.
pub fn unrank(mut rank: usize, n: usize, q: usize) -> Vec<usize> {
    let mut idx = vec![0; q];
    for slot in idx.iter_mut().rev() {
        *slot = rank % n;
        rank /= n;
    }
    idx
}

/// All index tuples of length `q` over `0..n`, in rank order.
pub fn multi_indices(n: usize, q: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(q as u32)).map(move |r| unrank(r, n, q))
}

/// A validated multi-index `(j1, .., jq)` with zero-based entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::UnsupportedSize { n, q: 0 });
        }
        if let Some(&bad) = indices.iter().find(|&&j| j >= n) {
            return Err(Error::VariableOutOfRange {
                index: bad + 1,
                dim: n,
            });
        }
        Ok(Self(indices))
    }

    pub fn unrank(rank: usize, n: usize, q: usize) -> Self {
        Self(unrank(rank, n, q))
    }

    pub fn rank(&self, n: usize) -> usize {
        rank_of(&self.0, n)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for MultiIndex {
    /// Comma-joined, one-based: `(0, 1)` prints as `1,2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        Ok(())
    }
}

/// `idx` with slot `slot` replaced by `value`.
pub(crate) fn with_slot(idx: &[usize], slot: usize, value: usize) -> Vec<usize> {
    let mut out = idx.to_vec();
    out[slot] = value;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn rank_unrank_bijection_exhaustive() {
        for n in 1..=4usize {
            for q in 1..=3 {
                let total = n.pow(q as u32);
                let mut seen = vec![false; total];
                for idx in multi_indices(n, q) {
                    let r = rank_of(&idx, n);
                    assert!(!seen[r]);
                    seen[r] = true;
                    assert_eq!(unrank(r, n, q), idx);
                }
                assert!(seen.into_iter().all(|s| s));
            }
        }
    }

    #[test]
    fn row_major_order() {
        // (j1, j2) = (1, 2) one-based -> rank (1-1)*n + (2-1)
        assert_eq!(rank_of(&[0, 1], 3), 1);
        assert_eq!(rank_of(&[1, 0], 3), 3);
        assert_eq!(MultiIndex::unrank(5, 2, 3).indices(), &[1, 0, 1]);
    }

    #[test]
    fn validation_and_display() {
        assert!(MultiIndex::new(vec![], 2).is_err());
        assert!(MultiIndex::new(vec![0, 2], 2).is_err());
        let mi = MultiIndex::new(vec![0, 1], 2).unwrap();
        assert_eq!(mi.to_string(), "1,2");
        assert_eq!(mi.rank(2), 1);
    }
}
