use std::collections::BTreeMap;

use crate::linalg::{FieldSpec, Scalar};

/// A tensor of fixed rank over `0..dim` in every slot, storing only nonzeros.
///
/// Keys are 0-based index tuples; iteration is in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTensor {
    rank: usize,
    dim: usize,
    field: FieldSpec,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

impl SparseTensor {
    pub fn zeros(field: FieldSpec, rank: usize, dim: usize) -> SparseTensor {
        SparseTensor {
            rank,
            dim,
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        assert_eq!(idx.len(), self.rank, "wrong number of indices");
        self.entries
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Adds `v` at `idx`, dropping the entry if the sum is zero.
    pub(crate) fn accumulate(&mut self, idx: Vec<usize>, v: Scalar) {
        debug_assert_eq!(idx.len(), self.rank);
        if v.is_zero() {
            return;
        }
        match self.entries.get_mut(&idx) {
            Some(cur) => {
                *cur = &*cur + &v;
                if cur.is_zero() {
                    self.entries.remove(&idx);
                }
            }
            None => {
                self.entries.insert(idx, v);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &Scalar)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn first_nonzero(&self) -> Option<(&[usize], &Scalar)> {
        self.iter().next()
    }
}

impl std::ops::Add<&SparseTensor> for &SparseTensor {
    type Output = SparseTensor;

    fn add(self, rhs: &SparseTensor) -> SparseTensor {
        assert_eq!((self.rank, self.dim), (rhs.rank, rhs.dim), "tensor shape mismatch");
        let mut out = self.clone();
        for (k, v) in rhs.iter() {
            out.accumulate(k.to_vec(), v.clone());
        }
        out
    }
}
