use num_rational::BigRational;
use num_traits::Zero;

use super::scalar::{rational_mod, FieldSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Entries {
    Rational(Vec<BigRational>),
    Residue { modulus: u64, data: Vec<u64> },
}

/// Dense row-major matrix over a single exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    pub(crate) entries: Entries,
}

impl ExactMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> ExactMatrix {
        let entries = match field {
            FieldSpec::Rational => Entries::Rational(vec![BigRational::zero(); rows * cols]),
            FieldSpec::Prime(p) => Entries::Residue {
                modulus: p,
                data: vec![0; rows * cols],
            },
        };
        ExactMatrix { rows, cols, entries }
    }

    pub fn identity(field: FieldSpec, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field)).expect("same field");
        }
        m
    }

    /// Builds a matrix from integer rows.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Result<ExactMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = ExactMatrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, Scalar::from_i64(field, v))?;
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<Scalar>]) -> Result<ExactMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = ExactMatrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone())?;
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Result<ExactMatrix> {
        let mut m = ExactMatrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone())?;
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn from_sparse_rows(
        field: FieldSpec,
        cols: usize,
        rows: &[Vec<(usize, Scalar)>],
    ) -> Result<ExactMatrix> {
        let mut m = ExactMatrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                let cur = m.get(i, *j);
                m.set(i, *j, cur.checked_add(v)?)?;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> FieldSpec {
        match &self.entries {
            Entries::Rational(_) => FieldSpec::Rational,
            Entries::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Rational(v) => Scalar::Rational(v[k].clone()),
            Entries::Residue { modulus, data } => Scalar::Residue {
                value: data[k],
                modulus: *modulus,
            },
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<()> {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        let k = i * self.cols + j;
        match (&mut self.entries, value) {
            (Entries::Rational(v), Scalar::Rational(r)) => v[k] = r,
            (Entries::Residue { modulus, data }, Scalar::Residue { value, modulus: p })
                if *modulus == p =>
            {
                data[k] = value
            }
            (_, value) => {
                return Err(Error::FieldMismatch {
                    left: self.field(),
                    right: value.field(),
                })
            }
        }
        Ok(())
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Rational(v) => v.iter().all(Zero::is_zero),
            Entries::Residue { data, .. } => data.iter().all(|&x| x == 0),
        }
    }

    /// True when every entry is an integer (always true over prime fields).
    pub fn is_integral(&self) -> bool {
        match &self.entries {
            Entries::Rational(v) => v.iter().all(|x| x.is_integer()),
            Entries::Residue { .. } => true,
        }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.field(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    t.set(j, i, v).expect("same field");
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let field = self.field();
        for x in v {
            if x.field() != field {
                return Err(Error::FieldMismatch { left: field, right: x.field() });
            }
        }
        let mut out = vec![Scalar::zero(field); self.rows];
        for (i, acc) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, j);
                if !a.is_zero() {
                    acc.add_mul_assign(&a, x);
                }
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            });
        }
        let field = self.field();
        let mut out = ExactMatrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = vec![Scalar::zero(field); other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        slot.add_mul_assign(&a, &b);
                    }
                }
            }
            for (j, v) in acc.into_iter().enumerate() {
                out.set(i, j, v)?;
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rational(a), Entries::Rational(b)) => {
                Entries::Rational(a.iter().chain(b).cloned().collect())
            }
            (Entries::Residue { modulus: p, data: a }, Entries::Residue { modulus: q, data: b })
                if p == q =>
            {
                Entries::Residue {
                    modulus: *p,
                    data: a.iter().chain(b).copied().collect(),
                }
            }
            _ => {
                return Err(Error::FieldMismatch {
                    left: self.field(),
                    right: other.field(),
                })
            }
        };
        Ok(ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Re-expresses every entry in `target` (rational to prime reduction, or identity).
    pub fn to_field(&self, target: FieldSpec) -> Result<ExactMatrix> {
        if self.field() == target {
            return Ok(self.clone());
        }
        match (&self.entries, target) {
            (Entries::Rational(v), FieldSpec::Prime(p)) => {
                let data = v
                    .iter()
                    .map(|x| rational_mod(x, p))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ExactMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    entries: Entries::Residue { modulus: p, data },
                })
            }
            _ => Err(Error::FieldMismatch {
                left: self.field(),
                right: target,
            }),
        }
    }
}
