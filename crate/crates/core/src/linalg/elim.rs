//! Rank and kernel computations.
//!
//! Over the rationals every row is scaled to a primitive integer vector and
//! eliminated fraction-free: a row is reduced against a pivot row by
//! cross-multiplying the two leading coefficients, then divided by the gcd of
//! its entries. Rows are sparse and streamed one at a time, so matrices with
//! many redundant rows (all coboundary matrices) never materialize a dense
//! integer copy. Over `F_p` rows are dense `u64` vectors with the pivot
//! normalized to one.
//!
//! Pivot choice is always the first nonzero entry in column order, which
//! makes kernel bases reproducible.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{Entries, ExactMatrix};
use super::scalar::{bigint_mod, inv_mod, mul_mod, FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Sparse integer row, sorted by column, no stored zeros.
type IntRow = Vec<(usize, BigInt)>;

fn lcm_of_denominators<'a>(it: impl Iterator<Item = &'a BigRational>) -> BigInt {
    it.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn make_primitive(row: &mut IntRow) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let negate = first.1.is_negative();
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if negate {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
}

/// `a*x - b*y` for sparse rows, dropping zeros.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ci = x.get(i).map_or(usize::MAX, |e| e.0);
        let cj = y.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, a * &x[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &x[i - 1].1 - b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Streaming fraction-free row echelon form over the integers.
#[derive(Clone, Debug, Default)]
struct IntEchelon {
    cols: usize,
    rows: Vec<IntRow>,
    pivot_row: Vec<Option<usize>>,
    seen: HashSet<IntRow>,
}

impl IntEchelon {
    fn new(cols: usize) -> Self {
        IntEchelon {
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
            seen: HashSet::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns true if `row` enlarged the row space.
    fn insert(&mut self, mut row: IntRow) -> bool {
        make_primitive(&mut row);
        if row.is_empty() || !self.seen.insert(row.clone()) {
            return false;
        }
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else {
                return false;
            };
            match self.pivot_row[lead] {
                Some(k) => {
                    let pivot = &self.rows[k];
                    let pv = &pivot[0].1;
                    let g = pv.gcd(&lead_val);
                    row = combine(&(pv / &g), &row, &(&lead_val / &g), pivot);
                    make_primitive(&mut row);
                }
                None => {
                    self.pivot_row[lead] = Some(self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
    }

    /// Kernel basis of the stored rows, one vector per non-pivot column.
    fn kernel(&self) -> Vec<Vec<BigRational>> {
        // Back-substitute into reduced form, last pivot first.
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&k| self.rows[k][0].0);
        let mut reduced: Vec<IntRow> = order.iter().map(|&k| self.rows[k].clone()).collect();
        for i in (0..reduced.len()).rev() {
            let (pc, pv) = reduced[i][0].clone();
            for j in 0..i {
                if let Some(v) = entry(&reduced[j], pc).cloned() {
                    let g = pv.gcd(&v);
                    let next = combine(&(&pv / &g), &reduced[j], &(&v / &g), &reduced[i]);
                    reduced[j] = next;
                    make_primitive(&mut reduced[j]);
                }
            }
        }
        let mut is_pivot = vec![false; self.cols];
        for r in &reduced {
            is_pivot[r[0].0] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::one();
            for r in &reduced {
                if let Some(x) = entry(r, free) {
                    v[r[0].0] = -BigRational::new(x.clone(), r[0].1.clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Streaming row echelon form over `F_p` with unit pivots.
#[derive(Clone, Debug)]
struct ModEchelon {
    p: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<Option<usize>>,
}

impl ModEchelon {
    fn new(p: u64, cols: usize) -> Self {
        ModEchelon {
            p,
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: Vec<u64>) -> bool {
        let p = self.p;
        for c in 0..self.cols {
            let x = row[c];
            if x == 0 {
                continue;
            }
            match self.pivot_row[c] {
                Some(k) => {
                    let pivot = &self.rows[k];
                    let f = p - x;
                    for j in c..self.cols {
                        let y = pivot[j];
                        if y != 0 {
                            row[j] = ((row[j] as u128 + f as u128 * y as u128) % p as u128) as u64;
                        }
                    }
                }
                None => {
                    let inv = inv_mod(x, p);
                    for v in row[c..].iter_mut() {
                        *v = mul_mod(*v, inv, p);
                    }
                    self.pivot_row[c] = Some(self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
        false
    }

    fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        let lead = |r: &Vec<u64>| r.iter().position(|&x| x != 0).expect("nonzero row");
        order.sort_by_key(|&k| lead(&self.rows[k]));
        let mut reduced: Vec<Vec<u64>> = order.iter().map(|&k| self.rows[k].clone()).collect();
        let leads: Vec<usize> = reduced.iter().map(lead).collect();
        for i in (0..reduced.len()).rev() {
            let pc = leads[i];
            let (head, tail) = reduced.split_at_mut(i);
            let pivot = &tail[0];
            for r in head.iter_mut() {
                let x = r[pc];
                if x != 0 {
                    let f = p - x;
                    for j in pc..self.cols {
                        if pivot[j] != 0 {
                            r[j] = ((r[j] as u128 + f as u128 * pivot[j] as u128) % p as u128) as u64;
                        }
                    }
                }
            }
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &leads {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &c) in reduced.iter().zip(&leads) {
                if r[free] != 0 {
                    v[c] = p - r[free];
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Incrementally grown row space over a fixed field.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: FieldSpec,
    cols: usize,
    inner: RowSpaceInner,
}

#[derive(Clone, Debug)]
enum RowSpaceInner {
    Int(IntEchelon),
    Mod(ModEchelon),
}

impl RowSpace {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        let inner = match field {
            FieldSpec::Rational => RowSpaceInner::Int(IntEchelon::new(cols)),
            FieldSpec::Prime(p) => RowSpaceInner::Mod(ModEchelon::new(p, cols)),
        };
        RowSpace { field, cols, inner }
    }

    pub fn dim(&self) -> usize {
        match &self.inner {
            RowSpaceInner::Int(e) => e.rank(),
            RowSpaceInner::Mod(e) => e.rank(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Adds a vector; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a {}-dimensional space",
                v.len(),
                self.cols
            )));
        }
        for x in v {
            if x.field() != self.field {
                return Err(Error::FieldMismatch { left: self.field, right: x.field() });
            }
        }
        Ok(match &mut self.inner {
            RowSpaceInner::Int(e) => {
                let rats: Vec<&BigRational> = v.iter().filter_map(Scalar::as_rational).collect();
                let l = lcm_of_denominators(rats.iter().copied());
                let row = rats
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, (*x * &l).to_integer()))
                    .collect();
                e.insert(row)
            }
            RowSpaceInner::Mod(e) => e.insert(
                v.iter()
                    .map(|x| match x {
                        Scalar::Residue { value, .. } => *value,
                        Scalar::Rational(_) => unreachable!(),
                    })
                    .collect(),
            ),
        })
    }

    /// Adds a sparse vector given as `(column, value)` pairs with strictly increasing columns.
    pub fn insert_sparse(&mut self, v: &[(usize, Scalar)]) -> Result<bool> {
        if v.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::DimensionMismatch("sparse columns must increase strictly".into()));
        }
        if let Some((j, _)) = v.iter().find(|(j, _)| *j >= self.cols) {
            return Err(Error::DimensionMismatch(format!(
                "column {j} in a {}-dimensional space",
                self.cols
            )));
        }
        if let Some((_, x)) = v.iter().find(|(_, x)| x.field() != self.field) {
            return Err(Error::FieldMismatch { left: self.field, right: x.field() });
        }
        Ok(match &mut self.inner {
            RowSpaceInner::Int(e) => {
                let l = lcm_of_denominators(v.iter().filter_map(|(_, x)| x.as_rational()));
                let row = v
                    .iter()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (*j, (x.as_rational().expect("rational") * &l).to_integer()))
                    .collect();
                e.insert(row)
            }
            RowSpaceInner::Mod(e) => {
                let mut row = vec![0u64; self.cols];
                for (j, x) in v {
                    if let Scalar::Residue { value, .. } = x {
                        row[*j] = *value;
                    }
                }
                e.insert(row)
            }
        })
    }

    /// Basis of the orthogonal complement, i.e. the kernel of the stored rows.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        match &self.inner {
            RowSpaceInner::Int(e) => e
                .kernel()
                .into_iter()
                .map(|v| v.into_iter().map(Scalar::Rational).collect())
                .collect(),
            RowSpaceInner::Mod(e) => e
                .kernel()
                .into_iter()
                .map(|v| {
                    v.into_iter()
                        .map(|value| Scalar::Residue { value, modulus: e.p })
                        .collect()
                })
                .collect(),
        }
    }
}

fn row_space(m: &ExactMatrix) -> RowSpace {
    let cols = m.cols();
    match &m.entries {
        Entries::Rational(data) => {
            let mut e = IntEchelon::new(cols);
            for row in data.chunks(cols.max(1)).take(m.rows()) {
                if cols == 0 {
                    break;
                }
                let l = lcm_of_denominators(row.iter().filter(|x| !x.is_zero()));
                let int_row: IntRow = row
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, (x * &l).to_integer()))
                    .collect();
                e.insert(int_row);
            }
            RowSpace {
                field: FieldSpec::Rational,
                cols,
                inner: RowSpaceInner::Int(e),
            }
        }
        Entries::Residue { modulus, data } => {
            let mut e = ModEchelon::new(*modulus, cols);
            if cols > 0 {
                let mut seen: HashSet<&[u64]> = HashSet::new();
                for row in data.chunks(cols) {
                    if row.iter().all(|&x| x == 0) || !seen.insert(row) {
                        continue;
                    }
                    e.insert(row.to_vec());
                }
            }
            RowSpace {
                field: FieldSpec::Prime(*modulus),
                cols,
                inner: RowSpaceInner::Mod(e),
            }
        }
    }
}

/// Rank of `m` over its field.
pub fn rank(m: &ExactMatrix) -> usize {
    row_space(m).dim()
}

/// Basis of `{v : m v = 0}`, with `cols - rank` vectors.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    row_space(m).kernel()
}

/// Rank over the rationals by fraction-free integer elimination.
pub fn fraction_free_rank(m: &ExactMatrix) -> Result<usize> {
    match m.field() {
        FieldSpec::Rational => Ok(rank(m)),
        f => Err(Error::FieldMismatch {
            left: f,
            right: FieldSpec::Rational,
        }),
    }
}

/// Textbook Gaussian elimination over `BigRational`, without any integer
/// scaling. Kept as an independent reference for the fraction-free path.
pub fn naive_rational_rank(m: &ExactMatrix) -> Result<usize> {
    let Entries::Rational(data) = &m.entries else {
        return Err(Error::FieldMismatch {
            left: m.field(),
            right: FieldSpec::Rational,
        });
    };
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| data[i * cols..(i + 1) * cols].to_vec())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    Ok(r)
}

/// Ranks of an integer matrix modulo two primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoPrimeRank {
    pub primes: (u64, u64),
    pub ranks: (usize, usize),
}

impl TwoPrimeRank {
    pub fn agree(&self) -> bool {
        self.ranks.0 == self.ranks.1
    }

    /// The certified rank when both primes agree.
    pub fn rank(&self) -> Option<usize> {
        self.agree().then_some(self.ranks.0)
    }
}

/// Rank of an integer matrix modulo `p1` and `p2`.
///
/// A prime dividing some nonzero maximal minor drops the rank; two distinct
/// primes reporting the same rank certify it in practice.
pub fn rank_two_prime_check(m: &ExactMatrix, p1: u64, p2: u64) -> Result<TwoPrimeRank> {
    if p1 == p2 {
        return Err(Error::InvalidField(format!("primes must differ, got {p1} twice")));
    }
    FieldSpec::prime(p1)?;
    FieldSpec::prime(p2)?;
    let Entries::Rational(data) = &m.entries else {
        return Err(Error::FieldMismatch {
            left: m.field(),
            right: FieldSpec::Rational,
        });
    };
    if let Some(x) = data.iter().find(|x| !x.is_integer()) {
        return Err(Error::NonIntegerEntry(x.to_string()));
    }
    let reduce = |p: u64| -> ExactMatrix {
        let mut out = ExactMatrix::zeros(FieldSpec::Prime(p), m.rows(), m.cols());
        if let Entries::Residue { data: dst, .. } = &mut out.entries {
            for (d, s) in dst.iter_mut().zip(data) {
                *d = bigint_mod(s.numer(), p);
            }
        }
        out
    };
    Ok(TwoPrimeRank {
        primes: (p1, p2),
        ranks: (rank(&reduce(p1)), rank(&reduce(p2))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_PRIMES;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn identity_rank() {
        assert_eq!(rank(&ExactMatrix::identity(q(), 3)), 3);
        assert!(kernel_basis(&ExactMatrix::identity(q(), 3)).is_empty());
    }

    #[test]
    fn zero_matrix() {
        let z = ExactMatrix::zeros(q(), 4, 7);
        assert_eq!(rank(&z), 0);
        let z = ExactMatrix::zeros(q(), 2, 3);
        let k = kernel_basis(&z);
        assert_eq!(k.len(), 3);
        let mut span = RowSpace::new(q(), 3);
        for v in &k {
            span.insert(v).unwrap();
        }
        assert_eq!(span.dim(), 3);
    }

    #[test]
    fn small_kernel() {
        let m = ExactMatrix::from_i64_rows(q(), &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // Proportional to (1, -1, 0).
        assert!(v[2].is_zero());
        assert_eq!(v[0], -v[1].clone());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn two_prime_identity() {
        let m = ExactMatrix::identity(q(), 5);
        let r = rank_two_prime_check(&m, 1_000_003, 1_000_033).unwrap();
        assert_eq!(r.ranks, (5, 5));
        assert!(r.agree());
    }

    #[test]
    fn two_prime_adversarial() {
        let (p1, p2) = DEFAULT_PRIMES;
        let m = ExactMatrix::from_i64_rows(q(), &[vec![p1 as i64, 0], vec![0, 1]]).unwrap();
        let r = rank_two_prime_check(&m, p1, p2).unwrap();
        assert_eq!(r.ranks, (1, 2));
        assert!(!r.agree());
        assert_eq!(r.rank(), None);
    }

    #[test]
    fn two_prime_rejects_fractions() {
        let mut m = ExactMatrix::identity(q(), 2);
        m.set(0, 1, Scalar::from_ratio(q(), 1, 2).unwrap()).unwrap();
        assert!(matches!(
            rank_two_prime_check(&m, 1_000_003, 1_000_033),
            Err(Error::NonIntegerEntry(_))
        ));
    }

    #[test]
    fn fractional_entries() {
        let m = ExactMatrix::from_rows(
            q(),
            &[
                vec![Scalar::from_ratio(q(), 1, 2).unwrap(), Scalar::from_ratio(q(), 1, 3).unwrap()],
                vec![Scalar::from_ratio(q(), 3, 2).unwrap(), Scalar::one(q())],
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 1);
        assert_eq!(naive_rational_rank(&m).unwrap(), 1);
        for v in kernel_basis(&m) {
            assert!(m.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn prime_field_kernel() {
        let f = FieldSpec::Prime(1_000_003);
        let m = ExactMatrix::from_i64_rows(f, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]).unwrap();
        assert_eq!(rank(&m), 2);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).unwrap().iter().all(Scalar::is_zero));
    }
}
