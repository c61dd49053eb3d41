//! n-Leibniz algebras given by structure constants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::cochain::{Cochain, Valued};
use crate::error::{Error, Result};
use crate::index::{complement, flat, perm_sign, pow, unflat};
use crate::linalg::{ExactMatrix, FieldSpec, Scalar};
use crate::tensor::SparseTensor;

/// Diagonal signature `ε ∈ {±1}^d` of a pseudo-Euclidean simple Filippov algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignatureVector(Vec<i8>);

impl SignatureVector {
    pub fn new(eps: Vec<i8>) -> Result<SignatureVector> {
        if eps.is_empty() {
            return Err(Error::InvalidSignature("empty signature".into()));
        }
        if let Some(x) = eps.iter().find(|&&x| x != 1 && x != -1) {
            return Err(Error::InvalidSignature(format!("entry {x} is not ±1")));
        }
        Ok(SignatureVector(eps))
    }

    pub fn euclidean(d: usize) -> SignatureVector {
        SignatureVector(vec![1; d])
    }

    /// All `2^d` signatures of length `d`, ordered with `+` before `-` slot by slot.
    pub fn all(d: usize) -> Vec<SignatureVector> {
        (0..1usize << d)
            .map(|mask| {
                SignatureVector(
                    (0..d)
                        .map(|i| if mask >> (d - 1 - i) & 1 == 1 { -1 } else { 1 })
                        .collect(),
                )
            })
            .collect()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i] as i64
    }
}

impl fmt::Display for SignatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            f.write_str(if x > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignatureVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let eps = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::InvalidSignature(format!("unexpected character {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SignatureVector::new(eps)
    }
}

/// Sign of the permutation of `indices`, 0 on repeats.
pub fn levi_civita(indices: &[usize]) -> i64 {
    perm_sign(indices)
}

/// An algebra with an `n`-linear bracket `[e_{a1},…,e_{an}] = f_{a1…an}^b e_b`.
///
/// The dense tensor is indexed by the flat lower index times `dim` plus the
/// upper index. A sparse copy (nonzero images per lower tuple) drives every
/// contraction.
#[derive(Clone, Debug)]
pub struct NLeibnizAlgebra {
    n: usize,
    dim: usize,
    field: FieldSpec,
    f: Vec<Scalar>,
    table: Vec<Vec<(usize, Scalar)>>,
    first_skew: bool,
    metadata: Map<String, Value>,
}

impl PartialEq for NLeibnizAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.dim == other.dim && self.field == other.field && self.f == other.f
    }
}

impl NLeibnizAlgebra {
    /// Builds an algebra from its values on every `(lower, upper)` pair.
    pub fn from_fn(
        n: usize,
        dim: usize,
        field: FieldSpec,
        mut f: impl FnMut(&[usize], usize) -> Scalar,
    ) -> Result<NLeibnizAlgebra> {
        check_shape(n, dim)?;
        let mut data = Vec::with_capacity(pow(dim, n) * dim);
        for l in 0..pow(dim, n) {
            let lower = unflat(l, dim, n);
            for b in 0..dim {
                let v = f(&lower, b);
                if v.field() != field {
                    return Err(Error::FieldMismatch { left: field, right: v.field() });
                }
                data.push(v);
            }
        }
        Ok(NLeibnizAlgebra::from_dense(n, dim, field, data, Map::new()))
    }

    /// Builds an algebra from its nonzero entries; omitted entries are zero.
    pub fn from_entries(
        n: usize,
        dim: usize,
        field: FieldSpec,
        entries: impl IntoIterator<Item = (Vec<usize>, usize, Scalar)>,
    ) -> Result<NLeibnizAlgebra> {
        check_shape(n, dim)?;
        let mut data = vec![Scalar::zero(field); pow(dim, n) * dim];
        let mut seen = vec![false; data.len()];
        for (lower, upper, v) in entries {
            if lower.len() != n {
                return Err(Error::ArityMismatch { expected: n, got: lower.len() });
            }
            if upper >= dim || lower.iter().any(|&i| i >= dim) {
                return Err(Error::InvalidAlgebra(format!(
                    "entry lower {:?} upper {} out of range for dimension {dim}",
                    lower, upper
                )));
            }
            if v.field() != field {
                return Err(Error::FieldMismatch { left: field, right: v.field() });
            }
            let k = flat(&lower, dim) * dim + upper;
            if seen[k] {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate entry lower {:?} upper {}",
                    lower, upper
                )));
            }
            seen[k] = true;
            data[k] = v;
        }
        Ok(NLeibnizAlgebra::from_dense(n, dim, field, data, Map::new()))
    }

    fn from_dense(n: usize, dim: usize, field: FieldSpec, f: Vec<Scalar>, metadata: Map<String, Value>) -> Self {
        let table = f
            .chunks(dim)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(b, v)| (b, v.clone()))
                    .collect()
            })
            .collect();
        let mut alg = NLeibnizAlgebra {
            n,
            dim,
            field,
            f,
            table,
            first_skew: false,
            metadata,
        };
        alg.first_skew = alg.is_skew_in(n - 1);
        alg
    }

    /// Abelian algebra: every bracket vanishes.
    pub fn abelian(n: usize, dim: usize, field: FieldSpec) -> Result<NLeibnizAlgebra> {
        NLeibnizAlgebra::from_entries(n, dim, field, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn metadata(&self) -> &Map<String, Value> {
        &self.metadata
    }

    pub fn with_metadata(mut self, key: &str, value: Value) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    /// A short human label, taken from the metadata when present.
    pub fn label(&self) -> String {
        match self.metadata.get("name").and_then(Value::as_str) {
            Some(name) => name.to_string(),
            None => format!("n={} d={}", self.n, self.dim),
        }
    }

    pub fn constant(&self, lower: &[usize], upper: usize) -> &Scalar {
        &self.f[flat(lower, self.dim) * self.dim + upper]
    }

    pub(crate) fn constant_flat(&self, lower_flat: usize, upper: usize) -> &Scalar {
        &self.f[lower_flat * self.dim + upper]
    }

    /// Nonzero components of `[e_{a1},…,e_{an}]` for a flat lower index.
    pub(crate) fn image_flat(&self, lower_flat: usize) -> &[(usize, Scalar)] {
        &self.table[lower_flat]
    }

    /// Nonzero components of the bracket of basis vectors.
    pub fn basis_bracket(&self, lower: &[usize]) -> &[(usize, Scalar)] {
        &self.table[flat(lower, self.dim)]
    }

    /// Nonzero structure constants as `(lower, upper, value)`, 0-based, in flat order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize, &Scalar)> + '_ {
        self.table.iter().enumerate().flat_map(move |(l, row)| {
            let lower = unflat(l, self.dim, self.n);
            row.iter().map(move |(b, v)| (lower.clone(), *b, v))
        })
    }

    /// True when `f` is skewsymmetric in its first `n-1` lower slots.
    pub fn is_first_skew(&self) -> bool {
        self.first_skew
    }

    /// True when `f` is skewsymmetric in all lower slots.
    pub fn is_fully_skew(&self) -> bool {
        self.is_skew_in(self.n)
    }

    fn is_skew_in(&self, k: usize) -> bool {
        let d = self.dim;
        for l in 0..pow(d, self.n) {
            let lower = unflat(l, d, self.n);
            for i in 0..k.saturating_sub(1) {
                let mut sw = lower.clone();
                sw.swap(i, i + 1);
                let ls = flat(&sw, d);
                for b in 0..d {
                    let v = &self.f[l * d + b];
                    let w = &self.f[ls * d + b];
                    if !(v + w).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_field(&self, field: FieldSpec) -> Result<NLeibnizAlgebra> {
        if field == self.field {
            return Ok(self.clone());
        }
        let f = self
            .f
            .iter()
            .map(|x| x.to_field(field))
            .collect::<Result<Vec<_>>>()?;
        Ok(NLeibnizAlgebra::from_dense(self.n, self.dim, field, f, self.metadata.clone()))
    }

    fn check_vectors(&self, xs: &[&[Scalar]]) -> Result<()> {
        for x in xs {
            if x.len() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in a {}-dimensional algebra",
                    x.len(),
                    self.dim
                )));
            }
            if let Some(v) = x.iter().find(|v| v.field() != self.field) {
                return Err(Error::FieldMismatch { left: self.field, right: v.field() });
            }
        }
        Ok(())
    }

    /// The n-bracket of coefficient vectors.
    pub fn bracket(&self, xs: &[&[Scalar]]) -> Result<Vec<Scalar>> {
        if xs.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: xs.len() });
        }
        self.check_vectors(xs)?;
        let support: Vec<Vec<usize>> = xs
            .iter()
            .map(|x| (0..self.dim).filter(|&i| !x[i].is_zero()).collect())
            .collect();
        let mut out = vec![Scalar::zero(self.field); self.dim];
        let mut idx = vec![0usize; self.n];
        self.bracket_rec(xs, &support, 0, &mut idx, &Scalar::one(self.field), &mut out);
        Ok(out)
    }

    fn bracket_rec(
        &self,
        xs: &[&[Scalar]],
        support: &[Vec<usize>],
        slot: usize,
        idx: &mut Vec<usize>,
        coef: &Scalar,
        out: &mut [Scalar],
    ) {
        if slot == self.n {
            for (b, v) in self.basis_bracket(idx) {
                out[*b].add_mul_assign(coef, v);
            }
            return;
        }
        for &i in &support[slot] {
            idx[slot] = i;
            let c = coef * &xs[slot][i];
            self.bracket_rec(xs, support, slot + 1, idx, &c, out);
        }
    }

    /// Killing form `k_{ab} = f_{ad}^e f_{be}^d` of a Lie algebra (`n = 2`).
    pub fn killing_form(&self) -> Result<ExactMatrix> {
        if self.n != 2 {
            return Err(Error::ArityMismatch { expected: 2, got: self.n });
        }
        let d = self.dim;
        let mut k = ExactMatrix::zeros(self.field, d, d);
        for a in 0..d {
            for b in 0..d {
                let mut acc = Scalar::zero(self.field);
                for x in 0..d {
                    for (e, v) in self.basis_bracket(&[a, x]) {
                        let w = self.constant(&[b, *e], x);
                        if !w.is_zero() {
                            acc.add_mul_assign(v, w);
                        }
                    }
                }
                k.set(a, b, acc)?;
            }
        }
        Ok(k)
    }

    /// Recovers `ε` if this is exactly a simple Filippov algebra of arity `n`.
    pub fn filippov_signature(&self) -> Result<SignatureVector> {
        if self.dim != self.n + 1 {
            return Err(Error::NotSimpleFilippov);
        }
        let sgn = if self.n % 2 == 0 { 1 } else { -1 };
        let eps = (0..self.dim)
            .map(|b| {
                let comp = complement(&[b], self.dim);
                let mut tuple = comp.clone();
                tuple.push(b);
                let v = self.constant(&comp, b).clone() * Scalar::from_i64(self.field, sgn * perm_sign(&tuple));
                if v.is_one() {
                    Ok(1)
                } else if (-v).is_one() {
                    Ok(-1)
                } else {
                    Err(Error::NotSimpleFilippov)
                }
            })
            .collect::<Result<Vec<i8>>>()?;
        let eps = SignatureVector(eps);
        let model = simple_filippov(self.n, &eps)?.to_field(self.field)?;
        if model.f != self.f {
            return Err(Error::NotSimpleFilippov);
        }
        Ok(eps)
    }
}

fn check_shape(n: usize, dim: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidAlgebra(format!("arity {n} < 2")));
    }
    if dim < 1 {
        return Err(Error::InvalidAlgebra("dimension must be at least 1".into()));
    }
    if pow(dim, n + 1) > 1 << 26 {
        return Err(Error::InvalidAlgebra(format!("n={n}, d={dim} is beyond desk scale")));
    }
    Ok(())
}

/// The simple Filippov algebra `f_{a1…a_{n-1}c}^b = (-1)^n ε_b ε_{a1…a_{n-1}cb}` of dimension `n+1`.
pub fn simple_filippov(n: usize, eps: &SignatureVector) -> Result<NLeibnizAlgebra> {
    if eps.len() != n + 1 {
        return Err(Error::InvalidSignature(format!(
            "signature {eps} has length {}, expected {}",
            eps.len(),
            n + 1
        )));
    }
    let q = FieldSpec::Rational;
    let sgn = if n % 2 == 0 { 1 } else { -1 };
    let mut tuple = vec![0; n + 1];
    let alg = NLeibnizAlgebra::from_fn(n, n + 1, q, |lower, b| {
        tuple[..n].copy_from_slice(lower);
        tuple[n] = b;
        Scalar::from_i64(q, sgn * eps.get(b) * perm_sign(&tuple))
    })?;
    let name = if n == 2 {
        format!("so({})", signature_label(eps))
    } else {
        format!("A{}({})", n + 1, eps)
    };
    Ok(alg
        .with_metadata("kind", Value::from("filippov"))
        .with_metadata("signature", Value::from(eps.to_string()))
        .with_metadata("name", Value::from(name)))
}

fn signature_label(eps: &SignatureVector) -> String {
    let neg = eps.entries().iter().filter(|&&x| x < 0).count();
    let pos = eps.len() - neg;
    if neg == 0 {
        format!("{pos}")
    } else {
        format!("{},{}", neg.min(pos), neg.max(pos))
    }
}

/// Block-diagonal sum of two algebras of equal arity.
pub fn direct_sum(a: &NLeibnizAlgebra, b: &NLeibnizAlgebra) -> Result<NLeibnizAlgebra> {
    if a.n != b.n {
        return Err(Error::ArityMismatch { expected: a.n, got: b.n });
    }
    if a.field != b.field {
        return Err(Error::FieldMismatch { left: a.field, right: b.field });
    }
    let da = a.dim;
    let entries = a
        .entries()
        .map(|(l, u, v)| (l, u, v.clone()))
        .chain(b.entries().map(|(l, u, v)| {
            (l.iter().map(|i| i + da).collect(), u + da, v.clone())
        }))
        .collect::<Vec<_>>();
    let out = NLeibnizAlgebra::from_entries(a.n, da + b.dim, a.field, entries)?;
    Ok(out.with_metadata("name", Value::from(format!("{}+{}", a.label(), b.label()))))
}

/// An ordered `(n-1)`-tuple of algebra elements acting by `Z ↦ [X1,…,X_{n-1},Z]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalObject {
    elements: Vec<Vec<Scalar>>,
}

impl FundamentalObject {
    pub fn new(elements: Vec<Vec<Scalar>>) -> FundamentalObject {
        FundamentalObject { elements }
    }

    /// The object `(e_{i1},…,e_{ik})` built from basis vectors.
    pub fn basis(indices: &[usize], dim: usize, field: FieldSpec) -> FundamentalObject {
        FundamentalObject {
            elements: indices.iter().map(|&i| unit(field, dim, i)).collect(),
        }
    }

    pub fn elements(&self) -> &[Vec<Scalar>] {
        &self.elements
    }

    pub fn is_zero(&self) -> bool {
        self.elements.iter().any(|x| x.iter().all(Scalar::is_zero))
    }
}

pub(crate) fn unit(field: FieldSpec, dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(field); dim];
    v[i] = Scalar::one(field);
    v
}

fn check_fo(alg: &NLeibnizAlgebra, x: &FundamentalObject) -> Result<()> {
    if x.elements.len() != alg.n - 1 {
        return Err(Error::ArityMismatch { expected: alg.n - 1, got: x.elements.len() });
    }
    Ok(())
}

/// `𝒳·Z = [X1,…,X_{n-1},Z]`.
pub fn fo_action(alg: &NLeibnizAlgebra, x: &FundamentalObject, z: &[Scalar]) -> Result<Vec<Scalar>> {
    check_fo(alg, x)?;
    let mut args: Vec<&[Scalar]> = x.elements.iter().map(Vec::as_slice).collect();
    args.push(z);
    alg.bracket(&args)
}

/// `𝒳·𝒴 = Σ_a (Y1,…,𝒳·Ya,…,Y_{n-1})`, returned as its list of terms.
pub fn fo_compose(
    alg: &NLeibnizAlgebra,
    x: &FundamentalObject,
    y: &FundamentalObject,
) -> Result<Vec<FundamentalObject>> {
    check_fo(alg, x)?;
    check_fo(alg, y)?;
    (0..y.elements.len())
        .map(|a| {
            let mut elements = y.elements.clone();
            elements[a] = fo_action(alg, x, &y.elements[a])?;
            Ok(FundamentalObject { elements })
        })
        .collect()
}

/// Coefficient types for the Filippov-identity kernel.
trait Coeff: Clone {
    fn is_zero(&self) -> bool;
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn sub_mul(&mut self, a: &Self, b: &Self);
}

impl Coeff for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_mul(&mut self, a: &i128, b: &i128) {
        *self += a * b;
    }
    fn sub_mul(&mut self, a: &i128, b: &i128) {
        *self -= a * b;
    }
}

impl Coeff for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        self.add_mul_assign(a, b);
    }
    fn sub_mul(&mut self, a: &Scalar, b: &Scalar) {
        self.add_mul_assign(&-a, b);
    }
}

type Table<T> = Vec<Vec<(usize, T)>>;

/// `Σ outer(a, inner(b)) − Σ_i outer(b1…inner(a, b_i)…bn)` on every basis
/// tuple `(a1…a_{n-1}, b1…bn)`; with `outer = inner = f` this is the
/// Filippov-identity residual. Emits `(a ++ b, c, value)` for nonzero values.
fn fi_form<T: Coeff>(n: usize, d: usize, outer: &Table<T>, inner: &Table<T>, zero: &T, mut emit: impl FnMut(usize, usize, usize, T)) {
    let na = pow(d, n - 1);
    let nb = pow(d, n);
    let strides: Vec<usize> = (0..n).map(|i| pow(d, n - 1 - i)).collect();
    let mut acc = vec![zero.clone(); d];
    let mut touched = Vec::with_capacity(d);
    for af in 0..na {
        for bf in 0..nb {
            for (e, v) in &inner[bf] {
                for (c, w) in &outer[af * d + e] {
                    acc[*c].add_mul(v, w);
                    touched.push(*c);
                }
            }
            for &s in &strides {
                let bi = bf / s % d;
                for (e, v) in &inner[af * d + bi] {
                    let bf2 = bf - bi * s + e * s;
                    for (c, w) in &outer[bf2] {
                        acc[*c].sub_mul(v, w);
                        touched.push(*c);
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &c in &touched {
                let v = std::mem::replace(&mut acc[c], zero.clone());
                if !v.is_zero() {
                    emit(af, bf, c, v);
                }
            }
            touched.clear();
        }
    }
}

fn int_table(alg: &NLeibnizAlgebra) -> Option<Table<i128>> {
    if alg.field != FieldSpec::Rational {
        return None;
    }
    let bound = num_bigint::BigInt::from(1i64 << 40);
    alg.table
        .iter()
        .map(|row| {
            row.iter()
                .map(|(b, v)| {
                    let r = v.as_rational()?;
                    if !r.is_integer() || num_traits::Signed::abs(r.numer()) >= bound {
                        return None;
                    }
                    let x: i64 = num_traits::ToPrimitive::to_i64(r.numer())?;
                    Some((*b, x as i128))
                })
                .collect()
        })
        .collect()
}

fn residual_tensor<T: Coeff>(
    n: usize,
    d: usize,
    field: FieldSpec,
    outer: &Table<T>,
    inner: &Table<T>,
    zero: &T,
    to_scalar: impl Fn(T) -> Scalar,
) -> SparseTensor {
    let mut out = SparseTensor::zeros(field, 2 * n, d);
    fi_form(n, d, outer, inner, zero, |af, bf, c, v| {
        let mut idx = unflat(af, d, n - 1);
        idx.extend(unflat(bf, d, n));
        idx.push(c);
        out.accumulate(idx, to_scalar(v));
    });
    out
}

/// Filippov-identity residual `[𝒜,[B]] − Σ_i [b1…[𝒜,b_i]…bn]` on all basis
/// tuples, indexed `(a1…a_{n-1}, b1…bn, c)`. Zero iff the algebra is n-Leibniz.
pub fn fi_residual(alg: &NLeibnizAlgebra) -> SparseTensor {
    let (n, d) = (alg.n, alg.dim);
    match int_table(alg) {
        Some(t) => residual_tensor(n, d, alg.field, &t, &t, &0, |v| {
            Scalar::Rational(num_rational::BigRational::from_integer(v.into()))
        }),
        None => residual_tensor(n, d, alg.field, &alg.table, &alg.table, &Scalar::zero(alg.field), |v| v),
    }
}

/// `f + t·α¹` for an algebra-valued degree-1 cochain `α¹`.
#[derive(Clone, Debug)]
pub struct DeformedAlgebra {
    base: NLeibnizAlgebra,
    direction: Cochain,
    t: Scalar,
}

impl DeformedAlgebra {
    pub fn base(&self) -> &NLeibnizAlgebra {
        &self.base
    }

    pub fn direction(&self) -> &Cochain {
        &self.direction
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    /// The deformed bracket as a concrete algebra.
    pub fn algebra(&self) -> Result<NLeibnizAlgebra> {
        NLeibnizAlgebra::from_fn(self.base.n, self.base.dim, self.base.field, |lower, b| {
            self.base.constant(lower, b) + &(&self.t * &self.direction.eval(lower, b))
        })
    }
}

fn check_degree_one(alg: &NLeibnizAlgebra, c: &Cochain, valued: Valued) -> Result<()> {
    if c.valued() != valued {
        return Err(Error::WrongCochainKind(format!("expected a {valued}-valued cochain, got {}", c.valued())));
    }
    if c.degree() != 1 {
        return Err(Error::WrongCochainKind(format!("expected degree 1, got {}", c.degree())));
    }
    if (c.n(), c.dim()) != (alg.n, alg.dim) {
        return Err(Error::DimensionMismatch(format!(
            "cochain for n={}, d={} on an algebra with n={}, d={}",
            c.n(),
            c.dim(),
            alg.n,
            alg.dim
        )));
    }
    if c.field() != alg.field {
        return Err(Error::FieldMismatch { left: alg.field, right: c.field() });
    }
    Ok(())
}

pub fn build_deformed(alg: &NLeibnizAlgebra, alpha1: &Cochain, t: Scalar) -> Result<DeformedAlgebra> {
    check_degree_one(alg, alpha1, Valued::Algebra)?;
    if t.field() != alg.field {
        return Err(Error::FieldMismatch { left: alg.field, right: t.field() });
    }
    Ok(DeformedAlgebra {
        base: alg.clone(),
        direction: alpha1.clone(),
        t,
    })
}

/// Coefficient of `t` in the Filippov-identity residual of `f + t·α¹`,
/// indexed like [`fi_residual`].
pub fn first_order_fi_defect(alg: &NLeibnizAlgebra, alpha1: &Cochain) -> Result<SparseTensor> {
    check_degree_one(alg, alpha1, Valued::Algebra)?;
    let (n, d) = (alg.n, alg.dim);
    let alpha: Table<Scalar> = (0..pow(d, n))
        .map(|l| {
            let lower = unflat(l, d, n);
            (0..d)
                .map(|b| (b, alpha1.eval(&lower, b)))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    let zero = Scalar::zero(alg.field);
    let a = residual_tensor(n, d, alg.field, &alpha, &alg.table, &zero, |v| v);
    let b = residual_tensor(n, d, alg.field, &alg.table, &alpha, &zero, |v| v);
    Ok(&a + &b)
}

/// The central extension of an algebra by a scalar-valued degree-1 cochain.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    base: NLeibnizAlgebra,
    cocycle: Cochain,
}

impl CentralExtension {
    pub fn base(&self) -> &NLeibnizAlgebra {
        &self.base
    }

    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    /// The extended algebra on dimension `d+1`; index `d` is the central generator.
    pub fn algebra(&self) -> Result<NLeibnizAlgebra> {
        let d = self.base.dim;
        let field = self.base.field;
        NLeibnizAlgebra::from_fn(self.base.n, d + 1, field, |lower, b| {
            if lower.contains(&d) {
                Scalar::zero(field)
            } else if b == d {
                self.cocycle.eval(lower, 0)
            } else {
                self.base.constant(lower, b).clone()
            }
        })
    }
}

pub fn build_central_extension(alg: &NLeibnizAlgebra, alpha1: &Cochain) -> Result<CentralExtension> {
    check_degree_one(alg, alpha1, Valued::Scalar)?;
    Ok(CentralExtension {
        base: alg.clone(),
        cocycle: alpha1.clone(),
    })
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    lower: Vec<usize>,
    upper: usize,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    n: usize,
    dim: usize,
    field: FieldSpec,
    entries: Vec<EntryJson>,
    #[serde(default)]
    metadata: Map<String, Value>,
}

impl NLeibnizAlgebra {
    pub fn to_json_value(&self) -> Value {
        let doc = AlgebraJson {
            n: self.n,
            dim: self.dim,
            field: self.field,
            entries: self
                .entries()
                .map(|(l, u, v)| EntryJson {
                    lower: l.iter().map(|i| i + 1).collect(),
                    upper: u + 1,
                    value: v.to_string(),
                })
                .collect(),
            metadata: self.metadata.clone(),
        };
        serde_json::to_value(doc).expect("algebra serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("algebra serializes")
    }

    pub fn from_json(s: &str) -> Result<NLeibnizAlgebra> {
        let doc: AlgebraJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let entries = doc
            .entries
            .iter()
            .map(|e| {
                if e.upper == 0 || e.lower.contains(&0) {
                    return Err(Error::Parse("indices are 1-based".into()));
                }
                Ok((
                    e.lower.iter().map(|i| i - 1).collect(),
                    e.upper - 1,
                    Scalar::parse(doc.field, &e.value)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut alg = NLeibnizAlgebra::from_entries(doc.n, doc.dim, doc.field, entries)?;
        alg.metadata = doc.metadata;
        if alg.metadata.get("kind").and_then(Value::as_str) == Some("filippov") && !alg.is_fully_skew() {
            return Err(Error::InvalidAlgebra(
                "algebra tagged filippov is not fully skewsymmetric".into(),
            ));
        }
        Ok(alg)
    }
}
