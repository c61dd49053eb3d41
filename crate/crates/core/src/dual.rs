//! Dual analysis of first-skew one-cochains on simple Filippov algebras.
//!
//! For `d = n+1`, the `n-1` skew slots of a first-skew one-cochain are
//! contracted with the Levi-Civita symbol, leaving a four-index tensor
//!
//! ```text
//! ᾱ^b_{b1 b2 c} = 1/(n-1)! ε^{a1…a_{n-1}}_{b1 b2} α^b_{a1…a_{n-1} c}
//! α^b_{a1…a_{n-1} c} = 1/2 ε_{a1…a_{n-1}}^{b1 b2} ᾱ^b_{b1 b2 c}
//! ```
//!
//! (three indices for scalar-valued cochains). Levi-Civita indices are
//! raised with the Euclidean metric; signature signs enter only as explicit
//! `ε_x` factors.

use serde_json::{json, Value};

use crate::algebra::{NLeibnizAlgebra, SignatureVector};
use crate::cochain::{Cochain, CochainShape, Layout, SymmetryClass, Valued};
use crate::cohomology::{coboundary_preimage, delta_deformation, Problem};
use crate::error::{Error, Result};
use crate::index::{binomial, complement, perm_sign, pow, unflat};
use crate::linalg::{rank, FieldSpec, Scalar};
use crate::tensor::SparseTensor;

/// `ᾱ^b_{b1 b2 c}` (algebra-valued) or `ᾱ_{b1 b2 c}` (scalar-valued),
/// skewsymmetric in `b1, b2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCochain {
    n: usize,
    valued: Valued,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl DualCochain {
    pub fn zero(n: usize, valued: Valued, field: FieldSpec) -> DualCochain {
        let d = n + 1;
        let len = match valued {
            Valued::Algebra => pow(d, 4),
            Valued::Scalar => pow(d, 3),
        };
        DualCochain {
            n,
            valued,
            field,
            data: vec![Scalar::zero(field); len],
        }
    }

    /// Builds a dual cochain from `f(b, b1, b2, c)`; `b` is always 0 when scalar-valued.
    pub fn from_fn(
        n: usize,
        valued: Valued,
        field: FieldSpec,
        mut f: impl FnMut(usize, usize, usize, usize) -> Scalar,
    ) -> Result<DualCochain> {
        let mut out = DualCochain::zero(n, valued, field);
        let d = n + 1;
        for b in 0..out.upper_dim() {
            for b1 in 0..d {
                for b2 in 0..d {
                    for c in 0..d {
                        let k = out.offset(b, b1, b2, c);
                        out.data[k] = f(b, b1, b2, c);
                    }
                }
            }
        }
        if let Some(x) = out.data.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch { left: field, right: x.field() });
        }
        for b in 0..out.upper_dim() {
            for b1 in 0..d {
                for b2 in 0..d {
                    for c in 0..d {
                        if out.get(b, b1, b2, c) != -out.get(b, b2, b1, c) {
                            return Err(Error::SymmetryViolation(format!(
                                "dual cochain not skew in b1={}, b2={}",
                                b1 + 1,
                                b2 + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn upper_dim(&self) -> usize {
        match self.valued {
            Valued::Algebra => self.n + 1,
            Valued::Scalar => 1,
        }
    }

    fn offset(&self, b: usize, b1: usize, b2: usize, c: usize) -> usize {
        let d = self.n + 1;
        let b = if self.valued == Valued::Algebra { b } else { 0 };
        ((b * d + b1) * d + b2) * d + c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn valued(&self) -> Valued {
        self.valued
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// `ᾱ^b_{b1 b2 c}`; `b` is ignored for scalar-valued duals.
    pub fn get(&self, b: usize, b1: usize, b2: usize, c: usize) -> Scalar {
        self.data[self.offset(b, b1, b2, c)].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn checked_sub(&self, other: &DualCochain) -> Result<DualCochain> {
        if (self.n, self.valued) != (other.n, other.valued) {
            return Err(Error::DimensionMismatch("dual cochains of different shapes".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(DualCochain { data, ..self.clone() })
    }

    pub fn scale(&self, k: &Scalar) -> DualCochain {
        DualCochain {
            data: self.data.iter().map(|x| x * k).collect(),
            ..self.clone()
        }
    }

    /// `Some(λ)` if `self = λ·other`, `None` otherwise (`other` must be nonzero).
    pub fn ratio_to(&self, other: &DualCochain) -> Option<Scalar> {
        let k = other.data.iter().position(|x| !x.is_zero())?;
        let lambda = self.data[k].checked_div(&other.data[k]).ok()?;
        let matches = self
            .data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a == &(b * &lambda));
        matches.then_some(lambda)
    }

    pub fn to_json_value(&self) -> Value {
        let d = self.n + 1;
        let mut entries = Vec::new();
        for b in 0..self.upper_dim() {
            for b1 in 0..d {
                for b2 in 0..d {
                    for c in 0..d {
                        let v = self.get(b, b1, b2, c);
                        if v.is_zero() {
                            continue;
                        }
                        let mut e = json!({ "lower": [b1 + 1, b2 + 1, c + 1] });
                        if self.valued == Valued::Algebra {
                            e["upper"] = json!(b + 1);
                        }
                        e["value"] = json!(v.to_string());
                        entries.push(e);
                    }
                }
            }
        }
        json!({
            "n": self.n,
            "dim": d,
            "field": self.field,
            "valued": self.valued,
            "entries": entries,
        })
    }
}

/// Per fixed `(b, c)`: dimension of a skew block of `n-1` slots, and of the
/// dual skew pair `(b1, b2)`, for `d = n+1`. The two always agree.
pub fn block_dimensions(n: usize) -> (usize, usize) {
    (binomial(n + 1, n.saturating_sub(1)), binomial(n + 1, 2))
}

/// Signature of a simple Filippov algebra; anything else is rejected.
fn signature(alg: &NLeibnizAlgebra) -> Result<SignatureVector> {
    alg.filippov_signature()
}

fn check_dual_shape(alg: &NLeibnizAlgebra, dc: &DualCochain) -> Result<()> {
    if dc.n != alg.n() {
        return Err(Error::DimensionMismatch(format!(
            "dual cochain for n={} on an algebra with n={}",
            dc.n,
            alg.n()
        )));
    }
    if dc.field != alg.field() {
        return Err(Error::FieldMismatch { left: alg.field(), right: dc.field });
    }
    Ok(())
}

/// Contracts the skew block of a first-skew one-cochain with the Levi-Civita symbol.
pub fn dualize(c: &Cochain) -> Result<DualCochain> {
    if c.class() != SymmetryClass::FirstSkew || c.degree() != 1 {
        return Err(Error::WrongCochainKind("dualization needs a first-skew one-cochain".into()));
    }
    let n = c.n();
    let d = n + 1;
    if c.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "dualization needs dimension n+1 = {d}, got {}",
            c.dim()
        )));
    }
    if n < 3 {
        return Err(Error::DimensionMismatch("dualization needs n >= 3".into()));
    }
    let field = c.field();
    DualCochain::from_fn(n, c.valued(), field, |b, b1, b2, z| {
        if b1 == b2 {
            return Scalar::zero(field);
        }
        // All (n-1)! orderings of the complement contribute equally.
        let comp = complement(&[b1.min(b2), b1.max(b2)], d);
        let mut tuple = comp.clone();
        tuple.extend([b1, b2]);
        let mut lower = comp;
        lower.push(z);
        c.eval(&lower, b).scale_i64(perm_sign(&tuple))
    })
}

/// Inverse of [`dualize`].
pub fn undualize(dc: &DualCochain) -> Result<Cochain> {
    let n = dc.n;
    let d = n + 1;
    let field = dc.field;
    let shape = CochainShape {
        n,
        dim: d,
        degree: 1,
        valued: dc.valued,
        class: SymmetryClass::FirstSkew,
    };
    // On a canonical (sorted, repeat-free) block only the complementary pair
    // contributes, and its two orderings cancel the 1/2.
    let layout = std::sync::Arc::new(Layout::new(shape)?);
    let data = (0..layout.len())
        .map(|k| {
            let (lower, b) = layout.storage_tuple(k);
            let block = &lower[..n - 1];
            let pair = complement(block, d);
            let mut tuple = block.to_vec();
            tuple.extend([pair[0], pair[1]]);
            dc.get(b, pair[0], pair[1], lower[n - 1]).scale_i64(perm_sign(&tuple))
        })
        .collect();
    Cochain::with_layout(layout, field, data)
}

fn kd(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// Residual of the contracted dual one-cocycle condition, indexed
/// `(a1, a2, b1, b2, c, d)` (deformation) or `(a1, a2, b1, b2, c)` (central).
/// Zero exactly when the undualized cochain is a cocycle.
pub fn dual_cocycle_check(alg: &NLeibnizAlgebra, dc: &DualCochain) -> Result<SparseTensor> {
    check_dual_shape(alg, dc)?;
    let eps = signature(alg)?;
    let e = |i: usize| eps.get(i);
    let dim = dc.dim();
    let field = dc.field;
    let g = |b: usize, b1: usize, b2: usize, c: usize| dc.get(b, b1, b2, c);
    let mut out = match dc.valued {
        Valued::Algebra => SparseTensor::zeros(field, 6, dim),
        Valued::Scalar => SparseTensor::zeros(field, 5, dim),
    };
    let trace = |a1: usize, a2: usize| -> Scalar {
        (0..dim).fold(Scalar::zero(field), |acc, x| &acc + &g(x, a1, a2, x))
    };
    for t in 0..pow(dim, 5) {
        let ix = unflat(t, dim, 5);
        let (a1, a2, b1, b2, c) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        match dc.valued {
            Valued::Scalar => {
                let terms = [
                    (e(b2) * kd(c, b1), g(0, a1, a2, b2)),
                    (-e(b1) * kd(c, b2), g(0, a1, a2, b1)),
                    (e(b1) * kd(b1, a2), g(0, a1, b2, c)),
                    (-e(b1) * kd(b1, a1), g(0, a2, b2, c)),
                    (-e(b2) * kd(b2, a2), g(0, a1, b1, c)),
                    (e(b2) * kd(b2, a1), g(0, a2, b1, c)),
                    (-e(a2) * kd(c, a1), g(0, b1, b2, a2)),
                    (e(a1) * kd(c, a2), g(0, b1, b2, a1)),
                ];
                let v = sum_terms(field, &terms);
                out.accumulate(ix, v);
            }
            Valued::Algebra => {
                let tr = trace(a1, a2);
                for d in 0..dim {
                    let terms = [
                        (e(d) * kd(d, a2), g(a1, b1, b2, c)),
                        (-e(d) * kd(d, a1), g(a2, b1, b2, c)),
                        (e(b2) * kd(c, b1), g(d, a1, a2, b2)),
                        (-e(b1) * kd(c, b2), g(d, a1, a2, b1)),
                        (-e(d) * (kd(c, b1) * kd(d, b2) - kd(c, b2) * kd(d, b1)), tr.clone()),
                        (-e(d) * kd(c, b2), g(b1, a1, a2, d)),
                        (e(d) * kd(c, b1), g(b2, a1, a2, d)),
                        (e(b1) * kd(b1, a2), g(d, a1, b2, c)),
                        (-e(b1) * kd(b1, a1), g(d, a2, b2, c)),
                        (-e(b2) * kd(b2, a2), g(d, a1, b1, c)),
                        (e(b2) * kd(b2, a1), g(d, a2, b1, c)),
                        (-e(a2) * kd(c, a1), g(d, b1, b2, a2)),
                        (e(a1) * kd(c, a2), g(d, b1, b2, a1)),
                    ];
                    let v = sum_terms(field, &terms);
                    let mut idx = ix.clone();
                    idx.push(d);
                    out.accumulate(idx, v);
                }
            }
        }
    }
    Ok(out)
}

fn sum_terms(field: FieldSpec, terms: &[(i64, Scalar)]) -> Scalar {
    let mut acc = Scalar::zero(field);
    for (k, v) in terms {
        if *k != 0 && !v.is_zero() {
            acc = &acc + &v.scale_i64(*k);
        }
    }
    acc
}

fn require_cocycle(alg: &NLeibnizAlgebra, dc: &DualCochain) -> Result<()> {
    let r = dual_cocycle_check(alg, dc)?;
    match r.first_nonzero() {
        None => Ok(()),
        Some((idx, v)) => Err(Error::NotCocycle(format!(
            "dual condition fails at {:?} with value {v}",
            crate::cochain::one_based(idx)
        ))),
    }
}

/// The contractions of an algebra-valued dual cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceData {
    /// `Σ_c ᾱ^c_{a b c}`, indexed `[a][b]`.
    pub upper_trace: Vec<Vec<Scalar>>,
    /// `Σ_c ᾱ^a_{b c c} − Σ_c ᾱ^b_{a c c}`, indexed `[a][b]`.
    pub inner_asymmetry: Vec<Vec<Scalar>>,
    /// `n Σ_d ε_d ᾱ^d_{d a c} + ε_c Σ_d ᾱ^c_{a d d} − δ_{ac} Σ_{e,d} ε_e ᾱ^e_{e d d}`, indexed `[a][c]`.
    pub weighted: Vec<Vec<Scalar>>,
    /// `B_{ab} = (1/n) Σ_e ᾱ^a_{b e e}`.
    pub b: Vec<Vec<Scalar>>,
}

impl TraceData {
    pub fn identities_hold(&self) -> bool {
        [&self.upper_trace, &self.inner_asymmetry, &self.weighted]
            .iter()
            .all(|m| m.iter().flatten().all(Scalar::is_zero))
    }

    pub fn b_is_symmetric(&self) -> bool {
        let d = self.b.len();
        (0..d).all(|a| (0..d).all(|c| self.b[a][c] == self.b[c][a]))
    }
}

fn require_algebra_valued(dc: &DualCochain) -> Result<()> {
    if dc.valued != Valued::Algebra {
        return Err(Error::WrongCochainKind("expected an algebra-valued dual cochain".into()));
    }
    Ok(())
}

/// Computes the three contractions of a dual cocycle and checks that they vanish.
pub fn trace_identities(alg: &NLeibnizAlgebra, dc: &DualCochain) -> Result<TraceData> {
    require_algebra_valued(dc)?;
    require_cocycle(alg, dc)?;
    let eps = signature(alg)?;
    let data = raw_traces(dc, &eps)?;
    if !data.identities_hold() {
        return Err(Error::TheoremViolation("trace identities fail for a cocycle".into()));
    }
    Ok(data)
}

fn raw_traces(dc: &DualCochain, eps: &SignatureVector) -> Result<TraceData> {
    let d = dc.dim();
    let n = dc.n as i64;
    let field = dc.field;
    let sum = |f: &dyn Fn(usize) -> Scalar| (0..d).fold(Scalar::zero(field), |acc, x| &acc + &f(x));
    let grid = |f: &dyn Fn(usize, usize) -> Scalar| -> Vec<Vec<Scalar>> {
        (0..d).map(|a| (0..d).map(|b| f(a, b)).collect()).collect()
    };
    let inner = |a: usize, b: usize| sum(&|c| dc.get(a, b, c, c));
    let total = sum(&|e| sum(&|x| dc.get(e, e, x, x)).scale_i64(eps.get(e)));
    let inv_n = Scalar::from_ratio(field, 1, n)?;
    Ok(TraceData {
        upper_trace: grid(&|a, b| sum(&|c| dc.get(c, a, b, c))),
        inner_asymmetry: grid(&|a, b| &inner(a, b) - &inner(b, a)),
        weighted: grid(&|a, c| {
            let first = sum(&|x| dc.get(x, x, a, c).scale_i64(eps.get(x))).scale_i64(n);
            let second = inner(c, a).scale_i64(eps.get(c));
            let third = if a == c { total.clone() } else { Scalar::zero(field) };
            &(&first + &second) - &third
        }),
        b: grid(&|a, b| &inner(a, b) * &inv_n),
    })
}

/// Result of removing the trace part of a dual deformation cocycle.
#[derive(Clone, Debug)]
pub struct TraceReduction {
    /// Traceless cocycle cohomologous to the input.
    pub tilde: DualCochain,
    /// The removed part, undualized; always a fully skewsymmetric coboundary.
    pub removed: Cochain,
    /// A 0-cochain with `δ generator = removed`.
    pub generator: Cochain,
}

/// `α̃^a_{bcd} = ᾱ^a_{bcd} − δ_{cd} B_{ab} + δ_{bd} B_{ac}`, with a
/// constructive proof that the removed part is trivial.
pub fn trace_reduce(alg: &NLeibnizAlgebra, dc: &DualCochain) -> Result<TraceReduction> {
    let traces = trace_identities(alg, dc)?;
    let field = dc.field;
    let b = &traces.b;
    let removed_dual = DualCochain::from_fn(dc.n, Valued::Algebra, field, |a, x, y, z| {
        let mut v = Scalar::zero(field);
        if y == z {
            v = &v + &b[a][x];
        }
        if x == z {
            v = &v - &b[a][y];
        }
        v
    })?;
    let tilde = dc.checked_sub(&removed_dual)?;
    let eps = signature(alg)?;
    let d = dc.dim();
    let zero_traces = (0..d).all(|c| {
        (0..d).all(|z| {
            let t1 = (0..d).fold(Scalar::zero(field), |acc, a| &acc + &tilde.get(a, a, c, z).scale_i64(eps.get(a)));
            let t2 = (0..d).fold(Scalar::zero(field), |acc, a| &acc + &tilde.get(a, c, z, a));
            let t3 = (0..d).fold(Scalar::zero(field), |acc, x| &acc + &tilde.get(c, z, x, x));
            t1.is_zero() && t2.is_zero() && t3.is_zero()
        })
    });
    if !zero_traces {
        return Err(Error::TheoremViolation("trace-reduced cocycle is not traceless".into()));
    }
    require_cocycle(alg, &tilde)
        .map_err(|e| Error::TheoremViolation(format!("trace-reduced cochain: {e}")))?;
    let removed = undualize(&removed_dual)?;
    if !removed.has_class(SymmetryClass::FullSkew) {
        return Err(Error::TheoremViolation("removed part is not fully skewsymmetric".into()));
    }
    let generator = coboundary_preimage(alg, Problem::Deformation, &removed)?
        .ok_or_else(|| Error::TheoremViolation("removed part is not a coboundary".into()))?;
    Ok(TraceReduction { tilde, removed, generator })
}

/// The dual tensor `ε_d ε_{abcd}` of the exceptional `n = 3` cocycle, as `ᾱ^a_{bcd}`.
pub fn exceptional_dual(eps: &SignatureVector, field: FieldSpec) -> Result<DualCochain> {
    if eps.len() != 4 {
        return Err(Error::InvalidSignature(format!("expected length 4, got {}", eps.len())));
    }
    DualCochain::from_fn(3, Valued::Algebra, field, |a, b, c, d| {
        Scalar::from_i64(field, eps.get(d) * perm_sign(&[a, b, c, d]))
    })
}

/// Outcome of classifying a traceless dual cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TracelessVerdict {
    /// `α̃ = 0` (`n ≠ 3`).
    Zero,
    /// `α̃ = λ·ε_d ε_{abcd}` (`n = 3`; `λ` may be 0).
    Exceptional(Scalar),
}

/// Checks that a traceless cocycle vanishes (`n ≠ 3`) or is a multiple of
/// the exceptional tensor (`n = 3`).
pub fn classify_traceless(alg: &NLeibnizAlgebra, tilde: &DualCochain) -> Result<TracelessVerdict> {
    require_algebra_valued(tilde)?;
    check_dual_shape(alg, tilde)?;
    let eps = signature(alg)?;
    if alg.n() == 3 && tilde.is_zero() {
        return Ok(TracelessVerdict::Exceptional(Scalar::zero(tilde.field)));
    }
    if tilde.is_zero() {
        return Ok(TracelessVerdict::Zero);
    }
    if alg.n() != 3 {
        return Err(Error::TheoremViolation(format!(
            "nonzero traceless cocycle for n = {}",
            alg.n()
        )));
    }
    let template = exceptional_dual(&eps, tilde.field)?;
    tilde
        .ratio_to(&template)
        .map(TracelessVerdict::Exceptional)
        .ok_or_else(|| Error::TheoremViolation("traceless cocycle is not a multiple of ε_d ε_{abcd}".into()))
}

/// Symmetric and antisymmetric parts of a degree-1 cochain of a 2-algebra,
/// both returned unrestricted.
pub fn symmetric_split(c: &Cochain) -> Result<(Cochain, Cochain)> {
    if c.n() != 2 || c.degree() != 1 {
        return Err(Error::ArityMismatch { expected: 2, got: c.n() });
    }
    let field = c.field();
    let half = Scalar::from_ratio(field, 1, 2)?;
    let shape = CochainShape { class: SymmetryClass::Unrestricted, ..c.shape() };
    let s = Cochain::from_fn(shape, field, |l, u| {
        &(&c.eval(&[l[0], l[1]], u) + &c.eval(&[l[1], l[0]], u)) * &half
    })?;
    let a = Cochain::from_fn(shape, field, |l, u| {
        &(&c.eval(&[l[0], l[1]], u) - &c.eval(&[l[1], l[0]], u)) * &half
    })?;
    Ok((s, a))
}

/// Runs the semisimple argument on one cocycle of a Lie algebra: the
/// symmetrized cocycle condition gives `f_{ec}^d S^e_{ab} = 0`, contracting
/// with `f` gives `k·S = 0`, and a non-degenerate Killing form forces `S = 0`.
pub fn semisimple_cocycle_symmetric_vanishes(alg: &NLeibnizAlgebra, c: &Cochain) -> Result<()> {
    if alg.n() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: alg.n() });
    }
    let d = alg.dim();
    let field = alg.field();
    let k = alg.killing_form()?;
    if rank(&k) < d {
        return Err(Error::DegenerateKillingForm(format!(
            "rank {} < {d}",
            rank(&k)
        )));
    }
    if c.valued() != Valued::Algebra {
        return Err(Error::WrongCochainKind("expected an algebra-valued cochain".into()));
    }
    if !delta_deformation(alg, c)?.is_zero() {
        return Err(Error::NotCocycle("input is not a deformation cocycle".into()));
    }
    let (s, _) = symmetric_split(c)?;
    for a in 0..d {
        for b in 0..d {
            for x in 0..d {
                for y in 0..d {
                    let v = (0..d).fold(Scalar::zero(field), |acc, e| {
                        &acc + &(alg.constant(&[e, x], y) * &s.eval(&[a, b], e))
                    });
                    if !v.is_zero() {
                        return Err(Error::TheoremViolation(format!(
                            "f_ec^d S^e_ab ≠ 0 at a={}, b={}, c={}, d={}",
                            a + 1,
                            b + 1,
                            x + 1,
                            y + 1
                        )));
                    }
                }
            }
        }
    }
    for e1 in 0..d {
        for a in 0..d {
            for b in 0..d {
                let v = (0..d).fold(Scalar::zero(field), |acc, e| &acc + &(&k.get(e1, e) * &s.eval(&[a, b], e)));
                if !v.is_zero() {
                    return Err(Error::TheoremViolation("k·S ≠ 0".into()));
                }
            }
        }
    }
    if !s.is_zero() {
        return Err(Error::TheoremViolation("symmetric part survives".into()));
    }
    Ok(())
}

/// Result of reducing a scalar-valued dual cocycle.
#[derive(Clone, Debug)]
pub struct CentralReduction {
    /// `α̃_{b1 b2}^c`, which must vanish.
    pub tilde: DualCochain,
    /// A 0-cochain with `δ generator = α¹`, from an exact solve.
    pub generator: Cochain,
    /// The trace formula `α⁰_b = (-1)^{n+1}/n · ε_b Σ_e ᾱ_{e b}^e`.
    pub trace_generator: Cochain,
}

/// `α̃_{b1b2}^c = ᾱ_{b1b2}^c − (1/n) δ^c_{b1} ᾱ_{e b2}^e + (1/n) δ^c_{b2} ᾱ_{e b1}^e`;
/// asserts `α̃ = 0` and produces the generating 0-cochain.
pub fn central_trace_reduce(alg: &NLeibnizAlgebra, dc: &DualCochain) -> Result<CentralReduction> {
    if dc.valued != Valued::Scalar {
        return Err(Error::WrongCochainKind("expected a scalar-valued dual cochain".into()));
    }
    require_cocycle(alg, dc)?;
    let eps = signature(alg)?;
    let n = dc.n;
    let d = dc.dim();
    let field = dc.field;
    let inv_n = Scalar::from_ratio(field, 1, n as i64)?;
    let t: Vec<Scalar> = (0..d)
        .map(|b| (0..d).fold(Scalar::zero(field), |acc, e| &acc + &dc.get(0, e, b, e)))
        .collect();
    let tilde = DualCochain::from_fn(n, Valued::Scalar, field, |_, b1, b2, c| {
        let mut v = dc.get(0, b1, b2, c);
        if c == b1 {
            v = &v - &(&t[b2] * &inv_n);
        }
        if c == b2 {
            v = &v + &(&t[b1] * &inv_n);
        }
        v
    })?;
    let trace_vanishes = (0..d).all(|b1| (0..d).fold(Scalar::zero(field), |acc, c| &acc + &tilde.get(0, b1, c, c)).is_zero());
    if !trace_vanishes {
        return Err(Error::TheoremViolation("reduced central cocycle has a trace".into()));
    }
    if !tilde.is_zero() {
        return Err(Error::TheoremViolation("reduced central cocycle does not vanish".into()));
    }
    let alpha1 = undualize(dc)?;
    let generator = coboundary_preimage(alg, Problem::Central, &alpha1)?
        .ok_or_else(|| Error::TheoremViolation("central cocycle is not a coboundary".into()))?;
    let sign = if n % 2 == 0 { -1 } else { 1 };
    let shape = CochainShape {
        n,
        dim: d,
        degree: 0,
        valued: Valued::Scalar,
        class: SymmetryClass::Unrestricted,
    };
    let trace_generator = Cochain::from_fn(shape, field, |l, _| (&t[l[0]] * &inv_n).scale_i64(sign * eps.get(l[0])))?;
    Ok(CentralReduction {
        tilde,
        generator,
        trace_generator,
    })
}
