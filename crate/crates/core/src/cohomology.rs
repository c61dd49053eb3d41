//! Coboundary operators for the deformation and central-extension problems,
//! and first cohomology as kernel/image dimension arithmetic.
//!
//! With fundamental objects `𝒳_1,…,𝒳_{p+1}` and a final argument `Z`,
//!
//! ```text
//! δα(𝒳_1,…,𝒳_{p+1}, Z) =
//!     Σ_{j<k} (-1)^j   α(𝒳_1,…,𝒳̂_j,…,𝒳_j·𝒳_k,…,𝒳_{p+1}, Z)
//!   + Σ_j     (-1)^j   α(𝒳_1,…,𝒳̂_j,…,𝒳_{p+1}, 𝒳_j·Z)
//!   + Σ_j     (-1)^{j+1} 𝒳_j·α(𝒳_1,…,𝒳̂_j,…,𝒳_{p+1}, Z)
//!   + (-1)^p  Σ_i [Y_1,…,α(𝒳_1,…,𝒳_p, Y_i),…,Y_{n-1}, Z],   Y = 𝒳_{p+1}
//! ```
//!
//! The last two (action) terms are absent for scalar-valued cochains.
//! Every operator is first built as a sparse stencil: one row per target
//! storage slot listing `(source slot, coefficient)`. Applying the stencil to
//! a coefficient vector gives `δ`; the stencil itself is the matrix of `δ`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::NLeibnizAlgebra;
use crate::cochain::{Cochain, CochainShape, Layout, SymmetryClass, Valued};
use crate::error::{Error, Result};
use crate::index::{flat, pow, unflat};
use crate::linalg::{ExactMatrix, FieldSpec, RowSpace, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Deformation,
    Central,
}

impl Problem {
    pub fn valued(self) -> Valued {
        match self {
            Problem::Deformation => Valued::Algebra,
            Problem::Central => Valued::Scalar,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Deformation => "deformation",
            Problem::Central => "central",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deformation" => Ok(Problem::Deformation),
            "central" => Ok(Problem::Central),
            _ => Err(Error::Parse(format!("unknown problem {s:?}"))),
        }
    }
}

pub(crate) type Row = Vec<(usize, Scalar)>;

fn shape_for(alg: &NLeibnizAlgebra, problem: Problem, degree: usize, class: SymmetryClass) -> CochainShape {
    CochainShape {
        n: alg.n(),
        dim: alg.dim(),
        degree,
        valued: problem.valued(),
        class,
    }
}

/// Class in which `δ` of a cochain of shape `src` is computed: block skewness
/// survives `δ` only when the bracket itself is skew in its first `n-1` slots.
fn natural_target(alg: &NLeibnizAlgebra, src: CochainShape) -> CochainShape {
    let class = if src.degree >= 1 && src.class != SymmetryClass::Unrestricted && alg.is_first_skew() {
        SymmetryClass::FirstSkew
    } else {
        SymmetryClass::Unrestricted
    };
    CochainShape {
        degree: src.degree + 1,
        class,
        ..src
    }
}

struct Stencil<'a> {
    alg: &'a NLeibnizAlgebra,
    problem: Problem,
    src: &'a Layout,
    field: FieldSpec,
    acc: Row,
    args: Vec<usize>,
}

impl<'a> Stencil<'a> {
    fn new(alg: &'a NLeibnizAlgebra, problem: Problem, src: &'a Layout) -> Self {
        Stencil {
            alg,
            problem,
            src,
            field: alg.field(),
            acc: Vec::new(),
            args: Vec::new(),
        }
    }

    /// Adds `coef · α(args)^upper`.
    fn push(&mut self, upper: usize, coef: Scalar) {
        if let Some((base, sign)) = self.src.locate(&self.args) {
            let c = if sign < 0 { -coef } else { coef };
            self.acc.push((base + upper, c));
        }
    }

    fn row(&mut self, lower: &[usize], upper: usize) -> Row {
        let alg = self.alg;
        let n = alg.n();
        let d = alg.dim();
        let m = n - 1;
        let p = self.src.shape().degree;
        let blocks: Vec<&[usize]> = lower[..(p + 1) * m].chunks(m).collect();
        let z = lower[(p + 1) * m];
        let one = Scalar::one(self.field);
        let sgn = |j: usize| if j % 2 == 1 { -one.clone() } else { one.clone() };
        self.acc.clear();
        let mut buf = vec![0usize; n];

        // 𝒳_j acting on 𝒳_k, slot by slot.
        for j in 0..=p {
            for k in j + 1..=p {
                for a in 0..m {
                    buf[..m].copy_from_slice(blocks[j]);
                    buf[m] = blocks[k][a];
                    for (e, v) in alg.image_flat(flat(&buf, d)) {
                        self.args.clear();
                        for (i, b) in blocks.iter().enumerate() {
                            if i == j {
                                continue;
                            }
                            if i == k {
                                let at = self.args.len();
                                self.args.extend_from_slice(b);
                                self.args[at + a] = *e;
                            } else {
                                self.args.extend_from_slice(b);
                            }
                        }
                        self.args.push(z);
                        self.push(upper, &sgn(j + 1) * v);
                    }
                }
            }
        }

        // 𝒳_j acting on Z.
        for j in 0..=p {
            buf[..m].copy_from_slice(blocks[j]);
            buf[m] = z;
            for (e, v) in alg.image_flat(flat(&buf, d)) {
                self.args.clear();
                for (i, b) in blocks.iter().enumerate() {
                    if i != j {
                        self.args.extend_from_slice(b);
                    }
                }
                self.args.push(*e);
                self.push(upper, &sgn(j + 1) * v);
            }
        }

        if self.problem == Problem::Deformation {
            // 𝒳_j acting on the value of α.
            for j in 0..=p {
                buf[..m].copy_from_slice(blocks[j]);
                for e in 0..d {
                    buf[m] = e;
                    let f = alg.constant_flat(flat(&buf, d), upper);
                    if f.is_zero() {
                        continue;
                    }
                    self.args.clear();
                    for (i, b) in blocks.iter().enumerate() {
                        if i != j {
                            self.args.extend_from_slice(b);
                        }
                    }
                    self.args.push(z);
                    self.push(e, &sgn(j) * f);
                }
            }

            // α inserted into each slot of the last block.
            let y = blocks[p];
            for i in 0..m {
                buf[..m].copy_from_slice(y);
                buf[m] = z;
                for e in 0..d {
                    buf[i] = e;
                    let f = alg.constant_flat(flat(&buf, d), upper);
                    if f.is_zero() {
                        continue;
                    }
                    self.args.clear();
                    for b in &blocks[..p] {
                        self.args.extend_from_slice(b);
                    }
                    self.args.push(y[i]);
                    self.push(e, &sgn(p) * f);
                }
            }
        }

        let mut row = std::mem::take(&mut self.acc);
        row.sort_by_key(|e| e.0);
        let mut merged: Row = Vec::with_capacity(row.len());
        for (j, v) in row {
            match merged.last_mut() {
                Some((k, w)) if *k == j => *w = &*w + &v,
                _ => merged.push((j, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        merged
    }
}

/// Rows of `δ: C^p → C^{p+1}` for the given source and target layouts.
pub(crate) fn stencil(alg: &NLeibnizAlgebra, problem: Problem, src: &Layout, dst: &Layout) -> Vec<Row> {
    (0..dst.len())
        .into_par_iter()
        .map_init(
            || Stencil::new(alg, problem, src),
            |s, k| {
                let (lower, upper) = dst.storage_tuple(k);
                s.row(&lower, upper)
            },
        )
        .collect()
}

/// `δ` applied to `data` without materializing the rows.
fn apply(alg: &NLeibnizAlgebra, problem: Problem, src: &Layout, dst: &Layout, data: &[Scalar]) -> Vec<Scalar> {
    let field = alg.field();
    (0..dst.len())
        .into_par_iter()
        .map_init(
            || Stencil::new(alg, problem, src),
            |s, k| {
                let (lower, upper) = dst.storage_tuple(k);
                let mut acc = Scalar::zero(field);
                for (j, c) in s.row(&lower, upper) {
                    if !data[j].is_zero() {
                        acc.add_mul_assign(&c, &data[j]);
                    }
                }
                acc
            },
        )
        .collect()
}

fn check_cochain(alg: &NLeibnizAlgebra, c: &Cochain) -> Result<()> {
    if (c.n(), c.dim()) != (alg.n(), alg.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "cochain for n={}, d={} on an algebra with n={}, d={}",
            c.n(),
            c.dim(),
            alg.n(),
            alg.dim()
        )));
    }
    if c.field() != alg.field() {
        return Err(Error::FieldMismatch { left: alg.field(), right: c.field() });
    }
    Ok(())
}

fn delta(alg: &NLeibnizAlgebra, problem: Problem, c: &Cochain) -> Result<Cochain> {
    check_cochain(alg, c)?;
    let src = c.layout();
    let dst = std::sync::Arc::new(Layout::new(natural_target(alg, c.shape()))?);
    let data = apply(alg, problem, src, &dst, c.storage());
    let out = Cochain::with_layout(dst, alg.field(), data)?;
    if c.degree() == 0 {
        // Keep the tag of the 0-cochain whenever the image respects it.
        if let Ok(tagged) = out.to_class(c.class()) {
            return Ok(tagged);
        }
    }
    Ok(out)
}

/// `δ` of the deformation complex (algebra-valued cochains).
pub fn delta_deformation(alg: &NLeibnizAlgebra, c: &Cochain) -> Result<Cochain> {
    if c.valued() != Valued::Algebra {
        return Err(Error::WrongCochainKind(
            "deformation coboundary needs an algebra-valued cochain".into(),
        ));
    }
    delta(alg, Problem::Deformation, c)
}

/// `δ` of the central-extension complex (scalar-valued cochains).
pub fn delta_central(alg: &NLeibnizAlgebra, c: &Cochain) -> Result<Cochain> {
    if c.valued() != Valued::Scalar {
        return Err(Error::WrongCochainKind(
            "central coboundary needs a scalar-valued cochain".into(),
        ));
    }
    delta(alg, Problem::Central, c)
}

/// Matrix of `δ: C^p → C^{p+1}` in the standard bases of `class_in` and `class_out`.
pub fn coboundary_matrix(
    alg: &NLeibnizAlgebra,
    problem: Problem,
    degree: usize,
    class_in: SymmetryClass,
    class_out: SymmetryClass,
) -> Result<ExactMatrix> {
    let src_shape = shape_for(alg, problem, degree, class_in);
    let src = Layout::new(src_shape)?;
    let natural = natural_target(alg, src_shape);
    let dst = std::sync::Arc::new(Layout::new(natural)?);
    let rows = stencil(alg, problem, &src, &dst);
    let m = ExactMatrix::from_sparse_rows(alg.field(), src.len(), &rows)?;
    if class_out == natural.class {
        return Ok(m);
    }
    let out_shape = CochainShape { class: class_out, ..natural };
    let columns = (0..m.cols())
        .map(|j| {
            let c = Cochain::with_layout(dst.clone(), alg.field(), m.column(j))?;
            c.to_class(class_out)
                .map(|c| c.storage().to_vec())
                .map_err(|_| {
                    Error::IncompatibleClasses(format!(
                        "image of basis cochain {j} is not {class_out}"
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    ExactMatrix::from_columns(alg.field(), Layout::new(out_shape)?.len(), &columns)
}

/// Basis of the degree-1 cocycles of `class`.
pub fn cocycle_basis(alg: &NLeibnizAlgebra, problem: Problem, class: SymmetryClass) -> Result<Vec<Cochain>> {
    let src = std::sync::Arc::new(Layout::new(shape_for(alg, problem, 1, class))?);
    cocycle_equations(alg, problem, &src)?
        .kernel()
        .into_iter()
        .map(|v| Cochain::with_layout(src.clone(), alg.field(), v))
        .collect()
}

fn cocycle_equations(alg: &NLeibnizAlgebra, problem: Problem, src: &Layout) -> Result<RowSpace> {
    let dst = Layout::new(natural_target(alg, src.shape()))?;
    let mut eqs = RowSpace::new(alg.field(), src.len());
    for row in &stencil(alg, problem, src, &dst) {
        eqs.insert_sparse(row)?;
    }
    Ok(eqs)
}

/// First cohomology of one problem and symmetry class.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub algebra: String,
    pub n: usize,
    pub dim: usize,
    pub problem: Problem,
    pub class: SymmetryClass,
    pub field: FieldSpec,
    pub dim_cochains: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_h1: usize,
    /// Cocycles completing a coboundary basis to a cocycle basis.
    pub representatives: Vec<Cochain>,
    /// Shapes (rows, cols) of the `0→1` and `1→2` matrices.
    pub shape_d0: (usize, usize),
    pub shape_d1: (usize, usize),
    pub elapsed: Duration,
}

impl CohomologyReport {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dim_cocycles, self.dim_coboundaries, self.dim_h1)
    }

    /// JSON form; wall-clock time is included only on request so that
    /// default output is reproducible byte for byte.
    pub fn to_json_value(&self, timing: bool) -> Value {
        let mut v = json!({
            "algebra": self.algebra,
            "n": self.n,
            "dim": self.dim,
            "problem": self.problem,
            "class": self.class,
            "field": self.field,
            "degree": 1,
            "dim_cochains": self.dim_cochains,
            "dim_cocycles": self.dim_cocycles,
            "dim_coboundaries": self.dim_coboundaries,
            "dim_h1": self.dim_h1,
            "representatives": self.representatives.iter().map(Cochain::to_json_value).collect::<Vec<_>>(),
            "matrices": {
                "d0": [self.shape_d0.0, self.shape_d0.1],
                "d1": [self.shape_d1.0, self.shape_d1.1],
            },
            "metadata": {
                "degree_convention": "a p-cochain takes p fundamental objects and one element",
                "lower_slots": self.n,
                "classical_degree": self.n,
            },
        });
        if timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

/// Rows of `δ` on 0-cochains restricted to `class`, and whether every
/// coboundary lies in that class.
fn coboundaries_in_class(alg: &NLeibnizAlgebra, problem: Problem, class: SymmetryClass) -> Result<(Vec<Row>, bool)> {
    let src = Layout::new(shape_for(alg, problem, 0, class))?;
    let target = Layout::new(shape_for(alg, problem, 1, class))?;
    let rows = stencil(alg, problem, &src, &target);
    if class == SymmetryClass::Unrestricted {
        return Ok((rows, true));
    }
    let ud = target.shape().upper_dim();
    let n = alg.n();
    let d = alg.dim();
    let mut s = Stencil::new(alg, problem, &src);
    let neg = |r: &Row| -> Row { r.iter().map(|(j, v)| (*j, -v)).collect() };
    for t in 0..pow(d, n) {
        let lower = unflat(t, d, n);
        let located = target.locate(&lower);
        for u in 0..ud {
            let row = s.row(&lower, u);
            let expect = match located {
                None => Vec::new(),
                Some((base, sign)) => {
                    let r = &rows[base + u];
                    if sign < 0 {
                        neg(r)
                    } else {
                        r.clone()
                    }
                }
            };
            if row != expect {
                return Ok((rows, false));
            }
        }
    }
    Ok((rows, true))
}

/// Spanning set of `δC^0 ∩ C^1_class`, in class coordinates, when coboundaries
/// may leave the class: solves `δx = E y` with `E` the class embedding.
fn coboundary_intersection(alg: &NLeibnizAlgebra, problem: Problem, class: SymmetryClass) -> Result<Vec<Vec<Scalar>>> {
    let field = alg.field();
    let src = Layout::new(shape_for(alg, problem, 0, class))?;
    let unres = Layout::new(shape_for(alg, problem, 1, SymmetryClass::Unrestricted))?;
    let target = Layout::new(shape_for(alg, problem, 1, class))?;
    let rows = stencil(alg, problem, &src, &unres);
    let nx = src.len();
    let mut space = RowSpace::new(field, nx + target.len());
    for (k, row) in rows.iter().enumerate() {
        let (lower, upper) = unres.storage_tuple(k);
        let mut r = row.clone();
        if let Some((base, sign)) = target.locate(&lower) {
            r.push((nx + base + upper, Scalar::from_i64(field, -sign)));
        }
        space.insert_sparse(&r)?;
    }
    Ok(space
        .kernel()
        .into_iter()
        .map(|v| v[nx..].to_vec())
        .collect())
}

fn normalize(v: Vec<Scalar>) -> Vec<Scalar> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v,
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|x| x * &inv).collect()
        }
    }
}

/// First cohomology `H¹` of `problem` restricted to `class`, over `field`.
///
/// Cocycles are class-`C` 1-cochains with `δα = 0`; coboundaries are
/// `δα⁰` for unrestricted 0-cochains, intersected with the class.
pub fn h1(alg: &NLeibnizAlgebra, problem: Problem, class: SymmetryClass, field: FieldSpec) -> Result<CohomologyReport> {
    let start = Instant::now();
    let alg = alg.to_field(field)?;
    let alg = &alg;

    let src = std::sync::Arc::new(Layout::new(shape_for(alg, problem, 1, class))?);
    let cocycle_eqs = cocycle_equations(alg, problem, &src)?;
    let cocycles = cocycle_eqs.kernel();

    let (d0, inside) = coboundaries_in_class(alg, problem, class)?;
    let d0_cols = Layout::new(shape_for(alg, problem, 0, class))?.len();
    let generators: Vec<Vec<Scalar>> = if inside {
        let m = ExactMatrix::from_sparse_rows(field, d0_cols, &d0)?;
        (0..d0_cols).map(|j| m.column(j)).collect()
    } else {
        coboundary_intersection(alg, problem, class)?
    };
    let mut cob = RowSpace::new(field, src.len());
    let mut cob_basis = Vec::new();
    for g in generators {
        if cob.insert(&g)? {
            cob_basis.push(g);
        }
    }
    let dim_cocycles = cocycles.len();
    let dim_coboundaries = cob.dim();
    let dim_h1 = dim_cocycles.checked_sub(dim_coboundaries).ok_or_else(|| {
        Error::TheoremViolation(format!(
            "{dim_coboundaries} coboundaries exceed {dim_cocycles} cocycles"
        ))
    })?;

    // Over Q the complement of the coboundaries inside the cocycles is taken
    // orthogonally, which is canonical; over F_p a greedy extension is used.
    let mut reps = Vec::new();
    if field.is_rational() {
        let mut eqs = cocycle_eqs.clone();
        for b in &cob_basis {
            eqs.insert(b)?;
        }
        reps = eqs.kernel();
    }
    if reps.len() != dim_h1 {
        reps.clear();
        let mut span = cob.clone();
        for z in &cocycles {
            if span.insert(z)? {
                reps.push(z.clone());
            }
        }
    }
    let representatives = reps
        .into_iter()
        .map(|v| Cochain::with_layout(src.clone(), field, normalize(v)))
        .collect::<Result<Vec<_>>>()?;

    Ok(CohomologyReport {
        algebra: alg.label(),
        n: alg.n(),
        dim: alg.dim(),
        problem,
        class,
        field,
        dim_cochains: src.len(),
        dim_cocycles,
        dim_coboundaries,
        dim_h1,
        representatives,
        shape_d0: (d0.len(), d0_cols),
        shape_d1: (Layout::new(natural_target(alg, src.shape()))?.len(), src.len()),
        elapsed: start.elapsed(),
    })
}

/// `H¹` computed modulo two primes; `agree` is the certification flag.
#[derive(Clone, Debug)]
pub struct TwoPrimeH1 {
    pub reports: [CohomologyReport; 2],
}

impl TwoPrimeH1 {
    pub fn agree(&self) -> bool {
        self.reports[0].dims() == self.reports[1].dims()
    }
}

pub fn h1_two_prime(
    alg: &NLeibnizAlgebra,
    problem: Problem,
    class: SymmetryClass,
    p1: u64,
    p2: u64,
) -> Result<TwoPrimeH1> {
    if p1 == p2 {
        return Err(Error::InvalidField("the two primes must differ".into()));
    }
    let a = h1(alg, problem, class, FieldSpec::prime(p1)?)?;
    let b = h1(alg, problem, class, FieldSpec::prime(p2)?)?;
    Ok(TwoPrimeH1 { reports: [a, b] })
}

/// Solves `δα⁰ = c` for an unrestricted 0-cochain; `None` if `c` is not a coboundary.
pub fn coboundary_preimage(alg: &NLeibnizAlgebra, problem: Problem, c: &Cochain) -> Result<Option<Cochain>> {
    check_cochain(alg, c)?;
    if c.degree() != 1 || c.valued() != problem.valued() {
        return Err(Error::WrongCochainKind(format!(
            "expected a degree-1 {}-valued cochain",
            problem.valued()
        )));
    }
    let field = alg.field();
    let unres = Layout::new(shape_for(alg, problem, 1, SymmetryClass::Unrestricted))?;
    let src_shape = shape_for(alg, problem, 0, SymmetryClass::Unrestricted);
    let src = Layout::new(src_shape)?;
    let rows = stencil(alg, problem, &src, &unres);
    // Augmented system [D0 | -c] x' = 0 with the last unknown pinned to 1.
    let nx = src.len();
    let mut space = RowSpace::new(field, nx + 1);
    for (k, row) in rows.iter().enumerate() {
        let (lower, upper) = unres.storage_tuple(k);
        let mut r = row.clone();
        let v = c.eval(&lower, upper);
        if !v.is_zero() {
            r.push((nx, -v));
        }
        space.insert_sparse(&r)?;
    }
    for v in space.kernel() {
        let last = &v[nx];
        if !last.is_zero() {
            let inv = last.inv().expect("nonzero");
            let x = v[..nx].iter().map(|a| a * &inv).collect();
            return Ok(Some(Cochain::from_storage(src_shape, field, x)?));
        }
    }
    Ok(None)
}
