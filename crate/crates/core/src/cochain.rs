//! Cochains: multilinear maps of `p` fundamental objects and one element,
//! stored in a layout determined by their symmetry class.
//!
//! A `p`-cochain has `p(n-1)+1` lower slots. Skewsymmetric slot groups are
//! stored once per strictly increasing index combination; every other tuple
//! is recovered by a permutation sign (or is zero on a repeated index).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::index::{combinations, flat, pow, unflat};
use crate::linalg::{FieldSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryClass {
    Unrestricted,
    /// Skewsymmetric inside each fundamental-object block.
    FirstSkew,
    /// Totally skewsymmetric in all lower slots.
    FullSkew,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 3] = [
        SymmetryClass::Unrestricted,
        SymmetryClass::FirstSkew,
        SymmetryClass::FullSkew,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryClass::Unrestricted => "unrestricted",
            SymmetryClass::FirstSkew => "first-skew",
            SymmetryClass::FullSkew => "full-skew",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SymmetryClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown symmetry class {s:?}")))
    }
}

/// Whether a cochain takes values in the algebra (deformations) or in the
/// ground field (central extensions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Valued {
    Algebra,
    Scalar,
}

impl fmt::Display for Valued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Valued::Algebra => "algebra",
            Valued::Scalar => "scalar",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CochainShape {
    pub n: usize,
    pub dim: usize,
    pub degree: usize,
    pub valued: Valued,
    pub class: SymmetryClass,
}

impl CochainShape {
    /// Number of lower slots, `p(n-1)+1`.
    pub fn slots(&self) -> usize {
        self.degree * (self.n - 1) + 1
    }

    pub fn upper_dim(&self) -> usize {
        match self.valued {
            Valued::Algebra => self.dim,
            Valued::Scalar => 1,
        }
    }

    /// Slot groups as `(length, skew)` pairs, left to right.
    fn groups(&self) -> Vec<(usize, bool)> {
        let m = self.n - 1;
        match self.class {
            SymmetryClass::Unrestricted => vec![(1, false); self.slots()],
            SymmetryClass::FirstSkew => {
                let mut g = vec![(m, true); self.degree];
                g.push((1, false));
                g
            }
            SymmetryClass::FullSkew => vec![(self.slots(), true)],
        }
    }
}

#[derive(Debug)]
struct Group {
    len: usize,
    skew: bool,
    stride: usize,
}

/// Rank lookup for strictly increasing `k`-tuples.
#[derive(Debug)]
struct Combos {
    list: Vec<Vec<usize>>,
    rank: Vec<usize>,
}

impl Combos {
    fn new(d: usize, k: usize) -> Combos {
        let list = combinations(d, k);
        let mut rank = vec![usize::MAX; pow(d, k)];
        for (r, c) in list.iter().enumerate() {
            rank[flat(c, d)] = r;
        }
        Combos { list, rank }
    }
}

#[derive(Debug)]
pub(crate) struct Layout {
    shape: CochainShape,
    groups: Vec<Group>,
    combos: BTreeMap<usize, Combos>,
    len: usize,
}

impl Layout {
    pub(crate) fn new(shape: CochainShape) -> Result<Layout> {
        if shape.n < 2 {
            return Err(Error::InvalidAlgebra(format!("arity {} < 2", shape.n)));
        }
        let d = shape.dim;
        let raw = shape.groups();
        let mut combos = BTreeMap::new();
        for &(len, skew) in &raw {
            if skew {
                combos.entry(len).or_insert_with(|| Combos::new(d, len));
            }
        }
        let counts: Vec<usize> = raw
            .iter()
            .map(|&(len, skew)| if skew { combos[&len].list.len() } else { d })
            .collect();
        let mut groups = Vec::with_capacity(raw.len());
        let mut stride = 1;
        for (i, &(len, skew)) in raw.iter().enumerate().rev() {
            groups.push(Group {
                len,
                skew,
                stride,
            });
            stride *= counts[i];
        }
        groups.reverse();
        Ok(Layout {
            shape,
            groups,
            combos,
            len: stride * shape.upper_dim(),
        })
    }

    pub(crate) fn shape(&self) -> CochainShape {
        self.shape
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    /// Storage offset (before adding the upper index) and sign for a lower
    /// tuple, or `None` when a skew group repeats an index.
    pub(crate) fn locate(&self, lower: &[usize]) -> Option<(usize, i64)> {
        debug_assert_eq!(lower.len(), self.shape.slots());
        let d = self.shape.dim;
        let mut pos = 0;
        let mut base = 0;
        let mut sign = 1;
        let mut buf = [0usize; 16];
        for g in &self.groups {
            let part = &lower[pos..pos + g.len];
            pos += g.len;
            let r = if g.skew {
                assert!(g.len <= buf.len(), "skew group too long");
                let tmp = &mut buf[..g.len];
                tmp.copy_from_slice(part);
                for i in 1..tmp.len() {
                    let mut j = i;
                    while j > 0 && tmp[j - 1] > tmp[j] {
                        tmp.swap(j - 1, j);
                        sign = -sign;
                        j -= 1;
                    }
                }
                if tmp.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
                self.combos[&g.len].rank[flat(tmp, d)]
            } else {
                part[0]
            };
            base += r * g.stride;
        }
        Some((base * self.shape.upper_dim(), sign))
    }

    /// Canonical lower tuple and upper index (0 for scalar-valued) of storage slot `k`.
    pub(crate) fn storage_tuple(&self, k: usize) -> (Vec<usize>, usize) {
        let ud = self.shape.upper_dim();
        let upper = k % ud;
        let mut rest = k / ud;
        let mut lower = Vec::with_capacity(self.shape.slots());
        for g in &self.groups {
            let r = rest / g.stride;
            rest %= g.stride;
            if g.skew {
                lower.extend_from_slice(&self.combos[&g.len].list[r]);
            } else {
                lower.push(r);
            }
        }
        (lower, upper)
    }
}

/// A `p`-cochain with an exactly enforced symmetry class.
#[derive(Clone, Debug)]
pub struct Cochain {
    layout: Arc<Layout>,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Cochain) -> bool {
        self.layout.shape == other.layout.shape && self.field == other.field && self.data == other.data
    }
}

impl Eq for Cochain {}

impl Cochain {
    pub fn zero(shape: CochainShape, field: FieldSpec) -> Result<Cochain> {
        let layout = Arc::new(Layout::new(shape)?);
        let data = vec![Scalar::zero(field); layout.len()];
        Ok(Cochain { layout, field, data })
    }

    /// Wraps a storage vector laid out as [`Cochain::storage_tuple`] describes.
    pub fn from_storage(shape: CochainShape, field: FieldSpec, data: Vec<Scalar>) -> Result<Cochain> {
        let layout = Arc::new(Layout::new(shape)?);
        Cochain::with_layout(layout, field, data)
    }

    pub(crate) fn with_layout(layout: Arc<Layout>, field: FieldSpec, data: Vec<Scalar>) -> Result<Cochain> {
        if data.len() != layout.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a cochain space of dimension {}",
                data.len(),
                layout.len()
            )));
        }
        if let Some(x) = data.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch { left: field, right: x.field() });
        }
        Ok(Cochain { layout, field, data })
    }

    /// Builds a cochain from its values on every lower tuple, verifying that
    /// they respect the declared class.
    pub fn from_fn(
        shape: CochainShape,
        field: FieldSpec,
        mut f: impl FnMut(&[usize], usize) -> Scalar,
    ) -> Result<Cochain> {
        let layout = Arc::new(Layout::new(shape)?);
        let data = (0..layout.len())
            .map(|k| {
                let (lower, upper) = layout.storage_tuple(k);
                f(&lower, upper)
            })
            .collect();
        let c = Cochain::with_layout(layout, field, data)?;
        let slots = shape.slots();
        let d = shape.dim;
        for t in 0..pow(d, slots) {
            let lower = unflat(t, d, slots);
            for u in 0..shape.upper_dim() {
                if f(&lower, u) != c.eval(&lower, u) {
                    return Err(Error::SymmetryViolation(format!(
                        "value at lower {:?}, upper {} breaks {} symmetry",
                        one_based(&lower),
                        u + 1,
                        shape.class
                    )));
                }
            }
        }
        Ok(c)
    }

    /// The standard basis of the cochain space, in storage order.
    pub fn basis(shape: CochainShape, field: FieldSpec) -> Result<Vec<Cochain>> {
        let layout = Arc::new(Layout::new(shape)?);
        Ok((0..layout.len())
            .map(|k| {
                let mut data = vec![Scalar::zero(field); layout.len()];
                data[k] = Scalar::one(field);
                Cochain { layout: layout.clone(), field, data }
            })
            .collect())
    }

    pub fn shape(&self) -> CochainShape {
        self.layout.shape
    }

    pub fn degree(&self) -> usize {
        self.layout.shape.degree
    }

    pub fn valued(&self) -> Valued {
        self.layout.shape.valued
    }

    pub fn class(&self) -> SymmetryClass {
        self.layout.shape.class
    }

    pub fn n(&self) -> usize {
        self.layout.shape.n
    }

    pub fn dim(&self) -> usize {
        self.layout.shape.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Dimension of the cochain space this cochain lives in.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn storage(&self) -> &[Scalar] {
        &self.data
    }

    pub(crate) fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn storage_tuple(&self, k: usize) -> (Vec<usize>, usize) {
        self.layout.storage_tuple(k)
    }

    /// Value at an arbitrary lower tuple; `upper` is ignored for scalar-valued cochains.
    pub fn eval(&self, lower: &[usize], upper: usize) -> Scalar {
        assert_eq!(lower.len(), self.layout.shape.slots(), "wrong number of lower indices");
        match self.layout.locate(lower) {
            None => Scalar::zero(self.field),
            Some((base, sign)) => {
                let u = if self.valued() == Valued::Algebra { upper } else { 0 };
                let v = &self.data[base + u];
                if sign < 0 {
                    -v
                } else {
                    v.clone()
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Re-stores the same multilinear map in another class; fails if the map
    /// does not have that symmetry.
    pub fn to_class(&self, class: SymmetryClass) -> Result<Cochain> {
        if class == self.class() {
            return Ok(self.clone());
        }
        let shape = CochainShape { class, ..self.shape() };
        let layout = Arc::new(Layout::new(shape)?);
        let data = (0..layout.len())
            .map(|k| {
                let (lower, upper) = layout.storage_tuple(k);
                self.eval(&lower, upper)
            })
            .collect();
        let out = Cochain { layout, field: self.field, data };
        for k in 0..self.len() {
            let (lower, upper) = self.storage_tuple(k);
            if out.eval(&lower, upper) != self.data[k] {
                return Err(Error::SymmetryViolation(format!(
                    "cochain is not {class} at lower {:?}",
                    one_based(&lower)
                )));
            }
        }
        Ok(out)
    }

    pub fn has_class(&self, class: SymmetryClass) -> bool {
        self.to_class(class).is_ok()
    }

    pub fn to_field(&self, field: FieldSpec) -> Result<Cochain> {
        let data = self
            .data
            .iter()
            .map(|x| x.to_field(field))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cochain { layout: self.layout.clone(), field, data })
    }

    pub fn scale(&self, k: &Scalar) -> Cochain {
        Cochain {
            layout: self.layout.clone(),
            field: self.field,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn checked_add(&self, other: &Cochain) -> Result<Cochain> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch("adding cochains of different shapes".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cochain { layout: self.layout.clone(), field: self.field, data })
    }

    pub fn checked_sub(&self, other: &Cochain) -> Result<Cochain> {
        self.checked_add(&other.scale(&Scalar::from_i64(other.field, -1)))
    }

    /// Nonzero stored coefficients as `(lower, upper, value)`, 0-based.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| {
                let (lower, upper) = self.storage_tuple(k);
                (lower, upper, v)
            })
            .collect()
    }
}

#[derive(Deserialize)]
struct EntryJson {
    lower: Vec<usize>,
    #[serde(default)]
    upper: Option<usize>,
    value: String,
}

#[derive(Deserialize)]
struct CochainJson {
    n: usize,
    dim: usize,
    field: FieldSpec,
    degree: usize,
    valued: Valued,
    class: SymmetryClass,
    entries: Vec<EntryJson>,
    #[serde(default)]
    #[allow(dead_code)]
    metadata: Map<String, Value>,
}

impl Cochain {
    /// JSON form listing the nonzero stored coefficients with 1-based indices.
    pub fn to_json_value(&self) -> Value {
        let entries: Vec<Value> = self
            .nonzero_entries()
            .into_iter()
            .map(|(lower, upper, v)| {
                let mut e = json!({ "lower": one_based(&lower) });
                if self.valued() == Valued::Algebra {
                    e["upper"] = json!(upper + 1);
                }
                e["value"] = json!(v.to_string());
                e
            })
            .collect();
        let slots = self.shape().slots();
        json!({
            "n": self.n(),
            "dim": self.dim(),
            "field": self.field,
            "degree": self.degree(),
            "valued": self.valued(),
            "class": self.class(),
            "entries": entries,
            "metadata": { "lower_slots": slots, "classical_degree": slots },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("cochain serializes")
    }

    /// Parses the JSON form. Entries may sit on any index tuple; they are
    /// mapped onto the stored representative, and contradictory entries are
    /// rejected as symmetry violations.
    pub fn from_json(s: &str) -> Result<Cochain> {
        let doc: CochainJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let shape = CochainShape {
            n: doc.n,
            dim: doc.dim,
            degree: doc.degree,
            valued: doc.valued,
            class: doc.class,
        };
        let layout = Arc::new(Layout::new(shape)?);
        let field = doc.field;
        let mut data = vec![Scalar::zero(field); layout.len()];
        let mut seen = vec![false; layout.len()];
        for e in &doc.entries {
            if e.lower.len() != shape.slots() {
                return Err(Error::ArityMismatch { expected: shape.slots(), got: e.lower.len() });
            }
            if e.lower.iter().any(|&i| i == 0 || i > doc.dim) {
                return Err(Error::Parse(format!("lower index out of range in {:?}", e.lower)));
            }
            let upper = match (doc.valued, e.upper) {
                (Valued::Algebra, Some(u)) if u >= 1 && u <= doc.dim => u - 1,
                (Valued::Scalar, None) => 0,
                _ => return Err(Error::Parse(format!("bad upper index for entry {:?}", e.lower))),
            };
            let lower: Vec<usize> = e.lower.iter().map(|i| i - 1).collect();
            let v = Scalar::parse(field, &e.value)?;
            match layout.locate(&lower) {
                None if v.is_zero() => {}
                None => {
                    return Err(Error::SymmetryViolation(format!(
                        "nonzero value on repeated skew index {:?}",
                        e.lower
                    )))
                }
                Some((base, sign)) => {
                    let v = if sign < 0 { -v } else { v };
                    let k = base + upper;
                    if seen[k] && data[k] != v {
                        return Err(Error::SymmetryViolation(format!(
                            "entry {:?} contradicts an earlier one",
                            e.lower
                        )));
                    }
                    seen[k] = true;
                    data[k] = v;
                }
            }
        }
        Cochain::with_layout(layout, field, data)
    }
}

pub(crate) fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

/// Ordered basis of `p`-cochains for an algebra of arity `n` and dimension `dim`.
pub fn cochain_basis(
    n: usize,
    dim: usize,
    degree: usize,
    valued: Valued,
    class: SymmetryClass,
    field: FieldSpec,
) -> Result<Vec<Cochain>> {
    Cochain::basis(CochainShape { n, dim, degree, valued, class }, field)
}
