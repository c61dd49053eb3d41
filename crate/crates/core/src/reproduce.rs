//! Case matrices for the rigidity and central-extension theorems and the
//! Whitehead-type cross-check, with deterministic reports.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{direct_sum, simple_filippov, NLeibnizAlgebra, SignatureVector};
use crate::cochain::{Cochain, SymmetryClass};
use crate::cohomology::{h1, h1_two_prime, Problem};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, DEFAULT_PRIMES};

/// Largest `n` the case matrices are built for.
pub const MAX_N: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Deformations in the first-skew class: `H¹ = 0` except `n = 3`.
    Rigidity,
    /// Central extensions in the first-skew class: `H¹ = 0`.
    Central,
    /// Fully skewsymmetric deformations: `H¹ = 0`.
    Whitehead,
}

impl Theorem {
    pub fn id(self) -> &'static str {
        match self {
            Theorem::Rigidity => "1",
            Theorem::Central => "2",
            Theorem::Whitehead => "whitehead",
        }
    }

    pub fn problem(self) -> Problem {
        match self {
            Theorem::Central => Problem::Central,
            _ => Problem::Deformation,
        }
    }

    pub fn class(self) -> SymmetryClass {
        match self {
            Theorem::Whitehead => SymmetryClass::FullSkew,
            _ => SymmetryClass::FirstSkew,
        }
    }

    /// Expected `dim H¹` for a simple FA of arity `n`.
    pub fn expected(self, n: usize) -> usize {
        match self {
            Theorem::Rigidity if n == 3 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Theorem> {
        match s {
            "1" => Ok(Theorem::Rigidity),
            "2" => Ok(Theorem::Central),
            "whitehead" => Ok(Theorem::Whitehead),
            _ => Err(Error::Parse(format!("unknown theorem {s:?}; expected 1, 2 or whitehead"))),
        }
    }
}

/// How a case chooses its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldPolicy {
    /// Rationals for `d ≤ 5`, two default primes above.
    Auto,
    Fixed(FieldSpec),
    TwoPrime(u64, u64),
}

impl FieldPolicy {
    fn resolve(self, dim: usize) -> FieldPolicy {
        match self {
            FieldPolicy::Auto if dim <= 5 => FieldPolicy::Fixed(FieldSpec::Rational),
            FieldPolicy::Auto => FieldPolicy::TwoPrime(DEFAULT_PRIMES.0, DEFAULT_PRIMES.1),
            other => other,
        }
    }
}

impl fmt::Display for FieldPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldPolicy::Auto => f.write_str("auto"),
            FieldPolicy::Fixed(k) => write!(f, "{k}"),
            FieldPolicy::TwoPrime(p, q) => write!(f, "mod:{p}+mod:{q}"),
        }
    }
}

/// One algebra to run through one theorem.
#[derive(Clone, Debug)]
pub struct Case {
    pub n: usize,
    /// Signature string, or the algebra name when the algebra is not a single simple FA.
    pub signature: String,
    pub algebra: NLeibnizAlgebra,
    pub expected: usize,
}

fn simple_case(theorem: Theorem, n: usize, eps: &SignatureVector) -> Result<Case> {
    Ok(Case {
        n,
        signature: eps.to_string(),
        algebra: simple_filippov(n, eps)?,
        expected: theorem.expected(n),
    })
}

/// Signatures run for arity `n`: all of them, or the Euclidean one and one mixed one.
pub fn signatures(n: usize, all: bool) -> Vec<SignatureVector> {
    let d = n + 1;
    if all {
        return SignatureVector::all(d);
    }
    let mut mixed = vec![1; d];
    mixed[d - 1] = -1;
    vec![SignatureVector::euclidean(d), SignatureVector::new(mixed).expect("valid signs")]
}

/// The cases of `theorem` for a single arity. For `n = 2` and the deformation
/// theorems, the semisimple algebra `so(3)⊕so(3)` is included.
pub fn cases_for(theorem: Theorem, n: usize, all_signatures: bool) -> Result<Vec<Case>> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::Unsupported(format!("n = {n}; supported range is 2..={MAX_N}")));
    }
    let mut out = signatures(n, all_signatures)
        .iter()
        .map(|eps| simple_case(theorem, n, eps))
        .collect::<Result<Vec<_>>>()?;
    if n == 2 && theorem != Theorem::Central {
        let so3 = simple_filippov(2, &SignatureVector::euclidean(3))?;
        let sum = direct_sum(&so3, &so3)?;
        out.push(Case {
            n,
            signature: sum.label(),
            algebra: sum,
            expected: 0,
        });
    }
    Ok(out)
}

/// Cases of `theorem` for every `n` in `2..=max_n`.
pub fn cases(theorem: Theorem, max_n: usize, all_signatures: bool) -> Result<Vec<Case>> {
    if max_n < 2 {
        return Err(Error::Unsupported(format!("max n = {max_n}; need at least 2")));
    }
    let mut out = Vec::new();
    for n in 2..=max_n {
        out.extend(cases_for(theorem, n, all_signatures)?);
    }
    Ok(out)
}

/// Outcome of one case.
#[derive(Clone, Debug)]
pub struct CaseRow {
    pub n: usize,
    pub signature: String,
    pub algebra: String,
    pub problem: Problem,
    pub class: SymmetryClass,
    pub field: String,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_h1: usize,
    pub expected: usize,
    pub pass: bool,
    /// Set when the two-prime dimensions disagree.
    pub note: Option<String>,
    pub representatives: Vec<Cochain>,
    pub shape_d0: (usize, usize),
    pub shape_d1: (usize, usize),
    pub elapsed: Duration,
}

impl CaseRow {
    pub fn to_json_value(&self, timing: bool) -> Value {
        let mut v = json!({
            "n": self.n,
            "signature": self.signature,
            "algebra": self.algebra,
            "problem": self.problem,
            "class": self.class,
            "field": self.field,
            "dim_cocycles": self.dim_cocycles,
            "dim_coboundaries": self.dim_coboundaries,
            "dim_h1": self.dim_h1,
            "expected": self.expected,
            "pass": self.pass,
            "matrices": {
                "d0": [self.shape_d0.0, self.shape_d0.1],
                "d1": [self.shape_d1.0, self.shape_d1.1],
            },
        });
        if !self.representatives.is_empty() {
            v["representatives"] = self.representatives.iter().map(Cochain::to_json_value).collect();
        }
        if let Some(note) = &self.note {
            v["note"] = json!(note);
        }
        if timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

/// Runs one case under a field policy.
pub fn run_case(theorem: Theorem, case: &Case, field: FieldPolicy) -> Result<CaseRow> {
    let start = Instant::now();
    let (problem, class) = (theorem.problem(), theorem.class());
    let (report, field_label, note) = match field.resolve(case.algebra.dim()) {
        FieldPolicy::TwoPrime(p, q) => {
            let two = h1_two_prime(&case.algebra, problem, class, p, q)?;
            let note = (!two.agree()).then(|| {
                let [a, b] = &two.reports;
                format!("mod:{p} gives {:?}, mod:{q} gives {:?}", a.dims(), b.dims())
            });
            let [a, _] = two.reports;
            (a, format!("mod:{p}+mod:{q}"), note)
        }
        FieldPolicy::Fixed(k) => (h1(&case.algebra, problem, class, k)?, k.to_string(), None),
        FieldPolicy::Auto => unreachable!("resolved above"),
    };
    Ok(CaseRow {
        n: case.n,
        signature: case.signature.clone(),
        algebra: case.algebra.label(),
        problem,
        class,
        field: field_label,
        dim_cocycles: report.dim_cocycles,
        dim_coboundaries: report.dim_coboundaries,
        dim_h1: report.dim_h1,
        expected: case.expected,
        pass: note.is_none() && report.dim_h1 == case.expected,
        note,
        representatives: report.representatives,
        shape_d0: report.shape_d0,
        shape_d1: report.shape_d1,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub rows: Vec<CaseRow>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json_value(&self, timing: bool) -> Value {
        json!({
            "theorem": self.theorem.id(),
            "problem": self.theorem.problem(),
            "class": self.theorem.class(),
            "rows": self.rows.iter().map(|r| r.to_json_value(timing)).collect::<Vec<_>>(),
            "verdict": if self.pass() { "PASS" } else { "FAIL" },
        })
    }

    /// Fixed-width table, one line per case, then the verdict.
    pub fn table(&self, timing: bool) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{:<3} {:<16} {:<12} {:<10} {:<22} {:>6} {:>6} {:>4} {:>4}  result",
            "n", "algebra", "problem", "class", "field", "Z1", "B1", "H1", "exp"
        );
        if timing {
            s.push_str("   time_ms");
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(
                s,
                "{:<3} {:<16} {:<12} {:<10} {:<22} {:>6} {:>6} {:>4} {:>4}  {}",
                r.n,
                r.algebra,
                r.problem.as_str(),
                r.class.as_str(),
                r.field,
                r.dim_cocycles,
                r.dim_coboundaries,
                r.dim_h1,
                r.expected,
                if r.pass { "PASS" } else { "FAIL" }
            );
            if timing {
                let _ = write!(s, "  {:>8.1}", r.elapsed.as_secs_f64() * 1e3);
            }
            s.push('\n');
            if let Some(note) = &r.note {
                let _ = writeln!(s, "    {note}");
            }
        }
        let _ = writeln!(
            s,
            "theorem {}: {}",
            self.theorem,
            if self.pass() { "PASS" } else { "FAIL" }
        );
        s
    }
}

/// Runs `cases` on at most `threads` worker threads (all cores when `None`);
/// rows come back in case order.
pub fn run_cases(theorem: Theorem, cases: &[Case], field: FieldPolicy, threads: Option<usize>) -> Result<TheoremReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        cases
            .par_iter()
            .map(|c| run_case(theorem, c, field))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(TheoremReport { theorem, rows })
}

/// Builds and runs the case matrix of `theorem` up to `max_n`.
pub fn reproduce(
    theorem: Theorem,
    max_n: usize,
    all_signatures: bool,
    field: FieldPolicy,
    threads: Option<usize>,
) -> Result<TheoremReport> {
    let cases = cases(theorem, max_n, all_signatures)?;
    run_cases(theorem, &cases, field, threads)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_counts() {
        assert_eq!(cases(Theorem::Rigidity, 4, true).unwrap().len(), 8 + 1 + 16 + 32);
        assert_eq!(cases(Theorem::Central, 3, false).unwrap().len(), 4);
        assert!(cases_for(Theorem::Rigidity, 6, false).is_err());
        assert_eq!("whitehead".parse::<Theorem>().unwrap(), Theorem::Whitehead);
    }

    #[test]
    fn small_report_is_deterministic() {
        let a = reproduce(Theorem::Rigidity, 3, false, FieldPolicy::Auto, Some(2)).unwrap();
        let b = reproduce(Theorem::Rigidity, 3, false, FieldPolicy::Auto, Some(1)).unwrap();
        assert!(a.pass());
        assert_eq!(a.to_json_value(false), b.to_json_value(false));
        assert_eq!(a.table(false), b.table(false));
        let n3: Vec<_> = a.rows.iter().filter(|r| r.n == 3).collect();
        assert!(n3.iter().all(|r| r.dim_h1 == 1 && r.representatives.len() == 1));
    }

    #[test]
    fn two_prime_policy() {
        let c = cases_for(Theorem::Central, 3, false).unwrap();
        let r = run_case(Theorem::Central, &c[0], FieldPolicy::TwoPrime(1_000_003, 1_000_033)).unwrap();
        assert!(r.pass);
        assert_eq!(r.field, "mod:1000003+mod:1000033");
    }
}
