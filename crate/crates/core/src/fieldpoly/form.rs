//! Homogeneous forms, their text grammar, and the monomial order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::scalar::{multinomial, FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Exponents of a monomial in `x0..xr`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// All exponent vectors of degree `d` in `nvars` variables, graded
/// lexicographic with `x0 > x1 > ...` (so `x0^d` comes first).
pub fn monomials(nvars: usize, d: u32) -> Vec<ExponentVector> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if nvars == 1 {
            prefix.push(d);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(nvars - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// A nonzero homogeneous form of degree `d` in `r + 1` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousForm {
    field: FieldSpec,
    r: usize,
    d: u32,
    coeffs: BTreeMap<ExponentVector, Scalar>,
}

impl HomogeneousForm {
    /// Collects terms, dropping zero coefficients and rejecting the zero form.
    pub fn new(
        field: FieldSpec,
        r: usize,
        terms: impl IntoIterator<Item = (ExponentVector, Scalar)>,
    ) -> Result<Self> {
        let mut coeffs: BTreeMap<ExponentVector, Scalar> = BTreeMap::new();
        let mut degree: Option<u32> = None;
        for (e, c) in terms {
            if e.0.len() != r + 1 {
                return Err(Error::DimensionMismatch {
                    expected: r + 1,
                    got: e.0.len(),
                });
            }
            let deg = e.degree();
            match degree {
                None => degree = Some(deg),
                Some(d0) if d0 != deg => return Err(Error::NotHomogeneous(d0, deg)),
                _ => {}
            }
            let slot = coeffs.entry(e).or_insert_with(|| field.zero());
            *slot = &*slot + &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let d = degree.ok_or(Error::ZeroForm)?;
        if coeffs.is_empty() {
            return Err(Error::ZeroForm);
        }
        if d == 0 {
            return Err(Error::Parse("forms must have degree at least 1".into()));
        }
        Ok(HomogeneousForm {
            field,
            r,
            d,
            coeffs,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeff(&self, e: &ExponentVector) -> Scalar {
        self.coeffs.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn evaluate(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.r + 1);
        let mut acc = self.field.zero();
        for (e, c) in &self.coeffs {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(&e.0) {
                if ei > 0 {
                    term = term * xi.pow(ei);
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Symmetric tensor coordinates in graded lex order: the coefficient of
    /// `x^α` divided by the multinomial coefficient of `α`. These are the
    /// coordinates in which `(a·x)^d` becomes the Veronese image of `a`.
    pub fn tensor_coordinates(&self) -> Result<Vec<Scalar>> {
        monomials(self.r + 1, self.d)
            .into_iter()
            .map(|e| {
                let c = self.coeff(&e);
                let m = self.field.from_bigint(&multinomial(&e.0));
                if m.is_zero() {
                    if c.is_zero() {
                        // Coordinate is undetermined by the polynomial; zero is a choice.
                        return Ok(self.field.zero());
                    }
                    return Err(Error::CharacteristicTooSmall {
                        p: self.field.characteristic(),
                        what: format!("multinomial of {:?} vanishes", e.0),
                    });
                }
                Ok(&c / &m)
            })
            .collect()
    }

    /// Inverse of [`Self::tensor_coordinates`].
    pub fn from_tensor(field: FieldSpec, r: usize, d: u32, tensor: &[Scalar]) -> Result<Self> {
        let mons = monomials(r + 1, d);
        if mons.len() != tensor.len() {
            return Err(Error::DimensionMismatch {
                expected: mons.len(),
                got: tensor.len(),
            });
        }
        let terms = mons.into_iter().zip(tensor).map(|(e, t)| {
            let m = field.from_bigint(&multinomial(&e.0));
            (e, t * &m)
        });
        HomogeneousForm::new(field, r, terms)
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in monomials(self.r + 1, self.d) {
            let Some(c) = self.coeffs.get(&e) else {
                continue;
            };
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() {
                factors.push(mag.to_string());
            }
            for (i, &ei) in e.0.iter().enumerate() {
                match ei {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{ei}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parses a form such as `x0^3 + 3*x0*x1^2`, inferring `r` from the largest
/// variable index.
pub fn parse_form(text: &str, field: FieldSpec) -> Result<HomogeneousForm> {
    parse_form_in(text, field, None)
}

/// Like [`parse_form`] with an explicit number of variables `r + 1`.
pub fn parse_form_in(text: &str, field: FieldSpec, r: Option<usize>) -> Result<HomogeneousForm> {
    let raw = parse_terms(text)?;
    let max_var = raw
        .iter()
        .flat_map(|t| t.vars.iter().map(|(i, _)| *i))
        .max();
    let r = match (r, max_var) {
        (Some(r), Some(m)) if m > r => {
            return Err(Error::Parse(format!("variable x{m} exceeds x{r}")))
        }
        (Some(r), _) => r,
        (None, Some(m)) => m,
        (None, None) => return Err(Error::Parse("no variables in form".into())),
    };
    let mut terms = Vec::with_capacity(raw.len());
    for t in raw {
        let mut exps = vec![0u32; r + 1];
        for (i, e) in t.vars {
            exps[i] += e;
        }
        let mut c = field.from_ratio(&t.num, &t.den)?;
        if t.negative {
            c = -c;
        }
        terms.push((ExponentVector(exps), c));
    }
    HomogeneousForm::new(field, r, terms)
}

struct RawTerm {
    negative: bool,
    num: BigInt,
    den: BigInt,
    vars: Vec<(usize, u32)>,
}

fn parse_terms(text: &str) -> Result<Vec<RawTerm>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty form".into()));
    }
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut negative = false;
    let mut cur = String::new();
    for (idx, ch) in s.chars().enumerate() {
        if ch == '+' || ch == '-' {
            if cur.is_empty() {
                if idx != 0 && chunks.is_empty() {
                    return Err(Error::Parse(format!("unexpected `{ch}`")));
                }
                if idx != 0 || !chunks.is_empty() {
                    return Err(Error::Parse(format!("dangling `{ch}`")));
                }
                negative = ch == '-';
                continue;
            }
            chunks.push((negative, std::mem::take(&mut cur)));
            negative = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse("form ends with an operator".into()));
    }
    chunks.push((negative, cur));
    chunks
        .into_iter()
        .map(|(neg, body)| parse_term(neg, &body))
        .collect()
}

fn parse_term(negative: bool, body: &str) -> Result<RawTerm> {
    let mut term = RawTerm {
        negative,
        num: BigInt::from(1),
        den: BigInt::from(1),
        vars: Vec::new(),
    };
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{body}`")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let i: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable `{factor}`")))?;
            let e: u32 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{factor}`")))?;
            term.vars.push((i, e));
        } else {
            let (n, d) = match factor.split_once('/') {
                Some((n, d)) => (n, d),
                None => (factor, "1"),
            };
            let n: BigInt = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{factor}`")))?;
            let d: BigInt = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{factor}`")))?;
            term.num *= n;
            term.den *= d;
        }
    }
    Ok(term)
}
