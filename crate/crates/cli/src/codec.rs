//! JSON codec for fields, scalars, points, forms and decompositions.
//!
//! Scalars travel as strings so that rationals and large residues survive
//! the round trip; integers are accepted on input.

use serde_json::{json, Map, Value};

use waring_core::cert::Certificate;
use waring_core::classify::Decomposition;
use waring_core::fieldpoly::{ExponentVector, FieldSpec, HomogeneousForm, PointSet, ProjPoint, Scalar};
use waring_core::veronese::VeroneseSpace;

use crate::CliError;

pub fn field(f: FieldSpec) -> Value {
    match f {
        FieldSpec::Prime(p) => json!({"kind": "prime", "p": p}),
        FieldSpec::Rational => json!({"kind": "rational"}),
    }
}

pub fn parse_field(v: &Value) -> Result<FieldSpec, CliError> {
    match v.get("kind").and_then(Value::as_str) {
        Some("rational") => Ok(FieldSpec::Rational),
        Some("prime") => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::input("prime field needs an integer `p`"))?;
            Ok(FieldSpec::prime(p)?)
        }
        _ => Err(CliError::input("field must be {\"kind\":\"prime\",\"p\":..} or {\"kind\":\"rational\"}")),
    }
}

pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn parse_scalar(f: FieldSpec, v: &Value) -> Result<Scalar, CliError> {
    match v {
        Value::String(s) => Ok(f.parse_scalar(s)?),
        Value::Number(n) => Ok(f.parse_scalar(&n.to_string())?),
        _ => Err(CliError::input(format!("expected a scalar, got {v}"))),
    }
}

fn parse_scalars(f: FieldSpec, v: &Value, what: &str) -> Result<Vec<Scalar>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::input(format!("`{what}` must be an array")))?
        .iter()
        .map(|x| parse_scalar(f, x))
        .collect()
}

pub fn point(p: &ProjPoint) -> Value {
    scalars(p.coords())
}

pub fn points(a: &PointSet) -> Value {
    Value::Array(a.iter().map(point).collect())
}

pub fn form(f: &HomogeneousForm) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(e, c)| json!({"exps": e.0, "coeff": c.to_string()}))
        .collect();
    json!({
        "degree": f.degree(),
        "vars": f.r() + 1,
        "terms": terms,
        "text": f.to_string(),
    })
}

pub fn parse_form(fs: FieldSpec, v: &Value) -> Result<HomogeneousForm, CliError> {
    let vars = v
        .get("vars")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::input("form needs `vars`"))? as usize;
    if vars < 2 {
        return Err(CliError::input("forms need at least two variables"));
    }
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("form needs a `terms` array"))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let exps = t
            .get("exps")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::input("term needs `exps`"))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| CliError::input("exponents must be small non-negative integers"))
            })
            .collect::<Result<Vec<u32>, _>>()?;
        let coeff = parse_scalar(fs, t.get("coeff").ok_or_else(|| CliError::input("term needs `coeff`"))?)?;
        out.push((ExponentVector(exps), coeff));
    }
    Ok(HomogeneousForm::new(fs, vars - 1, out)?)
}

fn space(s: VeroneseSpace) -> Value {
    json!({"r": s.r, "d": s.d})
}

pub fn decomposition(dec: &Decomposition) -> Value {
    let f = dec.field();
    let mut m = Map::new();
    m.insert("field".into(), field(f));
    m.insert("space".into(), space(dec.space));
    m.insert("target".into(), scalars(&dec.target));
    if let Ok(g) = HomogeneousForm::from_tensor(f, dec.space.r, dec.space.d, &dec.target) {
        m.insert("form".into(), form(&g));
    }
    m.insert("size".into(), json!(dec.len()));
    m.insert("points".into(), points(&dec.points));
    m.insert("weights".into(), scalars(&dec.weights));
    Value::Object(m)
}

/// Reads a decomposition. `target` wins over `form`; missing weights are
/// solved for, listed weights are kept as given.
pub fn parse_decomposition(v: &Value) -> Result<Decomposition, CliError> {
    let f = parse_field(v.get("field").ok_or_else(|| CliError::input("missing `field`"))?)?;
    let sp = v.get("space").ok_or_else(|| CliError::input("missing `space`"))?;
    let r = sp.get("r").and_then(Value::as_u64);
    let d = sp.get("d").and_then(Value::as_u64);
    let (Some(r), Some(d)) = (r, d) else {
        return Err(CliError::input("`space` needs integer `r` and `d`"));
    };
    let d = u32::try_from(d).map_err(|_| CliError::input("degree out of range"))?;
    let space = VeroneseSpace::new(r as usize, d)?;
    let target = match (v.get("target"), v.get("form")) {
        (Some(t), _) => parse_scalars(f, t, "target")?,
        (None, Some(g)) => {
            let g = parse_form(f, g)?;
            if g.r() != space.r || g.degree() != space.d {
                return Err(CliError::input("`form` does not match `space`"));
            }
            space.form_to_vector(&g)?
        }
        (None, None) => return Err(CliError::input("need `target` or `form`")),
    };
    let raw = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("missing `points` array"))?
        .iter()
        .map(|p| {
            let coords = parse_scalars(f, p, "point")?;
            if coords.len() != space.r + 1 {
                return Err(CliError::input(format!(
                    "point has {} coordinates, expected {}",
                    coords.len(),
                    space.r + 1
                )));
            }
            Ok(coords)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let Some(listed) = v.get("weights") else {
        let pts = raw.iter().map(|c| ProjPoint::normalize(c)).collect::<Result<Vec<_>, _>>()?;
        return Ok(Decomposition::from_points(target, distinct(pts)?, space)?);
    };
    let listed = parse_scalars(f, listed, "weights")?;
    if listed.len() != raw.len() {
        return Err(CliError::input("`weights` and `points` differ in length"));
    }
    // A weight w on the raw vector c·a becomes w·c^d on the representative a.
    let mut pairs = Vec::with_capacity(raw.len());
    for (coords, w) in raw.iter().zip(listed) {
        let p = ProjPoint::normalize(coords)?;
        let lead = coords.iter().find(|x| !x.is_zero()).expect("normalized above");
        pairs.push((p, w * lead.pow(space.d)));
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (pts, weights): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(Decomposition::new(space, target, distinct(pts)?, weights)?)
}

fn distinct(pts: Vec<ProjPoint>) -> Result<PointSet, CliError> {
    let n = pts.len();
    let set = PointSet::new(pts);
    if set.len() != n {
        return Err(CliError::input("points must be distinct"));
    }
    Ok(set)
}

pub fn certificate(c: &Certificate) -> Value {
    let checks: Vec<Value> = c
        .checks
        .iter()
        .map(|k| json!({"name": k.name, "passed": k.passed, "detail": k.detail}))
        .collect();
    json!({"valid": c.valid, "checks": checks})
}
