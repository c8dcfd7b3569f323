use serde_json::{json, Map, Value};

use waring_core::binary::{decomposition_family, sylvester_analyze, sylvester_decompose, BinaryForm};
use waring_core::cert::{bgl_uniqueness_probe, lemma_v1_check, lemma_v2_split, verify_decomposition, Certificate};
use waring_core::classify::{
    case_c_family, classify_decomposition, ConicKind, Decomposition, Evidence, StructureCase,
};
use waring_core::examples::{build_case_a, build_case_b, build_case_c, build_example_i1};
use waring_core::fieldpoly::{parse_form_in, FieldSpec, Scalar};
use waring_core::oracle::{brute_rank, enumerate_s, OracleBudget};
use waring_core::veronese::{hilbert_defect, Hypersurface, VeroneseSpace};
use waring_core::Error;

use crate::codec;
use crate::CliError;

/// What a command hands back: the inputs echo, the result payload and
/// whether any certificate in it failed.
pub struct Outcome {
    pub field: FieldSpec,
    pub inputs: Value,
    pub result: Value,
    pub certified: bool,
}

impl Outcome {
    fn new(field: FieldSpec, inputs: Value, result: Value) -> Self {
        Outcome {
            field,
            inputs,
            result,
            certified: true,
        }
    }
}

/// A target given as a binary form, a form, or tensor coordinates.
pub enum TargetSpec {
    Binary(String),
    Form(String),
    Vector(String),
}

pub struct Target {
    pub space: VeroneseSpace,
    pub tensor: Vec<Scalar>,
    inputs: Value,
}

impl Target {
    pub fn resolve(spec: &TargetSpec, field: FieldSpec, declared: Option<(usize, u32)>) -> Result<Target, CliError> {
        let (space, tensor, inputs) = match spec {
            TargetSpec::Binary(text) => {
                let b = BinaryForm::parse(text, field)?;
                (b.space(), b.tensor().to_vec(), json!({"binary": text}))
            }
            TargetSpec::Form(text) => {
                let f = parse_form_in(text, field, declared.map(|s| s.0))?;
                let sp = VeroneseSpace::new(f.r(), f.degree())?;
                (sp, sp.form_to_vector(&f)?, json!({"form": text}))
            }
            TargetSpec::Vector(text) => {
                let (r, d) = declared.ok_or_else(|| CliError::input("--vector needs --space r d"))?;
                let sp = VeroneseSpace::new(r, d)?;
                let v = text
                    .split(',')
                    .map(|c| field.parse_scalar(c.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                if v.len() != sp.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: sp.dim(),
                        got: v.len(),
                    }
                    .into());
                }
                (sp, v, json!({"vector": text}))
            }
        };
        if let Some((r, d)) = declared {
            if (r, d) != (space.r, space.d) {
                return Err(CliError::input(format!(
                    "input lives in r={}, d={}, but --space says r={r}, d={d}",
                    space.r, space.d
                )));
            }
        }
        if tensor.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroForm.into());
        }
        Ok(Target { space, tensor, inputs })
    }

    fn echo(&self, extra: Value) -> Value {
        let mut m = match &self.inputs {
            Value::Object(m) => m.clone(),
            _ => Map::new(),
        };
        m.insert("space".into(), json!({"r": self.space.r, "d": self.space.d}));
        if let Value::Object(e) = extra {
            m.extend(e);
        }
        Value::Object(m)
    }

    fn binary(&self, field: FieldSpec) -> Result<Option<BinaryForm>, CliError> {
        if self.space.r != 1 {
            return Ok(None);
        }
        Ok(Some(BinaryForm::from_tensor(field, self.tensor.clone())?))
    }
}

fn budget_json(b: &OracleBudget) -> Value {
    json!({"max_points": b.max_points, "max_rank": b.max_rank, "max_subsets": b.max_subsets})
}

pub fn rank(field: FieldSpec, target: &Target, budget: &OracleBudget) -> Result<Outcome, CliError> {
    let inputs = target.echo(json!({"oracle_budget": budget_json(budget)}));
    let result = match target.binary(field)? {
        Some(b) => {
            let a = sylvester_analyze(&b)?;
            json!({
                "rank": a.rank,
                "method": "sylvester",
                "border_rank": a.border_rank,
                "geometric_rank": a.geometric_rank,
            })
        }
        None => {
            let s = brute_rank(&target.tensor, target.space, field, budget)?;
            json!({"rank": s, "method": "oracle"})
        }
    };
    Ok(Outcome::new(field, inputs, result))
}

fn certified_list(decs: &[Decomposition]) -> (Value, bool) {
    let mut all = true;
    let list = decs
        .iter()
        .map(|d| {
            let c = verify_decomposition(d);
            all &= c.valid;
            json!({"decomposition": codec::decomposition(d), "certificate": codec::certificate(&c)})
        })
        .collect();
    (Value::Array(list), all)
}

pub fn decompose(field: FieldSpec, target: &Target, budget: &OracleBudget, count: usize) -> Result<Outcome, CliError> {
    let inputs = target.echo(json!({"oracle_budget": budget_json(budget), "count": count}));
    let (method, rank, decs) = match target.binary(field)? {
        Some(b) => {
            let e = sylvester_decompose(&b)?;
            let dec = Decomposition::new(target.space, target.tensor.clone(), e.nodes, e.weights)?;
            ("sylvester", dec.len(), vec![dec])
        }
        None => {
            let s = brute_rank(&target.tensor, target.space, field, budget)?;
            let sets = enumerate_s(&target.tensor, s, target.space, field, budget)?;
            let decs = sets
                .into_iter()
                .take(count.max(1))
                .map(|a| Decomposition::from_points(target.tensor.clone(), a, target.space))
                .collect::<Result<Vec<_>, _>>()?;
            ("oracle", s, decs)
        }
    };
    let (list, ok) = certified_list(&decs);
    let mut out = Outcome::new(field, inputs, json!({"method": method, "rank": rank, "decompositions": list}));
    out.certified = ok;
    Ok(out)
}

fn evidence(e: &Evidence) -> Value {
    json!({
        "size": e.size,
        "d": e.d,
        "line_threshold": e.line_threshold,
        "conic_threshold": e.conic_threshold,
        "heavy_lines": e.heavy_lines,
        "smooth_heavy_conics": e.smooth_heavy_conics,
        "curve_points": e.curve_points,
        "splice_rank": e.splice_rank,
        "splice_family_dim": e.splice_family_dim,
        "splice_intersection_dim": e.splice_intersection_dim,
    })
}

fn structure(case: &StructureCase) -> Value {
    let base = |pts: [waring_core::fieldpoly::ProjPoint; 2]| Value::Array(pts.iter().map(codec::point).collect());
    match case {
        StructureCase::CaseA {
            line,
            on_curve,
            residual,
            splice,
        } => json!({
            "line": base(line.base()),
            "on_curve": codec::points(on_curve),
            "residual": codec::points(residual),
            "splice": codec::scalars(splice.tensor()),
        }),
        StructureCase::CaseB {
            conic,
            on_curve,
            residual,
            splice,
        } => json!({
            "conic": {
                "plane": Value::Array(conic.plane().iter().map(codec::point).collect()),
                "equation": codec::form(conic.equation()),
                "smooth": matches!(conic.kind(), ConicKind::Smooth),
            },
            "on_curve": codec::points(on_curve),
            "residual": codec::points(residual),
            "splice": codec::scalars(splice.tensor()),
        }),
        StructureCase::CaseC {
            l1,
            l2,
            node,
            residual,
        } => json!({
            "l1": base(l1.base()),
            "l2": base(l2.base()),
            "node": codec::point(node),
            "residual": codec::points(residual),
        }),
        StructureCase::UniqueWitness | StructureCase::Unknown => json!({}),
    }
}

fn decomposition_inputs(path: &str, dec: &Decomposition) -> Value {
    json!({"input": path, "space": {"r": dec.space.r, "d": dec.space.d}, "size": dec.len()})
}

pub fn classify(path: &str, dec: &Decomposition) -> Result<Outcome, CliError> {
    let report = classify_decomposition(dec)?;
    let result = json!({
        "case": report.case.label(),
        "in_regime": dec.in_regime(),
        "evidence": evidence(&report.evidence),
        "structure": structure(&report.case),
    });
    Ok(Outcome::new(dec.field(), decomposition_inputs(path, dec), result))
}

pub fn family(path: &str, dec: &Decomposition, count: usize, seed: u64) -> Result<Outcome, CliError> {
    let mut inputs = decomposition_inputs(path, dec);
    inputs["count"] = json!(count);
    inputs["seed"] = json!(seed);
    let cert = verify_decomposition(dec);
    if !cert.valid {
        return Err(CliError::Certificate(format!(
            "input decomposition failed: {}",
            cert.failures().join("; ")
        )));
    }
    let (case, members) = if dec.space.r == 1 {
        let b = BinaryForm::from_tensor(dec.field(), dec.target.clone())?;
        let fam = decomposition_family(&b, count, seed)?
            .into_iter()
            .map(|e| Decomposition::new(dec.space, dec.target.clone(), e.nodes, e.weights))
            .collect::<Result<Vec<_>, _>>()?;
        ("binary", fam)
    } else {
        let report = classify_decomposition(dec)?;
        let fam = match report.case {
            StructureCase::CaseC { .. } => case_c_family(dec, &report, count, seed)?,
            _ => waring_core::classify::generate_family(dec, &report, count, seed)?,
        };
        (report.case.label(), fam)
    };
    let (list, ok) = certified_list(&members);
    let mut out = Outcome::new(
        dec.field(),
        inputs,
        json!({"case": case, "count": members.len(), "decompositions": list}),
    );
    out.certified = ok;
    Ok(out)
}

pub enum CertifyMode {
    Single { bgl: bool },
    Pair { hypersurface: Option<String> },
}

fn named(name: &str, c: &Certificate) -> (String, Value) {
    (name.to_string(), codec::certificate(c))
}

pub fn certify(
    paths: &[String],
    decs: &[Decomposition],
    mode: &CertifyMode,
    budget: &OracleBudget,
) -> Result<Outcome, CliError> {
    let field = decs[0].field();
    let mut certs: Vec<(String, Value)> = Vec::new();
    let mut ok = true;
    let mut extra = Map::new();
    let mut inputs = json!({"inputs": paths});
    for (i, d) in decs.iter().enumerate() {
        let c = verify_decomposition(d);
        ok &= c.valid;
        certs.push(named(&format!("decomposition_{i}"), &c));
    }
    match mode {
        CertifyMode::Single { bgl } => {
            inputs["bgl"] = json!(bgl);
            if *bgl && ok {
                inputs["oracle_budget"] = budget_json(budget);
                let c = bgl_uniqueness_probe(&decs[0], budget)?;
                ok &= c.valid;
                certs.push(named("uniqueness_probe", &c));
            }
        }
        CertifyMode::Pair { hypersurface } => {
            let (a, b) = (&decs[0], &decs[1]);
            if a.field() != b.field() || a.space != b.space {
                return Err(CliError::input("the two decompositions live in different spaces"));
            }
            if ok {
                let union = a.points.union(&b.points);
                extra.insert("union_size".into(), json!(union.len()));
                extra.insert("defect".into(), json!(hilbert_defect(&union, a.d())));
                let c = lemma_v1_check(a, b)?;
                ok &= c.valid;
                certs.push(named("lemma_v1", &c));
                if let Some(text) = hypersurface {
                    inputs["hypersurface"] = json!(text);
                    let eq = parse_form_in(text, field, Some(a.space.r))?;
                    let c = lemma_v2_split(a, b, &Hypersurface::new(eq))?;
                    ok &= c.valid;
                    certs.push(named("lemma_v2", &c));
                }
            }
        }
    }
    extra.insert("valid".into(), json!(ok));
    extra.insert("certificates".into(), Value::Object(certs.into_iter().collect()));
    let mut out = Outcome::new(field, inputs, Value::Object(extra));
    out.certified = ok;
    Ok(out)
}

pub fn oracle(field: FieldSpec, target: &Target, budget: &OracleBudget, size: Option<usize>) -> Result<Outcome, CliError> {
    let inputs = target.echo(json!({"oracle_budget": budget_json(budget), "size": size}));
    let (s, rank) = match size {
        Some(s) => (s, None),
        None => {
            let s = brute_rank(&target.tensor, target.space, field, budget)?;
            (s, Some(s))
        }
    };
    let sets = enumerate_s(&target.tensor, s, target.space, field, budget)?;
    let decs = sets
        .into_iter()
        .map(|a| Decomposition::from_points(target.tensor.clone(), a, target.space))
        .collect::<Result<Vec<_>, _>>()?;
    let list: Vec<Value> = decs.iter().map(codec::decomposition).collect();
    let result = json!({"rank": rank, "size": s, "count": decs.len(), "decompositions": list});
    Ok(Outcome::new(field, inputs, result))
}

pub fn example_i1(field: FieldSpec, degree: u32, seed: u64) -> Result<Outcome, CliError> {
    let inputs = json!({"degree": degree, "seed": seed});
    let ex = build_example_i1(degree, field, seed)?;
    let v1 = lemma_v1_check(&ex.first, &ex.second)?;
    let first = verify_decomposition(&ex.first);
    let second = verify_decomposition(&ex.second);
    let ok = v1.valid && first.valid && second.valid;
    let result = json!({
        "cubic": codec::form(&ex.cubic),
        "curve_points": ex.curve_points,
        "first": codec::decomposition(&ex.first),
        "second": codec::decomposition(&ex.second),
        "in_curve_count": ex.in_curve_count(),
        "in_curve": ex.in_curve.iter().map(codec::points).collect::<Vec<_>>(),
        "attempts": ex.attempts,
        "off_curve_trials": ex.off_curve_trials,
        "off_curve_hits": ex.off_curve_hits,
        "certificates": {
            "first": codec::certificate(&first),
            "second": codec::certificate(&second),
            "lemma_v1": codec::certificate(&v1),
        },
    });
    let mut out = Outcome::new(field, inputs, result);
    out.certified = ok;
    Ok(out)
}

pub struct BuildArgs {
    pub case: String,
    pub degree: u32,
    pub r: usize,
    pub curve_count: Option<usize>,
    pub off_count: usize,
    pub seed: u64,
}

pub fn build(field: FieldSpec, a: &BuildArgs) -> Result<Outcome, CliError> {
    let inputs = json!({
        "case": a.case,
        "degree": a.degree,
        "r": a.r,
        "curve_count": a.curve_count,
        "off_count": a.off_count,
        "seed": a.seed,
    });
    let d = a.degree as usize;
    let (_, dec) = match a.case.as_str() {
        "A" | "a" => build_case_a(a.degree, a.r, a.curve_count.unwrap_or(d), a.off_count, field, a.seed)?,
        "B" | "b" => build_case_b(a.degree, a.r, a.curve_count.unwrap_or(d + 1), a.off_count, field, a.seed)?,
        "C" | "c" => build_case_c(a.degree, a.r, field, a.seed)?,
        other => return Err(CliError::input(format!("unknown case `{other}`, expected A, B or C"))),
    };
    let cert = verify_decomposition(&dec);
    let result = json!({
        "case": classify_decomposition(&dec)?.case.label(),
        "decomposition": codec::decomposition(&dec),
        "certificate": codec::certificate(&cert),
    });
    let mut out = Outcome::new(field, inputs, result);
    out.certified = cert.valid;
    Ok(out)
}
