//! JSON wire formats. Keys come out sorted, and scalars are written as
//! canonical strings, so identical inputs serialize byte for byte identically.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};
use crate::krawtchouk::{KrawtchoukTable, Params, ParamsError};
use crate::leonard::{Classification, ClassifyError};
use crate::linalg::{LinalgError, Matrix};
use crate::module::{BasisTag, ModuleRealization};
use crate::sl2::Sl2Element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("missing key {0:?}")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

pub fn field_to_json(f: FieldSpec) -> Value {
    match f.modulus() {
        None => json!({ "kind": "rational" }),
        Some(q) => json!({ "kind": "prime", "modulus": q }),
    }
}

pub fn field_from_json(v: &Value) -> Result<FieldSpec, JsonError> {
    if let Some(s) = v.as_str() {
        return Ok(s.parse()?);
    }
    match v.get("kind").and_then(Value::as_str) {
        Some("rational") => Ok(FieldSpec::rational()),
        Some("prime") => {
            let q = v
                .get("modulus")
                .and_then(Value::as_u64)
                .ok_or(JsonError::Missing("modulus"))?;
            Ok(FieldSpec::prime(q)?)
        }
        _ => Err(JsonError::Invalid(format!("unrecognized field {v}"))),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

pub fn scalar_from_json(v: &Value, f: FieldSpec) -> Result<Scalar, JsonError> {
    match v {
        Value::String(s) => Ok(f.parse_scalar(s)?),
        Value::Number(n) => Ok(f.parse_scalar(&n.to_string())?),
        _ => Err(JsonError::Invalid(format!("expected a scalar, got {v}"))),
    }
}

pub fn scalars_to_json(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(scalar_to_json).collect())
}

pub fn scalars_from_json(v: &Value, f: FieldSpec) -> Result<Vec<Scalar>, JsonError> {
    v.as_array()
        .ok_or_else(|| JsonError::Invalid("expected an array of scalars".into()))?
        .iter()
        .map(|x| scalar_from_json(x, f))
        .collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    json!({
        "field": field_to_json(m.field()),
        "n": m.n(),
        "entries": m.rows().iter().map(|r| scalars_to_json(r)).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix, JsonError> {
    let f = field_from_json(v.get("field").ok_or(JsonError::Missing("field"))?)?;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or(JsonError::Missing("entries"))?;
    let rows = entries
        .iter()
        .map(|r| scalars_from_json(r, f))
        .collect::<Result<Vec<_>, _>>()?;
    let m = Matrix::from_rows(f, rows)?;
    if let Some(n) = v.get("n") {
        if n.as_u64() != Some(m.n() as u64) {
            return Err(JsonError::Invalid(format!(
                "declared n = {n} but entries have order {}",
                m.n()
            )));
        }
    }
    Ok(m)
}

pub fn params_to_json(p: &Params) -> Value {
    json!({
        "N": p.n(),
        "p": scalar_to_json(p.p()),
        "field": field_to_json(p.field()),
    })
}

pub fn params_from_json(v: &Value) -> Result<Params, JsonError> {
    let f = field_from_json(v.get("field").ok_or(JsonError::Missing("field"))?)?;
    let n = v
        .get("N")
        .and_then(Value::as_i64)
        .ok_or(JsonError::Missing("N"))?;
    let p = scalar_from_json(v.get("p").ok_or(JsonError::Missing("p"))?, f)?;
    Ok(Params::new(n, p)?)
}

pub fn table_to_json(t: &KrawtchoukTable) -> Value {
    json!({
        "params": params_to_json(&t.params),
        "U": matrix_to_json(&t.u),
        "B": matrix_to_json(&t.b),
        "D": matrix_to_json(&t.d),
        "K": matrix_to_json(&t.k),
        "P": matrix_to_json(&t.p),
    })
}

pub fn element_to_json(y: &Sl2Element) -> Value {
    json!({ "coords": scalars_to_json(y.coords()) })
}

pub fn element_from_json(v: &Value, f: FieldSpec) -> Result<Sl2Element, JsonError> {
    let c = scalars_from_json(v.get("coords").ok_or(JsonError::Missing("coords"))?, f)?;
    let [b, a, g]: [Scalar; 3] = c
        .try_into()
        .map_err(|_| JsonError::Invalid("coords must have three entries".into()))?;
    Ok(Sl2Element::from_coords(b, a, g))
}

pub fn module_to_json(m: &ModuleRealization) -> Value {
    let mut rep = Map::new();
    for (k, x) in [
        ("e", &m.rep_e),
        ("h", &m.rep_h),
        ("f", &m.rep_f),
        ("e*", &m.rep_es),
        ("h*", &m.rep_hs),
        ("f*", &m.rep_fs),
    ] {
        rep.insert(k.into(), matrix_to_json(x));
    }
    let mut gram = Map::new();
    let mut transitions = Map::new();
    for x in BasisTag::ALL {
        for y in BasisTag::ALL {
            gram.insert(format!("{x},{y}"), matrix_to_json(&m.gram_matrix(x, y)));
            if x != y {
                transitions.insert(format!("{x}->{y}"), matrix_to_json(&m.transition(x, y)));
            }
        }
    }
    let mut operators = Map::new();
    for x in BasisTag::ALL {
        let (a, a_s) = m.operators_in(x);
        operators.insert(
            x.to_string(),
            json!({ "A": matrix_to_json(&a), "Astar": matrix_to_json(&a_s) }),
        );
    }
    json!({
        "params": params_to_json(&m.params),
        "rep": rep,
        "A": matrix_to_json(&m.a),
        "Astar": matrix_to_json(&m.a_star),
        "gram": gram,
        "transitions": transitions,
        "operators": operators,
    })
}

/// Input to the classifier: A, A* and optional eigenvalue sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyInput {
    pub a: Matrix,
    pub a_star: Matrix,
    pub theta: Option<Vec<Scalar>>,
    pub theta_star: Option<Vec<Scalar>>,
}

/// Accepts {"A", "Astar"} (also a module bundle), or a table bundle, read as
/// A = Bᵗ and A* = D.
pub fn classify_input_from_json(v: &Value) -> Result<ClassifyInput, JsonError> {
    let (a, a_star) = if let (Some(a), Some(s)) = (v.get("A"), v.get("Astar")) {
        (matrix_from_json(a)?, matrix_from_json(s)?)
    } else if let (Some(b), Some(d)) = (v.get("B"), v.get("D")) {
        (matrix_from_json(b)?.transpose(), matrix_from_json(d)?)
    } else {
        return Err(JsonError::Missing("A"));
    };
    let theta = v
        .get("theta")
        .map(|t| scalars_from_json(t, a.field()))
        .transpose()?;
    let theta_star = v
        .get("thetaStar")
        .map(|t| scalars_from_json(t, a.field()))
        .transpose()?;
    Ok(ClassifyInput {
        a,
        a_star,
        theta,
        theta_star,
    })
}

pub fn classification_to_json(c: &Classification) -> Value {
    let mut out = Map::new();
    out.insert("verdict".into(), json!(c.verdict.as_str()));
    if let Some(p) = &c.p {
        out.insert("p".into(), scalar_to_json(p));
    }
    if let Some(a) = &c.alpha1 {
        out.insert("alpha1".into(), scalar_to_json(a));
    }
    if let Some(a) = &c.alpha1_star {
        out.insert("alpha1Star".into(), scalar_to_json(a));
    }
    if let Some(sys) = &c.system {
        out.insert("theta".into(), scalars_to_json(&sys.theta));
        out.insert("thetaStar".into(), scalars_to_json(&sys.theta_star));
    }
    if let Some(iso) = &c.iso {
        out.insert("iso".into(), matrix_to_json(iso));
    }
    out.insert("failures".into(), json!([]));
    if !c.notes.is_empty() {
        out.insert("notes".into(), json!(c.notes));
    }
    Value::Object(out)
}

pub fn classify_error_to_json(e: &ClassifyError) -> Value {
    json!({
        "verdict": "not-leonard",
        "error": e.code(),
        "failures": [e.to_string()],
    })
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_formats() {
        assert_eq!(
            field_to_json(FieldSpec::rational()),
            json!({"kind": "rational"})
        );
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(field_to_json(f7), json!({"kind": "prime", "modulus": 7}));
        assert_eq!(field_from_json(&field_to_json(f7)).unwrap(), f7);
        assert!(field_from_json(&json!({"kind": "prime", "modulus": 9})).is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let f = FieldSpec::rational();
        let m = Matrix::from_ratios(f, &[&[(1, 2), (-3, 1)], &[(0, 1), (7, 5)]]).unwrap();
        let v = matrix_to_json(&m);
        assert_eq!(v["entries"][0], json!(["1/2", "-3"]));
        assert_eq!(matrix_from_json(&v).unwrap(), m);
        let bad = json!({"field": {"kind": "rational"}, "n": 2, "entries": [["1"]]});
        assert!(matrix_from_json(&bad).is_err());
    }

    #[test]
    fn table_bundle_is_deterministic() {
        let p = Params::parse(2, "1/2", FieldSpec::rational()).unwrap();
        let t = KrawtchoukTable::build(&p);
        let a = render(&table_to_json(&t));
        let b = render(&table_to_json(&KrawtchoukTable::build(&p)));
        assert_eq!(a, b);
        let v = parse(&a).unwrap();
        assert_eq!(
            v["U"]["entries"],
            json!([["1", "1", "1"], ["1", "0", "-1"], ["1", "-1", "1"]])
        );
        assert_eq!(params_from_json(&v["params"]).unwrap(), p);
        let input = classify_input_from_json(&v).unwrap();
        assert_eq!(input.a, t.b.transpose());
    }

    #[test]
    fn prime_table_uses_residues() {
        let f7 = FieldSpec::prime(7).unwrap();
        let p = Params::new(2, f7.from_i64(4)).unwrap();
        let v = table_to_json(&KrawtchoukTable::build(&p));
        // 4 ≡ 1/2 mod 7
        assert_eq!(
            v["U"]["entries"],
            json!([["1", "1", "1"], ["1", "0", "6"], ["1", "6", "1"]])
        );
    }

    #[test]
    fn element_round_trip() {
        let f = FieldSpec::rational();
        let y = Sl2Element::from_coords(f.from_i64(1), f.parse_scalar("-1/2").unwrap(), f.zero());
        assert_eq!(element_from_json(&element_to_json(&y), f).unwrap(), y);
    }
}
