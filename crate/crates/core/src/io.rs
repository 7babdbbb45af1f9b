//! JSON encodings of the library's objects.
//!
//! * field: the descriptor string `"p"`, `"p^k"` or `"Q"`;
//! * element: an array of `k` integers in `[0, p)`, constant term first (a
//!   bare integer is accepted on input for prime fields, negative values
//!   are reduced); over `Q` a string `"n/d"` or an integer;
//! * point: `{"field", "coords"}`;
//! * cluster: `{"base", "field", "points": [{"coords", "mult"}]}`;
//! * surface: `{"field", "coeffs"}` with 20 coefficients in graded-lex
//!   order, or one of the names `"fermat"` and `"example1"`;
//! * plane: `{"field", "equation"}` with the four coefficients of its
//!   linear form;
//! * twisted cubic: `{"field", "phi", "quadrics"}`;
//! * Lemma 1 data: `{"O", "Oprime", "Pi"}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::birmaps::Lemma1Config;
use crate::cubic3::{CubicError, TwistedCubic};
use crate::fields::{FieldDesc, FieldElement, FieldError};
use crate::forms::{BinaryForm, CurveParam};
use crate::localsol::{LocalFieldDesc, SolubilityVerdict};
use crate::projgeom::{GeomError, LinearSubspace, PointCluster, ProjPoint};
use crate::surface::{CubicForm, SurfaceError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Shape(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Cubic(#[from] CubicError),
}

fn shape<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Shape(msg.into()))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, IoError> {
    v.get(key).ok_or_else(|| IoError::Shape(format!("missing key \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| IoError::Shape(format!("{what} must be an array")))
}

pub fn field_from_json(v: &Value) -> Result<FieldDesc, IoError> {
    match v {
        Value::String(s) => Ok(s.parse()?),
        Value::Number(n) => Ok(n.to_string().parse()?),
        _ => shape("field must be a string such as \"101\" or \"7^2\""),
    }
}

pub fn element_to_json(x: &FieldElement) -> Value {
    match x.coeffs() {
        Some(c) => json!(c),
        None => json!(x.as_rational().expect("rational element").to_string()),
    }
}

fn integer(v: &Value) -> Result<BigInt, IoError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| IoError::Shape(format!("{n} is not an integer"))),
        _ => shape("expected an integer"),
    }
}

pub fn element_from_json(v: &Value, field: &FieldDesc) -> Result<FieldElement, IoError> {
    if !field.is_finite() {
        let q = match v {
            Value::String(s) => s
                .parse::<BigRational>()
                .map_err(|_| IoError::Shape(format!("bad rational \"{s}\"")))?,
            Value::Number(_) => BigRational::from_integer(integer(v)?),
            _ => return shape("rational elements are strings \"n/d\" or integers"),
        };
        return Ok(FieldElement::rational(q));
    }
    let parts: Vec<BigInt> = match v {
        Value::Array(a) => a.iter().map(integer).collect::<Result<_, _>>()?,
        Value::Number(_) => vec![integer(v)?],
        _ => return shape("elements are integer arrays, constant term first"),
    };
    if parts.len() > field.degree() {
        return Err(FieldError::BadCoefficients {
            len: parts.len(),
            field: field.to_string(),
        }
        .into());
    }
    let g = field.generator();
    let mut acc = field.zero();
    let mut power = field.one();
    for c in &parts {
        acc = &acc + &(&field.from_bigint(c) * &power);
        power = &power * &g;
    }
    Ok(acc)
}

fn elements_from_json(v: &Value, field: &FieldDesc, len: usize, what: &str) -> Result<Vec<FieldElement>, IoError> {
    let a = array(v, what)?;
    if a.len() != len {
        return shape(format!("{what} must have {len} entries, found {}", a.len()));
    }
    a.iter().map(|x| element_from_json(x, field)).collect()
}

fn elements_to_json(xs: &[FieldElement]) -> Value {
    Value::Array(xs.iter().map(element_to_json).collect())
}

pub fn point_to_json(p: &ProjPoint) -> Value {
    json!({"field": p.field().to_string(), "coords": elements_to_json(p.coords())})
}

/// A point of `P^3`; `field` is used when the object has no `"field"` key.
pub fn point_from_json(v: &Value, field: Option<&FieldDesc>) -> Result<ProjPoint, IoError> {
    let field = match (v.get("field"), field) {
        (Some(f), _) => field_from_json(f)?,
        (None, Some(f)) => f.clone(),
        (None, None) => return shape("point without a field"),
    };
    let coords = elements_from_json(get(v, "coords")?, &field, 4, "coords")?;
    Ok(ProjPoint::new(coords)?)
}

pub fn cluster_to_json(c: &PointCluster) -> Value {
    let points: Vec<Value> = c
        .points()
        .iter()
        .map(|(p, m)| json!({"coords": elements_to_json(p.coords()), "mult": m}))
        .collect();
    json!({"base": c.base().to_string(), "field": c.field().to_string(), "points": points})
}

pub fn cluster_from_json(v: &Value) -> Result<PointCluster, IoError> {
    let base = field_from_json(get(v, "base")?)?;
    let field = match v.get("field") {
        Some(f) => field_from_json(f)?,
        None => base.clone(),
    };
    let mut pts = Vec::new();
    for entry in array(get(v, "points")?, "points")? {
        let coords = elements_from_json(get(entry, "coords")?, &field, 4, "coords")?;
        let mult = match entry.get("mult") {
            Some(m) => m.as_u64().ok_or_else(|| IoError::Shape("mult must be a positive integer".into()))? as usize,
            None => 1,
        };
        if mult == 0 {
            return shape("mult must be a positive integer");
        }
        pts.push((ProjPoint::new(coords)?, mult));
    }
    Ok(PointCluster::new(&base, pts)?)
}

pub fn surface_to_json(f: &CubicForm) -> Value {
    json!({"field": f.field().to_string(), "coeffs": elements_to_json(f.coeffs())})
}

/// A named surface over `field`.
pub fn named_surface(name: &str, field: &FieldDesc) -> Result<CubicForm, IoError> {
    match name {
        "fermat" => Ok(CubicForm::fermat(field)),
        "example1" => Ok(CubicForm::example1(field)?),
        other => shape(format!("unknown surface \"{other}\" (expected fermat or example1)")),
    }
}

pub fn surface_from_json(v: &Value) -> Result<CubicForm, IoError> {
    let field = field_from_json(get(v, "field")?)?;
    let coeffs = elements_from_json(get(v, "coeffs")?, &field, 20, "coeffs")?;
    Ok(CubicForm::new(&field, coeffs)?)
}

pub fn plane_to_json(pi: &LinearSubspace) -> Value {
    let eq = &pi.equations()[0];
    json!({"field": pi.field().to_string(), "equation": elements_to_json(eq)})
}

pub fn plane_from_json(v: &Value) -> Result<LinearSubspace, IoError> {
    let field = field_from_json(get(v, "field")?)?;
    let eq = elements_from_json(get(v, "equation")?, &field, 4, "equation")?;
    if eq.iter().all(|c| c.is_zero()) {
        return shape("plane equation is zero");
    }
    Ok(LinearSubspace::from_equations(&field, 3, vec![eq]))
}

pub fn config_to_json(cfg: &Lemma1Config) -> Value {
    json!({
        "O": point_to_json(cfg.o()),
        "Oprime": point_to_json(cfg.o_prime()),
        "Pi": plane_to_json(cfg.pi()),
    })
}

pub fn config_from_json(v: &Value) -> Result<Lemma1Config, IoError> {
    let pi = plane_from_json(get(v, "Pi")?)?;
    let o = point_from_json(get(v, "O")?, Some(pi.field()))?;
    let o_prime = point_from_json(get(v, "Oprime")?, Some(pi.field()))?;
    Lemma1Config::new(o, o_prime, pi).map_err(|u| IoError::Shape(u.to_string()))
}

pub fn cubic_to_json(t: &TwistedCubic) -> Value {
    let phi: Vec<Value> = t.phi().forms().iter().map(|f| elements_to_json(f.coeffs())).collect();
    let quadrics: Vec<Value> = t.quadrics().iter().map(|q| elements_to_json(q)).collect();
    json!({"field": t.field().to_string(), "phi": phi, "quadrics": quadrics})
}

/// Read a curve; the stored quadrics, when present, must match `phi`.
pub fn cubic_from_json(v: &Value) -> Result<TwistedCubic, IoError> {
    let field = field_from_json(get(v, "field")?)?;
    let forms = array(get(v, "phi")?, "phi")?
        .iter()
        .map(|f| Ok(BinaryForm::new(&field, elements_from_json(f, &field, 4, "phi entry")?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    if forms.len() != 4 {
        return shape("phi must have four forms");
    }
    let t = TwistedCubic::from_phi(CurveParam::new(forms))?;
    if let Some(q) = v.get("quadrics") {
        let stored = array(q, "quadrics")?
            .iter()
            .map(|row| elements_from_json(row, &field, 10, "quadric"))
            .collect::<Result<Vec<_>, _>>()?;
        if stored != t.quadrics() {
            return shape("quadrics do not match phi");
        }
    }
    Ok(t)
}

pub fn local_field_to_json(k: &LocalFieldDesc) -> Value {
    json!({"p": k.p(), "e": k.e(), "f": k.f(), "zeta": element_to_json(k.zeta())})
}

pub fn verdict_to_json(k: &LocalFieldDesc, v: &SolubilityVerdict) -> Value {
    match v {
        SolubilityVerdict::Soluble { state, active, witness } => json!({
            "field": local_field_to_json(k),
            "verdict": "Soluble",
            "state": {"v": state.v, "u": elements_to_json(&state.u)},
            "active": active,
            "witness": elements_to_json(witness),
        }),
        SolubilityVerdict::Insoluble { trace } => json!({
            "field": local_field_to_json(k),
            "verdict": "Insoluble",
            "trace": trace.iter().map(|s| json!(s.v)).collect::<Vec<_>>(),
            "units": trace.first().map(|s| elements_to_json(&s.u)),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic3::through6;
    use crate::fields::make_extension;
    use crate::surface::sample_cluster;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn elements_roundtrip() {
        let f = make_extension(7, 2).unwrap();
        let x = &f.generator() + &f.from_i64(3);
        assert_eq!(element_to_json(&x), json!([3, 1]));
        assert_eq!(element_from_json(&json!([3, 1]), &f).unwrap(), x);
        assert_eq!(element_from_json(&json!(-1), &f).unwrap(), f.from_i64(6));
        let q = FieldDesc::rationals();
        let r = element_from_json(&json!("-3/6"), &q).unwrap();
        assert_eq!(element_to_json(&r), json!("-1/2"));
    }

    #[test]
    fn cluster_roundtrip() {
        let f = make_extension(101, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = sample_cluster(&x, &[2, 1], &mut rng).unwrap();
        let back = cluster_from_json(&cluster_to_json(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn cubic_roundtrip() {
        let f = make_extension(101, 1).unwrap();
        let pts: Vec<ProjPoint> = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1], [1, 2, 4, 8]]
            .iter()
            .map(|c| ProjPoint::from_i64(&f, c).unwrap())
            .collect();
        let t = through6(&pts).unwrap();
        let back = cubic_from_json(&cubic_to_json(&t)).unwrap();
        assert_eq!(back.quadrics(), t.quadrics());
        assert_eq!(back.phi(), t.phi());
    }

    #[test]
    fn surfaces_and_planes() {
        let f = make_extension(101, 1).unwrap();
        let x = named_surface("fermat", &f).unwrap();
        assert_eq!(surface_from_json(&surface_to_json(&x)).unwrap(), x);
        assert!(named_surface("nope", &f).is_err());
        let pi = plane_from_json(&json!({"field": "101", "equation": [1, 0, 0, 0]})).unwrap();
        assert_eq!(plane_from_json(&plane_to_json(&pi)).unwrap(), pi);
    }
}
