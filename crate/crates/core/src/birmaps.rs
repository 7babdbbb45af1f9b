//! The birational maps between symmetric powers of a cubic surface `X`.
//!
//! * [`lemma2_forward`] / [`lemma2_backward`]: `X^(2) ⇢ X × P^2`. A pair
//!   `B` spans a line meeting `X` in a third point `E` and the fixed plane
//!   `Π` in a point `M`; conversely the line `EM` cuts `X` in `E + B`.
//! * [`lemma1_forward`] / [`lemma1_backward`]: `X^(2) × X^(4) ⇢
//!   X^(2) × X^(3) × P^2`. The six points `B ∪ D` fix a twisted cubic `T`,
//!   which meets `X` in a further cluster `C` and the plane `OB₁B₂` in a
//!   further point `A`; `A` is recorded by its projection `A'` from `O'`
//!   onto `Π`.
//! * [`theorem_roundtrip`]: Lemma 2 backwards followed by Lemma 1
//!   forwards, checked by running the reverse chain.
//!
//! Every map is only defined on an open set. Leaving it is reported as
//! [`Undefined`] with a [`Reason`], never as a panic.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::cubic3::{self, CubicError, TwistedCubic};
use crate::fields::{FieldDesc, FieldElement};
use crate::forms::BinaryForm;
use crate::projgeom::{self, LinearSubspace, PointCluster, ProjPoint};
use crate::surface::{self, CubicForm, Intersection, SurfaceError};

/// Why a map is undefined at an input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reason {
    NotGeneralPosition,
    NotTransversal,
    VertexDegenerate,
    ResidualCollision,
    LineInSurface,
    OnSurfaceConflict,
    ClusterNotStable,
}

impl Reason {
    pub const ALL: [Reason; 7] = [
        Reason::NotGeneralPosition,
        Reason::NotTransversal,
        Reason::VertexDegenerate,
        Reason::ResidualCollision,
        Reason::LineInSurface,
        Reason::OnSurfaceConflict,
        Reason::ClusterNotStable,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::NotGeneralPosition => "NotGeneralPosition",
            Reason::NotTransversal => "NotTransversal",
            Reason::VertexDegenerate => "VertexDegenerate",
            Reason::ResidualCollision => "ResidualCollision",
            Reason::LineInSurface => "LineInSurface",
            Reason::OnSurfaceConflict => "OnSurfaceConflict",
            Reason::ClusterNotStable => "ClusterNotStable",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An input outside the domain of a map.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason}: {detail}")]
pub struct Undefined {
    pub reason: Reason,
    pub detail: String,
}

fn undef<T>(reason: Reason, detail: impl Into<String>) -> Result<T, Undefined> {
    Err(Undefined {
        reason,
        detail: detail.into(),
    })
}

/// Result of applying a partially defined map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapOutcome<T> {
    Defined(T),
    Undefined(Undefined),
}

impl<T> From<Result<T, Undefined>> for MapOutcome<T> {
    fn from(r: Result<T, Undefined>) -> Self {
        match r {
            Ok(v) => MapOutcome::Defined(v),
            Err(u) => MapOutcome::Undefined(u),
        }
    }
}

impl<T> MapOutcome<T> {
    pub fn is_defined(&self) -> bool {
        matches!(self, MapOutcome::Defined(_))
    }
}

fn geom_failure(reason: Reason) -> impl Fn(projgeom::GeomError) -> Undefined {
    move |e| Undefined {
        reason,
        detail: e.to_string(),
    }
}

/// The fixed data of Lemma 1: points `O`, `O'` and the plane `Π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Config {
    o: ProjPoint,
    o_prime: ProjPoint,
    pi: LinearSubspace,
}

impl Lemma1Config {
    pub fn new(o: ProjPoint, o_prime: ProjPoint, pi: LinearSubspace) -> Result<Lemma1Config, Undefined> {
        if pi.dim() != 2 || pi.ambient() != 3 {
            return undef(Reason::VertexDegenerate, "Π is not a plane in P^3");
        }
        if o.dim() != 3 || o_prime.dim() != 3 {
            return undef(Reason::VertexDegenerate, "O and O' must lie in P^3");
        }
        if o == o_prime {
            return undef(Reason::VertexDegenerate, "O = O'");
        }
        if pi.contains(&o) || pi.contains(&o_prime) {
            return undef(Reason::VertexDegenerate, "O or O' lies on Π");
        }
        let base = pi.field();
        if o.descend(base).is_none() || o_prime.descend(base).is_none() {
            return undef(Reason::ClusterNotStable, "O and O' must be rational over the field of Π");
        }
        Ok(Lemma1Config { o, o_prime, pi })
    }

    /// Random rational data satisfying the invariants.
    pub fn random<R: Rng + ?Sized>(field: &FieldDesc, rng: &mut R) -> Lemma1Config {
        loop {
            let pi = random_plane(field, rng);
            let o = ProjPoint::random(field, 3, rng);
            let o_prime = ProjPoint::random(field, 3, rng);
            if let Ok(cfg) = Lemma1Config::new(o, o_prime, pi) {
                return cfg;
            }
        }
    }

    pub fn o(&self) -> &ProjPoint {
        &self.o
    }

    pub fn o_prime(&self) -> &ProjPoint {
        &self.o_prime
    }

    pub fn pi(&self) -> &LinearSubspace {
        &self.pi
    }
}

/// A uniformly random rational plane of `P^3`.
pub fn random_plane<R: Rng + ?Sized>(field: &FieldDesc, rng: &mut R) -> LinearSubspace {
    let eq = ProjPoint::random(field, 3, rng);
    LinearSubspace::from_equations(field, 3, vec![eq.coords().to_vec()])
}

/// A uniformly random rational point of a flat.
pub fn random_point_on<R: Rng + ?Sized>(flat: &LinearSubspace, rng: &mut R) -> ProjPoint {
    let field = flat.field();
    loop {
        let weights: Vec<FieldElement> = flat.basis().iter().map(|_| field.random(rng)).collect();
        let coords: Vec<FieldElement> = (0..=flat.ambient())
            .map(|j| {
                flat.basis()
                    .iter()
                    .zip(&weights)
                    .fold(field.zero(), |acc, (row, w)| &acc + &(&row[j] * w))
            })
            .collect();
        if let Ok(p) = ProjPoint::new(coords) {
            return p;
        }
    }
}

fn check_cluster(f: &CubicForm, c: &PointCluster, degree: usize, name: &str) -> Result<(), Undefined> {
    if c.base() != f.field() || !c.frobenius_stable() {
        return undef(Reason::ClusterNotStable, format!("{name} is not stable over {}", f.field()));
    }
    if c.degree() != degree {
        return undef(Reason::NotGeneralPosition, format!("{name} has degree {} instead of {degree}", c.degree()));
    }
    if !c.is_reduced() {
        return undef(Reason::NotGeneralPosition, format!("{name} has a repeated point"));
    }
    for p in c.support() {
        if !surface::eval_zero(f, &p).unwrap_or(false) {
            return undef(Reason::OnSurfaceConflict, format!("a point of {name} is not on X"));
        }
    }
    Ok(())
}

fn rational_point(p: &ProjPoint, base: &FieldDesc, name: &str) -> Result<ProjPoint, Undefined> {
    let p = surface::minimal_point(p, base);
    if p.field() != base {
        return undef(Reason::ClusterNotStable, format!("{name} is not rational"));
    }
    Ok(p)
}

/// `B ↦ (E, M)`: the third point of `X` on the line of `B`, and where that
/// line meets `Π`.
pub fn lemma2_forward(
    f: &CubicForm,
    pi: &LinearSubspace,
    b: &PointCluster,
) -> Result<(ProjPoint, ProjPoint), Undefined> {
    check_cluster(f, b, 2, "B")?;
    let base = f.field();
    let line = b.rational_span().map_err(geom_failure(Reason::ClusterNotStable))?;
    if line.is_contained_in(pi) {
        return undef(Reason::VertexDegenerate, "the line of B lies in Π");
    }
    let e = match surface::third_point(f, &line, b) {
        Ok(e) => e,
        Err(SurfaceError::CurveInSurface) => return undef(Reason::LineInSurface, "the line of B lies in X"),
        Err(err) => return undef(Reason::ResidualCollision, err.to_string()),
    };
    let e = rational_point(&e, base, "E")?;
    if b.multiplicity(&e) > 0 {
        return undef(Reason::ResidualCollision, "the line of B is tangent to X at a point of B");
    }
    let m = projgeom::meet(&line, pi)
        .map_err(geom_failure(Reason::VertexDegenerate))?
        .as_point()
        .ok_or(Undefined {
            reason: Reason::VertexDegenerate,
            detail: "the line of B does not meet Π in one point".into(),
        })?;
    let m = rational_point(&m, base, "M")?;
    if e == m {
        return undef(Reason::VertexDegenerate, "the residual point E lies on Π");
    }
    Ok((e, m))
}

/// `(E, M) ↦ B`: the residual pair of the line `EM` on `X`.
pub fn lemma2_backward(
    f: &CubicForm,
    pi: &LinearSubspace,
    e: &ProjPoint,
    m: &ProjPoint,
) -> Result<PointCluster, Undefined> {
    if !surface::eval_zero(f, e).unwrap_or(false) {
        return undef(Reason::OnSurfaceConflict, "E is not on X");
    }
    if !pi.contains(m) {
        return undef(Reason::VertexDegenerate, "M is not on Π");
    }
    if e == m {
        return undef(Reason::VertexDegenerate, "E = M");
    }
    if pi.contains(e) {
        return undef(Reason::VertexDegenerate, "E lies on Π");
    }
    let line = projgeom::param_line(e, m).map_err(geom_failure(Reason::VertexDegenerate))?;
    let div = match surface::divisor(f, &line) {
        Ok(d) => d,
        Err(SurfaceError::CurveInSurface) => return undef(Reason::LineInSurface, "the line EM lies in X"),
        Err(err) => return undef(Reason::ClusterNotStable, err.to_string()),
    };
    if div.multiplicity(e) != 1 {
        return undef(Reason::ResidualCollision, "the line EM is tangent to X at E");
    }
    let point_e = PointCluster::reduced(f.field(), vec![e.clone()]).map_err(geom_failure(Reason::ClusterNotStable))?;
    let b = div
        .difference(&point_e)
        .map_err(geom_failure(Reason::ClusterNotStable))?
        .expect("E lies in the divisor");
    if !b.is_reduced() {
        return undef(Reason::ResidualCollision, "the line EM is tangent to X away from E");
    }
    if !b.frobenius_stable() {
        return undef(Reason::ClusterNotStable, "residual pair is not stable");
    }
    Ok(b)
}

/// A twisted cubic through six points of `X`, with its intersection with `X`.
fn cubic_through(f: &CubicForm, parts: &[&PointCluster]) -> Result<(TwistedCubic, Intersection), Undefined> {
    let mut all = PointCluster::empty(f.field());
    for c in parts {
        all = all.union(c).map_err(geom_failure(Reason::ClusterNotStable))?;
    }
    if all.degree() != 6 || !all.is_reduced() {
        return undef(Reason::NotGeneralPosition, "the six points are not distinct");
    }
    let field = all.field().clone();
    let six: Vec<ProjPoint> = parts
        .iter()
        .flat_map(|c| c.support())
        .map(|p| p.embed(&field).expect("cluster fields divide the union field"))
        .collect();
    let t = cubic3::through6(&six).map_err(|e| match e {
        CubicError::NotGeneralPosition { quadruple } => Undefined {
            reason: Reason::NotGeneralPosition,
            detail: format!("points {quadruple:?} are coplanar"),
        },
        other => Undefined {
            reason: Reason::NotGeneralPosition,
            detail: other.to_string(),
        },
    })?;
    if !t.defined_over(f.field()) {
        return undef(Reason::ClusterNotStable, "the twisted cubic is not defined over the base");
    }
    let inter = match surface::intersect(f, t.phi()) {
        Ok(i) => i,
        Err(SurfaceError::CurveInSurface) => return undef(Reason::NotTransversal, "the twisted cubic lies in X"),
        Err(e) => return undef(Reason::ClusterNotStable, e.to_string()),
    };
    if !inter.restriction.is_squarefree() {
        return undef(Reason::NotTransversal, "the twisted cubic is tangent to X");
    }
    Ok((t, inter))
}

fn residual(inter: &Intersection, known: &[&PointCluster], degree: usize, name: &str) -> Result<PointCluster, Undefined> {
    let mut rest = inter.cluster.clone();
    for k in known {
        rest = rest
            .difference(k)
            .map_err(geom_failure(Reason::ClusterNotStable))?
            .ok_or(Undefined {
                reason: Reason::ClusterNotStable,
                detail: "an input point is missing from T ∩ X".into(),
            })?;
    }
    if rest.degree() != degree || !rest.frobenius_stable() {
        return undef(Reason::ClusterNotStable, format!("residual {name} is not a stable cluster of degree {degree}"));
    }
    Ok(rest)
}

/// `(B, D) ↦ (T, C)`: the twisted cubic through `B ∪ D` and the residual
/// cluster of `T ∩ X`.
pub fn reconstruct_24(
    f: &CubicForm,
    b: &PointCluster,
    d: &PointCluster,
) -> Result<(TwistedCubic, PointCluster), Undefined> {
    check_cluster(f, b, 2, "B")?;
    check_cluster(f, d, 4, "D")?;
    let (t, inter) = cubic_through(f, &[b, d])?;
    let c = residual(&inter, &[b, d], 3, "C")?;
    Ok((t, c))
}

/// Everything computed by [`lemma1_forward`].
#[derive(Debug, Clone)]
pub struct Lemma1Image {
    pub b: PointCluster,
    pub c: PointCluster,
    pub a_prime: ProjPoint,
    /// The auxiliary point on `T` and the plane `OB₁B₂`.
    pub a: ProjPoint,
    pub curve: TwistedCubic,
    pub intersection: Intersection,
}

fn vertex_plane(cfg: &Lemma1Config, b: &PointCluster) -> Result<LinearSubspace, Undefined> {
    let field = b.field();
    let mut pts: Vec<ProjPoint> = b.support();
    pts.push(cfg.o.embed(field).expect("rational point embeds"));
    pts.push(cfg.o_prime.embed(field).expect("rational point embeds"));
    let refs: Vec<&ProjPoint> = pts.iter().collect();
    if projgeom::det_points(&refs).is_zero() {
        return undef(Reason::VertexDegenerate, "O, O', B1, B2 are coplanar");
    }
    let line = b.rational_span().map_err(geom_failure(Reason::ClusterNotStable))?;
    let o = LinearSubspace::from_rows(line.field(), 3, vec![cfg.o.coords().to_vec()]);
    projgeom::join(&o, &line).map_err(geom_failure(Reason::VertexDegenerate))
}

/// `(B, D) ↦ (B, C, A')`.
pub fn lemma1_forward(
    f: &CubicForm,
    cfg: &Lemma1Config,
    b: &PointCluster,
    d: &PointCluster,
) -> Result<Lemma1Image, Undefined> {
    check_cluster(f, b, 2, "B")?;
    check_cluster(f, d, 4, "D")?;
    let base = f.field();
    let plane = vertex_plane(cfg, b)?;
    let (t, inter) = cubic_through(f, &[b, d])?;
    let c = residual(&inter, &[b, d], 3, "C")?;

    // restrict the plane's equation to T and remove the parameters of B
    let k = t.field().clone();
    let eq = &plane.equations()[0];
    let mut form = BinaryForm::zero(&k, 3);
    for (coef, phi_i) in eq.iter().zip(t.phi().forms()) {
        form = form.add(&phi_i.scale(&coef.embed(&k).expect("base embeds")));
    }
    let mut b_params = Vec::new();
    for p in b.support() {
        let param = cubic3::point_param(&t, &p).map_err(|e| Undefined {
            reason: Reason::ClusterNotStable,
            detail: e.to_string(),
        })?;
        form = form
            .div_exact(&BinaryForm::vanishing_at(&param))
            .expect("B lies on the plane and on T");
        b_params.push(param);
    }
    let lc = form.coeffs();
    let a_param = ProjPoint::new(vec![-&lc[1], lc[0].clone()]).expect("nonzero linear form");
    if b_params.contains(&a_param) {
        return undef(Reason::ResidualCollision, "the plane OB1B2 is tangent to T at a point of B");
    }
    let a = t.phi().eval_param(&a_param).expect("T has no base points");
    let a = rational_point(&a, base, "A")?;
    if c.multiplicity(&a) > 0 {
        return undef(Reason::ResidualCollision, "A lies in C");
    }
    if surface::eval_zero(f, &a).unwrap_or(false) {
        return undef(Reason::OnSurfaceConflict, "A lies on X");
    }
    if a == cfg.o_prime {
        return undef(Reason::VertexDegenerate, "A = O'");
    }
    let ray = projgeom::span(&[cfg.o_prime.clone(), a.clone()]).map_err(geom_failure(Reason::VertexDegenerate))?;
    let a_prime = projgeom::meet(&ray, &cfg.pi)
        .map_err(geom_failure(Reason::VertexDegenerate))?
        .as_point()
        .ok_or(Undefined {
            reason: Reason::VertexDegenerate,
            detail: "the line O'A lies in Π".into(),
        })?;
    Ok(Lemma1Image {
        b: b.clone(),
        c,
        a_prime,
        a,
        curve: t,
        intersection: inter,
    })
}

/// `(B, C, A') ↦ (B, D)`.
pub fn lemma1_backward(
    f: &CubicForm,
    cfg: &Lemma1Config,
    b: &PointCluster,
    c: &PointCluster,
    a_prime: &ProjPoint,
) -> Result<(PointCluster, PointCluster), Undefined> {
    check_cluster(f, b, 2, "B")?;
    check_cluster(f, c, 3, "C")?;
    if b.meets(c) {
        return undef(Reason::NotGeneralPosition, "B and C share a point");
    }
    if !cfg.pi.contains(a_prime) {
        return undef(Reason::VertexDegenerate, "A' is not on Π");
    }
    let plane = vertex_plane(cfg, b)?;
    let ray = projgeom::span(&[cfg.o_prime.clone(), a_prime.clone()]).map_err(geom_failure(Reason::VertexDegenerate))?;
    let a = projgeom::meet(&ray, &plane)
        .map_err(geom_failure(Reason::VertexDegenerate))?
        .as_point()
        .ok_or(Undefined {
            reason: Reason::VertexDegenerate,
            detail: "the line O'A' lies in the plane OB1B2".into(),
        })?;
    if surface::eval_zero(f, &a).unwrap_or(false) {
        return undef(Reason::OnSurfaceConflict, "A lies on X");
    }
    let a_cluster = PointCluster::reduced(f.field(), vec![a]).map_err(geom_failure(Reason::ClusterNotStable))?;
    let (t, inter) = cubic_through(f, &[b, c, &a_cluster])?;
    let d = residual(&inter, &[b, c], 4, "D")?;
    debug_assert!(d.support().iter().all(|p| cubic3::contains(&t, p)));
    Ok((b.clone(), d))
}

/// The image of the composite map of the theorem and whether the reverse
/// chain reproduced the input.
#[derive(Debug, Clone)]
pub struct TheoremImage {
    pub p: ProjPoint,
    pub m: ProjPoint,
    pub c: PointCluster,
    pub a_prime: ProjPoint,
    /// `None` when the reverse chain reproduced `(P, M, D)` exactly,
    /// otherwise a description of the mismatch.
    pub mismatch: Option<String>,
}

/// `(P, M, D) ↦ (P, M, C, A')` through the pair `B` of Lemma 2, followed
/// by the reverse chain.
pub fn theorem_roundtrip(
    f: &CubicForm,
    cfg: &Lemma1Config,
    pi2: &LinearSubspace,
    p: &ProjPoint,
    m: &ProjPoint,
    d: &PointCluster,
) -> MapOutcome<TheoremImage> {
    let forward = || -> Result<(PointCluster, Lemma1Image), Undefined> {
        let b = lemma2_backward(f, pi2, p, m)?;
        let img = lemma1_forward(f, cfg, &b, d)?;
        Ok((b, img))
    };
    let (b, img) = match forward() {
        Ok(v) => v,
        Err(u) => return MapOutcome::Undefined(u),
    };
    let reverse = || -> Result<Option<String>, Undefined> {
        let (b2, d2) = lemma1_backward(f, cfg, &img.b, &img.c, &img.a_prime)?;
        let (p2, m2) = lemma2_forward(f, pi2, &b2)?;
        let mut bad = Vec::new();
        if b2 != b {
            bad.push("B");
        }
        if d2 != *d {
            bad.push("D");
        }
        if p2 != *p {
            bad.push("P");
        }
        if m2 != *m {
            bad.push("M");
        }
        Ok((!bad.is_empty()).then(|| format!("reverse chain changed {}", bad.join(", "))))
    };
    let mismatch = match reverse() {
        Ok(m) => m,
        Err(u) => Some(format!("reverse chain undefined: {u}")),
    };
    MapOutcome::Defined(TheoremImage {
        p: p.clone(),
        m: m.clone(),
        c: img.c,
        a_prime: img.a_prime,
        mismatch,
    })
}
