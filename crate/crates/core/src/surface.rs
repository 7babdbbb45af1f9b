//! Cubic surfaces `X = {F = 0} ⊂ P^3`: evaluation, restriction to
//! parametrized curves, intersection divisors, and random sampling of
//! points and Galois-stable clusters.
//!
//! The 20 coefficients of a cubic form are indexed by exponent vectors
//! `(e0, e1, e2, e3)` in graded-lexicographic order, starting
//! `x0^3, x0^2 x1, x0^2 x2, x0^2 x3, x0 x1^2, ...` and ending `x3^3`.

use std::sync::OnceLock;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::fields::{poly_factor, poly_roots, FieldDesc, FieldElement, FieldError, DEFAULT_FACTOR_SEED};
use crate::forms::{BinaryForm, CurveParam};
use crate::projgeom::{self, GeomError, LinearSubspace, PointCluster, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("the curve lies in the surface")]
    CurveInSurface,
    #[error("point is not on the surface")]
    NotOnSurface,
    #[error("known points are not contained in the line section")]
    KnownNotContained,
    #[error("no sample found after {0} attempts")]
    SamplingExhausted(u64),
    #[error("closed points of degree {0} are not supported by the sampler")]
    UnsupportedPart(usize),
    #[error("parametrization has a base point")]
    BasePoint,
    #[error("a cubic form needs exactly 20 coefficients, got {0}")]
    BadCoefficientCount(usize),
    #[error("the zero form does not define a surface")]
    ZeroForm,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Exponent vectors of the cubic monomials, graded-lex order.
pub fn cubic_monomials() -> &'static [[usize; 4]; 20] {
    static MONOMIALS: OnceLock<[[usize; 4]; 20]> = OnceLock::new();
    MONOMIALS.get_or_init(|| {
        let mut out = [[0usize; 4]; 20];
        let mut i = 0;
        for e0 in (0..=3).rev() {
            for e1 in (0..=3 - e0).rev() {
                for e2 in (0..=3 - e0 - e1).rev() {
                    out[i] = [e0, e1, e2, 3 - e0 - e1 - e2];
                    i += 1;
                }
            }
        }
        out
    })
}

fn monomial_index(e: [usize; 4]) -> usize {
    cubic_monomials().iter().position(|m| *m == e).expect("cubic exponent")
}

/// A cubic form in `x0..x3`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CubicForm {
    desc: FieldDesc,
    coeffs: Vec<FieldElement>,
}

impl CubicForm {
    pub fn new(desc: &FieldDesc, coeffs: Vec<FieldElement>) -> Result<CubicForm, SurfaceError> {
        if coeffs.len() != 20 {
            return Err(SurfaceError::BadCoefficientCount(coeffs.len()));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(SurfaceError::ZeroForm);
        }
        Ok(CubicForm {
            desc: desc.clone(),
            coeffs,
        })
    }

    /// `sum a_i x_i^3`.
    pub fn diagonal(desc: &FieldDesc, a: [i64; 4]) -> Result<CubicForm, SurfaceError> {
        let mut coeffs = vec![desc.zero(); 20];
        for (i, &ai) in a.iter().enumerate() {
            let mut e = [0usize; 4];
            e[i] = 3;
            coeffs[monomial_index(e)] = desc.from_i64(ai);
        }
        CubicForm::new(desc, coeffs)
    }

    /// `x0^3 + x1^3 + x2^3 + x3^3`.
    pub fn fermat(desc: &FieldDesc) -> CubicForm {
        CubicForm::diagonal(desc, [1, 1, 1, 1]).expect("nonzero form")
    }

    /// `x0^3 + 7 x1^3 + 49 x2^3 - 2 x3^3`.
    pub fn example1(desc: &FieldDesc) -> Result<CubicForm, SurfaceError> {
        CubicForm::diagonal(desc, [1, 7, 49, -2])
    }

    pub fn random<R: Rng + ?Sized>(desc: &FieldDesc, rng: &mut R) -> CubicForm {
        loop {
            if let Ok(f) = CubicForm::new(desc, (0..20).map(|_| desc.random(rng)).collect()) {
                return f;
            }
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.desc
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn embed(&self, target: &FieldDesc) -> Result<CubicForm, FieldError> {
        Ok(CubicForm {
            desc: target.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.embed(target))
                .collect::<Result<_, _>>()?,
        })
    }

    fn over(&self, target: &FieldDesc) -> Result<CubicForm, FieldError> {
        if *target == self.desc {
            Ok(self.clone())
        } else {
            self.embed(target)
        }
    }

    /// `F(P)` with the form lifted into the point's field.
    pub fn eval(&self, p: &ProjPoint) -> Result<FieldElement, FieldError> {
        let f = self.over(p.field())?;
        let x = p.coords();
        let desc = p.field();
        let mut acc = desc.zero();
        for (c, e) in f.coeffs.iter().zip(cubic_monomials()) {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    term = &term * xi;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// The four partial derivatives at `P`.
    pub fn gradient(&self, p: &ProjPoint) -> Result<Vec<FieldElement>, FieldError> {
        let f = self.over(p.field())?;
        let x = p.coords();
        let desc = p.field();
        let mut grad = vec![desc.zero(); 4];
        for (c, e) in f.coeffs.iter().zip(cubic_monomials()) {
            if c.is_zero() {
                continue;
            }
            for v in 0..4 {
                if e[v] == 0 {
                    continue;
                }
                let mut term = c * &desc.from_i64(e[v] as i64);
                for (j, (xj, &ej)) in x.iter().zip(e).enumerate() {
                    let pow = if j == v { ej - 1 } else { ej };
                    for _ in 0..pow {
                        term = &term * xj;
                    }
                }
                grad[v] = &grad[v] + &term;
            }
        }
        Ok(grad)
    }

    /// Heuristic check that the form has no linear factor over the
    /// algebraic closure, hence is geometrically integral.
    ///
    /// Any factorization of a cubic form over `F_q` bar has a linear
    /// factor defined over `F_{q^3}`, so a line over `F_{q^6}` whose
    /// restriction has no root in `F_{q^6}` certifies integrality. Returns
    /// `false` when no such line turned up within `attempts` tries.
    pub fn certify_integral<R: Rng + ?Sized>(&self, attempts: usize, rng: &mut R) -> Result<bool, SurfaceError> {
        let big = self.desc.extension(6)?;
        for _ in 0..attempts {
            let a = ProjPoint::random(&big, 3, rng);
            let b = ProjPoint::random(&big, 3, rng);
            let Ok(line) = projgeom::param_line(&a, &b) else {
                continue;
            };
            let Ok(r) = restrict(self, &line) else {
                continue;
            };
            if r.infinity_multiplicity() == 0 && poly_roots(&r.poly(), &big)?.is_empty() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `P ∈ X`.
pub fn eval_zero(f: &CubicForm, p: &ProjPoint) -> Result<bool, SurfaceError> {
    Ok(f.eval(p)?.is_zero())
}

/// Nonvanishing gradient at a point of `X`.
pub fn smooth_at(f: &CubicForm, p: &ProjPoint) -> Result<bool, SurfaceError> {
    if !eval_zero(f, p)? {
        return Err(SurfaceError::NotOnSurface);
    }
    Ok(f.gradient(p)?.iter().any(|g| !g.is_zero()))
}

/// `F ∘ φ` as a binary form of degree `3 deg φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRestriction {
    curve: CurveParam,
    form: BinaryForm,
}

impl CurveRestriction {
    /// The curve, lifted into the field of the restriction.
    pub fn curve(&self) -> &CurveParam {
        &self.curve
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    /// The dehomogenized polynomial in `t` (at `s = 1`).
    pub fn poly(&self) -> crate::fields::UniPoly {
        self.form.dehomogenize()
    }

    pub fn infinity_multiplicity(&self) -> usize {
        self.form.infinity_multiplicity()
    }

    pub fn total_degree(&self) -> usize {
        self.form.degree()
    }

    pub fn field(&self) -> &FieldDesc {
        self.form.field()
    }

    /// Squarefree including the root at infinity.
    pub fn is_squarefree(&self) -> bool {
        let p = self.poly();
        self.infinity_multiplicity() <= 1 && (p.is_constant() || p.is_squarefree())
    }
}

/// Compose the cubic form with a parametrized curve.
pub fn restrict(f: &CubicForm, curve: &CurveParam) -> Result<CurveRestriction, SurfaceError> {
    let field = f.field().join(curve.field())?;
    let curve = if curve.field() == &field { curve.clone() } else { curve.embed(&field)? };
    let form = f.over(&field)?;
    let x = curve.forms();
    let d = curve.degree();
    // powers[v][e] = x_v^e
    let powers: Vec<Vec<BinaryForm>> = x
        .iter()
        .map(|xv| {
            let mut pw = vec![BinaryForm::constant(field.one())];
            for e in 1..=3 {
                let next = pw[e - 1].mul(xv);
                pw.push(next);
            }
            pw
        })
        .collect();
    let mut acc = BinaryForm::zero(&field, 3 * d);
    for (c, e) in form.coeffs.iter().zip(cubic_monomials()) {
        if c.is_zero() {
            continue;
        }
        let term = powers[0][e[0]]
            .mul(&powers[1][e[1]])
            .mul(&powers[2][e[2]])
            .mul(&powers[3][e[3]])
            .scale(c);
        acc = acc.add(&term);
    }
    if acc.is_zero() {
        return Err(SurfaceError::CurveInSurface);
    }
    Ok(CurveRestriction { curve, form: acc })
}

/// One geometric point of `C ∩ X` with its curve parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub param: ProjPoint,
    pub point: ProjPoint,
    pub multiplicity: usize,
}

/// The intersection scheme `C ∩ X`, split over its splitting field.
#[derive(Clone, Debug)]
pub struct Intersection {
    pub restriction: CurveRestriction,
    /// Smallest extension of the restriction's field containing every root.
    pub field: FieldDesc,
    pub roots: Vec<IntersectionPoint>,
    pub cluster: PointCluster,
}

/// Factor the restriction, split it, and push the roots through the curve.
pub fn intersect(f: &CubicForm, curve: &CurveParam) -> Result<Intersection, SurfaceError> {
    let restriction = restrict(f, curve)?;
    let k = restriction.field().clone();
    let poly = restriction.poly();
    let fac = poly_factor(&poly, DEFAULT_FACTOR_SEED)?;
    let split = if fac.factors.is_empty() { 1 } else { fac.splitting_degree() };
    let field = k.extension(split)?;
    let curve_l = restriction.curve.embed(&field)?;
    let mut roots = Vec::new();
    if !poly.is_constant() {
        for (h, m) in &fac.factors {
            for (r, _) in poly_roots(h, &field)? {
                let param = ProjPoint::new(vec![field.one(), r])?;
                let point = curve_l.eval_param(&param).ok_or(SurfaceError::BasePoint)?;
                roots.push(IntersectionPoint {
                    param,
                    point,
                    multiplicity: *m,
                });
            }
        }
    }
    let inf = restriction.infinity_multiplicity();
    if inf > 0 {
        let param = ProjPoint::new(vec![field.zero(), field.one()])?;
        let point = curve_l.eval_param(&param).ok_or(SurfaceError::BasePoint)?;
        roots.push(IntersectionPoint {
            param,
            point,
            multiplicity: inf,
        });
    }
    let cluster = PointCluster::new(
        f.field(),
        roots.iter().map(|r| (r.point.clone(), r.multiplicity)).collect(),
    )?;
    Ok(Intersection {
        restriction,
        field,
        roots,
        cluster,
    })
}

/// The intersection divisor `C ∩ X` as a cluster over the surface's field.
pub fn divisor(f: &CubicForm, curve: &CurveParam) -> Result<PointCluster, SurfaceError> {
    Ok(intersect(f, curve)?.cluster)
}

/// The restriction exists and is squarefree (including at infinity).
pub fn transversal(f: &CubicForm, curve: &CurveParam) -> bool {
    restrict(f, curve).is_ok_and(|r| r.is_squarefree())
}

/// Residual point of the degree-3 line section after removing a degree-2 part.
pub fn third_point(f: &CubicForm, line: &LinearSubspace, known: &PointCluster) -> Result<ProjPoint, SurfaceError> {
    let param = projgeom::line_param(line).ok_or(SurfaceError::KnownNotContained)?;
    let r = restrict(f, &param)?;
    let mut form = r.form().clone();
    for (p, m) in known.points() {
        let t = projgeom::line_point_param(&param, p).ok_or(SurfaceError::KnownNotContained)?;
        let field = form.field().join(t.field())?;
        form = form.embed(&field)?;
        let lin = BinaryForm::vanishing_at(&t.embed(&field)?);
        for _ in 0..*m {
            form = form.div_exact(&lin).ok_or(SurfaceError::KnownNotContained)?;
        }
    }
    if form.degree() != 1 {
        return Err(SurfaceError::KnownNotContained);
    }
    let c = form.coeffs();
    let residual = ProjPoint::new(vec![-&c[1], c[0].clone()])?;
    let point = param
        .eval_param(&residual)
        .ok_or(SurfaceError::BasePoint)?;
    Ok(minimal_point(&point, f.field()))
}

/// A point expressed over its own field of definition.
pub fn minimal_point(p: &ProjPoint, base: &FieldDesc) -> ProjPoint {
    if !base.is_finite() {
        return p.clone();
    }
    let own = base.extension(p.orbit_size(base)).expect("finite base");
    p.descend(&own).expect("point lies in its field of definition")
}

/// Retry budget for the samplers: `200 q`.
pub fn sampling_budget(field: &FieldDesc) -> u64 {
    field
        .order_u128()
        .map_or(u64::MAX, |q| (q.saturating_mul(200)).min(u64::MAX as u128) as u64)
}

/// A random `F_q`-point of `X`, found on random lines.
pub fn sample_point<R: Rng + ?Sized>(f: &CubicForm, field: &FieldDesc, rng: &mut R) -> Result<ProjPoint, SurfaceError> {
    sample_point_with_budget(f, field, sampling_budget(field), rng)
}

pub fn sample_point_with_budget<R: Rng + ?Sized>(
    f: &CubicForm,
    field: &FieldDesc,
    budget: u64,
    rng: &mut R,
) -> Result<ProjPoint, SurfaceError> {
    for _ in 0..budget {
        let line = random_line(field, rng);
        let Ok(r) = restrict(f, &line) else {
            continue;
        };
        let mut params: Vec<ProjPoint> = poly_roots(&r.poly(), field)?
            .into_iter()
            .map(|(t, _)| ProjPoint::new(vec![field.one(), t]).unwrap())
            .collect();
        if r.infinity_multiplicity() > 0 {
            params.push(ProjPoint::new(vec![field.zero(), field.one()]).unwrap());
        }
        if let Some(t) = params.choose(rng) {
            return line.eval_param(t).ok_or(SurfaceError::BasePoint);
        }
    }
    Err(SurfaceError::SamplingExhausted(budget))
}

fn random_line<R: Rng + ?Sized>(field: &FieldDesc, rng: &mut R) -> CurveParam {
    loop {
        let a = ProjPoint::random(field, 3, rng);
        let b = ProjPoint::random(field, 3, rng);
        if let Ok(l) = projgeom::param_line(&a, &b) {
            return l;
        }
    }
}

/// A random smooth conic `s^2 A + st B + t^2 C` in a random plane.
fn random_conic<R: Rng + ?Sized>(field: &FieldDesc, rng: &mut R) -> CurveParam {
    loop {
        let pts: Vec<ProjPoint> = (0..3).map(|_| ProjPoint::random(field, 3, rng)).collect();
        if projgeom::span(&pts).map_or(true, |s| s.dim() != 2) {
            continue;
        }
        let forms = (0..4)
            .map(|j| {
                BinaryForm::new(
                    field,
                    vec![
                        pts[0].coords()[j].clone(),
                        pts[1].coords()[j].clone(),
                        pts[2].coords()[j].clone(),
                    ],
                )
            })
            .collect();
        return CurveParam::new(forms);
    }
}

/// A single closed point of degree `d` on `X`: a full Frobenius orbit,
/// returned as its `d` geometric points over `F_{q^d}`.
pub fn sample_closed_point<R: Rng + ?Sized>(
    f: &CubicForm,
    d: usize,
    rng: &mut R,
) -> Result<Vec<ProjPoint>, SurfaceError> {
    let base = f.field().clone();
    if d == 1 {
        return Ok(vec![sample_point(f, &base, rng)?]);
    }
    if !(2..=4).contains(&d) {
        return Err(SurfaceError::UnsupportedPart(d));
    }
    let budget = sampling_budget(&base);
    let ext = base.extension(d)?;
    for _ in 0..budget {
        // lines meet X in degree 3; degree-4 orbits need the sextic of a conic
        let curve = if d == 4 { random_conic(&base, rng) } else { random_line(&base, rng) };
        let Ok(r) = restrict(f, &curve) else {
            continue;
        };
        let fac = poly_factor(&r.poly(), DEFAULT_FACTOR_SEED)?;
        let candidates: Vec<_> = fac
            .factors
            .iter()
            .filter(|(h, m)| *m == 1 && h.degree() == Some(d))
            .collect();
        let Some((h, _)) = candidates.choose(rng) else {
            continue;
        };
        let curve_ext = curve.embed(&ext)?;
        let orbit = poly_roots(h, &ext)?
            .into_iter()
            .map(|(t, _)| {
                curve_ext
                    .eval_param(&ProjPoint::new(vec![ext.one(), t]).unwrap())
                    .ok_or(SurfaceError::BasePoint)
            })
            .collect::<Result<Vec<_>, _>>()?;
        // distinct parameters can collide only at a singular point of the conic image
        let mut uniq = orbit.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() == d {
            return Ok(orbit);
        }
    }
    Err(SurfaceError::SamplingExhausted(budget))
}

/// A reduced Frobenius-stable cluster whose closed points have the given degrees.
pub fn sample_cluster<R: Rng + ?Sized>(
    f: &CubicForm,
    composition: &[usize],
    rng: &mut R,
) -> Result<PointCluster, SurfaceError> {
    let base = f.field().clone();
    let budget = sampling_budget(&base);
    let m = composition.iter().fold(1usize, |acc, d| acc.lcm(d));
    let field = base.extension(m)?;
    let mut points: Vec<ProjPoint> = Vec::new();
    for &d in composition {
        let mut tries = 0u64;
        loop {
            let orbit = sample_closed_point(f, d, rng)?;
            let lifted = orbit
                .iter()
                .map(|p| p.embed(&field))
                .collect::<Result<Vec<_>, _>>()?;
            if lifted.iter().all(|p| !points.contains(p)) {
                points.extend(lifted);
                break;
            }
            tries += 1;
            if tries >= budget {
                return Err(SurfaceError::SamplingExhausted(budget));
            }
        }
    }
    Ok(PointCluster::reduced(&base, points)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_extension;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(f: &FieldDesc, c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(f, c).unwrap()
    }

    #[test]
    fn monomial_order() {
        let m = cubic_monomials();
        assert_eq!(m[0], [3, 0, 0, 0]);
        assert_eq!(m[1], [2, 1, 0, 0]);
        assert_eq!(m[4], [1, 2, 0, 0]);
        assert_eq!(m[19], [0, 0, 0, 3]);
    }

    #[test]
    fn eval_examples() {
        let f = make_extension(7, 1).unwrap();
        let x = CubicForm::fermat(&f);
        assert!(eval_zero(&x, &pt(&f, &[1, -1, 0, 0])).unwrap());
        assert!(!eval_zero(&x, &pt(&f, &[1, 0, 0, 0])).unwrap());
    }

    #[test]
    fn example1_has_no_small_rational_points() {
        let q = FieldDesc::rationals();
        let x = CubicForm::example1(&q).unwrap();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    for d in -3i64..=3 {
                        if let Ok(p) = ProjPoint::from_i64(&q, &[a, b, c, d]) {
                            assert!(!eval_zero(&x, &p).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn smoothness_examples() {
        let f = make_extension(7, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let p = pt(&f, &[1, -1, 0, 0]);
        assert!(smooth_at(&x, &p).unwrap());
        assert_eq!(x.gradient(&p).unwrap(), vec![f.from_i64(3), f.from_i64(3), f.zero(), f.zero()]);
        let cone = CubicForm::diagonal(&f, [1, 1, 1, 0]).unwrap();
        assert!(!smooth_at(&cone, &pt(&f, &[0, 0, 0, 1])).unwrap());
        assert_eq!(smooth_at(&x, &pt(&f, &[1, 0, 0, 0])), Err(SurfaceError::NotOnSurface));
    }

    #[test]
    fn restriction_of_fermat_to_a_line() {
        let f = make_extension(7, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let line = projgeom::param_line(&pt(&f, &[1, -1, 0, 0]), &pt(&f, &[0, 1, -1, 0])).unwrap();
        let r = restrict(&x, &line).unwrap();
        // s^3 + (t - s)^3 - t^3 = 3 t s (s - t) = 3 s^2 t - 3 s t^2
        let expect = BinaryForm::new(&f, vec![f.zero(), f.from_i64(3), f.from_i64(-3), f.zero()]);
        assert_eq!(r.form(), &expect);
        let d = divisor(&x, &line).unwrap();
        let expect = PointCluster::reduced(
            &f,
            vec![pt(&f, &[1, -1, 0, 0]), pt(&f, &[0, 1, -1, 0]), pt(&f, &[1, 0, -1, 0])],
        )
        .unwrap();
        assert_eq!(d, expect);
        assert!(transversal(&x, &line));
    }

    #[test]
    fn line_in_surface() {
        let f = make_extension(7, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let line = projgeom::param_line(&pt(&f, &[1, -1, 0, 0]), &pt(&f, &[0, 0, 1, -1])).unwrap();
        assert_eq!(restrict(&x, &line).unwrap_err(), SurfaceError::CurveInSurface);
        assert!(!transversal(&x, &line));
    }

    #[test]
    fn tangent_line_has_double_point() {
        let f = make_extension(101, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let p = pt(&f, &[1, -1, 0, 0]);
        // tangent plane at p: 3x0^2 + 3x1^2 -> x0 + x1 = 0; take a tangent direction
        let q = pt(&f, &[1, -1, 2, 5]);
        let line = projgeom::param_line(&p, &q).unwrap();
        let d = divisor(&x, &line).unwrap();
        assert!(d.multiplicity(&p) >= 2);
        assert!(!transversal(&x, &line));
    }

    #[test]
    fn twisted_cubic_restriction_has_degree_nine() {
        let f = make_extension(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = CubicForm::random(&f, &mut rng);
        let one = f.one();
        let zero = f.zero();
        let forms = (0..4)
            .map(|i| {
                let mut c = vec![zero.clone(); 4];
                c[i] = one.clone();
                BinaryForm::new(&f, c)
            })
            .collect();
        let r = restrict(&x, &CurveParam::new(forms)).unwrap();
        assert_eq!(r.total_degree(), 9);
    }

    #[test]
    fn third_point_examples() {
        let f = make_extension(7, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let a = pt(&f, &[1, -1, 0, 0]);
        let b = pt(&f, &[0, 1, -1, 0]);
        let line = projgeom::span(&[a.clone(), b.clone()]).unwrap();
        let known = PointCluster::reduced(&f, vec![a, b]).unwrap();
        assert_eq!(third_point(&x, &line, &known).unwrap(), pt(&f, &[1, 0, -1, 0]));
        let stray = PointCluster::reduced(&f, vec![pt(&f, &[1, 0, 0, -1])]).unwrap();
        assert_eq!(third_point(&x, &line, &stray), Err(SurfaceError::KnownNotContained));
    }

    #[test]
    fn third_point_of_conjugate_pair_is_rational() {
        let f = make_extension(101, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let orbit = sample_closed_point(&x, 2, &mut rng).unwrap();
        let known = PointCluster::reduced(&f, orbit).unwrap();
        let line = known.rational_span().unwrap();
        let e = third_point(&x, &line, &known).unwrap();
        assert_eq!(e.field(), &f);
        assert!(eval_zero(&x, &e).unwrap());
        let all = divisor(&x, &projgeom::line_param(&line).unwrap()).unwrap();
        let with_e = known.union(&PointCluster::reduced(&f, vec![e]).unwrap()).unwrap();
        assert_eq!(all, with_e);
    }

    #[test]
    fn samplers() {
        let f = make_extension(101, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let p1 = sample_point(&x, &f, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let p2 = sample_point(&x, &f, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(p1, p2);
        assert!(eval_zero(&x, &p1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for comp in [vec![2], vec![1, 1, 1, 1], vec![2, 2], vec![3], vec![4]] {
            let c = sample_cluster(&x, &comp, &mut rng).unwrap();
            assert_eq!(c.degree(), comp.iter().sum::<usize>());
            assert!(c.frobenius_stable());
            assert!(c.is_reduced());
            let mut sizes = comp.clone();
            sizes.sort();
            assert_eq!(c.orbit_sizes(), sizes);
            for (p, _) in c.points() {
                assert!(eval_zero(&x, p).unwrap());
            }
        }
    }

    #[test]
    fn exhausted_budget() {
        let f = make_extension(2, 1).unwrap();
        let x = CubicForm::fermat(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            sample_point_with_budget(&x, &f, 0, &mut rng),
            Err(SurfaceError::SamplingExhausted(0))
        );
        // every cubic form in four variables has an F_q-point, so the
        // default budget always succeeds even over F_2
        assert!(sample_point(&x, &f, &mut rng).is_ok());
    }

    #[test]
    fn fermat_is_certified_integral() {
        let f = make_extension(101, 1).unwrap();
        let x = CubicForm::fermat(&f);
        assert!(x.certify_integral(20, &mut ChaCha8Rng::seed_from_u64(1)).unwrap());
        // x0 * (x1^2 x0 ...) style reducible form: x0^3 + x0 x1^2
        let mut coeffs = vec![f.zero(); 20];
        coeffs[0] = f.one();
        coeffs[4] = f.one();
        let red = CubicForm::new(&f, coeffs).unwrap();
        assert!(!red.certify_integral(20, &mut ChaCha8Rng::seed_from_u64(1)).unwrap());
    }
}
