//! Twisted cubics in `P^3`: the curve through six points in general
//! position, its quadric ideal, membership and parameter recovery.
//!
//! The curve is found with two quadric cones. Projecting from one of the
//! six points sends the other five to a plane conic; the cone over it
//! contains the curve. A second cone with another vertex meets the first in
//! the curve plus the line joining the two vertices. Walking the rulings of
//! the first cone and taking the residual intersection with the second
//! gives a degree-4 parametrization, and removing the common linear factor
//! (the ruling through the other vertex) leaves the cubic one.
//!
//! Two curves are equal when their quadric spaces, kept in reduced echelon
//! form, are equal.

use thiserror::Error;

use crate::fields::{FieldDesc, FieldElement, FieldError};
use crate::forms::{BinaryForm, CurveParam};
use crate::linalg::{self, Matrix};
use crate::projgeom::{self, GeomError, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("points are not in general position (coplanar quadruple {quadruple:?})")]
    NotGeneralPosition { quadruple: [usize; 4] },
    #[error("construction degenerate for every vertex pair: {0}")]
    ConstructionDegenerate(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("not a twisted cubic parametrization: {0}")]
    BadParametrization(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Index pairs `(i, j)`, `i <= j`, ordering the monomials of a quadratic
/// form in `n` variables: for `n = 4` this is `x0², x0x1, …, x3²`.
fn quadratic_monomials(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn quad_at_point(c: &[FieldElement], x: &[FieldElement], desc: &FieldDesc) -> FieldElement {
    quadratic_monomials(x.len())
        .iter()
        .zip(c)
        .fold(desc.zero(), |acc, (&(i, j), ci)| &acc + &(ci * &(&x[i] * &x[j])))
}

fn quad_at_forms(c: &[FieldElement], v: &[BinaryForm]) -> BinaryForm {
    let desc = v[0].field().clone();
    let mut acc = BinaryForm::zero(&desc, 2 * v[0].degree());
    for (&(i, j), ci) in quadratic_monomials(v.len()).iter().zip(c) {
        if !ci.is_zero() {
            acc = acc.add(&v[i].mul(&v[j]).scale(ci));
        }
    }
    acc
}

/// Polarization `C(u + v) - C(u) - C(v)` with `u` constant, computed from
/// the coefficients so that characteristic 2 needs no special case.
fn polar_point_forms(c: &[FieldElement], u: &[FieldElement], v: &[BinaryForm]) -> BinaryForm {
    let desc = v[0].field().clone();
    let mut acc = BinaryForm::zero(&desc, v[0].degree());
    for (&(i, j), ci) in quadratic_monomials(v.len()).iter().zip(c) {
        if ci.is_zero() {
            continue;
        }
        let term = v[j].scale(&u[i]).add(&v[i].scale(&u[j]));
        acc = acc.add(&term.scale(ci));
    }
    acc
}

fn apply_to_forms(m: &Matrix, v: &[BinaryForm]) -> Vec<BinaryForm> {
    let desc = v[0].field().clone();
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .fold(BinaryForm::zero(&desc, v[0].degree()), |acc, (a, f)| acc.add(&f.scale(a)))
        })
        .collect()
}

/// Coefficients, in [`quadratic_monomials`] order, of the unique conic
/// through five plane points; `None` unless the solution space is a line.
fn conic_through(points: &[Vec<FieldElement>], desc: &FieldDesc) -> Option<Vec<FieldElement>> {
    let mons = quadratic_monomials(3);
    let rows: Matrix = points
        .iter()
        .map(|y| mons.iter().map(|&(i, j)| &y[i] * &y[j]).collect())
        .collect();
    let k = linalg::kernel(&rows, 6, desc);
    (k.len() == 1).then(|| k[0].clone())
}

/// Rows spanning the linear forms vanishing at `p`: projection from `p`.
fn projection_from(p: &ProjPoint, desc: &FieldDesc) -> Matrix {
    linalg::kernel(&vec![p.coords().to_vec()], 4, desc)
}

/// A twisted cubic with a parametrization and its canonical quadric basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCubic {
    field: FieldDesc,
    phi: CurveParam,
    quadrics: Matrix,
    params: Vec<ProjPoint>,
}

impl TwistedCubic {
    /// Validate a parametrization and attach its quadric space.
    pub fn from_phi(phi: CurveParam) -> Result<TwistedCubic, CubicError> {
        let quadrics = quadric_space(&phi)?;
        let gcd = BinaryForm::gcd_all(phi.forms());
        if gcd.degree() != 0 {
            return Err(CubicError::BadParametrization("coordinate forms share a root".into()));
        }
        let desc = phi.field().clone();
        let coeffs: Matrix = phi.forms().iter().map(|f| f.coeffs().to_vec()).collect();
        if linalg::rank(&coeffs, 4, &desc) != 4 {
            return Err(CubicError::BadParametrization("image spans a plane".into()));
        }
        Ok(TwistedCubic {
            field: desc,
            phi,
            quadrics,
            params: Vec::new(),
        })
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn phi(&self) -> &CurveParam {
        &self.phi
    }

    /// Reduced echelon basis of the quadrics vanishing on the curve.
    pub fn quadrics(&self) -> &[Vec<FieldElement>] {
        &self.quadrics
    }

    /// Parameters of the points the curve was built through, in input order.
    pub fn params(&self) -> &[ProjPoint] {
        &self.params
    }

    /// The quadric basis over a subfield, when the curve is defined there.
    pub fn quadrics_over(&self, sub: &FieldDesc) -> Option<Matrix> {
        self.quadrics
            .iter()
            .map(|row| row.iter().map(|c| c.descend(sub)).collect::<Option<Vec<_>>>())
            .collect()
    }

    /// Whether the curve is stable under the Frobenius of `base`.
    pub fn defined_over(&self, base: &FieldDesc) -> bool {
        self.quadrics_over(base).is_some()
    }

    pub fn embed(&self, target: &FieldDesc) -> Result<TwistedCubic, CubicError> {
        let quadrics = self
            .quadrics
            .iter()
            .map(|r| r.iter().map(|c| c.embed(target)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Matrix, _>>()?;
        let params = self
            .params
            .iter()
            .map(|p| p.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TwistedCubic {
            field: target.clone(),
            phi: self.phi.embed(target)?,
            quadrics,
            params,
        })
    }
}

/// Kernel of `Q -> Q ∘ φ` on quadrics, in reduced echelon form.
pub fn quadric_space(phi: &CurveParam) -> Result<Matrix, CubicError> {
    if phi.forms().len() != 4 || phi.degree() != 3 {
        return Err(CubicError::BadParametrization(format!(
            "expected four cubic forms, got {} of degree {}",
            phi.forms().len(),
            phi.degree()
        )));
    }
    let desc = phi.field().clone();
    let mons = quadratic_monomials(4);
    let images: Vec<BinaryForm> = mons
        .iter()
        .map(|&(i, j)| phi.forms()[i].mul(&phi.forms()[j]))
        .collect();
    // row r: coefficient of s^(6-r) t^r across monomials
    let m: Matrix = (0..7)
        .map(|r| images.iter().map(|f| f.coeffs()[r].clone()).collect())
        .collect();
    let k = linalg::kernel(&m, 10, &desc);
    if k.len() != 3 {
        return Err(CubicError::BadParametrization(format!("quadric space has dimension {}", k.len())));
    }
    Ok(k)
}

/// Whether all quadrics of the curve vanish at `p`.
pub fn contains(t: &TwistedCubic, p: &ProjPoint) -> bool {
    let Ok(field) = t.field.join(p.field()) else {
        return false;
    };
    let (Ok(p), Ok(t)) = (p.embed(&field), t.embed(&field)) else {
        return false;
    };
    if p.dim() != 3 {
        return false;
    }
    t.quadrics
        .iter()
        .all(|q| quad_at_point(q, p.coords(), &field).is_zero())
}

/// The parameter `(s:t)` with `φ(s:t) = p`.
pub fn point_param(t: &TwistedCubic, p: &ProjPoint) -> Result<ProjPoint, CubicError> {
    if !contains(t, p) {
        return Err(CubicError::NotOnCurve);
    }
    let field = t.field.join(p.field())?;
    let phi = t.phi.embed(&field)?;
    let p = p.embed(&field)?;
    let f = phi.forms();
    let c = p.coords();
    let mut pairwise = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let g = f[i].scale(&c[j]).sub(&f[j].scale(&c[i]));
            if !g.is_zero() {
                pairwise.push(g);
            }
        }
    }
    if pairwise.is_empty() {
        return Err(CubicError::NotOnCurve);
    }
    let g = BinaryForm::gcd_all(&pairwise);
    if g.degree() != 1 {
        return Err(CubicError::NotOnCurve);
    }
    // g = a s + b t vanishes at (-b : a)
    let gc = g.coeffs();
    let param = ProjPoint::new(vec![-&gc[1], gc[0].clone()])?;
    match phi.eval_param(&param) {
        Some(q) if q == p => Ok(param),
        _ => Err(CubicError::NotOnCurve),
    }
}

/// The unique twisted cubic through six points in general position.
pub fn through6(points: &[ProjPoint]) -> Result<TwistedCubic, CubicError> {
    if points.len() != 6 || points.iter().any(|p| p.dim() != 3) {
        return Err(GeomError::DimensionMismatch(6, points.len()).into());
    }
    let refs: Vec<&ProjPoint> = points.iter().collect();
    let (field, pts) = projgeom::common_field(&refs)?;
    if let Some(quadruple) = projgeom::coplanar_quadruple(&pts) {
        return Err(CubicError::NotGeneralPosition { quadruple });
    }
    let mut pairs = vec![(4, 5)];
    for i in 0..6 {
        for j in i + 1..6 {
            if (i, j) != (4, 5) {
                pairs.push((i, j));
            }
        }
    }
    let mut failures = Vec::new();
    for (a, b) in pairs {
        match two_cones(&pts, a, b, &field) {
            Ok(t) => return Ok(t),
            Err(why) => failures.push(format!("({a},{b}): {why}")),
        }
    }
    Err(CubicError::ConstructionDegenerate(failures.join("; ")))
}

/// One attempt with cone vertices `pts[a]` and `pts[b]`; the rulings of the
/// cone with vertex `pts[b]` are walked.
fn two_cones(pts: &[ProjPoint], a: usize, b: usize, desc: &FieldDesc) -> Result<TwistedCubic, String> {
    let m_b = projection_from(&pts[b], desc);
    let m_a = projection_from(&pts[a], desc);
    let images = |m: &Matrix, skip: usize| -> Vec<Vec<FieldElement>> {
        pts.iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, p)| linalg::mat_vec(m, p.coords(), desc))
            .collect()
    };
    let c_b = conic_through(&images(&m_b, b), desc).ok_or("no unique conic from first vertex")?;
    let c_a = conic_through(&images(&m_a, a), desc).ok_or("no unique conic from second vertex")?;

    // right inverse of the projection: lifts plane points to P^3
    let lift: Matrix = {
        let cols: Vec<Vec<FieldElement>> = (0..3)
            .map(|j| {
                let e: Vec<FieldElement> = (0..3).map(|i| if i == j { desc.one() } else { desc.zero() }).collect();
                linalg::solve(&m_b, &e, 4, desc).expect("projection has full rank")
            })
            .collect();
        linalg::transpose(&cols, 4)
    };
    let pb_a = linalg::mat_vec(&m_a, pts[b].coords(), desc);

    let mut last = String::from("no pivot available");
    for pivot in (0..6).filter(|&i| i != b) {
        let y1 = linalg::mat_vec(&m_b, pts[pivot].coords(), desc);
        let Some((u, w)) = complete_basis(&y1, desc) else {
            continue;
        };
        // pencil of lines through y1, residual point on the conic
        let v: Vec<BinaryForm> = (0..3)
            .map(|i| BinaryForm::linear(u[i].clone(), w[i].clone()))
            .collect();
        let cv = quad_at_forms(&c_b, &v);
        let bv = polar_point_forms(&c_b, &y1, &v);
        let y: Vec<BinaryForm> = (0..3).map(|i| cv.scale(&y1[i]).sub(&bv.mul(&v[i]))).collect();
        if y.iter().all(|f| f.is_zero()) {
            last = format!("conic parametrization vanishes at pivot {pivot}");
            continue;
        }
        let x0 = apply_to_forms(&lift, &y);
        // residual intersection of the ruling with the second cone
        let qa = quad_at_forms(&c_a, &apply_to_forms(&m_a, &x0));
        let ba = polar_point_forms(&c_a, &pb_a, &apply_to_forms(&m_a, &x0));
        let quartic: Vec<BinaryForm> = (0..4)
            .map(|k| qa.scale(&pts[b].coords()[k]).sub(&ba.mul(&x0[k])))
            .collect();
        if quartic.iter().all(|f| f.is_zero()) {
            last = format!("rulings lie on the second cone (pivot {pivot})");
            continue;
        }
        let g = BinaryForm::gcd_all(&quartic);
        if g.degree() != 1 {
            last = format!("common factor of degree {} (pivot {pivot})", g.degree());
            continue;
        }
        let cubics: Vec<BinaryForm> = quartic
            .iter()
            .map(|f| f.div_exact(&g).expect("gcd divides"))
            .collect();
        let mut t = match TwistedCubic::from_phi(CurveParam::new(cubics)) {
            Ok(t) => t,
            Err(e) => {
                last = format!("{e} (pivot {pivot})");
                continue;
            }
        };
        let params: Result<Vec<ProjPoint>, CubicError> = pts.iter().map(|p| point_param(&t, p)).collect();
        match params {
            Ok(params) => {
                t.params = params;
                return Ok(t);
            }
            Err(_) => last = format!("input point missed (pivot {pivot})"),
        }
    }
    Err(last)
}

/// Two vectors completing `y` to a basis of the 3-space.
fn complete_basis(y: &[FieldElement], desc: &FieldDesc) -> Option<(Vec<FieldElement>, Vec<FieldElement>)> {
    let e = |i: usize| -> Vec<FieldElement> { (0..3).map(|j| if i == j { desc.one() } else { desc.zero() }).collect() };
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let m: Matrix = vec![y.to_vec(), e(i), e(j)];
        if !linalg::det(&m, desc).is_zero() {
            return Some((e(i), e(j)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_extension;

    fn standard_points(f: &FieldDesc) -> Vec<ProjPoint> {
        let mut pts: Vec<ProjPoint> = (0..5)
            .map(|t| ProjPoint::from_i64(f, &[1, t, t * t, t * t * t]).unwrap())
            .collect();
        pts.push(ProjPoint::from_i64(f, &[0, 0, 0, 1]).unwrap());
        pts
    }

    fn standard_phi(f: &FieldDesc) -> CurveParam {
        let unit = |k: usize| {
            let mut c = vec![f.zero(); 4];
            c[k] = f.one();
            BinaryForm::new(f, c)
        };
        CurveParam::new((0..4).map(unit).collect())
    }

    fn rref_of(f: &FieldDesc, rows: &[[i64; 10]]) -> Matrix {
        let m: Matrix = rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        linalg::rref(&m, 10, f).0
    }

    fn standard_ideal(f: &FieldDesc) -> Matrix {
        // x0x2 - x1², x1x3 - x2², x0x3 - x1x2
        rref_of(
            f,
            &[
                [0, 0, 1, 0, -1, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 1, -1, 0, 0],
                [0, 0, 0, 1, 0, -1, 0, 0, 0, 0],
            ],
        )
    }

    #[test]
    fn standard_cubic_from_six_points() {
        let f = make_extension(101, 1).unwrap();
        let t = through6(&standard_points(&f)).unwrap();
        assert_eq!(t.quadrics(), standard_ideal(&f).as_slice());
        for (p, param) in standard_points(&f).iter().zip(t.params()) {
            assert_eq!(&t.phi().eval_param(param).unwrap(), p);
        }
    }

    #[test]
    fn order_does_not_matter() {
        let f = make_extension(101, 1).unwrap();
        let mut pts = standard_points(&f);
        let a = through6(&pts).unwrap();
        pts.reverse();
        pts.swap(1, 4);
        let b = through6(&pts).unwrap();
        assert_eq!(a.quadrics(), b.quadrics());
    }

    #[test]
    fn coordinate_frame_plus_two() {
        let f = make_extension(101, 1).unwrap();
        let pts: Vec<ProjPoint> = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1], [1, 2, 4, 8]]
            .iter()
            .map(|c| ProjPoint::from_i64(&f, c).unwrap())
            .collect();
        let t = through6(&pts).unwrap();
        assert!(pts.iter().all(|p| contains(&t, p)));
    }

    #[test]
    fn coplanar_input_rejected() {
        let f = make_extension(101, 1).unwrap();
        let mut pts = standard_points(&f);
        pts[5] = ProjPoint::from_i64(&f, &[1, 1, 0, 0]).unwrap();
        pts[4] = ProjPoint::from_i64(&f, &[0, 1, 0, 0]).unwrap();
        assert!(matches!(through6(&pts), Err(CubicError::NotGeneralPosition { .. })));
    }

    #[test]
    fn membership() {
        let f = make_extension(101, 1).unwrap();
        let t = TwistedCubic::from_phi(standard_phi(&f)).unwrap();
        assert!(contains(&t, &ProjPoint::from_i64(&f, &[1, 5, 25, 125]).unwrap()));
        assert!(!contains(&t, &ProjPoint::from_i64(&f, &[0, 1, 0, 0]).unwrap()));
    }

    #[test]
    fn parameters() {
        let f = make_extension(101, 1).unwrap();
        let t = TwistedCubic::from_phi(standard_phi(&f)).unwrap();
        let p = point_param(&t, &ProjPoint::from_i64(&f, &[1, 2, 4, 8]).unwrap()).unwrap();
        assert_eq!(p, ProjPoint::from_i64(&f, &[1, 2]).unwrap());
        let inf = point_param(&t, &ProjPoint::from_i64(&f, &[0, 0, 0, 1]).unwrap()).unwrap();
        assert_eq!(inf, ProjPoint::from_i64(&f, &[0, 1]).unwrap());
        assert_eq!(
            point_param(&t, &ProjPoint::from_i64(&f, &[0, 1, 0, 0]).unwrap()),
            Err(CubicError::NotOnCurve)
        );
    }

    #[test]
    fn planar_cubic_rejected() {
        // (s³ : s²t : t³ : s³ + t³) lies in the plane x3 = x0 + x2
        let f = make_extension(101, 1).unwrap();
        let form = |c: [i64; 4]| BinaryForm::new(&f, c.iter().map(|&x| f.from_i64(x)).collect());
        let phi = CurveParam::new(vec![form([1, 0, 0, 0]), form([0, 1, 0, 0]), form([0, 0, 0, 1]), form([1, 0, 0, 1])]);
        assert!(matches!(quadric_space(&phi), Err(CubicError::BadParametrization(_))));
    }

    #[test]
    fn works_over_extension_and_rationals() {
        let f = make_extension(7, 2).unwrap();
        let g = f.generator();
        let pts: Vec<ProjPoint> = [f.zero(), f.one(), g.clone(), &g + &f.one(), g.square()]
            .iter()
            .map(|t| ProjPoint::new(vec![f.one(), t.clone(), t.square(), &t.square() * t]).unwrap())
            .chain(std::iter::once(ProjPoint::from_i64(&f, &[0, 0, 0, 1]).unwrap()))
            .collect();
        let t = through6(&pts).unwrap();
        assert_eq!(t.quadrics(), standard_ideal(&f).as_slice());
        let q = FieldDesc::rationals();
        let t = through6(&standard_points(&q)).unwrap();
        assert_eq!(t.quadrics(), standard_ideal(&q).as_slice());
    }
}
