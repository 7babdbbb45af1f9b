//! Projective points, flats and Galois-stable point clusters in `P^n`.
//!
//! Points are normalized so the first nonzero coordinate is 1, which makes
//! equality a coordinate comparison. Flats are row spaces kept in reduced
//! echelon form. A [`PointCluster`] is a weighted set of geometric points
//! together with the ground field `k`; when it is stable under the
//! `k`-Frobenius it is a `k`-point of a symmetric power.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::fields::{FieldDesc, FieldElement, FieldError};
use crate::forms::{BinaryForm, CurveParam};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("points are equal")]
    EqualPoints,
    #[error("cluster is not stable under the base Frobenius")]
    NotStable,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("empty point list")]
    Empty,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point of `P^n` with normalized coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    pub fn new(mut coords: Vec<FieldElement>) -> Result<ProjPoint, GeomError> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(GeomError::ZeroVector)?
            .inv()
            .unwrap();
        if !lead.is_one() {
            for c in coords.iter_mut() {
                *c = &*c * &lead;
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(desc: &FieldDesc, coords: &[i64]) -> Result<ProjPoint, GeomError> {
        ProjPoint::new(coords.iter().map(|&c| desc.from_i64(c)).collect())
    }

    /// A uniformly random point of `P^n(F_q)`.
    pub fn random<R: rand::Rng + ?Sized>(desc: &FieldDesc, n: usize, rng: &mut R) -> ProjPoint {
        loop {
            if let Ok(p) = ProjPoint::new((0..=n).map(|_| desc.random(rng)).collect()) {
                return p;
            }
        }
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> &FieldDesc {
        self.coords[0].field()
    }

    pub fn embed(&self, target: &FieldDesc) -> Result<ProjPoint, FieldError> {
        Ok(ProjPoint {
            coords: self
                .coords
                .iter()
                .map(|c| c.embed(target))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn descend(&self, sub: &FieldDesc) -> Option<ProjPoint> {
        Some(ProjPoint {
            coords: self
                .coords
                .iter()
                .map(|c| c.descend(sub))
                .collect::<Option<_>>()?,
        })
    }

    pub fn frobenius(&self, r: usize) -> ProjPoint {
        // normalization is preserved: 1 and 0 are fixed
        ProjPoint {
            coords: self.coords.iter().map(|c| c.frobenius(r)).collect(),
        }
    }

    /// Size of the orbit under `x -> x^|base|`.
    pub fn orbit_size(&self, base: &FieldDesc) -> usize {
        if !base.is_finite() {
            return 1;
        }
        let step = base.degree();
        let mut q = self.frobenius(step);
        let mut n = 1;
        while q != *self {
            q = q.frobenius(step);
            n += 1;
        }
        n
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Determinant of `n + 1` points of `P^n`.
pub fn det_points(points: &[&ProjPoint]) -> FieldElement {
    let desc = points[0].field().clone();
    let m: linalg::Matrix = points.iter().map(|p| p.coords.clone()).collect();
    linalg::det(&m, &desc)
}

/// Bring all points into their smallest common field.
pub fn common_field(points: &[&ProjPoint]) -> Result<(FieldDesc, Vec<ProjPoint>), GeomError> {
    let first = points.first().ok_or(GeomError::Empty)?;
    let mut field = first.field().clone();
    for p in &points[1..] {
        field = field.join(p.field())?;
    }
    let lifted = points
        .iter()
        .map(|p| p.embed(&field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((field, lifted))
}

/// A flat in `P^n`: the projectivized row space of an echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearSubspace {
    ambient: usize,
    field: FieldDesc,
    basis: Vec<Vec<FieldElement>>,
}

impl LinearSubspace {
    pub fn from_rows(field: &FieldDesc, ambient: usize, rows: Vec<Vec<FieldElement>>) -> LinearSubspace {
        let (basis, _) = linalg::rref(&rows, ambient + 1, field);
        LinearSubspace {
            ambient,
            field: field.clone(),
            basis,
        }
    }

    /// The flat cut out by the given linear forms.
    pub fn from_equations(field: &FieldDesc, ambient: usize, eqs: Vec<Vec<FieldElement>>) -> LinearSubspace {
        let basis = linalg::kernel(&eqs, ambient + 1, field);
        LinearSubspace {
            ambient,
            field: field.clone(),
            basis,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    /// Projective dimension; `-1` for the empty flat.
    pub fn dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Linear forms cutting out the flat, in echelon form.
    pub fn equations(&self) -> Vec<Vec<FieldElement>> {
        linalg::kernel(&self.basis, self.ambient + 1, &self.field)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        let (flat, p) = match self.lift_with(p) {
            Some(pair) => pair,
            None => return false,
        };
        flat.equations().iter().all(|eq| {
            eq.iter()
                .zip(p.coords())
                .fold(flat.field.zero(), |acc, (a, b)| &acc + &(a * b))
                .is_zero()
        })
    }

    /// Whether every point of `self` lies in `other`.
    pub fn is_contained_in(&self, other: &LinearSubspace) -> bool {
        self.basis.iter().all(|row| {
            ProjPoint::new(row.clone()).map_or(true, |p| other.contains(&p))
        })
    }

    /// The single point of a 0-dimensional flat.
    pub fn as_point(&self) -> Option<ProjPoint> {
        (self.basis.len() == 1).then(|| ProjPoint::new(self.basis[0].clone()).unwrap())
    }

    pub fn embed(&self, target: &FieldDesc) -> Result<LinearSubspace, FieldError> {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|c| c.embed(target)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinearSubspace {
            ambient: self.ambient,
            field: target.clone(),
            basis: rows,
        })
    }

    pub fn descend(&self, sub: &FieldDesc) -> Option<LinearSubspace> {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|c| c.descend(sub)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(LinearSubspace {
            ambient: self.ambient,
            field: sub.clone(),
            basis: rows,
        })
    }

    pub fn frobenius(&self, r: usize) -> LinearSubspace {
        let rows = self
            .basis
            .iter()
            .map(|row| row.iter().map(|c| c.frobenius(r)).collect())
            .collect();
        LinearSubspace::from_rows(&self.field, self.ambient, rows)
    }

    fn lift_with(&self, p: &ProjPoint) -> Option<(LinearSubspace, ProjPoint)> {
        if p.dim() != self.ambient {
            return None;
        }
        if p.field() == &self.field {
            return Some((self.clone(), p.clone()));
        }
        let f = self.field.join(p.field()).ok()?;
        Some((self.embed(&f).ok()?, p.embed(&f).ok()?))
    }
}

impl fmt::Debug for LinearSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flat(dim {}, rows {:?})", self.dim(), self.basis)
    }
}

/// Smallest flat containing the points.
pub fn span(points: &[ProjPoint]) -> Result<LinearSubspace, GeomError> {
    let refs: Vec<&ProjPoint> = points.iter().collect();
    let (field, lifted) = common_field(&refs)?;
    let n = lifted[0].dim();
    if let Some(bad) = lifted.iter().find(|p| p.dim() != n) {
        return Err(GeomError::DimensionMismatch(n, bad.dim()));
    }
    let rows = lifted.into_iter().map(|p| p.coords).collect();
    Ok(LinearSubspace::from_rows(&field, n, rows))
}

/// Join of two flats.
pub fn join(a: &LinearSubspace, b: &LinearSubspace) -> Result<LinearSubspace, GeomError> {
    if a.ambient != b.ambient {
        return Err(GeomError::DimensionMismatch(a.ambient, b.ambient));
    }
    let f = a.field.join(&b.field)?;
    let (a, b) = (a.embed(&f)?, b.embed(&f)?);
    let rows = a.basis.iter().chain(&b.basis).cloned().collect();
    Ok(LinearSubspace::from_rows(&f, a.ambient, rows))
}

/// Intersection of two flats (empty flat has dimension -1).
pub fn meet(a: &LinearSubspace, b: &LinearSubspace) -> Result<LinearSubspace, GeomError> {
    if a.ambient != b.ambient {
        return Err(GeomError::DimensionMismatch(a.ambient, b.ambient));
    }
    let f = a.field.join(&b.field)?;
    let (a, b) = (a.embed(&f)?, b.embed(&f)?);
    let mut eqs = a.equations();
    eqs.extend(b.equations());
    Ok(LinearSubspace::from_equations(&f, a.ambient, eqs))
}

/// Indices of a coplanar quadruple among six points of `P^3`, if any.
pub fn coplanar_quadruple(points: &[ProjPoint]) -> Option<[usize; 4]> {
    assert_eq!(points.len(), 6, "expected six points");
    let refs: Vec<&ProjPoint> = points.iter().collect();
    let (_, lifted) = common_field(&refs).expect("points share a characteristic");
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                for d in c + 1..6 {
                    let quad = [&lifted[a], &lifted[b], &lifted[c], &lifted[d]];
                    if det_points(&quad).is_zero() {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// No four of the six points lie in a plane.
pub fn general_position6(points: &[ProjPoint]) -> bool {
    coplanar_quadruple(points).is_none()
}

/// The line `(s:t) -> sP + tQ`.
pub fn param_line(p: &ProjPoint, q: &ProjPoint) -> Result<CurveParam, GeomError> {
    if p == q {
        return Err(GeomError::EqualPoints);
    }
    let (_, pts) = common_field(&[p, q])?;
    let forms = pts[0]
        .coords()
        .iter()
        .zip(pts[1].coords())
        .map(|(a, b)| BinaryForm::linear(a.clone(), b.clone()))
        .collect();
    Ok(CurveParam::new(forms))
}

/// Parametrize a line flat by its echelon basis rows.
pub fn line_param(line: &LinearSubspace) -> Option<CurveParam> {
    if line.dim() != 1 {
        return None;
    }
    let p = ProjPoint::new(line.basis[0].clone()).ok()?;
    let q = ProjPoint::new(line.basis[1].clone()).ok()?;
    param_line(&p, &q).ok()
}

/// Parameter `(s:t)` of a point on a line parametrization `sP + tQ`.
pub fn line_point_param(line: &CurveParam, point: &ProjPoint) -> Option<ProjPoint> {
    assert_eq!(line.degree(), 1);
    let f = line.field().join(point.field()).ok()?;
    let line = line.embed(&f).ok()?;
    let point = point.embed(&f).ok()?;
    // columns P and Q; solve a P + b Q = point
    let m: linalg::Matrix = line
        .forms()
        .iter()
        .map(|form| form.coeffs().to_vec())
        .collect();
    let x = linalg::solve(&m, point.coords(), 2, &f)?;
    ProjPoint::new(x).ok()
}

/// A weighted set of geometric points over a common field, with its ground field.
///
/// Always stored canonically: the field is the smallest extension of the
/// base containing every point, and points are sorted with equal points
/// merged. Structural equality is therefore equality of zero-cycles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointCluster {
    base: FieldDesc,
    field: FieldDesc,
    points: Vec<(ProjPoint, usize)>,
}

impl PointCluster {
    pub fn new(base: &FieldDesc, points: Vec<(ProjPoint, usize)>) -> Result<PointCluster, GeomError> {
        if !base.is_finite() {
            let mut pts = points;
            pts.sort();
            return Ok(PointCluster {
                base: base.clone(),
                field: base.clone(),
                points: merge(pts),
            });
        }
        let mut m = 1usize;
        let mut minimal = Vec::with_capacity(points.len());
        for (p, mult) in points {
            if !base.divides(p.field()) {
                return Err(FieldError::IncompatibleDegrees {
                    from: p.field().to_string(),
                    to: base.to_string(),
                }
                .into());
            }
            let o = p.orbit_size(base);
            m = m.lcm(&o);
            let own = base.extension(o)?;
            let p = p.descend(&own).expect("point lies in its field of definition");
            minimal.push((p, mult));
        }
        let field = base.extension(m)?;
        let mut pts = Vec::with_capacity(minimal.len());
        for (p, mult) in minimal {
            pts.push((p.embed(&field)?, mult));
        }
        pts.sort();
        Ok(PointCluster {
            base: base.clone(),
            field,
            points: merge(pts),
        })
    }

    /// Reduced cluster of distinct points.
    pub fn reduced(base: &FieldDesc, points: Vec<ProjPoint>) -> Result<PointCluster, GeomError> {
        PointCluster::new(base, points.into_iter().map(|p| (p, 1)).collect())
    }

    pub fn empty(base: &FieldDesc) -> PointCluster {
        PointCluster {
            base: base.clone(),
            field: base.clone(),
            points: Vec::new(),
        }
    }

    pub fn base(&self) -> &FieldDesc {
        &self.base
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn points(&self) -> &[(ProjPoint, usize)] {
        &self.points
    }

    /// Distinct points, without multiplicities.
    pub fn support(&self) -> Vec<ProjPoint> {
        self.points.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn degree(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.points.iter().all(|(_, m)| *m == 1)
    }

    pub fn multiplicity(&self, p: &ProjPoint) -> usize {
        let Ok(p) = lower_to(p, &self.base, &self.field) else {
            return 0;
        };
        self.points
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |(_, m)| *m)
    }

    /// Points lifted into a given extension of the cluster field.
    pub fn points_in(&self, target: &FieldDesc) -> Result<Vec<(ProjPoint, usize)>, GeomError> {
        self.points
            .iter()
            .map(|(p, m)| Ok((p.embed(target)?, *m)))
            .collect()
    }

    /// Sizes of the base-Frobenius orbits of the distinct points.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.points.len()];
        let mut sizes = Vec::new();
        for i in 0..self.points.len() {
            if seen[i] {
                continue;
            }
            let p = &self.points[i].0;
            let n = p.orbit_size(&self.base);
            let mut q = p.clone();
            for _ in 0..n {
                if let Some(j) = self.points.iter().position(|(x, _)| *x == q) {
                    seen[j] = true;
                }
                q = q.frobenius(self.base.degree());
            }
            sizes.push(n);
        }
        sizes.sort_unstable();
        sizes
    }

    /// Multiset sum.
    pub fn union(&self, other: &PointCluster) -> Result<PointCluster, GeomError> {
        let f = self.field.join(&other.field)?;
        let mut pts = self.points_in(&f)?;
        pts.extend(other.points_in(&f)?);
        PointCluster::new(&self.base, pts)
    }

    /// Multiset difference; `None` if `other` is not contained in `self`.
    pub fn difference(&self, other: &PointCluster) -> Result<Option<PointCluster>, GeomError> {
        let f = self.field.join(&other.field)?;
        let mut pts = self.points_in(&f)?;
        for (q, m) in other.points_in(&f)? {
            match pts.iter_mut().find(|(p, _)| *p == q) {
                Some(entry) if entry.1 >= m => entry.1 -= m,
                _ => return Ok(None),
            }
        }
        pts.retain(|(_, m)| *m > 0);
        Ok(Some(PointCluster::new(&self.base, pts)?))
    }

    /// Whether the two clusters share a point.
    pub fn meets(&self, other: &PointCluster) -> bool {
        other.points.iter().any(|(p, _)| self.multiplicity(p) > 0)
    }

    /// Apply the base Frobenius to every point.
    pub fn frobenius_image(&self) -> PointCluster {
        let step = if self.base.is_finite() { self.base.degree() } else { 0 };
        let mut pts: Vec<(ProjPoint, usize)> = self
            .points
            .iter()
            .map(|(p, m)| (p.frobenius(step), *m))
            .collect();
        pts.sort();
        PointCluster {
            base: self.base.clone(),
            field: self.field.clone(),
            points: pts,
        }
    }

    /// Base-Frobenius permutes the weighted point list.
    pub fn frobenius_stable(&self) -> bool {
        self.frobenius_image() == *self
    }

    /// Span of a Frobenius-stable cluster, returned over the base field.
    pub fn rational_span(&self) -> Result<LinearSubspace, GeomError> {
        if !self.frobenius_stable() {
            return Err(GeomError::NotStable);
        }
        let flat = span(&self.support())?;
        Ok(flat
            .descend(&self.base)
            .expect("span of a stable cluster is rational"))
    }
}

fn merge(pts: Vec<(ProjPoint, usize)>) -> Vec<(ProjPoint, usize)> {
    let mut out: Vec<(ProjPoint, usize)> = Vec::with_capacity(pts.len());
    for (p, m) in pts {
        match out.last_mut() {
            Some((q, n)) if *q == p => *n += m,
            _ => out.push((p, m)),
        }
    }
    out
}

/// Move a point into `field` through its own field of definition.
fn lower_to(p: &ProjPoint, base: &FieldDesc, field: &FieldDesc) -> Result<ProjPoint, GeomError> {
    if p.field().divides(field) {
        return Ok(p.embed(field)?);
    }
    if !base.is_finite() {
        return Err(GeomError::NotStable);
    }
    let own = base.extension(p.orbit_size(base))?;
    let p = p.descend(&own).ok_or(GeomError::NotStable)?;
    Ok(p.embed(field)?)
}

impl fmt::Debug for PointCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cluster[{} over {}]{:?}", self.field, self.base, self.points)
    }
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
    fn normalization_is_scale_invariant() {
        let f = make_extension(101, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p = ProjPoint::random(&f, 3, &mut rng);
            let c = f.random_nonzero(&mut rng);
            let scaled = ProjPoint::new(p.coords().iter().map(|x| x * &c).collect()).unwrap();
            assert_eq!(p, scaled);
        }
    }

    #[test]
    fn span_examples() {
        let f = make_extension(101, 1).unwrap();
        let l = span(&[pt(&f, &[1, 0, 0, 0]), pt(&f, &[0, 1, 0, 0])]).unwrap();
        assert_eq!(l.dim(), 1);
        let eqs = LinearSubspace::from_equations(
            &f,
            3,
            vec![
                vec![f.zero(), f.zero(), f.one(), f.zero()],
                vec![f.zero(), f.zero(), f.zero(), f.one()],
            ],
        );
        assert_eq!(l, eqs);
        let p = pt(&f, &[1, 2, 3, 4]);
        assert_eq!(span(&[p.clone(), p.clone()]).unwrap().as_point(), Some(p));
    }

    #[test]
    fn meet_examples() {
        let f = make_extension(101, 1).unwrap();
        let line = span(&[pt(&f, &[1, 0, 0, 0]), pt(&f, &[0, 1, 0, 0])]).unwrap();
        let plane = LinearSubspace::from_equations(&f, 3, vec![vec![f.one(), f.zero(), f.zero(), f.zero()]]);
        assert_eq!(meet(&line, &plane).unwrap().as_point(), Some(pt(&f, &[0, 1, 0, 0])));
        assert_eq!(meet(&plane, &plane).unwrap(), plane);
        let l1 = span(&[pt(&f, &[1, 0, 0, 0]), pt(&f, &[0, 1, 0, 0])]).unwrap();
        let l2 = span(&[pt(&f, &[0, 0, 1, 0]), pt(&f, &[0, 0, 0, 1])]).unwrap();
        assert_eq!(meet(&l1, &l2).unwrap().dim(), -1);
    }

    #[test]
    fn general_position_examples() {
        let f = make_extension(101, 1).unwrap();
        let six = vec![
            pt(&f, &[1, 0, 0, 0]),
            pt(&f, &[0, 1, 0, 0]),
            pt(&f, &[0, 0, 1, 0]),
            pt(&f, &[0, 0, 0, 1]),
            pt(&f, &[1, 1, 1, 1]),
            pt(&f, &[1, 2, 4, 8]),
        ];
        assert!(general_position6(&six));
        let mut flat = six.clone();
        flat[3] = pt(&f, &[1, 1, 5, 0]);
        flat[4] = pt(&f, &[3, 1, 1, 0]);
        assert!(!general_position6(&flat));
        // standard twisted cubic at t = 0, inf, 1, 2, 3, 4
        let mut cubic = vec![pt(&f, &[0, 0, 0, 1])];
        for t in [0i64, 1, 2, 3, 4] {
            cubic.push(pt(&f, &[1, t, t * t, t * t * t]));
        }
        assert!(general_position6(&cubic));
    }

    #[test]
    fn param_line_examples() {
        let f = make_extension(7, 1).unwrap();
        let l = param_line(&pt(&f, &[1, 0, 0, 0]), &pt(&f, &[0, 0, 0, 1])).unwrap();
        assert_eq!(l.eval(&f.one(), &f.zero()).unwrap(), pt(&f, &[1, 0, 0, 0]));
        assert_eq!(l.eval(&f.from_i64(2), &f.from_i64(3)).unwrap(), pt(&f, &[2, 0, 0, 3]));
        let l = param_line(&pt(&f, &[1, -1, 0, 0]), &pt(&f, &[0, 1, -1, 0])).unwrap();
        // (s : t - s : -t : 0) at s = 2, t = 5
        assert_eq!(l.eval(&f.from_i64(2), &f.from_i64(5)).unwrap(), pt(&f, &[2, 3, -5, 0]));
        let p = pt(&f, &[1, 2, 3, 4]);
        assert_eq!(param_line(&p, &p).unwrap_err(), GeomError::EqualPoints);
    }

    #[test]
    fn conjugate_pair_span_is_rational() {
        let f = make_extension(101, 1).unwrap();
        let f2 = make_extension(101, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = ProjPoint::random(&f2, 3, &mut rng);
        let c = PointCluster::reduced(&f, vec![p.clone(), p.frobenius(1)]).unwrap();
        assert!(c.frobenius_stable());
        let line = c.rational_span().unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(line.field(), &f);
        let o = pt(&f, &[1, 0, 0, 0]);
        let plane = span(&[o, p.clone(), p.frobenius(1)]).unwrap();
        assert_eq!(plane.dim(), 2);
        assert!(plane.descend(&f).is_some());
        assert_eq!(plane.frobenius(1), plane);
    }

    #[test]
    fn stability_examples() {
        let f = make_extension(101, 1).unwrap();
        let f2 = make_extension(101, 2).unwrap();
        let a = pt(&f, &[1, 2, 3, 4]);
        let b = pt(&f, &[0, 1, 5, 9]);
        assert!(PointCluster::reduced(&f, vec![a.clone(), b]).unwrap().frobenius_stable());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = ProjPoint::random(&f2, 3, &mut rng);
        let bad = PointCluster::reduced(&f, vec![p, a.clone()]).unwrap();
        assert!(!bad.frobenius_stable());
        assert_eq!(bad.rational_span().unwrap_err(), GeomError::NotStable);
        let single = PointCluster::reduced(&f, vec![a.clone()]).unwrap();
        assert_eq!(single.rational_span().unwrap().as_point(), Some(a));
    }

    #[test]
    fn cluster_canonical_field_and_difference() {
        let f = make_extension(101, 1).unwrap();
        let f6 = make_extension(101, 6).unwrap();
        let a = pt(&f, &[1, 2, 3, 4]).embed(&f6).unwrap();
        let c = PointCluster::reduced(&f, vec![a.clone()]).unwrap();
        assert_eq!(c.field(), &f);
        let b = pt(&f, &[0, 0, 1, 7]);
        let both = c.union(&PointCluster::reduced(&f, vec![b.clone()]).unwrap()).unwrap();
        assert_eq!(both.degree(), 2);
        let rest = both.difference(&c).unwrap().unwrap();
        assert_eq!(rest.support(), vec![b]);
        assert!(c.difference(&both).unwrap().is_none());
    }
}
