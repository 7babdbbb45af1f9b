//! Binary forms and parametrized curves `P^1 -> P^3`.
//!
//! A binary form of degree `d` is stored by its `d + 1` coefficients, entry
//! `i` multiplying `s^(d-i) t^i`. Dehomogenizing at `s = 1` gives a
//! [`UniPoly`] in `t`; the root `(0:1)` appears as a drop in degree.

use crate::fields::{FieldDesc, FieldElement, FieldError, UniPoly};
use crate::projgeom::ProjPoint;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    desc: FieldDesc,
    degree: usize,
    coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    pub fn new(desc: &FieldDesc, coeffs: Vec<FieldElement>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm {
            desc: desc.clone(),
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn zero(desc: &FieldDesc, degree: usize) -> BinaryForm {
        BinaryForm::new(desc, vec![desc.zero(); degree + 1])
    }

    pub fn constant(c: FieldElement) -> BinaryForm {
        let desc = c.field().clone();
        BinaryForm::new(&desc, vec![c])
    }

    /// `a s + b t`.
    pub fn linear(a: FieldElement, b: FieldElement) -> BinaryForm {
        let desc = a.field().clone();
        BinaryForm::new(&desc, vec![a, b])
    }

    /// The linear form vanishing at the parameter `(s0:t0)`: `t0 s - s0 t`.
    pub fn vanishing_at(param: &ProjPoint) -> BinaryForm {
        let c = param.coords();
        BinaryForm::linear(c[1].clone(), -&c[0])
    }

    /// Homogenize a polynomial in `t` to the given degree.
    pub fn from_poly(p: &UniPoly, degree: usize) -> BinaryForm {
        assert!(p.degree().is_none_or(|d| d <= degree));
        let coeffs = (0..=degree).map(|i| p.coeff(i)).collect();
        BinaryForm::new(p.field(), coeffs)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.desc
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        BinaryForm::new(
            &self.desc,
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "subtracting forms of different degrees");
        BinaryForm::new(
            &self.desc,
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn scale(&self, c: &FieldElement) -> BinaryForm {
        BinaryForm::new(&self.desc, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![self.desc.zero(); self.degree + other.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BinaryForm::new(&self.desc, out)
    }

    pub fn eval(&self, s: &FieldElement, t: &FieldElement) -> FieldElement {
        // sum c_i s^(d-i) t^i via Horner in the ratio, kept homogeneous
        let mut acc = self.desc.zero();
        let mut s_pow = self.desc.one();
        let mut terms = Vec::with_capacity(self.degree + 1);
        for _ in 0..=self.degree {
            terms.push(s_pow.clone());
            s_pow = &s_pow * s;
        }
        let mut t_pow = self.desc.one();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &(&(c * &terms[self.degree - i]) * &t_pow);
            t_pow = &t_pow * t;
        }
        acc
    }

    pub fn eval_param(&self, param: &ProjPoint) -> FieldElement {
        self.eval(&param.coords()[0], &param.coords()[1])
    }

    /// The polynomial `f(1, t)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(&self.desc, self.coeffs.clone())
    }

    /// Multiplicity of the root `(0:1)`, i.e. `s = 0`.
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// Exact division by another form.
    pub fn div_exact(&self, divisor: &BinaryForm) -> Option<BinaryForm> {
        if divisor.degree > self.degree || divisor.is_zero() {
            return None;
        }
        // strip s-powers separately so the dehomogenized division is exact
        let si = self.infinity_multiplicity();
        let di = divisor.infinity_multiplicity();
        if self.is_zero() {
            return Some(BinaryForm::zero(&self.desc, self.degree - divisor.degree));
        }
        if di > si {
            return None;
        }
        let q = self.dehomogenize().div_exact(&divisor.dehomogenize())?;
        Some(BinaryForm::from_poly(&q, self.degree - divisor.degree))
    }

    /// Monic-normalized homogeneous gcd of a family of nonzero forms.
    pub fn gcd_all(forms: &[BinaryForm]) -> BinaryForm {
        let nonzero: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
        assert!(!nonzero.is_empty(), "gcd of zero forms");
        let desc = nonzero[0].desc.clone();
        let inf = nonzero.iter().map(|f| f.infinity_multiplicity()).min().unwrap();
        let g = nonzero
            .iter()
            .fold(UniPoly::zero(&desc), |acc, f| acc.gcd(&f.dehomogenize()));
        let dg = g.degree().unwrap_or(0);
        BinaryForm::from_poly(&g, dg + inf)
    }

    pub fn embed(&self, target: &FieldDesc) -> Result<BinaryForm, FieldError> {
        let c = self
            .coeffs
            .iter()
            .map(|x| x.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BinaryForm::new(target, c))
    }
}

impl std::fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BinaryForm{:?}", self.coeffs)
    }
}

/// A curve `P^1 -> P^n` given by `n + 1` binary forms of one degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveParam {
    forms: Vec<BinaryForm>,
}

impl CurveParam {
    pub fn new(forms: Vec<BinaryForm>) -> CurveParam {
        assert!(!forms.is_empty());
        let d = forms[0].degree();
        assert!(forms.iter().all(|f| f.degree() == d && f.field() == forms[0].field()));
        CurveParam { forms }
    }

    pub fn forms(&self) -> &[BinaryForm] {
        &self.forms
    }

    pub fn degree(&self) -> usize {
        self.forms[0].degree()
    }

    pub fn field(&self) -> &FieldDesc {
        self.forms[0].field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.forms.len() - 1
    }

    /// Image of `(s:t)`; `None` at a base point.
    pub fn eval(&self, s: &FieldElement, t: &FieldElement) -> Option<ProjPoint> {
        let coords: Vec<FieldElement> = self.forms.iter().map(|f| f.eval(s, t)).collect();
        ProjPoint::new(coords).ok()
    }

    /// Image of a parameter point, embedding the curve into its field first.
    pub fn eval_param(&self, param: &ProjPoint) -> Option<ProjPoint> {
        let target = param.field();
        if target == self.field() {
            return self.eval(&param.coords()[0], &param.coords()[1]);
        }
        self.embed(target).ok()?.eval(&param.coords()[0], &param.coords()[1])
    }

    pub fn embed(&self, target: &FieldDesc) -> Result<CurveParam, FieldError> {
        Ok(CurveParam {
            forms: self
                .forms
                .iter()
                .map(|f| f.embed(target))
                .collect::<Result<_, _>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_extension;

    #[test]
    fn product_and_exact_division() {
        let f = make_extension(101, 1).unwrap();
        let a = BinaryForm::linear(f.from_i64(1), f.from_i64(2));
        let b = BinaryForm::linear(f.from_i64(0), f.from_i64(1)); // t
        let s = BinaryForm::linear(f.from_i64(1), f.from_i64(0)); // s
        let prod = a.mul(&b).mul(&s);
        assert_eq!(prod.degree(), 3);
        assert_eq!(prod.div_exact(&s).unwrap(), a.mul(&b));
        assert_eq!(prod.div_exact(&b).unwrap(), a.mul(&s));
        let g = BinaryForm::gcd_all(&[prod.clone(), s.mul(&s).mul(&b)]);
        assert_eq!(g.degree(), 2);
    }

    #[test]
    fn infinity_multiplicity_counts_top_zeros() {
        let f = make_extension(7, 1).unwrap();
        // s^2 t
        let g = BinaryForm::new(&f, vec![f.zero(), f.one(), f.zero(), f.zero()]);
        assert_eq!(g.infinity_multiplicity(), 2);
        assert!(g.eval(&f.zero(), &f.one()).is_zero());
    }
}
