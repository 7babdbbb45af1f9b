//! Dense univariate polynomials over a [`FieldDesc`].

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;

use super::{FieldDesc, FieldElement, FieldError};

/// Polynomial with coefficients in one field, constant term first.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    desc: FieldDesc,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(desc: &FieldDesc, mut coeffs: Vec<FieldElement>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == desc));
        UniPoly {
            desc: desc.clone(),
            coeffs,
        }
    }

    pub fn from_i64(desc: &FieldDesc, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(desc, coeffs.iter().map(|&c| desc.from_i64(c)).collect())
    }

    pub fn zero(desc: &FieldDesc) -> UniPoly {
        UniPoly::new(desc, Vec::new())
    }

    pub fn constant(c: FieldElement) -> UniPoly {
        let desc = c.field().clone();
        UniPoly::new(&desc, vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &FieldElement) -> UniPoly {
        let desc = r.field().clone();
        UniPoly::new(&desc, vec![-r, desc.one()])
    }

    /// The monomial `x`.
    pub fn x(desc: &FieldDesc) -> UniPoly {
        UniPoly::new(desc, vec![desc.zero(), desc.one()])
    }

    pub fn random<R: Rng + ?Sized>(desc: &FieldDesc, max_degree: usize, rng: &mut R) -> UniPoly {
        UniPoly::new(desc, (0..=max_degree).map(|_| desc.random(rng)).collect())
    }

    pub fn field(&self) -> &FieldDesc {
        &self.desc
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.desc.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(&self.desc, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(&self.desc, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(&self.desc, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.desc, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.desc);
        }
        let mut out = vec![self.desc.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(&self.desc, out)
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::constant(self.desc.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(&self.desc), self.clone());
        }
        let li = divisor.lead().unwrap().inv().unwrap();
        let mut q = vec![self.desc.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = &r[i] * &li;
            for j in 0..=dd {
                r[i - dd + j] = &r[i - dd + j] - &(&c * &divisor.coeffs[j]);
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (UniPoly::new(&self.desc, q), UniPoly::new(&self.desc, r))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Exact quotient, `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            &self.desc,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.desc.from_i64(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.desc.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn mul_mod(&self, other: &UniPoly, modulus: &UniPoly) -> UniPoly {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, e: &BigUint, modulus: &UniPoly) -> UniPoly {
        let base = self.rem(modulus);
        let mut acc = UniPoly::constant(self.desc.one()).rem(modulus);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if e.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }

    /// Whether `gcd(f, f') = 1`.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_one()
    }

    /// Coefficient-wise image in an extension field.
    pub fn embed(&self, target: &FieldDesc) -> Result<UniPoly, FieldError> {
        let c = self
            .coeffs
            .iter()
            .map(|c| c.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UniPoly::new(target, c))
    }

    /// Coefficient-wise preimage in a subfield, if every coefficient lies there.
    pub fn descend(&self, sub: &FieldDesc) -> Option<UniPoly> {
        let c = self
            .coeffs
            .iter()
            .map(|c| c.descend(sub))
            .collect::<Option<Vec<_>>>()?;
        Some(UniPoly::new(sub, c))
    }

    /// Apply `x -> x^(p^r)` to every coefficient.
    pub fn frobenius(&self, r: usize) -> UniPoly {
        UniPoly::new(&self.desc, self.coeffs.iter().map(|c| c.frobenius(r)).collect())
    }
}

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the leading term down.
impl Ord for UniPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_extension;

    #[test]
    fn division_identity() {
        let f = make_extension(101, 1).unwrap();
        let a = UniPoly::from_i64(&f, &[3, 0, 5, 7, 1]);
        let b = UniPoly::from_i64(&f, &[1, 2, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = make_extension(7, 1).unwrap();
        let common = UniPoly::from_i64(&f, &[1, 0, 1]);
        let a = common.mul(&UniPoly::from_i64(&f, &[2, 1]));
        let b = common.mul(&UniPoly::from_i64(&f, &[3, 1]));
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn squarefree_detection() {
        let f = make_extension(7, 1).unwrap();
        let x = UniPoly::x(&f);
        assert!(!x.pow(3).is_squarefree());
        assert!(UniPoly::from_i64(&f, &[1, 0, 1]).is_squarefree());
    }
}
