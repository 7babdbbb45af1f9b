//! Factorization of univariate polynomials over finite fields:
//! squarefree decomposition, distinct-degree splitting, then
//! Cantor–Zassenhaus equal-degree splitting driven by a seeded RNG.
//!
//! The random choices only affect how a product is split, never which
//! factors come out, and the result is sorted canonically, so the output is
//! identical for every seed.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FieldDesc, FieldElement, FieldError, UniPoly};

/// Seed used by library routines that factor internally.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_f00d;

/// `unit * prod(factor^multiplicity)` with monic irreducible factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn expand(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    /// Least common multiple of the factor degrees: the degree of the
    /// smallest extension over which everything splits.
    pub fn splitting_degree(&self) -> usize {
        use num_integer::Integer;
        self.factors
            .iter()
            .fold(1usize, |acc, (f, _)| acc.lcm(&f.degree().unwrap_or(1).max(1)))
    }
}

/// Factor a nonzero polynomial over a finite field.
pub fn poly_factor(f: &UniPoly, seed: u64) -> Result<Factorization, FieldError> {
    let desc = f.field().clone();
    if !desc.is_finite() {
        return Err(FieldError::Unsupported("factorization over Q".into()));
    }
    let unit = f.lead().ok_or(FieldError::ZeroPolynomial)?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&f.monic()) {
        for (block, d) in distinct_degree(&sqf) {
            let mut pieces = Vec::new();
            equal_degree(&block, d, &mut rng, &mut pieces);
            factors.extend(pieces.into_iter().map(|g| (g, mult)));
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Roots of `f` (embedded into `target`) with multiplicities, sorted.
pub fn poly_roots(f: &UniPoly, target: &FieldDesc) -> Result<Vec<(FieldElement, usize)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let g = f.embed(target)?;
    let fac = poly_factor(&g, DEFAULT_FACTOR_SEED)?;
    let mut roots: Vec<(FieldElement, usize)> = fac
        .factors
        .into_iter()
        .filter(|(h, _)| h.degree() == Some(1))
        .map(|(h, m)| (-&h.coeff(0), m))
        .collect();
    roots.sort();
    Ok(roots)
}

/// Monic squarefree parts with their multiplicities (char-`p` aware).
fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.field().characteristic() as usize;
    let d = f.derivative();
    if d.is_zero() {
        for (h, m) in squarefree_decomposition(&pth_root(f)) {
            out.push((h, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
    }
    if !c.is_one() {
        for (h, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((h, m * p));
        }
    }
    out
}

/// `f^(1/p)` for a polynomial whose derivative vanishes.
fn pth_root(f: &UniPoly) -> UniPoly {
    let p = f.field().characteristic() as usize;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|c| c.pth_root())
        .collect();
    UniPoly::new(f.field(), coeffs)
}

/// Split a monic squarefree polynomial into blocks whose irreducible
/// factors all share one degree.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let desc = f.field().clone();
    let q = desc.order().expect("finite field");
    let x = UniPoly::x(&desc);
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(&q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree() {
        if d > 0 {
            out.push((rest, d));
        }
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of degree-`d` irreducibles.
fn equal_degree(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly>) {
    let n = f.degree().expect("nonzero");
    if n == d {
        out.push(f.clone());
        return;
    }
    let desc = f.field().clone();
    let p = desc.characteristic();
    let q = desc.order().unwrap();
    loop {
        let a = UniPoly::random(&desc, n - 1, rng);
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // absolute trace to F_2: sum of a^(2^i), i < k*d
            let steps = desc.degree() * d;
            let mut term = a.rem(f);
            let mut acc = term.clone();
            for _ in 1..steps {
                term = term.mul_mod(&term, f);
                acc = acc.add(&term);
            }
            acc
        } else {
            let e: BigUint = (num_traits::pow(q.clone(), d) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&UniPoly::constant(desc.one()))
        };
        let g = f.gcd(&b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_exact(&g).expect("gcd divides");
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_extension;

    #[test]
    fn x_squared_minus_two_over_f7() {
        let f7 = make_extension(7, 1).unwrap();
        let f = UniPoly::from_i64(&f7, &[-2, 0, 1]);
        let fac = poly_factor(&f, 1).unwrap();
        let expect = vec![
            (UniPoly::from_i64(&f7, &[-4, 1]), 1),
            (UniPoly::from_i64(&f7, &[-3, 1]), 1),
        ];
        assert_eq!(fac.factors, expect);
    }

    #[test]
    fn x_squared_plus_one_irreducible_over_f7() {
        let f7 = make_extension(7, 1).unwrap();
        let f = UniPoly::from_i64(&f7, &[1, 0, 1]);
        let fac = poly_factor(&f, 1).unwrap();
        assert_eq!(fac.factors, vec![(f.clone(), 1)]);
    }

    #[test]
    fn pure_cube() {
        let f7 = make_extension(7, 1).unwrap();
        let f = UniPoly::from_i64(&f7, &[0, 0, 0, 1]);
        let fac = poly_factor(&f, 5).unwrap();
        assert_eq!(fac.factors, vec![(UniPoly::x(&f7), 3)]);
    }

    #[test]
    fn pth_power_input() {
        // (x^7 + 3)^2 * (x + 1) over F_7: derivative partially vanishes
        let f7 = make_extension(7, 1).unwrap();
        let a = UniPoly::from_i64(&f7, &[3, 0, 0, 0, 0, 0, 0, 1]);
        let f = a.mul(&a).mul(&UniPoly::from_i64(&f7, &[1, 1]));
        let fac = poly_factor(&f, 2).unwrap();
        assert_eq!(fac.expand(), f);
        // x^7 + 3 = (x + 3)^7 in characteristic 7
        assert!(fac.factors.contains(&(UniPoly::from_i64(&f7, &[3, 1]), 14)));
    }

    #[test]
    fn characteristic_two() {
        let f2 = make_extension(2, 1).unwrap();
        // (x^2 + x + 1)(x^3 + x + 1)(x + 1)^2
        let f = UniPoly::from_i64(&f2, &[1, 1, 1])
            .mul(&UniPoly::from_i64(&f2, &[1, 1, 0, 1]))
            .mul(&UniPoly::from_i64(&f2, &[1, 1]).pow(2));
        let fac = poly_factor(&f, 3).unwrap();
        assert_eq!(fac.expand(), f);
        assert_eq!(fac.factors.len(), 3);
        let f4 = make_extension(2, 2).unwrap();
        let roots = poly_roots(&UniPoly::from_i64(&f2, &[1, 1, 1]), &f4).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f7 = make_extension(7, 1).unwrap();
        assert_eq!(poly_factor(&UniPoly::zero(&f7), 0).unwrap_err(), FieldError::ZeroPolynomial);
        assert_eq!(poly_roots(&UniPoly::zero(&f7), &f7).unwrap_err(), FieldError::ZeroPolynomial);
    }

    #[test]
    fn roots_of_irreducible_quadratic_in_f49() {
        let f7 = make_extension(7, 1).unwrap();
        let f49 = make_extension(7, 2).unwrap();
        let f = UniPoly::from_i64(&f7, &[1, 0, 1]);
        let roots = poly_roots(&f, &f49).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].0.frobenius(1), roots[1].0);
        assert!(poly_roots(&UniPoly::from_i64(&f7, &[-5, 1]), &f7).unwrap() == vec![(f7.from_i64(5), 1)]);
    }

    #[test]
    fn seed_independence() {
        let f = make_extension(101, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let g = UniPoly::random(&f, 8, &mut rng);
            if g.is_zero() {
                continue;
            }
            assert_eq!(poly_factor(&g, 1).unwrap(), poly_factor(&g, 999).unwrap());
        }
    }
}
