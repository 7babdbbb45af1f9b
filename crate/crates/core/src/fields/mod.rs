//! Exact coefficient fields: prime fields `F_p`, extensions `F_{p^k}` and
//! the rationals.
//!
//! A [`FieldDesc`] is a cheap, shareable handle. Extension fields are always
//! presented by the lexicographically least monic irreducible polynomial of
//! their degree (coefficient tuple read from the `x^{k-1}` term down to the
//! constant), so two descriptors built independently for the same `(p, k)`
//! are identical. Embeddings between extensions form a compatible system:
//! `embed` along `a | b | c` agrees with the direct embedding `a | c`.

mod fp;
pub mod factor;
pub mod poly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

pub use factor::{poly_factor, poly_roots, Factorization, DEFAULT_FACTOR_SEED};
pub use poly::UniPoly;

/// Largest supported characteristic; keeps residue products inside `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("characteristic {0} exceeds the supported bound 2^31")]
    CharacteristicTooLarge(u64),
    #[error("cannot map an element of {from} into {to}")]
    IncompatibleDegrees { from: String, to: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("operation not supported over {0}")]
    Unsupported(String),
    #[error("malformed field spec {0:?}")]
    BadSpec(String),
    #[error("coefficient vector of length {len} does not fit {field}")]
    BadCoefficients { len: usize, field: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Extension,
    Rational,
}

struct DescInner {
    kind: FieldKind,
    p: u64,
    k: usize,
    /// Monic modulus, constant term first, length `k + 1` (`x` for prime fields).
    modulus: Vec<u64>,
    /// `frob[i]` = `(g^i)^p` for the generator `g`.
    frob: Vec<Vec<u64>>,
    /// Image of the generator of `F_{p^d}` for every proper divisor `d > 1` of `k`.
    subfield_roots: OnceLock<HashMap<usize, Vec<u64>>>,
}

/// Shared descriptor of a coefficient field.
#[derive(Clone)]
pub struct FieldDesc(Arc<DescInner>);

static REGISTRY: OnceLock<Mutex<HashMap<(u64, usize), FieldDesc>>> = OnceLock::new();

/// Canonical descriptor of `F_{p^k}` (`k = 1` gives the prime field).
pub fn make_extension(p: u64, k: usize) -> Result<FieldDesc, FieldError> {
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if !fp::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(FieldError::CharacteristicTooLarge(p));
    }
    let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = registry.lock().expect("field registry poisoned").get(&(p, k)) {
        return Ok(d.clone());
    }
    let desc = build_desc(p, k);
    let mut guard = registry.lock().expect("field registry poisoned");
    Ok(guard.entry((p, k)).or_insert(desc).clone())
}

fn build_desc(p: u64, k: usize) -> FieldDesc {
    let modulus = if k == 1 { vec![0, 1] } else { least_irreducible(p, k) };
    let kind = if k == 1 { FieldKind::Prime } else { FieldKind::Extension };
    let mut inner = DescInner {
        kind,
        p,
        k,
        modulus,
        frob: Vec::new(),
        subfield_roots: OnceLock::new(),
    };
    if k > 1 {
        let pb = BigUint::from(p);
        let g_p = fp::poly_powmod(&[0, 1], &pb, &inner.modulus, p);
        let mut frob = Vec::with_capacity(k);
        let mut acc = vec![1u64];
        for _ in 0..k {
            frob.push(pad(&acc, k));
            acc = fp::poly_mulmod(&acc, &g_p, &inner.modulus, p);
        }
        inner.frob = frob;
    }
    FieldDesc(Arc::new(inner))
}

/// Enumerate monic degree-`k` polynomials with the `x^{k-1}` coefficient
/// varying slowest and the constant term fastest; return the first irreducible.
fn least_irreducible(p: u64, k: usize) -> Vec<u64> {
    // tuple[0] is the x^{k-1} coefficient, tuple[k-1] the constant term
    let mut tuple = vec![0u64; k];
    loop {
        let mut f: Vec<u64> = tuple.iter().rev().copied().collect();
        f.push(1);
        if f[0] != 0 && fp::is_irreducible(&f, p) {
            return f;
        }
        let mut i = k;
        loop {
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < p {
                break;
            }
            tuple[i] = 0;
            assert!(i > 0, "no irreducible polynomial of degree {k} over F_{p}");
        }
    }
}

fn pad(v: &[u64], k: usize) -> Vec<u64> {
    let mut out = v.to_vec();
    out.resize(k, 0);
    out
}

impl FieldDesc {
    /// The field of rational numbers.
    pub fn rationals() -> FieldDesc {
        static Q: OnceLock<FieldDesc> = OnceLock::new();
        Q.get_or_init(|| {
            FieldDesc(Arc::new(DescInner {
                kind: FieldKind::Rational,
                p: 0,
                k: 1,
                modulus: Vec::new(),
                frob: Vec::new(),
                subfield_roots: OnceLock::new(),
            }))
        })
        .clone()
    }

    pub fn kind(&self) -> FieldKind {
        self.0.kind
    }

    pub fn is_finite(&self) -> bool {
        self.0.kind != FieldKind::Rational
    }

    /// Characteristic (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.k
    }

    /// Defining polynomial, constant term first (extension fields only).
    pub fn modulus(&self) -> Option<&[u64]> {
        (self.0.kind == FieldKind::Extension).then_some(self.0.modulus.as_slice())
    }

    /// Number of elements, `p^k`.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite()
            .then(|| num_traits::pow(BigUint::from(self.0.p), self.0.k))
    }

    /// `p^k` as a machine integer when it fits.
    pub fn order_u128(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        let mut q: u128 = 1;
        for _ in 0..self.0.k {
            q = q.checked_mul(self.0.p as u128)?;
        }
        Some(q)
    }

    /// The canonical descriptor of the degree-`m` extension of this field.
    pub fn extension(&self, m: usize) -> Result<FieldDesc, FieldError> {
        if !self.is_finite() {
            return Err(FieldError::Unsupported("extensions of Q".into()));
        }
        make_extension(self.0.p, self.0.k * m)
    }

    /// Whether `self` is a subfield of `other` (same characteristic, degree divides).
    pub fn divides(&self, other: &FieldDesc) -> bool {
        self.0.p == other.0.p && other.0.k.is_multiple_of(self.0.k) && self.is_finite() == other.is_finite()
    }

    /// Smallest common extension of two finite fields of the same characteristic.
    pub fn join(&self, other: &FieldDesc) -> Result<FieldDesc, FieldError> {
        if self.0.p != other.0.p || !self.is_finite() {
            if self == other {
                return Ok(self.clone());
            }
            return Err(FieldError::IncompatibleDegrees {
                from: self.to_string(),
                to: other.to_string(),
            });
        }
        make_extension(self.0.p, self.0.k.lcm(&other.0.k))
    }

    fn same(&self, other: &FieldDesc) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.kind == other.0.kind)
    }

    fn finite(&self, coeffs: Vec<u64>) -> FieldElement {
        FieldElement {
            desc: self.clone(),
            repr: Repr::Finite(coeffs),
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self.0.kind {
            FieldKind::Rational => FieldElement::rational(BigRational::zero()),
            _ => self.finite(vec![0; self.0.k]),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match self.0.kind {
            FieldKind::Rational => FieldElement::rational(BigRational::from_integer(v.into())),
            _ => {
                let mut c = vec![0; self.0.k];
                c[0] = fp::from_i64(v, self.0.p);
                self.finite(c)
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match self.0.kind {
            FieldKind::Rational => FieldElement::rational(BigRational::from_integer(v.clone())),
            _ => {
                let p = BigInt::from(self.0.p);
                let r = v.mod_floor(&p).to_u64().expect("residue fits u64");
                let mut c = vec![0; self.0.k];
                c[0] = r;
                self.finite(c)
            }
        }
    }

    /// Element with the given coefficients (constant first), reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if !self.is_finite() || coeffs.len() > self.0.k {
            return Err(FieldError::BadCoefficients {
                len: coeffs.len(),
                field: self.to_string(),
            });
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % self.0.p).collect();
        c.resize(self.0.k, 0);
        Ok(self.finite(c))
    }

    /// The class of `x` in `F_p[x]/(modulus)`.
    pub fn generator(&self) -> FieldElement {
        match self.0.kind {
            FieldKind::Extension => {
                let mut c = vec![0; self.0.k];
                c[1] = 1;
                self.finite(c)
            }
            FieldKind::Prime => self.from_i64(0),
            FieldKind::Rational => self.from_i64(1),
        }
    }

    /// Uniformly random element (finite fields only).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        assert!(self.is_finite(), "random elements of Q are not defined");
        let c = (0..self.0.k).map(|_| rng.gen_range(0..self.0.p)).collect();
        self.finite(c)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Every element, in the canonical (lexicographic coefficient) order.
    /// Intended for small fields only.
    pub fn elements(&self) -> Vec<FieldElement> {
        let q = self.order_u128().expect("finite field") as usize;
        let mut out = Vec::with_capacity(q);
        let mut c = vec![0u64; self.0.k];
        for _ in 0..q {
            out.push(self.finite(c.clone()));
            // constant term is the most significant position of the order
            for i in (0..self.0.k).rev() {
                c[i] += 1;
                if c[i] < self.0.p {
                    break;
                }
                c[i] = 0;
            }
        }
        out.sort();
        out
    }

    /// The least generator of the multiplicative group, in element order.
    pub fn primitive_element(&self) -> FieldElement {
        let q = self.order_u128().expect("finite field");
        let qm1 = u64::try_from(q - 1).expect("field order fits in u64");
        let primes = fp::prime_divisors(qm1);
        let mut c = vec![0u64; self.0.k];
        loop {
            for i in (0..self.0.k).rev() {
                c[i] += 1;
                if c[i] < self.0.p {
                    break;
                }
                c[i] = 0;
            }
            let x = self.finite(c.clone());
            if primes.iter().all(|&r| !x.pow_u64(qm1 / r).is_one()) {
                return x;
            }
        }
    }

    /// Image of the generator of the subfield `F_{p^d}` inside this field.
    fn subfield_root(&self, d: usize) -> Vec<u64> {
        debug_assert!(d > 1 && d < self.0.k && self.0.k.is_multiple_of(d));
        let roots = self.0.subfield_roots.get_or_init(|| self.compute_subfield_roots());
        roots[&d].clone()
    }

    /// For each proper divisor `c > 1` of `k`, ascending, choose the least
    /// root of the `F_{p^c}` modulus that is compatible with the roots
    /// already chosen for the divisors of `c`.
    fn compute_subfield_roots(&self) -> HashMap<usize, Vec<u64>> {
        let k = self.0.k;
        let p = self.0.p;
        let mut chosen: HashMap<usize, Vec<u64>> = HashMap::new();
        for c in (2..k).filter(|c| k.is_multiple_of(*c)) {
            let sub = make_extension(p, c).expect("subfield of a valid field");
            let modulus = UniPoly::new(
                self,
                sub.0.modulus.iter().map(|&m| self.from_i64(m as i64)).collect(),
            );
            let roots = poly_roots(&modulus, self).expect("modulus splits in the extension");
            let mut candidates: Vec<FieldElement> = roots.into_iter().map(|(r, _)| r).collect();
            candidates.sort();
            let divisors: Vec<usize> = (2..c).filter(|d| c % d == 0).collect();
            let pick = candidates
                .into_iter()
                .find(|r| {
                    divisors.iter().all(|&d| {
                        let in_sub = sub.subfield_root(d);
                        let image = horner(&in_sub, r);
                        image.coeffs().unwrap() == chosen[&d].as_slice()
                    })
                })
                .expect("compatible embedding exists");
            chosen.insert(c, pick.coeffs().unwrap().to_vec());
        }
        chosen
    }

    fn parse_spec(s: &str) -> Result<FieldDesc, FieldError> {
        let s = s.trim();
        if s == "Q" || s == "q" || s == "0" {
            return Ok(FieldDesc::rationals());
        }
        let bad = || FieldError::BadSpec(s.to_string());
        let (p, k) = match s.split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                k.trim().parse::<usize>().map_err(|_| bad())?,
            ),
            None => (s.parse::<u64>().map_err(|_| bad())?, 1),
        };
        make_extension(p, k)
    }
}

/// Evaluate a polynomial with `F_p` coefficients at an element.
fn horner(coeffs: &[u64], x: &FieldElement) -> FieldElement {
    let d = &x.desc;
    let mut acc = d.zero();
    for &c in coeffs.iter().rev() {
        acc = &(&acc * x) + &d.from_i64(c as i64);
    }
    acc
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}
impl Eq for FieldDesc {}

impl Hash for FieldDesc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.k.hash(state);
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.kind {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime => write!(f, "{}", self.0.p),
            FieldKind::Extension => write!(f, "{}^{}", self.0.p, self.0.k),
        }
    }
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldDesc({self})")
    }
}

impl FromStr for FieldDesc {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldDesc::parse_spec(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Finite(Vec<u64>),
    Rational(BigRational),
}

/// An element of a [`FieldDesc`].
#[derive(Clone)]
pub struct FieldElement {
    desc: FieldDesc,
    repr: Repr,
}

impl FieldElement {
    pub fn rational(q: BigRational) -> FieldElement {
        FieldElement {
            desc: FieldDesc::rationals(),
            repr: Repr::Rational(q),
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.desc
    }

    /// Coefficient vector over `F_p`, constant term first.
    pub fn coeffs(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Finite(c) => Some(c),
            Repr::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Finite(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Finite(c) => c.iter().all(|&x| x == 0),
            Repr::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Finite(c) => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
            Repr::Rational(q) => q.is_one(),
        }
    }

    /// Whether the element lies in the prime field.
    pub fn is_prime_field_element(&self) -> bool {
        match &self.repr {
            Repr::Finite(c) => c[1..].iter().all(|&x| x == 0),
            Repr::Rational(_) => true,
        }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        let repr = match &self.repr {
            Repr::Rational(q) => Repr::Rational(q.recip()),
            Repr::Finite(c) => {
                let p = self.desc.0.p;
                if self.desc.0.k == 1 {
                    Repr::Finite(vec![fp::inv(c[0], p)])
                } else {
                    let mut a = c.clone();
                    fp::trim(&mut a);
                    let r = fp::poly_inv_mod(&a, &self.desc.0.modulus, p).expect("field is a domain");
                    Repr::Finite(pad(&r, self.desc.0.k))
                }
            }
        };
        Some(FieldElement {
            desc: self.desc.clone(),
            repr,
        })
    }

    pub fn square(&self) -> FieldElement {
        self * self
    }

    pub fn pow_u64(&self, e: u64) -> FieldElement {
        self.pow(&BigUint::from(e))
    }

    pub fn pow(&self, e: &BigUint) -> FieldElement {
        let mut acc = self.desc.one();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// `x^(p^r)`; the identity on prime fields and on the rationals.
    pub fn frobenius(&self, r: usize) -> FieldElement {
        let k = self.desc.0.k;
        let Repr::Finite(c) = &self.repr else {
            return self.clone();
        };
        if k == 1 {
            return self.clone();
        }
        let p = self.desc.0.p;
        let mut cur = c.clone();
        for _ in 0..(r % k) {
            let mut next = vec![0u64; k];
            for (i, &ci) in cur.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (j, &f) in self.desc.0.frob[i].iter().enumerate() {
                    next[j] = fp::add(next[j], fp::mul(ci, f, p), p);
                }
            }
            cur = next;
        }
        self.desc.finite(cur)
    }

    /// Unique `p`-th root (finite fields).
    pub fn pth_root(&self) -> FieldElement {
        let k = self.desc.0.k;
        self.frobenius(k - 1)
    }

    /// Image under the canonical embedding into `target`.
    pub fn embed(&self, target: &FieldDesc) -> Result<FieldElement, FieldError> {
        embed(self, target)
    }

    /// Preimage in the subfield `sub`, if the element lies there.
    pub fn descend(&self, sub: &FieldDesc) -> Option<FieldElement> {
        descend(self, sub)
    }
}

/// Canonical embedding of `x ∈ F_{p^a}` into `F_{p^b}`, `a | b`.
pub fn embed(x: &FieldElement, target: &FieldDesc) -> Result<FieldElement, FieldError> {
    if x.desc == *target {
        return Ok(x.clone());
    }
    if !x.desc.divides(target) {
        return Err(FieldError::IncompatibleDegrees {
            from: x.desc.to_string(),
            to: target.to_string(),
        });
    }
    let c = x.coeffs().expect("finite field element");
    let a = x.desc.0.k;
    if a == 1 {
        let mut out = vec![0; target.0.k];
        out[0] = c[0];
        return Ok(target.finite(out));
    }
    let root = target.finite(target.subfield_root(a));
    Ok(horner(c, &root))
}

/// Inverse of [`embed`]: the element of `sub` mapping to `x`, if any.
pub fn descend(x: &FieldElement, sub: &FieldDesc) -> Option<FieldElement> {
    if x.desc == *sub {
        return Some(x.clone());
    }
    if !sub.divides(&x.desc) {
        return None;
    }
    let c = x.coeffs()?;
    let (a, b, p) = (sub.0.k, x.desc.0.k, sub.0.p);
    if a == 1 {
        return c[1..].iter().all(|&v| v == 0).then(|| sub.from_i64(c[0] as i64));
    }
    // columns: images of g^i, i < a; solve sum y_i col_i = x over F_p
    let root = x.desc.finite(x.desc.subfield_root(a));
    let mut cols = Vec::with_capacity(a);
    let mut acc = x.desc.one();
    for _ in 0..a {
        cols.push(acc.coeffs().unwrap().to_vec());
        acc = &acc * &root;
    }
    // augmented b x (a+1) system
    let mut m: Vec<Vec<u64>> = (0..b)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|col| col[r]).collect();
            row.push(c[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a {
        let Some(piv) = (row..b).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, piv);
        let li = fp::inv(m[row][col], p);
        for v in m[row].iter_mut() {
            *v = fp::mul(*v, li, p);
        }
        for r in 0..b {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for j in 0..=a {
                    m[r][j] = fp::sub(m[r][j], fp::mul(f, m[row][j], p), p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| r[a] != 0) {
        return None;
    }
    let mut y = vec![0u64; a];
    for (r, &col) in pivots.iter().enumerate() {
        y[col] = m[r][a];
    }
    Some(sub.finite(y))
}

/// Whether nonzero `x ∈ F_q` is a cube: `x^((q-1)/gcd(3, q-1)) = 1`.
pub fn is_cube(x: &FieldElement) -> Result<bool, FieldError> {
    if x.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    let q = x
        .desc
        .order()
        .ok_or_else(|| FieldError::Unsupported("cube test over Q".into()))?;
    let qm1 = q - 1u32;
    let g = qm1.gcd(&BigUint::from(3u32));
    Ok(x.pow(&(qm1 / g)).is_one())
}

fn check_same(a: &FieldElement, b: &FieldElement) {
    assert!(
        a.desc == b.desc,
        "field mismatch: {} vs {}",
        a.desc,
        b.desc
    );
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => {
                let p = self.desc.0.p;
                Repr::Finite(a.iter().zip(b).map(|(&x, &y)| fp::add(x, y, p)).collect())
            }
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            _ => unreachable!(),
        };
        FieldElement {
            desc: self.desc.clone(),
            repr,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => {
                let p = self.desc.0.p;
                Repr::Finite(a.iter().zip(b).map(|(&x, &y)| fp::sub(x, y, p)).collect())
            }
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a - b),
            _ => unreachable!(),
        };
        FieldElement {
            desc: self.desc.clone(),
            repr,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let repr = match &self.repr {
            Repr::Finite(a) => {
                let p = self.desc.0.p;
                Repr::Finite(a.iter().map(|&x| fp::neg(x, p)).collect())
            }
            Repr::Rational(a) => Repr::Rational(-a),
        };
        FieldElement {
            desc: self.desc.clone(),
            repr,
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        check_same(self, rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => {
                let p = self.desc.0.p;
                let k = self.desc.0.k;
                if k == 1 {
                    Repr::Finite(vec![fp::mul(a[0], b[0], p)])
                } else {
                    Repr::Finite(mul_reduce(a, b, &self.desc.0.modulus, p))
                }
            }
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            _ => unreachable!(),
        };
        FieldElement {
            desc: self.desc.clone(),
            repr,
        }
    }
}

fn mul_reduce(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = a.len();
    // accumulate unreduced products in u128 to defer the modular reductions
    let mut wide = vec![0u128; 2 * k - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            wide[i + j] += (x * y) as u128;
        }
    }
    let mut r: Vec<u64> = wide.iter().map(|&w| (w % p as u128) as u64).collect();
    for i in (k..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for j in 0..k {
            r[i - k + j] = fp::sub(r[i - k + j], fp::mul(c, modulus[j], p), p);
        }
    }
    r.truncate(k);
    r
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc && self.repr == other.repr
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.desc.hash(state);
        self.repr.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: lexicographic on coefficient vectors, constant term first.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.desc.0.p, self.desc.0.k)
            .cmp(&(other.desc.0.p, other.desc.0.k))
            .then_with(|| match (&self.repr, &other.repr) {
                (Repr::Finite(a), Repr::Finite(b)) => a.cmp(b),
                (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) => write!(f, "{q}"),
            Repr::Finite(c) if c.len() == 1 => write!(f, "{}", c[0]),
            Repr::Finite(c) => write!(f, "{c:?}"),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_descriptor() {
        let f7 = make_extension(7, 1).unwrap();
        assert_eq!(f7.kind(), FieldKind::Prime);
        assert_eq!(f7.to_string(), "7");
        assert_eq!(make_extension(4, 2).unwrap_err(), FieldError::NotPrime(4));
    }

    #[test]
    fn f49_modulus_is_least_irreducible_quadratic() {
        // oracle: enumerate (a, b) lexicographically, irreducible iff no root in F_7
        let mut expect = None;
        'outer: for a in 0..7u64 {
            for b in 0..7u64 {
                if (0..7u64).all(|x| (x * x + a * x + b) % 7 != 0) {
                    expect = Some(vec![b, a, 1]);
                    break 'outer;
                }
            }
        }
        let f49 = make_extension(7, 2).unwrap();
        assert_eq!(f49.modulus().unwrap(), expect.unwrap().as_slice());
        assert_eq!(f49.modulus().unwrap(), &[1, 0, 1]);
    }

    #[test]
    fn descriptors_are_canonical() {
        let a = make_extension(101, 3).unwrap();
        let b = build_desc(101, 3);
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("7^2".parse::<FieldDesc>().unwrap(), make_extension(7, 2).unwrap());
        assert_eq!("101".parse::<FieldDesc>().unwrap().degree(), 1);
        assert_eq!("Q".parse::<FieldDesc>().unwrap().kind(), FieldKind::Rational);
        assert!("7^x".parse::<FieldDesc>().is_err());
        assert!("9".parse::<FieldDesc>().is_err());
    }

    #[test]
    fn inverses_in_extension() {
        let f = make_extension(7, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = f.random_nonzero(&mut rng);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn frobenius_examples() {
        let f7 = make_extension(7, 1).unwrap();
        let x = f7.from_i64(3);
        assert_eq!(x.frobenius(5), x);
        let f49 = make_extension(7, 2).unwrap();
        let g = f49.generator();
        assert_eq!(g.frobenius(1), g.pow_u64(7));
        assert_ne!(g.frobenius(1), g);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let y = f49.random(&mut rng);
            assert_eq!(y.frobenius(2), y);
        }
    }

    #[test]
    fn embed_prime_subfield_and_degree_errors() {
        let f7 = make_extension(7, 1).unwrap();
        let f49 = make_extension(7, 2).unwrap();
        let f343 = make_extension(7, 3).unwrap();
        let e = f7.from_i64(5).embed(&f49).unwrap();
        assert_eq!(e.coeffs().unwrap(), &[5, 0]);
        assert!(matches!(
            f49.generator().embed(&f343),
            Err(FieldError::IncompatibleDegrees { .. })
        ));
    }

    #[test]
    fn embed_generator_is_least_root_by_enumeration() {
        let f49 = make_extension(7, 2).unwrap();
        let f2401 = make_extension(7, 4).unwrap();
        // oracle: brute force every element of F_{7^4}
        let m = f49.modulus().unwrap().to_vec();
        let least = f2401
            .elements()
            .into_iter()
            .find(|x| {
                let v = &(&x.square() * &f2401.from_i64(m[2] as i64))
                    + &(&(x * &f2401.from_i64(m[1] as i64)) + &f2401.from_i64(m[0] as i64));
                v.is_zero()
            })
            .unwrap();
        assert_eq!(f49.generator().embed(&f2401).unwrap(), least);
    }

    #[test]
    fn descend_inverts_embed() {
        let f = make_extension(101, 2).unwrap();
        let big = make_extension(101, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = f.random(&mut rng);
            let y = x.embed(&big).unwrap();
            assert_eq!(y.descend(&f), Some(x));
        }
        let g = big.generator();
        assert_eq!(g.descend(&f), None);
    }

    #[test]
    fn cube_classes() {
        let f7 = make_extension(7, 1).unwrap();
        assert!(!is_cube(&f7.from_i64(2)).unwrap());
        assert!(is_cube(&f7.from_i64(6)).unwrap());
        let f343 = make_extension(7, 3).unwrap();
        assert!(is_cube(&f343.from_i64(2)).unwrap());
        assert_eq!(is_cube(&f7.zero()), Err(FieldError::ZeroInput));
    }

    #[test]
    fn cube_enumeration_oracle() {
        let cubes: Vec<u64> = (1..7u64).map(|x| x * x * x % 7).collect();
        let f7 = make_extension(7, 1).unwrap();
        for a in 1..7u64 {
            assert_eq!(is_cube(&f7.from_i64(a as i64)).unwrap(), cubes.contains(&a));
        }
    }

    #[test]
    fn rationals_arithmetic() {
        let q = FieldDesc::rationals();
        let a = q.from_i64(3);
        let b = q.from_i64(-7);
        assert_eq!((&a * &b).as_rational().unwrap(), &BigRational::from_integer((-21).into()));
        assert!((&a * &a.inv().unwrap()).is_one());
        assert_eq!(a.frobenius(3), a);
    }
}
