//! Nontrivial zeros of diagonal cubic forms `Σ a_i x_i³` over tame finite
//! extensions of `Q_p`, `p ≠ 3`.
//!
//! Over `K = K_f(π)`, `π^e = p ζ̃`, each coefficient is `π^v · unit`, and
//! only the valuation vector `v` and the unit residues matter. The decision
//! procedure is a valuation descent: if the residue equation on the
//! variables with `v_i = 0` has a nontrivial zero it is smooth (the
//! gradient `3 u_i x_i²` is a unit) and lifts by Hensel's lemma; otherwise
//! every zero has `π | x_i` on those variables, and substituting
//! `x_i ← π x_i` moves to a new valuation vector. The state space is
//! finite, so the walk either finds a liftable residue zero or revisits a
//! state, and a revisited state proves there is no zero at all.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::fields::{make_extension, FieldDesc, FieldElement, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("degree {d} is divisible by p = {p}: wild extensions are not handled")]
    WildDegree { p: u64, d: u32 },
    #[error("p = 3 is not supported")]
    PrimeThree,
    #[error("ramification index {e} is divisible by p = {p}")]
    WildRamification { p: u64, e: u32 },
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The tame extension `K_f(π)`, `π^e = p ζ̃`, of `Q_p`, where `K_f` is
/// unramified of degree `f` and `ζ̃` is the Teichmüller lift of `ζ`.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalFieldDesc {
    p: u64,
    e: u32,
    f: u32,
    zeta: FieldElement,
}

impl LocalFieldDesc {
    pub fn new(p: u64, e: u32, f: u32, zeta: FieldElement) -> Result<LocalFieldDesc, LocalError> {
        if p == 3 {
            return Err(LocalError::PrimeThree);
        }
        if e == 0 || f == 0 {
            return Err(FieldError::ZeroDegree.into());
        }
        if u64::from(e) % p == 0 {
            return Err(LocalError::WildRamification { p, e });
        }
        let residue = make_extension(p, f as usize)?;
        let zeta = zeta.embed(&residue)?;
        if zeta.is_zero() {
            return Err(FieldError::ZeroInput.into());
        }
        Ok(LocalFieldDesc { p, e, f, zeta })
    }

    /// `Q_p` itself.
    pub fn unramified(p: u64, f: u32) -> Result<LocalFieldDesc, LocalError> {
        let residue = make_extension(p, f as usize)?;
        LocalFieldDesc::new(p, 1, f, residue.one())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    pub fn degree(&self) -> u32 {
        self.e * self.f
    }

    pub fn residue_field(&self) -> &FieldDesc {
        self.zeta.field()
    }
}

impl fmt::Debug for LocalFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(e={}, f={}, zeta={})", self.p, self.e, self.f, self.zeta)
    }
}

/// Valuations (in powers of `π`, minimum 0) and unit residues of the four
/// coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DescentState {
    pub v: [u32; 4],
    pub u: [FieldElement; 4],
}

impl DescentState {
    /// Indices with valuation 0.
    pub fn active(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.v[i] == 0).collect()
    }

    /// `x_i ← π x_i` on the active set, then divide the form by the
    /// lowest power of `π`.
    pub fn descend(&self) -> DescentState {
        let mut v = self.v;
        for i in self.active() {
            v[i] += 3;
        }
        let m = *v.iter().min().unwrap();
        for x in v.iter_mut() {
            *x -= m;
        }
        DescentState { v, u: self.u.clone() }
    }
}

/// Outcome of the residue-field search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ResidueSolution {
    NoNontrivial,
    /// A zero of `Σ_{i∈S} u_i x_i³`, indexed like `S`.
    Witness(Vec<FieldElement>),
}

/// Whether `Σ_{i∈S} u_i x_i³ = 0` has a nontrivial zero over the residue
/// field. Variables range over cube values: the first nonzero one is scaled
/// to 1, the middle ones run over all cube values and the last is solved by
/// a membership test.
pub fn residue_solvable(s: &[usize], u: &[FieldElement]) -> ResidueSolution {
    assert!(!s.is_empty(), "active set must be nonempty");
    let field = u[s[0]].field().clone();
    // cube value -> least cube root
    let mut roots: HashMap<FieldElement, FieldElement> = HashMap::new();
    for x in field.elements() {
        roots.entry(x.pow_u64(3)).or_insert(x);
    }
    let mut cubes: Vec<FieldElement> = roots.keys().cloned().collect();
    cubes.sort();
    let coef: Vec<&FieldElement> = s.iter().map(|&i| &u[i]).collect();
    let k = s.len();
    if k == 1 {
        return ResidueSolution::NoNontrivial;
    }
    for first in 0..k - 1 {
        // x_j = 0 for j < first, x_first = 1
        let middle = k - first - 2;
        let mut idx = vec![0usize; middle];
        loop {
            let mut sum = coef[first].clone();
            for (m, &ci) in idx.iter().enumerate() {
                sum = &sum + &(coef[first + 1 + m] * &cubes[ci]);
            }
            let need = -&(&sum * &coef[k - 1].inv().unwrap());
            if let Some(root) = roots.get(&need) {
                let mut x = vec![field.zero(); k];
                x[first] = field.one();
                for (m, &ci) in idx.iter().enumerate() {
                    x[first + 1 + m] = roots[&cubes[ci]].clone();
                }
                x[k - 1] = root.clone();
                return ResidueSolution::Witness(x);
            }
            // advance the odometer over cube values
            let mut pos = 0;
            loop {
                if pos == middle {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < cubes.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == middle {
                break;
            }
        }
    }
    ResidueSolution::NoNontrivial
}

fn valuation(mut a: i64, p: u64) -> (u32, i64) {
    let p = p as i64;
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    (v, a)
}

/// Valuations and unit residues of `a_i` over `K`, using `p = π^e ζ̃^{-1}`.
pub fn to_state(coeffs: &[i64], k: &LocalFieldDesc) -> Result<DescentState, LocalError> {
    if coeffs.len() != 4 {
        return Err(LocalError::CoefficientCount {
            expected: 4,
            got: coeffs.len(),
        });
    }
    if let Some(i) = coeffs.iter().position(|&a| a == 0) {
        return Err(LocalError::ZeroCoefficient(i));
    }
    let residue = k.residue_field();
    let zeta_inv = k.zeta.inv().expect("zeta is a unit");
    let mut v = [0u32; 4];
    let mut u: Vec<FieldElement> = Vec::with_capacity(4);
    for (i, &a) in coeffs.iter().enumerate() {
        let (vp, unit) = valuation(a, k.p);
        v[i] = k.e * vp;
        u.push(&residue.from_i64(unit) * &zeta_inv.pow_u64(u64::from(vp)));
    }
    let m = *v.iter().min().unwrap();
    for x in v.iter_mut() {
        *x -= m;
    }
    Ok(DescentState {
        v,
        u: u.try_into().expect("four units"),
    })
}

/// A decided instance with its certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SolubilityVerdict {
    /// A smooth residue zero on `active`, zero elsewhere, at `state`.
    Soluble {
        state: DescentState,
        active: Vec<usize>,
        witness: [FieldElement; 4],
    },
    /// Visited states; the last equals an earlier one.
    Insoluble { trace: Vec<DescentState> },
}

impl SolubilityVerdict {
    pub fn is_soluble(&self) -> bool {
        matches!(self, SolubilityVerdict::Soluble { .. })
    }

    /// Valuation vectors of an insolubility trace.
    pub fn trace_valuations(&self) -> Vec<[u32; 4]> {
        match self {
            SolubilityVerdict::Insoluble { trace } => trace.iter().map(|s| s.v).collect(),
            SolubilityVerdict::Soluble { .. } => Vec::new(),
        }
    }

    /// Replay the certificate against the initial state of `coeffs` over `k`.
    pub fn verify(&self, coeffs: &[i64], k: &LocalFieldDesc) -> bool {
        let Ok(start) = to_state(coeffs, k) else {
            return false;
        };
        match self {
            SolubilityVerdict::Soluble { state, active, witness } => {
                // the state must be reachable from the start by descent
                let mut s = start;
                let mut steps = 0;
                while s != *state {
                    s = s.descend();
                    steps += 1;
                    if steps > 64 {
                        return false;
                    }
                }
                let residue = k.residue_field();
                let three = residue.from_i64(3);
                let sum = active
                    .iter()
                    .fold(residue.zero(), |acc, &i| &acc + &(&state.u[i] * &witness[i].pow_u64(3)));
                let outside_zero = (0..4).filter(|i| !active.contains(i)).all(|i| witness[i].is_zero());
                let smooth = active
                    .iter()
                    .any(|&i| !(&(&three * &state.u[i]) * &witness[i].square()).is_zero());
                *active == state.active() && sum.is_zero() && outside_zero && smooth
            }
            SolubilityVerdict::Insoluble { trace } => {
                if trace.first() != Some(&start) || trace.len() < 2 {
                    return false;
                }
                for w in trace.windows(2) {
                    if residue_solvable(&w[0].active(), &w[0].u) != ResidueSolution::NoNontrivial {
                        return false;
                    }
                    if w[0].descend() != w[1] {
                        return false;
                    }
                }
                let last = trace.last().unwrap();
                trace[..trace.len() - 1].contains(last)
            }
        }
    }
}

/// Decide whether `Σ a_i x_i³ = 0` has a nontrivial zero over `K`.
pub fn soluble(coeffs: &[i64], k: &LocalFieldDesc) -> Result<SolubilityVerdict, LocalError> {
    let mut state = to_state(coeffs, k)?;
    let mut trace: Vec<DescentState> = Vec::new();
    loop {
        if trace.contains(&state) {
            trace.push(state);
            return Ok(SolubilityVerdict::Insoluble { trace });
        }
        let active = state.active();
        if let ResidueSolution::Witness(x) = residue_solvable(&active, &state.u) {
            let residue = k.residue_field();
            let mut witness: [FieldElement; 4] = std::array::from_fn(|_| residue.zero());
            for (&i, xi) in active.iter().zip(x) {
                witness[i] = xi;
            }
            return Ok(SolubilityVerdict::Soluble { state, active, witness });
        }
        let next = state.descend();
        trace.push(state);
        state = next;
    }
}

/// Descriptors covering every extension of `Q_p` of degree `d` (tame case),
/// ordered by ramification index, then by `ζ = γ^j` for the least
/// primitive element `γ` of the residue field.
pub fn enumerate_tame_extensions(p: u64, d: u32) -> Result<Vec<LocalFieldDesc>, LocalError> {
    if d == 0 {
        return Err(FieldError::ZeroDegree.into());
    }
    if u64::from(d) % p == 0 {
        return Err(LocalError::WildDegree { p, d });
    }
    let mut out = Vec::new();
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        let f = d / e;
        let residue = make_extension(p, f as usize)?;
        let q = residue.order_u128().expect("finite") as u64;
        let classes = u64::from(e).gcd(&(q - 1));
        let gamma = residue.primitive_element();
        for j in 0..classes {
            out.push(LocalFieldDesc::new(p, e, f, gamma.pow_u64(j))?);
        }
    }
    Ok(out)
}

/// Verdicts for every descriptor of one degree.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub degree: u32,
    pub verdicts: Vec<(LocalFieldDesc, SolubilityVerdict)>,
}

impl DegreeReport {
    pub fn any_soluble(&self) -> bool {
        self.verdicts.iter().any(|(_, v)| v.is_soluble())
    }
}

/// Whether the `n`-th symmetric power has no `Q_p`-point, with the verdicts
/// per degree.
#[derive(Clone, Debug)]
pub struct SymnReport {
    pub n: u32,
    pub empty: bool,
    pub degrees: Vec<DegreeReport>,
    /// A partition of `n` into degrees with points, when one exists.
    pub witness_partition: Option<Vec<u32>>,
}

/// A `Q_p`-point of `X^(n)` is a zero-cycle built from closed points whose
/// degrees partition `n`; it exists iff some partition uses only degrees
/// over which `X` has points.
pub fn symn_empty(coeffs: &[i64], p: u64, n: u32) -> Result<SymnReport, LocalError> {
    let mut degrees = Vec::new();
    for d in 1..=n {
        let verdicts = enumerate_tame_extensions(p, d)?
            .into_iter()
            .map(|k| soluble(coeffs, &k).map(|v| (k, v)))
            .collect::<Result<Vec<_>, _>>()?;
        degrees.push(DegreeReport { degree: d, verdicts });
    }
    let good: Vec<u32> = degrees.iter().filter(|r| r.any_soluble()).map(|r| r.degree).collect();
    let witness_partition = partition_with_parts(n, &good);
    Ok(SymnReport {
        n,
        empty: witness_partition.is_none(),
        degrees,
        witness_partition,
    })
}

/// Some partition of `n` (parts in decreasing order) using only `parts`.
fn partition_with_parts(n: u32, parts: &[u32]) -> Option<Vec<u32>> {
    fn go(rest: u32, max: u32, parts: &[u32], acc: &mut Vec<u32>) -> bool {
        if rest == 0 {
            return true;
        }
        for &d in parts.iter().rev() {
            if d <= rest && d <= max {
                acc.push(d);
                if go(rest - d, d, parts, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut acc = Vec::new();
    go(n, n, &sorted, &mut acc).then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: [i64; 4] = [1, 7, 49, -2];

    #[test]
    fn initial_states() {
        let q7 = LocalFieldDesc::unramified(7, 1).unwrap();
        let s = to_state(&EXAMPLE, &q7).unwrap();
        let f7 = q7.residue_field().clone();
        assert_eq!(s.v, [0, 1, 2, 0]);
        assert_eq!(s.u, [1, 1, 1, 5].map(|x| f7.from_i64(x)));
        let ram = LocalFieldDesc::new(7, 2, 1, f7.one()).unwrap();
        let s = to_state(&EXAMPLE, &ram).unwrap();
        assert_eq!(s.v, [0, 2, 4, 0]);
        assert_eq!(s.u, [1, 1, 1, 5].map(|x| f7.from_i64(x)));
        assert_eq!(to_state(&[0, 1, 1, 1], &q7).unwrap_err(), LocalError::ZeroCoefficient(0));
    }

    #[test]
    fn residue_examples() {
        let f7 = make_extension(7, 1).unwrap();
        let u = [1, 1, 1, 5].map(|x| f7.from_i64(x));
        assert_eq!(residue_solvable(&[0, 3], &u), ResidueSolution::NoNontrivial);
        let f343 = make_extension(7, 3).unwrap();
        let u3 = [1, 1, 1, 5].map(|x| f343.from_i64(x));
        assert!(matches!(residue_solvable(&[0, 3], &u3), ResidueSolution::Witness(_)));
        assert!(matches!(residue_solvable(&[0, 1, 2, 3], &u), ResidueSolution::Witness(_)));
    }

    #[test]
    fn example_over_q7_cycles() {
        let q7 = LocalFieldDesc::unramified(7, 1).unwrap();
        let v = soluble(&EXAMPLE, &q7).unwrap();
        assert_eq!(v.trace_valuations(), vec![[0, 1, 2, 0], [2, 0, 1, 2], [1, 2, 0, 1], [0, 1, 2, 0]]);
        assert!(v.verify(&EXAMPLE, &q7));
    }

    #[test]
    fn unramified_cubic_is_soluble() {
        let k = LocalFieldDesc::unramified(7, 3).unwrap();
        let v = soluble(&EXAMPLE, &k).unwrap();
        assert!(v.is_soluble());
        assert!(v.verify(&EXAMPLE, &k));
    }

    #[test]
    fn fermat_soluble_over_q7() {
        let q7 = LocalFieldDesc::unramified(7, 1).unwrap();
        let v = soluble(&[1, 1, 1, 1], &q7).unwrap();
        match &v {
            SolubilityVerdict::Soluble { active, .. } => assert_eq!(active, &vec![0, 1, 2, 3]),
            _ => panic!("expected a witness"),
        }
        assert!(v.verify(&[1, 1, 1, 1], &q7));
    }

    #[test]
    fn extension_counts() {
        assert_eq!(enumerate_tame_extensions(7, 1).unwrap().len(), 1);
        let two = enumerate_tame_extensions(7, 2).unwrap();
        assert_eq!(two.len(), 3);
        let zetas: Vec<FieldElement> = two.iter().filter(|k| k.e() == 2).map(|k| k.zeta().clone()).collect();
        let f7 = make_extension(7, 1).unwrap();
        assert_eq!(zetas, vec![f7.from_i64(1), f7.from_i64(3)]);
        let four = enumerate_tame_extensions(7, 4).unwrap();
        let sizes: Vec<(u32, usize)> = [1, 2, 4]
            .iter()
            .map(|&e| (e, four.iter().filter(|k| k.e() == e).count()))
            .collect();
        assert_eq!(sizes, vec![(1, 1), (2, 2), (4, 2)]);
        assert_eq!(enumerate_tame_extensions(7, 7).unwrap_err(), LocalError::WildDegree { p: 7, d: 7 });
    }

    #[test]
    fn symmetric_powers() {
        let r4 = symn_empty(&EXAMPLE, 7, 4).unwrap();
        assert!(r4.empty);
        let r3 = symn_empty(&EXAMPLE, 7, 3).unwrap();
        assert!(!r3.empty);
        assert_eq!(r3.witness_partition, Some(vec![3]));
        assert!(!symn_empty(&[1, 1, 1, 1], 7, 1).unwrap().empty);
    }
}
