use proptest::prelude::*;

use cubsym::localsol::{enumerate_tame_extensions, soluble, LocalFieldDesc};

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-60i64..=-1, 1i64..=60]
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(coeff(), 4)
}

fn q_p(p: u64) -> LocalFieldDesc {
    LocalFieldDesc::unramified(p, 1).unwrap()
}

fn decide(c: &[i64], k: &LocalFieldDesc) -> bool {
    let v = soluble(c, k).unwrap();
    assert!(v.verify(c, k), "certificate for {c:?} over {k:?} does not replay");
    v.is_soluble()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// When `p ≡ 2 (mod 3)` every unit is a cube, and two of the four
    /// valuations agree mod 3, giving a solution of a binary subform.
    #[test]
    fn always_soluble_when_p_is_2_mod_3(c in coeffs(), p in prop::sample::select(vec![5u64, 11, 17, 23])) {
        prop_assert!(decide(&c, &q_p(p)));
    }

    #[test]
    fn invariant_under_permutation(c in coeffs(), p in prop::sample::select(vec![7u64, 13, 19]), perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let k = q_p(p);
        let permuted: Vec<i64> = perm.iter().map(|&i| c[i]).collect();
        prop_assert_eq!(decide(&c, &k), decide(&permuted, &k));
    }

    #[test]
    fn invariant_under_common_scaling(c in coeffs(), s in coeff(), p in prop::sample::select(vec![7u64, 13])) {
        let k = q_p(p);
        let scaled: Vec<i64> = c.iter().map(|a| a * s).collect();
        prop_assert_eq!(decide(&c, &k), decide(&scaled, &k));
    }

    /// `a x³` and `p³ a (x/p)³` define the same equation.
    #[test]
    fn invariant_under_cubes_of_p(c in coeffs(), i in 0usize..4, p in prop::sample::select(vec![7u64, 13])) {
        let k = q_p(p);
        let mut moved = c.clone();
        moved[i] *= (p * p * p) as i64;
        prop_assert_eq!(decide(&c, &k), decide(&moved, &k));
    }

    #[test]
    fn invariant_under_unit_cubes(c in coeffs(), i in 0usize..4, u in 1i64..=6) {
        let k = q_p(7);
        let mut moved = c.clone();
        moved[i] *= u * u * u;
        prop_assert_eq!(decide(&c, &k), decide(&moved, &k));
    }

    /// `a x³ - a m³ y³` vanishes at `(m, 1)`.
    #[test]
    fn explicit_binary_zero_is_found(a in coeff(), m in 1i64..=4, rest in prop::collection::vec(coeff(), 2), p in prop::sample::select(vec![7u64, 13, 19])) {
        let c = vec![a, -a * m * m * m, rest[0], rest[1]];
        prop_assert!(decide(&c, &q_p(p)));
    }

    /// A point over `K` stays a point over every extension of `K`.
    #[test]
    fn solubility_persists_in_extensions(c in coeffs()) {
        if decide(&c, &q_p(7)) {
            for d in [2, 4] {
                for k in enumerate_tame_extensions(7, d).unwrap() {
                    prop_assert!(decide(&c, &k));
                }
            }
        }
    }
}

#[test]
fn enumeration_counts_for_q7() {
    let counts: Vec<usize> = [1, 2, 3, 4]
        .iter()
        .map(|&d| enumerate_tame_extensions(7, d).unwrap().len())
        .collect();
    assert_eq!(counts[0], 1);
    assert_eq!(counts[1], 3);
    assert!(counts[3] >= 5);
    for d in [1, 2, 3, 4] {
        for k in enumerate_tame_extensions(7, d).unwrap() {
            assert_eq!(k.degree(), d);
        }
    }
}
