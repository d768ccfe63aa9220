//! Randomized invariants across the layers.

use cover_core::cover::CoverSpec;
use cover_core::exact::{hilbert_symbol, symbol_gauss_sum, Cyclo, Fq, TameElement};
use cover_core::orbits::enumerate_orbits;
use cover_core::propp::{W1Elt, W1Group};
use cover_core::rootdata::{CartanType, Coweight};
use cover_core::scatter::{ChiPoint, ScatterContext, FLOAT_TOLERANCE};
use cover_core::wchar::CharacterContext;
use num_complex::Complex64;
use proptest::prelude::*;

fn cyclo(order: u64) -> impl Strategy<Value = Cyclo> {
    prop::collection::vec(-3i64..=3, order as usize)
        .prop_map(move |counts| Cyclo::from_power_counts(order, &counts))
}

fn small_cover() -> impl Strategy<Value = CoverSpec> {
    use CartanType::*;
    let types = prop::sample::select(vec![(A, 1), (A, 2), (B, 2), (C, 2), (G, 2), (A, 3)]);
    (types, 1u64..=6, prop::sample::select(vec![1i64, -1, 2]))
        .prop_filter_map("cover must exist", |((t, r), n, q)| {
            CoverSpec::simply_connected(t, r, n, q).ok()
        })
}

fn w1_elt(q: u64) -> impl Strategy<Value = W1Elt> {
    (-4i64..=4, 0..q - 1, any::<bool>()).prop_map(|(y, unit_log, reflected)| W1Elt {
        y,
        unit_log,
        reflected,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_arithmetic_is_a_field(a in cyclo(12), b in cyclo(12), c in cyclo(15)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Cyclo::one());
        }
    }

    #[test]
    fn hilbert_symbol_is_bimultiplicative_and_antisymmetric(
        q in prop::sample::select(vec![5u64, 7, 9, 13]),
        m in prop::collection::vec((-3i64..=3, 0i64..12), 3),
        n_div in 0usize..4,
    ) {
        let field = Fq::new(q).unwrap();
        let divisors: Vec<u64> = (1..q).filter(|d| (q - 1) % d == 0).collect();
        let n = divisors[n_div % divisors.len()];
        let [a, b, c] = [0, 1, 2].map(|i| TameElement::new(&field, m[i].0, m[i].1));
        let h = |x: &TameElement, y: &TameElement| hilbert_symbol(&field, n, x, y).unwrap();
        prop_assert_eq!(h(&a.mul(&b), &c), (h(&a, &c) + h(&b, &c)) % n);
        prop_assert_eq!(h(&c, &a.mul(&b)), (h(&c, &a) + h(&c, &b)) % n);
        prop_assert_eq!((h(&a, &b) + h(&b, &a)) % n, 0);
    }

    #[test]
    fn symbol_gauss_sums_have_absolute_value_root_q(
        q in prop::sample::select(vec![3u64, 5, 7, 13]),
        k in -6i64..6,
    ) {
        let field = Fq::new(q).unwrap();
        let n = q - 1;
        let g = symbol_gauss_sum(&field, n, k).unwrap();
        let expected = if k.rem_euclid(n as i64) == 0 { Cyclo::one() } else { Cyclo::from_int(q as i64) };
        prop_assert_eq!(g.norm_sq(), expected);
    }

    #[test]
    fn weyl_group_preserves_the_form(cover in small_cover(), y in prop::collection::vec(-5i64..5, 4), z in prop::collection::vec(-5i64..5, 4)) {
        let d = cover.datum();
        let (y, z) = (&y[..d.dim()], &z[..d.dim()]);
        for i in 0..d.rank() {
            let s = d.reflection(i);
            prop_assert_eq!(s.apply(&s.apply(y)), y.to_vec());
            prop_assert_eq!(cover.bq(&s.apply(y), &s.apply(z)), cover.bq(y, z));
        }
    }

    #[test]
    fn quotient_reduction_is_canonical(cover in small_cover(), y in prop::collection::vec(-9i64..9, 4), k in prop::collection::vec(-3i64..3, 4)) {
        let quotient = cover.quotient().unwrap();
        let d = cover.datum().dim();
        let y = &y[..d];
        let center = cover.y_qn();
        let mut shifted = y.to_vec();
        for (b, &c) in center.basis().iter().zip(&k) {
            for (s, x) in shifted.iter_mut().zip(b) {
                *s += c * x;
            }
        }
        let r = quotient.reduce(y);
        prop_assert_eq!(quotient.reduce(&r), r.clone());
        prop_assert_eq!(quotient.reduce(&shifted), r.clone());
        prop_assert_eq!(quotient.from_index(quotient.index(y)), r);
        // n Y lies in the center
        let n = cover.n() as i64;
        prop_assert!(center.contains(&y.iter().map(|x| n * x).collect::<Vec<_>>()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbits_partition_the_quotient(cover in small_cover(), minus_rho in any::<bool>()) {
        let z = if minus_rho { cover.datum().rho().neg() } else { Coweight::zero(cover.datum().dim()) };
        let census = enumerate_orbits(&cover, &z).unwrap();
        let group = cover.weyl_group().unwrap();
        let total: usize = census.orbits.iter().map(|o| o.size()).sum();
        prop_assert_eq!(total, census.quotient.size());
        for o in &census.orbits {
            prop_assert_eq!(o.size() * o.stabilizer.order(), group.order());
            prop_assert!(o.members.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn regular_whittaker_dimensions_sum_to_the_orbit_size(cover in small_cover()) {
        let census = enumerate_orbits(&cover, &Coweight::zero(cover.datum().dim())).unwrap();
        let ctx = CharacterContext::new(cover.weyl_group().unwrap());
        let phi: Vec<usize> = (0..cover.datum().rank()).collect();
        for o in census.orbits.iter().filter(|o| o.splitting) {
            let total: i64 = ctx.whittaker_regular_all(&census, o, &phi).unwrap().iter().map(|(_, d)| d.dim).sum();
            prop_assert_eq!(total, o.size() as i64);
        }
    }

    #[test]
    fn w1_multiplication_is_associative(
        (q, n, x, y, z) in prop::sample::select(vec![(5u64, 4u64), (7, 6), (7, 3), (13, 4)])
            .prop_flat_map(|(q, n)| (Just(q), Just(n), w1_elt(q), w1_elt(q), w1_elt(q))),
        q_form in prop::sample::select(vec![1i64, -1]),
    ) {
        let cover = CoverSpec::simply_connected(CartanType::A, 1, n, q_form).unwrap();
        let g = W1Group::new(&cover, q).unwrap();
        let lift = |e: &W1Elt| g.mul(e, &W1Elt::IDENTITY);
        let left = g.mul_scaled(&g.mul(&x, &y), &lift(&z));
        let right = g.mul_scaled(&lift(&x), &g.mul(&y, &z));
        prop_assert_eq!(left, right);
        let one = g.mul_scaled(&lift(&x), &g.inverse(&x));
        prop_assert_eq!(one.elt, W1Elt::IDENTITY);
        prop_assert_eq!(one.zeta, 0);
        prop_assert!(g.length(&g.mul(&x, &y).elt) <= g.length(&x) + g.length(&y));
    }

    #[test]
    fn scattering_cocycle_holds_for_random_phases(
        case in prop::sample::select(vec![(CartanType::A, 2u64, 3u64), (CartanType::A, 2, 5), (CartanType::C, 4, 5), (CartanType::G, 2, 5)]),
        phases in prop::collection::vec(0.05f64..6.2, 2),
        minus_rho in any::<bool>(),
    ) {
        let (t, n, q) = case;
        let cover = CoverSpec::simply_connected(t, 2, n, 1).unwrap();
        let z = if minus_rho { cover.datum().rho().neg() } else { Coweight::zero(2) };
        let ctx = ScatterContext::new(&cover, q, &z).unwrap();
        let chi = ChiPoint::new(phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect());
        prop_assert!(ctx.cocycle_check(&chi, FLOAT_TOLERANCE).unwrap().agree);
        prop_assert!(ctx.support_check(&chi).unwrap().passed());
        prop_assert!(ctx.block_check(&chi).unwrap().passed());
    }
}
