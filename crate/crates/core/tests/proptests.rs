//! Property-based invariants of the exterior-algebra kernel over exact
//! rationals: graded commutativity, the contraction anti-derivation rule,
//! and the Hodge star isometry/involution laws for random diagonal
//! metrics.


use proptest::prelude::*;

use g2ccy::alg::altform::AltForm;
use g2ccy::alg::metric::Metric;
use g2ccy::alg::tensor::{SymTensor2, Vector};
use g2ccy::scalar::{rat, Rat};

const DIM: u8 = 7;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_form(degree: u8) -> impl Strategy<Value = AltForm<Rat>> {
    let masks: Vec<u8> = (0u8..128).filter(|m| m.count_ones() == degree as u32).collect();
    proptest::collection::vec((proptest::sample::select(masks), arb_rat()), 0..6).prop_map(
        move |entries| {
            let mut f = AltForm::zero(DIM, degree);
            for (mask, c) in entries {
                f.add_to_mask(mask, c);
            }
            f
        },
    )
}

fn arb_vector() -> impl Strategy<Value = Vector<Rat>> {
    proptest::collection::vec(arb_rat(), 7).prop_map(|cs| {
        let mut v = Vector::zero(7);
        for (i, c) in cs.into_iter().enumerate() {
            v.set(i, c);
        }
        v
    })
}

fn arb_diag_metric() -> impl Strategy<Value = Metric<Rat>> {
    proptest::collection::vec((1i64..=4, 1i64..=3), 7).prop_map(|ds| {
        let mut g = SymTensor2::zero(7);
        for (i, (n, d)) in ds.into_iter().enumerate() {
            // Squared entries keep det g a perfect square, so the volume
            // coefficient stays rational.
            g.set_sym(i, i, rat(n * n, d * d));
        }
        Metric::new(g).expect("positive diagonal")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// a ∧ b = (−1)^{pq} b ∧ a
    #[test]
    fn wedge_graded_commutative(
        (p, a) in (1u8..=3).prop_flat_map(|p| (Just(p), arb_form(p))),
        (q, b) in (1u8..=3).prop_flat_map(|q| (Just(q), arb_form(q))),
    ) {
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        let expected = if (p as u32 * q as u32) % 2 == 1 { ba.neg() } else { ba };
        prop_assert_eq!(ab, expected);
    }

    /// X ⌟ (a ∧ b) = (X ⌟ a) ∧ b + (−1)^p a ∧ (X ⌟ b)
    #[test]
    fn contraction_anti_derivation(
        a in arb_form(2),
        b in arb_form(2),
        x in arb_vector(),
    ) {
        let lhs = a.wedge(&b).contract(&x);
        let mut rhs = a.contract(&x).wedge(&b);
        rhs = rhs.add(&a.wedge(&b.contract(&x)));
        prop_assert_eq!(lhs, rhs);
    }

    /// <a, b> vol = a ∧ ∗b, and ∗ preserves the induced inner product.
    #[test]
    fn star_isometry(
        a in arb_form(3),
        b in arb_form(3),
        g in arb_diag_metric(),
    ) {
        let inner = g.form_inner(&a, &b);
        let wedge = a.wedge(&g.hodge_star(&b));
        prop_assert_eq!(wedge, g.vol().scale(&inner));
        let star_inner = g.form_inner(&g.hodge_star(&a), &g.hodge_star(&b));
        prop_assert_eq!(inner, star_inner);
    }

    /// ∗∗ = (−1)^{k(n−k)} on k-forms in dimension 7 (always +1).
    #[test]
    fn double_star_sign(
        a in (1u8..=6).prop_flat_map(arb_form),
        g in arb_diag_metric(),
    ) {
        let ss = g.hodge_star(&g.hodge_star(&a));
        // k(7-k) is always even, so ** = id in dimension 7.
        prop_assert_eq!(ss, a);
    }

    /// Wedge distributes over addition and is associative.
    #[test]
    fn wedge_bilinear_associative(
        a in arb_form(1),
        b in arb_form(2),
        c in arb_form(2),
    ) {
        prop_assert_eq!(
            a.wedge(&b.add(&c)),
            a.wedge(&b).add(&a.wedge(&c))
        );
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    /// X ⌟ X ⌟ a = 0.
    #[test]
    fn double_contraction_vanishes(a in arb_form(3), x in arb_vector()) {
        prop_assert!(a.contract(&x).contract(&x).is_zero());
    }
}
