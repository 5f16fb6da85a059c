use cext_core::cohomology::second_cohomology;
use cext_core::extension::central_extension;
use cext_core::nullfiliform::act_on_cocycle;
use cext_core::{builtin_variety, Algebra, Automorphism, BilinearForm, FieldSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const VARIETIES: [&str; 6] = [
    "associative",
    "left_commutative",
    "bicommutative",
    "assosymmetric",
    "novikov",
    "left_symmetric",
];

fn field(p: u64) -> FieldSpec {
    if p == 0 {
        FieldSpec::rationals()
    } else {
        FieldSpec::prime(p).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extension_lands_in_variety(
        v in 0..VARIETIES.len(),
        n in 2usize..=5,
        p in prop::sample::select(vec![0u64, 5, 7]),
        coeffs in prop::collection::vec(-3i64..=3, 10),
        seed in any::<u64>(),
    ) {
        let f = field(p);
        let var = builtin_variety(VARIETIES[v]).unwrap();
        let a = Algebra::null_filiform(n, f).unwrap();
        let h = second_cohomology(&a, &var).unwrap();
        let mut theta = BilinearForm::zero(f, n);
        for (z, c) in h.z_basis().iter().zip(&coeffs) {
            theta = theta.add_scaled(&f.from_i64(*c), z);
        }
        let ext = central_extension(&h, std::slice::from_ref(&theta)).unwrap();
        prop_assert!(ext.extended.satisfies_variety(&var).unwrap());
        prop_assert_eq!(ext.annihilator_dim, ext.extended.annihilator().dim());
        prop_assert_eq!(ext.non_split, !h.reduce_class(&theta).unwrap().iter().all(|s| s.is_zero()));

        // Flags only depend on the Aut-orbit of θ.
        let phi = Automorphism::random(n, f, &mut ChaCha8Rng::seed_from_u64(seed));
        let moved = act_on_cocycle(&phi, &theta).unwrap();
        let ext2 = central_extension(&h, &[moved]).unwrap();
        prop_assert_eq!(ext.flags(), ext2.flags());
    }
}
