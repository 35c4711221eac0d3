//! Cross-module invariants: complexes feed filtrations, filtrations feed
//! nerves and towers.

use exitpath_core::complex::{build_exhaustion, face_poset};
use exitpath_core::devissage::{glue_tower, restrict_tower};
use exitpath_core::quasicat::{inner_horn_check, nerve, union_colimit};
use exitpath_core::random;
use exitpath_core::sheaf::ValueKind;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The face posets of an exhaustion form an ω-filtration whose nerves
    /// exhaust the nerve of the whole face poset, and each nerve fills its
    /// inner 2-horns.
    #[test]
    fn exhaustion_levels_are_an_omega_filtration(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let k = random::random_complex(&mut rng, 6, 4, 2);
        let e = random::random_edge_enumeration(&mut rng, &k);
        let ex = build_exhaustion(&k, &e).unwrap();
        prop_assert_eq!(ex.filtration.top(), &face_poset(&k));
        let r = union_colimit(&ex.filtration, 2).unwrap();
        prop_assert!(r.passed());
        for level in ex.filtration.levels() {
            prop_assert!(inner_horn_check(&nerve(level, 2).unwrap(), 2).unwrap().passed());
        }
    }

    /// Restricting a functor on the face poset to the exhaustion levels and
    /// gluing back gives the same functor.
    #[test]
    fn glue_undoes_restriction_along_an_exhaustion(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let k = random::random_complex(&mut rng, 5, 3, 2);
        let e = random::random_edge_enumeration(&mut rng, &k);
        let ex = build_exhaustion(&k, &e).unwrap();
        let f = random::random_functor(&mut rng, ex.filtration.top(), ValueKind::Set, 3);
        let glued = glue_tower(&restrict_tower(&f, &ex.filtration).unwrap()).unwrap();
        prop_assert_eq!(glued, f);
    }
}
