mod common;

use bc_tori::embed::{discriminant_class, embed_symplectic, embeds_globally, GlobalDecision, InvolutionTarget};
use bc_tori::qforms::{diagonalize, equivalent, DiagForm, Scope};
use bc_tori::rational::int;
use common::algebras::random_algebra;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn discriminant_is_independent_of_b(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_algebra(&mut rng, 3);
        let d = discriminant_class(&e).unwrap();
        for _ in 0..3 {
            let b = e.random_fixed(&mut rng, 4);
            prop_assume!(e.is_invertible(&b));
            let q = e.transfer_form(&b).unwrap();
            prop_assert_eq!(q.det_class().unwrap().as_rational(), d.clone());
        }
    }

    #[test]
    fn symplectic_never_fails(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_algebra(&mut rng, 4);
        prop_assert!(embed_symplectic(&e, seed).is_ok());
    }

    #[test]
    fn embeds_decision_carries_matching_certificate(seed in any::<u64>(), sign in prop::sample::select(vec![1i64, -1])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_algebra(&mut rng, 2).append_fixed().unwrap();
        let l = e.dim() / 2;
        let mut entries = Vec::new();
        for i in 0..l {
            entries.push(int(i as i64 + 1));
            entries.push(int(-(i as i64) - 1));
        }
        entries.push(int(sign * 3));
        let f = DiagForm::new(entries).unwrap();
        let d = embeds_globally(&e, &InvolutionTarget::Orthogonal { form: f.clone() }, seed).unwrap();
        if let GlobalDecision::Embeds { certificate, .. } = d {
            let c = certificate.expect("split targets are constructive");
            prop_assert!(c.witness.unwrap().matches());
            prop_assert!(equivalent(&diagonalize(&c.gram).unwrap(), &f, Scope::Global).unwrap());
        }
    }
}
