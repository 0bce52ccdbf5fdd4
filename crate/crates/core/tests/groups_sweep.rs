use bc_tori::groups::{is_twin, same_isogeny_tori, same_isomorphism_tori, GroupB, GroupC, Isogeny, QuaternionAlgebra};
use bc_tori::local::{hilbert, Place};
use bc_tori::qforms::DiagForm;
use bc_tori::rational::{int, ints};

fn b_groups() -> Vec<GroupB> {
    let forms: [&[i64]; 5] = [
        &[-1; 7],
        &[1; 7],
        &[1, 1, 1, -1, -1, -1, 1],
        &[1, -1, 1, -1, 1, -1, 2],
        &[1, -1, 1, -1, 3, -3, 5],
    ];
    forms
        .iter()
        .map(|q| GroupB::new(DiagForm::from_ints(q).unwrap(), Isogeny::Adjoint).unwrap())
        .collect()
}

#[test]
fn quaternion_sweep() {
    let bs = b_groups();
    let aniso = &bs[0];
    let mut twins = 0;
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            if a == 0 || b == 0 {
                continue;
            }
            let d = QuaternionAlgebra::new(int(a), int(b)).unwrap();
            let ram = d.ramified_places().unwrap();
            assert_eq!(ram.len() % 2, 0);
            if ram.contains(&Place::Real) {
                assert!(ram.iter().any(|v| !v.is_real()));
            }
            for h in [[1, 1, 1], [1, -1, 1]] {
                let g2 = GroupC::new(d.clone(), ints(&h), Isogeny::SimplyConnected).unwrap();
                for v in d.support().unwrap() {
                    let split = hilbert(&int(a), &int(b), v).unwrap() == 1;
                    assert_eq!(g2.local_rank(v).unwrap() == 3, split, "({a},{b}) at {v}");
                }
                if ram.contains(&Place::Real) {
                    assert!(!is_twin(aniso, &g2).unwrap().twin);
                }
                for g1 in &bs {
                    let t = is_twin(g1, &g2).unwrap();
                    let iso = same_isomorphism_tori(g1, &g2).unwrap();
                    let isog = same_isogeny_tori(g1, &g2).unwrap();
                    assert!(!iso || isog);
                    if isog {
                        for s in &t.certificate {
                            assert_eq!(s.rank1, s.rank2);
                        }
                    }
                    if t.twin {
                        twins += 1;
                        assert!(d.is_split().unwrap());
                        for s in &t.certificate {
                            assert_eq!((s.rank1, s.rank2), (3, 3));
                        }
                    }
                }
            }
        }
    }
    assert!(twins > 0);
}
