mod common;

use bc_tori::local::{hilbert, Place};
use bc_tori::qforms::{equivalent, DiagForm, Scope};
use bc_tori::rational::{frac, int, Rational};
use common::padic::{hilbert_oracle, witt_index_oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_entry(rng: &mut impl Rng, height: i64) -> Rational {
    loop {
        let n = rng.gen_range(-height..=height);
        let d = rng.gen_range(1..=height);
        if n != 0 {
            return frac(n, d);
        }
    }
}

#[test]
fn hilbert_at_two_matches_search_oracle() {
    for a in -12i64..=12 {
        for b in -12i64..=12 {
            if a == 0 || b == 0 {
                continue;
            }
            let closed = hilbert(&int(a), &int(b), Place::Prime(2)).unwrap();
            assert_eq!(closed, hilbert_oracle(&int(a), &int(b), 2), "({a},{b})_2");
        }
    }
    assert_eq!(hilbert_oracle(&int(-1), &int(-1), 2), -1);
    assert_eq!(hilbert_oracle(&int(-1), &int(-1), 7), 1);
}

#[test]
fn hilbert_odd_primes_match_search_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let a = random_entry(&mut rng, 30);
        let b = random_entry(&mut rng, 30);
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(
                hilbert(&a, &b, Place::Prime(p)).unwrap(),
                hilbert_oracle(&a, &b, p),
                "({a},{b})_{p}"
            );
        }
    }
}

#[test]
fn witt_examples_match_oracle() {
    let four = DiagForm::from_ints(&[1, 1, 1, 1]).unwrap();
    assert_eq!(witt_index_oracle(four.entries(), 2), 0);
    let seven = DiagForm::from_ints(&[-1; 7]).unwrap();
    assert_eq!(witt_index_oracle(seven.entries(), 3), 3);
    assert_eq!(seven.witt_index(Place::Prime(3)).unwrap().witt_index, 3);
    // 7⟨−1⟩ is split at every finite place
    assert_eq!(witt_index_oracle(seven.entries(), 2), 3);
    assert_eq!(seven.witt_index(Place::Prime(2)).unwrap().witt_index, 3);
}

#[test]
fn invariant_witt_index_matches_oracle_on_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..150 {
        let dim = rng.gen_range(1..=5);
        let entries: Vec<Rational> = (0..dim).map(|_| random_entry(&mut rng, 20)).collect();
        let q = DiagForm::new(entries).unwrap();
        for v in q.support().unwrap() {
            let Place::Prime(p) = v else { continue };
            let w = q.witt_index(v).unwrap();
            assert_eq!(w.witt_index, witt_index_oracle(q.entries(), p), "{q} at {p}");
            assert_eq!(2 * w.witt_index + w.anisotropic_dim, dim);
            assert!(w.anisotropic_dim <= 4);
        }
    }
}

#[test]
fn hyperbolic_plane_raises_witt_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = DiagForm::from_ints(&[1, -1]).unwrap();
    for _ in 0..100 {
        let dim = rng.gen_range(1..=4);
        let q = DiagForm::new((0..dim).map(|_| random_entry(&mut rng, 20)).collect()).unwrap();
        let qh = q.orthogonal_sum(&h);
        for v in q.support().unwrap() {
            assert_eq!(
                qh.witt_index(v).unwrap().witt_index,
                q.witt_index(v).unwrap().witt_index + 1
            );
        }
    }
}

/// Bounded-height search for an explicit isometry of 2- and 3-dimensional
/// diagonal forms: columns of the transformation are vectors of q2 whose
/// images represent the entries of q1 and are mutually orthogonal.
fn explicit_isometry(q1: &DiagForm, q2: &DiagForm, bound: i64) -> bool {
    let n = q1.dim();
    let b = q2.entries();
    let mut vecs: Vec<Vec<Rational>> = Vec::new();
    let range: Vec<Rational> = {
        let mut r = Vec::new();
        for num in -bound..=bound {
            for den in 1..=5 {
                r.push(frac(num, den));
            }
        }
        r.sort();
        r.dedup();
        r
    };
    let mut idx = vec![0usize; n];
    loop {
        vecs.push(idx.iter().map(|&i| range[i].clone()).collect());
        let mut k = 0;
        loop {
            if k == n {
                break;
            }
            idx[k] += 1;
            if idx[k] < range.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    let qv = |v: &[Rational]| -> Rational { (0..n).map(|i| &b[i] * &v[i] * &v[i]).sum() };
    let bil = |u: &[Rational], v: &[Rational]| -> Rational { (0..n).map(|i| &b[i] * &u[i] * &v[i]).sum() };
    let by_value: Vec<Vec<&Vec<Rational>>> = q1
        .entries()
        .iter()
        .map(|a| vecs.iter().filter(|v| &qv(v) == a).collect())
        .collect();
    fn pick<'a>(
        k: usize,
        chosen: &mut Vec<&'a Vec<Rational>>,
        by_value: &[Vec<&'a Vec<Rational>>],
        bil: &dyn Fn(&[Rational], &[Rational]) -> Rational,
    ) -> bool {
        if k == by_value.len() {
            return true;
        }
        for v in &by_value[k] {
            if chosen.iter().all(|u| bil(u, v) == int(0)) {
                chosen.push(v);
                if pick(k + 1, chosen, by_value, bil) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    pick(0, &mut Vec::new(), &by_value, &bil)
}

#[test]
fn global_equivalence_agrees_with_isometry_search() {
    let pairs: &[(&[i64], &[i64])] = &[
        (&[1, 1], &[2, 2]),
        (&[1, 1], &[5, 5]),
        (&[1, 1], &[3, 3]),
        (&[1, -1], &[2, -2]),
        (&[1, 2], &[3, 6]),
        (&[1, 2], &[1, 3]),
        (&[1, 1, 1], &[1, 2, 2]),
        (&[1, 1, 1], &[3, 3, 3]),
        (&[1, 1, -1], &[2, 2, -1]),
        (&[1, -1, -1], &[1, 1, -1]),
    ];
    for (a, b) in pairs {
        let q1 = DiagForm::from_ints(a).unwrap();
        let q2 = DiagForm::from_ints(b).unwrap();
        let by_invariants = equivalent(&q1, &q2, Scope::Global).unwrap();
        let by_search = explicit_isometry(&q1, &q2, 3);
        // the search is bounded, so it can only confirm positives
        if by_search {
            assert!(by_invariants, "{q1} vs {q2}");
        }
        if by_invariants {
            assert!(by_search, "invariants say equivalent but no isometry found: {q1} vs {q2}");
        }
        let all_local = q1
            .support()
            .unwrap()
            .into_iter()
            .chain(q2.support().unwrap())
            .all(|v| equivalent(&q1, &q2, Scope::Local(v)).unwrap());
        assert_eq!(all_local, by_invariants);
    }
}
