use rand::Rng;
use splitorder::dvr::{elementary_divisors, in_split_order, lambda_membership, LocalMatrix};
use splitorder::rng::trial_rng;
use splitorder::{
    divisor_invariance_check, general_membership, incident, intersect_in_apartment, intersect_maximal, sample,
    Apartment, ApartmentVertex,
};

#[test]
fn identity_apartment_matches_standard_operations() {
    for t in 0..100 {
        let mut rng = trial_rng(41, t);
        let n = rng.random_range(2..=3);
        let p = [2, 3, 5][rng.random_range(0..3)];
        let ap = Apartment::standard(n, p).unwrap();
        let count = rng.random_range(1..=4);
        let verts = sample::vertices(&mut rng, n, count, -2, 2).unwrap();
        let s = intersect_in_apartment(&ap, &verts).unwrap();
        assert_eq!(s.nu(), &intersect_maximal(&verts).unwrap());
        let a = sample::local_matrix(&mut rng, n, p, -3, 3).unwrap();
        assert_eq!(general_membership(&s, &a).unwrap(), in_split_order(&a, s.nu()).unwrap());
        for v in &verts {
            assert_eq!(ap.maximal_order_membership(v, &a).unwrap(), lambda_membership(&a, v).unwrap());
        }
    }
}

#[test]
fn divisors_survive_random_change_of_basis() {
    let p = 2;
    let l = LocalMatrix::identity(2, p).unwrap();
    let lp = LocalMatrix::diag_powers(&[1, 2], p).unwrap();
    for t in 0..20 {
        let g = sample::gamma(&mut trial_rng(5, t), 2, p).unwrap();
        assert!(divisor_invariance_check(&g, &l, &lp).unwrap());
        assert_eq!(elementary_divisors(&g.mul(&l).unwrap(), &g.mul(&lp).unwrap()).unwrap(), vec![1, 2]);
    }
    for t in 0..50 {
        let mut rng = trial_rng(6, t);
        let g = sample::gamma(&mut rng, 3, p).unwrap();
        let l = sample::gamma(&mut rng, 3, p).unwrap();
        let lp = sample::gamma(&mut rng, 3, p).unwrap();
        assert!(divisor_invariance_check(&g, &l, &lp).unwrap());
    }
}

#[test]
fn transported_incidence_is_coordinate_incidence() {
    let mut rng = trial_rng(8, 0);
    for _ in 0..30 {
        let ap = Apartment::new(sample::gamma(&mut rng, 3, 3).unwrap()).unwrap();
        let vs = sample::vertices(&mut rng, 3, 5, -1, 1).unwrap();
        for u in &vs {
            for w in &vs {
                let expected = incident(u, w);
                assert_eq!(u != w && ap.incident_by_divisors(u, w).unwrap(), expected, "{u:?} {w:?}");
            }
        }
    }
    // a chamber of the standard apartment: three mutually incident vertices
    let c: Vec<ApartmentVertex> =
        [[0, 0, 0], [0, 1, 1], [0, 0, 1]].iter().map(|x| ApartmentVertex::new(x).unwrap()).collect();
    assert!(incident(&c[0], &c[1]) && incident(&c[1], &c[2]) && incident(&c[0], &c[2]));
}
