use nleibniz::linalg::RowSpace;
use nleibniz::*;

const Q: FieldSpec = FieldSpec::Rational;

fn flat(idx: &[usize], d: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * d + i)
}

fn signatures(n: usize) -> Vec<SignatureVector> {
    let d = n + 1;
    let mut out = vec![SignatureVector::euclidean(d)];
    let mut one_minus = vec!['+'; d];
    one_minus[d - 1] = '-';
    out.push(one_minus.iter().collect::<String>().parse().unwrap());
    let alt: String = (0..d).map(|i| if i % 2 == 0 { '-' } else { '+' }).collect();
    out.push(alt.parse().unwrap());
    out
}

/// Dimension of the kernel of the dual condition on all first-skew cochains.
fn dual_kernel_dim(alg: &NLeibnizAlgebra, problem: Problem) -> usize {
    let shape = CochainShape {
        n: alg.n(),
        dim: alg.dim(),
        degree: 1,
        valued: problem.valued(),
        class: SymmetryClass::FirstSkew,
    };
    let basis = Cochain::basis(shape, Q).unwrap();
    let rank = if problem == Problem::Deformation { 6 } else { 5 };
    let mut space = RowSpace::new(Q, alg.dim().pow(rank));
    for c in &basis {
        let r = dual_cocycle_check(alg, &dualize(c).unwrap()).unwrap();
        let mut row: Vec<(usize, Scalar)> = r.iter().map(|(k, v)| (flat(k, alg.dim()), v.clone())).collect();
        row.sort_by_key(|e| e.0);
        space.insert_sparse(&row).unwrap();
    }
    basis.len() - space.dim()
}

#[test]
fn dual_round_trip() {
    for n in 3..=5 {
        let alg = simple_filippov(n, &SignatureVector::euclidean(n + 1)).unwrap();
        let shape = CochainShape {
            n,
            dim: n + 1,
            degree: 1,
            valued: Valued::Algebra,
            class: SymmetryClass::FirstSkew,
        };
        for (k, c) in Cochain::basis(shape, Q).unwrap().iter().enumerate().step_by(7) {
            let back = undualize(&dualize(c).unwrap()).unwrap();
            assert_eq!(&back, c, "n={n} basis element {k}");
        }
        let _ = alg;
    }
}

#[test]
fn dual_condition_matches_cocycle_condition() {
    for n in [3, 4] {
        for eps in signatures(n) {
            let alg = simple_filippov(n, &eps).unwrap();
            for problem in [Problem::Deformation, Problem::Central] {
                let cocycles = cocycle_basis(&alg, problem, SymmetryClass::FirstSkew).unwrap();
                for c in &cocycles {
                    assert!(dual_cocycle_check(&alg, &dualize(c).unwrap()).unwrap().is_zero());
                }
                assert_eq!(dual_kernel_dim(&alg, problem), cocycles.len(), "n={n} {eps} {problem}");
            }
        }
    }
}

#[test]
fn trace_identities_and_reduction_on_cocycles() {
    for n in [3, 4, 5] {
        for eps in signatures(n) {
            let alg = simple_filippov(n, &eps).unwrap();
            for c in cocycle_basis(&alg, Problem::Deformation, SymmetryClass::FirstSkew).unwrap() {
                let dc = dualize(&c).unwrap();
                let t = trace_identities(&alg, &dc).unwrap();
                assert!(t.b_is_symmetric());
                let r = trace_reduce(&alg, &dc).unwrap();
                assert_eq!(delta_deformation(&alg, &r.generator).unwrap(), r.removed.to_class(SymmetryClass::Unrestricted).unwrap());
                let verdict = classify_traceless(&alg, &r.tilde).unwrap();
                if n != 3 {
                    assert_eq!(verdict, TracelessVerdict::Zero);
                }
            }
        }
    }
}

#[test]
fn central_cocycles_reduce_to_zero_with_trace_generator() {
    for n in [3, 4, 5] {
        for eps in signatures(n) {
            let alg = simple_filippov(n, &eps).unwrap();
            let cocycles = cocycle_basis(&alg, Problem::Central, SymmetryClass::FirstSkew).unwrap();
            assert!(!cocycles.is_empty());
            for c in cocycles {
                let dc = dualize(&c).unwrap();
                let r = central_trace_reduce(&alg, &dc).unwrap();
                assert!(r.tilde.is_zero());
                assert_eq!(r.generator, r.trace_generator, "n={n} {eps}");
                let half_trace = r.trace_generator.scale(&Scalar::from_ratio(Q, n as i64, 2).unwrap());
                let sign = if n % 2 == 0 { -1 } else { 1 };
                let half_trace = half_trace.scale(&Scalar::from_i64(Q, sign));
                assert_ne!(delta_central(&alg, &half_trace).unwrap().to_class(SymmetryClass::FirstSkew).unwrap(), c);
            }
        }
    }
}

#[test]
fn exceptional_cocycle_is_the_n3_class() {
    for eps in signatures(3) {
        let alg = simple_filippov(3, &eps).unwrap();
        let rep = h1(&alg, Problem::Deformation, SymmetryClass::FirstSkew, Q).unwrap();
        assert_eq!(rep.dim_h1, 1);
        let r = trace_reduce(&alg, &dualize(&rep.representatives[0]).unwrap()).unwrap();
        match classify_traceless(&alg, &r.tilde).unwrap() {
            TracelessVerdict::Exceptional(l) => {
                println!("{eps}: λ = {l}");
                assert!(!l.is_zero());
            }
            TracelessVerdict::Zero => panic!("representative is trivial"),
        }
        let ex = undualize(&exceptional_dual(&eps, Q).unwrap()).unwrap();
        assert!(delta_deformation(&alg, &ex).unwrap().is_zero());
        assert!(coboundary_preimage(&alg, Problem::Deformation, &ex).unwrap().is_none());
    }
}

#[test]
fn semisimple_symmetric_parts_vanish() {
    for eps in ["+++", "++-"] {
        let alg = simple_filippov(2, &eps.parse().unwrap()).unwrap();
        for c in cocycle_basis(&alg, Problem::Deformation, SymmetryClass::Unrestricted).unwrap() {
            semisimple_cocycle_symmetric_vanishes(&alg, &c).unwrap();
        }
    }
    let deg = NLeibnizAlgebra::from_entries(2, 2, Q, vec![(vec![0, 1], 1, Scalar::one(Q)), (vec![1, 0], 1, -Scalar::one(Q))]).unwrap();
    let c = Cochain::zero(
        CochainShape { n: 2, dim: 2, degree: 1, valued: Valued::Algebra, class: SymmetryClass::Unrestricted },
        Q,
    )
    .unwrap();
    assert!(matches!(semisimple_cocycle_symmetric_vanishes(&deg, &c), Err(Error::DegenerateKillingForm(_))));
}

fn random_zero_cochain(alg: &NLeibnizAlgebra, seed: u64) -> Cochain {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let shape = CochainShape {
        n: alg.n(),
        dim: alg.dim(),
        degree: 0,
        valued: Valued::Algebra,
        class: SymmetryClass::FirstSkew,
    };
    let len = alg.dim() * alg.dim();
    let data = (0..len).map(|_| Scalar::from_i64(Q, rng.gen_range(-3..=3))).collect();
    Cochain::from_storage(shape, Q, data).unwrap()
}

#[test]
fn coboundaries_and_random_duals() {
    let a4 = simple_filippov(3, &SignatureVector::euclidean(4)).unwrap();
    let a0 = random_zero_cochain(&a4, 11);
    let cob = delta_deformation(&a4, &a0).unwrap().to_class(SymmetryClass::FirstSkew).unwrap();
    let dc = dualize(&cob).unwrap();
    assert!(dual_cocycle_check(&a4, &dc).unwrap().is_zero());
    trace_identities(&a4, &dc).unwrap();
    let r = trace_reduce(&a4, &dc).unwrap();
    assert_eq!(classify_traceless(&a4, &r.tilde).unwrap(), TracelessVerdict::Exceptional(Scalar::zero(Q)));
    assert!(coboundary_preimage(&a4, Problem::Deformation, &undualize(&r.tilde).unwrap()).unwrap().is_some());

    // Template plus a coboundary reduces back to the template.
    let template = exceptional_dual(&SignatureVector::euclidean(4), Q).unwrap();
    let t = trace_identities(&a4, &template).unwrap();
    assert!(t.b.iter().flatten().all(Scalar::is_zero));
    let r = trace_reduce(&a4, &template).unwrap();
    assert!(r.removed.is_zero());
    let mixed = dualize(&undualize(&template).unwrap().checked_add(&cob).unwrap()).unwrap();
    let r = trace_reduce(&a4, &mixed).unwrap();
    assert_eq!(classify_traceless(&a4, &r.tilde).unwrap(), TracelessVerdict::Exceptional(Scalar::one(Q)));

    let a5 = simple_filippov(4, &SignatureVector::euclidean(5)).unwrap();
    let shape = CochainShape { n: 4, dim: 5, degree: 1, valued: Valued::Algebra, class: SymmetryClass::FirstSkew };
    let random = Cochain::from_storage(
        shape,
        Q,
        (0..Cochain::zero(shape, Q).unwrap().len()).map(|k| Scalar::from_i64(Q, (k % 7) as i64 - 3)).collect(),
    )
    .unwrap();
    let dc = dualize(&random).unwrap();
    assert!(!dual_cocycle_check(&a5, &dc).unwrap().is_zero());
    assert!(matches!(trace_identities(&a5, &dc), Err(Error::NotCocycle(_))));
}

#[test]
fn splits_of_small_cochains() {
    let so3 = simple_filippov(2, &SignatureVector::euclidean(3)).unwrap();
    let shape = CochainShape { n: 2, dim: 3, degree: 1, valued: Valued::Algebra, class: SymmetryClass::Unrestricted };
    let f = Cochain::from_fn(shape, Q, |l, u| so3.constant(l, u).clone()).unwrap();
    let (s, a) = symmetric_split(&f).unwrap();
    assert!(s.is_zero());
    assert_eq!(a, f);
    let (s, a) = symmetric_split(&Cochain::zero(shape, Q).unwrap()).unwrap();
    assert!(s.is_zero() && a.is_zero());
    let a4 = Cochain::zero(CochainShape { n: 3, dim: 4, ..shape }, Q).unwrap();
    assert!(symmetric_split(&a4).is_err());
}
