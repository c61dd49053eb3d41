use nleibniz::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rational;
const TRIALS: usize = 20;

fn test_algebras() -> Vec<NLeibnizAlgebra> {
    let mut out = Vec::new();
    for (n, eps) in [(2, "+++"), (2, "++-"), (3, "++++"), (3, "+-+-"), (4, "+++++"), (4, "++++-")] {
        out.push(simple_filippov(n, &eps.parse().unwrap()).unwrap());
    }
    out
}

fn shape(alg: &NLeibnizAlgebra, degree: usize, valued: Valued, class: SymmetryClass) -> CochainShape {
    CochainShape { n: alg.n(), dim: alg.dim(), degree, valued, class }
}

fn random_cochain(rng: &mut ChaCha8Rng, shape: CochainShape) -> Cochain {
    let len = Cochain::zero(shape, Q).unwrap().len();
    let data = (0..len).map(|_| Scalar::from_i64(Q, rng.gen_range(-2..=2))).collect();
    Cochain::from_storage(shape, Q, data).unwrap()
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<Scalar> {
    (0..d).map(|_| Scalar::from_i64(Q, rng.gen_range(-3..=3))).collect()
}

fn delta(alg: &NLeibnizAlgebra, problem: Problem, c: &Cochain) -> Cochain {
    match problem {
        Problem::Deformation => delta_deformation(alg, c).unwrap(),
        Problem::Central => delta_central(alg, c).unwrap(),
    }
}

#[test]
fn nilpotency_on_random_cochains() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for alg in test_algebras() {
        for problem in [Problem::Deformation, Problem::Central] {
            // Unrestricted cochains of degree 2 are large beyond n = 2.
            let mut classes = vec![SymmetryClass::FirstSkew];
            if alg.n() == 2 {
                classes.push(SymmetryClass::Unrestricted);
            }
            for class in classes {
                for degree in [0, 1] {
                    for _ in 0..TRIALS {
                        let c = random_cochain(&mut rng, shape(&alg, degree, problem.valued(), class));
                        let dd = delta(&alg, problem, &delta(&alg, problem, &c));
                        assert!(dd.is_zero(), "{} {problem} {class} degree {degree}", alg.label());
                    }
                }
            }
        }
    }
}

#[test]
fn zero_cochain_coboundaries_are_fully_skew() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut algs = test_algebras();
    algs.push(simple_filippov(5, &"++++++".parse().unwrap()).unwrap());
    for alg in algs {
        for _ in 0..TRIALS {
            let a0 = random_cochain(&mut rng, shape(&alg, 0, Valued::Algebra, SymmetryClass::Unrestricted));
            assert!(delta_deformation(&alg, &a0).unwrap().has_class(SymmetryClass::FullSkew), "{}", alg.label());
        }
    }
}

#[test]
fn fi_defect_is_the_coboundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for eps in ["++++", "+++"] {
        let alg = simple_filippov(eps.len() - 1, &eps.parse().unwrap()).unwrap();
        for _ in 0..TRIALS {
            let a1 = random_cochain(&mut rng, shape(&alg, 1, Valued::Algebra, SymmetryClass::FirstSkew));
            let defect = first_order_fi_defect(&alg, &a1).unwrap();
            let d = delta_deformation(&alg, &a1).unwrap();
            let mut mismatches = 0;
            for (idx, v) in defect.iter() {
                let (lower, upper) = idx.split_at(idx.len() - 1);
                if d.eval(lower, upper[0]) != *v {
                    mismatches += 1;
                }
            }
            for (lower, upper, v) in d.to_class(SymmetryClass::Unrestricted).unwrap().nonzero_entries() {
                let mut idx = lower.clone();
                idx.push(upper);
                if defect.get(&idx) != *v {
                    mismatches += 1;
                }
            }
            assert_eq!(mismatches, 0, "{}", alg.label());
        }
    }
}

#[test]
fn inner_derivations() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for alg in test_algebras() {
        let (n, d) = (alg.n(), alg.dim());
        for _ in 0..TRIALS {
            let x = FundamentalObject::new((0..n - 1).map(|_| random_vector(&mut rng, d)).collect());
            let ys: Vec<Vec<Scalar>> = (0..n).map(|_| random_vector(&mut rng, d)).collect();
            let refs: Vec<&[Scalar]> = ys.iter().map(Vec::as_slice).collect();
            let lhs = fo_action(&alg, &x, &alg.bracket(&refs).unwrap()).unwrap();
            let mut rhs = vec![Scalar::zero(Q); d];
            for i in 0..n {
                let moved = fo_action(&alg, &x, &ys[i]).unwrap();
                let mut args = refs.clone();
                args[i] = &moved;
                for (r, v) in rhs.iter_mut().zip(alg.bracket(&args).unwrap()) {
                    *r = &*r + &v;
                }
            }
            assert_eq!(lhs, rhs, "{}", alg.label());
        }
    }
}

#[test]
fn central_extension_is_leibniz_iff_cocycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for alg in test_algebras() {
        let cocycles = cocycle_basis(&alg, Problem::Central, SymmetryClass::FirstSkew).unwrap();
        for _ in 0..TRIALS {
            let mut c = Cochain::zero(shape(&alg, 1, Valued::Scalar, SymmetryClass::FirstSkew), Q).unwrap();
            for z in &cocycles {
                c = c.checked_add(&z.scale(&Scalar::from_i64(Q, rng.gen_range(-3..=3)))).unwrap();
            }
            let ext = build_central_extension(&alg, &c).unwrap().algebra().unwrap();
            assert!(fi_residual(&ext).is_zero(), "{}", alg.label());

            let r = random_cochain(&mut rng, shape(&alg, 1, Valued::Scalar, SymmetryClass::FirstSkew));
            let is_cocycle = delta_central(&alg, &r).unwrap().is_zero();
            let ext = build_central_extension(&alg, &r).unwrap().algebra().unwrap();
            assert_eq!(fi_residual(&ext).is_zero(), is_cocycle, "{}", alg.label());
        }
    }
}

#[test]
fn dual_condition_agrees_on_random_cochains() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for alg in test_algebras().into_iter().filter(|a| a.n() >= 3) {
        let cocycles = cocycle_basis(&alg, Problem::Deformation, SymmetryClass::FirstSkew).unwrap();
        for trial in 0..TRIALS {
            let c = if trial % 2 == 0 {
                random_cochain(&mut rng, shape(&alg, 1, Valued::Algebra, SymmetryClass::FirstSkew))
            } else {
                cocycles.iter().fold(
                    Cochain::zero(shape(&alg, 1, Valued::Algebra, SymmetryClass::FirstSkew), Q).unwrap(),
                    |acc, z| acc.checked_add(&z.scale(&Scalar::from_i64(Q, rng.gen_range(-2..=2)))).unwrap(),
                )
            };
            let dual_zero = dual_cocycle_check(&alg, &dualize(&c).unwrap()).unwrap().is_zero();
            assert_eq!(dual_zero, delta_deformation(&alg, &c).unwrap().is_zero(), "{}", alg.label());
        }
    }
}

#[test]
fn killing_forms() {
    let so12 = simple_filippov(2, &"++-".parse().unwrap()).unwrap();
    assert_eq!(linalg::rank(&so12.killing_form().unwrap()), 3);

    let solvable = NLeibnizAlgebra::from_entries(
        2,
        2,
        Q,
        vec![(vec![0, 1], 1, Scalar::one(Q)), (vec![1, 0], 1, -Scalar::one(Q))],
    )
    .unwrap();
    assert!(linalg::rank(&solvable.killing_form().unwrap()) < 2);

    let so3 = simple_filippov(2, &SignatureVector::euclidean(3)).unwrap();
    let k = so3.killing_form().unwrap();
    let ks = direct_sum(&so3, &so3).unwrap().killing_form().unwrap();
    for i in 0..6 {
        for j in 0..6 {
            let want = if i / 3 == j / 3 { k.get(i % 3, j % 3) } else { Scalar::zero(Q) };
            assert_eq!(ks.get(i, j), want);
        }
    }
}
