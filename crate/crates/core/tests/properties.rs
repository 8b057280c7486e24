use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tricat::algebra::{extensions, hom_space, kernel_cokernel, Algebra, AlgebraRef};
use tricat::bimodule::Bimodule;
use tricat::diagram::{pullback, pushout, random, snake};
use tricat::io::{emit_report, parse_report, CheckReport, Format, Outcome, Report};
use tricat::rep::Triangular;
use tricat::subcat::Budgets;
use tricat::Matrix;

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (prop::sample::select(vec![2u32, 3, 5]), 0..=max, 0..=max).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(-10i64..10, r * c).prop_map(move |e| Matrix::new(p, r, c, e).unwrap())
    })
}

fn algebra(pick: u8) -> AlgebraRef {
    match pick % 4 {
        0 => Algebra::truncated_polynomial(2, 2),
        1 => Algebra::truncated_polynomial(3, 2),
        2 => Algebra::upper_triangular(2, 2),
        _ => Algebra::truncated_polynomial(2, 3),
    }
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_plus_nullity(m in matrix(6)) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.mul(&m.kernel().basis_columns()).is_zero() || m.kernel().dim() == 0);
    }

    #[test]
    fn rref_is_idempotent(m in matrix(6)) {
        let r = m.rref();
        prop_assert_eq!(r.reduced.rref().reduced, r.reduced.clone());
        prop_assert_eq!(r.rank, r.pivot_cols.len());
    }

    #[test]
    fn inverses_multiply_to_the_identity(m in matrix(5)) {
        if let Some(inv) = m.inverse() {
            prop_assert!(m.mul(&inv).is_identity() && inv.mul(&m).is_identity());
        } else {
            prop_assert!(!m.is_square() || m.rank() < m.rows());
        }
    }

    #[test]
    fn solutions_solve((a, x) in matrix(5).prop_flat_map(|a| {
        let (p, c) = (a.modulus(), a.cols());
        (Just(a), prop::collection::vec(0i64..5, c).prop_map(move |v| Matrix::new(p, c, 1, v).unwrap()))
    })) {
        let b = a.mul(&x);
        let sol = a.solve(&b).unwrap().expect("b lies in the image");
        prop_assert_eq!(a.mul(&sol.particular), b);
    }

    #[test]
    fn hom_space_elements_commute_with_the_action(pick in any::<u8>(), seed in any::<u64>()) {
        let a = algebra(pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random::module(&a, 3, &mut rng);
        let y = random::module(&a, 3, &mut rng);
        let hs = hom_space(&x, &y).unwrap();
        for h in hs.basis() {
            for (ax, ay) in x.action().iter().zip(y.action()) {
                prop_assert_eq!(h.mul(ax), ay.mul(h));
            }
        }
    }

    #[test]
    fn kernel_and_cokernel_dimensions(pick in any::<u8>(), seed in any::<u64>()) {
        let a = algebra(pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random::module(&a, 4, &mut rng);
        let y = random::module(&a, 4, &mut rng);
        let f = random::hom(&x, &y, &mut rng);
        let kc = kernel_cokernel(&f).unwrap();
        prop_assert_eq!(kc.kernel().dim() + f.rank(), x.dim());
        prop_assert_eq!(kc.cokernel().dim() + f.rank(), y.dim());
    }

    #[test]
    fn pushouts_and_pullbacks_are_universal(pick in any::<u8>(), seed in any::<u64>()) {
        let a = algebra(pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sq = random::square(&a, 3, &mut rng);
        let po = pushout(&sq.a, &sq.f).unwrap();
        prop_assert!(po.commutes() && po.is_pushout());
        // The given square factors through the pushout.
        prop_assert!(po.pushout_factor(&sq.g, &sq.b).is_some());
        let pb = pullback(&sq.b, &sq.g).unwrap();
        prop_assert!(pb.commutes() && pb.is_pullback());
        prop_assert!(pb.pullback_factor(&sq.a, &sq.f).is_some());
    }

    #[test]
    fn snake_sequences_are_exact(pick in any::<u8>(), seed in any::<u64>()) {
        let a = algebra(pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = random::snake_input(&a, 3, &mut rng);
        prop_assert!(snake(&input).unwrap().exact());
    }

    #[test]
    fn realized_extensions_are_exact(pick in any::<u8>(), seed in any::<u64>()) {
        let a = algebra(pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random::module(&a, 2, &mut rng);
        let x = random::module(&a, 2, &mut rng);
        let ext = extensions(&z, &x).unwrap();
        for s in ext.all(1 << 10).unwrap() {
            prop_assert!(s.validate().is_ok());
            prop_assert_eq!(s.middle().dim(), z.dim() + x.dim());
        }
    }

    #[test]
    fn triples_round_trip_through_lambda_modules(seed in any::<u64>()) {
        let a = algebra(0);
        let tri = Triangular::new(&Bimodule::regular(&a)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random::module(&a, 2, &mut rng);
        let y = random::module(&a, 2, &mut rng);
        let tensor = tri.bimodule().tensor(&y).unwrap().module;
        let phi = random::hom(&tensor, &x, &mut rng);
        let t = tri.triple(&x, &y, phi.matrix).unwrap();
        let u = tri.to_module(&t);
        prop_assert_eq!(u.dim(), x.dim() + y.dim());
        let (back, iso) = tri.from_module(&u).unwrap();
        prop_assert!(iso.is_iso());
        prop_assert_eq!((back.x.dim(), back.y.dim()), (x.dim(), y.dim()));
        let h = tri.to_h(&t).unwrap();
        prop_assert_eq!(tri.from_h(&h).unwrap().phi.matrix, t.phi.matrix);
    }

    #[test]
    fn reports_round_trip(verdicts in prop::collection::vec(0u8..4, 0..6), seed in any::<u64>()) {
        let mut r = Report::new("s", seed, Budgets::default());
        for (i, v) in verdicts.iter().enumerate() {
            let verdict = [Outcome::Pass, Outcome::Fail, Outcome::OutOfCap, Outcome::Refused][*v as usize];
            r.checks.push(CheckReport {
                name: format!("c{i}"),
                check: "closure".into(),
                verdict,
                witness: (verdict == Outcome::Fail).then(|| "w".to_string()),
                missing_hypothesis: None,
                notes: vec![],
                details: serde_json::json!({ "i": i }),
            });
        }
        let back = parse_report(&emit_report(&r, Format::Json)).unwrap();
        prop_assert_eq!(&back, &r);
        let expected = if verdicts.contains(&1) { 1 } else if verdicts.iter().all(|&v| v == 0) { 0 } else { 2 };
        prop_assert_eq!(r.exit_code(), expected);
    }
}
