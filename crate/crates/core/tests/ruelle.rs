use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torsionlab::homology::{cohomology, rt_arithmetic, IntCochainComplex, InnerProducts, VolumeData};
use torsionlab::linalg::IntMatrix;
use torsionlab::numeric::{Ctx, SqrtRational};
use torsionlab::par::Exec;
use torsionlab::ruelle::{
    leading_coefficient, order_at_zero, truncated_product, zeta_report, EigenvalueJson, GeodesicDatum,
};

fn polar(l: &str, a: &str) -> EigenvalueJson {
    EigenvalueJson::Polar { log_abs: l.into(), arg: a.into() }
}

#[test]
fn sym2_holonomy_to_fifty_digits() {
    // λ ∈ {e^ℓ, 1, e^{−ℓ}}, ℓ = 1, s = 2
    let g = GeodesicDatum { length: "1".into(), eigenvalues: vec![polar("1", "0"), polar("0", "0"), polar("-1", "0")] };
    let r = truncated_product(("2", "0"), &[g], 60, &Exec::sequential()).unwrap();
    let mut c = Ctx::new(80).unwrap();
    let one = c.small(1);
    let mut oracle = c.small(1);
    for a in [-1i64, -2, -3] {
        let e = c.exp(&c.small(a));
        oracle = c.mul(&oracle, &c.sub(&one, &e));
    }
    let oracle = c.div(&one, &oracle);
    let expect = c.fmt_digits(&oracle, 50);
    let got = c.parse(&r.value[0]).unwrap();
    assert_eq!(c.fmt_digits(&got, 50), expect);
    assert!(r.warnings.is_empty());
    assert_eq!(r.abscissa.as_deref(), Some("1"));
}

#[test]
fn convergence_warning_below_abscissa() {
    let g = GeodesicDatum { length: "2".into(), eigenvalues: vec![polar("1", "0.5"), polar("-1", "-0.5")] };
    let r = truncated_product(("0.25", "1"), &[g], 40, &Exec::sequential()).unwrap();
    assert_eq!(r.warnings.len(), 1);
    assert_eq!(r.abscissa.as_deref(), Some("0.5"));
}

fn random_data(seed: u64, n: usize) -> Vec<GeodesicDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let len: f64 = rng.gen_range(0.5..3.0);
            let l: f64 = rng.gen_range(-1.0..1.0);
            let a: f64 = rng.gen_range(-3.0..3.0);
            // a conjugation-closed pair
            GeodesicDatum {
                length: format!("{len:.6}"),
                eigenvalues: vec![polar(&format!("{l:.6}"), &format!("{a:.6}")), polar(&format!("{l:.6}"), &format!("{:.6}", -a))],
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn conjugate_argument_conjugates_value(seed in 0u64..1000, im in -2.0f64..2.0) {
        let data = random_data(seed, 5);
        let im_s = format!("{im:.4}");
        let neg = format!("{:.4}", -im);
        let a = truncated_product(("2.5", &im_s), &data, 40, &Exec::parallel()).unwrap();
        let b = truncated_product(("2.5", &neg), &data, 40, &Exec::sequential()).unwrap();
        let mut c = Ctx::new(40).unwrap();
        let (ar, ai) = (c.parse(&a.value[0]).unwrap(), c.parse(&a.value[1]).unwrap());
        let (br, bi) = (c.parse(&b.value[0]).unwrap(), c.parse(&b.value[1]).unwrap());
        let tol = c.parse("1e-30").unwrap();
        prop_assert!(c.sub(&ar, &br).abs() < tol);
        prop_assert!(c.add(&ai, &bi).abs() < tol);
    }

    #[test]
    fn product_is_order_independent(seed in 0u64..1000) {
        let mut data = random_data(seed, 6);
        let a = truncated_product(("3", "0.5"), &data, 40, &Exec::parallel()).unwrap();
        data.reverse();
        let b = truncated_product(("3", "0.5"), &data, 40, &Exec::sequential()).unwrap();
        prop_assert_eq!(a.value, b.value);
    }
}

/// Acyclic mapping-torus complexes: leading coefficient with R = 1 is 1/τ.
#[test]
fn leading_coefficient_inverts_torsion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ctx = Ctx::new(40).unwrap();
    let mut tested = 0;
    while tested < 20 {
        let n = rng.gen_range(1..=3);
        let a = IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-3..=3)));
        let c = IntCochainComplex::two_term(a.minus_identity());
        let groups = cohomology(&c, &mut ctx);
        if groups.degrees.iter().any(|d| d.free_rank > 0) {
            continue;
        }
        let vol = VolumeData::lattice(&c, &InnerProducts::standard()).unwrap();
        let rt = rt_arithmetic(&c, &vol).unwrap();
        let lead = leading_coefficient(&groups.torsion_orders(), &SqrtRational::one()).unwrap();
        assert_eq!(lead, rt.recip().unwrap());
        tested += 1;
    }
}

#[test]
fn report_from_cohomology() {
    let c = IntCochainComplex::new(
        vec![1, 1, 1, 1],
        vec![IntMatrix::from_i64_rows(&[&[0]]), IntMatrix::from_i64_rows(&[&[5]]), IntMatrix::from_i64_rows(&[&[0]])],
    )
    .unwrap();
    let mut ctx = Ctx::new(40).unwrap();
    let h = cohomology(&c, &mut ctx);
    let r = zeta_report(&h, &SqrtRational::one(), false, &mut ctx).unwrap();
    // ranks (1, 0, 0, 1), torsion (1, 1, 5, 1)
    assert_eq!(r.order_at_zero, -3);
    assert_eq!(r.leading_exact.exact_string(), "5");
    assert_eq!(order_at_zero(&h.free_ranks(), true).unwrap(), -4);
}
