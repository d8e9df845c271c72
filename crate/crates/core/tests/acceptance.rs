//! Acceptance run: one PASS/FAIL line per criterion with its runtime budget.
//! Runs without the libtest harness so the lines are always printed.
//!
//! `TORSIONLAB_BLESS=1` rewrites the golden files of criterion 7.
//! `TORSIONLAB_STRICT=1` makes known reds fail the process as well.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use torsionlab::homology::{cohomology, rt_arithmetic, rt_laplacian, IntCochainComplex, InnerProducts, VolumeData};
use torsionlab::linalg::{invariant_factors, kernel_basis, rational, IntMatrix, RationalMatrix};
use torsionlab::local::{
    admissible_root, bound_experiment, check_levels, eigen_partition, sym_pow_irreducible_fq, ExperimentConfig,
    LocalParams,
};
use torsionlab::manifold::{
    lattice_independence_check, random_stable_sublattice, sym_family, torsion_sweep, TwistedComplexSpec,
};
use torsionlab::numeric::{Ctx, SqrtRational};
use torsionlab::par::Exec;
use torsionlab::quaternion::{hilbert_symbol, BaseField, Place, QuatOrder, QuaternionAlgebra};
use torsionlab::ring::{mat_minus_identity, QuadElem, QuadraticField, QuadraticIntegers};
use torsionlab::ruelle::{leading_coefficient, order_at_zero};
use torsionlab::sympow::{realify, realify_integral, sym_pow_int};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    /// Reason, when the criterion is a documented known red.
    known_red: Option<&'static str>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> TwistedComplexSpec {
    TwistedComplexSpec::from_file(&crate_dir().join("../../examples").join(name)).expect("bundled fixture")
}

fn small(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigInt {
    BigInt::from(rng.gen_range(lo..=hi))
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: i64, hi: i64) -> IntMatrix {
    IntMatrix::from_fn(r, c, |_, _| small(rng, lo, hi))
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..steps {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let mut e = IntMatrix::identity(n);
            e.set(i, j, small(rng, -2, 2));
            u = &u * &e;
        }
    }
    u
}

/// Fraction-free determinant of a square array.
fn bareiss(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut x = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if x[k][k].is_zero() {
            match (k + 1..n).find(|&r| !x[r][k].is_zero()) {
                Some(r) => {
                    x.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                x[i][j] = (&x[i][j] * &x[k][k] - &x[i][k] * &x[k][j]) / &prev;
            }
        }
        prev = x[k][k].clone();
    }
    sign * &x[n - 1][n - 1]
}

fn det(a: &IntMatrix) -> BigInt {
    bareiss(&(0..a.rows()).map(|i| a.row(i).to_vec()).collect::<Vec<_>>())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors d_k = gcd of k×k minors.
fn minors_oracle(a: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(a.rows(), k) {
            for cs in subsets(a.cols(), k) {
                let m: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| a.get(i, j).clone()).collect()).collect();
                g = g.gcd(&bareiss(&m));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn c1_snf() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..1000 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = random_matrix(&mut rng, r, c, -10, 10);
        let got = invariant_factors(&a);
        let want = minors_oracle(&a);
        ensure(got == want, || format!("matrix {i}: {got:?} vs oracle {want:?}"))?;
    }
    Ok("1000 random matrices up to 5x5 match the minors oracle".into())
}

/// A random complex C^0 → C^1 → C^2 with d_1 d_0 = 0.
fn random_three_term(rng: &mut ChaCha8Rng) -> IntCochainComplex {
    let r: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=6)).collect();
    let inner = rng.gen_range(1..=r[0].min(r[1]));
    let d0 = &random_matrix(rng, r[1], inner, -3, 3) * &random_matrix(rng, inner, r[0], -2, 2);
    let k = kernel_basis(&d0.transpose());
    let d1 = if k.cols() == 0 {
        IntMatrix::zeros(r[2], r[1])
    } else {
        &random_matrix(rng, r[2], k.cols(), -2, 2) * &k.transpose()
    };
    IntCochainComplex::new(r, vec![d0, d1]).expect("d1 d0 = 0 by construction")
}

fn c2_torsion_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let c = random_three_term(&mut rng);
        let vol = VolumeData::lattice(&c, &InnerProducts::standard()).map_err(|e| e.to_string())?;
        let lap = rt_laplacian(&c, &vol).map_err(|e| format!("complex {i}: {e}"))?;
        let ari = rt_arithmetic(&c, &vol).map_err(|e| format!("complex {i}: {e}"))?;
        ensure(lap == ari, || format!("complex {i}: {} vs {}", lap.exact_string(), ari.exact_string()))?;
    }
    Ok("200 random 3-term complexes: Laplacian and arithmetic torsion agree exactly".into())
}

fn c3_mapping_torus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ctx = Ctx::new(40).unwrap();
    let mut done = 0;
    while done < 50 {
        let m = rng.gen_range(1..=4);
        let a = random_unimodular(&mut rng, m, 3 * m);
        let d = det(&a.minus_identity()).abs();
        if d.is_zero() {
            continue;
        }
        let c = IntCochainComplex::two_term(a.minus_identity());
        let h = cohomology(&c, &mut ctx);
        ensure(h.degrees[1].torsion_order == d && h.degrees[1].free_rank == 0, || {
            format!("|H^1| = {} but |det(A-I)| = {d}", h.degrees[1].torsion_order)
        })?;
        let vol = VolumeData::lattice(&c, &InnerProducts::standard()).map_err(|e| e.to_string())?;
        let tau = rt_arithmetic(&c, &vol).map_err(|e| e.to_string())?;
        ensure(tau == SqrtRational::from_int(&d), || format!("tau = {} but |det(A-I)| = {d}", tau.exact_string()))?;
        done += 1;
    }
    Ok("50 random A in GL(m, Z), m <= 4: |H^1| = tau = |det(A - I)|".into())
}

type Gauss = (BigRational, BigRational);

fn gmul(a: &Gauss, b: &Gauss) -> Gauss {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// Cofactor expansion over Q(i) on (re, im) pairs.
fn gauss_det(m: &[Vec<Gauss>]) -> Gauss {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = (BigRational::zero(), BigRational::zero());
    for j in 0..n {
        let minor: Vec<Vec<Gauss>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let t = gmul(&m[0][j], &gauss_det(&minor));
        acc = if j % 2 == 0 { (acc.0 + t.0, acc.1 + t.1) } else { (acc.0 - t.0, acc.1 - t.1) };
    }
    acc
}

fn random_gaussian_unimodular(rng: &mut ChaCha8Rng, o: &QuadraticIntegers, n: usize) -> torsionlab::linalg::Matrix<QuadElem> {
    let mut u = torsionlab::ring::mat_identity(o, n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let mut e = torsionlab::ring::mat_identity(o, n);
            e.set(i, j, QuadElem::ints(rng.gen_range(-1..=1), rng.gen_range(-1..=1)));
            u = torsionlab::ring::mat_mul(o, &u, &e).unwrap();
        }
    }
    let mut s = torsionlab::ring::mat_identity(o, n);
    s.set(0, 0, QuadElem::ints(0, 1));
    torsionlab::ring::mat_mul(o, &u, &s).unwrap()
}

fn c4_doubling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let k = QuadraticField::gaussian();
    let frac = |rng: &mut ChaCha8Rng| BigRational::new(small(rng, -6, 6), BigInt::from(rng.gen_range(1..=4)));
    for i in 0..500 {
        let n = rng.gen_range(1..=4);
        let g: Vec<Vec<Gauss>> = (0..n).map(|_| (0..n).map(|_| (frac(&mut rng), frac(&mut rng))).collect()).collect();
        let a = torsionlab::linalg::Matrix::from_fn(n, n, |r, c| QuadElem::new(g[r][c].0.clone(), g[r][c].1.clone()));
        let real: RationalMatrix = realify(&k, &a);
        let lhs = rational::determinant(&real).map_err(|e| e.to_string())?;
        let d = gauss_det(&g);
        let rhs = &d.0 * &d.0 + &d.1 * &d.1;
        ensure(lhs == rhs, || format!("matrix {i}: det realify = {lhs}, |det|^2 = {rhs}"))?;
    }
    let o = QuadraticIntegers::new(1).unwrap();
    let mut done = 0;
    while done < 20 {
        let n = rng.gen_range(1..=3);
        let a = random_gaussian_unimodular(&mut rng, &o, n);
        let m = mat_minus_identity(&o, &a);
        let g: Vec<Vec<Gauss>> =
            (0..n).map(|r| (0..n).map(|c| (m.get(r, c).u.clone(), m.get(r, c).v.clone())).collect()).collect();
        let d = gauss_det(&g);
        let norm = &d.0 * &d.0 + &d.1 * &d.1;
        if norm.is_zero() {
            continue;
        }
        let real = realify_integral(&o, &a).map_err(|e| e.to_string())?;
        let c = IntCochainComplex::two_term(real.minus_identity());
        let vol = VolumeData::lattice(&c, &InnerProducts::standard()).map_err(|e| e.to_string())?;
        let tau = rt_arithmetic(&c, &vol).map_err(|e| e.to_string())?;
        // complex mapping-torus torsion |det_C(A − I)|, squared
        let want = SqrtRational::from_rational(&norm);
        ensure(tau == want, || format!("fixture {done}: realified tau = {}, |tau_C|^2 = {norm}", tau.exact_string()))?;
        done += 1;
    }
    Ok("500 Gaussian-rational matrices: det realify = |det|^2; 20 realified circle complexes: tau = |tau_C|^2".into())
}

fn c5_irreducible() -> Outcome {
    let mut exhaustive = 0;
    for q in [2u64, 3, 4, 5, 7, 9, 25] {
        let p = torsionlab::arith::prime_power(&BigInt::from(q)).unwrap().0.to_u64().unwrap();
        for d in 1..p as usize {
            let r = sym_pow_irreducible_fq(q, d).map_err(|e| e.to_string())?;
            ensure(r.structural, || format!("q = {q}, d = {d}: structural test says reducible"))?;
            if q <= 4 && d <= 3 {
                ensure(r.exhaustive == Some(true), || format!("q = {q}, d = {d}: exhaustive check {:?}", r.exhaustive))?;
                exhaustive += 1;
            }
        }
    }
    Ok(format!("Sym^d irreducible for every listed q and d < p; {exhaustive} cases confirmed exhaustively"))
}

fn prime_powers_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| torsionlab::arith::prime_power(&BigInt::from(q)).is_some()).collect()
}

/// ord_p(a^{2t} − 1) by plain modular arithmetic in Z/p^prec.
fn direct_levels(p: u64, a: &BigInt, kmax: u64, prec: u32) -> Vec<u32> {
    let pb = BigInt::from(p);
    let modulus = num_traits::pow(pb.clone(), prec as usize);
    let a2 = (a * a).mod_floor(&modulus);
    let mut x = BigInt::one();
    (1..=kmax)
        .map(|_| {
            x = (&x * &a2).mod_floor(&modulus);
            let mut y = (&x - BigInt::one()).mod_floor(&modulus);
            let mut v = 0;
            while !y.is_zero() && (&y % &pb).is_zero() {
                y /= &pb;
                v += 1;
            }
            if y.is_zero() {
                prec
            } else {
                v
            }
        })
        .collect()
}

fn c6_partition() -> Outcome {
    const PREC: u32 = 16;
    let qs = prime_powers_upto(49);
    for &q in &qs {
        for k in 0..=200u64 {
            let e = eigen_partition(q, k).map_err(|e| e.to_string())?;
            let total: usize = e.dims().values().sum();
            ensure(total == 2 * k as usize + 1, || format!("q = {q}, k = {k}: dims sum to {total}"))?;
        }
    }
    let mut red = Vec::new();
    for &q in &qs {
        let params = LocalParams::new(q, PREC).map_err(|e| e.to_string())?;
        let mismatches = if params.f == 1 {
            let a = &admissible_root(&params).map_err(|e| e.to_string())?[0];
            let e = eigen_partition(q, 200).map_err(|e| e.to_string())?;
            direct_levels(params.p, a, 200, PREC)
                .into_iter()
                .enumerate()
                .filter(|&(i, v)| e.level(i as i64 + 1).label() != v.to_string())
                .count()
        } else {
            check_levels(q, 200, PREC).map_err(|e| e.to_string())?.len()
        };
        if mismatches > 0 {
            red.push(format!("q = {q}: {mismatches} of 200 levels differ"));
        }
    }
    ensure(red.is_empty(), || red.join("; "))?;
    Ok(format!("{} prime powers q <= 49, k <= 200: dims sum to 2k+1 and levels match ord(a^(2t) - 1)", qs.len()))
}

fn golden_path(q: u64) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("bound_q{q}.json"))
}

fn c7_experiment() -> Outcome {
    let bless = std::env::var_os("TORSIONLAB_BLESS").is_some();
    let exec = Exec::parallel();
    let mut worst = BigRational::zero();
    for q in [3u64, 5, 7] {
        let mut archive = Vec::new();
        for k in 1..=8u64 {
            let cfg = ExperimentConfig::new(q, k, 50, 1000 * q + k);
            let r = bound_experiment(&cfg, &exec).map_err(|e| format!("q = {q}, k = {k}: {e}"))?;
            let bound = BigRational::new(BigInt::from(16 * (k + q)), BigInt::from(q));
            for v in &r.values {
                let x = torsionlab::io::parse_rational(v).map_err(|e| e.to_string())?;
                ensure(x <= bound, || format!("q = {q}, k = {k}: value {v} exceeds {bound}"))?;
                worst = worst.max(x / &bound);
            }
            ensure(!r.exhausted.iter().any(|&e| e), || format!("q = {q}, k = {k}: precision exhausted"))?;
            if q > 2 * k {
                ensure(r.standard == "0", || format!("q = {q}, k = {k}: standard lattice gives {}", r.standard))?;
            }
            archive.push(json!({"k": k, "seed": cfg.seed, "values": r.values, "standard": r.standard}));
        }
        let doc = json!({"format": "tl-1", "q": q, "samples": 50, "rows": archive});
        let path = golden_path(q);
        if bless || !path.exists() {
            std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
            std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap() + "\n").map_err(|e| e.to_string())?;
        } else {
            let stored: Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            ensure(stored == doc, || format!("q = {q}: measured values differ from {}", path.display()))?;
        }
    }
    Ok(format!(
        "3 x 8 x 50 samples within 16(k/q + 1) (largest ratio {:.3}), standard lattice 0 when p > 2k, golden files match",
        worst.to_f64().unwrap_or(f64::NAN)
    ))
}

fn rational_primes(n: i64) -> Vec<i64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn c8_quaternion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let q = BaseField::new(0).unwrap();
    for _ in 0..200 {
        let (a, b) = loop {
            let (a, b) = (rng.gen_range(-60i64..=60), rng.gen_range(-60i64..=60));
            if a != 0 && b != 0 {
                break (a, b);
            }
        };
        let (ea, eb) = (QuadElem::ints(a, 0), QuadElem::ints(b, 0));
        let mut places = vec![Place::Infinite];
        let mut ps = rational_primes(2 * a * b);
        ps.sort();
        places.extend(ps.into_iter().map(Place::rational));
        let mut product = 1i8;
        for v in &places {
            product *= hilbert_symbol(&q, &ea, &eb, v).map_err(|e| e.to_string())?;
        }
        ensure(product == 1, || format!("({a}, {b}): product of local symbols is -1"))?;
    }
    let h = QuaternionAlgebra::hamilton().classify().map_err(|e| e.to_string())?;
    ensure(h.ramification == ["2", "inf"], || format!("H(-1,-1) ramified at {:?}", h.ramification))?;
    let exec = Exec::parallel();
    let lipschitz = QuatOrder::standard(QuaternionAlgebra::hamilton()).map_err(|e| e.to_string())?.norm_one_search(1, &exec);
    let hurwitz = QuatOrder::hurwitz().norm_one_search(1, &exec);
    ensure(lipschitz.len() == 8 && hurwitz.len() == 24, || {
        format!("norm-one counts {} and {}", lipschitz.len(), hurwitz.len())
    })?;
    Ok("200 product formulas hold; H(-1,-1) ramified at {2, inf}; Lipschitz 8 and Hurwitz 24 units".into())
}

fn c9_lattice_independence() -> Outcome {
    let cases = [("circle.tcx", 1usize), ("circle.tcx", 3), ("circle.tcx", 5), ("torus3.tcx", 1), ("torus3.tcx", 3)];
    let moduli = [2u64, 3, 5];
    let mut ctx = Ctx::new(40).unwrap();
    let mut nontrivial = 0;
    for i in 0..50usize {
        let (file, n) = cases[i % cases.len()];
        let spec = fixture(file);
        let rep = spec.base_rep(n).map_err(|e| e.to_string())?;
        let modulus = moduli[(i / cases.len()) % moduli.len()];
        let basis = random_stable_sublattice(&rep, modulus, i as u64).map_err(|e| e.to_string())?;
        let r = lattice_independence_check(&spec, &rep, &basis, &mut ctx).map_err(|e| e.to_string())?;
        ensure(r.rationally_acyclic, || format!("{file} Sym^{n} is not rationally acyclic"))?;
        ensure(r.equal, || format!("pair {i} ({file}, Sym^{n}, index {}): {} vs {}", r.index, r.product, r.sub_product))?;
        if r.index > BigInt::one() {
            nontrivial += 1;
        }
    }
    Ok(format!("50 lattice pairs on the bundled fixtures ({nontrivial} of index > 1): alternating sums agree exactly"))
}

fn c10_sweep() -> Outcome {
    let exec = Exec::parallel();
    let circle = fixture("circle.tcx");
    let ks: Vec<usize> = (1..=10).collect();
    let r = torsion_sweep(&circle, "Sym^{2k}", sym_family(&circle), &ks, 40, &exec).map_err(|e| e.to_string())?;
    let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
    for row in &r.rows {
        let s = sym_pow_int(&a, 2 * row.k).unwrap().minus_identity();
        let n = s.rows();
        let mut g = BigInt::zero();
        for rs in subsets(n, n - 1) {
            for cs in subsets(n, n - 1) {
                let m: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| s.get(i, j).clone()).collect()).collect();
                g = g.gcd(&bareiss(&m));
            }
        }
        ensure(row.torsion_orders[1] == g, || format!("k = {}: |H^1_tors| = {} but minors give {g}", row.k, row.torsion_orders[1]))?;
    }
    let fit = r.fit.as_ref().ok_or("circle sweep produced no fit")?;
    let ln_lambda = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    ensure((fit.a + ln_lambda).abs() < 0.05, || format!("circle fit a = {}", fit.a))?;

    // external-data path: a user spec with known_volume gets a 2 vol / pi comparison
    let mut torus = fixture("torus3.tcx");
    torus.known_volume = Some("0.9427".into());
    let t = torsion_sweep(&torus, "Sym^{2k}", sym_family(&torus), &[1, 2, 3, 4], 40, &exec).map_err(|e| e.to_string())?;
    let target = t.target.as_ref().ok_or("no volume comparison for a spec with known_volume")?;
    let fit = t.fit.as_ref().ok_or("no fit for the external-data path")?;
    ensure(target.target.starts_with("0.6001"), || format!("2 vol / pi = {}", target.target))?;
    ensure(fit.residual_rms.is_finite() && fit.std_error_a.is_some(), || "fit residual not reported".into())?;
    Ok(format!(
        "circle k <= 10 matches the minors oracle, fitted k^2 coefficient {:.4} (-ln lambda = {:.4}); known_volume path reports 2 vol/pi = {} against a = {:.4} (residual {:.2e}, no threshold)",
        r.fit.as_ref().unwrap().a,
        -ln_lambda,
        &target.target[..8],
        fit.a,
        fit.residual_rms
    ))
}

fn c11_zeta_plumbing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ctx = Ctx::new(40).unwrap();
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=4);
        let d = random_matrix(&mut rng, n, n, -4, 4);
        if det(&d).is_zero() {
            continue;
        }
        let c = IntCochainComplex::two_term(d);
        let h = cohomology(&c, &mut ctx);
        let vol = VolumeData::lattice(&c, &InnerProducts::standard()).map_err(|e| e.to_string())?;
        let rt = rt_arithmetic(&c, &vol).map_err(|e| e.to_string())?;
        let lead = leading_coefficient(&h.torsion_orders(), &SqrtRational::one()).map_err(|e| e.to_string())?;
        ensure(lead == rt.recip().map_err(|e| e.to_string())?, || {
            format!("fixture {done}: leading {} vs 1/tau = 1/{}", lead.exact_string(), rt.exact_string())
        })?;
        done += 1;
    }
    for i in 0..20 {
        let trivial = i % 4 == 0;
        let r: Vec<usize> = if trivial {
            vec![1, rng.gen_range(0..=5), 0, 1]
        } else {
            (0..4).map(|_| rng.gen_range(0..=5)).collect()
        };
        let want = if trivial { 2 * r[1] as i64 - 4 } else { -(r[1] as i64) + 2 * r[2] as i64 - 3 * r[3] as i64 };
        let got = order_at_zero(&r, trivial).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("ranks {r:?}, trivial = {trivial}: {got} vs {want}"))?;
    }
    Ok("50 acyclic fixtures: leading coefficient = 1/tau exactly; 20 rank tuples give the expected order".into())
}

const Q2_RED: &str = "for q = 2 the level rule 1 + v_2(2t) is one below ord_2(a^(2t) - 1) for every admissible a";

fn main() {
    let strict = std::env::var_os("TORSIONLAB_STRICT").is_some();
    let criteria = [
        Criterion { id: 1, name: "SNF oracle equivalence", budget: Duration::from_secs(10), known_red: None, run: c1_snf },
        Criterion { id: 2, name: "torsion identity", budget: Duration::from_secs(60), known_red: None, run: c2_torsion_identity },
        Criterion { id: 3, name: "mapping-torus law", budget: Duration::from_secs(10), known_red: None, run: c3_mapping_torus },
        Criterion { id: 4, name: "realification doubling", budget: Duration::from_secs(10), known_red: None, run: c4_doubling },
        Criterion { id: 5, name: "Sym^d irreducibility", budget: Duration::from_secs(30), known_red: None, run: c5_irreducible },
        Criterion { id: 6, name: "eigenvalue partition", budget: Duration::from_secs(30), known_red: Some(Q2_RED), run: c6_partition },
        Criterion { id: 7, name: "local bound experiment", budget: Duration::from_secs(300), known_red: None, run: c7_experiment },
        Criterion { id: 8, name: "quaternion product formula", budget: Duration::from_secs(30), known_red: None, run: c8_quaternion },
        Criterion { id: 9, name: "lattice independence", budget: Duration::from_secs(60), known_red: None, run: c9_lattice_independence },
        Criterion { id: 10, name: "sweep pipeline", budget: Duration::from_secs(600), known_red: None, run: c10_sweep },
        Criterion { id: 11, name: "zeta plumbing at s = 0", budget: Duration::from_secs(10), known_red: None, run: c11_zeta_plumbing },
    ];
    let mut failed = Vec::new();
    let mut known = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let timing = format!("{:.2}s, budget {}s", elapsed.as_secs_f64(), c.budget.as_secs());
        match outcome {
            Ok(_) if elapsed > c.budget => {
                println!("criterion {:>2}: FAIL {}: over budget ({timing})", c.id, c.name);
                failed.push(c.id);
            }
            Ok(msg) => println!("criterion {:>2}: PASS {}: {msg} ({timing})", c.id, c.name),
            Err(msg) => match c.known_red {
                Some(reason) => {
                    println!("criterion {:>2}: FAIL {} (known red, {reason}): {msg} ({timing})", c.id, c.name);
                    known.push(c.id);
                }
                None => {
                    println!("criterion {:>2}: FAIL {}: {msg} ({timing})", c.id, c.name);
                    failed.push(c.id);
                }
            },
        }
    }
    println!(
        "acceptance: {} passed, {} failed, {} known red",
        criteria.len() - failed.len() - known.len(),
        failed.len(),
        known.len()
    );
    if !failed.is_empty() || (strict && !known.is_empty()) {
        std::process::exit(1);
    }
}
