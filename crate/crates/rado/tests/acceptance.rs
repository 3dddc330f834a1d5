//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `cargo test --test acceptance -- --nocapture`).
//! Every oracle here is implemented independently of the library code it
//! checks.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::Rational64;

use rado::coloring::Coloring;
use rado::matrix::{columns_property, evaluate_image, verify_certificate, SparseIntMatrix};
use rado::proof::{execute_proof, ProofParams};
use rado::search::{
    classic, export_cnf, forced, min_forcing_n, solve_external, ForcedVerdict,
    MinForcing, SatOutcome,
};
use rado::systems::{gen_finite_system, gen_nearmiss_kernel, transform_nearmiss, VarName};
use rado::windows::{
    check_new_lemma, diffset, iterate, lcm_bound, sumset, LemmaVerdict, Window, WindowSet,
};

/// xorshift64* — deterministic test randomness without extra dependencies.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

fn pass(criterion: u32, what: &str, started: Instant) {
    println!(
        "acceptance {criterion} ({what}): PASS in {:.2?}",
        started.elapsed()
    );
}

#[test]
fn criterion_1_columns_property() {
    let started = Instant::now();

    let per_case = |rows: &[Vec<i64>], expect: bool| {
        let t0 = Instant::now();
        let m = SparseIntMatrix::from_dense_rows(rows);
        let cert = columns_property(&m).unwrap();
        assert_eq!(cert.is_some(), expect, "rows {rows:?}");
        if let Some(cert) = cert {
            verify_certificate(&m, &cert).unwrap();
        }
        assert!(t0.elapsed().as_secs() < 1, "case exceeded 1 s");
    };

    per_case(&[vec![1, 1, -1]], true);
    per_case(&[vec![1, 1, -3]], false);
    for n in 1..=3usize {
        let t0 = Instant::now();
        let sys = gen_finite_system(n, &[1, 2, 3]).unwrap();
        let cert = rado::matrix::columns_property_bounded(&sys.matrix, sys.matrix.n_cols())
            .unwrap()
            .expect("finite system has the columns property");
        verify_certificate(&sys.matrix, &cert).unwrap();
        assert!(t0.elapsed().as_secs() < 1, "finite system n={n} exceeded 1 s");
    }

    pass(1, "columns property", started);
}

/// Independent witness oracle for the two classic systems: brute force over
/// the (two) variables, no library search involved.
fn oracle_has_witness(colors: &[u8], kind: &str) -> bool {
    let n = colors.len() as i64;
    let col = |p: i64| colors[(p - 1) as usize];
    match kind {
        "schur" => {
            for x in 1..=n {
                for y in 1..=n {
                    let s = x + y;
                    if s <= n && col(x) == col(y) && col(y) == col(s) {
                        return true;
                    }
                }
            }
            false
        }
        "ap3" => {
            for a in 1..=n {
                for d in 1..=n {
                    let c = a + 2 * d;
                    if c <= n && col(a) == col(a + d) && col(a + d) == col(c) {
                        return true;
                    }
                }
            }
            false
        }
        _ => unreachable!(),
    }
}

#[test]
fn criterion_2_forced_matches_enumeration() {
    let started = Instant::now();
    for (kind, system) in [("schur", classic::schur_image()), ("ap3", classic::ap3_image())] {
        for n in 1..=8usize {
            // full 2^n enumeration with the brute-force oracle
            let mut all_forced = true;
            for mask in 0..(1u32 << n) {
                let colors: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                if !oracle_has_witness(&colors, kind) {
                    all_forced = false;
                    break;
                }
            }
            let result = forced(&system, 2, n, n, 10_000_000).unwrap();
            match result.verdict {
                ForcedVerdict::Forced => {
                    assert!(all_forced, "{kind} N={n}: library forced, oracle avoidable")
                }
                ForcedVerdict::Avoidable(c) => {
                    assert!(!all_forced, "{kind} N={n}: library avoidable, oracle forced");
                    assert_eq!(c.n(), n);
                    assert!(
                        !oracle_has_witness(c.colors(), kind),
                        "{kind} N={n}: returned coloring is not avoiding"
                    );
                }
                ForcedVerdict::Unknown { .. } => panic!("{kind} N={n}: budget exhausted"),
            }
        }
    }
    assert!(started.elapsed().as_secs() < 30, "criterion 2 exceeded 30 s");
    pass(2, "forced vs full enumeration", started);
}

#[test]
fn criterion_3_classical_numbers_and_cnf() {
    let started = Instant::now();
    let solver = format!("{} dpll", env!("CARGO_BIN_EXE_rado"));

    for (kind, system, expected) in [
        ("schur", classic::schur_image(), 5usize),
        ("ap3", classic::ap3_image(), 9usize),
    ] {
        let min = min_forcing_n(&system, 2, 12, 12, 50_000_000).unwrap();
        assert_eq!(min, MinForcing::Found(expected), "{kind}");

        // CNF cross-check: UNSAT at the forcing window, SAT just below it
        let cnf = export_cnf(&system, 2, expected, expected, 100_000).unwrap();
        let outcome = solve_external(&system, &cnf, expected, &solver).unwrap();
        assert_eq!(outcome, SatOutcome::Unsat, "{kind} at N={expected}");

        let below = expected - 1;
        let cnf = export_cnf(&system, 2, below, below, 100_000).unwrap();
        match solve_external(&system, &cnf, below, &solver).unwrap() {
            SatOutcome::Sat(coloring) => {
                // solve_external re-verifies, but check with the oracle too
                assert!(
                    !oracle_has_witness(coloring.colors(), kind),
                    "{kind}: SAT model does not avoid"
                );
            }
            SatOutcome::Unsat => panic!("{kind} at N={below}: expected SAT"),
        }
    }
    assert!(started.elapsed().as_secs() < 120, "criterion 3 exceeded 2 min");
    pass(3, "Schur 5 / 3-AP 9 with CNF cross-check", started);
}

#[test]
fn criterion_4_large_elements_lemma_windows() {
    let started = Instant::now();
    let window = Window::new(1, 3000).unwrap();
    let out = Window::new(-600, 600).unwrap();
    for q in [2i64, 3, 4] {
        // the zero class is the one residue class mod q meeting every
        // subgroup of the integers
        let a = WindowSet::residue_class(window, 0, q).unwrap();
        let m = lcm_bound(Rational64::new(1, q)).unwrap();
        for t in [0i64, 100] {
            let report = check_new_lemma(&a, t, 2 * q as usize, m, out).unwrap();
            assert!(
                matches!(report.verdict, LemmaVerdict::HoldsOnWindow { .. }),
                "q={q} t={t}: {:?}",
                report.verdict
            );
        }
    }
    assert!(started.elapsed().as_secs() < 10, "criterion 4 exceeded 10 s");
    pass(4, "large-elements lemma holds on window", started);
}

/// Re-verify an execute_proof witness from its JSON form alone: exact
/// evaluation, window membership, one color, positive variables.
fn reverify_witness(witness: &serde_json::Value, coloring: &Coloring, a: &[i64], n_max: usize) {
    let assignment: BTreeMap<VarName, i64> = witness["assignment"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.parse().unwrap(), v.as_i64().unwrap()))
        .collect();
    assert!(assignment.values().all(|&v| v >= 1), "nonpositive variable");

    let system = rado::systems::gen_dh_truncation(n_max, a).unwrap();
    let x: Vec<BigInt> = system
        .variables
        .iter()
        .map(|v| BigInt::from(assignment[v]))
        .collect();
    let image = evaluate_image(&system.matrix, &x).unwrap();
    let mut seen_color = None;
    for value in image {
        let v = i64::try_from(value).unwrap();
        assert!(v >= 1 && v <= coloring.n() as i64, "image value {v} outside window");
        let c = coloring.color(v).unwrap();
        match seen_color {
            None => seen_color = Some(c),
            Some(prev) => assert_eq!(prev, c, "image not monochromatic"),
        }
    }
}

#[test]
fn criterion_5_proof_executor_end_to_end() {
    let started = Instant::now();
    let a = [1i64, 2, 3, 4];
    let n = 100_000;
    for (label, coloring) in [
        ("constant", Coloring::constant(n)),
        ("parity", Coloring::residue(n, 2)),
        ("mod3", Coloring::residue(n, 3)),
    ] {
        let t0 = Instant::now();
        let trace = execute_proof(&coloring, &a, 4, &ProofParams::default()).unwrap();
        assert!(trace.success, "{label}: {}", trace.render_text());
        let witness = trace.witness.as_ref().expect("witness on success");
        reverify_witness(witness, &coloring, &a, 4);

        // deterministic: a second run yields the identical trace
        let again = execute_proof(&coloring, &a, 4, &ProofParams::default()).unwrap();
        assert_eq!(
            serde_json::to_value(&trace).unwrap(),
            serde_json::to_value(&again).unwrap(),
            "{label}: trace not deterministic"
        );
        assert!(t0.elapsed().as_secs() < 60, "{label} exceeded 60 s");
    }
    pass(5, "proof executor end-to-end", started);
}

#[test]
fn criterion_6_near_miss_transformation() {
    let started = Instant::now();
    let mut rng = Rng(0x9E3779B97F4A7C15);
    for case in 0..1000 {
        let n_max = rng.range(1, 4) as usize;
        let a: Vec<i64> = (0..n_max).map(|_| rng.range(1, 5)).collect();
        let y = rng.range(1, 6);

        // free values: y and the x-tilde's; each z_n is then pinned by its
        // kernel row
        let mut witness: BTreeMap<VarName, BigInt> = BTreeMap::new();
        witness.insert(VarName::Y, BigInt::from(y));
        let mut xt = BTreeMap::new();
        for nn in 1..=n_max {
            let mut sum = 0i64;
            for i in 1..=nn {
                let v = rng.range(-8, 30);
                xt.insert((nn, i), v);
                witness.insert(VarName::XTilde(nn, i), BigInt::from(v));
                sum += v;
            }
            let z = sum - (nn as i64) * a[nn - 1] * y;
            witness.insert(VarName::Z(nn), BigInt::from(z));
        }
        // sanity: this really is a kernel witness
        let kernel = gen_nearmiss_kernel(n_max, &a).unwrap();
        assert!(kernel.evaluate(&witness).unwrap().iter().all(|v| v == &BigInt::from(0)));

        let transform = transform_nearmiss(&witness, n_max, &a).unwrap();

        // identity 1: the image rows reproduce (z_n; x-tilde row; ...; y)
        let mut expected: Vec<BigInt> = Vec::new();
        for nn in 1..=n_max {
            expected.push(witness[&VarName::Z(nn)].clone());
            for i in 1..=nn {
                expected.push(witness[&VarName::XTilde(nn, i)].clone());
            }
        }
        expected.push(BigInt::from(y));
        assert_eq!(transform.image_values, expected, "case {case}");

        // identity 2: x_{ni} = xt_{ni} - a_n y, exactly
        let mut any_low = false;
        for (&(nn, i), &v) in &xt {
            let x = &transform.assignment[&VarName::X(nn, i)];
            assert_eq!(*x, BigInt::from(v - a[nn - 1] * y), "case {case}");
            if v <= a[nn - 1] * y {
                any_low = true;
            }
        }
        assert_eq!(
            transform.positivity_ok(),
            !any_low,
            "case {case}: positivity flag mismatch"
        );
    }
    pass(6, "near-miss transformation identities", started);
}

#[test]
fn criterion_7_set_arithmetic_oracle() {
    let started = Instant::now();
    let mut rng = Rng(0xD1B54A32D192ED03);
    let universe = Window::new(-150, 150).unwrap();

    let random_set = |rng: &mut Rng| -> (WindowSet, BTreeSet<i64>) {
        let size = rng.range(1, 64);
        let members: BTreeSet<i64> = (0..size).map(|_| rng.range(-150, 150)).collect();
        (
            WindowSet::from_members(universe, members.iter().copied()).unwrap(),
            members,
        )
    };

    for case in 0..500 {
        let (a, na) = random_set(&mut rng);
        let (b, nb) = random_set(&mut rng);

        // wide output window: full agreement, nothing clipped
        let wide = Window::new(-400, 400).unwrap();
        let naive_sum: BTreeSet<i64> = na.iter().flat_map(|&x| nb.iter().map(move |&y| x + y)).collect();
        let got = sumset(&a, &b, wide);
        assert!(!got.clipped(), "case {case}: wide sumset clipped");
        assert_eq!(got.members(), naive_sum.iter().copied().collect::<Vec<_>>(), "case {case}");

        let naive_diff: BTreeSet<i64> = na.iter().flat_map(|&x| nb.iter().map(move |&y| x - y)).collect();
        let got = diffset(&a, &b, wide);
        assert_eq!(got.members(), naive_diff.iter().copied().collect::<Vec<_>>(), "case {case}");

        // narrow output window: exact within the window
        let narrow = Window::new(-60, 60).unwrap();
        let got = sumset(&a, &b, narrow);
        let clipped_naive: Vec<i64> = naive_sum.iter().copied().filter(|v| narrow.contains(*v)).collect();
        assert_eq!(got.members(), clipped_naive, "case {case}: narrow sumset");

        // k-fold sumset vs repeated naive convolution
        let k = rng.range(1, 4) as usize;
        let mut naive_k = na.clone();
        for _ in 1..k {
            naive_k = naive_k.iter().flat_map(|&x| na.iter().map(move |&y| x + y)).collect();
        }
        let span = Window::new(-(150 * k as i64), 150 * k as i64).unwrap();
        let got = iterate(k, &a, span).unwrap();
        assert!(!got.clipped(), "case {case}: k-fold clipped on covering window");
        assert_eq!(got.members(), naive_k.iter().copied().collect::<Vec<_>>(), "case {case}: k={k}");
    }
    pass(7, "set arithmetic vs naive oracle", started);
}
