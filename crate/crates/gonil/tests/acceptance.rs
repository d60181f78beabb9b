//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (run with `--nocapture` to see them). Every tolerance
//! and time bound is pinned in the assertions.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gonil::bilinear::BilinearForm;
use gonil::canon::{
    canonical_gram, canonical_nilpotent_matrix, check_skew, nilpotent_witness_basis,
};
use gonil::geodesic::{solve_alpha, SolveOutcome};
use gonil::homspace::ReductiveSpace;
use gonil::lie::LieAlgebra;
use gonil::linalg::{invert, rat, rint, unit_vec, Matrix, Rat};
use gonil::spacefile;
use gonil::structure::{
    adjoint_image_chain, chain_dims, constrained_generator_matrix, secondary_generator_form,
    verify_degenerate, verify_nondegenerate, Branch, ViolationCode,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn load(name: &str) -> ReductiveSpace {
    spacefile::parse_space_file(&fixture(name))
        .expect("fixture parses")
        .space
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

#[test]
fn criterion_01_skewness_identity() {
    for p in [0usize, 1, 2, 5] {
        let b = canonical_nilpotent_matrix(p);
        let g = BilinearForm::new(canonical_gram(p)).unwrap();
        let start = Instant::now();
        let skew = check_skew(&b, &g).unwrap();
        let elapsed = start.elapsed();
        assert!(skew, "canonical pair must be skew for p = {p}");
        assert!(
            elapsed < Duration::from_millis(1),
            "p = {p} took {elapsed:?}"
        );
    }
    println!("PASS [1] skewness identity on the canonical pair for p in {{0,1,2,5}}, < 1 ms each");
}

#[test]
fn criterion_02_trace_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for round in 0..100 {
        let p = rng.gen_range(0..=6);
        let a12 = random_rat(&mut rng);
        let b1: Vec<Rat> = (0..p).map(|_| random_rat(&mut rng)).collect();
        let b2: Vec<Rat> = (0..p).map(|_| random_rat(&mut rng)).collect();
        let m = constrained_generator_matrix(&a12, &b1, &b2);
        // route 1: exact matrix multiplication
        let trace = m.mul(&m).trace();
        // route 2: the closed form -2·Σ b2ᵢ²
        let expected = -rint(2) * b2.iter().map(|b| b * b).sum::<Rat>();
        assert_eq!(trace, expected, "round {round}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("PASS [2] trace identity on 100 random constrained generator matrices, < 1 s");
}

#[test]
fn criterion_03_span_chain() {
    let maps = vec![
        canonical_nilpotent_matrix(2),
        secondary_generator_form(&[rint(1), rint(1)]),
    ];
    let start = Instant::now();
    let chain = adjoint_image_chain(&maps, 5);
    let elapsed = start.elapsed();
    assert_eq!(chain_dims(&chain), vec![5, 3, 1, 0]);
    let stage = &chain[chain.len() - 2];
    assert_eq!(
        stage.basis(),
        &[unit_vec(5, 0)],
        "dim-1 stage must be the null direction"
    );
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    println!("PASS [3] iterated image chain [5,3,1,0] ending on the null direction, < 1 ms");
}

#[test]
fn criterion_04_geodesic_solver() {
    let start = Instant::now();
    let rotation = load("heisenberg_so2.json");
    let dm = rotation.dim_m();
    let mut directions: Vec<Vec<Rat>> = Vec::new();
    for i in 0..dm {
        directions.push(rotation.m_basis()[i].clone());
    }
    for i in 0..dm {
        for j in i + 1..dm {
            directions.push(gonil::linalg::add_vec(
                &rotation.m_basis()[i],
                &rotation.m_basis()[j],
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..1000 {
        let coeffs: Vec<Rat> = (0..dm).map(|_| random_rat(&mut rng)).collect();
        if coeffs.iter().all(Rat::is_zero) {
            continue;
        }
        directions.push(rotation.vector_from_m_coefficients(&coeffs));
    }
    assert!(directions.len() >= 1000 + 6 - 3);
    for xi in &directions {
        match solve_alpha(&rotation, xi).unwrap() {
            SolveOutcome::Feasible(sol) => {
                assert!(
                    sol.k.is_zero(),
                    "k must be 0 throughout, got {} for {xi:?}",
                    sol.k
                )
            }
            SolveOutcome::Infeasible => panic!("direction {xi:?} must be solvable"),
        }
    }

    // counterexample side, exercised through the CLI surface
    let out = Command::new(env!("CARGO_BIN_EXE_gonil"))
        .args(["go-check"])
        .arg(fixture("heisenberg_trivialH.json"))
        .args(["--samples", "100", "--seed", "7"])
        .output()
        .expect("binary runs");
    assert_eq!(
        out.status.code(),
        Some(1),
        "go-check must exit 1 on a counterexample"
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let xi = report["body"]["status"]["xi"]
        .as_array()
        .expect("counterexample carries xi")
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect::<Vec<_>>();
    assert_eq!(xi, vec!["1", "0", "1"], "counterexample must be v1 + z");
    // exact re-validation of infeasibility from the witness
    let trivial = load("heisenberg_trivialH.json");
    let xi_vec = vec![rint(1), rint(0), rint(1)];
    assert_eq!(
        solve_alpha(&trivial, &xi_vec).unwrap(),
        SolveOutcome::Infeasible
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    println!(
        "PASS [4] geodesic solver: 1006 solvable directions with k = 0, and the exact \
         counterexample v1 + z, < 2 s"
    );
}

#[test]
fn criterion_05_null_curve_law() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut nonzero_k_cases = 0usize;
    let mut trials = 0usize;
    while trials < 1000 {
        // random valid fixture: [e0, e1] = c·e1 with Gram [[a, b], [b, d]],
        // b ≠ 0 keeping the form Lorentz when a = 0
        let c = loop {
            let c = random_rat(&mut rng);
            if !c.is_zero() {
                break c;
            }
        };
        let b = loop {
            let b = random_rat(&mut rng);
            if !b.is_zero() {
                break b;
            }
        };
        let d = random_rat(&mut rng);
        let mut alg = LieAlgebra::new(2);
        alg.set_simple_bracket(0, 1, 1, c.clone());
        let mut gram = Matrix::zeros(2, 2);
        gram[(0, 1)] = b.clone();
        gram[(1, 0)] = b.clone();
        gram[(1, 1)] = d.clone();
        let space = ReductiveSpace::build(alg, vec![], vec![unit_vec(2, 0), unit_vec(2, 1)], gram)
            .expect("two-dimensional family always builds");
        // cycle deterministic and random directions
        let xi = match trials % 4 {
            0 => unit_vec(2, 0),
            1 => unit_vec(2, 1),
            2 => vec![rint(1), rint(1)],
            _ => {
                let v = vec![random_rat(&mut rng), random_rat(&mut rng)];
                if v.iter().all(Rat::is_zero) {
                    continue;
                }
                v
            }
        };
        trials += 1;
        if let SolveOutcome::Feasible(sol) = solve_alpha(&space, &xi).unwrap() {
            if !sol.k.is_zero() {
                nonzero_k_cases += 1;
                let norm = space.metric_eval(&xi, &xi);
                assert!(
                    norm.is_zero(),
                    "nonzero k = {} on a non-null direction of norm {}",
                    sol.k,
                    norm
                );
            }
        }
    }
    assert!(
        nonzero_k_cases > 0,
        "the law must be exercised, not vacuous"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "PASS [5] null-curve law: {nonzero_k_cases}/1000 trials returned k != 0, all on exactly \
         null directions, < 5 s"
    );
}

#[test]
fn criterion_06_naturally_reductive_consistency() {
    let start = Instant::now();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut natred_fixtures = 0usize;
    let mut entries: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map_or(false, |x| x == "json"))
        .collect();
    entries.sort();
    for path in entries {
        let Ok(parsed) = spacefile::parse_space_file(&path) else {
            continue;
        };
        let space = parsed.space;
        if !space.is_naturally_reductive().naturally_reductive {
            continue;
        }
        natred_fixtures += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        let mut checked = 0;
        while checked < 200 {
            let coeffs: Vec<Rat> = (0..space.dim_m()).map(|_| random_rat(&mut rng)).collect();
            if coeffs.iter().all(Rat::is_zero) {
                continue;
            }
            checked += 1;
            let xi = space.vector_from_m_coefficients(&coeffs);
            match solve_alpha(&space, &xi).unwrap() {
                SolveOutcome::Feasible(sol) => {
                    assert!(sol.k.is_zero(), "{path:?}: k must be 0");
                    assert!(
                        sol.alpha.iter().all(Rat::is_zero),
                        "{path:?}: alpha must be 0"
                    );
                }
                SolveOutcome::Infeasible => panic!("{path:?}: direction must be solvable"),
            }
        }
    }
    assert!(
        natred_fixtures >= 3,
        "expected several naturally reductive fixtures"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    println!(
        "PASS [6] naturally reductive fixtures ({natred_fixtures}) solve with (alpha, k) = (0, 0) \
         on 200 sampled directions each, < 2 s"
    );
}

#[test]
fn criterion_07_structure_verifiers() {
    let start = Instant::now();

    // nondegenerate case passes on the abelian and Heisenberg fixtures
    let abelian = load("abelian_minkowski.json");
    let rep = verify_nondegenerate(&abelian).unwrap();
    assert!(rep.pass());
    assert_eq!(rep.class, 1);

    let heis = load("heisenberg_trivialH.json");
    let rep = verify_nondegenerate(&heis).unwrap();
    assert!(rep.pass(), "violations: {:?}", rep.violations);
    assert_eq!(rep.class, 2);
    assert_eq!(rep.branch, Branch::AdTrivial);

    // degenerate case passes on the dim-4 fixture
    let degen = load("thm42_dim4.json");
    let rep = verify_degenerate(&degen).unwrap();
    assert!(rep.pass(), "violations: {:?}", rep.violations);
    assert_eq!(rep.class, 2);
    let sig = rep.signature_w.unwrap();
    assert_eq!((sig.positive, sig.negative, sig.null), (1, 1, 0));

    // mutation 1: one Gram entry perturbed — the degenerate fixture's null
    // commutator direction becomes unit, flipping the hypothesis
    let text = std::fs::read_to_string(fixture("thm42_dim4.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["gram_m"][2][2] = serde_json::json!("1");
    let mutated = spacefile::parse_space_bytes(v.to_string().as_bytes()).unwrap();
    assert_eq!(
        verify_degenerate(&mutated.space).unwrap_err(),
        gonil::structure::HypothesisError::CommutatorNondegenerate
    );

    // mutation 1b: a perturbed isotropy-invariant metric is refused at build
    // time with the violating triple named
    let text = std::fs::read_to_string(fixture("heisenberg_so2.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["gram_m"][1][1] = serde_json::json!("2");
    let err = spacefile::parse_space_bytes(v.to_string().as_bytes()).unwrap_err();
    assert!(
        err.to_string().contains("not ad(h)-skew"),
        "expected the invariance identity named, got: {err}"
    );

    // mutation 2: an added bracket making class 3 with a nondegenerate
    // commutator must fail with the invariance identity and class exclusion
    // named, and no sampling-passing metric: the certifier finds a
    // counterexample direction
    let fil = load("filiform_l4.json");
    let rep = verify_nondegenerate(&fil).unwrap();
    assert!(!rep.pass());
    assert!(rep
        .violations
        .iter()
        .any(|v| v.code == ViolationCode::DerivedIdealInvariance));
    assert!(rep
        .violations
        .iter()
        .any(|v| v.code == ViolationCode::ClassExcluded));
    let verdict = gonil::geodesic::go_certify(&fil, 200, 7, None);
    assert!(
        matches!(
            verdict.status,
            gonil::geodesic::GoStatus::Counterexample { .. }
        ),
        "class-3 fixture must not pass sampling"
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "PASS [7] structure verifiers: passes on abelian/Heisenberg/degenerate fixtures, named \
         violations on mutated ones, < 1 s"
    );
}

fn random_unimodular(n: usize, ops: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut q = Matrix::identity(n);
    if n < 2 {
        return q;
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = [rint(-2), rint(-1), rint(1), rint(2)][rng.gen_range(0..4)].clone();
        for col in 0..n {
            let v = &q[(i, col)] + &c * &q[(j, col)];
            q[(i, col)] = v;
        }
        if rng.gen_bool(0.3) {
            for col in 0..n {
                let t = q[(i, col)].clone();
                q[(i, col)] = q[(j, col)].clone();
                q[(j, col)] = t;
            }
        }
    }
    q
}

#[test]
fn criterion_08_sylvester_radical_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for _ in 0..20 {
        let n = rng.gen_range(1..=10usize);
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let e = rint(rng.gen_range(-2..=2));
                gram[(i, j)] = e.clone();
                gram[(j, i)] = e;
            }
        }
        let form = BilinearForm::new(gram.clone()).unwrap();
        let sig = form.signature();
        assert_eq!(form.radical().dim(), sig.null);
        for _ in 0..30 {
            let q = random_unimodular(n, 6, &mut rng);
            let congruent = BilinearForm::new(q.transpose().mul(&gram).mul(&q)).unwrap();
            assert_eq!(
                congruent.signature(),
                sig,
                "signature must be congruence-invariant"
            );
            assert_eq!(congruent.radical().dim(), sig.null);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    println!(
        "PASS [8] signature invariance under 30 unimodular congruences for 20 random forms up to \
         dim 10, exact, < 2 s"
    );
}

#[test]
fn criterion_09_search_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, name: &str| -> (Vec<u8>, serde_json::Value) {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_gonil"))
            .args(["search", "--family", "filiform", "--dims", "4..5"])
            .args(["--jobs", jobs, "--samples", "64", "--seed", "9"])
            .arg("--out")
            .arg(&out)
            .output()
            .expect("binary runs");
        assert!(status.status.success(), "search must exit 0");
        let bytes = std::fs::read(&out).unwrap();
        let summary: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(out.with_extension("summary.json")).unwrap(),
        )
        .unwrap();
        (bytes, summary)
    };
    let (bytes1, summary1) = run("1", "scan1.jsonl");
    let (bytes8, summary8) = run("8", "scan8.jsonl");
    assert_eq!(
        bytes1, bytes8,
        "JSONL must be byte-identical across job counts"
    );
    assert_eq!(summary1, summary8);
    assert_eq!(
        summary1["theorem_contradictions"].as_array().unwrap().len(),
        0,
        "no theorem contradictions may appear"
    );
    assert!(summary1["total"].as_u64().unwrap() > 0);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "PASS [9] search determinism: jobs 1 and 8 byte-identical over the default filiform \
         4..5 grid, zero contradictions, < 60 s"
    );
}

#[test]
fn criterion_10_canonical_witness_self_validation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    for round in 0..50 {
        let p = [0usize, 1, 2, 5][round % 4];
        let n = p + 3;
        let b = canonical_nilpotent_matrix(p);
        let g = canonical_gram(p);
        let q = random_unimodular(n, 6, &mut rng);
        let qi = invert(&q).expect("unimodular");
        let b_conj = qi.mul(&b).mul(&q);
        let g_conj = BilinearForm::new(q.transpose().mul(&g).mul(&q)).unwrap();
        let cf = nilpotent_witness_basis(&b_conj, &g_conj)
            .unwrap_or_else(|e| panic!("round {round} (p = {p}): {e}"));
        let p_inv = invert(&cf.witness).unwrap();
        assert_eq!(
            p_inv.mul(&b_conj).mul(&cf.witness),
            canonical_nilpotent_matrix(p),
            "round {round}: operator identity"
        );
        assert_eq!(
            cf.witness.transpose().mul(g_conj.gram()).mul(&cf.witness),
            canonical_gram(p),
            "round {round}: gram identity"
        );
        assert!(cf.triple_scale.is_none() && cf.complement_diag.is_none());
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("PASS [10] canonical witness self-validation on 50 random conjugates, exact, < 5 s");
}
