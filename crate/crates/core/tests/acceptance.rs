//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion with its
//! runtime against the budget, then fails if any criterion is red.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use nambu_core::bialgebroid::{check_morphism, AlgebroidData, BialgebroidData, BundleMorphism};
use nambu_core::exterior::{de_rham_d, det, exact};
use nambu_core::extension::{check_gerstenhaber_axioms, restrict_to_algebroid, AnchorMap, GradedBracket};
use nambu_core::filippov::{a4, check_alternating, check_fundamental_identity};
use nambu_core::linalg::RatMatrix;
use nambu_core::linear::{total_space_names, LinearNambuData};
use nambu_core::nambu::NambuTensor;
use nambu_core::sample::{exponent_vectors, increasing_tuples, Sampler};
use nambu_core::{CheckConfig, Frame, MultiVector, Poly, Rational, VerificationReport};

/// Sub-checks of one criterion: a label and whether it held.
type Checks = Vec<(String, bool)>;

/// Id, title, runtime budget and body of one criterion.
type Criterion = (u32, &'static str, Duration, fn() -> Checks);

fn check(checks: &mut Checks, label: impl Into<String>, ok: bool) {
    checks.push((label.into(), ok));
}

fn reports(checks: &mut Checks, label: &str, reps: &[VerificationReport]) {
    let failing: Vec<String> = reps.iter().filter(|r| !r.passed()).map(|r| r.summary()).collect();
    check(checks, format!("{label} {failing:?}"), failing.is_empty());
}

fn cfg(bound: u32, samples: usize) -> CheckConfig {
    CheckConfig { degree_bound: bound, seed: 0, samples }
}

fn x1_volume() -> NambuTensor {
    let p = MultiVector::monomial(Frame::tangent(3), &[0, 1, 2], Poly::var(3, 0)).unwrap();
    NambuTensor::new(p, 3).unwrap()
}

fn criterion_1() -> Checks {
    let mut c = Checks::new();
    let sc = a4();
    let fi = check_fundamental_identity(&sc);
    check(&mut c, "A4 alternation", check_alternating(&sc).passed());
    check(&mut c, format!("A4 FI: {}", fi.summary()), fi.passed() && fi.checked == 1024);

    let mut bad = sc.clone();
    bad.set(&[0, 1, 2], vec![Poly::zero(0), Poly::zero(0), Poly::one(0), Poly::zero(0)]).unwrap();
    let fi = check_fundamental_identity(&bad);
    // frozen from the dense brute-force oracle
    let w = fi.witness.clone().unwrap_or_else(|| nambu_core::Witness::new(Vec::<String>::new(), ""));
    check(
        &mut c,
        format!("corrupted FI: {}", fi.summary()),
        fi.checked == 76 && w.inputs == ["e1", "e2", "e1", "e3", "e4"] && w.defect == "(-1)*e2",
    );
    c
}

fn criterion_2() -> Checks {
    let mut c = Checks::new();
    let t = NambuTensor::volume(3);
    reports(&mut c, "volume Nambu-Poisson at bound 3", &t.check_nambu_poisson(&cfg(3, 200)));
    let mut s = Sampler::new(0, "acceptance-jacobian");
    let agree = (0..200).all(|_| {
        let fs: Vec<Poly> = (0..3).map(|_| s.poly(3, 3, 4)).collect();
        let jac: Vec<Vec<Poly>> = fs.iter().map(Poly::gradient).collect();
        t.nambu_bracket(&fs).unwrap() == det(&jac, 3)
    });
    check(&mut c, "bracket = Jacobian on 200 triples", agree);
    c
}

fn criterion_3() -> Checks {
    let mut c = Checks::new();
    let frame = Frame::tangent(6);
    let p = MultiVector::monomial(frame, &[0, 1, 2], Poly::one(6))
        .unwrap()
        .add(&MultiVector::monomial(frame, &[3, 4, 5], Poly::one(6)).unwrap());
    let fi = NambuTensor::new(p, 3).unwrap().check_fi_monomials(3);
    let w = fi.witness.clone();
    // X = X_{x2, x1x4} = −x4∂3, so [X, {x3,x5,x6}] = 0 while
    // {X(x3), x5, x6} = −{x4, x5, x6} = −1: defect 1
    let frozen = w.as_ref().is_some_and(|w| w.inputs == ["x2", "x1*x4", "x3", "x5", "x6"] && w.defect == "1");
    let max_degree = w.as_ref().map_or(u32::MAX, |w| {
        w.inputs.iter().map(|s| Poly::parse_x(s, 6).unwrap().total_degree().unwrap_or(0)).max().unwrap_or(0)
    });
    check(&mut c, format!("R6 sum FI: {}", fi.summary()), !fi.passed() && frozen && max_degree <= 2);
    c
}

fn criterion_4() -> Checks {
    let mut c = Checks::new();
    let t = NambuTensor::volume(3);
    let mut s = Sampler::new(0, "acceptance-form-bracket");
    let agree = (0..200).all(|_| {
        let forms: Vec<MultiVector> = (0..3).map(|_| s.multivector(Frame::cotangent(3), 1, 2, 3)).collect();
        let (l, r) = t.form_bracket_expressions(&forms).unwrap();
        l == r
    });
    check(&mut c, "both form-bracket expressions agree on 200 triples", agree);
    let props = t.check_form_bracket_properties(&cfg(3, 200));
    check(&mut c, "five form-bracket properties", props.len() == 5);
    reports(&mut c, "form-bracket properties", &props);
    let d = t.check_d_compatibility(&cfg(2, 200));
    check(&mut c, format!("d-compatibility at bound 2: {}", d.summary()), d.passed());
    c
}

fn criterion_5() -> Checks {
    let mut c = Checks::new();
    let frame = Frame::bundle(0, 4);
    let a4b = GradedBracket::from_table(a4(), AnchorMap::new(frame, 2), frame).unwrap();
    let mut s = Sampler::new(0, "acceptance-extension-a4");
    let samples: Vec<MultiVector> = (0..40).map(|i| s.multivector(frame, i % 4, 0, 3)).collect();
    let deg1: Vec<MultiVector> = (0..12).map(|_| s.multivector(frame, 1, 0, 3)).collect();
    reports(&mut c, "A4 extension axioms", &check_gerstenhaber_axioms(&a4b, &samples, &deg1, &cfg(3, 200)));

    let nb = GradedBracket::nambu(NambuTensor::volume(3));
    let mut s = Sampler::new(0, "acceptance-extension-nambu");
    let samples: Vec<MultiVector> = (0..40).map(|i| s.multivector(nb.frame(), i % 4, 1, 2)).collect();
    let closed: Vec<MultiVector> = (0..12).map(|_| exact(&s.nonconstant_poly(3, 2, 2))).collect();
    reports(&mut c, "(TM,T*M) extension axioms", &check_gerstenhaber_axioms(&nb, &samples, &closed, &cfg(3, 200)));

    let r = restrict_to_algebroid(&a4b, &cfg(3, 50)).unwrap();
    check(&mut c, "A4 restriction returns the table", r.bracket == a4() && r.anchor.is_zero());
    reports(&mut c, "A4 restriction", &r.reports);
    let r = restrict_to_algebroid(&nb, &cfg(3, 50)).unwrap();
    check(&mut c, "volume restriction returns P♯", r.anchor == NambuTensor::volume(3).sharp_anchor());
    reports(&mut c, "volume restriction", &r.reports);
    c
}

fn linear(m: usize, r: usize, coeff: &str, idx: &[usize]) -> LinearNambuData {
    let frame = Frame::tangent(m + r);
    let p = MultiVector::monomial(frame, idx, Poly::parse(coeff, &total_space_names(m, r)).unwrap()).unwrap();
    LinearNambuData::new(m, r, NambuTensor::new(p, 3).unwrap()).unwrap()
}

fn criterion_6() -> Checks {
    let mut c = Checks::new();
    let cf = cfg(3, 200);
    for (name, ld) in [("xi1 fixture", linear(1, 3, "xi1", &[1, 2, 3])), ("dx fixture", linear(1, 2, "1", &[0, 1, 2]))] {
        reports(&mut c, &format!("{name} linearity"), &ld.check_linear(&cf));
        reports(&mut c, &format!("{name} dual algebroid"), &ld.verify_dual_algebroid(&cf).unwrap());
    }
    let sq = linear(1, 3, "xi1^2", &[1, 2, 3]).check_linear(&cf);
    let w = sq[0].witness.as_ref();
    check(
        &mut c,
        format!("xi1^2 clause (a): {}", sq[0].summary()),
        w.is_some_and(|w| w.inputs == ["xi1", "xi2", "xi3"] && w.defect == "xi1^2"),
    );
    c
}

fn criterion_7() -> Checks {
    let mut c = Checks::new();
    let cf = cfg(3, 100);
    let tm = AlgebroidData::tangent(3);
    let cot = Frame::cotangent(3);
    let mut all_equal = true;
    let mut count = 0;
    for k in 0..=3 {
        for idx in increasing_tuples(3, k) {
            for e in exponent_vectors(3, 0, 2) {
                let w = MultiVector::monomial(cot, &idx, Poly::monomial(&e, Rational::from_int(1))).unwrap();
                all_equal &= tm.d(&w).unwrap() == de_rham_d(&w).unwrap();
                count += 1;
            }
        }
    }
    check(&mut c, format!("d_A = d on {count} monomial forms"), all_equal);

    for (name, t) in [("volume", NambuTensor::volume(3)), ("x1 volume", x1_volume())] {
        let bd = BialgebroidData::tangent_cotangent(t.clone());
        reports(&mut c, &format!("{name} weak"), &bd.check_weak(&cf));
        reports(&mut c, &format!("{name} strong"), &bd.check_strong_compatibility(&cf));
        match bd.induce_base_nambu(&cf) {
            Ok((induced, reps)) => {
                check(&mut c, format!("{name} induced tensor coincides"), induced == t);
                reports(&mut c, &format!("{name} induced checks"), &reps);
                reports(&mut c, &format!("{name} anchor morphism"), &bd.check_anchor_morphism(&induced, &cf));
            }
            Err(e) => check(&mut c, format!("{name} induce: {e}"), false),
        }
        let exact = bd.check_exact_bracket(&cf);
        check(&mut c, format!("{name} exact bracket: {}", exact.summary()), exact.passed() && exact.checked == 100);
        reports(&mut c, &format!("{name} identity morphism"), &check_morphism(&bd, &bd, &BundleMorphism::identity(3, 3), &cf).unwrap());
    }

    let m = RatMatrix::from_rows(vec![
        vec![1.into(), 1.into(), 0.into()],
        vec![0.into(), 1.into(), 0.into()],
        vec![0.into(), 0.into(), 2.into()],
    ]);
    let t = NambuTensor::volume(3);
    let src = BialgebroidData::transported(&t, &m).unwrap();
    let dst = BialgebroidData::tangent_cotangent(t);
    let a = BundleMorphism::from_anchor(src.algebroid());
    reports(&mut c, "anchor as morphism", &check_morphism(&src, &dst, &a, &cf).unwrap());
    let scaled = check_morphism(&src, &dst, &a.scale(&Rational::from_int(2)), &cf).unwrap();
    check(&mut c, format!("scaled morphism anchor clause: {}", scaled[1].summary()), !scaled[1].passed());
    c
}

fn criterion_8() -> Checks {
    let mut c = Checks::new();
    let dir = tempfile::tempdir().unwrap();
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (command, fixture) in [
        ("check-bialgebroid", "bialgebroid_x1_volume3.json"),
        ("check-nambu", "sum_r6.json"),
        ("check-nambu", "volume3.json"),
    ] {
        let mut outputs = Vec::new();
        for (run, workers) in ["1", "8", "1", "8"].iter().enumerate() {
            let out = dir.path().join(format!("{command}-{run}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_nambu"))
                .args([command, "--input", fixtures.join(fixture).to_str().unwrap()])
                .args(["--seed", "7", "--workers", workers, "--report", out.to_str().unwrap()])
                .output()
                .unwrap()
                .status;
            outputs.push((status.code(), std::fs::read(&out).unwrap_or_default()));
        }
        let same = outputs.iter().all(|o| o == &outputs[0]) && !outputs[0].1.is_empty();
        check(&mut c, format!("{command} {fixture} byte-identical with 1 and 8 workers"), same);
    }
    c
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        (1, "A4 exhaustive FI and corrupted witness", Duration::from_secs(1), criterion_1),
        (2, "volume tensor on R3", Duration::from_secs(30), criterion_2),
        (3, "non-decomposable tensor on R6", Duration::from_secs(60), criterion_3),
        (4, "Nambu-form bracket", Duration::from_secs(120), criterion_4),
        (5, "bracket extension", Duration::from_secs(120), criterion_5),
        (6, "linear Nambu structures", Duration::from_secs(60), criterion_6),
        (7, "bialgebroid pipeline", Duration::from_secs(180), criterion_7),
        (8, "CLI determinism", Duration::from_secs(600), criterion_8),
    ];
    let mut red = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let checks = run();
        let elapsed = start.elapsed();
        let failed: Vec<&String> = checks.iter().filter(|(_, ok)| !ok).map(|(l, _)| l).collect();
        let ok = failed.is_empty() && elapsed <= budget;
        println!(
            "criterion {id}: {} {name} ({} checks, {:.2}s of {}s){}",
            if ok { "PASS" } else { "FAIL" },
            checks.len(),
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if failed.is_empty() { String::new() } else { format!(" failing: {failed:?}") }
        );
        if !ok {
            red.push(id);
        }
    }
    assert!(red.is_empty(), "red criteria: {red:?}");
}
