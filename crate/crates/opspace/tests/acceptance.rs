//! Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
//! here and not configurable.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use opspace_core::classify::{classify, tro_dichotomy, TroKind};
use opspace_core::combinat::{binomial, Subset};
use opspace_core::fock::{car_check, fock_vs_hnk, FockSampling};
use opspace_core::matrix::{ComplexMatrix, ToleranceConfig};
use opspace_core::norms::{column_vs_hnk_closed_form, estimate_pair, SpaceKind, WitnessConfig};
use opspace_core::projections::{
    check_coherence, check_conditional_expectation, check_contractive, check_pnk_formulas,
    coherence_identity_holds, expansion_fixtures, is_expansion, pn_one_denominator, same_span,
    support_decomposition, support_space, ProjectionSpec,
};
use opspace_core::sampling::{random_matrix, random_permutation, random_unitary, random_vector, rng};
use opspace_core::spaces::{
    build_column, build_hnk, build_hnk_intersection, build_row, check_grid_relation, OperatorBasis,
};
use opspace_core::triple::{family_word, TripleElement};
use opspace_core::C64;

const SEED: u64 = 20240601;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default().with_seed(SEED)
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn family(space: &OperatorBasis) -> Vec<TripleElement> {
    (0..space.dim()).map(|i| TripleElement::basis_element(space, i)).collect()
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn orthonormal_grid() -> Outcome {
    const TOL: f64 = 1e-8;
    let start = Instant::now();
    let mut r = rng(SEED);
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        for k in 1..=n {
            let space = build_hnk(n, k).map_err(e)?;
            for _ in 0..100 {
                let c = random_vector(&mut r, n);
                let euclid = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let got = space.norm_of(&c, &cfg()).map_err(e)?;
                worst = worst.max((got - euclid).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= TOL, format!("max deviation {worst:e} > {TOL:e}"))?;
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("max deviation {worst:e}, {elapsed:.1?}"))
}

fn grid_relation() -> Outcome {
    let mut triples = 0;
    for n in 1..=5 {
        for k in 1..=n {
            let g = check_grid_relation(n, k).map_err(e)?;
            ensure(g.violations == 0, format!("n={n} k={k}: {} violations", g.violations))?;
            triples += g.triples_checked;
        }
    }
    Ok(format!("{triples} index triples, all exact"))
}

fn car() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut worst: f64 = 0.0;
    for n in 1..=10 {
        let r = car_check(n, &cfg()).map_err(e)?;
        ensure(r.max_residual <= TOL, format!("n={n}: residual {:e}", r.max_residual))?;
        ensure(r.pass, format!("n={n}: hilbertian residual {:?}", r.hilbertian_residual))?;
        worst = worst.max(r.max_residual);
    }
    Ok(format!("n <= 10, max residual {worst:e}"))
}

fn fock() -> Outcome {
    const STRUCTURAL: f64 = 1e-9;
    const SAMPLING: f64 = 1e-7;
    let sampling = FockSampling { samples: 50, max_level: 3 };
    let (mut s, mut m): (f64, f64) = (0.0, 0.0);
    for n in 1..=6 {
        for k in 1..=n {
            let r = fock_vs_hnk(n, k, sampling, &cfg()).map_err(e)?;
            ensure(r.structural_residual <= STRUCTURAL, format!("n={n} k={k}: structural {:e}", r.structural_residual))?;
            ensure(r.sampling_residual <= SAMPLING, format!("n={n} k={k}: sampled {:e}", r.sampling_residual))?;
            s = s.max(r.structural_residual);
            m = m.max(r.sampling_residual);
        }
    }
    Ok(format!("structural {s:e}, sampled {m:e}"))
}

fn projection_formulas() -> Outcome {
    const EXACT: f64 = 1e-12;
    const CONTRACTIVE: f64 = 1e-10;
    const EXPECTATION: f64 = 1e-8;
    let mut ce: f64 = 0.0;
    for n in 1..=5 {
        for k in 1..=n {
            let p = ProjectionSpec::pnk(n, k).map_err(e)?;
            let idem = p.idempotence_residual().map_err(e)?;
            ensure(idem <= EXACT, format!("P_{n}^{k} idempotence {idem:e}"))?;
            let f = check_pnk_formulas(n, k).map_err(e)?;
            ensure(f.max_one_error <= EXACT && f.max_non_one <= EXACT, format!("P_{n}^{k}: {f:?}"))?;
            let c = check_contractive(&p, 200, &cfg()).map_err(e)?;
            ensure(c.max_excess <= CONTRACTIVE, format!("P_{n}^{k} excess {:e}", c.max_excess))?;
            let x = check_conditional_expectation(&p, 50, &cfg()).map_err(e)?;
            let worst = x.residual_outer.max(x.residual_middle);
            ensure(worst <= EXPECTATION, format!("P_{n}^{k} conditional expectation {worst:e}"))?;
            ce = ce.max(worst);
        }
    }
    Ok(format!("n <= 5, conditional expectation residual {ce:e}"))
}

fn coherence() -> Outcome {
    let mut words = 0;
    for n in 2..=5 {
        let r = check_coherence(n, &cfg()).map_err(e)?;
        ensure(r.pass, format!("n={n}: {r:?}"))?;
        words += r.words_checked;
        for i in 1..=n {
            ensure(coherence_identity_holds(n, i), format!("rational identity n={n} i={i}"))?;
            ensure(pn_one_denominator(n, i) == n as u64 * binomial(n - 1, i - 1), "denominator")?;
        }
    }
    let p3 = ProjectionSpec::pn(3).map_err(e)?;
    let s = |v: usize| Subset::new([v]).unwrap();
    let word = family_word(p3.range_basis(), &s(2), 1, &s(3)).map_err(e)?;
    let got = p3.coefficients(&word).map_err(e)?;
    let want = [1.0 / 6.0, 0.0, 0.0];
    ensure(
        got.iter().zip(want).all(|(z, w)| (z - C64::new(w, 0.0)).norm() <= 1e-15),
        format!("worked example gave {got:?}"),
    )?;
    Ok(format!("{words} generator words for n = 2..5, worked example u_1/6"))
}

fn distances() -> Outcome {
    const TOL: f64 = 1e-6;
    let w = WitnessConfig::default();
    for n in 2..=6 {
        let est = estimate_pair(&SpaceKind::Row, &SpaceKind::Column, n, w, &cfg()).map_err(e)?;
        ensure((est.product_lower - n as f64).abs() <= TOL, format!("(R_{n}, C_{n}) product {}", est.product_lower))?;
    }
    let mut checked = 0;
    for n in 2..=8 {
        for m in 0..=3usize.min(n - 1) {
            let est = estimate_pair(&SpaceKind::Column, &SpaceKind::Hnk(m + 1), n, w, &cfg()).map_err(e)?;
            let want = column_vs_hnk_closed_form(n, m).map_err(e)?;
            ensure(
                (est.product_lower - want).abs() <= TOL,
                format!("(C_{n}, H_{n}^{}) product {} vs {want}", m + 1, est.product_lower),
            )?;
            checked += 1;
        }
    }
    for m in 0..=3usize {
        let limit = ((m + 1) as f64).sqrt();
        let mut prev = f64::INFINITY;
        for n in m + 1..=10_000 {
            let v = column_vs_hnk_closed_form(n, m).map_err(e)?;
            ensure(v >= limit - 1e-12, format!("m={m} n={n}: {v} below the limit"))?;
            if m > 0 {
                ensure(v < prev, format!("m={m}: not decreasing at n={n}"))?;
            }
            prev = v;
        }
        ensure(prev - limit <= 1e-3, format!("m={m}: {prev} still far from {limit}"))?;
    }
    Ok(format!("{checked} (C_n, H_n^(m+1)) pairs match; closed form decreases to sqrt(m+1)"))
}

fn divergence() -> Outcome {
    let w = WitnessConfig::default();
    let mut rows = Vec::new();
    for m in 0..=3usize {
        for n in m + 2..=8 {
            let floor = (n as f64 / (m + 1) as f64).sqrt();
            let pairs = [
                (SpaceKind::right_type(m), SpaceKind::left_type(n, m)),
                (SpaceKind::Phi, SpaceKind::Hnk(m + 1)),
            ];
            for (a, b) in pairs {
                let est = estimate_pair(&a, &b, n, w, &cfg()).map_err(e)?;
                ensure(
                    est.product_lower >= floor - 1e-9,
                    format!("({}, {}) bound {} < {floor}", a.label(n), b.label(n), est.product_lower),
                )?;
            }
            rows.push((m, n));
        }
    }
    Ok(format!("{} (m, n) cases reach sqrt(n/(m+1))", rows.len()))
}

fn classifier() -> Outcome {
    let mut r = rng(SEED);
    let mut sets = 0;
    for n in 1..=6 {
        let subsets: Vec<Vec<usize>> = (1u64..1 << n).map(|m| Subset::from_mask(m).elements().to_vec()).collect();
        for ks in &subsets {
            let rep = classify(&family(&build_hnk_intersection(n, ks).map_err(e)?), &cfg()).map_err(e)?;
            ensure(rep.components == *ks, format!("n={n}: {ks:?} -> {:?}", rep.components))?;
            sets += 1;
        }
        for trial in 0..20 {
            let ks = &subsets[random_permutation(&mut r, subsets.len())[0]];
            let space = build_hnk_intersection(n, ks).map_err(e)?;
            let unitaries: Vec<(ComplexMatrix, ComplexMatrix)> = space
                .components()
                .iter()
                .map(|c| (random_unitary(&mut r, c.rows), random_unitary(&mut r, c.cols)))
                .collect();
            let fam = random_permutation(&mut r, n)
                .into_iter()
                .map(|i| {
                    let blocks = space.element(i).iter().zip(&unitaries).map(|(b, (u, v))| &(u * b) * v).collect();
                    TripleElement::new(blocks).unwrap()
                })
                .collect::<Vec<_>>();
            let rep = classify(&fam, &cfg()).map_err(e)?;
            ensure(rep.components == *ks, format!("n={n} trial {trial}: {ks:?} -> {:?}", rep.components))?;
        }
    }
    Ok(format!("{sets} level sets round-trip; 20 conjugated trials per n"))
}

fn dichotomy() -> Outcome {
    let cases = [
        ("column", build_column(4).map_err(e)?, TroKind::Column),
        ("row", build_row(4).map_err(e)?, TroKind::Row),
        ("H_4^2", build_hnk(4, 2).map_err(e)?, TroKind::NotTernaryClosed),
    ];
    for (name, space, want) in cases {
        let got = tro_dichotomy(&family(&space), &cfg()).map_err(e)?;
        ensure(got == want, format!("{name}: {} instead of {}", got.label(), want.label()))?;
    }
    Ok("column -> C, row -> R, H_4^2 -> not_ternary_closed".into())
}

fn support_and_expansion() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut r = rng(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = random_matrix(&mut r, 5, 5);
        let s = support_decomposition(&a, &cfg()).map_err(e)?;
        let pairing = a.inner(&s.v);
        worst = worst.max((pairing.re - s.trace_norm).abs()).max(pairing.im.abs());
        // Faithfulness: a lives on the initial and final spaces of v.
        let left = &(&s.v * &s.v.adjoint()) * &a;
        let right = &a * &(&s.v.adjoint() * &s.v);
        ensure(
            left.approx_eq(&a, TOL) && right.approx_eq(&a, TOL) && s.v.partial_isometry_residual() <= TOL,
            "support isometry does not carry the functional",
        )?;
    }
    ensure(worst <= TOL, format!("pairing off by {worst:e}"))?;
    for f in expansion_fixtures() {
        let got = is_expansion(&f.p, &f.q, &f.l_images, &cfg()).map_err(e)?;
        ensure(got == f.expected, format!("fixture {}: {got}", f.name))?;
    }
    for n in 1..=5 {
        for k in 1..=n {
            let p = ProjectionSpec::pnk(n, k).map_err(e)?;
            let s = support_space(&p, &cfg()).map_err(e)?;
            let support = family(&s.support);
            ensure(
                s.essential && same_span(&support, p.range_basis(), cfg().structural_tol),
                format!("support of P_{n}^{k} is not H_{n}^{k}"),
            )?;
        }
    }
    let proper = &expansion_fixtures()[1];
    let s = support_space(&proper.p, &cfg()).map_err(e)?;
    ensure(
        !s.essential && same_span(&family(&s.support), proper.q.range_basis(), cfg().structural_tol),
        "support of the expansion is not the unexpanded range",
    )?;
    Ok(format!("pairing error {worst:e}; fixtures and supports as expected"))
}

fn full_verify() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_opspace"))
        .args(["verify", "--suite", "all", "--n", "5"])
        .output()
        .map_err(e)?;
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), format!("exit status {:?}", out.status.code()))?;
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:?}"))?;
    Ok(format!("exit 0 in {elapsed:.1?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("orthonormal grid bases", orthonormal_grid),
        ("grid relation exact", grid_relation),
        ("CAR residuals", car),
        ("Fock representation", fock),
        ("projection formulas", projection_formulas),
        ("P^n coherence", coherence),
        ("cb distance closed forms", distances),
        ("divergence lower bounds", divergence),
        ("classifier round trip", classifier),
        ("ternary dichotomy", dichotomy),
        ("support and expansion", support_and_expansion),
        ("full verify run", full_verify),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
