//! The `verify` suites. Each returns a [`SuiteReport`]; a check that fails
//! is recorded, not raised, so one run reports every residual.

use opspace_core::classify::{classify, tro_dichotomy, TroKind};
use opspace_core::combinat::Subset;
use opspace_core::fock::{car_check, fock_vs_hnk, FockSampling, MAX_FOCK_N};
use opspace_core::matrix::{ComplexMatrix, ToleranceConfig};
use opspace_core::norms::MAX_LEVEL_N;
use opspace_core::projections::{
    check_coherence, check_conditional_expectation, check_contractive, check_pnk_formulas,
    expansion_fixtures, is_expansion, oblique_idempotent, same_span, support_space, ProjectionSpec,
};
use opspace_core::sampling::{random_permutation, random_unitary, random_vector, rng};
use opspace_core::spaces::{
    build_column, build_hnk, build_hnk_intersection, build_phi, build_row, check_grid_relation,
    gram_sum_defect, ones_decomposition_defect, OperatorBasis,
};
use opspace_core::triple::{family_word, TripleElement};
use opspace_core::{Error, C64};

use crate::error::{CliError, Result};
use crate::report::{Check, SuiteReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Car,
    Fock,
    Projection,
    Grid,
    Classify,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Car, Suite::Fock, Suite::Projection, Suite::Grid, Suite::Classify],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Car => "car",
            Suite::Fock => "fock",
            Suite::Projection => "projection",
            Suite::Grid => "grid",
            Suite::Classify => "classify",
            Suite::All => "all",
        }
    }

    /// Largest supported `n`. Coherence needs `Phi_{n+1}` and the classifier
    /// round trip enumerates every subset of levels.
    pub fn max_n(self) -> usize {
        match self {
            Suite::Car => MAX_FOCK_N,
            Suite::Fock | Suite::Grid => MAX_LEVEL_N,
            Suite::Projection | Suite::Classify | Suite::All => 6,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub n: usize,
    /// Restricts the per-level suites to one `k`.
    pub k: Option<usize>,
    pub samples: usize,
    pub fock_levels: usize,
}

impl VerifyOptions {
    fn levels(&self) -> Vec<usize> {
        match self.k {
            Some(k) => vec![k],
            None => (1..=self.n).collect(),
        }
    }
}

const PROJECTION_EXACT_TOL: f64 = 1e-12;
const CONTRACTIVE_TOL: f64 = 1e-10;
const EXPECTATION_TOL: f64 = 1e-8;
const ORTHONORMAL_TOL: f64 = 1e-8;
const CAR_TOL: f64 = 1e-12;
const HILBERTIAN_TOL: f64 = 1e-8;
const FOCK_SAMPLING_TOL: f64 = 1e-7;
const CLASSIFY_TRIALS: usize = 20;

pub fn validate(suite: Suite, opts: &VerifyOptions) -> Result<()> {
    for s in suite.expand() {
        let cap = s.max_n();
        if opts.n == 0 || opts.n > cap {
            return Err(CliError::Usage(format!("suite {} needs 1 <= n <= {cap}, got {}", s.name(), opts.n)));
        }
    }
    if let Some(k) = opts.k {
        if k == 0 || k > opts.n {
            return Err(CliError::Usage(format!("--k {k} outside 1..={}", opts.n)));
        }
    }
    if opts.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    Ok(())
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions, cfg: &ToleranceConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Car => car(opts, cfg),
        Suite::Fock => fock(opts, cfg),
        Suite::Projection => projection(opts, cfg),
        Suite::Grid => grid(opts, cfg),
        Suite::Classify => classify_suite(opts, cfg),
        Suite::All => Err(CliError::Usage("expand `all` before running".into())),
    }
}

fn car(opts: &VerifyOptions, cfg: &ToleranceConfig) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("car");
    let r = car_check(opts.n, cfg)?;
    out.push(
        Check::residual(format!("anticommutators n={}", opts.n), r.max_residual, CAR_TOL)
            .with_detail(format!("{} ordered pairs", r.pairs_checked)),
    );
    if let Some(h) = r.hilbertian_residual {
        out.push(Check::residual(format!("hilbertian n={}", opts.n), h, HILBERTIAN_TOL));
    }
    Ok(out)
}

fn fock(opts: &VerifyOptions, cfg: &ToleranceConfig) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("fock");
    let n = opts.n;
    let sampling = FockSampling {
        samples: opts.samples,
        max_level: opts.fock_levels,
    };
    for k in opts.levels() {
        match fock_vs_hnk(n, k, sampling, cfg) {
            Ok(r) => {
                out.push(Check::residual(
                    format!("intertwiner H_{n}^{k}"),
                    r.structural_residual,
                    cfg.structural_tol,
                ));
                out.push(
                    Check::residual(format!("sampled norms H_{n}^{k}"), r.sampling_residual, FOCK_SAMPLING_TOL)
                        .with_detail(format!("{} samples, levels 1..={}", r.samples, r.max_level)),
                );
            }
            Err(e @ Error::CheckFailed(_)) => {
                out.push(Check::flag(format!("intertwiner H_{n}^{k}"), false, e.to_string()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn projection_checks(out: &mut SuiteReport, label: &str, p: &ProjectionSpec, opts: &VerifyOptions, cfg: &ToleranceConfig) -> Result<()> {
    out.push(Check::residual(format!("{label} idempotent"), p.idempotence_residual()?, PROJECTION_EXACT_TOL));
    let c = check_contractive(p, 4 * opts.samples, cfg)?;
    out.push(
        Check::residual(format!("{label} contractive"), c.max_excess.max(0.0), CONTRACTIVE_TOL)
            .with_detail(format!("{} samples", c.samples)),
    );
    let e = check_conditional_expectation(p, opts.samples, cfg)?;
    out.push(Check::residual(
        format!("{label} conditional expectation"),
        e.residual_outer.max(e.residual_middle),
        EXPECTATION_TOL,
    ));
    let s = support_space(p, cfg)?;
    out.push(Check::flag(
        format!("{label} essential"),
        s.essential,
        format!("support rank {}, range rank {}", s.support_rank, p.rank()),
    ));
    Ok(())
}

fn projection(opts: &VerifyOptions, cfg: &ToleranceConfig) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("projection");
    let n = opts.n;
    for k in opts.levels() {
        let label = format!("P_{n}^{k}");
        let f = check_pnk_formulas(n, k)?;
        out.push(
            Check::residual(format!("{label} on ones"), f.max_one_error, PROJECTION_EXACT_TOL)
                .with_detail(format!("{} ones", f.ones_checked)),
        );
        out.push(
            Check::residual(format!("{label} kills non-ones"), f.max_non_one, PROJECTION_EXACT_TOL)
                .with_detail(format!("{} overlapping index pairs", f.non_ones_checked)),
        );
        projection_checks(&mut out, &label, &ProjectionSpec::pnk(n, k)?, opts, cfg)?;
    }

    let pn = ProjectionSpec::pn(n)?;
    projection_checks(&mut out, &format!("P^{n}"), &pn, opts, cfg)?;
    if n >= 2 {
        let c = check_coherence(n, cfg)?;
        out.push(
            Check::residual(format!("P^{} restricts to P^{n}", n + 1), c.max_residual, cfg.structural_tol)
                .with_detail(format!("{} words, {} ones", c.words_checked, c.ones)),
        );
        out.push(Check::flag(
            format!("P^{n} coefficients on ones"),
            c.coefficients_exact,
            "1/(n C(n-1,i-1)) for a one with i-1 left factors",
        ));
    }

    // P^3((uu*)_{2} u_1 (u*u)_{3}) = u_1 / 6.
    let p3 = ProjectionSpec::pn(3)?;
    let word = family_word(p3.range_basis(), &Subset::new([2])?, 1, &Subset::new([3])?)?;
    let coeffs = p3.coefficients(&word)?;
    let want = [1.0 / 6.0, 0.0, 0.0];
    let err = coeffs
        .iter()
        .zip(want)
        .map(|(z, w)| (z - C64::new(w, 0.0)).norm())
        .fold(0.0, f64::max);
    out.push(Check::residual("P^3 worked example", err, PROJECTION_EXACT_TOL));

    for f in expansion_fixtures() {
        let got = is_expansion(&f.p, &f.q, &f.l_images, cfg)?;
        out.push(Check::flag(
            format!("expansion fixture: {}", f.name),
            got == f.expected,
            format!("is_expansion = {got}, expected {}", f.expected),
        ));
    }
    let proper = &expansion_fixtures()[1];
    let s = support_space(&proper.p, cfg)?;
    let support: Vec<TripleElement> = (0..s.support.dim())
        .map(|i| TripleElement::basis_element(&s.support, i))
        .collect();
    let recovers = !s.essential && same_span(&support, proper.q.range_basis(), cfg.structural_tol);
    out.push(Check::flag(
        "support of expansion is the unexpanded range",
        recovers,
        format!("essential = {}", s.essential),
    ));

    let oblique = check_conditional_expectation(&oblique_idempotent(), opts.samples, cfg)?;
    let worst = oblique.residual_outer.max(oblique.residual_middle);
    out.push(Check::flag(
        "non-contractive idempotent is rejected",
        worst > 1e-3,
        format!("residual {worst:e}"),
    ));
    Ok(out)
}

fn grid(opts: &VerifyOptions, cfg: &ToleranceConfig) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("grid");
    let n = opts.n;
    let mut r = rng(cfg.seed);
    let mut orthonormal = |out: &mut SuiteReport, space: &OperatorBasis| -> Result<()> {
        let mut worst: f64 = 0.0;
        for _ in 0..opts.samples {
            let c = random_vector(&mut r, n);
            let euclid = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max((space.norm_of(&c, cfg)? - euclid).abs());
        }
        out.push(
            Check::residual(format!("{} orthonormal", space.name()), worst, ORTHONORMAL_TOL)
                .with_detail(format!("{} samples", opts.samples)),
        );
        Ok(())
    };
    for k in opts.levels() {
        let g = check_grid_relation(n, k)?;
        out.push(Check::flag(
            format!("grid relation H_{n}^{k}"),
            g.violations == 0,
            format!("{} violations in {} triples", g.violations, g.triples_checked),
        ));
        let gram = gram_sum_defect(n, k)?;
        out.push(Check::flag(format!("gram sums H_{n}^{k}"), gram == 0, format!("defect {gram}")));
        let ones = ones_decomposition_defect(n, k)?;
        out.push(Check::flag(format!("sum of ones H_{n}^{k}"), ones == 0, format!("defect {ones}")));
        orthonormal(&mut out, &build_hnk(n, k)?)?;
    }
    orthonormal(&mut out, &build_phi(n)?)?;
    Ok(out)
}

fn family(space: &OperatorBasis) -> Vec<TripleElement> {
    (0..space.dim()).map(|i| TripleElement::basis_element(space, i)).collect()
}

fn classify_suite(opts: &VerifyOptions, cfg: &ToleranceConfig) -> Result<SuiteReport> {
    let mut out = SuiteReport::new("classify");
    let n = opts.n;
    let mut mismatches = Vec::new();
    let subsets: Vec<Vec<usize>> = (1u64..1 << n).map(|m| Subset::from_mask(m).elements().to_vec()).collect();
    for ks in &subsets {
        let got = classify(&family(&build_hnk_intersection(n, ks)?), cfg);
        match got {
            Ok(r) if r.components == *ks => {}
            Ok(r) => mismatches.push(format!("{ks:?} -> {:?}", r.components)),
            Err(e) => mismatches.push(format!("{ks:?}: {e}")),
        }
    }
    out.push(Check::flag(
        format!("round trip n={n}"),
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{} level sets", subsets.len())
        } else {
            mismatches.join("; ")
        },
    ));

    let mut r = rng(cfg.seed);
    let mut failures = Vec::new();
    for trial in 0..CLASSIFY_TRIALS {
        let ks = &subsets[random_permutation(&mut r, subsets.len())[0]];
        let space = build_hnk_intersection(n, ks)?;
        let unitaries: Vec<(ComplexMatrix, ComplexMatrix)> = space
            .components()
            .iter()
            .map(|c| (random_unitary(&mut r, c.rows), random_unitary(&mut r, c.cols)))
            .collect();
        let fam = random_permutation(&mut r, n)
            .into_iter()
            .map(|i| {
                let blocks = space
                    .element(i)
                    .iter()
                    .zip(&unitaries)
                    .map(|(b, (u, v))| &(u * b) * v)
                    .collect();
                TripleElement::new(blocks)
            })
            .collect::<opspace_core::Result<Vec<_>>>()?;
        match classify(&fam, cfg) {
            Ok(rep) if rep.components == *ks => {}
            Ok(rep) => failures.push(format!("trial {trial}: {ks:?} -> {:?}", rep.components)),
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    out.push(Check::flag(
        "labeling and conjugation invariance",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{CLASSIFY_TRIALS} trials")
        } else {
            failures.join("; ")
        },
    ));

    // A single element counts as a column, so the row case needs n >= 2.
    let t = n.max(2);
    let cases = [
        ("column", build_column(t)?, TroKind::Column),
        ("row", build_row(t)?, TroKind::Row),
        ("H_4^2", build_hnk(4, 2)?, TroKind::NotTernaryClosed),
    ];
    for (name, space, want) in cases {
        let got = tro_dichotomy(&family(&space), cfg)?;
        out.push(Check::flag(
            format!("ternary dichotomy {name}"),
            got == want,
            format!("{} (expected {})", got.label(), want.label()),
        ));
    }
    Ok(out)
}
