//! Contractive projections onto `H_n^k` and `Phi_n`, the conditional
//! expectation identities, support partial isometries and expansions.
//!
//! A projection is stored in finite-rank form `P x = Σ_l tr(a_l* x) r_l`
//! where `r_l` spans the range and `a_l` are the dual functionals, both as
//! block tuples over the domain shapes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combinat::{binomial, Subset, SubsetIndexer};
use crate::error::{Error, Result};
use crate::matrix::{svd, ComplexMatrix, ToleranceConfig, C64};
use crate::sampling::{random_matrix, rng, Rng};
use crate::span::Span;
use crate::spaces::{build_hnk, build_phi, uij_exact, OperatorBasis};
use crate::triple::{family_word, triple_product, TripleElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectionKind {
    /// `P_n^k` onto `H_n^k`.
    Pnk { n: usize, k: usize },
    /// `P^n` onto `Phi_n`.
    Pn { n: usize },
    Custom(String),
}

#[derive(Debug, Clone)]
pub struct ProjectionSpec {
    kind: ProjectionKind,
    shapes: Vec<(usize, usize)>,
    range: Vec<TripleElement>,
    dual: Vec<TripleElement>,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl ProjectionSpec {
    /// `x -> Σ_l tr(a_l* x) r_l`. Every `r_l` and `a_l` must have the block
    /// shapes `shapes`.
    pub fn from_parts(
        kind: ProjectionKind,
        shapes: Vec<(usize, usize)>,
        range: Vec<TripleElement>,
        dual: Vec<TripleElement>,
    ) -> Result<Self> {
        if range.len() != dual.len() {
            return Err(Error::InvalidArgument(format!(
                "{} range vectors but {} functionals",
                range.len(),
                dual.len()
            )));
        }
        for (l, t) in range.iter().chain(&dual).enumerate() {
            if t.shapes() != shapes {
                return Err(Error::Shape {
                    op: "ProjectionSpec",
                    detail: format!("term {l} has block shapes {:?}, expected {shapes:?}", t.shapes()),
                });
            }
        }
        Ok(Self {
            kind,
            shapes,
            range,
            dual,
        })
    }

    /// Factors a dense superoperator acting on [`TripleElement::flatten`]
    /// vectors; singular values at or below `structural_tol * σ_max` are
    /// dropped.
    pub fn from_superoperator(
        label: impl Into<String>,
        shapes: Vec<(usize, usize)>,
        s: &ComplexMatrix,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let d: usize = shapes.iter().map(|(r, c)| r * c).sum();
        if s.shape() != (d, d) {
            return Err(Error::Shape {
                op: "from_superoperator",
                detail: format!("{}x{} superoperator on {d} coordinates", s.rows(), s.cols()),
            });
        }
        let f = svd(s)?;
        let r = f.rank(cfg.structural_tol);
        let mut range = Vec::with_capacity(r);
        let mut dual = Vec::with_capacity(r);
        for l in 0..r {
            let u: Vec<C64> = (0..d).map(|i| f.u[(i, l)]).collect();
            let v: Vec<C64> = (0..d).map(|i| f.v[(i, l)] * f.singular_values[l]).collect();
            range.push(TripleElement::unflatten(&shapes, &u)?);
            dual.push(TripleElement::unflatten(&shapes, &v)?);
        }
        Self::from_parts(ProjectionKind::Custom(label.into()), shapes, range, dual)
    }

    /// Identity on the span of `basis` (orthonormal).
    pub fn orthogonal_onto(label: impl Into<String>, basis: &OperatorBasis) -> Result<Self> {
        let elems: Vec<TripleElement> = (0..basis.dim()).map(|i| TripleElement::basis_element(basis, i)).collect();
        let shapes = elems[0].shapes();
        Self::from_parts(ProjectionKind::Custom(label.into()), shapes, elems.clone(), elems)
    }

    /// `P_n^k x = (1 / C(n-1, k-1)) Σ_i tr(x b_i*) b_i` on `T(H_n^k)`.
    pub fn pnk(n: usize, k: usize) -> Result<Self> {
        let h = build_hnk(n, k)?;
        let c = binomial(n - 1, k - 1) as f64;
        let range: Vec<TripleElement> = (0..n).map(|i| TripleElement::basis_element(&h, i)).collect();
        let dual = range.iter().map(|b| b.scale_real(1.0 / c)).collect();
        let shapes = range[0].shapes();
        Self::from_parts(ProjectionKind::Pnk { n, k }, shapes, range, dual)
    }

    /// `P^n x = (1/n) Σ_i (P_n^i(x_i), ..., P_n^i(x_i))` on `T(Phi_n)`.
    pub fn pn(n: usize) -> Result<Self> {
        let phi = build_phi(n)?;
        let range: Vec<TripleElement> = (0..n).map(|l| TripleElement::basis_element(&phi, l)).collect();
        let dual = range
            .iter()
            .map(|u| {
                let blocks = u
                    .blocks()
                    .iter()
                    .enumerate()
                    .map(|(i, b)| b.scale_real(1.0 / (n as f64 * binomial(n - 1, i) as f64)))
                    .collect();
                TripleElement::new(blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        let shapes = range[0].shapes();
        Self::from_parts(ProjectionKind::Pn { n }, shapes, range, dual)
    }

    pub fn kind(&self) -> &ProjectionKind {
        &self.kind
    }

    pub fn shapes(&self) -> &[(usize, usize)] {
        &self.shapes
    }

    pub fn range_basis(&self) -> &[TripleElement] {
        &self.range
    }

    pub fn dual_basis(&self) -> &[TripleElement] {
        &self.dual
    }

    pub fn rank(&self) -> usize {
        self.range.len()
    }

    fn check_shape(&self, x: &TripleElement) -> Result<()> {
        if x.shapes() != self.shapes {
            return Err(Error::Shape {
                op: "projection",
                detail: format!("input block shapes {:?}, expected {:?}", x.shapes(), self.shapes),
            });
        }
        Ok(())
    }

    /// `tr(a_l* x)` for every `l`.
    pub fn coefficients(&self, x: &TripleElement) -> Result<Vec<C64>> {
        self.check_shape(x)?;
        Ok(self.dual.iter().map(|a| a.inner(x)).collect())
    }

    pub fn apply(&self, x: &TripleElement) -> Result<TripleElement> {
        let coeffs = self.coefficients(x)?;
        let mut out = self.range[0].zeros_like();
        for (c, r) in coeffs.iter().zip(&self.range) {
            if *c != zero() {
                out = out.try_add(&r.scale(*c))?;
            }
        }
        Ok(out)
    }

    /// `P^†`, the adjoint for the trace pairing.
    pub fn adjoint(&self) -> Self {
        Self {
            kind: ProjectionKind::Custom("adjoint".into()),
            shapes: self.shapes.clone(),
            range: self.dual.clone(),
            dual: self.range.clone(),
        }
    }

    /// Dense matrix of `P` acting on flattened coordinates.
    pub fn superoperator(&self) -> ComplexMatrix {
        let d: usize = self.shapes.iter().map(|(r, c)| r * c).sum();
        let mut s = ComplexMatrix::zeros(d, d);
        for (r, a) in self.range.iter().zip(&self.dual) {
            let (r, a) = (r.flatten(), a.flatten());
            for (i, ri) in r.iter().enumerate() {
                if *ri == zero() {
                    continue;
                }
                for (j, aj) in a.iter().enumerate() {
                    s[(i, j)] += ri * aj.conj();
                }
            }
        }
        s
    }

    /// `max_l ‖P r_l - r_l‖_F`: zero iff `P` is idempotent.
    pub fn idempotence_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for r in &self.range {
            worst = worst.max(self.apply(r)?.try_sub(r)?.frobenius_norm());
        }
        Ok(worst)
    }

    pub fn random_input(&self, rng: &mut Rng) -> TripleElement {
        TripleElement::new(self.shapes.iter().map(|&(r, c)| random_matrix(rng, r, c)).collect())
            .expect("nonempty shapes")
    }
}

/// Applies `P_n^k` to a single matrix of shape `C(n, n-k) x C(n, k-1)`.
pub fn pnk_apply(n: usize, k: usize, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let out = ProjectionSpec::pnk(n, k)?.apply(&x.clone().into())?;
    Ok(out.into_blocks().remove(0))
}

/// Applies `P^n` to a tuple of blocks `x_i ∈ T(H_n^i)`.
pub fn pn_apply(n: usize, x: &TripleElement) -> Result<TripleElement> {
    ProjectionSpec::pn(n)?.apply(x)
}

/// The exact value `n C(n-1, i-1)` with `P^n(one) = u_k / (n C(n-1, i-1))`
/// for a one `(uu*)_I u_k (u*u)_J` with `|I| = i - 1`.
pub fn pn_one_denominator(n: usize, i: usize) -> u64 {
    n as u64 * binomial(n - 1, i - 1)
}

/// `1/(n+1) (1/C(n,i) + 1/C(n,i-1)) = 1/(n C(n-1,i-1))`, checked by integer
/// cross-multiplication.
pub fn coherence_identity_holds(n: usize, i: usize) -> bool {
    let (a, b) = (binomial(n, i) as u128, binomial(n, i - 1) as u128);
    let lhs = pn_one_denominator(n, i) as u128 * (a + b);
    let rhs = (n as u128 + 1) * a * b;
    lhs == rhs
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub n: usize,
    pub words_checked: usize,
    pub ones: usize,
    /// `max |coefficient of P^n(w) - coefficient of P^{n+1}(w)|` over words
    /// `w` and basis directions, the extra direction `u_{n+1}` compared with 0.
    pub max_residual: f64,
    /// Every one had coefficient exactly `1 / (n C(n-1, i-1))` (within
    /// `structural_tol`) and the rational identity held for each `i`.
    pub coefficients_exact: bool,
    pub pass: bool,
}

fn subsets_of(pool: &[usize]) -> impl Iterator<Item = Subset> + '_ {
    (0u64..1 << pool.len()).map(move |mask| {
        Subset::new(
            pool.iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, v)| *v),
        )
        .expect("distinct elements")
    })
}

/// Checks `P^{n+1}|T(Phi_n) = P^n` on the words `(uu*)_A u_k (u*u)_B`,
/// `A, B ⊆ {1..n} - {k}`, which span `T(Phi_n)`. Each word is evaluated
/// both in `Phi_n` and, with the first `n` generators, in `Phi_{n+1}`.
pub fn check_coherence(n: usize, cfg: &ToleranceConfig) -> Result<CoherenceReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("coherence needs n >= 2, got {n}")));
    }
    let small = ProjectionSpec::pn(n)?;
    let large = ProjectionSpec::pn(n + 1)?;
    let u_small = small.range_basis().to_vec();
    let u_large = large.range_basis().to_vec();
    let mut words = 0;
    let mut ones = 0;
    let mut worst: f64 = 0.0;
    let mut exact = (1..=n).all(|i| coherence_identity_holds(n, i));
    for k in 1..=n {
        let pool: Vec<usize> = (1..=n).filter(|&j| j != k).collect();
        for a in subsets_of(&pool) {
            for b in subsets_of(&pool) {
                let cs = small.coefficients(&family_word(&u_small, &a, k, &b)?)?;
                let cl = large.coefficients(&family_word(&u_large, &a, k, &b)?)?;
                for (l, c) in cl.iter().enumerate() {
                    let s = cs.get(l).copied().unwrap_or_else(zero);
                    worst = worst.max((s - c).norm());
                }
                words += 1;
                if a.is_disjoint(&b) && a.len() + b.len() + 1 == n {
                    ones += 1;
                    let expect = 1.0 / pn_one_denominator(n, a.len() + 1) as f64;
                    let got = cs[k - 1];
                    let others = cs.iter().enumerate().filter(|(l, _)| *l != k - 1).any(|(_, z)| z.norm() > cfg.structural_tol);
                    if (got - C64::new(expect, 0.0)).norm() > cfg.structural_tol || others {
                        exact = false;
                    }
                }
            }
        }
    }
    Ok(CoherenceReport {
        n,
        words_checked: words,
        ones,
        max_residual: worst,
        coefficients_exact: exact,
        pass: exact && worst <= cfg.structural_tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalExpectationReport {
    pub samples: usize,
    /// `max ‖P{Px,Py,Pz} - P{Px,Py,z}‖_F`.
    pub residual_outer: f64,
    /// `max ‖P{Px,Py,Pz} - P{Px,y,Pz}‖_F`.
    pub residual_middle: f64,
    pub pass: bool,
}

fn unit_sample(p: &ProjectionSpec, r: &mut Rng) -> TripleElement {
    let x = p.random_input(r);
    let n = x.frobenius_norm();
    x.scale_real(1.0 / n)
}

/// Tests the conditional expectation identities on `samples` random triples
/// `x, y, z` of unit Frobenius norm.
pub fn check_conditional_expectation(
    p: &ProjectionSpec,
    samples: usize,
    cfg: &ToleranceConfig,
) -> Result<ConditionalExpectationReport> {
    const TOL: f64 = 1e-8;
    let mut r = rng(cfg.seed);
    let (mut outer, mut middle): (f64, f64) = (0.0, 0.0);
    for _ in 0..samples {
        let (x, y, z) = (unit_sample(p, &mut r), unit_sample(p, &mut r), unit_sample(p, &mut r));
        let (px, py, pz) = (p.apply(&x)?, p.apply(&y)?, p.apply(&z)?);
        let all = p.apply(&triple_product(&px, &py, &pz)?)?;
        let o = p.apply(&triple_product(&px, &py, &z)?)?;
        let m = p.apply(&triple_product(&px, &y, &pz)?)?;
        outer = outer.max(all.try_sub(&o)?.frobenius_norm());
        middle = middle.max(all.try_sub(&m)?.frobenius_norm());
    }
    Ok(ConditionalExpectationReport {
        samples,
        residual_outer: outer,
        residual_middle: middle,
        pass: outer <= TOL && middle <= TOL,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractivityReport {
    pub samples: usize,
    /// `max (‖Px‖ - ‖x‖)` in operator norm.
    pub max_excess: f64,
    pub pass: bool,
}

pub fn check_contractive(p: &ProjectionSpec, samples: usize, cfg: &ToleranceConfig) -> Result<ContractivityReport> {
    let mut r = rng(cfg.seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x = p.random_input(&mut r);
        worst = worst.max(p.apply(&x)?.operator_norm(cfg)? - x.operator_norm(cfg)?);
    }
    Ok(ContractivityReport {
        samples,
        max_excess: worst,
        pass: worst <= 1e-10,
    })
}

/// Polar data of `a` for the functional `x -> tr(a* x)`.
#[derive(Debug, Clone)]
pub struct SupportIsometry {
    pub v: ComplexMatrix,
    pub rank: usize,
    /// `Σ σ_i`, the norm of the functional.
    pub trace_norm: f64,
    /// Some singular value lies within a factor `1e3` above the cutoff.
    pub near_degenerate: bool,
}

/// `v = U_r V_r*` from the reduced SVD of `a`, with `r` the numerical rank
/// at `structural_tol`.
pub fn support_decomposition(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SupportIsometry> {
    let f = svd(a)?;
    let r = f.rank(cfg.structural_tol);
    if r == 0 {
        return Err(Error::InvalidArgument("support of the zero functional".into()));
    }
    let smax = f.singular_values[0];
    let near_degenerate = f
        .singular_values
        .iter()
        .any(|&s| s > cfg.structural_tol * smax && s <= 1e3 * cfg.structural_tol * smax);
    let v = ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        (0..r).map(|l| f.u[(i, l)] * f.v[(j, l)].conj()).sum()
    });
    Ok(SupportIsometry {
        v,
        rank: r,
        trace_norm: f.singular_values.iter().sum(),
        near_degenerate,
    })
}

pub fn support_partial_isometry(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    Ok(support_decomposition(a, cfg)?.v)
}

/// Support of a block-diagonal functional: the blocks share the cutoff
/// relative to the largest singular value overall.
pub fn support_of_tuple(a: &TripleElement, cfg: &ToleranceConfig) -> Result<TripleElement> {
    let fs = a.blocks().iter().map(svd).collect::<Result<Vec<_>>>()?;
    let smax = fs
        .iter()
        .flat_map(|f| f.singular_values.first().copied())
        .fold(0.0, f64::max);
    if smax == 0.0 {
        return Err(Error::InvalidArgument("support of the zero functional".into()));
    }
    let blocks = a
        .blocks()
        .iter()
        .zip(&fs)
        .map(|(b, f)| {
            let r = f
                .singular_values
                .iter()
                .take_while(|&&s| s > cfg.structural_tol * smax)
                .count();
            ComplexMatrix::from_fn(b.rows(), b.cols(), |i, j| {
                (0..r).map(|l| f.u[(i, l)] * f.v[(j, l)].conj()).sum()
            })
        })
        .collect();
    TripleElement::new(blocks)
}

#[derive(Debug, Clone)]
pub struct SupportReport {
    /// Support partial isometries of the dual functionals.
    pub support: OperatorBasis,
    pub support_rank: usize,
    /// The support space equals the range of `P`.
    pub essential: bool,
}

fn span_of(elems: &[TripleElement], tol: f64) -> Span {
    let flat: Vec<Vec<C64>> = elems.iter().map(TripleElement::flatten).collect();
    Span::new(flat.iter().map(Vec::as_slice), tol)
}

/// Whether two families of block tuples span the same subspace.
pub fn same_span(a: &[TripleElement], b: &[TripleElement], tol: f64) -> bool {
    span_of(a, tol).same_as(&span_of(b, tol), 1e3 * tol)
}

/// Span of the support partial isometries of the functionals dual to the
/// range basis (together with a few seeded random combinations of them).
pub fn support_space(p: &ProjectionSpec, cfg: &ToleranceConfig) -> Result<SupportReport> {
    const COMBINATIONS: usize = 3;
    let dual = p.dual_basis();
    if dual.is_empty() {
        return Err(Error::Degenerate("projection has rank zero".into()));
    }
    if span_of(dual, cfg.structural_tol).rank() < dual.len() {
        return Err(Error::Degenerate("dual functionals are linearly dependent".into()));
    }
    let mut supports = dual
        .iter()
        .map(|a| support_of_tuple(a, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut r = rng(cfg.seed);
    for _ in 0..COMBINATIONS {
        let mut acc = dual[0].zeros_like();
        for a in dual {
            acc = acc.try_add(&a.scale(crate::sampling::complex_gaussian(&mut r)))?;
        }
        supports.push(support_of_tuple(&acc, cfg)?);
    }
    let support_span = span_of(&supports, cfg.structural_tol);
    let range_span = span_of(p.range_basis(), cfg.structural_tol);
    let essential = support_span.same_as(&range_span, 1e3 * cfg.structural_tol);
    supports.truncate(dual.len());
    Ok(SupportReport {
        support: OperatorBasis::new("support", supports.into_iter().map(TripleElement::into_blocks).collect())?,
        support_rank: support_span.rank(),
        essential,
    })
}

fn is_triple_orthogonal(a: &TripleElement, b: &TripleElement, tol: f64) -> Result<bool> {
    Ok(a.adjoint().try_mul(b)?.max_abs() <= tol && a.try_mul(&b.adjoint())?.max_abs() <= tol)
}

/// Whether `P = Q + LQ` with `L(H) ⊥ H` (triple orthogonality) and
/// `Q(L(H)) = 0`, where `H = range(Q)` and `L` is given by its images
/// `l_images[j] = L(r_j)` of the range basis `r_j` of `Q`.
pub fn is_expansion(
    p: &ProjectionSpec,
    q: &ProjectionSpec,
    l_images: &[TripleElement],
    cfg: &ToleranceConfig,
) -> Result<bool> {
    let tol = cfg.structural_tol;
    for (name, x) in [("P", p), ("Q", q)] {
        let res = x.idempotence_residual()?;
        if res > tol {
            return Err(Error::Precondition(format!("{name} is not idempotent (residual {res:e})")));
        }
    }
    if p.shapes() != q.shapes() {
        return Err(Error::Shape {
            op: "is_expansion",
            detail: format!("P acts on {:?}, Q on {:?}", p.shapes(), q.shapes()),
        });
    }
    if l_images.len() != q.rank() {
        return Err(Error::InvalidArgument(format!(
            "{} images for a range of dimension {}",
            l_images.len(),
            q.rank()
        )));
    }
    let h = q.range_basis();
    // L(Q x) = Σ_j tr(a_j* x) L(r_j).
    let lq = |x: &TripleElement| -> Result<TripleElement> {
        let mut acc = h[0].zeros_like();
        for (c, img) in q.coefficients(x)?.iter().zip(l_images) {
            acc = acc.try_add(&img.scale(*c))?;
        }
        Ok(acc)
    };

    // P = Q + LQ, tested on the coordinate basis of the domain.
    let d: usize = p.shapes().iter().map(|(r, c)| r * c).sum();
    for idx in 0..d {
        let mut e = alloc::vec![zero(); d];
        e[idx] = C64::new(1.0, 0.0);
        let x = TripleElement::unflatten(p.shapes(), &e)?;
        let expect = q.apply(&x)?.try_add(&lq(&x)?)?;
        if p.apply(&x)?.try_sub(&expect)?.max_abs() > tol {
            return Ok(false);
        }
    }
    for img in l_images {
        if q.apply(img)?.max_abs() > tol {
            return Ok(false);
        }
        for hh in h {
            if !is_triple_orthogonal(hh, img, tol)? {
                return Ok(false);
            }
        }
    }
    let shifted: Vec<TripleElement> = h
        .iter()
        .zip(l_images)
        .map(|(a, b)| a.try_add(b))
        .collect::<Result<_>>()?;
    Ok(span_of(&shifted, tol).same_as(&span_of(p.range_basis(), tol), 1e3 * tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PnkFormulaReport {
    pub n: usize,
    pub k: usize,
    pub ones_checked: usize,
    /// `max |P(one) - b_i / C(n-1, k-1)|` (entrywise).
    pub max_one_error: f64,
    pub non_ones_checked: usize,
    /// Largest entry of `P(u_IJ)` over overlapping `I, J`.
    pub max_non_one: f64,
}

/// Checks `P_n^k` on every `u_IJ`: a one with `I ∪ {i} ∪ J = [n]` maps to
/// `b_i / C(n-1, k-1)`, every other `u_IJ` maps to zero.
pub fn check_pnk_formulas(n: usize, k: usize) -> Result<PnkFormulaReport> {
    let p = ProjectionSpec::pnk(n, k)?;
    let generators = p.range_basis().to_vec();
    let denom = binomial(n - 1, k - 1) as f64;
    let mut report = PnkFormulaReport {
        n,
        k,
        ones_checked: 0,
        max_one_error: 0.0,
        non_ones_checked: 0,
        max_non_one: 0.0,
    };
    for left in SubsetIndexer::new(n, k - 1)?.iter() {
        for right in SubsetIndexer::new(n, n - k)?.iter() {
            let u: TripleElement = uij_exact(n, k, &left, &right)?.to_complex().into();
            let out = p.apply(&u)?;
            if left.is_disjoint(&right) {
                let i = left.union(&right).complement(n).iter().next().expect("one missing index");
                let want = generators[i - 1].scale_real(1.0 / denom);
                report.max_one_error = report.max_one_error.max(out.try_sub(&want)?.max_abs());
                report.ones_checked += 1;
            } else {
                report.max_non_one = report.max_non_one.max(out.max_abs());
                report.non_ones_checked += 1;
            }
        }
    }
    Ok(report)
}

/// An expansion test case on `M_4`: `Q` is the orthogonal projection onto
/// `span{e11, e21}`, `P = Q + LQ` for the given images of `L`.
#[derive(Debug, Clone)]
pub struct ExpansionFixture {
    pub name: &'static str,
    pub p: ProjectionSpec,
    pub q: ProjectionSpec,
    pub l_images: Vec<TripleElement>,
    pub expected: bool,
}

fn m4(i: usize, j: usize) -> TripleElement {
    ComplexMatrix::unit(4, 4, i - 1, j - 1).into()
}

fn column_pair_projection() -> ProjectionSpec {
    let h = alloc::vec![m4(1, 1), m4(2, 1)];
    ProjectionSpec::from_parts(ProjectionKind::Custom("Q".into()), alloc::vec![(4, 4)], h.clone(), h)
        .expect("fixed shapes")
}

fn expanded(q: &ProjectionSpec, images: &[TripleElement]) -> ProjectionSpec {
    let range = q.range_basis().iter().zip(images).map(|(h, l)| h + l).collect();
    ProjectionSpec::from_parts(
        ProjectionKind::Custom("Q + LQ".into()),
        q.shapes().to_vec(),
        range,
        q.dual_basis().to_vec(),
    )
    .expect("fixed shapes")
}

/// Three fixtures: the trivial expansion (`L = 0`), a proper expansion with
/// `L(e_j1) = e_{j+2,3}`, and a non-expansion whose shadow `e_j3` is not
/// orthogonal to the range.
pub fn expansion_fixtures() -> Vec<ExpansionFixture> {
    let q = column_pair_projection();
    let zero_l = alloc::vec![q.range_basis()[0].zeros_like(); 2];
    let good = alloc::vec![m4(3, 3), m4(4, 3)];
    let bad = alloc::vec![m4(1, 3), m4(2, 3)];
    alloc::vec![
        ExpansionFixture { name: "trivial", p: q.clone(), q: q.clone(), l_images: zero_l, expected: true },
        ExpansionFixture { name: "orthogonal shadow", p: expanded(&q, &good), q: q.clone(), l_images: good, expected: true },
        ExpansionFixture { name: "overlapping shadow", p: expanded(&q, &bad), q, l_images: bad, expected: false },
    ]
}

/// An idempotent onto `span{e11}` in `M_2` with functional `diag(1, 2)`:
/// not contractive, so the conditional expectation identities fail.
pub fn oblique_idempotent() -> ProjectionSpec {
    let b: TripleElement = ComplexMatrix::unit(2, 2, 0, 0).into();
    let a: TripleElement = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).into();
    ProjectionSpec::from_parts(ProjectionKind::Custom("oblique".into()), alloc::vec![(2, 2)], alloc::vec![b], alloc::vec![a])
        .expect("fixed shapes")
}
