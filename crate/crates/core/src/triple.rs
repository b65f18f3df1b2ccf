//! JC*-triple calculus on concrete operators: the triple product, Peirce
//! projections of a partial isometry, and the order and orthogonality
//! relations between partial isometries.

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::combinat::Subset;
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, ComplexMatrix, ToleranceConfig, C64};
use crate::span::Span;
use crate::spaces::OperatorBasis;

/// An element of a block-diagonal ambient: operations act blockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleElement {
    blocks: Vec<ComplexMatrix>,
}

impl From<ComplexMatrix> for TripleElement {
    fn from(m: ComplexMatrix) -> Self {
        Self { blocks: alloc::vec![m] }
    }
}

impl TripleElement {
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("triple element needs a block".into()));
        }
        Ok(Self { blocks })
    }

    /// Basis element `i` of `space`.
    pub fn basis_element(space: &OperatorBasis, i: usize) -> Self {
        Self {
            blocks: space.element(i).to_vec(),
        }
    }

    /// `sum_i coeffs[i] b_i` in `space`.
    pub fn combination(space: &OperatorBasis, coeffs: &[C64]) -> Result<Self> {
        Ok(Self {
            blocks: space.combination(coeffs)?,
        })
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| ComplexMatrix::zeros(b.rows(), b.cols()))
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<ComplexMatrix> {
        self.blocks
    }

    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(ComplexMatrix::shape).collect()
    }

    pub fn adjoint(&self) -> Self {
        self.map(ComplexMatrix::adjoint)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|b| b.scale(s))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|b| b.scale_real(s))
    }

    fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Self {
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> Result<ComplexMatrix>,
    ) -> Result<Self> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::Shape {
                op,
                detail: format!("{} blocks vs {}", self.blocks.len(), other.blocks.len()),
            });
        }
        Ok(Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, "multiply", ComplexMatrix::try_mul)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, "add", ComplexMatrix::try_add)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, "subtract", ComplexMatrix::try_sub)
    }

    /// Hilbert-Schmidt pairing summed over blocks.
    pub fn inner(&self, other: &Self) -> C64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.inner(b)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        num_traits::Float::sqrt(self.inner(self).re)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(ComplexMatrix::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Operator norm of the block-diagonal operator.
    pub fn operator_norm(&self, cfg: &ToleranceConfig) -> Result<f64> {
        let mut best: f64 = 0.0;
        for b in &self.blocks {
            best = best.max(operator_norm(b, cfg)?);
        }
        Ok(best)
    }

    /// Entries of all blocks, concatenated row-major.
    pub fn flatten(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    /// Inverse of [`flatten`](Self::flatten) for the given block shapes.
    pub fn unflatten(shapes: &[(usize, usize)], data: &[C64]) -> Result<Self> {
        let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
        if total != data.len() {
            return Err(Error::Shape {
                op: "unflatten",
                detail: format!("{} entries for {total} slots", data.len()),
            });
        }
        let mut off = 0;
        let mut blocks = Vec::with_capacity(shapes.len());
        for &(r, c) in shapes {
            blocks.push(ComplexMatrix::new(r, c, data[off..off + r * c].to_vec())?);
            off += r * c;
        }
        Self::new(blocks)
    }

    pub fn partial_isometry_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(ComplexMatrix::partial_isometry_residual)
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

impl Mul for &TripleElement {
    type Output = TripleElement;

    fn mul(self, rhs: &TripleElement) -> TripleElement {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &TripleElement {
    type Output = TripleElement;

    fn add(self, rhs: &TripleElement) -> TripleElement {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &TripleElement {
    type Output = TripleElement;

    fn sub(self, rhs: &TripleElement) -> TripleElement {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// `{a, b, c} = (a b* c + c b* a) / 2`.
pub fn triple_product(a: &TripleElement, b: &TripleElement, c: &TripleElement) -> Result<TripleElement> {
    let bs = b.adjoint();
    let left = a.try_mul(&bs)?.try_mul(c)?;
    let right = c.try_mul(&bs)?.try_mul(a)?;
    Ok(left.try_add(&right)?.scale_real(0.5))
}

fn require_partial_isometry(v: &TripleElement, cfg: &ToleranceConfig) -> Result<()> {
    let residual = v.partial_isometry_residual();
    if residual > cfg.structural_tol {
        return Err(Error::NotPartialIsometry { residual });
    }
    Ok(())
}

/// Peirce projections of a fixed partial isometry `v`, built from the
/// projections `l = vv*` and `r = v*v`.
#[derive(Debug, Clone)]
pub struct Peirce {
    left: TripleElement,
    right: TripleElement,
}

/// `x = x2 + x1 + x0` with `x_j` in the Peirce-`j` space.
#[derive(Debug, Clone, PartialEq)]
pub struct PeirceParts {
    pub two: TripleElement,
    pub one: TripleElement,
    pub zero: TripleElement,
}

impl Peirce {
    pub fn new(v: &TripleElement, cfg: &ToleranceConfig) -> Result<Self> {
        require_partial_isometry(v, cfg)?;
        Ok(Self {
            left: v * &v.adjoint(),
            right: &v.adjoint() * v,
        })
    }

    fn complements(&self) -> (TripleElement, TripleElement) {
        let id = |p: &TripleElement| {
            TripleElement::new(
                p.blocks()
                    .iter()
                    .map(|b| ComplexMatrix::identity(b.rows()))
                    .collect(),
            )
            .expect("nonempty")
        };
        (&id(&self.left) - &self.left, &id(&self.right) - &self.right)
    }

    pub fn two(&self, x: &TripleElement) -> Result<TripleElement> {
        self.left.try_mul(x)?.try_mul(&self.right)
    }

    pub fn one(&self, x: &TripleElement) -> Result<TripleElement> {
        let (lc, rc) = self.complements();
        let a = self.left.try_mul(x)?.try_mul(&rc)?;
        let b = lc.try_mul(x)?.try_mul(&self.right)?;
        a.try_add(&b)
    }

    pub fn zero(&self, x: &TripleElement) -> Result<TripleElement> {
        let (lc, rc) = self.complements();
        lc.try_mul(x)?.try_mul(&rc)
    }

    pub fn decompose(&self, x: &TripleElement) -> Result<PeirceParts> {
        Ok(PeirceParts {
            two: self.two(x)?,
            one: self.one(x)?,
            zero: self.zero(x)?,
        })
    }
}

pub fn peirce_decompose(
    v: &TripleElement,
    x: &TripleElement,
    cfg: &ToleranceConfig,
) -> Result<PeirceParts> {
    Peirce::new(v, cfg)?.decompose(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Orthogonal,
    Leq,
    Geq,
    Collinear,
    Other,
}

/// Is `v` in the Peirce-1 space of `w` (both partial isometries)?
pub fn in_peirce_one(v: &TripleElement, w: &TripleElement, cfg: &ToleranceConfig) -> Result<bool> {
    let p1 = Peirce::new(w, cfg)?.one(v)?;
    Ok(p1.try_sub(v)?.max_abs() <= cfg.structural_tol)
}

pub fn are_orthogonal(v: &TripleElement, w: &TripleElement, tol: f64) -> Result<bool> {
    Ok(v.adjoint().try_mul(w)?.is_zero(tol) && v.try_mul(&w.adjoint())?.is_zero(tol))
}

pub fn are_collinear(v: &TripleElement, w: &TripleElement, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(in_peirce_one(v, w, cfg)? && in_peirce_one(w, v, cfg)?)
}

/// Classifies a pair of partial isometries; the first matching category in
/// the order orthogonal, `v <= w`, `v >= w`, collinear wins.
pub fn relation(v: &TripleElement, w: &TripleElement, cfg: &ToleranceConfig) -> Result<Relation> {
    require_partial_isometry(v, cfg)?;
    require_partial_isometry(w, cfg)?;
    let tol = cfg.structural_tol;
    if are_orthogonal(v, w, tol)? {
        return Ok(Relation::Orthogonal);
    }
    let below = |a: &TripleElement, b: &TripleElement| -> Result<bool> {
        Ok(a.try_mul(&b.adjoint())?.try_mul(a)?.try_sub(a)?.max_abs() <= tol)
    };
    if below(v, w)? {
        return Ok(Relation::Leq);
    }
    if below(w, v)? {
        return Ok(Relation::Geq);
    }
    if are_collinear(v, w, cfg)? {
        return Ok(Relation::Collinear);
    }
    Ok(Relation::Other)
}

/// Minimality of `v` relative to the span of `space`: the Peirce-2
/// compression of that span is one-dimensional.
pub fn is_minimal(v: &TripleElement, space: &OperatorBasis, cfg: &ToleranceConfig) -> Result<bool> {
    let peirce = Peirce::new(v, cfg)?;
    let elements: Vec<TripleElement> = (0..space.dim())
        .map(|i| TripleElement::basis_element(space, i))
        .collect();
    if elements[0].shapes() != v.shapes() {
        return Err(Error::Shape {
            op: "is_minimal",
            detail: format!("element shapes {:?} vs space {:?}", v.shapes(), elements[0].shapes()),
        });
    }
    let flat: Vec<Vec<C64>> = elements.iter().map(TripleElement::flatten).collect();
    let span = Span::new(flat.iter().map(Vec::as_slice), 1e-12);
    let residual = span.residual(&v.flatten());
    if residual > cfg.structural_tol * v.frobenius_norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "element is not in the span of {} (residual {residual:e})",
            space.name()
        )));
    }
    let compressed: Vec<Vec<C64>> = elements
        .iter()
        .map(|x| peirce.two(x).map(|y| y.flatten()))
        .collect::<Result<_>>()?;
    let image = Span::new(compressed.iter().map(Vec::as_slice), cfg.structural_tol);
    Ok(image.rank() == 1)
}

/// Checks `uu* vw* = vw* uu*` and `u*u v*w = v*w u*u` for `v`, `w` each
/// collinear with `u`.
pub fn check_hopping(
    u: &TripleElement,
    v: &TripleElement,
    w: &TripleElement,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    for (name, x) in [("v", v), ("w", w)] {
        if !are_collinear(x, u, cfg)? {
            return Err(Error::Precondition(format!("{name} is not collinear with u")));
        }
    }
    let uu = u.try_mul(&u.adjoint())?;
    let vw = v.try_mul(&w.adjoint())?;
    let left = uu.try_mul(&vw)?.try_sub(&vw.try_mul(&uu)?)?;
    let su = u.adjoint().try_mul(u)?;
    let sv = v.adjoint().try_mul(w)?;
    let right = su.try_mul(&sv)?.try_sub(&sv.try_mul(&su)?)?;
    Ok(left.max_abs() <= cfg.structural_tol && right.max_abs() <= cfg.structural_tol)
}

/// `(uu*)_A u_c (u*u)_B` with the factors of `A` and `B` taken in ascending
/// order; indices are 1-based positions in `family`.
pub fn family_word(family: &[TripleElement], left: &Subset, c: usize, right: &Subset) -> Result<TripleElement> {
    let pick = |i: usize| {
        family
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidArgument(format!("index {i} outside 1..={}", family.len())))
    };
    let mut acc = pick(c)?.clone();
    for a in left.elements().iter().rev() {
        let u = pick(*a)?;
        acc = u.try_mul(&u.adjoint().try_mul(&acc)?)?;
    }
    for b in right.iter() {
        let u = pick(b)?;
        acc = acc.try_mul(&u.adjoint())?.try_mul(u)?;
    }
    Ok(acc)
}
