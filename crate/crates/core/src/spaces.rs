//! Concrete Hilbertian operator spaces: `C_n`, `R_n`, `H_n^k`, `Phi_n`,
//! their intersections, and the signed matrix units `u_{I,J}`.
//!
//! Rows of `H_n^k` are indexed by the `(n-k)`-subsets `J` and columns by the
//! `(k-1)`-subsets `I` of `{1..n}`, both in lexicographic order.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combinat::{binomial, epsilon_one, Sign, Subset, SubsetIndexer};
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::matrix::{direct_sum, operator_norm, ComplexMatrix, ToleranceConfig, C64};

/// Ambient shape of one block of a (possibly intersected) space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentShape {
    pub rows: usize,
    pub cols: usize,
}

/// A named orthonormal basis of a Hilbertian operator space.
///
/// Each basis element is a tuple of blocks, one per component; the element
/// acts as the block-diagonal direct sum of its blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    name: String,
    components: Vec<ComponentShape>,
    basis: Vec<Vec<ComplexMatrix>>,
}

impl OperatorBasis {
    /// Validates that every element has one block per component with
    /// matching shapes.
    pub fn new(name: impl Into<String>, basis: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let first = basis
            .first()
            .ok_or_else(|| Error::InvalidArgument("basis must be nonempty".into()))?;
        if first.is_empty() {
            return Err(Error::InvalidArgument("basis elements need at least one block".into()));
        }
        let components: Vec<ComponentShape> = first
            .iter()
            .map(|m| ComponentShape {
                rows: m.rows(),
                cols: m.cols(),
            })
            .collect();
        for (i, el) in basis.iter().enumerate() {
            if el.len() != components.len() {
                return Err(Error::Shape {
                    op: "OperatorBasis::new",
                    detail: format!("element {i} has {} blocks, expected {}", el.len(), components.len()),
                });
            }
            for (c, (m, shape)) in el.iter().zip(&components).enumerate() {
                if m.shape() != (shape.rows, shape.cols) {
                    return Err(Error::Shape {
                        op: "OperatorBasis::new",
                        detail: format!(
                            "element {i} block {c} is {}x{}, expected {}x{}",
                            m.rows(),
                            m.cols(),
                            shape.rows,
                            shape.cols
                        ),
                    });
                }
            }
        }
        Ok(Self {
            name: name.into(),
            components,
            basis,
        })
    }

    /// Single-component family.
    pub fn from_matrices(name: impl Into<String>, elements: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(name, elements.into_iter().map(|m| alloc::vec![m]).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dimension `n` of the Hilbertian space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn components(&self) -> &[ComponentShape] {
        &self.components
    }

    pub fn elements(&self) -> &[Vec<ComplexMatrix>] {
        &self.basis
    }

    pub fn element(&self, i: usize) -> &[ComplexMatrix] {
        &self.basis[i]
    }

    /// Total shape of the block-diagonal ambient.
    pub fn ambient_shape(&self) -> (usize, usize) {
        self.components
            .iter()
            .fold((0, 0), |(r, c), s| (r + s.rows, c + s.cols))
    }

    /// Element `i` as one block-diagonal matrix.
    pub fn element_matrix(&self, i: usize) -> ComplexMatrix {
        direct_sum(&self.basis[i]).expect("nonempty tuple")
    }

    /// Blocks of `sum_i coeffs[i] b_i`.
    pub fn combination(&self, coeffs: &[C64]) -> Result<Vec<ComplexMatrix>> {
        if coeffs.len() != self.dim() {
            return Err(Error::Shape {
                op: "combination",
                detail: format!("{} coefficients for dimension {}", coeffs.len(), self.dim()),
            });
        }
        Ok(self
            .components
            .iter()
            .enumerate()
            .map(|(c, shape)| {
                let mut acc = ComplexMatrix::zeros(shape.rows, shape.cols);
                for (el, z) in self.basis.iter().zip(coeffs) {
                    if *z != C64::new(0.0, 0.0) {
                        acc += &el[c].scale(*z);
                    }
                }
                acc
            })
            .collect())
    }

    /// `‖sum_i coeffs[i] b_i‖`, the maximum over components.
    pub fn norm_of(&self, coeffs: &[C64], cfg: &ToleranceConfig) -> Result<f64> {
        let mut best: f64 = 0.0;
        for block in self.combination(coeffs)? {
            best = best.max(operator_norm(&block, cfg)?);
        }
        Ok(best)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Intersection of spaces of equal dimension, realized through the diagonal
/// embedding `x -> (x, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionSpace {
    parts: Vec<OperatorBasis>,
}

impl IntersectionSpace {
    pub fn parts(&self) -> &[OperatorBasis] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts[0].dim()
    }

    pub fn name(&self) -> String {
        let names: Vec<&str> = self.parts.iter().map(|p| p.name()).collect();
        names.join(" ∩ ")
    }

    /// Flattens to one basis whose elements concatenate the parts' blocks.
    pub fn as_basis(&self) -> OperatorBasis {
        let basis = (0..self.dim())
            .map(|i| {
                self.parts
                    .iter()
                    .flat_map(|p| p.element(i).iter().cloned())
                    .collect()
            })
            .collect();
        OperatorBasis::new(self.name(), basis).expect("parts validated")
    }

    pub fn norm_of(&self, coeffs: &[C64], cfg: &ToleranceConfig) -> Result<f64> {
        let mut best: f64 = 0.0;
        for p in &self.parts {
            best = best.max(p.norm_of(coeffs, cfg)?);
        }
        Ok(best)
    }
}

pub fn intersect(parts: Vec<OperatorBasis>) -> Result<IntersectionSpace> {
    let n = parts
        .first()
        .ok_or_else(|| Error::InvalidArgument("intersection of no spaces".into()))?
        .dim();
    if let Some(p) = parts.iter().find(|p| p.dim() != n) {
        return Err(Error::Shape {
            op: "intersect",
            detail: format!("{} has dimension {}, expected {n}", p.name(), p.dim()),
        });
    }
    Ok(IntersectionSpace { parts })
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(())
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    check_n(n)?;
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={n}")));
    }
    Ok(())
}

/// Column Hilbert space: `e_{i1}` as `n x 1` matrices.
pub fn build_column(n: usize) -> Result<OperatorBasis> {
    check_n(n)?;
    OperatorBasis::from_matrices(
        format!("C_{n}"),
        (0..n).map(|i| ComplexMatrix::unit(n, 1, i, 0)).collect(),
    )
}

/// Row Hilbert space: `e_{1j}` as `1 x n` matrices.
pub fn build_row(n: usize) -> Result<OperatorBasis> {
    check_n(n)?;
    OperatorBasis::from_matrices(
        format!("R_{n}"),
        (0..n).map(|j| ComplexMatrix::unit(1, n, 0, j)).collect(),
    )
}

/// Row and column index sets of `H_n^k`.
#[derive(Debug, Clone)]
pub struct GridIndex {
    pub n: usize,
    pub k: usize,
    /// `(n-k)`-subsets.
    pub rows: SubsetIndexer,
    /// `(k-1)`-subsets.
    pub cols: SubsetIndexer,
}

impl GridIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_nk(n, k)?;
        Ok(Self {
            n,
            k,
            rows: SubsetIndexer::new(n, n - k)?,
            cols: SubsetIndexer::new(n, k - 1)?,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }
}

/// The signed generators `b_i^{n,k}` with exact integer entries.
pub fn hnk_exact(n: usize, k: usize) -> Result<Vec<IntMatrix>> {
    let grid = GridIndex::new(n, k)?;
    let (p, q) = grid.shape();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut b = IntMatrix::zeros(p, q);
        for left in grid.cols.iter() {
            if left.contains(i) {
                continue;
            }
            let right = left.with(i).complement(n);
            let sign = epsilon_one(&left, i, &right, n)?;
            b[(grid.rows.rank(&right)?, grid.cols.rank(&left)?)] = sign.value();
        }
        out.push(b);
    }
    Ok(out)
}

/// `H_n^k`, spanned by `b_i^{n,k} = sum epsilon(I,i,J) e_{J,I}`.
pub fn build_hnk(n: usize, k: usize) -> Result<OperatorBasis> {
    let family = hnk_exact(n, k)?;
    OperatorBasis::from_matrices(
        format!("H_{n}^{k}"),
        family.iter().map(IntMatrix::to_complex).collect(),
    )
}

/// `Phi_n` as the intersection of `H_n^1, ..., H_n^n`: element `i` is the
/// block tuple `(b_i^{n,1}, ..., b_i^{n,n})`.
pub fn build_phi(n: usize) -> Result<OperatorBasis> {
    check_n(n)?;
    let parts = (1..=n).map(|k| build_hnk(n, k)).collect::<Result<Vec<_>>>()?;
    Ok(intersect(parts)?.as_basis().renamed(format!("Phi_{n}")))
}

/// `∩_{k in ks} H_n^k`, components in the order given.
pub fn build_hnk_intersection(n: usize, ks: &[usize]) -> Result<OperatorBasis> {
    let parts = ks.iter().map(|&k| build_hnk(n, k)).collect::<Result<Vec<_>>>()?;
    Ok(intersect(parts)?.as_basis())
}

/// Ordered product `prod_{j in set} f(j)` starting from the identity.
fn ordered_product(
    set: &Subset,
    dim: usize,
    mut f: impl FnMut(usize) -> IntMatrix,
) -> IntMatrix {
    set.iter()
        .fold(IntMatrix::identity(dim), |acc, j| &acc * &f(j))
}

/// `(bb*)_A b_c (b*b)_B` over the exact `H_n^k` family. A "one" when
/// `A`, `{c}`, `B` partition `{1..n}`.
pub fn word_exact(family: &[IntMatrix], left: &Subset, c: usize, right: &Subset) -> IntMatrix {
    let b = |j: usize| &family[j - 1];
    let (p, q) = family[0].shape();
    let l = ordered_product(left, p, |j| b(j) * &b(j).adjoint());
    let r = ordered_product(right, q, |j| &b(j).adjoint() * b(j));
    &(&l * b(c)) * &r
}

/// `u_{I,J}` evaluated as the product
/// `(bb*)_{I-J} b_{c_1} b_{d_1}* b_{c_2} ... b_{d_s}* b_{c_{s+1}} (b*b)_{J-I}`
/// with `{c_t} = (I ∪ J)^c` and `{d_t} = I ∩ J`, both ascending.
pub fn uij_exact(n: usize, k: usize, left: &Subset, right: &Subset) -> Result<IntMatrix> {
    check_nk(n, k)?;
    if left.len() != k - 1 || right.len() != n - k {
        return Err(Error::InvalidArgument(format!(
            "u_IJ needs |I| = {} and |J| = {}, got I={left}, J={right}",
            k - 1,
            n - k
        )));
    }
    if let Some(x) = left.iter().chain(right.iter()).find(|&x| x > n) {
        return Err(Error::InvalidArgument(format!("element {x} outside 1..={n}")));
    }
    let family = hnk_exact(n, k)?;
    Ok(uij_from_family(&family, n, left, right))
}

pub(crate) fn uij_from_family(
    family: &[IntMatrix],
    n: usize,
    left: &Subset,
    right: &Subset,
) -> IntMatrix {
    let b = |j: usize| &family[j - 1];
    let (p, q) = family[0].shape();
    let overlap = left.intersection(right);
    let free = left.union(right).complement(n);
    let mut acc = ordered_product(&left.difference(right), p, |j| b(j) * &b(j).adjoint());
    let frees = free.elements();
    for (t, &c) in frees.iter().enumerate() {
        acc = &acc * b(c);
        if let Some(d) = overlap.elements().get(t) {
            acc = &acc * &b(*d).adjoint();
        }
    }
    let tail = ordered_product(&right.difference(left), q, |j| &b(j).adjoint() * b(j));
    &acc * &tail
}

/// `u_{I,J}` as a complex matrix; equals `±e_{J,I}`.
pub fn build_uij(n: usize, k: usize, left: &Subset, right: &Subset) -> Result<ComplexMatrix> {
    Ok(uij_exact(n, k, left, right)?.to_complex())
}

/// Signature `epsilon(I,J)`, read off the single nonzero entry of `u_{I,J}`.
pub fn epsilon_ij(n: usize, k: usize, left: &Subset, right: &Subset) -> Result<Sign> {
    let u = uij_exact(n, k, left, right)?;
    let grid = GridIndex::new(n, k)?;
    sign_at(&u, grid.rows.rank(right)?, grid.cols.rank(left)?)
}

/// Sign of a matrix that must be `±` a single matrix unit at `(row, col)`.
pub(crate) fn sign_at(u: &IntMatrix, row: usize, col: usize) -> Result<Sign> {
    let nz: Vec<(usize, usize, i64)> = u.nonzeros().collect();
    match nz.as_slice() {
        [(r, c, v)] if *r == row && *c == col => Sign::from_value(*v)
            .ok_or_else(|| Error::Degenerate(format!("grid entry has modulus {}", v.abs()))),
        _ => Err(Error::Degenerate(format!(
            "expected a single unit at ({row}, {col}), found {} nonzero entries",
            nz.len()
        ))),
    }
}

/// Number of "ones" contributing to each generator, `C(n-1, k-1)`.
pub fn ones_per_generator(n: usize, k: usize) -> u64 {
    binomial(n - 1, k - 1)
}

/// `ε(I,J) u_{I,J}` for every `(I, J)`, indexed by the ranks of `I` among the
/// `(k-1)`-subsets and of `J` among the `(n-k)`-subsets. Each entry is the
/// matrix unit `e_{J,I}` when the signs are consistent.
pub fn signed_grid(n: usize, k: usize) -> Result<Vec<Vec<IntMatrix>>> {
    let grid = GridIndex::new(n, k)?;
    let family = hnk_exact(n, k)?;
    let mut out = Vec::with_capacity(grid.cols.len());
    for left in grid.cols.iter() {
        let mut row = Vec::with_capacity(grid.rows.len());
        for right in grid.rows.iter() {
            let u = uij_from_family(&family, n, &left, &right);
            let sign = sign_at(&u, grid.rows.rank(&right)?, grid.cols.rank(&left)?)?;
            row.push(u.scale(sign.value()));
        }
        out.push(row);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridReport {
    pub n: usize,
    pub k: usize,
    pub triples_checked: u64,
    pub violations: u64,
}

/// Checks `v_{IJ} v_{IJ'}* v_{I'J'} = v_{I'J}` with `v = ε u` in exact
/// integer arithmetic for all `I, I'` and `J, J'`.
#[allow(clippy::needless_range_loop)]
pub fn check_grid_relation(n: usize, k: usize) -> Result<GridReport> {
    let v = signed_grid(n, k)?;
    let (ni, nj) = (v.len(), v[0].len());
    let mut checked = 0;
    let mut bad = 0;
    for i in 0..ni {
        for j in 0..nj {
            for j2 in 0..nj {
                let left = &v[i][j] * &v[i][j2].adjoint();
                for i2 in 0..ni {
                    checked += 1;
                    if &left * &v[i2][j2] != v[i2][j] {
                        bad += 1;
                    }
                }
            }
        }
    }
    Ok(GridReport {
        n,
        k,
        triples_checked: checked,
        violations: bad,
    })
}

/// `max_c max |Σ_{(I, J)} (bb*)_I b_c (b*b)_J - b_c|` over the partitions
/// `I ∪ J = {1..n} - {c}`; zero when every generator is the sum of its ones.
pub fn ones_decomposition_defect(n: usize, k: usize) -> Result<i64> {
    let family = hnk_exact(n, k)?;
    let mut worst = 0;
    for c in 1..=n {
        let rest = Subset::full(n).without(c);
        let (p, q) = family[0].shape();
        let mut sum = IntMatrix::zeros(p, q);
        for mask in 0u64..1 << rest.len() {
            let left = Subset::new(
                rest.iter()
                    .enumerate()
                    .filter(|(t, _)| mask >> t & 1 == 1)
                    .map(|(_, x)| x),
            )?;
            let right = rest.difference(&left);
            sum = &sum + &word_exact(&family, &left, c, &right);
        }
        let diff = &sum + &family[c - 1].scale(-1);
        worst = worst.max(diff.nonzeros().map(|(_, _, x)| x.abs()).max().unwrap_or(0));
    }
    Ok(worst)
}

/// `Σ b_i b_i* = k I` and `Σ b_i* b_i = (n-k+1) I`: the largest entry of
/// either difference, exactly.
pub fn gram_sum_defect(n: usize, k: usize) -> Result<i64> {
    let family = hnk_exact(n, k)?;
    let (p, q) = family[0].shape();
    let mut left = IntMatrix::identity(p).scale(-(k as i64));
    let mut right = IntMatrix::identity(q).scale(-((n - k + 1) as i64));
    for b in &family {
        left = &left + &(b * &b.adjoint());
        right = &right + &(&b.adjoint() * b);
    }
    Ok(left.nonzeros().chain(right.nonzeros()).map(|(_, _, x)| x.abs()).max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_vector, rng};
    use alloc::vec;

    fn s(v: &[usize]) -> Subset {
        Subset::new(v.iter().copied()).unwrap()
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn column_and_row_elements() {
        let c = build_column(2).unwrap();
        assert_eq!(c.element(0)[0], ComplexMatrix::from_real_rows(&[&[1.0], &[0.0]]));
        let r = build_row(2).unwrap();
        assert_eq!(r.element(1)[0], ComplexMatrix::from_real_rows(&[&[0.0, 1.0]]));
        let n = c.norm_of(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)], &cfg()).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-12);
        assert!(build_column(0).is_err());
    }

    #[test]
    fn h21_signs() {
        let h = hnk_exact(2, 1).unwrap();
        // rows: {1}, {2}
        assert_eq!(h[0][(1, 0)], 1);
        assert_eq!(h[0][(0, 0)], 0);
        assert_eq!(h[1][(0, 0)], -1);
    }

    #[test]
    fn h32_first_generator() {
        let h = hnk_exact(3, 2).unwrap();
        // b_1 = e_{{2},{3}} - e_{{3},{2}}; rows and columns indexed {1},{2},{3}.
        let mut expect = IntMatrix::zeros(3, 3);
        expect[(1, 2)] = 1;
        expect[(2, 1)] = -1;
        assert_eq!(h[0], expect);
    }

    #[test]
    fn hnk_shapes() {
        let b = build_hnk(4, 2).unwrap();
        assert_eq!(b.components(), &[ComponentShape { rows: 6, cols: 4 }]);
        assert!(build_hnk(3, 0).is_err());
        assert!(build_hnk(3, 4).is_err());
    }

    #[test]
    fn phi_shapes() {
        let p1 = build_phi(1).unwrap();
        assert_eq!(p1.element_matrix(0), ComplexMatrix::identity(1));
        assert_eq!(build_phi(3).unwrap().ambient_shape(), (7, 7));
    }

    #[test]
    fn one_matches_epsilon() {
        let (n, k) = (4, 2);
        let fam = hnk_exact(n, k).unwrap();
        let grid = GridIndex::new(n, k).unwrap();
        for left in grid.cols.iter() {
            for right in grid.rows.iter() {
                if !left.is_disjoint(&right) {
                    continue;
                }
                let c = left.union(&right).complement(n).elements()[0];
                let e = epsilon_one(&left, c, &right, n).unwrap();
                let u = uij_from_family(&fam, n, &left, &right);
                assert_eq!(
                    sign_at(&u, grid.rows.rank(&right).unwrap(), grid.cols.rank(&left).unwrap()).unwrap(),
                    e
                );
                assert_eq!(u, word_exact(&fam, &left, c, &right));
            }
        }
    }

    #[test]
    fn overlapping_uij_is_signed_unit() {
        let u = build_uij(3, 2, &s(&[1]), &s(&[1])).unwrap();
        let nz: Vec<_> = u.data().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nz.len(), 1);
        assert!((nz[0].norm() - 1.0).abs() < 1e-15);
        assert!(u[(0, 0)].norm() == 1.0);
    }

    #[test]
    fn uij_rejects_bad_cardinality() {
        assert!(build_uij(3, 2, &s(&[1, 2]), &s(&[1])).is_err());
    }

    #[test]
    fn phi_orthonormal_sample() {
        let phi = build_phi(4).unwrap();
        let mut r = rng(2);
        for _ in 0..10 {
            let l = random_vector(&mut r, 4);
            let e: f64 = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((phi.norm_of(&l, &cfg()).unwrap() - e).abs() < 1e-8);
        }
    }

    #[test]
    fn intersection_examples() {
        let c = build_column(3).unwrap();
        let single = intersect(vec![c.clone()]).unwrap();
        let l = [C64::new(1.0, 0.5), C64::new(-0.2, 0.0), C64::new(0.0, 2.0)];
        assert!((single.norm_of(&l, &cfg()).unwrap() - c.norm_of(&l, &cfg()).unwrap()).abs() < 1e-12);

        let rc = intersect(vec![build_row(2).unwrap(), build_column(2).unwrap()]).unwrap();
        let e1 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!((rc.norm_of(&e1, &cfg()).unwrap() - 1.0).abs() < 1e-12);

        assert!(intersect(vec![build_row(2).unwrap(), build_row(3).unwrap()]).is_err());
    }
}
