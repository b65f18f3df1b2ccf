//! Antisymmetric Fock space over `C^n` and its creation operators.
//!
//! The level `∧^m C^n` has the orthonormal basis `e_S = e_{s_1} ∧ ... ∧ e_{s_m}`
//! indexed by the lexicographically ordered `m`-subsets `S` of `{1..n}`.
//! Creation by `e_i` sends `e_S` to `sign * e_{S ∪ {i}}` where the sign
//! counts the elements of `S` below `i`.
//!
//! `H_n^k` is unitarily equivalent to the creation operators
//! `∧^{k-1} -> ∧^k`: with `V` the complement map `e_S -> e_{N-S}` and `W`
//! the sign diagonal on `(n-k)`-subsets,
//!
//! ```text
//! b_i^{n,k} = W V C_{e_i}    for every i.
//! ```

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::combinat::{epsilon_one, insertion_sign, Subset, SubsetIndexer};
use crate::error::{Error, Result};
use crate::matrix::{direct_sum, operator_norm, ComplexMatrix, ToleranceConfig, C64};
use crate::sampling::{random_matrix, random_vector, rng};
use crate::spaces::hnk_exact;

/// Largest ground dimension accepted by the full-Fock routines (`2^n`
/// dense states).
pub const MAX_FOCK_N: usize = 12;

/// The level `∧^m C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockLevel {
    indexer: SubsetIndexer,
}

impl FockLevel {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Ok(Self {
            indexer: SubsetIndexer::new(n, m)?,
        })
    }

    pub fn n(&self) -> usize {
        self.indexer.n()
    }

    pub fn degree(&self) -> usize {
        self.indexer.k()
    }

    pub fn dim(&self) -> usize {
        self.indexer.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = Subset> + '_ {
        self.indexer.iter()
    }

    pub fn index_of(&self, set: &Subset) -> Result<usize> {
        self.indexer.rank(set)
    }
}

fn check_vector(n: usize, h: &[C64]) -> Result<()> {
    if h.len() != n {
        return Err(Error::Shape {
            op: "creation",
            detail: format!("vector of length {} in dimension {n}", h.len()),
        });
    }
    Ok(())
}

/// Creation by the basis vector `e_i` (1-based) from level `m` to `m + 1`.
pub fn creation_basis(n: usize, m: usize, i: usize) -> Result<ComplexMatrix> {
    if n == 0 || m >= n {
        return Err(Error::InvalidArgument(format!("degree {m} outside 0..{n}")));
    }
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={n}")));
    }
    let from = FockLevel::new(n, m)?;
    let to = FockLevel::new(n, m + 1)?;
    let mut c = ComplexMatrix::zeros(to.dim(), from.dim());
    for (col, s) in from.basis().enumerate() {
        if s.contains(i) {
            continue;
        }
        let sign = insertion_sign(i, &s)?;
        c[(to.index_of(&s.with(i))?, col)] = C64::new(sign.as_f64(), 0.0);
    }
    Ok(c)
}

/// `C_h : ∧^m -> ∧^{m+1}`, `h_1 ∧ ... ∧ h_m -> h ∧ h_1 ∧ ... ∧ h_m`.
pub fn creation(n: usize, m: usize, h: &[C64]) -> Result<ComplexMatrix> {
    check_vector(n, h)?;
    let mut acc: Option<ComplexMatrix> = None;
    for (idx, z) in h.iter().enumerate() {
        let term = creation_basis(n, m, idx + 1)?.scale(*z);
        match acc.as_mut() {
            Some(a) => *a += &term,
            None => acc = Some(term),
        }
    }
    acc.ok_or_else(|| Error::InvalidArgument("empty vector".into()))
}

/// Adjoint of [`creation`].
pub fn annihilation(n: usize, m: usize, h: &[C64]) -> Result<ComplexMatrix> {
    Ok(creation(n, m, h)?.adjoint())
}

/// An operator on the full Fock space with at most one nonzero entry
/// `±1` per column, as creation operators and their adjoints are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPartialPermutation {
    /// `columns[j] = Some((row, sign))`.
    columns: Vec<Option<(usize, i8)>>,
}

impl SignedPartialPermutation {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> Option<(usize, i8)> {
        self.columns[j]
    }

    /// Requires at most one nonzero entry per row as well.
    pub fn adjoint(&self) -> Self {
        let mut columns = alloc::vec![None; self.dim()];
        for (j, e) in self.columns.iter().enumerate() {
            if let Some((r, s)) = *e {
                columns[r] = Some((j, s));
            }
        }
        Self { columns }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            columns: other
                .columns
                .iter()
                .map(|e| e.and_then(|(mid, s1)| self.columns[mid].map(|(r, s2)| (r, s1 * s2))))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut c = ComplexMatrix::zeros(self.dim(), self.dim());
        for (j, e) in self.columns.iter().enumerate() {
            if let Some((r, s)) = *e {
                c[(r, j)] = C64::new(f64::from(s), 0.0);
            }
        }
        c
    }
}

/// Position of every subset (as a bitmask) in the full Fock basis: levels
/// in increasing degree, lexicographic inside a level.
fn fock_positions(n: usize) -> Result<Vec<usize>> {
    let mut pos = alloc::vec![0; 1 << n];
    let mut offset = 0;
    for m in 0..=n {
        let level = FockLevel::new(n, m)?;
        for (r, set) in level.basis().enumerate() {
            pos[set.mask() as usize] = offset + r;
        }
        offset += level.dim();
    }
    Ok(pos)
}

fn check_fock_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FOCK_N {
        return Err(Error::InvalidArgument(format!("Fock dimension n = {n} outside 1..={MAX_FOCK_N}")));
    }
    Ok(())
}

/// Creation by `e_i` on the full Fock space `⊕_m ∧^m C^n` (dimension
/// `2^n`), in sparse form.
pub fn full_fock_creation_sparse(n: usize, i: usize) -> Result<SignedPartialPermutation> {
    check_fock_n(n)?;
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={n}")));
    }
    let pos = fock_positions(n)?;
    let mut columns = alloc::vec![None; 1 << n];
    for mask in 0u64..1 << n {
        let set = Subset::from_mask(mask);
        if set.contains(i) {
            continue;
        }
        let sign = insertion_sign(i, &set)?.value() as i8;
        let target = set.with(i).mask() as usize;
        columns[pos[mask as usize]] = Some((pos[target], sign));
    }
    Ok(SignedPartialPermutation { columns })
}

/// Dense form of [`full_fock_creation_sparse`].
pub fn full_fock_creation(n: usize, i: usize) -> Result<ComplexMatrix> {
    Ok(full_fock_creation_sparse(n, i)?.to_dense())
}

/// Largest `n` for which [`car_check`] samples `‖Σ λ_i c_i‖` densely.
pub const MAX_DENSE_FOCK_N: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct CarReport {
    pub n: usize,
    /// Largest Frobenius norm among `c_i c_j + c_j c_i` and
    /// `c_i c_j* + c_j* c_i - δ_ij I`.
    pub max_residual: f64,
    /// Largest `|‖Σ λ_i c_i‖ - ‖λ‖_2|` over the sampled coefficient vectors;
    /// `None` above [`MAX_DENSE_FOCK_N`].
    pub hilbertian_residual: Option<f64>,
    pub pairs_checked: usize,
    pub pass: bool,
}

/// Frobenius norm of `a + b - δ I`, column by column.
fn sum_residual(a: &SignedPartialPermutation, b: &SignedPartialPermutation, minus_identity: bool) -> f64 {
    let mut total = 0.0;
    for j in 0..a.dim() {
        let mut acc: [(usize, f64); 3] = [(usize::MAX, 0.0); 3];
        let mut len = 0;
        let mut add = |row: usize, v: f64| {
            match acc[..len].iter_mut().find(|(r, _)| *r == row) {
                Some(slot) => slot.1 += v,
                None => {
                    acc[len] = (row, v);
                    len += 1;
                }
            }
        };
        for op in [a, b] {
            if let Some((r, s)) = op.column(j) {
                add(r, f64::from(s));
            }
        }
        if minus_identity {
            add(j, -1.0);
        }
        total += acc[..len].iter().map(|(_, v)| v * v).sum::<f64>();
    }
    Float::sqrt(total)
}

/// Verifies the canonical anticommutation relations of the full-Fock
/// creation operators.
pub fn car_check(n: usize, cfg: &ToleranceConfig) -> Result<CarReport> {
    const RESIDUAL_TOL: f64 = 1e-12;
    let ops = (1..=n)
        .map(|i| full_fock_creation_sparse(n, i))
        .collect::<Result<Vec<_>>>()?;
    let adj: Vec<SignedPartialPermutation> = ops.iter().map(SignedPartialPermutation::adjoint).collect();
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for i in 0..n {
        for j in 0..n {
            let anti = sum_residual(&ops[i].compose(&ops[j]), &ops[j].compose(&ops[i]), false);
            let mixed = sum_residual(&ops[i].compose(&adj[j]), &adj[j].compose(&ops[i]), i == j);
            worst = worst.max(anti).max(mixed);
            pairs += 1;
        }
    }
    let hilbertian = if n <= MAX_DENSE_FOCK_N {
        let dense: Vec<ComplexMatrix> = ops.iter().map(SignedPartialPermutation::to_dense).collect();
        let mut r = rng(cfg.seed);
        let mut h: f64 = 0.0;
        for _ in 0..3 {
            let lambda = random_vector(&mut r, n);
            let mut x = ComplexMatrix::zeros(1 << n, 1 << n);
            for (op, z) in dense.iter().zip(&lambda) {
                x += &op.scale(*z);
            }
            let expect = Float::sqrt(lambda.iter().map(|z| z.norm_sqr()).sum::<f64>());
            h = h.max(Float::abs(operator_norm(&x, cfg)? - expect));
        }
        Some(h)
    } else {
        None
    };
    Ok(CarReport {
        n,
        max_residual: worst,
        hilbertian_residual: hilbertian,
        pairs_checked: pairs,
        pass: worst <= RESIDUAL_TOL && hilbertian.is_none_or(|h| h <= 1e-8),
    })
}

/// `V : ∧^k -> ∧^{n-k}`, `e_S -> e_{N-S}`.
pub fn unitary_v(n: usize, k: usize) -> Result<ComplexMatrix> {
    if n == 0 || k > n {
        return Err(Error::InvalidArgument(format!("degree {k} outside 0..={n}")));
    }
    let from = FockLevel::new(n, k)?;
    let to = FockLevel::new(n, n - k)?;
    let mut v = ComplexMatrix::zeros(to.dim(), from.dim());
    for (col, s) in from.basis().enumerate() {
        v[(to.index_of(&s.complement(n))?, col)] = C64::new(1.0, 0.0);
    }
    Ok(v)
}

/// Sign of `W` at the `(n-k)`-subset `J`: `epsilon(i, I) epsilon(I, i, J)`
/// with `I = N - J - {i}` for any `i` outside `J`.
pub fn w_sign(n: usize, right: &Subset, i: usize) -> Result<crate::combinat::Sign> {
    if right.contains(i) {
        return Err(Error::InvalidArgument(format!("{i} belongs to J={right}")));
    }
    let left = right.with(i).complement(n);
    Ok(insertion_sign(i, &left)? * epsilon_one(&left, i, right, n)?)
}

/// `W` for `H_n^k`: the `±1` diagonal on the `(n-k)`-subsets, evaluated with
/// the smallest admissible `i`.
pub fn unitary_w(n: usize, k: usize) -> Result<ComplexMatrix> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={n}")));
    }
    let level = FockLevel::new(n, n - k)?;
    let mut w = ComplexMatrix::zeros(level.dim(), level.dim());
    for (idx, right) in level.basis().enumerate() {
        let i = right.complement(n).elements()[0];
        w[(idx, idx)] = C64::new(w_sign(n, &right, i)?.as_f64(), 0.0);
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockReport {
    pub n: usize,
    pub k: usize,
    /// `max_i ‖U C_{e_i} D - b_i^{n,k}‖_F` with `U = W V`, `D = I`.
    pub structural_residual: f64,
    /// `max |‖Σ λ_i ⊗ b_i‖ - ‖Σ λ_i ⊗ C_{e_i}‖|` over sampled `λ_i ∈ M_p`.
    pub sampling_residual: f64,
    pub samples: usize,
    pub max_level: usize,
    pub pass: bool,
}

/// Sampling settings for [`fock_vs_hnk`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSampling {
    pub samples: usize,
    pub max_level: usize,
}

impl Default for FockSampling {
    fn default() -> Self {
        Self {
            samples: 50,
            max_level: 3,
        }
    }
}

/// Compares `H_n^k` with the creation operators `∧^{k-1} -> ∧^k`, both
/// through the explicit intertwiner and through sampled matrix-level norms.
pub fn fock_vs_hnk(
    n: usize,
    k: usize,
    sampling: FockSampling,
    cfg: &ToleranceConfig,
) -> Result<FockReport> {
    const SAMPLING_TOL: f64 = 1e-7;
    let b: Vec<ComplexMatrix> = hnk_exact(n, k)?.iter().map(|m| m.to_complex()).collect();
    let creations = (1..=n)
        .map(|i| creation_basis(n, k - 1, i))
        .collect::<Result<Vec<_>>>()?;
    let u = &unitary_w(n, k)? * &unitary_v(n, k)?;
    let d = ComplexMatrix::identity(creations[0].cols());

    let mut structural: f64 = 0.0;
    for (i, (c, bi)) in creations.iter().zip(&b).enumerate() {
        let res = (&(&(&u * c) * &d) - bi).frobenius_norm();
        if res > cfg.structural_tol {
            return Err(Error::CheckFailed(format!(
                "intertwiner residual {res:e} for b_{} of H_{n}^{k}",
                i + 1
            )));
        }
        structural = structural.max(res);
    }

    let mut r = rng(cfg.seed);
    let mut sampled: f64 = 0.0;
    let levels = sampling.max_level.max(1);
    for s in 0..sampling.samples {
        let p = 1 + s % levels;
        let lambdas: Vec<ComplexMatrix> = (0..n).map(|_| random_matrix(&mut r, p, p)).collect();
        let amplify = |family: &[ComplexMatrix]| {
            let mut acc = lambdas[0].kron(&family[0]);
            for (l, f) in lambdas.iter().zip(family).skip(1) {
                acc += &l.kron(f);
            }
            acc
        };
        let nb = operator_norm(&amplify(&b), cfg)?;
        let nc = operator_norm(&amplify(&creations), cfg)?;
        sampled = sampled.max(Float::abs(nb - nc));
    }
    Ok(FockReport {
        n,
        k,
        structural_residual: structural,
        sampling_residual: sampled,
        samples: sampling.samples,
        max_level: levels,
        pass: structural <= cfg.structural_tol && sampled <= SAMPLING_TOL,
    })
}

/// Creation operators `⊕_m C^m_{e_i}` restricted to the levels `m = 0..n-1`
/// as one block-diagonal matrix per `i`.
pub fn creation_direct_sum(n: usize, i: usize) -> Result<ComplexMatrix> {
    let blocks = (0..n).map(|m| creation_basis(n, m, i)).collect::<Result<Vec<_>>>()?;
    direct_sum(&blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Subset {
        Subset::new(v.iter().copied()).unwrap()
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn vacuum_creation() {
        let c = creation_basis(3, 0, 1).unwrap();
        assert_eq!(c.shape(), (3, 1));
        assert_eq!(c, ComplexMatrix::unit(3, 1, 0, 0));
    }

    #[test]
    fn creation_sign_and_antisymmetry() {
        let c = creation_basis(3, 1, 2).unwrap();
        let lvl2 = FockLevel::new(3, 2).unwrap();
        let row = lvl2.index_of(&s(&[1, 2])).unwrap();
        // e_2 ∧ e_1 = -e_1 ∧ e_2
        assert_eq!(c[(row, 0)], C64::new(-1.0, 0.0));
        // e_2 ∧ e_2 = 0
        for r in 0..c.rows() {
            assert_eq!(c[(r, 1)], C64::new(0.0, 0.0));
        }
        assert!(creation_basis(3, 3, 1).is_err());
    }

    #[test]
    fn annihilation_is_adjoint() {
        let h = [C64::new(0.3, -1.0), C64::new(2.0, 0.5), C64::new(-0.7, 0.0)];
        let c = creation(3, 1, &h).unwrap();
        let a = annihilation(3, 1, &h).unwrap();
        assert_eq!(a, c.adjoint());
        let a2 = annihilation(3, 1, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let lvl2 = FockLevel::new(3, 2).unwrap();
        assert_eq!(a2[(0, lvl2.index_of(&s(&[1, 2])).unwrap())], C64::new(-1.0, 0.0));
        let unit = [C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)];
        let vac = &annihilation(3, 0, &unit).unwrap() * &creation(3, 0, &unit).unwrap();
        assert!(vac.approx_eq(&ComplexMatrix::identity(1), 1e-15));
    }

    #[test]
    fn car_small() {
        let r = car_check(1, &cfg()).unwrap();
        assert!(r.pass);
        let r = car_check(3, &cfg()).unwrap();
        assert_eq!(r.pairs_checked, 9);
        assert!(r.max_residual <= 1e-12 && r.pass);
    }

    #[test]
    fn full_fock_blocks_match_levels() {
        let n = 4;
        let full = full_fock_creation(n, 3).unwrap();
        let mut offset = 0;
        for m in 0..n {
            let block = creation_basis(n, m, 3).unwrap();
            let next = offset + block.cols();
            assert_eq!(full.submatrix(next, offset, block.rows(), block.cols()), block);
            offset = next;
        }
        let c = full_fock_creation_sparse(n, 3).unwrap();
        assert_eq!(c.adjoint().adjoint(), c);
        assert_eq!(c.compose(&c).to_dense(), ComplexMatrix::zeros(16, 16));
    }

    #[test]
    fn v_and_w() {
        let v = unitary_v(2, 1).unwrap();
        assert_eq!(v, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        for n in 1..=5 {
            for k in 1..=n {
                let w = unitary_w(n, k).unwrap();
                assert!((&w * &w).approx_eq(&ComplexMatrix::identity(w.rows()), 0.0));
                let v = unitary_v(n, k).unwrap();
                assert!((&v.adjoint() * &v).approx_eq(&ComplexMatrix::identity(v.cols()), 0.0));
            }
        }
        let w = unitary_w(3, 2).unwrap();
        let lvl = FockLevel::new(3, 1).unwrap();
        let j = lvl.index_of(&s(&[3])).unwrap();
        assert_eq!(w[(j, j)], C64::new(-1.0, 0.0));
    }

    #[test]
    fn w_sign_is_independent_of_i() {
        for n in 1..=6 {
            for k in 1..=n {
                for right in SubsetIndexer::new(n, n - k).unwrap().iter() {
                    let free = right.complement(n);
                    let first = w_sign(n, &right, free.elements()[0]).unwrap();
                    for i in free.iter() {
                        assert_eq!(w_sign(n, &right, i).unwrap(), first);
                    }
                }
            }
        }
    }

    #[test]
    fn fock_matches_hnk_small() {
        let sampling = FockSampling {
            samples: 6,
            max_level: 3,
        };
        let r = fock_vs_hnk(2, 1, sampling, &cfg()).unwrap();
        assert!(r.pass && r.structural_residual == 0.0);
        let r = fock_vs_hnk(3, 2, sampling, &cfg()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn direct_sum_of_creations_has_unit_norm() {
        let c = creation_direct_sum(4, 2).unwrap();
        assert!((operator_norm(&c, &cfg()).unwrap() - 1.0).abs() < 1e-12);
    }
}
