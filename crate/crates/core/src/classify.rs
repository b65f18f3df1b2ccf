//! Classification of finite families of pairwise collinear partial
//! isometries: the invariants `i_R`, `i_L`, the `H_n^k` components of the
//! span, and the row/column dichotomy for ternary-closed spans.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::combinat::Subset;
use crate::error::{Error, Result};
use crate::matrix::{ToleranceConfig, C64};
use crate::triple::{are_collinear, family_word, TripleElement};

/// Families larger than this are rejected: the invariants enumerate all
/// subsets.
pub const MAX_FAMILY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub n: usize,
    pub i_r: usize,
    pub i_l: usize,
    pub components: Vec<usize>,
    pub verdict: String,
    /// Product norms that were neither clearly zero nor of order one.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TroKind {
    Row,
    Column,
    NotTernaryClosed,
}

impl TroKind {
    pub fn label(self) -> &'static str {
        match self {
            TroKind::Row => "R",
            TroKind::Column => "C",
            TroKind::NotTernaryClosed => "not_ternary_closed",
        }
    }
}

/// Nonzero-ness of a product norm, noting values in the gray zone.
struct Threshold<'a> {
    tol: f64,
    warnings: &'a mut Vec<String>,
}

impl Threshold<'_> {
    fn nonzero(&mut self, norm: f64, what: impl FnOnce() -> String) -> bool {
        if norm > self.tol * 1e-3 && norm < 1e-3 {
            self.warnings.push(format!("{} has norm {norm:e}", what()));
        }
        norm > self.tol
    }
}

fn validate(family: &[TripleElement], cfg: &ToleranceConfig) -> Result<()> {
    if family.is_empty() || family.len() > MAX_FAMILY {
        return Err(Error::InvalidArgument(format!(
            "family size {} outside 1..={MAX_FAMILY}",
            family.len()
        )));
    }
    for (i, u) in family.iter().enumerate() {
        if u.shapes() != family[0].shapes() {
            return Err(Error::Shape {
                op: "classify",
                detail: format!("element {} has block shapes {:?}, expected {:?}", i + 1, u.shapes(), family[0].shapes()),
            });
        }
        let residual = u.partial_isometry_residual();
        if residual > cfg.structural_tol {
            return Err(Error::Precondition(format!(
                "element {} is not a partial isometry (residual {residual:e})",
                i + 1
            )));
        }
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !are_collinear(&family[i], &family[j], cfg)? {
                return Err(Error::Precondition(format!(
                    "elements {} and {} are not collinear",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn ordered_product(family: &[TripleElement], set: &Subset, left: bool) -> Result<Option<TripleElement>> {
    let mut acc: Option<TripleElement> = None;
    for j in set.iter() {
        let u = &family[j - 1];
        let p = if left { u.try_mul(&u.adjoint())? } else { u.adjoint().try_mul(u)? };
        acc = Some(match acc {
            Some(a) => a.try_mul(&p)?,
            None => p,
        });
    }
    Ok(acc)
}

fn largest_nonvanishing(family: &[TripleElement], left: bool, th: &mut Threshold<'_>) -> Result<usize> {
    let n = family.len();
    let mut best = 0;
    for mask in 1u64..1 << n {
        let set = Subset::from_mask(mask);
        if set.len() <= best {
            continue;
        }
        let p = ordered_product(family, &set, left)?.expect("nonempty set");
        let tag = if left { "uu*" } else { "u*u" };
        if th.nonzero(p.max_abs(), || format!("({tag})_{set}")) {
            best = set.len();
        }
    }
    Ok(best)
}

fn invariants_with(family: &[TripleElement], th: &mut Threshold<'_>) -> Result<(usize, usize)> {
    Ok((
        largest_nonvanishing(family, true, th)?,
        largest_nonvanishing(family, false, th)?,
    ))
}

/// `(i_R, i_L)`: the largest sizes of index sets with a nonvanishing
/// ordered product of the `u_j u_j*` (respectively `u_j* u_j`).
pub fn invariants(family: &[TripleElement], cfg: &ToleranceConfig) -> Result<(usize, usize)> {
    validate(family, cfg)?;
    let mut warnings = Vec::new();
    invariants_with(family, &mut Threshold { tol: cfg.structural_tol, warnings: &mut warnings })
}

fn components_with(family: &[TripleElement], th: &mut Threshold<'_>) -> Result<Vec<usize>> {
    let n = family.len();
    let mut out = Vec::new();
    for k in 1..=n {
        let left = Subset::range(1, k - 1);
        let right = Subset::range(k + 1, n);
        let w = family_word(family, &left, k, &right)?;
        if th.nonzero(w.max_abs(), || format!("component test for k = {k}")) {
            out.push(k);
        }
    }
    Ok(out)
}

/// The `k` with `(uu*)_{1..k-1} u_k (u*u)_{k+1..n} ≠ 0`.
pub fn detect_components(family: &[TripleElement], cfg: &ToleranceConfig) -> Result<Vec<usize>> {
    validate(family, cfg)?;
    let mut warnings = Vec::new();
    components_with(family, &mut Threshold { tol: cfg.structural_tol, warnings: &mut warnings })
}

fn verdict(n: usize, components: &[usize]) -> String {
    if components == [1] {
        format!("C_{n}")
    } else if components == [n] {
        format!("R_{n}")
    } else if components.len() == n {
        format!("Phi_{n}")
    } else {
        let parts: Vec<String> = components.iter().map(|k| format!("H_{n}^{k}")).collect();
        parts.join(" ∩ ")
    }
}

pub fn classify(family: &[TripleElement], cfg: &ToleranceConfig) -> Result<ClassificationReport> {
    validate(family, cfg)?;
    let n = family.len();
    let mut warnings = Vec::new();
    let mut th = Threshold {
        tol: cfg.structural_tol,
        warnings: &mut warnings,
    };
    let (i_r, i_l) = invariants_with(family, &mut th)?;
    let components = components_with(family, &mut th)?;
    let (lo, hi) = match (components.first(), components.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::Degenerate("no component detected".into())),
    };
    if i_r != hi || i_l != n - lo + 1 {
        return Err(Error::Degenerate(format!(
            "invariants i_R = {i_r}, i_L = {i_l} disagree with components {components:?}"
        )));
    }
    Ok(ClassificationReport {
        n,
        i_r,
        i_l,
        verdict: verdict(n, &components),
        components,
        warnings,
    })
}

/// Row/column dichotomy: every `u_i u_i* u_j` (`i ≠ j`) must vanish
/// (column) or be a unimodular multiple of `u_j` (row). A single element
/// is reported as a column.
pub fn tro_dichotomy(family: &[TripleElement], cfg: &ToleranceConfig) -> Result<TroKind> {
    validate(family, cfg)?;
    let tol = cfg.structural_tol;
    let (mut vanish, mut multiple) = (true, true);
    for (i, ui) in family.iter().enumerate() {
        let proj = ui.try_mul(&ui.adjoint())?;
        for (j, uj) in family.iter().enumerate() {
            if i == j {
                continue;
            }
            let p = proj.try_mul(uj)?;
            if p.max_abs() > tol {
                vanish = false;
            }
            let lambda: C64 = uj.inner(&p) / uj.inner(uj);
            let unimodular = (lambda.norm() - 1.0).abs() <= tol;
            if !unimodular || p.try_sub(&uj.scale(lambda))?.max_abs() > tol {
                multiple = false;
            }
        }
    }
    Ok(if vanish {
        TroKind::Column
    } else if multiple {
        TroKind::Row
    } else {
        TroKind::NotTernaryClosed
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::spaces::{build_column, build_hnk, build_hnk_intersection, build_phi, build_row, OperatorBasis};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn family(space: &OperatorBasis) -> Vec<TripleElement> {
        (0..space.dim()).map(|i| TripleElement::basis_element(space, i)).collect()
    }

    #[test]
    fn invariant_examples() {
        let n = 4;
        assert_eq!(invariants(&family(&build_column(n).unwrap()), &cfg()).unwrap(), (1, n));
        assert_eq!(invariants(&family(&build_phi(n).unwrap()), &cfg()).unwrap(), (n, n));
        for k in 1..=n {
            assert_eq!(invariants(&family(&build_hnk(n, k).unwrap()), &cfg()).unwrap(), (k, n - k + 1));
        }
    }

    #[test]
    fn components_and_verdicts() {
        let r = classify(&family(&build_hnk_intersection(5, &[1, 3]).unwrap()), &cfg()).unwrap();
        assert_eq!(r.components, [1, 3]);
        assert_eq!(r.verdict, "H_5^1 ∩ H_5^3");
        assert_eq!(classify(&family(&build_phi(4).unwrap()), &cfg()).unwrap().verdict, "Phi_4");
        assert_eq!(classify(&family(&build_column(3).unwrap()), &cfg()).unwrap().verdict, "C_3");
        assert_eq!(classify(&family(&build_row(3).unwrap()), &cfg()).unwrap().verdict, "R_3");
        assert_eq!(classify(&family(&build_hnk(5, 3).unwrap()), &cfg()).unwrap().verdict, "H_5^3");
    }

    #[test]
    fn rejects_non_collinear() {
        let a: TripleElement = ComplexMatrix::unit(2, 2, 0, 0).into();
        let b: TripleElement = ComplexMatrix::unit(2, 2, 1, 1).into();
        let err = classify(&[a.clone(), b], &cfg()).unwrap_err();
        assert!(format!("{err}").contains("1 and 2"));
        let half = a.scale_real(0.5);
        assert!(classify(&[half], &cfg()).is_err());
    }

    #[test]
    fn dichotomy() {
        assert_eq!(tro_dichotomy(&family(&build_column(4).unwrap()), &cfg()).unwrap(), TroKind::Column);
        assert_eq!(tro_dichotomy(&family(&build_row(4).unwrap()), &cfg()).unwrap(), TroKind::Row);
        assert_eq!(
            tro_dichotomy(&family(&build_hnk(4, 2).unwrap()), &cfg()).unwrap(),
            TroKind::NotTernaryClosed
        );
    }
}
