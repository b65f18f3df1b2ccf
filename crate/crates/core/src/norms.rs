//! Matrix-level norms and witness-based lower bounds for cb distances.
//!
//! Every space here is Hilbertian with an orthonormal basis, so the map
//! `ψ` sending basis to basis is an isometry and `d_cb(A, B)` is bounded
//! below by `‖ψ_p(x)‖ / ‖x‖` and `‖x‖ / ‖ψ_p(x)‖` over any witnesses
//! `x ∈ M_p(A)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::combinat::Subset;
use crate::error::{Error, Result};
use crate::matrix::{block_assemble, operator_norm, ComplexMatrix, ToleranceConfig, C64};
use crate::sampling::{random_vector, rng, Rng};
use crate::spaces::{build_column, build_hnk, build_hnk_intersection, build_phi, build_row, OperatorBasis};

/// Largest `n` accepted for level-norm computations on `H_n^k` and `Phi_n`.
pub const MAX_LEVEL_N: usize = 8;

/// An element of `M_{p,q}(X)` for an `n`-dimensional `X`, stored as the
/// coefficient vectors of its entries in the chosen basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelElement {
    p: usize,
    q: usize,
    n: usize,
    coords: Vec<C64>,
}

impl LevelElement {
    /// `coords[r][s]` is the coefficient vector of entry `(r, s)`.
    pub fn new(coords: Vec<Vec<Vec<C64>>>) -> Result<Self> {
        let p = coords.len();
        let q = coords.first().map_or(0, Vec::len);
        let n = coords.first().and_then(|r| r.first()).map_or(0, Vec::len);
        if p == 0 || q == 0 || n == 0 {
            return Err(Error::EmptyShape { rows: p, cols: q });
        }
        let mut flat = Vec::with_capacity(p * q * n);
        for (r, row) in coords.iter().enumerate() {
            if row.len() != q {
                return Err(Error::Shape {
                    op: "LevelElement::new",
                    detail: format!("row {r} has {} entries, expected {q}", row.len()),
                });
            }
            for (s, v) in row.iter().enumerate() {
                if v.len() != n {
                    return Err(Error::Shape {
                        op: "LevelElement::new",
                        detail: format!("entry ({r}, {s}) has {} coefficients, expected {n}", v.len()),
                    });
                }
                flat.extend_from_slice(v);
            }
        }
        Ok(Self { p, q, n, coords: flat })
    }

    /// A `1 x 1` element.
    pub fn scalar(coeffs: &[C64]) -> Result<Self> {
        Self::new(alloc::vec![alloc::vec![coeffs.to_vec()]])
    }

    /// `(b_1, ..., b_n)` in `M_{1,n}`.
    pub fn basis_row(n: usize) -> Result<Self> {
        Self::new(alloc::vec![(0..n).map(|i| unit(n, i)).collect()])
    }

    /// `(b_1, ..., b_n)^t` in `M_{n,1}`.
    pub fn basis_column(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| alloc::vec![unit(n, i)]).collect())
    }

    /// Independent standard complex Gaussian coefficients.
    pub fn random(rng: &mut Rng, p: usize, q: usize, n: usize) -> Result<Self> {
        Self::new(
            (0..p)
                .map(|_| (0..q).map(|_| random_vector(rng, n)).collect())
                .collect(),
        )
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, s: usize) -> &[C64] {
        let start = (r * self.q + s) * self.n;
        &self.coords[start..start + self.n]
    }

    /// Pads with zero rows and columns up to `p x q`.
    pub fn padded(&self, p: usize, q: usize) -> Result<Self> {
        if p < self.p || q < self.q {
            return Err(Error::InvalidArgument(format!(
                "cannot pad {}x{} to {p}x{q}",
                self.p, self.q
            )));
        }
        let zero = alloc::vec![C64::new(0.0, 0.0); self.n];
        Self::new(
            (0..p)
                .map(|r| {
                    (0..q)
                        .map(|s| {
                            if r < self.p && s < self.q {
                                self.entry(r, s).to_vec()
                            } else {
                                zero.clone()
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

fn unit(n: usize, i: usize) -> Vec<C64> {
    let mut v = alloc::vec![C64::new(0.0, 0.0); n];
    v[i] = C64::new(1.0, 0.0);
    v
}

/// `‖x‖_{M_{p,q}(X)}`: the maximum over components of the norm of the
/// assembled block matrix.
pub fn level_norm(space: &OperatorBasis, x: &LevelElement, cfg: &ToleranceConfig) -> Result<f64> {
    if x.dim() != space.dim() {
        return Err(Error::Shape {
            op: "level_norm",
            detail: format!("element of dimension {} in a space of dimension {}", x.dim(), space.dim()),
        });
    }
    let coeffs_of = |r, s| x.entry(r, s);
    let mut best: f64 = 0.0;
    for c in 0..space.components().len() {
        let mut blocks = Vec::with_capacity(x.p);
        for r in 0..x.p {
            let mut row = Vec::with_capacity(x.q);
            for s in 0..x.q {
                let shape = space.components()[c];
                let mut acc = ComplexMatrix::zeros(shape.rows, shape.cols);
                for (el, z) in space.elements().iter().zip(coeffs_of(r, s)) {
                    if *z != C64::new(0.0, 0.0) {
                        acc += &el[c].scale(*z);
                    }
                }
                row.push(acc);
            }
            blocks.push(row);
        }
        best = best.max(operator_norm(&block_assemble(&blocks)?, cfg)?);
    }
    Ok(best)
}

/// Witness set used by [`basis_map_bounds`]: one basis element, the basis
/// row, the basis column and `samples` random square elements spread over
/// levels `1..=levels`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessConfig {
    pub levels: usize,
    pub samples: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self { levels: 4, samples: 50 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CbEstimate {
    pub forward_lower: f64,
    pub inverse_lower: f64,
    pub product_lower: f64,
    pub closed_form: Option<f64>,
    pub witness_description: String,
}

#[derive(Debug, Clone)]
struct Witness {
    label: String,
    level: usize,
    x: LevelElement,
}

/// Samples at level `p` are drawn from their own stream, so the level-`p`
/// witnesses depend only on the seed and on how many of them are requested.
fn random_witnesses(n: usize, witness: WitnessConfig, seed: u64) -> Result<Vec<Witness>> {
    let levels = witness.levels.max(1);
    let mut out = Vec::with_capacity(witness.samples);
    for p in 1..=levels {
        let count = witness.samples / levels + usize::from(p <= witness.samples % levels);
        let mut r = rng(seed ^ (p as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for j in 0..count {
            out.push(Witness {
                label: format!("random level {p} #{j}"),
                level: p,
                x: LevelElement::random(&mut r, p, p, n)?,
            });
        }
    }
    Ok(out)
}

fn witness_set(n: usize, witness: WitnessConfig, seed: u64) -> Result<Vec<Witness>> {
    let mut set = alloc::vec![
        Witness {
            label: "basis element".into(),
            level: 1,
            x: LevelElement::scalar(&unit(n, 0))?,
        },
        Witness {
            label: "basis row".into(),
            level: n,
            x: LevelElement::basis_row(n)?,
        },
        Witness {
            label: "basis column".into(),
            level: n,
            x: LevelElement::basis_column(n)?,
        },
    ];
    set.extend(random_witnesses(n, witness, seed)?);
    Ok(set)
}

struct Ratios {
    forward: Vec<f64>,
    inverse: Vec<f64>,
}

fn ratios(a: &OperatorBasis, b: &OperatorBasis, set: &[Witness], cfg: &ToleranceConfig) -> Result<Ratios> {
    let mut forward = Vec::with_capacity(set.len());
    let mut inverse = Vec::with_capacity(set.len());
    for w in set {
        let na = level_norm(a, &w.x, cfg)?;
        let nb = level_norm(b, &w.x, cfg)?;
        if na == 0.0 || nb == 0.0 {
            return Err(Error::Degenerate(format!("witness '{}' has zero norm", w.label)));
        }
        forward.push(nb / na);
        inverse.push(na / nb);
    }
    Ok(Ratios { forward, inverse })
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold(0, |best, (i, x)| if *x > v[best] { i } else { best })
}

fn check_same_dim(a: &OperatorBasis, b: &OperatorBasis) -> Result<usize> {
    if a.dim() != b.dim() {
        return Err(Error::Shape {
            op: "basis_map_bounds",
            detail: format!("{} has dimension {}, {} has {}", a.name(), a.dim(), b.name(), b.dim()),
        });
    }
    Ok(a.dim())
}

/// Lower bounds on `‖ψ‖_cb`, `‖ψ^{-1}‖_cb` for the basis-to-basis map
/// `ψ : A -> B`.
pub fn basis_map_bounds(
    a: &OperatorBasis,
    b: &OperatorBasis,
    witness: WitnessConfig,
    cfg: &ToleranceConfig,
) -> Result<CbEstimate> {
    let n = check_same_dim(a, b)?;
    let set = witness_set(n, witness, cfg.seed)?;
    let r = ratios(a, b, &set, cfg)?;
    let (f, i) = (argmax(&r.forward), argmax(&r.inverse));
    Ok(CbEstimate {
        forward_lower: r.forward[f],
        inverse_lower: r.inverse[i],
        product_lower: r.forward[f] * r.inverse[i],
        closed_form: None,
        witness_description: format!(
            "basis element, basis row, basis column, {} random at levels 1..={}; forward attained by {}, inverse by {}",
            witness.samples,
            witness.levels.max(1),
            set[f].label,
            set[i].label
        ),
    })
}

/// Running maxima of the forward ratio over random witnesses of level at
/// most `p`, for `p = 1..=levels`.
pub fn forward_lower_by_level(
    a: &OperatorBasis,
    b: &OperatorBasis,
    witness: WitnessConfig,
    cfg: &ToleranceConfig,
) -> Result<Vec<f64>> {
    let n = check_same_dim(a, b)?;
    let set = random_witnesses(n, witness, cfg.seed)?;
    let r = ratios(a, b, &set, cfg)?;
    let mut out = Vec::with_capacity(witness.levels);
    let mut best: f64 = 0.0;
    for p in 1..=witness.levels.max(1) {
        for (w, v) in set.iter().zip(&r.forward) {
            if w.level == p {
                best = best.max(*v);
            }
        }
        out.push(best);
    }
    Ok(out)
}

/// The named spaces of the distance tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    Column,
    Row,
    Hnk(usize),
    Phi,
    /// `∩_{k ∈ K} H_n^k`.
    Intersection(Vec<usize>),
}

impl SpaceKind {
    /// `∩_{j=1}^{m+1} H_n^j`, which has `i_R = m + 1` and `i_L = n`.
    pub fn right_type(m: usize) -> Self {
        SpaceKind::Intersection((1..=m + 1).collect())
    }

    /// `∩_{j=n-k}^{n} H_n^j`, which has `i_R = n` and `i_L = k + 1`.
    pub fn left_type(n: usize, k: usize) -> Self {
        SpaceKind::Intersection((n.saturating_sub(k)..=n).collect())
    }

    /// The indices `k` of the `H_n^k` this space is completely isometric
    /// to an intersection of.
    pub fn components(&self, n: usize) -> Result<Vec<usize>> {
        let ks = match self {
            SpaceKind::Column => alloc::vec![1],
            SpaceKind::Row => alloc::vec![n],
            SpaceKind::Hnk(k) => alloc::vec![*k],
            SpaceKind::Phi => (1..=n).collect(),
            SpaceKind::Intersection(ks) => {
                let mut ks = ks.clone();
                ks.sort_unstable();
                ks.dedup();
                ks
            }
        };
        if ks.is_empty() || ks.iter().any(|&k| k == 0 || k > n) {
            return Err(Error::InvalidArgument(format!("{} is not defined for n = {n}", self.label(n))));
        }
        Ok(ks)
    }

    pub fn label(&self, n: usize) -> String {
        match self {
            SpaceKind::Column => format!("C_{n}"),
            SpaceKind::Row => format!("R_{n}"),
            SpaceKind::Hnk(k) => format!("H_{n}^{k}"),
            SpaceKind::Phi => format!("Phi_{n}"),
            SpaceKind::Intersection(ks) => {
                let parts: Vec<String> = ks.iter().map(|k| format!("H_{n}^{k}")).collect();
                parts.join(" ∩ ")
            }
        }
    }

    pub fn build(&self, n: usize) -> Result<OperatorBasis> {
        let space = match self {
            SpaceKind::Column => build_column(n)?,
            SpaceKind::Row => build_row(n)?,
            SpaceKind::Hnk(k) => build_hnk(n, *k)?,
            SpaceKind::Phi => build_phi(n)?,
            SpaceKind::Intersection(_) => build_hnk_intersection(n, &self.components(n)?)?,
        };
        Ok(space.renamed(self.label(n)))
    }

    /// `‖(b_1, ..., b_n)‖_{M_{1,n}}`.
    pub fn row_witness_norm(&self, n: usize) -> Result<f64> {
        let ks = self.components(n)?;
        Ok(Float::sqrt(*ks.last().expect("nonempty") as f64))
    }

    /// `‖(b_1, ..., b_n)^t‖_{M_{n,1}}`.
    pub fn column_witness_norm(&self, n: usize) -> Result<f64> {
        let ks = self.components(n)?;
        Ok(Float::sqrt((n - ks[0] + 1) as f64))
    }
}

/// `√((m+1) n / (n-m))`, the witness product for `(C_n, H_n^{m+1})`.
pub fn column_vs_hnk_closed_form(n: usize, m: usize) -> Result<f64> {
    if m >= n {
        return Err(Error::InvalidArgument(format!("m = {m} requires n > m, got n = {n}")));
    }
    Ok(Float::sqrt(((m + 1) * n) as f64 / (n - m) as f64))
}

/// Closed-form `d_cb` for the pairs where it is known: equal spaces, and
/// `H_n^1` or `H_n^n` (i.e. `C_n`, `R_n`) against a single `H_n^k`.
/// The second family follows from the first by transposition, which maps
/// `H_n^k` onto `H_n^{n-k+1}` up to a global sign.
pub fn closed_form_distance(a: &SpaceKind, b: &SpaceKind, n: usize) -> Result<Option<f64>> {
    let (ka, kb) = (a.components(n)?, b.components(n)?);
    if ka == kb {
        return Ok(Some(1.0));
    }
    if ka.len() != 1 || kb.len() != 1 {
        return Ok(None);
    }
    let (lo, hi) = (ka[0].min(kb[0]), ka[0].max(kb[0]));
    if lo == 1 {
        return column_vs_hnk_closed_form(n, hi - 1).map(Some);
    }
    if hi == n {
        return column_vs_hnk_closed_form(n, n - lo).map(Some);
    }
    Ok(None)
}

/// Builds both spaces and attaches the closed form when one is known.
pub fn estimate_pair(
    a: &SpaceKind,
    b: &SpaceKind,
    n: usize,
    witness: WitnessConfig,
    cfg: &ToleranceConfig,
) -> Result<CbEstimate> {
    if n > MAX_LEVEL_N {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds the cap {MAX_LEVEL_N}")));
    }
    let mut est = basis_map_bounds(&a.build(n)?, &b.build(n)?, witness, cfg)?;
    est.closed_form = closed_form_distance(a, b, n)?;
    Ok(est)
}

/// Whether the pair belongs to a family whose cb distance diverges as
/// `n -> ∞`. `H_n^k` counts as right-type when `k` is in the lower half
/// (so `C_n = H_n^1` is right-type, `R_n = H_n^n` left-type); `Phi_n` is
/// at infinite distance from every other family.
pub fn diverging_pair(a: &SpaceKind, b: &SpaceKind, n: usize) -> Result<bool> {
    let side = |k: &SpaceKind| -> Result<Option<bool>> {
        if *k == SpaceKind::Phi {
            return Ok(None);
        }
        let ks = k.components(n)?;
        let right = 2 * ks[ks.len() - 1] <= n + 1;
        let left = 2 * ks[0] > n + 1;
        Ok(if right {
            Some(true)
        } else if left {
            Some(false)
        } else {
            None
        })
    };
    Ok(match (side(a)?, side(b)?) {
        _ if a == b => false,
        (Some(x), Some(y)) => x != y,
        _ => *a == SpaceKind::Phi || *b == SpaceKind::Phi,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub a: SpaceKind,
    pub b: SpaceKind,
    pub estimate: CbEstimate,
    pub diverging: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    pub n: usize,
    pub spaces: Vec<SpaceKind>,
    pub entries: Vec<TableEntry>,
}

/// All unordered pairs among `C_n`, `R_n`, `H_n^1..H_n^n`, `Phi_n`.
pub fn distance_table(n: usize, witness: WitnessConfig, cfg: &ToleranceConfig) -> Result<DistanceTable> {
    if n == 0 || n > MAX_LEVEL_N {
        return Err(Error::InvalidArgument(format!("n = {n} outside 1..={MAX_LEVEL_N}")));
    }
    let mut spaces = alloc::vec![SpaceKind::Column, SpaceKind::Row];
    spaces.extend((1..=n).map(SpaceKind::Hnk));
    spaces.push(SpaceKind::Phi);
    let built = spaces.iter().map(|s| s.build(n)).collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::new();
    for i in 0..spaces.len() {
        for j in i + 1..spaces.len() {
            let mut estimate = basis_map_bounds(&built[i], &built[j], witness, cfg)?;
            estimate.closed_form = closed_form_distance(&spaces[i], &spaces[j], n)?;
            entries.push(TableEntry {
                a: spaces[i].clone(),
                b: spaces[j].clone(),
                estimate,
                diverging: diverging_pair(&spaces[i], &spaces[j], n)?,
            });
        }
    }
    Ok(DistanceTable { n, spaces, entries })
}

/// Helper for callers holding subsets rather than index lists.
pub fn intersection_kind(ks: &Subset) -> SpaceKind {
    SpaceKind::Intersection(ks.elements().to_vec())
}
