//! Subsets of `{1..n}` in lexicographic order and the permutation
//! signatures used by every signed basis construction.
//!
//! All sign arithmetic is exact integer arithmetic.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Mul, Neg};

use crate::error::{Error, Result};

/// A sign `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A finite set of positive integers kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(Vec<usize>);

impl Subset {
    /// Builds a set from elements in any order. Zero and repeated entries
    /// are rejected.
    pub fn new(elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = elements.into_iter().collect();
        v.sort_unstable();
        if v.first() == Some(&0) {
            return Err(Error::InvalidArgument("set elements must be positive".into()));
        }
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated element {}", w[0])));
        }
        Ok(Subset(v))
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    /// `{lo, lo+1, ..., hi}`, empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        Subset((lo.max(1)..=hi).collect())
    }

    pub fn full(n: usize) -> Self {
        Self::range(1, n)
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.0.iter().all(|x| !other.contains(*x))
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset(self.0.iter().copied().filter(|x| other.contains(*x)).collect())
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        Subset(self.0.iter().copied().filter(|x| !other.contains(*x)).collect())
    }

    /// `{1..n} - self`.
    pub fn complement(&self, n: usize) -> Subset {
        Subset((1..=n).filter(|x| !self.contains(*x)).collect())
    }

    pub fn with(&self, i: usize) -> Subset {
        self.union(&Subset(alloc::vec![i]))
    }

    pub fn without(&self, i: usize) -> Subset {
        Subset(self.0.iter().copied().filter(|&x| x != i).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Bitmask with bit `i-1` set for each element `i`.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | (1u64 << (i - 1)))
    }

    pub fn from_mask(mask: u64) -> Subset {
        Subset((1..=64).filter(|i| mask & (1u64 << (i - 1)) != 0).collect())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (t, x) in self.0.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc as u64
}

/// Sign of the permutation sorting `sequence` ascending.
pub fn perm_sign(sequence: &[usize]) -> Result<Sign> {
    let mut inversions = 0usize;
    for (a, x) in sequence.iter().enumerate() {
        for y in &sequence[a + 1..] {
            if x == y {
                return Err(Error::InvalidArgument(format!("repeated entry {x} in permutation")));
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    Ok(Sign::from_parity(inversions % 2 == 1))
}

/// `epsilon(I, i, J)`: sign of the permutation taking the concatenation
/// `(I ascending, i, J ascending)` to `(1, ..., n)`.
pub fn epsilon_one(left: &Subset, i: usize, right: &Subset, n: usize) -> Result<Sign> {
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={n}")));
    }
    if let Some(x) = left.iter().chain(right.iter()).find(|&x| x > n) {
        return Err(Error::InvalidArgument(format!("element {x} outside 1..={n}")));
    }
    if left.contains(i) || right.contains(i) {
        return Err(Error::InvalidArgument(format!(
            "not disjoint: {i} belongs to I={left} or J={right}"
        )));
    }
    if !left.is_disjoint(right) {
        return Err(Error::InvalidArgument(format!(
            "not disjoint: I={left} and J={right} intersect"
        )));
    }
    if left.len() + right.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "I={left}, {i}, J={right} do not cover 1..={n}"
        )));
    }
    let seq: Vec<usize> = left.iter().chain(core::iter::once(i)).chain(right.iter()).collect();
    perm_sign(&seq)
}

/// Sign `(-1)^{|{j in J : j < i}|}` of moving `e_i` from the front of a
/// wedge product into sorted position.
pub fn insertion_sign(i: usize, set: &Subset) -> Result<Sign> {
    if set.contains(i) {
        return Err(Error::InvalidArgument(format!("{i} already belongs to {set}")));
    }
    let below = set.iter().filter(|&j| j < i).count();
    Ok(Sign::from_parity(below % 2 == 1))
}

/// Sign of the shuffle `(A ascending, B ascending)` for disjoint `A`, `B`.
pub fn shuffle_sign(a: &Subset, b: &Subset) -> Result<Sign> {
    let seq: Vec<usize> = a.iter().chain(b.iter()).collect();
    perm_sign(&seq)
}

/// All `k`-subsets of `{1..n}` in lexicographic order.
pub fn subsets_lex(n: usize, k: usize) -> Result<Vec<Subset>> {
    let idx = SubsetIndexer::new(n, k)?;
    Ok(idx.iter().collect())
}

/// Bijection between the `k`-subsets of `{1..n}` and `0..C(n,k)`, in
/// lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetIndexer {
    n: usize,
    k: usize,
}

impl SubsetIndexer {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgument(format!("subset size {k} exceeds {n}")));
        }
        if n > 63 {
            return Err(Error::InvalidArgument(format!("ground set size {n} too large")));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        binomial(self.n, self.k) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self, set: &Subset) -> Result<usize> {
        if set.len() != self.k {
            return Err(Error::InvalidArgument(format!(
                "{set} has size {}, expected {}",
                set.len(),
                self.k
            )));
        }
        if set.max().is_some_and(|m| m > self.n) {
            return Err(Error::InvalidArgument(format!("{set} not inside 1..={}", self.n)));
        }
        let mut r = 0u64;
        let mut prev = 0;
        for (t, a) in set.iter().enumerate() {
            for v in (prev + 1)..a {
                r += binomial(self.n - v, self.k - t - 1);
            }
            prev = a;
        }
        Ok(r as usize)
    }

    pub fn unrank(&self, rank: usize) -> Result<Subset> {
        if rank >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} out of range for C({}, {})",
                self.n, self.k
            )));
        }
        let mut r = rank as u64;
        let mut out = Vec::with_capacity(self.k);
        let mut v = 1;
        for t in 0..self.k {
            loop {
                let count = binomial(self.n - v, self.k - t - 1);
                if r < count {
                    out.push(v);
                    v += 1;
                    break;
                }
                r -= count;
                v += 1;
            }
        }
        Ok(Subset(out))
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..self.len()).map(move |r| self.unrank(r).expect("rank in range"))
    }
}
