//! Linear spans of flattened matrix tuples under the Hilbert-Schmidt inner
//! product.

use alloc::vec::Vec;

use num_traits::Float;

use crate::matrix::C64;

/// An orthonormal basis of the span of some vectors.
#[derive(Debug, Clone, Default)]
pub struct Span {
    basis: Vec<Vec<C64>>,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    Float::sqrt(a.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

impl Span {
    /// Orthonormalizes `vectors`, dropping those whose remainder falls below
    /// `tol` times the largest input norm.
    pub fn new<'a>(vectors: impl IntoIterator<Item = &'a [C64]>, tol: f64) -> Self {
        let vectors: Vec<&[C64]> = vectors.into_iter().collect();
        let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
        let mut span = Span::default();
        if scale == 0.0 {
            return span;
        }
        for v in vectors {
            let mut r = v.to_vec();
            for _ in 0..2 {
                for q in &span.basis {
                    let c = dot(q, &r);
                    for (x, y) in r.iter_mut().zip(q) {
                        *x -= c * y;
                    }
                }
            }
            let nr = norm(&r);
            if nr > tol * scale {
                r.iter_mut().for_each(|z| *z /= nr);
                span.basis.push(r);
            }
        }
        span
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let mut out = alloc::vec![C64::new(0.0, 0.0); v.len()];
        for q in &self.basis {
            let c = dot(q, v);
            for (o, y) in out.iter_mut().zip(q) {
                *o += c * y;
            }
        }
        out
    }

    /// `‖v - proj(v)‖`.
    pub fn residual(&self, v: &[C64]) -> f64 {
        let p = self.project(v);
        Float::sqrt(v.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>())
    }

    /// True when both spans contain each other up to `tol`.
    pub fn same_as(&self, other: &Span, tol: f64) -> bool {
        self.rank() == other.rank()
            && self.basis.iter().all(|q| other.residual(q) <= tol)
            && other.basis.iter().all(|q| self.residual(q) <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rank_and_projection() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let a = vec![one, zero, zero];
        let b = vec![one, one, zero];
        let c = vec![zero, one, zero];
        let s = Span::new([a.as_slice(), b.as_slice(), c.as_slice()], 1e-12);
        assert_eq!(s.rank(), 2);
        assert!(s.residual(&[C64::new(2.0, 1.0), one, zero]) < 1e-14);
        assert!((s.residual(&[zero, zero, one]) - 1.0).abs() < 1e-14);
    }
}
