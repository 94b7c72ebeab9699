//! Dense Cartesian storage for second- and fourth-rank tensors in three
//! dimensions.
//!
//! Indices are zero-based everywhere in the API. A `Tensor2` stores its
//! components row-major (`c[i][j]`, first basis vector first) and a
//! `Tensor4` stores `c[i][j][k][l]` with slots in left-to-right dyad order.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::Scalar;

/// Spatial dimension. Everything in this crate is three-dimensional.
pub const DIM: usize = 3;

/// Second-rank tensor given by its Cartesian components.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Tensor2<T> {
    c: [[T; DIM]; DIM],
}

/// Fourth-rank tensor given by its Cartesian components.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Tensor4<T> {
    c: [[[[T; DIM]; DIM]; DIM]; DIM],
}

#[inline]
pub(crate) fn delta<T: Scalar>(i: usize, j: usize) -> T {
    if i == j {
        T::one()
    } else {
        T::zero()
    }
}

impl<T: Scalar> Tensor2<T> {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut c = [[T::zero(); DIM]; DIM];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        }
        Tensor2 { c }
    }

    pub fn from_rows(rows: [[T; DIM]; DIM]) -> Self {
        Tensor2 { c: rows }
    }

    pub fn rows(&self) -> [[T; DIM]; DIM] {
        self.c
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    /// Unit tensor `I` (the metric `g` in Cartesian components).
    pub fn identity() -> Self {
        Self::from_fn(delta)
    }

    pub fn diag(d: [T; DIM]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { T::zero() })
    }

    /// Single 1 at `(p, q)`, zeros elsewhere.
    pub fn unit(p: usize, q: usize) -> Self {
        Self::from_fn(|i, j| if (i, j) == (p, q) { T::one() } else { T::zero() })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.c[j][i])
    }

    pub fn map(&self, mut f: impl FnMut(T) -> T) -> Self {
        Self::from_fn(|i, j| f(self.c[i][j]))
    }

    /// First principal invariant, `I··A`.
    pub fn trace(&self) -> T {
        self.c[0][0] + self.c[1][1] + self.c[2][2]
    }

    pub fn det(&self) -> T {
        let c = &self.c;
        c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
            + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0])
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> T {
        self.iter().fold(T::zero(), |m, v| m.max_of(v.abs()))
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.c.iter().flat_map(|r| r.iter().copied())
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }
}

impl<T: Scalar> Tensor4<T> {
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut c = [[[[T::zero(); DIM]; DIM]; DIM]; DIM];
        for (i, a) in c.iter_mut().enumerate() {
            for (j, b) in a.iter_mut().enumerate() {
                for (k, r) in b.iter_mut().enumerate() {
                    for (l, v) in r.iter_mut().enumerate() {
                        *v = f(i, j, k, l);
                    }
                }
            }
        }
        Tensor4 { c }
    }

    pub fn from_array(c: [[[[T; DIM]; DIM]; DIM]; DIM]) -> Self {
        Tensor4 { c }
    }

    pub fn to_array(&self) -> [[[[T; DIM]; DIM]; DIM]; DIM] {
        self.c
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _, _, _| T::zero())
    }

    /// Single 1 at `(p, q, r, s)`, zeros elsewhere.
    pub fn unit(p: usize, q: usize, r: usize, s: usize) -> Self {
        Self::from_fn(|i, j, k, l| {
            if (i, j, k, l) == (p, q, r, s) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    pub fn map(&self, mut f: impl FnMut(T) -> T) -> Self {
        Self::from_fn(|i, j, k, l| f(self.c[i][j][k][l]))
    }

    pub fn max_abs(&self) -> T {
        self.iter().fold(T::zero(), |m, v| m.max_of(v.abs()))
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.c
            .iter()
            .flat_map(|a| a.iter().flat_map(|b| b.iter().flat_map(|r| r.iter().copied())))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }
}

impl<T> Index<[usize; 2]> for Tensor2<T> {
    type Output = T;

    #[inline]
    fn index(&self, [i, j]: [usize; 2]) -> &T {
        &self.c[i][j]
    }
}

impl<T> Index<[usize; 4]> for Tensor4<T> {
    type Output = T;

    #[inline]
    fn index(&self, [i, j, k, l]: [usize; 4]) -> &T {
        &self.c[i][j][k][l]
    }
}

macro_rules! impl_linear {
    ($ty:ident, $($idx:ident),+) => {
        impl<T: Scalar> Add for $ty<T> {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self::from_fn(|$($idx),+| self[[$($idx),+]] + rhs[[$($idx),+]])
            }
        }

        impl<T: Scalar> AddAssign for $ty<T> {
            fn add_assign(&mut self, rhs: Self) {
                *self = *self + rhs;
            }
        }

        impl<T: Scalar> Sub for $ty<T> {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self::from_fn(|$($idx),+| self[[$($idx),+]] - rhs[[$($idx),+]])
            }
        }

        impl<T: Scalar> Neg for $ty<T> {
            type Output = Self;
            fn neg(self) -> Self {
                self.map(|v| -v)
            }
        }

        impl<T: Scalar> Mul<T> for $ty<T> {
            type Output = Self;
            fn mul(self, s: T) -> Self {
                self.map(|v| v * s)
            }
        }

        impl<T: Scalar> Default for $ty<T> {
            fn default() -> Self {
                Self::zero()
            }
        }
    };
}

impl_linear!(Tensor2, i, j);
impl_linear!(Tensor4, i, j, k, l);

/// A tensor of rank 0, 2 or 4, for operations that dispatch on rank at
/// runtime (the CLI, basis checks, identity suites).
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum AnyTensor<T> {
    Scalar(T),
    Two(Tensor2<T>),
    Four(Tensor4<T>),
}

impl<T: Scalar> AnyTensor<T> {
    pub fn rank(&self) -> usize {
        match self {
            AnyTensor::Scalar(_) => 0,
            AnyTensor::Two(_) => 2,
            AnyTensor::Four(_) => 4,
        }
    }

    pub fn max_abs(&self) -> T {
        match self {
            AnyTensor::Scalar(v) => v.abs(),
            AnyTensor::Two(a) => a.max_abs(),
            AnyTensor::Four(h) => h.max_abs(),
        }
    }

    /// Largest componentwise difference; `None` when the ranks differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        match (self, other) {
            (AnyTensor::Scalar(a), AnyTensor::Scalar(b)) => Some((*a - *b).abs()),
            (AnyTensor::Two(a), AnyTensor::Two(b)) => Some(a.max_abs_diff(b)),
            (AnyTensor::Four(a), AnyTensor::Four(b)) => Some(a.max_abs_diff(b)),
            _ => None,
        }
    }
}

impl<T> From<Tensor2<T>> for AnyTensor<T> {
    fn from(a: Tensor2<T>) -> Self {
        AnyTensor::Two(a)
    }
}

impl<T> From<Tensor4<T>> for AnyTensor<T> {
    fn from(h: Tensor4<T>) -> Self {
        AnyTensor::Four(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_units() {
        let i = Tensor2::<f64>::identity();
        assert_eq!(i.trace(), 3.0);
        assert_eq!(i.det(), 1.0);
        let e = Tensor2::<f64>::unit(0, 1);
        assert_eq!(e[[0, 1]], 1.0);
        assert_eq!(e.transpose(), Tensor2::unit(1, 0));
        assert_eq!(Tensor4::<f64>::unit(0, 1, 2, 0)[[0, 1, 2, 0]], 1.0);
        assert_eq!(Tensor4::<f64>::unit(0, 1, 2, 0).iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn linear_ops() {
        let d = Tensor2::diag([1.0, 2.0, 3.0]);
        let s = d + d * 2.0 - d;
        assert_eq!(s, d * 2.0);
        assert_eq!((-d).max_abs(), 3.0);
        assert_eq!(d.det(), 6.0);
    }

    #[test]
    fn any_tensor_rank_mismatch() {
        let a = AnyTensor::Two(Tensor2::<f64>::identity());
        let b = AnyTensor::Scalar(1.0);
        assert_eq!(a.max_abs_diff(&b), None);
        assert_eq!(a.rank(), 2);
    }
}
