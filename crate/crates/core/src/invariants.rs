//! Principal invariants, powers, inverse and the Hamilton–Cayley residual.

use crate::error::{Error, Result};
use crate::products::{Dot, DoubleDot};
use crate::{Scalar, Tensor2};

/// Determinant magnitude below which [`inverse`] refuses to invert.
pub const DET_FLOOR: f64 = 1e-8;

/// The three principal invariants of a second-rank tensor.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Invariants<T> {
    pub i1: T,
    pub i2: T,
    pub i3: T,
}

/// Principal invariants built from traces of powers only:
///
/// ```text
/// I₁ = I··A
/// I₂ = (I₁² − I₁(A²)) / 2
/// I₃ = (I₁(A³) − I₁ I₁(A²) + I₂ I₁) / 3
/// ```
pub fn invariants<T: Scalar>(a: &Tensor2<T>) -> Invariants<T> {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let a2 = a.dot(a);
    let i1 = Tensor2::identity().ddot_seq(a);
    let tr2 = a.ddot_seq(a);
    let tr3 = a.ddot_seq(&a2);
    let i2 = (i1 * i1 - tr2) / two;
    let i3 = (tr3 - i1 * tr2 + i2 * i1) / three;
    Invariants { i1, i2, i3 }
}

/// `Aⁿ` by repeated single contraction; `A⁰ = I`.
pub fn matpow<T: Scalar>(a: &Tensor2<T>, n: u32) -> Tensor2<T> {
    (0..n).fold(Tensor2::identity(), |acc, _| acc.dot(a))
}

/// Inverse via the adjugate, guarded by [`DET_FLOOR`].
pub fn inverse<T: Scalar>(a: &Tensor2<T>) -> Result<Tensor2<T>> {
    inverse_with_floor(a, T::lit(DET_FLOOR))
}

pub fn inverse_with_floor<T: Scalar>(a: &Tensor2<T>, det_floor: T) -> Result<Tensor2<T>> {
    let det = a.det();
    if det.abs() < det_floor {
        return Err(Error::Singular { det: det.approx_f64() });
    }
    Ok(adjugate(a) * (T::one() / det))
}

/// Transposed cofactor matrix, `adj(A)·A = det(A) I`.
pub fn adjugate<T: Scalar>(a: &Tensor2<T>) -> Tensor2<T> {
    Tensor2::from_fn(|i, j| {
        // cofactor of entry (j, i)
        let (r0, r1) = others(j);
        let (c0, c1) = others(i);
        let minor = a[[r0, c0]] * a[[r1, c1]] - a[[r0, c1]] * a[[r1, c0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    })
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// `A³ − I₁A² + I₂A − I₃I`, identically zero in exact arithmetic.
pub fn hamilton_cayley_residual<T: Scalar>(a: &Tensor2<T>) -> Tensor2<T> {
    let inv = invariants(a);
    let a2 = a.dot(a);
    let a3 = a.dot(&a2);
    a3 - a2 * inv.i1 + *a * inv.i2 - Tensor2::identity() * inv.i3
}
