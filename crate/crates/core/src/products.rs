//! Contractions and products between second- and fourth-rank tensors.
//!
//! Three double-contraction conventions are provided for every rank
//! pairing:
//!
//! ```text
//! sequential  A··B     nearest vectors first, then the next nearest
//! cross       A(··)B   first with first, second with second
//! positional  A[··]B   B is inserted as (·B·) in the middle of A
//! ```
//!
//! The sequential and cross forms are linked by `(··) = ··C_II··`, and on
//! two second-rank operands the cross and positional forms coincide.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tensor::{AnyTensor, Tensor2, Tensor4, DIM};
use crate::Scalar;

/// Single contraction of the adjacent inner indices.
pub trait Dot<Rhs> {
    type Output;
    fn dot(&self, rhs: &Rhs) -> Self::Output;
}

/// The three double-contraction conventions.
pub trait DoubleDot<Rhs> {
    type Output;
    /// `··`: nested pairing of the nearest basis vectors.
    fn ddot_seq(&self, rhs: &Rhs) -> Self::Output;
    /// `(··)`: parallel pairing.
    fn ddot_cross(&self, rhs: &Rhs) -> Self::Output;
    /// `[··]`: outer-inner substitution pairing.
    fn ddot_pos(&self, rhs: &Rhs) -> Self::Output;
}

/// Names one of the three double-contraction conventions at runtime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Scheme {
    Seq,
    Cross,
    Pos,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Seq, Scheme::Cross, Scheme::Pos];

    pub fn symbol(self) -> &'static str {
        match self {
            Scheme::Seq => "··",
            Scheme::Cross => "(··)",
            Scheme::Pos => "[··]",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Seq => "seq",
            Scheme::Cross => "cross",
            Scheme::Pos => "pos",
        })
    }
}

#[inline]
fn sum3<T: Scalar>(f: impl Fn(usize) -> T) -> T {
    (0..DIM).fold(T::zero(), |acc, m| acc + f(m))
}

#[inline]
fn sum9<T: Scalar>(f: impl Fn(usize, usize) -> T) -> T {
    let mut acc = T::zero();
    for m in 0..DIM {
        for n in 0..DIM {
            acc = acc + f(m, n);
        }
    }
    acc
}

impl<T: Scalar> Dot<Tensor2<T>> for Tensor2<T> {
    type Output = Tensor2<T>;
    fn dot(&self, b: &Tensor2<T>) -> Tensor2<T> {
        Tensor2::from_fn(|i, j| sum3(|m| self[[i, m]] * b[[m, j]]))
    }
}

impl<T: Scalar> Dot<Tensor4<T>> for Tensor2<T> {
    type Output = Tensor4<T>;
    fn dot(&self, h: &Tensor4<T>) -> Tensor4<T> {
        Tensor4::from_fn(|i, j, k, l| sum3(|m| self[[i, m]] * h[[m, j, k, l]]))
    }
}

impl<T: Scalar> Dot<Tensor2<T>> for Tensor4<T> {
    type Output = Tensor4<T>;
    fn dot(&self, a: &Tensor2<T>) -> Tensor4<T> {
        Tensor4::from_fn(|i, j, k, l| sum3(|m| self[[i, j, k, m]] * a[[m, l]]))
    }
}

impl<T: Scalar> DoubleDot<Tensor2<T>> for Tensor2<T> {
    type Output = T;

    fn ddot_seq(&self, b: &Tensor2<T>) -> T {
        sum9(|i, j| self[[i, j]] * b[[j, i]])
    }

    fn ddot_cross(&self, b: &Tensor2<T>) -> T {
        sum9(|i, j| self[[i, j]] * b[[i, j]])
    }

    fn ddot_pos(&self, b: &Tensor2<T>) -> T {
        self.ddot_cross(b)
    }
}

impl<T: Scalar> DoubleDot<Tensor4<T>> for Tensor2<T> {
    type Output = Tensor2<T>;

    fn ddot_seq(&self, h: &Tensor4<T>) -> Tensor2<T> {
        Tensor2::from_fn(|k, l| sum9(|i, j| self[[i, j]] * h[[j, i, k, l]]))
    }

    fn ddot_cross(&self, h: &Tensor4<T>) -> Tensor2<T> {
        Tensor2::from_fn(|k, l| sum9(|i, j| self[[i, j]] * h[[i, j, k, l]]))
    }

    fn ddot_pos(&self, h: &Tensor4<T>) -> Tensor2<T> {
        Tensor2::from_fn(|n, k| sum9(|i, j| self[[i, j]] * h[[i, n, k, j]]))
    }
}

impl<T: Scalar> DoubleDot<Tensor2<T>> for Tensor4<T> {
    type Output = Tensor2<T>;

    fn ddot_seq(&self, a: &Tensor2<T>) -> Tensor2<T> {
        Tensor2::from_fn(|i, j| sum9(|k, l| self[[i, j, k, l]] * a[[l, k]]))
    }

    fn ddot_cross(&self, a: &Tensor2<T>) -> Tensor2<T> {
        Tensor2::from_fn(|i, j| sum9(|k, l| self[[i, j, k, l]] * a[[k, l]]))
    }

    fn ddot_pos(&self, a: &Tensor2<T>) -> Tensor2<T> {
        Tensor2::from_fn(|i, l| sum9(|j, k| self[[i, j, k, l]] * a[[j, k]]))
    }
}

impl<T: Scalar> DoubleDot<Tensor4<T>> for Tensor4<T> {
    type Output = Tensor4<T>;

    fn ddot_seq(&self, h: &Tensor4<T>) -> Tensor4<T> {
        Tensor4::from_fn(|i, j, k, l| sum9(|m, n| self[[i, j, m, n]] * h[[n, m, k, l]]))
    }

    fn ddot_cross(&self, h: &Tensor4<T>) -> Tensor4<T> {
        Tensor4::from_fn(|i, j, k, l| sum9(|m, n| self[[i, j, m, n]] * h[[m, n, k, l]]))
    }

    fn ddot_pos(&self, h: &Tensor4<T>) -> Tensor4<T> {
        // (P[··]H)_insl = P_ijkl H_jnsk
        Tensor4::from_fn(|i, n, s, l| sum9(|j, k| self[[i, j, k, l]] * h[[j, n, s, k]]))
    }
}

/// `(A⊗B)_ijkl = A_ij B_kl`
pub fn outer<T: Scalar>(a: &Tensor2<T>, b: &Tensor2<T>) -> Tensor4<T> {
    Tensor4::from_fn(|i, j, k, l| a[[i, j]] * b[[k, l]])
}

/// `(A⊠B)_ijkl = A_ik B_jl`
pub fn boxprod<T: Scalar>(a: &Tensor2<T>, b: &Tensor2<T>) -> Tensor4<T> {
    Tensor4::from_fn(|i, j, k, l| a[[i, k]] * b[[j, l]])
}

/// `(A⊠̂B)_ijkl = A_il B_jk`
pub fn boxhat<T: Scalar>(a: &Tensor2<T>, b: &Tensor2<T>) -> Tensor4<T> {
    Tensor4::from_fn(|i, j, k, l| a[[i, l]] * b[[j, k]])
}

/// Fourth-rank transposes, each swapping one pair of adjacent slots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Transpose4 {
    /// slots 2 and 3
    Ti,
    /// slots 3 and 4
    Dr,
    /// slots 1 and 2
    Dl,
}

impl FromStr for Transpose4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ti" => Ok(Transpose4::Ti),
            "dr" => Ok(Transpose4::Dr),
            "dl" => Ok(Transpose4::Dl),
            other => Err(Error::Argument(format!("unknown transpose kind `{other}`"))),
        }
    }
}

pub fn transpose4<T: Scalar>(m: &Tensor4<T>, kind: Transpose4) -> Tensor4<T> {
    match kind {
        Transpose4::Ti => Tensor4::from_fn(|i, j, k, l| m[[i, k, j, l]]),
        Transpose4::Dr => Tensor4::from_fn(|i, j, k, l| m[[i, j, l, k]]),
        Transpose4::Dl => Tensor4::from_fn(|i, j, k, l| m[[j, i, k, l]]),
    }
}

fn check_position(n: usize, lo: usize, hi: usize, op: &str) -> Result<()> {
    if (lo..=hi).contains(&n) {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "position {n} out of range {lo}..={hi} for {op}"
        )))
    }
}

/// Simple positional scalar product `H *ⁿ D`: the `n`-th basis vector of
/// `H` (1-based) is dotted with `D`, whose second vector takes its place.
///
/// ```text
/// (H *² D)_imkl = H_ijkl D_jm
/// ```
pub fn pos_dot<T: Scalar>(h: &Tensor4<T>, d: &Tensor2<T>, n: usize) -> Result<Tensor4<T>> {
    check_position(n, 1, 4, "positional scalar product")?;
    let slot = n - 1;
    Ok(Tensor4::from_fn(|i, j, k, l| {
        let out = [i, j, k, l];
        sum3(|m| {
            let mut idx = out;
            idx[slot] = m;
            h[idx] * d[[m, out[slot]]]
        })
    }))
}

/// Positional double product `C ⊙ⁿ M`: the dyad in slots `n, n+1` of `M`
/// (1-based) is replaced by its sequential double contraction with `C`.
///
/// ```text
/// (C ⊙² M)_iabl = C_abkj M_ijkl
/// ```
pub fn pos_ddot_left<T: Scalar>(c: &Tensor4<T>, m: &Tensor4<T>, n: usize) -> Result<Tensor4<T>> {
    check_position(n, 1, 3, "left positional double product")?;
    let (s0, s1) = (n - 1, n);
    Ok(Tensor4::from_fn(|i, j, k, l| {
        let out = [i, j, k, l];
        let (a, b) = (out[s0], out[s1]);
        sum9(|p, q| {
            let mut idx = out;
            idx[s0] = p;
            idx[s1] = q;
            m[idx] * c[[a, b, q, p]]
        })
    }))
}

/// Positional double product `M ⊗ₙ C`: the dyad in slots `n-1, n` of `M`
/// (1-based) is replaced by its sequential double contraction into `C`.
///
/// ```text
/// (M ⊗₃ C)_icdl = M_ijkl C_kjcd
/// ```
pub fn pos_ddot_right<T: Scalar>(m: &Tensor4<T>, c: &Tensor4<T>, n: usize) -> Result<Tensor4<T>> {
    check_position(n, 2, 4, "right positional double product")?;
    let (s0, s1) = (n - 2, n - 1);
    Ok(Tensor4::from_fn(|i, j, k, l| {
        let out = [i, j, k, l];
        let (a, b) = (out[s0], out[s1]);
        sum9(|p, q| {
            let mut idx = out;
            idx[s0] = p;
            idx[s1] = q;
            m[idx] * c[[q, p, a, b]]
        })
    }))
}

/// Runtime-dispatched single contraction.
pub fn dot<T: Scalar>(x: &AnyTensor<T>, y: &AnyTensor<T>) -> Result<AnyTensor<T>> {
    use AnyTensor::*;
    match (x, y) {
        (Two(a), Two(b)) => Ok(Two(a.dot(b))),
        (Two(a), Four(h)) => Ok(Four(a.dot(h))),
        (Four(h), Two(a)) => Ok(Four(h.dot(a))),
        _ => Err(Error::Rank {
            op: "dot",
            left: x.rank(),
            right: y.rank(),
        }),
    }
}

/// Runtime-dispatched double contraction under `scheme`.
pub fn ddot<T: Scalar>(scheme: Scheme, x: &AnyTensor<T>, y: &AnyTensor<T>) -> Result<AnyTensor<T>> {
    use AnyTensor::*;
    fn apply<L, R, O>(scheme: Scheme, l: &L, r: &R) -> O
    where
        L: DoubleDot<R, Output = O>,
    {
        match scheme {
            Scheme::Seq => l.ddot_seq(r),
            Scheme::Cross => l.ddot_cross(r),
            Scheme::Pos => l.ddot_pos(r),
        }
    }
    match (x, y) {
        (Two(a), Two(b)) => Ok(Scalar(apply(scheme, a, b))),
        (Two(a), Four(h)) => Ok(Two(apply(scheme, a, h))),
        (Four(h), Two(a)) => Ok(Two(apply(scheme, h, a))),
        (Four(p), Four(h)) => Ok(Four(apply(scheme, p, h))),
        _ => Err(Error::Rank {
            op: match scheme {
                Scheme::Seq => "ddot_seq",
                Scheme::Cross => "ddot_cross",
                Scheme::Pos => "ddot_pos",
            },
            left: x.rank(),
            right: y.rank(),
        }),
    }
}
