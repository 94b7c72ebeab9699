//! The isotropic fourth-rank tensors `C_I = g⊗g`, `C_II = g⊠g`,
//! `C_III = g⊠̂g` and their unit / transposer / trace roles under each
//! double-contraction scheme.

use std::fmt;

use crate::error::{Error, Result};
use crate::products::{DoubleDot, Scheme};
use crate::report::{tol, Check, CheckReport};
use crate::tensor::{delta, Tensor2, Tensor4, DIM};
use crate::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum IsoKind {
    I,
    II,
    III,
}

impl IsoKind {
    pub const ALL: [IsoKind; 3] = [IsoKind::I, IsoKind::II, IsoKind::III];
}

impl fmt::Display for IsoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsoKind::I => "C_I",
            IsoKind::II => "C_II",
            IsoKind::III => "C_III",
        })
    }
}

/// Cartesian components: `δ_ij δ_kl`, `δ_ik δ_jl`, `δ_il δ_jk`.
pub fn iso<T: Scalar>(kind: IsoKind) -> Tensor4<T> {
    match kind {
        IsoKind::I => Tensor4::from_fn(|i, j, k, l| delta::<T>(i, j) * delta(k, l)),
        IsoKind::II => Tensor4::from_fn(|i, j, k, l| delta::<T>(i, k) * delta(j, l)),
        IsoKind::III => Tensor4::from_fn(|i, j, k, l| delta::<T>(i, l) * delta(j, k)),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    /// `A * C`
    Left,
    /// `C * A`
    Right,
}

/// What a scheme turns `A` into when contracted with an isotropic tensor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Role {
    /// `I₁(A) g`
    Trace,
    /// `A` (the tensor acts as the unit 𝕀)
    Unit,
    /// `Aᵀ` (the tensor acts as the transposer 𝕋)
    Transposer,
}

impl Role {
    pub fn apply<T: Scalar>(self, a: &Tensor2<T>) -> Tensor2<T> {
        match self {
            Role::Trace => Tensor2::identity() * a.trace(),
            Role::Unit => *a,
            Role::Transposer => a.transpose(),
        }
    }
}

/// The tabulated role of `kind` under `scheme`, the same from either side.
pub fn iso_role(scheme: Scheme, kind: IsoKind) -> Role {
    use IsoKind::*;
    use Scheme::*;
    match (scheme, kind) {
        (Seq, I) | (Cross, I) | (Pos, III) => Role::Trace,
        (Cross, II) | (Seq, III) | (Pos, I) => Role::Unit,
        (Seq, II) | (Pos, II) | (Cross, III) => Role::Transposer,
    }
}

/// Evaluates the scheme's double contraction of `a` with `iso(kind)`.
pub fn iso_contract<T: Scalar>(scheme: Scheme, kind: IsoKind, a: &Tensor2<T>, side: Side) -> Tensor2<T> {
    let c = iso::<T>(kind);
    match (scheme, side) {
        (Scheme::Seq, Side::Left) => a.ddot_seq(&c),
        (Scheme::Seq, Side::Right) => c.ddot_seq(a),
        (Scheme::Cross, Side::Left) => a.ddot_cross(&c),
        (Scheme::Cross, Side::Right) => c.ddot_cross(a),
        (Scheme::Pos, Side::Left) => a.ddot_pos(&c),
        (Scheme::Pos, Side::Right) => c.ddot_pos(a),
    }
}

/// Rotates every slot of `h` by `q`: `Q_ia Q_jb Q_kc Q_ld H_abcd`.
pub fn rotate4<T: Scalar>(h: &Tensor4<T>, q: &Tensor2<T>) -> Tensor4<T> {
    // one slot at a time keeps this at 4·3⁵ multiplications
    let mut cur = *h;
    for slot in 0..4 {
        cur = Tensor4::from_fn(|i, j, k, l| {
            let out = [i, j, k, l];
            (0..DIM).fold(T::zero(), |acc, m| {
                let mut idx = out;
                idx[slot] = m;
                acc + q[[out[slot], m]] * cur[idx]
            })
        });
    }
    cur
}

/// Checks that `iso(kind)` is unchanged by rotating all four slots with the
/// orthogonal `q`, together with `Q·I·Qᵀ = I`.
pub fn isotropy_check(kind: IsoKind, q: &Tensor2<f64>) -> Result<CheckReport> {
    use crate::products::Dot;
    let qtq = q.transpose().dot(q);
    let ortho = qtq.max_abs_diff(&Tensor2::identity());
    if ortho > tol::ORTHOGONAL {
        return Err(Error::Argument(format!(
            "rotation is not orthogonal (|QᵀQ − I| = {ortho:e})"
        )));
    }
    let c = iso::<f64>(kind);
    let mut check = Check::new(format!("isotropy {kind}"), 0, tol::IDENTITY);
    check.record_scaled(rotate4(&c, q).max_abs_diff(&c), 1.0);
    let i = Tensor2::identity();
    check.record_scaled(q.dot(&i).dot(&q.transpose()).max_abs_diff(&i), 1.0);
    Ok(check.finish())
}
