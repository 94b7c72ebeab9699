//! Derivatives of scalar- and tensor-valued functions of a second-rank
//! tensor.
//!
//! Every derivative uses one layout: for a tensor-valued `F` the entry
//! `(i, j, k, p)` is `∂F_ij/∂A_kp`, and for a scalar-valued `f` the entry
//! `(i, j)` is `∂f/∂A_ij`. All nine components of the argument are treated
//! as independent.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::invariants::{invariants, inverse, matpow, DET_FLOOR};
use crate::iso::{iso, IsoKind};
use crate::products::{outer, pos_dot, Dot, DoubleDot};
use crate::report::{tol, Check, CheckReport};
use crate::tensor::{AnyTensor, Tensor2, Tensor4, DIM};
use crate::Scalar;

/// Whether a function returns a scalar or a second-rank tensor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Arity {
    Scalar,
    Tensor,
}

type Eval = Arc<dyn Fn(&Tensor2<f64>) -> Result<AnyTensor<f64>> + Send + Sync>;
type Guard = Arc<dyn Fn(&Tensor2<f64>) -> bool + Send + Sync>;

/// A named function of a second-rank tensor with its analytic derivative.
#[derive(Clone)]
pub struct TensorFunction {
    name: String,
    arity: Arity,
    polynomial: bool,
    eval: Eval,
    derivative: Eval,
    guard: Option<Guard>,
}

impl TensorFunction {
    pub fn new(
        name: impl Into<String>,
        arity: Arity,
        eval: impl Fn(&Tensor2<f64>) -> Result<AnyTensor<f64>> + Send + Sync + 'static,
        derivative: impl Fn(&Tensor2<f64>) -> Result<AnyTensor<f64>> + Send + Sync + 'static,
    ) -> Self {
        TensorFunction {
            name: name.into(),
            arity,
            polynomial: true,
            eval: Arc::new(eval),
            derivative: Arc::new(derivative),
            guard: None,
        }
    }

    /// Restricts the domain; points failing `guard` give a domain error.
    /// Guarded functions are treated as non-polynomial.
    pub fn with_guard(mut self, guard: impl Fn(&Tensor2<f64>) -> bool + Send + Sync + 'static) -> Self {
        self.guard = Some(Arc::new(guard));
        self.polynomial = false;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    pub fn in_domain(&self, a: &Tensor2<f64>) -> bool {
        self.guard.as_ref().is_none_or(|g| g(a))
    }

    fn require(&self, a: &Tensor2<f64>) -> Result<()> {
        if self.in_domain(a) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{} is undefined at the requested point",
                self.name
            )))
        }
    }

    pub fn eval(&self, a: &Tensor2<f64>) -> Result<AnyTensor<f64>> {
        self.require(a)?;
        (self.eval)(a)
    }

    /// Analytic derivative: rank 2 for scalar-valued, rank 4 for
    /// tensor-valued functions.
    pub fn derivative(&self, a: &Tensor2<f64>) -> Result<AnyTensor<f64>> {
        self.require(a)?;
        (self.derivative)(a)
    }
}

impl fmt::Debug for TensorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorFunction")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .finish_non_exhaustive()
    }
}

/// Central-difference settings. The step along `A_kp` is
/// `h_base · max(1, |A_kp|)`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct FDConfig {
    pub h_base: f64,
}

impl Default for FDConfig {
    fn default() -> Self {
        FDConfig { h_base: 1e-5 }
    }
}

impl FDConfig {
    pub fn new(h_base: f64) -> Result<Self> {
        if h_base > 0.0 && h_base.is_finite() {
            Ok(FDConfig { h_base })
        } else {
            Err(Error::Argument(format!(
                "finite-difference step must be positive, got {h_base}"
            )))
        }
    }

    pub fn step(&self, component: f64) -> f64 {
        self.h_base * component.abs().max(1.0)
    }
}

/// `(i, j, step, A + h eᵢⱼ, A - h eᵢⱼ)`
type Probe = (usize, usize, f64, Tensor2<f64>, Tensor2<f64>);

/// Plus and minus probes along every component, guard-checked up front.
fn probes(f: &TensorFunction, a: &Tensor2<f64>, cfg: &FDConfig) -> Result<Vec<Probe>> {
    f.require(a)?;
    let mut out = Vec::with_capacity(DIM * DIM);
    for k in 0..DIM {
        for p in 0..DIM {
            let h = cfg.step(a[[k, p]]);
            let e = Tensor2::unit(k, p) * h;
            let (plus, minus) = (*a + e, *a - e);
            if !f.in_domain(&plus) || !f.in_domain(&minus) {
                return Err(Error::Domain(format!(
                    "{} is undefined at a finite-difference probe along ({k}, {p})",
                    f.name
                )));
            }
            out.push((k, p, h, plus, minus));
        }
    }
    Ok(out)
}

fn expect_scalar(v: AnyTensor<f64>, name: &str) -> Result<f64> {
    match v {
        AnyTensor::Scalar(s) => Ok(s),
        other => Err(Error::Argument(format!(
            "{name} returned rank {}, expected a scalar",
            other.rank()
        ))),
    }
}

fn expect_two(v: AnyTensor<f64>, name: &str) -> Result<Tensor2<f64>> {
    match v {
        AnyTensor::Two(t) => Ok(t),
        other => Err(Error::Argument(format!(
            "{name} returned rank {}, expected rank 2",
            other.rank()
        ))),
    }
}

/// Finite-difference gradient of a scalar-valued function.
pub fn fd_scalar_derivative(f: &TensorFunction, a: &Tensor2<f64>, cfg: &FDConfig) -> Result<Tensor2<f64>> {
    if f.arity != Arity::Scalar {
        return Err(Error::Argument(format!("{} is tensor-valued", f.name)));
    }
    let mut g = [[0.0; DIM]; DIM];
    for (k, p, h, plus, minus) in probes(f, a, cfg)? {
        let fp = expect_scalar((f.eval)(&plus)?, &f.name)?;
        let fm = expect_scalar((f.eval)(&minus)?, &f.name)?;
        g[k][p] = (fp - fm) / (2.0 * h);
    }
    Ok(Tensor2::from_rows(g))
}

/// Finite-difference derivative of a tensor-valued function.
pub fn fd_tensor_derivative(f: &TensorFunction, a: &Tensor2<f64>, cfg: &FDConfig) -> Result<Tensor4<f64>> {
    if f.arity != Arity::Tensor {
        return Err(Error::Argument(format!("{} is scalar-valued", f.name)));
    }
    let mut c = [[[[0.0; DIM]; DIM]; DIM]; DIM];
    for (k, p, h, plus, minus) in probes(f, a, cfg)? {
        let diff = (expect_two((f.eval)(&plus)?, &f.name)? - expect_two((f.eval)(&minus)?, &f.name)?) * (0.5 / h);
        for (i, row) in c.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                cell[k][p] = diff[[i, j]];
            }
        }
    }
    Ok(Tensor4::from_array(c))
}

/// Finite-difference derivative of either arity.
pub fn fd_derivative(f: &TensorFunction, a: &Tensor2<f64>, cfg: &FDConfig) -> Result<AnyTensor<f64>> {
    match f.arity {
        Arity::Scalar => fd_scalar_derivative(f, a, cfg).map(AnyTensor::Two),
        Arity::Tensor => fd_tensor_derivative(f, a, cfg).map(AnyTensor::Four),
    }
}

/// Analytic derivative against central differences at one point, relative
/// to `max(1, |analytic|)`. Guarded functions use the looser tolerance.
pub fn fd_report(f: &TensorFunction, a: &Tensor2<f64>, cfg: &FDConfig) -> Result<CheckReport> {
    let an = f.derivative(a)?;
    let fd = fd_derivative(f, a, cfg)?;
    let tol = if f.polynomial {
        tol::FD_POLY_REL
    } else {
        tol::FD_INVERSE_REL
    };
    let mut check = Check::new(format!("∂{}/∂A analytic vs FD", f.name), 0, tol);
    check.record(an.max_abs_diff(&fd).expect("same rank"), an.max_abs().max(1.0));
    Ok(check.finish())
}

/// Directional derivative `d/ds F(A + s·dir)` at `s = 0` by central
/// difference with step `h_base · max(1, |A|)`.
pub fn gato_derivative(
    f: &TensorFunction,
    a: &Tensor2<f64>,
    dir: &Tensor2<f64>,
    cfg: &FDConfig,
) -> Result<AnyTensor<f64>> {
    let h = cfg.step(a.max_abs()) / dir.max_abs().max(1.0);
    let (plus, minus) = (*a + *dir * h, *a - *dir * h);
    f.require(a)?;
    if !f.in_domain(&plus) || !f.in_domain(&minus) {
        return Err(Error::Domain(format!(
            "{} is undefined along the probe segment",
            f.name
        )));
    }
    let fp = (f.eval)(&plus)?;
    let fm = (f.eval)(&minus)?;
    let s = 0.5 / h;
    match (fp, fm) {
        (AnyTensor::Scalar(x), AnyTensor::Scalar(y)) => Ok(AnyTensor::Scalar((x - y) * s)),
        (AnyTensor::Two(x), AnyTensor::Two(y)) => Ok(AnyTensor::Two((x - y) * s)),
        _ => Err(Error::Argument(format!("{} returned an unexpected rank", f.name))),
    }
}

/// Contraction of an analytic derivative with a direction: `L(··)dir` for
/// scalar functions and `L··dirᵀ` for tensor functions.
pub fn directional<T: Scalar>(derivative: &AnyTensor<T>, dir: &Tensor2<T>) -> Result<AnyTensor<T>> {
    match derivative {
        AnyTensor::Two(g) => Ok(AnyTensor::Scalar(g.ddot_cross(dir))),
        AnyTensor::Four(l) => Ok(AnyTensor::Two(l.ddot_seq(&dir.transpose()))),
        AnyTensor::Scalar(_) => Err(Error::Argument("a derivative has rank 2 or 4".into())),
    }
}

/// Gradient of a principal invariant.
///
/// ```text
/// ∂I₁/∂A = I
/// ∂I₂/∂A = I₁ I − Aᵀ
/// ∂I₃/∂A = I₃ A⁻ᵀ                       (|det A| ≥ DET_FLOOR)
///        = (A²)ᵀ − I₁ Aᵀ + I₂ I          (otherwise)
/// ```
pub fn d_invariant<T: Scalar>(k: u8, a: &Tensor2<T>) -> Result<Tensor2<T>> {
    match k {
        1 => Ok(Tensor2::identity()),
        2 => Ok(Tensor2::identity() * a.trace() - a.transpose()),
        3 => Ok(d_i3_compact(a).unwrap_or_else(|_| d_i3_expanded(a))),
        _ => Err(Error::Argument(format!("no principal invariant of order {k}"))),
    }
}

/// `I₃ A⁻ᵀ`; fails for nearly singular `a`.
pub fn d_i3_compact<T: Scalar>(a: &Tensor2<T>) -> Result<Tensor2<T>> {
    Ok(inverse(a)?.transpose() * a.det())
}

/// `(A²)ᵀ − I₁ Aᵀ + I₂ I`, defined everywhere.
pub fn d_i3_expanded<T: Scalar>(a: &Tensor2<T>) -> Tensor2<T> {
    let inv = invariants(a);
    a.dot(a).transpose() - a.transpose() * inv.i1 + Tensor2::identity() * inv.i2
}

/// `∂I₁(Aⁿ)/∂A = n (Aⁿ⁻¹)ᵀ`
pub fn d_trace_power<T: Scalar>(n: u32, a: &Tensor2<T>) -> Result<Tensor2<T>> {
    if n == 0 {
        return Err(Error::Argument("trace power must be at least 1".into()));
    }
    Ok(matpow(a, n - 1).transpose() * T::from_usize_lossy(n as usize))
}

/// `∂A/∂A = C_II`
pub fn d_identity<T: Scalar>(_a: &Tensor2<T>) -> Tensor4<T> {
    iso(IsoKind::II)
}

/// `∂Aᵀ/∂A = C_III`
pub fn d_transpose<T: Scalar>(_a: &Tensor2<T>) -> Tensor4<T> {
    iso(IsoKind::III)
}

/// `∂A²/∂A = C_II *² A + A·C_II`, entries `δ_ik A_pj + A_ik δ_jp`.
pub fn d_square<T: Scalar>(a: &Tensor2<T>) -> Tensor4<T> {
    let c2 = iso::<T>(IsoKind::II);
    pos_dot(&c2, a, 2).expect("slot 2 exists") + a.dot(&c2)
}

/// `∂A³/∂A` from the product rule on `A·A²`.
pub fn d_cube<T: Scalar>(a: &Tensor2<T>) -> Tensor4<T> {
    product_rule_dot(a, &iso(IsoKind::II), &a.dot(a), &d_square(a))
}

/// `∂A⁻¹/∂A = −A⁻¹·C_II *² A⁻¹`, entries `−B_ik B_pj` with `B = A⁻¹`.
pub fn d_inverse<T: Scalar>(a: &Tensor2<T>) -> Result<Tensor4<T>> {
    let b = inverse(a)?;
    Ok(-pos_dot(&b.dot(&iso::<T>(IsoKind::II)), &b, 2).expect("slot 2 exists"))
}

/// Chain rule for `φ(A(S))`: `∂φ/∂A (··) ∂A/∂S`.
pub fn chain_scalar<T: Scalar>(dphi_da: &Tensor2<T>, da_ds: &Tensor4<T>) -> Tensor2<T> {
    dphi_da.ddot_cross(da_ds)
}

/// Chain rule for `Φ(A(S))`: `∂Φ/∂A (··) ∂A/∂S`.
pub fn chain_tensor<T: Scalar>(dphi_da: &Tensor4<T>, da_ds: &Tensor4<T>) -> Tensor4<T> {
    dphi_da.ddot_cross(da_ds)
}

/// `∂(A·B)/∂S = ∂A/∂S *² B + A·∂B/∂S`
pub fn product_rule_dot<T: Scalar>(
    a: &Tensor2<T>,
    da_ds: &Tensor4<T>,
    b: &Tensor2<T>,
    db_ds: &Tensor4<T>,
) -> Tensor4<T> {
    pos_dot(da_ds, b, 2).expect("slot 2 exists") + a.dot(db_ds)
}

/// `∂(ΨΛ)/∂S = Λ ⊗ ∂Ψ/∂S + Ψ ∂Λ/∂S`
pub fn product_rule_scalar_tensor<T: Scalar>(
    lam: &Tensor2<T>,
    dpsi_ds: &Tensor2<T>,
    psi: T,
    dlam_ds: &Tensor4<T>,
) -> Tensor4<T> {
    outer(lam, dpsi_ds) + *dlam_ds * psi
}

/// Frobenius norm of the first-order remainder
/// `F(A + Δ) − F(A) − L··Δᵀ` (or `f(A + Δ) − f(A) − ∂f(··)Δ`).
pub fn linearization_check(f: &TensorFunction, a: &Tensor2<f64>, delta: &Tensor2<f64>) -> Result<f64> {
    let l = f.derivative(a)?;
    let moved = f.eval(&(*a + *delta))?;
    let here = f.eval(a)?;
    let lin = directional(&l, delta)?;
    match (moved, here, lin) {
        (AnyTensor::Scalar(x), AnyTensor::Scalar(y), AnyTensor::Scalar(z)) => Ok((x - y - z).abs()),
        (AnyTensor::Two(x), AnyTensor::Two(y), AnyTensor::Two(z)) => {
            Ok((x - y - z).iter().map(|v| v * v).sum::<f64>().sqrt())
        }
        _ => Err(Error::Argument(format!("{} returned an unexpected rank", f.name))),
    }
}

/// Ratios `r(Δ/2ᵏ) / r(Δ/2ᵏ⁺¹)` of successive remainders for
/// `k = 0..halvings`. Each is close to 4 for a correct derivative.
pub fn linearization_ratios(
    f: &TensorFunction,
    a: &Tensor2<f64>,
    delta: &Tensor2<f64>,
    halvings: usize,
) -> Result<Vec<f64>> {
    let mut residuals = Vec::with_capacity(halvings + 1);
    let mut d = *delta;
    for _ in 0..=halvings {
        residuals.push(linearization_check(f, a, &d)?);
        d = d * 0.5;
    }
    Ok(residuals.windows(2).map(|w| w[0] / w[1]).collect())
}

fn scalar_fn(
    name: &str,
    eval: impl Fn(&Tensor2<f64>) -> f64 + Send + Sync + 'static,
    grad: impl Fn(&Tensor2<f64>) -> Result<Tensor2<f64>> + Send + Sync + 'static,
) -> TensorFunction {
    TensorFunction::new(
        name,
        Arity::Scalar,
        move |a| Ok(AnyTensor::Scalar(eval(a))),
        move |a| grad(a).map(AnyTensor::Two),
    )
}

fn tensor_fn(
    name: &str,
    eval: impl Fn(&Tensor2<f64>) -> Result<Tensor2<f64>> + Send + Sync + 'static,
    deriv: impl Fn(&Tensor2<f64>) -> Result<Tensor4<f64>> + Send + Sync + 'static,
) -> TensorFunction {
    TensorFunction::new(
        name,
        Arity::Tensor,
        move |a| eval(a).map(AnyTensor::Two),
        move |a| deriv(a).map(AnyTensor::Four),
    )
}

/// Looks up a catalog function: `I1`, `I2`, `I3`, `trI_pow_<n>`, `id`,
/// `transpose`, `square`, `cube` or `inverse`.
pub fn lookup(name: &str) -> Result<TensorFunction> {
    let f = match name {
        "I1" => scalar_fn(name, |a| invariants(a).i1, |a| d_invariant(1, a)),
        "I2" => scalar_fn(name, |a| invariants(a).i2, |a| d_invariant(2, a)),
        "I3" => scalar_fn(name, |a| invariants(a).i3, |a| d_invariant(3, a)),
        "id" => tensor_fn(name, |a| Ok(*a), |a| Ok(d_identity(a))),
        "transpose" => tensor_fn(name, |a| Ok(a.transpose()), |a| Ok(d_transpose(a))),
        "square" => tensor_fn(name, |a| Ok(a.dot(a)), |a| Ok(d_square(a))),
        "cube" => tensor_fn(name, |a| Ok(matpow(a, 3)), |a| Ok(d_cube(a))),
        "inverse" => tensor_fn(name, inverse, d_inverse).with_guard(|a| a.det().abs() >= DET_FLOOR),
        _ => {
            let n = name
                .strip_prefix("trI_pow_")
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Argument(format!("unknown function `{name}`")))?;
            scalar_fn(name, move |a| matpow(a, n).trace(), move |a| d_trace_power(n, a))
        }
    };
    Ok(f)
}

/// The functions covered by the derivative oracle suite.
pub fn catalog() -> Vec<TensorFunction> {
    [
        "I1",
        "I2",
        "I3",
        "trI_pow_2",
        "trI_pow_3",
        "trI_pow_4",
        "id",
        "transpose",
        "square",
        "cube",
        "inverse",
    ]
    .into_iter()
    .map(|n| lookup(n).expect("catalog names are valid"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::transpose4;

    fn e(p: usize, q: usize) -> Tensor2<f64> {
        Tensor2::unit(p - 1, q - 1)
    }

    fn d() -> Tensor2<f64> {
        Tensor2::diag([1.0, 2.0, 3.0])
    }

    fn a0() -> Tensor2<f64> {
        Tensor2::from_rows([[0.4, -0.3, 0.8], [0.1, 0.9, -0.5], [-0.6, 0.2, 0.7]])
    }

    fn cfg() -> FDConfig {
        FDConfig::default()
    }

    #[test]
    fn fd_scalar_spot_values() {
        let g = fd_scalar_derivative(&lookup("I1").unwrap(), &a0(), &cfg()).unwrap();
        assert!(g.max_abs_diff(&Tensor2::identity()) < 1e-9);
        let g = fd_scalar_derivative(&lookup("I3").unwrap(), &d(), &cfg()).unwrap();
        assert!(g.max_abs_diff(&Tensor2::diag([6.0, 3.0, 2.0])) < 1e-9);
        let g = fd_scalar_derivative(&lookup("I2").unwrap(), &Tensor2::identity(), &cfg()).unwrap();
        assert!(g.max_abs_diff(&(Tensor2::identity() * 2.0)) < 1e-9);
    }

    #[test]
    fn fd_tensor_spot_values() {
        let l = fd_tensor_derivative(&lookup("id").unwrap(), &a0(), &cfg()).unwrap();
        assert!(l.max_abs_diff(&iso(IsoKind::II)) < 1e-9);
        let l = fd_tensor_derivative(&lookup("transpose").unwrap(), &a0(), &cfg()).unwrap();
        assert!(l.max_abs_diff(&iso(IsoKind::III)) < 1e-9);
        let l = fd_tensor_derivative(&lookup("square").unwrap(), &Tensor2::identity(), &cfg()).unwrap();
        assert!(l.max_abs_diff(&(iso(IsoKind::II) * 2.0)) < 1e-9);
    }

    #[test]
    fn fd_rejects_wrong_arity_and_guards() {
        assert!(fd_tensor_derivative(&lookup("I1").unwrap(), &a0(), &cfg()).is_err());
        assert!(fd_scalar_derivative(&lookup("id").unwrap(), &a0(), &cfg()).is_err());
        let singular = Tensor2::from_rows([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]]);
        assert!(matches!(
            fd_tensor_derivative(&lookup("inverse").unwrap(), &singular, &cfg()),
            Err(Error::Domain(_))
        ));
        // a probe crosses the floor even though the centre does not
        let edge = Tensor2::diag([1.0, 1.0, 1e-5 + 5e-9]);
        assert!(matches!(
            fd_tensor_derivative(&lookup("inverse").unwrap(), &edge, &cfg()),
            Err(Error::Domain(_))
        ));
        assert!(FDConfig::new(0.0).is_err());
    }

    #[test]
    fn gato_examples() {
        let i1 = lookup("I1").unwrap();
        let g = gato_derivative(&i1, &a0(), &e(1, 2), &cfg()).unwrap();
        assert!(g.max_abs_diff(&AnyTensor::Scalar(0.0)).unwrap() < 1e-9);
        let g = gato_derivative(&i1, &a0(), &Tensor2::identity(), &cfg()).unwrap();
        assert!(g.max_abs_diff(&AnyTensor::Scalar(3.0)).unwrap() < 1e-9);
        let sq = lookup("square").unwrap();
        let g = gato_derivative(&sq, &d(), &e(1, 2), &cfg()).unwrap();
        assert!(g.max_abs_diff(&AnyTensor::Two(e(1, 2) * 3.0)).unwrap() < 1e-9);
        let an = directional(&sq.derivative(&d()).unwrap(), &e(1, 2)).unwrap();
        assert!(an.max_abs_diff(&AnyTensor::Two(e(1, 2) * 3.0)).unwrap() < 1e-15);
    }

    #[test]
    fn invariant_gradients() {
        assert_eq!(d_invariant(1, &a0()).unwrap(), Tensor2::identity());
        assert_eq!(d_invariant(2, &d()).unwrap(), Tensor2::diag([5.0, 4.0, 3.0]));
        assert_eq!(
            d_invariant(3, &Tensor2::<f64>::identity()).unwrap(),
            Tensor2::identity()
        );
        assert!(d_invariant(4, &d()).is_err());
        let z = Tensor2::<f64>::zero();
        assert_eq!(d_invariant(3, &z).unwrap(), Tensor2::zero());
        assert!(d_i3_compact(&a0()).unwrap().max_abs_diff(&d_i3_expanded(&a0())) < 1e-14);
    }

    #[test]
    fn trace_powers() {
        assert_eq!(d_trace_power(1, &a0()).unwrap(), Tensor2::identity());
        assert_eq!(d_trace_power(2, &e(1, 2)).unwrap(), e(2, 1) * 2.0);
        assert_eq!(d_trace_power(3, &d()).unwrap(), Tensor2::diag([3.0, 12.0, 27.0]));
        assert!(d_trace_power(0, &d()).is_err());
    }

    #[test]
    fn square_and_inverse_entries() {
        let a = a0();
        let sq = d_square(&a);
        let b = inverse(&a).unwrap();
        let inv = d_inverse(&a).unwrap();
        let dl = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        for (i, j, k, p) in (0..81).map(|n| (n / 27, n / 9 % 3, n / 3 % 3, n % 3)) {
            let want = dl(i, k) * a[[p, j]] + a[[i, k]] * dl(j, p);
            assert!((sq[[i, j, k, p]] - want).abs() < 1e-15);
            assert!((inv[[i, j, k, p]] + b[[i, k]] * b[[p, j]]).abs() < 1e-14);
        }
        assert_eq!(d_square(&Tensor2::<f64>::identity()), iso(IsoKind::II) * 2.0);
        assert_eq!(
            d_inverse(&(Tensor2::<f64>::identity() * 2.0)).unwrap(),
            iso(IsoKind::II) * -0.25
        );
        assert!(d_inverse(&Tensor2::<f64>::zero()).is_err());
    }

    #[test]
    fn oracle_on_catalog() {
        let a = Tensor2::identity() + a0() * 0.3;
        for f in catalog() {
            let an = f.derivative(&a).unwrap();
            let fd = fd_derivative(&f, &a, &cfg()).unwrap();
            let err = an.max_abs_diff(&fd).unwrap() / an.max_abs().max(1.0);
            assert!(err < 1e-6, "{}: {err:e}", f.name());
        }
    }

    #[test]
    fn chain_rules() {
        let s = a0();
        assert_eq!(chain_scalar(&s, &iso(IsoKind::II)), s);
        let l = d_square(&s);
        assert_eq!(chain_tensor(&l, &iso(IsoKind::II)), l);
        let c = chain_scalar(&d_invariant(1, &d()).unwrap(), &d_square(&d()));
        assert_eq!(c, d() * 2.0);
        // Φ = A², A(S) = Sᵀ
        let comp = tensor_fn("sqT", |s| Ok(s.transpose().dot(&s.transpose())), |_| unreachable!());
        let fd = fd_tensor_derivative(&comp, &s, &cfg()).unwrap();
        let an = chain_tensor(&d_square(&s.transpose()), &d_transpose(&s));
        assert!(an.max_abs_diff(&fd) < 1e-9);
    }

    #[test]
    fn product_rules() {
        let s = a0();
        let c2 = iso::<f64>(IsoKind::II);
        assert_eq!(product_rule_dot(&s, &c2, &s, &c2), d_square(&s));
        let da = d_inverse(&s).unwrap();
        assert_eq!(product_rule_dot(&s, &da, &Tensor2::identity(), &Tensor4::zero()), da);
        let b = inverse(&s).unwrap();
        let zero = product_rule_dot(&s, &c2, &b, &d_inverse(&s).unwrap());
        assert!(zero.max_abs() < 1e-12);
        assert_eq!(product_rule_scalar_tensor(&s, &Tensor2::zero(), 1.0, &da), da);
        let lam = d();
        let got = product_rule_scalar_tensor(&lam, &Tensor2::identity(), s.trace(), &Tensor4::zero());
        assert_eq!(got, outer(&lam, &Tensor2::identity()));
    }

    #[test]
    fn linearization() {
        let id = lookup("id").unwrap();
        assert!(linearization_check(&id, &a0(), &d()).unwrap() < 1e-15);
        let delta = a0() * 0.1;
        for name in ["square", "inverse"] {
            let f = lookup(name).unwrap();
            let a = Tensor2::identity() + d() * 0.1;
            for r in linearization_ratios(&f, &a, &delta, 3).unwrap() {
                assert!((3.5..=4.5).contains(&r), "{name}: {r}");
            }
        }
    }

    #[test]
    fn lookup_names() {
        for f in catalog() {
            assert_eq!(lookup(f.name()).unwrap().name(), f.name());
        }
        assert!(lookup("trI_pow_7").unwrap().is_polynomial());
        assert!(!lookup("inverse").unwrap().is_polynomial());
        for bad in ["trI_pow_0", "trI_pow_x", "log", ""] {
            assert!(lookup(bad).is_err(), "{bad}");
        }
        // four-slot transposes of C_II agree with the transpose derivative
        assert_eq!(
            transpose4(&d_identity::<f64>(&d()), crate::products::Transpose4::Dr),
            d_transpose(&d())
        );
    }
}
