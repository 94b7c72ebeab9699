//! Conversion between the two derivative layouts and the cross-convention
//! rule checks.
//!
//! The native layout `L` stores `∂F_ij/∂A_kp` at `(i, j, k, p)`. The
//! alternative layout `L*` stores the same derivative at `(i, k, p, j)`:
//!
//! ```text
//! L* = ((L)^ti)^dr,   L*_ijkl = L_iljk
//! ```
//!
//! The ⊠/⊠̂ spellings of the native layout describe the same tensor and
//! share its storage.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::calculus::{
    chain_scalar, chain_tensor, d_identity, d_invariant, d_inverse, d_square, d_transpose, fd_scalar_derivative,
    fd_tensor_derivative, lookup, product_rule_dot, product_rule_scalar_tensor, Arity, FDConfig, TensorFunction,
};
use crate::error::{Error, Result};
use crate::invariants::{invariants, inverse};
use crate::iso::{iso, IsoKind};
use crate::products::{boxhat, boxprod, outer, pos_dot, transpose4, Dot, DoubleDot, Transpose4};
use crate::report::{tol, Check, CheckReport};
use crate::sample::{near_identity, trial_rng, uniform2, uniform4, well_conditioned};
use crate::tensor::{AnyTensor, Tensor2, Tensor4};
use crate::Scalar;

/// Derivative representation conventions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroupTag {
    /// ⊠/⊠̂ spelling of the native layout
    Group1,
    /// the `L*` layout
    Group2,
    /// native layout
    Group3,
}

impl GroupTag {
    /// Whether tensors of this convention share the native storage.
    pub fn native_storage(self) -> bool {
        !matches!(self, GroupTag::Group2)
    }
}

impl FromStr for GroupTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group1" => Ok(GroupTag::Group1),
            "group2" => Ok(GroupTag::Group2),
            "group3" => Ok(GroupTag::Group3),
            _ => Err(Error::Argument(format!("unknown convention `{s}`"))),
        }
    }
}

/// `L*_ijkl = L_iljk`
pub fn to_group2<T: Scalar>(l: &Tensor4<T>) -> Tensor4<T> {
    transpose4(&transpose4(l, Transpose4::Ti), Transpose4::Dr)
}

/// Inverse of [`to_group2`]: `L_ijkl = L*_iklj`.
pub fn to_group3<T: Scalar>(l2: &Tensor4<T>) -> Tensor4<T> {
    transpose4(&transpose4(l2, Transpose4::Dr), Transpose4::Ti)
}

/// Checks `A[··]L* = A(··)L = (A··C_II)··L` for a single pair.
pub fn verify_layout_contraction(a: &Tensor2<f64>, l: &Tensor4<f64>) -> CheckReport {
    let cross = a.ddot_cross(l);
    let pos = a.ddot_pos(&to_group2(l));
    let seq = a.ddot_seq(&iso::<f64>(IsoKind::II)).ddot_seq(l);
    let mut check = Check::new("layout contraction", 0, tol::IDENTITY);
    check.record_scaled(
        cross.max_abs_diff(&pos).max(cross.max_abs_diff(&seq)),
        a.max_abs() * l.max_abs(),
    );
    check.finish()
}

/// Checks `X*[··]Y* = (X(··)Y)*` for a single pair.
pub fn verify_layout_composition(x: &Tensor4<f64>, y: &Tensor4<f64>) -> CheckReport {
    let left = to_group2(x).ddot_pos(&to_group2(y));
    let right = to_group2(&x.ddot_cross(y));
    let mut check = Check::new("layout composition", 0, tol::IDENTITY);
    check.record_scaled(left.max_abs_diff(&right), x.max_abs() * y.max_abs());
    check.finish()
}

/// Checks `C_II··C_II = C_III` and `D··C_III = D` for `trials` random `D`.
pub fn verify_isotropic_compositions(seed: u64, trials: u32) -> CheckReport {
    let c2 = iso::<f64>(IsoKind::II);
    let c3 = iso::<f64>(IsoKind::III);
    let mut check = Check::new("C_II··C_II = C_III, D··C_III = D", seed, tol::IDENTITY);
    check.record_scaled(c2.ddot_seq(&c2).max_abs_diff(&c3), 1.0);
    for t in 0..trials {
        let d = uniform4(&mut trial_rng(seed, 60, t));
        check.record_scaled(d.ddot_seq(&c3).max_abs_diff(&d), d.max_abs());
    }
    check.finish()
}

/// Closed form of `to_group2(∂F/∂A)` for the tensor-valued catalog
/// functions.
///
/// ```text
/// id         I⊗I
/// transpose  I⊠I
/// square     I⊗A + A⊗I
/// cube       I⊗A² + A⊗A + A²⊗I
/// inverse    −A⁻¹⊗A⁻¹
/// ```
pub fn group2_closed_form<T: Scalar>(name: &str, a: &Tensor2<T>) -> Result<Tensor4<T>> {
    let i = Tensor2::identity();
    match name {
        "id" => Ok(outer(&i, &i)),
        "transpose" => Ok(boxprod(&i, &i)),
        "square" => Ok(outer(&i, a) + outer(a, &i)),
        "cube" => {
            let a2 = a.dot(a);
            Ok(outer(&i, &a2) + outer(a, a) + outer(&a2, &i))
        }
        "inverse" => {
            let b = inverse(a)?;
            Ok(-outer(&b, &b))
        }
        _ => Err(Error::Argument(format!(
            "no alternative-layout closed form for `{name}`"
        ))),
    }
}

/// Differentiation rules checked across the three conventions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Rule {
    /// `φ(A(S))`
    ChainScalar,
    /// `Φ(A(S))`
    ChainTensor,
    /// `A(S)·B(S)`
    ProductDot,
    /// `∂A/∂A` and `∂Aᵀ/∂A`
    IdentityTranspose,
    /// `∂A²/∂A`
    Square,
    /// `∂A⁻¹/∂A`
    Inverse,
    /// `Ψ(S)Λ(S)`
    ScalarTimesTensor,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::ChainScalar,
        Rule::ChainTensor,
        Rule::ProductDot,
        Rule::IdentityTranspose,
        Rule::Square,
        Rule::Inverse,
        Rule::ScalarTimesTensor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::ChainScalar => "chain-scalar",
            Rule::ChainTensor => "chain-tensor",
            Rule::ProductDot => "product-dot",
            Rule::IdentityTranspose => "identity-transpose",
            Rule::Square => "square",
            Rule::Inverse => "inverse",
            Rule::ScalarTimesTensor => "scalar-times-tensor",
        }
    }

    /// Whether the rule also has a finite-difference cross-check.
    pub fn has_fd_check(self) -> bool {
        matches!(
            self,
            Rule::ChainScalar | Rule::ChainTensor | Rule::ProductDot | Rule::ScalarTimesTensor
        )
    }

    fn id(self) -> u32 {
        70 + Rule::ALL.iter().position(|&r| r == self).unwrap() as u32
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown differentiation rule `{s}`")))
    }
}

/// The three spellings of one rule evaluated on the same inputs.
struct Spellings {
    group1: AnyTensor<f64>,
    group2_native: AnyTensor<f64>,
    group3: AnyTensor<f64>,
    scale: f64,
}

impl Spellings {
    fn four(g1: Tensor4<f64>, g2: Tensor4<f64>, g3: Tensor4<f64>, scale: f64) -> Self {
        Spellings {
            group1: g1.into(),
            group2_native: to_group3(&g2).into(),
            group3: g3.into(),
            scale,
        }
    }

    fn with_check(self, ok: bool) -> Result<Self> {
        if ok {
            Ok(self)
        } else {
            Err(Error::Argument(
                "constant derivative differs from its isotropic tensor".into(),
            ))
        }
    }

    fn disagreement(&self) -> f64 {
        let d = |x: &AnyTensor<f64>, y: &AnyTensor<f64>| x.max_abs_diff(y).expect("spellings share a rank");
        d(&self.group1, &self.group3).max(d(&self.group2_native, &self.group3))
    }
}

fn spellings<R: Rng>(rule: Rule, rng: &mut R) -> Result<Spellings> {
    let i = Tensor2::<f64>::identity();
    let c2 = iso::<f64>(IsoKind::II);
    Ok(match rule {
        Rule::ChainScalar => {
            let (dphi, da) = (uniform2(rng), uniform4(rng));
            Spellings {
                group1: dphi.ddot_seq(&c2).ddot_seq(&da).into(),
                group2_native: dphi.ddot_pos(&to_group2(&da)).into(),
                group3: chain_scalar(&dphi, &da).into(),
                scale: dphi.max_abs() * da.max_abs(),
            }
        }
        Rule::ChainTensor => {
            let (dphi, da) = (uniform4(rng), uniform4(rng));
            Spellings::four(
                dphi.ddot_seq(&c2).ddot_seq(&da),
                to_group2(&dphi).ddot_pos(&to_group2(&da)),
                chain_tensor(&dphi, &da),
                dphi.max_abs() * da.max_abs(),
            )
        }
        Rule::ProductDot => {
            let (a, da, b, db) = (uniform2(rng), uniform4(rng), uniform2(rng), uniform4(rng));
            Spellings::four(
                boxprod(&a, &i).ddot_cross(&db) + boxprod(&i, &b.transpose()).ddot_cross(&da),
                to_group2(&da).dot(&b) + a.dot(&to_group2(&db)),
                product_rule_dot(&a, &da, &b, &db),
                (a.max_abs() * db.max_abs()).max(da.max_abs() * b.max_abs()),
            )
        }
        Rule::IdentityTranspose => {
            let a = uniform2(rng);
            let c3 = iso::<f64>(IsoKind::III);
            // both constants stacked so one comparison covers them
            let stack = |x: Tensor4<f64>, y: Tensor4<f64>| x + y * 2.0;
            Spellings::four(
                stack(boxprod(&i, &i), boxhat(&i, &i)),
                stack(outer(&i, &i), boxprod(&i, &i)),
                stack(d_identity(&a), d_transpose(&a)),
                0.0,
            )
            .with_check(d_identity(&a) == c2 && d_transpose(&a) == c3)?
        }
        Rule::Square => {
            let a = uniform2(rng);
            Spellings::four(
                boxprod(&a, &i) + boxprod(&i, &a.transpose()),
                outer(&i, &a) + outer(&a, &i),
                d_square(&a),
                a.max_abs(),
            )
        }
        Rule::Inverse => {
            let a = well_conditioned(rng);
            let b = inverse(&a)?;
            Spellings::four(
                -boxprod(&b, &b.transpose()),
                -outer(&b, &b),
                d_inverse(&a)?,
                b.max_abs() * b.max_abs(),
            )
        }
        Rule::ScalarTimesTensor => {
            let (lam, dpsi, dlam) = (uniform2(rng), uniform2(rng), uniform4(rng));
            let psi = rng.random_range(-1.0..=1.0);
            Spellings::four(
                transpose4(&boxprod(&lam, &dpsi), Transpose4::Ti) + dlam * psi,
                boxhat(&lam, &dpsi) + to_group2(&dlam) * psi,
                product_rule_scalar_tensor(&lam, &dpsi, psi, &dlam),
                (lam.max_abs() * dpsi.max_abs()).max(dlam.max_abs()),
            )
        }
    })
}

/// For each trial draws random inputs for `rule` and compares the ⊠-spelled
/// native form, the alternative-layout form mapped back through
/// [`to_group3`], and the native form.
pub fn cross_convention_verify(rule: Rule, seed: u64, trials: u32) -> CheckReport {
    let mut check = Check::new(format!("cross-convention {rule}"), seed, tol::IDENTITY);
    for t in 0..trials {
        match spellings(rule, &mut trial_rng(seed, rule.id(), t)) {
            Ok(s) => check.record_scaled(s.disagreement(), s.scale),
            Err(_) => check.record_abs(f64::INFINITY),
        }
    }
    check.finish()
}

fn composite(
    name: &str,
    arity: Arity,
    f: impl Fn(&Tensor2<f64>) -> AnyTensor<f64> + Send + Sync + 'static,
) -> TensorFunction {
    TensorFunction::new(
        name,
        arity,
        move |s| Ok(f(s)),
        |_| Err(Error::Argument("composite has no closed form".into())),
    )
}

/// A concrete instance of `rule` with its chain/product-rule derivative,
/// evaluated at `s`, against central differences of the composite.
fn fd_instance(rule: Rule, s: &Tensor2<f64>) -> Result<Option<(f64, f64)>> {
    let cfg = FDConfig::default();
    let (analytic, fd): (AnyTensor<f64>, AnyTensor<f64>) = match rule {
        Rule::ChainScalar => {
            // φ = I₂, A(S) = S²
            let f = composite("I2(S²)", Arity::Scalar, |s| {
                AnyTensor::Scalar(invariants(&s.dot(s)).i2)
            });
            let an = chain_scalar(&d_invariant(2, &s.dot(s))?, &d_square(s));
            (an.into(), fd_scalar_derivative(&f, s, &cfg)?.into())
        }
        Rule::ChainTensor => {
            // Φ = A⁻¹, A(S) = S²
            let f = composite("(S²)⁻¹", Arity::Tensor, |s| {
                AnyTensor::Two(inverse(&s.dot(s)).unwrap_or_else(|_| Tensor2::zero()))
            });
            let an = chain_tensor(&d_inverse(&s.dot(s))?, &d_square(s));
            (an.into(), fd_tensor_derivative(&f, s, &cfg)?.into())
        }
        Rule::ProductDot => {
            // A(S) = Sᵀ, B(S) = S²
            let f = composite("Sᵀ·S²", Arity::Tensor, |s| {
                AnyTensor::Two(s.transpose().dot(&s.dot(s)))
            });
            let an = product_rule_dot(&s.transpose(), &d_transpose(s), &s.dot(s), &d_square(s));
            (an.into(), fd_tensor_derivative(&f, s, &cfg)?.into())
        }
        Rule::ScalarTimesTensor => {
            // Ψ = I₂(S), Λ = S²
            let f = composite("I₂(S)S²", Arity::Tensor, |s| {
                AnyTensor::Two(s.dot(s) * invariants(s).i2)
            });
            let an = product_rule_scalar_tensor(&s.dot(s), &d_invariant(2, s)?, invariants(s).i2, &d_square(s));
            (an.into(), fd_tensor_derivative(&f, s, &cfg)?.into())
        }
        _ => return Ok(None),
    };
    let err = analytic.max_abs_diff(&fd).expect("same rank");
    Ok(Some((err, analytic.max_abs())))
}

/// Finite-difference cross-check of a rule at random near-identity points,
/// or `None` for rules without one.
pub fn cross_convention_fd_check(rule: Rule, seed: u64, trials: u32) -> Option<CheckReport> {
    if !rule.has_fd_check() {
        return None;
    }
    let mut check = Check::new(format!("cross-convention {rule} vs FD"), seed, tol::FD_COMPOSITE);
    for t in 0..trials {
        let s = near_identity(&mut trial_rng(seed, rule.id() + 10, t), 0.3);
        match fd_instance(rule, &s) {
            Ok(Some((err, scale))) => check.record_scaled(err, scale),
            _ => check.record_abs(f64::INFINITY),
        }
    }
    Some(check.finish())
}

/// `to_group2(∂F/∂A)` against [`group2_closed_form`] for every tensor-valued
/// catalog function.
pub fn closed_form_checks(seed: u64, trials: u32) -> Vec<CheckReport> {
    ["id", "transpose", "square", "cube", "inverse"]
        .into_iter()
        .enumerate()
        .map(|(n, name)| {
            let f = lookup(name).expect("catalog name");
            let mut check = Check::new(format!("alternative layout of ∂{name}/∂A"), seed, tol::IDENTITY);
            for t in 0..trials {
                let a = well_conditioned(&mut trial_rng(seed, 90 + n as u32, t));
                let outcome = f.derivative(&a).and_then(|l| match l {
                    AnyTensor::Four(l) => Ok((to_group2(&l), group2_closed_form(name, &a)?, l.max_abs())),
                    _ => Err(Error::Argument("tensor-valued".into())),
                });
                match outcome {
                    Ok((mapped, closed, scale)) => check.record_scaled(mapped.max_abs_diff(&closed), scale),
                    Err(_) => check.record_abs(f64::INFINITY),
                }
            }
            check.finish()
        })
        .collect()
}

/// `pos_dot` at slot 2 in the alternative layout: `(L *² B)* = L*·B`.
pub fn pos_dot_layout_residual(l: &Tensor4<f64>, b: &Tensor2<f64>) -> f64 {
    to_group2(&pos_dot(l, b, 2).expect("slot 2 exists")).max_abs_diff(&to_group2(l).dot(b))
}
