//! Seeded property suites over random inputs.
//!
//! Each function returns one or more [`CheckReport`]s. Trial `t` of a check
//! draws from `trial_rng(seed, id, t)` with a fixed `id` per check, so
//! reports depend only on the seed and trial count.

use std::time::Instant;

use rand::Rng;

use crate::basis::{from_components, to_components};
use crate::basis::{make_basis, verify_basis_invariance, ProductOp, Variance};
use crate::bridge::{
    closed_form_checks, cross_convention_fd_check, cross_convention_verify, to_group2, to_group3,
    verify_isotropic_compositions, verify_layout_composition, verify_layout_contraction, Rule,
};
use crate::calculus::{
    catalog, chain_scalar, chain_tensor, d_i3_compact, d_i3_expanded, d_invariant, d_square, d_transpose, directional,
    fd_derivative, fd_scalar_derivative, fd_tensor_derivative, gato_derivative, linearization_ratios, lookup,
    product_rule_dot, Arity, FDConfig, TensorFunction,
};
use crate::invariants::{hamilton_cayley_residual, invariants, inverse};
use crate::iso::{iso, iso_contract, iso_role, isotropy_check, IsoKind, Side};
use crate::products::{boxhat, boxprod, outer, transpose4, Dot, DoubleDot, Scheme, Transpose4};
use crate::report::{tol, Check, CheckReport, RunSummary};
use crate::sample::{frame, near_identity, orthogonal, trial_rng, uniform2, uniform4, well_conditioned};
use crate::tensor::{AnyTensor, Tensor2};

fn ten2_pair<R: Rng>(rng: &mut R) -> (Tensor2<f64>, Tensor2<f64>) {
    (uniform2(rng), uniform2(rng))
}

/// Every scheme × isotropic tensor × side against its tabulated role.
pub fn iso_roles(seed: u64, trials: u32) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for (si, scheme) in Scheme::ALL.into_iter().enumerate() {
        for (ki, kind) in IsoKind::ALL.into_iter().enumerate() {
            for (di, side) in [Side::Left, Side::Right].into_iter().enumerate() {
                let side_name = if side == Side::Left { "A*C" } else { "C*A" };
                let mut check = Check::new(format!("role {scheme} {kind} {side_name}"), seed, tol::IDENTITY);
                let id = 100 + (si * 6 + ki * 2 + di) as u32;
                for t in 0..trials {
                    let a = uniform2(&mut trial_rng(seed, id, t));
                    let err = iso_contract(scheme, kind, &a, side).max_abs_diff(&iso_role(scheme, kind).apply(&a));
                    check.record_scaled(err, a.max_abs());
                }
                out.push(check.finish());
            }
        }
    }
    out
}

/// Relations among the double products of second-rank tensors.
pub fn ddot_identities(seed: u64, trials: u32) -> Vec<CheckReport> {
    let mut transposition = Check::new("(··) via ·· and transposes", seed, tol::IDENTITY);
    let mut symmetry = Check::new("··, (··) symmetric and transpose-invariant", seed, tol::IDENTITY);
    let mut assoc = Check::new("double products absorb single contraction", seed, tol::IDENTITY);
    let mut pos = Check::new("[··] = (··) on second rank", seed, tol::IDENTITY);
    for t in 0..trials {
        let rng = &mut trial_rng(seed, 1, t);
        let (a, b) = ten2_pair(rng);
        let c = uniform2(rng);
        let s = a.max_abs() * b.max_abs();

        let cross = a.ddot_cross(&b);
        let err = (cross - a.ddot_seq(&b.transpose()))
            .abs()
            .max((cross - a.transpose().ddot_seq(&b)).abs());
        transposition.record_scaled(err, s);

        let mut err: f64 = 0.0;
        for f in [
            |x: &Tensor2<f64>, y: &Tensor2<f64>| x.ddot_seq(y),
            |x: &Tensor2<f64>, y: &Tensor2<f64>| x.ddot_cross(y),
        ] {
            let v = f(&a, &b);
            err = err
                .max((v - f(&b, &a)).abs())
                .max((v - f(&a.transpose(), &b.transpose())).abs());
        }
        symmetry.record_scaled(err, s);

        let s3 = s * c.max_abs();
        let e1 = a.ddot_seq(&b.dot(&c)) - a.dot(&b).ddot_seq(&c);
        let e2 = a.ddot_cross(&b.dot(&c)) - a.transpose().dot(&b).ddot_cross(&c.transpose());
        assoc.record_scaled(e1.abs().max(e2.abs()), s3);

        pos.record_scaled((a.ddot_pos(&b) - cross).abs(), s);
    }
    vec![transposition.finish(), symmetry.finish(), assoc.finish(), pos.finish()]
}

/// `x(··)y = (x··C_II)··y = x··(C_II··y)` for every rank pairing.
pub fn cross_via_seq(seed: u64, trials: u32) -> Vec<CheckReport> {
    let c2 = iso::<f64>(IsoKind::II);
    let c2a = AnyTensor::Four(c2);
    let mut out = Vec::new();
    for (n, (rl, rr)) in [(2, 2), (2, 4), (4, 2), (4, 4)].into_iter().enumerate() {
        let mut check = Check::new(format!("(··) = ··C_II·· on {rl}·{rr}"), seed, tol::IDENTITY);
        for t in 0..trials {
            let rng = &mut trial_rng(seed, 10 + n as u32, t);
            let mut draw = |r: usize| -> AnyTensor<f64> {
                if r == 2 {
                    uniform2(rng).into()
                } else {
                    uniform4(rng).into()
                }
            };
            let (x, y) = (draw(rl), draw(rr));
            let ddot = crate::products::ddot;
            let cross = ddot(Scheme::Cross, &x, &y).expect("valid ranks");
            let left = ddot(Scheme::Seq, &ddot(Scheme::Seq, &x, &c2a).expect("valid"), &y).expect("valid");
            let right = ddot(Scheme::Seq, &x, &ddot(Scheme::Seq, &c2a, &y).expect("valid")).expect("valid");
            let err = cross
                .max_abs_diff(&left)
                .expect("same rank")
                .max(cross.max_abs_diff(&right).expect("same rank"));
            check.record_scaled(err, x.max_abs() * y.max_abs());
        }
        out.push(check.finish());
    }
    out
}

/// Four-slot transposes: involutions, and the ⊠/⊠̂ forms of transposed
/// outer products.
pub fn transpose_identities(seed: u64, trials: u32) -> Vec<CheckReport> {
    let mut involution = Check::new("ti, dr, dl are involutions", seed, tol::IDENTITY);
    let mut dyads = Check::new("(A⊗B)^ti = A⊠B, ((A⊗B)^ti)^dr = A⊠̂B", seed, tol::IDENTITY);
    for t in 0..trials {
        let rng = &mut trial_rng(seed, 20, t);
        let m = uniform4(rng);
        let err = [Transpose4::Ti, Transpose4::Dr, Transpose4::Dl]
            .into_iter()
            .map(|k| transpose4(&transpose4(&m, k), k).max_abs_diff(&m))
            .fold(0.0, f64::max);
        involution.record_scaled(err, m.max_abs());
        let (a, b) = ten2_pair(rng);
        let ti = transpose4(&outer(&a, &b), Transpose4::Ti);
        let err = ti
            .max_abs_diff(&boxprod(&a, &b))
            .max(transpose4(&ti, Transpose4::Dr).max_abs_diff(&boxhat(&a, &b)));
        dyads.record_scaled(err, a.max_abs() * b.max_abs());
    }
    vec![involution.finish(), dyads.finish()]
}

/// `A³ − I₁A² + I₂A − I₃I` relative to `1 + |A|³`.
pub fn hamilton_cayley(seed: u64, trials: u32) -> CheckReport {
    let mut check = Check::new("Hamilton-Cayley residual", seed, tol::IDENTITY);
    for t in 0..trials {
        let a = uniform2(&mut trial_rng(seed, 30, t));
        check.record_scaled(hamilton_cayley_residual(&a).max_abs(), a.max_abs().powi(3));
    }
    check.finish()
}

/// Rotation invariance of each isotropic tensor under random orthogonal `Q`.
pub fn isotropy(seed: u64, trials: u32) -> Vec<CheckReport> {
    IsoKind::ALL
        .into_iter()
        .enumerate()
        .map(|(n, kind)| {
            let mut check = Check::new(format!("isotropy of {kind}"), seed, tol::IDENTITY);
            for t in 0..trials {
                let q = orthogonal(&mut trial_rng(seed, 40 + n as u32, t));
                match isotropy_check(kind, &q) {
                    Ok(r) => check.record(r.max_abs_err, 1.0),
                    Err(_) => check.record_abs(f64::INFINITY),
                }
            }
            check.finish()
        })
        .collect()
}

/// Every product evaluated over components in random skewed bases with
/// random variance patterns, plus component roundtrips of the isotropic
/// tensors.
pub fn basis_invariance(seed: u64, trials: u32) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for (n, op) in ProductOp::ALL.into_iter().enumerate() {
        let mut check = Check::new(format!("basis invariance of {op}"), seed, tol::IDENTITY);
        for t in 0..trials {
            let rng = &mut trial_rng(seed, 50 + n as u32, t);
            let f = frame(rng);
            let b = match make_basis(f[0], f[1], f[2]) {
                Ok(b) => b,
                Err(_) => {
                    check.record_abs(f64::INFINITY);
                    continue;
                }
            };
            for &(rl, rr) in op.rank_pairs() {
                let mut draw = |r: usize| -> (AnyTensor<f64>, Variance) {
                    let pats = Variance::all(r);
                    let v = pats[rng.random_range(0..pats.len())].clone();
                    let x = if r == 2 {
                        uniform2(rng).into()
                    } else {
                        uniform4(rng).into()
                    };
                    (x, v)
                };
                let (x, vx) = draw(rl);
                let (y, vy) = draw(rr);
                match verify_basis_invariance(op, &x, &y, &b, &vx, &vy) {
                    Ok(r) => check.record(r.max_abs_err, 1.0),
                    Err(_) => check.record_abs(f64::INFINITY),
                }
            }
        }
        out.push(check.finish());
    }
    let mut roundtrip = Check::new("isotropic tensors from basis components", seed, tol::IDENTITY);
    for t in 0..trials {
        let f = frame(&mut trial_rng(seed, 59, t));
        let Ok(b) = make_basis(f[0], f[1], f[2]) else {
            roundtrip.record_abs(f64::INFINITY);
            continue;
        };
        roundtrip.record_scaled(b.duality_defect(), 0.0);
        for kind in IsoKind::ALL {
            let c: AnyTensor<f64> = iso::<f64>(kind).into();
            for v in Variance::all(4) {
                let back = to_components(&c, &b, &v).and_then(|k| from_components(&k, &b));
                match back {
                    Ok(back) => roundtrip.record_scaled(back.max_abs_diff(&c).expect("rank 4"), 1.0),
                    Err(_) => roundtrip.record_abs(f64::INFINITY),
                }
            }
        }
    }
    out.push(roundtrip.finish());
    out
}

/// Layout conversion and the rules that connect the two layouts.
pub fn bridge_suite(seed: u64, trials: u32) -> Vec<CheckReport> {
    let mut out = Vec::new();

    let mut constants = Check::new("layout images of C_II and C_III", seed, tol::IDENTITY);
    constants.record_abs(to_group2(&iso::<f64>(IsoKind::II)).max_abs_diff(&iso(IsoKind::I)));
    constants.record_abs(to_group2(&iso::<f64>(IsoKind::III)).max_abs_diff(&iso(IsoKind::II)));
    out.push(constants.finish());

    let mut roundtrip = Check::new("layout conversion roundtrip", seed, 0.0);
    let mut contraction = Check::new("layout contraction", seed, tol::IDENTITY);
    let mut composition = Check::new("layout composition", seed, tol::IDENTITY);
    for t in 0..trials {
        let rng = &mut trial_rng(seed, 61, t);
        let (m, a, y) = (uniform4(rng), uniform2(rng), uniform4(rng));
        roundtrip.record_abs(
            to_group3(&to_group2(&m))
                .max_abs_diff(&m)
                .max(to_group2(&to_group3(&m)).max_abs_diff(&m)),
        );
        contraction.record(verify_layout_contraction(&a, &m).max_abs_err, 1.0);
        composition.record(verify_layout_composition(&m, &y).max_abs_err, 1.0);
    }
    out.extend([roundtrip.finish(), contraction.finish(), composition.finish()]);
    out.push(verify_isotropic_compositions(seed, trials));

    for rule in Rule::ALL {
        out.push(cross_convention_verify(rule, seed, trials));
        out.extend(cross_convention_fd_check(rule, seed, trials));
    }
    out.extend(closed_form_checks(seed, trials));
    out
}

fn relative_scale(f: &TensorFunction, value: f64) -> (f64, f64) {
    let tol = if f.is_polynomial() {
        tol::FD_POLY_REL
    } else {
        tol::FD_INVERSE_REL
    };
    (tol, value.max(1.0))
}

fn draw_point<R: Rng>(f: &TensorFunction, rng: &mut R) -> Tensor2<f64> {
    if f.is_polynomial() {
        uniform2(rng)
    } else {
        well_conditioned(rng)
    }
}

/// Analytic derivatives of the catalog against central differences.
pub fn derivative_oracle(seed: u64, trials: u32) -> Vec<CheckReport> {
    let cfg = FDConfig::default();
    catalog()
        .iter()
        .enumerate()
        .map(|(n, f)| {
            let (tol, _) = relative_scale(f, 0.0);
            let mut check = Check::new(format!("∂{}/∂A analytic vs FD", f.name()), seed, tol);
            for t in 0..trials {
                let a = draw_point(f, &mut trial_rng(seed, 200 + n as u32, t));
                match (f.derivative(&a), fd_derivative(f, &a, &cfg)) {
                    (Ok(an), Ok(fd)) => check.record(an.max_abs_diff(&fd).expect("same rank"), an.max_abs().max(1.0)),
                    _ => check.record_abs(f64::INFINITY),
                }
            }
            check.finish()
        })
        .collect()
}

/// Closed-form values at fixed points, analytic and by finite differences.
pub fn spot_values(seed: u64, trials: u32) -> CheckReport {
    let cfg = FDConfig::default();
    let mut check = Check::new("derivative spot values", seed, tol::FD_SPOT);
    let d = Tensor2::diag([1.0, 2.0, 3.0]);
    let i = Tensor2::<f64>::identity();
    let c2 = iso::<f64>(IsoKind::II);
    let mut both = |name: &str, at: &Tensor2<f64>, want: AnyTensor<f64>| {
        let f = lookup(name).expect("catalog name");
        for got in [f.derivative(at), fd_derivative(&f, at, &cfg)] {
            match got {
                Ok(g) => check.record_abs(g.max_abs_diff(&want).unwrap_or(f64::INFINITY)),
                Err(_) => check.record_abs(f64::INFINITY),
            }
        }
    };
    for t in 0..trials {
        both("I1", &uniform2(&mut trial_rng(seed, 220, t)), i.into());
    }
    both("I2", &d, Tensor2::diag([5.0, 4.0, 3.0]).into());
    both("I3", &d, Tensor2::diag([6.0, 3.0, 2.0]).into());
    both("square", &i, (c2 * 2.0).into());
    both("inverse", &(i * 2.0), (c2 * -0.25).into());
    check.finish()
}

/// `I₃A⁻ᵀ` against `(A²)ᵀ − I₁Aᵀ + I₂I`, relative to the larger entry.
pub fn i3_forms(seed: u64, trials: u32) -> CheckReport {
    let mut check = Check::new("∂I₃/∂A compact vs expanded", seed, tol::IDENTITY);
    for t in 0..trials {
        let a = well_conditioned(&mut trial_rng(seed, 221, t));
        let expanded = d_i3_expanded(&a);
        match d_i3_compact(&a) {
            Ok(c) => check.record(c.max_abs_diff(&expanded), expanded.max_abs().max(f64::MIN_POSITIVE)),
            Err(_) => check.record_abs(f64::INFINITY),
        }
    }
    check.finish()
}

/// The five equivalent spellings of `dΦ = Φ_A ∘ dA`.
pub fn differential_forms(seed: u64, trials: u32) -> CheckReport {
    let mut check = Check::new("five forms of the scalar differential", seed, tol::IDENTITY);
    for t in 0..trials {
        let (g, da) = ten2_pair(&mut trial_rng(seed, 222, t));
        let forms = [
            g.ddot_cross(&da),
            g.ddot_pos(&da),
            g.ddot_seq(&da.transpose()),
            g.transpose().ddot_seq(&da),
            g.transpose().ddot_cross(&da.transpose()),
        ];
        let err = forms.iter().map(|v| (v - forms[0]).abs()).fold(0.0, f64::max);
        check.record_scaled(err, g.max_abs() * da.max_abs());
    }
    check.finish()
}

/// Directional finite differences against the contracted analytic derivative.
pub fn gato_consistency(seed: u64, trials: u32) -> Vec<CheckReport> {
    let cfg = FDConfig::default();
    catalog()
        .iter()
        .enumerate()
        .map(|(n, f)| {
            let (tol, _) = relative_scale(f, 0.0);
            let mut check = Check::new(format!("directional derivative of {}", f.name()), seed, tol);
            for t in 0..trials {
                let rng = &mut trial_rng(seed, 240 + n as u32, t);
                let a = draw_point(f, rng);
                let dir = uniform2(rng);
                let analytic = f.derivative(&a).and_then(|l| directional(&l, &dir));
                match (analytic, gato_derivative(f, &a, &dir, &cfg)) {
                    (Ok(x), Ok(y)) => check.record(x.max_abs_diff(&y).expect("same rank"), x.max_abs().max(1.0)),
                    _ => check.record_abs(f64::INFINITY),
                }
            }
            check.finish()
        })
        .collect()
}

/// Chain- and product-rule compositions against finite differences of the
/// composite, and `∂(S·S⁻¹)/∂S = 0`.
pub fn composition_rules(seed: u64, trials: u32) -> Vec<CheckReport> {
    let cfg = FDConfig::default();
    let mut scalar = Check::new("chain rule: I₂(Sᵀ)", seed, tol::FD_COMPOSITE);
    let mut tensor = Check::new("chain rule: (Sᵀ)²", seed, tol::FD_COMPOSITE);
    let mut unit = Check::new("∂(S·S⁻¹)/∂S = 0", seed, 1e-8);
    let i2t = TensorFunction::new(
        "I2(Sᵀ)",
        Arity::Scalar,
        |s| Ok(AnyTensor::Scalar(invariants(&s.transpose()).i2)),
        |_| unreachable!(),
    );
    let sqt = TensorFunction::new(
        "(Sᵀ)²",
        Arity::Tensor,
        |s| Ok(AnyTensor::Two(s.transpose().dot(&s.transpose()))),
        |_| unreachable!(),
    );
    let c2 = iso::<f64>(IsoKind::II);
    for t in 0..trials {
        let rng = &mut trial_rng(seed, 260, t);
        let s = uniform2(rng);
        let an = chain_scalar(&d_invariant(2, &s.transpose()).expect("order 2"), &d_transpose(&s));
        match fd_scalar_derivative(&i2t, &s, &cfg) {
            Ok(fd) => scalar.record_scaled(an.max_abs_diff(&fd), an.max_abs()),
            Err(_) => scalar.record_abs(f64::INFINITY),
        }
        let an = chain_tensor(&d_square(&s.transpose()), &d_transpose(&s));
        match fd_tensor_derivative(&sqt, &s, &cfg) {
            Ok(fd) => tensor.record_scaled(an.max_abs_diff(&fd), an.max_abs()),
            Err(_) => tensor.record_abs(f64::INFINITY),
        }
        let w = well_conditioned(rng);
        match (inverse(&w), crate::calculus::d_inverse(&w)) {
            (Ok(b), Ok(db)) => unit.record_abs(product_rule_dot(&w, &c2, &b, &db).max_abs()),
            _ => unit.record_abs(f64::INFINITY),
        }
    }
    vec![scalar.finish(), tensor.finish(), unit.finish()]
}

/// Remainder ratios under three halvings of the increment, for `A²` and
/// `A⁻¹`. The recorded error is the distance of the worst ratio from 4.
pub fn linearization_order(seed: u64, trials: u32) -> Vec<CheckReport> {
    let (lo, hi) = tol::LINEARIZATION_RATIO;
    let centre = 0.5 * (lo + hi);
    ["square", "inverse"]
        .into_iter()
        .enumerate()
        .map(|(n, name)| {
            let f = lookup(name).expect("catalog name");
            let mut check = Check::new(format!("linearization order of {name}"), seed, 0.5 * (hi - lo));
            for t in 0..trials {
                let rng = &mut trial_rng(seed, 280 + n as u32, t);
                let a = near_identity(rng, 0.3);
                let delta = uniform2(rng) * 0.02;
                match linearization_ratios(&f, &a, &delta, 3) {
                    Ok(r) => check.record_abs(r.iter().map(|x| (x - centre).abs()).fold(0.0, f64::max)),
                    Err(_) => check.record_abs(f64::INFINITY),
                }
            }
            check.finish()
        })
        .collect()
}

/// Algebraic identities: products, isotropic tensors, bases and layouts.
pub fn algebra_suite(seed: u64, trials: u32) -> Vec<CheckReport> {
    let mut out = iso_roles(seed, trials);
    out.extend(ddot_identities(seed, trials));
    out.extend(cross_via_seq(seed, trials));
    out.extend(transpose_identities(seed, trials));
    out.push(hamilton_cayley(seed, trials));
    out.extend(isotropy(seed, trials));
    out.extend(basis_invariance(seed, trials));
    out.extend(bridge_suite(seed, trials));
    out
}

/// Derivative catalog, oracles and composition rules.
pub fn calculus_suite(seed: u64, trials: u32) -> Vec<CheckReport> {
    let mut out = derivative_oracle(seed, trials);
    out.push(spot_values(seed, trials));
    out.push(i3_forms(seed, trials));
    out.push(differential_forms(seed, trials));
    out.extend(gato_consistency(seed, trials));
    out.extend(composition_rules(seed, trials));
    out.extend(linearization_order(seed, trials));
    out
}

/// Runs every suite. Reports at the default identity tolerance are
/// re-judged against `identity_tol` when one is given.
pub fn run_identities(seed: u64, trials: u32, identity_tol: Option<f64>) -> RunSummary {
    let start = Instant::now();
    let mut reports = algebra_suite(seed, trials);
    reports.extend(calculus_suite(seed, trials));
    if let Some(t) = identity_tol {
        for r in reports.iter_mut().filter(|r| r.tol == tol::IDENTITY) {
            r.tol = t;
            r.pass = r.max_abs_err <= t;
        }
    }
    RunSummary::new(reports, start.elapsed().as_millis() as u64)
}
