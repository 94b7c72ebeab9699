use tenderiv::calculus::{
    chain_tensor, d_invariant, d_inverse, d_square, fd_tensor_derivative, gato_derivative, linearization_check,
    linearization_ratios, lookup, product_rule_scalar_tensor, Arity, FDConfig, TensorFunction,
};
use tenderiv::invariants::{invariants, inverse};
use tenderiv::iso::{iso, IsoKind};
use tenderiv::products::outer;
use tenderiv::sample::{near_identity, trial_rng, uniform2};
use tenderiv::{AnyTensor, Dot, Error, Ten2, Ten4};

fn tensor_fn(name: &str, f: impl Fn(&Ten2) -> Ten2 + Send + Sync + 'static) -> TensorFunction {
    TensorFunction::new(
        name,
        Arity::Tensor,
        move |a| Ok(AnyTensor::Two(f(a))),
        |_| Err(Error::Argument("no closed form".into())),
    )
}

fn d() -> Ten2 {
    Ten2::diag([1.0, 2.0, 3.0])
}

#[test]
fn square_and_inverse_at_diagonal() {
    let b = [1.0, 0.5, 1.0 / 3.0];
    let sq = d_square(&d());
    let inv = d_inverse(&d()).unwrap();
    let dd = [1.0, 2.0, 3.0];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for p in 0..3 {
                    let mut want_sq = 0.0;
                    if i == k && p == j {
                        want_sq += dd[p];
                    }
                    if i == k && j == p {
                        want_sq += dd[i];
                    }
                    assert_eq!(sq[[i, j, k, p]], want_sq);
                    let want_inv = if i == k && p == j { -b[i] * b[p] } else { 0.0 };
                    assert!((inv[[i, j, k, p]] - want_inv).abs() < 1e-16);
                }
            }
        }
    }
    let fd = fd_tensor_derivative(&lookup("square").unwrap(), &d(), &FDConfig::default()).unwrap();
    assert!(fd.max_abs_diff(&sq) < 1e-9);
}

#[test]
fn inverse_near_identity_matches_fd() {
    let f = lookup("inverse").unwrap();
    for t in 0..20 {
        let a = Ten2::identity() + uniform2(&mut trial_rng(3, 0, t)) * 0.3;
        let an = d_inverse(&a).unwrap();
        let fd = fd_tensor_derivative(&f, &a, &FDConfig::default()).unwrap();
        assert!(an.max_abs_diff(&fd) < 1e-8);
    }
}

#[test]
fn inverse_of_square_by_chain_rule() {
    let f = tensor_fn("(S²)⁻¹", |s| inverse(&s.dot(s)).unwrap());
    for t in 0..20 {
        let s = Ten2::identity() + uniform2(&mut trial_rng(4, 0, t)) * 0.2;
        let an = chain_tensor(&d_inverse(&s.dot(&s)).unwrap(), &d_square(&s));
        let fd = fd_tensor_derivative(&f, &s, &FDConfig::default()).unwrap();
        assert!(an.max_abs_diff(&fd) < 1e-7);
    }
}

#[test]
fn trace_weighted_constant() {
    let lam = Ten2::from_rows([[0.2, -1.0, 0.4], [0.0, 0.7, 0.3], [1.5, -0.2, 0.9]]);
    let f = tensor_fn("I1(S)Λ", move |s| lam * s.trace());
    let s = uniform2(&mut trial_rng(5, 0, 0));
    let an = product_rule_scalar_tensor(&lam, &d_invariant(1, &s).unwrap(), s.trace(), &Ten4::zero());
    assert_eq!(an, outer(&lam, &Ten2::identity()));
    let fd = fd_tensor_derivative(&f, &s, &FDConfig::default()).unwrap();
    assert!(an.max_abs_diff(&fd) < 1e-9);
}

#[test]
fn second_invariant_times_square() {
    let f = tensor_fn("I2(S)S²", |s| s.dot(s) * invariants(s).i2);
    let s = d();
    let an = product_rule_scalar_tensor(
        &s.dot(&s),
        &d_invariant(2, &s).unwrap(),
        invariants(&s).i2,
        &d_square(&s),
    );
    let fd = fd_tensor_derivative(&f, &s, &FDConfig::default()).unwrap();
    assert!(an.max_abs_diff(&fd) < 1e-8);
}

#[test]
fn directional_derivative_of_square() {
    let sq = lookup("square").unwrap();
    let e12 = Ten2::unit(0, 1);
    let g = gato_derivative(&sq, &d(), &e12, &FDConfig::default()).unwrap();
    let want = e12.dot(&d()) + d().dot(&e12);
    assert_eq!(want, e12 * 3.0);
    assert!(g.max_abs_diff(&AnyTensor::Two(want)).unwrap() < 1e-9);
}

#[test]
fn remainders_shrink_quadratically() {
    let id = lookup("id").unwrap();
    assert!(linearization_check(&id, &d(), &uniform2(&mut trial_rng(1, 0, 0))).unwrap() < 1e-15);
    for name in ["square", "inverse"] {
        let f = lookup(name).unwrap();
        for t in 0..10 {
            let rng = &mut trial_rng(6, 0, t);
            let a = near_identity(rng, 0.3);
            let delta = uniform2(rng) * 0.02;
            for r in linearization_ratios(&f, &a, &delta, 3).unwrap() {
                assert!((3.5..=4.5).contains(&r), "{name}: {r}");
            }
        }
    }
    let singular = Ten2::diag([1.0, 1.0, 0.0]);
    assert!(matches!(
        linearization_check(&lookup("inverse").unwrap(), &singular, &d()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn constant_derivatives() {
    let a = uniform2(&mut trial_rng(7, 0, 0));
    let id = lookup("id").unwrap().derivative(&a).unwrap();
    let tr = lookup("transpose").unwrap().derivative(&a).unwrap();
    assert_eq!(id, AnyTensor::Four(iso(IsoKind::II)));
    assert_eq!(tr, AnyTensor::Four(iso(IsoKind::III)));
}
