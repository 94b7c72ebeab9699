use num_rational::Rational64;

use tenderiv::bridge::{group2_closed_form, to_group2, to_group3};
use tenderiv::calculus::{d_cube, d_i3_compact, d_i3_expanded, d_inverse, d_square, product_rule_dot};
use tenderiv::invariants::{hamilton_cayley_residual, invariants, inverse};
use tenderiv::iso::{iso, iso_contract, iso_role, IsoKind, Side};
use tenderiv::products::{boxprod, outer};
use tenderiv::{Dot, DoubleDot, Scheme, Ten2Exact, Ten2F32, Ten4Exact, Ten4F32};

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn sample() -> Ten2Exact {
    Ten2Exact::from_rows([
        [q(1, 2), q(-3, 4), q(2, 1)],
        [q(5, 3), q(1, 1), q(-1, 7)],
        [q(1, 1), q(2, 5), q(-6, 5)],
    ])
}

#[test]
fn isotropic_roles_exact() {
    let a = sample();
    for scheme in Scheme::ALL {
        for kind in IsoKind::ALL {
            for side in [Side::Left, Side::Right] {
                assert_eq!(iso_contract(scheme, kind, &a, side), iso_role(scheme, kind).apply(&a));
            }
        }
    }
    let c2 = iso::<Rational64>(IsoKind::II);
    assert_eq!(c2.ddot_seq(&c2), iso(IsoKind::III));
}

#[test]
fn invariants_exact() {
    let a = sample();
    assert_eq!(hamilton_cayley_residual(&a), Ten2Exact::zero());
    assert_eq!(invariants(&a).i3, a.det());
    assert_eq!(d_i3_compact(&a).unwrap(), d_i3_expanded(&a));
}

#[test]
fn derivative_identities_exact() {
    let a = sample();
    let b = inverse(&a).unwrap();
    let c2 = iso::<Rational64>(IsoKind::II);
    // d(A·A⁻¹)/dA vanishes identically
    assert_eq!(
        product_rule_dot(&a, &c2, &b, &d_inverse(&a).unwrap()),
        Ten4Exact::zero()
    );
    assert_eq!(to_group2(&d_square(&a)), group2_closed_form("square", &a).unwrap());
    assert_eq!(to_group2(&d_cube(&a)), group2_closed_form("cube", &a).unwrap());
    assert_eq!(
        to_group2(&d_inverse(&a).unwrap()),
        group2_closed_form("inverse", &a).unwrap()
    );
    assert_eq!(d_inverse(&a).unwrap(), -boxprod(&b, &b.transpose()));
    let i = Ten2Exact::identity();
    assert_eq!(d_square(&a), boxprod(&a, &i) + boxprod(&i, &a.transpose()));
    assert_eq!(to_group3(&(outer(&i, &a) + outer(&a, &i))), d_square(&a));
    assert_eq!(a.dot(&b), i);
}

#[test]
fn single_precision_aliases() {
    let a = Ten2F32::from_rows([[0.5, 0.25, 0.0], [0.0, 1.0, -0.5], [0.125, 0.0, 2.0]]);
    let c: Ten4F32 = iso(IsoKind::III);
    assert_eq!(a.ddot_cross(&c), a.transpose());
    assert!(hamilton_cayley_residual(&a).max_abs() < 1e-5);
    assert!(inverse(&a).unwrap().dot(&a).max_abs_diff(&Ten2F32::identity()) < 1e-6);
}
