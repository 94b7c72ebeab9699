//! Seeded random inputs for the property suites.
//!
//! Every trial draws from its own ChaCha8 stream: the run seed selects the
//! key and `(check id, trial index)` selects the 64-bit stream number, so a
//! trial's inputs do not depend on which other trials ran or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::invariants::inverse;
use crate::{Tensor2, Tensor4};

/// Minimum `|det|` for inputs of inverse-dependent functions.
pub const MIN_DET: f64 = 0.1;
/// Maximum Frobenius condition number for inputs of inverse-dependent functions.
pub const MAX_COND: f64 = 50.0;
/// Minimum `|r₁·(r₂×r₃)|` for random frames.
pub const MIN_TRIPLE: f64 = 0.2;

pub fn trial_rng(seed: u64, check_id: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((check_id as u64) << 32) | trial as u64);
    rng
}

/// Entries uniform in `[-1, 1]`.
pub fn uniform2<R: Rng + ?Sized>(rng: &mut R) -> Tensor2<f64> {
    Tensor2::from_fn(|_, _| rng.random_range(-1.0..=1.0))
}

pub fn uniform4<R: Rng + ?Sized>(rng: &mut R) -> Tensor4<f64> {
    Tensor4::from_fn(|_, _, _, _| rng.random_range(-1.0..=1.0))
}

pub fn frobenius(a: &Tensor2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `‖A‖_F ‖A⁻¹‖_F`, an upper bound on the spectral condition number.
/// Infinite for singular input.
pub fn condition(a: &Tensor2<f64>) -> f64 {
    match inverse(a) {
        Ok(inv) => frobenius(a) * frobenius(&inv),
        Err(_) => f64::INFINITY,
    }
}

/// Uniform entries, resampled until `|det| ≥ MIN_DET` and condition `≤ MAX_COND`.
pub fn well_conditioned<R: Rng + ?Sized>(rng: &mut R) -> Tensor2<f64> {
    loop {
        let a = uniform2(rng);
        if a.det().abs() >= MIN_DET && condition(&a) <= MAX_COND {
            return a;
        }
    }
}

/// `I + scale·U` with `U` uniform, resampled while it violates the same
/// conditioning bounds as [`well_conditioned`].
pub fn near_identity<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Tensor2<f64> {
    loop {
        let a = Tensor2::identity() + uniform2(rng) * scale;
        if a.det().abs() >= MIN_DET && condition(&a) <= MAX_COND {
            return a;
        }
    }
}

/// Orthogonal tensor from Gram–Schmidt on the rows of a random matrix.
/// The determinant may be either sign.
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R) -> Tensor2<f64> {
    loop {
        let m = uniform2(rng).rows();
        let mut q = [[0.0; 3]; 3];
        let mut ok = true;
        for i in 0..3 {
            let mut v = m[i];
            for row in q.iter().take(i) {
                let p: f64 = (0..3).map(|k| v[k] * row[k]).sum();
                for k in 0..3 {
                    v[k] -= p * row[k];
                }
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-3 {
                ok = false;
                break;
            }
            q[i] = v.map(|x| x / n);
        }
        if ok {
            return Tensor2::from_rows(q);
        }
    }
}

/// Frame vectors `I + 0.5·U`, resampled until the triple product reaches
/// [`MIN_TRIPLE`].
pub fn frame<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 3]; 3] {
    loop {
        let f = (Tensor2::identity() + uniform2(rng) * 0.5).rows();
        if Tensor2::from_rows(f).det().abs() >= MIN_TRIPLE {
            return f;
        }
    }
}
