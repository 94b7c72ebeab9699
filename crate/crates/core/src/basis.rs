//! General (non-orthonormal) bases, co-/contravariant components and a
//! component-level evaluator for every product in [`crate::products`].
//!
//! All arithmetic elsewhere in the crate runs on Cartesian components; this
//! module exists to inspect tensors in a skewed frame and to confirm that
//! each product gives the same tensor object when evaluated there.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::invariants::inverse_with_floor;
use crate::products::{boxhat, boxprod, ddot, dot, outer, Scheme};
use crate::report::{tol, Check, CheckReport};
use crate::tensor::{AnyTensor, Tensor2, Tensor4, DIM};
use crate::Scalar;

/// Minimum `|r₁·(r₂×r₃)|` accepted by [`make_basis`].
pub const TRIPLE_FLOOR: f64 = 1e-8;

pub type Vec3<T> = [T; DIM];

fn dot3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A frame `r_i`, its reciprocal `rⁱ` and both metrics.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Basis<T> {
    frame: [Vec3<T>; DIM],
    reciprocal: [Vec3<T>; DIM],
    g_lo: Tensor2<T>,
    g_hi: Tensor2<T>,
}

/// Builds a basis from three frame vectors.
///
/// The reciprocal vectors are the rows of the inverse-transpose of the
/// frame matrix, which enforces `r_i·rʲ = δ_iʲ`.
pub fn make_basis<T: Scalar>(v1: Vec3<T>, v2: Vec3<T>, v3: Vec3<T>) -> Result<Basis<T>> {
    let f = Tensor2::from_rows([v1, v2, v3]);
    let triple = f.det();
    if triple.abs() < T::lit(TRIPLE_FLOOR) {
        return Err(Error::Frame {
            triple: triple.approx_f64(),
        });
    }
    let recip = inverse_with_floor(&f, T::zero())?.transpose().rows();
    let frame = [v1, v2, v3];
    let g_lo = Tensor2::from_fn(|i, j| dot3(&frame[i], &frame[j]));
    let g_hi = Tensor2::from_fn(|i, j| dot3(&recip[i], &recip[j]));
    Ok(Basis {
        frame,
        reciprocal: recip,
        g_lo,
        g_hi,
    })
}

impl<T: Scalar> Basis<T> {
    pub fn cartesian() -> Self {
        let e = Tensor2::<T>::identity().rows();
        Basis {
            frame: e,
            reciprocal: e,
            g_lo: Tensor2::identity(),
            g_hi: Tensor2::identity(),
        }
    }

    pub fn frame(&self) -> &[Vec3<T>; DIM] {
        &self.frame
    }

    pub fn reciprocal(&self) -> &[Vec3<T>; DIM] {
        &self.reciprocal
    }

    /// `g_ij = r_i·r_j`
    pub fn g_lo(&self) -> &Tensor2<T> {
        &self.g_lo
    }

    /// `gⁱʲ = rⁱ·rʲ`
    pub fn g_hi(&self) -> &Tensor2<T> {
        &self.g_hi
    }

    /// Entrywise absolute values of every vector and metric, used to bound
    /// the magnitude of intermediate sums.
    fn magnitudes(&self) -> Self {
        let abs3 = |v: &[Vec3<T>; DIM]| v.map(|r| r.map(|x| x.abs()));
        Basis {
            frame: abs3(&self.frame),
            reciprocal: abs3(&self.reciprocal),
            g_lo: self.g_lo.map(|x| x.abs()),
            g_hi: self.g_hi.map(|x| x.abs()),
        }
    }

    /// Largest deviation from `r_i·rʲ = δ_iʲ` and `g_lo·g_hi = I`.
    pub fn duality_defect(&self) -> T {
        use crate::products::Dot;
        let duality = Tensor2::from_fn(|i, j| dot3(&self.frame[i], &self.reciprocal[j]));
        let id = Tensor2::identity();
        duality
            .max_abs_diff(&id)
            .max_of(self.g_lo.dot(&self.g_hi).max_abs_diff(&id))
    }

    /// Vector whose dot product with `T` extracts a component of the given
    /// variance: `rⁱ` for contravariant, `r_i` for covariant.
    fn extractor(&self, v: Var, i: usize) -> &Vec3<T> {
        match v {
            Var::Hi => &self.reciprocal[i],
            Var::Lo => &self.frame[i],
        }
    }

    /// Vector a component of the given variance multiplies on reassembly.
    fn assembler(&self, v: Var, i: usize) -> &Vec3<T> {
        match v {
            Var::Hi => &self.frame[i],
            Var::Lo => &self.reciprocal[i],
        }
    }
}

/// Variance of a single index slot.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Var {
    /// covariant (subscript) component
    Lo,
    /// contravariant (superscript) component
    Hi,
}

/// Per-slot variance tags of a component array.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Variance(pub Vec<Var>);

impl Variance {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// All `2^rank` patterns of the given rank, in binary order with `Lo`
    /// as 0.
    pub fn all(rank: usize) -> Vec<Variance> {
        (0..1usize << rank)
            .map(|bits| {
                Variance(
                    (0..rank)
                        .map(|s| {
                            if bits >> (rank - 1 - s) & 1 == 1 {
                                Var::Hi
                            } else {
                                Var::Lo
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

impl FromStr for Variance {
    type Err = Error;

    /// Parses strings like `"hi,lo"` or `"HHLL"`.
    fn from_str(s: &str) -> Result<Self> {
        let tags: Vec<&str> = if s.contains(',') {
            s.split(',').map(str::trim).collect()
        } else {
            s.split("").filter(|t| !t.is_empty()).collect()
        };
        tags.into_iter()
            .map(|t| match t.to_ascii_lowercase().as_str() {
                "lo" | "l" => Ok(Var::Lo),
                "hi" | "h" => Ok(Var::Hi),
                other => Err(Error::Argument(format!("unknown variance tag `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Variance)
    }
}

/// Components of a rank-2 or rank-4 tensor over a basis, flattened
/// row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Components<T> {
    pub variance: Variance,
    pub data: Vec<T>,
}

impl<T: Scalar> Components<T> {
    pub fn zeros(variance: Variance) -> Self {
        let n = DIM.pow(variance.rank() as u32);
        Components {
            variance,
            data: vec![T::zero(); n],
        }
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.data[flat(idx)]
    }
}

fn flat(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * DIM + i)
}

/// Index of slot `s` within the flat position `n` of a rank-`rank` array.
fn digit(n: usize, rank: usize, s: usize) -> usize {
    n / DIM.pow((rank - 1 - s) as u32) % DIM
}

fn cartesian_data<T: Scalar>(t: &AnyTensor<T>) -> Result<Vec<T>> {
    match t {
        AnyTensor::Two(a) => Ok(a.iter().collect()),
        AnyTensor::Four(h) => Ok(h.iter().collect()),
        AnyTensor::Scalar(_) => Err(Error::Argument("scalars have no basis components".into())),
    }
}

fn from_data<T: Scalar>(data: &[T]) -> AnyTensor<T> {
    match data.len() {
        1 => AnyTensor::Scalar(data[0]),
        9 => AnyTensor::Two(Tensor2::from_fn(|i, j| data[flat(&[i, j])])),
        81 => AnyTensor::Four(Tensor4::from_fn(|i, j, k, l| data[flat(&[i, j, k, l])])),
        n => unreachable!("component array of length {n}"),
    }
}

/// Applies `vecs(slot, i)` to every slot: `out[..i..] = Σ_m vecs(s,i)[m] in[..m..]`
/// when `forward`, and `out[..k..] = Σ_i in[..i..] vecs(s,i)[k]` otherwise.
fn transform_slots<'a, T: Scalar + 'a>(
    data: &[T],
    rank: usize,
    vecs: impl Fn(usize, usize) -> &'a Vec3<T>,
    forward: bool,
) -> Vec<T> {
    let mut cur = data.to_vec();
    for s in 0..rank {
        let stride = DIM.pow((rank - 1 - s) as u32);
        let mut next = vec![T::zero(); cur.len()];
        for (n, out) in next.iter_mut().enumerate() {
            let d = digit(n, rank, s);
            let base = n - d * stride;
            let mut acc = T::zero();
            for m in 0..DIM {
                let w = if forward { vecs(s, d)[m] } else { vecs(s, m)[d] };
                acc = acc + w * cur[base + m * stride];
            }
            *out = acc;
        }
        cur = next;
    }
    cur
}

/// Components of `t` with the given per-slot variance, e.g. all-`Hi` gives
/// `Aⁱʲ` in `A = Aⁱʲ r_i r_j`.
pub fn to_components<T: Scalar>(t: &AnyTensor<T>, b: &Basis<T>, v: &Variance) -> Result<Components<T>> {
    let data = cartesian_data(t)?;
    if v.rank() != t.rank() {
        return Err(Error::Argument(format!(
            "variance has {} tags for a rank-{} tensor",
            v.rank(),
            t.rank()
        )));
    }
    let out = transform_slots(&data, v.rank(), |s, i| b.extractor(v.0[s], i), true);
    Ok(Components {
        variance: v.clone(),
        data: out,
    })
}

/// Reassembles Cartesian components from basis components.
pub fn from_components<T: Scalar>(c: &Components<T>, b: &Basis<T>) -> Result<AnyTensor<T>> {
    let rank = c.variance.rank();
    if rank != 2 && rank != 4 {
        return Err(Error::Argument(format!("cannot reassemble rank {rank}")));
    }
    let v = &c.variance;
    let out = transform_slots(&c.data, rank, |s, i| b.assembler(v.0[s], i), false);
    Ok(from_data(&out))
}

/// The products that can be checked for basis independence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ProductOp {
    DdotSeq,
    DdotCross,
    DdotPos,
    Dot,
    Outer,
    Box,
    BoxHat,
}

impl ProductOp {
    pub const ALL: [ProductOp; 7] = [
        ProductOp::DdotSeq,
        ProductOp::DdotCross,
        ProductOp::DdotPos,
        ProductOp::Dot,
        ProductOp::Outer,
        ProductOp::Box,
        ProductOp::BoxHat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProductOp::DdotSeq => "ddot_seq",
            ProductOp::DdotCross => "ddot_cross",
            ProductOp::DdotPos => "ddot_pos",
            ProductOp::Dot => "dot",
            ProductOp::Outer => "outer",
            ProductOp::Box => "box",
            ProductOp::BoxHat => "boxhat",
        }
    }

    /// Rank pairs the product accepts.
    pub fn rank_pairs(self) -> &'static [(usize, usize)] {
        match self {
            ProductOp::DdotSeq | ProductOp::DdotCross | ProductOp::DdotPos => &[(2, 2), (2, 4), (4, 2), (4, 4)],
            ProductOp::Dot => &[(2, 2), (2, 4), (4, 2)],
            ProductOp::Outer | ProductOp::Box | ProductOp::BoxHat => &[(2, 2)],
        }
    }

    /// Index pattern `(left, right, out)`: repeated labels are summed.
    pub fn pattern(self, left: usize, right: usize) -> Result<IndexPattern> {
        use ProductOp::*;
        let p = match (self, left, right) {
            (Dot, 2, 2) => ("im", "mj", "ij"),
            (Dot, 2, 4) => ("im", "mjkl", "ijkl"),
            (Dot, 4, 2) => ("ijkm", "ml", "ijkl"),
            (DdotSeq, 2, 2) => ("ij", "ji", ""),
            (DdotSeq, 2, 4) => ("ij", "jikl", "kl"),
            (DdotSeq, 4, 2) => ("ijkl", "lk", "ij"),
            (DdotSeq, 4, 4) => ("ijmn", "nmkl", "ijkl"),
            (DdotCross, 2, 2) => ("ij", "ij", ""),
            (DdotCross, 2, 4) => ("ij", "ijkl", "kl"),
            (DdotCross, 4, 2) => ("ijkl", "kl", "ij"),
            (DdotCross, 4, 4) => ("ijmn", "mnkl", "ijkl"),
            (DdotPos, 2, 2) => ("ij", "ij", ""),
            (DdotPos, 2, 4) => ("ij", "inkj", "nk"),
            (DdotPos, 4, 2) => ("ijkl", "jk", "il"),
            (DdotPos, 4, 4) => ("ijkl", "jnsk", "insl"),
            (Outer, 2, 2) => ("ij", "kl", "ijkl"),
            (Box, 2, 2) => ("ik", "jl", "ijkl"),
            (BoxHat, 2, 2) => ("il", "jk", "ijkl"),
            _ => {
                return Err(Error::Rank {
                    op: self.name(),
                    left,
                    right,
                })
            }
        };
        Ok(IndexPattern::new(p.0, p.1, p.2))
    }

    /// Evaluates the product on Cartesian components.
    pub fn apply<T: Scalar>(self, x: &AnyTensor<T>, y: &AnyTensor<T>) -> Result<AnyTensor<T>> {
        let two = |op: fn(&Tensor2<T>, &Tensor2<T>) -> Tensor4<T>| match (x, y) {
            (AnyTensor::Two(a), AnyTensor::Two(b)) => Ok(AnyTensor::Four(op(a, b))),
            _ => Err(Error::Rank {
                op: self.name(),
                left: x.rank(),
                right: y.rank(),
            }),
        };
        match self {
            ProductOp::DdotSeq => ddot(Scheme::Seq, x, y),
            ProductOp::DdotCross => ddot(Scheme::Cross, x, y),
            ProductOp::DdotPos => ddot(Scheme::Pos, x, y),
            ProductOp::Dot => dot(x, y),
            ProductOp::Outer => two(outer),
            ProductOp::Box => two(boxprod),
            ProductOp::BoxHat => two(boxhat),
        }
    }
}

impl fmt::Display for ProductOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProductOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProductOp::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown product `{s}`")))
    }
}

/// Einstein-summation description of a bilinear product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexPattern {
    left: Vec<char>,
    right: Vec<char>,
    out: Vec<char>,
}

impl IndexPattern {
    pub fn new(left: &str, right: &str, out: &str) -> Self {
        IndexPattern {
            left: left.chars().collect(),
            right: right.chars().collect(),
            out: out.chars().collect(),
        }
    }

    /// Evaluates the pattern on basis components. A label shared by both
    /// operands is contracted through the metric when the two slots carry
    /// the same variance (`g_mn` for two superscripts, `gᵐⁿ` for two
    /// subscripts) and directly otherwise. Free labels keep the variance
    /// of the slot they come from.
    pub fn contract<T: Scalar>(&self, x: &Components<T>, y: &Components<T>, b: &Basis<T>) -> Result<Components<T>> {
        if x.variance.rank() != self.left.len() || y.variance.rank() != self.right.len() {
            return Err(Error::Argument("operand ranks do not match index pattern".into()));
        }
        // (left slot, right slot) per contracted label
        let pairs: Vec<(usize, usize)> = self
            .left
            .iter()
            .enumerate()
            .filter_map(|(s, c)| self.right.iter().position(|d| d == c).map(|t| (s, t)))
            .collect();
        // where each output label comes from
        let sources: Vec<(bool, usize)> = self
            .out
            .iter()
            .map(|c| match self.left.iter().position(|d| d == c) {
                Some(s) => (true, s),
                None => (false, self.right.iter().position(|d| d == c).expect("free label")),
            })
            .collect();
        let out_var = Variance(
            sources
                .iter()
                .map(|&(left, s)| if left { x.variance.0[s] } else { y.variance.0[s] })
                .collect(),
        );
        let mut out = Components::zeros(out_var);
        let (rl, rr) = (self.left.len(), self.right.len());
        let nl = DIM.pow(rl as u32);
        let nr = DIM.pow(rr as u32);
        for p in 0..nl {
            let xv = x.data[p];
            if xv == T::zero() {
                continue;
            }
            for q in 0..nr {
                let mut w = T::one();
                for &(s, t) in &pairs {
                    let (m, n) = (digit(p, rl, s), digit(q, rr, t));
                    w = w * match (x.variance.0[s], y.variance.0[t]) {
                        (Var::Hi, Var::Hi) => b.g_lo[[m, n]],
                        (Var::Lo, Var::Lo) => b.g_hi[[m, n]],
                        _ => {
                            if m == n {
                                T::one()
                            } else {
                                T::zero()
                            }
                        }
                    };
                    if w == T::zero() {
                        break;
                    }
                }
                if w == T::zero() {
                    continue;
                }
                let o = sources.iter().fold(0, |acc, &(left, s)| {
                    acc * DIM + if left { digit(p, rl, s) } else { digit(q, rr, s) }
                });
                out.data[o] = out.data[o] + xv * y.data[q] * w;
            }
        }
        Ok(out)
    }

    /// Brute-force evaluation on Cartesian components.
    pub fn eval_cartesian<T: Scalar>(&self, x: &AnyTensor<T>, y: &AnyTensor<T>) -> Result<AnyTensor<T>> {
        let b = Basis::cartesian();
        let cx = Components {
            variance: Variance(vec![Var::Hi; x.rank()]),
            data: cartesian_data(x)?,
        };
        let cy = Components {
            variance: Variance(vec![Var::Hi; y.rank()]),
            data: cartesian_data(y)?,
        };
        let c = self.contract(&cx, &cy, &b)?;
        Ok(from_data(&c.data))
    }
}

fn via_basis<T: Scalar>(
    pattern: &IndexPattern,
    x: &AnyTensor<T>,
    y: &AnyTensor<T>,
    b: &Basis<T>,
    vx: &Variance,
    vy: &Variance,
) -> Result<AnyTensor<T>> {
    let cx = to_components(x, b, vx)?;
    let cy = to_components(y, b, vy)?;
    let c = pattern.contract(&cx, &cy, b)?;
    if c.variance.rank() == 0 {
        Ok(AnyTensor::Scalar(c.data[0]))
    } else {
        from_components(&c, b)
    }
}

fn abs_tensor<T: Scalar>(t: &AnyTensor<T>) -> AnyTensor<T> {
    match t {
        AnyTensor::Scalar(s) => AnyTensor::Scalar(s.abs()),
        AnyTensor::Two(a) => AnyTensor::Two(a.map(|v| v.abs())),
        AnyTensor::Four(h) => AnyTensor::Four(h.map(|v| v.abs())),
    }
}

/// Evaluates `op(x, y)` once on Cartesian components and once on components
/// over `b` with the given variances.
///
/// The discrepancy is judged against `1 + M`, where `M` is the larger of
/// `|x|·|y|` and the largest entry of the component path rerun on absolute
/// values of every operand, basis vector and metric entry. `M` bounds
/// every partial sum of the component path, so it is the scale its
/// rounding error is proportional to.
pub fn verify_basis_invariance(
    op: ProductOp,
    x: &AnyTensor<f64>,
    y: &AnyTensor<f64>,
    b: &Basis<f64>,
    vx: &Variance,
    vy: &Variance,
) -> Result<CheckReport> {
    let direct = op.apply(x, y)?;
    let pattern = op.pattern(x.rank(), y.rank())?;
    let via = via_basis(&pattern, x, y, b, vx, vy)?;
    let bound = via_basis(&pattern, &abs_tensor(x), &abs_tensor(y), &b.magnitudes(), vx, vy)?;
    let err = direct
        .max_abs_diff(&via)
        .expect("pattern output rank matches product rank");
    let mut check = Check::new(format!("basis invariance {op}"), 0, tol::IDENTITY);
    check.record_scaled(err, (x.max_abs() * y.max_abs()).max(bound.max_abs()));
    Ok(check.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{iso, IsoKind};

    fn skewed() -> Basis<f64> {
        make_basis([1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn orthonormal_basis() {
        let b = make_basis([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(b.frame(), b.reciprocal());
        assert_eq!(*b.g_lo(), Tensor2::identity());
        assert_eq!(*b.g_hi(), Tensor2::identity());
    }

    #[test]
    fn skewed_basis_values() {
        let b = skewed();
        assert_eq!(*b.reciprocal(), [[1.0, -1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(
            *b.g_lo(),
            Tensor2::from_rows([[1.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
        );
        assert!(b.duality_defect() < 1e-15);
    }

    #[test]
    fn degenerate_frame() {
        match make_basis([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]) {
            Err(Error::Frame { triple }) => assert_eq!(triple, 0.0),
            other => panic!("expected frame error, got {other:?}"),
        }
    }

    #[test]
    fn variance_parsing() {
        assert_eq!("hi,lo".parse::<Variance>().unwrap(), Variance(vec![Var::Hi, Var::Lo]));
        assert_eq!("HHLL".parse::<Variance>().unwrap().rank(), 4);
        assert!("hi,up".parse::<Variance>().is_err());
        assert_eq!(Variance::all(2).len(), 4);
        assert_eq!(Variance::all(4).len(), 16);
    }

    #[test]
    fn orthonormal_components_are_cartesian() {
        let d = AnyTensor::Two(Tensor2::diag([1.0, 2.0, 3.0]));
        let b = Basis::cartesian();
        for v in Variance::all(2) {
            let c = to_components(&d, &b, &v).unwrap();
            assert_eq!(c.data, vec![1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
        }
    }

    #[test]
    fn metric_in_mixed_components_is_kronecker() {
        let b = skewed();
        let g = AnyTensor::Two(Tensor2::identity());
        let v: Variance = "lo,hi".parse().unwrap();
        let c = to_components(&g, &b, &v).unwrap();
        let id: Vec<f64> = Tensor2::<f64>::identity().iter().collect();
        for (x, y) in c.data.iter().zip(&id) {
            assert!((x - y).abs() < 1e-15);
        }
        let back = from_components(&Components { variance: v, data: id }, &b).unwrap();
        assert!(back.max_abs_diff(&g).unwrap() < 1e-15);
        // covariant components are the metric itself
        let lo = to_components(&g, &b, &"lo,lo".parse().unwrap()).unwrap();
        assert_eq!(lo.data, b.g_lo().iter().collect::<Vec<_>>());
    }

    #[test]
    fn zero_and_roundtrip() {
        let b = skewed();
        let z = from_components(&Components::<f64>::zeros("hhll".parse().unwrap()), &b).unwrap();
        assert_eq!(z, AnyTensor::Four(Tensor4::zero()));
        let c2 = AnyTensor::Four(iso::<f64>(IsoKind::II));
        for v in Variance::all(4) {
            let back = from_components(&to_components(&c2, &b, &v).unwrap(), &b).unwrap();
            assert!(back.max_abs_diff(&c2).unwrap() < 1e-14, "{v:?}");
        }
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let b = skewed();
        let a = AnyTensor::Two(Tensor2::<f64>::identity());
        assert!(to_components(&a, &b, &"hhll".parse().unwrap()).is_err());
        assert!(ProductOp::Outer.pattern(4, 2).is_err());
        assert!("cross".parse::<ProductOp>().is_err());
    }

    #[test]
    fn skewed_ddot_seq_matches_cartesian() {
        let b = skewed();
        let a = AnyTensor::Two(Tensor2::from_rows([
            [0.3, -0.1, 0.7],
            [0.2, 0.9, -0.4],
            [0.5, 0.0, 0.6],
        ]));
        let c = AnyTensor::Two(Tensor2::from_rows([[1.0, 2.0, 0.0], [-1.0, 0.5, 0.3], [0.2, 0.1, 0.8]]));
        for vx in Variance::all(2) {
            for vy in Variance::all(2) {
                let r = verify_basis_invariance(ProductOp::DdotSeq, &a, &c, &b, &vx, &vy).unwrap();
                assert!(r.pass, "{vx:?} {vy:?} {r:?}");
            }
        }
    }

    #[test]
    fn positional_unit_cell_in_skewed_basis() {
        let b = skewed();
        let a = Tensor2::from_rows([[0.3, -0.1, 0.7], [0.2, 0.9, -0.4], [0.5, 0.0, 0.6]]);
        let c1 = AnyTensor::Four(iso::<f64>(IsoKind::I));
        let cx = to_components(&a.into(), &b, &"hi,hi".parse().unwrap()).unwrap();
        let cy = to_components(&c1, &b, &"lo,hi,lo,hi".parse().unwrap()).unwrap();
        let out = ProductOp::DdotPos
            .pattern(2, 4)
            .unwrap()
            .contract(&cx, &cy, &b)
            .unwrap();
        let back = from_components(&out, &b).unwrap();
        assert!(back.max_abs_diff(&a.into()).unwrap() < 1e-12);
    }

    #[test]
    fn wrong_pattern_is_detected() {
        let b = skewed();
        let a: AnyTensor<f64> = Tensor2::from_rows([[0.3, -0.1, 0.7], [0.2, 0.9, -0.4], [0.5, 0.0, 0.6]]).into();
        let c: AnyTensor<f64> = Tensor2::from_rows([[1.0, 2.0, 0.0], [-1.0, 0.5, 0.3], [0.2, 0.1, 0.8]]).into();
        let v: Variance = "hi,lo".parse().unwrap();
        let direct = ProductOp::DdotSeq.apply(&a, &c).unwrap();
        let wrong = ProductOp::DdotCross.pattern(2, 2).unwrap();
        let got = wrong
            .contract(
                &to_components(&a, &b, &v).unwrap(),
                &to_components(&c, &b, &v).unwrap(),
                &b,
            )
            .unwrap();
        assert!((got.data[0] - direct.max_abs()).abs() > 1e-3);
    }

    #[test]
    fn orthonormal_paths_agree() {
        let b = Basis::cartesian();
        let a: AnyTensor<f64> = Tensor2::from_rows([[0.3, -0.1, 0.7], [0.2, 0.9, -0.4], [0.5, 0.0, 0.6]]).into();
        let h: AnyTensor<f64> = iso::<f64>(IsoKind::III).into();
        for op in [
            ProductOp::DdotSeq,
            ProductOp::DdotCross,
            ProductOp::DdotPos,
            ProductOp::Dot,
        ] {
            let r = verify_basis_invariance(op, &a, &h, &b, &Variance::all(2)[1], &Variance::all(4)[5]).unwrap();
            assert!(r.max_abs_err < 1e-15, "{op} {r:?}");
        }
    }
}
