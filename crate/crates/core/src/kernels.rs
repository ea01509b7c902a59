//! Pointwise kernels on `(C \ R)^n x R^n`.
//!
//! Products run left to right in index order, without compensated summation.
//! Near the real axis the kernels grow like `1 / |Im z_j|`; no rescaling is
//! applied, so callers probing boundary limits see the true growth.

use num_complex::Complex64;

use crate::cutplane::{enumerate_subsets, CutPlanePoint, IndexSet, SubsetFilter, I};
use crate::error::{Error, Result};

/// Default absolute tolerance for identities at moderate points
/// (`|z_j| <= 10`, `|Im z_j| >= 0.1`).
pub const DEFAULT_KERNEL_TOL: f64 = 1e-12;

/// One entry of a `rho` vector in the Nevanlinna condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rho {
    Minus,
    Zero,
    Plus,
}

impl Rho {
    pub const ALL: [Rho; 3] = [Rho::Minus, Rho::Zero, Rho::Plus];

    pub fn from_int(value: i32) -> Result<Rho> {
        match value {
            -1 => Ok(Rho::Minus),
            0 => Ok(Rho::Zero),
            1 => Ok(Rho::Plus),
            other => Err(Error::invalid(format!(
                "rho must be -1, 0 or 1, got {other}"
            ))),
        }
    }
}

/// The `rho` vectors in `{-1, 0, 1}^n` containing both `-1` and `1`, in
/// lexicographic order with `-1 < 0 < 1`.
pub fn mixed_rho_vectors(n: usize) -> Vec<Vec<Rho>> {
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut rho = vec![Rho::Zero; n];
        for slot in rho.iter_mut().rev() {
            *slot = Rho::ALL[c % 3];
            c /= 3;
        }
        if rho.contains(&Rho::Minus) && rho.contains(&Rho::Plus) {
            out.push(rho);
        }
    }
    out
}

fn check_dims(z: &[Complex64], t: &[f64]) -> Result<()> {
    if z.len() != t.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            actual: t.len(),
        });
    }
    if z.is_empty() {
        return Err(Error::invalid("empty argument"));
    }
    Ok(())
}

/// `A(z, t) = (1/2i) (1/(t - z) - 1/(t + i))`.
pub fn a_factor(z: Complex64, t: f64) -> Result<Complex64> {
    if z.im == 0.0 && z.re == t {
        return Err(Error::Pole(t));
    }
    Ok(a_factor_unchecked(z, t))
}

#[inline]
pub(crate) fn a_factor_unchecked(z: Complex64, t: f64) -> Complex64 {
    let tc = Complex64::new(t, 0.0);
    ((tc - z).inv() - (tc + I).inv()) / Complex64::new(0.0, 2.0)
}

/// `prod_l A(z_l, t_l)`.
pub(crate) fn a_product_unchecked(z: &[Complex64], t: &[f64]) -> Complex64 {
    z.iter()
        .zip(t)
        .map(|(zl, tl)| a_factor_unchecked(*zl, *tl))
        .product()
}

/// `K_n(z, t)` in product form. Works for any coordinates off the real line,
/// so reflected points need not be revalidated.
pub(crate) fn kernel_raw(z: &[Complex64], t: &[f64]) -> Complex64 {
    let two_i = Complex64::new(0.0, 2.0);
    let mut moving = Complex64::new(1.0, 0.0);
    let mut fixed = Complex64::new(1.0, 0.0);
    for (&zl, &tl) in z.iter().zip(t) {
        let tc = Complex64::new(tl, 0.0);
        let upper_shift = (tc + I).inv();
        moving *= (tc - zl).inv() - upper_shift;
        fixed *= (tc - I).inv() - upper_shift;
    }
    let scale = two_i.powu(z.len() as u32).inv();
    I * (moving * scale * 2.0 - fixed * scale)
}

/// `K_n(z, t)`.
pub fn kernel_k(z: &CutPlanePoint, t: &[f64]) -> Result<Complex64> {
    check_dims(z.coords(), t)?;
    Ok(kernel_raw(z.coords(), t))
}

/// One-variable closed form `1/(t - z) - t/(1 + t^2)`.
pub fn kernel_k1_closed(z: Complex64, t: f64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::invalid(format!("K_1 needs a nonreal z, got {z}")));
    }
    Ok((Complex64::new(t, 0.0) - z).inv() - t / (t * t + 1.0))
}

/// `N_rho(z, t)`. `N_0` does not depend on `z`.
pub fn n_factor(rho: Rho, z: Complex64, t: f64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::invalid(format!(
            "N-factor needs a nonreal z, got {z}"
        )));
    }
    Ok(n_factor_unchecked(rho, z, t))
}

#[inline]
pub(crate) fn n_factor_unchecked(rho: Rho, z: Complex64, t: f64) -> Complex64 {
    let tc = Complex64::new(t, 0.0);
    let diff = match rho {
        Rho::Minus => (tc - z).inv() - (tc - I).inv(),
        Rho::Zero => (tc - I).inv() - (tc + I).inv(),
        Rho::Plus => (tc + I).inv() - (tc - z.conj()).inv(),
    };
    diff / Complex64::new(0.0, 2.0)
}

/// `P_n(z, t) = prod Im z_j / |t_j - z_j|^2` for `z` in the poly upper
/// half-plane.
pub fn poisson(z: &CutPlanePoint, t: &[f64]) -> Result<f64> {
    check_dims(z.coords(), t)?;
    if !z.is_upper() {
        return Err(Error::invalid(format!(
            "the Poisson kernel needs a point of the upper poly half-plane, got {z}"
        )));
    }
    Ok(poisson_raw(z.coords(), t))
}

pub(crate) fn poisson_raw(z: &[Complex64], t: &[f64]) -> f64 {
    z.iter()
        .zip(t)
        .map(|(zj, &tj)| zj.im / (Complex64::new(tj, 0.0) - zj).norm_sqr())
        .product()
}

/// `|K_n(z,t) - sum_{B != {}} (-1)^{|B|+1} conj K_n(Psi_B(i1, z), t)|`.
pub fn kernel_symmetry_residual(z: &CutPlanePoint, t: &[f64]) -> Result<f64> {
    check_dims(z.coords(), t)?;
    let n = z.dim();
    let ones = vec![I; n];
    let mut reflected = Complex64::new(0.0, 0.0);
    for b in enumerate_subsets(n, SubsetFilter::NonEmpty)? {
        let zeta = crate::cutplane::psi_map(&b, &ones, z.coords())?;
        reflected += -b.parity_sign() * kernel_raw(&zeta, t).conj();
    }
    Ok((kernel_raw(z.coords(), t) - reflected).norm())
}

/// `sum_B (-1)^|B| K_n(Psi_B(z, z), t)`, which equals `2i P_n(z, t)`.
pub fn poisson_alternating_sum(z: &CutPlanePoint, t: &[f64]) -> Result<Complex64> {
    check_dims(z.coords(), t)?;
    if !z.is_upper() {
        return Err(Error::invalid(format!(
            "the alternating sum needs a point of the upper poly half-plane, got {z}"
        )));
    }
    Ok(alternating_sum_raw(z.coords(), t))
}

pub(crate) fn alternating_sum_raw(z: &[Complex64], t: &[f64]) -> Complex64 {
    let n = z.len();
    let mut total = Complex64::new(0.0, 0.0);
    let mut zeta = vec![Complex64::new(0.0, 0.0); n];
    for mask in 0..(1u64 << n) {
        let b = IndexSet::from_mask(n, mask).expect("mask within range");
        for (j, slot) in zeta.iter_mut().enumerate() {
            *slot = if b.contains(j) { z[j].conj() } else { z[j] };
        }
        total += b.parity_sign() * kernel_raw(&zeta, t);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(coords: &[Complex64]) -> CutPlanePoint {
        CutPlanePoint::new(coords.to_vec()).unwrap()
    }

    /// Term-by-term expansion of the two-variable product formula, written
    /// out by hand.
    fn k2_by_hand(z1: Complex64, z2: Complex64, t1: f64, t2: f64) -> Complex64 {
        let f = |z: Complex64, t: f64| 1.0 / (c(t, 0.0) - z) - 1.0 / c(t, 1.0);
        let g = |t: f64| 1.0 / c(t, -1.0) - 1.0 / c(t, 1.0);
        // (2i)^2 = -4
        I * (2.0 / -4.0 * f(z1, t1) * f(z2, t2) - 1.0 / -4.0 * g(t1) * g(t2))
    }

    #[test]
    fn k1_examples() {
        assert_eq!(kernel_k(&pt(&[I]), &[0.0]).unwrap(), I);
        assert_eq!(kernel_k1_closed(I, 0.0).unwrap(), I);
        let v = kernel_k1_closed(I, 1.0).unwrap();
        assert_relative_eq!(v.re, 0.0, epsilon = 1e-16);
        assert_relative_eq!(v.im, 0.5, epsilon = 1e-16);
        // (3 + 2i)/13 - 3/10
        let want = c(3.0 / 13.0 - 0.3, 2.0 / 13.0);
        let got = kernel_k(&pt(&[c(0.0, 2.0)]), &[3.0]).unwrap();
        assert!((got - want).norm() < 1e-15);
        assert!((kernel_k1_closed(c(0.0, 2.0), 3.0).unwrap() - want).norm() < 1e-15);
        assert!(kernel_k1_closed(c(2.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn k2_matches_hand_expansion() {
        // At z = (i, i), t = (0, 0): f = 1/(-i) - 1/i = 2i and g = 2i, so
        // K_2 = i (-(1/2)(2i)^2 + (1/4)(2i)^2) = i (2 - 1) = i.
        let got = kernel_k(&pt(&[I, I]), &[0.0, 0.0]).unwrap();
        assert!((got - I).norm() < 1e-15);
        assert!((got - k2_by_hand(I, I, 0.0, 0.0)).norm() < 1e-15);
        let (z1, z2) = (c(0.3, -1.2), c(-2.0, 0.4));
        let got = kernel_k(&pt(&[z1, z2]), &[1.5, -0.7]).unwrap();
        assert!((got - k2_by_hand(z1, z2, 1.5, -0.7)).norm() < 1e-14);
    }

    #[test]
    fn kernel_rejects_mismatched_dims() {
        assert!(matches!(
            kernel_k(&pt(&[I, I]), &[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn n_factor_examples() {
        for t in [-3.0, 0.0, 0.5, 10.0] {
            assert_eq!(n_factor(Rho::Minus, I, t).unwrap(), c(0.0, 0.0));
        }
        for z in [I, c(3.0, -2.0), c(-1.0, 0.1)] {
            assert_relative_eq!(
                n_factor(Rho::Zero, z, 0.0).unwrap().re,
                1.0,
                epsilon = 1e-15
            );
        }
        let z = c(2.0, 3.0);
        let lhs = n_factor(Rho::Minus, z, 5.0).unwrap().conj();
        let rhs = n_factor(Rho::Plus, z, 5.0).unwrap();
        assert!((lhs - rhs).norm() < 1e-16);
        assert!(Rho::from_int(2).is_err());
    }

    #[test]
    fn a_factor_examples() {
        assert_relative_eq!(a_factor(I, 0.0).unwrap().re, 1.0, epsilon = 1e-15);
        assert!(a_factor(c(1.0, 0.0), 1.0).is_err());
        let z = c(0.7, 1.3);
        let t = -0.4;
        let d = a_factor(z, t).unwrap() - a_factor(z.conj(), t).unwrap();
        // A(z) - A(conj z) = (1/2i)(1/(t-z) - 1/(t-conj z)) = (1/2i)(2i Im(1/(t-z))).
        let want = (c(t, 0.0) - z).inv().im;
        assert!((d - c(want, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson(&pt(&[I]), &[0.0]).unwrap(), 1.0);
        assert_eq!(poisson(&pt(&[I, c(0.0, 2.0)]), &[0.0, 0.0]).unwrap(), 0.5);
        assert!(poisson(&pt(&[c(0.0, -1.0)]), &[0.0]).is_err());
    }

    #[test]
    fn alternating_sum_examples() {
        let z = pt(&[I, c(0.0, 2.0)]);
        let v = poisson_alternating_sum(&z, &[0.0, 0.0]).unwrap();
        assert!((v - I).norm() < 1e-14);
        let z1 = c(0.4, 0.9);
        let v = poisson_alternating_sum(&pt(&[z1]), &[1.1]).unwrap();
        let want = kernel_k1_closed(z1, 1.1).unwrap() - kernel_k1_closed(z1.conj(), 1.1).unwrap();
        assert!((v - want).norm() < 1e-15);
        assert!(poisson_alternating_sum(&pt(&[c(0.0, -1.0)]), &[0.0]).is_err());
    }

    #[test]
    fn symmetry_residual_examples() {
        let r = kernel_symmetry_residual(&pt(&[c(-1.0, -1.0)]), &[0.3]).unwrap();
        assert!(r < 1e-15);
        let r = kernel_symmetry_residual(&pt(&[c(0.0, -1.0), c(3.0, 2.0)]), &[1.0, -1.0]).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn rho_enumeration() {
        assert!(mixed_rho_vectors(1).is_empty());
        assert_eq!(
            mixed_rho_vectors(2),
            vec![vec![Rho::Minus, Rho::Plus], vec![Rho::Plus, Rho::Minus]]
        );
        assert_eq!(mixed_rho_vectors(3).len(), 12);
    }
}
