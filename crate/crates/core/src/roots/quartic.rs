use super::complex::{complex_roots, RootKind};
use super::unipoly::UniPoly;
use super::RootError;
use crate::hp::{BigFloat, HpComplex};

/// The four roots of `u^4 + 8u^2 - 12iu - 4`, labelled so that `u2`, `u3`
/// lie on the imaginary axis (`Im u2 > 0 > Im u3`) and `u4`, `u5` are the
/// mirror pair with `Re u4 > 0 > Re u5`.
#[derive(Clone, Debug)]
pub struct QuarticRoots {
    pub u2: HpComplex,
    pub u3: HpComplex,
    pub u4: HpComplex,
    pub u5: HpComplex,
    /// Largest certified error radius among the four.
    pub radius: BigFloat,
}

impl QuarticRoots {
    /// Root by index 2..=5.
    pub fn get(&self, index: usize) -> Option<&HpComplex> {
        match index {
            2 => Some(&self.u2),
            3 => Some(&self.u3),
            4 => Some(&self.u4),
            5 => Some(&self.u5),
            _ => None,
        }
    }

    pub fn all(&self) -> [&HpComplex; 4] {
        [&self.u2, &self.u3, &self.u4, &self.u5]
    }
}

/// `u^4 + 8u^2 - 12iu - 4` at `u`.
pub fn quartic_residual(u: &HpComplex) -> HpComplex {
    let prec = u.prec();
    let u2 = u.clone() * u.clone();
    let k = |n: i64| HpComplex::from_real(BigFloat::from_i64(n, prec));
    u2.clone() * u2.clone() + k(8) * u2
        - HpComplex::new(BigFloat::zero(prec), BigFloat::from_i64(12, prec)) * u.clone()
        - k(4)
}

/// Solves the quartic at `bits` of working precision. With `u = iv` the
/// equation becomes the real quartic `v^4 - 8v^2 + 12v - 4`, whose two real
/// roots give the imaginary pair and whose conjugate pair gives the mirror
/// pair.
pub fn solve_quartic_u(bits: u32) -> Result<QuarticRoots, RootError> {
    let v = UniPoly::from_i64(&[-4, 12, -8, 0, 1]);
    let roots = complex_roots(&v, bits)?;
    let prec = roots.iter().map(|r| r.center.prec()).max().unwrap_or(bits);
    let times_i = |z: &HpComplex| HpComplex::new(-z.im.clone(), z.re.clone()).with_prec(prec);
    let mut real: Vec<_> = roots.iter().filter(|r| r.kind == RootKind::Real).collect();
    let cplx: Vec<_> = roots.iter().filter(|r| r.kind == RootKind::Complex).collect();
    if real.len() != 2 || cplx.len() != 2 {
        return Err(RootError::Precision { bits });
    }
    real.sort_by(|a, b| b.center.re.cmp_value(&a.center.re));
    let mut mirror: Vec<HpComplex> = cplx.iter().map(|r| times_i(&r.center)).collect();
    mirror.sort_by(|a, b| b.re.cmp_value(&a.re));
    let radius = roots
        .iter()
        .map(|r| r.radius.clone())
        .fold(BigFloat::zero(64), BigFloat::max);
    Ok(QuarticRoots {
        u2: times_i(&real[0].center),
        u3: times_i(&real[1].center),
        u4: mirror[0].clone(),
        u5: mirror[1].clone(),
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values() {
        let u = solve_quartic_u(128).unwrap();
        let (a, b) = u.u2.to_f64_pair();
        assert_eq!(a, 0.0);
        assert!((b - 0.4863801704).abs() < 5e-10);
        let (a, b) = u.u4.to_f64_pair();
        assert!((a - 0.4600767354).abs() < 5e-10 && (b - 1.476364468).abs() < 5e-10);
        let (a5, b5) = u.u5.to_f64_pair();
        assert_eq!((a5, b5), (-a, b));
        assert!(u.u3.to_f64_pair().1 < -3.0);
    }

    #[test]
    fn residuals_small() {
        let u = solve_quartic_u(128).unwrap();
        for r in u.all() {
            assert!(quartic_residual(r).abs().to_f64() < 1e-30);
        }
        assert!(u.radius.to_f64() < 1e-30);
    }
}
