//! Saddle-point machinery for the coefficient asymptotics.
//!
//! For f(x) = (1 + x + ... + x^(q-1)) / x^alpha the positive critical radius
//! r solves (q-1-alpha) r^(q-1) + ... + (1-alpha) r - alpha = 0. The leading
//! asymptotic forms computed here are
//!
//!   single coefficient: f(r)^n / sqrt(2 pi n) * r^-(beta+1) * sqrt(f/f'')
//!   prefix sum:         same with an extra 1/(1-r), valid for r < 1
//!
//! plus a trapezoidal contour-integral oracle that recovers exact
//! coefficients from the circle |z| = radius for cross-checking.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::coeff::CoefficientTable;
use crate::hp::{Real, RunPrecision};

#[derive(Debug, Error)]
pub enum SaddleError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric failure: {0}")]
    NoConvergence(String),
}

/// Critical radius of f(x) = (1+x+...+x^(q-1))/x^alpha together with the
/// values the asymptotic formulas need at that point.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub q: u64,
    pub alpha: BigRational,
    /// The positive root of the radius polynomial.
    pub r: Real,
    /// f(r), the exponential growth base (theta when alpha = (q-1)/3).
    pub f_r: Real,
    /// f''(r), from the term-by-term second derivative of the Laurent form.
    pub fpp_r: Real,
    /// gamma = r^2 f''(r) / f(r).
    pub gamma: Real,
    /// |f'(r)| at the returned point.
    pub residual: Real,
    /// Bracket with opposite polynomial signs containing r.
    pub bracket: (Real, Real),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    SingleCoefficient,
    PrefixSum,
}

/// Leading-order estimate of a coefficient or prefix sum; no o(1) correction.
#[derive(Debug, Clone)]
pub struct AsymptoticEstimate {
    pub n: u64,
    pub beta: i64,
    pub kind: EstimateKind,
    /// Natural log of the estimate (always finite).
    pub log_value: Real,
    /// The estimate itself; exponent is arbitrary precision so this stays
    /// representable even for n in the thousands.
    pub value: Real,
    /// Factor multiplying f(r)^n / sqrt(2 pi n).
    pub leading_constant: Real,
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Radius polynomial p(r) = sum_{j=1..q-1} (j - alpha) r^j - alpha and its
/// derivative, evaluated in high precision with exact coefficients.
fn radius_poly(q: u64, alpha: &BigRational, r: &Real) -> (Real, Real) {
    let prec = r.precision();
    let mut value = prec.zero();
    let mut deriv = prec.zero();
    // Horner from the top degree down.
    for j in (1..q).rev() {
        let c = prec.from_rational(&(BigRational::from(BigInt::from(j)) - alpha));
        value = value.mul(r).add(&c);
    }
    value = value.mul(r).sub(&prec.from_rational(alpha));
    for j in (1..q).rev() {
        let cd = prec.from_rational(
            &(BigRational::from(BigInt::from(j)) * (BigRational::from(BigInt::from(j)) - alpha)),
        );
        deriv = deriv.mul(r).add(&cd);
    }
    (value, deriv)
}

/// Power sums S_k(r) = sum_{j=0..q-1} (j-alpha)^(k terms) r^j used for f and f''.
fn power_sum(q: u64, r: &Real) -> Real {
    let prec = r.precision();
    let mut s = prec.zero();
    for _ in 0..q {
        s = s.mul(r).add(&prec.one());
    }
    s
}

fn second_derivative_sum(q: u64, alpha: &BigRational, r: &Real) -> Real {
    let prec = r.precision();
    let mut s = prec.zero();
    for j in (0..q).rev() {
        let jq = BigRational::from(BigInt::from(j));
        let c = (&jq - alpha) * (&jq - alpha - BigRational::one());
        s = s.mul(r).add(&prec.from_rational(&c));
    }
    s
}

/// Solve the radius equation for 0 < alpha <= (q-1)/2.
///
/// Bisection brackets the root in (0, 1], then safeguarded Newton refines it;
/// the bracket is kept and returned as a sign certificate.
pub fn critical_radius(
    q: u64,
    alpha: &BigRational,
    tol: &Real,
    precision: RunPrecision,
) -> Result<CriticalPoint, SaddleError> {
    if q < 2 {
        return Err(SaddleError::Domain(format!("q must be >= 2, got {q}")));
    }
    let half_top = rational((q - 1) as i64, 2);
    if alpha <= &BigRational::zero() || alpha > &half_top {
        return Err(SaddleError::Domain(format!(
            "alpha must lie in (0, (q-1)/2], got {alpha}"
        )));
    }
    if !tol.is_positive() {
        return Err(SaddleError::Domain("tolerance must be positive".into()));
    }
    let prec = precision;
    let one = prec.one();

    let (r, bracket) = if alpha == &half_top {
        // Palindromic coefficient row: the saddle sits exactly at 1.
        (one.clone(), (one.clone(), one.clone()))
    } else {
        solve_radius_poly(q, alpha, tol, prec)?
    };

    let s0 = power_sum(q, &r);
    let r_alpha = r.pow_rational(alpha);
    let f_r = s0.div(&r_alpha);
    let s2 = second_derivative_sum(q, alpha, &r);
    let fpp_r = s2.div(&r_alpha).div(&r).div(&r);
    let gamma = s2.div(&s0);
    let (pv, _) = radius_poly(q, alpha, &r);
    let alpha_plus_one = alpha + BigRational::one();
    let residual = pv.abs().div(&r.pow_rational(&alpha_plus_one));

    if !fpp_r.is_positive() || !gamma.is_positive() {
        return Err(SaddleError::NoConvergence(
            "second derivative not positive at computed radius".into(),
        ));
    }
    Ok(CriticalPoint {
        q,
        alpha: alpha.clone(),
        r,
        f_r,
        fpp_r,
        gamma,
        residual,
        bracket,
    })
}

fn solve_radius_poly(
    q: u64,
    alpha: &BigRational,
    tol: &Real,
    prec: RunPrecision,
) -> Result<(Real, (Real, Real)), SaddleError> {
    let one = prec.one();
    let two = prec.from_u64(2);
    // p(0+) = -alpha < 0 and p(1) = q((q-1)/2 - alpha) > 0.
    let mut lo = prec.from_f64(1e-12);
    let mut hi = one.clone();
    let (plo, _) = radius_poly(q, alpha, &lo);
    let (phi, _) = radius_poly(q, alpha, &hi);
    if !plo.is_negative() || !phi.is_positive() {
        return Err(SaddleError::NoConvergence(
            "radius polynomial bracket failed".into(),
        ));
    }
    let bracket = (lo.clone(), hi.clone());

    // Bisect down to a short interval before switching to Newton.
    let coarse = prec.from_f64(1e-3);
    for _ in 0..64 {
        if hi.sub(&lo).cmp(&coarse) == std::cmp::Ordering::Less {
            break;
        }
        let mid = lo.add(&hi).div(&two);
        let (pm, _) = radius_poly(q, alpha, &mid);
        if pm.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Newton, falling back to bisection whenever the step leaves [lo, hi].
    let mut r = lo.add(&hi).div(&two);
    let target = {
        let eps = prec.from_f64(2.0).powi(-((prec.get() as i64) - 16));
        if tol.cmp(&eps) == std::cmp::Ordering::Less {
            tol.clone()
        } else {
            eps
        }
    };
    let mut converged = false;
    for _ in 0..10_000 {
        let (pv, pd) = radius_poly(q, alpha, &r);
        if pv.is_zero() {
            converged = true;
            break;
        }
        if pv.is_negative() {
            lo = r.clone();
        } else {
            hi = r.clone();
        }
        let next = if pd.is_zero() {
            lo.add(&hi).div(&two)
        } else {
            let candidate = r.sub(&pv.div(&pd));
            let inside = candidate.cmp(&lo) == std::cmp::Ordering::Greater
                && candidate.cmp(&hi) == std::cmp::Ordering::Less;
            if inside {
                candidate
            } else {
                lo.add(&hi).div(&two)
            }
        };
        let step = next.sub(&r).abs();
        r = next;
        if step.cmp(&target) != std::cmp::Ordering::Greater {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SaddleError::NoConvergence(
            "radius iteration exhausted its budget".into(),
        ));
    }
    Ok((r, bracket))
}

/// f(r) at the critical point; for alpha = (q-1)/3 this is the growth base
/// theta_q of the progression-free bound.
pub fn theta(cp: &CriticalPoint) -> Real {
    cp.f_r.clone()
}

fn checked_index(cp: &CriticalPoint, n: u64, beta: i64) -> Result<u64, SaddleError> {
    let idx = &cp.alpha * BigRational::from(BigInt::from(n)) + BigRational::from(BigInt::from(beta));
    if !idx.is_integer() {
        return Err(SaddleError::Domain(format!(
            "alpha*n + beta = {idx} is not an integer index"
        )));
    }
    let idx = idx.to_integer();
    if idx.is_negative() {
        return Err(SaddleError::Domain(format!("index {idx} below zero")));
    }
    let idx = idx
        .to_u64()
        .ok_or_else(|| SaddleError::Domain("index overflow".into()))?;
    let top = (cp.q - 1) * n;
    if idx > top {
        return Err(SaddleError::Domain(format!(
            "index {idx} exceeds top degree {top}"
        )));
    }
    Ok(idx)
}

fn estimate(
    cp: &CriticalPoint,
    n: u64,
    beta: i64,
    kind: EstimateKind,
) -> Result<AsymptoticEstimate, SaddleError> {
    checked_index(cp, n, beta)?;
    let prec = cp.r.precision();
    let one = prec.one();
    if kind == EstimateKind::PrefixSum && cp.r.cmp(&one) != std::cmp::Ordering::Less {
        return Err(SaddleError::Domain(
            "prefix estimate requires r < 1 (geometric tail diverges)".into(),
        ));
    }
    let ln_f = cp.f_r.ln();
    let ln_r = cp.r.ln();
    let ln_fpp = cp.fpp_r.ln();
    let half = one.div(&prec.from_u64(2));
    let two_pi_n = prec.pi().mul(&prec.from_u64(2)).mul(&prec.from_u64(n));

    // leading = r^-(beta+1) sqrt(f/f'') [ / (1-r) for prefix sums ]
    let mut leading = cp
        .r
        .powi(-(beta + 1))
        .mul(&cp.f_r.div(&cp.fpp_r).sqrt());
    if kind == EstimateKind::PrefixSum {
        leading = leading.div(&one.sub(&cp.r));
    }

    let log_value = prec
        .from_u64(n)
        .mul(&ln_f)
        .sub(&two_pi_n.ln().mul(&half))
        .sub(&prec.from_i64(beta + 1).mul(&ln_r))
        .add(&ln_f.sub(&ln_fpp).mul(&half))
        .add(&if kind == EstimateKind::PrefixSum {
            one.sub(&cp.r).ln().neg()
        } else {
            prec.zero()
        });
    let value = log_value.exp();
    Ok(AsymptoticEstimate {
        n,
        beta,
        kind,
        log_value,
        value,
        leading_constant: leading,
    })
}

/// Leading-order estimate of the single coefficient f_{n, alpha n + beta}.
pub fn asymptotic_coefficient(
    cp: &CriticalPoint,
    n: u64,
    beta: i64,
) -> Result<AsymptoticEstimate, SaddleError> {
    estimate(cp, n, beta, EstimateKind::SingleCoefficient)
}

/// Leading-order estimate of the prefix sum up to alpha n + beta.
pub fn asymptotic_prefix(
    cp: &CriticalPoint,
    n: u64,
    beta: i64,
) -> Result<AsymptoticEstimate, SaddleError> {
    estimate(cp, n, beta, EstimateKind::PrefixSum)
}

/// Difference between the two closed forms of the q = 3 leading factor:
/// (1/r) sqrt(f/f'') and sqrt((1+r+r^2)/(2 alpha - (1-alpha) r)).
/// Vanishes exactly at the true saddle.
pub fn corollary_factor_residual(cp: &CriticalPoint) -> Result<Real, SaddleError> {
    if cp.q != 3 {
        return Err(SaddleError::Domain(format!(
            "closed-form factor comparison is specific to q = 3, got q = {}",
            cp.q
        )));
    }
    let prec = cp.r.precision();
    let lhs = cp.f_r.div(&cp.fpp_r).sqrt().div(&cp.r);
    let s0 = power_sum(3, &cp.r);
    let two_alpha = prec.from_rational(&(&cp.alpha * rational(2, 1)));
    let one_minus_alpha = prec.from_rational(&(BigRational::one() - &cp.alpha));
    let denom = two_alpha.sub(&one_minus_alpha.mul(&cp.r));
    let rhs = s0.div(&denom).sqrt();
    Ok(lhs.sub(&rhs).abs())
}

struct Cx {
    re: Real,
    im: Real,
}

impl Cx {
    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn add_real(&self, x: &Real) -> Cx {
        Cx {
            re: self.re.add(x),
            im: self.im.clone(),
        }
    }

    fn powi(&self, mut e: u64, one: &Real, zero: &Real) -> Cx {
        let mut base = Cx {
            re: self.re.clone(),
            im: self.im.clone(),
        };
        let mut acc = Cx {
            re: one.clone(),
            im: zero.clone(),
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// All trapezoidal contour coefficients of (1+z+...+z^(q-1))^n at once,
/// sharing the per-node polynomial powers across indices.
pub fn contour_row(
    n: u64,
    q: u64,
    radius: &Real,
    nodes: u64,
    precision: RunPrecision,
) -> Result<Vec<Real>, SaddleError> {
    if !radius.is_positive() {
        return Err(SaddleError::Domain("radius must be positive".into()));
    }
    if nodes < 16 {
        return Err(SaddleError::Domain(format!(
            "need at least 16 quadrature nodes, got {nodes}"
        )));
    }
    if q < 2 {
        return Err(SaddleError::Domain(format!("q must be >= 2, got {q}")));
    }
    let prec = precision;
    let one = prec.one();
    let zero = prec.zero();
    let radius = radius.with_bits(prec.get());
    let two_pi = prec.pi().mul(&prec.from_u64(2));
    let top = (q - 1) * n;

    // Per node: z, the power (1+z+...+z^(q-1))^n, and 1/z.
    let mut powered: Vec<Cx> = Vec::with_capacity(nodes as usize);
    let mut inv_z: Vec<Cx> = Vec::with_capacity(nodes as usize);
    for m in 0..nodes {
        let angle = two_pi.mul(&prec.from_u64(m)).div(&prec.from_u64(nodes));
        let c = angle.cos();
        let s = angle.sin();
        let z = Cx {
            re: radius.mul(&c),
            im: radius.mul(&s),
        };
        // 1 + z + z^2 + ... + z^(q-1), Horner.
        let mut poly = Cx {
            re: zero.clone(),
            im: zero.clone(),
        };
        for _ in 0..q {
            poly = poly.mul(&z).add_real(&one);
        }
        powered.push(poly.powi(n, &one, &zero));
        inv_z.push(Cx {
            re: c.div(&radius),
            im: s.div(&radius).neg(),
        });
    }

    // Walk indices upward, carrying w = z^-index per node.
    let nodes_r = prec.from_u64(nodes);
    let mut w: Vec<Cx> = (0..nodes as usize)
        .map(|_| Cx {
            re: one.clone(),
            im: zero.clone(),
        })
        .collect();
    let mut out = Vec::with_capacity(top as usize + 1);
    for index in 0..=top {
        let mut acc = zero.clone();
        for (p, wi) in powered.iter().zip(w.iter()) {
            acc = acc.add(&p.re.mul(&wi.re).sub(&p.im.mul(&wi.im)));
        }
        out.push(acc.div(&nodes_r));
        if index < top {
            for (wi, iz) in w.iter_mut().zip(inv_z.iter()) {
                *wi = wi.mul(iz);
            }
        }
    }
    Ok(out)
}

/// Trapezoidal approximation of the contour integral recovering one
/// coefficient of (1+z+...+z^(q-1))^n over the circle |z| = radius.
pub fn contour_coefficient(
    n: u64,
    q: u64,
    index: u64,
    radius: &Real,
    nodes: u64,
    precision: RunPrecision,
) -> Result<Real, SaddleError> {
    let top = (q.max(2) - 1) * n;
    if index > top {
        return Err(SaddleError::Domain(format!(
            "index {index} exceeds top degree {top}"
        )));
    }
    let prec = precision;
    let one = prec.one();
    let zero = prec.zero();
    if !radius.is_positive() {
        return Err(SaddleError::Domain("radius must be positive".into()));
    }
    if nodes < 16 {
        return Err(SaddleError::Domain(format!(
            "need at least 16 quadrature nodes, got {nodes}"
        )));
    }
    if q < 2 {
        return Err(SaddleError::Domain(format!("q must be >= 2, got {q}")));
    }
    let radius = radius.with_bits(prec.get());
    let two_pi = prec.pi().mul(&prec.from_u64(2));
    let mut acc = zero.clone();
    for m in 0..nodes {
        let angle = two_pi.mul(&prec.from_u64(m)).div(&prec.from_u64(nodes));
        let c = angle.cos();
        let s = angle.sin();
        let z = Cx {
            re: radius.mul(&c),
            im: radius.mul(&s),
        };
        let mut poly = Cx {
            re: zero.clone(),
            im: zero.clone(),
        };
        for _ in 0..q {
            poly = poly.mul(&z).add_real(&one);
        }
        let powered = poly.powi(n, &one, &zero);
        let zinv = Cx {
            re: c.div(&radius),
            im: s.div(&radius).neg(),
        };
        let w = zinv.powi(index, &one, &zero);
        acc = acc.add(&powered.re.mul(&w.re).sub(&powered.im.mul(&w.im)));
    }
    Ok(acc.div(&prec.from_u64(nodes)))
}

/// Ratio exact / estimate as a plain f64, for convergence tests. The exact
/// value enters through its logarithm so the size of the integer is
/// irrelevant.
pub fn ratio_to_exact(estimate: &AsymptoticEstimate, exact: &num_bigint::BigUint) -> f64 {
    let prec = estimate.log_value.precision();
    let ln_exact = prec.from_biguint(exact).ln();
    estimate.log_value.sub(&ln_exact).exp().to_f64()
}

/// Convenience: exact coefficient and prefix values from a table.
pub fn exact_coefficient(table: &CoefficientTable, index: u64) -> &num_bigint::BigUint {
    table.coeff(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::expand;

    fn prec() -> RunPrecision {
        RunPrecision::bits(128)
    }

    fn tol() -> Real {
        prec().from_f64(1e-25)
    }

    fn q3(alpha_num: i64, alpha_den: i64) -> CriticalPoint {
        critical_radius(3, &rational(alpha_num, alpha_den), &tol(), prec()).unwrap()
    }

    #[test]
    fn radius_for_alpha_two_thirds_is_closed_form() {
        let cp = q3(2, 3);
        let closed = prec().from_u64(33).sqrt().sub(&prec().one()).div(&prec().from_u64(8));
        assert!(cp.r.sub(&closed).abs().to_f64() < 1e-30);
        assert!((cp.r.to_f64() - 0.59307033).abs() < 1e-7);
    }

    #[test]
    fn radius_for_alpha_half_is_closed_form() {
        let cp = q3(1, 2);
        let closed = prec().from_u64(13).sqrt().sub(&prec().one()).div(&prec().from_u64(6));
        assert!(cp.r.sub(&closed).abs().to_f64() < 1e-30);
        assert!((cp.r.to_f64() - 0.43425855).abs() < 1e-7);
    }

    #[test]
    fn palindromic_alpha_gives_radius_one() {
        let cp = q3(1, 1);
        assert!(cp.r.sub(&prec().one()).abs().is_zero());
        // f = 3, f'' = 2 by direct differentiation at r = 1.
        assert!((cp.f_r.to_f64() - 3.0).abs() < 1e-25);
        assert!((cp.fpp_r.to_f64() - 2.0).abs() < 1e-25);
    }

    #[test]
    fn binary_alphabet_linear_equation() {
        let cp = critical_radius(2, &rational(1, 3), &tol(), prec()).unwrap();
        assert!((cp.r.to_f64() - 0.5).abs() < 1e-30);
        // closed form theta = (3/2) * 2^(1/3)
        let expect = 1.5 * 2f64.powf(1.0 / 3.0);
        assert!((theta(&cp).to_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn theta_values() {
        let t = theta(&q3(2, 3)).to_f64();
        assert!((t - 2.755105).abs() < 1e-6, "theta = {t}");
        let t2 = theta(&q3(1, 2)).to_f64();
        assert!((t2 - 2.462641).abs() < 1e-6, "theta(1/2) = {t2}");
    }

    #[test]
    fn lemma_constant_rounding_direction() {
        // The reference rounds f(r) for alpha = 1/2 down to 2.4626; the true
        // value is slightly above. Record the actual direction.
        let t2 = theta(&q3(1, 2));
        assert!(t2.sub(&prec().from_f64(2.4626)).is_positive());
    }

    #[test]
    fn alpha_domain_errors() {
        assert!(critical_radius(3, &rational(0, 1), &tol(), prec()).is_err());
        assert!(critical_radius(3, &rational(3, 2), &tol(), prec()).is_err());
        assert!(critical_radius(3, &rational(-1, 3), &tol(), prec()).is_err());
    }

    #[test]
    fn bracket_certificate() {
        let cp = q3(2, 3);
        let (lo, hi) = &cp.bracket;
        let (plo, _) = radius_poly(3, &cp.alpha, lo);
        let (phi, _) = radius_poly(3, &cp.alpha, hi);
        assert!(plo.is_negative() && phi.is_positive());
        assert!(cp.r.cmp(lo) != std::cmp::Ordering::Less);
        assert!(cp.r.cmp(hi) != std::cmp::Ordering::Greater);
        assert!(cp.residual.to_f64() < 1e-25);
    }

    #[test]
    fn theta_monotone_in_alpha() {
        let mut last = 0.0f64;
        for k in 1..=20i64 {
            let alpha = rational(k, 21);
            let cp = critical_radius(3, &alpha, &tol(), prec()).unwrap();
            let t = theta(&cp).to_f64();
            assert!(t > last, "theta not increasing at alpha = {k}/21");
            last = t;
        }
    }

    #[test]
    fn estimate_ratio_beta_shift_is_power_of_r() {
        let cp = q3(2, 3);
        let a0 = asymptotic_coefficient(&cp, 3000, 0).unwrap();
        let a3 = asymptotic_coefficient(&cp, 3000, 3).unwrap();
        let ratio = a3.value.div(&a0.value);
        let expect = cp.r.powi(-3);
        assert!(ratio.sub(&expect).abs().div(&expect).to_f64() < 1e-30);
    }

    #[test]
    fn prefix_over_single_is_geometric_factor() {
        let cp = q3(2, 3);
        let single = asymptotic_coefficient(&cp, 300, 0).unwrap();
        let pref = asymptotic_prefix(&cp, 300, 0).unwrap();
        let ratio = pref.value.div(&single.value);
        let expect = prec().one().sub(&cp.r).recip();
        assert!(ratio.sub(&expect).abs().div(&expect).to_f64() < 1e-30);
    }

    #[test]
    fn prefix_rejected_at_radius_one() {
        let cp = q3(1, 1);
        assert!(asymptotic_prefix(&cp, 300, 0).is_err());
    }

    #[test]
    fn non_integral_index_rejected() {
        let cp = q3(2, 3);
        assert!(asymptotic_coefficient(&cp, 1000, 0).is_err());
        assert!(asymptotic_coefficient(&cp, 999, 0).is_ok());
    }

    #[test]
    fn single_coefficient_estimate_close_at_moderate_n() {
        let cp = q3(2, 3);
        let n = 999;
        let table = expand(n, 3).unwrap();
        let est = asymptotic_coefficient(&cp, n, 0).unwrap();
        let ratio = ratio_to_exact(&est, table.coeff(2 * n / 3));
        assert!((ratio - 1.0).abs() < 0.01, "ratio = {ratio}");
    }

    #[test]
    fn corollary_residual_vanishes_at_saddle() {
        for (num, den) in [(1i64, 3i64), (1, 2), (2, 3), (1, 1)] {
            let cp = q3(num, den);
            let res = corollary_factor_residual(&cp).unwrap();
            assert!(res.to_f64() < 1e-10, "alpha={num}/{den}: {}", res.to_f64());
        }
        let cp2 = critical_radius(2, &rational(1, 3), &tol(), prec()).unwrap();
        assert!(corollary_factor_residual(&cp2).is_err());
    }

    #[test]
    fn contour_matches_small_table() {
        let p = RunPrecision::bits(192);
        let half = p.from_f64(0.5);
        let v = contour_coefficient(2, 3, 2, &half, 64, p).unwrap();
        assert!((v.to_f64() - 3.0).abs() < 1e-10);
        let nine_tenths = p.from_f64(0.9);
        let v2 = contour_coefficient(2, 3, 2, &nine_tenths, 64, p).unwrap();
        assert!(v.sub(&v2).abs().to_f64() < 1e-10);
    }

    #[test]
    fn contour_row_matches_exact_at_n50() {
        let p = RunPrecision::bits(192);
        let r = p.from_f64(0.593);
        let row = contour_row(50, 3, &r, 1024, p).unwrap();
        let table = expand(50, 3).unwrap();
        for (i, approx) in row.iter().enumerate() {
            let exact = p.from_biguint(table.coeff(i as u64));
            let rel = approx.sub(&exact).abs().div(&exact).to_f64();
            assert!(rel <= 1e-8, "index {i}: rel err {rel}");
        }
    }

    #[test]
    fn contour_domain_errors() {
        let p = prec();
        assert!(contour_coefficient(2, 3, 2, &p.from_f64(-0.5), 64, p).is_err());
        assert!(contour_coefficient(2, 3, 2, &p.from_f64(0.5), 8, p).is_err());
        assert!(contour_coefficient(2, 3, 9, &p.from_f64(0.5), 64, p).is_err());
    }
}
