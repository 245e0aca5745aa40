//! Closed forms for `Sⁿ × Sⁿ` and the non-Yamabe certificate.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bifurcation::{enumerate_instants, Classification, RigidityInterval};
use crate::error::{Error, Result};
use crate::family::{check_lambda, ProductFamily};
use crate::rational::{from_int, q, serde_q, to_f64};
use crate::spectra::{harmonic_dim, sphere_spectrum, unit_sphere_volume};

/// Relative slack the certificate must clear: `margin > 1e−6 · 𝒴(Sᵐ)`.
pub const CERTIFICATE_MARGIN: f64 = 1e-6;

/// The `i`-th degeneracy instant of `Sⁿ × Sⁿ` in `(0, 1]`:
/// `n(n−1) / (i(i+n−1)(2n−1) − n(n−1))`, where branch `(i, 0)` vanishes.
pub fn closed_form_instant(n: u32, i: u32) -> BigRational {
    let (n, i) = (n as i64, i as i64);
    let nn = n * (n - 1);
    q(nn, i * (i + n - 1) * (2 * n - 1) - nn)
}

/// `((n−1)/n, n/(n−1))`: the instant-free window around the Einstein point `λ = 1`.
pub fn closed_form_rigidity(n: u32) -> RigidityInterval {
    let n = n as i64;
    RigidityInterval {
        lo: q(n - 1, n),
        hi: q(n, n - 1),
    }
}

/// Runs the generic engine on `Sⁿ × Sⁿ` with `count` eigenvalues per factor
/// over `(λ_{count−1}(n), 1]` and compares with the closed forms: same instant
/// set, multiplicity `harmonic_dim(n, i)` at `λ_i`, and a bifurcation verdict
/// at every instant.
pub fn crosscheck_sphere(n: u32, count: usize) -> Result<bool> {
    let s = sphere_spectrum(n, count)?;
    let fam = ProductFamily::new(s.clone(), s)?;

    // The engine window is closed, so start it halfway between λ_{count−1}
    // (excluded) and the next closed-form instant above it; this covers the
    // same instants as the half-open window.
    let last = count.saturating_sub(1).max(1) as u32;
    let excluded = closed_form_instant(n, last);
    let next_up = if last > 1 {
        closed_form_instant(n, last - 1)
    } else {
        from_int(1)
    };
    let lo = (&excluded + &next_up) / from_int(2);
    let hi = from_int(1);

    let found = enumerate_instants(&fam, &lo, &hi)?;
    let expected: Vec<(BigRational, u64)> = (1..last)
        .rev()
        .map(|i| (closed_form_instant(n, i), harmonic_dim(n, i)))
        .collect();

    if found.len() != expected.len() {
        return Ok(false);
    }
    Ok(found.iter().zip(&expected).all(|(inst, (lambda, mult))| {
        let total: u64 = inst.contributors.iter().map(|c| c.multiplicity).sum();
        &inst.lambda == lambda
            && total == *mult
            && matches!(
                inst.classification,
                Classification::Bifurcation | Classification::EquivariantBifurcation
            )
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionResult {
    #[serde(with = "serde_q")]
    pub lambda: BigRational,
    /// `κ_λ · V(λ)^{2/m}`.
    pub normalized_scalar: f64,
    /// `𝒴(Sᵐ) = m(m−1)·ω_m^{2/m}`.
    pub sphere_yamabe: f64,
    pub certified_not_yamabe: bool,
    pub margin: f64,
}

/// Yamabe constant of the round `Sᵐ`.
pub fn sphere_yamabe(m: u32) -> f64 {
    let m_f = m as f64;
    m_f * (m_f - 1.0) * unit_sphere_volume(m).powf(2.0 / m_f)
}

/// Certifies that `g_λ` is not a Yamabe metric by showing its volume-normalized
/// scalar curvature exceeds `𝒴(Sᵐ) ≥ 𝒴(M)`. A `false` verdict is not a claim
/// that `g_λ` is Yamabe.
pub fn yamabe_obstruction(fam: &ProductFamily, lambda: &BigRational) -> Result<ObstructionResult> {
    check_lambda(lambda)?;
    let vol0 = fam
        .factor(0)
        .volume()
        .ok_or(Error::MissingVolume { factor: 0 })?;
    let vol1 = fam
        .factor(1)
        .volume()
        .ok_or(Error::MissingVolume { factor: 1 })?;
    let m = fam.m() as f64;
    let m1 = fam.factor(1).dim() as f64;
    let kappa = fam.kappa_lambda(lambda)?;

    // κ_λ·V^{2/m} = κ_λ·(vol₀vol₁)^{2/m}·λ^{m₁/m}; λ is split into numerator
    // and denominator so tiny or huge rationals do not underflow.
    let lam_pow = ratio_pow(lambda, m1 / m);
    let normalized_scalar = to_f64(&kappa) * (vol0 * vol1).powf(2.0 / m) * lam_pow;
    let sphere = sphere_yamabe(fam.m());
    let margin = normalized_scalar - sphere;
    Ok(ObstructionResult {
        lambda: lambda.clone(),
        normalized_scalar,
        sphere_yamabe: sphere,
        certified_not_yamabe: margin > CERTIFICATE_MARGIN * sphere,
        margin,
    })
}

fn ratio_pow(x: &BigRational, p: f64) -> f64 {
    debug_assert!(x.is_positive());
    let num = x.numer().to_f64().unwrap_or(f64::INFINITY);
    let den = x.denom().to_f64().unwrap_or(f64::INFINITY);
    if num.is_finite() && den.is_finite() {
        num.powf(p) / den.powf(p)
    } else {
        to_f64(x).powf(p)
    }
}
