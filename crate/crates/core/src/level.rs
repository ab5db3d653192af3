//! The common shape of both closed-form spectra:
//! `E/mc² = ν √(1 − sη·B) / √(ν² + (Zμ)²)`, with `ν` the effective principal
//! number and `B` the deformation bracket.

/// Evaluates the ratio; returns the (negative) radicand when `1 − sη·B < 0`.
///
/// The `ν/√(ν² + (Zμ)²)` form stays finite at ν = 0, where the energy vanishes.
pub(crate) fn energy_ratio(nu: f64, bracket: f64, z_mu: f64, signed_eta: f64) -> Result<f64, f64> {
    let radicand = 1.0 - signed_eta * bracket;
    if radicand < 0.0 {
        return Err(radicand);
    }
    Ok(nu * radicand.sqrt() / (nu * nu + z_mu * z_mu).sqrt())
}

/// Undeformed ratio `[1 + (Zμ)²/ν²]^{-1/2}`.
pub(crate) fn undeformed_ratio(nu: f64, z_mu: f64) -> f64 {
    nu / (nu * nu + z_mu * z_mu).sqrt()
}

/// `(x, 1 − x²)` with the complement formed without cancellation:
/// `1 − x² = ((Zμ)² + sη·B·ν²)/(ν² + (Zμ)²)`.
pub(crate) fn energy_ratio_with_complement(
    nu: f64,
    bracket: f64,
    z_mu: f64,
    signed_eta: f64,
) -> Result<(f64, f64), f64> {
    let x = energy_ratio(nu, bracket, z_mu, signed_eta)?;
    let d = nu * nu + z_mu * z_mu;
    Ok((x, (z_mu * z_mu + signed_eta * bracket * nu * nu) / d))
}
