//! Two-arm interference simulation: intensity profiles over a variable
//! U(1) shift, seeded sampling with optional Gaussian noise, and
//! first-harmonic recovery of the phase/visibility pair.

use crate::error::{PhaseError, Result};
use crate::linalg::principal_arg;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use std::io::Write;

/// Intensity at shift χ: the incoherent average over levels of the
/// two-beam profile, ½ Σ_k w_k |e^{iχ} + e^{iφ_k}|², normalized so the
/// χ-average is 1. Equals 1 + 𝒱 cos(χ − γ).
pub fn intensity_at(weights: &[f64], phases: &[f64], chi: f64) -> Result<f64> {
    if weights.len() != phases.len() {
        return Err(PhaseError::LengthMismatch {
            left: weights.len(),
            right: phases.len(),
        });
    }
    let mut intensity = 0.0;
    for (w, phi) in weights.iter().zip(phases) {
        let amp = Complex64::from_polar(1.0, chi) + Complex64::from_polar(1.0, *phi);
        intensity += 0.5 * w * amp.norm_sqr();
    }
    Ok(intensity)
}

/// Sampled interference profile over one fringe period.
#[derive(Debug, Clone)]
pub struct Interferogram {
    /// (χ_j, I_j), χ strictly increasing in [0, 2π).
    pub samples: Vec<(f64, f64)>,
    pub noise_sigma: f64,
    pub seed: u64,
}

/// Sample the profile at χ_j = 2πj/M with additive Gaussian noise. The
/// noise stream is indexed by j, so the result is deterministic for a
/// fixed seed regardless of evaluation order.
pub fn sample_interferogram(
    weights: &[f64],
    phases: &[f64],
    sample_count: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<Interferogram> {
    if sample_count < 3 {
        return Err(PhaseError::TooFewSamples { got: sample_count });
    }
    let mut samples = Vec::with_capacity(sample_count);
    for j in 0..sample_count {
        let chi = 2.0 * PI * j as f64 / sample_count as f64;
        let mut intensity = intensity_at(weights, phases, chi)?;
        if noise_sigma > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let noise: f64 = StandardNormal.sample(&mut rng);
            intensity += noise_sigma * noise;
        }
        samples.push((chi, intensity));
    }
    Ok(Interferogram {
        samples,
        noise_sigma,
        seed,
    })
}

/// Result of the first-harmonic fit.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct FringeFit {
    pub gamma: f64,
    pub visibility: f64,
    /// Root-mean-square misfit of I_j against 1 + 𝒱̂ cos(χ_j − γ̂).
    pub residual: f64,
    /// Set when the fitted visibility is below 3·σ/√M and the phase
    /// estimate carries no information.
    pub gamma_unreliable: bool,
}

/// Recover (γ̂, 𝒱̂) by projecting the samples on the first harmonic:
/// a = (2/M) Σ I_j cos χ_j, b = (2/M) Σ I_j sin χ_j. Exact on noiseless
/// uniform grids.
pub fn fit_phase_visibility(gram: &Interferogram) -> Result<FringeFit> {
    let m = gram.samples.len();
    if m < 3 {
        return Err(PhaseError::TooFewSamples { got: m });
    }
    let spread = gram
        .samples
        .iter()
        .map(|(chi, _)| *chi)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
    if spread.1 - spread.0 < 1e-12 {
        return Err(PhaseError::DegenerateDesign);
    }
    let (mut a, mut b) = (0.0, 0.0);
    for (chi, intensity) in &gram.samples {
        a += intensity * chi.cos();
        b += intensity * chi.sin();
    }
    a *= 2.0 / m as f64;
    b *= 2.0 / m as f64;
    let visibility = a.hypot(b);
    let gamma = principal_arg(Complex64::new(a, b));
    let mut sq = 0.0;
    for (chi, intensity) in &gram.samples {
        let model = 1.0 + visibility * (chi - gamma).cos();
        sq += (intensity - model).powi(2);
    }
    let residual = (sq / m as f64).sqrt();
    let gamma_unreliable = visibility < 3.0 * gram.noise_sigma / (m as f64).sqrt();
    Ok(FringeFit {
        gamma,
        visibility,
        residual,
        gamma_unreliable,
    })
}

/// CSV export: header `chi,intensity`, radians and normalized intensity,
/// 17 significant digits.
pub fn write_csv<W: Write>(gram: &Interferogram, mut out: W) -> std::io::Result<()> {
    writeln!(out, "chi,intensity")?;
    for (chi, intensity) in &gram.samples {
        writeln!(out, "{chi:.16e},{intensity:.16e}")?;
    }
    Ok(())
}

/// Minimal static SVG line plot of the interferogram.
pub fn render_svg(gram: &Interferogram) -> String {
    let (width, height, margin) = (640.0, 400.0, 48.0);
    let (plot_w, plot_h) = (width - 2.0 * margin, height - 2.0 * margin);
    let i_max = gram
        .samples
        .iter()
        .map(|(_, i)| *i)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(2.0);
    let i_min = gram
        .samples
        .iter()
        .map(|(_, i)| *i)
        .fold(f64::INFINITY, f64::min)
        .min(0.0);
    let points: Vec<String> = gram
        .samples
        .iter()
        .map(|(chi, i)| {
            let x = margin + plot_w * chi / (2.0 * PI);
            let y = margin + plot_h * (1.0 - (i - i_min) / (i_max - i_min));
            format!("{x:.2},{y:.2}")
        })
        .collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<rect x=\"{m}\" y=\"{m}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" ",
            "stroke=\"black\"/>\n",
            "<text x=\"{xmid}\" y=\"{xlab}\" text-anchor=\"middle\" ",
            "font-family=\"sans-serif\" font-size=\"14\">chi (rad)</text>\n",
            "<text x=\"14\" y=\"{ymid}\" text-anchor=\"middle\" ",
            "font-family=\"sans-serif\" font-size=\"14\" ",
            "transform=\"rotate(-90 14 {ymid})\">intensity</text>\n",
            "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" ",
            "points=\"{pts}\"/>\n</svg>\n"
        ),
        w = width,
        h = height,
        m = margin,
        pw = plot_w,
        ph = plot_h,
        xmid = margin + plot_w / 2.0,
        xlab = height - 12.0,
        ymid = margin + plot_h / 2.0,
        pts = points.join(" ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const W: [f64; 2] = [0.75, 0.25];
    const PHI: [f64; 2] = [-PI / 2.0, -3.0 * PI / 2.0];

    #[test]
    fn intensity_peaks_at_gamma() {
        // oracle pair for these weights/phases: (γ, 𝒱) = (−π/2, 0.5)
        let gamma = -PI / 2.0;
        assert_abs_diff_eq!(intensity_at(&W, &PHI, gamma).unwrap(), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            intensity_at(&W, &PHI, gamma + PI).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(intensity_at(&W, &PHI, 0.0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_matches_per_level_sum() {
        for j in 0..32 {
            let chi = 2.0 * PI * j as f64 / 32.0;
            let direct = intensity_at(&W, &PHI, chi).unwrap();
            let closed = 1.0 + 0.5 * (chi + PI / 2.0).cos();
            assert_abs_diff_eq!(direct, closed, epsilon = 1e-12);
        }
    }

    #[test]
    fn four_point_noiseless_samples() {
        let gram = sample_interferogram(&W, &PHI, 4, 0.0, 0).unwrap();
        let expect = [1.0, 0.5, 1.0, 1.5];
        for ((chi, intensity), (j, e)) in gram.samples.iter().zip(expect.iter().enumerate()) {
            assert_abs_diff_eq!(*chi, PI * j as f64 / 2.0, epsilon = 1e-15);
            assert_abs_diff_eq!(*intensity, *e, epsilon = 1e-12);
        }
    }

    #[test]
    fn mean_intensity_is_one() {
        let gram = sample_interferogram(&W, &PHI, 360, 0.0, 0).unwrap();
        let mean: f64 =
            gram.samples.iter().map(|(_, i)| i).sum::<f64>() / gram.samples.len() as f64;
        assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let a = sample_interferogram(&W, &PHI, 64, 0.05, 1234).unwrap();
        let b = sample_interferogram(&W, &PHI, 64, 0.05, 1234).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = sample_interferogram(&W, &PHI, 64, 0.05, 1235).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn noiseless_fit_round_trips() {
        let gram = sample_interferogram(&W, &PHI, 360, 0.0, 0).unwrap();
        let fit = fit_phase_visibility(&gram).unwrap();
        assert_abs_diff_eq!(fit.gamma, -PI / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.visibility, 0.5, epsilon = 1e-9);
        assert!(fit.residual < 1e-12);
        assert!(!fit.gamma_unreliable);
    }

    #[test]
    fn node_input_flags_unreliable_phase() {
        let gram = sample_interferogram(&[0.5, 0.5], &[0.0, PI], 360, 0.01, 42).unwrap();
        let fit = fit_phase_visibility(&gram).unwrap();
        // fitted contrast sits at the noise floor, far below any real fringe
        assert!(fit.visibility < 0.01);
        let threshold = 3.0 * 0.01 / (360f64).sqrt();
        assert_eq!(fit.gamma_unreliable, fit.visibility < threshold);
        let clean = sample_interferogram(&[0.5, 0.5], &[0.0, PI], 360, 0.0, 0).unwrap();
        let clean_fit = fit_phase_visibility(&clean).unwrap();
        assert!(clean_fit.visibility < 1e-12);
        assert!(clean_fit.gamma.is_finite());
    }

    #[test]
    fn too_few_samples_rejected() {
        assert!(matches!(
            sample_interferogram(&W, &PHI, 2, 0.0, 0),
            Err(PhaseError::TooFewSamples { got: 2 })
        ));
    }

    #[test]
    fn csv_has_header_and_17_digit_values() {
        let gram = sample_interferogram(&W, &PHI, 4, 0.0, 0).unwrap();
        let mut buf = Vec::new();
        write_csv(&gram, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("chi,intensity"));
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 2);
        assert!(first.contains('e'));
    }
}
