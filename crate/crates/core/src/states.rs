//! Constructors for the named state families, photon statistics, and the
//! witness that binomial states admit no nonlinear function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::fock::{ExpOptions, FockVector, Truncation};
use crate::lie::{hp_apply, Algebra, Generator};
use crate::nlcs::{self, infer_f, Inference, NlcsSpec, NotNlcs};
use crate::specfun::{laguerre, log_binomial};

/// A state family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum StateSpec {
    Coherent {
        alpha: Complex64,
    },
    ExcitedCoherent {
        alpha: Complex64,
        m: usize,
    },
    #[serde(alias = "nbs")]
    NegativeBinomial {
        eta: f64,
        #[serde(rename = "M")]
        big_m: usize,
    },
    Binomial {
        eta: f64,
        #[serde(rename = "M")]
        big_m: usize,
    },
    PerelomovK {
        alpha: Complex64,
        k: usize,
    },
    CustomNlcs(NlcsSpec),
}

impl StateSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            StateSpec::Coherent { alpha } | StateSpec::ExcitedCoherent { alpha, .. } => {
                check_alpha(*alpha)
            }
            StateSpec::NegativeBinomial { eta, big_m } => {
                check_eta(*eta)?;
                if *big_m == 0 {
                    return Err(Error::Parameter("negative binomial requires M ≥ 1".into()));
                }
                Ok(())
            }
            StateSpec::Binomial { eta, .. } => check_eta(*eta),
            StateSpec::PerelomovK { alpha, k } => {
                check_alpha(*alpha)?;
                if *k == 0 {
                    return Err(Error::Parameter("photon multiplicity k must be ≥ 1".into()));
                }
                if alpha.norm() > nlcs::PERELOMOV_MAX_ALPHA {
                    return Err(Error::Parameter(format!(
                        "|alpha| = {} exceeds {}",
                        alpha.norm(),
                        nlcs::PERELOMOV_MAX_ALPHA
                    )));
                }
                Ok(())
            }
            StateSpec::CustomNlcs(spec) => check_alpha(spec.alpha),
        }
    }

    /// Fails with a truncation error when the kept state has lost `UNIT_NORM_TOL` or more of its norm.
    pub fn build(&self, trunc: Truncation) -> Result<FockVector> {
        self.validate()?;
        let v = match self {
            StateSpec::Coherent { alpha } => coherent(*alpha, trunc),
            StateSpec::ExcitedCoherent { alpha, m } => excited_coherent(*alpha, *m, trunc),
            StateSpec::NegativeBinomial { eta, big_m } => negative_binomial(*eta, *big_m, trunc),
            StateSpec::Binomial { eta, big_m } => binomial(*eta, *big_m, trunc),
            StateSpec::PerelomovK { alpha, k } => perelomov_k(*alpha, *k, trunc),
            StateSpec::CustomNlcs(spec) => custom_nlcs(spec, trunc),
        }?;
        let lost = (1.0 - v.norm_sqr()).abs() + v.spill();
        if lost.is_nan() || lost >= UNIT_NORM_TOL {
            return Err(Error::Truncation { dim: v.dim(), lost });
        }
        Ok(v)
    }
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!(
            "alpha must be finite, got {alpha}"
        )));
    }
    Ok(())
}

/// Largest norm defect accepted from [`StateSpec::build`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// `η` must lie in the open interval `(0, 1)`.
pub fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Parameter(format!(
            "eta must lie in (0, 1), got {eta}"
        )));
    }
    Ok(())
}

/// Build from log-magnitudes `ln|amp[n]|` and phases.
fn from_log_amplitudes(
    dim: usize,
    term: impl Fn(usize) -> Option<(f64, f64)>,
) -> Result<FockVector> {
    let amp = (0..dim)
        .map(|n| match term(n) {
            Some((ln_mag, phase)) => Complex64::from_polar(ln_mag.exp(), phase),
            None => Complex64::new(0.0, 0.0),
        })
        .collect();
    FockVector::from_amplitudes(amp)
}

/// `e^{−|α|²/2} αⁿ/√n!`.
pub fn coherent(alpha: Complex64, trunc: Truncation) -> Result<FockVector> {
    check_alpha(alpha)?;
    excited_coherent(alpha, 0, trunc)
}

/// Normalized `a†ᵐ|α⟩`: `amp[n] ∝ α^{n−m}√n!/(n−m)!` for `n ≥ m`, with
/// `‖a†ᵐ|α⟩‖² = m!·L_m(−|α|²)`.
pub fn excited_coherent(alpha: Complex64, m: usize, trunc: Truncation) -> Result<FockVector> {
    check_alpha(alpha)?;
    let r = alpha.norm();
    let theta = alpha.arg();
    let ln_norm = 0.5 * (ln_factorial(m as u64) + laguerre(m, -r * r).ln());
    trunc.build(|dim| {
        if dim <= m {
            return Err(Error::Truncation { dim, lost: 1.0 });
        }
        from_log_amplitudes(dim, |n| {
            if n < m {
                return None;
            }
            let p = n - m;
            if r == 0.0 {
                return (p == 0).then_some((0.0, 0.0));
            }
            let ln_mag = -r * r / 2.0 + p as f64 * r.ln() + 0.5 * ln_factorial(n as u64)
                - ln_factorial(p as u64)
                - ln_norm;
            Some((ln_mag, p as f64 * theta))
        })
    })
}

/// `(1−η)^{M/2}·C(M+n−1, n)^{1/2}·η^{n/2}`.
pub fn negative_binomial(eta: f64, big_m: usize, trunc: Truncation) -> Result<FockVector> {
    check_eta(eta)?;
    if big_m == 0 {
        return Err(Error::Parameter("negative binomial requires M ≥ 1".into()));
    }
    let (ln_keep, ln_eta) = ((1.0 - eta).ln(), eta.ln());
    trunc.build(|dim| {
        let mut amp = Vec::with_capacity(dim);
        for n in 0..dim {
            let lb = log_binomial((big_m + n - 1) as u64, n as u64)?;
            let ln_mag = 0.5 * (big_m as f64 * ln_keep + lb + n as f64 * ln_eta);
            amp.push(Complex64::new(ln_mag.exp(), 0.0));
        }
        FockVector::from_amplitudes(amp)
    })
}

/// Levels beyond `M` kept by the adaptive binomial constructor.
pub const BINOMIAL_PAD: usize = 8;

/// `[C(M,n)·ηⁿ(1−η)^{M−n}]^{1/2}` for `n ≤ M`, zero above.
pub fn binomial(eta: f64, big_m: usize, trunc: Truncation) -> Result<FockVector> {
    check_eta(eta)?;
    let dim = match trunc {
        Truncation::Fixed(d) if d <= big_m => {
            return Err(Error::Parameter(format!(
                "binomial state needs dim > M (dim = {d}, M = {big_m})"
            )));
        }
        Truncation::Fixed(d) => d,
        Truncation::Adaptive(_) => big_m + 1 + BINOMIAL_PAD,
    };
    let (ln_keep, ln_eta) = ((1.0 - eta).ln(), eta.ln());
    let mut amp = vec![Complex64::new(0.0, 0.0); dim];
    for (n, a) in amp.iter_mut().enumerate().take(big_m + 1) {
        let lb = log_binomial(big_m as u64, n as u64)?;
        let ln_p = lb + n as f64 * ln_eta + (big_m - n) as f64 * ln_keep;
        *a = Complex64::new((0.5 * ln_p).exp(), 0.0);
    }
    FockVector::from_amplitudes(amp)
}

/// k-photon Perelomov state `exp(αA_k† − α*A_k)|0⟩`.
pub fn perelomov_k(alpha: Complex64, k: usize, trunc: Truncation) -> Result<FockVector> {
    let opts = ExpOptions::default();
    trunc.build(|dim| nlcs::build_perelomov_k(alpha, k, dim, &opts))
}

/// Recursive construction from a tabulated nonlinear function. The adaptive
/// rule uses the full table and fails if the tail is not resolved.
pub fn custom_nlcs(spec: &NlcsSpec, trunc: Truncation) -> Result<FockVector> {
    match trunc {
        Truncation::Fixed(dim) => nlcs::build_recursive(spec, dim),
        Truncation::Adaptive(policy) => {
            let dim = spec.f.len() + 1;
            let v = nlcs::build_recursive(spec, dim)?;
            let tail = policy.tail_mass(&v);
            if tail >= policy.tail_tol {
                return Err(Error::Truncation { dim, lost: tail });
            }
            Ok(v)
        }
    }
}

/// Photon-number mean, variance and Mandel `Q = variance/mean − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonStats {
    pub mean: f64,
    pub variance: f64,
    /// `None` when the mean vanishes.
    pub mandel_q: Option<f64>,
}

pub fn photon_stats(v: &FockVector) -> Result<PhotonStats> {
    let total = v.norm_sqr();
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let probs: Vec<f64> = v.amp().iter().map(|a| a.norm_sqr() / total).collect();
    let mean: f64 = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let variance: f64 = probs
        .iter()
        .enumerate()
        .map(|(n, p)| (n as f64 - mean).powi(2) * p)
        .sum();
    let mandel_q = (mean > 0.0).then(|| variance / mean - 1.0);
    Ok(PhotonStats {
        mean,
        variance,
        mandel_q,
    })
}

/// `‖(√η J₀ + √(1−η) J₋)v − (√η M/2)v‖`.
pub fn binomial_su2_ladder_residual(v: &FockVector, eta: f64, big_m: usize) -> Result<f64> {
    let (s, c) = (eta.sqrt(), (1.0 - eta).sqrt());
    let j0 = hp_apply(Algebra::Su2, Generator::X0, big_m, v)?;
    let jm = hp_apply(Algebra::Su2, Generator::Minus, big_m, v)?;
    let lhs = j0.scale(Complex64::new(s, 0.0));
    let rhs = v.scale(Complex64::new(s * big_m as f64 / 2.0, 0.0));
    Ok(lhs
        .sub(&jm.scale(Complex64::new(-c, 0.0)))?
        .sub(&rhs)?
        .norm())
}

/// `‖a·v − √(η/(1−η))·√(M−N̂)·v‖`.
pub fn binomial_lowering_residual(v: &FockVector, eta: f64, big_m: usize) -> Result<f64> {
    let ratio = (eta / (1.0 - eta)).sqrt();
    let rhs = v.shift_down(0, |n| {
        if n <= big_m {
            ratio * ((big_m - n) as f64).sqrt()
        } else {
            0.0
        }
    });
    Ok(v.annihilate().sub(&rhs)?.norm())
}

/// Numerical evidence that a binomial state is not an eigenstate of any `f(N̂)a`.
///
/// `a·v` has no component at level `M` (there is nothing at `M+1` to lower),
/// so `f(N̂)a·v` vanishes there for every diagonal `f`, while `α·v` has
/// `α·amp[M] = α·η^{M/2} ≠ 0`. Hence every eigen-residual is at least
/// `|α|·η^{M/2}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomialWitness {
    pub eta: f64,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub dim: usize,
    /// Residual of `a·v = √(η/(1−η))·√(M−N̂)·v`.
    pub lowering_residual: f64,
    /// Residual of the su(2) ladder relation.
    pub su2_ladder_residual: f64,
    pub top_amplitude: f64,
    pub expected_top_amplitude: f64,
    /// `|(a·v)[M]|`, exactly zero.
    pub lowered_top: f64,
    /// Lower bound on `‖f(N̂)a·v − α·v‖ / |α|` over all `f`.
    pub residual_bound_per_alpha: f64,
    pub verdict: Option<NotNlcs>,
}

impl BinomialWitness {
    pub fn min_residual(&self, alpha: Complex64) -> f64 {
        alpha.norm() * self.residual_bound_per_alpha
    }

    /// The obstruction holds: the top level is untouched by lowering, carries
    /// the expected weight, and inference rejects the state.
    pub fn confirms_not_nlcs(&self, tol: f64) -> bool {
        self.lowered_top == 0.0
            && self.top_amplitude > 0.0
            && (self.top_amplitude - self.expected_top_amplitude).abs() <= tol
            && self.verdict.is_some()
    }
}

pub fn binomial_not_nlcs_witness(eta: f64, big_m: usize) -> Result<BinomialWitness> {
    check_eta(eta)?;
    if big_m == 0 {
        return Err(Error::Parameter("witness requires M ≥ 1".into()));
    }
    let v = binomial(eta, big_m, Truncation::default())?;
    let top = v.amp()[big_m].re;
    let verdict = match infer_f(&v, Complex64::new(1.0, 0.0))? {
        Inference::NotNlcs(reason) => Some(reason),
        Inference::Nlcs(_) => None,
    };
    Ok(BinomialWitness {
        eta,
        big_m,
        dim: v.dim(),
        lowering_residual: binomial_lowering_residual(&v, eta, big_m)?,
        su2_ladder_residual: binomial_su2_ladder_residual(&v, eta, big_m)?,
        top_amplitude: top,
        expected_top_amplitude: eta.powf(big_m as f64 / 2.0),
        lowered_top: v.annihilate().amp()[big_m].norm(),
        residual_bound_per_alpha: top,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TruncationPolicy;
    use crate::nlcs::{eigen_residual, NonlinearFunction};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn adaptive() -> Truncation {
        Truncation::default()
    }

    #[test]
    fn coherent_examples() {
        assert_eq!(coherent(c(0.0), adaptive()).unwrap().amp()[0], c(1.0));
        let v = coherent(c(1.0), adaptive()).unwrap();
        assert_abs_diff_eq!(v.amp()[2].re, 0.428_881_942_480_353_4, epsilon = 1e-15);
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);
        let s = photon_stats(&v).unwrap();
        assert_abs_diff_eq!(s.mean, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.mandel_q.unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_complex_phase() {
        let alpha = Complex64::new(0.3, 0.4);
        let v = coherent(alpha, adaptive()).unwrap();
        let want = (-0.125f64).exp() * alpha * alpha / 2f64.sqrt();
        assert!((v.amp()[2] - want).norm() < 1e-15);
    }

    #[test]
    fn coherent_truncation_failure() {
        let tight = Truncation::Adaptive(TruncationPolicy {
            max_dim: 32,
            ..TruncationPolicy::default()
        });
        assert!(matches!(
            coherent(c(5.0), tight),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn excited_coherent_examples() {
        let a = excited_coherent(c(0.8), 0, adaptive()).unwrap();
        let b = coherent(c(0.8), adaptive()).unwrap();
        assert_eq!(a, b);

        let v = excited_coherent(c(0.8), 1, adaptive()).unwrap();
        assert_eq!(v.amp()[0], c(0.0));
        assert_abs_diff_eq!(
            v.amp()[2].re / v.amp()[1].re,
            0.8 * 2f64.sqrt(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);

        let v = excited_coherent(c(0.0), 3, Truncation::Fixed(8)).unwrap();
        assert_eq!(v, FockVector::basis(8, 3));
    }

    #[test]
    fn excited_coherent_norm_uses_laguerre() {
        // ‖a†ᵐ|α⟩‖² = m!·L_m(−|α|²), measured on the raised vector
        for m in 0..=4 {
            for &r in &[0.3, 1.0, 1.5] {
                let alpha = Complex64::from_polar(r, 0.7);
                let raised = coherent(alpha, Truncation::Fixed(96)).unwrap().create_k(m);
                let fact: f64 = (1..=m).map(|k| k as f64).product();
                assert_relative_eq!(
                    raised.norm_sqr(),
                    fact * laguerre(m, -r * r),
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn negative_binomial_examples() {
        let v = negative_binomial(0.5, 1, adaptive()).unwrap();
        assert_abs_diff_eq!(
            v.amp()[0].re,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(v.amp()[1].re, 0.5, epsilon = 1e-15);
        for n in 0..v.dim() {
            assert_relative_eq!(
                v.amp()[n].re,
                0.5f64.sqrt().powi(n as i32 + 1),
                max_relative = 1e-13
            );
        }

        let eta: f64 = 0.3;
        let v = negative_binomial(eta, 4, adaptive()).unwrap();
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        let spec = NlcsSpec::new(c(eta.sqrt()), NonlinearFunction::nbs(v.dim(), 4).unwrap());
        assert!(eigen_residual(&spec, &v).unwrap() <= 1e-10);
    }

    #[test]
    fn negative_binomial_moments() {
        // negative-binomial moments by direct summation over p(n) = C(M+n−1,n)(1−η)^M ηⁿ
        for &(eta, big_m) in &[(0.3, 4usize), (0.1, 1), (0.5, 10)] {
            let v = negative_binomial(eta, big_m, adaptive()).unwrap();
            let mut p = (1.0 - eta).powi(big_m as i32);
            let (mut m1, mut m2) = (0.0, 0.0);
            for n in 0..2000 {
                if n > 0 {
                    p *= eta * (big_m + n - 1) as f64 / n as f64;
                }
                m1 += n as f64 * p;
                m2 += (n * n) as f64 * p;
            }
            let var = m2 - m1 * m1;
            let s = photon_stats(&v).unwrap();
            assert_relative_eq!(s.mean, m1, max_relative = 1e-10);
            assert_relative_eq!(
                s.mean,
                big_m as f64 * eta / (1.0 - eta),
                max_relative = 1e-10
            );
            assert_relative_eq!(s.mandel_q.unwrap(), var / m1 - 1.0, max_relative = 1e-8);
            assert_abs_diff_eq!(s.mandel_q.unwrap(), eta / (1.0 - eta), epsilon = 1e-6);
        }
    }

    #[test]
    fn negative_binomial_coherent_limit() {
        let big_m = 400;
        let eta = 1.0 / (big_m as f64 + 1.0);
        let v = negative_binomial(eta, big_m, adaptive()).unwrap();
        let s = photon_stats(&v).unwrap();
        assert_abs_diff_eq!(s.mean, 1.0, epsilon = 1e-10);
        assert!(s.mandel_q.unwrap() <= 0.01);
    }

    #[test]
    fn binomial_examples() {
        let eta: f64 = 0.3;
        let v = binomial(eta, 1, adaptive()).unwrap();
        assert_abs_diff_eq!(v.amp()[0].re, (1.0 - eta).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.amp()[1].re, eta.sqrt(), epsilon = 1e-15);
        assert_eq!(v.amp()[2], c(0.0));

        let v = binomial(eta, 4, adaptive()).unwrap();
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);
        let s = photon_stats(&v).unwrap();
        assert_abs_diff_eq!(s.mean, 4.0 * eta, epsilon = 1e-12);
        assert_abs_diff_eq!(s.variance, 4.0 * eta * (1.0 - eta), epsilon = 1e-12);
        assert_abs_diff_eq!(s.mandel_q.unwrap(), -eta, epsilon = 1e-12);
        assert!(binomial_su2_ladder_residual(&v, eta, 4).unwrap() <= 1e-12);

        assert!(matches!(
            binomial(1.0, 2, adaptive()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            binomial(0.0, 2, adaptive()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            binomial(0.5, 4, Truncation::Fixed(4)),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn photon_stats_examples() {
        let s = photon_stats(&FockVector::basis(8, 5)).unwrap();
        assert_eq!((s.mean, s.variance, s.mandel_q), (5.0, 0.0, Some(-1.0)));
        let s = photon_stats(&FockVector::vacuum(8)).unwrap();
        assert_eq!(s.mandel_q, None);
        assert!(photon_stats(&FockVector::zeros(3)).is_err());
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"mandel_q\":null"));
    }

    #[test]
    fn witness_examples() {
        let w = binomial_not_nlcs_witness(0.5, 1).unwrap();
        assert_abs_diff_eq!(w.top_amplitude, 0.707_106_781_186_547_5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            w.min_residual(c(2.0)),
            2.0 * 0.707_106_781_186_547_5,
            epsilon = 1e-15
        );

        let w = binomial_not_nlcs_witness(0.3, 4).unwrap();
        assert!(w.lowering_residual <= 1e-12);
        assert!(w.su2_ladder_residual <= 1e-12);
        assert_abs_diff_eq!(w.top_amplitude, 0.09, epsilon = 1e-12);
        assert_eq!(w.lowered_top, 0.0);
        assert_eq!(w.verdict, Some(NotNlcs::FiniteSupport { top: 4 }));
        assert!(w.confirms_not_nlcs(1e-12));

        // the bound really is attained from below: f ≡ 1 with any α
        let v = binomial(0.3, 4, adaptive()).unwrap();
        let alpha = c(0.7);
        let spec = NlcsSpec::new(alpha, NonlinearFunction::one(v.dim()));
        assert!(eigen_residual(&spec, &v).unwrap() >= w.min_residual(alpha));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = StateSpec::NegativeBinomial { eta: 0.3, big_m: 4 };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"family":"negative_binomial","params":{"eta":0.3,"M":4}}"#
        );
        assert_eq!(serde_json::from_str::<StateSpec>(&text).unwrap(), spec);
        let alias: StateSpec =
            serde_json::from_str(r#"{"family":"nbs","params":{"eta":0.3,"M":4}}"#).unwrap();
        assert_eq!(alias, spec);
        let coh: StateSpec =
            serde_json::from_str(r#"{"family":"coherent","params":{"alpha":[0.5,0.0]}}"#).unwrap();
        assert_eq!(coh, StateSpec::Coherent { alpha: c(0.5) });
    }

    #[test]
    fn all_constructors_unit_norm_small_spill() {
        let specs = [
            StateSpec::Coherent {
                alpha: Complex64::new(1.2, -0.4),
            },
            StateSpec::ExcitedCoherent {
                alpha: c(0.8),
                m: 3,
            },
            StateSpec::NegativeBinomial {
                eta: 0.5,
                big_m: 10,
            },
            StateSpec::Binomial { eta: 0.7, big_m: 6 },
            StateSpec::PerelomovK {
                alpha: c(0.6),
                k: 3,
            },
            StateSpec::CustomNlcs(NlcsSpec::new(c(0.5), NonlinearFunction::excited(64, 2))),
        ];
        for spec in &specs {
            let v = spec.build(adaptive()).unwrap();
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
            assert!(v.spill() < 1e-12, "{spec:?}");
            let s = photon_stats(&v).unwrap();
            assert!(s.variance >= 0.0);
        }
    }

    #[test]
    fn fixed_dim_too_small_is_truncation() {
        let spec = StateSpec::Coherent { alpha: c(5.0) };
        assert!(matches!(
            spec.build(Truncation::Fixed(8)),
            Err(Error::Truncation { .. })
        ));
        assert!(spec.build(Truncation::Fixed(128)).is_ok());
        let nbs = StateSpec::NegativeBinomial { eta: 0.3, big_m: 4 };
        assert!(matches!(
            nbs.build(Truncation::Fixed(4)),
            Err(Error::Truncation { .. })
        ));
    }

    proptest! {
        #[test]
        fn photon_stats_are_consistent(amp in prop::collection::vec(-1.0f64..1.0, 1..40)) {
            prop_assume!(amp.iter().any(|a| a.abs() > 1e-3));
            let v = FockVector::from_real(&amp).unwrap().normalize().unwrap();
            prop_assert!((v.norm_sqr() - 1.0).abs() <= 1e-12);
            let s = photon_stats(&v).unwrap();
            prop_assert!(s.variance >= 0.0);
            prop_assert!(s.mean >= 0.0 && s.mean <= (amp.len() - 1) as f64 + 1e-12);
            let second: f64 = v.amp().iter().enumerate().map(|(n, a)| (n * n) as f64 * a.norm_sqr()).sum();
            prop_assert!((s.variance - (second - s.mean * s.mean)).abs() <= 1e-10 * (1.0 + second));
        }

        #[test]
        fn binomial_support_is_zero_to_m(eta in 0.01f64..0.99, big_m in 1usize..30) {
            let v = binomial(eta, big_m, Truncation::default()).unwrap();
            prop_assert_eq!(v.support().map(|(_, hi)| hi), Some(big_m));
            prop_assert!(v.amp()[..=big_m].iter().all(|a| a.re > 0.0));
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn closed_forms_have_unit_norm(eta in 0.01f64..0.8, big_m in 1usize..20, r in 0.0f64..2.0, m in 0usize..4) {
            let nbs = negative_binomial(eta, big_m, Truncation::default()).unwrap();
            prop_assert!((nbs.norm() - 1.0).abs() <= 1e-12);
            let ex = excited_coherent(c(r), m, Truncation::default()).unwrap();
            prop_assert!((ex.norm() - 1.0).abs() <= 1e-12);
        }
    }
}
