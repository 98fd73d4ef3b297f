//! Holstein–Primakoff boson realizations of su(1,1) and su(2) and the
//! displacement operators they generate.
//!
//! su(1,1): `K₀ = N̂ + M/2`, `K₊ = a†√(M+N̂)`, `K₋ = √(M+N̂)a`.
//! su(2):   `J₀ = N̂ − M/2`, `J₊ = a†√(M−N̂)`, `J₋ = √(M−N̂)a`, acting on `|0⟩…|M⟩`.
//!
//! `exp(ξX₊ − ξ*X₋)|0⟩` is evaluated two ways: directly as an exponential
//! series, and through the normal-ordered factorization
//! `exp(τX₊)·s^{X₀}·exp(−τ*X₋)` whose last factor fixes the vacuum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    exp_apply_antihermitian, exp_apply_raising, DiagonalFunction, ExpOptions, FockVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Su11,
    Su2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    X0,
    Plus,
    Minus,
}

/// `X₀|n⟩` eigenvalue.
pub fn weight_diag(algebra: Algebra, big_m: usize, n: usize) -> f64 {
    match algebra {
        Algebra::Su11 => n as f64 + big_m as f64 / 2.0,
        Algebra::Su2 => n as f64 - big_m as f64 / 2.0,
    }
}

/// `X₊|n⟩ = w·|n+1⟩`.
pub fn weight_plus(algebra: Algebra, big_m: usize, n: usize) -> f64 {
    match algebra {
        Algebra::Su11 => (((n + 1) * (big_m + n)) as f64).sqrt(),
        Algebra::Su2 if n < big_m => (((n + 1) * (big_m - n)) as f64).sqrt(),
        Algebra::Su2 => 0.0,
    }
}

/// `X₋|n⟩ = w·|n−1⟩`.
pub fn weight_minus(algebra: Algebra, big_m: usize, n: usize) -> f64 {
    match algebra {
        Algebra::Su11 if n == 0 => 0.0,
        Algebra::Su11 => ((n * (big_m + n - 1)) as f64).sqrt(),
        Algebra::Su2 if n == 0 || n > big_m => 0.0,
        Algebra::Su2 => ((n * (big_m - n + 1)) as f64).sqrt(),
    }
}

fn raw_apply(algebra: Algebra, generator: Generator, big_m: usize, v: &FockVector) -> FockVector {
    match generator {
        Generator::X0 => {
            let w = DiagonalFunction::from_real_fn(v.dim(), |n| weight_diag(algebra, big_m, n))
                .expect("finite weights");
            v.apply_diagonal(&w).expect("matching length")
        }
        Generator::Plus => v.shift_up(1, |n| weight_plus(algebra, big_m, n)),
        Generator::Minus => v.shift_down(1, |n| weight_minus(algebra, big_m, n)),
    }
}

/// Apply one generator of the realization. su(2) requires support within `[0, M]`.
pub fn hp_apply(
    algebra: Algebra,
    generator: Generator,
    big_m: usize,
    v: &FockVector,
) -> Result<FockVector> {
    if algebra == Algebra::Su2 {
        if let Some((_, hi)) = v.support() {
            if hi > big_m {
                return Err(Error::Domain(format!(
                    "su(2) realization with M = {big_m} applied to a state with support up to {hi}"
                )));
            }
        }
    }
    Ok(raw_apply(algebra, generator, big_m, v))
}

/// Algebra, Bargmann/spin parameter `M` and displacement `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSpec {
    pub algebra: Algebra,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub xi: Complex64,
}

impl DisplacementSpec {
    pub fn new(algebra: Algebra, big_m: usize, xi: Complex64) -> Self {
        DisplacementSpec { algebra, big_m, xi }
    }

    /// Displacement whose vacuum orbit is the negative binomial state `(η, M)`:
    /// `ξ = artanh √η`.
    pub fn negative_binomial(eta: f64, big_m: usize) -> Self {
        Self::new(
            Algebra::Su11,
            big_m,
            Complex64::new(eta.sqrt().atanh(), 0.0),
        )
    }

    /// Displacement whose vacuum orbit is the binomial state `(η, M)`:
    /// `ξ = arctan √(η/(1−η))`.
    pub fn binomial(eta: f64, big_m: usize) -> Self {
        Self::new(
            Algebra::Su2,
            big_m,
            Complex64::new((eta / (1.0 - eta)).sqrt().atan(), 0.0),
        )
    }
}

/// `exp(ξX₊ − ξ*X₋)|0⟩`.
pub fn displace(spec: &DisplacementSpec, dim: usize, opts: &ExpOptions) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::Parameter("dim must be positive".into()));
    }
    if spec.algebra == Algebra::Su2 && dim <= spec.big_m {
        return Err(Error::Parameter(format!(
            "su(2) displacement needs dim > M (dim = {dim}, M = {})",
            spec.big_m
        )));
    }
    let (algebra, big_m) = (spec.algebra, spec.big_m);
    exp_apply_antihermitian(
        spec.xi,
        |v| raw_apply(algebra, Generator::Plus, big_m, v),
        |v| raw_apply(algebra, Generator::Minus, big_m, v),
        &FockVector::vacuum(dim),
        opts,
    )
}

/// Parameter `τ` of the normal-ordered factorization. su(1,1) needs `|τ| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionParam {
    algebra: Algebra,
    tau: Complex64,
}

impl DecompositionParam {
    pub fn new(algebra: Algebra, tau: Complex64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::Domain(format!("non-finite tau {tau}")));
        }
        if algebra == Algebra::Su11 && tau.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "su(1,1) needs |tau| < 1, got {}",
                tau.norm()
            )));
        }
        Ok(DecompositionParam { algebra, tau })
    }

    /// `τ = (ξ/|ξ|)·tanh|ξ|` for su(1,1), `(ξ/|ξ|)·tan|ξ|` for su(2).
    pub fn from_xi(algebra: Algebra, xi: Complex64) -> Result<Self> {
        let r = xi.norm();
        if r == 0.0 {
            return Self::new(algebra, Complex64::new(0.0, 0.0));
        }
        let phase = xi / r;
        let mag = match algebra {
            Algebra::Su11 => r.tanh(),
            Algebra::Su2 => r.tan(),
        };
        Self::new(algebra, phase * mag)
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }
}

/// `exp(τX₊)·s^{X₀}|0⟩` with `s = 1 − |τ|²` (su(1,1)) or `1 + |τ|²` (su(2)).
pub fn displace_decomposed(
    param: &DecompositionParam,
    big_m: usize,
    dim: usize,
) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::Parameter("dim must be positive".into()));
    }
    let tau = param.tau;
    let (s, x0_vac) = match param.algebra {
        Algebra::Su11 => (1.0 - tau.norm_sqr(), big_m as f64 / 2.0),
        Algebra::Su2 => (1.0 + tau.norm_sqr(), -(big_m as f64) / 2.0),
    };
    // τX₊ written as g(N̂)a†: X₊|n⟩ = w(n)|n+1⟩ means g(n+1) = τ·w(n)/√(n+1)
    let algebra = param.algebra;
    let g = DiagonalFunction::from_fn(dim, |j| {
        if j == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            tau * (weight_plus(algebra, big_m, j - 1) / (j as f64).sqrt())
        }
    })?;
    let vac = FockVector::vacuum(dim).scale(Complex64::new(s.powf(x0_vac), 0.0));
    exp_apply_raising(&g, &vac)
}

/// Largest basis-state residual of the defining commutators
/// `[X₀, X±] = ±X±` and `[X₊, X₋] = 2X₀` (su(2)) / `−2X₀` (su(1,1)),
/// relative to `max(1, ‖X₊X₋|n⟩‖, ‖X₋X₊|n⟩‖)`.
pub fn algebra_commutator_check(algebra: Algebra, big_m: usize, dim: usize) -> Result<f64> {
    let top = match algebra {
        Algebra::Su11 => {
            if dim < 3 {
                return Err(Error::Parameter("commutator check needs dim ≥ 3".into()));
            }
            dim - 3
        }
        Algebra::Su2 => {
            if dim <= big_m + 2 {
                return Err(Error::Parameter(format!(
                    "su(2) commutator check needs dim > M + 2 (dim = {dim}, M = {big_m})"
                )));
            }
            big_m
        }
    };
    let c = match algebra {
        Algebra::Su11 => -2.0,
        Algebra::Su2 => 2.0,
    };
    let op = |g: Generator, v: &FockVector| hp_apply(algebra, g, big_m, v);
    let mut worst = 0.0f64;
    for n in 0..=top {
        let e = FockVector::basis(dim, n);
        let plus = op(Generator::Plus, &e)?;
        let minus = op(Generator::Minus, &e)?;
        let x0 = op(Generator::X0, &e)?;

        let r1 = op(Generator::X0, &plus)?
            .sub(&op(Generator::Plus, &x0)?)?
            .sub(&plus)?;
        let r2 = op(Generator::X0, &minus)?
            .sub(&op(Generator::Minus, &x0)?)?
            .sub(&minus.scale(Complex64::new(-1.0, 0.0)))?;
        let pm = op(Generator::Plus, &minus)?;
        let mp = op(Generator::Minus, &plus)?;
        let scale = pm.norm().max(mp.norm()).max(1.0);
        let r3 = pm.sub(&mp)?.sub(&x0.scale(Complex64::new(c, 0.0)))?;
        worst = worst.max(r1.norm().max(r2.norm()).max(r3.norm()) / scale);
    }
    Ok(worst)
}
