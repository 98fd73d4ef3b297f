//! Nonlinear coherent states: eigenstates of `f(N̂)a` (and of `g(N̂)aᵏ`).
//!
//! States are built either from the coefficient recursion
//! `C_{n+1} = α·C_n / (f(n)√(n+1))` or from the exponential form
//! `C₀·exp(α/f(N̂−1)·a†)|0⟩`. The inverse direction reads `f` back off a
//! state, which is how the negative binomial and excited coherent states are
//! recognised and how the binomial state is rejected.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    exp_apply_antihermitian, exp_apply_raising, DiagonalFunction, ExpOptions, FockVector,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Closed-form label carried alongside a tabulated nonlinear function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionTag {
    One,
    Excited(usize),
    Nbs(usize),
    Perelomov(usize),
}

impl fmt::Display for FunctionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionTag::One => write!(f, "one"),
            FunctionTag::Excited(m) => write!(f, "excited:{m}"),
            FunctionTag::Nbs(m) => write!(f, "nbs:{m}"),
            FunctionTag::Perelomov(k) => write!(f, "perelomov:{k}"),
        }
    }
}

impl FromStr for FunctionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "one" {
            return Ok(FunctionTag::One);
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parameter(format!("unknown function tag {s:?}")))?;
        let arg: usize = arg
            .parse()
            .map_err(|_| Error::Parameter(format!("bad tag argument in {s:?}")))?;
        match kind {
            "excited" => Ok(FunctionTag::Excited(arg)),
            "nbs" => Ok(FunctionTag::Nbs(arg)),
            "perelomov" => Ok(FunctionTag::Perelomov(arg)),
            _ => Err(Error::Parameter(format!("unknown function tag {s:?}"))),
        }
    }
}

impl Serialize for FunctionTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FunctionTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Tabulated `f(0..D−1)`. Arguments below zero evaluate to `neg_value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRepr", into = "FunctionRepr")]
pub struct NonlinearFunction {
    values: Vec<Complex64>,
    neg_value: Complex64,
    tag: Option<FunctionTag>,
}

#[derive(Serialize, Deserialize)]
struct FunctionRepr {
    values: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<FunctionTag>,
}

impl TryFrom<FunctionRepr> for NonlinearFunction {
    type Error = Error;

    fn try_from(r: FunctionRepr) -> Result<Self> {
        let mut f = NonlinearFunction::new(r.values)?;
        f.tag = r.tag;
        Ok(f)
    }
}

impl From<NonlinearFunction> for FunctionRepr {
    fn from(f: NonlinearFunction) -> Self {
        FunctionRepr {
            values: f.values,
            tag: f.tag,
        }
    }
}

impl NonlinearFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(NonlinearFunction {
            values,
            neg_value: ONE,
            tag: None,
        })
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        Self::new((0..len).map(f).collect())
    }

    pub fn from_real_fn(len: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::from_fn(len, |n| Complex64::new(f(n), 0.0))
    }

    /// `f ≡ 1`: ordinary coherent states.
    pub fn one(len: usize) -> Self {
        NonlinearFunction {
            values: vec![ONE; len],
            neg_value: ONE,
            tag: Some(FunctionTag::One),
        }
    }

    /// `f(n) = 1 − m/(1+n)`: excited coherent states.
    pub fn excited(len: usize, m: usize) -> Self {
        let mut f = Self::from_real_fn(len, |n| 1.0 - m as f64 / (1.0 + n as f64))
            .expect("finite for n ≥ 0");
        f.tag = Some(FunctionTag::Excited(m));
        f
    }

    /// `f(n) = 1/√(M+n)`: negative binomial states with eigenvalue `√η`.
    pub fn nbs(len: usize, big_m: usize) -> Result<Self> {
        if big_m == 0 {
            return Err(Error::Parameter("negative binomial requires M ≥ 1".into()));
        }
        let mut f = Self::from_real_fn(len, |n| 1.0 / ((big_m + n) as f64).sqrt())?;
        f.tag = Some(FunctionTag::Nbs(big_m));
        Ok(f)
    }

    /// `g(n) = ([n/k + 1]·n!/(n+k)!)^{1/2}`: the k-photon Perelomov function.
    pub fn perelomov(len: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("photon multiplicity k must be ≥ 1".into()));
        }
        let mut f = Self::from_real_fn(len, |n| bg_lower_weight(k, n))?;
        f.tag = Some(FunctionTag::Perelomov(k));
        Ok(f)
    }

    pub fn with_tag(mut self, tag: Option<FunctionTag>) -> Self {
        self.tag = tag;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tag(&self) -> Option<FunctionTag> {
        self.tag
    }

    pub fn neg_value(&self) -> Complex64 {
        self.neg_value
    }

    /// `f(n)`, with the negative-argument convention; `None` past the table.
    pub fn get(&self, n: i64) -> Option<Complex64> {
        if n < 0 {
            Some(self.neg_value)
        } else {
            self.values.get(n as usize).copied()
        }
    }

    pub fn diagonal(&self) -> DiagonalFunction {
        DiagonalFunction::new(self.values.clone()).expect("values are finite")
    }

    /// `h(n) = f(n + offset)` for `n < len`.
    pub fn shifted(&self, offset: i64, len: usize) -> Result<DiagonalFunction> {
        let values = (0..len as i64)
            .map(|n| {
                self.get(n + offset).ok_or_else(|| {
                    Error::Domain(format!(
                        "f({}) beyond tabulated length {}",
                        n + offset,
                        self.len()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DiagonalFunction::new(values)
    }

    fn require_len(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: needed,
            });
        }
        Ok(())
    }
}

/// Eigenvalue and nonlinear function of `f(N̂)a|ψ⟩ = α|ψ⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlcsSpec {
    pub alpha: Complex64,
    pub f: NonlinearFunction,
}

impl NlcsSpec {
    pub fn new(alpha: Complex64, f: NonlinearFunction) -> Self {
        NlcsSpec { alpha, f }
    }
}

// past this running magnitude the chain is rescaled; a handful of rescales
// means the lower amplitudes are unrepresentable
const RESCALE_AT: f64 = 1e150;
const MAX_RESCALES: usize = 4;

/// Solve the coefficient recursion and normalize.
///
/// The chain starts just above the largest zero of `f` on `[0, D−2]`: a zero at
/// `n` forces `C_n = 0` and everything below it collapses.
pub fn build_recursive(spec: &NlcsSpec, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::Parameter("dim must be positive".into()));
    }
    let f = &spec.f;
    f.require_len(dim - 1)?;
    let used = &f.values()[..dim - 1];
    let start = match used.iter().rposition(|v| *v == ZERO) {
        Some(_) if used.iter().all(|v| *v == ZERO) => return Err(Error::NoState),
        Some(z) => z + 1,
        None => 0,
    };

    let mut amp = vec![ZERO; dim];
    amp[start] = ONE;
    let mut rescales = 0;
    for n in start..dim - 1 {
        let next = spec.alpha * amp[n] / (used[n] * ((n + 1) as f64).sqrt());
        if !next.is_finite() {
            return Err(Error::Divergence { index: n + 1 });
        }
        amp[n + 1] = next;
        if next.norm() > RESCALE_AT {
            rescales += 1;
            if rescales > MAX_RESCALES {
                return Err(Error::Divergence { index: n + 1 });
            }
            for a in &mut amp[start..=n + 1] {
                *a /= RESCALE_AT;
            }
        }
    }
    FockVector::from_amplitudes(amp)?.normalize()
}

/// `C₀ = {Σ_n |α|^{2n} / (n!·|f(n−1)!|²)}^{−1/2}` over the first `dim` levels.
pub fn normalization_c0(spec: &NlcsSpec, dim: usize) -> Result<f64> {
    spec.f.require_len(dim.saturating_sub(1))?;
    let a2 = spec.alpha.norm_sqr();
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..dim {
        term *= a2 / (n as f64 * spec.f.values()[n - 1].norm_sqr());
        sum += term;
    }
    if !sum.is_finite() || sum <= 0.0 {
        return Err(Error::Divergence { index: dim - 1 });
    }
    Ok(sum.powf(-0.5))
}

/// `C₀·exp(g(N̂)a†)|0⟩` with `g(n) = α/f(n−1)`.
pub fn build_exponential(spec: &NlcsSpec, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::Parameter("dim must be positive".into()));
    }
    let f = &spec.f;
    f.require_len(dim - 1)?;
    if let Some(index) = f.values()[..dim - 1].iter().position(|v| *v == ZERO) {
        return Err(Error::ExponentialFormUnavailable { index });
    }
    let g = DiagonalFunction::from_fn(dim, |n| {
        spec.alpha / f.get(n as i64 - 1).expect("within table")
    })?;
    let raw = exp_apply_raising(&g, &FockVector::vacuum(dim))?;
    let c0 = normalization_c0(spec, dim)?;
    Ok(raw.scale(Complex64::new(c0, 0.0)))
}

/// Why a state admits no nonlinear function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotNlcs {
    /// `amp[at] = 0` inside the support.
    Gap { at: usize },
    /// The support ends at `top` below the truncation edge.
    FiniteSupport { top: usize },
}

/// `f` read back from a state. Only `determined` is fixed by the state;
/// entries outside it are filled with 1.
#[derive(Debug, Clone, PartialEq)]
pub struct InferredFunction {
    pub f: NonlinearFunction,
    pub determined: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Inference {
    Nlcs(InferredFunction),
    NotNlcs(NotNlcs),
}

impl Inference {
    pub fn is_nlcs(&self) -> bool {
        matches!(self, Inference::Nlcs(_))
    }
}

/// Invert the recursion: `f(n) = α·amp[n] / (√(n+1)·amp[n+1])` on the support.
pub fn infer_f(v: &FockVector, alpha: Complex64) -> Result<Inference> {
    if alpha == ZERO {
        return Err(Error::Domain("eigenvalue must be nonzero".into()));
    }
    let (lo, hi) = v.support().ok_or(Error::ZeroNorm)?;
    let amp = v.amp();
    if let Some(at) = (lo..=hi).find(|&n| amp[n] == ZERO) {
        return Ok(Inference::NotNlcs(NotNlcs::Gap { at }));
    }
    if hi + 1 < v.dim() {
        return Ok(Inference::NotNlcs(NotNlcs::FiniteSupport { top: hi }));
    }
    let mut values = vec![ONE; v.dim()];
    let first = if lo > 0 {
        values[lo - 1] = ZERO;
        lo - 1
    } else {
        0
    };
    for n in lo..hi {
        values[n] = alpha * amp[n] / (((n + 1) as f64).sqrt() * amp[n + 1]);
    }
    Ok(Inference::Nlcs(InferredFunction {
        f: NonlinearFunction::new(values)?,
        determined: first..hi,
    }))
}

/// `‖f(N̂)a·v − α·v‖` over levels `0..D−1`; the top level is excluded because
/// its eigen-equation involves the amplitude at `D`.
pub fn eigen_residual(spec: &NlcsSpec, v: &FockVector) -> Result<f64> {
    multiphoton_residual(&spec.f, 1, spec.alpha, v)
}

/// `‖g(N̂)aᵏ·v − α·v‖` over levels `0..D−k`.
pub fn multiphoton_residual(
    g: &NonlinearFunction,
    k: usize,
    alpha: Complex64,
    v: &FockVector,
) -> Result<f64> {
    let dim = v.dim();
    let top = dim.saturating_sub(k);
    g.require_len(top)?;
    let lowered = v.annihilate_k(k);
    let sum: f64 = (0..top)
        .map(|n| (g.values()[n] * lowered.amp()[n] - alpha * v.amp()[n]).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// Largest relative spill tolerated when exciting a state.
pub const EXCITE_SPILL_TOL: f64 = 1e-12;

/// Normalized `a†ᵐ|ψ⟩`.
pub fn excite(v: &FockVector, m: usize) -> Result<FockVector> {
    let raised = v.create_k(m);
    let lost = raised.spill() - v.spill();
    let total = raised.norm_sqr() + lost;
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    if lost / total >= EXCITE_SPILL_TOL {
        return Err(Error::Truncation {
            dim: v.dim(),
            lost: lost / total,
        });
    }
    raised.normalize()
}

/// Nonlinear function of the m-times excited state: `f(n−m)·(1 − m/(n+1))`.
pub fn excited_f(f: &NonlinearFunction, m: usize, alpha: Complex64) -> Result<NlcsSpec> {
    if m >= f.len() && !f.is_empty() {
        return Err(Error::Parameter(format!(
            "excitation {m} not below tabulated length {}",
            f.len()
        )));
    }
    let values = (0..f.len())
        .map(|n| {
            let base = f.get(n as i64 - m as i64).expect("within table");
            base * (1.0 - m as f64 / (n + 1) as f64)
        })
        .collect();
    let tag = match f.tag() {
        Some(FunctionTag::One) => Some(FunctionTag::Excited(m)),
        _ if m == 0 => f.tag(),
        _ => None,
    };
    Ok(NlcsSpec::new(
        alpha,
        NonlinearFunction::new(values)?.with_tag(tag),
    ))
}

/// `max_n ‖([f(N̂)a, f(N̂−1)⁻¹a†] − 1)|n⟩‖` for `n ≤ D−3`.
pub fn commutator_check(f: &NonlinearFunction, dim: usize) -> Result<f64> {
    if dim < 3 {
        return Err(Error::Parameter("commutator check needs dim ≥ 3".into()));
    }
    f.require_len(dim - 1)?;
    if let Some(n) = f.values()[..dim - 1].iter().position(|v| *v == ZERO) {
        return Err(Error::Domain(format!("f({n}) = 0")));
    }
    let lower_diag = f.shifted(0, dim)?;
    let raise_diag =
        DiagonalFunction::from_fn(dim, |n| ONE / f.get(n as i64 - 1).expect("within table"))?;
    let lower = |v: &FockVector| v.annihilate().apply_diagonal(&lower_diag);
    let raise = |v: &FockVector| v.create().apply_diagonal(&raise_diag);

    let mut worst = 0.0f64;
    for n in 0..dim - 2 {
        let e = FockVector::basis(dim, n);
        let ab = lower(&raise(&e)?)?;
        let ba = raise(&lower(&e)?)?;
        let r = ab.sub(&ba)?.sub(&e)?.norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

fn relative_gap(lhs: &FockVector, rhs: &FockVector) -> Result<f64> {
    Ok(lhs.sub(rhs)?.norm() / lhs.norm().max(1.0))
}

/// `a†ᵐ f(N̂) = f(N̂−m) a†ᵐ` on every basis state that stays inside the
/// truncation, relative to `max(1, ‖lhs‖)`. Negative arguments of `f` never
/// occur on the right because `a†ᵐ` output starts at level `m`.
pub fn push_through_residual(f: &NonlinearFunction, m: usize, dim: usize) -> Result<f64> {
    if m >= dim {
        return Err(Error::Parameter(format!(
            "m = {m} must be below dim = {dim}"
        )));
    }
    f.require_len(dim)?;
    let f_diag = f.shifted(0, dim)?;
    let f_down = f.shifted(-(m as i64), dim)?;
    let mut worst = 0.0f64;
    for n in 0..dim - m {
        let e = FockVector::basis(dim, n);
        let lhs = e.apply_diagonal(&f_diag)?.create_k(m);
        let rhs = e.create_k(m).apply_diagonal(&f_down)?;
        worst = worst.max(relative_gap(&lhs, &rhs)?);
    }
    Ok(worst)
}

/// `[g(N̂)a†]ᵖ = a†ᵖ g(N̂+p)···g(N̂+1)` on basis states `|n⟩`, `n + p < D`,
/// relative to `max(1, ‖lhs‖)`.
pub fn power_expansion_residual(g: &NonlinearFunction, p: usize, dim: usize) -> Result<f64> {
    if p >= dim {
        return Err(Error::Parameter(format!(
            "p = {p} must be below dim = {dim}"
        )));
    }
    g.require_len(dim)?;
    let g_diag = g.shifted(0, dim)?;
    let product = DiagonalFunction::from_fn(dim, |j| {
        (1..=p)
            .map(|i| g.get((j + i) as i64).unwrap_or(ZERO))
            .product()
    })?;
    let mut worst = 0.0f64;
    for n in 0..dim - p {
        let e = FockVector::basis(dim, n);
        let mut lhs = e.clone();
        for _ in 0..p {
            lhs = lhs.create().apply_diagonal(&g_diag)?;
        }
        let rhs = e.apply_diagonal(&product)?.create_k(p);
        worst = worst.max(relative_gap(&lhs, &rhs)?);
    }
    Ok(worst)
}

/// Max of [`push_through_residual`] at `m` and [`power_expansion_residual`]
/// for every `p ≤ m`, with `g = f`.
pub fn push_through_check(f: &NonlinearFunction, m: usize, dim: usize) -> Result<f64> {
    let mut worst = push_through_residual(f, m, dim)?;
    for p in 1..=m {
        worst = worst.max(power_expansion_residual(f, p, dim)?);
    }
    Ok(worst)
}

/// `g(n) = ([n/k + 1]·n!/(n+k)!)^{1/2}`, the weight of `A_k = g(N̂)aᵏ`.
pub fn bg_lower_weight(k: usize, n: usize) -> f64 {
    let rising: f64 = (1..=k).map(|i| (n + i) as f64).product();
    ((n / k + 1) as f64 / rising).sqrt()
}

/// `([n/k]·(n−k)!/n!)^{1/2}`, the weight of `A_k† = h(N̂)a†ᵏ`; zero for `n < k`.
pub fn bg_raise_weight(k: usize, n: usize) -> f64 {
    if n < k {
        return 0.0;
    }
    let falling: f64 = (0..k).map(|i| (n - i) as f64).product();
    ((n / k) as f64 / falling).sqrt()
}

fn bg_lower_second(k: usize, v: &FockVector) -> FockVector {
    let w = DiagonalFunction::from_real_fn(v.dim(), |n| bg_lower_weight(k, n)).expect("finite");
    v.annihilate_k(k)
        .apply_diagonal(&w)
        .expect("matching length")
}

fn bg_lower_first(k: usize, v: &FockVector) -> FockVector {
    let w = DiagonalFunction::from_real_fn(v.dim(), |n| bg_raise_weight(k, n)).expect("finite");
    v.apply_diagonal(&w)
        .expect("matching length")
        .annihilate_k(k)
}

/// `A_k†|ψ⟩ = ([N̂/k](N̂−k)!/N̂!)^{1/2} a†ᵏ|ψ⟩`.
pub fn brandt_greenberg_raise(k: usize, v: &FockVector) -> FockVector {
    let w = DiagonalFunction::from_real_fn(v.dim(), |n| bg_raise_weight(k, n)).expect("finite");
    v.create_k(k).apply_diagonal(&w).expect("matching length")
}

/// `‖aᵏ h(N̂)ψ − g(N̂) aᵏ ψ‖`: the two orderings of `A_k`.
pub fn brandt_greenberg_ordering_gap(k: usize, v: &FockVector) -> f64 {
    bg_lower_first(k, v)
        .sub(&bg_lower_second(k, v))
        .expect("same dim")
        .norm()
}

/// Largest tolerated disagreement between the two orderings of `A_k`.
pub const BG_ORDERING_TOL: f64 = 1e-10;

/// `A_k|ψ⟩`, cross-checked against the other operator ordering.
pub fn brandt_greenberg_lower(k: usize, v: &FockVector) -> Result<FockVector> {
    if k == 0 {
        return Err(Error::Parameter("photon multiplicity k must be ≥ 1".into()));
    }
    let second = bg_lower_second(k, v);
    let first = bg_lower_first(k, v);
    let gap = first.sub(&second)?.norm();
    if gap > BG_ORDERING_TOL * second.norm().max(1.0) {
        return Err(Error::InternalConsistency(format!(
            "Brandt-Greenberg orderings differ by {gap:e} at k = {k}"
        )));
    }
    Ok(second)
}

/// Largest `|α|` accepted for the k-photon displacement series.
pub const PERELOMOV_MAX_ALPHA: f64 = 3.0;

/// `exp(α A_k† − α* A_k)|0⟩` in a `dim`-level space.
pub fn build_perelomov_k(
    alpha: Complex64,
    k: usize,
    dim: usize,
    opts: &ExpOptions,
) -> Result<FockVector> {
    if k == 0 {
        return Err(Error::Parameter("photon multiplicity k must be ≥ 1".into()));
    }
    if alpha.norm() > PERELOMOV_MAX_ALPHA {
        return Err(Error::Parameter(format!(
            "|alpha| = {} exceeds {PERELOMOV_MAX_ALPHA}",
            alpha.norm()
        )));
    }
    exp_apply_antihermitian(
        alpha,
        |v| brandt_greenberg_raise(k, v),
        |v| bg_lower_second(k, v),
        &FockVector::vacuum(dim),
        opts,
    )
}
