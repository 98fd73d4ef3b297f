//! Dense vectors over a truncated photon-number basis `|0⟩ … |D−1⟩`.
//!
//! Raising-type operators push amplitude past the cutoff; that squared norm is
//! not discarded silently but accumulated in [`FockVector::spill`] so callers
//! can attribute residuals to truncation. Lowering is exact under truncation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// State vector `Σ amp[n] |n⟩` in a `dim`-level truncated Fock space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FockVectorRepr", into = "FockVectorRepr")]
pub struct FockVector {
    amp: Vec<Complex64>,
    spill: f64,
}

#[derive(Serialize, Deserialize)]
struct FockVectorRepr {
    dim: usize,
    amp: Vec<Complex64>,
    spill: f64,
}

impl TryFrom<FockVectorRepr> for FockVector {
    type Error = Error;

    fn try_from(repr: FockVectorRepr) -> Result<Self> {
        if repr.dim != repr.amp.len() {
            return Err(Error::DimensionMismatch {
                left: repr.dim,
                right: repr.amp.len(),
            });
        }
        if repr.dim == 0 {
            return Err(Error::Parameter("dim must be positive".into()));
        }
        if !repr.spill.is_finite() || repr.spill < 0.0 {
            return Err(Error::Parameter(format!("invalid spill {}", repr.spill)));
        }
        let mut v = FockVector::from_amplitudes(repr.amp)?;
        v.spill = repr.spill;
        Ok(v)
    }
}

impl From<FockVector> for FockVectorRepr {
    fn from(v: FockVector) -> Self {
        FockVectorRepr {
            dim: v.amp.len(),
            amp: v.amp,
            spill: v.spill,
        }
    }
}

impl FockVector {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "Fock dimension must be positive");
        FockVector {
            amp: vec![ZERO; dim],
            spill: 0.0,
        }
    }

    /// Number state `|n⟩`.
    pub fn basis(dim: usize, n: usize) -> Self {
        assert!(n < dim, "level {n} outside dimension {dim}");
        let mut v = Self::zeros(dim);
        v.amp[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::basis(dim, 0)
    }

    pub fn from_amplitudes(amp: Vec<Complex64>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::Parameter("dim must be positive".into()));
        }
        if let Some(index) = amp.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(FockVector { amp, spill: 0.0 })
    }

    pub fn from_real(amp: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amp.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    /// Squared norm lost past level `D−1` by raising operations so far.
    pub fn spill(&self) -> f64 {
        self.spill
    }

    pub fn with_spill(mut self, spill: f64) -> Self {
        self.spill = spill;
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Squared norm restricted to levels `lo..hi` (clamped to the dimension).
    pub fn norm_sqr_range(&self, lo: usize, hi: usize) -> f64 {
        let hi = hi.min(self.dim());
        if lo >= hi {
            return 0.0;
        }
        self.amp[lo..hi].iter().map(|c| c.norm_sqr()).sum()
    }

    /// Lowest and highest levels with a nonzero amplitude.
    pub fn support(&self) -> Option<(usize, usize)> {
        let lo = self.amp.iter().position(|c| *c != ZERO)?;
        let hi = self.amp.iter().rposition(|c| *c != ZERO)?;
        Some((lo, hi))
    }

    pub fn scale(&self, c: Complex64) -> FockVector {
        FockVector {
            amp: self.amp.iter().map(|a| a * c).collect(),
            spill: self.spill * c.norm_sqr(),
        }
    }

    /// `self − other`, ignoring spill.
    pub fn sub(&self, other: &FockVector) -> Result<FockVector> {
        check_dims(self, other)?;
        let amp = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FockVector { amp, spill: 0.0 })
    }

    /// `a|ψ⟩`: `out[n] = √(n+1)·amp[n+1]`.
    pub fn annihilate(&self) -> FockVector {
        self.shift_down(1, |n| (n as f64).sqrt())
    }

    /// `a†|ψ⟩`: `out[n] = √n·amp[n−1]`; the component leaving `|D−1⟩` goes to spill.
    pub fn create(&self) -> FockVector {
        self.shift_up(1, |n| ((n + 1) as f64).sqrt())
    }

    pub fn annihilate_k(&self, k: usize) -> FockVector {
        (0..k).fold(self.clone(), |v, _| v.annihilate())
    }

    pub fn create_k(&self, k: usize) -> FockVector {
        (0..k).fold(self.clone(), |v, _| v.create())
    }

    /// Weighted raising shift: `|n⟩ → weight(n)·|n+k⟩`.
    pub fn shift_up(&self, k: usize, weight: impl Fn(usize) -> f64) -> FockVector {
        let dim = self.dim();
        let mut out = vec![ZERO; dim];
        let mut spill = self.spill;
        for (n, a) in self.amp.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let c = a * weight(n);
            if n + k < dim {
                out[n + k] = c;
            } else {
                spill += c.norm_sqr();
            }
        }
        FockVector { amp: out, spill }
    }

    /// Weighted lowering shift: `|n⟩ → weight(n)·|n−k⟩`, `|n<k⟩ → 0`.
    pub fn shift_down(&self, k: usize, weight: impl Fn(usize) -> f64) -> FockVector {
        let dim = self.dim();
        let mut out = vec![ZERO; dim];
        for n in k..dim {
            let a = self.amp[n];
            if a != ZERO {
                out[n - k] = a * weight(n);
            }
        }
        FockVector {
            amp: out,
            spill: self.spill,
        }
    }

    /// `h(N̂)|ψ⟩` for a tabulated diagonal function.
    pub fn apply_diagonal(&self, h: &DiagonalFunction) -> Result<FockVector> {
        if h.len() < self.dim() {
            return Err(Error::DimensionMismatch {
                left: h.len(),
                right: self.dim(),
            });
        }
        let amp = self.amp.iter().zip(&h.values).map(|(a, w)| a * w).collect();
        Ok(FockVector {
            amp,
            spill: self.spill,
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        check_dims(self, other)?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(u, v)| u.conj() * v)
            .sum())
    }

    /// Rescale to unit norm by a positive real factor; spill is rescaled too.
    pub fn normalize(&self) -> Result<FockVector> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        Ok(FockVector {
            amp: self.amp.iter().map(|a| a * inv).collect(),
            spill: self.spill * inv * inv,
        })
    }

    /// Phase-insensitive overlap `|⟨u|v⟩|/(‖u‖‖v‖)`.
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.inner(other)?.norm() / denom)
    }

    /// `1 − fidelity`.
    pub fn infidelity(&self, other: &FockVector) -> Result<f64> {
        Ok((1.0 - self.fidelity(other)?).max(0.0))
    }

    /// Copy into a space of dimension `dim`. Growing pads with zeros;
    /// shrinking moves the discarded mass into spill.
    pub fn resized(&self, dim: usize) -> FockVector {
        assert!(dim > 0, "Fock dimension must be positive");
        let mut amp = self.amp.clone();
        let lost = self.norm_sqr_range(dim, self.dim());
        amp.resize(dim, ZERO);
        FockVector {
            amp,
            spill: self.spill + lost,
        }
    }
}

fn check_dims(u: &FockVector, v: &FockVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(())
}

/// Tabulated diagonal operator `h(N̂)`, `values[n] = h(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalFunction {
    values: Vec<Complex64>,
}

impl DiagonalFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(DiagonalFunction { values })
    }

    pub fn from_fn(len: usize, h: impl Fn(usize) -> Complex64) -> Result<Self> {
        Self::new((0..len).map(h).collect())
    }

    pub fn from_real_fn(len: usize, h: impl Fn(usize) -> f64) -> Result<Self> {
        Self::from_fn(len, |n| Complex64::new(h(n), 0.0))
    }

    pub fn constant(len: usize, c: Complex64) -> Self {
        DiagonalFunction {
            values: vec![c; len],
        }
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
}

/// `exp(g(N̂)a†)|ψ⟩` by its terminating series.
///
/// Each term raises the photon number by one, so the series is exact in the
/// truncated space and stops after at most `D` terms. The spill estimate adds
/// the squared norm each term pushes past the cutoff before weighting by `g`.
pub fn exp_apply_raising(g: &DiagonalFunction, v: &FockVector) -> Result<FockVector> {
    let dim = v.dim();
    if g.len() < dim {
        return Err(Error::DimensionMismatch {
            left: g.len(),
            right: dim,
        });
    }
    let mut sum = v.amp.clone();
    let mut spill = v.spill;
    let mut term = FockVector {
        amp: v.amp.clone(),
        spill: 0.0,
    };
    for j in 1..=dim {
        let raised = term.create();
        let inv_j = 1.0 / j as f64;
        spill += raised.spill * inv_j * inv_j;
        let mut next = raised.apply_diagonal(g)?;
        next.spill = 0.0;
        for a in next.amp.iter_mut() {
            *a *= inv_j;
        }
        let mut any = false;
        for (s, t) in sum.iter_mut().zip(&next.amp) {
            if *t != ZERO {
                *s += t;
                any = true;
            }
        }
        if !any {
            break;
        }
        term = next;
    }
    let out = FockVector::from_amplitudes(sum)?;
    Ok(out.with_spill(spill))
}

/// Controls for [`exp_apply_antihermitian`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpOptions {
    /// Terms are added until the next one has norm below `tol·‖v‖`.
    pub tol: f64,
    /// Per-substep term cap; `None` means `10·D`.
    pub max_terms: Option<usize>,
    /// Largest generator norm a single Taylor substep may carry.
    pub step_norm: f64,
}

impl Default for ExpOptions {
    fn default() -> Self {
        ExpOptions {
            tol: 1e-15,
            max_terms: None,
            step_norm: 2.0,
        }
    }
}

impl ExpOptions {
    pub fn with_tol(tol: f64) -> Self {
        ExpOptions {
            tol,
            ..Self::default()
        }
    }
}

/// `exp(ξX₊ − ξ*X₋)|ψ⟩` for a pair of ladder actions by Taylor series with scaling.
///
/// The generator norm is bounded by probing each action with the all-ones
/// vector (exact for weighted shifts) and the exponent is split into `s`
/// substeps so each carries norm at most `opts.step_norm`. Within a substep the
/// series stops once a term falls under `tol/s` relative to the substep input.
pub fn exp_apply_antihermitian<P, Q>(
    xi: Complex64,
    raise: P,
    lower: Q,
    v: &FockVector,
    opts: &ExpOptions,
) -> Result<FockVector>
where
    P: Fn(&FockVector) -> FockVector,
    Q: Fn(&FockVector) -> FockVector,
{
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.step_norm.is_nan() || opts.step_norm <= 0.0 {
        return Err(Error::Parameter(format!(
            "tol and step_norm must be positive (got {}, {})",
            opts.tol, opts.step_norm
        )));
    }
    let dim = v.dim();
    if xi == ZERO || v.norm_sqr() == 0.0 {
        return Ok(v.clone());
    }

    let probe = FockVector {
        amp: vec![Complex64::new(1.0, 0.0); dim],
        spill: 0.0,
    };
    let max_abs = |w: &FockVector| w.amp.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let bound = xi.norm() * (max_abs(&raise(&probe)) + max_abs(&lower(&probe)));
    let steps = ((bound / opts.step_norm).ceil() as usize).max(1);
    let h = xi / steps as f64;
    let h_conj = h.conj();
    let step_tol = opts.tol / steps as f64;
    let max_terms = opts.max_terms.unwrap_or(10 * dim);

    let mut state = v.amp.clone();
    let mut spill = v.spill;
    for _ in 0..steps {
        let ref_norm = state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut sum = state.clone();
        let mut term = FockVector {
            amp: state,
            spill: 0.0,
        };
        let mut j = 1usize;
        loop {
            let up = raise(&term);
            let down = lower(&term);
            let inv_j = 1.0 / j as f64;
            spill += h.norm_sqr() * up.spill * inv_j * inv_j;
            let amp: Vec<Complex64> = up
                .amp
                .iter()
                .zip(&down.amp)
                .map(|(p, m)| (h * p - h_conj * m) * inv_j)
                .collect();
            let term_norm = amp.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for (s, t) in sum.iter_mut().zip(&amp) {
                *s += t;
            }
            if !term_norm.is_finite() {
                return Err(Error::NonConvergence {
                    terms: j,
                    last_term_norm: term_norm,
                    partial_norm: f64::NAN,
                });
            }
            if term_norm < step_tol * ref_norm {
                break;
            }
            if j >= max_terms {
                return Err(Error::NonConvergence {
                    terms: j,
                    last_term_norm: term_norm,
                    partial_norm: sum.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
                });
            }
            term = FockVector { amp, spill: 0.0 };
            j += 1;
        }
        state = sum;
    }
    Ok(FockVector::from_amplitudes(state)?.with_spill(spill))
}

/// Adaptive truncation: grow `D` until the normalized mass in the top
/// `guard` levels is below `tail_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub min_dim: usize,
    pub max_dim: usize,
    pub tail_tol: f64,
    pub guard: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            min_dim: 16,
            max_dim: 4096,
            tail_tol: 1e-16,
            guard: 8,
        }
    }
}

impl TruncationPolicy {
    /// `Σ_{n ≥ D−guard} |amp[n]|² / ‖v‖²`.
    pub fn tail_mass(&self, v: &FockVector) -> f64 {
        let total = v.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let start = v.dim().saturating_sub(self.guard);
        v.norm_sqr_range(start, v.dim()) / total
    }

    pub fn accepts(&self, v: &FockVector) -> bool {
        self.tail_mass(v) < self.tail_tol
    }

    /// Run `build(D)` for doubling `D` until the tail rule holds.
    pub fn grow<F>(&self, mut build: F) -> Result<FockVector>
    where
        F: FnMut(usize) -> Result<FockVector>,
    {
        let mut dim = self.min_dim.max(self.guard + 1).min(self.max_dim);
        loop {
            let v = build(dim)?;
            let tail = self.tail_mass(&v);
            if tail < self.tail_tol {
                return Ok(v);
            }
            if dim >= self.max_dim {
                return Err(Error::Truncation { dim, lost: tail });
            }
            dim = (dim * 2).min(self.max_dim);
        }
    }
}

/// Either a caller-fixed dimension or the adaptive tail rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    Fixed(usize),
    Adaptive(TruncationPolicy),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Adaptive(TruncationPolicy::default())
    }
}

impl From<usize> for Truncation {
    fn from(dim: usize) -> Self {
        Truncation::Fixed(dim)
    }
}

impl Truncation {
    pub fn build<F>(&self, mut build: F) -> Result<FockVector>
    where
        F: FnMut(usize) -> Result<FockVector>,
    {
        match self {
            Truncation::Fixed(0) => Err(Error::Parameter("dim must be positive".into())),
            Truncation::Fixed(dim) => build(*dim),
            Truncation::Adaptive(policy) => policy.grow(build),
        }
    }
}
