//! Check suites and the JSON report they produce.
//!
//! Every check is a scalar `value` compared against a fixed `tolerance`; a
//! check passes iff `value ≤ tolerance`. Expected-negative checks (the
//! binomial obstruction) encode "the obstruction was confirmed" as value 0.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{ExpOptions, FockVector, Truncation, TruncationPolicy};
use crate::lie::{self, Algebra, DecompositionParam, DisplacementSpec};
use crate::nlcs::{self, Inference, NlcsSpec, NonlinearFunction};
use crate::specfun::laguerre;
use crate::states::{self, photon_stats};

/// Pinned tolerances for every check family.
pub mod tol {
    pub const NBS_EIGEN: f64 = 1e-10;
    pub const EXCITED_INFERENCE: f64 = 1e-10;
    pub const EXCITED_EIGEN: f64 = 1e-10;
    pub const EXCITATION_CLOSURE: f64 = 1e-9;
    pub const OPERATOR_IDENTITY: f64 = 1e-12;
    pub const PERELOMOV_EIGEN: f64 = 1e-8;
    pub const OFF_LATTICE_MASS: f64 = 1e-12;
    pub const BG_ORDERING: f64 = 1e-12;
    pub const INFIDELITY: f64 = 1e-10;
    pub const CONSTRUCTION_INFIDELITY: f64 = 1e-12;
    pub const BINOMIAL_LADDER: f64 = 1e-12;
    pub const BINOMIAL_TOP: f64 = 1e-12;
    pub const NBS_MANDEL_Q: f64 = 1e-6;
    pub const BINOMIAL_MANDEL_Q: f64 = 1e-12;
    pub const LAGUERRE_NORM: f64 = 1e-10;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Eigen,
    Equivalence,
    Identities,
    Excitation,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Eigen => "eigen",
            Suite::Equivalence => "equivalence",
            Suite::Identities => "identities",
            Suite::Excitation => "excitation",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" => Ok(Suite::Eigen),
            "equivalence" => Ok(Suite::Equivalence),
            "identities" => Ok(Suite::Identities),
            "excitation" => Ok(Suite::Excitation),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parameter(format!("unknown suite {s:?}"))),
        }
    }
}

/// Restricts the eigen suite to one state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Nbs,
    Excited,
    Perelomov,
    Binomial,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nbs" | "negative_binomial" => Ok(Family::Nbs),
            "excited" | "excited_coherent" => Ok(Family::Excited),
            "perelomov" | "perelomov_k" => Ok(Family::Perelomov),
            "binomial" => Ok(Family::Binomial),
            _ => Err(Error::Parameter(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckConfig {
    pub etas: Vec<f64>,
    #[serde(rename = "Ms")]
    pub big_ms: Vec<usize>,
    pub excitations: Vec<usize>,
    pub ks: Vec<usize>,
    pub perelomov_alphas: Vec<f64>,
    pub excited_alpha: f64,
    /// Fixed dimension for operator-identity and random-f checks.
    pub dim: usize,
    pub seed: u64,
    pub random_functions: usize,
    pub family: Option<Family>,
    pub truncation: TruncationPolicy,
    pub exp_tol: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            etas: vec![0.1, 0.3, 0.5],
            big_ms: vec![1, 4, 10],
            excitations: vec![1, 2, 3],
            ks: vec![2, 3],
            perelomov_alphas: vec![0.3, 0.6],
            excited_alpha: 0.8,
            dim: 64,
            seed: 7,
            random_functions: 20,
            family: None,
            truncation: TruncationPolicy::default(),
            exp_tol: 1e-15,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        for &eta in &self.etas {
            states::check_eta(eta)?;
        }
        if self.big_ms.contains(&0) {
            return Err(Error::Parameter("M values must be ≥ 1".into()));
        }
        if self.ks.contains(&0) {
            return Err(Error::Parameter("k values must be ≥ 1".into()));
        }
        if self.dim < 8 {
            return Err(Error::Parameter("dim must be at least 8".into()));
        }
        if let Some(&m) = self.excitations.iter().find(|&&m| m + 2 >= self.dim) {
            return Err(Error::Parameter(format!(
                "excitation {m} too large for dim {}",
                self.dim
            )));
        }
        if self
            .perelomov_alphas
            .iter()
            .any(|a| a.abs() > nlcs::PERELOMOV_MAX_ALPHA)
        {
            return Err(Error::Parameter("Perelomov alpha exceeds 3".into()));
        }
        if self.exp_tol.is_nan() || self.exp_tol <= 0.0 {
            return Err(Error::Parameter("exp tolerance must be positive".into()));
        }
        Ok(())
    }

    fn adaptive(&self) -> Truncation {
        Truncation::Adaptive(self.truncation)
    }

    fn exp_opts(&self) -> ExpOptions {
        ExpOptions::with_tol(self.exp_tol)
    }

    fn wants(&self, family: Family) -> bool {
        self.family.is_none_or(|f| f == family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Identity,
    ExpectedNegative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// The relation being checked, written out.
    pub paper_eq: String,
    pub kind: CheckKind,
    /// For expected-negative checks: the certified lower bound on the eigen-residual per unit `|α|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_bound: Option<f64>,
}

impl CheckEntry {
    fn new(name: String, value: f64, tolerance: f64, relation: &str) -> Self {
        CheckEntry {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
            paper_eq: relation.to_string(),
            kind: CheckKind::Identity,
            witness_bound: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub checks: Vec<CheckEntry>,
    pub summary: Summary,
    pub config: CheckConfig,
    pub timestamp: u64,
}

impl CheckReport {
    fn assemble(suite: Suite, mut checks: Vec<CheckEntry>, config: &CheckConfig) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().filter(|c| c.passed).count();
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CheckReport {
            suite,
            summary: Summary {
                total: checks.len(),
                passed,
                failed: checks.len() - passed,
            },
            checks,
            config: config.clone(),
            timestamp,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks whose name starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckEntry> + 'a {
        self.checks
            .iter()
            .filter(move |c| c.name.starts_with(prefix))
    }
}

const EIGEN_NLCS: &str = "f(N)a|psi> = alpha|psi>";
const EIGEN_NBS: &str = "(M+N)^(-1/2) a|eta,M> = eta^(1/2)|eta,M>";
const EXCITED_F: &str = "f(n) = 1 - m/(1+n)";
const EXCITED_CLOSURE: &str = "f(N-m)(1 - m/(N+1)) a|alpha,f,m> = alpha|alpha,f,m>";
const PUSH_THROUGH: &str = "a+^m f(N) = f(N-m) a+^m";
const POWER_EXPANSION: &str = "[g(N)a+]^n = a+^n g(N+n)...g(N+1)";
const UNIT_COMMUTATOR: &str = "[f(N)a, f(N-1)^(-1) a+] = 1";
const MULTIPHOTON: &str = "g(N)a^k|alpha,k> = alpha|alpha,k>";
const BG_ORDERINGS: &str = "a^k([N/k](N-k)!/N!)^(1/2) = ([N/k+1]N!/(N+k)!)^(1/2) a^k";
const PERELOMOV_SUPPORT: &str = "exp(alpha A_k+ - alpha* A_k)|0> supported on multiples of k";
const NBS_EXPONENTIAL: &str = "|eta,M> = C0 exp(eta^(1/2) K+)|0>";
const NBS_DISPLACEMENT: &str = "|eta,M> = exp(xi K+ - xi* K-)|0>, xi = artanh(eta^(1/2))";
const SU11_DECOMPOSED: &str = "exp(xi K+ - xi* K-) = exp(tau K+)(1-|tau|^2)^K0 exp(-tau* K-)";
const BS_DISPLACEMENT: &str = "|eta,M> = exp(xi J+ - xi* J-)|0>, xi = arctan((eta/(1-eta))^(1/2))";
const SU2_DECOMPOSED: &str = "exp(xi J+ - xi* J-) = exp(tau J+)(1+|tau|^2)^J0 exp(-tau* J-)";
const BS_SUPPORT: &str = "binomial support is [0, M]";
const BS_SU2_LADDER: &str = "(eta^(1/2) J0 + (1-eta)^(1/2) J-)|eta,M> = (eta^(1/2) M/2)|eta,M>";
const BS_LOWERING: &str = "a|eta,M> = (eta/(1-eta))^(1/2) (M-N)^(1/2)|eta,M>";
const BS_NOT_NLCS: &str = "(M-N)^(1/2)|M> = 0: binomial states are not NLCS";
const BS_TOP: &str = "<M|eta,M> = eta^(M/2)";
const EXP_VS_REC: &str = "C0 exp(alpha f(N-1)^(-1) a+)|0> = recursive solution";
const HP_ALGEBRA: &str = "[X0, X+-] = +-X+-, [X+, X-] = -+2X0";
const LAGUERRE_NORM: &str = "<alpha|a^m a+^m|alpha> = m! L_m(-|alpha|^2)";
const Q_NBS: &str = "Q = eta/(1-eta)";
const Q_BS: &str = "Q = -eta";

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn grid_label(eta: f64, big_m: usize) -> String {
    format!("eta={eta},M={big_m:02}")
}

/// Run one suite (or all of them).
pub fn run(suite: Suite, config: &CheckConfig) -> Result<CheckReport> {
    config.validate()?;
    let mut checks = Vec::new();
    let selected = |s: Suite| suite == Suite::All || suite == s;
    if selected(Suite::Eigen) {
        checks.extend(eigen_checks(config)?);
    }
    if selected(Suite::Equivalence) {
        checks.extend(equivalence_checks(config)?);
    }
    if selected(Suite::Identities) {
        checks.extend(identity_checks(config)?);
    }
    if selected(Suite::Excitation) {
        checks.extend(excitation_checks(config)?);
    }
    Ok(CheckReport::assemble(suite, checks, config))
}

fn eigen_checks(cfg: &CheckConfig) -> Result<Vec<CheckEntry>> {
    let mut out = Vec::new();

    if cfg.wants(Family::Nbs) {
        for &eta in &cfg.etas {
            for &big_m in &cfg.big_ms {
                let label = grid_label(eta, big_m);
                let v = states::negative_binomial(eta, big_m, cfg.adaptive())?;
                let spec = NlcsSpec::new(c(eta.sqrt()), NonlinearFunction::nbs(v.dim(), big_m)?);
                let r = nlcs::eigen_residual(&spec, &v)?;
                out.push(CheckEntry::new(
                    format!("eigen.nbs[{label}]"),
                    r,
                    tol::NBS_EIGEN,
                    EIGEN_NBS,
                ));

                let q = photon_stats(&v)?.mandel_q.unwrap_or(f64::NAN);
                let gap = (q - eta / (1.0 - eta)).abs();
                out.push(CheckEntry::new(
                    format!("stats.nbs[{label}].mandel_q"),
                    gap,
                    tol::NBS_MANDEL_Q,
                    Q_NBS,
                ));
            }
        }
    }

    if cfg.wants(Family::Excited) {
        let alpha = c(cfg.excited_alpha);
        for &m in &cfg.excitations {
            let v = states::excited_coherent(alpha, m, cfg.adaptive())?;
            let gap = match nlcs::infer_f(&v, alpha)? {
                Inference::Nlcs(inf) => inf
                    .determined
                    .clone()
                    .map(|n| (inf.f.values()[n] - c(1.0 - m as f64 / (1.0 + n as f64))).norm())
                    .fold(0.0, f64::max),
                Inference::NotNlcs(_) => f64::INFINITY,
            };
            out.push(CheckEntry::new(
                format!("eigen.excited[m={m}].inferred_f"),
                gap,
                tol::EXCITED_INFERENCE,
                EXCITED_F,
            ));
            let spec = NlcsSpec::new(alpha, NonlinearFunction::excited(v.dim(), m));
            let r = nlcs::eigen_residual(&spec, &v)?;
            out.push(CheckEntry::new(
                format!("eigen.excited[m={m}].residual"),
                r,
                tol::EXCITED_EIGEN,
                EIGEN_NLCS,
            ));
        }
    }

    if cfg.wants(Family::Perelomov) {
        for &k in &cfg.ks {
            for &a in &cfg.perelomov_alphas {
                let label = format!("k={k},alpha={a}");
                let v = states::perelomov_k(c(a), k, cfg.adaptive())?;
                let g = NonlinearFunction::perelomov(v.dim(), k)?;
                let r = nlcs::multiphoton_residual(&g, k, c(a), &v)?;
                out.push(CheckEntry::new(
                    format!("eigen.perelomov[{label}].residual"),
                    r,
                    tol::PERELOMOV_EIGEN,
                    MULTIPHOTON,
                ));
                let off: f64 = (0..v.dim())
                    .filter(|n| n % k != 0)
                    .map(|n| v.amp()[n].norm_sqr())
                    .sum();
                out.push(CheckEntry::new(
                    format!("eigen.perelomov[{label}].off_lattice_mass"),
                    off,
                    tol::OFF_LATTICE_MASS,
                    PERELOMOV_SUPPORT,
                ));
                let gap = nlcs::brandt_greenberg_ordering_gap(k, &v);
                out.push(CheckEntry::new(
                    format!("eigen.perelomov[{label}].bg_ordering"),
                    gap,
                    tol::BG_ORDERING,
                    BG_ORDERINGS,
                ));
            }
        }
    }

    if cfg.wants(Family::Binomial) {
        for &eta in &cfg.etas {
            for &big_m in &cfg.big_ms {
                let label = grid_label(eta, big_m);
                let w = states::binomial_not_nlcs_witness(eta, big_m)?;
                out.push(CheckEntry::new(
                    format!("eigen.binomial[{label}].lowering"),
                    w.lowering_residual,
                    tol::BINOMIAL_LADDER,
                    BS_LOWERING,
                ));
                out.push(CheckEntry::new(
                    format!("eigen.binomial[{label}].su2_ladder"),
                    w.su2_ladder_residual,
                    tol::BINOMIAL_LADDER,
                    BS_SU2_LADDER,
                ));
                out.push(CheckEntry::new(
                    format!("eigen.binomial[{label}].top_amplitude"),
                    (w.top_amplitude - w.expected_top_amplitude).abs(),
                    tol::BINOMIAL_TOP,
                    BS_TOP,
                ));
                let confirmed = w.confirms_not_nlcs(tol::BINOMIAL_TOP);
                let mut neg = CheckEntry::new(
                    format!("eigen.binomial[{label}].not_nlcs"),
                    if confirmed { 0.0 } else { 1.0 },
                    0.0,
                    BS_NOT_NLCS,
                );
                neg.kind = CheckKind::ExpectedNegative;
                neg.witness_bound = Some(w.residual_bound_per_alpha);
                out.push(neg);

                let v = states::binomial(eta, big_m, cfg.adaptive())?;
                let q = photon_stats(&v)?.mandel_q.unwrap_or(f64::NAN);
                out.push(CheckEntry::new(
                    format!("stats.binomial[{label}].mandel_q"),
                    (q + eta).abs(),
                    tol::BINOMIAL_MANDEL_Q,
                    Q_BS,
                ));
            }
        }
    }
    Ok(out)
}

fn equivalence_checks(cfg: &CheckConfig) -> Result<Vec<CheckEntry>> {
    let mut out = Vec::new();
    let opts = cfg.exp_opts();
    for &eta in &cfg.etas {
        for &big_m in &cfg.big_ms {
            let label = grid_label(eta, big_m);

            let direct = states::negative_binomial(eta, big_m, cfg.adaptive())?;
            let dim = direct.dim();
            let spec = NlcsSpec::new(c(eta.sqrt()), NonlinearFunction::nbs(dim, big_m)?);
            let exponential = nlcs::build_exponential(&spec, dim)?;
            let dspec = DisplacementSpec::negative_binomial(eta, big_m);
            let displaced = lie::displace(&dspec, dim, &opts)?;
            let decomposed = lie::displace_decomposed(
                &DecompositionParam::from_xi(Algebra::Su11, dspec.xi)?,
                big_m,
                dim,
            )?;
            let pairs = [
                (
                    "direct_vs_exponential",
                    &direct,
                    &exponential,
                    NBS_EXPONENTIAL,
                ),
                (
                    "direct_vs_displacement",
                    &direct,
                    &displaced,
                    NBS_DISPLACEMENT,
                ),
                (
                    "exponential_vs_displacement",
                    &exponential,
                    &displaced,
                    NBS_DISPLACEMENT,
                ),
                (
                    "decomposed_vs_displacement",
                    &decomposed,
                    &displaced,
                    SU11_DECOMPOSED,
                ),
            ];
            for (tag, u, v, rel) in pairs {
                out.push(CheckEntry::new(
                    format!("equivalence.nbs[{label}].{tag}"),
                    u.infidelity(v)?,
                    tol::INFIDELITY,
                    rel,
                ));
            }

            let direct = states::binomial(eta, big_m, cfg.adaptive())?;
            let dim = direct.dim();
            let dspec = DisplacementSpec::binomial(eta, big_m);
            let displaced = lie::displace(&dspec, dim, &opts)?;
            let decomposed = lie::displace_decomposed(
                &DecompositionParam::from_xi(Algebra::Su2, dspec.xi)?,
                big_m,
                dim,
            )?;
            out.push(CheckEntry::new(
                format!("equivalence.binomial[{label}].direct_vs_displacement"),
                direct.infidelity(&displaced)?,
                tol::INFIDELITY,
                BS_DISPLACEMENT,
            ));
            out.push(CheckEntry::new(
                format!("equivalence.binomial[{label}].decomposed_vs_displacement"),
                decomposed.infidelity(&displaced)?,
                tol::INFIDELITY,
                SU2_DECOMPOSED,
            ));
            out.push(CheckEntry::new(
                format!("equivalence.binomial[{label}].support"),
                displaced.norm_sqr_range(big_m + 1, dim),
                0.0,
                BS_SUPPORT,
            ));
        }
    }

    for (i, alpha) in [c(0.8), Complex64::new(0.3, -0.6), Complex64::new(-0.9, 0.2)]
        .into_iter()
        .enumerate()
    {
        let spec = NlcsSpec::new(alpha, NonlinearFunction::one(cfg.dim));
        let rec = nlcs::build_recursive(&spec, cfg.dim)?;
        let exp = nlcs::build_exponential(&spec, cfg.dim)?;
        out.push(CheckEntry::new(
            format!("equivalence.coherent[{i}].recursive_vs_exponential"),
            rec.infidelity(&exp)?,
            tol::CONSTRUCTION_INFIDELITY,
            EXP_VS_REC,
        ));
    }
    Ok(out)
}

/// Seeded tabulated functions with values in `[0.5, 1.5]` and eigenvalues with `|α| ≤ 1`.
pub fn random_functions(
    seed: u64,
    count: usize,
    dim: usize,
) -> Vec<(NonlinearFunction, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let values: Vec<Complex64> = (0..dim).map(|_| c(rng.random_range(0.5..1.5))).collect();
            let r: f64 = rng.random_range(0.1..=1.0);
            let phase: f64 = rng.random_range(0.0..2.0 * PI);
            let f = NonlinearFunction::new(values).expect("finite");
            (f, Complex64::from_polar(r, phase))
        })
        .collect()
}

fn identity_checks(cfg: &CheckConfig) -> Result<Vec<CheckEntry>> {
    let mut out = Vec::new();
    let dim = cfg.dim;
    let mut functions: Vec<(String, NonlinearFunction)> = vec![
        ("one".into(), NonlinearFunction::one(dim)),
        (
            "linear".into(),
            NonlinearFunction::from_real_fn(dim, |n| (n + 1) as f64)?,
        ),
    ];
    for &big_m in &cfg.big_ms {
        functions.push((
            format!("nbs{big_m:02}"),
            NonlinearFunction::nbs(dim, big_m)?,
        ));
    }
    for &k in &cfg.ks {
        functions.push((
            format!("perelomov{k}"),
            NonlinearFunction::perelomov(dim, k)?,
        ));
    }
    for (i, (f, _)) in random_functions(cfg.seed, cfg.random_functions, dim)
        .into_iter()
        .enumerate()
    {
        functions.push((format!("random{i:02}"), f));
    }
    let max_m = cfg.excitations.iter().copied().max().unwrap_or(0);

    for (label, f) in &functions {
        out.push(CheckEntry::new(
            format!("identities.commutator[{label}]"),
            nlcs::commutator_check(f, dim)?,
            tol::OPERATOR_IDENTITY,
            UNIT_COMMUTATOR,
        ));
        let mut push = 0.0f64;
        let mut power = 0.0f64;
        for m in 0..=max_m {
            push = push.max(nlcs::push_through_residual(f, m, dim)?);
            power = power.max(nlcs::power_expansion_residual(f, m, dim)?);
        }
        out.push(CheckEntry::new(
            format!("identities.push_through[{label}]"),
            push,
            tol::OPERATOR_IDENTITY,
            PUSH_THROUGH,
        ));
        out.push(CheckEntry::new(
            format!("identities.power_expansion[{label}]"),
            power,
            tol::OPERATOR_IDENTITY,
            POWER_EXPANSION,
        ));
    }

    for k in 1..=cfg.ks.iter().copied().max().unwrap_or(1) {
        let gap = (0..dim)
            .map(|n| nlcs::brandt_greenberg_ordering_gap(k, &FockVector::basis(dim, n)))
            .fold(0.0, f64::max);
        out.push(CheckEntry::new(
            format!("identities.bg_ordering[k={k}]"),
            gap,
            tol::BG_ORDERING,
            BG_ORDERINGS,
        ));
    }

    for &big_m in &cfg.big_ms {
        out.push(CheckEntry::new(
            format!("identities.su11_algebra[M={big_m:02}]"),
            lie::algebra_commutator_check(Algebra::Su11, big_m, dim)?,
            tol::OPERATOR_IDENTITY,
            HP_ALGEBRA,
        ));
        out.push(CheckEntry::new(
            format!("identities.su2_algebra[M={big_m:02}]"),
            lie::algebra_commutator_check(Algebra::Su2, big_m, big_m + 3)?,
            tol::OPERATOR_IDENTITY,
            HP_ALGEBRA,
        ));
    }

    for m in 0..=4usize {
        for &r in &[0.5, 1.0, 1.5] {
            let coh = states::coherent(c(r), cfg.adaptive())?;
            let raised = coh.resized(coh.dim() + m).create_k(m);
            let fact: f64 = (1..=m).map(|k| k as f64).product();
            let want = fact * laguerre(m, -r * r);
            out.push(CheckEntry::new(
                format!("identities.laguerre_norm[m={m},alpha={r}]"),
                (raised.norm_sqr() - want).abs() / want,
                tol::LAGUERRE_NORM,
                LAGUERRE_NORM,
            ));
        }
    }
    Ok(out)
}

fn excitation_checks(cfg: &CheckConfig) -> Result<Vec<CheckEntry>> {
    let mut out = Vec::new();
    let dim = cfg.dim;
    for (i, (f, alpha)) in random_functions(cfg.seed, cfg.random_functions, dim)
        .into_iter()
        .enumerate()
    {
        let v = nlcs::build_recursive(&NlcsSpec::new(alpha, f.clone()), dim)?;
        if !cfg.truncation.accepts(&v) {
            return Err(Error::Truncation {
                dim,
                lost: cfg.truncation.tail_mass(&v),
            });
        }
        for &m in &cfg.excitations {
            let ex = nlcs::excite(&v, m)?;
            let spec = nlcs::excited_f(&f, m, alpha)?;
            out.push(CheckEntry::new(
                format!("excitation.random[{i:02}].m={m}"),
                nlcs::eigen_residual(&spec, &ex)?,
                tol::EXCITATION_CLOSURE,
                EXCITED_CLOSURE,
            ));
        }
    }

    for &eta in &cfg.etas {
        for &big_m in &cfg.big_ms {
            let v = states::negative_binomial(eta, big_m, cfg.adaptive())?;
            for &m in &cfg.excitations {
                // room for exactly the raised tail
                let v = v.resized(v.dim() + m);
                let f = NonlinearFunction::nbs(v.dim(), big_m)?;
                let ex = nlcs::excite(&v, m)?;
                let spec = nlcs::excited_f(&f, m, c(eta.sqrt()))?;
                out.push(CheckEntry::new(
                    format!("excitation.nbs[{}].m={m}", grid_label(eta, big_m)),
                    nlcs::eigen_residual(&spec, &ex)?,
                    tol::EXCITATION_CLOSURE,
                    EXCITED_CLOSURE,
                ));
            }
        }
    }

    let alpha = c(cfg.excited_alpha);
    for &m in &cfg.excitations {
        let coh = states::coherent(alpha, cfg.adaptive())?;
        let coh = coh.resized(coh.dim() + m);
        let ex = nlcs::excite(&coh, m)?;
        let closed = states::excited_coherent(alpha, m, Truncation::Fixed(ex.dim()))?;
        out.push(CheckEntry::new(
            format!("excitation.coherent[m={m}].closed_form"),
            ex.infidelity(&closed)?,
            tol::CONSTRUCTION_INFIDELITY,
            EXCITED_F,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [
            Suite::Eigen,
            Suite::Equivalence,
            Suite::Identities,
            Suite::Excitation,
            Suite::All,
        ] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn random_functions_are_seeded() {
        let a = random_functions(7, 3, 16);
        let b = random_functions(7, 3, 16);
        let other = random_functions(8, 3, 16);
        assert_eq!(a, b);
        assert_ne!(a, other);
        for (f, alpha) in &a {
            assert!(alpha.norm() <= 1.0);
            assert!(f.values().iter().all(|v| (0.5..1.5).contains(&v.re)));
        }
    }

    #[test]
    fn passed_iff_within_tolerance() {
        assert!(CheckEntry::new("x".into(), 1e-13, 1e-12, "").passed);
        assert!(!CheckEntry::new("x".into(), 2e-12, 1e-12, "").passed);
        assert!(!CheckEntry::new("x".into(), f64::NAN, 1e-12, "").passed);
    }

    #[test]
    fn binomial_family_filter_reports_witness_only() {
        let cfg = CheckConfig {
            etas: vec![0.3],
            big_ms: vec![4],
            family: Some(Family::Binomial),
            ..CheckConfig::default()
        };
        let report = run(Suite::Eigen, &cfg).unwrap();
        assert!(report.all_passed());
        assert!(report.checks.iter().all(|c| c.name.contains("binomial")));
        let neg = report.get("eigen.binomial[eta=0.3,M=04].not_nlcs").unwrap();
        assert_eq!(neg.kind, CheckKind::ExpectedNegative);
        assert!((neg.witness_bound.unwrap() - 0.09).abs() < 1e-12);
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = CheckConfig {
            etas: vec![1.0],
            ..CheckConfig::default()
        };
        assert!(matches!(run(Suite::Eigen, &cfg), Err(Error::Parameter(_))));
    }
}
