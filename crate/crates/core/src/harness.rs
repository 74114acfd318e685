//! Deterministic random generators and independent brute-force oracles that
//! cross-validate the conversions and correspondence verdicts at desk scale
//! (dimensions at most 4, Choi matrices at most 16×16).
//!
//! Determinism contract: everything is a pure function of `(seed, domain,
//! trial index)`. Sub-seeds come from a SplitMix64 hash, so trials can run in
//! any order, or in parallel, and still reproduce bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use num_complex::Complex64;

use crate::error::ChoiError;
use crate::linalg::{self, frob_dist, frob_norm, numeric_rank, CMatrix, ToleranceConfig};
use crate::maps::{ChoiLikeMatrix, KrausSet, LinearMap};

/// Configuration of a deterministic trial batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub seed: u64,
    /// Input dimension, at most 4.
    pub n: usize,
    /// Largest output dimension, at most 4.
    pub m: usize,
    pub trials: usize,
    /// Inclusive range for Kraus operator counts.
    pub kraus_count_range: (usize, usize),
}

impl TrialConfig {
    pub fn new(seed: u64, n: usize, m: usize, trials: usize) -> Result<Self, ChoiError> {
        if !(1..=4).contains(&n) || !(1..=4).contains(&m) {
            return Err(ChoiError::ShapeMismatch {
                expected: "dimensions in 1..=4".to_string(),
                got: format!("n = {n}, m = {m}"),
            });
        }
        Ok(TrialConfig {
            seed,
            n,
            m,
            trials,
            kraus_count_range: (1, n * m),
        })
    }
}

// Stream domains keep the generators for different purposes statistically
// and reproducibly independent of each other.
const DOMAIN_CP: u64 = 0x01;
const DOMAIN_NONCP: u64 = 0x02;
const DOMAIN_EQUIV: u64 = 0x03;
const DOMAIN_DUAL: u64 = 0x04;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// RNG for one `(seed, domain, trial)` cell.
pub fn trial_rng(seed: u64, domain: u64, trial: u64) -> ChaCha8Rng {
    let sub = splitmix64(splitmix64(seed ^ domain.rotate_left(17)) ^ trial);
    ChaCha8Rng::seed_from_u64(sub)
}

/// Plain seeded RNG for tests.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random Hermitian matrix `(g + g†)/2`.
pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_gaussian(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let qr = random_gaussian(n, n, rng).qr();
    qr.q()
}

/// Random nonsingular matrix; Gaussian samples are redrawn until the numeric
/// rank is full rather than assumed to be.
pub fn random_nonsingular<R: Rng>(n: usize, rng: &mut R, tol: &ToleranceConfig) -> CMatrix {
    loop {
        let g = random_gaussian(n, n, rng);
        if numeric_rank(&g, tol) == n {
            return g;
        }
    }
}

/// Random `n × n` matrix of the given rank, assembled as `U diag(σ) V†`.
pub fn random_with_rank<R: Rng>(n: usize, rank: usize, rng: &mut R) -> CMatrix {
    assert!(rank <= n);
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let mut diag = CMatrix::zeros(n, n);
    for k in 0..rank {
        let s: f64 = rng.sample::<f64, _>(StandardNormal).abs() + 0.5;
        diag[(k, k)] = Complex64::new(s, 0.0);
    }
    u * diag * v.adjoint()
}

/// Random Kraus set with `count` Gaussian operators.
pub fn random_kraus_set<R: Rng>(n: usize, m: usize, count: usize, rng: &mut R) -> KrausSet {
    let ops = (0..count).map(|_| random_gaussian(n, m, rng)).collect();
    KrausSet::new(n, m, ops).expect("count ≥ 1 operators of declared shape")
}

/// Completely positive map built from random Kraus operators; CP by
/// construction. Deterministic in `(cfg.seed, trial)`.
pub fn random_cp_map(cfg: &TrialConfig, trial: u64) -> LinearMap {
    let mut rng = trial_rng(cfg.seed, DOMAIN_CP, trial);
    random_cp_map_with(cfg.n, cfg.m, cfg.kraus_count_range, &mut rng)
}

/// CP map generator over an explicit RNG, for callers that batch draws.
pub fn random_cp_map_with<R: Rng>(
    n: usize,
    m: usize,
    kraus_count_range: (usize, usize),
    rng: &mut R,
) -> LinearMap {
    let count = rng.random_range(kraus_count_range.0..=kraus_count_range.1);
    random_kraus_set(n, m, count, rng).to_map()
}

/// Map that is not completely positive by construction: its Choi matrix is
/// `V diag(λ) V†` for a random unitary `V` with at least one `λ < −0.1`.
/// The Choi matrix is Hermitian, so the map preserves Hermitianity.
pub fn random_noncp_map(cfg: &TrialConfig, trial: u64) -> LinearMap {
    let mut rng = trial_rng(cfg.seed, DOMAIN_NONCP, trial);
    random_noncp_map_with(cfg.n, cfg.m, &mut rng)
}

/// Non-CP map generator over an explicit RNG.
pub fn random_noncp_map_with<R: Rng>(n: usize, m: usize, rng: &mut R) -> LinearMap {
    assert!(n * m >= 2, "a non-CP map needs n·m ≥ 2");
    let d = n * m;
    let v = random_unitary(d, rng);
    let mut diag = CMatrix::zeros(d, d);
    // One decisively negative eigenvalue; the rest uniform in (−1, 1).
    diag[(0, 0)] = Complex64::new(-(0.1 + 0.9 * rng.random::<f64>()), 0.0);
    for k in 1..d {
        diag[(k, k)] = Complex64::new(2.0 * rng.random::<f64>() - 1.0, 0.0);
    }
    let choi = &v * diag * v.adjoint();
    ChoiLikeMatrix::new(n, m, choi)
        .expect("shape d×d with d = n·m")
        .to_map()
}

/// Literal double-loop Choi matrix `Σ_ij e_ij ⊗ φ(e_ij)`, independent of the
/// transfer-matrix reshuffle used by `LinearMap::choi`. This is the oracle.
pub fn choi_bruteforce(map: &LinearMap) -> ChoiLikeMatrix {
    let n = map.input_dim();
    let m = map.output_dim();
    let mut matrix = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            let e = linalg::matrix_unit(n, i, j);
            let image = map.apply(&e).expect("matrix unit has the declared shape");
            matrix += linalg::tensor(&linalg::matrix_unit(n, i, j), &image);
        }
    }
    ChoiLikeMatrix::new(n, m, matrix).expect("shape nm×nm by construction")
}

/// One recorded disagreement between `cp_verdict(φ)` and
/// `psd_verdict(C^Σ_φ)`.
#[derive(Clone, Debug)]
pub struct DiscrepancyExemplar {
    pub output_dim: usize,
    pub trial: u64,
    pub map_is_cp: bool,
    pub image_is_psd: bool,
    pub map: LinearMap,
}

/// Outcome of sampling the correspondence "φ CP ⇔ C^Σ_φ positive".
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub trials_run: usize,
    pub discrepancies: usize,
    /// At most five stored instances, to bound the report size.
    pub exemplars: Vec<DiscrepancyExemplar>,
}

const MAX_EXEMPLARS: usize = 5;

/// Samples maps `M_n → M_m` for every `m` in `1..=cfg.m` (half CP, half
/// non-CP by construction) and records every instance where complete
/// positivity of `φ` disagrees with positivity of `C^Σ_φ`.
pub fn equivalence_trial(
    sigma: &ChoiLikeMatrix,
    cfg: &TrialConfig,
    tol: &ToleranceConfig,
) -> Result<EquivalenceReport, ChoiError> {
    if sigma.n() != sigma.m() || sigma.n() != cfg.n {
        return Err(ChoiError::ShapeMismatch {
            expected: format!("substitute in M_{n} ⊗ M_{n}", n = cfg.n),
            got: format!("substitute in M_{} ⊗ M_{}", sigma.n(), sigma.m()),
        });
    }
    if !linalg::is_hermitian(sigma.matrix(), tol.equality_rel) {
        return Err(ChoiError::NotHermitian {
            deviation: linalg::hermitian_deviation(sigma.matrix()),
            tolerance: tol.equality_rel * (1.0 + frob_norm(sigma.matrix())),
        });
    }

    let mut report = EquivalenceReport {
        trials_run: 0,
        discrepancies: 0,
        exemplars: Vec::new(),
    };
    for m in 1..=cfg.m {
        for trial in 0..cfg.trials as u64 {
            let stream = (m as u64) << 32 | trial;
            let mut rng = trial_rng(cfg.seed, DOMAIN_EQUIV, stream);
            let map = if trial % 2 == 0 {
                random_cp_map_with(cfg.n, m, cfg.kraus_count_range, &mut rng)
            } else {
                random_noncp_map_with(cfg.n, m, &mut rng)
            };
            let map_is_cp = map.cp_verdict(tol).is_cp;
            let image = sigma.generalized_choi(&map)?;
            let image_is_psd = if linalg::is_hermitian(image.matrix(), tol.equality_rel) {
                linalg::psd_verdict(image.matrix(), tol)?.is_psd
            } else {
                false
            };
            report.trials_run += 1;
            if map_is_cp != image_is_psd {
                report.discrepancies += 1;
                if report.exemplars.len() < MAX_EXEMPLARS {
                    report.exemplars.push(DiscrepancyExemplar {
                        output_dim: m,
                        trial,
                        map_is_cp,
                        image_is_psd,
                        map,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Result of sampling the pairing `⟨C_φ, C_ψ⟩` over pairs of CP maps.
/// Membership of CP in its own dual cone predicts `min_pairing ≥ −tol·scale`.
#[derive(Clone, Copy, Debug)]
pub struct DualConeTrial {
    pub pairs: usize,
    pub min_pairing: f64,
    pub max_abs_pairing: f64,
}

/// Pairs random CP maps and records the extreme values of
/// `⟨φ, ψ⟩ = ⟨C_φ, C_ψ⟩ = Tr(C_φ C_ψᵗ)`.
pub fn dual_cone_trial(cfg: &TrialConfig, tol: &ToleranceConfig) -> DualConeTrial {
    let mut min_pairing = f64::INFINITY;
    let mut max_abs_pairing = 0.0_f64;
    for trial in 0..cfg.trials as u64 {
        let mut rng = trial_rng(cfg.seed, DOMAIN_DUAL, trial);
        let phi = random_cp_map_with(cfg.n, cfg.m, cfg.kraus_count_range, &mut rng);
        let psi = random_cp_map_with(cfg.n, cfg.m, cfg.kraus_count_range, &mut rng);
        let value = linalg::pairing(phi.choi().matrix(), psi.choi().matrix())
            .expect("Choi matrices of equal declared shape");
        debug_assert!(value.im.abs() <= tol.equality_rel * (1.0 + value.norm()));
        min_pairing = min_pairing.min(value.re);
        max_abs_pairing = max_abs_pairing.max(value.norm());
    }
    DualConeTrial {
        pairs: cfg.trials,
        min_pairing,
        max_abs_pairing,
    }
}

/// Largest deviation `‖choi_bruteforce(φ) − C_φ‖_F` over random maps drawn
/// from both generators; feeds the oracle-independence check.
pub fn bruteforce_agreement(cfg: &TrialConfig) -> f64 {
    let mut worst = 0.0_f64;
    for trial in 0..cfg.trials as u64 {
        let map = if trial % 2 == 0 {
            random_cp_map(cfg, trial)
        } else {
            random_noncp_map(cfg, trial)
        };
        let direct = map.choi();
        let oracle = choi_bruteforce(&map);
        worst = worst.max(frob_dist(direct.matrix(), oracle.matrix()));
    }
    worst
}
