//! Brute-force construction of the order-superposed channel.
//!
//! Everything here works from the defining sum: for a permutation pair
//! (pi_k, pi_l), a Kraus index tuple s and control state omega, the output
//! accumulates `K_{pi_k, s} rho K_{pi_l, s}^dag (x) omega_{kl} |k><l|`,
//! where `K_{pi, s}` is the ordered operator product of the chosen Kraus
//! operators. No closed form is consulted; this module is the oracle the
//! closed forms are tested against.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{verify_choi_cptp, KrausChannel};
use crate::linalg::{c, CMatrix, Complex};
use crate::{Error, Result};

/// Default enumeration budget: product of Kraus-set sizes times m^2.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Seed for the Haar-random part of the state-dependence grid.
const STATE_GRID_SEED: u64 = 0x5157_1c0d_e55e_edu64;

/// A set of execution orders, each a permutation of the n channel slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSet {
    n: usize,
    perms: Vec<Vec<usize>>,
}

impl PermutationSet {
    pub fn new(n: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 || perms.is_empty() {
            return Err(Error::Domain("empty permutation set".into()));
        }
        for p in &perms {
            let mut seen = vec![false; n];
            if p.len() != n {
                return Err(Error::Domain(format!("permutation length {}", p.len())));
            }
            for &x in p {
                if x >= n || seen[x] {
                    return Err(Error::Domain(format!("invalid permutation {p:?}")));
                }
                seen[x] = true;
            }
        }
        for i in 0..perms.len() {
            for j in (i + 1)..perms.len() {
                if perms[i] == perms[j] {
                    return Err(Error::Domain(format!("duplicate permutation {:?}", perms[i])));
                }
            }
        }
        Ok(PermutationSet { n, perms })
    }

    /// Forward and reversed order; collapses to the single identity
    /// permutation at n = 1.
    pub fn forward_backward(n: usize) -> Self {
        let fwd: Vec<usize> = (0..n).collect();
        let bwd: Vec<usize> = (0..n).rev().collect();
        let perms = if fwd == bwd { vec![fwd] } else { vec![fwd, bwd] };
        PermutationSet { n, perms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }
}

/// Density matrix of the order-control system.
#[derive(Debug, Clone)]
pub struct ControlState {
    omega: CMatrix,
}

impl ControlState {
    pub fn new(omega: CMatrix) -> Result<Self> {
        if omega.rows() != omega.cols() {
            return Err(Error::InvalidState(format!(
                "control state is {}x{}",
                omega.rows(),
                omega.cols()
            )));
        }
        let tr = omega.trace()?;
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidState(format!("control trace {tr}")));
        }
        let eigs = omega
            .hermitian_eigenvalues()
            .map_err(|e| Error::InvalidState(e.to_string()))?;
        if eigs.first().copied().unwrap_or(0.0) < -1e-10 {
            return Err(Error::InvalidState(format!(
                "control eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(ControlState { omega })
    }

    /// |w><w| with |w> the uniform superposition over m orders.
    pub fn uniform(m: usize) -> Self {
        let v = 1.0 / m as f64;
        ControlState {
            omega: CMatrix::from_fn(m, m, |_, _| c(v, 0.0)),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.omega.rows()
    }

    pub fn is_uniform_pure(&self, tol: f64) -> bool {
        let m = self.dim();
        self.omega
            .max_abs_diff(ControlState::uniform(m).matrix())
            .map_or(false, |d| d <= tol)
    }
}

/// The assembled switch output as a Choi matrix on
/// (system out (x) control) (x) system in.
#[derive(Debug, Clone)]
pub struct SwitchOutput {
    pub choi: CMatrix,
    pub n: usize,
    pub m: usize,
    pub dim_in: usize,
    pub dim_out: usize,
}

impl SwitchOutput {
    /// Output dimension of the joint system (x) control space.
    pub fn joint_dim(&self) -> usize {
        self.dim_out * self.m
    }

    /// Applies the assembled channel to a state via the Choi matrix.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let d = self.dim_in;
        if rho.rows() != d || rho.cols() != d {
            return Err(Error::Dimension(format!(
                "state is {}x{}, expected {d}x{d}",
                rho.rows(),
                rho.cols()
            )));
        }
        let dj = self.joint_dim();
        let mut out = CMatrix::zeros(dj, dj);
        for r in 0..dj {
            for s in 0..dj {
                let mut acc = Complex::ZERO;
                for a in 0..d {
                    for ap in 0..d {
                        acc += self.choi.get(r * d + a, s * d + ap) * rho.get(a, ap);
                    }
                }
                out.set(r, s, acc);
            }
        }
        Ok(out)
    }
}

struct Enumeration<'a> {
    channels: &'a [KrausChannel],
    perm_set: &'a PermutationSet,
    d: usize,
    counts: Vec<usize>,
}

impl<'a> Enumeration<'a> {
    fn prepare(
        channels: &'a [KrausChannel],
        perm_set: &'a PermutationSet,
        m_sq: u64,
        cap: u64,
    ) -> Result<Self> {
        if channels.len() != perm_set.n() {
            return Err(Error::Dimension(format!(
                "{} channels for {} slots",
                channels.len(),
                perm_set.n()
            )));
        }
        let d = channels[0].dim_in();
        for ch in channels {
            if ch.dim_in() != d || ch.dim_out() != d {
                return Err(Error::Dimension(
                    "all channels must share one square dimension".into(),
                ));
            }
        }
        let counts: Vec<usize> = channels.iter().map(|ch| ch.kraus().len()).collect();
        let tuples: u128 = counts.iter().map(|&k| k as u128).product();
        let needed = tuples.saturating_mul(m_sq as u128);
        if needed > cap as u128 {
            return Err(Error::CapExceeded { needed, cap });
        }
        Ok(Enumeration {
            channels,
            perm_set,
            d,
            counts,
        })
    }

    /// Calls `f` once per Kraus index tuple with the ordered products for
    /// every permutation in the set.
    fn for_each_tuple(&self, mut f: impl FnMut(&[usize], &[CMatrix])) {
        let n = self.perm_set.n();
        let mut tuple = vec![0usize; n];
        let mut products: Vec<CMatrix> = Vec::with_capacity(self.perm_set.m());
        loop {
            products.clear();
            for perm in self.perm_set.perms() {
                let mut acc = CMatrix::identity(self.d);
                for &slot in perm {
                    acc = acc
                        .mat_mul(&self.channels[slot].kraus()[tuple[slot]])
                        .expect("square dims verified in prepare");
                }
                products.push(acc);
            }
            f(&tuple, &products);
            // odometer increment
            let mut pos = n;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < self.counts[pos] {
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }
}

/// Assembles the switch of `channels` under the orders in `perm_set` with
/// control state `omega` by enumerating every Kraus index tuple.
///
/// The enumeration budget is `prod_i |kraus_i| * m^2 <= cap`; exceeding it
/// returns `CapExceeded` rather than grinding.
pub fn effective_switch(
    channels: &[KrausChannel],
    perm_set: &PermutationSet,
    omega: &ControlState,
    cap: u64,
) -> Result<SwitchOutput> {
    let m = perm_set.m();
    if omega.dim() != m {
        return Err(Error::Dimension(format!(
            "control dim {} for {} orders",
            omega.dim(),
            m
        )));
    }
    let enumeration = Enumeration::prepare(channels, perm_set, (m * m) as u64, cap)?;
    let d = enumeration.d;
    let side = d * m * d;
    let mut choi = CMatrix::zeros(side, side);
    enumeration.for_each_tuple(|_, products| {
        for (k, pk) in products.iter().enumerate() {
            for (l, pl) in products.iter().enumerate() {
                let w = omega.matrix().get(k, l);
                if w == Complex::ZERO {
                    continue;
                }
                for b in 0..d {
                    for a in 0..d {
                        let left = pk.get(b, a) * w;
                        if left == Complex::ZERO {
                            continue;
                        }
                        let row = (b * m + k) * d + a;
                        for bp in 0..d {
                            for ap in 0..d {
                                choi.add_assign_at(
                                    row,
                                    (bp * m + l) * d + ap,
                                    left * pl.get(bp, ap).conj(),
                                );
                            }
                        }
                    }
                }
            }
        }
    });
    verify_choi_cptp(&choi, d * m, d, 1e-9)?;
    Ok(SwitchOutput {
        choi,
        n: perm_set.n(),
        m,
        dim_in: d,
        dim_out: d,
    })
}

/// Hermitian operator whose expectation in rho is the probability of the
/// off-design control outcome; built from the same enumeration.
fn outcome_operator(
    channels: &[KrausChannel],
    perm_set: &PermutationSet,
    omega: &ControlState,
    cap: u64,
) -> Result<CMatrix> {
    let m = perm_set.m();
    if omega.dim() != m {
        return Err(Error::Dimension(format!(
            "control dim {} for {} orders",
            omega.dim(),
            m
        )));
    }
    let enumeration = Enumeration::prepare(channels, perm_set, (m * m) as u64, cap)?;
    let d = enumeration.d;
    // F2 = I - |u><u| with |u> the uniform superposition; this is the
    // measurement the switch design fixes, independent of omega.
    let f2 = CMatrix::identity(m)
        .sub(ControlState::uniform(m).matrix())
        .expect("same dims");
    let mut e = CMatrix::zeros(d, d);
    enumeration.for_each_tuple(|_, products| {
        for (k, pk) in products.iter().enumerate() {
            for (l, pl) in products.iter().enumerate() {
                let w = omega.matrix().get(k, l) * f2.get(l, k);
                if w == Complex::ZERO {
                    continue;
                }
                let term = pl.dagger().mat_mul(pk).expect("square");
                for i in 0..d {
                    for j in 0..d {
                        e.add_assign_at(i, j, w * term.get(i, j));
                    }
                }
            }
        }
    });
    Ok(e)
}

/// Maximal probability of the off-design control outcome, maximized over
/// input states exactly (largest eigenvalue of the outcome operator).
///
/// Requires the control to be the uniform pure state; other controls have no
/// agreed single-number reading and go through `pn_state_dependence`.
pub fn pn_exact(
    channels: &[KrausChannel],
    perm_set: &PermutationSet,
    omega: &ControlState,
    cap: u64,
) -> Result<f64> {
    if !omega.is_uniform_pure(1e-10) {
        return Err(Error::InvalidState(
            "exact order witness requires the uniform pure control state".into(),
        ));
    }
    let e = outcome_operator(channels, perm_set, omega, cap)?;
    let eigs = e.hermitian_eigenvalues()?;
    Ok(*eigs.last().expect("nonempty spectrum"))
}

/// Extremes of the off-design outcome probability over input states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDependence {
    pub min: f64,
    pub max: f64,
}

impl StateDependence {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

/// Evaluates the outcome probability on a deterministic pure-state grid
/// (d + 1 phase-twisted Fourier bases plus 100 seeded Haar vectors) and
/// combines with the exact spectral extremes.
pub fn pn_state_dependence(
    channels: &[KrausChannel],
    perm_set: &PermutationSet,
    omega: &ControlState,
    cap: u64,
) -> Result<StateDependence> {
    let e = outcome_operator(channels, perm_set, omega, cap)?;
    let eigs = e.hermitian_eigenvalues()?;
    let mut min = eigs[0];
    let mut max = *eigs.last().unwrap();
    let d = e.rows();
    for v in state_grid(d) {
        let val = expectation(&e, &v);
        min = min.min(val);
        max = max.max(val);
    }
    Ok(StateDependence { min, max })
}

fn expectation(e: &CMatrix, v: &[Complex]) -> f64 {
    let d = e.rows();
    let mut acc = Complex::ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += v[i].conj() * e.get(i, j) * v[j];
        }
    }
    acc.re
}

/// Deterministic probe states: the computational basis, d phase-twisted
/// Fourier bases (the six Pauli eigenstates at d = 2), and 100 Haar-random
/// vectors from a fixed seed.
fn state_grid(d: usize) -> Vec<Vec<Complex>> {
    let mut out = Vec::new();
    for k in 0..d {
        let mut v = vec![Complex::ZERO; d];
        v[k] = Complex::ONE;
        out.push(v);
    }
    let norm = 1.0 / (d as f64).sqrt();
    for a in 0..d {
        for k in 0..d {
            let v: Vec<Complex> = (0..d)
                .map(|j| {
                    let angle = std::f64::consts::PI * (a * j * j) as f64 / d as f64
                        + 2.0 * std::f64::consts::PI * (k * j) as f64 / d as f64;
                    c(norm * angle.cos(), norm * angle.sin())
                })
                .collect();
            out.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(STATE_GRID_SEED);
    for _ in 0..100 {
        out.push(haar_vector(d, &mut rng));
    }
    out
}

fn haar_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<Complex> {
    // normalized vector of iid complex Gaussians (Box-Muller)
    let mut v: Vec<Complex> = (0..d)
        .map(|_| {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            c(
                r * (2.0 * std::f64::consts::PI * u2).cos(),
                r * (2.0 * std::f64::consts::PI * u2).sin(),
            )
        })
        .collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Outcome of the ordered-product equality scan.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// First Kraus index tuple whose products differ, with the two
    /// permutation indices that disagree.
    pub violation: Option<(Vec<usize>, usize, usize)>,
}

/// Checks whether the ordered Kraus products agree across all permutations
/// for every index tuple (elementwise within 1e-10).
pub fn s_invariance_check(
    channels: &[KrausChannel],
    perm_set: &PermutationSet,
    cap: u64,
) -> Result<InvarianceReport> {
    let enumeration = Enumeration::prepare(channels, perm_set, 1, cap)?;
    let mut violation: Option<(Vec<usize>, usize, usize)> = None;
    enumeration.for_each_tuple(|tuple, products| {
        if violation.is_some() {
            return;
        }
        for l in 1..products.len() {
            let diff = products[0]
                .max_abs_diff(&products[l])
                .expect("equal dims");
            if diff > 1e-10 {
                violation = Some((tuple.to_vec(), 0, l));
                return;
            }
        }
    });
    Ok(InvarianceReport {
        invariant: violation.is_none(),
        violation,
    })
}

/// Under order invariance the switch factorizes as composite (x) control.
/// Verifies that factorization on the Choi matrix within 1e-9.
pub fn capacity_floor_check(
    channels: &[KrausChannel],
    perm_set: &PermutationSet,
    omega: &ControlState,
    cap: u64,
) -> Result<bool> {
    let report = s_invariance_check(channels, perm_set, cap)?;
    if !report.invariant {
        return Err(Error::Domain(
            "factorization check requires order-invariant Kraus products".into(),
        ));
    }
    let output = effective_switch(channels, perm_set, omega, cap)?;
    let d = output.dim_in;
    let m = output.m;

    let order = &perm_set.perms()[0];
    let mut composite = channels[order[0]].clone();
    for &slot in &order[1..] {
        composite = composite.compose(&channels[slot])?;
    }
    let jc = composite.choi();

    let mut expected = CMatrix::zeros(d * m * d, d * m * d);
    for b in 0..d {
        for a in 0..d {
            for bp in 0..d {
                for ap in 0..d {
                    let base = jc.get(b * d + a, bp * d + ap);
                    if base == Complex::ZERO {
                        continue;
                    }
                    for k in 0..m {
                        for l in 0..m {
                            expected.set(
                                (b * m + k) * d + a,
                                (bp * m + l) * d + ap,
                                base * omega.matrix().get(k, l),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(output.choi.frobenius_distance(&expected)? < 1e-9)
}
