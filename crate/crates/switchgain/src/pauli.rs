//! Closed forms for n copies of a Pauli channel under the forward/backward
//! order superposition.
//!
//! The composite action splits into a reversal-symmetric part and a
//! reversal-antisymmetric part. Grouping Kraus words by how many non-identity
//! factors they contain and by the parity pattern of each letter count gives
//! exact polynomial coefficients for both parts; everything downstream
//! (order-witness probability, branch channels, capacities, gains) is
//! evaluated from those coefficients.

use serde::Serialize;

use crate::channel::PauliChannel;
use crate::entropy::{h_lambda, shannon_entropy};
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Largest n for which the word-count coefficients are computed. Binomials
/// and multinomials stay exact in 64-bit integers throughout this range.
pub const MAX_ORDER: u32 = 20;

/// Resolution floor for sign and zero decisions on coefficient values.
const SIGN_TOL: f64 = 1e-12;

/// Weights of the symmetric (s) and antisymmetric (t) parts of the n-fold
/// composite, indexed by Pauli label. All entries are nonnegative and the
/// two vectors jointly sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCoeffs {
    pub s: [f64; 4],
    pub t: [f64; 4],
}

impl BranchCoeffs {
    /// Pauli vector of the plain n-fold composite: q = s + t.
    pub fn composite(&self) -> [f64; 4] {
        let mut q = [0.0; 4];
        for i in 0..4 {
            q[i] = self.s[i] + self.t[i];
        }
        q
    }

    pub fn pn(&self) -> f64 {
        self.t.iter().sum()
    }
}

/// The two channels the switched composite collapses to on the control
/// measurement outcomes, with their mixing weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchBranches {
    pub pn: f64,
    pub phi_plus: PauliChannel,
    /// Absent when the antisymmetric weight is below 1e-12; there is then
    /// nothing to normalize.
    pub phi_minus: Option<PauliChannel>,
}

/// Classification of channels whose order witness vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnZeroClass {
    /// n even and the Kraus set lies on a single non-identity axis, so all
    /// operators commute.
    EvenCommuting,
    /// n odd and at most two Kraus operators; reversal then only picks up a
    /// global sign that squares away.
    OddAtMostTwoKraus,
    Nonzero,
}

/// Full gain evaluation for one channel and copy count.
#[derive(Debug, Clone, Serialize)]
pub struct GainReport {
    pub pn: f64,
    /// Largest absolute transfer eigenvalue of the plain composite.
    pub lambda: f64,
    /// Largest absolute transfer eigenvalue of the symmetric branch.
    pub mu: f64,
    /// Largest absolute transfer eigenvalue of the antisymmetric branch.
    pub nu: Option<f64>,
    pub capacity_composite: f64,
    pub capacity_switch: f64,
    pub delta_c: f64,
    pub coherent_composite: f64,
    pub coherent_switch: f64,
    pub delta_i: f64,
}

fn binom(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1) times
        // the accumulated denominator
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

fn multinomial(k: u32, r1: u32, r2: u32) -> u64 {
    binom(k, r1) * binom(k - r1, r2)
}

/// Sum of multinomial(k; r) p1^r1 p2^r2 p3^r3 over r1+r2+r3 = k with each
/// ri congruent to the requested parity.
fn parity_sum(k: u32, parity: [u32; 3], p: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    let mut r1 = parity[0];
    while r1 <= k {
        let mut r2 = parity[1];
        while r1 + r2 <= k {
            let r3 = k - r1 - r2;
            if r3 % 2 == parity[2] {
                acc += multinomial(k, r1, r2) as f64
                    * p[1].powi(r1 as i32)
                    * p[2].powi(r2 as i32)
                    * p[3].powi(r3 as i32);
            }
            r2 += 2;
        }
        r1 += 2;
    }
    acc
}

/// Weight of length-k non-identity Kraus words whose reversal-symmetric part
/// lands on each Pauli label. Even k populates only the identity slot, odd k
/// only the non-identity slots.
pub fn coeff_d(k: u32, p: [f64; 4]) -> [f64; 4] {
    if k % 2 == 0 {
        [parity_sum(k, [0, 0, 0], &p), 0.0, 0.0, 0.0]
    } else {
        [
            0.0,
            parity_sum(k, [1, 0, 0], &p),
            parity_sum(k, [0, 1, 0], &p),
            parity_sum(k, [0, 0, 1], &p),
        ]
    }
}

/// Weight of length-k non-identity Kraus words whose reversal-antisymmetric
/// part lands on each Pauli label. Empty below k = 2 because antisymmetry
/// needs at least one anticommuting pair.
pub fn coeff_e(k: u32, p: [f64; 4]) -> [f64; 4] {
    if k % 2 == 0 {
        [
            0.0,
            parity_sum(k, [0, 1, 1], &p),
            parity_sum(k, [1, 0, 1], &p),
            parity_sum(k, [1, 1, 0], &p),
        ]
    } else {
        [parity_sum(k, [1, 1, 1], &p), 0.0, 0.0, 0.0]
    }
}

/// Splits the n-fold composite of `ch` into its reversal-symmetric and
/// antisymmetric Pauli weights.
pub fn branch_coeffs(ch: &PauliChannel, n: u32) -> Result<BranchCoeffs> {
    if n < 1 || n > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            n,
            min: 1,
            max: MAX_ORDER,
        });
    }
    let p = ch.p();
    let mut s = [0.0; 4];
    let mut t = [0.0; 4];
    for k in 0..=n {
        let w = p[0].powi((n - k) as i32) * binom(n, k) as f64;
        let d = coeff_d(k, p);
        let e = coeff_e(k, p);
        for i in 0..4 {
            s[i] += w * d[i];
            t[i] += w * e[i];
        }
    }
    let total: f64 = s.iter().sum::<f64>() + t.iter().sum::<f64>();
    debug_assert!((total - 1.0).abs() < 1e-12, "weights sum to {total}");
    Ok(BranchCoeffs { s, t })
}

/// Maximal probability of the antisymmetric control outcome, over all input
/// states. Equals the total antisymmetric weight.
pub fn pn_pauli(ch: &PauliChannel, n: u32) -> Result<f64> {
    Ok(branch_coeffs(ch, n)?.pn())
}

/// Normalizes the two coefficient vectors into branch channels.
pub fn switch_branches(ch: &PauliChannel, n: u32) -> Result<SwitchBranches> {
    let bc = branch_coeffs(ch, n)?;
    branches_from_coeffs(&bc)
}

fn branches_from_coeffs(bc: &BranchCoeffs) -> Result<SwitchBranches> {
    let pn = bc.pn();
    let mut sp = [0.0; 4];
    for i in 0..4 {
        sp[i] = bc.s[i] / (1.0 - pn);
    }
    let phi_plus = PauliChannel::new(sp)?;
    let phi_minus = if pn < 1e-12 {
        None
    } else {
        let mut tp = [0.0; 4];
        for i in 0..4 {
            tp[i] = bc.t[i] / pn;
        }
        Some(PauliChannel::new(tp)?)
    };
    Ok(SwitchBranches {
        pn,
        phi_plus,
        phi_minus,
    })
}

fn max_abs_transfer(ch: &PauliChannel) -> f64 {
    ch.transfer_eigenvalues()
        .iter()
        .fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// Holevo capacity of a Pauli channel: one bit minus the minimal output
/// entropy, which is set by the largest absolute transfer eigenvalue.
pub fn classical_capacity_pauli(ch: &PauliChannel) -> f64 {
    1.0 - h_lambda(max_abs_transfer(ch)).expect("transfer eigenvalues lie in [-1, 1]")
}

/// Capacity of the switched composite: the control measurement reveals which
/// branch acted, so the capacity is the mixture of branch capacities.
pub fn classical_capacity_switch(branches: &SwitchBranches) -> f64 {
    let plus = classical_capacity_pauli(&branches.phi_plus);
    match &branches.phi_minus {
        None => plus,
        Some(minus) => {
            (1.0 - branches.pn) * plus + branches.pn * classical_capacity_pauli(minus)
        }
    }
}

/// Hashing bound: coherent information at maximally mixed input.
pub fn coherent_info_pauli(ch: &PauliChannel) -> f64 {
    1.0 - shannon_entropy(&ch.p()).expect("valid distribution")
}

/// Evaluates both capacity gains of the switched composite over the plain
/// composite.
pub fn gain_report(ch: &PauliChannel, n: u32) -> Result<GainReport> {
    let bc = branch_coeffs(ch, n)?;
    let branches = branches_from_coeffs(&bc)?;
    let pn = branches.pn;
    let q = bc.composite();

    let lambda = max_abs_transfer(&PauliChannel::new(q)?);
    let mu = max_abs_transfer(&branches.phi_plus);
    let nu = branches.phi_minus.as_ref().map(max_abs_transfer);

    let h = |x: f64| h_lambda(x).expect("in [-1, 1]");
    let delta_c = match nu {
        None => h(lambda) - h(mu),
        Some(nu) => h(lambda) - (1.0 - pn) * h(mu) - pn * h(nu),
    };

    let hq = shannon_entropy(&q).expect("valid distribution");
    let hs = shannon_entropy(&branches.phi_plus.p()).expect("valid distribution");
    let ht = branches
        .phi_minus
        .as_ref()
        .map(|m| shannon_entropy(&m.p()).expect("valid distribution"));
    let delta_i = match ht {
        None => hq - hs,
        Some(ht) => hq - (1.0 - pn) * hs - pn * ht,
    };

    let capacity_composite = 1.0 - h(lambda);
    let capacity_switch = classical_capacity_switch(&branches);
    let coherent_switch = match ht {
        None => 1.0 - hs,
        Some(ht) => 1.0 - (1.0 - pn) * hs - pn * ht,
    };

    Ok(GainReport {
        pn,
        lambda,
        mu,
        nu,
        capacity_composite,
        capacity_switch,
        delta_c,
        coherent_composite: 1.0 - hq,
        coherent_switch,
        delta_i,
    })
}

/// Classical-capacity gain of the switch over the plain composite.
pub fn delta_c(ch: &PauliChannel, n: u32) -> Result<f64> {
    Ok(gain_report(ch, n)?.delta_c)
}

/// Coherent-information gain of the switch over the plain composite.
pub fn delta_i(ch: &PauliChannel, n: u32) -> Result<f64> {
    Ok(gain_report(ch, n)?.delta_i)
}

/// Predicts whether the order witness vanishes from the support pattern
/// alone.
///
/// The predicate addresses genuine order superpositions (n >= 2); with a
/// single copy both orders coincide and the witness vanishes for every
/// channel regardless of the returned class.
pub fn pn_zero_classify(ch: &PauliChannel, n: u32) -> PnZeroClass {
    let p = ch.p();
    let support = |x: f64| x > SIGN_TOL;
    if n % 2 == 0 {
        let non_identity = p[1..].iter().filter(|&&x| support(x)).count();
        if non_identity <= 1 {
            return PnZeroClass::EvenCommuting;
        }
    } else {
        let kraus_count = p.iter().filter(|&&x| support(x)).count();
        if kraus_count <= 2 {
            return PnZeroClass::OddAtMostTwoKraus;
        }
    }
    PnZeroClass::Nonzero
}

fn sgn(x: f64) -> i8 {
    if x > SIGN_TOL {
        1
    } else if x < -SIGN_TOL {
        -1
    } else {
        0
    }
}

/// A coefficient difference is consistent with a claimed strict sign when it
/// resolves to that sign or is below the resolution floor; a claimed tie
/// must resolve to zero.
fn sign_consistent(diff: f64, claimed: i8) -> bool {
    let v = sgn(diff);
    if claimed == 0 {
        v == 0
    } else {
        v == claimed || v == 0
    }
}

/// Verifies the monotonicity structure of the branch coefficients in the
/// channel probabilities.
///
/// Larger probability on a label pushes weight toward that label in the
/// symmetric part and away from it in the antisymmetric part; several
/// comparisons degenerate to exact zeros when required support vanishes.
/// All decisions use a 1e-12 resolution floor.
pub fn sign_properties_check(ch: &PauliChannel, n: u32) -> Result<bool> {
    let bc = branch_coeffs(ch, n)?;
    let p = ch.p();
    let (s, t) = (bc.s, bc.t);
    let has = |x: f64| x > SIGN_TOL;
    let mut ok = true;

    if n % 2 == 0 {
        for i in 1..4 {
            ok &= s[0] - s[i] >= -SIGN_TOL;
            // the identity weight ties a non-identity weight only at the
            // half/half point on that axis
            if (p[0] - 0.5).abs() <= 1e-9 && (p[i] - 0.5).abs() <= 1e-9 {
                ok &= (s[0] - s[i]).abs() <= SIGN_TOL;
            }
            // t0 <= ti for even n; both vanish exactly when pj*pk = 0, and
            // full support keeps t0 itself positive from n = 4 on
            let (j, k) = others(i);
            if has(p[j]) && has(p[k]) {
                ok &= t[i] > 0.0;
                ok &= sign_consistent(t[0] - t[i], -1);
            } else {
                ok &= t[i].abs() <= SIGN_TOL;
                ok &= t[0].abs() <= SIGN_TOL;
            }
        }
        for (j, k) in [(1, 2), (1, 3), (2, 3)] {
            if has(p[0]) {
                ok &= sign_consistent(s[j] - s[k], sgn(p[j] - p[k]));
            } else {
                ok &= s[j].abs() <= SIGN_TOL && s[k].abs() <= SIGN_TOL;
            }
            let i = 6 - j - k;
            if has(p[i]) {
                ok &= sign_consistent(t[j] - t[k], -sgn(p[j] - p[k]));
            } else {
                ok &= t[j].abs() <= SIGN_TOL && t[k].abs() <= SIGN_TOL;
            }
        }
    } else {
        for i in 1..4 {
            ok &= sign_consistent(s[0] - s[i], sgn(p[0] - p[i]));
            if n >= 3 {
                let (j, k) = others(i);
                if has(p[j]) && has(p[k]) {
                    ok &= sign_consistent(t[0] - t[i], -sgn(p[0] - p[i]));
                } else {
                    ok &= t[0].abs() <= SIGN_TOL && t[i].abs() <= SIGN_TOL;
                }
            }
        }
        for (j, k) in [(1, 2), (1, 3), (2, 3)] {
            ok &= sign_consistent(s[j] - s[k], sgn(p[j] - p[k]));
            if n >= 3 {
                let i = 6 - j - k;
                if has(p[0]) && has(p[i]) {
                    ok &= sign_consistent(t[j] - t[k], -sgn(p[j] - p[k]));
                } else {
                    ok &= t[j].abs() <= SIGN_TOL && t[k].abs() <= SIGN_TOL;
                }
            }
        }
        if n == 1 {
            ok &= t.iter().all(|&x| x == 0.0);
        }
    }
    Ok(ok)
}

fn others(i: usize) -> (usize, usize) {
    match i {
        1 => (2, 3),
        2 => (1, 3),
        3 => (1, 2),
        _ => unreachable!("non-identity label"),
    }
}

/// Whether the two branch channels attain their minimal output entropy on a
/// common Pauli eigenbasis (their dominant transfer labels intersect).
pub fn same_index_check(branches: &SwitchBranches) -> Result<bool> {
    let minus = branches.phi_minus.as_ref().ok_or_else(|| {
        Error::Domain("same-index comparison needs a nonvanishing antisymmetric branch".into())
    })?;
    let argmax_set = |ch: &PauliChannel| -> Vec<usize> {
        let lam = ch.transfer_eigenvalues();
        let m = lam.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        (0..3).filter(|&i| lam[i].abs() >= m - SIGN_TOL).collect()
    };
    let a = argmax_set(&branches.phi_plus);
    let b = argmax_set(minus);
    Ok(a.iter().any(|i| b.contains(i)))
}

/// Choi matrix of the switched composite on (system (x) control) (x) system,
/// assembled from the closed-form branches with the control read out in the
/// |+>/|-> basis.
pub fn switch_choi(ch: &PauliChannel, n: u32) -> Result<CMatrix> {
    let branches = switch_branches(ch, n)?;
    let m: usize = if n == 1 { 1 } else { 2 };
    let d = 2usize;
    let jp = branches.phi_plus.to_kraus().choi();
    let jm = branches
        .phi_minus
        .as_ref()
        .map(|chan| chan.to_kraus().choi());
    let side = d * m * d;
    let mut out = CMatrix::zeros(side, side);
    let ctrl = 1.0 / m as f64;
    for b in 0..d {
        for a in 0..d {
            for bp in 0..d {
                for ap in 0..d {
                    let plus = jp.get(b * d + a, bp * d + ap);
                    let minus = jm.as_ref().map(|j| j.get(b * d + a, bp * d + ap));
                    for k in 0..m {
                        for l in 0..m {
                            // |+><+| entries are all +1/m; |-><-| entries
                            // carry (-1)^(k+l)/m
                            let mut v = plus * ((1.0 - branches.pn) * ctrl);
                            if let Some(minus) = minus {
                                let sign = if (k + l) % 2 == 0 { ctrl } else { -ctrl };
                                v += minus * (branches.pn * sign);
                            }
                            out.set((b * m + k) * d + a, (bp * m + l) * d + ap, v);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
