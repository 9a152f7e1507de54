//! Closed forms for n copies of a qudit depolarizing channel under the
//! forward/backward order superposition.
//!
//! Depolarizing channels keep everything one-parameter: the witness
//! probability and both branch channels come from two geometric sequences in
//! the strength, and every capacity reduces to the entropy of a two-point
//! output spectrum. No eigensolver is involved anywhere in this module.

use crate::entropy::xlog2;
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Witness probability together with the strengths of the two branch
/// channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolBranches {
    pub pn: f64,
    /// Strength of the symmetric branch, in [0, 1].
    pub lambda1: f64,
    /// Strength of the antisymmetric branch, in [1, d^2/(d^2-1)]. Absent
    /// when the witness probability is below 1e-12.
    pub lambda2: Option<f64>,
    pub d: usize,
    pub n: u32,
    pub p: f64,
}

fn validate(d: usize, p: f64, n: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("qudit dimension {d}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("depolarizing strength {p}")));
    }
    if n < 1 {
        return Err(Error::Domain("copy count must be at least 1".into()));
    }
    Ok(())
}

/// The two geometric bases of all closed forms here: 1 - p + p/d and
/// 1 - p - p/d.
fn ab(d: usize, p: f64) -> (f64, f64) {
    let d = d as f64;
    (1.0 - p + p / d, 1.0 - p - p / d)
}

/// Maximal probability of the antisymmetric control outcome for n copies of
/// the strength-p qudit depolarizing channel.
pub fn pn_depol(d: usize, p: f64, n: u32) -> Result<f64> {
    validate(d, p, n)?;
    let (a, b) = ab(d, p);
    let df = d as f64;
    let pn = 0.5 - 0.25 * ((df + 1.0) * a.powi(n as i32) - (df - 1.0) * b.powi(n as i32));
    debug_assert!(
        (-1e-12..=0.5 + 1e-12).contains(&pn),
        "witness {pn} out of range"
    );
    Ok(pn.clamp(0.0, 0.5))
}

/// Splits the switched composite into its two depolarizing branches.
pub fn depol_branches(d: usize, p: f64, n: u32) -> Result<DepolBranches> {
    validate(d, p, n)?;
    let pn = pn_depol(d, p, n)?;
    let (a, b) = ab(d, p);
    let df = d as f64;
    let drop = 1.0 - (1.0 - p).powi(n as i32);
    let half_gap = 0.5 * df * (a.powi(n as i32) - b.powi(n as i32));
    let lambda1 = (drop + half_gap) / (2.0 * (1.0 - pn));
    let lambda2 = if pn < 1e-12 {
        None
    } else {
        Some((drop - half_gap) / (2.0 * pn))
    };
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&lambda1));
    if let Some(l2) = lambda2 {
        let cap = df * df / (df * df - 1.0);
        debug_assert!(
            (1.0 - 1e-9..=cap + 1e-9).contains(&l2),
            "antisymmetric strength {l2} outside [1, {cap}]"
        );
    }
    Ok(DepolBranches {
        pn,
        lambda1: lambda1.clamp(0.0, 1.0),
        lambda2,
        d,
        n,
        p,
    })
}

/// Output entropy of a strength-lambda depolarizing channel on a pure state:
/// one eigenvalue 1 - lambda + lambda/d and d-1 copies of lambda/d.
///
/// Valid for lambda up to d^2/(d^2-1), where the top eigenvalue reaches its
/// floor 1/(d+1); both spectrum points stay nonnegative on that range.
pub fn spectrum_entropy(d: usize, lambda: f64) -> f64 {
    let df = d as f64;
    let top = 1.0 - lambda + lambda / df;
    let rest = lambda / df;
    -xlog2(top) - (df - 1.0) * xlog2(rest)
}

/// Classical capacity of the plain n-fold composite, a depolarizing channel
/// of strength 1 - (1-p)^n.
pub fn capacity_depol(d: usize, p: f64, n: u32) -> Result<f64> {
    validate(d, p, n)?;
    let strength = 1.0 - (1.0 - p).powi(n as i32);
    Ok((d as f64).log2() - spectrum_entropy(d, strength))
}

/// Classical capacity of the switched composite: the control outcome selects
/// a branch, so the minimal output entropy averages over branches.
pub fn capacity_depol_switch(branches: &DepolBranches) -> f64 {
    let log_d = (branches.d as f64).log2();
    let plus = spectrum_entropy(branches.d, branches.lambda1);
    match branches.lambda2 {
        None => log_d - plus,
        Some(l2) => {
            log_d
                - (1.0 - branches.pn) * plus
                - branches.pn * spectrum_entropy(branches.d, l2)
        }
    }
}

/// Classical-capacity gain of the switch over the plain composite.
pub fn delta_c_depol(d: usize, p: f64, n: u32) -> Result<f64> {
    let branches = depol_branches(d, p, n)?;
    Ok(capacity_depol_switch(&branches) - capacity_depol(d, p, n)?)
}

/// Scans copy counts 1..=n_max and returns the gain-maximizing count with
/// the full gain table. Ties resolve to the smallest count.
pub fn n_opt_scan(d: usize, p: f64, n_max: u32) -> Result<(u32, Vec<(u32, f64)>)> {
    if n_max < 1 || n_max > 64 {
        return Err(Error::Domain(format!("scan limit {n_max} outside 1..=64")));
    }
    validate(d, p, 1)?;
    let mut table = Vec::with_capacity(n_max as usize);
    let mut best = (1u32, f64::NEG_INFINITY);
    for n in 1..=n_max {
        let gain = delta_c_depol(d, p, n)?;
        table.push((n, gain));
        if gain > best.1 {
            best = (n, gain);
        }
    }
    Ok((best.0, table))
}

/// Choi matrix of a strength-lambda depolarizing map: (1-lambda) on the
/// maximally entangled projector plus lambda/d times the identity. Accepts
/// the extended branch range lambda <= d^2/(d^2-1).
fn depol_choi(d: usize, lambda: f64) -> CMatrix {
    CMatrix::from_fn(d * d, d * d, |r, s| {
        let (b, a) = (r / d, r % d);
        let (bp, ap) = (s / d, s % d);
        let mut v = 0.0;
        if b == a && bp == ap {
            v += 1.0 - lambda;
        }
        if b == bp && a == ap {
            v += lambda / d as f64;
        }
        crate::linalg::c(v, 0.0)
    })
}

/// Choi matrix of the switched composite on (system (x) control) (x) system,
/// from the closed-form branches with the control read out in the |+>/|->
/// basis.
pub fn switch_choi_depol(d: usize, p: f64, n: u32) -> Result<CMatrix> {
    let branches = depol_branches(d, p, n)?;
    let m: usize = if n == 1 { 1 } else { 2 };
    let jp = depol_choi(d, branches.lambda1);
    let jm = branches.lambda2.map(|l2| depol_choi(d, l2));
    let side = d * m * d;
    let ctrl = 1.0 / m as f64;
    let mut out = CMatrix::zeros(side, side);
    for b in 0..d {
        for a in 0..d {
            for bp in 0..d {
                for ap in 0..d {
                    let plus = jp.get(b * d + a, bp * d + ap);
                    let minus = jm.as_ref().map(|j| j.get(b * d + a, bp * d + ap));
                    for k in 0..m {
                        for l in 0..m {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{DepolChannel, PauliChannel};
    use crate::oracle::{effective_switch, ControlState, PermutationSet, DEFAULT_CAP};
    use crate::pauli;

    #[test]
    fn witness_known_values() {
        assert_eq!(pn_depol(2, 0.0, 5).unwrap(), 0.0);
        assert!((pn_depol(2, 1.0, 2).unwrap() - 0.375).abs() < 1e-15);
        assert!((pn_depol(2, 0.5, 2).unwrap() - 0.09375).abs() < 1e-15);
        assert!((pn_depol(3, 0.5, 2).unwrap() - 0.11111111111111116).abs() < 1e-15);
        assert!((pn_depol(2, 0.1, 3).unwrap() - 0.0105).abs() < 1e-14);
        assert!((pn_depol(3, 0.9, 4).unwrap() - 0.4752).abs() < 1e-14);
        assert!((pn_depol(5, 0.3, 3).unwrap() - 0.10368).abs() < 1e-14);
    }

    #[test]
    fn witness_single_copy_vanishes() {
        for d in [2, 3, 5, 8] {
            for p in [0.1, 0.5, 1.0] {
                assert!(pn_depol(d, p, 1).unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn witness_monotone_in_strength() {
        for (d, n) in [(2, 2), (3, 3), (5, 4)] {
            let mut prev = -1.0;
            for i in 0..=100 {
                let pn = pn_depol(d, i as f64 / 100.0, n).unwrap();
                assert!(pn >= prev - 1e-12, "d={d} n={n} p={}", i as f64 / 100.0);
                prev = pn;
            }
        }
    }

    #[test]
    fn domain_validation() {
        assert!(pn_depol(1, 0.5, 2).is_err());
        assert!(pn_depol(2, -0.1, 2).is_err());
        assert!(pn_depol(2, 1.1, 2).is_err());
        assert!(pn_depol(2, 0.5, 0).is_err());
        assert!(n_opt_scan(2, 0.5, 65).is_err());
        assert!(n_opt_scan(2, 0.5, 0).is_err());
    }

    #[test]
    fn branch_strengths_known_values() {
        let br = depol_branches(2, 1.0, 2).unwrap();
        assert!((br.lambda1 - 0.8).abs() < 1e-15);
        assert!((br.lambda2.unwrap() - 4.0 / 3.0).abs() < 1e-15);

        let br = depol_branches(2, 0.5, 2).unwrap();
        assert!((br.lambda1 - 0.6896551724137931).abs() < 1e-14);
        assert!((br.lambda2.unwrap() - 4.0 / 3.0).abs() < 1e-14);

        let br = depol_branches(3, 0.5, 2).unwrap();
        assert!((br.lambda1 - 0.703125).abs() < 1e-14);
        assert!((br.lambda2.unwrap() - 1.125).abs() < 1e-14);

        let br = depol_branches(2, 0.1, 3).unwrap();
        assert!((br.lambda1 - 0.25985346134411325).abs() < 1e-14);
        assert!((br.lambda2.unwrap() - 1.3214285714285725).abs() < 1e-13);

        let br = depol_branches(4, 0.0, 3).unwrap();
        assert_eq!(br.pn, 0.0);
        assert_eq!(br.lambda1, 0.0);
        assert!(br.lambda2.is_none());
    }

    #[test]
    fn branch_ranges_on_grid() {
        for d in [2, 3, 5, 8] {
            let cap = (d * d) as f64 / ((d * d) as f64 - 1.0);
            for n in [2, 3, 7, 16] {
                for i in 1..=50 {
                    let p = i as f64 / 50.0;
                    let br = depol_branches(d, p, n).unwrap();
                    assert!((0.0..=1.0).contains(&br.lambda1));
                    if let Some(l2) = br.lambda2 {
                        assert!(
                            l2 >= 1.0 - 1e-9 && l2 <= cap + 1e-9,
                            "d={d} n={n} p={p}: {l2}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn capacity_known_values() {
        assert!((capacity_depol(2, 0.0, 4).unwrap() - 1.0).abs() < 1e-15);
        assert!((capacity_depol(5, 0.0, 2).unwrap() - 5.0f64.log2()).abs() < 1e-15);

        assert!((capacity_depol(2, 0.5, 2).unwrap() - 0.04556599707503506).abs() < 1e-13);
        let br = depol_branches(2, 0.5, 2).unwrap();
        assert!((capacity_depol_switch(&br) - 0.07167397948245906).abs() < 1e-13);

        assert!((capacity_depol(3, 0.5, 2).unwrap() - 0.0849625007211563).abs() < 1e-13);
        let br = depol_branches(3, 0.5, 2).unwrap();
        assert!((capacity_depol_switch(&br) - 0.10843791009746204).abs() < 1e-13);
    }

    #[test]
    fn gain_known_values() {
        assert!((delta_c_depol(2, 1.0, 2).unwrap() - 0.048794940695398525).abs() < 1e-13);
        assert!((delta_c_depol(2, 0.5, 2).unwrap() - 0.026107982407424).abs() < 1e-13);
        assert!((delta_c_depol(3, 0.5, 2).unwrap() - 0.02347540937630574).abs() < 1e-13);
        assert!((delta_c_depol(2, 0.1, 3).unwrap() - 0.011241666867980282).abs() < 1e-13);
        assert!((delta_c_depol(3, 0.9, 4).unwrap() - 0.0002674226190624296).abs() < 1e-13);
        assert!((delta_c_depol(5, 0.3, 3).unwrap() - 0.03363422592728682).abs() < 1e-13);
        assert!(delta_c_depol(2, 0.0, 3).unwrap().abs() < 1e-15);
        // fully depolarizing composite at odd depth: branches coincide with
        // the composite
        assert!(delta_c_depol(2, 1.0, 3).unwrap().abs() < 1e-12);
    }

    #[test]
    fn qubit_case_matches_pauli_closed_forms() {
        // strength-p depolarizing on a qubit is the Pauli channel
        // (1 - 3p/4, p/4, p/4, p/4)
        for p in [0.3, 0.8, 1.0] {
            let pauli_ch = PauliChannel::new([1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0]).unwrap();
            for n in [2u32, 3] {
                let pn_d = pn_depol(2, p, n).unwrap();
                let pn_p = pauli::pn_pauli(&pauli_ch, n).unwrap();
                assert!((pn_d - pn_p).abs() < 1e-12, "p={p} n={n}");

                let br_d = depol_branches(2, p, n).unwrap();
                let br_p = pauli::switch_branches(&pauli_ch, n).unwrap();
                let cap_d = capacity_depol_switch(&br_d);
                let cap_p = pauli::classical_capacity_switch(&br_p);
                assert!((cap_d - cap_p).abs() < 1e-12, "p={p} n={n}");

                let dc_d = delta_c_depol(2, p, n).unwrap();
                let dc_p = pauli::delta_c(&pauli_ch, n).unwrap();
                assert!((dc_d - dc_p).abs() < 1e-12, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn optimal_copy_counts() {
        assert_eq!(n_opt_scan(2, 0.05, 40).unwrap().0, 20);
        assert_eq!(n_opt_scan(2, 0.1, 40).unwrap().0, 10);
        assert_eq!(n_opt_scan(2, 0.2, 40).unwrap().0, 5);
        for p in [0.5, 0.7, 0.9, 1.0] {
            assert_eq!(n_opt_scan(2, p, 16).unwrap().0, 2, "p = {p}");
        }
        for d in [3, 5, 8] {
            assert_eq!(n_opt_scan(d, 0.5, 16).unwrap().0, 2, "d = {d}");
        }
        let (_, table) = n_opt_scan(2, 0.1, 8).unwrap();
        assert_eq!(table.len(), 8);
        assert!(table[0].1.abs() < 1e-12, "single copy has no gain");
    }

    #[test]
    fn fully_noisy_gain_fades_with_dimension() {
        let mut prev = f64::INFINITY;
        for d in [2, 4, 8, 16] {
            let g = delta_c_depol(d, 1.0, 2).unwrap();
            assert!(g > 0.0 && g < prev, "d = {d}: {g} vs {prev}");
            prev = g;
        }
        assert!(prev < 0.01);
    }

    #[test]
    fn closed_form_choi_matches_enumeration() {
        for (d, p, n) in [(2usize, 0.5, 2u32), (3, 0.5, 2), (2, 0.9, 3)] {
            let closed = switch_choi_depol(d, p, n).unwrap();
            let kraus: Vec<_> = (0..n)
                .map(|_| DepolChannel::new(d, p).unwrap().to_kraus())
                .collect();
            let perms = PermutationSet::forward_backward(n as usize);
            let omega = ControlState::uniform(perms.m());
            let brute = effective_switch(&kraus, &perms, &omega, DEFAULT_CAP).unwrap();
            let dist = closed.frobenius_distance(&brute.choi).unwrap();
            assert!(dist < 1e-10, "d={d} p={p} n={n}: distance {dist}");
        }
    }

    #[test]
    fn single_copy_choi_is_plain_channel() {
        let closed = switch_choi_depol(3, 0.4, 1).unwrap();
        let plain = DepolChannel::new(3, 0.4).unwrap().to_kraus().choi();
        assert!(closed.frobenius_distance(&plain).unwrap() < 1e-12);
    }

    #[test]
    fn mixing_identity_on_choi() {
        // (1 - pn) J+ + pn J- reproduces the plain composite Choi
        for (d, p, n) in [(2usize, 0.7, 3u32), (3, 0.4, 2), (4, 1.0, 2)] {
            let br = depol_branches(d, p, n).unwrap();
            let jp = depol_choi(d, br.lambda1);
            let jm = depol_choi(d, br.lambda2.unwrap());
            let mixed = jp
                .scale(crate::linalg::c(1.0 - br.pn, 0.0))
                .add(&jm.scale(crate::linalg::c(br.pn, 0.0)))
                .unwrap();
            let composite = depol_choi(d, 1.0 - (1.0 - p).powi(n as i32));
            let dist = mixed.frobenius_distance(&composite).unwrap();
            assert!(dist < 1e-10, "d={d} p={p} n={n}: {dist}");
        }
    }
}
