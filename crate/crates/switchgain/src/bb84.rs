//! Private-communication protocol built on the order superposition.
//!
//! A bit-error rate q induces a Pauli channel whose private capacity has a
//! computable upper bound. Two uses compose to the same channel family at
//! error rate 2q(1-q), so the bound also limits any definite-order strategy.
//! Conjugating each use by the Y gate before switching moves the channel to
//! the mirror parameter 1-q, where the switched composite can retain
//! positive coherent information even when the definite-order bound is dead.

use serde::Serialize;

use crate::channel::PauliChannel;
use crate::entropy::binary_entropy;
use crate::pauli;
use crate::{Error, Result};

/// Channel induced by independent bit and phase errors of rate q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BB84Channel {
    q: f64,
}

/// One protocol evaluation at a fixed error rate.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolReport {
    pub q: f64,
    /// Private-capacity ceiling of the best definite-order use of both
    /// copies, clamped at zero.
    pub composite_upper_bound: f64,
    /// Coherent information of the switched composite of the two conjugated
    /// copies, at maximally mixed input.
    pub switch_coherent_info: f64,
    /// The switch certifies a positive private rate while definite orders
    /// certify none.
    pub advantage: bool,
}

impl BB84Channel {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain(format!("error rate {q}")));
        }
        Ok(BB84Channel { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Pauli weights ((1-q)^2, q(1-q), q^2, q(1-q)).
    pub fn as_pauli(&self) -> PauliChannel {
        let q = self.q;
        PauliChannel::new([
            (1.0 - q) * (1.0 - q),
            q * (1.0 - q),
            q * q,
            q * (1.0 - q),
        ])
        .expect("weights form a distribution for q in [0, 1]")
    }

    /// Pauli weights after conjugating the channel by the Y gate: the
    /// identity and Y weights swap, giving the rate-(1-q) member of the
    /// family.
    pub fn sigma_y_conjugate(&self) -> PauliChannel {
        let q = self.q;
        PauliChannel::new([
            q * q,
            q * (1.0 - q),
            (1.0 - q) * (1.0 - q),
            q * (1.0 - q),
        ])
        .expect("weights form a distribution for q in [0, 1]")
    }
}

/// Pauli form of the rate-q channel.
pub fn bb84_as_pauli(q: f64) -> Result<PauliChannel> {
    Ok(BB84Channel::new(q)?.as_pauli())
}

fn raw_bound(q: f64) -> f64 {
    let r = 2.0 * q * (1.0 - q);
    let h = |x: f64| binary_entropy(x).expect("argument in [0, 1]");
    h(0.5 - r) - h(r)
}

/// Private-capacity upper bound at error rate q, clamped at zero since a
/// capacity cannot be negative.
pub fn private_upper_bound(q: f64) -> Result<f64> {
    BB84Channel::new(q)?;
    Ok(raw_bound(q).max(0.0))
}

fn switch_coherent_info(ch: &BB84Channel) -> f64 {
    pauli::gain_report(&ch.sigma_y_conjugate(), 2)
        .expect("n = 2 is in range")
        .coherent_switch
}

/// Evaluates the protocol at error rate q: two sequential uses behave as a
/// single use at rate 2q(1-q), so the definite-order bound is the
/// single-use bound at that composite rate; the switch side conjugates both
/// copies by Y first.
pub fn protocol_report(q: f64) -> Result<ProtocolReport> {
    let ch = BB84Channel::new(q)?;
    let composite_rate = 2.0 * q * (1.0 - q);
    let composite_upper_bound = private_upper_bound(composite_rate)?;
    let info = switch_coherent_info(&ch);
    Ok(ProtocolReport {
        q,
        composite_upper_bound,
        switch_coherent_info: info,
        advantage: composite_upper_bound <= 0.0 && info > 0.0,
    })
}

/// Scans error rates in (0, 1) at the given step, locates the maximal run
/// of advantage points, and refines both endpoints by bisection.
///
/// Both deciding quantities are continuous in q, so the run boundaries
/// bracket sign changes of min(coherent info, -raw bound).
pub fn crossover_scan(step: f64) -> Result<(Vec<ProtocolReport>, (f64, f64))> {
    if !(step > 0.0 && step <= 0.01) {
        return Err(Error::Domain(format!("scan step {step} outside (0, 0.01]")));
    }
    let count = (1.0 / step).round() as usize - 1;
    let mut table = Vec::with_capacity(count);
    for i in 1..=count {
        table.push(protocol_report(i as f64 * step)?);
    }

    let mut best: Option<(usize, usize)> = None;
    let mut run_start: Option<usize> = None;
    for (i, report) in table.iter().enumerate() {
        match (report.advantage, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                if best.map_or(true, |(bs, be)| i - s > be - bs) {
                    best = Some((s, i - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        let e = table.len() - 1;
        if best.map_or(true, |(bs, be)| e - s >= be - bs) {
            best = Some((s, e));
        }
    }
    let (lo_idx, hi_idx) =
        best.ok_or_else(|| Error::Domain(format!("no advantage found at step {step}")))?;

    let q_at = |i: usize| (i + 1) as f64 * step;
    let margin = |q: f64| -> f64 {
        let info = switch_coherent_info(&BB84Channel::new(q).expect("grid point in range"));
        info.min(-raw_bound(2.0 * q * (1.0 - q)))
    };
    let bisect = |mut lo: f64, mut hi: f64, rising: bool| -> f64 {
        // invariant: margin changes sign exactly once inside [lo, hi]
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let positive = margin(mid) > 0.0;
            if positive == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let q_low = if lo_idx == 0 {
        q_at(0)
    } else {
        bisect(q_at(lo_idx - 1), q_at(lo_idx), true)
    };
    let q_high = if hi_idx == table.len() - 1 {
        q_at(hi_idx)
    } else {
        bisect(q_at(hi_idx), q_at(hi_idx + 1), false)
    };
    Ok((table, (q_low, q_high)))
}
