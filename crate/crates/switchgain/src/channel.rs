//! Channel representations: general Kraus sets, Pauli channels, qudit
//! depolarizing channels, plus conversions, composition and Choi matrices.

use serde::{Deserialize, Serialize};

use crate::linalg::{c, CMatrix, Complex, Subsystem};
use crate::{Error, Result};

/// Completeness of a Kraus set is enforced to this tolerance.
const COMPLETENESS_TOL: f64 = 1e-9;
/// Pauli probability vectors must sum to 1 within this.
const PAULI_SUM_TOL: f64 = 1e-12;

/// The four Pauli matrices, index 0 = identity.
pub fn pauli_matrix(i: usize) -> CMatrix {
    match i {
        0 => CMatrix::identity(2),
        1 => CMatrix::from_data(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap(),
        2 => CMatrix::from_data(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap(),
        3 => CMatrix::from_data(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap(),
        _ => panic!("Pauli index {i} out of range"),
    }
}

/// A completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    /// Validates that every operator is `dim_out x dim_in` and that
    /// `sum_i K_i^dag K_i = I` within 1e-9.
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidChannel("zero dimension".into()));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus set".into()));
        }
        for k in &kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::Dimension(format!(
                    "Kraus operator is {}x{}, expected {}x{}",
                    k.rows(),
                    k.cols(),
                    dim_out,
                    dim_in
                )));
            }
        }
        let mut acc = CMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            acc = acc.add(&k.dagger().mat_mul(k)?)?;
        }
        let dev = acc.max_abs_diff(&CMatrix::identity(dim_in))?;
        if dev > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus completeness violated by {dev:.3e}"
            )));
        }
        Ok(KrausChannel {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel::new(d, d, vec![CMatrix::identity(d)]).unwrap()
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// sum_i K_i rho K_i^dag
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.rows() != self.dim_in || rho.cols() != self.dim_in {
            return Err(Error::Dimension(format!(
                "state is {}x{}, channel input dim {}",
                rho.rows(),
                rho.cols(),
                self.dim_in
            )));
        }
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = out.add(&k.mat_mul(rho)?.mat_mul(&k.dagger())?)?;
        }
        Ok(out)
    }

    /// Choi matrix (channel tensor identity applied to the unnormalized
    /// maximally entangled state), output factor first. Entry formula:
    /// `J[(b,a),(b',a')] = sum_k K[b][a] conj(K[b'][a'])`.
    pub fn choi(&self) -> CMatrix {
        let (di, do_) = (self.dim_in, self.dim_out);
        let mut j = CMatrix::zeros(do_ * di, do_ * di);
        for k in &self.kraus {
            for b in 0..do_ {
                for a in 0..di {
                    let left = k.get(b, a);
                    if left == Complex::ZERO {
                        continue;
                    }
                    for bp in 0..do_ {
                        for ap in 0..di {
                            j.add_assign_at(
                                b * di + a,
                                bp * di + ap,
                                left * k.get(bp, ap).conj(),
                            );
                        }
                    }
                }
            }
        }
        j
    }

    /// self after `inner`: Kraus set of all pairwise products.
    pub fn compose(&self, inner: &KrausChannel) -> Result<KrausChannel> {
        if self.dim_in != inner.dim_out {
            return Err(Error::Dimension(format!(
                "compose {}->{} after {}->{}",
                self.dim_in, self.dim_out, inner.dim_in, inner.dim_out
            )));
        }
        let mut ops = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                ops.push(a.mat_mul(b)?);
            }
        }
        KrausChannel::new(inner.dim_in, self.dim_out, ops)
    }

    /// Frobenius distance between Choi matrices; < 1e-9 is the crate's
    /// working definition of channel equality.
    pub fn choi_distance(&self, other: &KrausChannel) -> Result<f64> {
        self.choi().frobenius_distance(&other.choi())
    }
}

/// Mixture of Pauli conjugations with probabilities (p0, p1, p2, p3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel {
    p: [f64; 4],
}

impl PauliChannel {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        let mut q = [0.0; 4];
        let mut sum = 0.0;
        for (i, &x) in p.iter().enumerate() {
            if !x.is_finite() || x < -PAULI_SUM_TOL {
                return Err(Error::InvalidChannel(format!("Pauli probability {x}")));
            }
            q[i] = x.max(0.0);
            sum += q[i];
        }
        if (sum - 1.0).abs() > PAULI_SUM_TOL {
            return Err(Error::InvalidChannel(format!(
                "Pauli probabilities sum to {sum}"
            )));
        }
        Ok(PauliChannel { p: q })
    }

    pub fn identity() -> Self {
        PauliChannel { p: [1.0, 0.0, 0.0, 0.0] }
    }

    pub fn completely_depolarizing() -> Self {
        PauliChannel { p: [0.25; 4] }
    }

    pub fn p(&self) -> [f64; 4] {
        self.p
    }

    /// Kraus operators sqrt(p_i) sigma_i; zero-probability terms are dropped
    /// so downstream Kraus-counting logic sees the minimal set.
    pub fn to_kraus(&self) -> KrausChannel {
        let ops: Vec<CMatrix> = (0..4)
            .filter(|&i| self.p[i] > 0.0)
            .map(|i| pauli_matrix(i).scale(c(self.p[i].sqrt(), 0.0)))
            .collect();
        KrausChannel::new(2, 2, ops).expect("Pauli Kraus set is complete by construction")
    }

    /// Action on the Bloch components: lambda_i = p0 + 2 p_i - (p1 + p2 + p3).
    pub fn transfer_eigenvalues(&self) -> [f64; 3] {
        let rest = self.p[1] + self.p[2] + self.p[3];
        [
            self.p[0] + 2.0 * self.p[1] - rest,
            self.p[0] + 2.0 * self.p[2] - rest,
            self.p[0] + 2.0 * self.p[3] - rest,
        ]
    }

    /// Parameters of the n-fold composition: transfer eigenvalues raised to
    /// the n-th power, mapped back to probabilities.
    pub fn power(&self, n: u32) -> PauliChannel {
        let l = self.transfer_eigenvalues();
        eigs_to_pauli([
            l[0].powi(n as i32),
            l[1].powi(n as i32),
            l[2].powi(n as i32),
        ])
        .expect("powers of a channel stay completely positive")
    }
}

/// Inverse of `transfer_eigenvalues`. Rejects triples whose probabilities
/// would be negative beyond 1e-12.
pub fn eigs_to_pauli(l: [f64; 3]) -> Result<PauliChannel> {
    let p = [
        (1.0 + l[0] + l[1] + l[2]) / 4.0,
        (1.0 + l[0] - l[1] - l[2]) / 4.0,
        (1.0 - l[0] + l[1] - l[2]) / 4.0,
        (1.0 - l[0] - l[1] + l[2]) / 4.0,
    ];
    PauliChannel::new(p)
        .map_err(|_| Error::InvalidChannel(format!("eigenvalue triple {l:?} is not a channel")))
}

/// rho -> (1-p) rho + p tr(rho) I/d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolChannel {
    d: usize,
    p: f64,
}

impl DepolChannel {
    pub fn new(d: usize, p: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidChannel(format!("depolarizing dimension {d}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("depolarizing strength {p}")));
        }
        Ok(DepolChannel { d, p })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Kraus set sqrt(1-p) I plus (sqrt(p)/d) X^a Z^b over the
    /// Heisenberg-Weyl basis. Zero-weight operators are dropped.
    pub fn to_kraus(&self) -> KrausChannel {
        let d = self.d;
        let mut ops = Vec::new();
        if self.p < 1.0 {
            ops.push(CMatrix::identity(d).scale(c((1.0 - self.p).sqrt(), 0.0)));
        }
        if self.p > 0.0 {
            let w = self.p.sqrt() / d as f64;
            for a in 0..d {
                for b in 0..d {
                    ops.push(heisenberg_weyl(d, a, b).scale(c(w, 0.0)));
                }
            }
        }
        KrausChannel::new(d, d, ops).expect("depolarizing Kraus set is complete by construction")
    }
}

/// X^a Z^b on dimension d: maps |j> to omega^(b j) |j + a mod d>.
pub fn heisenberg_weyl(d: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        let angle = 2.0 * std::f64::consts::PI * (b * j) as f64 / d as f64;
        m.set((j + a) % d, j, c(angle.cos(), angle.sin()));
    }
    m
}

/// Serializable channel description used by the command-line tools.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelSpec {
    Pauli { p: [f64; 4] },
    Depolarizing { d: usize, p: f64 },
    Kraus {
        dim_in: usize,
        dim_out: usize,
        /// One row-major matrix per Kraus operator, entries as [re, im].
        matrices: Vec<Vec<[f64; 2]>>,
    },
}

impl ChannelSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_kraus(&self) -> Result<KrausChannel> {
        match self {
            ChannelSpec::Pauli { p } => Ok(PauliChannel::new(*p)?.to_kraus()),
            ChannelSpec::Depolarizing { d, p } => Ok(DepolChannel::new(*d, *p)?.to_kraus()),
            ChannelSpec::Kraus {
                dim_in,
                dim_out,
                matrices,
            } => {
                let mut ops = Vec::with_capacity(matrices.len());
                for entries in matrices {
                    if entries.len() != dim_in * dim_out {
                        return Err(Error::Spec(format!(
                            "expected {} entries per {}x{} matrix, got {}",
                            dim_in * dim_out,
                            dim_out,
                            dim_in,
                            entries.len()
                        )));
                    }
                    let data = entries.iter().map(|&[re, im]| c(re, im)).collect();
                    ops.push(CMatrix::from_data(*dim_out, *dim_in, data)?);
                }
                KrausChannel::new(*dim_in, *dim_out, ops)
            }
        }
    }
}

/// Shared CPTP sanity check on a Choi matrix: positive semidefinite and the
/// output-trace marginal equals the identity on the input space.
pub fn verify_choi_cptp(j: &CMatrix, dim_out: usize, dim_in: usize, tol: f64) -> Result<()> {
    let eigs = j.hermitian_eigenvalues()?;
    if let Some(&min) = eigs.first() {
        if min < -tol {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix has eigenvalue {min:.3e}"
            )));
        }
    }
    let marginal = j.partial_trace((dim_out, dim_in), Subsystem::Second)?;
    let dev = marginal.max_abs_diff(&CMatrix::identity(dim_in))?;
    if dev > tol {
        return Err(Error::InvalidChannel(format!(
            "trace preservation violated by {dev:.3e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_state(i: usize) -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m.set(i, i, Complex::ONE);
        m
    }

    #[test]
    fn pauli_to_kraus_cases() {
        assert_eq!(PauliChannel::identity().to_kraus().kraus().len(), 1);
        let half = PauliChannel::new([0.5, 0.5, 0.0, 0.0]).unwrap().to_kraus();
        assert_eq!(half.kraus().len(), 2);
        let s = 0.5_f64.sqrt();
        assert!((half.kraus()[0].get(0, 0) - c(s, 0.)).norm() < 1e-15);
        assert!((half.kraus()[1].get(0, 1) - c(s, 0.)).norm() < 1e-15);
    }

    #[test]
    fn pauli_kraus_complete_for_random_p() {
        // constructor would reject an incomplete set
        let ch = PauliChannel::new([0.37, 0.22, 0.31, 0.10]).unwrap();
        assert_eq!(ch.to_kraus().kraus().len(), 4);
    }

    #[test]
    fn pauli_rejects_bad_vectors() {
        assert!(PauliChannel::new([0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(PauliChannel::new([1.1, -0.1, 0.0, 0.0]).is_err());
    }

    #[test]
    fn depol_to_kraus_cases() {
        let id = DepolChannel::new(2, 0.0).unwrap().to_kraus();
        assert_eq!(id.kraus().len(), 1);
        let full = DepolChannel::new(2, 1.0).unwrap().to_kraus();
        assert_eq!(full.kraus().len(), 4);
        for k in full.kraus() {
            // each operator has entries of magnitude 1/2
            let nonzero: Vec<f64> = k
                .data()
                .iter()
                .filter(|z| z.norm() > 0.0)
                .map(|z| z.norm())
                .collect();
            assert!(nonzero.iter().all(|&v| (v - 0.5).abs() < 1e-15));
        }
        // completeness at d=3 checked by the constructor
        DepolChannel::new(3, 0.4).unwrap().to_kraus();
    }

    #[test]
    fn depol_matches_direct_formula() {
        let rho = CMatrix::from_data(
            2,
            2,
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        )
        .unwrap();
        for &(d, p) in &[(2usize, 0.35), (3usize, 0.8)] {
            let rho_d = if d == 2 {
                rho.clone()
            } else {
                // embed a valid qutrit state
                let mut m = CMatrix::zeros(3, 3);
                m.set(0, 0, c(0.5, 0.0));
                m.set(1, 1, c(0.3, 0.0));
                m.set(2, 2, c(0.2, 0.0));
                m.set(0, 1, c(0.1, 0.15));
                m.set(1, 0, c(0.1, -0.15));
                m
            };
            let out = DepolChannel::new(d, p).unwrap().to_kraus().apply(&rho_d).unwrap();
            let expect = rho_d
                .scale(c(1.0 - p, 0.0))
                .add(&CMatrix::identity(d).scale(c(p / d as f64, 0.0)))
                .unwrap();
            assert!(out.max_abs_diff(&expect).unwrap() < 1e-12);
        }
    }

    #[test]
    fn apply_channel_cases() {
        let rho = CMatrix::from_data(
            2,
            2,
            vec![c(0.6, 0.0), c(0.2, -0.1), c(0.2, 0.1), c(0.4, 0.0)],
        )
        .unwrap();
        let id = KrausChannel::identity(2);
        assert!(id.apply(&rho).unwrap().max_abs_diff(&rho).unwrap() < 1e-15);

        let cd = PauliChannel::completely_depolarizing().to_kraus();
        let out = cd.apply(&rho).unwrap();
        let half = CMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(out.max_abs_diff(&half).unwrap() < 1e-15);

        let flip = PauliChannel::new([0.7, 0.3, 0.0, 0.0]).unwrap().to_kraus();
        let out = flip.apply(&basis_state(0)).unwrap();
        assert!((out.get(0, 0) - c(0.7, 0.)).norm() < 1e-15);
        assert!((out.get(1, 1) - c(0.3, 0.)).norm() < 1e-15);
    }

    #[test]
    fn choi_cases() {
        let id = KrausChannel::identity(2).choi();
        // |Omega><Omega| has ones at the four corners of the (0,0),(1,1) block
        for (i, j) in [(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            assert_eq!(id.get(i, j), Complex::ONE);
        }
        let eigs = id.hermitian_eigenvalues().unwrap();
        assert!(eigs[..3].iter().all(|e| e.abs() < 1e-12));
        assert!((eigs[3] - 2.0).abs() < 1e-12);

        let cd = PauliChannel::completely_depolarizing().to_kraus().choi();
        assert!(cd
            .max_abs_diff(&CMatrix::identity(4).scale(c(0.5, 0.0)))
            .unwrap()
            < 1e-15);

        let flip = PauliChannel::new([0.5, 0.5, 0.0, 0.0]).unwrap().to_kraus().choi();
        let rank = flip
            .hermitian_eigenvalues()
            .unwrap()
            .iter()
            .filter(|e| e.abs() > 1e-10)
            .count();
        assert_eq!(rank, 2);
    }

    #[test]
    fn choi_is_cptp() {
        let ch = PauliChannel::new([0.4, 0.3, 0.2, 0.1]).unwrap().to_kraus();
        verify_choi_cptp(&ch.choi(), 2, 2, 1e-9).unwrap();
        let dep = DepolChannel::new(3, 0.6).unwrap().to_kraus();
        verify_choi_cptp(&dep.choi(), 3, 3, 1e-9).unwrap();
    }

    #[test]
    fn choi_of_pauli_is_bell_diagonal() {
        let p = [0.4, 0.3, 0.2, 0.1];
        let j = PauliChannel::new(p).unwrap().to_kraus().choi();
        // Bell vectors (sigma_i tensor I)|Omega>, unnormalized
        let omega = [c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)];
        for (i, &pi) in p.iter().enumerate() {
            let s = pauli_matrix(i);
            let mut v = [Complex::ZERO; 4];
            for b in 0..2 {
                for a in 0..2 {
                    for ap in 0..2 {
                        v[b * 2 + a] += s.get(b, ap) * omega[ap * 2 + a];
                    }
                }
            }
            // J v = 2 p_i v
            for row in 0..4 {
                let mut acc = Complex::ZERO;
                for col in 0..4 {
                    acc += j.get(row, col) * v[col];
                }
                assert!((acc - v[row] * c(2.0 * pi, 0.0)).norm() < 1e-12);
            }
        }
        let eigs = j.hermitian_eigenvalues().unwrap();
        let mut expected: Vec<f64> = p.iter().map(|x| 2.0 * x).collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, x) in eigs.iter().zip(&expected) {
            assert!((e - x).abs() < 1e-10);
        }
    }

    #[test]
    fn transfer_eigenvalue_cases() {
        assert_eq!(PauliChannel::identity().transfer_eigenvalues(), [1.0, 1.0, 1.0]);
        assert_eq!(
            PauliChannel::completely_depolarizing().transfer_eigenvalues(),
            [0.0, 0.0, 0.0]
        );
        let l = PauliChannel::new([0.7, 0.3, 0.0, 0.0])
            .unwrap()
            .transfer_eigenvalues();
        assert!((l[0] - 1.0).abs() < 1e-15);
        assert!((l[1] - 0.4).abs() < 1e-15);
        assert!((l[2] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn eigs_to_pauli_cases() {
        assert_eq!(
            eigs_to_pauli([1.0, 1.0, 1.0]).unwrap().p(),
            [1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(eigs_to_pauli([0.0, 0.0, 0.0]).unwrap().p(), [0.25; 4]);
        assert!(eigs_to_pauli([1.0, 1.0, -1.0]).is_err());

        let p = [0.37, 0.22, 0.31, 0.10];
        let ch = PauliChannel::new(p).unwrap();
        let rt = eigs_to_pauli(ch.transfer_eigenvalues()).unwrap().p();
        for i in 0..4 {
            assert!((rt[i] - p[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_power_cases() {
        let ch = PauliChannel::new([0.7, 0.3, 0.0, 0.0]).unwrap();
        for (a, b) in ch.power(1).p().iter().zip(&ch.p()) {
            assert!((a - b).abs() < 1e-14);
        }
        let sq = ch.power(2).p();
        assert!((sq[0] - 0.58).abs() < 1e-12);
        assert!((sq[1] - 0.42).abs() < 1e-12);
        assert!(sq[2].abs() < 1e-15 && sq[3].abs() < 1e-15);
    }

    #[test]
    fn pauli_power_matches_composition() {
        let ch = PauliChannel::new([0.45, 0.25, 0.2, 0.1]).unwrap();
        let k = ch.to_kraus();
        let composed = k.compose(&k).unwrap().compose(&k).unwrap();
        let dist = composed
            .choi_distance(&ch.power(3).to_kraus())
            .unwrap();
        assert!(dist < 1e-12);
    }

    #[test]
    fn pauli_power_semigroup() {
        let ch = PauliChannel::new([0.55, 0.15, 0.2, 0.1]).unwrap();
        let a = ch.power(5).p();
        let b = ch.power(2).power(3).p(); // wrong split would not matter, (l^2)^3 = l^6
        let direct = ch.power(6).p();
        for i in 0..4 {
            assert!((b[i] - direct[i]).abs() < 1e-12);
        }
        let _ = a;
    }

    #[test]
    fn compose_cases() {
        let id = KrausChannel::identity(2);
        assert!(id.compose(&id).unwrap().choi_distance(&id).unwrap() < 1e-15);

        let flip = PauliChannel::new([0.7, 0.3, 0.0, 0.0]).unwrap();
        let twice = flip.to_kraus().compose(&flip.to_kraus()).unwrap();
        assert_eq!(twice.kraus().len(), 4);
        assert!(twice.choi_distance(&flip.power(2).to_kraus()).unwrap() < 1e-12);
    }

    #[test]
    fn channel_spec_round_trip() {
        let spec = ChannelSpec::from_json(r#"{"kind":"pauli","p":[0.25,0.25,0.25,0.25]}"#).unwrap();
        let ch = spec.to_kraus().unwrap();
        assert_eq!(ch.kraus().len(), 4);

        let spec = ChannelSpec::from_json(r#"{"kind":"depolarizing","d":3,"p":0.5}"#).unwrap();
        assert_eq!(spec.to_kraus().unwrap().dim_in(), 3);

        let s = 0.5_f64.sqrt();
        let json = format!(
            r#"{{"kind":"kraus","dim_in":2,"dim_out":2,"matrices":[[[{s},0],[0,0],[0,0],[{s},0]],[[0,0],[{s},0],[{s},0],[0,0]]]}}"#
        );
        let ch = ChannelSpec::from_json(&json).unwrap().to_kraus().unwrap();
        assert_eq!(ch.kraus().len(), 2);

        assert!(ChannelSpec::from_json(r#"{"kind":"pauli","p":[1.0,0.5,0,0]}"#)
            .unwrap()
            .to_kraus()
            .is_err());
        assert!(ChannelSpec::from_json("not json").is_err());
    }

    #[test]
    fn heisenberg_weyl_is_unitary_basis() {
        let d = 3;
        for a in 0..d {
            for b in 0..d {
                let u = heisenberg_weyl(d, a, b);
                let prod = u.dagger().mat_mul(&u).unwrap();
                assert!(prod.max_abs_diff(&CMatrix::identity(d)).unwrap() < 1e-14);
            }
        }
        // orthogonality under the Hilbert-Schmidt inner product
        let u = heisenberg_weyl(d, 1, 2);
        let v = heisenberg_weyl(d, 1, 1);
        let ip = u.dagger().mat_mul(&v).unwrap().trace().unwrap();
        assert!(ip.norm() < 1e-14);
    }
}
