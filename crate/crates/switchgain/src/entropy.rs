//! Base-2 entropy functions. Capacities downstream are measured in bits, so
//! every logarithm here is binary.

use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Distribution entries this far below zero are treated as round-off and
/// clamped; anything lower is rejected.
const NEG_CLAMP: f64 = 1e-12;
/// Probability vectors must sum to 1 within this.
const SUM_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn xlog2(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// H(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-NEG_CLAMP..=1.0 + NEG_CLAMP).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x}")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(-xlog2(x) - xlog2(1.0 - x))
}

/// h(lambda) = H((1 + lambda)/2) for lambda in [-1, 1].
pub fn h_lambda(lambda: f64) -> Result<f64> {
    if lambda.abs() > 1.0 + NEG_CLAMP {
        return Err(Error::Domain(format!("transfer eigenvalue {lambda}")));
    }
    binary_entropy((1.0 + lambda.clamp(-1.0, 1.0)) / 2.0)
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    let mut h = 0.0;
    for &q in p {
        if !q.is_finite() || q < -NEG_CLAMP {
            return Err(Error::NotDistribution(format!("entry {q}")));
        }
        let q = q.max(0.0);
        sum += q;
        h -= xlog2(q);
    }
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::NotDistribution(format!("entries sum to {sum}")));
    }
    Ok(h)
}

/// von Neumann entropy of a density matrix, in bits.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    let eigs = rho
        .hermitian_eigenvalues()
        .map_err(|e| Error::InvalidState(e.to_string()))?;
    if let Some(&min) = eigs.first() {
        if min < -SUM_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    let trace: f64 = eigs.iter().sum();
    if (trace - 1.0).abs() > SUM_TOL {
        return Err(Error::InvalidState(format!("trace {trace}")));
    }
    Ok(eigs.iter().map(|&l| -xlog2(l.max(0.0))).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMatrix};

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(binary_entropy(1.2).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn h_lambda_values() {
        assert_eq!(h_lambda(1.0).unwrap(), 0.0);
        assert_eq!(h_lambda(-1.0).unwrap(), 0.0);
        assert_eq!(h_lambda(0.0).unwrap(), 1.0);
        // h(1/3) = H(2/3)
        let v = h_lambda(1.0 / 3.0).unwrap();
        assert!((v - 0.918_295_834_054_489_6).abs() < 1e-12);
        assert!(h_lambda(1.5).is_err());
    }

    #[test]
    fn shannon_entropy_values() {
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[0.25; 4]).unwrap(), 2.0);
        let v = shannon_entropy(&[0.58, 0.42, 0.0, 0.0]).unwrap();
        assert!((v - 0.981_453_895_033_653_7).abs() < 1e-12);
        // round-off below zero is tolerated, real negatives are not
        assert!(shannon_entropy(&[1.0, -0.5e-12]).is_ok());
        assert!(shannon_entropy(&[1.1, -0.1]).is_err());
        assert!(shannon_entropy(&[0.4, 0.4]).is_err());
    }

    #[test]
    fn von_neumann_entropy_values() {
        let mixed = CMatrix::identity(2).scale(c(0.5, 0.0));
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-12);

        let pure = CMatrix::from_data(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);

        assert!(von_neumann_entropy(&CMatrix::identity(2)).is_err());
    }

    #[test]
    fn von_neumann_entropy_additive_on_products() {
        let rho = CMatrix::from_data(
            2,
            2,
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        )
        .unwrap();
        let sigma = CMatrix::from_data(
            2,
            2,
            vec![c(0.6, 0.0), c(0.0, -0.25), c(0.0, 0.25), c(0.4, 0.0)],
        )
        .unwrap();
        let joint = von_neumann_entropy(&rho.kron(&sigma)).unwrap();
        let parts = von_neumann_entropy(&rho).unwrap() + von_neumann_entropy(&sigma).unwrap();
        assert!((joint - parts).abs() < 1e-9);
    }
}
