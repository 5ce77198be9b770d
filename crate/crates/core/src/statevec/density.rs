//! Dense density operators with entropy and distance helpers.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;

/// A trace-one positive semidefinite Hermitian matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity, unit trace, and
    /// positive semidefiniteness.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self { entries };
        rho.validate()?;
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.entries;
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidProjector(
                "density matrix must be square".into(),
            ));
        }
        let herm_dev = (m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm_dev > HERMITIAN_TOL {
            return Err(Error::Inconsistent(format!(
                "density not Hermitian, deviation {herm_dev:.3e}"
            )));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::Inconsistent(format!("density trace {trace} != 1")));
        }
        let min_eig = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < PSD_TOL {
            return Err(Error::Inconsistent(format!(
                "density has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Real eigenvalues of the Hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.entries.clone());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// Von Neumann entropy in bits: -Σ λ log2 λ with 0 log 0 := 0.
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > 1e-15)
            .map(|l| -l * l.log2())
            .sum()
    }

    /// Frobenius norm of the difference.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        (&self.entries - &other.entries).norm()
    }
}
