//! 2×2 density matrices of the atom in the basis {|e⟩, |g⟩}.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Density2 {
    pub m: [[C64; 2]; 2],
}

impl Density2 {
    pub fn new(m: [[C64; 2]; 2]) -> Self {
        Density2 { m }
    }

    /// ρ = [[ρ_ee, ρ_eg], [conj ρ_eg, 1 − ρ_ee]].
    pub fn from_parts(excited: f64, coherence: C64, ground: f64) -> Self {
        Density2 {
            m: [
                [C64::new(excited, 0.0), coherence],
                [coherence.conj(), C64::new(ground, 0.0)],
            ],
        }
    }

    pub fn excited() -> Self {
        Self::from_parts(1.0, C64::new(0.0, 0.0), 0.0)
    }

    pub fn ground() -> Self {
        Self::from_parts(0.0, C64::new(0.0, 0.0), 1.0)
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let d01 = (self.m[0][1] - self.m[1][0].conj()).norm();
        d01.max(self.m[0][0].im.abs()).max(self.m[1][1].im.abs())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = 0.5 * (self.m[0][1] + self.m[1][0].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - radius, mean + radius]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Checks Hermiticity, unit trace and positivity to `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > tol {
            return Err(Error::InvalidState(format!("not Hermitian (defect {h:e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let lo = self.min_eigenvalue();
        if lo < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:e}")));
        }
        Ok(())
    }

    pub fn sub(&self, other: &Density2) -> [[C64; 2]; 2] {
        let mut out = self.m;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v -= other.m[i][j];
            }
        }
        out
    }
}

/// Sum of singular values of a 2×2 complex matrix.
pub fn trace_norm(m: &[[C64; 2]; 2]) -> f64 {
    // σ₁ + σ₂ = sqrt(‖M‖_F² + 2|det M|)
    let frob: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (frob + 2.0 * det.norm()).max(0.0).sqrt()
}
