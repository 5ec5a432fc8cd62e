//! Independent check of the amplitude solution: integrate the zero-temperature
//! master equation of the atom–cavity pair in the dressed basis
//! {|φ₀⟩, |φ₁,−⟩, |φ₁,+⟩} and trace out the cavity.
//!
//! The decay rates are carried along as two extra ODE components,
//! dγ_j/dt = 2 Re[C(t) e^{iω_j t}], with the bath correlation function C(t)
//! in closed form. Nothing here touches the frequency quadrature or β_j.

use num_complex::Complex64 as C64;

use crate::dynamics::InitialAtomState;
use crate::error::Result;
use crate::ode::{integrate_dense, Dopri5Options, Dopri5Stats};
use crate::spectral::{ReservoirSpec, SystemSpec, TimeGrid};

pub type Mat3 = [[C64; 3]; 3];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const GROUND: usize = 0;
const LOWER: usize = 1;
const UPPER: usize = 2;

fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn adjoint(a: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

/// |to⟩⟨from|
fn ket_bra(to: usize, from: usize) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    out[to][from] = C64::new(1.0, 0.0);
    out
}

/// Atom–cavity density matrix in the dressed basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedState {
    pub m: Mat3,
}

impl DressedState {
    /// ρ_atom ⊗ |0⟩⟨0|, using |0,g⟩ = |φ₀⟩ and |0,e⟩ = (|φ₁,+⟩ − |φ₁,−⟩)/√2.
    pub fn from_atom(init: &InitialAtomState) -> Self {
        let (e, g) = (excited_vector(), ground_vector());
        let rho = init.density().m;
        let basis = [e, g];
        let mut m = [[ZERO; 3]; 3];
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..3 {
                    for j in 0..3 {
                        m[i][j] += rho[a][b] * basis[a][i] * basis[b][j].conj();
                    }
                }
            }
        }
        DressedState { m }
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Smallest principal minor; ≥ 0 for a positive semidefinite matrix.
    pub fn min_principal_minor(&self) -> f64 {
        let m = &self.m;
        let mut worst = m[0][0].re.min(m[1][1].re).min(m[2][2].re);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            worst = worst.min(m[i][i].re * m[j][j].re - m[i][j].norm_sqr());
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        worst.min(det.re)
    }

    /// ⟨0,e|ϱ|0,e⟩; the one-excitation sector has no |1,e⟩ component.
    pub fn atom_excited(&self) -> f64 {
        expectation(&self.m, &excited_vector(), &excited_vector()).re
    }

    /// ⟨0,e|ϱ|0,g⟩, the atomic coherence ρ₁₀.
    pub fn atom_coherence(&self) -> C64 {
        expectation(&self.m, &excited_vector(), &ground_vector())
    }
}

fn excited_vector() -> [C64; 3] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [ZERO, C64::new(-h, 0.0), C64::new(h, 0.0)]
}

fn ground_vector() -> [C64; 3] {
    [C64::new(1.0, 0.0), ZERO, ZERO]
}

/// ⟨u|M|v⟩
fn expectation(m: &Mat3, u: &[C64; 3], v: &[C64; 3]) -> C64 {
    let mut acc = ZERO;
    for i in 0..3 {
        for j in 0..3 {
            acc += u[i].conj() * m[i][j] * v[j];
        }
    }
    acc
}

fn pack(m: &Mat3, gamma: [f64; 2]) -> [f64; 20] {
    let mut y = [0.0; 20];
    for i in 0..3 {
        for j in 0..3 {
            y[2 * (3 * i + j)] = m[i][j].re;
            y[2 * (3 * i + j) + 1] = m[i][j].im;
        }
    }
    y[18] = gamma[0];
    y[19] = gamma[1];
    y
}

fn unpack(y: &[f64; 20]) -> (Mat3, [f64; 2]) {
    let mut m = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = C64::new(y[2 * (3 * i + j)], y[2 * (3 * i + j) + 1]);
        }
    }
    (m, [y[18], y[19]])
}

/// κ (L ϱ L† − ½{L†L, ϱ}) added into `out`.
fn add_dissipator(out: &mut Mat3, jump: &Mat3, rho: &Mat3, kappa: f64) {
    let jd = adjoint(jump);
    let sandwich = mul(&mul(jump, rho), &jd);
    let number = mul(&jd, jump);
    let left = mul(&number, rho);
    let right = mul(rho, &number);
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += kappa * (sandwich[i][j] - 0.5 * (left[i][j] + right[i][j]));
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleSeries {
    pub grid: TimeGrid,
    pub states: Vec<DressedState>,
    /// Tr_cavity ⟨e|ϱ(t)|e⟩
    pub excited: Vec<f64>,
    pub coherence: Vec<C64>,
    /// γ(ω₁, t), γ(ω₂, t) from the time-domain route.
    pub gamma: Vec<[f64; 2]>,
    pub stats: Dopri5Stats,
}

pub fn dressed_ode_oracle(
    sys: &SystemSpec,
    r: &ReservoirSpec,
    grid: &TimeGrid,
    init: &InitialAtomState,
) -> Result<OracleSeries> {
    dressed_ode_oracle_with(sys, r, grid, init, &Dopri5Options::default())
}

pub fn dressed_ode_oracle_with(
    sys: &SystemSpec,
    r: &ReservoirSpec,
    grid: &TimeGrid,
    init: &InitialAtomState,
    opts: &Dopri5Options,
) -> Result<OracleSeries> {
    let energies = [
        sys.ground_energy(),
        sys.lower_dressed_energy(),
        sys.upper_dressed_energy(),
    ];
    let omegas = [sys.omega1(), sys.omega2()];
    let jumps = [ket_bra(GROUND, LOWER), ket_bra(GROUND, UPPER)];
    let r = *r;

    let rhs = |t: f64, y: &[f64; 20], dy: &mut [f64; 20]| {
        let (rho, gamma) = unpack(y);
        let mut d = [[ZERO; 3]; 3];
        // −i[H, ϱ] with H diagonal in this basis
        for i in 0..3 {
            for j in 0..3 {
                d[i][j] = C64::new(0.0, -(energies[i] - energies[j])) * rho[i][j];
            }
        }
        for (jump, g) in jumps.iter().zip(gamma) {
            add_dissipator(&mut d, jump, &rho, 0.5 * g);
        }
        let c = r.correlation(t);
        let mut rates = [0.0; 2];
        for (rate, w) in rates.iter_mut().zip(omegas) {
            *rate = 2.0 * (c * C64::from_polar(1.0, w * t)).re;
        }
        *dy = pack(&d, rates);
    };

    let y0 = pack(&DressedState::from_atom(init).m, [0.0, 0.0]);
    let times: Vec<f64> = grid.times().collect();
    let (ys, stats) = integrate_dense(rhs, y0, &times, opts)?;

    let mut states = Vec::with_capacity(ys.len());
    let mut gamma = Vec::with_capacity(ys.len());
    for y in &ys {
        let (m, g) = unpack(y);
        states.push(DressedState { m });
        gamma.push(g);
    }
    Ok(OracleSeries {
        grid: *grid,
        excited: states.iter().map(DressedState::atom_excited).collect(),
        coherence: states.iter().map(DressedState::atom_coherence).collect(),
        states,
        gamma,
        stats,
    })
}
