use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// A 2×2 complex matrix on the qubit space.
///
/// Index 0 is the excited state (σ_z = +1), index 1 the ground state.
/// With this ordering σ⁺ = |0⟩⟨1| raises ground to excited.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Operator2(pub [[C64; 2]; 2]);

impl Operator2 {
    pub const fn new(m: [[C64; 2]; 2]) -> Self {
        Operator2(m)
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Operator2([
            [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
            [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
        ])
    }

    pub const fn zero() -> Self {
        Operator2([[ZERO; 2]; 2])
    }

    pub const fn identity() -> Self {
        Operator2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn sigma_plus() -> Self {
        Operator2([[ZERO, ONE], [ZERO, ZERO]])
    }

    pub const fn sigma_minus() -> Self {
        Operator2([[ZERO, ZERO], [ONE, ZERO]])
    }

    pub const fn sigma_z() -> Self {
        Operator2([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]])
    }

    pub const fn sigma_x() -> Self {
        Operator2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn sigma_y() -> Self {
        Operator2([[ZERO, C64::new(0.0, -1.0)], [I, ZERO]])
    }

    /// Projector on the excited state, also the H polarization projector Π_H.
    pub const fn excited() -> Self {
        Operator2([[ONE, ZERO], [ZERO, ZERO]])
    }

    /// Projector on the ground state, also Π_V.
    pub const fn ground() -> Self {
        Operator2([[ZERO, ZERO], [ZERO, ONE]])
    }

    /// Matrix unit |i⟩⟨j|.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zero();
        m.0[i][j] = ONE;
        m
    }

    /// Density matrix with Bloch vector (x, y, z).
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Self {
        Operator2([
            [C64::new(0.5 * (1.0 + z), 0.0), C64::new(0.5 * x, -0.5 * y)],
            [C64::new(0.5 * x, 0.5 * y), C64::new(0.5 * (1.0 - z), 0.0)],
        ])
    }

    /// Bloch vector of a Hermitian operator, (Tr σ_x ρ, Tr σ_y ρ, Tr σ_z ρ).
    pub fn bloch(&self) -> [f64; 3] {
        let m = &self.0;
        [
            2.0 * m[1][0].re,
            2.0 * m[1][0].im,
            (m[0][0] - m[1][1]).re,
        ]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Operator2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Operator2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn eigenvalues_hermitian(&self) -> Result<[f64; 2]> {
        let asym = self.hermitian_defect();
        if asym > 1e-10 {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = 0.5 * (self.0[0][1] + self.0[1][0].conj());
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        Ok([mean - r, mean + r])
    }

    /// Frobenius inner product Tr[A† B].
    pub fn inner(&self, other: &Self) -> C64 {
        let mut s = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                s += self.0[i][j].conj() * other.0[i][j];
            }
        }
        s
    }

    /// Row-major vectorization.
    pub fn to_vec4(&self) -> [C64; 4] {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }

    pub fn from_vec4(v: [C64; 4]) -> Self {
        Operator2([[v[0], v[1]], [v[2], v[3]]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl fmt::Debug for Operator2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl Add for Operator2 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Operator2 {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Operator2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Operator2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for Operator2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        let mut c = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Operator2(c)
    }
}

impl Mul<C64> for Operator2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for Operator2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<Operator2> for C64 {
    type Output = Operator2;
    fn mul(self, rhs: Operator2) -> Operator2 {
        rhs.scale(self)
    }
}

impl Mul<Operator2> for f64 {
    type Output = Operator2;
    fn mul(self, rhs: Operator2) -> Operator2 {
        rhs.scale(C64::new(self, 0.0))
    }
}

/// A 4×4 complex matrix on the qubit ⊗ ancilla space, index 2a + b.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Operator4(pub [[C64; 4]; 4]);

impl Operator4 {
    pub const fn zero() -> Self {
        Operator4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = C64::new(d[i], 0.0);
        }
        m
    }

    pub fn kron(a: &Operator2, b: &Operator2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }
}

impl fmt::Debug for Operator4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{}, {}, {}, {}]", row[0], row[1], row[2], row[3])?;
        }
        f.write_str("]")
    }
}

impl Add for Operator4 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Sub for Operator4 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Mul for Operator4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                c.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        c
    }
}
