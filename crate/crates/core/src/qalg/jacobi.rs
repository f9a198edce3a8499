//! Cyclic Jacobi eigensolver for 4×4 Hermitian matrices.

use super::operator::{Operator4, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_TOL: f64 = 1e-14;

fn off_norm(a: &[[C64; 4]; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
///
/// Rejects input whose entry-wise asymmetry exceeds 1e-10. The input is
/// symmetrized before rotating.
pub fn eigenvalues_hermitian4(m: &Operator4) -> Result<[f64; 4]> {
    let asym = m.hermitian_defect();
    if asym > 1e-10 {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let mut a = [[C64::new(0.0, 0.0); 4]; 4];
    let mut scale: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = 0.5 * (m.0[i][j] + m.0[j][i].conj());
            scale = scale.max(a[i][j].norm());
        }
    }
    let tol = OFF_TOL * scale.max(1.0);

    let mut sweeps = 0;
    while off_norm(&a) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..3 {
            for q in p + 1..4 {
                rotate(&mut a, p, q);
            }
        }
    }

    let mut ev = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

// Zeroes a[p][q] with the unitary U = diag(1, e^{-iφ}) · R(θ) acting on (p, q).
fn rotate(a: &mut [[C64; 4]; 4], p: usize, q: usize) {
    let apq = a[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph = phase.conj();

    for row in a.iter_mut() {
        let akp = row[p];
        let akq = row[q];
        row[p] = akp * c - akq * ph * s;
        row[q] = akp * s + akq * ph * c;
    }
    for k in 0..4 {
        let apk = a[p][k];
        let aqk = a[q][k];
        a[p][k] = apk * c - aqk * ph.conj() * s;
        a[q][k] = apk * s + aqk * ph.conj() * c;
    }
    a[p][q] = C64::new(0.0, 0.0);
    a[q][p] = C64::new(0.0, 0.0);
    a[p][p] = C64::new(a[p][p].re, 0.0);
    a[q][q] = C64::new(a[q][q].re, 0.0);
}

/// Sum of absolute eigenvalues of a Hermitian 4×4 matrix.
pub fn trace_norm_4(m: &Operator4) -> Result<f64> {
    Ok(eigenvalues_hermitian4(m)?.iter().map(|v| v.abs()).sum())
}
