use super::operator::{C64, ONE, ZERO};

pub type Mat4 = [[C64; 4]; 4];

pub fn mat4_identity() -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn mat4_apply(a: &Mat4, v: &[C64; 4]) -> [C64; 4] {
    let mut out = [ZERO; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn mat4_max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
///
/// Returns `None` when a pivot falls below `1e-14` times the largest entry.
pub fn mat4_inverse(a: &Mat4) -> Option<Mat4> {
    let mut m = *a;
    let mut inv = mat4_identity();
    let scale = a
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        if m[piv][col].norm() < 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = ONE / m[col][col];
        for j in 0..4 {
            m[col][j] *= d;
            inv[col][j] *= d;
        }
        for r in 0..4 {
            if r != col {
                let f = m[r][col];
                if f != ZERO {
                    for j in 0..4 {
                        m[r][j] -= f * m[col][j];
                        inv[r][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let mut a = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] = C64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, (i as f64 - j as f64) * 0.3);
            }
        }
        let inv = mat4_inverse(&a).expect("invertible");
        assert!(mat4_max_abs_diff(&mat4_mul(&a, &inv), &mat4_identity()) < 1e-13);
    }

    #[test]
    fn singular_detected() {
        let mut a = mat4_identity();
        a[3] = a[2];
        assert!(mat4_inverse(&a).is_none());
    }
}
