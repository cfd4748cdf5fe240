//! Small dense complex matrices at arbitrary precision: just enough linear
//! algebra for twisted-cohomology rank checks (Hermitian Jacobi eigenvalues).

use rug::Float;

use crate::numerics::AppComplex;

/// Dense column-major complex matrix.
#[derive(Clone, Debug)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<AppComplex>,
}

impl CMatrix {
    pub fn zero(rows: usize, cols: usize, prec: u32) -> Self {
        CMatrix { rows, cols, data: vec![AppComplex::zero(prec); rows * cols] }
    }

    pub fn at(&self, r: usize, c: usize) -> &AppComplex {
        &self.data[c * self.rows + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: AppComplex) {
        self.data[c * self.rows + r] = v;
    }

    pub fn prec(&self) -> u32 {
        self.data.first().map(|v| v.precision_bits()).unwrap_or(64)
    }

    /// Conjugate transpose times self: the Gram matrix AᴴA (Hermitian PSD).
    pub fn gram(&self) -> CMatrix {
        let n = self.cols;
        let prec = self.prec();
        let mut g = CMatrix::zero(n, n, prec);
        for i in 0..n {
            for j in 0..n {
                let mut acc = AppComplex::zero(prec);
                for k in 0..self.rows {
                    acc = &acc + &(&self.at(k, i).conj() * self.at(k, j));
                }
                g.set(i, j, acc);
            }
        }
        g
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The complex problem is
    /// embedded as the real symmetric 2n×2n matrix [[Re, −Im],[Im, Re]],
    /// whose spectrum is that of the input with every eigenvalue doubled.
    pub fn hermitian_eigenvalues(&self) -> Vec<Float> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let prec = self.prec();
        let m = 2 * n;
        let mut a = vec![vec![Float::with_val(prec, 0); m]; m];
        for r in 0..n {
            for c in 0..n {
                let re = self.at(r, c).re().clone();
                let im = self.at(r, c).im().clone();
                a[r][c] = re.clone();
                a[n + r][n + c] = re;
                a[r][n + c] = -im.clone();
                a[n + r][c] = im;
            }
        }
        let eig = real_symmetric_eigenvalues(a, prec);
        // Keep every other eigenvalue of the doubled spectrum.
        eig.into_iter().step_by(2).collect()
    }

    /// Singular values (ascending) via eigenvalues of the Gram matrix.
    pub fn singular_values(&self) -> Vec<Float> {
        self.gram_singular_values()
    }

    fn gram_singular_values(&self) -> Vec<Float> {
        self.gram()
            .hermitian_eigenvalues()
            .into_iter()
            .map(|e| {
                let prec = self.prec();
                let clamped = if e < 0 { Float::with_val(prec, 0) } else { e };
                clamped.sqrt()
            })
            .collect()
    }
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix, ascending.
fn real_symmetric_eigenvalues(mut a: Vec<Vec<Float>>, prec: u32) -> Vec<Float> {
    let n = a.len();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 24));
    for _sweep in 0..200 {
        let mut off = Float::with_val(prec, 0);
        for p in 0..n {
            for q in p + 1..n {
                off += a[p][q].clone().square();
            }
        }
        if off < eps.clone().square() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q].clone();
                if apq.clone().abs() < Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 64)) {
                    continue;
                }
                // tan(2φ) = 2 a_pq / (a_pp − a_qq); stable half-angle form.
                let diff = a[q][q].clone() - &a[p][p];
                let tau = diff / (apq.clone() * 2u8);
                let t = {
                    let root = (tau.clone().square() + 1u8).sqrt();
                    if tau >= 0 {
                        Float::with_val(prec, 1) / (tau + root)
                    } else {
                        Float::with_val(prec, -1) / (root - tau)
                    }
                };
                let c = (t.clone().square() + 1u8).sqrt().recip();
                let s = t.clone() * &c;
                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = akp.clone() * &c - akq.clone() * &s;
                    a[k][q] = akp * &s + akq * &c;
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = apk.clone() * &c - aqk.clone() * &s;
                    a[q][k] = apk * &s + aqk * &c;
                }
            }
        }
    }
    let mut eig: Vec<Float> = (0..n).map(|i| a[i][i].clone()).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> AppComplex {
        AppComplex::from_f64(re, im, 192)
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let mut m = CMatrix::zero(3, 3, 192);
        m.set(0, 0, c(3.0, 0.0));
        m.set(1, 1, c(1.0, 0.0));
        m.set(2, 2, c(2.0, 0.0));
        let e = m.hermitian_eigenvalues();
        assert!((e[0].to_f64() - 1.0).abs() < 1e-40);
        assert!((e[1].to_f64() - 2.0).abs() < 1e-40);
        assert!((e[2].to_f64() - 3.0).abs() < 1e-40);
    }

    #[test]
    fn eigenvalues_of_pauli_like() {
        // [[0, i],[−i, 0]] has eigenvalues ±1.
        let mut m = CMatrix::zero(2, 2, 192);
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, -1.0));
        let e = m.hermitian_eigenvalues();
        assert!((e[0].to_f64() + 1.0).abs() < 1e-40);
        assert!((e[1].to_f64() - 1.0).abs() < 1e-40);
    }

    #[test]
    fn singular_values_detect_rank() {
        // Rank-1 2×2 matrix.
        let mut m = CMatrix::zero(2, 2, 192);
        m.set(0, 0, c(1.0, 0.0));
        m.set(0, 1, c(2.0, 0.0));
        m.set(1, 0, c(2.0, 0.0));
        m.set(1, 1, c(4.0, 0.0));
        let sv = m.singular_values();
        assert!(sv[0].to_f64() < 1e-35);
        assert!((sv[1].to_f64() - 5.0).abs() < 1e-30);
    }
}
