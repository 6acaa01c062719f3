//! The Pauli and Gell-Mann Hermitian basis matrices.
//!
//! These are the traceless Hermitian generators used both as observable
//! sets and as the expansion basis of the Bloch state parameterizations.
//! The su(3) generators follow the standard convention: tr(l_m l_n) =
//! 2 delta_mn and [l_m, l_n] = 2i f^{mns} l_s with f^{123} = 1,
//! f^{147} = f^{165} = f^{246} = f^{345} = f^{376} = 1/2,
//! f^{458} = f^{678} = sqrt(3)/2.

use crate::linalg::ComplexMatrix;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m2(rows: [[Complex64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::new(2, rows.into_iter().flatten().collect()).expect("static 2x2")
}

fn m3(rows: [[Complex64; 3]; 3]) -> ComplexMatrix {
    ComplexMatrix::new(3, rows.into_iter().flatten().collect()).expect("static 3x3")
}

/// The three Pauli matrices (sigma_x, sigma_y, sigma_z).
pub fn pauli() -> [ComplexMatrix; 3] {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    [
        m2([[o, one], [one, o]]),
        m2([[o, c(0.0, -1.0)], [c(0.0, 1.0), o]]),
        m2([[one, o], [o, c(-1.0, 0.0)]]),
    ]
}

/// The eight standard Gell-Mann matrices (lambda_1 .. lambda_8).
pub fn gellmann() -> [ComplexMatrix; 8] {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let mi = c(0.0, -1.0);
    let s3 = 1.0 / 3.0f64.sqrt();
    [
        m3([[o, one, o], [one, o, o], [o, o, o]]),
        m3([[o, mi, o], [i, o, o], [o, o, o]]),
        m3([[one, o, o], [o, c(-1.0, 0.0), o], [o, o, o]]),
        m3([[o, o, one], [o, o, o], [one, o, o]]),
        m3([[o, o, mi], [o, o, o], [i, o, o]]),
        m3([[o, o, o], [o, o, one], [o, one, o]]),
        m3([[o, o, o], [o, o, mi], [o, i, o]]),
        m3([
            [c(s3, 0.0), o, o],
            [o, c(s3, 0.0), o],
            [o, o, c(-2.0 * s3, 0.0)],
        ]),
    ]
}
