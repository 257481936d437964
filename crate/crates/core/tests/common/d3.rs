//! Dihedral group D₃ fixtures shared by the golden and acceptance suites.

use std::f64::consts::PI;

use groupconv::linalg::{CMatrix, ONE, ZERO};
use groupconv::signal::GroupSignal;
use num_complex::Complex64;

pub fn omega(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0)
}

pub fn worked_signal() -> GroupSignal {
    GroupSignal::new(vec![ONE, omega(1), omega(2), ZERO, ZERO, ZERO])
}

// Element order 1, r, r², s, rs, r²s.
pub const CAYLEY: [[usize; 6]; 6] = [
    [0, 1, 2, 3, 4, 5],
    [1, 2, 0, 4, 5, 3],
    [2, 0, 1, 5, 3, 4],
    [3, 5, 4, 0, 2, 1],
    [4, 3, 5, 1, 0, 2],
    [5, 4, 3, 2, 1, 0],
];

pub const LEFT: [[[u8; 6]; 6]; 6] = [
    [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]],
    [[0, 0, 1, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]],
    [[0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0]],
    [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, 0], [1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 1, 0, 0, 0, 0]],
    [[0, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]],
    [[0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 0], [0, 0, 1, 0, 0, 0], [0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]],
];

pub const RIGHT: [[[u8; 6]; 6]; 6] = [
    [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]],
    [[0, 0, 1, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0]],
    [[0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]],
    [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]],
    [[0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0], [0, 0, 1, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]],
    [[0, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [1, 0, 0, 0, 0, 0]],
];

pub fn expected_fourier_matrix() -> CMatrix {
    let a = Complex64::new(1.0 / 6f64.sqrt(), 0.0);
    let b = 1.0 / 3f64.sqrt();
    let rows: [[Complex64; 6]; 6] = [
        [a, a, a, a, a, a],
        [a, a, a, -a, -a, -a],
        [omega(0) * b, omega(1) * b, omega(2) * b, ZERO, ZERO, ZERO],
        [ZERO, ZERO, ZERO, omega(0) * b, omega(1) * b, omega(2) * b],
        [ZERO, ZERO, ZERO, omega(0) * b, omega(-1) * b, omega(-2) * b],
        [omega(0) * b, omega(-1) * b, omega(-2) * b, ZERO, ZERO, ZERO],
    ];
    CMatrix::from_fn(6, 6, |i, j| rows[i][j])
}
