//! Dense-matrix reference simulator used only by tests.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector};

type C = Complex<f64>;

fn pauli(which: char) -> DMatrix<C> {
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    match which {
        'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!(),
    }
}

/// Tensor product with qubit 0 as the least significant index bit.
fn on_qubits(n: usize, ops: &[(usize, char)]) -> DMatrix<C> {
    let mut m = DMatrix::from_element(1, 1, C::new(1.0, 0.0));
    for q in (0..n).rev() {
        let p = ops.iter().find(|(k, _)| *k == q).map_or('I', |(_, c)| *c);
        m = m.kronecker(&pauli(p));
    }
    m
}

/// `½(I − Z_u Z_v)` for one edge.
pub fn clause(n: usize, u: usize, v: usize) -> DMatrix<C> {
    let id = on_qubits(n, &[]);
    (id - on_qubits(n, &[(u, 'Z'), (v, 'Z')])) * C::new(0.5, 0.0)
}

/// Expectation of `Σ C_e` after the layered circuit, every unitary formed
/// as a dense matrix exponential.
pub fn dense_expectation(n: usize, edges: &[(usize, usize)], layers: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    let dim = 1 << n;
    let mut psi = DVector::from_element(dim, C::new((dim as f64).sqrt().recip(), 0.0));
    let minus_i = C::new(0.0, -1.0);
    let mut hc = DMatrix::zeros(dim, dim);
    for &(u, v) in edges {
        hc += clause(n, u, v);
    }
    for (gamma, beta) in layers {
        let mut cost = DMatrix::zeros(dim, dim);
        for (&(u, v), &g) in edges.iter().zip(gamma) {
            cost += clause(n, u, v) * C::new(g, 0.0);
        }
        let mut mix = DMatrix::zeros(dim, dim);
        for (q, &b) in beta.iter().enumerate() {
            mix += on_qubits(n, &[(q, 'X')]) * C::new(b, 0.0);
        }
        psi = (cost * minus_i).exp() * psi;
        psi = (mix * minus_i).exp() * psi;
    }
    (psi.adjoint() * &hc * &psi)[(0, 0)].re
}
