//! Statevector simulation of the multi-angle QAOA circuit for Max-Cut.
//!
//! Basis index `x` encodes vertex `v`'s side in bit `v`. The cost clause of
//! edge `uv` is the cut indicator `½(I − Z_u Z_v)`, so the cost layer is a
//! diagonal phase `exp(−i Σ_{uv cut by x} γ_uv)` on each amplitude. The
//! mixer applies `exp(−i β_v X)` to each qubit; the `X_v` commute, so the
//! per-qubit product is exact.

use num_complex::Complex64;
use thiserror::Error;

use crate::graphs::Graph;
use crate::tying::{LayerAngles, ParameterTying, TyingError};

pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{n} qubits exceeds the simulator limit of {limit}")]
    TooManyQubits { n: usize, limit: usize },
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error(transparent)]
    Tying(#[from] TyingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        check_qubits(n)?;
        if amps.len() != 1 << n {
            return Err(SimError::LengthMismatch { what: "amplitudes", expected: 1 << n, got: amps.len() });
        }
        Ok(Statevector { n, amps })
    }

    /// Computational basis state `|x⟩`.
    pub fn basis(n: usize, x: usize) -> Result<Self, SimError> {
        check_qubits(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn check_qubits(n: usize) -> Result<(), SimError> {
    if n > MAX_QUBITS {
        Err(SimError::TooManyQubits { n, limit: MAX_QUBITS })
    } else {
        Ok(())
    }
}

/// `cut[x]` = number of edges cut by assignment `x`; the diagonal of `H_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutTable {
    cut: Vec<u32>,
}

impl CutTable {
    pub fn new(g: &Graph) -> Result<Self, SimError> {
        check_qubits(g.n())?;
        let cut = (0..1u64 << g.n()).map(|x| g.cut_value(x) as u32).collect();
        Ok(CutTable { cut })
    }

    pub fn values(&self) -> &[u32] {
        &self.cut
    }

    pub fn len(&self) -> usize {
        self.cut.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cut.is_empty()
    }
}

/// Uniform superposition `|+⟩^n`, the +1 eigenvector of `Σ X_v`.
pub fn initial_state(n: usize) -> Result<Statevector, SimError> {
    check_qubits(n)?;
    let dim = 1usize << n;
    let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    Ok(Statevector { n, amps: vec![a; dim] })
}

pub fn apply_cost_layer(s: &mut Statevector, g: &Graph, gamma: &[f64]) -> Result<(), SimError> {
    if g.n() != s.n {
        return Err(SimError::LengthMismatch { what: "graph vertices", expected: s.n, got: g.n() });
    }
    if gamma.len() != g.num_edges() {
        return Err(SimError::LengthMismatch { what: "gamma", expected: g.num_edges(), got: gamma.len() });
    }
    CostKernel::new(s.n, g.edges()).apply(&mut s.amps, gamma);
    Ok(())
}

pub fn apply_mixer_layer(s: &mut Statevector, beta: &[f64]) -> Result<(), SimError> {
    if beta.len() != s.n {
        return Err(SimError::LengthMismatch { what: "beta", expected: s.n, got: beta.len() });
    }
    mixer_layer(&mut s.amps, beta);
    Ok(())
}

pub fn expectation(s: &Statevector, cuts: &CutTable) -> Result<f64, SimError> {
    if cuts.len() != s.amps.len() {
        return Err(SimError::LengthMismatch { what: "cut table", expected: s.amps.len(), got: cuts.len() });
    }
    Ok(expect_cut(&s.amps, &cuts.cut))
}

/// Scratch space for the cost layer.
///
/// The phase factor `w(x) = Π_{uv cut by x} e^{−iγ_uv}` is built without
/// trigonometry per amplitude: with `v` the highest set bit of `x` and
/// `y = x − 2^v`, moving `v` across the cut toggles exactly its incident
/// edges, so `w(x) = w(y) · Π_{w∈N(v)} z_vw · Π_{w∈N(v)∩y} z̄_vw²`.
/// Only `x < 2^(n−1)` is tabulated since `w(x) = w(!x)`.
#[derive(Debug, Clone)]
struct CostKernel {
    n: usize,
    edges: Vec<(usize, usize)>,
    w: Vec<Complex64>,
    g: Vec<Complex64>,
    toggle: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl CostKernel {
    fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let half = if n == 0 { 1 } else { 1usize << (n - 1) };
        let one = Complex64::new(1.0, 0.0);
        CostKernel {
            n,
            edges: edges.to_vec(),
            w: vec![one; half],
            g: vec![one; half.div_ceil(2)],
            toggle: vec![one; n * n],
            full: vec![one; n],
        }
    }

    fn apply(&mut self, amps: &mut [Complex64], gamma: &[f64]) {
        let n = self.n;
        if n == 0 {
            return;
        }
        let one = Complex64::new(1.0, 0.0);
        self.toggle.fill(one);
        self.full.fill(one);
        for (&(u, v), &gm) in self.edges.iter().zip(gamma) {
            let (sin, cos) = gm.sin_cos();
            let z = Complex64::new(cos, -sin);
            let zc2 = z.conj() * z.conj();
            self.toggle[u * n + v] = zc2;
            self.toggle[v * n + u] = zc2;
            self.full[u] *= z;
            self.full[v] *= z;
        }
        self.w[0] = one;
        for v in 0..n - 1 {
            let lo = 1usize << v;
            let row = &self.toggle[v * n..v * n + n];
            self.g[0] = self.full[v];
            for y in 1..lo {
                self.g[y] = self.g[y & (y - 1)] * row[y.trailing_zeros() as usize];
            }
            for y in 0..lo {
                self.w[lo + y] = self.w[y] * self.g[y];
            }
        }
        let mask = amps.len() - 1;
        for (x, &w) in self.w.iter().enumerate() {
            amps[x] *= w;
            amps[x ^ mask] *= w;
        }
    }
}

fn mixer_layer(amps: &mut [Complex64], beta: &[f64]) {
    for (q, &b) in beta.iter().enumerate() {
        let (s, c) = b.sin_cos();
        let stride = 1usize << q;
        for block in amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                // [[c, -is], [-is, c]]
                let (ar, ai, br, bi) = (a.re, a.im, b.re, b.im);
                *a = Complex64::new(c * ar + s * bi, c * ai - s * br);
                *b = Complex64::new(s * ai + c * br, c * bi - s * ar);
            }
        }
    }
}

fn expect_cut(amps: &[Complex64], cut: &[u32]) -> f64 {
    amps.iter().zip(cut).map(|(a, &c)| a.norm_sqr() * c as f64).sum()
}

/// Full circuit: `|+⟩^n`, then per layer the cost layer followed by the
/// mixer, using `t` to expand `compact`. Returns the state and `⟨H_c⟩`.
pub fn run_circuit(g: &Graph, t: &ParameterTying, compact: &[f64], p: usize) -> Result<(Statevector, f64), SimError> {
    t.check_shape(g)?;
    let layers = t.expand(compact, p)?;
    let mut s = initial_state(g.n())?;
    for layer in &layers {
        apply_cost_layer(&mut s, g, &layer.gamma)?;
        apply_mixer_layer(&mut s, &layer.beta)?;
    }
    let e = expectation(&s, &CutTable::new(g)?)?;
    Ok((s, e))
}

/// Reusable buffers for evaluating one (graph, tying, p) objective many
/// times. Produces exactly the same floating-point result as `run_circuit`.
#[derive(Debug, Clone)]
pub struct CircuitEvaluator {
    kernel: CostKernel,
    cut: Vec<u32>,
    tying: ParameterTying,
    layers: Vec<LayerAngles>,
    amps: Vec<Complex64>,
    initial: Complex64,
    evaluations: usize,
}

impl CircuitEvaluator {
    pub fn new(g: &Graph, tying: ParameterTying, p: usize) -> Result<Self, SimError> {
        tying.check_shape(g)?;
        let cuts = CutTable::new(g)?;
        let dim = 1usize << g.n();
        let layers = vec![LayerAngles { gamma: vec![0.0; g.num_edges()], beta: vec![0.0; g.n()] }; p];
        Ok(CircuitEvaluator {
            kernel: CostKernel::new(g.n(), g.edges()),
            cut: cuts.cut,
            tying,
            layers,
            amps: vec![Complex64::new(0.0, 0.0); dim],
            initial: Complex64::new((dim as f64).sqrt().recip(), 0.0),
            evaluations: 0,
        })
    }

    pub fn tying(&self) -> &ParameterTying {
        &self.tying
    }

    pub fn layers(&self) -> usize {
        self.layers.len()
    }

    pub fn dim(&self) -> usize {
        self.tying.num_params(self.layers.len())
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn evaluate(&mut self, compact: &[f64]) -> Result<f64, SimError> {
        self.tying.expand_into(compact, &mut self.layers)?;
        self.amps.fill(self.initial);
        for layer in &self.layers {
            self.kernel.apply(&mut self.amps, &layer.gamma);
            mixer_layer(&mut self.amps, &layer.beta);
        }
        self.evaluations += 1;
        Ok(expect_cut(&self.amps, &self.cut))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete, cycle, star};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn initial_states() {
        let s = initial_state(1).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, Complex64::new(FRAC_1_SQRT_2, 0.0))));
        let s = initial_state(2).unwrap();
        assert!(s.amplitudes().iter().all(|a| close(*a, Complex64::new(0.5, 0.0))));
        assert!((initial_state(8).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
        assert!(matches!(initial_state(25), Err(SimError::TooManyQubits { .. })));
    }

    #[test]
    fn cost_layer_phases() {
        let k2 = complete(2).unwrap();
        let mut s = initial_state(2).unwrap();
        let before = s.clone();
        apply_cost_layer(&mut s, &k2, &[0.0]).unwrap();
        assert_eq!(s, before);

        // |01⟩ is cut: picks up exp(−iπ) = −1; |00⟩ is not
        let mut s = Statevector::basis(2, 0b01).unwrap();
        apply_cost_layer(&mut s, &k2, &[PI]).unwrap();
        assert!(close(s.amplitudes()[1], Complex64::new(-1.0, 0.0)));
        let mut s = Statevector::basis(2, 0b00).unwrap();
        apply_cost_layer(&mut s, &k2, &[PI]).unwrap();
        assert!(close(s.amplitudes()[0], Complex64::new(1.0, 0.0)));

        assert!(matches!(apply_cost_layer(&mut s, &k2, &[1.0, 2.0]), Err(SimError::LengthMismatch { .. })));
    }

    #[test]
    fn mixer_examples() {
        let mut s = initial_state(3).unwrap();
        let before = s.clone();
        apply_mixer_layer(&mut s, &[0.0; 3]).unwrap();
        assert_eq!(s, before);

        let mut s = Statevector::basis(1, 0).unwrap();
        apply_mixer_layer(&mut s, &[PI / 2.0]).unwrap();
        assert!(close(s.amplitudes()[0], Complex64::new(0.0, 0.0)));
        assert!(close(s.amplitudes()[1], Complex64::new(0.0, -1.0)));
        assert!(apply_mixer_layer(&mut s, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn expectation_examples() {
        let g = cycle(5).unwrap();
        let cuts = CutTable::new(&g).unwrap();
        let e = expectation(&initial_state(5).unwrap(), &cuts).unwrap();
        assert!((e - 2.5).abs() < 1e-12);
        for x in [0usize, 3, 0b10101, 31] {
            let e = expectation(&Statevector::basis(5, x).unwrap(), &cuts).unwrap();
            assert_eq!(e, cuts.values()[x] as f64);
        }
        assert!(expectation(&initial_state(4).unwrap(), &cuts).is_err());
    }

    #[test]
    fn cut_table_invariants() {
        let g = star(5).unwrap();
        let cuts = CutTable::new(&g).unwrap();
        let full = cuts.len() - 1;
        for (x, &c) in cuts.values().iter().enumerate() {
            assert!(c as usize <= g.num_edges());
            assert_eq!(c, cuts.values()[x ^ full]);
        }
    }

    #[test]
    fn k2_single_layer_optimum() {
        let k2 = complete(2).unwrap();
        let t = ParameterTying::plain_qaoa(&k2);
        let (_, e) = run_circuit(&k2, &t, &[PI / 2.0, PI / 8.0], 1).unwrap();
        assert!((e - 1.0).abs() < 1e-9);
        // matches ½ + ½ sin(4β) sin(γ) elsewhere too
        for (g, b) in [(0.3, 0.2), (1.1, 2.9), (4.0, 0.7)] {
            let (_, e) = run_circuit(&k2, &t, &[g, b], 1).unwrap();
            let analytic = 0.5 + 0.5 * (4.0 * b).sin() * f64::sin(g);
            assert!((e - analytic).abs() < 1e-12, "{e} vs {analytic}");
        }
    }

    #[test]
    fn zero_angles_give_half_edges() {
        let g = complete(5).unwrap();
        let t = ParameterTying::ma(&g);
        for p in 1..=3 {
            let (_, e) = run_circuit(&g, &t, &vec![0.0; t.num_params(p)], p).unwrap();
            assert!((e - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluator_matches_run_circuit_bitwise() {
        let g = cycle(6).unwrap();
        let t = ParameterTying::ma(&g);
        let mut ev = CircuitEvaluator::new(&g, t.clone(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let c: Vec<f64> = (0..ev.dim()).map(|_| rng.random_range(0.0..PI)).collect();
            let (s, e) = run_circuit(&g, &t, &c, 2).unwrap();
            assert_eq!(ev.evaluate(&c).unwrap().to_bits(), e.to_bits());
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
        assert_eq!(ev.evaluations(), 5);
        assert!(ev.evaluate(&[0.0]).is_err());
    }

    #[test]
    fn plain_and_replicated_ma_agree() {
        let g = star(5).unwrap();
        let q = ParameterTying::plain_qaoa(&g);
        let ma = ParameterTying::ma(&g);
        let c = [0.7, 0.4, 1.3, 2.2];
        let lifted = ma.lift_from(&q, &c, 2).unwrap();
        let (_, a) = run_circuit(&g, &q, &c, 2).unwrap();
        let (_, b) = run_circuit(&g, &ma, &lifted, 2).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
