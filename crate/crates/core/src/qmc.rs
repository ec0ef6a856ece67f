//! Quantum MaxCut `1/2 (1 - XX - YY - ZZ)` under the four-driver Hamiltonian ansatz.
//!
//! Configurations have `2p + 2` bits: positions `0..=p` hold `z[1] .. z[p+1]`, positions
//! `p+1 ..= 2p+1` hold `z[-(p+1)] .. z[-1]`. A set bit means `-1`.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::classical::Estimate;
use crate::config::phase_table;
use crate::engine::{Kernel, Recursion};
use crate::error::{Error, Result};
use crate::factor::{contract, greedy_order, Factor};
use crate::graphs::{build_lightcone, AdditiveProductSpec, EdgeOrbit, LocalSubgraph};

type M2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-vertex operator inserted between `z[p+1]` and `z[-(p+1)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> M2 {
        match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }
}

/// Angles `(alpha_i, beta_i, gamma_i, delta_i)` for the drivers `A = sum ZZ`, `B = sum X`,
/// `C = sum Z` and `D = sum n_v . sigma_v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QmcParams {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
}

impl QmcParams {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, gamma: Vec<f64>, delta: Vec<f64>) -> Result<Self> {
        let p = alpha.len();
        if beta.len() != p || gamma.len() != p || delta.len() != p {
            return Err(Error::InvalidParams(
                "alpha, beta, gamma and delta must have equal length".into(),
            ));
        }
        if alpha
            .iter()
            .chain(&beta)
            .chain(&gamma)
            .chain(&delta)
            .any(|x| !x.is_finite())
        {
            return Err(Error::InvalidParams("angles must be finite".into()));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn zeros(p: usize) -> Self {
        Self {
            alpha: vec![0.0; p],
            beta: vec![0.0; p],
            gamma: vec![0.0; p],
            delta: vec![0.0; p],
        }
    }

    pub fn p(&self) -> usize {
        self.alpha.len()
    }

    /// `(a1, .., ap, 0, 0, -ap, .., -a1)`.
    pub fn a_vector(&self) -> Vec<f64> {
        let mut v = self.alpha.clone();
        v.extend([0.0, 0.0]);
        v.extend(self.alpha.iter().rev().map(|a| -a));
        v
    }

    /// Pair phases `exp(+i A . z1 z2)` indexed by `x1 ^ x2`.
    fn phases(&self) -> Vec<Complex64> {
        let neg: Vec<f64> = self.a_vector().iter().map(|a| -a).collect();
        phase_table(&neg)
    }
}

/// A point on the unit sphere.
pub type Direction = [f64; 3];

pub fn random_direction(rng: &mut impl Rng) -> Direction {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 1e-12 {
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

/// Spinor with Bloch vector `m`.
pub fn spinor(m: Direction) -> [Complex64; 2] {
    let theta = m[2].clamp(-1.0, 1.0).acos();
    let phi = m[1].atan2(m[0]);
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn adjoint(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// `exp(i t n . sigma)` for a unit vector `n`.
fn rotation(t: f64, n: Direction) -> M2 {
    let (c, s) = (Complex64::new(t.cos(), 0.0), I * t.sin());
    [
        [c + s * n[2], s * Complex64::new(n[0], -n[1])],
        [s * Complex64::new(n[0], n[1]), c - s * n[2]],
    ]
}

/// Transfer matrices along positions `0 -> 1 -> .. -> 2p+1`.
fn chain(theta: &QmcParams, sigma: Pauli, n: Direction) -> Vec<M2> {
    let p = theta.p();
    let forward: Vec<M2> = (0..p)
        .map(|i| {
            let b = rotation(theta.beta[i], [1.0, 0.0, 0.0]);
            let c = rotation(theta.gamma[i], [0.0, 0.0, 1.0]);
            let d = rotation(theta.delta[i], n);
            mul(&mul(&b, &c), &d)
        })
        .collect();
    let mut out = forward.clone();
    out.push(sigma.matrix());
    out.extend(forward.iter().rev().map(adjoint));
    out
}

fn chain_table(steps: &[M2], ends: impl Fn(usize, usize) -> Complex64) -> Vec<Complex64> {
    let len = steps.len() + 1;
    (0..1usize << len)
        .map(|x| {
            let bit = |j: usize| x >> j & 1;
            let mut v = ends(bit(0), bit(len - 1));
            for (j, t) in steps.iter().enumerate() {
                v *= t[bit(j)][bit(j + 1)];
            }
            v
        })
        .collect()
}

/// `f^sigma(z)` for fixed starting direction `m` and driver direction `n`.
pub fn f_sigma(theta: &QmcParams, sigma: Pauli, m: Direction, n: Direction) -> Vec<Complex64> {
    let s = spinor(m);
    chain_table(&chain(theta, sigma, n), |first, last| s[first].conj() * s[last])
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
fn gauss_legendre(k: usize) -> Vec<(f64, f64)> {
    (0..k)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=k {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let pk = if k == 0 {
                    1.0
                } else if k == 1 {
                    x
                } else {
                    p1
                };
                let pkm1 = if k == 1 { 1.0 } else { p0 };
                dp = k as f64 * (x * pk - pkm1) / (x * x - 1.0);
                let dx = pk / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `E_{m,n} f^sigma(z)` with `m`, `n` independent and uniform on the sphere. The `m`
/// average is `I/2`; the integrand is a polynomial of degree `2p` in `n`, integrated
/// exactly by Gauss-Legendre in `cos(theta)` times a uniform grid in `phi`.
pub fn f_sigma_averaged(theta: &QmcParams, sigma: Pauli) -> Vec<Complex64> {
    let p = theta.p();
    let nodes = gauss_legendre(p + 1);
    let nphi = 2 * p + 1;
    let mut acc = vec![ZERO; 1 << (2 * p + 2)];
    for &(ct, w) in &nodes {
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        for k in 0..nphi {
            let phi = std::f64::consts::TAU * k as f64 / nphi as f64;
            let n = [st * phi.cos(), st * phi.sin(), ct];
            let t = chain_table(&chain(theta, sigma, n), |a, b| {
                if a == b {
                    Complex64::new(0.5, 0.0)
                } else {
                    ZERO
                }
            });
            let weight = w / 2.0 / nphi as f64;
            for (a, v) in acc.iter_mut().zip(t) {
                *a += v * weight;
            }
        }
    }
    acc
}

fn recursion<'s>(spec: &'s AdditiveProductSpec, theta: &QmcParams, f: Vec<Complex64>) -> Recursion<'s> {
    let phases = theta.phases();
    let kernel = Kernel {
        bits: 2 * theta.p() + 2,
        f,
        phases: vec![phases; spec.num_categories()],
        depth: theta.p(),
    };
    Recursion::new(spec, kernel, true, spec.automorphisms())
}

/// `G[C, a, m]` with the `(m, n)`-averaged `f^I`.
pub fn qmc_g(spec: &AdditiveProductSpec, c: usize, a: usize, m: usize, theta: &QmcParams) -> Result<Vec<Complex64>> {
    if c >= spec.num_categories() || !spec.atom_contains(c, a) {
        return Err(Error::InvalidAddress(format!("vertex {a} is not in atom {c}")));
    }
    Ok(recursion(spec, theta, f_sigma_averaged(theta, Pauli::I))
        .g(c, a, m)?
        .to_vec())
}

fn observable(terms: [Complex64; 3]) -> Result<f64> {
    let s: Complex64 = terms.iter().sum();
    if s.im.abs() > crate::engine::NON_REAL_TOLERANCE {
        return Err(Error::NonRealResult(s.im));
    }
    Ok(0.5 - 0.5 * s.re)
}

/// The edge observable with every vertex sharing the directions `m` and `n`.
pub fn qmc_edge_fixed(
    spec: &AdditiveProductSpec,
    orbit: &EdgeOrbit,
    theta: &QmcParams,
    m: Direction,
    n: Direction,
) -> Result<f64> {
    let mut rec = recursion(spec, theta, f_sigma(theta, Pauli::I, m, n));
    let mut terms = [ZERO; 3];
    for (t, s) in terms.iter_mut().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
        let fs = f_sigma(theta, s, m, n);
        *t = rec.root_sum(orbit.category, orbit.edge, &fs, &fs)?;
    }
    observable(terms)
}

/// The edge observable averaged exactly over independent uniform directions per vertex.
pub fn qmc_edge_averaged(spec: &AdditiveProductSpec, orbit: &EdgeOrbit, theta: &QmcParams) -> Result<f64> {
    let mut rec = recursion(spec, theta, f_sigma_averaged(theta, Pauli::I));
    let mut terms = [ZERO; 3];
    for (t, s) in terms.iter_mut().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
        let fs = f_sigma_averaged(theta, s);
        *t = rec.root_sum(orbit.category, orbit.edge, &fs, &fs)?;
    }
    observable(terms)
}

/// Lightcone contraction with an individual `(m, n)` per vertex.
pub fn qmc_lightcone_value(g: &LocalSubgraph, theta: &QmcParams, dirs: &[(Direction, Direction)]) -> Result<f64> {
    let bits = 2 * theta.p() + 2;
    let phases = theta.phases();
    let edges: Vec<(usize, usize)> = g.edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let (order, _) = greedy_order(g.num_vertices(), &edges, &[]);
    let (l, r) = g.root_edge;
    let base: Vec<Vec<Complex64>> = dirs.iter().map(|&(m, n)| f_sigma(theta, Pauli::I, m, n)).collect();
    let mut terms = [ZERO; 3];
    for (t, s) in terms.iter_mut().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
        let mut factors: Vec<Factor> = (0..g.num_vertices())
            .map(|v| {
                let data = if v == l || v == r {
                    f_sigma(theta, s, dirs[v].0, dirs[v].1)
                } else {
                    base[v].clone()
                };
                Factor::unary(v, data)
            })
            .collect();
        for &(u, v) in &edges {
            factors.push(Factor::xor_pair(u, v, bits, &phases));
        }
        *t = contract(factors, &order, &[], bits).data[0];
    }
    observable(terms)
}

/// Monte Carlo over independent uniform `(m_v, n_v)` for every lightcone vertex.
pub fn qmc_edge_expectation(
    spec: &AdditiveProductSpec,
    orbit: &EdgeOrbit,
    theta: &QmcParams,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    let g = build_lightcone(spec, orbit, theta.p());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let dirs: Vec<(Direction, Direction)> = (0..g.num_vertices())
            .map(|_| (random_direction(&mut rng), random_direction(&mut rng)))
            .collect();
        let v = qmc_lightcone_value(&g, theta, &dirs)?;
        sum += v;
        sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 {
        (sq - n * mean * mean).max(0.0) / (n - 1.0)
    } else {
        0.0
    };
    Ok(Estimate {
        value: mean,
        stderr: (var / n).sqrt(),
        samples,
    })
}

/// Direct simulation of the four-driver circuit on a small lightcone.
pub fn qmc_statevector(
    g: &LocalSubgraph,
    theta: &QmcParams,
    dirs: &[(Direction, Direction)],
    cap: usize,
) -> Result<f64> {
    let nq = g.num_vertices();
    if nq > cap {
        return Err(Error::TooLarge { n: nq, cap });
    }
    let dim = 1usize << nq;
    let mut psi = vec![ONE; dim];
    for (q, &(m, _)) in dirs.iter().enumerate().take(nq) {
        let s = spinor(m);
        for (x, a) in psi.iter_mut().enumerate() {
            *a *= s[x >> q & 1];
        }
    }
    let apply = |psi: &mut Vec<Complex64>, q: usize, u: &M2| {
        let bit = 1usize << q;
        for x in 0..dim {
            if x & bit == 0 {
                let (a, b) = (psi[x], psi[x | bit]);
                psi[x] = u[0][0] * a + u[0][1] * b;
                psi[x | bit] = u[1][0] * a + u[1][1] * b;
            }
        }
    };
    for i in 0..theta.p() {
        for (x, a) in psi.iter_mut().enumerate() {
            let s: f64 = g
                .edges
                .iter()
                .map(|&(u, v, _)| if (x >> u ^ x >> v) & 1 == 0 { 1.0 } else { -1.0 })
                .sum();
            *a *= Complex64::from_polar(1.0, -theta.alpha[i] * s);
        }
        for q in 0..nq {
            apply(&mut psi, q, &rotation(-theta.beta[i], [1.0, 0.0, 0.0]));
            apply(&mut psi, q, &rotation(-theta.gamma[i], [0.0, 0.0, 1.0]));
            apply(&mut psi, q, &rotation(-theta.delta[i], dirs[q].1));
        }
    }
    let (l, r) = g.root_edge;
    let mut total = 0.0;
    for s in [Pauli::X, Pauli::Y, Pauli::Z] {
        let mut phi = psi.clone();
        apply(&mut phi, l, &s.matrix());
        apply(&mut phi, r, &s.matrix());
        let e: Complex64 = psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
        total += e.re;
    }
    Ok(0.5 - 0.5 * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_nodes_integrate_polynomials() {
        for k in 1..6 {
            let nodes = gauss_legendre(k);
            for deg in 0..2 * k {
                let got: f64 = nodes.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-12, "k={k} deg={deg}");
            }
        }
    }

    #[test]
    fn spinor_bloch_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_direction(&mut rng);
            let s = spinor(m);
            for (pauli, want) in [(Pauli::X, m[0]), (Pauli::Y, m[1]), (Pauli::Z, m[2])] {
                let a = pauli.matrix();
                let v: Complex64 = (0..2)
                    .flat_map(|i| (0..2).map(move |j| (i, j)))
                    .map(|(i, j)| s[i].conj() * a[i][j] * s[j])
                    .sum();
                assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_angles_give_identity_chain() {
        let theta = QmcParams::zeros(2);
        let s: Complex64 = f_sigma(&theta, Pauli::Z, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).iter().sum();
        assert!((s - 1.0).norm() < 1e-12);
    }
}
