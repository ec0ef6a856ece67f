use num_complex::Complex64;

use super::CircuitSpec;
use crate::error::{Error, Result};

pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Simulates the circuit on `2^n` amplitudes and returns `<Z_L Z_R>`.
pub fn statevector_expectation(circ: CircuitSpec<'_>, cap: usize) -> Result<f64> {
    let g = circ.subgraph;
    let n = g.num_vertices();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let dim = 1usize << n;
    let params = circ.params;
    let classes = params.num_classes();

    // per class, sum of z_u z_v over its edges for every basis state
    let mut energy = vec![0i16; dim * classes];
    for &(u, v, c) in &g.edges {
        let k = params.sharing[c];
        for (x, e) in energy.chunks_exact_mut(classes).enumerate() {
            e[k] += if (x >> u ^ x >> v) & 1 == 0 { 1 } else { -1 };
        }
    }

    let mut psi = vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim];
    for (layer, beta) in params.betas.iter().enumerate() {
        let gam = &params.gammas[layer];
        // exp(-i gamma C) with C = -sum z_u z_v
        for (amp, e) in psi.iter_mut().zip(energy.chunks_exact(classes)) {
            let s: f64 = e.iter().zip(gam).map(|(&k, g)| k as f64 * g).sum();
            *amp *= Complex64::from_polar(1.0, s);
        }
        let (c, s) = (beta.cos(), beta.sin());
        for q in 0..n {
            let bit = 1usize << q;
            for block in psi.chunks_exact_mut(2 * bit) {
                let (lo, hi) = block.split_at_mut(bit);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    // exp(-i beta X)
                    *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
                    *b = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
                }
            }
        }
    }
    let (l, r) = g.root_edge;
    Ok(psi
        .iter()
        .enumerate()
        .map(|(x, a)| {
            if (x >> l ^ x >> r) & 1 == 0 {
                a.norm_sqr()
            } else {
                -a.norm_sqr()
            }
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{LocalSubgraph, VertexLabel};
    use crate::params::ParamSet;

    fn single_edge() -> LocalSubgraph {
        LocalSubgraph {
            vertices: vec![VertexLabel::Patch(0), VertexLabel::Patch(1)],
            edges: vec![(0, 1, 0)],
            root_edge: (0, 1),
            root_category: 0,
            radius: 1,
            dist: vec![0, 0],
        }
    }

    #[test]
    fn two_qubit_hand_value() {
        // On one edge, <ZZ> = -sin(4 beta) sin(2 gamma).
        let g = single_edge();
        let t = std::f64::consts::FRAC_PI_8;
        let ps = ParamSet::qaoa(&[t], &[t], 1).unwrap();
        let v = statevector_expectation(CircuitSpec::new(&g, &ps).unwrap(), 4).unwrap();
        let want = -(4.0 * t).sin() * (2.0 * t).sin();
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        let zero = ParamSet::qaoa(&[0.0], &[t], 1).unwrap();
        assert!(
            statevector_expectation(CircuitSpec::new(&g, &zero).unwrap(), 4)
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(matches!(
            statevector_expectation(CircuitSpec::new(&g, &ps).unwrap(), 1),
            Err(Error::TooLarge { .. })
        ));
    }
}
