//! Bit-packed per-vertex configurations and the tables built over them.
//!
//! A configuration for depth `p` is `(z[1], .., z[p], z[0], z[-p], .., z[-1])` stored in
//! `2p + 1` bits, position `j` at bit `j`, with a set bit meaning `-1`. The `z[0]` bit
//! sits at position `p`.

use num_complex::Complex64;

/// One vertex assignment in `{+1, -1}^(2p+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub bits: usize,
    pub p: usize,
}

impl Configuration {
    pub fn len(p: usize) -> usize {
        2 * p + 1
    }

    pub fn count(p: usize) -> usize {
        1 << (2 * p + 1)
    }

    pub fn from_spins(spins: &[i8]) -> Self {
        assert!(spins.len() % 2 == 1, "configuration length must be odd");
        let bits = spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0, |acc, (j, _)| acc | 1 << j);
        Self {
            bits,
            p: spins.len() / 2,
        }
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..Self::len(self.p)).map(|j| self.spin(j)).collect()
    }

    /// Spin at vector position `j`.
    pub fn spin(&self, j: usize) -> i8 {
        if self.bits >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// The measured spin `z[0]`.
    pub fn z0(&self) -> i8 {
        self.spin(self.p)
    }
}

/// Sign of `z[0]` as a float.
#[inline]
pub fn z0_sign(x: usize, p: usize) -> f64 {
    if x >> p & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `f(z)`: half the product of mixer amplitudes along `z[1] -> .. -> z[p] -> z[0] -> z[-p]
/// -> .. -> z[-1]`. Forward steps use `e^{i beta X}`, the mirrored steps its inverse.
pub fn f_table(betas: &[f64]) -> Vec<Complex64> {
    let p = betas.len();
    let len = 2 * p + 1;
    let step: Vec<(Complex64, Complex64)> = (0..2 * p)
        .map(|j| {
            let (beta, sign) = if j < p {
                (betas[j], 1.0)
            } else {
                (betas[2 * p - 1 - j], -1.0)
            };
            (Complex64::new(beta.cos(), 0.0), Complex64::new(0.0, sign * beta.sin()))
        })
        .collect();
    (0..1usize << len)
        .map(|x| {
            let mut v = Complex64::new(0.5, 0.0);
            for (j, &(same, flip)) in step.iter().enumerate() {
                v *= if (x >> j ^ x >> (j + 1)) & 1 == 0 { same } else { flip };
            }
            v
        })
        .collect()
}

/// `Gamma = (g1, .., gp, 0, -gp, .., -g1)` for one category's per-layer angles.
pub fn gamma_vector(gammas: &[f64]) -> Vec<f64> {
    let p = gammas.len();
    let mut out = Vec::with_capacity(2 * p + 1);
    out.extend_from_slice(gammas);
    out.push(0.0);
    out.extend(gammas.iter().rev().map(|g| -g));
    out
}

/// `exp(-i Gamma . (z1 * z2))` indexed by `x1 ^ x2`.
pub fn phase_table(gamma: &[f64]) -> Vec<Complex64> {
    let len = gamma.len();
    (0..1usize << len)
        .map(|x| {
            let dot: f64 = gamma
                .iter()
                .enumerate()
                .map(|(j, g)| if x >> j & 1 == 1 { -g } else { *g })
                .sum();
            Complex64::from_polar(1.0, -dot)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_values() {
        let f = f_table(&[std::f64::consts::FRAC_PI_4]);
        assert!((f[0] - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        let f = f_table(&[0.0]);
        // z[1] = -1, z[0] = +1
        assert_eq!(f[0b001], Complex64::new(0.0, 0.0));
        assert_eq!(gamma_vector(&[0.2536]), vec![0.2536, 0.0, -0.2536]);
        assert_eq!(
            gamma_vector(&[0.1440, 0.2880]),
            vec![0.1440, 0.2880, 0.0, -0.2880, -0.1440]
        );
        assert!(phase_table(&gamma_vector(&[0.0, 0.0]))
            .iter()
            .all(|z| (z - 1.0).norm() == 0.0));
    }

    #[test]
    fn round_trip() {
        for p in 1..4 {
            for x in 0..Configuration::count(p) {
                let c = Configuration { bits: x, p };
                assert_eq!(Configuration::from_spins(&c.spins()), c);
                assert_eq!(c.z0() as f64, z0_sign(x, p));
            }
        }
    }

    proptest! {
        #[test]
        fn f_sums_to_one(betas in prop::collection::vec(-7.0f64..7.0, 1..4)) {
            let s: Complex64 = f_table(&betas).iter().sum();
            prop_assert!((s - 1.0).norm() < 1e-12);
        }
    }
}
