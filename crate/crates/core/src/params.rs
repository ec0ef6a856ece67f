//! Variational angles with structural sharing of `gamma` across atom categories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One `gamma` per layer shared by every edge.
    Qaoa,
    /// One `gamma` per layer and sharing class.
    Ma,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qaoa" => Ok(Mode::Qaoa),
            "ma" | "ma-qaoa" | "ma_qaoa" => Ok(Mode::Ma),
            other => Err(Error::InvalidParams(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Qaoa => "qaoa",
            Mode::Ma => "ma",
        })
    }
}

/// `gammas[layer][class]`, `betas[layer]`, and `sharing[category] = class`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub gammas: Vec<Vec<f64>>,
    pub betas: Vec<f64>,
    pub sharing: Vec<usize>,
}

impl ParamSet {
    pub fn new(gammas: Vec<Vec<f64>>, betas: Vec<f64>, sharing: Vec<usize>) -> Result<Self> {
        let ps = Self { gammas, betas, sharing };
        ps.check()?;
        Ok(ps)
    }

    /// Plain QAOA: every category reads class 0.
    pub fn qaoa(gammas: &[f64], betas: &[f64], num_categories: usize) -> Result<Self> {
        Self::new(
            gammas.iter().map(|&g| vec![g]).collect(),
            betas.to_vec(),
            vec![0; num_categories],
        )
    }

    /// Layer-major flat gammas `(g[1][0], .., g[1][m-1], g[2][0], ..)`.
    pub fn ma(gammas: &[f64], betas: &[f64], sharing: &[usize]) -> Result<Self> {
        let p = betas.len();
        let m = sharing.iter().max().map_or(0, |&k| k + 1);
        if gammas.len() != p * m {
            return Err(Error::InvalidParams(format!(
                "gammas: expected {} values ({p} layers x {m} classes), got {}",
                p * m,
                gammas.len()
            )));
        }
        Self::new(
            gammas.chunks(m.max(1)).map(|c| c.to_vec()).collect(),
            betas.to_vec(),
            sharing.to_vec(),
        )
    }

    pub fn zeros(p: usize, sharing: &[usize]) -> Self {
        let m = sharing.iter().max().map_or(1, |&k| k + 1);
        Self {
            gammas: vec![vec![0.0; m]; p],
            betas: vec![0.0; p],
            sharing: sharing.to_vec(),
        }
    }

    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub fn num_classes(&self) -> usize {
        self.gammas.first().map_or(0, |g| g.len())
    }

    pub fn mode(&self) -> Mode {
        if self.num_classes() == 1 {
            Mode::Qaoa
        } else {
            Mode::Ma
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidParams(s));
        if self.gammas.len() != self.betas.len() {
            return bad(format!(
                "gammas has {} layers but betas has {}",
                self.gammas.len(),
                self.betas.len()
            ));
        }
        let m = self.num_classes();
        if self.gammas.iter().any(|g| g.len() != m) {
            return bad("gammas rows differ in length".into());
        }
        if self.p() > 0 && m == 0 {
            return bad("gammas rows are empty".into());
        }
        if let Some(&k) = self.sharing.iter().find(|&&k| k >= m.max(1)) {
            return bad(format!("sharing refers to class {k} but only {m} classes exist"));
        }
        if self.gammas.iter().flatten().chain(&self.betas).any(|x| !x.is_finite()) {
            return bad("angles must be finite".into());
        }
        Ok(())
    }

    /// Checks that the set covers `num_categories` categories and depth `p`.
    pub fn check_for(&self, num_categories: usize, p: usize) -> Result<()> {
        self.check()?;
        if self.sharing.len() != num_categories {
            return Err(Error::InvalidParams(format!(
                "sharing: expected {num_categories} categories, got {}",
                self.sharing.len()
            )));
        }
        if self.p() != p {
            return Err(Error::InvalidParams(format!(
                "betas: expected {p} layers, got {}",
                self.p()
            )));
        }
        Ok(())
    }

    /// Per-layer angles for one category.
    pub fn category_gammas(&self, category: usize) -> Vec<f64> {
        let k = self.sharing[category];
        self.gammas.iter().map(|g| g[k]).collect()
    }

    /// `Gamma_C` for every category.
    pub fn gamma_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.sharing.len())
            .map(|c| crate::config::gamma_vector(&self.category_gammas(c)))
            .collect()
    }

    /// Gammas (layer-major) followed by betas.
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().flatten().chain(&self.betas).copied().collect()
    }

    pub fn from_flat(x: &[f64], p: usize, sharing: &[usize]) -> Result<Self> {
        let m = sharing.iter().max().map_or(1, |&k| k + 1);
        if x.len() != p * (m + 1) {
            return Err(Error::InvalidParams(format!(
                "expected {} values, got {}",
                p * (m + 1),
                x.len()
            )));
        }
        Self::ma(&x[..p * m], &x[p * m..], sharing)
    }

    pub fn negated(&self) -> Self {
        Self {
            gammas: self.gammas.iter().map(|g| g.iter().map(|x| -x).collect()).collect(),
            betas: self.betas.iter().map(|x| -x).collect(),
            sharing: self.sharing.clone(),
        }
    }

    /// Expands to one class per category (each category reads its current class value).
    pub fn per_category(&self) -> Self {
        let c = self.sharing.len();
        Self {
            gammas: self
                .gammas
                .iter()
                .map(|g| (0..c).map(|cat| g[self.sharing[cat]]).collect())
                .collect(),
            betas: self.betas.clone(),
            sharing: (0..c).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }
}

/// Layer-major γ followed by β, the order printed in published parameter tables.
pub fn format_angles(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts() {
        let ps = ParamSet::ma(&[0.1440, 0.2494, 0.2880, 0.4576], &[0.5221, 0.2725], &[0, 1, 1, 1]).unwrap();
        assert_eq!(ps.gammas, vec![vec![0.1440, 0.2494], vec![0.2880, 0.4576]]);
        assert_eq!(ps.category_gammas(0), vec![0.1440, 0.2880]);
        assert_eq!(ps.gamma_vectors()[0], vec![0.1440, 0.2880, 0.0, -0.2880, -0.1440]);
        let back = ParamSet::from_flat(&ps.to_flat(), 2, &ps.sharing).unwrap();
        assert_eq!(back, ps);
        assert_eq!(ps.mode(), Mode::Ma);
    }

    #[test]
    fn rejects_mismatch() {
        assert!(ParamSet::ma(&[0.1, 0.2, 0.3], &[0.1, 0.2], &[0, 1]).is_err());
        assert!(ParamSet::new(vec![vec![0.1]], vec![f64::NAN], vec![0]).is_err());
        let ps = ParamSet::qaoa(&[0.1], &[0.2], 4).unwrap();
        assert!(ps.check_for(3, 1).is_err());
        assert!(ps.check_for(4, 2).is_err());
        assert!(ps.check_for(4, 1).is_ok());
    }
}
