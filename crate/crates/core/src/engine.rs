//! Iterative evaluation of edge expectations on additive product graphs.
//!
//! `G[C, a, m]` aggregates the copy of atom `C` hanging off a vertex whose last letter is
//! `a`, together with everything beyond it up to depth `m`. Each table is computed by
//! eliminating the atom vertices within distance `m` of `a`.

use std::collections::HashMap;
use std::rc::Rc;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{f_table, phase_table, z0_sign};
use crate::error::{Error, Result};
use crate::factor::{contract, greedy_order, Factor};
use crate::graphs::{enumerate_edge_orbits, AdditiveProductSpec, EdgeOrbit, UNREACHABLE};
use crate::params::ParamSet;

/// Imaginary residue above which a real-valued result is treated as a bug.
pub const NON_REAL_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Reuse `G` tables keyed on `(C, a, m)`.
    pub memo: bool,
    /// Map `(C, a)` keys and orbits to representatives under class-preserving automorphisms.
    pub symmetry: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            memo: true,
            symmetry: true,
        }
    }
}

/// Per-vertex and per-edge tables shared by every recursion over configurations.
pub(crate) struct Kernel {
    pub bits: usize,
    pub f: Vec<Complex64>,
    /// Indexed by category, then by `x1 ^ x2`.
    pub phases: Vec<Vec<Complex64>>,
    pub depth: usize,
}

type Automorphism = (Vec<usize>, Vec<usize>);

pub(crate) struct Recursion<'s> {
    pub spec: &'s AdditiveProductSpec,
    pub kernel: Kernel,
    memo: HashMap<(usize, usize, usize), Rc<Vec<Complex64>>>,
    use_memo: bool,
    auts: Vec<Automorphism>,
    ones: Rc<Vec<Complex64>>,
}

impl<'s> Recursion<'s> {
    pub fn new(spec: &'s AdditiveProductSpec, kernel: Kernel, use_memo: bool, auts: Vec<Automorphism>) -> Self {
        let ones = Rc::new(vec![Complex64::new(1.0, 0.0); 1 << kernel.bits]);
        Self {
            spec,
            kernel,
            memo: HashMap::new(),
            use_memo,
            auts,
            ones,
        }
    }

    fn canonical_key(&self, c: usize, a: usize) -> (usize, usize) {
        self.auts
            .iter()
            .map(|(sigma, pi)| (pi[c], sigma[a]))
            .min()
            .unwrap_or((c, a))
    }

    /// Canonical representative of an orbit under the stored automorphisms.
    pub fn canonical_orbit(&self, c: usize, (a, b): (usize, usize)) -> (usize, usize, usize) {
        self.auts
            .iter()
            .map(|(sigma, pi)| {
                let (x, y) = (sigma[a], sigma[b]);
                (pi[c], x.min(y), x.max(y))
            })
            .min()
            .unwrap_or((c, a.min(b), a.max(b)))
    }

    pub fn g(&mut self, c: usize, a: usize, m: usize) -> Result<Rc<Vec<Complex64>>> {
        if m > self.kernel.depth {
            return Err(Error::DepthOverflow {
                m,
                p: self.kernel.depth,
            });
        }
        if m == 0 {
            return Ok(self.ones.clone());
        }
        let (c, a) = self.canonical_key(c, a);
        if self.use_memo {
            if let Some(t) = self.memo.get(&(c, a, m)) {
                return Ok(t.clone());
            }
        }
        let spec = self.spec;
        let dist: Vec<usize> = (0..spec.n()).map(|k| spec.atom_distance(c, a, k)).collect();
        let in_range: Vec<bool> = dist.iter().map(|&d| d != UNREACHABLE && d <= m).collect();
        let mut factors = Vec::new();
        for k in spec.atom_vertices(c).iter().copied().filter(|&k| in_range[k] && k != a) {
            let u = self.unary(k, c, m - dist[k], None)?;
            factors.push(Factor::unary(k, u));
        }
        let table = self.eliminate(c, &in_range, factors, &[a])?;
        let table = Rc::new(table.data);
        if self.use_memo {
            self.memo.insert((c, a, m), table.clone());
        }
        Ok(table)
    }

    /// `f_k(z) * prod_{C' != C} G[C', k, rest](z)`, with `f_k` replaced by `own` if given.
    fn unary(&mut self, k: usize, c: usize, rest: usize, own: Option<&[Complex64]>) -> Result<Vec<Complex64>> {
        let mut u = own.map_or_else(|| self.kernel.f.clone(), |t| t.to_vec());
        if rest > 0 {
            let others: Vec<usize> = self.spec.categories_at(k).filter(|&c2| c2 != c).collect();
            for c2 in others {
                let t = self.g(c2, k, rest)?;
                for (x, y) in u.iter_mut().zip(t.iter()) {
                    *x *= y;
                }
            }
        }
        Ok(u)
    }

    fn eliminate(&self, c: usize, in_range: &[bool], mut factors: Vec<Factor>, keep: &[usize]) -> Result<Factor> {
        let spec = self.spec;
        let bits = self.kernel.bits;
        let edges: Vec<(usize, usize)> = spec
            .atom_edges(c)
            .iter()
            .copied()
            .filter(|&(u, v)| in_range[u] && in_range[v])
            .collect();
        for &(u, v) in &edges {
            factors.push(Factor::xor_pair(u, v, bits, &self.kernel.phases[c]));
        }
        let frozen: Vec<bool> = (0..spec.n()).map(|v| !in_range[v] || keep.contains(&v)).collect();
        let (order, _) = greedy_order(spec.n(), &edges, &frozen);
        Ok(contract(factors, &order, keep, bits))
    }

    /// Full sum over the atom copy containing the root edge `(a, b)` of category `c`,
    /// with the unary tables of `a` and `b` replaced by `ua` and `ub`.
    pub fn root_sum(
        &mut self,
        c: usize,
        (a, b): (usize, usize),
        ua: &[Complex64],
        ub: &[Complex64],
    ) -> Result<Complex64> {
        let spec = self.spec;
        let p = self.kernel.depth;
        let dist: Vec<usize> = (0..spec.n())
            .map(|k| spec.atom_distance(c, a, k).min(spec.atom_distance(c, b, k)))
            .collect();
        let in_range: Vec<bool> = dist.iter().map(|&d| d != UNREACHABLE && d <= p).collect();
        let mut factors = Vec::new();
        for k in spec.atom_vertices(c).iter().copied().filter(|&k| in_range[k]) {
            let own = if k == a {
                Some(ua)
            } else if k == b {
                Some(ub)
            } else {
                None
            };
            let u = self.unary(k, c, p - dist[k], own)?;
            factors.push(Factor::unary(k, u));
        }
        Ok(self.eliminate(c, &in_range, factors, &[])?.data[0])
    }

    pub fn memo_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rc<Vec<Complex64>>)> {
        self.memo.iter()
    }
}

/// Evaluates `G`, edge expectations and cut fractions for one parameter set.
pub struct IterativeEngine<'s> {
    rec: Recursion<'s>,
    params: ParamSet,
}

impl<'s> IterativeEngine<'s> {
    pub fn new(spec: &'s AdditiveProductSpec, params: &ParamSet, opts: EngineOptions) -> Result<Self> {
        params.check_for(spec.num_categories(), params.p())?;
        let kernel = Kernel {
            bits: 2 * params.p() + 1,
            f: f_table(&params.betas),
            phases: params.gamma_vectors().iter().map(|g| phase_table(g)).collect(),
            depth: params.p(),
        };
        let auts = if opts.symmetry {
            spec.automorphisms()
                .into_iter()
                .filter(|(_, pi)| {
                    pi.iter()
                        .enumerate()
                        .all(|(c, &t)| params.sharing[c] == params.sharing[t])
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            rec: Recursion::new(spec, kernel, opts.memo, auts),
            params: params.clone(),
        })
    }

    pub fn p(&self) -> usize {
        self.params.p()
    }

    pub fn compute_g(&mut self, c: usize, a: usize, m: usize) -> Result<Vec<Complex64>> {
        if c >= self.rec.spec.num_categories() || !self.rec.spec.atom_contains(c, a) {
            return Err(Error::InvalidAddress(format!("vertex {a} is not in atom {c}")));
        }
        Ok(self.rec.g(c, a, m)?.to_vec())
    }

    /// `-<Z_a Z_b>` for the orbit's representative edge.
    pub fn edge_expectation(&mut self, orbit: &EdgeOrbit) -> Result<f64> {
        let p = self.p();
        let signed: Vec<Complex64> = self
            .rec
            .kernel
            .f
            .iter()
            .enumerate()
            .map(|(x, v)| v * z0_sign(x, p))
            .collect();
        let s = self.rec.root_sum(orbit.category, orbit.edge, &signed, &signed)?;
        real_part(-s)
    }

    /// `1/2 + 1/2 * sum_g w_g E_g`.
    pub fn cut_fraction(&mut self) -> Result<f64> {
        let spec = self.rec.spec;
        let mut groups: Vec<((usize, usize, usize), EdgeOrbit, f64)> = Vec::new();
        for o in enumerate_edge_orbits(spec) {
            let key = self.rec.canonical_orbit(o.category, o.edge);
            match groups.iter_mut().find(|g| g.0 == key) {
                Some(g) => g.2 += o.weight_f64(),
                None => {
                    let w = o.weight_f64();
                    groups.push((key, o, w));
                }
            }
        }
        let mut total = 0.0;
        for (_, o, w) in &groups {
            total += w * self.edge_expectation(o)?;
        }
        Ok((0.5 + 0.5 * total).clamp(0.0, 1.0))
    }

    /// Memoized tables as JSON, for debugging.
    pub fn dump_tables(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            category: usize,
            vertex: usize,
            depth: usize,
            re: Vec<f64>,
            im: Vec<f64>,
        }
        let mut entries: Vec<Entry> = self
            .rec
            .memo_entries()
            .map(|(&(c, a, m), t)| Entry {
                category: c,
                vertex: a,
                depth: m,
                re: t.iter().map(|z| z.re).collect(),
                im: t.iter().map(|z| z.im).collect(),
            })
            .collect();
        entries.sort_by_key(|e| (e.depth, e.category, e.vertex));
        serde_json::to_value(entries).expect("tables serialize")
    }
}

pub(crate) fn real_part(s: Complex64) -> Result<f64> {
    if s.im.abs() > NON_REAL_TOLERANCE || !s.re.is_finite() {
        return Err(Error::NonRealResult(s.im));
    }
    Ok(s.re.clamp(-1.0, 1.0))
}

/// `G[C, a, m]` as a table over configurations of `a`.
pub fn compute_g(
    spec: &AdditiveProductSpec,
    c: usize,
    a: usize,
    m: usize,
    params: &ParamSet,
) -> Result<Vec<Complex64>> {
    IterativeEngine::new(spec, params, EngineOptions::default())?.compute_g(c, a, m)
}

/// `E[A_C(a, b)] = -<Z_a Z_b>` at depth `p`.
pub fn edge_expectation(spec: &AdditiveProductSpec, orbit: &EdgeOrbit, p: usize, params: &ParamSet) -> Result<f64> {
    params.check_for(spec.num_categories(), p)?;
    IterativeEngine::new(spec, params, EngineOptions::default())?.edge_expectation(orbit)
}

/// Expected cut fraction of the product graph at `params`.
pub fn cut_fraction_iterative(spec: &AdditiveProductSpec, params: &ParamSet, opts: EngineOptions) -> Result<f64> {
    IterativeEngine::new(spec, params, opts)?.cut_fraction()
}
