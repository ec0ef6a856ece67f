//! Dense complex factors over variables with `2^bits` states and variable elimination.

use num_complex::Complex64;

/// Table over the assignments of `vars` (ascending). `vars[i]` occupies bits
/// `[i * bits, (i + 1) * bits)` of the flat index.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub vars: Vec<usize>,
    pub data: Vec<Complex64>,
    /// For pair factors that depend only on `x_u ^ x_v`: that one-variable table.
    pub xor: Option<Vec<Complex64>>,
}

impl Factor {
    pub fn scalar(x: Complex64) -> Self {
        Self {
            vars: Vec::new(),
            data: vec![x],
            xor: None,
        }
    }

    pub fn unary(var: usize, data: Vec<Complex64>) -> Self {
        Self {
            vars: vec![var],
            data,
            xor: None,
        }
    }

    /// `table[x_u ^ x_v]` over the pair `{u, v}`.
    pub fn xor_pair(u: usize, v: usize, bits: usize, table: &[Complex64]) -> Self {
        let q = 1usize << bits;
        let mut data = vec![Complex64::new(0.0, 0.0); q * q];
        for (i, d) in data.iter_mut().enumerate() {
            *d = table[(i & (q - 1)) ^ (i >> bits)];
        }
        Self {
            vars: vec![u.min(v), u.max(v)],
            data,
            xor: Some(table.to_vec()),
        }
    }
}

/// Greedy elimination order over `n` variables: minimum current degree, ties broken by
/// minimum fill-in, then by index. Variables with `keep[v]` are never eliminated. Returns
/// the order and its width (largest neighbor count at elimination time).
pub fn greedy_order(n: usize, edges: &[(usize, usize)], keep: &[bool]) -> (Vec<usize>, usize) {
    let mut adj = vec![std::collections::BTreeSet::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut alive: Vec<bool> = (0..n).map(|v| !keep.get(v).copied().unwrap_or(false)).collect();
    let mut order = Vec::new();
    let mut width = 0;
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut fill = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !adj[a].contains(&b) {
                    fill += 1;
                }
            }
        }
        (nb.len(), fill, v)
    }) {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        width = width.max(nb.len());
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    (order, width)
}

/// Variables of the factor that would result from eliminating `var` out of `factors`.
pub fn eliminated_scope(factors: &[Factor], var: usize) -> Vec<usize> {
    let mut scope: Vec<usize> = factors
        .iter()
        .filter(|f| f.vars.contains(&var))
        .flat_map(|f| f.vars.iter().copied())
        .filter(|&v| v != var)
        .collect();
    scope.sort_unstable();
    scope.dedup();
    scope
}

/// Multiplies every factor mentioning `var` and sums `var` out, in place.
pub fn sum_out(factors: &mut Vec<Factor>, var: usize, bits: usize) {
    let (bucket, rest): (Vec<Factor>, Vec<Factor>) = factors.drain(..).partition(|f| f.vars.contains(&var));
    *factors = rest;
    if bucket.is_empty() {
        return;
    }
    if let Some(j) = bucket.iter().position(|f| {
        f.xor.is_some() && {
            let y = other_var(f, var);
            bucket.iter().filter(|g| g.vars.contains(&y)).count() == 1
        }
    }) {
        factors.push(sum_out_xor(bucket, j, var, bits));
        return;
    }
    let scope = eliminated_scope(&bucket, var);
    let q = 1usize << bits;
    let mask = q - 1;
    // per factor: stride of each scope variable (0 when absent) and of `var`
    let strides: Vec<(Vec<usize>, usize)> = bucket
        .iter()
        .map(|f| {
            let pos = |x: usize| f.vars.iter().position(|&w| w == x).map_or(0, |i| 1 << (i * bits));
            (scope.iter().map(|&x| pos(x)).collect(), pos(var))
        })
        .collect();
    let out_len = 1usize << (bits * scope.len());
    let mut data = vec![Complex64::new(0.0, 0.0); out_len];
    let mut base = vec![0usize; bucket.len()];
    for (idx, out) in data.iter_mut().enumerate() {
        for (b, (s, _)) in base.iter_mut().zip(&strides) {
            *b = 0;
            for (i, &st) in s.iter().enumerate() {
                *b += ((idx >> (i * bits)) & mask) * st;
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..q {
            let mut term = Complex64::new(1.0, 0.0);
            for (f, (b, (_, vs))) in bucket.iter().zip(base.iter().zip(&strides)) {
                term *= f.data[b + x * vs];
            }
            acc += term;
        }
        *out = acc;
    }
    factors.push(Factor {
        vars: scope,
        data,
        xor: None,
    });
}

fn other_var(f: &Factor, var: usize) -> usize {
    if f.vars[0] == var {
        f.vars[1]
    } else {
        f.vars[0]
    }
}

/// In-place unnormalized Walsh-Hadamard transform.
fn wht(a: &mut [Complex64]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
}

/// `sum_x h(r, x) P(x ^ y)` where `P = bucket[j]` is the only factor touching `y`:
/// an XOR convolution for each assignment `r` of the remaining scope.
fn sum_out_xor(bucket: Vec<Factor>, j: usize, var: usize, bits: usize) -> Factor {
    let q = 1usize << bits;
    let mask = q - 1;
    let y = other_var(&bucket[j], var);
    let mut kernel = bucket[j].xor.clone().expect("xor factor");
    wht(&mut kernel);
    let rest: Vec<&Factor> = bucket
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, f)| f)
        .collect();
    let r_scope = {
        let mut s: Vec<usize> = rest
            .iter()
            .flat_map(|f| f.vars.iter().copied())
            .filter(|&v| v != var)
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let mut scope = r_scope.clone();
    let ypos = scope.partition_point(|&v| v < y);
    scope.insert(ypos, y);
    let out_stride = |v: usize| 1usize << (scope.iter().position(|&w| w == v).unwrap() * bits);
    let r_out: Vec<usize> = r_scope.iter().map(|&v| out_stride(v)).collect();
    let y_out = out_stride(y);
    let strides: Vec<(Vec<usize>, usize)> = rest
        .iter()
        .map(|f| {
            let pos = |x: usize| f.vars.iter().position(|&w| w == x).map_or(0, |i| 1 << (i * bits));
            (r_scope.iter().map(|&x| pos(x)).collect(), pos(var))
        })
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); 1usize << (bits * scope.len())];
    let mut h = vec![Complex64::new(0.0, 0.0); q];
    let scale = 1.0 / q as f64;
    for r in 0..1usize << (bits * r_scope.len()) {
        h.iter_mut().for_each(|v| *v = Complex64::new(1.0, 0.0));
        let mut out_base = 0;
        for (i, &st) in r_out.iter().enumerate() {
            out_base += ((r >> (i * bits)) & mask) * st;
        }
        for (f, (s, vs)) in rest.iter().zip(&strides) {
            let mut b = 0;
            for (i, &st) in s.iter().enumerate() {
                b += ((r >> (i * bits)) & mask) * st;
            }
            for (x, hv) in h.iter_mut().enumerate() {
                *hv *= f.data[b + x * vs];
            }
        }
        wht(&mut h);
        for (hv, k) in h.iter_mut().zip(&kernel) {
            *hv *= k;
        }
        wht(&mut h);
        for (yv, hv) in h.iter().enumerate() {
            data[out_base + yv * y_out] = hv * scale;
        }
    }
    Factor {
        vars: scope,
        data,
        xor: None,
    }
}

/// Product of all factors; their scopes must be subsets of `vars` (ascending).
pub fn multiply_onto(factors: &[Factor], vars: &[usize], bits: usize) -> Factor {
    let mask = (1usize << bits) - 1;
    let len = 1usize << (bits * vars.len());
    let strides: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| {
            vars.iter()
                .map(|x| f.vars.iter().position(|w| w == x).map_or(0, |i| 1 << (i * bits)))
                .collect()
        })
        .collect();
    let data = (0..len)
        .map(|idx| {
            let mut v = Complex64::new(1.0, 0.0);
            for (f, s) in factors.iter().zip(&strides) {
                let mut off = 0;
                for (i, &st) in s.iter().enumerate() {
                    off += ((idx >> (i * bits)) & mask) * st;
                }
                v *= f.data[off];
            }
            v
        })
        .collect();
    Factor {
        vars: vars.to_vec(),
        data,
        xor: None,
    }
}

/// Eliminates `order` and returns the product of what remains over `keep` (ascending).
pub fn contract(mut factors: Vec<Factor>, order: &[usize], keep: &[usize], bits: usize) -> Factor {
    for &v in order {
        sum_out(&mut factors, v, bits);
    }
    multiply_onto(&factors, keep, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(factors: &[Factor], nvars: usize, keep: usize, bits: usize) -> Vec<Complex64> {
        let q = 1usize << bits;
        let mut out = vec![Complex64::new(0.0, 0.0); q];
        let total = 1usize << (bits * nvars);
        for a in 0..total {
            let val = |v: usize| (a >> (v * bits)) & (q - 1);
            let mut t = Complex64::new(1.0, 0.0);
            for f in factors {
                let mut idx = 0;
                for (i, &v) in f.vars.iter().enumerate() {
                    idx |= val(v) << (i * bits);
                }
                t *= f.data[idx];
            }
            out[val(keep)] += t;
        }
        out
    }

    #[test]
    fn widths() {
        let path: Vec<_> = (0..5).map(|i| (i, i + 1)).collect();
        assert_eq!(greedy_order(6, &path, &[]).1, 1);
        let mut cycle = path.clone();
        cycle.push((5, 0));
        assert_eq!(greedy_order(6, &cycle, &[]).1, 2);
        let (order, _) = greedy_order(3, &[(0, 1), (1, 2)], &[false, true, false]);
        assert_eq!(order.len(), 2);
        assert!(!order.contains(&1));
    }

    proptest! {
        #[test]
        fn elimination_matches_brute_force(
            seed_edges in prop::collection::vec((0usize..5, 0usize..5), 1..8),
            vals in prop::collection::vec(-1.0f64..1.0, 64),
        ) {
            let bits = 1;
            let n = 5;
            let mut factors = Vec::new();
            for (k, &(u, v)) in seed_edges.iter().enumerate() {
                if u == v { continue; }
                let t: Vec<Complex64> = (0..2).map(|i| Complex64::new(vals[(2 * k + i) % 64], vals[(2 * k + i + 17) % 64])).collect();
                factors.push(Factor::xor_pair(u, v, bits, &t));
            }
            for v in 0..n {
                factors.push(Factor::unary(v, vec![Complex64::new(vals[v], 0.3), Complex64::new(0.5, vals[v + 7])]));
            }
            let keep = 2;
            let expect = brute(&factors, n, keep, bits);
            let edges: Vec<_> = factors.iter().filter(|f| f.vars.len() == 2).map(|f| (f.vars[0], f.vars[1])).collect();
            let mut kv = vec![false; n];
            kv[keep] = true;
            let (order, _) = greedy_order(n, &edges, &kv);
            let got = contract(factors, &order, &[keep], bits);
            for x in 0..2 {
                prop_assert!((got.data[x] - expect[x]).norm() < 1e-9);
            }
        }
    }
}
