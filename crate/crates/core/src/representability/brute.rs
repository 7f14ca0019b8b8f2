//! Congruence search for `X^T G_L X = G_l`, lifted level by level with a
//! multivariate Newton certificate.

use super::{RepValue, RepVerdict};
use crate::dyadic_field::{Elt, Field};
use crate::error::{Error, Result};
use crate::lattice_core::GramMatrix;

#[derive(Debug, Clone)]
pub struct BruteOptions {
    pub max_rank_small: usize,
    pub max_rank_big: usize,
    /// Above this many live nodes the level-by-level search turns depth-first.
    pub frontier_cap: usize,
    /// Total number of candidate lifts examined before giving up.
    pub node_budget: usize,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            max_rank_small: 2,
            max_rank_big: 4,
            frontier_cap: 20_000,
            node_budget: 3_000_000,
        }
    }
}

const MAXF: usize = crate::dyadic_field::MAX_DEGREE;

type Coords = [u64; MAXF];

const ZERO: Coords = [0; MAXF];

struct Problem {
    f: usize,
    n: usize,
    m: usize,
    mask: u64,
    modulus: Coords,
    /// Bits of each entry known after normalisation.
    prec: u32,
    g: Vec<Coords>,
    target: Vec<Coords>,
    eqs: Vec<(usize, usize)>,
    subsets: Vec<Vec<usize>>,
}

fn to_coords(c: &[u64]) -> Coords {
    let mut out = ZERO;
    out[..c.len()].copy_from_slice(c);
    out
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

impl Problem {
    fn add(&self, a: &Coords, b: &Coords) -> Coords {
        let mut r = ZERO;
        for k in 0..self.f {
            r[k] = a[k].wrapping_add(b[k]) & self.mask;
        }
        r
    }

    fn sub(&self, a: &Coords, b: &Coords) -> Coords {
        let mut r = ZERO;
        for k in 0..self.f {
            r[k] = a[k].wrapping_sub(b[k]) & self.mask;
        }
        r
    }

    fn mul(&self, a: &Coords, b: &Coords) -> Coords {
        let f = self.f;
        let mut r = [0u64; 2 * MAXF];
        for i in 0..f {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f {
                r[i + j] = r[i + j].wrapping_add(a[i].wrapping_mul(b[j]));
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = r[k];
            if c != 0 {
                for i in 0..f {
                    r[k - f + i] = r[k - f + i].wrapping_sub(c.wrapping_mul(self.modulus[i]));
                }
            }
        }
        let mut out = ZERO;
        for k in 0..f {
            out[k] = r[k] & self.mask;
        }
        out
    }

    fn val(&self, a: &Coords) -> u32 {
        a[..self.f]
            .iter()
            .filter(|&&c| c != 0)
            .map(|c| c.trailing_zeros())
            .min()
            .unwrap_or(u32::MAX)
            .min(self.prec)
    }

    /// `G x_a` for every column (flattened), and the residuals
    /// `x_a^T G x_b - target_ab`.
    fn residuals(&self, x: &[Coords]) -> (Vec<Coords>, Vec<Coords>) {
        let n = self.n;
        let mut gx = vec![ZERO; n * self.m];
        for a in 0..self.m {
            for k in 0..n {
                let xk = &x[a * n + k];
                if xk[..self.f].iter().all(|&c| c == 0) {
                    continue;
                }
                for i in 0..n {
                    gx[a * n + i] = self.add(&gx[a * n + i], &self.mul(&self.g[i * n + k], xk));
                }
            }
        }
        let e = self
            .eqs
            .iter()
            .map(|&(a, b)| {
                let s = (0..n).fold(ZERO, |acc, i| {
                    self.add(&acc, &self.mul(&x[a * n + i], &gx[b * n + i]))
                });
                self.sub(&s, &self.target[a * self.m + b])
            })
            .collect();
        (gx, e)
    }

    fn admissible(&self, x: &[Coords], level: u32) -> bool {
        if level == 0 {
            return true;
        }
        let (_, e) = self.residuals(x);
        self.eqs
            .iter()
            .zip(&e)
            .all(|(&(a, b), r)| self.val(r) >= if a == b { level + 1 } else { level })
    }

    fn det(&self, rows: &[Vec<Coords>]) -> Coords {
        match rows.len() {
            1 => rows[0][0],
            3 => {
                let m = |i: usize, j: usize| &rows[i][j];
                let minor = |j: usize, k: usize, l: usize, q: usize| {
                    self.sub(&self.mul(m(1, j), m(2, k)), &self.mul(m(1, l), m(2, q)))
                };
                let t0 = self.mul(m(0, 0), &minor(1, 2, 2, 1));
                let t1 = self.mul(m(0, 1), &minor(0, 2, 2, 0));
                let t2 = self.mul(m(0, 2), &minor(0, 1, 1, 0));
                self.add(&self.sub(&t0, &t1), &t2)
            }
            r => {
                let mut acc = ZERO;
                for c in 0..r {
                    let minor: Vec<Vec<Coords>> = rows[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|&(k, _)| k != c)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let t = self.mul(&rows[0][c], &self.det(&minor));
                    acc = if c % 2 == 0 { self.add(&acc, &t) } else { self.sub(&acc, &t) };
                }
                acc
            }
        }
    }

    /// Some `r x r` Jacobian minor has valuation `t` with every residual of
    /// valuation above `2t`.
    fn certified(&self, x: &[Coords]) -> bool {
        let (gx, e) = self.residuals(x);
        let ev = e.iter().map(|r| self.val(r)).min().unwrap_or(u32::MAX);
        if ev == 0 {
            return false;
        }
        let limit = (ev - 1) / 2;
        let n = self.n;
        let partial = |eq: usize, var: usize| -> Coords {
            let (a, b) = self.eqs[eq];
            let (col, row) = (var / n, var % n);
            if a == b {
                if col == a {
                    self.add(&gx[a * n + row], &gx[a * n + row])
                } else {
                    ZERO
                }
            } else if col == a {
                gx[b * n + row]
            } else if col == b {
                gx[a * n + row]
            } else {
                ZERO
            }
        };
        let jac: Vec<Vec<Coords>> = (0..self.eqs.len())
            .map(|q| (0..n * self.m).map(|v| partial(q, v)).collect())
            .collect();
        self.subsets.iter().any(|s| {
            let rows: Vec<Vec<Coords>> = jac
                .iter()
                .map(|row| s.iter().map(|&v| row[v]).collect())
                .collect();
            self.val(&self.det(&rows)) <= limit
        })
    }

    fn child(&self, x: &[Coords], level: u32, digits: u64) -> Vec<Coords> {
        let mut c = x.to_vec();
        for (v, e) in c.iter_mut().enumerate() {
            for k in 0..self.f {
                if digits >> (v * self.f + k) & 1 == 1 {
                    e[k] |= 1 << level;
                }
            }
        }
        c
    }

    fn witness(&self, x: &[Coords]) -> Vec<Vec<Elt>> {
        (0..self.m)
            .map(|a| {
                (0..self.n)
                    .map(|i| Elt::from_parts(x[a * self.n + i][..self.f].to_vec(), 0))
                    .collect()
            })
            .collect()
    }
}

fn found(p: &Problem, x: &[Coords]) -> RepVerdict {
    RepVerdict {
        value: RepValue::Represented,
        reason: None,
        witness: Some(p.witness(x)),
    }
}

fn unknown(reason: String) -> RepVerdict {
    RepVerdict {
        value: RepValue::Unknown,
        reason: Some(reason),
        witness: None,
    }
}

/// Searches integral `X` modulo `2^modulus_exp` with `X^T G_L X = G_l`.
/// `NotRepresented` means no solution exists modulo a power of two;
/// `Represented` carries an approximate solution that provably lifts.
pub fn brute_force_represents(
    small: &GramMatrix,
    big: &GramMatrix,
    modulus_exp: u32,
    opts: &BruteOptions,
    fd: &Field,
) -> Result<RepVerdict> {
    let (m, n) = (small.dim(), big.dim());
    if m > opts.max_rank_small || n > opts.max_rank_big {
        return Err(Error::Guard(format!(
            "ranks {m} into {n} exceed the search limits {} into {}",
            opts.max_rank_small, opts.max_rank_big
        )));
    }
    let f = fd.degree();
    if (n * m * f) > 20 {
        return Err(Error::Guard(format!(
            "{} branching bits per level is too many",
            n * m * f
        )));
    }
    if m == 0 {
        return Ok(RepVerdict {
            value: RepValue::Represented,
            reason: None,
            witness: Some(Vec::new()),
        });
    }
    let entries = |g: &GramMatrix| -> Vec<Elt> {
        let d = g.dim();
        (0..d * d).map(|k| g.get(k / d, k % d).clone()).collect()
    };
    let (es, eb) = (entries(small), entries(big));
    let shift = es.iter().chain(&eb).map(|e| e.den()).max().unwrap_or(0) as i32;
    let es: Vec<Elt> = es.iter().map(|e| fd.mul_pow2(e, shift)).collect();
    let eb: Vec<Elt> = eb.iter().map(|e| fd.mul_pow2(e, shift)).collect();
    let sigma = eb.iter().filter_map(|e| fd.valuation(e)).min();
    let Some(sigma) = sigma else {
        return Ok(if es.iter().all(|e| fd.is_zero(e)) {
            RepVerdict {
                value: RepValue::Represented,
                reason: None,
                witness: Some(vec![vec![fd.zero(); n]; m]),
            }
        } else {
            RepVerdict::fails("scale".into())
        });
    };
    if es.iter().any(|e| fd.valuation(e).is_some_and(|v| v < sigma)) {
        return Ok(RepVerdict::fails(format!(
            "scale: entries of the small Gram matrix below 2^{}",
            sigma - shift
        )));
    }
    let prec = fd.precision() - sigma as u32;
    if prec < modulus_exp + 1 {
        return Err(Error::Precision(format!(
            "{prec} bits available, modulus 2^{modulus_exp} needs {}",
            modulus_exp + 1
        )));
    }
    let norm = |e: &Elt| to_coords(fd.shr_exact(e, sigma as u32).coords());
    let r = m * (m + 1) / 2;
    let p = Problem {
        f,
        n,
        m,
        mask: fd.mask(),
        modulus: to_coords(fd.residue_polynomial()),
        prec,
        g: eb.iter().map(norm).collect(),
        target: es.iter().map(norm).collect(),
        eqs: (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect(),
        subsets: combinations(n * m, r),
    };
    let branch = 1u64 << (n * m * f);
    let mut budget = opts.node_budget;
    let mut frontier: Vec<Vec<Coords>> = vec![vec![ZERO; n * m]];
    for level in 0..=modulus_exp {
        frontier.sort();
        if let Some(x) = frontier.iter().find(|x| p.certified(x)) {
            return Ok(found(&p, x));
        }
        if level == modulus_exp {
            break;
        }
        let mut next = Vec::new();
        for x in &frontier {
            for d in 0..branch {
                if budget == 0 {
                    return Ok(unknown("search budget exhausted".into()));
                }
                budget -= 1;
                let c = p.child(x, level, d);
                if p.admissible(&c, level + 1) {
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            return Ok(RepVerdict::fails(format!(
                "no solution modulo 2^{}",
                level + 2
            )));
        }
        if next.len() > opts.frontier_cap {
            next.sort();
            return Ok(depth_first(&p, next, level + 1, modulus_exp, branch, budget));
        }
        frontier = next;
    }
    Ok(unknown(format!(
        "solutions modulo 2^{modulus_exp} exist but none is certified"
    )))
}

fn depth_first(
    p: &Problem,
    roots: Vec<Vec<Coords>>,
    level: u32,
    modulus_exp: u32,
    branch: u64,
    mut budget: usize,
) -> RepVerdict {
    let mut stack: Vec<(Vec<Coords>, u32)> = roots.into_iter().rev().map(|x| (x, level)).collect();
    let mut survived = false;
    while let Some((x, j)) = stack.pop() {
        if p.certified(&x) {
            return found(p, &x);
        }
        if j == modulus_exp {
            survived = true;
            continue;
        }
        for d in (0..branch).rev() {
            if budget == 0 {
                return unknown("search budget exhausted".into());
            }
            budget -= 1;
            let c = p.child(&x, j, d);
            if p.admissible(&c, j + 1) {
                stack.push((c, j + 1));
            }
        }
    }
    if survived {
        unknown(format!(
            "solutions modulo 2^{modulus_exp} exist but none is certified"
        ))
    } else {
        RepVerdict::fails("no solution modulo a power of 2".into())
    }
}
