use super::{JordanComponent, JordanLattice, Shape};
use crate::dyadic_field::{Elt, Field, SquareClass};
use crate::error::{Error, Result};
use crate::quad_space::SpaceInv;

/// Deepest denominator `2^-B` accepted in a Gram matrix.
pub const MAX_DENOMINATOR: u32 = 8;

/// Symmetric matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<Elt>,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<Elt>>) -> Result<GramMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidLattice("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(GramMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]], fd: &Field) -> Result<GramMatrix> {
        GramMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| fd.int(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Elt {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Elt>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Block-diagonal Gram matrix of a Jordan splitting.
    pub fn from_lattice(l: &JordanLattice, fd: &Field) -> GramMatrix {
        let mut blocks: Vec<Vec<Vec<Elt>>> = Vec::new();
        for c in l.components() {
            let s = fd.pow2(c.scale);
            let scaled = |x: i64| fd.mul(&s, &fd.int(x));
            match &c.shape {
                Shape::Proper(diag) => {
                    for &e in diag {
                        blocks.push(vec![vec![fd.mul(&s, &fd.class_rep(e))]]);
                    }
                }
                Shape::Improper { half_dim, delta } => {
                    for k in 0..*half_dim {
                        if *delta && k + 1 == *half_dim {
                            let two_rho = fd.mul(&fd.int(2), fd.rho());
                            blocks.push(vec![
                                vec![scaled(2), scaled(1)],
                                vec![scaled(1), fd.mul(&s, &two_rho)],
                            ]);
                        } else {
                            blocks.push(vec![
                                vec![scaled(0), scaled(1)],
                                vec![scaled(1), scaled(0)],
                            ]);
                        }
                    }
                }
            }
        }
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut rows = vec![vec![fd.zero(); n]; n];
        let mut at = 0;
        for b in blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    rows[at + i][at + j] = x.clone();
                }
            }
            at += b.len();
        }
        GramMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// `P^T G P`.
    pub fn transform(&self, p: &[Vec<Elt>], fd: &Field) -> Result<GramMatrix> {
        let n = self.n;
        if p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidLattice("basis change has wrong shape".into()));
        }
        let mut gp = vec![vec![fd.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = fd.zero();
                for k in 0..n {
                    acc = fd.add(&acc, &fd.mul(self.get(i, k), &p[k][j]));
                }
                gp[i][j] = acc;
            }
        }
        let mut out = vec![vec![fd.zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut acc = fd.zero();
                for k in 0..n {
                    acc = fd.add(&acc, &fd.mul(&p[k][i], &gp[k][j]));
                }
                out[j][i] = acc.clone();
                out[i][j] = acc;
            }
        }
        GramMatrix::new(out)
    }
}

/// `2^scale [[alpha, 1], [1, beta]]`.
pub fn a_lattice(alpha: &Elt, beta: &Elt, scale: i32, fd: &Field) -> Result<GramMatrix> {
    if !fd.is_integral(alpha) || !fd.is_integral(beta) {
        return Err(Error::NotIntegral);
    }
    let s = fd.pow2(scale);
    GramMatrix::new(vec![
        vec![fd.mul(&s, alpha), s.clone()],
        vec![s.clone(), fd.mul(&s, beta)],
    ])
}

enum Piece {
    Line { scale: i32, unit: SquareClass },
    Block { scale: i32, neg_det: SquareClass },
}

impl Piece {
    fn scale(&self) -> i32 {
        match self {
            Piece::Line { scale, .. } | Piece::Block { scale, .. } => *scale,
        }
    }
}

fn precision_err(msg: &str) -> Error {
    Error::Precision(msg.to_string())
}

impl GramMatrix {
    /// Jordan splitting by pivoting on a minimal-valuation entry, diagonal
    /// pivots first, lowest index first.
    pub fn jordan_split(&self, fd: &Field) -> Result<JordanLattice> {
        let n = self.n;
        if n == 0 {
            return Ok(JordanLattice::zero());
        }
        let b = self.entries.iter().map(|e| e.den()).max().unwrap_or(0);
        if b > MAX_DENOMINATOR {
            return Err(Error::InvalidLattice(format!(
                "denominator 2^{b} deeper than 2^{MAX_DENOMINATOR}"
            )));
        }
        let top = fd.precision();
        let mut w: Vec<Vec<Elt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| fd.mul_pow2(self.get(i, j), b as i32))
                    .collect()
            })
            .collect();
        let mut prec = top;
        let mut live: Vec<usize> = (0..n).collect();
        let mut pieces = Vec::new();
        let val = |x: &Elt| fd.valuation(x).map(|v| v as u32);
        while !live.is_empty() {
            let mut best: Option<(u32, bool, usize, usize)> = None;
            for (a, &i) in live.iter().enumerate() {
                for &j in &live[a..] {
                    if let Some(v) = val(&w[i][j]).filter(|&v| v < prec) {
                        let key = (v, i != j, i, j);
                        if best.map_or(true, |b| key < b) {
                            best = Some(key);
                        }
                    }
                }
            }
            let (s, off, i, j) =
                best.ok_or_else(|| precision_err("matrix is singular at working precision"))?;
            let rel = s as i32 - b as i32;
            if !off {
                if prec - s < 3 {
                    return Err(precision_err("diagonal pivot known modulo less than 8"));
                }
                let u = fd.shr_exact(&w[i][i], s);
                let unit = fd
                    .unit_class_of_coords(u.coords())
                    .expect("pivot quotient is a unit");
                let uinv = fd.unit_inverse(&u)?;
                live.retain(|&r| r != i);
                let t: Vec<Elt> = live
                    .iter()
                    .map(|&r| fd.mul(&fd.shr_exact(&w[r][i], s), &uinv))
                    .collect();
                for (a, &r) in live.iter().enumerate() {
                    for &q in &live[a..] {
                        let x = fd.sub(&w[r][q], &fd.mul(&t[a], &w[i][q]));
                        w[q][r] = x.clone();
                        w[r][q] = x;
                    }
                }
                pieces.push(Piece::Line { scale: rel, unit });
            } else {
                let (a, c, d) = (w[i][i].clone(), w[i][j].clone(), w[j][j].clone());
                let det = fd.sub(&fd.mul(&a, &d), &fd.mul(&c, &c));
                let det_prec = (prec + s + 1).min(top) as i64 - 2 * s as i64;
                if det_prec < 3 || val(&det) != Some(2 * s) {
                    return Err(precision_err("block determinant known modulo less than 8"));
                }
                let det_unit = fd.shr_exact(&det, 2 * s);
                let neg_det = fd
                    .unit_class_of_coords(fd.neg(&det_unit).coords())
                    .expect("block determinant quotient is a unit");
                let dinv = fd.unit_inverse(&det_unit)?;
                live.retain(|&r| r != i && r != j);
                let coef: Vec<(Elt, Elt)> = live
                    .iter()
                    .map(|&r| {
                        let xn = fd.sub(&fd.mul(&w[r][i], &d), &fd.mul(&w[r][j], &c));
                        let yn = fd.sub(&fd.mul(&w[r][j], &a), &fd.mul(&w[r][i], &c));
                        (
                            fd.mul(&fd.shr_exact(&xn, 2 * s), &dinv),
                            fd.mul(&fd.shr_exact(&yn, 2 * s), &dinv),
                        )
                    })
                    .collect();
                for (k, &r) in live.iter().enumerate() {
                    for &q in &live[k..] {
                        let (x, y) = &coef[k];
                        let sub = fd.add(&fd.mul(x, &w[i][q]), &fd.mul(y, &w[j][q]));
                        let v = fd.sub(&w[r][q], &sub);
                        w[q][r] = v.clone();
                        w[r][q] = v;
                    }
                }
                prec = prec.min(top - s);
                pieces.push(Piece::Block { scale: rel, neg_det });
            }
        }
        let mut comps = Vec::new();
        let mut k = 0;
        while k < pieces.len() {
            let scale = pieces[k].scale();
            let mut lines = Vec::new();
            let mut blocks = Vec::new();
            while k < pieces.len() && pieces[k].scale() == scale {
                match pieces[k] {
                    Piece::Line { unit, .. } => lines.push(unit),
                    Piece::Block { neg_det, .. } => blocks.push(neg_det),
                }
                k += 1;
            }
            comps.push(merge_group(scale, lines, blocks, fd)?);
        }
        JordanLattice::new(comps, fd)
    }
}

/// Turns the pieces of one scale into a canonical component.
fn merge_group(
    scale: i32,
    lines: Vec<SquareClass>,
    blocks: Vec<SquareClass>,
    fd: &Field,
) -> Result<JordanComponent> {
    let delta = fd.delta_class();
    if blocks.iter().any(|&c| c != SquareClass::ONE && c != delta) {
        return Err(precision_err("binary block with unexpected discriminant"));
    }
    if lines.is_empty() {
        let prod = blocks.iter().fold(SquareClass::ONE, |acc, &c| acc * c);
        return Ok(JordanComponent::improper(scale, blocks.len(), prod == delta));
    }
    if blocks.is_empty() {
        return Ok(JordanComponent::proper(scale, lines));
    }
    let h = SpaceInv::hyperbolic(fd);
    let m1 = fd.minus_one_class();
    let anisotropic = SpaceInv::from_classes(&[SquareClass::TWO, SquareClass::TWO * m1 * delta], fd);
    let space = blocks.iter().fold(SpaceInv::from_classes(&lines, fd), |acc, &c| {
        acc.sum(if c == SquareClass::ONE { &h } else { &anisotropic }, fd)
    });
    Ok(JordanComponent::proper(scale, unit_realization(&space, fd)?))
}

/// A diagonal of unit classes spanning `space`, padded with ones.
fn unit_realization(space: &SpaceInv, fd: &Field) -> Result<Vec<SquareClass>> {
    let n = space.dim;
    let units = fd.unit_classes();
    let free = n.min(3);
    for &x in &units {
        for &y in &units {
            let tail = match free {
                1 => vec![space.disc],
                2 => vec![x, x * space.disc],
                _ => vec![x, y, x * y * space.disc],
            };
            if tail.iter().all(|c| c.is_unit()) {
                let mut diag = vec![SquareClass::ONE; n - free];
                diag.extend(tail);
                if SpaceInv::from_classes(&diag, fd) == *space {
                    return Ok(diag);
                }
            }
        }
    }
    Err(Error::InvalidLattice(
        "no unit diagonal spans the unimodular component".into(),
    ))
}
