//! Arithmetic in the ring of integers of an unramified extension of Q2,
//! square classes and Hilbert symbols.
//!
//! Elements are power-basis coordinates truncated modulo `2^N`, with an
//! optional power-of-two denominator. The basis is `1, x, ..., x^(f-1)` where
//! `x` is a root of a fixed lift of an irreducible residue polynomial.

mod classes;
mod elt;
pub mod isotropy;

pub use classes::{IdealExp, SquareClass};
pub use elt::Elt;

use crate::error::{Error, Result};

/// Low coefficients `m_0..m_{f-1}` of the monic residue polynomials
/// `x^f + m_{f-1} x^{f-1} + ... + m_0`, indexed by `f - 1`.
const RESIDUE_POLYS: [&[u64]; 6] = [
    &[1],
    &[1, 1],
    &[1, 1, 0],
    &[1, 1, 0, 0],
    &[1, 0, 1, 0, 0],
    &[1, 1, 0, 0, 0, 0],
];

pub const MAX_DEGREE: usize = 6;
pub const DEFAULT_PRECISION: u32 = 12;

/// Mask used while building the class tables. Independent of the user precision.
const TABLE_MASK: u64 = (1 << 40) - 1;

/// Shared read-only configuration of the field `F`.
#[derive(Debug, Clone)]
pub struct Field {
    f: usize,
    precision: u32,
    mask: u64,
    modulus: Vec<u64>,
    rho: Elt,
    unit_id: Vec<u16>,
    unit_rep: Vec<u32>,
    minus_one: SquareClass,
    delta: SquareClass,
    hilbert: Vec<i8>,
}

const NON_UNIT: u16 = u16::MAX;

impl Field {
    pub fn new(f: i64, precision: i64) -> Result<Field> {
        if f < 1 || f as usize > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(f));
        }
        if !(5..=60).contains(&precision) {
            return Err(Error::BadPrecision(precision));
        }
        let f = f as usize;
        let mut fd = Field {
            f,
            precision: precision as u32,
            mask: (1u64 << precision) - 1,
            modulus: RESIDUE_POLYS[f - 1].to_vec(),
            rho: Elt::zero(f),
            unit_id: Vec::new(),
            unit_rep: Vec::new(),
            minus_one: SquareClass::ONE,
            delta: SquareClass::ONE,
            hilbert: Vec::new(),
        };
        debug_assert!(fd.residue_poly_irreducible());
        fd.rho = fd.find_rho();
        fd.build_unit_classes();
        let minus_one = fd.int(-1);
        fd.minus_one = fd.square_class(&minus_one)?;
        let delta = fd.delta_elt();
        fd.delta = fd.square_class(&delta)?;
        fd.hilbert = classes::hilbert_table(&fd);
        Ok(fd)
    }

    /// `Q2` with the default precision.
    pub fn q2() -> Field {
        Field::new(1, DEFAULT_PRECISION as i64).expect("valid configuration")
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub(crate) fn mask(&self) -> u64 {
        self.mask
    }

    pub fn residue_polynomial(&self) -> &[u64] {
        &self.modulus
    }

    /// The least power-basis element whose residue has absolute trace 1.
    pub fn rho(&self) -> &Elt {
        &self.rho
    }

    /// `1 + 4 rho`.
    pub fn delta_elt(&self) -> Elt {
        let four_rho = self.mul_pow2(&self.rho, 2);
        self.add(&self.one(), &four_rho)
    }

    pub fn delta_class(&self) -> SquareClass {
        self.delta
    }

    pub fn minus_one_class(&self) -> SquareClass {
        self.minus_one
    }

    /// Number of square classes, `2^(f+2)`.
    pub fn class_count(&self) -> usize {
        1 << (self.f + 2)
    }

    /// All square classes, units first, each in increasing order of representative.
    pub fn classes(&self) -> Vec<SquareClass> {
        let mut units = self.unit_classes();
        let odd: Vec<SquareClass> = units.iter().map(|c| c.times_two()).collect();
        units.extend(odd);
        units
    }

    /// The `2^(f+1)` unit square classes.
    pub fn unit_classes(&self) -> Vec<SquareClass> {
        (0..self.unit_rep.len() as u16)
            .map(SquareClass::from_unit_id)
            .collect()
    }

    /// Square classes paired with their canonical representatives.
    pub fn square_class_reps(&self) -> Vec<(SquareClass, Elt)> {
        self.classes()
            .into_iter()
            .map(|c| (c, self.class_rep(c)))
            .collect()
    }

    /// Canonical representative: the least unit modulo 8 in the class, doubled
    /// for odd valuation.
    pub fn class_rep(&self, c: SquareClass) -> Elt {
        let idx = self.unit_rep[c.unit_id() as usize];
        let unit = self.from_mod8_index(idx);
        if c.parity() == 1 {
            self.mul_pow2(&unit, 1)
        } else {
            unit
        }
    }

    pub fn class_of_pow2(&self, e: i32) -> SquareClass {
        if e.rem_euclid(2) == 1 {
            SquareClass::TWO
        } else {
            SquareClass::ONE
        }
    }

    pub fn square_class(&self, x: &Elt) -> Result<SquareClass> {
        let (vnum, unit) = self.split_unit(x)?;
        if self.precision - vnum < 3 {
            return Err(Error::Precision(format!(
                "unit part of {} known modulo less than 8",
                self.format(x)
            )));
        }
        let id = self.unit_id[self.mod8_index(&unit)];
        let v = vnum as i64 - x.den() as i64;
        Ok(SquareClass::new(v.rem_euclid(2) as u16, id))
    }

    pub fn is_square(&self, x: &Elt) -> Result<bool> {
        Ok(self.square_class(x)? == SquareClass::ONE)
    }

    /// Exponent of the quadratic defect of a unit: `None` for squares, 2 for the
    /// class of `Delta`, 1 otherwise.
    pub fn quadratic_defect(&self, u: &Elt) -> Result<IdealExp> {
        if self.valuation(u) != Some(0) {
            return Err(Error::NotUnit);
        }
        Ok(self.class_defect(self.square_class(u)?))
    }

    pub fn class_defect(&self, c: SquareClass) -> IdealExp {
        if c == SquareClass::ONE {
            IdealExp::ZERO
        } else if c == self.delta {
            IdealExp::pow2(2)
        } else if c.parity() == 0 {
            IdealExp::pow2(1)
        } else {
            IdealExp::pow2(0)
        }
    }

    pub fn hilbert(&self, a: &Elt, b: &Elt) -> Result<i8> {
        Ok(self.hilbert_class(self.square_class(a)?, self.square_class(b)?))
    }

    #[inline]
    pub fn hilbert_class(&self, a: SquareClass, b: SquareClass) -> i8 {
        self.hilbert[a.index() * self.class_count() + b.index()]
    }

    pub(crate) fn unit_class_of_mod8(&self, idx: usize) -> Option<u16> {
        match self.unit_id[idx] {
            NON_UNIT => None,
            id => Some(id),
        }
    }

    /// Unit square class of an integral numerator, read from its image mod 8.
    pub(crate) fn unit_class_of_coords(&self, coords: &[u64]) -> Option<SquareClass> {
        self.unit_class_of_mod8(self.mod8_index(coords))
            .map(SquareClass::from_unit_id)
    }

    fn mod8_index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .enumerate()
            .fold(0, |acc, (i, c)| acc | (((c & 7) as usize) << (3 * i)))
    }

    fn from_mod8_index(&self, idx: u32) -> Elt {
        let coords = (0..self.f)
            .map(|i| ((idx >> (3 * i)) & 7) as u64)
            .collect();
        Elt::from_parts(coords, 0)
    }

    /// Polynomial product reduced by the residue polynomial lift, modulo `mask + 1`.
    pub(crate) fn mul_coords(&self, a: &[u64], b: &[u64], mask: u64) -> Vec<u64> {
        let f = self.f;
        let mut r = vec![0u64; 2 * f - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = r[i + j].wrapping_add(ai.wrapping_mul(bj));
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            r[k] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                if m != 0 {
                    r[k - f + i] = r[k - f + i].wrapping_sub(c.wrapping_mul(m));
                }
            }
        }
        r.truncate(f);
        for x in &mut r {
            *x &= mask;
        }
        r
    }

    fn residue_bits(&self) -> u64 {
        self.modulus
            .iter()
            .enumerate()
            .fold(1 << self.f, |acc, (i, m)| acc | ((m & 1) << i))
    }

    fn gf2_mul(&self, a: u64, b: u64) -> u64 {
        let poly = self.residue_bits();
        let mut r = 0u64;
        for i in 0..self.f {
            if (b >> i) & 1 == 1 {
                r ^= a << i;
            }
        }
        for k in (self.f..2 * self.f).rev() {
            if (r >> k) & 1 == 1 {
                r ^= poly << (k - self.f);
            }
        }
        r
    }

    fn residue_trace(&self, r: u64) -> u64 {
        let mut t = 0;
        let mut p = r;
        for _ in 0..self.f {
            t ^= p;
            p = self.gf2_mul(p, p);
        }
        t
    }

    fn residue_poly_irreducible(&self) -> bool {
        let poly = self.residue_bits();
        let deg = |p: u64| 63 - p.leading_zeros() as usize;
        (2u64..(1 << self.f)).all(|d| {
            let mut r = poly;
            while r != 0 && deg(r) >= deg(d) {
                r ^= d << (deg(r) - deg(d));
            }
            r != 0 || deg(d) == self.f
        })
    }

    fn find_rho(&self) -> Elt {
        let r = (1u64..(1 << self.f))
            .find(|&r| self.residue_trace(r) == 1)
            .expect("trace is surjective");
        let coords = (0..self.f).map(|i| (r >> i) & 1).collect();
        Elt::from_parts(coords, 0)
    }

    fn build_unit_classes(&mut self) {
        let size = 1usize << (3 * self.f);
        let coords_of = |idx: usize| -> Vec<u64> {
            (0..self.f).map(|i| ((idx >> (3 * i)) & 7) as u64).collect()
        };
        let is_unit = |c: &[u64]| c.iter().any(|x| x & 1 == 1);
        let mut squares = vec![false; size];
        for idx in 0..size {
            let c = coords_of(idx);
            if is_unit(&c) {
                let sq = self.mul_coords(&c, &c, 7);
                squares[self.mod8_index(&sq)] = true;
            }
        }
        let squares: Vec<Vec<u64>> = (0..size)
            .filter(|&i| squares[i])
            .map(coords_of)
            .collect();
        let mut ids = vec![NON_UNIT; size];
        let mut group: Vec<(Vec<u64>, u16)> = vec![(coords_of(1), 0)];
        let mark = |ids: &mut Vec<u16>, h: &[u64], id: u16| {
            for s in &squares {
                let t = self.mul_coords(h, s, 7);
                ids[self.mod8_index(&t)] = id;
            }
        };
        mark(&mut ids, &coords_of(1), 0);
        let mut rank = 0;
        for idx in 0..size {
            let u = coords_of(idx);
            if !is_unit(&u) || ids[idx] != NON_UNIT {
                continue;
            }
            let mut fresh = Vec::with_capacity(group.len());
            for (g, gid) in &group {
                let h = self.mul_coords(g, &u, 7);
                let id = gid | (1 << rank);
                mark(&mut ids, &h, id);
                fresh.push((h, id));
            }
            group.extend(fresh);
            rank += 1;
        }
        assert_eq!(rank, self.f + 1, "unit square classes must number 2^(f+1)");
        let mut reps = vec![u32::MAX; 1 << rank];
        for (idx, &id) in ids.iter().enumerate() {
            if id != NON_UNIT && reps[id as usize] == u32::MAX {
                reps[id as usize] = idx as u32;
            }
        }
        self.unit_id = ids;
        self.unit_rep = reps;
    }
}
