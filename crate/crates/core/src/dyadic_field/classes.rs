use std::fmt;
use std::ops::Mul;

use super::{Field, TABLE_MASK};

/// Element of `F*/F*^2`, an elementary abelian 2-group of rank `f + 2`.
///
/// Bit 0 is the valuation parity; the remaining bits index the unit class.
/// Multiplication is XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass(u16);

impl SquareClass {
    pub const ONE: SquareClass = SquareClass(0);
    pub const TWO: SquareClass = SquareClass(1);

    pub(crate) fn new(parity: u16, unit_id: u16) -> SquareClass {
        SquareClass(parity | (unit_id << 1))
    }

    pub(crate) fn from_unit_id(id: u16) -> SquareClass {
        SquareClass(id << 1)
    }

    pub fn from_index(i: usize) -> SquareClass {
        SquareClass(i as u16)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn parity(self) -> u16 {
        self.0 & 1
    }

    pub fn is_unit(self) -> bool {
        self.parity() == 0
    }

    pub(crate) fn unit_id(self) -> u16 {
        self.0 >> 1
    }

    pub fn unit_part(self) -> SquareClass {
        SquareClass(self.0 & !1)
    }

    pub fn times_two(self) -> SquareClass {
        SquareClass(self.0 ^ 1)
    }
}

impl Mul for SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: SquareClass) -> SquareClass {
        SquareClass(self.0 ^ rhs.0)
    }
}

/// Fractional ideal `2^exp O`, or the zero ideal when `exp` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IdealExp(Option<i32>);

impl IdealExp {
    pub const ZERO: IdealExp = IdealExp(None);

    pub fn pow2(e: i32) -> IdealExp {
        IdealExp(Some(e))
    }

    pub fn exp(self) -> Option<i32> {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_none()
    }

    /// `self ⊇ other`.
    pub fn contains(self, other: IdealExp) -> bool {
        match (self.0, other.0) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        }
    }

    pub fn mul(self, other: IdealExp) -> IdealExp {
        match (self.0, other.0) {
            (Some(a), Some(b)) => IdealExp(Some(a + b)),
            _ => IdealExp::ZERO,
        }
    }
}

impl fmt::Display for IdealExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "zero ideal"),
            Some(e) => write!(f, "2^{e}O"),
        }
    }
}

/// XOR basis of a subspace of the class group, kept in echelon form.
#[derive(Default)]
struct Span {
    basis: Vec<u16>,
}

impl Span {
    fn reduce(&self, mut v: u16) -> u16 {
        for &b in &self.basis {
            let top = 15 - b.leading_zeros();
            if (v >> top) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    fn insert(&mut self, v: u16) {
        let r = self.reduce(v);
        if r != 0 {
            self.basis.push(r);
            self.basis.sort_by(|a, b| b.cmp(a));
        }
    }

    fn contains(&self, v: u16) -> bool {
        self.reduce(v) == 0
    }
}

/// Class of the nonzero value `coords` computed modulo `2^40`.
fn table_class(fd: &Field, coords: &[u64]) -> Option<SquareClass> {
    let t = coords.iter().filter(|&&c| c != 0).map(|c| c.trailing_zeros()).min()?;
    if t + 4 > 40 {
        return None;
    }
    let unit: Vec<u64> = coords.iter().map(|c| c >> t).collect();
    let id = fd.unit_class_of_mod8(fd.mod8_index(&unit))?;
    Some(SquareClass::new((t & 1) as u16, id))
}

/// Norm group of `F(sqrt a)` for a nonsquare class `a`, as an index-2 subgroup.
fn norm_group(fd: &Field, a: SquareClass) -> Span {
    let ra = fd.class_rep(a);
    let target = fd.f + 1;
    let mut span = Span::default();
    for digits in [3u32, 4] {
        let count = 1usize << (digits as usize * fd.f);
        let elt = |idx: usize| -> Vec<u64> {
            (0..fd.f)
                .map(|i| ((idx >> (digits as usize * i)) & ((1 << digits) - 1)) as u64)
                .collect()
        };
        for xi in 1..count {
            let x = elt(xi);
            let ax2 = {
                let x2 = fd.mul_coords(&x, &x, TABLE_MASK);
                fd.mul_coords(ra.coords(), &x2, TABLE_MASK)
            };
            for zi in 0..count {
                let z = elt(zi);
                let z2 = fd.mul_coords(&z, &z, TABLE_MASK);
                let val: Vec<u64> = z2
                    .iter()
                    .zip(&ax2)
                    .map(|(p, q)| p.wrapping_sub(*q) & TABLE_MASK)
                    .collect();
                if let Some(c) = table_class(fd, &val) {
                    span.insert(c.0);
                    if span.basis.len() == target {
                        return span;
                    }
                }
            }
        }
    }
    panic!("norm group search did not reach index 2");
}

pub(super) fn hilbert_table(fd: &Field) -> Vec<i8> {
    let n = fd.class_count();
    let delta = fd.delta_class();
    let sign = |p: u16| if p == 0 { 1 } else { -1 };
    let mut table = vec![1i8; n * n];
    for ai in 1..n {
        let a = SquareClass::from_index(ai);
        let row = &mut table[ai * n..(ai + 1) * n];
        if a == delta {
            for (bi, h) in row.iter_mut().enumerate() {
                *h = sign(SquareClass::from_index(bi).parity());
            }
            continue;
        }
        let span = norm_group(fd, a);
        for (bi, h) in row.iter_mut().enumerate() {
            let b = SquareClass::from_index(bi);
            *h = if b == SquareClass::ONE {
                1
            } else if b == delta {
                sign(a.parity())
            } else if span.contains(b.0) {
                1
            } else {
                -1
            };
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_arithmetic() {
        let a = IdealExp::pow2(1);
        let b = IdealExp::pow2(3);
        assert!(a.contains(b));
        assert!(!b.contains(a));
        assert!(b.contains(IdealExp::ZERO));
        assert!(!IdealExp::ZERO.contains(a));
        assert_eq!(a.mul(b), IdealExp::pow2(4));
        assert_eq!(a.mul(IdealExp::ZERO), IdealExp::ZERO);
    }

    #[test]
    fn class_group_law_exhaustive() {
        for f in [1, 2] {
            let fd = Field::new(f, 12).unwrap();
            let reps = fd.square_class_reps();
            for (ca, a) in &reps {
                for (cb, b) in &reps {
                    let ab = fd.mul(a, b);
                    assert_eq!(fd.square_class(&ab).unwrap(), *ca * *cb);
                }
            }
        }
    }

    #[test]
    fn hilbert_algebra_small_degrees() {
        for f in 1..=3 {
            let fd = Field::new(f, 12).unwrap();
            let cls = fd.classes();
            for &a in &cls {
                assert_eq!(fd.hilbert_class(a, a * fd.minus_one_class()), 1);
                for &b in &cls {
                    assert_eq!(fd.hilbert_class(a, b), fd.hilbert_class(b, a));
                    for &c in &cls {
                        assert_eq!(
                            fd.hilbert_class(a, b * c),
                            fd.hilbert_class(a, b) * fd.hilbert_class(a, c)
                        );
                    }
                }
            }
        }
    }
}
