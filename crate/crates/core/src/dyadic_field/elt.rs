use super::Field;
use crate::error::{Error, Result};

/// `num / 2^den` with `num` given by power-basis coordinates modulo `2^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elt {
    num: Vec<u64>,
    den: u32,
}

impl Elt {
    pub(crate) fn from_parts(num: Vec<u64>, den: u32) -> Elt {
        Elt { num, den }
    }

    pub(crate) fn zero(f: usize) -> Elt {
        Elt { num: vec![0; f], den: 0 }
    }

    pub fn coords(&self) -> &[u64] {
        &self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }
}

fn trailing(c: &[u64]) -> Option<u32> {
    c.iter()
        .filter(|&&x| x != 0)
        .map(|x| x.trailing_zeros())
        .min()
}

impl Field {
    pub fn zero(&self) -> Elt {
        Elt::zero(self.f)
    }

    pub fn one(&self) -> Elt {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Elt {
        let mut num = vec![0; self.f];
        num[0] = (n as u64) & self.mask;
        Elt { num, den: 0 }
    }

    /// Builds `sum c_i x^i / 2^den`; missing coordinates are zero.
    pub fn elt(&self, coords: &[i64], den: u32) -> Result<Elt> {
        if coords.len() > self.f {
            return Err(Error::Parse(format!(
                "{} coordinates given for degree {}",
                coords.len(),
                self.f
            )));
        }
        let mut num = vec![0; self.f];
        for (dst, &c) in num.iter_mut().zip(coords) {
            *dst = (c as u64) & self.mask;
        }
        Ok(self.normalize(Elt { num, den }))
    }

    /// `2^e`, with a denominator when `e < 0`.
    pub fn pow2(&self, e: i32) -> Elt {
        if e >= 0 {
            self.mul_pow2(&self.one(), e)
        } else {
            Elt { num: self.one().num, den: (-e) as u32 }
        }
    }

    pub fn mul_pow2(&self, a: &Elt, e: i32) -> Elt {
        if e >= 0 {
            let num = a
                .num
                .iter()
                .map(|&c| if e >= 64 { 0 } else { (c << e) & self.mask })
                .collect();
            self.normalize(Elt { num, den: a.den })
        } else {
            Elt { num: a.num.clone(), den: a.den + (-e) as u32 }
        }
    }

    fn normalize(&self, mut a: Elt) -> Elt {
        if a.den == 0 {
            return a;
        }
        match trailing(&a.num) {
            None => Elt::zero(self.f),
            Some(t) => {
                let k = t.min(a.den);
                if k > 0 {
                    for c in &mut a.num {
                        *c >>= k;
                    }
                    a.den -= k;
                }
                a
            }
        }
    }

    fn aligned(&self, a: &Elt, b: &Elt) -> (Vec<u64>, Vec<u64>, u32) {
        let d = a.den.max(b.den);
        let lift = |x: &Elt| -> Vec<u64> {
            let s = d - x.den;
            x.num
                .iter()
                .map(|&c| if s >= 64 { 0 } else { (c << s) & self.mask })
                .collect()
        };
        (lift(a), lift(b), d)
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        if a.den == 0 && b.den == 0 {
            let num = a
                .num
                .iter()
                .zip(&b.num)
                .map(|(x, y)| x.wrapping_add(*y) & self.mask)
                .collect();
            return Elt { num, den: 0 };
        }
        let (x, y, d) = self.aligned(a, b);
        let num = x
            .iter()
            .zip(&y)
            .map(|(p, q)| p.wrapping_add(*q) & self.mask)
            .collect();
        self.normalize(Elt { num, den: d })
    }

    pub fn neg(&self, a: &Elt) -> Elt {
        let num = a.num.iter().map(|c| c.wrapping_neg() & self.mask).collect();
        Elt { num, den: a.den }
    }

    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let num = self.mul_coords(&a.num, &b.num, self.mask);
        self.normalize(Elt { num, den: a.den + b.den })
    }

    pub fn is_zero(&self, a: &Elt) -> bool {
        a.num.iter().all(|&c| c == 0)
    }

    /// `None` stands for `+inf` (zero at working precision).
    pub fn valuation(&self, a: &Elt) -> Option<i32> {
        trailing(&a.num).map(|t| t as i32 - a.den as i32)
    }

    pub fn is_integral(&self, a: &Elt) -> bool {
        self.valuation(a).map_or(true, |v| v >= 0)
    }

    /// Splits `a = 2^v u` at the numerator level; returns `(v(num), u)`.
    pub(crate) fn split_unit(&self, a: &Elt) -> Result<(u32, Vec<u64>)> {
        let t = trailing(&a.num).ok_or(Error::Zero)?;
        Ok((t, a.num.iter().map(|c| c >> t).collect()))
    }

    /// Exact division of an integral element by `2^k`; the caller guarantees divisibility.
    pub(crate) fn shr_exact(&self, a: &Elt, k: u32) -> Elt {
        debug_assert_eq!(a.den, 0);
        Elt {
            num: a.num.iter().map(|c| c >> k).collect(),
            den: 0,
        }
    }

    /// Inverse of a unit, exact modulo `2^N`.
    pub fn unit_inverse(&self, a: &Elt) -> Result<Elt> {
        if self.valuation(a) != Some(0) {
            return Err(Error::NotUnit);
        }
        let u: Vec<u64> = a.num.clone();
        let bits = |c: &[u64]| c.iter().enumerate().fold(0u64, |acc, (i, x)| acc | ((x & 1) << i));
        let target = bits(&u);
        let r = (1u64..(1 << self.f))
            .find(|&r| self.gf2_mul(r, target) == 1)
            .expect("residue field is a field");
        let mut x: Vec<u64> = (0..self.f).map(|i| (r >> i) & 1).collect();
        let two = self.int(2).num;
        let mut correct = 1u32;
        while correct < self.precision {
            let ux = self.mul_coords(&u, &x, self.mask);
            let t: Vec<u64> = two
                .iter()
                .zip(&ux)
                .map(|(p, q)| p.wrapping_sub(*q) & self.mask)
                .collect();
            x = self.mul_coords(&x, &t, self.mask);
            correct *= 2;
        }
        Ok(Elt { num: x, den: 0 })
    }

    /// Parses decimal (`-3`, `5/2^1`) or coordinate (`1,4`, `0,1/2^2`) text.
    pub fn parse(&self, s: &str) -> Result<Elt> {
        let s = s.trim();
        let (body, den) = match s.split_once('/') {
            None => (s, 0u32),
            Some((body, d)) => {
                let d = d.trim();
                let e = if d == "2" {
                    1
                } else {
                    d.strip_prefix("2^")
                        .and_then(|e| e.trim().parse::<u32>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad denominator in {s:?}")))?
                };
                (body, e)
            }
        };
        let coords = body
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coordinate in {s:?}")))
            })
            .collect::<Result<Vec<i64>>>()?;
        if den > 60 {
            return Err(Error::Parse(format!("denominator too deep in {s:?}")));
        }
        self.elt(&coords, den)
    }

    fn centered(&self, c: u64) -> i64 {
        if c >> (self.precision - 1) & 1 == 1 {
            c as i64 - (1i64 << self.precision)
        } else {
            c as i64
        }
    }

    pub fn format(&self, a: &Elt) -> String {
        let body = a
            .num
            .iter()
            .map(|&c| self.centered(c).to_string())
            .collect::<Vec<_>>()
            .join(",");
        if a.den == 0 {
            body
        } else {
            format!("{body}/2^{}", a.den)
        }
    }
}
