//! Congruence search for primitive zeros of diagonal forms, used as an
//! independent check on the Hilbert symbol and isotropy tables.

use super::{Elt, Field};

/// Decides whether `sum c_i x_i^2` has a nontrivial zero over `F` by searching
/// primitive zeros modulo `2^j` for `j <= max_exp`.
///
/// Returns `Some(false)` when no primitive zero survives to some level,
/// `Some(true)` when a zero `X` satisfies `v(Q(X)) >= 2t + 1` with `t` the
/// least valuation of a partial derivative, and `None` otherwise.
pub fn diagonal_isotropic(fd: &Field, coeffs: &[Elt], max_exp: u32) -> Option<bool> {
    assert!(coeffs.iter().all(|c| fd.is_integral(c) && !fd.is_zero(c)));
    assert!(max_exp + 3 <= fd.precision(), "precision too small for search depth");
    let n = coeffs.len();
    let f = fd.degree();
    let digits = n * f;
    let mut search = Search {
        fd,
        coeffs,
        max_exp,
        digits,
    };
    let mut x = vec![fd.zero(); n];
    let mut found_unknown = false;
    for d in 1u64..(1 << digits) {
        set_digits(fd, &mut x, d, 0);
        match search.descend(&mut x, 1) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => found_unknown = true,
        }
        set_digits(fd, &mut x, 0, 0);
    }
    if found_unknown {
        None
    } else {
        Some(false)
    }
}

struct Search<'a> {
    fd: &'a Field,
    coeffs: &'a [Elt],
    max_exp: u32,
    digits: usize,
}

/// Writes binary digit vector `d` into bit `level` of every coordinate.
fn set_digits(fd: &Field, x: &mut [Elt], d: u64, level: u32) {
    let f = fd.degree();
    for (i, xi) in x.iter_mut().enumerate() {
        let mut coords = xi.coords().to_vec();
        for (k, c) in coords.iter_mut().enumerate() {
            let bit = (d >> (i * f + k)) & 1;
            *c = (*c & !(1u64 << level)) | (bit << level);
        }
        *xi = Elt::from_parts(coords, 0);
    }
}

impl Search<'_> {
    fn value(&self, x: &[Elt]) -> Elt {
        let fd = self.fd;
        x.iter().zip(self.coeffs).fold(fd.zero(), |acc, (xi, c)| {
            fd.add(&acc, &fd.mul(c, &fd.mul(xi, xi)))
        })
    }

    fn certified(&self, x: &[Elt], q: &Elt) -> bool {
        let fd = self.fd;
        let t = x
            .iter()
            .zip(self.coeffs)
            .filter_map(|(xi, c)| fd.valuation(&fd.mul(&fd.int(2), &fd.mul(c, xi))))
            .min();
        match (t, fd.valuation(q)) {
            (Some(t), None) => (2 * t as u32 + 1) < fd.precision(),
            (Some(t), Some(vq)) => vq >= 2 * t + 1,
            _ => false,
        }
    }

    /// `x` is fixed modulo `2^level`.
    fn descend(&mut self, x: &mut Vec<Elt>, level: u32) -> Option<bool> {
        let q = self.value(x);
        let vq = self.fd.valuation(&q).map_or(u32::MAX, |v| v as u32);
        if vq < level {
            return Some(false);
        }
        if self.certified(x, &q) {
            return Some(true);
        }
        if level >= self.max_exp {
            return None;
        }
        let mut unknown = false;
        for d in 0u64..(1 << self.digits) {
            set_digits(self.fd, x, d, level);
            match self.descend(x, level + 1) {
                Some(true) => {
                    return Some(true);
                }
                Some(false) => {}
                None => unknown = true,
            }
        }
        set_digits(self.fd, x, 0, level);
        if unknown {
            None
        } else {
            Some(false)
        }
    }
}

/// Brute-force Hilbert symbol: `(a, b) = 1` iff `z^2 - a x^2 - b y^2` is isotropic.
pub fn hilbert_by_search(fd: &Field, a: &Elt, b: &Elt, max_exp: u32) -> Option<i8> {
    let coeffs = [fd.one(), fd.neg(a), fd.neg(b)];
    diagonal_isotropic(fd, &coeffs, max_exp).map(|iso| if iso { 1 } else { -1 })
}
