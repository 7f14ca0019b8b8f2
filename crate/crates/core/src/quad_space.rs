//! Quadratic spaces over `F` up to isometry: dimension, discriminant and
//! Hasse invariant `prod_{i<j} (a_i, a_j)`.

use serde::{Deserialize, Serialize};

use crate::dyadic_field::{Elt, Field, IdealExp, SquareClass};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceInv {
    pub dim: usize,
    pub disc: SquareClass,
    pub hasse: i8,
}

impl SpaceInv {
    pub const ZERO: SpaceInv = SpaceInv {
        dim: 0,
        disc: SquareClass::ONE,
        hasse: 1,
    };

    /// The line `<c>`.
    pub fn line(c: SquareClass) -> SpaceInv {
        SpaceInv {
            dim: 1,
            disc: c,
            hasse: 1,
        }
    }

    pub fn hyperbolic(fd: &Field) -> SpaceInv {
        SpaceInv {
            dim: 2,
            disc: fd.minus_one_class(),
            hasse: 1,
        }
    }

    pub fn from_classes(classes: &[SquareClass], fd: &Field) -> SpaceInv {
        classes
            .iter()
            .fold(SpaceInv::ZERO, |acc, &c| acc.sum(&SpaceInv::line(c), fd))
    }

    pub fn from_diagonal(entries: &[Elt], fd: &Field) -> Result<SpaceInv> {
        let classes = entries
            .iter()
            .map(|e| fd.square_class(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpaceInv::from_classes(&classes, fd))
    }

    /// Orthogonal sum.
    pub fn sum(&self, other: &SpaceInv, fd: &Field) -> SpaceInv {
        SpaceInv {
            dim: self.dim + other.dim,
            disc: self.disc * other.disc,
            hasse: self.hasse * other.hasse * fd.hilbert_class(self.disc, other.disc),
        }
    }

    /// `(-1)^(n(n-1)/2) d`.
    pub fn signed_disc(&self, fd: &Field) -> SquareClass {
        if (self.dim * self.dim.saturating_sub(1) / 2) % 2 == 1 {
            self.disc * fd.minus_one_class()
        } else {
            self.disc
        }
    }

    /// The space with form multiplied by `c`.
    pub fn scaled(&self, c: SquareClass, fd: &Field) -> SpaceInv {
        let n = self.dim;
        let disc = if n % 2 == 1 { self.disc * c } else { self.disc };
        let mut hasse = self.hasse;
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            hasse *= fd.hilbert_class(c, c);
        }
        if n >= 1 && (n - 1) % 2 == 1 {
            hasse *= fd.hilbert_class(c, self.disc);
        }
        SpaceInv { dim: n, disc, hasse }
    }

    pub fn scaled_by(&self, c: &Elt, fd: &Field) -> Result<SpaceInv> {
        Ok(self.scaled(fd.square_class(c)?, fd))
    }

    pub fn is_isotropic(&self, fd: &Field) -> bool {
        let m1 = fd.minus_one_class();
        match self.dim {
            0 | 1 => false,
            2 => self.disc == m1,
            3 => self.hasse == fd.hilbert_class(m1, m1 * self.disc),
            4 => self.disc != SquareClass::ONE || self.hasse == fd.hilbert_class(m1, m1),
            _ => true,
        }
    }

    /// Witt index and anisotropic kernel.
    pub fn witt_decompose(&self, fd: &Field) -> (usize, SpaceInv) {
        let m1 = fd.minus_one_class();
        let mut index = 0;
        let mut v = *self;
        while v.is_isotropic(fd) {
            let disc = v.disc * m1;
            v = SpaceInv {
                dim: v.dim - 2,
                disc,
                hasse: v.hasse * fd.hilbert_class(m1, disc),
            };
            index += 1;
        }
        (index, v)
    }

    pub fn represents_class(&self, c: SquareClass, fd: &Field) -> bool {
        let neg = SpaceInv::line(c * fd.minus_one_class());
        self.sum(&neg, fd).is_isotropic(fd)
    }

    pub fn represents_element(&self, c: &Elt, fd: &Field) -> Result<bool> {
        Ok(self.represents_class(fd.square_class(c)?, fd))
    }

    /// Some `w` with `Q(w) O = 2^e O`; the zero ideal is always represented.
    pub fn represents_ideal(&self, ideal: IdealExp, fd: &Field) -> bool {
        match ideal.exp() {
            None => true,
            Some(e) => {
                let p = fd.class_of_pow2(e);
                fd.unit_classes()
                    .into_iter()
                    .any(|u| self.represents_class(u * p, fd))
            }
        }
    }

    /// Whether `self` embeds isometrically into `target`.
    pub fn embeds_in(&self, target: &SpaceInv, fd: &Field) -> bool {
        if self.dim == 0 {
            return true;
        }
        if self.dim > target.dim {
            return false;
        }
        let neg = self.scaled(fd.minus_one_class(), fd);
        target.sum(&neg, fd).witt_decompose(fd).0 >= self.dim
    }

    /// Orthogonal complement of `self` inside `target`.
    pub fn complement_in(&self, target: &SpaceInv, fd: &Field) -> Result<SpaceInv> {
        if !self.embeds_in(target, fd) {
            return Err(Error::InvalidSpace("space does not embed".into()));
        }
        let disc = self.disc * target.disc;
        Ok(SpaceInv {
            dim: target.dim - self.dim,
            disc,
            hasse: target.hasse * self.hasse * fd.hilbert_class(self.disc, disc),
        })
    }

    pub fn is_realizable(&self, fd: &Field) -> bool {
        match self.dim {
            0 => self.disc == SquareClass::ONE && self.hasse == 1,
            1 => self.hasse == 1,
            2 => !(self.disc == fd.minus_one_class() && self.hasse != 1),
            _ => true,
        }
    }

    /// A diagonal `<a_1, ..., a_n>` with these invariants.
    pub fn diagonal_realization(&self, fd: &Field) -> Result<Vec<SquareClass>> {
        if !self.is_realizable(fd) || !(self.hasse == 1 || self.hasse == -1) {
            return Err(Error::InvalidSpace(format!("{self:?} is not realizable")));
        }
        let n = self.dim;
        if n <= 1 {
            return Ok(if n == 1 { vec![self.disc] } else { vec![] });
        }
        let classes = fd.classes();
        let free = n.min(3);
        let mut out = vec![SquareClass::ONE; n - free];
        for &c in &classes {
            for &a in &classes {
                let tail = if free == 2 {
                    vec![a, a * self.disc]
                } else {
                    vec![c, a, c * a * self.disc]
                };
                let t = SpaceInv::from_classes(&tail, fd);
                if t.disc == self.disc && t.hasse == self.hasse {
                    out.extend(tail);
                    return Ok(out);
                }
            }
            if free == 2 {
                break;
            }
        }
        Err(Error::InvalidSpace(format!("no diagonal found for {self:?}")))
    }
}

/// JSON form `{"dim": n, "disc": "<class rep>", "hasse": 1|-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceInvJson {
    pub dim: usize,
    pub disc: String,
    pub hasse: i8,
}

impl SpaceInv {
    pub fn to_json(&self, fd: &Field) -> SpaceInvJson {
        SpaceInvJson {
            dim: self.dim,
            disc: fd.format(&fd.class_rep(self.disc)),
            hasse: self.hasse,
        }
    }

    pub fn from_json(j: &SpaceInvJson, fd: &Field) -> Result<SpaceInv> {
        let disc = fd.square_class(&fd.parse(&j.disc)?)?;
        let v = SpaceInv {
            dim: j.dim,
            disc,
            hasse: j.hasse,
        };
        if !v.is_realizable(fd) || !(j.hasse == 1 || j.hasse == -1) {
            return Err(Error::InvalidSpace(format!("{j:?} is not realizable")));
        }
        Ok(v)
    }
}
