//! Lattices over `O_F` stored as Jordan splittings.

mod gram;
mod json;

pub use gram::{a_lattice, GramMatrix};
pub use json::{invariants_report, ComponentJson, LatticeJson};

use std::hash::{Hash, Hasher};

use crate::dyadic_field::{Field, IdealExp, SquareClass};
use crate::error::{Error, Result};
use crate::quad_space::SpaceInv;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// `2^s <e_1, ..., e_n>` with unit classes sorted ascending.
    Proper(Vec<SquareClass>),
    /// `2^s A(0,0)^m`, or `2^s (A(0,0)^(m-1) ⊥ A(2, 2 rho))` when `delta`.
    Improper { half_dim: usize, delta: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanComponent {
    pub scale: i32,
    pub shape: Shape,
}

impl JordanComponent {
    pub fn proper(scale: i32, mut diag: Vec<SquareClass>) -> JordanComponent {
        diag.sort();
        JordanComponent {
            scale,
            shape: Shape::Proper(diag),
        }
    }

    pub fn improper(scale: i32, half_dim: usize, delta: bool) -> JordanComponent {
        JordanComponent {
            scale,
            shape: Shape::Improper { half_dim, delta },
        }
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Proper(d) => d.len(),
            Shape::Improper { half_dim, .. } => 2 * half_dim,
        }
    }

    pub fn is_proper(&self) -> bool {
        matches!(self.shape, Shape::Proper(_))
    }

    pub fn norm_exp(&self) -> i32 {
        if self.is_proper() {
            self.scale
        } else {
            self.scale + 1
        }
    }

    /// The improper type bit; `None` for proper components.
    pub fn is_delta(&self) -> Option<bool> {
        match self.shape {
            Shape::Proper(_) => None,
            Shape::Improper { delta, .. } => Some(delta),
        }
    }

    pub fn space(&self, fd: &Field) -> SpaceInv {
        match &self.shape {
            Shape::Proper(diag) => {
                let p = fd.class_of_pow2(self.scale);
                let classes: Vec<SquareClass> = diag.iter().map(|&e| e * p).collect();
                SpaceInv::from_classes(&classes, fd)
            }
            Shape::Improper { half_dim, delta } => {
                let h = SpaceInv::hyperbolic(fd);
                let plain = half_dim - usize::from(*delta);
                let mut v = (0..plain).fold(SpaceInv::ZERO, |acc, _| acc.sum(&h, fd));
                if *delta {
                    let p = fd.class_of_pow2(self.scale + 1);
                    let m1 = fd.minus_one_class();
                    let binary = SpaceInv::from_classes(&[p, p * m1 * fd.delta_class()], fd);
                    v = v.sum(&binary, fd);
                }
                v
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.shape {
            Shape::Proper(diag) => {
                if diag.is_empty() {
                    return Err(Error::InvalidLattice("empty proper component".into()));
                }
                if diag.iter().any(|c| !c.is_unit()) {
                    return Err(Error::InvalidLattice(
                        "proper diagonal entries must be units".into(),
                    ));
                }
                if diag.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::InvalidLattice("diagonal not sorted".into()));
                }
            }
            Shape::Improper { half_dim, .. } => {
                if *half_dim == 0 {
                    return Err(Error::InvalidLattice("improper component with m = 0".into()));
                }
            }
        }
        Ok(())
    }
}

/// Which components `sublattice` keeps at level `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubKind {
    /// scale exponent `<= i`
    Le,
    /// norm exponent `<= i`
    Paren,
    /// scale exponent `<= i`, or `= i + 1` for improper components
    Bracket,
}

impl SubKind {
    pub fn keeps(self, c: &JordanComponent, i: i32) -> bool {
        match self {
            SubKind::Le => c.scale <= i,
            SubKind::Paren => c.norm_exp() <= i,
            SubKind::Bracket => c.scale <= i || (c.scale == i + 1 && !c.is_proper()),
        }
    }
}

/// A lattice given by a Jordan splitting with strictly increasing scales.
#[derive(Debug, Clone)]
pub struct JordanLattice {
    comps: Vec<JordanComponent>,
    spaces: Vec<SpaceInv>,
}

impl PartialEq for JordanLattice {
    fn eq(&self, other: &Self) -> bool {
        self.comps == other.comps
    }
}

impl Eq for JordanLattice {}

impl Hash for JordanLattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.comps.hash(state);
    }
}

impl JordanLattice {
    pub fn new(comps: Vec<JordanComponent>, fd: &Field) -> Result<JordanLattice> {
        for c in &comps {
            c.validate()?;
        }
        if comps.windows(2).any(|w| w[0].scale >= w[1].scale) {
            return Err(Error::InvalidLattice(
                "scales must be strictly increasing".into(),
            ));
        }
        let spaces = comps.iter().map(|c| c.space(fd)).collect();
        Ok(JordanLattice { comps, spaces })
    }

    pub fn zero() -> JordanLattice {
        JordanLattice {
            comps: Vec::new(),
            spaces: Vec::new(),
        }
    }

    pub fn components(&self) -> &[JordanComponent] {
        &self.comps
    }

    pub fn component_spaces(&self) -> &[SpaceInv] {
        &self.spaces
    }

    /// The `r`-th component (0-based).
    pub fn component(&self, r: usize) -> Option<&JordanComponent> {
        self.comps.get(r)
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.comps.iter().map(|c| c.dim()).sum()
    }

    pub fn scale_ideal(&self) -> IdealExp {
        self.comps
            .first()
            .map_or(IdealExp::ZERO, |c| IdealExp::pow2(c.scale))
    }

    pub fn norm_ideal(&self) -> IdealExp {
        self.comps
            .iter()
            .map(|c| c.norm_exp())
            .min()
            .map_or(IdealExp::ZERO, IdealExp::pow2)
    }

    pub fn is_integral(&self) -> bool {
        IdealExp::pow2(0).contains(self.norm_ideal())
    }

    pub fn is_classic(&self) -> bool {
        IdealExp::pow2(0).contains(self.scale_ideal())
    }

    pub fn min_scale(&self) -> Option<i32> {
        self.comps.first().map(|c| c.scale)
    }

    pub fn max_scale(&self) -> Option<i32> {
        self.comps.last().map(|c| c.scale)
    }

    pub fn space(&self, fd: &Field) -> SpaceInv {
        self.spaces
            .iter()
            .fold(SpaceInv::ZERO, |acc, v| acc.sum(v, fd))
    }

    /// Space spanned by the components kept by `kind` at level `i`.
    pub fn sub_space(&self, i: i32, kind: SubKind, fd: &Field) -> SpaceInv {
        self.comps
            .iter()
            .zip(&self.spaces)
            .filter(|(c, _)| kind.keeps(c, i))
            .fold(SpaceInv::ZERO, |acc, (_, v)| acc.sum(v, fd))
    }

    pub fn sublattice(&self, i: i32, kind: SubKind) -> JordanLattice {
        let (comps, spaces) = self
            .comps
            .iter()
            .zip(&self.spaces)
            .filter(|(c, _)| kind.keeps(c, i))
            .map(|(c, v)| (c.clone(), *v))
            .unzip();
        JordanLattice { comps, spaces }
    }

    pub fn dim_le(&self, i: i32) -> usize {
        self.comps
            .iter()
            .filter(|c| c.scale <= i)
            .map(|c| c.dim())
            .sum()
    }

    /// `d(L_{<=i}) O`, the zero ideal when `L_{<=i} = 0`.
    pub fn fd_ideal(&self, i: i32) -> IdealExp {
        let kept: Vec<&JordanComponent> = self.comps.iter().filter(|c| c.scale <= i).collect();
        if kept.is_empty() {
            IdealExp::ZERO
        } else {
            IdealExp::pow2(kept.iter().map(|c| c.scale * c.dim() as i32).sum())
        }
    }

    pub fn has_proper_at(&self, scale: i32) -> bool {
        self.comps.iter().any(|c| c.scale == scale && c.is_proper())
    }

    pub fn delta_ideal(&self, i: i32) -> IdealExp {
        if self.has_proper_at(i + 1) {
            IdealExp::pow2(i + 1)
        } else if self.has_proper_at(i + 2) {
            IdealExp::pow2(i + 2)
        } else {
            IdealExp::ZERO
        }
    }

    /// Scale, dimension, properness and space of each component: the data a
    /// Jordan splitting determines up to isometry of the pieces.
    pub fn invariant_data(&self) -> Vec<(i32, usize, bool, SpaceInv)> {
        self.comps
            .iter()
            .zip(&self.spaces)
            .map(|(c, v)| (c.scale, c.dim(), c.is_proper(), *v))
            .collect()
    }

    /// Scale, dimension and properness of each component. Unlike the component
    /// spaces these do not depend on the chosen splitting.
    pub fn jordan_type(&self) -> Vec<(i32, usize, bool)> {
        self.comps
            .iter()
            .map(|c| (c.scale, c.dim(), c.is_proper()))
            .collect()
    }

    /// Orthogonal sum with components at strictly larger scales.
    pub fn append(&self, other: &JordanLattice) -> Result<JordanLattice> {
        if let (Some(a), Some(b)) = (self.max_scale(), other.min_scale()) {
            if b <= a {
                return Err(Error::InvalidLattice(
                    "appended components must have larger scales".into(),
                ));
            }
        }
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        let mut spaces = self.spaces.clone();
        spaces.extend(other.spaces.iter().copied());
        Ok(JordanLattice { comps, spaces })
    }
}
