//! Closed-form classifiers for universality, k-universality and their classic
//! variants, and the oracle that checks representation of every test lattice.

mod enumerate;
mod family;

pub use enumerate::{enumerate_classic_basic, enumerate_dominant};
pub use family::{
    crosscheck, enumerate_family, sample_family, CrossRecord, CrossReport, FamilySpec,
};

use serde_json::{json, Value};

use crate::dyadic_field::{Field, IdealExp, SquareClass};
use crate::error::{Error, Result};
use crate::lattice_core::{JordanComponent, JordanLattice};
use crate::quad_space::SpaceInv;
use crate::representability::{lower_type_profiles, represents_profiles, Profile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyVerdict {
    pub value: bool,
    /// Satisfied condition such as `Thm1.3(3)(b)`, or the failed gate.
    pub clause: String,
    /// A `k`-dimensional test lattice that is not represented.
    pub witness: Option<JordanLattice>,
}

impl ClassifyVerdict {
    fn holds(clause: &str) -> ClassifyVerdict {
        ClassifyVerdict {
            value: true,
            clause: clause.to_string(),
            witness: None,
        }
    }

    fn fails(clause: String) -> ClassifyVerdict {
        ClassifyVerdict {
            value: false,
            clause,
            witness: None,
        }
    }

    pub fn to_json(&self, fd: &Field) -> Value {
        let mut o = json!({ "value": self.value, "clause": self.clause });
        if let Some(w) = &self.witness {
            o["witness"] = w.to_json(fd);
        }
        o
    }
}

/// Jordan components indexed from 1; missing ones are the zero lattice.
struct View<'a> {
    l: &'a JordanLattice,
    fd: &'a Field,
}

impl View<'_> {
    fn comp(&self, j: usize) -> Option<&JordanComponent> {
        self.l.component(j - 1)
    }

    fn dim(&self, j: usize) -> usize {
        self.comp(j).map_or(0, |c| c.dim())
    }

    fn scale(&self, j: usize) -> IdealExp {
        self.comp(j).map_or(IdealExp::ZERO, |c| IdealExp::pow2(c.scale))
    }

    fn norm(&self, j: usize) -> IdealExp {
        self.comp(j).map_or(IdealExp::ZERO, |c| IdealExp::pow2(c.norm_exp()))
    }

    /// `s(L_j) = n(L_j) = 2^e O`.
    fn sn(&self, j: usize, e: i32) -> bool {
        self.scale(j) == IdealExp::pow2(e) && self.norm(j) == IdealExp::pow2(e)
    }

    /// `2^e O ⊆ n(L_j)`.
    fn norm_holds(&self, j: usize, e: i32) -> bool {
        self.norm(j).contains(IdealExp::pow2(e))
    }

    fn space(&self, j: usize) -> SpaceInv {
        self.l
            .component_spaces()
            .get(j - 1)
            .copied()
            .unwrap_or(SpaceInv::ZERO)
    }

    fn isotropic(&self, j: usize) -> bool {
        self.space(j).is_isotropic(self.fd)
    }

    fn signed_disc(&self, j: usize) -> SquareClass {
        self.space(j).signed_disc(self.fd)
    }

    fn disc_square(&self, j: usize) -> bool {
        self.signed_disc(j) == SquareClass::ONE
    }

    fn disc_delta(&self, j: usize) -> bool {
        self.signed_disc(j) == self.fd.delta_class()
    }
}

fn first(prefix: &str, clauses: &[(&str, bool)]) -> ClassifyVerdict {
    clauses
        .iter()
        .find(|(_, ok)| *ok)
        .map(|(c, _)| ClassifyVerdict::holds(&format!("{prefix}{c}")))
        .unwrap_or_else(|| ClassifyVerdict::fails(format!("none: no condition of {prefix} holds")))
}

fn require_integral(l: &JordanLattice) -> Result<()> {
    if l.is_integral() {
        Ok(())
    } else {
        Err(Error::Precondition("lattice is not integral".into()))
    }
}

fn require_classic(l: &JordanLattice) -> Result<()> {
    if l.is_classic() {
        Ok(())
    } else {
        Err(Error::Precondition("lattice is not classic".into()))
    }
}

fn require_k(k: usize) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::Precondition("k must be at least 1".into()))
    }
}

const GATE_NORM: &str = "gate: 𝔫(L₁) ≠ O_F";
const GATE_SCALE_HALF: &str = "gate: 𝔰(L₁) ≠ 2^{−1}O_F";
const GATE_SCALE_ONE: &str = "gate: 𝔰(L₁) ≠ O_F";

fn universal_tree(v: &View) -> ClassifyVerdict {
    if v.norm(1) != IdealExp::pow2(0) {
        return ClassifyVerdict::fails(GATE_NORM.into());
    }
    let d1 = v.dim(1);
    let (d2, d3) = (v.dim(2), v.dim(3));
    let a = d1 == 2 && v.scale(1) == IdealExp::pow2(0) && v.sn(2, 1);
    let b = d1 == 2 && v.scale(1) == IdealExp::pow2(-1);
    let c = d1 == 1 && v.sn(2, 1);
    let iso12 = || v.space(1).sum(&v.space(2), v.fd).is_isotropic(v.fd);
    first(
        "Thm1.2",
        &[
            ("(1)", d1 >= 4),
            ("(2)", d1 == 3 && (v.isotropic(1) || v.norm_holds(2, 2))),
            ("(3)(a)(i)", a && d2 >= 2),
            ("(3)(a)(ii)", a && d2 == 1 && iso12()),
            ("(3)(a)(iii)", a && d2 == 1 && v.norm_holds(3, 3)),
            ("(3)(b)(i)", b && v.isotropic(1)),
            ("(3)(b)(ii)", b && d2 >= 2 && v.norm_holds(2, 1)),
            ("(3)(b)(iii)", b && d2 == 1 && v.sn(2, 0)),
            ("(3)(b)(iv)", b && d2 == 1 && v.sn(2, 1) && v.norm_holds(3, 3)),
            ("(4)(a)", c && d2 >= 3),
            ("(4)(b)", c && d2 == 2 && v.sn(3, 2)),
            ("(4)(c)", c && d2 == 1 && d3 >= 2 && v.sn(3, 2)),
            ("(4)(d)", c && d2 == 1 && d3 == 1 && v.sn(3, 2) && v.sn(4, 3)),
        ],
    )
}

fn classic_universal_tree(v: &View) -> ClassifyVerdict {
    if !v.sn(1, 0) {
        return ClassifyVerdict::fails(if v.scale(1) != IdealExp::pow2(0) {
            GATE_SCALE_ONE.into()
        } else {
            GATE_NORM.into()
        });
    }
    let d1 = v.dim(1);
    let (d2, d3) = (v.dim(2), v.dim(3));
    let a = d1 == 2 && v.sn(2, 1);
    let c = d1 == 1 && v.sn(2, 1);
    let iso12 = || v.space(1).sum(&v.space(2), v.fd).is_isotropic(v.fd);
    first(
        "Cor4.10",
        &[
            ("(1)", d1 >= 4),
            ("(2)", d1 == 3 && (v.isotropic(1) || v.norm_holds(2, 2))),
            ("(3)(a)", a && d2 >= 2),
            ("(3)(b)", a && d2 == 1 && iso12()),
            ("(3)(c)", a && d2 == 1 && v.norm_holds(3, 3)),
            ("(4)(a)", c && d2 >= 3),
            ("(4)(b)", c && d2 == 2 && v.sn(3, 2)),
            ("(4)(c)", c && d2 == 1 && d3 >= 2 && v.sn(3, 2)),
            ("(4)(d)", c && d2 == 1 && d3 == 1 && v.sn(3, 2) && v.sn(4, 3)),
        ],
    )
}

fn half_gate(v: &View) -> Option<ClassifyVerdict> {
    if v.norm(1) != IdealExp::pow2(0) {
        Some(ClassifyVerdict::fails(GATE_NORM.into()))
    } else if v.scale(1) != IdealExp::pow2(-1) {
        Some(ClassifyVerdict::fails(GATE_SCALE_HALF.into()))
    } else {
        None
    }
}

fn even_tree(v: &View, k: usize) -> ClassifyVerdict {
    if let Some(g) = half_gate(v) {
        return g;
    }
    let d1 = v.dim(1);
    let (d2, d3) = (v.dim(2), v.dim(3));
    let three = d1 == k && d2 >= 2 && v.sn(2, 0);
    let four = d1 == k && d2 == 1 && v.sn(2, 0) && v.sn(3, 1);
    let outside = !v.disc_square(2) && !v.disc_delta(2);
    first(
        "Thm1.3",
        &[
            ("(1)", d1 >= k + 4),
            ("(2)(a)", d1 == k + 2 && v.disc_square(1) && (k <= 2 || v.norm_holds(2, 1))),
            ("(2)(b)", d1 == k + 2 && v.disc_delta(1) && v.norm_holds(2, 1)),
            ("(3)(a)", three && d2 >= 3),
            ("(3)(b)", three && d2 == 2 && v.sn(3, 1)),
            ("(3)(c)", three && d2 == 2 && outside && v.norm(3) == IdealExp::pow2(2)),
            ("(4)(a)", four && d3 >= 2),
            ("(4)(b)", four && d3 == 1 && v.norm_holds(4, 3)),
        ],
    )
}

fn odd_tree(v: &View, k: usize) -> ClassifyVerdict {
    if let Some(g) = half_gate(v) {
        return g;
    }
    let d1 = v.dim(1);
    let (d2, d3, d4) = (v.dim(2), v.dim(3), v.dim(4));
    let two = d1 == k + 1;
    let three = d1 + 1 == k && v.sn(2, 0);
    let four = d1 + 1 == k && d2 == 1 && v.sn(2, 0) && v.sn(3, 1);
    first(
        "Thm6.10",
        &[
            ("(1)", d1 >= k + 3),
            ("(2)(a)", two && d2 >= 2 && v.norm_holds(2, 1)),
            ("(2)(b)", two && d2 == 1 && v.sn(2, 0) && v.norm_holds(3, 2)),
            ("(2)(c)", two && d2 == 1 && v.sn(2, 1) && v.norm_holds(3, 3)),
            ("(3)(a)", three && d2 >= 4),
            ("(3)(b)", three && d2 == 3 && v.norm_holds(3, 2)),
            ("(3)(c)", three && d2 == 2 && d3 >= 2 && v.sn(3, 1)),
            ("(3)(d)", three && d2 == 2 && d3 == 1 && v.sn(3, 1) && v.norm_holds(4, 3)),
            ("(4)(a)", four && d3 >= 3),
            ("(4)(b)", four && d3 == 2 && v.sn(4, 2)),
            ("(4)(c)", four && d3 == 1 && d4 >= 2 && v.sn(4, 2)),
            ("(4)(d)", four && d3 == 1 && d4 == 1 && v.sn(4, 2) && v.sn(5, 3)),
        ],
    )
}

fn one_gate(v: &View) -> Option<ClassifyVerdict> {
    if v.scale(1) != IdealExp::pow2(0) {
        Some(ClassifyVerdict::fails(GATE_SCALE_ONE.into()))
    } else if v.norm(1) != IdealExp::pow2(0) {
        Some(ClassifyVerdict::fails(GATE_NORM.into()))
    } else {
        None
    }
}

fn classic_even_tree(v: &View, k: usize) -> ClassifyVerdict {
    if let Some(g) = one_gate(v) {
        return g;
    }
    let (d1, d2) = (v.dim(1), v.dim(2));
    let outside = !v.disc_square(1) && !v.disc_delta(1);
    first(
        "Thm1.4",
        &[
            ("(1)", d1 >= k + 3),
            ("(2)", d1 == k + 2 && v.sn(2, 1)),
            ("(3)", d1 == k + 2 && outside && v.norm(2) == IdealExp::pow2(2)),
            ("(4)", d1 == k + 1 && d2 >= 2 && v.sn(2, 1)),
            ("(5)", d1 == k + 1 && d2 == 1 && v.sn(2, 1) && v.norm_holds(3, 3)),
        ],
    )
}

fn classic_odd_tree(v: &View, k: usize) -> ClassifyVerdict {
    if let Some(g) = one_gate(v) {
        return g;
    }
    let (d1, d2, d3) = (v.dim(1), v.dim(2), v.dim(3));
    let three = d1 == k + 1 && v.sn(2, 1);
    let four = d1 == k && v.sn(2, 1);
    first(
        "Thm6.16",
        &[
            ("(1)", d1 >= k + 3),
            ("(2)", d1 == k + 2 && v.norm_holds(2, 2)),
            ("(3)(a)", three && d2 >= 2),
            ("(3)(b)", three && d2 == 1 && v.norm_holds(3, 3)),
            ("(4)(a)", four && d2 >= 3),
            ("(4)(b)", four && d2 == 2 && v.sn(3, 2)),
            ("(4)(c)", four && d2 == 1 && d3 >= 2 && v.sn(3, 2)),
            ("(4)(d)", four && d2 == 1 && d3 == 1 && v.sn(3, 2) && v.sn(4, 3)),
        ],
    )
}

pub fn classify_universal(l: &JordanLattice, fd: &Field) -> Result<ClassifyVerdict> {
    require_integral(l)?;
    Ok(universal_tree(&View { l, fd }))
}

pub fn classify_classic_universal(l: &JordanLattice, fd: &Field) -> Result<ClassifyVerdict> {
    require_classic(l)?;
    Ok(classic_universal_tree(&View { l, fd }))
}

pub fn classify_k_universal(l: &JordanLattice, k: usize, fd: &Field) -> Result<ClassifyVerdict> {
    require_k(k)?;
    require_integral(l)?;
    let v = View { l, fd };
    Ok(match k {
        1 => universal_tree(&v),
        k if k % 2 == 0 => even_tree(&v, k),
        k => odd_tree(&v, k),
    })
}

pub fn classify_classic_k_universal(
    l: &JordanLattice,
    k: usize,
    fd: &Field,
) -> Result<ClassifyVerdict> {
    require_k(k)?;
    require_classic(l)?;
    let v = View { l, fd };
    Ok(match k {
        1 => classic_universal_tree(&v),
        k if k % 2 == 0 => classic_even_tree(&v, k),
        k => classic_odd_tree(&v, k),
    })
}

/// Dispatches to the integral or classic classifier.
pub fn classify(l: &JordanLattice, k: usize, classic: bool, fd: &Field) -> Result<ClassifyVerdict> {
    if classic {
        classify_classic_k_universal(l, k, fd)
    } else {
        classify_k_universal(l, k, fd)
    }
}

/// The test lattices for one `(k, classic)` pair with precomputed profiles.
#[derive(Debug, Clone)]
pub struct Oracle {
    k: usize,
    classic: bool,
    tests: Vec<(JordanLattice, Profile)>,
}

impl Oracle {
    pub fn new(k: usize, classic: bool, fd: &Field) -> Result<Oracle> {
        require_k(k)?;
        let lattices = if classic {
            enumerate_classic_basic(k, fd)
        } else {
            enumerate_dominant(k, fd)
        };
        let tests = lattices
            .into_iter()
            .map(|l| {
                let p = Profile::new(&l, fd);
                (l, p)
            })
            .collect();
        Ok(Oracle { k, classic, tests })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn classic(&self) -> bool {
        self.classic
    }

    pub fn test_lattices(&self) -> impl Iterator<Item = &JordanLattice> {
        self.tests.iter().map(|(l, _)| l)
    }

    /// First test lattice without a lower type than `l`.
    pub fn lower_type_failure(&self, l: &JordanLattice, fd: &Field) -> Option<&JordanLattice> {
        let big = Profile::new(l, fd);
        self.tests
            .iter()
            .find(|(_, p)| !lower_type_profiles(p, &big).is_represented())
            .map(|(t, _)| t)
    }

    pub fn check(&self, l: &JordanLattice, fd: &Field) -> Result<ClassifyVerdict> {
        if self.classic {
            require_classic(l)?;
        } else {
            require_integral(l)?;
        }
        let big = Profile::new(l, fd);
        for (t, p) in &self.tests {
            let r = represents_profiles(p, &big, fd);
            if !r.is_represented() {
                return Ok(ClassifyVerdict {
                    value: false,
                    clause: format!(
                        "oracle: test lattice not represented ({})",
                        r.reason.unwrap_or_default()
                    ),
                    witness: Some(t.clone()),
                });
            }
        }
        Ok(ClassifyVerdict::holds(&format!(
            "oracle: all {} test lattices represented",
            self.tests.len()
        )))
    }
}

pub fn oracle_k_universal(
    l: &JordanLattice,
    k: usize,
    classic: bool,
    fd: &Field,
) -> Result<ClassifyVerdict> {
    Oracle::new(k, classic, fd)?.check(l, fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LatticeJson;

    fn lat(fd: &Field, s: &str) -> JordanLattice {
        LatticeJson::parse(s).unwrap().to_lattice(fd).unwrap()
    }

    fn ones(n: usize) -> String {
        format!(
            r#"{{"jordan":[{{"scale":0,"proper":true,"diag":[{}]}}]}}"#,
            vec!["1"; n].join(",")
        )
    }

    fn hyp(m: usize, kind: &str) -> String {
        format!(r#"{{"scale":-1,"proper":false,"m":{m},"type":"{kind}"}}"#)
    }

    #[test]
    fn universal_examples() {
        let fd = Field::q2();
        let v = classify_universal(&lat(&fd, &ones(4)), &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Thm1.2(1)"));
        let v = classify_universal(&lat(&fd, &ones(1)), &fd).unwrap();
        assert!(!v.value);
        let h = lat(&fd, &format!(r#"{{"jordan":[{}]}}"#, hyp(1, "plain")));
        let v = classify_universal(&h, &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Thm1.2(3)(b)(i)"));
    }

    #[test]
    fn classic_universal_examples() {
        let fd = Field::q2();
        let v = classify_classic_universal(&lat(&fd, &ones(4)), &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Cor4.10(1)"));
        assert!(!classify_classic_universal(&lat(&fd, &ones(3)), &fd).unwrap().value);
        let l = lat(
            &fd,
            r#"{"jordan":[{"scale":0,"proper":true,"diag":[1,1,1]},{"scale":2,"proper":true,"diag":[1]}]}"#,
        );
        let v = classify_classic_universal(&l, &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Cor4.10(2)"));
    }

    #[test]
    fn k_universal_examples() {
        let fd = Field::q2();
        let h3 = lat(&fd, &format!(r#"{{"jordan":[{}]}}"#, hyp(3, "plain")));
        let v = classify_k_universal(&h3, 2, &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Thm1.3(1)"));
        let v = classify_k_universal(&h3, 3, &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Thm6.10(1)"));
        let mixed = lat(&fd, &format!(r#"{{"jordan":[{}]}}"#, hyp(2, "delta")));
        let v = classify_k_universal(&mixed, 2, &fd).unwrap();
        assert!(!v.value);
        assert!(oracle_k_universal(&mixed, 2, false, &fd).unwrap().witness.is_some());
        let h2 = lat(&fd, &format!(r#"{{"jordan":[{}]}}"#, hyp(2, "plain")));
        let v = classify_k_universal(&h2, 2, &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Thm1.3(2)(a)"));
        assert!(oracle_k_universal(&h2, 2, false, &fd).unwrap().value);
    }

    #[test]
    fn classic_k_universal_examples() {
        let fd = Field::q2();
        let v = classify_classic_k_universal(&lat(&fd, &ones(5)), 2, &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Thm1.4(1)"));
        assert!(!classify_classic_k_universal(&lat(&fd, &ones(4)), 2, &fd).unwrap().value);
        let l = lat(
            &fd,
            r#"{"jordan":[{"scale":0,"proper":true,"diag":[1,1,1,7]},{"scale":2,"proper":true,"diag":[1]}]}"#,
        );
        let v = classify_classic_k_universal(&l, 2, &fd).unwrap();
        assert_eq!((v.value, v.clause.as_str()), (true, "Thm1.4(3)"));
        assert!(oracle_k_universal(&l, 2, true, &fd).unwrap().value);
    }

    #[test]
    fn oracle_witness() {
        let fd = Field::q2();
        let v = oracle_k_universal(&lat(&fd, &ones(3)), 1, false, &fd).unwrap();
        assert!(!v.value);
        let w = v.witness.unwrap();
        assert_eq!(w.dim(), 1);
        assert!(!crate::represents_lattice(&w, &lat(&fd, &ones(3)), &fd).is_represented());
        assert!(oracle_k_universal(&lat(&fd, &ones(4)), 1, false, &fd).unwrap().value);
    }

    #[test]
    fn preconditions() {
        let fd = Field::q2();
        let h = lat(&fd, &format!(r#"{{"jordan":[{}]}}"#, hyp(1, "plain")));
        assert!(classify_classic_universal(&h, &fd).is_err());
        assert!(classify_k_universal(&h, 0, &fd).is_err());
        let half = lat(&fd, r#"{"jordan":[{"scale":-1,"proper":true,"diag":[1]}]}"#);
        assert!(classify_universal(&half, &fd).is_err());
    }
}
