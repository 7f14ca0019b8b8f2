//! Representation of one lattice by another: the lower-type relation, the
//! exact local criterion evaluated on Jordan invariants, and a congruence
//! search oracle.

mod brute;

pub use brute::{brute_force_represents, BruteOptions};

use serde_json::{json, Value};

use crate::dyadic_field::{Elt, Field, IdealExp};
use crate::lattice_core::{JordanLattice, SubKind};
use crate::quad_space::SpaceInv;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepValue {
    Represented,
    NotRepresented,
    Unknown,
}

impl RepValue {
    pub fn as_str(self) -> &'static str {
        match self {
            RepValue::Represented => "Represented",
            RepValue::NotRepresented => "NotRepresented",
            RepValue::Unknown => "Unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepVerdict {
    pub value: RepValue,
    /// First failing clause, e.g. `Def3.2(4)(b)@i=1`.
    pub reason: Option<String>,
    /// Columns are images of the basis of the represented lattice.
    pub witness: Option<Vec<Vec<Elt>>>,
}

impl RepVerdict {
    pub fn represented() -> RepVerdict {
        RepVerdict {
            value: RepValue::Represented,
            reason: None,
            witness: None,
        }
    }

    pub fn fails(reason: String) -> RepVerdict {
        RepVerdict {
            value: RepValue::NotRepresented,
            reason: Some(reason),
            witness: None,
        }
    }

    pub fn is_represented(&self) -> bool {
        self.value == RepValue::Represented
    }

    pub fn to_json(&self, fd: &Field) -> Value {
        let mut o = json!({ "value": self.value.as_str() });
        if let Some(r) = &self.reason {
            o["reason"] = json!(r);
        }
        if let Some(w) = &self.witness {
            let rows: Vec<Vec<String>> = w
                .iter()
                .map(|r| r.iter().map(|e| fd.format(e)).collect())
                .collect();
            o["witness"] = json!(rows);
        }
        o
    }
}

#[derive(Debug, Clone)]
struct Row {
    dim_le: usize,
    fd: IdealExp,
    le: SpaceInv,
    paren: SpaceInv,
    bracket: SpaceInv,
    delta: IdealExp,
    proper_here: bool,
}

/// Level-indexed invariants of a lattice, precomputed over the range where
/// they vary and constant outside it.
#[derive(Debug, Clone)]
pub struct Profile {
    lo: i32,
    window: Option<(i32, i32)>,
    rows: Vec<Row>,
}

impl Profile {
    pub fn new(l: &JordanLattice, fd: &Field) -> Profile {
        let (lo, hi, window) = match (l.min_scale(), l.max_scale()) {
            (Some(a), Some(b)) => (a - 3, b + 2, Some((a - 2, b + 2))),
            _ => (0, 0, None),
        };
        let rows = (lo..=hi)
            .map(|i| Row {
                dim_le: l.dim_le(i),
                fd: l.fd_ideal(i),
                le: l.sub_space(i, SubKind::Le, fd),
                paren: l.sub_space(i, SubKind::Paren, fd),
                bracket: l.sub_space(i, SubKind::Bracket, fd),
                delta: l.delta_ideal(i),
                proper_here: l.has_proper_at(i),
            })
            .collect();
        Profile { lo, window, rows }
    }

    fn row(&self, i: i32) -> &Row {
        let k = (i - self.lo).clamp(0, self.rows.len() as i32 - 1);
        &self.rows[k as usize]
    }

    fn is_zero(&self) -> bool {
        self.window.is_none()
    }
}

/// Levels outside which every clause is constant.
fn joint_window(a: &Profile, b: &Profile) -> Option<(i32, i32)> {
    match (a.window, b.window) {
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
        (w, None) | (None, w) => w,
    }
}

fn lower_type_at(l: &Profile, big: &Profile, i: i32) -> Option<String> {
    let (rl, rb) = (l.row(i), big.row(i));
    let (dl, db) = (rl.dim_le, rb.dim_le);
    if dl > db {
        return Some(format!("Def3.2(1)@i={i}"));
    }
    let ord = rl.fd.mul(rb.fd).exp();
    if dl == db && dl > 0 && ord.is_some_and(|o| o.rem_euclid(2) == 1) {
        return Some(format!("Def3.2(2)@i={i}"));
    }
    let l_here = rl.proper_here;
    let b_here = rb.proper_here;
    let l_next = l.row(i + 1).proper_here;
    let b_next = big.row(i + 1).proper_here;
    if dl == db {
        if l_next && !b_next {
            return Some(format!("Def3.2(3)(a)@i={i}"));
        }
        if b_here && !l_here {
            return Some(format!("Def3.2(3)(b)@i={i}"));
        }
    }
    if dl + 1 == db && dl > 0 {
        let o = ord.expect("nonzero sublattices");
        if (o - i - 1).rem_euclid(2) == 0 {
            if b_here && !l_here {
                return Some(format!("Def3.2(4)(a)@i={i}"));
            }
        } else if l_next && !b_next {
            return Some(format!("Def3.2(4)(b)@i={i}"));
        }
    }
    None
}

fn criterion_at(l: &Profile, big: &Profile, i: i32, fd: &Field) -> Option<String> {
    let lb = l.row(i).bracket;
    let target1 = big.row(i + 2).paren;
    if !lb.embeds_in(&target1, fd) {
        return Some(format!("Thm3.4(1)@i={i}"));
    }
    let w = lb.complement_in(&target1, fd).expect("embedding checked");
    let (dl, db) = (l.row(i).delta, big.row(i).delta);
    if !w.represents_ideal(dl, fd) || !w.represents_ideal(db, fd) {
        return Some(format!("Thm3.4(1)@i={i}"));
    }
    if w == SpaceInv::hyperbolic(fd) && !dl.mul(dl).contains(dl.mul(db)) {
        return Some(format!("Thm3.4(2)@i={i}"));
    }
    let two_i = fd.class_of_pow2(i);
    let line = SpaceInv::line(two_i);
    let hits = |c: &SpaceInv| {
        c.represents_class(two_i, fd) || c.represents_class(two_i * fd.delta_class(), fd)
    };
    let le = l.row(i).le;
    let target3 = big.row(i + 1).paren.sum(&line, fd);
    if !le.embeds_in(&target3, fd) || !hits(&le.complement_in(&target3, fd).expect("checked")) {
        return Some(format!("Thm3.4(3)@i={i}"));
    }
    let target4 = big.row(i + 1).le.sum(&line, fd);
    if !lb.embeds_in(&target4, fd) || !hits(&lb.complement_in(&target4, fd).expect("checked")) {
        return Some(format!("Thm3.4(4)@i={i}"));
    }
    None
}

/// Lower-type test on precomputed profiles.
pub fn lower_type_profiles(l: &Profile, big: &Profile) -> RepVerdict {
    if let Some((lo, hi)) = joint_window(l, big) {
        for i in lo..=hi {
            if let Some(r) = lower_type_at(l, big, i) {
                return RepVerdict::fails(r);
            }
        }
    }
    RepVerdict::represented()
}

/// Full criterion on precomputed profiles; lower type is checked first.
pub fn represents_profiles(l: &Profile, big: &Profile, fd: &Field) -> RepVerdict {
    if l.is_zero() {
        return RepVerdict::represented();
    }
    let lt = lower_type_profiles(l, big);
    if !lt.is_represented() {
        return lt;
    }
    let (lo, hi) = joint_window(l, big).expect("nonzero lattice");
    for i in lo..=hi {
        if let Some(r) = criterion_at(l, big, i, fd) {
            return RepVerdict::fails(r);
        }
    }
    RepVerdict::represented()
}

/// Whether `l` has a lower type than `big`; `Represented` means it does.
pub fn lower_type(l: &JordanLattice, big: &JordanLattice, fd: &Field) -> RepVerdict {
    lower_type_profiles(&Profile::new(l, fd), &Profile::new(big, fd))
}

pub fn represents_lattice(l: &JordanLattice, big: &JordanLattice, fd: &Field) -> RepVerdict {
    represents_profiles(&Profile::new(l, fd), &Profile::new(big, fd), fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_core::JordanComponent;
    use crate::SquareClass;

    fn cls(fd: &Field, n: i64) -> SquareClass {
        fd.square_class(&fd.int(n)).unwrap()
    }

    fn diag(fd: &Field, parts: &[(i32, &[i64])]) -> JordanLattice {
        JordanLattice::new(
            parts
                .iter()
                .map(|(s, ns)| JordanComponent::proper(*s, ns.iter().map(|&n| cls(fd, n)).collect()))
                .collect(),
            fd,
        )
        .unwrap()
    }

    #[test]
    fn lower_type_examples() {
        let fd = Field::q2();
        let one = diag(&fd, &[(0, &[1])]);
        let two = diag(&fd, &[(1, &[1])]);
        assert!(lower_type(&one, &one, &fd).is_represented());
        let v = lower_type(&two, &one, &fd);
        assert_eq!(v.value, RepValue::NotRepresented);
        assert_eq!(v.reason.as_deref(), Some("Def3.2(2)@i=1"));
    }

    #[test]
    fn sums_of_three_squares() {
        let fd = Field::q2();
        let big = diag(&fd, &[(0, &[1, 1, 1])]);
        let seven = diag(&fd, &[(0, &[7])]);
        let five = diag(&fd, &[(0, &[5])]);
        assert_eq!(represents_lattice(&seven, &big, &fd).value, RepValue::NotRepresented);
        assert!(represents_lattice(&five, &big, &fd).is_represented());
        assert!(represents_lattice(&big, &big, &fd).is_represented());
    }

    #[test]
    fn zero_lattices() {
        let fd = Field::q2();
        let one = diag(&fd, &[(0, &[1])]);
        let z = JordanLattice::zero();
        assert!(represents_lattice(&z, &one, &fd).is_represented());
        assert_eq!(represents_lattice(&one, &z, &fd).value, RepValue::NotRepresented);
    }

    #[test]
    fn lines_and_doubled_lines() {
        let fd = Field::q2();
        let units = fd.unit_classes();
        let lines: Vec<JordanLattice> = units
            .iter()
            .flat_map(|&e| {
                [0, 1].map(|s| JordanLattice::new(vec![JordanComponent::proper(s, vec![e])], &fd).unwrap())
            })
            .collect();
        let mut checked = 0;
        for s1 in -1..=1 {
            for proper1 in [true, false] {
                if s1 == -1 && proper1 {
                    continue;
                }
                for d1 in 1..=3usize {
                    if !proper1 && d1 % 2 == 1 {
                        continue;
                    }
                    for s2 in [None, Some(s1 + 1), Some(s1 + 2)] {
                        let mut comps = vec![if proper1 {
                            JordanComponent::proper(s1, vec![units[1]; d1])
                        } else {
                            JordanComponent::improper(s1, d1 / 2, false)
                        }];
                        if let Some(s2) = s2 {
                            comps.push(JordanComponent::proper(s2, vec![units[0]]));
                        }
                        let big = JordanLattice::new(comps, &fd).unwrap();
                        let all = lines
                            .iter()
                            .all(|l| lower_type(l, &big, &fd).is_represented());
                        let first = &big.components()[0];
                        let expected = first.norm_exp() == 0
                            && (first.dim() != 1 || big.component(1).is_some_and(|c| c.scale == 1));
                        assert_eq!(all, expected, "{big:?}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 10);
    }
}
