use std::collections::HashSet;

use crate::dyadic_field::{Field, SquareClass};
use crate::lattice_core::{JordanComponent, JordanLattice};

/// Sorted multisets of `size` unit classes.
pub(crate) fn multisets(classes: &[SquareClass], size: usize) -> Vec<Vec<SquareClass>> {
    fn go(
        classes: &[SquareClass],
        start: usize,
        size: usize,
        cur: &mut Vec<SquareClass>,
        out: &mut Vec<Vec<SquareClass>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..classes.len() {
            cur.push(classes[i]);
            go(classes, i, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(classes, 0, size, &mut Vec::new(), &mut out);
    out
}

/// Every modular component of the given scale and dimension.
pub(crate) fn components(
    scale: i32,
    dim: usize,
    proper: bool,
    improper: bool,
    fd: &Field,
) -> Vec<JordanComponent> {
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    if proper {
        out.extend(
            multisets(&fd.unit_classes(), dim)
                .into_iter()
                .map(|d| JordanComponent::proper(scale, d)),
        );
    }
    if improper && dim % 2 == 0 {
        for delta in [false, true] {
            out.push(JordanComponent::improper(scale, dim / 2, delta));
        }
    }
    out
}

#[derive(Clone, Copy)]
struct Slot {
    scale: i32,
    proper: bool,
    improper: bool,
}

/// All lattices with one optional component per slot and total dimension `k`.
/// Proper and improper parts of equal scale merge into a proper component,
/// which a proper slot of the same dimension already covers.
fn enumerate_slots(slots: &[Slot], k: usize, fd: &Field) -> Vec<JordanLattice> {
    fn go(
        slots: &[Slot],
        rem: usize,
        acc: &mut Vec<JordanComponent>,
        fd: &Field,
        seen: &mut HashSet<JordanLattice>,
        out: &mut Vec<JordanLattice>,
    ) {
        let Some((slot, rest)) = slots.split_first() else {
            if rem == 0 {
                let l = JordanLattice::new(acc.clone(), fd).expect("increasing scales");
                if seen.insert(l.clone()) {
                    out.push(l);
                }
            }
            return;
        };
        go(rest, rem, acc, fd, seen, out);
        for d in 1..=rem {
            for c in components(slot.scale, d, slot.proper, slot.improper, fd) {
                acc.push(c);
                go(rest, rem - d, acc, fd, seen, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(slots, k, &mut Vec::new(), fd, &mut HashSet::new(), &mut out);
    out
}

/// Dominant lattices `I_{-1} ⊥ I_0 ⊥ P_0 ⊥ P_1` of dimension `k`.
pub fn enumerate_dominant(k: usize, fd: &Field) -> Vec<JordanLattice> {
    let slots = [
        Slot { scale: -1, proper: false, improper: true },
        Slot { scale: 0, proper: true, improper: true },
        Slot { scale: 1, proper: true, improper: false },
    ];
    enumerate_slots(&slots, k, fd)
}

/// Classic basic lattices `I_0 ⊥ P_0 ⊥ P_1 ⊥ I_1` of dimension `k`.
pub fn enumerate_classic_basic(k: usize, fd: &Field) -> Vec<JordanLattice> {
    let slots = [
        Slot { scale: 0, proper: true, improper: true },
        Slot { scale: 1, proper: true, improper: true },
    ];
    enumerate_slots(&slots, k, fd)
}
