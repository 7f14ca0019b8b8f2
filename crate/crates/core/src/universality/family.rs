use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::enumerate::components;
use super::{classify, ClassifyVerdict, Oracle};
use crate::dyadic_field::Field;
use crate::error::{Error, Result};
use crate::lattice_core::{JordanComponent, JordanLattice};

/// Bounds of a finite family of integral (or classic) lattices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub max_components: usize,
    pub scale_min: i32,
    pub scale_max: i32,
    pub max_dim: usize,
    pub max_component_dim: usize,
    /// Restrict to classic lattices (no component of scale below 1).
    pub classic: bool,
    pub max_instances: usize,
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec {
            max_components: 3,
            scale_min: -1,
            scale_max: 3,
            max_dim: 5,
            max_component_dim: 4,
            classic: false,
            max_instances: 5_000_000,
        }
    }
}

impl FamilySpec {
    fn scales(&self) -> Vec<i32> {
        let lo = if self.classic { self.scale_min.max(0) } else { self.scale_min.max(-1) };
        (lo..=self.scale_max).collect()
    }
}

/// Component lists by `(scale, dim)` and the `(scale, dim)` sequences of the family.
struct Catalog {
    lists: HashMap<(i32, usize), Vec<JordanComponent>>,
    templates: Vec<Vec<(i32, usize)>>,
}

impl Catalog {
    fn new(spec: &FamilySpec, fd: &Field) -> Catalog {
        let mut lists = HashMap::new();
        let scales = spec.scales();
        for &s in &scales {
            for d in 1..=spec.max_component_dim.min(spec.max_dim) {
                let c = components(s, d, s >= 0, true, fd);
                if !c.is_empty() {
                    lists.insert((s, d), c);
                }
            }
        }
        let mut templates = Vec::new();
        fn go(
            scales: &[i32],
            spec: &FamilySpec,
            lists: &HashMap<(i32, usize), Vec<JordanComponent>>,
            rem: usize,
            cur: &mut Vec<(i32, usize)>,
            out: &mut Vec<Vec<(i32, usize)>>,
        ) {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            if cur.len() == spec.max_components {
                return;
            }
            for (i, &s) in scales.iter().enumerate() {
                for d in 1..=rem.min(spec.max_component_dim) {
                    if lists.contains_key(&(s, d)) {
                        cur.push((s, d));
                        go(&scales[i + 1..], spec, lists, rem - d, cur, out);
                        cur.pop();
                    }
                }
            }
        }
        go(&scales, spec, &lists, spec.max_dim, &mut Vec::new(), &mut templates);
        Catalog { lists, templates }
    }

    fn count(&self) -> usize {
        self.templates
            .iter()
            .map(|t| t.iter().map(|k| self.lists[k].len()).product::<usize>())
            .sum()
    }
}

/// Exhaustive, deterministic iterator over a family.
pub struct FamilyIter<'a> {
    fd: &'a Field,
    catalog: Catalog,
    template: usize,
    odometer: Vec<usize>,
    len: usize,
}

impl Iterator for FamilyIter<'_> {
    type Item = JordanLattice;

    fn next(&mut self) -> Option<JordanLattice> {
        let t = self.catalog.templates.get(self.template)?;
        let comps = t
            .iter()
            .zip(&self.odometer)
            .map(|(k, &i)| self.catalog.lists[k][i].clone())
            .collect();
        let l = JordanLattice::new(comps, self.fd).expect("increasing scales");
        let mut pos = t.len();
        loop {
            if pos == 0 {
                self.template += 1;
                self.odometer = vec![0; self.catalog.templates.get(self.template).map_or(0, Vec::len)];
                break;
            }
            pos -= 1;
            self.odometer[pos] += 1;
            if self.odometer[pos] < self.catalog.lists[&t[pos]].len() {
                break;
            }
            self.odometer[pos] = 0;
        }
        Some(l)
    }
}

impl FamilyIter<'_> {
    pub fn total(&self) -> usize {
        self.len
    }
}

/// Every lattice of the family, or a guard error when it has more than
/// `max_instances` members.
pub fn enumerate_family<'a>(spec: &FamilySpec, fd: &'a Field) -> Result<FamilyIter<'a>> {
    let catalog = Catalog::new(spec, fd);
    let len = catalog.count();
    if len > spec.max_instances {
        return Err(Error::Guard(format!(
            "family has {len} members, above the budget of {}",
            spec.max_instances
        )));
    }
    let odometer = vec![0; catalog.templates.first().map_or(0, Vec::len)];
    Ok(FamilyIter {
        fd,
        catalog,
        template: 0,
        odometer,
        len,
    })
}

/// `n` members drawn with replacement, reproducible from `seed`.
pub fn sample_family(spec: &FamilySpec, n: usize, seed: u64, fd: &Field) -> Vec<JordanLattice> {
    let catalog = Catalog::new(spec, fd);
    if catalog.templates.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let t = catalog.templates.choose(&mut rng).expect("nonempty");
            let comps = t
                .iter()
                .map(|k| {
                    let list = &catalog.lists[k];
                    list[rng.gen_range(0..list.len())].clone()
                })
                .collect();
            JordanLattice::new(comps, fd).expect("increasing scales")
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CrossRecord {
    pub lattice: JordanLattice,
    pub classifier: ClassifyVerdict,
    pub oracle: ClassifyVerdict,
    pub agree: bool,
}

impl CrossRecord {
    pub fn to_json(&self, fd: &Field) -> Value {
        json!({
            "lattice": self.lattice.to_json(fd),
            "classifier": self.classifier.to_json(fd),
            "oracle": self.oracle.to_json(fd),
            "agree": self.agree,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct CrossReport {
    pub total: usize,
    pub agreements: usize,
    pub positives: usize,
    pub disagreements: Vec<CrossRecord>,
}

impl CrossReport {
    pub fn to_json(&self, fd: &Field) -> Value {
        json!({
            "total": self.total,
            "agreements": self.agreements,
            "positives": self.positives,
            "disagreements": self.disagreements.iter().map(|r| r.to_json(fd)).collect::<Vec<_>>(),
        })
    }
}

const CHUNK: usize = 4096;

/// Compares the classifier with the oracle on every lattice, in input order.
/// `on_record` sees each record as it is produced.
pub fn crosscheck<I>(
    lattices: I,
    k: usize,
    classic: bool,
    fd: &Field,
    mut on_record: impl FnMut(&CrossRecord),
) -> Result<CrossReport>
where
    I: IntoIterator<Item = JordanLattice>,
{
    let oracle = Oracle::new(k, classic, fd)?;
    let mut report = CrossReport::default();
    let mut it = lattices.into_iter().peekable();
    while it.peek().is_some() {
        let chunk: Vec<JordanLattice> = it.by_ref().take(CHUNK).collect();
        let records = chunk
            .into_par_iter()
            .map(|l| {
                let classifier = classify(&l, k, classic, fd)?;
                let oracle = oracle.check(&l, fd)?;
                let agree = classifier.value == oracle.value;
                Ok(CrossRecord {
                    lattice: l,
                    classifier,
                    oracle,
                    agree,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for r in records {
            on_record(&r);
            report.total += 1;
            if r.classifier.value {
                report.positives += 1;
            }
            if r.agree {
                report.agreements += 1;
            } else {
                report.disagreements.push(r);
            }
        }
    }
    Ok(report)
}
