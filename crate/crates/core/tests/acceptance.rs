use std::process::ExitCode;
use std::time::Instant;

use dyadic_lattice::dyadic_field::isotropy::diagonal_isotropic;
use dyadic_lattice::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn ensure(failures: &[String], ok: String) -> Outcome {
    match failures.first() {
        None => Ok(ok),
        Some(f) => Err(format!("{} failure(s), first: {f}", failures.len())),
    }
}

fn sweep(spec: &FamilySpec, k: usize, fd: &Field) -> Outcome {
    let family = enumerate_family(spec, fd).map_err(|e| e.to_string())?;
    let report = crosscheck(family, k, spec.classic, fd, |_| {}).map_err(|e| e.to_string())?;
    let tag = if spec.classic { "classic" } else { "integral" };
    match report.disagreements.first() {
        None => Ok(format!(
            "{tag} k={k}: {} lattices, {} positive",
            report.total, report.positives
        )),
        Some(r) => Err(format!(
            "{tag} k={k}: {} disagreements, first {}",
            report.disagreements.len(),
            r.to_json(fd)
        )),
    }
}

fn sweeps(k: usize) -> Outcome {
    let fd = Field::q2();
    let max_dim = if k == 1 { 5 } else { k + 5 };
    let mut notes = Vec::new();
    for classic in [false, true] {
        let spec = FamilySpec { max_dim, classic, ..FamilySpec::default() };
        notes.push(sweep(&spec, k, &fd)?);
    }
    Ok(notes.join("; "))
}

fn second_degree_samples() -> Outcome {
    let fd = Field::new(2, 12).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for k in [1usize, 2] {
        for classic in [false, true] {
            let spec = FamilySpec {
                max_dim: if k == 1 { 5 } else { k + 5 },
                classic,
                ..FamilySpec::default()
            };
            let sample = sample_family(&spec, 500, 2024 + k as u64, &fd);
            let r = crosscheck(sample, k, classic, &fd, |_| {}).map_err(|e| e.to_string())?;
            if let Some(d) = r.disagreements.first() {
                return Err(format!("k={k} classic={classic}: {}", d.to_json(&fd)));
            }
            notes.push(format!("k={k} classic={classic}: {}/{} positive", r.positives, r.total));
        }
    }
    Ok(notes.join("; "))
}

/// Jordan components indexed from 1.
struct Comps<'a>(&'a JordanLattice);

impl Comps<'_> {
    fn dim(&self, j: usize) -> usize {
        self.0.component(j - 1).map_or(0, |c| c.dim())
    }

    fn scale(&self, j: usize) -> Option<i32> {
        self.0.component(j - 1).map(|c| c.scale)
    }

    fn norm(&self, j: usize) -> Option<i32> {
        self.0.component(j - 1).map(|c| c.norm_exp())
    }

    fn sn(&self, j: usize, e: i32) -> bool {
        self.scale(j) == Some(e) && self.norm(j) == Some(e)
    }

    fn improper_half_modular(&self) -> bool {
        self.scale(1) == Some(-1) && self.norm(1) == Some(0)
    }
}

fn dominant_even(l: &JordanLattice, k: usize) -> bool {
    let c = Comps(l);
    c.improper_half_modular()
        && c.dim(1) >= k
        && (c.dim(1) > k || c.scale(2).is_some_and(|s| s <= 1))
}

/// The even-`k` form with a 2-modular `L_2` required to be proper.
fn dominant_even_refined(l: &JordanLattice, k: usize) -> bool {
    let c = Comps(l);
    c.improper_half_modular()
        && c.dim(1) >= k
        && (c.dim(1) > k || c.scale(2) == Some(0) || c.sn(2, 1))
}

fn dominant_odd(l: &JordanLattice, k: usize) -> bool {
    let c = Comps(l);
    let d1 = c.dim(1);
    c.improper_half_modular()
        && (d1 >= k + 1
            || (d1 + 1 == k && c.dim(2) >= 2 && c.sn(2, 0))
            || (d1 + 1 == k && c.dim(2) == 1 && c.sn(2, 0) && c.sn(3, 1)))
}

fn classic_even(l: &JordanLattice, k: usize) -> bool {
    let c = Comps(l);
    c.sn(1, 0) && c.dim(1) >= k + 1
}

fn classic_odd(l: &JordanLattice, k: usize) -> bool {
    let c = Comps(l);
    c.sn(1, 0) && c.dim(1) >= k && (c.dim(1) > k || c.sn(2, 1))
}

type Form = fn(&JordanLattice, usize) -> bool;

fn lower_type_forms() -> Outcome {
    compare_forms(&[
        ("dominant k=2", 2, false, dominant_even),
        ("dominant k=4", 4, false, dominant_even),
        ("dominant k=3", 3, false, dominant_odd),
        ("classic k=2", 2, true, classic_even),
        ("classic k=4", 4, true, classic_even),
        ("classic k=3", 3, true, classic_odd),
    ])
}

fn refined_lower_type_forms() -> Outcome {
    compare_forms(&[
        ("dominant k=2", 2, false, dominant_even_refined),
        ("dominant k=4", 4, false, dominant_even_refined),
    ])
}

fn compare_forms(cases: &[(&str, usize, bool, Form)]) -> Outcome {
    let fd = Field::q2();
    let mut notes = Vec::new();
    let mut fails = Vec::new();
    for &(name, k, classic, form) in cases {
        let oracle = Oracle::new(k, classic, &fd).map_err(|e| e.to_string())?;
        let spec = FamilySpec { classic, ..FamilySpec::default() };
        let (mut total, mut holds, mut exceptions) = (0usize, 0usize, 0usize);
        for l in enumerate_family(&spec, &fd).map_err(|e| e.to_string())? {
            let failure = oracle.lower_type_failure(&l, &fd);
            if failure.is_none() != form(&l, k) {
                if exceptions == 0 {
                    fails.push(format!(
                        "{name}: closed form {} on {} (test lattice {})",
                        form(&l, k),
                        l.to_json(&fd),
                        failure.map_or("none".into(), |t| t.to_json(&fd).to_string())
                    ));
                }
                exceptions += 1;
            }
            total += 1;
            holds += failure.is_none() as usize;
        }
        notes.push(format!("{name}: {holds}/{total}, {exceptions} exceptions"));
    }
    let summary = notes.join("; ");
    if fails.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; first: {}", fails.join("; ")))
    }
}

fn space_properties_for(fd: &Field) -> Vec<String> {
    let mut fails = Vec::new();
    let classes = fd.classes();
    let units = fd.unit_classes();
    let minus = fd.minus_one_class();
    let delta = fd.delta_class();
    let two = SquareClass::TWO;
    let space = |c: &[SquareClass]| SpaceInv::from_classes(c, fd);
    for (i, &a) in classes.iter().enumerate() {
        for (j, &b) in classes.iter().enumerate().skip(i) {
            let v = space(&[a, b]);
            let all = classes.iter().all(|&g| v.represents_class(g, fd));
            if all != v.is_isotropic(fd) {
                fails.push(format!("binary <{a:?},{b:?}>: universal {all}"));
            }
            let d = v.signed_disc(fd);
            if d.is_unit() && d != delta {
                for e in -2..=2 {
                    if !v.represents_ideal(IdealExp::pow2(e), fd) {
                        fails.push(format!("binary <{a:?},{b:?}> misses ideal 2^{e}"));
                    }
                }
            }
            for &c in &classes[j..] {
                let v = space(&[a, b, c]);
                for e in [0, 1] {
                    if !v.represents_ideal(IdealExp::pow2(e), fd) {
                        fails.push(format!("ternary <{a:?},{b:?},{c:?}> misses ideal 2^{e}"));
                    }
                }
                if !v.is_isotropic(fd) {
                    for &g in &classes {
                        if !v.represents_class(g, fd) && !v.represents_class(g * delta, fd) {
                            fails.push(format!("anisotropic <{a:?},{b:?},{c:?}> misses {g:?} and {g:?}Δ"));
                        }
                    }
                }
            }
        }
    }
    for &e1 in &units {
        for &e2 in &units {
            let v = space(&[SquareClass::ONE, e1, e2]);
            if !v.is_isotropic(fd) {
                if !units.iter().all(|&u| v.represents_class(u * two, fd)) {
                    fails.push(format!("<1,{e1:?},{e2:?}> misses some 2u"));
                }
                if v.represents_class(minus * e1 * e2, fd) {
                    fails.push(format!("<1,{e1:?},{e2:?}> represents -e1e2"));
                }
            }
            let v = space(&[SquareClass::ONE, e1, two * e2]);
            if !v.is_isotropic(fd) {
                if !units.iter().all(|&u| v.represents_class(u, fd)) {
                    fails.push(format!("<1,{e1:?},2{e2:?}> misses some unit"));
                }
                if v.represents_class(minus * two * e1 * e2, fd) {
                    fails.push(format!("<1,{e1:?},2{e2:?}> represents -2e1e2"));
                }
            }
        }
    }
    for &c in &units {
        if c == SquareClass::ONE || c == delta {
            continue;
        }
        let mc = minus * c;
        let iso = |x: SquareClass, y: SquareClass| space(&[x, mc, minus * y]).is_isotropic(fd);
        let theta = units.iter().any(|&t| iso(SquareClass::ONE, two * t));
        let eps = units.iter().any(|&e| !iso(SquareClass::ONE, two * e));
        let eta = units
            .iter()
            .any(|&h| !iso(SquareClass::ONE, h) && !iso(delta, h));
        if !(theta && eps && eta) {
            fails.push(format!("no witnesses for c={c:?}: {theta} {eps} {eta}"));
        }
    }
    fails
}

fn space_properties() -> Outcome {
    let mut fails = Vec::new();
    for f in [1, 2] {
        let fd = Field::new(f, 12).map_err(|e| e.to_string())?;
        fails.extend(space_properties_for(&fd).into_iter().map(|s| format!("f={f}: {s}")));
    }
    ensure(&fails, "f=1,2 over all square classes".into())
}

fn hilbert_algebra() -> Outcome {
    let mut fails = Vec::new();
    let mut pairs = 0;
    for f in [1, 2] {
        let fd = Field::new(f, 20).map_err(|e| e.to_string())?;
        let cs = fd.classes();
        let h = |a, b| fd.hilbert_class(a, b);
        for &a in &cs {
            if h(a, fd.minus_one_class() * a) != 1 {
                fails.push(format!("f={f}: (a,-a) for {a:?}"));
            }
            for &b in &cs {
                pairs += 1;
                if h(a, b) != h(b, a) {
                    fails.push(format!("f={f}: symmetry {a:?} {b:?}"));
                }
                for &c in &cs {
                    if h(a, b * c) != h(a, b) * h(a, c) {
                        fails.push(format!("f={f}: bimultiplicativity {a:?} {b:?} {c:?}"));
                    }
                }
            }
        }
        let mut squares = vec![fd.one(), fd.int(3), fd.int(5), fd.int(2)];
        squares.push(fd.add(&fd.one(), &fd.mul_pow2(fd.rho(), 1)));
        for (c, rep) in fd.square_class_reps() {
            for s in &squares {
                let a = fd.mul(&rep, &fd.mul(s, s));
                let b = fd.sub(&fd.one(), &a);
                if fd.is_zero(&b) {
                    continue;
                }
                match fd.hilbert(&a, &b) {
                    Ok(1) => {}
                    other => fails.push(format!("f={f}: (a,1-a) in class {c:?}: {other:?}")),
                }
            }
        }
    }
    let fd = Field::new(1, 12).map_err(|e| e.to_string())?;
    let reps = fd.square_class_reps();
    let mut ternaries = 0;
    for i in 0..reps.len() {
        for j in i..reps.len() {
            for k in j..reps.len() {
                let coeffs = [reps[i].1.clone(), reps[j].1.clone(), reps[k].1.clone()];
                let inv = SpaceInv::from_classes(&[reps[i].0, reps[j].0, reps[k].0], &fd);
                let brute = diagonal_isotropic(&fd, &coeffs, 5);
                ternaries += 1;
                if brute != Some(inv.is_isotropic(&fd)) {
                    fails.push(format!(
                        "ternary {:?}: table {} vs search {brute:?}",
                        [reps[i].0, reps[j].0, reps[k].0],
                        inv.is_isotropic(&fd)
                    ));
                }
            }
        }
    }
    ensure(&fails, format!("{pairs} class pairs, {ternaries} ternaries"))
}

fn random_gram(rng: &mut ChaCha8Rng, n: usize, fd: &Field) -> (GramMatrix, JordanLattice) {
    loop {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let x = if rng.gen_bool(if i == j { 0.9 } else { 0.3 }) {
                    (2 * rng.gen_range(-3i64..=3) + 1) << rng.gen_range(0..=3)
                } else {
                    0
                };
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
        let g = GramMatrix::from_ints(&rows, fd).expect("integer entries");
        if let Ok(l) = g.jordan_split(fd) {
            return (g, l);
        }
    }
}

fn spot_checks() -> Outcome {
    let fd = Field::new(1, 30).map_err(|e| e.to_string())?;
    let opts = BruteOptions::default();
    let big = GramMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &fd).map_err(|e| e.to_string())?;
    let big_l = big.jordan_split(&fd).map_err(|e| e.to_string())?;
    let mut fails = Vec::new();
    for (n, want) in [(7, RepValue::NotRepresented), (5, RepValue::Represented)] {
        let small = GramMatrix::from_ints(&[&[n]], &fd).map_err(|e| e.to_string())?;
        let small_l = small.jordan_split(&fd).map_err(|e| e.to_string())?;
        let c = represents_lattice(&small_l, &big_l, &fd).value;
        let b = brute_force_represents(&small, &big, 9, &opts, &fd)
            .map_err(|e| e.to_string())?
            .value;
        if c != want || b != want {
            fails.push(format!("<{n}> in I3: criterion {c:?}, search {b:?}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut decisive, mut contra) = (0, 0);
    for _ in 0..100 {
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(m..=4);
        let (gs, ls) = random_gram(&mut rng, m, &fd);
        let (gb, lb) = random_gram(&mut rng, n, &fd);
        let c = represents_lattice(&ls, &lb, &fd).value;
        let b = brute_force_represents(&gs, &gb, 9, &opts, &fd)
            .map_err(|e| e.to_string())?
            .value;
        if b != RepValue::Unknown {
            decisive += 1;
            if b != c {
                contra += 1;
                fails.push(format!("{:?} in {:?}: criterion {c:?}, search {b:?}", gs.rows(), gb.rows()));
            }
        }
    }
    if decisive < 90 {
        fails.push(format!("only {decisive}/100 decisive"));
    }
    ensure(&fails, format!("{decisive}/100 decisive, {contra} contradictions"))
}

fn random_lattice(rng: &mut ChaCha8Rng, fd: &Field) -> JordanLattice {
    let units = fd.unit_classes();
    let mut scale = rng.gen_range(-2..=1);
    let mut comps = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let dim = rng.gen_range(1..=3);
        if dim % 2 == 0 && rng.gen_bool(0.5) {
            comps.push(JordanComponent::improper(scale, dim / 2, rng.gen_bool(0.5)));
        } else {
            let diag = (0..dim).map(|_| units[rng.gen_range(0..units.len())]).collect();
            comps.push(JordanComponent::proper(scale, diag));
        }
        scale += rng.gen_range(1..=3);
    }
    JordanLattice::new(comps, fd).expect("increasing scales")
}

fn unitriangular(rng: &mut ChaCha8Rng, n: usize, fd: &Field) -> Vec<Vec<Elt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => fd.one(),
                    std::cmp::Ordering::Less => fd.int(rng.gen_range(-3..=3)),
                    std::cmp::Ordering::Greater => fd.zero(),
                })
                .collect()
        })
        .collect()
}

fn round_trip() -> Outcome {
    let fd = Field::new(1, 30).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut fails = Vec::new();
    for _ in 0..1000 {
        let l = random_lattice(&mut rng, &fd);
        let g = GramMatrix::from_lattice(&l, &fd);
        match g.jordan_split(&fd) {
            Ok(back) if back.invariant_data() == l.invariant_data() => {}
            other => fails.push(format!("{}: {other:?}", l.to_json(&fd))),
        }
        let p = unitriangular(&mut rng, l.dim(), &fd);
        match g.transform(&p, &fd).and_then(|h| h.jordan_split(&fd)) {
            Ok(moved)
                if moved.jordan_type() == l.jordan_type()
                    && moved.space(&fd) == l.space(&fd) => {}
            other => fails.push(format!("basis change of {}: {other:?}", l.to_json(&fd))),
        }
    }
    ensure(&fails, "1000 lattices, split and basis change".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 universal and classic universal, k=1 family", || sweeps(1)),
        ("2 k-universal, k=2 family", || sweeps(2)),
        ("2 k-universal, k=3 family", || sweeps(3)),
        ("3 degree-2 field, seeded samples", second_degree_samples),
        ("4 lower-type closed forms", lower_type_forms),
        ("4 supplement: even-k dominant form with proper 2-modular L_2", refined_lower_type_forms),
        ("5 quadratic space properties", space_properties),
        ("6 Hilbert symbol algebra and isotropy search", hilbert_algebra),
        ("7 integral spot checks against congruence search", spot_checks),
        ("8 Jordan round trip", round_trip),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
