use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::components::{Component, FOUR};
use super::grid::OccupancyGrid;

/// Subgroup of `Z²` realized by loops in a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subgroup {
    Zero,
    /// Generated by a primitive, sign-normalized `(p, q)`.
    Cyclic(i64, i64),
    Full,
}

/// A closed cell path whose lift ends at `offset` from its start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub offset: (i64, i64),
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeckResult {
    pub subgroup: Subgroup,
    /// Generator is not primitive, or the lattice has index > 1.
    pub index: i64,
    /// A generator exceeds the configured offset bound.
    pub truncated: bool,
    pub witnesses: Vec<Witness>,
    /// Sheet offset of each component cell in the spanning-tree lift.
    pub lift: Vec<(usize, (i64, i64))>,
}

/// `(p, q)` divided by its gcd with `p > 0`, or `p = 0, q > 0`.
pub fn normalize(p: i64, q: i64) -> (i64, i64) {
    let g = gcd(p.abs(), q.abs()).max(1);
    let (p, q) = (p / g, q / g);
    if p < 0 || (p == 0 && q < 0) {
        (-p, -q)
    } else {
        (p, q)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Integer vector with its expression in terms of the raw loops.
#[derive(Debug, Clone)]
struct Tracked {
    v: (i64, i64),
    coef: Vec<i64>,
}

impl Tracked {
    fn combo(a: &Tracked, s: i64, b: &Tracked, t: i64) -> Tracked {
        Tracked {
            v: (s * a.v.0 + t * b.v.0, s * a.v.1 + t * b.v.1),
            coef: a.coef.iter().zip(&b.coef).map(|(x, y)| s * x + t * y).collect(),
        }
    }
}

/// Hermite basis `r1 = (x1, y1)`, `r2 = (0, y2)` of the lattice spanned by `gens`.
fn hermite(gens: &[Tracked]) -> Vec<Tracked> {
    let m = gens.first().map_or(0, |g| g.coef.len());
    let zero = Tracked { v: (0, 0), coef: vec![0; m] };
    let mut r1 = zero.clone();
    let mut r2 = zero.clone();
    for g in gens {
        // fold g into r1 on the first coordinate
        let (a, b) = (r1.v.0, g.v.0);
        let w = if b == 0 {
            g.clone()
        } else if a == 0 {
            std::mem::replace(&mut r1, g.clone())
        } else {
            let (d, s, t) = crate::torus::ext_gcd(a, b);
            let new_r1 = Tracked::combo(&r1, s, g, t);
            let w = Tracked::combo(&r1, b / d, g, -a / d);
            r1 = new_r1;
            w
        };
        // w has zero first coordinate; fold into r2
        debug_assert_eq!(w.v.0, 0);
        let (a, b) = (r2.v.1, w.v.1);
        if b != 0 {
            if a == 0 {
                r2 = w;
            } else {
                let (_, s, t) = crate::torus::ext_gcd(a, b);
                r2 = Tracked::combo(&r2, s, &w, t);
            }
        }
    }
    if r1.v.0 < 0 || (r1.v.0 == 0 && r1.v.1 < 0) {
        r1 = Tracked::combo(&r1, -1, &zero, 0);
    }
    if r2.v.1 < 0 {
        r2 = Tracked::combo(&r2, -1, &zero, 0);
    }
    if r1.v.0 == 0 && r1.v.1 != 0 {
        // both rows vertical: merge
        if r2.v.1 == 0 {
            r2 = r1;
        } else {
            let (_, s, t) = crate::torus::ext_gcd(r1.v.1, r2.v.1);
            r2 = Tracked::combo(&r1, s, &r2, t);
        }
        r1 = zero.clone();
    }
    if r2.v.1 != 0 && r1.v.0 != 0 {
        let k = r1.v.1.div_euclid(r2.v.1);
        r1 = Tracked::combo(&r1, 1, &r2, -k);
    }
    [r1, r2].into_iter().filter(|r| r.v != (0, 0)).collect()
}

fn tree_path(parent: &HashMap<usize, usize>, root: usize, mut c: usize) -> Vec<usize> {
    let mut p = vec![c];
    while c != root {
        c = parent[&c];
        p.push(c);
    }
    p.reverse();
    p
}

/// Loop subgroup of a component in the universal cover.
///
/// A spanning tree fixes a sheet for every cell; each non-tree edge closes a loop
/// whose displacement is the sheet mismatch across it. The lattice they span is the
/// image of the component's fundamental group.
pub fn deck_subgroup(grid: &OccupancyGrid, comp: &Component, p_max: i64) -> DeckResult {
    let root = comp.cells[0];
    let mut sheet: HashMap<usize, (i64, i64)> = HashMap::with_capacity(comp.size());
    let mut parent: HashMap<usize, usize> = HashMap::with_capacity(comp.size());
    sheet.insert(root, (0, 0));
    let mut queue = VecDeque::from([root]);
    let mut loops: BTreeMap<(i64, i64), (usize, usize, (i64, i64))> = BTreeMap::new();
    while let Some(c) = queue.pop_front() {
        let sc = sheet[&c];
        for &(di, dj) in &FOUR {
            let (nb, ds) = grid.step(c, di, dj);
            if grid.is_marked(nb) {
                continue;
            }
            let target = (sc.0 + ds.0, sc.1 + ds.1);
            match sheet.get(&nb) {
                None => {
                    sheet.insert(nb, target);
                    parent.insert(nb, c);
                    queue.push_back(nb);
                }
                Some(&s) => {
                    let off = (target.0 - s.0, target.1 - s.1);
                    if off != (0, 0) {
                        loops.entry(off).or_insert((c, nb, ds));
                    }
                }
            }
        }
    }
    let raw: Vec<((i64, i64), Vec<usize>)> = loops
        .iter()
        .map(|(&off, &(u, v, _))| {
            let mut path = tree_path(&parent, root, u);
            let mut back = tree_path(&parent, root, v);
            back.reverse();
            path.extend(back);
            (off, path)
        })
        .collect();
    let m = raw.len();
    let gens: Vec<Tracked> = raw
        .iter()
        .enumerate()
        .map(|(i, (off, _))| {
            let mut coef = vec![0; m];
            coef[i] = 1;
            Tracked { v: *off, coef }
        })
        .collect();
    let basis = hermite(&gens);
    let witness_of = |t: &Tracked| {
        let mut path = vec![root];
        for (i, &c) in t.coef.iter().enumerate() {
            let (_, lp) = &raw[i];
            for _ in 0..c.abs() {
                if c > 0 {
                    path.extend_from_slice(&lp[1..]);
                } else {
                    path.extend(lp.iter().rev().skip(1));
                }
            }
        }
        Witness { offset: t.v, path }
    };
    let (subgroup, index) = match basis.len() {
        0 => (Subgroup::Zero, 1),
        1 => {
            let v = basis[0].v;
            let g = gcd(v.0.abs(), v.1.abs());
            let (p, q) = normalize(v.0, v.1);
            (Subgroup::Cyclic(p, q), g)
        }
        _ => (Subgroup::Full, (basis[0].v.0 * basis[1].v.1).abs()),
    };
    let truncated = basis.iter().any(|b| b.v.0.abs().max(b.v.1.abs()) > p_max);
    let witnesses = basis.iter().map(witness_of).collect();
    let lift = comp.cells.iter().map(|&c| (c, sheet[&c])).collect();
    DeckResult { subgroup, index, truncated, witnesses, lift }
}

/// Independent check that `w` is a closed 4-connected path of unmarked cells of `comp`
/// whose lift is displaced by `w.offset`.
pub fn verify_witness(grid: &OccupancyGrid, comp: &Component, w: &Witness) -> bool {
    let Some((&first, rest)) = w.path.split_first() else { return false };
    if !comp.contains(first) || grid.is_marked(first) {
        return false;
    }
    let mut total = (0i64, 0i64);
    let mut cur = first;
    for &next in rest {
        if !comp.contains(next) || grid.is_marked(next) {
            return false;
        }
        let Some(ds) = FOUR.iter().find_map(|&(di, dj)| {
            let (nb, ds) = grid.step(cur, di, dj);
            (nb == next).then_some(ds)
        }) else {
            return false;
        };
        total = (total.0 + ds.0, total.1 + ds.1);
        cur = next;
    }
    cur == first && total == w.offset
}
