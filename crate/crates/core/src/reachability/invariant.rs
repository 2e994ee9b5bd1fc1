//! Place-style invariants: linear forms `y·v` whose value is fixed by the
//! control state on every run. They come from the cycle space of the
//! control graph restricted to states that can lie on a run to the target.

use std::collections::VecDeque;

use crate::ideals::{OmegaNat, StateId};
use crate::model::Vass;

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// Integer basis of `{ y : z·y = 0 for every row z }`.
fn null_space(rows: &[Vec<i128>], d: usize) -> Vec<Vec<i128>> {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, i);
        for k in 0..m.len() {
            if k != r && m[k][c] != 0 {
                let (a, b) = (m[r][c], m[k][c]);
                for j in 0..d {
                    m[k][j] = m[k][j] * a - m[r][j] * b;
                }
                normalize(&mut m[k]);
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let is_pivot: Vec<bool> = (0..d).map(|c| pivots.iter().any(|&(_, p)| p == c)).collect();
    let lcm = pivots.iter().fold(1i128, |l, &(r, c)| {
        let x = m[r][c].abs();
        l / gcd(l, x) * x
    });
    (0..d)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut y = vec![0i128; d];
            y[f] = lcm;
            for &(r, c) in &pivots {
                y[c] = -m[r][f] * (lcm / m[r][c]);
            }
            normalize(&mut y);
            y
        })
        .collect()
}

fn coreachable(v: &Vass, state: StateId) -> Vec<bool> {
    let mut back = vec![false; v.num_states()];
    back[state] = true;
    let mut queue = VecDeque::from([state]);
    while let Some(q) = queue.pop_front() {
        for t in v.transitions.iter().filter(|t| t.dst == q) {
            if !back[t.src] {
                back[t.src] = true;
                queue.push_back(t.src);
            }
        }
    }
    back
}

/// True when no run from the initial configuration can end in `state` with
/// counters in the box `lo ≤ v ≤ hi`. Tries the invariants at the target,
/// then, for a coordinate that no remaining path to the target can change,
/// moves its bounds back to the edges entering that frozen region.
pub(crate) fn invariant_excludes(v: &Vass, state: StateId, lo: &[u64], hi: &[OmegaNat]) -> bool {
    if linear_excludes(v, state, lo, hi) {
        return true;
    }
    let back = coreachable(v, state);
    (0..v.dim)
        .filter(|&j| lo[j] > 0 || !hi[j].is_omega())
        .any(|j| frozen_excludes(v, &back, state, j, lo[j], hi[j]))
}

fn frozen_excludes(v: &Vass, back: &[bool], state: StateId, j: usize, lo: u64, hi: OmegaNat) -> bool {
    let mut region = back.to_vec();
    loop {
        let mut changed = false;
        for t in &v.transitions {
            if region[t.src] && back[t.dst] && (!region[t.dst] || t.effect[j] != 0) {
                region[t.src] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !region[state] {
        return false;
    }
    let within = |x: i128| x >= lo as i128 && hi.finite().is_none_or(|h| x <= h as i128);
    if region[v.initial.state] {
        return !within(v.initial.counters[j] as i128);
    }
    let d = v.dim;
    v.transitions.iter().filter(|t| back[t.src] && !region[t.src] && region[t.dst]).all(|t| {
        let mut elo: Vec<u64> = t.effect.iter().map(|&e| if e < 0 { e.unsigned_abs() } else { 0 }).collect();
        let mut ehi = vec![OmegaNat::Omega; d];
        let e = t.effect[j] as i128;
        elo[j] = elo[j].max(u64::try_from((lo as i128 - e).max(0)).unwrap_or(u64::MAX));
        if let OmegaNat::Fin(h) = hi {
            match u64::try_from(h as i128 - e) {
                Ok(x) => ehi[j] = OmegaNat::Fin(x),
                Err(_) => return true,
            }
        }
        if ehi[j].finite().is_some_and(|h| h < elo[j]) {
            return true;
        }
        linear_excludes(v, t.src, &elo, &ehi)
    })
}

fn linear_excludes(v: &Vass, state: StateId, lo: &[u64], hi: &[OmegaNat]) -> bool {
    let n = v.num_states();
    let d = v.dim;
    let back = coreachable(v, state);
    let init = v.initial.state;
    if !back[init] {
        return true;
    }
    let mut pot: Vec<Option<Vec<i128>>> = vec![None; n];
    pot[init] = Some(vec![0; d]);
    let mut queue = VecDeque::from([init]);
    while let Some(q) = queue.pop_front() {
        for t in v.outgoing(q).map(|i| &v.transitions[i]) {
            if back[t.dst] && pot[t.dst].is_none() {
                let p = pot[q].as_ref().expect("visited").iter().zip(&t.effect).map(|(&a, &e)| a + e as i128).collect();
                pot[t.dst] = Some(p);
                queue.push_back(t.dst);
            }
        }
    }
    if d == 0 {
        return false;
    }
    let cycles: Vec<Vec<i128>> = v
        .transitions
        .iter()
        .filter_map(|t| {
            let (ps, pd) = (pot[t.src].as_ref()?, pot[t.dst].as_ref()?);
            let z: Vec<i128> = (0..d).map(|j| ps[j] + t.effect[j] as i128 - pd[j]).collect();
            z.iter().any(|&x| x != 0).then_some(z)
        })
        .collect();
    let here = pot[state].as_ref().expect("state reachable");
    // Coordinates that only grow (or only shrink) on the relevant part.
    let mut lo = lo.to_vec();
    let mut hi = hi.to_vec();
    let relevant: Vec<_> = v.transitions.iter().filter(|t| pot[t.src].is_some() && pot[t.dst].is_some()).collect();
    for j in 0..d {
        let start = v.initial.counters[j];
        if relevant.iter().all(|t| t.effect[j] >= 0) {
            lo[j] = lo[j].max(start);
        }
        if relevant.iter().all(|t| t.effect[j] <= 0) && hi[j].finite().is_none_or(|h| h > start) {
            hi[j] = OmegaNat::Fin(start);
        }
        if hi[j].finite().is_some_and(|h| h < lo[j]) {
            return true;
        }
    }
    for y in null_space(&cycles, d) {
        let value: i128 = (0..d).map(|j| y[j] * (v.initial.counters[j] as i128 + here[j])).sum();
        let (mut min, mut max) = (Some(0i128), Some(0i128));
        for j in (0..d).filter(|&j| y[j] != 0) {
            let (l, h) = (lo[j] as i128, hi[j].finite().map(|x| x as i128));
            let (a, b) = if y[j] >= 0 { (Some(y[j] * l), h.map(|h| y[j] * h)) } else { (h.map(|h| y[j] * h), Some(y[j] * l)) };
            min = min.zip(a).map(|(m, a)| m + a);
            max = max.zip(b).map(|(m, b)| m + b);
        }
        if min.is_some_and(|m| value < m) || max.is_some_and(|m| value > m) {
            return true;
        }
    }
    false
}
