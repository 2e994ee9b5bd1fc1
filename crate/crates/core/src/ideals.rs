//! Upward- and downward-closed sets of configurations `Q × ℕ^d`, kept as
//! finite unions of atoms.
//!
//! An up-atom `q(u)↑` is the principal filter above `u` in state `q`; a
//! down-atom `q(x)↓` with `x ∈ (ℕ ∪ {ω})^d` is an ideal. Sets are stored in
//! canonical form: no atom is subsumed by another, and atoms are sorted by
//! `(state, vector)`, so two canonical sets are equal iff they are
//! structurally equal.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub type StateId = usize;
pub type NatVec = Vec<u64>;
pub type OmegaVec = Vec<OmegaNat>;

/// A natural number or ω. `ω` is above every natural and absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OmegaNat {
    Fin(u64),
    Omega,
}

impl OmegaNat {
    pub fn is_omega(self) -> bool {
        matches!(self, OmegaNat::Omega)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            OmegaNat::Fin(n) => Some(n),
            OmegaNat::Omega => None,
        }
    }

    /// `self + z`, or `None` when a finite value would become negative.
    pub fn add_int(self, z: i64) -> Option<OmegaNat> {
        match self {
            OmegaNat::Omega => Some(OmegaNat::Omega),
            OmegaNat::Fin(n) => add_signed(n, z).map(OmegaNat::Fin),
        }
    }

    pub fn ge_nat(self, n: u64) -> bool {
        match self {
            OmegaNat::Omega => true,
            OmegaNat::Fin(m) => m >= n,
        }
    }
}

impl From<u64> for OmegaNat {
    fn from(n: u64) -> Self {
        OmegaNat::Fin(n)
    }
}

impl fmt::Display for OmegaNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaNat::Fin(n) => write!(f, "{n}"),
            OmegaNat::Omega => write!(f, "w"),
        }
    }
}

/// `n + z` when it stays in ℕ and fits.
pub fn add_signed(n: u64, z: i64) -> Option<u64> {
    if z >= 0 {
        n.checked_add(z as u64)
    } else {
        n.checked_sub(z.unsigned_abs())
    }
}

pub fn leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn omega_vec(d: usize) -> OmegaVec {
    vec![OmegaNat::Omega; d]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpAtom {
    pub state: StateId,
    pub basis: NatVec,
}

impl UpAtom {
    pub fn new(state: StateId, basis: NatVec) -> Self {
        UpAtom { state, basis }
    }

    pub fn contains(&self, state: StateId, v: &[u64]) -> bool {
        self.state == state && leq(&self.basis, v)
    }

    /// `self ⊇ other`.
    pub fn subsumes(&self, other: &UpAtom) -> bool {
        self.state == other.state && leq(&self.basis, &other.basis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DownAtom {
    pub state: StateId,
    pub bound: OmegaVec,
}

impl DownAtom {
    pub fn new(state: StateId, bound: OmegaVec) -> Self {
        DownAtom { state, bound }
    }

    pub fn full(state: StateId, dim: usize) -> Self {
        DownAtom::new(state, omega_vec(dim))
    }

    pub fn contains(&self, state: StateId, v: &[u64]) -> bool {
        self.state == state && v.iter().zip(&self.bound).all(|(x, b)| b.ge_nat(*x))
    }

    /// `self ⊇ other`.
    pub fn subsumes(&self, other: &DownAtom) -> bool {
        self.state == other.state && other.bound.iter().zip(&self.bound).all(|(o, s)| o <= s)
    }
}

fn check_dims(dim: usize, other: usize) -> Result<()> {
    if dim != other {
        return Err(Error::DimensionMismatch { expected: dim, found: other });
    }
    Ok(())
}

/// Drops atoms subsumed by another one and sorts the rest.
fn canonicalize<A: Ord + Clone>(mut atoms: Vec<A>, subsumes: impl Fn(&A, &A) -> bool) -> Vec<A> {
    atoms.sort();
    atoms.dedup();
    let mut keep = vec![true; atoms.len()];
    for i in 0..atoms.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..atoms.len() {
            if i != j && keep[j] && subsumes(&atoms[j], &atoms[i]) {
                keep[i] = false;
                break;
            }
        }
    }
    atoms
        .into_iter()
        .zip(keep)
        .filter_map(|(a, k)| k.then_some(a))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpSet {
    dim: usize,
    num_states: usize,
    atoms: Vec<UpAtom>,
}

impl UpSet {
    pub fn new(dim: usize, num_states: usize, atoms: Vec<UpAtom>) -> Result<Self> {
        for a in &atoms {
            check_dims(dim, a.basis.len())?;
            if a.state >= num_states {
                return Err(Error::InvalidModel(format!("atom state {} out of range", a.state)));
            }
        }
        Ok(UpSet { dim, num_states, atoms: canonicalize(atoms, UpAtom::subsumes) })
    }

    pub fn empty(dim: usize, num_states: usize) -> Self {
        UpSet { dim, num_states, atoms: Vec::new() }
    }

    /// Every configuration in every state.
    pub fn full(dim: usize, num_states: usize) -> Self {
        let atoms = (0..num_states).map(|q| UpAtom::new(q, vec![0; dim])).collect();
        UpSet { dim, num_states, atoms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn atoms(&self) -> &[UpAtom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms_at(&self, state: StateId) -> impl Iterator<Item = &UpAtom> {
        self.atoms.iter().filter(move |a| a.state == state)
    }

    pub fn contains(&self, state: StateId, v: &[u64]) -> bool {
        self.atoms.iter().any(|a| a.contains(state, v))
    }

    pub fn member(&self, state: StateId, v: &[u64]) -> Result<bool> {
        check_dims(self.dim, v.len())?;
        if state >= self.num_states {
            return Err(Error::InvalidModel(format!("state {state} out of range")));
        }
        Ok(self.contains(state, v))
    }

    pub fn max_constant(&self) -> u64 {
        self.atoms.iter().flat_map(|a| a.basis.iter().copied()).max().unwrap_or(0)
    }

    fn same_universe(&self, other: &UpSet) -> Result<()> {
        check_dims(self.dim, other.dim)?;
        if self.num_states != other.num_states {
            return Err(Error::StateUniverseMismatch(self.num_states, other.num_states));
        }
        Ok(())
    }

    pub fn union(&self, other: &UpSet) -> Result<UpSet> {
        self.same_universe(other)?;
        let atoms = self.atoms.iter().chain(&other.atoms).cloned().collect();
        UpSet::new(self.dim, self.num_states, atoms)
    }

    pub fn intersect(&self, other: &UpSet) -> Result<UpSet> {
        self.same_universe(other)?;
        let mut atoms = Vec::new();
        for a in &self.atoms {
            for b in other.atoms.iter().filter(|b| b.state == a.state) {
                let basis = a.basis.iter().zip(&b.basis).map(|(x, y)| *x.max(y)).collect();
                atoms.push(UpAtom::new(a.state, basis));
            }
        }
        UpSet::new(self.dim, self.num_states, atoms)
    }

    pub fn is_subset(&self, other: &UpSet) -> Result<bool> {
        self.same_universe(other)?;
        Ok(self.atoms.iter().all(|a| other.atoms.iter().any(|b| b.subsumes(a))))
    }

    /// Re-canonicalizes; a no-op on values built through the public API.
    pub fn minimize(&self) -> UpSet {
        UpSet { atoms: canonicalize(self.atoms.clone(), UpAtom::subsumes), ..self.clone() }
    }

    /// Exact complement within `Q × ℕ^d`.
    ///
    /// Per state, enumerates the maximal `x̂ ∈ (C ∪ {ω})^d` whose downward
    /// closure avoids every basis, where `C` holds the critical values
    /// `u[j] − 1`. A partial assignment is cut as soon as some basis can no
    /// longer be avoided by the remaining coordinates.
    pub fn complement(&self) -> DownSet {
        let mut atoms = Vec::new();
        for q in 0..self.num_states {
            let bases: Vec<&[u64]> = self.atoms_at(q).map(|a| a.basis.as_slice()).collect();
            let mut candidates: Vec<Vec<OmegaNat>> = (0..self.dim)
                .map(|j| {
                    let mut c: Vec<OmegaNat> = bases
                        .iter()
                        .filter(|b| b[j] > 0)
                        .map(|b| OmegaNat::Fin(b[j] - 1))
                        .collect();
                    c.push(OmegaNat::Omega);
                    c.sort();
                    c.dedup();
                    c.reverse();
                    c
                })
                .collect();
            // Suffix flags: can basis i still be escaped using coordinates >= j?
            let escapable: Vec<Vec<bool>> = bases
                .iter()
                .map(|b| {
                    let mut s = vec![false; self.dim + 1];
                    for j in (0..self.dim).rev() {
                        s[j] = s[j + 1] || b[j] > 0;
                    }
                    s
                })
                .collect();
            let mut found = Vec::new();
            let mut partial = Vec::with_capacity(self.dim);
            let mut escaped = vec![false; bases.len()];
            complement_up_dfs(&bases, &escapable, &mut candidates, &mut partial, &mut escaped, &mut found);
            atoms.extend(found.into_iter().map(|b| DownAtom::new(q, b)));
        }
        DownSet {
            dim: self.dim,
            num_states: self.num_states,
            atoms: canonicalize(atoms, DownAtom::subsumes),
        }
    }
}

fn complement_up_dfs(
    bases: &[&[u64]],
    escapable: &[Vec<bool>],
    candidates: &mut Vec<Vec<OmegaNat>>,
    partial: &mut Vec<OmegaNat>,
    escaped: &mut Vec<bool>,
    out: &mut Vec<OmegaVec>,
) {
    let j = partial.len();
    if (0..bases.len()).any(|i| !escaped[i] && !escapable[i][j]) {
        return;
    }
    if j == candidates.len() {
        out.push(partial.clone());
        return;
    }
    let values = std::mem::take(&mut candidates[j]);
    for &x in &values {
        let before = escaped.clone();
        for (i, b) in bases.iter().enumerate() {
            if let OmegaNat::Fin(n) = x {
                if n < b[j] {
                    escaped[i] = true;
                }
            }
        }
        partial.push(x);
        complement_up_dfs(bases, escapable, candidates, partial, escaped, out);
        partial.pop();
        *escaped = before;
    }
    candidates[j] = values;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DownSet {
    dim: usize,
    num_states: usize,
    atoms: Vec<DownAtom>,
}

impl DownSet {
    pub fn new(dim: usize, num_states: usize, atoms: Vec<DownAtom>) -> Result<Self> {
        for a in &atoms {
            check_dims(dim, a.bound.len())?;
            if a.state >= num_states {
                return Err(Error::InvalidModel(format!("atom state {} out of range", a.state)));
            }
        }
        Ok(DownSet { dim, num_states, atoms: canonicalize(atoms, DownAtom::subsumes) })
    }

    pub fn empty(dim: usize, num_states: usize) -> Self {
        DownSet { dim, num_states, atoms: Vec::new() }
    }

    pub fn full(dim: usize, num_states: usize) -> Self {
        let atoms = (0..num_states).map(|q| DownAtom::full(q, dim)).collect();
        DownSet { dim, num_states, atoms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn atoms(&self) -> &[DownAtom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms_at(&self, state: StateId) -> impl Iterator<Item = &DownAtom> {
        self.atoms.iter().filter(move |a| a.state == state)
    }

    pub fn contains(&self, state: StateId, v: &[u64]) -> bool {
        self.atoms.iter().any(|a| a.contains(state, v))
    }

    pub fn member(&self, state: StateId, v: &[u64]) -> Result<bool> {
        check_dims(self.dim, v.len())?;
        if state >= self.num_states {
            return Err(Error::InvalidModel(format!("state {state} out of range")));
        }
        Ok(self.contains(state, v))
    }

    pub fn max_constant(&self) -> u64 {
        self.atoms
            .iter()
            .flat_map(|a| a.bound.iter().filter_map(|x| x.finite()))
            .max()
            .unwrap_or(0)
    }

    fn same_universe(&self, other: &DownSet) -> Result<()> {
        check_dims(self.dim, other.dim)?;
        if self.num_states != other.num_states {
            return Err(Error::StateUniverseMismatch(self.num_states, other.num_states));
        }
        Ok(())
    }

    pub fn union(&self, other: &DownSet) -> Result<DownSet> {
        self.same_universe(other)?;
        let atoms = self.atoms.iter().chain(&other.atoms).cloned().collect();
        DownSet::new(self.dim, self.num_states, atoms)
    }

    pub fn intersect(&self, other: &DownSet) -> Result<DownSet> {
        self.same_universe(other)?;
        let mut atoms = Vec::new();
        for a in &self.atoms {
            for b in other.atoms.iter().filter(|b| b.state == a.state) {
                let bound = a.bound.iter().zip(&b.bound).map(|(x, y)| *x.min(y)).collect();
                atoms.push(DownAtom::new(a.state, bound));
            }
        }
        DownSet::new(self.dim, self.num_states, atoms)
    }

    /// Down-atoms are ideals, so atomwise inclusion is exact.
    pub fn is_subset(&self, other: &DownSet) -> Result<bool> {
        self.same_universe(other)?;
        Ok(self.atoms.iter().all(|a| other.atoms.iter().any(|b| b.subsumes(a))))
    }

    pub fn minimize(&self) -> DownSet {
        DownSet { atoms: canonicalize(self.atoms.clone(), DownAtom::subsumes), ..self.clone() }
    }

    /// Exact complement within `Q × ℕ^d`: per state, the minimal
    /// `u ∈ C^d` with `C = {0} ∪ {x[j] + 1}` whose upward closure avoids
    /// every down-atom.
    pub fn complement(&self) -> UpSet {
        let mut atoms = Vec::new();
        for q in 0..self.num_states {
            let bounds: Vec<&[OmegaNat]> = self.atoms_at(q).map(|a| a.bound.as_slice()).collect();
            let mut candidates: Vec<Vec<u64>> = (0..self.dim)
                .map(|j| {
                    let mut c: Vec<u64> =
                        bounds.iter().filter_map(|b| b[j].finite()).map(|n| n + 1).collect();
                    c.push(0);
                    c.sort_unstable();
                    c.dedup();
                    c
                })
                .collect();
            let escapable: Vec<Vec<bool>> = bounds
                .iter()
                .map(|b| {
                    let mut s = vec![false; self.dim + 1];
                    for j in (0..self.dim).rev() {
                        s[j] = s[j + 1] || !b[j].is_omega();
                    }
                    s
                })
                .collect();
            let mut found = Vec::new();
            let mut partial = Vec::with_capacity(self.dim);
            let mut escaped = vec![false; bounds.len()];
            complement_down_dfs(&bounds, &escapable, &mut candidates, &mut partial, &mut escaped, &mut found);
            atoms.extend(found.into_iter().map(|b| UpAtom::new(q, b)));
        }
        UpSet {
            dim: self.dim,
            num_states: self.num_states,
            atoms: canonicalize(atoms, UpAtom::subsumes),
        }
    }
}

fn complement_down_dfs(
    bounds: &[&[OmegaNat]],
    escapable: &[Vec<bool>],
    candidates: &mut Vec<Vec<u64>>,
    partial: &mut Vec<u64>,
    escaped: &mut Vec<bool>,
    out: &mut Vec<NatVec>,
) {
    let j = partial.len();
    if (0..bounds.len()).any(|i| !escaped[i] && !escapable[i][j]) {
        return;
    }
    if j == candidates.len() {
        out.push(partial.clone());
        return;
    }
    let values = std::mem::take(&mut candidates[j]);
    for &x in &values {
        let before = escaped.clone();
        for (i, b) in bounds.iter().enumerate() {
            if let OmegaNat::Fin(n) = b[j] {
                if x > n {
                    escaped[i] = true;
                }
            }
        }
        partial.push(x);
        complement_down_dfs(bounds, escapable, candidates, partial, escaped, out);
        partial.pop();
        *escaped = before;
    }
    candidates[j] = values;
}

/// Total order used for worklists: coordinate sum first, then lexicographic.
pub fn by_weight(a: &[u64], b: &[u64]) -> Ordering {
    let sa: u128 = a.iter().map(|&x| x as u128).sum();
    let sb: u128 = b.iter().map(|&x| x as u128).sum();
    sa.cmp(&sb).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use OmegaNat::{Fin, Omega};

    fn up(atoms: &[(usize, &[u64])], d: usize, n: usize) -> UpSet {
        UpSet::new(d, n, atoms.iter().map(|(q, v)| UpAtom::new(*q, v.to_vec())).collect()).unwrap()
    }

    fn down(atoms: &[(usize, &[OmegaNat])], d: usize, n: usize) -> DownSet {
        DownSet::new(d, n, atoms.iter().map(|(q, v)| DownAtom::new(*q, v.to_vec())).collect()).unwrap()
    }

    fn boxed(d: usize, b: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=b).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn membership_examples() {
        let u = up(&[(0, &[1, 1])], 2, 1);
        assert!(u.member(0, &[3, 3]).unwrap());
        assert!(!u.member(0, &[0, 5]).unwrap());
        let d = down(&[(0, &[Fin(2), Omega])], 2, 1);
        assert!(d.member(0, &[2, 7]).unwrap());
        assert!(matches!(u.member(0, &[1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_up_examples() {
        let u = up(&[(0, &[1, 1])], 2, 1);
        assert_eq!(u.complement(), down(&[(0, &[Fin(0), Omega]), (0, &[Omega, Fin(0)])], 2, 1));
        assert_eq!(UpSet::empty(2, 2).complement(), DownSet::full(2, 2));
        assert!(up(&[(0, &[2]), (0, &[0])], 1, 1).complement().is_empty());
    }

    #[test]
    fn complement_down_examples() {
        assert_eq!(down(&[(0, &[Fin(2)])], 1, 1).complement(), up(&[(0, &[3])], 1, 1));
        assert!(DownSet::full(2, 1).complement().is_empty());
        assert_eq!(down(&[(0, &[Fin(1), Omega])], 2, 1).complement(), up(&[(0, &[2, 0])], 2, 1));
    }

    #[test]
    fn intersect_union_subset_examples() {
        let a = up(&[(0, &[1, 0])], 2, 1);
        let b = up(&[(0, &[0, 2])], 2, 1);
        assert_eq!(a.intersect(&b).unwrap(), up(&[(0, &[1, 2])], 2, 1));
        let c = down(&[(0, &[Fin(3)])], 1, 1);
        let e = down(&[(0, &[Fin(5)])], 1, 1);
        assert_eq!(c.intersect(&e).unwrap(), c);
        let p = up(&[(0, &[1])], 1, 2);
        let q = up(&[(1, &[1])], 1, 2);
        assert!(p.intersect(&q).unwrap().is_empty());
        assert_eq!(p.union(&q).unwrap().atoms().len(), 2);
        assert_eq!(up(&[(0, &[1]), (0, &[3])], 1, 1), up(&[(0, &[1])], 1, 1));
        assert!(up(&[(0, &[2])], 1, 1).is_subset(&up(&[(0, &[1])], 1, 1)).unwrap());
        assert!(!up(&[(0, &[1])], 1, 1).is_subset(&up(&[(0, &[2])], 1, 1)).unwrap());
    }

    #[test]
    fn complements_partition_small_boxes() {
        let u = up(&[(0, &[2, 0, 1]), (0, &[0, 3, 0]), (1, &[1, 1, 1])], 3, 2);
        let c = u.complement();
        let bound = 2 * (u.max_constant() + 1);
        for q in 0..2 {
            for v in boxed(3, bound) {
                assert_ne!(u.contains(q, &v), c.contains(q, &v), "{q} {v:?}");
            }
        }
        let back = c.complement();
        assert_eq!(back, u);
    }

    #[test]
    fn dimension_zero() {
        let u = up(&[(1, &[])], 0, 2);
        let c = u.complement();
        assert!(c.contains(0, &[]));
        assert!(!c.contains(1, &[]));
        assert_eq!(c.complement(), u);
    }

    #[test]
    fn mismatched_universes_are_rejected() {
        let a = UpSet::empty(1, 1);
        let b = UpSet::empty(2, 1);
        assert!(a.union(&b).is_err());
        assert!(matches!(
            UpSet::empty(1, 1).intersect(&UpSet::empty(1, 2)),
            Err(Error::StateUniverseMismatch(1, 2))
        ));
    }
}
