//! Half-spaces, polyhedra and finite unions of polyhedra over exact
//! rationals.
//!
//! Every set here is closed. Strict questions ("is there a point strictly
//! above x?") are answered with max-margin programs rather than strict
//! inequalities.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{budget, invalid, Result};
use crate::lp::{Lp, LpResult, Sense};
use crate::rational::{dot, is_zero_vec, primitive, Rat, RatVec};

/// Dimension cap for facet enumeration when no budget is supplied.
pub const DEFAULT_FACET_DIM: usize = 8;

/// `{ x | normal · x <= bound }` with a non-zero normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfSpace {
    pub normal: RatVec,
    pub bound: Rat,
}

impl HalfSpace {
    pub fn new(normal: RatVec, bound: Rat) -> Result<Self> {
        if is_zero_vec(&normal) {
            return invalid("half-space normal must be non-zero");
        }
        Ok(HalfSpace { normal, bound })
    }

    /// `x_i <= b` in dimension `dim`.
    pub fn upper(dim: usize, i: usize, b: Rat) -> Self {
        let mut normal = vec![Rat::zero(); dim];
        normal[i] = Rat::one();
        HalfSpace { normal, bound: b }
    }

    /// `x_i >= b` in dimension `dim`.
    pub fn lower(dim: usize, i: usize, b: Rat) -> Self {
        let mut normal = vec![Rat::zero(); dim];
        normal[i] = -Rat::one();
        HalfSpace { normal, bound: -b }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) <= self.bound
    }

    /// The closed complementary half-space `{ x | normal · x >= bound }`.
    pub fn complement(&self) -> HalfSpace {
        HalfSpace {
            normal: self.normal.iter().map(|a| -a.clone()).collect(),
            bound: -self.bound.clone(),
        }
    }

    /// Scales by a positive factor to coprime integer coefficients.
    pub fn normalized(&self) -> HalfSpace {
        let mut all = self.normal.clone();
        all.push(self.bound.clone());
        let mut p = primitive(&all);
        let bound = p.pop().unwrap();
        HalfSpace { normal: p, bound }
    }

    /// True when every normal entry is non-negative.
    pub fn is_monotone(&self) -> bool {
        self.normal.iter().all(|a| !a.is_negative())
    }
}

/// Closed complementary half-space of `h`.
pub fn complement_halfspace(h: &HalfSpace) -> HalfSpace {
    h.complement()
}

/// Intersection of finitely many half-spaces. The empty constraint list is
/// the whole space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polyhedron {
    pub dim: usize,
    pub constraints: Vec<HalfSpace>,
}

impl Polyhedron {
    pub fn universe(dim: usize) -> Self {
        Polyhedron {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn new(dim: usize, constraints: Vec<HalfSpace>) -> Result<Self> {
        if constraints.iter().any(|h| h.dim() != dim) {
            return invalid("constraint dimension does not match polyhedron dimension");
        }
        Ok(Polyhedron { dim, constraints })
    }

    /// A canonical empty polyhedron (`x_1 <= -1` and `x_1 >= 0`).
    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "empty polyhedron needs a coordinate");
        Polyhedron {
            dim,
            constraints: vec![
                HalfSpace::upper(dim, 0, -Rat::one()),
                HalfSpace::lower(dim, 0, Rat::zero()),
            ],
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|h| h.contains(x))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Polyhedron {
            dim: self.dim,
            constraints,
        }
    }

    pub fn with(&self, h: HalfSpace) -> Polyhedron {
        let mut p = self.clone();
        p.constraints.push(h);
        p
    }

    pub fn to_lp(&self) -> Lp {
        let mut lp = Lp::new(self.dim);
        for h in &self.constraints {
            lp.push(h.normal.clone(), Sense::Le, h.bound.clone());
        }
        lp
    }

    pub fn feasible_point(&self) -> Option<RatVec> {
        if self.constraints.is_empty() {
            return Some(vec![Rat::zero(); self.dim]);
        }
        self.to_lp().solve().point().map(<[Rat]>::to_vec)
    }

    pub fn is_empty(&self) -> bool {
        self.feasible_point().is_none()
    }

    /// Maximises `objective · x` over the polyhedron.
    pub fn maximize(&self, objective: &[Rat]) -> LpResult {
        lp_solve(Some(objective), self)
    }

    /// Normalises every constraint, drops duplicates and sorts.
    pub fn canonical(&self) -> Polyhedron {
        let set: BTreeSet<HalfSpace> = self.constraints.iter().map(HalfSpace::normalized).collect();
        Polyhedron {
            dim: self.dim,
            constraints: set.into_iter().collect(),
        }
    }

    /// Removes constraints implied by the others. Empty polyhedra collapse
    /// to [`Polyhedron::empty`].
    pub fn minimized(&self) -> Polyhedron {
        let c = self.canonical();
        if c.is_empty() {
            return Polyhedron::empty(self.dim);
        }
        let mut kept = c.constraints.clone();
        let mut i = 0;
        while i < kept.len() {
            let h = kept[i].clone();
            let others = Polyhedron {
                dim: self.dim,
                constraints: kept
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, g)| g.clone())
                    .collect(),
            };
            let redundant = match others.maximize(&h.normal) {
                LpResult::Optimal { value, .. } => value <= h.bound,
                _ => false,
            };
            if redundant {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Polyhedron {
            dim: self.dim,
            constraints: kept,
        }
    }

    /// Exact containment test `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        if self.is_empty() {
            return true;
        }
        other.constraints.iter().all(|h| match self.maximize(&h.normal) {
            LpResult::Optimal { value, .. } => value <= h.bound,
            LpResult::Unbounded => false,
            LpResult::Infeasible => true,
        })
    }

    /// True when every constraint normal is componentwise non-negative, which
    /// makes the set downward closed.
    pub fn is_downward_closed_form(&self) -> bool {
        self.constraints.iter().all(HalfSpace::is_monotone)
    }
}

/// Finite union of polyhedra of equal dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyUnion {
    pub dim: usize,
    pub parts: Vec<Polyhedron>,
}

impl PolyUnion {
    pub fn empty(dim: usize) -> Self {
        PolyUnion {
            dim,
            parts: Vec::new(),
        }
    }

    pub fn single(p: Polyhedron) -> Self {
        PolyUnion {
            dim: p.dim,
            parts: vec![p],
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(Polyhedron::is_empty)
    }

    /// Minimises parts, drops empty parts, duplicates and parts contained in
    /// another part, then sorts.
    pub fn normalized(&self) -> PolyUnion {
        let mut parts: Vec<Polyhedron> = Vec::new();
        let mut seen = BTreeSet::new();
        for p in &self.parts {
            if p.is_empty() {
                continue;
            }
            let m = p.minimized();
            if seen.insert(m.clone()) {
                parts.push(m);
            }
        }
        parts.sort();
        let mut keep = vec![true; parts.len()];
        for i in 0..parts.len() {
            for j in 0..parts.len() {
                if i != j && keep[j] && keep[i] && parts[i].is_subset_of(&parts[j]) {
                    keep[i] = false;
                }
            }
        }
        PolyUnion {
            dim: self.dim,
            parts: parts
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(p, _)| p)
                .collect(),
        }
    }
}

/// Solves `max objective · x` over `constraints`; with no objective returns
/// any feasible point with value zero.
pub fn lp_solve(objective: Option<&[Rat]>, constraints: &Polyhedron) -> LpResult {
    let mut lp = constraints.to_lp();
    if let Some(o) = objective {
        lp.maximize(o.to_vec());
    }
    lp.solve()
}

/// Is `x` below some convex combination of `points`?
pub fn down_conv_membership(points: &[RatVec], x: &[Rat]) -> Result<bool> {
    if points.is_empty() {
        return invalid("down_conv_membership needs at least one point");
    }
    if points.iter().any(|p| p.len() != x.len()) {
        return invalid("dimension mismatch between points and query vector");
    }
    let k = points.len();
    let mut lp = Lp::new(k);
    lp.nonneg = vec![true; k];
    lp.push(vec![Rat::one(); k], Sense::Eq, Rat::one());
    for i in 0..x.len() {
        let row: RatVec = points.iter().map(|p| p[i].clone()).collect();
        lp.push(row, Sense::Ge, x[i].clone());
    }
    Ok(lp.solve().is_feasible())
}

/// Facets of the downward closure of the convex hull of `points`, using the
/// default dimension cap.
pub fn hrep_down_conv(points: &[RatVec]) -> Result<Polyhedron> {
    hrep_down_conv_capped(points, DEFAULT_FACET_DIM)
}

/// Facets of `↓conv(points)`.
///
/// Coordinates that are constant over all points split off as `x_i <= c`.
/// The remaining facets are the extreme rays `(a, b)` of the cone
/// `{ a >= 0, a · p <= b for all p }`, enumerated by the double description
/// method. The cap applies to the number of non-constant coordinates.
pub fn hrep_down_conv_capped(points: &[RatVec], max_dim: usize) -> Result<Polyhedron> {
    let Some(first) = points.first() else {
        return invalid("hrep_down_conv needs at least one point");
    };
    let d = first.len();
    if points.iter().any(|p| p.len() != d) {
        return invalid("points of different dimensions");
    }
    let varying: Vec<usize> = (0..d)
        .filter(|&i| points.iter().any(|p| p[i] != first[i]))
        .collect();
    let mut constraints: Vec<HalfSpace> = (0..d)
        .filter(|i| !varying.contains(i))
        .map(|i| HalfSpace::upper(d, i, first[i].clone()))
        .collect();
    if !varying.is_empty() {
        if varying.len() > max_dim {
            return budget(format!(
                "facet enumeration in dimension {} exceeds the cap of {}",
                varying.len(),
                max_dim
            ));
        }
        let reduced: Vec<RatVec> = points
            .iter()
            .map(|p| varying.iter().map(|&i| p[i].clone()).collect())
            .collect();
        for (a, b) in down_conv_facets(&reduced) {
            let mut normal = vec![Rat::zero(); d];
            for (k, &i) in varying.iter().enumerate() {
                normal[i] = a[k].clone();
            }
            constraints.push(HalfSpace { normal, bound: b });
        }
    }
    Ok(Polyhedron {
        dim: d,
        constraints,
    }
    .canonical())
}

/// Keeps the maximal points (no other point dominates them componentwise),
/// deduplicated and sorted.
fn maximal_points(points: &[RatVec]) -> Vec<RatVec> {
    let uniq: BTreeSet<RatVec> = points.iter().cloned().collect();
    let uniq: Vec<RatVec> = uniq.into_iter().collect();
    uniq.iter()
        .filter(|p| {
            !uniq
                .iter()
                .any(|q| q != *p && p.iter().zip(q).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect()
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn superset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == *y)
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

/// Double description on the cone of valid inequalities of `↓conv(points)`.
/// Returns `(a, b)` pairs with `a >= 0`, `a != 0`, one per facet.
fn down_conv_facets(points: &[RatVec]) -> Vec<(RatVec, Rat)> {
    let pts = maximal_points(points);
    let d = pts[0].len();
    let dim = d + 1;
    // Constraint rows h with h · (a, b) >= 0: first a_i >= 0, then
    // b - a · p >= 0 for each point.
    let mut rows: Vec<RatVec> = Vec::new();
    for i in 0..d {
        let mut h = vec![Rat::zero(); dim];
        h[i] = Rat::one();
        rows.push(h);
    }
    for p in &pts {
        let mut h: RatVec = p.iter().map(|v| -v.clone()).collect();
        h.push(Rat::one());
        rows.push(h);
    }
    let words = rows.len().div_ceil(64);

    // Initial simplicial cone from the d sign rows and the first point.
    let p0 = &pts[0];
    let mut rays: Vec<(RatVec, Vec<u64>)> = Vec::new();
    for i in 0..d {
        let mut r = vec![Rat::zero(); dim];
        r[i] = Rat::one();
        r[d] = p0[i].clone();
        let mut z = vec![0u64; words];
        for j in 0..d {
            if j != i {
                set_bit(&mut z, j);
            }
        }
        set_bit(&mut z, d);
        rays.push((primitive(&r), z));
    }
    {
        let mut r = vec![Rat::zero(); dim];
        r[d] = Rat::one();
        let mut z = vec![0u64; words];
        for j in 0..d {
            set_bit(&mut z, j);
        }
        rays.push((r, z));
    }

    for (k, h) in rows.iter().enumerate().skip(d + 1) {
        let vals: Vec<Rat> = rays.iter().map(|(r, _)| dot(r, h)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    set_bit(z, k);
                }
            }
            continue;
        }
        let mut fresh: Vec<(RatVec, Vec<u64>)> = Vec::new();
        for &i in &pos {
            for &j in &neg {
                let common = and(&rays[i].1, &rays[j].1);
                if popcount(&common) + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|t| t == i || t == j || !superset(&rays[t].1, &common));
                if !adjacent {
                    continue;
                }
                let r: RatVec = rays[i]
                    .0
                    .iter()
                    .zip(&rays[j].0)
                    .map(|(a, b)| &vals[i] * b - &vals[j] * a)
                    .collect();
                let mut z = common;
                set_bit(&mut z, k);
                fresh.push((primitive(&r), z));
            }
        }
        let mut next: Vec<(RatVec, Vec<u64>)> = Vec::new();
        for (i, (r, z)) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            let mut z = z;
            if vals[i].is_zero() {
                set_bit(&mut z, k);
            }
            next.push((r, z));
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out: BTreeSet<(RatVec, Rat)> = BTreeSet::new();
    for (r, _) in rays {
        let a: RatVec = r[..d].to_vec();
        if !is_zero_vec(&a) {
            out.insert((a, r[d].clone()));
        }
    }
    out.into_iter().collect()
}

/// Lifts a constraint system over the coordinates `coords` (in order) to
/// `R^n`, leaving every other coordinate free.
pub fn inclusion_map(p: &Polyhedron, coords: &[usize], n: usize) -> Result<Polyhedron> {
    if coords.len() != p.dim {
        return invalid("coordinate list does not match the polyhedron dimension");
    }
    if coords.iter().any(|&i| i >= n) {
        return invalid("coordinate index out of range");
    }
    let constraints = p
        .constraints
        .iter()
        .map(|h| {
            let mut normal = vec![Rat::zero(); n];
            for (k, &i) in coords.iter().enumerate() {
                normal[i] += &h.normal[k];
            }
            HalfSpace {
                normal,
                bound: h.bound.clone(),
            }
        })
        .collect();
    Ok(Polyhedron { dim: n, constraints })
}

/// Projection onto the coordinates `keep` (sorted ascending in the output)
/// by Fourier–Motzkin elimination, pruning redundant rows after each step.
pub fn project(p: &Polyhedron, keep: &[usize]) -> Result<Polyhedron> {
    if keep.is_empty() {
        return invalid("projection needs at least one coordinate");
    }
    if keep.iter().any(|&i| i >= p.dim) {
        return invalid("projection coordinate out of range");
    }
    let keep: BTreeSet<usize> = keep.iter().copied().collect();
    // Rows as (coefficients, bound) so zero rows can be represented.
    let mut rows: Vec<(RatVec, Rat)> = p
        .constraints
        .iter()
        .map(|h| (h.normal.clone(), h.bound.clone()))
        .collect();
    for v in (0..p.dim).filter(|i| !keep.contains(i)) {
        let mut next = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (a, b) in rows {
            if a[v].is_positive() {
                pos.push((a, b));
            } else if a[v].is_negative() {
                neg.push((a, b));
            } else {
                next.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                let fp = -an[v].clone();
                let fnn = ap[v].clone();
                let a: RatVec = ap
                    .iter()
                    .zip(an)
                    .map(|(x, y)| &fp * x + &fnn * y)
                    .collect();
                let b = &fp * bp + &fnn * bn;
                next.push((a, b));
            }
        }
        let mut trivial_bad = false;
        let mut hs = Vec::new();
        for (a, b) in next {
            if is_zero_vec(&a) {
                if b.is_negative() {
                    trivial_bad = true;
                }
            } else {
                hs.push(HalfSpace { normal: a, bound: b });
            }
        }
        if trivial_bad {
            return Ok(Polyhedron::empty(keep.len()));
        }
        let reduced = Polyhedron {
            dim: p.dim,
            constraints: hs,
        }
        .minimized();
        rows = reduced
            .constraints
            .into_iter()
            .map(|h| (h.normal, h.bound))
            .collect();
    }
    let idx: Vec<usize> = keep.iter().copied().collect();
    let constraints = rows
        .into_iter()
        .map(|(a, b)| HalfSpace {
            normal: idx.iter().map(|&i| a[i].clone()).collect(),
            bound: b,
        })
        .collect();
    Ok(Polyhedron {
        dim: idx.len(),
        constraints,
    }
    .minimized())
}

/// Intersection of unions, distributed into a single union. Empty partial
/// intersections are pruned as soon as they appear.
pub fn distribute(unions: &[PolyUnion], max_parts: usize) -> Result<PolyUnion> {
    let Some(first) = unions.first() else {
        return invalid("distribute needs at least one union");
    };
    let dim = first.dim;
    if unions.iter().any(|u| u.dim != dim) {
        return invalid("distribute over unions of different dimensions");
    }
    let mut acc = first.normalized();
    for u in &unions[1..] {
        let u = u.normalized();
        let mut parts = Vec::new();
        for p in &acc.parts {
            for q in &u.parts {
                let r = p.intersect(q);
                if !r.is_empty() {
                    parts.push(r);
                    if parts.len() > max_parts {
                        return budget(format!(
                            "distributed union exceeds {max_parts} parts"
                        ));
                    }
                }
            }
        }
        acc = PolyUnion { dim, parts }.normalized();
        if acc.parts.is_empty() {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ints};

    fn hs(a: &[i64], b: i64) -> HalfSpace {
        HalfSpace::new(ints(a), int(b)).unwrap()
    }

    #[test]
    fn one_point_hull_is_a_box() {
        let p = hrep_down_conv(&[ints(&[2, 1])]).unwrap();
        assert_eq!(p.constraints, vec![hs(&[0, 1], 1), hs(&[1, 0], 2)]);
    }

    #[test]
    fn two_point_hull() {
        let p = hrep_down_conv(&[ints(&[1, 0]), ints(&[0, 1])]).unwrap();
        assert_eq!(
            p.constraints,
            vec![hs(&[0, 1], 1), hs(&[1, 0], 1), hs(&[1, 1], 1)]
        );
    }

    #[test]
    fn one_dimensional_point() {
        let p = hrep_down_conv(&[ints(&[0])]).unwrap();
        assert_eq!(p.constraints, vec![hs(&[1], 0)]);
    }

    #[test]
    fn three_dimensional_hull_matches_membership() {
        let pts = vec![ints(&[3, 0, 1]), ints(&[0, 2, 2]), ints(&[1, 1, 0]), ints(&[2, 2, -1])];
        let p = hrep_down_conv(&pts).unwrap();
        assert!(p.is_downward_closed_form());
        for q in &pts {
            assert!(p.contains(q));
        }
        for a in -1..4 {
            for b in -1..3 {
                for c in -2..3 {
                    let x = vec![frac(a * 2 + 1, 2), int(b), frac(c, 1)];
                    assert_eq!(p.contains(&x), down_conv_membership(&pts, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn complement_is_an_involution() {
        let h = hs(&[0, 1], 2);
        let c = complement_halfspace(&h);
        assert_eq!(c, hs(&[0, -1], -2));
        assert_eq!(c.complement(), h);
    }

    #[test]
    fn projections() {
        let p = Polyhedron::new(2, vec![hs(&[1, 0], 1), hs(&[0, 1], 2)]).unwrap();
        assert_eq!(project(&p, &[0]).unwrap().constraints, vec![hs(&[1], 1)]);
        let q = Polyhedron::new(2, vec![hs(&[1, 1], 1), hs(&[0, -1], 0)]).unwrap();
        assert_eq!(project(&q, &[0]).unwrap().constraints, vec![hs(&[1], 1)]);
        assert_eq!(project(&q, &[0, 1]).unwrap(), q.minimized());
    }

    #[test]
    fn distribute_prunes_empty_branches() {
        let a = PolyUnion {
            dim: 1,
            parts: vec![
                Polyhedron::new(1, vec![hs(&[1], 1)]).unwrap(),
                Polyhedron::new(1, vec![hs(&[-1], -3)]).unwrap(),
            ],
        };
        let b = PolyUnion::single(Polyhedron::new(1, vec![hs(&[1], 0)]).unwrap());
        let r = distribute(&[a, b], 100).unwrap();
        assert_eq!(r.parts, vec![Polyhedron::new(1, vec![hs(&[1], 0)]).unwrap()]);
    }

    #[test]
    fn inclusion_lifts_constraints() {
        let p = Polyhedron::new(2, vec![hs(&[-1, 0], -1)]).unwrap();
        let f = inclusion_map(&p, &[1, 2], 3).unwrap();
        assert_eq!(f.constraints, vec![hs(&[0, -1, 0], -1)]);
        assert!(inclusion_map(&p, &[1, 3], 3).is_err());
    }
}
