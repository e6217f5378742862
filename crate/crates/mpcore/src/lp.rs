//! Exact linear programming.
//!
//! A dense two-phase primal simplex over exact rationals. The entering column
//! is the most negative reduced cost; after a long run of degenerate pivots
//! pricing switches to Bland's lowest-index rule, which cannot cycle. Ties
//! always go to the lowest index, so runs are reproducible. Row updates skip zero entries,
//! which keeps the cost proportional to the (usually small) fill-in.

use alloc::vec;
use core::sync::atomic::{AtomicUsize, Ordering};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::rational::{dot, Rat};

static SOLVED: AtomicUsize = AtomicUsize::new(0);

/// Number of linear programs solved by this process so far.
pub fn solved_count() -> usize {
    SOLVED.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub sense: Sense,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, sense: Sense, rhs: Rat) -> Self {
        Constraint { coeffs, sense, rhs }
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// A linear program over `nvars` variables. Variables are free unless marked
/// non-negative. The objective, when present, is maximised.
#[derive(Debug, Clone, PartialEq)]
pub struct Lp {
    pub nvars: usize,
    pub nonneg: Vec<bool>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

impl LpResult {
    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpResult::Infeasible)
    }
}

impl Lp {
    pub fn new(nvars: usize) -> Self {
        Lp {
            nvars,
            nonneg: vec![false; nvars],
            constraints: Vec::new(),
            objective: None,
        }
    }

    /// Adds a fresh variable and returns its index.
    pub fn add_var(&mut self, nonneg: bool) -> usize {
        self.nvars += 1;
        self.nonneg.push(nonneg);
        for c in &mut self.constraints {
            c.coeffs.push(Rat::zero());
        }
        if let Some(o) = &mut self.objective {
            o.push(Rat::zero());
        }
        self.nvars - 1
    }

    pub fn push(&mut self, coeffs: Vec<Rat>, sense: Sense, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.nvars);
        self.constraints.push(Constraint::new(coeffs, sense, rhs));
    }

    /// Adds `Σ terms ⋈ rhs` from a sparse list of `(variable, coefficient)`.
    pub fn push_sparse(&mut self, terms: &[(usize, Rat)], sense: Sense, rhs: Rat) {
        let mut row = vec![Rat::zero(); self.nvars];
        for (j, c) in terms {
            row[*j] += c;
        }
        self.push(row, sense, rhs);
    }

    pub fn maximize(&mut self, objective: Vec<Rat>) {
        debug_assert_eq!(objective.len(), self.nvars);
        self.objective = Some(objective);
    }

    pub fn is_satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.nvars
            && self.constraints.iter().all(|c| c.holds(x))
            && x
                .iter()
                .zip(&self.nonneg)
                .all(|(v, &nn)| !nn || !v.is_negative())
    }

    pub fn solve(&self) -> LpResult {
        SOLVED.fetch_add(1, Ordering::Relaxed);
        solve(self)
    }
}

/// Degenerate pivots in a row before pricing falls back to Bland's rule.
const DEGENERATE_STREAK: usize = 32;

/// Exact number type the tableau runs on. Operations return `None` on
/// overflow, which sends the solve back to big rationals.
trait Field: Clone + Ord + Sized {
    fn nought() -> Self;
    fn unit() -> Self;
    fn from_rat(r: &Rat) -> Option<Self>;
    fn to_rat(&self) -> Rat;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn nil(&self) -> bool;
    fn below_zero(&self) -> bool;
    fn above_zero(&self) -> bool;

    fn neg(&self) -> Option<Self> {
        Self::nought().sub(self)
    }
}

impl Field for Rat {
    fn nought() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Option<Self> {
        Some(r.clone())
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn below_zero(&self) -> bool {
        Signed::is_negative(self)
    }
    fn above_zero(&self) -> bool {
        Signed::is_positive(self)
    }
}

type Small = Ratio<i128>;

impl Field for Small {
    fn nought() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Option<Self> {
        Some(Ratio::new_raw(r.numer().to_i128()?, r.denom().to_i128()?))
    }
    fn to_rat(&self) -> Rat {
        Rat::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn below_zero(&self) -> bool {
        Signed::is_negative(self)
    }
    fn above_zero(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// Column bookkeeping: how each original variable maps onto tableau columns.
enum VarMap {
    Single(usize),
    Split(usize, usize),
}

struct Tableau<F> {
    /// Rows `0..m` are constraints, row `m` is the objective row holding
    /// reduced costs (negated, so a negative entry means "improving").
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl<F: Field> Tableau<F> {
    fn rhs(&self, i: usize) -> &F {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Option<()> {
        let inv = F::unit().div(&self.rows[r][c])?;
        let width = self.ncols + 1;
        for j in 0..width {
            if !self.rows[r][j].nil() {
                self.rows[r][j] = self.rows[r][j].mul(&inv)?;
            }
        }
        let nz: Vec<usize> = (0..width).filter(|&j| !self.rows[r][j].nil()).collect();
        let prow = core::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].nil() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] = row[j].sub(&f.mul(&prow[j])?)?;
            }
        }
        self.rows[r] = prow;
        self.basis[r] = c;
        Some(())
    }

    /// Runs simplex iterations on the objective row. Columns at or beyond
    /// `limit` never enter. Returns false when the objective is unbounded.
    fn optimize(&mut self, limit: usize) -> Option<bool> {
        let m = self.basis.len();
        let mut degenerate = 0usize;
        loop {
            let obj = &self.rows[m];
            let entering = if degenerate < DEGENERATE_STREAK {
                (0..limit)
                    .filter(|&j| obj[j].below_zero())
                    .min_by(|&a, &b| obj[a].cmp(&obj[b]).then(a.cmp(&b)))
            } else {
                (0..limit).find(|&j| obj[j].below_zero())
            };
            let Some(c) = entering else {
                return Some(true);
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..m {
                let a = &self.rows[i][c];
                if a.above_zero() {
                    let ratio = self.rhs(i).div(a)?;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return Some(false),
                Some((r, ratio)) => {
                    if ratio.nil() {
                        degenerate += 1;
                    } else {
                        degenerate = 0;
                    }
                    self.pivot(r, c)?;
                }
            }
        }
    }
}

fn solve(lp: &Lp) -> LpResult {
    solve_in::<Small>(lp).unwrap_or_else(|| solve_in::<Rat>(lp).expect("big rationals do not overflow"))
}

/// The two-phase simplex in number type `F`; `None` on overflow.
fn solve_in<F: Field>(lp: &Lp) -> Option<LpResult> {
    // Map variables to non-negative columns.
    let mut maps = Vec::with_capacity(lp.nvars);
    let mut ncols = 0usize;
    for j in 0..lp.nvars {
        if lp.nonneg[j] {
            maps.push(VarMap::Single(ncols));
            ncols += 1;
        } else {
            maps.push(VarMap::Split(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let nstruct = ncols;

    // Normalise rows to non-negative right-hand sides.
    struct Row<F> {
        coeffs: Vec<F>,
        sense: Sense,
        rhs: F,
    }
    let mut rows_in: Vec<Row<F>> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![F::nought(); nstruct];
        for (j, a) in c.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            let a = F::from_rat(a)?;
            match maps[j] {
                VarMap::Single(k) => coeffs[k] = coeffs[k].add(&a)?,
                VarMap::Split(p, n) => {
                    coeffs[p] = coeffs[p].add(&a)?;
                    coeffs[n] = coeffs[n].sub(&a)?;
                }
            }
        }
        let (mut sense, mut rhs) = (c.sense, F::from_rat(&c.rhs)?);
        if rhs.below_zero() {
            for a in &mut coeffs {
                *a = a.neg()?;
            }
            rhs = rhs.neg()?;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        rows_in.push(Row { coeffs, sense, rhs });
    }

    let m = rows_in.len();
    let nslack = rows_in.iter().filter(|r| r.sense != Sense::Eq).count();
    let nart = rows_in.iter().filter(|r| r.sense != Sense::Le).count();
    let art_start = nstruct + nslack;
    let total = art_start + nart;

    let mut rows: Vec<Vec<F>> = Vec::with_capacity(m + 1);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (nstruct, art_start);
    for r in &rows_in {
        let mut row = vec![F::nought(); total + 1];
        row[..nstruct].clone_from_slice(&r.coeffs);
        row[total] = r.rhs.clone();
        match r.sense {
            Sense::Le => {
                row[s] = F::unit();
                basis.push(s);
                s += 1;
            }
            Sense::Ge => {
                row[s] = F::unit().neg()?;
                s += 1;
                row[a] = F::unit();
                basis.push(a);
                a += 1;
            }
            Sense::Eq => {
                row[a] = F::unit();
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }

    // Phase 1: minimise the sum of artificials, i.e. maximise its negation.
    // Objective row stores -c; with artificials basic we price them out.
    let mut obj = vec![F::nought(); total + 1];
    for (i, &b) in basis.iter().enumerate() {
        if b >= art_start {
            for j in 0..=total {
                if !rows[i][j].nil() {
                    obj[j] = obj[j].sub(&rows[i][j])?;
                }
            }
        }
    }
    for j in art_start..total {
        obj[j] = F::nought();
    }
    rows.push(obj);
    let mut t = Tableau {
        rows,
        basis,
        ncols: total,
    };
    if nart > 0 {
        t.optimize(art_start)?;
        if t.rows[m][total].below_zero() {
            return Some(LpResult::Infeasible);
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let mut i = 0;
        while i < t.basis.len() {
            if t.basis[i] >= art_start {
                if let Some(c) = (0..art_start).find(|&j| !t.rows[i][j].nil()) {
                    t.pivot(i, c)?;
                    i += 1;
                } else {
                    // Redundant row.
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
    }
    let m = t.basis.len();

    // Phase 2 objective row over structural columns.
    let mut c = vec![F::nought(); nstruct];
    if let Some(o) = &lp.objective {
        for (j, v) in o.iter().enumerate() {
            if Zero::is_zero(v) {
                continue;
            }
            let v = F::from_rat(v)?;
            match maps[j] {
                VarMap::Single(k) => c[k] = c[k].add(&v)?,
                VarMap::Split(p, n) => {
                    c[p] = c[p].add(&v)?;
                    c[n] = c[n].sub(&v)?;
                }
            }
        }
    }
    let mut obj = vec![F::nought(); total + 1];
    for (j, v) in c.iter().enumerate() {
        obj[j] = v.neg()?;
    }
    for i in 0..m {
        let b = t.basis[i];
        if b < nstruct && !c[b].nil() {
            let f = c[b].clone();
            for j in 0..=total {
                if !t.rows[i][j].nil() {
                    obj[j] = obj[j].add(&f.mul(&t.rows[i][j])?)?;
                }
            }
        }
    }
    for j in art_start..total {
        obj[j] = F::nought();
    }
    t.rows[m] = obj;
    if lp.objective.is_some() && !t.optimize(art_start)? {
        return Some(LpResult::Unbounded);
    }

    let mut cols = vec![Rat::zero(); total];
    for i in 0..m {
        cols[t.basis[i]] = t.rows[i][total].to_rat();
    }
    let point: Vec<Rat> = maps
        .iter()
        .map(|mp| match *mp {
            VarMap::Single(k) => cols[k].clone(),
            VarMap::Split(p, n) => &cols[p] - &cols[n],
        })
        .collect();
    let value = match &lp.objective {
        Some(o) => dot(o, &point),
        None => Rat::zero(),
    };
    Some(LpResult::Optimal { value, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn maximize_single_bound() {
        let mut lp = Lp::new(1);
        lp.push(vec![int(1)], Sense::Le, int(2));
        lp.maximize(vec![int(1)]);
        assert_eq!(
            lp.solve(),
            LpResult::Optimal {
                value: int(2),
                point: vec![int(2)]
            }
        );
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = Lp::new(1);
        lp.push(vec![int(1)], Sense::Le, int(1));
        lp.push(vec![int(-1)], Sense::Le, int(-2));
        assert_eq!(lp.solve(), LpResult::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = Lp::new(2);
        lp.push(vec![int(1), int(-1)], Sense::Le, int(1));
        lp.maximize(vec![int(1), int(0)]);
        assert_eq!(lp.solve(), LpResult::Unbounded);
    }

    #[test]
    fn equalities_and_fractions() {
        // x + y = 1, x - y = 1/2  =>  x = 3/4, y = 1/4
        let mut lp = Lp::new(2);
        lp.push(vec![int(1), int(1)], Sense::Eq, int(1));
        lp.push(vec![int(1), int(-1)], Sense::Eq, frac(1, 2));
        let r = lp.solve();
        assert_eq!(r.point().unwrap(), &[frac(3, 4), frac(1, 4)][..]);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = Lp::new(2);
        lp.push(vec![int(1), int(1)], Sense::Eq, int(1));
        lp.push(vec![int(2), int(2)], Sense::Eq, int(2));
        lp.nonneg = vec![true, true];
        lp.maximize(vec![int(1), int(2)]);
        assert_eq!(
            lp.solve(),
            LpResult::Optimal {
                value: int(2),
                point: vec![int(0), int(1)]
            }
        );
    }

    #[test]
    fn overflowing_coefficients_fall_back_to_big_rationals() {
        let big = Rat::from_integer(BigInt::from(i128::MAX)) * int(4);
        let mut lp = Lp::new(1);
        lp.push(vec![big.clone()], Sense::Le, big.clone() * &big);
        lp.maximize(vec![int(1)]);
        assert_eq!(lp.solve().point().unwrap(), &[big][..]);

        let huge = Rat::from_integer(BigInt::from(i128::MAX / 3));
        let mut lp = Lp::new(2);
        lp.nonneg = vec![true, true];
        lp.push(vec![huge.clone(), huge.clone()], Sense::Le, int(1));
        lp.push(vec![int(1), int(-1)], Sense::Eq, int(0));
        lp.maximize(vec![int(1), int(1)]);
        let r = lp.solve();
        let half = int(1) / (int(2) * &huge);
        assert_eq!(r.point().unwrap(), &[half.clone(), half][..]);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // A classic cycling example for the largest-coefficient rule.
        let mut lp = Lp::new(4);
        lp.nonneg = vec![true; 4];
        lp.push(vec![frac(1, 2), frac(-11, 2), frac(-5, 2), int(9)], Sense::Le, int(0));
        lp.push(vec![frac(1, 2), frac(-3, 2), frac(-1, 2), int(1)], Sense::Le, int(0));
        lp.push(vec![int(1), int(0), int(0), int(0)], Sense::Le, int(1));
        lp.maximize(vec![int(10), int(-57), int(-9), int(-24)]);
        match lp.solve() {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, int(1));
                assert!(lp.is_satisfied_by(&point));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
