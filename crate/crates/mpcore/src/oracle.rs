//! Brute-force cross-checks for small games. Nothing here is used by the
//! decision procedures; the enumerations are deliberately naive.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{invalid, Result};
use crate::game::{Coalition, Game, StrategyProfile};
use crate::geometry::down_conv_membership;
use crate::payoff::compute_payoff;
use crate::rational::{Rat, RatVec};
use crate::sequentialise::{enumerate_p2, induced_subgame, sequentialise};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceBudget {
    /// Memoryless strategy tuples enumerated per query.
    pub max_memoryless_profiles: usize,
    /// Denominator of the convex coefficients tried.
    pub max_denominator: usize,
    /// Cycle averages kept per counter-strategy.
    pub max_cycle_points: usize,
}

impl Default for BruteForceBudget {
    fn default() -> Self {
        BruteForceBudget {
            max_memoryless_profiles: 2_000_000,
            max_denominator: 4,
            max_cycle_points: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteMembership {
    /// A memoryless deviation beats every memoryless counter-response.
    DeviationFound(Coalition),
    /// No memoryless deviation works. Supporting evidence only: deviations
    /// with memory are not searched.
    NoDeviationFound,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteAnswer {
    Yes,
    No,
    Inconclusive,
}

/// Mixed-radix counter over `radix`, calling `f` on every digit vector.
fn for_each_digits(radix: &[usize], mut f: impl FnMut(&[usize]) -> bool) {
    let mut d = vec![0usize; radix.len()];
    loop {
        if !f(&d) {
            return;
        }
        let mut k = radix.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            d[k] += 1;
            if d[k] < radix[k] {
                break;
            }
            d[k] = 0;
        }
    }
}

/// Payoff of the run where `choice[i][s]` is player `i`'s action in `s`.
fn memoryless_payoff(g: &Game, choice: &[Vec<usize>]) -> RatVec {
    let mut seen = vec![usize::MAX; g.num_states()];
    let mut run = Vec::new();
    let mut s = g.init();
    while seen[s] == usize::MAX {
        seen[s] = run.len();
        run.push(s);
        let prof: Vec<usize> = choice.iter().map(|c| c[s]).collect();
        s = g.step(s, &prof);
    }
    let cycle = &run[seen[s]..];
    let len = BigInt::from(cycle.len());
    (0..g.num_players())
        .map(|i| {
            let sum: i64 = cycle.iter().map(|&v| g.weight(i, v)).sum();
            Rat::new(BigInt::from(sum), len.clone())
        })
        .collect()
}

/// Does `c` have a memoryless deviation beating `x` on every member against
/// every memoryless response?
pub fn brute_deviation(g: &Game, c: &Coalition, x: &[Rat], budget: &BruteForceBudget) -> Result<BruteAnswer> {
    let n = g.num_players();
    if x.len() != n {
        return invalid("payoff vector length must match the player count");
    }
    let ns = g.num_states();
    let others = c.complement(n);
    let mine: Vec<usize> = c
        .members()
        .iter()
        .flat_map(|&i| core::iter::repeat(g.actions(i).len()).take(ns))
        .collect();
    let theirs: Vec<usize> = others
        .iter()
        .flat_map(|&i| core::iter::repeat(g.actions(i).len()).take(ns))
        .collect();
    let mut total = 0usize;
    let mut found = false;
    let mut over = false;
    for_each_digits(&mine, |dev| {
        let mut choice = vec![vec![0usize; ns]; n];
        for (k, &i) in c.members().iter().enumerate() {
            choice[i].copy_from_slice(&dev[k * ns..(k + 1) * ns]);
        }
        let mut beats_all = true;
        for_each_digits(&theirs, |resp| {
            total += 1;
            if total > budget.max_memoryless_profiles {
                over = true;
                return false;
            }
            for (k, &i) in others.iter().enumerate() {
                choice[i].copy_from_slice(&resp[k * ns..(k + 1) * ns]);
            }
            let pay = memoryless_payoff(g, &choice);
            if c.members().iter().any(|&i| pay[i] <= x[i]) {
                beats_all = false;
                return false;
            }
            true
        });
        if over {
            return false;
        }
        found = beats_all;
        !found
    });
    Ok(if found {
        BruteAnswer::Yes
    } else if over {
        BruteAnswer::Inconclusive
    } else {
        BruteAnswer::No
    })
}

/// Looks for a beneficial memoryless deviation from the profile's payoff.
pub fn brute_membership(g: &Game, p: &StrategyProfile, budget: &BruteForceBudget) -> Result<BruteMembership> {
    let x = compute_payoff(g, p)?;
    let mut undecided = false;
    for c in Coalition::all(g.num_players()) {
        match brute_deviation(g, &c, &x, budget)? {
            BruteAnswer::Yes => return Ok(BruteMembership::DeviationFound(c)),
            BruteAnswer::No => {}
            BruteAnswer::Inconclusive => undecided = true,
        }
    }
    Ok(if undecided {
        BruteMembership::Inconclusive
    } else {
        BruteMembership::NoDeviationFound
    })
}

/// Simple cycles of a small graph by plain depth-first search from each
/// smallest vertex.
fn naive_cycles(adj: &[Vec<usize>], reach: &[bool], cap: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for start in 0..adj.len() {
        if !reach[start] {
            continue;
        }
        let mut path = vec![start];
        let mut on = vec![false; adj.len()];
        on[start] = true;
        let mut iters = vec![0usize];
        while let Some(&v) = path.last() {
            let k = iters.len() - 1;
            if iters[k] < adj[v].len() {
                let w = adj[v][iters[k]];
                iters[k] += 1;
                if w == start {
                    out.push(path.clone());
                    if out.len() > cap {
                        return None;
                    }
                } else if w > start && !on[w] {
                    on[w] = true;
                    path.push(w);
                    iters.push(0);
                }
            } else {
                on[v] = false;
                path.pop();
                iters.pop();
            }
        }
    }
    Some(out)
}

/// All ways to write `total` as a sum of `parts` non-negative integers with
/// at most `support` of them positive.
fn compositions(total: usize, parts: usize, support: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(
        left: usize,
        k: usize,
        used: usize,
        support: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k + 1 == cur.len() {
            if left > 0 && used >= support {
                return true;
            }
            cur[k] = left;
            return f(cur);
        }
        for v in 0..=left {
            if v > 0 && used >= support {
                break;
            }
            cur[k] = v;
            if !rec(left - v, k + 1, used + usize::from(v > 0), support, cur, f) {
                return false;
            }
        }
        cur[k] = 0;
        true
    }
    if parts == 0 {
        return;
    }
    let mut cur = vec![0; parts];
    rec(total, 0, 0, support, &mut cur, f);
}

/// Can `c` enforce `x` from `s`? Tries, against every memoryless
/// counter-strategy, convex combinations of at most `|C| + 1` reachable
/// cycle averages with coefficients `k / D`.
pub fn brute_enforce(
    g: &Game,
    c: &Coalition,
    s: usize,
    x: &[Rat],
    budget: &BruteForceBudget,
) -> Result<BruteAnswer> {
    if x.len() != c.len() {
        return invalid("vector length must match the coalition");
    }
    let m = sequentialise(g, c)?;
    if m.p2_strategy_count() > budget.max_memoryless_profiles {
        return Ok(BruteAnswer::Inconclusive);
    }
    let dim = c.len();
    let mut undecided = false;
    for s2 in enumerate_p2(&m) {
        let graph = induced_subgame(&m, &s2)?;
        let adj: Vec<Vec<usize>> = (0..graph.len()).map(|v| graph.succ(v).to_vec()).collect();
        let reach = graph.reachable(s);
        let Some(cycles) = naive_cycles(&adj, &reach, budget.max_cycle_points * 8) else {
            return Ok(BruteAnswer::Inconclusive);
        };
        // Cycles can only be mixed inside one strongly connected component.
        let comps = graph.sccs();
        let mut comp_of = vec![0usize; graph.len()];
        for (k, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = k;
            }
        }
        let mut groups: Vec<BTreeSet<RatVec>> = vec![BTreeSet::new(); comps.len()];
        for cyc in &cycles {
            let len = BigInt::from(cyc.len());
            let avg: RatVec = (0..dim)
                .map(|i| {
                    let sum: i64 = cyc.iter().map(|&v| m.weights[v][i]).sum();
                    Rat::new(BigInt::from(sum), len.clone())
                })
                .collect();
            groups[comp_of[cyc[0]]].insert(avg);
        }
        if groups.iter().map(BTreeSet::len).sum::<usize>() > budget.max_cycle_points {
            return Ok(BruteAnswer::Inconclusive);
        }
        let d = budget.max_denominator.max(1);
        let mut hit = false;
        for group in &groups {
            let pts: Vec<&RatVec> = group.iter().collect();
            compositions(d, pts.len(), dim + 1, &mut |k| {
                let mut y = vec![Rat::zero(); dim];
                for (kj, p) in k.iter().zip(&pts) {
                    if *kj > 0 {
                        let lam = Rat::new(BigInt::from(*kj), BigInt::from(d));
                        for (yi, pi) in y.iter_mut().zip(p.iter()) {
                            *yi += &lam * pi;
                        }
                    }
                }
                hit = y.iter().zip(x).all(|(a, b)| a >= b);
                !hit
            });
            if hit {
                break;
            }
        }
        if hit {
            continue;
        }
        let pts: Vec<RatVec> = groups.into_iter().flatten().collect();
        // Mixing cycles of different components over-approximates, so an
        // infeasible LP over all of them is a certified no.
        let mut rev = pts.clone();
        rev.reverse();
        if !down_conv_membership(&rev, x)? {
            return Ok(BruteAnswer::No);
        }
        undecided = true;
    }
    Ok(if undecided {
        BruteAnswer::Inconclusive
    } else {
        BruteAnswer::Yes
    })
}
