//! Exact mean payoffs of the lasso induced by a finite-memory profile.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::game::{run_step, Configuration, Game, Lasso, StrategyProfile};
use crate::rational::{Rat, RatVec};

/// The smallest `(k, l)` with `k < l` and `cfg(k) = cfg(l)`.
///
/// Uses Brent's cycle detection, so at most three configurations are held at
/// any time regardless of the size of the configuration space.
pub fn compute_index(g: &Game, p: &StrategyProfile) -> Result<(usize, usize)> {
    let limit = p.configuration_space(g).saturating_add(1);
    // Brent's search may overshoot the first repeat by a bounded factor.
    let brent_limit = limit.saturating_mul(4);
    let start = p.initial(g);
    let guard = |steps: usize, cap: usize| -> Result<()> {
        if steps > cap {
            return Err(Error::Budget(format!(
                "no repeated configuration within {limit} steps"
            )));
        }
        Ok(())
    };

    // Cycle length.
    let mut power = 1usize;
    let mut lambda = 1usize;
    let mut tortoise = start.clone();
    let mut hare = run_step(g, p, &start);
    let mut steps = 1usize;
    while tortoise != hare {
        if power == lambda {
            tortoise = hare.clone();
            power *= 2;
            lambda = 0;
        }
        hare = run_step(g, p, &hare);
        lambda += 1;
        steps += 1;
        guard(steps, brent_limit)?;
    }

    // Start of the cycle.
    let mut tortoise = start.clone();
    let mut hare = start;
    for _ in 0..lambda {
        hare = run_step(g, p, &hare);
    }
    let mut mu = 0usize;
    while tortoise != hare {
        tortoise = run_step(g, p, &tortoise);
        hare = run_step(g, p, &hare);
        mu += 1;
        guard(mu, limit)?;
    }
    Ok((mu, mu + lambda))
}

/// The configurations `cfg(0) .. cfg(l - 1)`.
pub fn configurations(g: &Game, p: &StrategyProfile) -> Result<(Vec<Configuration>, usize)> {
    let (k, l) = compute_index(g, p)?;
    let mut out = Vec::with_capacity(l);
    let mut c = p.initial(g);
    for _ in 0..l {
        let next = run_step(g, p, &c);
        out.push(c);
        c = next;
    }
    Ok((out, k))
}

/// The induced run as a lasso of arena states.
pub fn induced_lasso(g: &Game, p: &StrategyProfile) -> Result<Lasso> {
    let (cfgs, k) = configurations(g, p)?;
    let states: Vec<usize> = cfgs.iter().map(|c| c.state).collect();
    let steps: Vec<usize> = cfgs
        .iter()
        .map(|c| g.profile_index(&p.actions(c)))
        .collect();
    Ok(Lasso {
        stem: states[..k].to_vec(),
        cycle: states[k..].to_vec(),
        steps,
    })
}

/// Payoff vector of the run induced by `p`, one entry per player.
pub fn compute_payoff(g: &Game, p: &StrategyProfile) -> Result<RatVec> {
    let (cfgs, k) = configurations(g, p)?;
    let cycle: Vec<usize> = cfgs[k..].iter().map(|c| c.state).collect();
    Ok(cycle_payoff(g, &cycle))
}

/// Mean weight of each player over a cycle of arena states.
pub fn cycle_payoff(g: &Game, cycle: &[usize]) -> RatVec {
    (0..g.num_players())
        .map(|i| {
            let sum: i64 = cycle.iter().map(|&s| g.weight(i, s)).sum();
            Rat::new(BigInt::from(sum), BigInt::from(cycle.len()))
        })
        .collect()
}

/// Payoff of a lasso: the mean over its cycle.
pub fn lasso_payoff(g: &Game, lasso: &Lasso) -> RatVec {
    cycle_payoff(g, &lasso.cycle)
}

pub fn mean_payoff_of_cycle(weights: &[i64]) -> Result<Rat> {
    if weights.is_empty() {
        return invalid("mean payoff of an empty cycle");
    }
    let sum: BigInt = weights.iter().map(|&w| BigInt::from(w)).sum();
    Ok(Rat::new(sum, BigInt::from(weights.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn cycle_means() {
        assert_eq!(mean_payoff_of_cycle(&[0, 1, 0, 0]).unwrap(), frac(1, 4));
        assert_eq!(mean_payoff_of_cycle(&[5]).unwrap(), int(5));
        assert_eq!(mean_payoff_of_cycle(&[-4, 4]).unwrap(), int(0));
        assert!(mean_payoff_of_cycle(&[]).is_err());
    }
}
