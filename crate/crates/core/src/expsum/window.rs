//! Pairs with `x1^c - x2^c` in a window `[y - delta, y + delta]`, the exact
//! count behind the smoothed integral of `|D|^2`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::{Float, Rational};
use serde::Serialize;

use super::ExpsumError;
use crate::realcore::exponent::parse_rational;
use crate::realcore::{compare_sums_with, pow, CompareConfig, CompareVerdict, Exponent, RealBall};

/// Largest `N` for the window count (`N^2` differences).
pub const WINDOW_MAX_N: u64 = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum WindowTarget {
    Value(Rational),
    /// `x1^c - x2^c`
    Difference {
        x1: u64,
        x2: u64,
    },
}

impl fmt::Display for WindowTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowTarget::Value(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            WindowTarget::Value(r) => write!(f, "{r}"),
            WindowTarget::Difference { x1, x2 } => write!(f, "diff:{x1},{x2}"),
        }
    }
}

impl FromStr for WindowTarget {
    type Err = ExpsumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExpsumError::InvalidInput(format!("expected a rational or diff:<x1>,<x2>, got `{s}`"));
        if let Some(rest) = s.trim().strip_prefix("diff:") {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            let x1 = a.trim().parse().map_err(|_| bad())?;
            let x2 = b.trim().parse().map_err(|_| bad())?;
            return Ok(WindowTarget::Difference { x1, x2 });
        }
        parse_rational(s).map(WindowTarget::Value).ok_or_else(bad)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowCount {
    #[serde(rename = "N")]
    pub n: u64,
    pub c_descriptor: String,
    pub y: String,
    /// Half-width of the window.
    pub delta: String,
    /// Lower bound on the least gap between distinct differences.
    pub min_gap: String,
    pub distinct_differences: usize,
    pub count: u64,
    pub precision_bits: u32,
}

struct Group {
    lo: Float,
    hi: Float,
    members: Vec<(u64, u64)>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Distinct values of `a^c - b^c`, sorted and pairwise separated at `prec`.
fn difference_groups(c: &Exponent, n: u64, prec: u32, cfg: &CompareConfig) -> Result<Option<Vec<Group>>, ExpsumError> {
    let pw: Vec<RealBall> = (1..=n).map(|x| pow(x, c, prec)).collect::<Result<_, _>>()?;
    let mut diffs: Vec<(RealBall, u64, u64)> = Vec::with_capacity((n * n) as usize);
    for a in 1..=n {
        for b in 1..=n {
            let d = if a == b {
                RealBall::zero(prec)
            } else {
                pw[a as usize - 1].sub(&pw[b as usize - 1])
            };
            diffs.push((d, a, b));
        }
    }
    diffs.sort_by(|x, y| {
        x.0.lower()
            .partial_cmp(&y.0.lower())
            .unwrap_or(Ordering::Equal)
            .then((x.1, x.2).cmp(&(y.1, y.2)))
    });
    let mut groups: Vec<Group> = Vec::new();
    let mut start = 0;
    while start < diffs.len() {
        let mut end = start + 1;
        let mut hull_hi = diffs[start].0.upper();
        while end < diffs.len() && diffs[end].0.lower() <= hull_hi {
            hull_hi = hull_hi.max(&diffs[end].0.upper());
            end += 1;
        }
        let cluster = &diffs[start..end];
        let mut parent: Vec<usize> = (0..cluster.len()).collect();
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..cluster.len() {
            let (_, a, b) = cluster[i];
            let mut joined = false;
            for &r in &reps {
                let (_, ra, rb) = cluster[r];
                if !cluster[i].0.overlaps(&cluster[r].0) {
                    continue;
                }
                // a^c - b^c = ra^c - rb^c  iff  a^c + rb^c = ra^c + b^c
                match compare_sums_with(&[(1, a), (1, rb)], &[(1, ra), (1, b)], c, cfg)? {
                    CompareVerdict::CertifiedEqual { .. } => {
                        let root = find(&mut parent, r);
                        parent[i] = root;
                        joined = true;
                        break;
                    }
                    CompareVerdict::Unresolved { precision_reached } => {
                        return Err(ExpsumError::Unresolved(format!(
                            "differences ({a},{b}) and ({ra},{rb}) undecided at {precision_reached} bits"
                        )));
                    }
                    _ => {}
                }
            }
            if !joined {
                reps.push(i);
            }
        }
        for &r in &reps {
            let mut lo = cluster[r].0.lower();
            let mut hi = cluster[r].0.upper();
            let mut members = Vec::new();
            for (i, (ball, a, b)) in cluster.iter().enumerate() {
                if find(&mut parent, i) == r {
                    lo = lo.max(&ball.lower());
                    hi = hi.min(&ball.upper());
                    members.push((*a, *b));
                }
            }
            groups.push(Group { lo, hi, members });
        }
        start = end;
    }
    groups.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap_or(Ordering::Equal));
    if groups.windows(2).any(|w| w[0].hi >= w[1].lo) {
        return Ok(None);
    }
    Ok(Some(groups))
}

/// Counts ordered pairs with `x1^c - x2^c` within `delta` of `y`. The default
/// `delta` is half a certified lower bound on the least gap between distinct
/// differences, so a window holds at most one of them; a smaller `delta`
/// may be supplied.
pub fn window_pair_count(
    c: &Exponent,
    n: u64,
    y: &WindowTarget,
    max_precision: u32,
    delta: Option<&Rational>,
) -> Result<WindowCount, ExpsumError> {
    if n == 0 || n > WINDOW_MAX_N {
        return Err(ExpsumError::InvalidInput(format!("N must lie in [1, {WINDOW_MAX_N}]")));
    }
    if let WindowTarget::Difference { x1, x2 } = y {
        if !(1..=n).contains(x1) || !(1..=n).contains(x2) {
            return Err(ExpsumError::InvalidInput("difference points must lie in [1, N]".into()));
        }
    }
    let cfg = CompareConfig::with_max_precision(max_precision);
    let mut prec = cfg.initial_precision;
    loop {
        let attempt = window_at(c, n, y, prec, &cfg, delta)?;
        match attempt {
            Some(w) => return Ok(w),
            None if prec >= max_precision => {
                return Err(ExpsumError::Unresolved(format!(
                    "window boundaries undecided at {max_precision} bits"
                )))
            }
            None => prec = (prec * 2).min(max_precision),
        }
    }
}

fn window_at(
    c: &Exponent,
    n: u64,
    y: &WindowTarget,
    prec: u32,
    cfg: &CompareConfig,
    delta: Option<&Rational>,
) -> Result<Option<WindowCount>, ExpsumError> {
    let Some(groups) = difference_groups(c, n, prec, cfg)? else {
        return Ok(None);
    };
    let gap = groups
        .windows(2)
        .map(|w| Float::with_val_round(prec, &w[1].lo - &w[0].hi, Round::Down).0)
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    // a single group (N = 1) leaves the window free; take width 1
    let gap = gap.unwrap_or_else(|| Float::with_val(prec, 2));
    let default_delta = Float::with_val_round(prec, &gap / 2u32, Round::Down).0;
    let delta = match delta {
        Some(d) => {
            if *d <= 0 || *d > default_delta {
                return Err(ExpsumError::InvalidInput(format!(
                    "delta must be positive and at most {}",
                    default_delta.to_string_radix(10, Some(12))
                )));
            }
            RealBall::from_rational(d, prec)
        }
        None => RealBall::with_radius(default_delta, &Float::new(64)),
    };
    let count = match y {
        WindowTarget::Difference { x1, x2 } => groups
            .iter()
            .find(|g| g.members.contains(&(*x1, *x2)))
            .map(|g| g.members.len() as u64)
            .expect("every pair lies in a group"),
        WindowTarget::Value(v) => {
            let yb = RealBall::from_rational(v, prec);
            let lo = yb.sub(&delta);
            let hi = yb.add(&delta);
            let mut count = 0u64;
            for g in &groups {
                if g.lo >= lo.upper() && g.hi <= hi.lower() {
                    count += g.members.len() as u64;
                } else if g.hi < lo.lower() || g.lo > hi.upper() {
                    continue;
                } else {
                    return Ok(None);
                }
            }
            count
        }
    };
    Ok(Some(WindowCount {
        n,
        c_descriptor: c.to_string(),
        y: y.to_string(),
        delta: delta.to_decimal(12),
        min_gap: gap.to_string_radix(10, Some(12)),
        distinct_differences: groups.len(),
        count,
        precision_bits: prec,
    }))
}
