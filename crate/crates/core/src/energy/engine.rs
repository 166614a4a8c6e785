//! Certified counting of additive energy and sumset size for `{1^c, ..., N^c}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use super::pairs::{Entry, PairStream};
use super::EnergyError;
use crate::realcore::{
    combine_terms, pow_eval, sign_of_form_by, CompareConfig, CompareVerdict, Exponent, ExponentEval, RealBall,
    RealError,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const CONVENTION: &str = "ordered quadruples (x1,x2,x3,x4) in [N]^4 with x1^c + x2^c = x3^c + x4^c";

/// Clusters handed to the worker pool per batch.
const BATCH_CLUSTERS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyConfig {
    pub compare: CompareConfig,
    /// Pair-sum entries sorted in memory at once; larger runs spill to disk.
    pub chunk_entries: usize,
    /// Keep every sum class (value and pairs) in the result.
    pub collect_classes: bool,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        EnergyConfig {
            compare: CompareConfig::default(),
            chunk_entries: 1 << 24,
            collect_classes: false,
        }
    }
}

impl EnergyConfig {
    pub fn with_max_precision(max_precision: u32) -> Self {
        EnergyConfig {
            compare: CompareConfig::with_max_precision(max_precision),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyReport {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub c_descriptor: String,
    pub convention: String,
    /// Certified lower bound; exact when `certified`.
    pub energy: u64,
    pub energy_upper: u64,
    pub trivial: u64,
    pub nontrivial: u64,
    /// Number of certified-distinct sum values (lower bound).
    pub sumset: u64,
    pub sumset_upper: u64,
    pub unresolved: u64,
    pub precision_bits: u32,
    pub certified: bool,
}

impl EnergyReport {
    pub const CSV_HEADER: &'static str =
        "N,c_descriptor,energy,energy_upper,trivial,nontrivial,sumset,sumset_upper,unresolved,precision_bits,certified";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            csv_field(&self.c_descriptor),
            self.energy,
            self.energy_upper,
            self.trivial,
            self.nontrivial,
            self.sumset,
            self.sumset_upper,
            self.unresolved,
            self.precision_bits,
            self.certified
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SumsetSize {
    Exact { value: u64 },
    Interval { lower: u64, upper: u64 },
}

/// One value of `x^c + y^c` with the unordered pairs attaining it.
#[derive(Debug, Clone)]
pub struct SumClass {
    pub value: RealBall,
    pub pairs: Vec<(u32, u32)>,
    pub ordered_pairs: u64,
}

#[derive(Debug, Clone)]
pub struct EnergyRun {
    pub report: EnergyReport,
    /// Sum classes in increasing order of value, when requested.
    pub classes: Option<Vec<SumClass>>,
}

/// Powers `x^c` at the base precision, plus prepared exponents at higher ones.
pub struct PowerTable {
    c: Exponent,
    base_prec: u32,
    base: Vec<RealBall>,
    evals: Mutex<BTreeMap<u32, Arc<ExponentEval>>>,
}

impl PowerTable {
    pub fn new(c: &Exponent, n: u32, prec: u32) -> Result<Self, EnergyError> {
        let eval = c.evaluator(prec)?;
        let base = (1..=n)
            .into_par_iter()
            .map(|x| pow_eval(x as u64, &eval, prec))
            .collect();
        let mut evals = BTreeMap::new();
        evals.insert(prec, Arc::new(eval));
        Ok(PowerTable {
            c: c.clone(),
            base_prec: prec,
            base,
            evals: Mutex::new(evals),
        })
    }

    pub fn exponent(&self) -> &Exponent {
        &self.c
    }

    pub fn f64_bounds(&self) -> Vec<(f64, f64)> {
        self.base.par_iter().map(RealBall::to_f64_bounds).collect()
    }

    fn eval(&self, prec: u32) -> Result<Arc<ExponentEval>, RealError> {
        if let Some(e) = self.evals.lock().expect("eval cache").get(&prec) {
            return Ok(e.clone());
        }
        let e = Arc::new(self.c.evaluator(prec)?);
        self.evals.lock().expect("eval cache").insert(prec, e.clone());
        Ok(e)
    }

    pub fn pow(&self, x: u32, prec: u32) -> Result<RealBall, RealError> {
        if prec == self.base_prec {
            return Ok(self.base[(x - 1) as usize].clone());
        }
        Ok(pow_eval(x as u64, &*self.eval(prec)?, prec))
    }

    fn pair_value(&self, i: u32, j: u32) -> RealBall {
        self.base[(i - 1) as usize].add(&self.base[(j - 1) as usize])
    }

    /// Compares the sums of two entries; returns the verdict and the precision used.
    fn decide(&self, a: &Entry, b: &Entry, cfg: &CompareConfig) -> Result<(CompareVerdict, u32), EnergyError> {
        let terms = combine_terms(&[(1, a.i as u64), (1, a.j as u64)], &[(1, b.i as u64), (1, b.j as u64)]);
        let mut used = cfg.initial_precision;
        let verdict = sign_of_form_by(&terms, &self.c, cfg, |prec| {
            used = used.max(prec);
            let mut acc = RealBall::zero(prec);
            for (k, x) in &terms {
                acc = acc.add(&self.pow(*x as u32, prec)?.mul_integer(k));
            }
            Ok(acc)
        })?;
        Ok((verdict, used))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Joins the sets; the smaller root survives so results are order-stable.
    fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        let (keep, drop) = if ra <= rb { (ra, rb) } else { (rb, ra) };
        self.0[drop] = keep;
        keep
    }
}

/// Unordered pairs in one class of certified-equal sums.
fn class_counts(pairs: &[(u32, u32)]) -> (u64, u64) {
    let mut first: HashMap<u32, u64> = HashMap::new();
    let mut second: HashMap<u32, u64> = HashMap::new();
    let mut both: HashMap<u32, u64> = HashMap::new();
    let mut ordered = 0;
    for &(i, j) in pairs {
        if i == j {
            ordered += 1;
            *first.entry(i).or_default() += 1;
            *second.entry(i).or_default() += 1;
            *both.entry(i).or_default() += 1;
        } else {
            ordered += 2;
            *first.entry(i).or_default() += 1;
            *first.entry(j).or_default() += 1;
            *second.entry(i).or_default() += 1;
            *second.entry(j).or_default() += 1;
        }
    }
    // quadruples with x1 in {x3, x4}: for each first coordinate x, pairs
    // (x3, x4) with x3 = x or x4 = x
    let trivial = first
        .iter()
        .map(|(x, f)| {
            let s = second.get(x).copied().unwrap_or(0);
            let b = both.get(x).copied().unwrap_or(0);
            f * (f + s - b)
        })
        .sum();
    (ordered, trivial)
}

struct ClassOut {
    pairs: Vec<(u32, u32)>,
    ordered: u64,
    trivial: u64,
}

struct ClusterOut {
    classes: Vec<ClassOut>,
    /// Connected components of classes under unresolved comparisons.
    blobs: Vec<Vec<usize>>,
    unresolved: u64,
    precision: u32,
}

enum Cluster {
    Single(Entry),
    Multi(Vec<Entry>),
}

fn resolve(cluster: &Cluster, table: &PowerTable, cfg: &CompareConfig) -> Result<ClusterOut, EnergyError> {
    let entries = match cluster {
        Cluster::Single(e) => {
            let pairs = vec![(e.i, e.j)];
            let (ordered, trivial) = class_counts(&pairs);
            return Ok(ClusterOut {
                classes: vec![ClassOut {
                    pairs,
                    ordered,
                    trivial,
                }],
                blobs: vec![vec![0]],
                unresolved: 0,
                precision: cfg.initial_precision,
            });
        }
        Cluster::Multi(v) => v,
    };
    let k = entries.len();
    let mut uf = UnionFind::new(k);
    let mut roots: Vec<usize> = Vec::new();
    let mut maybe: Vec<(usize, usize)> = Vec::new();
    let mut precision = cfg.initial_precision;
    for a in 0..k {
        let ea = &entries[a];
        let mut matched = Vec::new();
        for &r in &roots {
            let er = &entries[r];
            if ea.lo > er.hi || er.lo > ea.hi {
                continue;
            }
            let (verdict, used) = table.decide(ea, er, cfg)?;
            precision = precision.max(used);
            match verdict {
                CompareVerdict::CertifiedEqual { .. } => matched.push(r),
                CompareVerdict::Unresolved { .. } => maybe.push((a, r)),
                CompareVerdict::Less | CompareVerdict::Greater => {}
            }
        }
        if matched.is_empty() {
            roots.push(a);
        } else {
            let mut root = a;
            for &r in &matched {
                root = uf.union(root, r);
            }
            let first = roots
                .iter()
                .position(|r| matched.contains(r))
                .expect("matched root is listed");
            roots = roots
                .iter()
                .enumerate()
                .filter_map(|(idx, r)| match (idx == first, matched.contains(r)) {
                    (true, _) => Some(root),
                    (false, true) => None,
                    (false, false) => Some(*r),
                })
                .collect();
        }
    }
    let mut members: BTreeMap<usize, Vec<(u32, u32)>> = BTreeMap::new();
    for (idx, e) in entries.iter().enumerate() {
        members.entry(uf.find(idx)).or_default().push((e.i, e.j));
    }
    // order classes by value, ties (unresolved) by representative
    let mut order: Vec<usize> = members.keys().copied().collect();
    let values: HashMap<usize, RealBall> = order
        .iter()
        .map(|&r| (r, table.pair_value(entries[r].i, entries[r].j)))
        .collect();
    order.sort_by(|a, b| {
        values[a]
            .mid()
            .partial_cmp(values[b].mid())
            .expect("finite")
            .then(a.cmp(b))
    });
    let index: HashMap<usize, usize> = order.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let classes: Vec<ClassOut> = order
        .iter()
        .map(|r| {
            let pairs = members[r].clone();
            let (ordered, trivial) = class_counts(&pairs);
            ClassOut {
                pairs,
                ordered,
                trivial,
            }
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = maybe
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (index[&uf.find(a)], index[&uf.find(b)]);
            (x.min(y), x.max(y))
        })
        .filter(|(x, y)| x != y)
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let mut blob_uf = UnionFind::new(classes.len());
    for &(x, y) in &edges {
        blob_uf.union(x, y);
    }
    let mut blob_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..classes.len() {
        blob_map.entry(blob_uf.find(i)).or_default().push(i);
    }
    Ok(ClusterOut {
        classes,
        blobs: blob_map.into_values().collect(),
        unresolved: edges.len() as u64,
        precision,
    })
}

#[derive(Default)]
struct Totals {
    energy: u64,
    energy_upper: u64,
    trivial: u64,
    sumset_lower: u64,
    sumset_upper: u64,
    unresolved: u64,
    precision: u32,
    classes: Option<Vec<SumClass>>,
}

impl Totals {
    fn absorb(&mut self, out: ClusterOut, table: &PowerTable) {
        for b in &out.blobs {
            let r: u64 = b.iter().map(|&i| out.classes[i].ordered).sum();
            self.energy_upper += r * r;
        }
        self.sumset_lower += out.blobs.len() as u64;
        self.sumset_upper += out.classes.len() as u64;
        self.unresolved += out.unresolved;
        self.precision = self.precision.max(out.precision);
        for c in out.classes {
            self.energy += c.ordered * c.ordered;
            self.trivial += c.trivial;
            if let Some(list) = self.classes.as_mut() {
                let (i, j) = c.pairs[0];
                list.push(SumClass {
                    value: table.pair_value(i, j),
                    pairs: c.pairs,
                    ordered_pairs: c.ordered,
                });
            }
        }
    }
}

/// Runs the full engine.
pub fn run_energy(c: &Exponent, n: u64, cfg: &EnergyConfig) -> Result<EnergyRun, EnergyError> {
    if n == 0 {
        return Err(EnergyError::InvalidInput("N must be at least 1".into()));
    }
    let n32 = u32::try_from(n).map_err(|_| EnergyError::InvalidInput("N must fit in 32 bits".into()))?;
    let table = PowerTable::new(c, n32, cfg.compare.initial_precision)?;
    let bounds = table.f64_bounds();
    let mut stream = PairStream::build(&bounds, cfg.chunk_entries)?;
    let mut totals = Totals {
        precision: cfg.compare.initial_precision,
        classes: cfg.collect_classes.then(Vec::new),
        ..Default::default()
    };
    let mut pending: Vec<Cluster> = Vec::new();
    let mut current: Vec<Entry> = Vec::new();
    let mut hull_hi = f64::NEG_INFINITY;
    let flush = |pending: &mut Vec<Cluster>, totals: &mut Totals| -> Result<(), EnergyError> {
        let outs: Vec<ClusterOut> = pending
            .par_iter()
            .map(|cl| resolve(cl, &table, &cfg.compare))
            .collect::<Result<_, _>>()?;
        for out in outs {
            totals.absorb(out, &table);
        }
        pending.clear();
        Ok(())
    };
    let close = |current: &mut Vec<Entry>, pending: &mut Vec<Cluster>| match current.len() {
        0 => {}
        1 => pending.push(Cluster::Single(current.pop().expect("one entry"))),
        _ => pending.push(Cluster::Multi(std::mem::take(current))),
    };
    while let Some(e) = stream.next_entry()? {
        if !current.is_empty() && e.lo > hull_hi {
            close(&mut current, &mut pending);
            if pending.len() >= BATCH_CLUSTERS {
                flush(&mut pending, &mut totals)?;
            }
        }
        if current.is_empty() {
            hull_hi = e.hi;
        } else {
            hull_hi = hull_hi.max(e.hi);
        }
        current.push(e);
    }
    close(&mut current, &mut pending);
    flush(&mut pending, &mut totals)?;

    let certified = totals.unresolved == 0;
    let report = EnergyReport {
        schema_version: SCHEMA_VERSION,
        n,
        c_descriptor: c.to_string(),
        convention: CONVENTION.to_string(),
        energy: totals.energy,
        energy_upper: totals.energy_upper,
        trivial: totals.trivial,
        nontrivial: totals.energy - totals.trivial,
        sumset: totals.sumset_lower,
        sumset_upper: totals.sumset_upper,
        unresolved: totals.unresolved,
        precision_bits: totals.precision,
        certified,
    };
    Ok(EnergyRun {
        report,
        classes: totals.classes,
    })
}

/// Additive energy of `{1^c, ..., N^c}` over ordered quadruples.
pub fn additive_energy(c: &Exponent, n: u64, max_precision: u32) -> Result<EnergyReport, EnergyError> {
    Ok(run_energy(c, n, &EnergyConfig::with_max_precision(max_precision))?.report)
}

/// `|S + S|`, or certified bounds when some collisions stay unresolved.
pub fn sumset_size(c: &Exponent, n: u64, max_precision: u32) -> Result<SumsetSize, EnergyError> {
    let r = additive_energy(c, n, max_precision)?;
    Ok(if r.certified {
        SumsetSize::Exact { value: r.sumset }
    } else {
        SumsetSize::Interval {
            lower: r.sumset,
            upper: r.sumset_upper,
        }
    })
}

/// Net coefficient form of `x1^c + x2^c - x3^c - x4^c`.
pub fn quadruple_terms(q: [u64; 4]) -> Vec<(Integer, u64)> {
    combine_terms(&[(1, q[0]), (1, q[1])], &[(1, q[2]), (1, q[3])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_by_definition() {
        // {1,3} and {2,2} under c = 1
        let (ordered, trivial) = class_counts(&[(1, 3), (2, 2)]);
        assert_eq!(ordered, 3);
        assert_eq!(trivial, 5);
        assert_eq!(class_counts(&[(4, 4)]), (1, 1));
        assert_eq!(class_counts(&[(2, 5)]), (2, 4));
    }

    #[test]
    fn small_linear_case() {
        let r = additive_energy(&Exponent::rational(1, 1).unwrap(), 3, 256).unwrap();
        assert_eq!((r.energy, r.trivial, r.nontrivial, r.sumset), (19, 15, 4, 5));
        assert!(r.certified);
    }

    #[test]
    fn two_elements() {
        let r = additive_energy(&Exponent::sqrt2(), 2, 256).unwrap();
        assert_eq!((r.energy, r.nontrivial, r.sumset), (6, 0, 3));
    }

    #[test]
    fn spilled_run_matches_in_memory() {
        let c = Exponent::rational(1, 2).unwrap();
        let mem = run_energy(&c, 30, &EnergyConfig::default()).unwrap().report;
        let cfg = EnergyConfig {
            chunk_entries: 50,
            ..Default::default()
        };
        let ext = run_energy(&c, 30, &cfg).unwrap().report;
        assert_eq!(mem, ext);
    }
}
