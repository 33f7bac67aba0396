//! The four published remainder bounds, the sweep experiment engine, and
//! empirical-constant reporting.
//!
//! All `x^ε` factors are made concrete so that remainder/bound ratios are
//! comparable across bounds: the first two bounds carry their own explicit
//! τ-power and log factors, and the two conditional bounds realize `x^ε`
//! as ln⁴x. Inapplicable conditional bounds are values (`None` /
//! `f64::INFINITY` in records), never errors, so sweeps cross regime
//! boundaries without aborting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::counting::{self, SqrtTable};
use crate::{Error, Result};

fn ln4(x: u64) -> f64 {
    (x as f64).ln().powi(4)
}

fn gcd_aq(q: u64, a: i64) -> u64 {
    arith::gcd(q, arith::reduce_mod(a, q))
}

/// (q^{1/2} + x^{1/3}) (a,q)^{1/2} τ⁴(q) ln⁴x. Requires x ≥ 3 so ln⁴x ≥ 1.
pub fn bound_tolev(x: u64, q: u64, a: i64) -> Result<f64> {
    if x < 3 {
        return Err(Error::Domain(format!("bound_tolev requires x >= 3, got {x}")));
    }
    assert!(q >= 1);
    let skeleton = (q as f64).sqrt() + (x as f64).cbrt();
    let tau = arith::tau(q) as f64;
    Ok(skeleton * (gcd_aq(q, a) as f64).sqrt() * tau.powi(4) * ln4(x))
}

/// x^{2/3+ξ} q^{−(1+3ξ)/2} (q,a)^{1/2} τ(q), for 0 < ξ < 1/3.
pub fn bound_smith(x: u64, q: u64, a: i64, xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0 / 3.0) {
        return Err(Error::Domain(format!(
            "smith exponent must lie in the open interval (0, 1/3), got {xi}"
        )));
    }
    assert!(x >= 1 && q >= 1);
    Ok((x as f64).powf(2.0 / 3.0 + xi)
        * (q as f64).powf(-(1.0 + 3.0 * xi) / 2.0)
        * (gcd_aq(q, a) as f64).sqrt()
        * arith::tau(q) as f64)
}

/// Which of the two conditional bounds to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarbanetsVariant {
    /// (q^{1/2} + x^{1/2} q^{−1/4}) ln⁴x, valid for a ≡ 1 (q) and
    /// x^{1/2} ≤ q ≤ x^{2/3}.
    Mid,
    /// (q^{1/2} + x^{1/2} q^{−1/2} ξ(q)) ln⁴x, valid for a ≡ 1 (q),
    /// q ≤ x^{2/3} and q^{1/4} > ξ(q).
    Strong,
}

/// q ≤ x^{2/3}, compared exactly as q³ ≤ x². A cube that overflows u128
/// exceeds any x².
fn below_two_thirds(x: u64, q: u64) -> bool {
    (q as u128)
        .checked_pow(3)
        .is_some_and(|q3| q3 <= (x as u128).pow(2))
}

/// The conditional bounds; `None` when the validity conditions fail.
pub fn bound_varbanets(x: u64, q: u64, a: i64, variant: VarbanetsVariant) -> Option<f64> {
    assert!(q >= 1);
    if x < 3 || arith::reduce_mod(a, q) != 1 % q {
        return None;
    }
    let qf = q as f64;
    match variant {
        VarbanetsVariant::Mid => {
            // x^{1/2} ≤ q, exactly: q² ≥ x.
            if (q as u128) * (q as u128) < x as u128 || !below_two_thirds(x, q) {
                return None;
            }
            Some((qf.sqrt() + (x as f64).sqrt() * qf.powf(-0.25)) * ln4(x))
        }
        VarbanetsVariant::Strong => {
            let rad = arith::radical(q);
            // q^{1/4} > ξ(q), exactly: q > ξ(q)⁴ (an overflowing ξ⁴ beats any q).
            let rad4_small = (rad as u128).checked_pow(4).is_some_and(|r4| r4 < q as u128);
            if !below_two_thirds(x, q) || !rad4_small {
                return None;
            }
            Some((qf.sqrt() + (x as f64).sqrt() / qf.sqrt() * rad as f64) * ln4(x))
        }
    }
}

/// The dominance claim against the mid-range conditional bound, compared
/// with the ε-factors cancelled: both sides are divided by their documented
/// ε-realization (τ⁴(q) ln⁴x and ln⁴x respectively), which reduces the
/// claim to (q^{1/2} + x^{1/3})(a,q)^{1/2} ≤ q^{1/2} + x^{1/2} q^{−1/4}.
/// `None` when the mid bound is inapplicable or q > x^{2/3−0.05}.
pub fn dominance_mid_holds(x: u64, q: u64, a: i64) -> Option<bool> {
    bound_varbanets(x, q, a, VarbanetsVariant::Mid)?;
    if (q as f64) > (x as f64).powf(2.0 / 3.0 - 0.05) {
        return None;
    }
    let lhs = ((q as f64).sqrt() + (x as f64).cbrt()) * (gcd_aq(q, a) as f64).sqrt();
    let rhs = (q as f64).sqrt() + (x as f64).sqrt() * (q as f64).powf(-0.25);
    Some(lhs <= rhs * (1.0 + 1e-12))
}

/// How the q grid of a sweep is generated per x value.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum QRule {
    /// Use exactly these moduli.
    Explicit { values: Vec<u64> },
    /// 2, 4, 8, … up to ⌊x^{2/3}⌋.
    PowersOfTwo,
    /// `count` values log-spaced in [2, ⌊x^{2/3}⌋], deduplicated.
    LogSpaced { count: usize },
    /// `count` seeded uniform draws from [2, ⌊x^{2/3}⌋].
    RandomSample { count: usize, seed: u64 },
}

/// How the residues a are chosen per (x, q) cell.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ARule {
    Fixed { value: i64 },
    AllResidues,
    /// `count` seeded draws from [0, q).
    RandomSample { count: usize, seed: u64 },
    /// The residues 0, 1 and one seeded draw from [0, q): the grid of the
    /// regression sweep.
    ZeroOneRandom { seed: u64 },
}

/// Declarative description of one sweep experiment.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepConfig {
    pub x_values: Vec<u64>,
    pub q_rule: QRule,
    pub a_rule: ARule,
    /// Exponent for the Smith bound; must lie strictly inside (0, 1/3).
    pub smith_xi: f64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// CSV destination; empty string writes no file.
    #[serde(default)]
    pub output_path: String,
}

fn default_workers() -> usize {
    1
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.smith_xi > 0.0 && self.smith_xi < 1.0 / 3.0) {
            return Err(Error::Domain(format!(
                "smith_xi must lie in (0, 1/3), got {}",
                self.smith_xi
            )));
        }
        if self.workers == 0 {
            return Err(Error::Domain("workers must be positive".into()));
        }
        Ok(())
    }
}

/// Regime classification of a cell: the asymptotic formula is non-trivial
/// only for q ≤ x^{2/3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Nontrivial,
    Trivial,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Nontrivial => write!(f, "nontrivial"),
            Regime::Trivial => write!(f, "trivial"),
        }
    }
}

/// One experiment row. Inapplicable bounds carry `f64::INFINITY` and a
/// zero ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub x: u64,
    pub q: u64,
    pub a: i64,
    pub s_total: u64,
    pub quadrant: u64,
    pub axis: u64,
    pub origin: u64,
    pub eta: u64,
    pub omega: u64,
    pub main: f64,
    pub r: f64,
    pub bound_tolev: f64,
    pub ratio_tolev: f64,
    pub bound_smith: f64,
    pub ratio_smith: f64,
    pub bound_v_mid: f64,
    pub ratio_v_mid: f64,
    pub bound_v_strong: f64,
    pub ratio_v_strong: f64,
    pub regime: Regime,
    pub error: Option<String>,
}

fn ratio_of(r: f64, bound: f64) -> f64 {
    if bound.is_finite() && bound > 0.0 {
        r.abs() / bound
    } else {
        0.0
    }
}

/// Evaluate one grid cell against a prebuilt table for its modulus.
pub fn evaluate_cell(table: &SqrtTable, x: u64, a: i64, smith_xi: f64) -> Result<SweepRecord> {
    let q = table.modulus();
    let count = counting::count_progression_with(table, x, a)?;
    let eta = table.eta(a);
    let omega = table.omega(a);
    let main = counting::main_term_with_eta(x, q, eta);
    let r = counting::remainder_from_parts(count.total, main);
    let bound_tolev = bound_tolev(x, q, a)?;
    let bound_smith = bound_smith(x, q, a, smith_xi)?;
    let bound_v_mid =
        bound_varbanets(x, q, a, VarbanetsVariant::Mid).unwrap_or(f64::INFINITY);
    let bound_v_strong =
        bound_varbanets(x, q, a, VarbanetsVariant::Strong).unwrap_or(f64::INFINITY);
    Ok(SweepRecord {
        x,
        q,
        a,
        s_total: count.total,
        quadrant: count.quadrant,
        axis: count.axis,
        origin: count.origin,
        eta,
        omega,
        main,
        r,
        bound_tolev,
        ratio_tolev: ratio_of(r, bound_tolev),
        bound_smith,
        ratio_smith: ratio_of(r, bound_smith),
        bound_v_mid,
        ratio_v_mid: ratio_of(r, bound_v_mid),
        bound_v_strong,
        ratio_v_strong: ratio_of(r, bound_v_strong),
        regime: if below_two_thirds(x, q) {
            Regime::Nontrivial
        } else {
            Regime::Trivial
        },
        error: None,
    })
}

fn mix_seed(seed: u64, x: u64, q: u64) -> u64 {
    // splitmix-style mixing so per-cell draws are independent of iteration
    // order.
    let mut z = seed
        ^ x.wrapping_mul(0x9E3779B97F4A7C15)
        ^ q.wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn q_grid(x: u64, rule: &QRule) -> Vec<u64> {
    let cap = ((x as f64).powf(2.0 / 3.0).floor() as u64).max(2);
    let mut qs = match rule {
        QRule::Explicit { values } => values.clone(),
        QRule::PowersOfTwo => {
            let mut v = Vec::new();
            let mut q = 2u64;
            while q <= cap {
                v.push(q);
                q <<= 1;
            }
            v
        }
        QRule::LogSpaced { count } => {
            let n = (*count).max(1);
            let lo = (2f64).ln();
            let hi = (cap as f64).ln();
            (0..n)
                .map(|i| {
                    let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                    (lo + t * (hi - lo)).exp().round() as u64
                })
                .map(|q| q.clamp(2, cap))
                .collect()
        }
        QRule::RandomSample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(*seed, x, 0));
            (0..*count).map(|_| rng.random_range(2..=cap)).collect()
        }
    };
    qs.sort_unstable();
    qs.dedup();
    qs
}

fn a_grid(x: u64, q: u64, rule: &ARule) -> Vec<i64> {
    let mut as_ = match rule {
        ARule::Fixed { value } => vec![*value],
        ARule::AllResidues => (0..q as i64).collect(),
        ARule::RandomSample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(*seed, x, q));
            (0..*count).map(|_| rng.random_range(0..q) as i64).collect()
        }
        ARule::ZeroOneRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(*seed, x, q));
            vec![0, 1 % q as i64, rng.random_range(0..q) as i64]
        }
    };
    as_.sort_unstable();
    as_.dedup();
    as_
}

/// Run the sweep described by `config`: one record per grid cell, sorted by
/// (x, q, a) regardless of worker scheduling. Cells that trip a guard are
/// recorded with the error column filled and the run continues. When
/// `output_path` is nonempty the records are also written there atomically.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    // Group cells by modulus so each table is built once and shared.
    let mut by_q: BTreeMap<u64, Vec<(u64, i64)>> = BTreeMap::new();
    for &x in &config.x_values {
        for q in q_grid(x, &config.q_rule) {
            let entry = by_q.entry(q).or_default();
            for a in a_grid(x, q, &config.a_rule) {
                entry.push((x, a));
            }
        }
    }
    let groups: Vec<(u64, Vec<(u64, i64)>)> = by_q.into_iter().collect();
    let records = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);
    let workers = config.workers.min(groups.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= groups.len() {
                        break;
                    }
                    let (q, cells) = &groups[i];
                    let mut out = Vec::with_capacity(cells.len());
                    match SqrtTable::build(*q) {
                        Ok(table) => {
                            for &(x, a) in cells {
                                match evaluate_cell(&table, x, a, config.smith_xi) {
                                    Ok(rec) => out.push(rec),
                                    Err(e) => out.push(error_record(x, *q, a, e.to_string())),
                                }
                            }
                        }
                        Err(e) => {
                            for &(x, a) in cells {
                                out.push(error_record(x, *q, a, e.to_string()));
                            }
                        }
                    }
                    records.lock().unwrap().extend(out);
                }
            });
        }
    });
    let mut records = records.into_inner().unwrap();
    records.sort_unstable_by_key(|r| (r.x, r.q, r.a));
    if !config.output_path.is_empty() {
        write_csv(&config.output_path, &records)
            .map_err(|e| Error::Domain(format!("csv write failed: {e}")))?;
    }
    Ok(records)
}

fn error_record(x: u64, q: u64, a: i64, message: String) -> SweepRecord {
    SweepRecord {
        x,
        q,
        a,
        s_total: 0,
        quadrant: 0,
        axis: 0,
        origin: 0,
        eta: 0,
        omega: 0,
        main: 0.0,
        r: 0.0,
        bound_tolev: f64::INFINITY,
        ratio_tolev: 0.0,
        bound_smith: f64::INFINITY,
        ratio_smith: 0.0,
        bound_v_mid: f64::INFINITY,
        ratio_v_mid: 0.0,
        bound_v_strong: f64::INFINITY,
        ratio_v_strong: 0.0,
        regime: if below_two_thirds(x, q) {
            Regime::Nontrivial
        } else {
            Regime::Trivial
        },
        error: Some(message),
    }
}

pub const CSV_HEADER: &str = "x,q,a,s_total,quadrant,axis,origin,eta,omega,main,r,bound_tolev,ratio_tolev,bound_smith,ratio_smith,bound_v_mid,ratio_v_mid,bound_v_strong,ratio_v_strong,regime,error";

fn fmt_bound(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new() // inapplicable sentinel: empty field
    }
}

fn record_to_line(r: &SweepRecord) -> String {
    let mut line = String::new();
    let _ = write!(
        line,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.x,
        r.q,
        r.a,
        r.s_total,
        r.quadrant,
        r.axis,
        r.origin,
        r.eta,
        r.omega,
        r.main,
        r.r,
        fmt_bound(r.bound_tolev),
        r.ratio_tolev,
        fmt_bound(r.bound_smith),
        r.ratio_smith,
        fmt_bound(r.bound_v_mid),
        r.ratio_v_mid,
        fmt_bound(r.bound_v_strong),
        r.ratio_v_strong,
        r.regime,
        r.error.as_deref().unwrap_or(""),
    );
    line
}

/// Write records as CSV via a temp file in the same directory plus an
/// atomic rename, so interrupted runs never leave a truncated file.
pub fn write_csv(path: &str, records: &[SweepRecord]) -> std::io::Result<()> {
    let target = std::path::Path::new(path);
    let dir = target.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            target.file_name().unwrap_or_default().to_string_lossy()
        )),
        None => std::path::PathBuf::from(format!(".{path}.tmp")),
    };
    {
        let mut file = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        writeln!(file, "{CSV_HEADER}")?;
        for r in records {
            writeln!(file, "{}", record_to_line(r))?;
        }
        file.flush()?;
    }
    std::fs::rename(&tmp, target)
}

/// Parse a CSV produced by [`write_csv`].
pub fn read_csv(path: &str) -> Result<Vec<SweepRecord>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {path}: {e}")))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(Error::Domain(format!("{path} is not a sweep CSV"))),
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.splitn(21, ',').collect();
        if fields.len() != 21 {
            return Err(Error::Domain(format!("{path}:{}: malformed row", i + 2)));
        }
        let bound = |s: &str| -> f64 {
            if s.is_empty() {
                f64::INFINITY
            } else {
                s.parse().unwrap_or(f64::NAN)
            }
        };
        let num = |s: &str| -> f64 { s.parse().unwrap_or(f64::NAN) };
        records.push(SweepRecord {
            x: fields[0].parse().map_err(|_| Error::Domain("bad x".into()))?,
            q: fields[1].parse().map_err(|_| Error::Domain("bad q".into()))?,
            a: fields[2].parse().map_err(|_| Error::Domain("bad a".into()))?,
            s_total: fields[3].parse().unwrap_or(0),
            quadrant: fields[4].parse().unwrap_or(0),
            axis: fields[5].parse().unwrap_or(0),
            origin: fields[6].parse().unwrap_or(0),
            eta: fields[7].parse().unwrap_or(0),
            omega: fields[8].parse().unwrap_or(0),
            main: num(fields[9]),
            r: num(fields[10]),
            bound_tolev: bound(fields[11]),
            ratio_tolev: num(fields[12]),
            bound_smith: bound(fields[13]),
            ratio_smith: num(fields[14]),
            bound_v_mid: bound(fields[15]),
            ratio_v_mid: num(fields[16]),
            bound_v_strong: bound(fields[17]),
            ratio_v_strong: num(fields[18]),
            regime: if fields[19] == "trivial" {
                Regime::Trivial
            } else {
                Regime::Nontrivial
            },
            error: if fields[20].is_empty() {
                None
            } else {
                Some(fields[20].to_string())
            },
        });
    }
    Ok(records)
}

/// Summary row for one bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSummary {
    pub name: &'static str,
    pub applicable_cells: usize,
    pub max_ratio: f64,
    pub argmax: Option<(u64, u64, i64)>,
    /// max ratio per decade ⌊log10 x⌋.
    pub per_decade_max: BTreeMap<u32, f64>,
}

/// Max-ratio and applicability summary across a record set.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsReport {
    pub bounds: Vec<BoundSummary>,
    pub cells: usize,
    pub errored_cells: usize,
}

/// Per bound: max ratio, argmax cell, per-decade maxima and applicability
/// counts.
pub fn report_constants(records: &[SweepRecord]) -> Result<ConstantsReport> {
    if records.is_empty() {
        return Err(Error::EmptyInput("report_constants needs records"));
    }
    type Extractor = fn(&SweepRecord) -> (f64, f64);
    let extract: [(&'static str, Extractor); 4] = [
        ("tolev", |r| (r.bound_tolev, r.ratio_tolev)),
        ("smith", |r| (r.bound_smith, r.ratio_smith)),
        ("v_mid", |r| (r.bound_v_mid, r.ratio_v_mid)),
        ("v_strong", |r| (r.bound_v_strong, r.ratio_v_strong)),
    ];
    let mut bounds = Vec::new();
    for (name, f) in extract {
        let mut summary = BoundSummary {
            name,
            applicable_cells: 0,
            max_ratio: 0.0,
            argmax: None,
            per_decade_max: BTreeMap::new(),
        };
        for rec in records.iter().filter(|r| r.error.is_none()) {
            let (bound, ratio) = f(rec);
            if !bound.is_finite() {
                continue;
            }
            summary.applicable_cells += 1;
            let decade = (rec.x as f64).log10().floor() as u32;
            let slot = summary.per_decade_max.entry(decade).or_insert(0.0);
            *slot = slot.max(ratio);
            if ratio > summary.max_ratio {
                summary.max_ratio = ratio;
                summary.argmax = Some((rec.x, rec.q, rec.a));
            }
        }
        bounds.push(summary);
    }
    Ok(ConstantsReport {
        bounds,
        cells: records.len(),
        errored_cells: records.iter().filter(|r| r.error.is_some()).count(),
    })
}

impl std::fmt::Display for ConstantsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "cells: {} ({} errored)", self.cells, self.errored_cells)?;
        for b in &self.bounds {
            write!(
                f,
                "{:<9} applicable {:>6}  max ratio {}",
                b.name, b.applicable_cells, b.max_ratio
            )?;
            if let Some((x, q, a)) = b.argmax {
                write!(f, " at (x={x}, q={q}, a={a})")?;
            }
            writeln!(f)?;
            for (decade, m) in &b.per_decade_max {
                writeln!(f, "  decade 1e{decade}: max ratio {m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolev_examples() {
        let v = bound_tolev(1_000_000, 100, 1).unwrap();
        let expect = 110.0 * 6561.0 * (1e6f64.ln()).powi(4);
        assert!((v - expect).abs() < 1e-6 * expect);
        assert!((v - 2.6302e10).abs() < 1e-3 * v);

        let v = bound_tolev(1_000_000, 1, 0).unwrap();
        let expect = 101.0 * (1e6f64.ln()).powi(4);
        assert!((v - expect).abs() < 1e-9 * expect);
        assert!((v - 3.6806e6).abs() < 1e-3 * v);

        let v = bound_tolev(20, 1, 0).unwrap();
        let expect = (1.0 + 20f64.cbrt()) * (20f64.ln()).powi(4);
        assert!((v - expect).abs() < 1e-12 * expect);

        assert!(matches!(bound_tolev(2, 5, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn smith_examples() {
        let v = bound_smith(1_000_000, 100, 1, 0.1).unwrap();
        assert!((v - 1.7950e4).abs() < 1e-3 * v, "v={v}");

        let v = bound_smith(12345, 1, 0, 0.2).unwrap();
        assert!((v - (12345f64).powf(2.0 / 3.0 + 0.2)).abs() < 1e-9 * v);

        assert!(matches!(
            bound_smith(100, 3, 1, 1.0 / 3.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(bound_smith(100, 3, 1, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn varbanets_examples() {
        let v = bound_varbanets(1_000_000, 10_000, 1, VarbanetsVariant::Mid).unwrap();
        let expect = 200.0 * (1e6f64.ln()).powi(4);
        assert!((v - expect).abs() < 1e-9 * expect);
        assert!((v - 7.2883e6).abs() < 1e-3 * v);

        // q below x^{1/2}.
        assert_eq!(bound_varbanets(1_000_000, 10, 1, VarbanetsVariant::Mid), None);
        // a not ≡ 1.
        assert_eq!(
            bound_varbanets(1_000_000, 10_000, 3, VarbanetsVariant::Mid),
            None
        );

        // 2^16 > 10^6 ^ {2/3}: the strong bound's range condition fails.
        assert_eq!(
            bound_varbanets(1_000_000, 1 << 16, 1, VarbanetsVariant::Strong),
            None
        );
        // Same modulus inside range: radical 2, q^{1/4} = 16 > 2.
        let q = 1u64 << 16;
        let v = bound_varbanets(1_000_000_000, q, 1, VarbanetsVariant::Strong).unwrap();
        let expect =
            (256.0 + (1e9f64).sqrt() / 256.0 * 2.0) * (1e9f64.ln()).powi(4);
        assert!((v - expect).abs() < 1e-9 * expect);
        // Squarefree q: radical⁴ ≥ q.
        assert_eq!(
            bound_varbanets(1_000_000_000, 30030, 1, VarbanetsVariant::Strong),
            None
        );
    }

    #[test]
    fn dominance_reduces_to_skeletons() {
        // Applicable and in range: must hold.
        assert_eq!(dominance_mid_holds(10_000_000, 10_000, 1), Some(true));
        // Mid bound inapplicable.
        assert_eq!(dominance_mid_holds(10_000_000, 10, 1), None);
    }

    #[test]
    fn sweep_single_cell_and_determinism() {
        let dir = std::env::temp_dir().join("apcircle-bounds-test");
        std::fs::create_dir_all(&dir).unwrap();
        let csv = dir.join("single.csv");
        let config = SweepConfig {
            x_values: vec![10_000],
            q_rule: QRule::Explicit { values: vec![1] },
            a_rule: ARule::Fixed { value: 0 },
            smith_xi: 0.1,
            workers: 1,
            output_path: csv.to_string_lossy().into_owned(),
        };
        let records = run_sweep(&config).unwrap();
        assert_eq!(records.len(), 1);
        let rec = &records[0];
        let brute = counting::count_brute(10_000, 1, 0).unwrap();
        assert_eq!(rec.s_total, brute.total);
        assert!((rec.ratio_tolev - rec.r.abs() / rec.bound_tolev).abs() < 1e-15);

        // Reread and recompute: byte-identical determinism.
        let reread = read_csv(&config.output_path).unwrap();
        assert_eq!(reread, records);
        let again = run_sweep(&config).unwrap();
        assert_eq!(again, records);
        std::fs::remove_file(&config.output_path).unwrap();
    }

    #[test]
    fn sweep_empty_and_trivial_regime() {
        let config = SweepConfig {
            x_values: vec![],
            q_rule: QRule::PowersOfTwo,
            a_rule: ARule::Fixed { value: 0 },
            smith_xi: 0.1,
            workers: 2,
            output_path: String::new(),
        };
        assert!(run_sweep(&config).unwrap().is_empty());

        // q above x^{2/3} still produces a record, flagged trivial.
        let config = SweepConfig {
            x_values: vec![100],
            q_rule: QRule::Explicit { values: vec![50] },
            a_rule: ARule::Fixed { value: 1 },
            smith_xi: 0.1,
            workers: 1,
            output_path: String::new(),
        };
        let recs = run_sweep(&config).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].regime, Regime::Trivial);
        assert!(recs[0].error.is_none());
    }

    #[test]
    fn sweep_parallel_matches_serial() {
        let mk = |workers| SweepConfig {
            x_values: vec![1000, 5000],
            q_rule: QRule::LogSpaced { count: 5 },
            a_rule: ARule::ZeroOneRandom { seed: 7 },
            smith_xi: 0.15,
            workers,
            output_path: String::new(),
        };
        assert_eq!(run_sweep(&mk(1)).unwrap(), run_sweep(&mk(4)).unwrap());
    }

    #[test]
    fn constants_report_echoes_single_record() {
        let rec = evaluate_cell(&SqrtTable::build(7).unwrap(), 5000, 3, 0.1).unwrap();
        let report = report_constants(std::slice::from_ref(&rec)).unwrap();
        assert_eq!(report.bounds[0].max_ratio, rec.ratio_tolev);
        assert_eq!(report.bounds[0].argmax, Some((rec.x, rec.q, rec.a)));
        assert_eq!(report.bounds[1].max_ratio, rec.ratio_smith);
    }

    #[test]
    fn constants_report_groups_by_decade() {
        let config = SweepConfig {
            x_values: vec![100, 1000, 10_000],
            q_rule: QRule::Explicit { values: vec![4] },
            a_rule: ARule::Fixed { value: 1 },
            smith_xi: 0.1,
            workers: 1,
            output_path: String::new(),
        };
        let records = run_sweep(&config).unwrap();
        let report = report_constants(&records).unwrap();
        let tolev = &report.bounds[0];
        assert_eq!(tolev.per_decade_max.len(), 3);
        assert_eq!(tolev.applicable_cells, 3);
        // All Varbanets-mid cells inapplicable here (a = 1 but q < √x).
        let mid = &report.bounds[2];
        assert_eq!(mid.applicable_cells, 0);
        assert_eq!(mid.max_ratio, 0.0);

        assert!(matches!(report_constants(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn csv_round_trip_with_error_rows() {
        let recs = vec![
            error_record(10, 3, 1, "boom, with comma? no: semicolons".replace(',', ";")),
            evaluate_cell(&SqrtTable::build(5).unwrap(), 100, 2, 0.1).unwrap(),
        ];
        let dir = std::env::temp_dir().join("apcircle-bounds-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("round.csv").to_string_lossy().into_owned();
        write_csv(&path, &recs).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back, recs);
        std::fs::remove_file(&path).unwrap();
    }
}
