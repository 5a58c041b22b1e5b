//! Cost measurements on generated lists.

use banana::generators::Family;
use banana::{EditOutcome, Workspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Workload {
    ValueJitter,
    InsertDelete,
    CutGlue,
}

impl Workload {
    pub const ALL: [Workload; 3] = [Workload::ValueJitter, Workload::InsertDelete, Workload::CutGlue];

    pub fn name(self) -> &'static str {
        match self {
            Workload::ValueJitter => "value-jitter",
            Workload::InsertDelete => "insert-delete",
            Workload::CutGlue => "cut-glue",
        }
    }

    pub fn from_name(s: &str) -> Option<Workload> {
        Workload::ALL.into_iter().find(|w| w.name() == s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OpRecord {
    pub op: &'static str,
    /// Items in the list the operation started from.
    pub n: usize,
    pub k: usize,
    pub kprime: u64,
    /// Primitives applied on the way, a proxy for the change accumulated
    /// over intermediate states rather than the net `k`.
    pub primitives: usize,
    pub nodes_visited: u64,
}

impl OpRecord {
    /// `nodes_visited / (log2 n + k + 1)`.
    pub fn ratio(&self) -> f64 {
        self.nodes_visited as f64 / ((self.n.max(2) as f64).log2() + self.k as f64 + 1.0)
    }

    /// The same with the accumulated change and `k'` in the denominator.
    pub fn accumulated_ratio(&self) -> f64 {
        let change = self.k.max(self.primitives) as f64 + self.kprime as f64;
        self.nodes_visited as f64 / ((self.n.max(2) as f64).log2() + change + 1.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub generator: &'static str,
    pub n: usize,
    pub workload: &'static str,
    pub seed: u64,
    pub build_nodes_visited: u64,
    pub fitted_ratio: f64,
    pub mean_ratio: f64,
    pub fitted_accumulated_ratio: f64,
    pub max_nodes_over_log_n: f64,
    pub ops: Vec<OpRecord>,
}

pub struct BenchConfig {
    pub generator: String,
    pub n: usize,
    pub workload: String,
    pub ops: usize,
    pub seed: u64,
}

fn record(op: &'static str, n: usize, out: &EditOutcome) -> OpRecord {
    OpRecord {
        op,
        n,
        k: out.k,
        kprime: out.kprime,
        primitives: out.primitives.len(),
        nodes_visited: out.counters.nodes_visited,
    }
}

pub fn run(cfg: &BenchConfig) -> Result<Report, CliError> {
    let family = Family::from_name(&cfg.generator).ok_or_else(|| {
        let known: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!("unknown generator {:?}; expected one of {}", cfg.generator, known.join(", ")))
    })?;
    let workload = Workload::from_name(&cfg.workload).ok_or_else(|| {
        let known: Vec<_> = Workload::ALL.iter().map(|w| w.name()).collect();
        CliError::Usage(format!("unknown workload {:?}; expected one of {}", cfg.workload, known.join(", ")))
    })?;
    let n = cfg.n;
    if n < 2 || (workload == Workload::CutGlue && n < 4) {
        return Err(CliError::Size { what: format!("{} workload", workload.name()), got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let values = family.generate(n, &mut rng);
    let mut ws = Workspace::new();
    let l = ws.build(&values).map_err(|e| CliError::Usage(e.to_string()))?;
    let build_nodes_visited = ws.counters().nodes_visited;
    let fail = |e: banana::BananaError| CliError::Usage(e.to_string());

    let mut ops = Vec::with_capacity(cfg.ops);
    match workload {
        Workload::ValueJitter => {
            // Below a quarter of the smallest gap, no two values swap order.
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            let gap = sorted.windows(2).map(|w| w[1] - w[0]).filter(|&g| g > 0.0).fold(f64::INFINITY, f64::min);
            let delta = if gap.is_finite() { gap / 4.0 } else { 1e-9 };
            let items: Vec<_> = (1..=n).map(|p| ws.item_at(l, p)).collect::<Result<_, _>>().map_err(fail)?;
            for _ in 0..cfg.ops {
                let p = rng.gen_range(0..n);
                let v = values[p] + rng.gen_range(-delta..delta);
                ops.push(record("set", n, &ws.change_value(items[p], v).map_err(fail)?));
            }
        }
        Workload::InsertDelete => {
            let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            let span = if hi > lo { hi - lo } else { 1.0 };
            for i in 0..cfg.ops {
                let len = ws.len(l);
                if i % 2 == 0 {
                    let v = lo + span * rng.gen_range(0.0..1.0);
                    let (_, out) = ws.insert_item(l, rng.gen_range(0..=len), v).map_err(fail)?;
                    ops.push(record("insert", len, &out));
                } else {
                    let item = ws.item_at(l, rng.gen_range(1..=len)).map_err(fail)?;
                    ops.push(record("delete", len, &ws.delete_item(item).map_err(fail)?));
                }
            }
        }
        Workload::CutGlue => {
            // The damped sine is cut near its origin, where the spine is longest.
            let near_origin = family == Family::DampedSine;
            let hi = if near_origin { (n - 2).min(8) } else { n - 2 };
            let mut list = l;
            for _ in 0..cfg.ops.div_ceil(2) {
                let after = rng.gen_range(2..=hi);
                let (g, h, cut) = ws.cut(list, after).map_err(fail)?;
                ops.push(record("cut", n, &cut));
                let (f, glue) = ws.concatenate(g, h).map_err(fail)?;
                ops.push(record("glue", n, &glue));
                list = f;
            }
        }
    }

    let logn = (n as f64).log2();
    let fitted_ratio = ops.iter().map(OpRecord::ratio).fold(0.0, f64::max);
    let mean_ratio = if ops.is_empty() { 0.0 } else { ops.iter().map(OpRecord::ratio).sum::<f64>() / ops.len() as f64 };
    let fitted_accumulated_ratio = ops.iter().map(OpRecord::accumulated_ratio).fold(0.0, f64::max);
    let max_nodes_over_log_n = ops.iter().map(|o| o.nodes_visited as f64 / logn).fold(0.0, f64::max);
    Ok(Report {
        generator: family.name(),
        n,
        workload: workload.name(),
        seed: cfg.seed,
        build_nodes_visited,
        fitted_ratio,
        mean_ratio,
        fitted_accumulated_ratio,
        max_nodes_over_log_n,
        ops,
    })
}
