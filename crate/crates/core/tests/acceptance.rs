//! The eight acceptance criteria, each reported on its own line.

use banana::generators::{damped_sine, random_walk};
use banana::oracle::{matches_rebuild, naive_cut_effects, naive_diagram, signatures, Wave};
use banana::{diff, CutSide, Diagram, EditOutcome, ListId, NodeLabel, Polarity, StackedBanana, Subdiagram, Workspace};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap, HashSet};

type Verdict = Result<String, String>;

/// Cost bound constants fixed ahead of measurement.
const UPDATE_C: f64 = 24.0;
const BUILD_C: f64 = 24.0;
const CUT_C: f64 = 8.0;

fn permutations(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (1..=n).permutations(n).map(|p| p.into_iter().map(|x| x as f64).collect())
}

fn canonical(ws: &Workspace, l: ListId) -> Result<(), String> {
    let v = ws.validate(l);
    if !v.is_empty() {
        return Err(format!("{} violations, first: {}", v.len(), v[0]));
    }
    if !matches_rebuild(ws, l) {
        return Err("differs from rebuild".into());
    }
    Ok(())
}

fn oracle_equivalence() -> Verdict {
    let mut lists = 0;
    for n in 2..=8 {
        for values in permutations(n) {
            let mut ws = Workspace::new();
            let l = ws.build(&values).map_err(|e| e.to_string())?;
            let want = naive_diagram(&ws.samples(l));
            let got = ws.diagram(l);
            if diff(&got, &want) != 0 || got != want {
                return Err(format!("{values:?}: diagram differs from oracle"));
            }
            lists += 1;
        }
    }
    Ok(format!("{lists} permutations, n <= 8"))
}

/// One randomized edit suite: per-op cost ratios plus canonicality checks.
struct Suite {
    steps: usize,
    worst_ratio: f64,
    max_len: usize,
    coupling: (u64, u64),
}

fn ratio(out: &EditOutcome, n: usize) -> f64 {
    let bound = (n.max(2) as f64).log2() + out.k as f64 + out.kprime as f64 + 1.0;
    out.counters.nodes_visited as f64 / bound
}

fn edit_suite(seed: u64, steps: usize) -> Result<Suite, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ws = Workspace::new();
    let l = ws.build(&[rng.gen(), rng.gen()]).unwrap();
    let mut s = Suite { steps: 0, worst_ratio: 0.0, max_len: 0, coupling: (0, 0) };
    for step in 0..steps {
        let len = ws.len(l);
        let roll = rng.gen_range(0.0..1.0);
        let out = if len < 256 && roll < 0.45 {
            let (_, out) = ws.insert_item(l, rng.gen_range(0..=len), rng.gen()).map_err(|e| e.to_string())?;
            out
        } else if len > 2 && roll < 0.65 {
            let item = ws.item_at(l, rng.gen_range(1..=len)).unwrap();
            ws.delete_item(item).map_err(|e| e.to_string())?
        } else {
            let item = ws.item_at(l, rng.gen_range(1..=len)).unwrap();
            ws.change_value(item, rng.gen()).map_err(|e| e.to_string())?
        };
        canonical(&ws, l).map_err(|e| format!("seed {seed} step {step}: {e}"))?;
        s.worst_ratio = s.worst_ratio.max(ratio(&out, len));
        s.max_len = s.max_len.max(ws.len(l));
        s.steps += 1;
    }
    s.coupling = ws.coupling_stats();
    Ok(s)
}

fn suites() -> Result<Vec<Suite>, String> {
    (0..2).map(|seed| edit_suite(seed, 10_000)).collect()
}

fn canonicality(suites: &[Suite]) -> Verdict {
    let steps: usize = suites.iter().map(|s| s.steps).sum();
    let len = suites.iter().map(|s| s.max_len).max().unwrap_or(0);
    if len < 256 {
        return Err(format!("lists only grew to {len}"));
    }
    Ok(format!("{steps} steps, lists up to {len} items, zero violations"))
}

fn roundtrip() -> Verdict {
    let mut cuts = 0;
    for values in permutations(7) {
        for after in 2..=5 {
            let mut ws = Workspace::new();
            let l = ws.build(&values).unwrap();
            let before = signatures(&ws, l);
            let (g, h, _) = ws.cut(l, after).map_err(|e| e.to_string())?;
            for part in [g, h] {
                canonical(&ws, part).map_err(|e| format!("{values:?} cut after {after}: {e}"))?;
            }
            let (f, _) = ws.concatenate(g, h).map_err(|e| e.to_string())?;
            if ws.values(f) != values || signatures(&ws, f) != before {
                return Err(format!("{values:?} cut after {after}: glue is not the original"));
            }
            cuts += 1;
        }
    }
    Ok(format!("{cuts} cut/glue roundtrips over all permutations of 7"))
}

fn construction_linearity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pts = Vec::new();
    for e in 10..=18 {
        let m = 1usize << e;
        let values = random_walk(m, &mut rng);
        let mut ws = Workspace::new();
        ws.reset_counters();
        ws.build(&values).unwrap();
        pts.push((m as f64, ws.counters().nodes_visited as f64));
    }
    let c = pts.iter().map(|(m, t)| t / m).fold(0.0, f64::max);
    let (lx, ly): (Vec<f64>, Vec<f64>) = pts.iter().map(|(m, t)| (m.ln(), t.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / lx.len() as f64, ly.iter().sum::<f64>() / ly.len() as f64);
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let detail = format!("touches <= {c:.2} m, log-log slope {slope:.4}");
    if c <= BUILD_C && (slope - 1.0).abs() <= 0.05 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn update_cost(suites: &[Suite]) -> Verdict {
    let worst = suites.iter().map(|s| s.worst_ratio).fold(0.0, f64::max);
    if worst > UPDATE_C {
        return Err(format!("nodes_visited reached {worst:.2} (log n + k + k' + 1)"));
    }
    // Jitter below the smallest gap keeps the order, so no pairing or
    // arrow may change; only the coordinates of the jittered item move.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 1 << 14;
    let mut values: Vec<f64> = (0..n).map(|i| i as f64).collect();
    values.shuffle(&mut rng);
    let mut ws = Workspace::new();
    let l = ws.build(&values).unwrap();
    let items: Vec<_> = (1..=n).map(|p| ws.item_at(l, p).unwrap()).collect();
    let before = structure(&ws.diagram(l));
    let mut jitter_worst = 0.0f64;
    for _ in 0..2000 {
        let p = rng.gen_range(0..n);
        let v = values[p] + rng.gen_range(-0.25..0.25);
        let out = ws.change_value(items[p], v).unwrap();
        if structure(&ws.diagram(l)) != before {
            return Err(format!("jitter at position {} changed the pairing", p + 1));
        }
        jitter_worst = jitter_worst.max(out.counters.nodes_visited as f64 / (n as f64).log2());
    }
    canonical(&ws, l)?;
    let detail = format!(
        "worst ratio {worst:.2} over edit suites, structure-preserving jitter costs <= {jitter_worst:.2} log n"
    );
    if jitter_worst > UPDATE_C {
        return Err(detail);
    }
    Ok(detail)
}

/// Points and arrows keyed by spanning items only.
type Structure = (BTreeSet<(u64, u64, Subdiagram)>, BTreeSet<((u64, u64), (u64, u64))>);

fn structure(d: &Diagram) -> Structure {
    let items = |i: usize| (d.points[i].birth_item, d.points[i].death_item);
    let points = d.points.iter().filter(|p| !p.from_hook).map(|p| (p.birth_item, p.death_item, p.sub)).collect();
    let arrows = d
        .arrows
        .iter()
        .filter(|a| !d.points[a.child].from_hook && !d.points[a.parent].from_hook)
        .map(|a| (items(a.child), items(a.parent)))
        .collect();
    (points, arrows)
}

fn damped_sine_cut() -> Verdict {
    // Worst cut or glue cost near the origin, per size.
    let mut worst = Vec::new();
    for e in [10, 12, 14, 16] {
        let n = 1usize << e;
        let mut ws = Workspace::new();
        let l = ws.build(&damped_sine(n)).unwrap();
        let mut w = 0u64;
        for after in 2..=8 {
            let (g, h, cut) = ws.cut(l, after).map_err(|e| e.to_string())?;
            let (f, glue) = ws.concatenate(g, h).map_err(|e| e.to_string())?;
            if f != l {
                return Err("glue did not restore the list".into());
            }
            w = w.max(cut.counters.nodes_visited).max(glue.counters.nodes_visited);
        }
        canonical(&ws, l)?;
        worst.push((e as f64, w as f64));
    }
    let (e0, w0) = worst[0];
    let (e1, w1) = worst[worst.len() - 1];
    let detail =
        format!("at n = 2^16 cut and glue visit <= {:.2} log n nodes; worst {w0} nodes at 2^10, {w1} at 2^16", w1 / e1);
    // Growth from the smallest size must stay within the logarithmic factor.
    if w1 <= CUT_C * e1 && w1 <= w0 * e1 / e0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn coupling(suites: &[Suite]) -> Verdict {
    let paired: u64 = suites.iter().map(|s| s.coupling.0).sum();
    let standalone: u64 = suites.iter().map(|s| s.coupling.1).sum();
    let detail = format!("{paired} coupled structural min-interchanges, {standalone} standalone");
    if standalone == 0 && paired > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn unordered(b: &StackedBanana) -> (NodeLabel, NodeLabel) {
    (b.low.min(b.high), b.low.max(b.high))
}

fn sorted_stacks() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = 0;
    while pairs < 10_000 {
        let n = rng.gen_range(5..120);
        let mut values: Vec<f64> = (0..n).map(|i| i as f64).collect();
        values.shuffle(&mut rng);
        let mut ws = Workspace::new();
        let l = ws.build(&values).unwrap();
        for _ in 0..10 {
            let after = rng.gen_range(2..=n - 2);
            stack_clauses(&mut ws, l, after).map_err(|e| format!("{values:?} after {after}: {e}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (list, cut) pairs, all four clauses hold"))
}

fn stack_clauses(ws: &mut Workspace, l: ListId, after: usize) -> Result<(), String> {
    let of: HashMap<u64, f64> = ws.samples(l).into_iter().map(|s| (s.key, s.value)).collect();
    let (lo, hi) = of.values().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let st = ws.split_stacks(l, after).map_err(|e| e.to_string())?;
    let effects = naive_cut_effects(ws, l, after);
    let wave = |pol: Polarity, b: &StackedBanana| {
        effects.iter().find(|w| w.tree == pol && (w.low, w.high) == (b.low, b.high)).map(|w| w.wave)
    };
    // Special bananas span the global window in both trees.
    let interval = |pol: Polarity, b: &StackedBanana| {
        let v = |x: NodeLabel| match x {
            NodeLabel::Item(k) => of[&k],
            NodeLabel::Root if pol == Polarity::Up => hi,
            NodeLabel::Root => lo,
            _ if pol == Polarity::Up => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        };
        let (a, c) = (v(b.low), v(b.high));
        (a.min(c), a.max(c))
    };

    for pol in Polarity::BOTH {
        for side in CutSide::ALL {
            let s = st.get(pol, side);
            let ok = s.first().is_none_or(|b| b.low_height < b.high_height)
                && s.windows(2).all(|w| w[1].low_height < w[0].low_height && w[0].high_height < w[1].high_height);
            if !ok {
                return Err(format!("(i) {pol:?} {side:?} stack unsorted"));
            }
        }
        let all: Vec<&StackedBanana> = CutSide::ALL.iter().flat_map(|&s| st.get(pol, s)).collect();
        if let Some(last) = all.iter().max_by_key(|b| b.high_height) {
            if ws.signature(l, pol)[&last.high].1 == 0 {
                return Err(format!("(ii) {pol:?} last push is off the spine"));
            }
            if let Some(b) = all.iter().find(|b| b.high != last.high && wave(pol, b) != Some(Wave::Simple)) {
                return Err(format!("(ii) {pol:?} {b:?} is not a simple wave"));
            }
        }
    }

    let simple_mid = |pol: Polarity| -> HashSet<_> {
        st.get(pol, CutSide::Middle).iter().filter(|b| wave(pol, b) == Some(Wave::Simple)).map(unordered).collect()
    };
    if simple_mid(Polarity::Up) != simple_mid(Polarity::Down) {
        return Err("(iii) middle stacks hold different simple waves".into());
    }

    let (u, d) = (Polarity::Up, Polarity::Down);
    let (left, mid, right) = (CutSide::Left, CutSide::Middle, CutSide::Right);
    for t in [
        [(u, left), (u, mid), (d, left)],
        [(u, right), (u, mid), (d, right)],
        [(u, left), (u, mid), (u, right)],
        [(d, left), (d, mid), (d, right)],
    ] {
        let mut seen = HashSet::new();
        let mut iv: Vec<(f64, f64)> = t
            .iter()
            .flat_map(|&(pol, side)| st.get(pol, side).iter().map(move |b| (pol, b)))
            .filter(|(_, b)| seen.insert(unordered(b)))
            .map(|(pol, b)| interval(pol, b))
            .collect();
        iv.sort_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)));
        // Up and down bananas may share an end item, so nesting is weak.
        if !iv.windows(2).all(|w| w[1].0 <= w[0].0 && w[0].1 <= w[1].1) {
            return Err(format!("(iv) stacks {t:?} do not merge"));
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let suites = suites();
    let shared = |f: fn(&[Suite]) -> Verdict| match &suites {
        Ok(s) => f(s),
        Err(e) => Err(e.clone()),
    };
    let results = [
        ("1 oracle equivalence", oracle_equivalence()),
        ("2 canonicality under edits", shared(canonicality)),
        ("3 cut/glue roundtrip", roundtrip()),
        ("4 construction linearity", construction_linearity()),
        ("5 update cost", shared(update_cost)),
        ("6 damped-sine cut cost", damped_sine_cut()),
        ("7 interchange coupling", shared(coupling)),
        ("8 sorted stacks", sorted_stacks()),
    ];
    println!();
    let mut failed = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(d) => println!("criterion {name}: PASS ({d})"),
            Err(d) => {
                println!("criterion {name}: FAIL ({d})");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
