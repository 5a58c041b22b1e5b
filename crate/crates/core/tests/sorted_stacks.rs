use std::collections::{HashMap, HashSet};

use banana::oracle::{naive_cut_effects, Wave};
use banana::{CutSide, NodeLabel, Polarity, SplitStacks, StackedBanana, Workspace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Pair = (NodeLabel, NodeLabel);

fn unordered(b: &StackedBanana) -> Pair {
    if b.low <= b.high {
        (b.low, b.high)
    } else {
        (b.high, b.low)
    }
}

struct Values {
    of: HashMap<u64, f64>,
    min: f64,
    max: f64,
}

/// The interval of values spanned by a banana, read in the orientation of
/// the list. Both special bananas span the global window; hooks sit at the
/// infinity of their tree.
fn interval(b: &StackedBanana, pol: Polarity, value: &Values) -> (f64, f64) {
    let v = |l: NodeLabel| match l {
        NodeLabel::Item(k) => value.of[&k],
        NodeLabel::Root if pol == Polarity::Up => value.max,
        NodeLabel::Root => value.min,
        _ if pol == Polarity::Up => f64::INFINITY,
        _ => f64::NEG_INFINITY,
    };
    let (a, b) = (v(b.low), v(b.high));
    (a.min(b), a.max(b))
}

fn sorted(stack: &[StackedBanana]) -> bool {
    stack.first().is_none_or(|b| b.low_height < b.high_height)
        && stack.windows(2).all(|w| w[1].low_height < w[0].low_height && w[0].high_height < w[1].high_height)
}

/// Whether the given stacks, with shared bananas counted once, form one
/// chain of nested intervals. An up banana and a down banana may share an
/// end item, so containment here is weak; strictness within one tree is
/// covered by the sortedness clause.
fn mergeable(parts: &[(Polarity, &[StackedBanana])], value: &Values) -> bool {
    let mut seen = HashSet::new();
    let mut iv: Vec<(f64, f64)> = Vec::new();
    for &(pol, stack) in parts {
        for b in stack {
            if seen.insert(unordered(b)) {
                iv.push(interval(b, pol, value));
            }
        }
    }
    iv.sort_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)));
    iv.windows(2).all(|w| w[1].0 <= w[0].0 && w[0].1 <= w[1].1)
}

fn check(ws: &mut Workspace, l: banana::ListId, after: usize) -> Result<(), String> {
    let of: HashMap<u64, f64> = ws.samples(l).into_iter().map(|s| (s.key, s.value)).collect();
    let min = of.values().copied().fold(f64::INFINITY, f64::min);
    let max = of.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let value = Values { of, min, max };
    let st: SplitStacks = ws.split_stacks(l, after).map_err(|e| e.to_string())?;
    let effects = naive_cut_effects(ws, l, after);
    let up = |s| st.get(Polarity::Up, s);
    let dn = |s| st.get(Polarity::Down, s);

    for pol in Polarity::BOTH {
        for side in CutSide::ALL {
            if !sorted(st.get(pol, side)) {
                return Err(format!("(i) {pol:?} {side:?} unsorted: {:?}", st.get(pol, side)));
            }
        }
    }

    for pol in Polarity::BOTH {
        let sig = ws.signature(l, pol);
        let all: Vec<&StackedBanana> = CutSide::ALL.iter().flat_map(|&s| st.get(pol, s)).collect();
        let Some(last) = all.iter().max_by(|a, b| a.high_height.cmp(&b.high_height)) else { continue };
        if sig[&last.high].1 == 0 {
            return Err(format!("(ii) {pol:?} last push {last:?} not on the spine"));
        }
        for b in all.iter().filter(|b| b.high != last.high) {
            let wave = effects.iter().find(|w| w.tree == pol && (w.low, w.high) == (b.low, b.high)).map(|w| w.wave);
            if wave != Some(Wave::Simple) {
                return Err(format!("(ii) {pol:?} {b:?} has wave {wave:?}"));
            }
        }
    }

    let simple_mid = |pol: Polarity| -> HashSet<Pair> {
        st.get(pol, CutSide::Middle)
            .iter()
            .filter(|b| {
                effects.iter().any(|w| w.tree == pol && (w.low, w.high) == (b.low, b.high) && w.wave == Wave::Simple)
            })
            .map(unordered)
            .collect()
    };
    if simple_mid(Polarity::Up) != simple_mid(Polarity::Down) {
        return Err(format!("(iii) middle stacks differ: {st:?}"));
    }

    let (u, d) = (Polarity::Up, Polarity::Down);
    let triplets: [[(Polarity, &[StackedBanana]); 3]; 4] = [
        [(u, up(CutSide::Left)), (u, up(CutSide::Middle)), (d, dn(CutSide::Left))],
        [(u, up(CutSide::Right)), (u, up(CutSide::Middle)), (d, dn(CutSide::Right))],
        [(u, up(CutSide::Left)), (u, up(CutSide::Middle)), (u, up(CutSide::Right))],
        [(d, dn(CutSide::Left)), (d, dn(CutSide::Middle)), (d, dn(CutSide::Right))],
    ];
    for (i, t) in triplets.iter().enumerate() {
        if !mergeable(t, &value) {
            return Err(format!("(iv) triplet {i} does not merge: {st:?}"));
        }
    }
    Ok(())
}

#[test]
fn stacks_satisfy_all_four_clauses_on_random_cuts() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut checked = 0;
    while checked < 10_000 {
        let n = rng.gen_range(5..120);
        let mut values: Vec<f64> = (0..n).map(|i| i as f64).collect();
        values.shuffle(&mut rng);
        let mut ws = Workspace::new();
        let l = ws.build(&values).unwrap();
        for _ in 0..10 {
            let after = rng.gen_range(2..=n - 2);
            if let Err(e) = check(&mut ws, l, after) {
                panic!("{values:?} after {after}: {e}");
            }
            checked += 1;
        }
    }
}
