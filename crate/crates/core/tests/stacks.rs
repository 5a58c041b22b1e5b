use std::collections::HashSet;

use banana::oracle::{naive_cut_effects, CutEffect};
use banana::{CutSide, NodeLabel, Polarity, Workspace};
use itertools::Itertools;

fn check(values: &[f64], after: usize) -> Result<(), String> {
    let mut ws = Workspace::new();
    let l = ws.build(values).unwrap();
    let st = ws.split_stacks(l, after).unwrap();
    let eff = naive_cut_effects(&ws, l, after);
    for pol in Polarity::BOTH {
        let want_scares: HashSet<(NodeLabel, NodeLabel)> =
            eff.iter().filter(|w| w.tree == pol && w.effect == CutEffect::Scare).map(|w| (w.low, w.high)).collect();
        let got_scares: HashSet<(NodeLabel, NodeLabel)> =
            st.scares[pol.idx()].iter().flatten().map(|b| (b.low, b.high)).collect();
        if want_scares != got_scares {
            return Err(format!("{pol:?} scares: want {want_scares:?} got {got_scares:?}"));
        }
        let cut: Vec<_> = eff.iter().filter(|w| w.tree == pol && w.effect != CutEffect::Scare).collect();
        let mut stacked = HashSet::new();
        for side in CutSide::ALL {
            for b in st.get(pol, side) {
                stacked.insert((b.low, b.high));
                let w = cut.iter().find(|w| (w.low, w.high) == (b.low, b.high));
                let ok = matches!(
                    (w.map(|w| w.effect), side),
                    (Some(CutEffect::Fatality), CutSide::Middle)
                        | (Some(CutEffect::Injury), CutSide::Left | CutSide::Right)
                );
                if !ok {
                    return Err(format!("{pol:?} stacked {b:?} on {side:?} classified {:?}", w.map(|w| w.effect)));
                }
            }
        }
        // Windows above the last push keep their pairing.
        let top = top_high(&st, pol);
        for w in cut {
            if !stacked.contains(&(w.low, w.high)) && w.high_height <= top {
                return Err(format!("{pol:?} missing {w:?}"));
            }
        }
    }
    Ok(())
}

fn top_high(st: &banana::SplitStacks, pol: Polarity) -> banana::Height {
    CutSide::ALL.iter().flat_map(|&s| st.get(pol, s)).map(|b| b.high_height).max().unwrap()
}

#[test]
fn stacks_match_brute_force_on_permutations() {
    for n in 4..=8 {
        for perm in (0..n).permutations(n) {
            let values: Vec<f64> = perm.iter().map(|&x| x as f64).collect();
            for after in 2..=n - 2 {
                if let Err(e) = check(&values, after) {
                    panic!("{values:?} after {after}: {e}");
                }
            }
        }
    }
}
