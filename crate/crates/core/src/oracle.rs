//! Brute-force ground truth: a union-find sweep diagram, a direct window
//! enumeration, and from-scratch rebuilds for structural comparison.

use crate::diagram::{ArrowTag, Diagram, DiagramPoint, Subdiagram};
use crate::ids::ListId;
use crate::tree::{NodeLabel, TreeSignature};
use crate::value::{ExtValue, Height, Polarity};
use crate::workspace::{Sample, Workspace};

fn heights(samples: &[Sample], pol: Polarity) -> Vec<Height> {
    let h: Vec<Height> = samples.iter().map(|s| Height::item(s.value, s.key as i64).signed(pol)).collect();
    let mut sorted = h.clone();
    sorted.sort();
    assert!(sorted.windows(2).all(|w| w[0] != w[1]), "oracle needs distinct keys");
    h
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let n = self.parent[y];
            self.parent[y] = r;
            y = n;
        }
        r
    }
}

/// One sublevel sweep of `pol`-signed values: `(min, max)` pairs by the
/// elder rule, the merge parent of each pair (index into the result), and
/// the index of the global pair.
fn sweep(samples: &[Sample], pol: Polarity) -> (Vec<(usize, usize)>, Vec<Option<usize>>, usize) {
    let h = heights(samples, pol);
    let m = h.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| h[a].cmp(&h[b]));
    let mut dsu = Dsu { parent: (0..m).collect() };
    let mut seen = vec![false; m];
    // Component root -> its lowest item.
    let mut low = vec![usize::MAX; m];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // Pair index of each pair's elder at the merge, as the elder's min item.
    let mut elder_of: Vec<usize> = Vec::new();
    for &i in &order {
        seen[i] = true;
        low[i] = i;
        let nbrs: Vec<usize> = [i.wrapping_sub(1), i + 1].into_iter().filter(|&j| j < m && seen[j]).collect();
        match nbrs.as_slice() {
            [] => {}
            [j] => {
                let r = dsu.find(*j);
                let l = low[r];
                dsu.parent[i] = r;
                low[r] = l;
            }
            [j, k] => {
                let (rj, rk) = (dsu.find(*j), dsu.find(*k));
                let (lj, lk) = (low[rj], low[rk]);
                let (young, elder) = if h[lj] > h[lk] { (lj, lk) } else { (lk, lj) };
                pairs.push((young, i));
                elder_of.push(elder);
                dsu.parent[rj] = rk;
                dsu.parent[i] = rk;
                low[rk] = elder;
            }
            _ => unreachable!(),
        }
    }
    let gmin = order[0];
    let gmax = order[m - 1];
    pairs.push((gmin, gmax));
    let global = pairs.len() - 1;
    let parent = elder_of
        .iter()
        .map(|&e| Some(pairs.iter().position(|&(a, _)| a == e).expect("elder pair")))
        .chain(std::iter::once(None))
        .collect();
    (pairs, parent, global)
}

fn point(samples: &[Sample], a: usize, b: usize, sub: Subdiagram) -> DiagramPoint {
    DiagramPoint {
        birth: ExtValue::finite(samples[a].value).unwrap(),
        death: ExtValue::finite(samples[b].value).unwrap(),
        sub,
        birth_item: samples[a].key,
        death_item: samples[b].key,
        from_hook: false,
    }
}

/// The augmented persistence diagram of the hook-free map by two sweeps.
pub fn naive_diagram(samples: &[Sample]) -> Diagram {
    assert!(samples.len() >= 2, "oracle needs two samples");
    let mut points = Vec::new();
    let mut arrows = Vec::new();
    let (up, up_parent, up_global) = sweep(samples, Polarity::Up);
    for (k, &(a, b)) in up.iter().enumerate() {
        let sub = if k == up_global { Subdiagram::Essential } else { Subdiagram::Ordinary };
        points.push(point(samples, a, b, sub));
    }
    for (k, p) in up_parent.iter().enumerate() {
        if let Some(p) = p {
            arrows.push((k, *p, ArrowTag::Up));
        }
    }
    let off = points.len();
    let (dn, dn_parent, dn_global) = sweep(samples, Polarity::Down);
    let mut index = vec![usize::MAX; dn.len()];
    for (k, &(a, b)) in dn.iter().enumerate() {
        if k != dn_global {
            index[k] = points.len();
            points.push(point(samples, a, b, Subdiagram::Relative));
        }
    }
    let _ = off;
    for (k, p) in dn_parent.iter().enumerate() {
        if let Some(p) = p {
            if *p != dn_global {
                arrows.push((index[k], index[*p], ArrowTag::Down));
            }
        }
    }
    Diagram::assemble(points, arrows, false)
}

/// Shape of the wave of a window. A short wave runs into the end of the
/// list, on the named side, before climbing back to its maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wave {
    Simple,
    ShortLeft,
    ShortRight,
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    LeftToRight,
    RightToLeft,
}

/// A window of `pol`-signed values spanned by a minimum and a maximum.
/// Positions are 0-based; `support` is the component of the value band
/// containing both items and `panels` its double-panel part, from the
/// mirror to the maximum. Both ranges are inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub min_item: usize,
    pub max_item: usize,
    pub support: (usize, usize),
    pub panels: (usize, usize),
    pub wave: Wave,
    pub orientation: Orientation,
    pub sign: Polarity,
}

/// Every window of `f` and of `-f`, found by direct scans from each minimum.
pub fn naive_windows(samples: &[Sample]) -> Vec<Window> {
    let mut out = Vec::new();
    for pol in Polarity::BOTH {
        out.extend(windows_of(samples, pol));
    }
    out
}

pub(crate) fn windows_of(samples: &[Sample], pol: Polarity) -> Vec<Window> {
    let h = heights(samples, pol);
    let m = h.len();
    let gmax = (0..m).max_by(|&a, &b| h[a].cmp(&h[b])).unwrap();
    let mut out = Vec::new();
    for a in 0..m {
        let is_min = (a == 0 || h[a - 1] > h[a]) && (a + 1 == m || h[a + 1] > h[a]);
        if !is_min {
            continue;
        }
        // Per side: the highest item passed before a lower one, `None` if
        // the boundary comes first.
        let mut side = [(a, None), (a, None)];
        for (s, step) in [(0usize, -1isize), (1, 1)] {
            let mut best = a;
            let mut x = a as isize;
            loop {
                let nx = x + step;
                if nx < 0 || nx >= m as isize {
                    side[s] = (best, None);
                    break;
                }
                if h[nx as usize] < h[a] {
                    side[s] = (best, Some(h[best]));
                    break;
                }
                x = nx;
                if h[x as usize] > h[best] {
                    best = x as usize;
                }
            }
        }
        let (max_item, wave) = match (side[0].1, side[1].1) {
            (Some(l), Some(r)) => (if l < r { side[0].0 } else { side[1].0 }, Wave::Simple),
            // Simple as long as the open side still climbs past the maximum.
            (None, Some(r)) => (side[1].0, if h[side[0].0] > r { Wave::Simple } else { Wave::ShortLeft }),
            (Some(l), None) => (side[0].0, if h[side[1].0] > l { Wave::Simple } else { Wave::ShortRight }),
            (None, None) => (gmax, Wave::Global),
        };
        let (lo, hi) = (h[a], h[max_item]);
        let mut x = a;
        while x > 0 && h[x - 1] >= lo && h[x - 1] <= hi {
            x -= 1;
        }
        let mut y = a;
        while y + 1 < m && h[y + 1] >= lo && h[y + 1] <= hi {
            y += 1;
        }
        let panels = if wave == Wave::Global {
            (x, y)
        } else if a < max_item {
            (x, max_item)
        } else {
            (max_item, y)
        };
        out.push(Window {
            min_item: a,
            max_item,
            support: (x, y),
            panels,
            wave,
            orientation: if max_item > a { Orientation::LeftToRight } else { Orientation::RightToLeft },
            sign: pol,
        });
    }
    out
}

/// The diagram implied by the windows alone; arrows link each window to
/// the smallest double-panel window enclosing it.
pub fn windows_diagram(samples: &[Sample]) -> Diagram {
    let mut points = Vec::new();
    let mut arrows = Vec::new();
    for pol in Polarity::BOTH {
        let h = heights(samples, pol);
        let ws = windows_of(samples, pol);
        let mut idx = vec![usize::MAX; ws.len()];
        for (k, w) in ws.iter().enumerate() {
            let sub = match (pol, w.wave) {
                (Polarity::Up, Wave::Global) => Subdiagram::Essential,
                (Polarity::Up, _) => Subdiagram::Ordinary,
                (Polarity::Down, Wave::Global) => continue,
                (Polarity::Down, _) => Subdiagram::Relative,
            };
            idx[k] = points.len();
            points.push(point(samples, w.min_item, w.max_item, sub));
        }
        for (k, w) in ws.iter().enumerate() {
            if w.wave == Wave::Global {
                continue;
            }
            let parent = ws
                .iter()
                .enumerate()
                .filter(|&(j, v)| {
                    j != k
                        && v.panels.0 <= w.panels.0
                        && v.panels.1 >= w.panels.1
                        && h[v.min_item] < h[w.min_item]
                        && h[v.max_item] >= h[w.max_item]
                })
                .min_by_key(|(_, v)| (h[v.max_item], v.panels.1 - v.panels.0))
                .map(|(j, _)| j);
            if let Some(j) = parent {
                if idx[j] != usize::MAX {
                    let tag = if pol == Polarity::Up { ArrowTag::Up } else { ArrowTag::Down };
                    arrows.push((idx[k], idx[j], tag));
                }
            }
        }
    }
    Diagram::assemble(points, arrows, false)
}

/// Both tree signatures of a list.
pub fn signatures(ws: &Workspace, list: ListId) -> Option<[TreeSignature; 2]> {
    ws.ls(list).has_trees().then(|| [ws.signature(list, Polarity::Up), ws.signature(list, Polarity::Down)])
}

/// A fresh workspace holding the from-scratch build of `list`'s values.
pub fn rebuild(ws: &Workspace, list: ListId) -> (Workspace, ListId) {
    let mut fresh = Workspace::new();
    let l = fresh.create_samples(&ws.samples(list)).expect("valid samples");
    (fresh, l)
}

/// Link-for-link equality of `list` with its from-scratch build.
pub fn matches_rebuild(ws: &Workspace, list: ListId) -> bool {
    let (fresh, l) = rebuild(ws, list);
    fresh.samples(l) == ws.samples(list) && signatures(&fresh, l) == signatures(ws, list)
}

/// First differing node between `list` and its rebuild, for diagnostics.
pub fn rebuild_mismatch(ws: &Workspace, list: ListId) -> Option<String> {
    let (fresh, l) = rebuild(ws, list);
    for pol in Polarity::BOTH {
        if !ws.ls(list).has_trees() {
            break;
        }
        let (a, b) = (ws.signature(list, pol), fresh.signature(l, pol));
        for (k, v) in &b {
            if a.get(k) != Some(v) {
                return Some(format!("{pol:?} {k:?}: maintained {:?} rebuilt {v:?}", a.get(k)));
            }
        }
        for k in a.keys() {
            if !b.contains_key(k) {
                return Some(format!("{pol:?} {k:?}: extra node"));
            }
        }
    }
    None
}

/// How a cut meets a window: through its in-panel, its mid-panel, or only
/// its out-panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutEffect {
    Injury,
    Fatality,
    Scare,
}

/// A window of one tree met by a cut; the global window's upper end is the
/// special root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffectedWindow {
    pub tree: Polarity,
    pub low: NodeLabel,
    pub high: NodeLabel,
    /// Height of the upper end in the tree's orientation.
    pub high_height: Height,
    pub effect: CutEffect,
    pub wave: Wave,
}

/// Every window of `list`, hooks included, that a cut after 1-based
/// position `after` meets, classified by direct scans.
pub fn naive_cut_effects(ws: &Workspace, list: ListId, after: usize) -> Vec<AffectedWindow> {
    let members = ws.members(list);
    let n = members.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| ws.it(members[k]).height);
    let mut rank = vec![0usize; n];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r;
    }
    let samples: Vec<Sample> = (0..n).map(|k| Sample { value: rank[k] as f64, key: k as u64 }).collect();
    // Member index of the last item left of the cut; index 0 is the left hook.
    let l = after;
    let mut out = Vec::new();
    for pol in Polarity::BOTH {
        for w in windows_of(&samples, pol) {
            let global = w.wave == Wave::Global;
            let (p, q) = (w.min_item, w.max_item);
            let p_right = p > l;
            let q_right = global || q > l;
            let effect = if p_right != q_right {
                CutEffect::Fatality
            } else {
                let near = if p_right { l + 1 } else { l };
                if near < w.support.0 || near > w.support.1 {
                    continue;
                }
                let q_between = !global && (if p_right { q < p } else { p < q });
                if q_between {
                    CutEffect::Scare
                } else {
                    CutEffect::Injury
                }
            };
            let (high, high_height) = if global {
                (NodeLabel::Root, Height::TOP)
            } else {
                (ws.item_label(members[q]), ws.it(members[q]).height.signed(pol))
            };
            let low = ws.item_label(members[p]);
            out.push(AffectedWindow { tree: pol, low, high, high_height, effect, wave: w.wave });
        }
    }
    out
}
