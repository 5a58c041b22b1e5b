//! The augmented persistence diagram: extraction from the two trees, the
//! symmetric-difference size `k`, and the interchange document.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::counters::CostCounters;
use crate::ids::{ListId, NodeId};
use crate::tree::Trail;
use crate::value::{ExtValue, Polarity};
use crate::workspace::{Crit, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subdiagram {
    Ordinary,
    Relative,
    Essential,
}

/// Which tree's nesting produced an arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowTag {
    Up,
    Down,
}

/// Item id used for the spanning item of a hook.
pub const HOOK_ITEM: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub birth: ExtValue,
    pub death: ExtValue,
    pub sub: Subdiagram,
    pub birth_item: u64,
    pub death_item: u64,
    pub from_hook: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub child: usize,
    pub parent: usize,
    pub tag: ArrowTag,
}

/// Points in canonical order (by subdiagram, then birth item) and arrows
/// referring to point indices.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagram {
    pub points: Vec<DiagramPoint>,
    pub arrows: Vec<Arrow>,
}

type PointKey = (u64, u64, (i8, u64, i32), (i8, u64, i32), Subdiagram);

fn value_key(v: ExtValue) -> (i8, u64, i32) {
    (v.kind as i8, v.real.to_bits(), v.eps)
}

impl DiagramPoint {
    fn key(&self) -> PointKey {
        (self.birth_item, self.death_item, value_key(self.birth), value_key(self.death), self.sub)
    }
}

impl Diagram {
    /// Builds a diagram from unordered points and arrows given as
    /// `(child, parent)` indices into `points`; sorts and drops hook points
    /// unless `keep_hooks`.
    pub(crate) fn assemble(points: Vec<DiagramPoint>, arrows: Vec<(usize, usize, ArrowTag)>, keep_hooks: bool) -> Self {
        let mut order: Vec<usize> = (0..points.len()).filter(|&i| keep_hooks || !points[i].from_hook).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (&points[a], &points[b]);
            (p.sub, p.birth_item, p.death_item).cmp(&(q.sub, q.birth_item, q.death_item))
        });
        let mut new_index = vec![usize::MAX; points.len()];
        for (k, &i) in order.iter().enumerate() {
            new_index[i] = k;
        }
        let mut out_arrows: Vec<Arrow> = arrows
            .into_iter()
            .filter(|&(c, p, _)| new_index[c] != usize::MAX && new_index[p] != usize::MAX)
            .map(|(c, p, tag)| Arrow { child: new_index[c], parent: new_index[p], tag })
            .collect();
        out_arrows.sort_by_key(|a| (a.tag, a.child, a.parent));
        Diagram { points: order.into_iter().map(|i| points[i]).collect(), arrows: out_arrows }
    }

    pub fn of(&self, sub: Subdiagram) -> impl Iterator<Item = &DiagramPoint> + '_ {
        self.points.iter().filter(move |p| p.sub == sub)
    }

    /// Disjoint union; used to compare a cut against its two outputs.
    pub fn union(&self, other: &Diagram) -> Diagram {
        let off = self.points.len();
        let mut points = self.points.clone();
        points.extend(other.points.iter().copied());
        let mut arrows: Vec<(usize, usize, ArrowTag)> =
            self.arrows.iter().map(|a| (a.child, a.parent, a.tag)).collect();
        arrows.extend(other.arrows.iter().map(|a| (a.child + off, a.parent + off, a.tag)));
        Diagram::assemble(points, arrows, true)
    }

    fn point_keys(&self) -> BTreeSet<PointKey> {
        self.points.iter().filter(|p| !p.from_hook).map(DiagramPoint::key).collect()
    }

    fn arrow_keys(&self) -> BTreeSet<(PointKey, PointKey, ArrowTag)> {
        self.arrows
            .iter()
            .filter(|a| !self.points[a.child].from_hook && !self.points[a.parent].from_hook)
            .map(|a| (self.points[a.child].key(), self.points[a.parent].key(), a.tag))
            .collect()
    }

    /// `(birth, death)` pairs of one subdiagram as plain reals.
    pub fn pairs(&self, sub: Subdiagram) -> Vec<(f64, f64)> {
        self.of(sub).filter(|p| !p.from_hook).map(|p| (p.birth.real, p.death.real)).collect()
    }

    /// Interchange document; `meta` is attached verbatim.
    pub fn to_json(&self, meta: Value) -> Value {
        let row = |p: &DiagramPoint| json!([p.birth.real, p.death.real, p.birth_item, p.death_item]);
        let mut offsets = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            if p.birth.eps != 0 || p.death.eps != 0 {
                offsets.push(json!([i, p.birth.eps, p.death.eps]));
            }
        }
        let tag = |t: ArrowTag| match t {
            ArrowTag::Up => "up",
            ArrowTag::Down => "down",
        };
        json!({
            "ordinary": self.of(Subdiagram::Ordinary).map(row).collect::<Vec<_>>(),
            "relative": self.of(Subdiagram::Relative).map(row).collect::<Vec<_>>(),
            "essential": self.of(Subdiagram::Essential).map(row).collect::<Vec<_>>(),
            "offsets": offsets,
            "arrows": self.arrows.iter().map(|a| json!([a.child, a.parent, tag(a.tag)])).collect::<Vec<_>>(),
            "meta": meta,
        })
    }

    /// Parses the interchange document back; point order is preserved.
    pub fn from_json(v: &Value) -> Option<Diagram> {
        let mut points = Vec::new();
        for (field, sub) in [
            ("ordinary", Subdiagram::Ordinary),
            ("relative", Subdiagram::Relative),
            ("essential", Subdiagram::Essential),
        ] {
            for row in v.get(field)?.as_array()? {
                let r = row.as_array()?;
                points.push(DiagramPoint {
                    birth: ExtValue::finite(r.first()?.as_f64()?).ok()?,
                    death: ExtValue::finite(r.get(1)?.as_f64()?).ok()?,
                    sub,
                    birth_item: r.get(2)?.as_u64()?,
                    death_item: r.get(3)?.as_u64()?,
                    from_hook: false,
                });
            }
        }
        if let Some(offs) = v.get("offsets").and_then(Value::as_array) {
            for o in offs {
                let o = o.as_array()?;
                let p = points.get_mut(o.first()?.as_u64()? as usize)?;
                p.birth.eps = o.get(1)?.as_i64()? as i32;
                p.death.eps = o.get(2)?.as_i64()? as i32;
                p.from_hook = p.birth_item == HOOK_ITEM || p.death_item == HOOK_ITEM;
            }
        }
        let mut arrows = Vec::new();
        for a in v.get("arrows")?.as_array()? {
            let a = a.as_array()?;
            let tag = match a.get(2)?.as_str()? {
                "up" => ArrowTag::Up,
                "down" => ArrowTag::Down,
                _ => return None,
            };
            let (child, parent) = (a.first()?.as_u64()? as usize, a.get(1)?.as_u64()? as usize);
            if child >= points.len() || parent >= points.len() {
                return None;
            }
            arrows.push(Arrow { child, parent, tag });
        }
        Some(Diagram { points, arrows })
    }
}

/// Size of the symmetric difference of points plus that of arrows; hook
/// points and their arrows are ignored.
pub fn diff(d1: &Diagram, d2: &Diagram) -> usize {
    let (p1, p2) = (d1.point_keys(), d2.point_keys());
    let (a1, a2) = (d1.arrow_keys(), d2.arrow_keys());
    p1.symmetric_difference(&p2).count() + a1.symmetric_difference(&a2).count()
}

impl Workspace {
    /// The diagram of `list`, hook points excluded.
    pub fn diagram(&self, list: ListId) -> Diagram {
        self.diagram_with(list, false)
    }

    pub fn diagram_with(&self, list: ListId, keep_hooks: bool) -> Diagram {
        let mut points = Vec::new();
        let mut arrows = Vec::new();
        if self.ls(list).has_trees() {
            for pol in Polarity::BOTH {
                self.walk(self.ls(list).beta[pol.idx()], pol, &mut points, &mut arrows);
            }
        }
        Diagram::assemble(points, arrows, keep_hooks)
    }

    fn item_id(&self, x: NodeId) -> u64 {
        let it = self.it(self.n(x).item);
        if it.crit.is_hook() {
            HOOK_ITEM
        } else {
            it.key
        }
    }

    fn is_hook_node(&self, x: NodeId) -> bool {
        self.it(self.n(x).item).crit.is_hook()
    }

    /// Recursive walk of one tree, iterative to bound stack depth.
    fn walk(
        &self,
        beta: NodeId,
        pol: Polarity,
        points: &mut Vec<DiagramPoint>,
        arrows: &mut Vec<(usize, usize, ArrowTag)>,
    ) {
        let tag = match pol {
            Polarity::Up => ArrowTag::Up,
            Polarity::Down => ArrowTag::Down,
        };
        let mut stack: Vec<(NodeId, Option<usize>)> = vec![(beta, None)];
        while let Some((b, parent)) = stack.pop() {
            let a = self.birth(b);
            let here = if self.is_root(b) {
                match pol {
                    Polarity::Up => {
                        let top = [self.n(b).in_, self.n(b).mid]
                            .into_iter()
                            .filter(|&x| x != a)
                            .max_by_key(|&x| self.h(x))
                            .expect("global maximum");
                        points.push(self.point(a, top, Subdiagram::Essential));
                        Some(points.len() - 1)
                    }
                    Polarity::Down => None,
                }
            } else {
                let sub = match pol {
                    Polarity::Up => Subdiagram::Ordinary,
                    Polarity::Down => Subdiagram::Relative,
                };
                points.push(self.point(a, b, sub));
                let idx = points.len() - 1;
                if let Some(p) = parent {
                    arrows.push((idx, p, tag));
                }
                Some(idx)
            };
            for t in [Trail::In, Trail::Mid] {
                for x in self.trail_nodes(b, t) {
                    stack.push((x, here));
                }
            }
        }
    }

    fn point(&self, a: NodeId, b: NodeId, sub: Subdiagram) -> DiagramPoint {
        let (va, vb) = (self.value_of(self.n(a).item), self.value_of(self.n(b).item));
        DiagramPoint {
            birth: va,
            death: vb,
            sub,
            birth_item: self.item_id(a),
            death_item: self.item_id(b),
            from_hook: self.is_hook_node(a) || self.is_hook_node(b),
        }
    }

    /// Metadata block of the interchange document.
    pub fn meta(&self, list: ListId, counters: &CostCounters) -> Value {
        let critical = self
            .real_items(list)
            .into_iter()
            .filter(|&i| matches!(self.it(i).crit, Crit::Minimum | Crit::Maximum))
            .count();
        json!({ "m": self.len(list), "n": critical, "counters": counters })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(b: f64, d: f64, sub: Subdiagram, bi: u64, di: u64) -> DiagramPoint {
        DiagramPoint {
            birth: ExtValue::finite(b).unwrap(),
            death: ExtValue::finite(d).unwrap(),
            sub,
            birth_item: bi,
            death_item: di,
            from_hook: false,
        }
    }

    #[test]
    fn diff_with_self_is_zero() {
        let d = Diagram::assemble(
            vec![pt(1.0, 3.0, Subdiagram::Ordinary, 3, 2), pt(0.0, 4.0, Subdiagram::Essential, 1, 4)],
            vec![(0, 1, ArrowTag::Up)],
            false,
        );
        assert_eq!(diff(&d, &d), 0);
    }

    #[test]
    fn json_roundtrip() {
        let d = Diagram::assemble(
            vec![pt(1.0, 3.0, Subdiagram::Ordinary, 3, 2), pt(0.0, 4.0, Subdiagram::Essential, 1, 4)],
            vec![(0, 1, ArrowTag::Up)],
            false,
        );
        let back = Diagram::from_json(&d.to_json(json!({}))).unwrap();
        assert_eq!(back, d);
    }
}
