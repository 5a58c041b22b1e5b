//! Full-scan validation of a list, its dictionaries and both trees.

use std::fmt;

use crate::ids::{ListId, NodeId};
use crate::tree::{NodeLabel, Trail};
use crate::value::Polarity;
use crate::workspace::{Crit, Role, Workspace, LEFT, RIGHT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub tree: Option<Polarity>,
    pub node: NodeLabel,
    pub invariant: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tree {
            Some(p) => write!(f, "[{p:?}] {:?}: {} ({})", self.node, self.invariant, self.detail),
            None => write!(f, "[list] {:?}: {} ({})", self.node, self.invariant, self.detail),
        }
    }
}

struct Report<'a> {
    ws: &'a Workspace,
    tree: Option<Polarity>,
    out: Vec<Violation>,
}

impl Report<'_> {
    fn push(&mut self, x: NodeId, invariant: &'static str, detail: impl Into<String>) {
        let node = self.ws.label_of(x);
        self.out.push(Violation { tree: self.tree, node, invariant, detail: detail.into() });
    }
}

impl Workspace {
    /// All invariant violations of `list`; empty iff the structure is sound.
    pub fn validate(&self, list: ListId) -> Vec<Violation> {
        let mut r = Report { ws: self, tree: None, out: Vec::new() };
        self.validate_list(list, &mut r);
        if self.ls(list).has_trees() {
            for pol in Polarity::BOTH {
                r.tree = Some(pol);
                self.validate_tree(list, pol, &mut r);
            }
        }
        r.out
    }

    fn validate_list(&self, list: ListId, r: &mut Report) {
        let s = self.ls(list);
        let reals = self.real_items(list);
        if reals.len() != s.len {
            r.push(NodeId::NIL, "list length", format!("{} linked, {} recorded", reals.len(), s.len));
        }
        let members = self.members(list);
        for w in members.windows(2) {
            if self.it(w[0]).label >= self.it(w[1]).label {
                r.push(self.it(w[1]).node[0], "order labels", "labels not increasing");
            }
            if self.it(w[1]).prev != w[0] {
                r.push(NodeId::NIL, "list links", "prev does not mirror next");
            }
        }
        let hooked = s.len >= 2;
        if hooked != !s.hooks[0].is_nil() || hooked != !s.hooks[1].is_nil() {
            r.push(NodeId::NIL, "hook placement", "hooks present iff two or more items");
        }
        if hooked && (members.first() != Some(&s.hooks[0]) || members.last() != Some(&s.hooks[1])) {
            r.push(NodeId::NIL, "hook placement", "hooks must be the extreme members");
        }
        let mut mins = Vec::new();
        let mut maxs = Vec::new();
        for &i in &members {
            let it = self.it(i);
            if !it.alive || it.list != list {
                r.push(NodeId::NIL, "item ownership", format!("item {:?} stale", self.item_label(i)));
            }
            if !hooked {
                continue;
            }
            if it.crit.is_hook() {
                let e = if i == s.hooks[0] { s.head } else { s.tail };
                if it.height != self.hook_height(e) {
                    r.push(it.node[0], "hook value", format!("{:?}", self.item_label(i)));
                }
            }
            let c = self.local_crit(i);
            if c != it.crit {
                r.push(
                    it.node[0],
                    "criticality",
                    format!("{:?} stored {:?} actual {c:?}", self.item_label(i), it.crit),
                );
            }
            match it.crit {
                Crit::Minimum => mins.push(it.label),
                Crit::Maximum => maxs.push(it.label),
                _ => {}
            }
            for pol in Polarity::BOTH {
                let has = !it.node[pol.idx()].is_nil();
                if has != (it.crit.role(pol) != Role::None) {
                    r.push(NodeId::NIL, "node presence", format!("{:?} in {pol:?}", self.item_label(i)));
                }
            }
        }
        if s.minima.labels().collect::<Vec<_>>() != mins || s.maxima.labels().collect::<Vec<_>>() != maxs {
            r.push(NodeId::NIL, "dictionary membership", "dictionaries differ from criticality scan");
        }
        for i in s.minima.items().chain(s.maxima.items()) {
            if self.it(i).list != list || !self.it(i).alive {
                r.push(NodeId::NIL, "dictionary membership", "foreign item");
            }
        }
    }

    fn validate_tree(&self, list: ListId, pol: Polarity, r: &mut Report) {
        let beta = self.ls(list).beta[pol.idx()];
        if !self.is_root(beta) || self.n(beta).pol != pol {
            r.push(beta, "special root", "not a root of this polarity");
            return;
        }
        if self.n(beta).root_side != 1 || !self.n(beta).up.is_nil() || !self.n(beta).low.is_nil() {
            r.push(beta, "special root", "side flag or links not reset");
        }
        let nodes = self.tree_nodes(list, pol);
        for &x in &nodes {
            if !self.is_root(x) && self.is_leaf(x) != (self.it(self.n(x).item).crit.role(pol) == Role::Min) {
                r.push(x, "node kind", "leaf status disagrees with criticality");
            }
        }
        let mut internal = 0usize;
        let mut leaves = 0usize;
        for &x in &nodes {
            if self.is_root(x) || !self.is_leaf(x) {
                internal += 1;
            } else {
                leaves += 1;
            }
        }
        if internal != leaves {
            r.push(beta, "node count", format!("{leaves} leaves, {internal} internal"));
        }
        // Trails: values, links and lows. A-III covers the up/dn value order.
        for &b in &nodes {
            if self.is_leaf(b) {
                continue;
            }
            let a_in = self.n(self.n(b).in_).low;
            let a_mid = self.n(self.n(b).mid).low;
            if a_in != a_mid || a_in.is_nil() || !self.is_leaf(a_in) {
                r.push(b, "birth consistency", "low(in) differs from low(mid)");
                continue;
            }
            let a = a_in;
            if self.n(a).dth != b {
                r.push(a, "dth", "lower end does not point to its upper end");
            }
            for t in [Trail::In, Trail::Mid] {
                let mut above = b;
                let mut x = self.trail_top(b, t);
                let mut steps = 0;
                while x != a {
                    steps += 1;
                    if steps > nodes.len() || x.is_nil() || self.is_leaf(x) || self.is_root(x) {
                        r.push(b, "trail", "trail does not reach its lower end");
                        break;
                    }
                    if self.n(x).up != above {
                        r.push(x, "A-III", "up link does not mirror the trail");
                    }
                    if self.n(x).low != a {
                        r.push(x, "A-II", "low is not the lower end of its banana");
                    }
                    if !(self.h(above) > self.h(x)) {
                        r.push(above, "A-III", "values along the trail do not increase");
                        r.push(x, "A-III", "values along the trail do not increase");
                    }
                    if !(self.h(x) > self.h(a)) {
                        r.push(x, "A-III", "interior node below its lower end");
                    }
                    let dn = self.n(x).dn;
                    if dn.is_nil() {
                        r.push(x, "trail", "missing dn");
                        break;
                    }
                    above = x;
                    x = dn;
                }
                let lowest = match t {
                    Trail::In => self.n(a).in_,
                    Trail::Mid => self.n(a).mid,
                };
                if lowest != above {
                    r.push(a, "leaf links", format!("{t:?} of leaf is not the lowest trail node"));
                }
            }
        }
        for &x in &nodes {
            if self.is_leaf(x) {
                if self.n(x).low != x {
                    r.push(x, "A-II", "leaf low must be itself");
                }
                let d = self.n(x).dth;
                if d.is_nil() {
                    r.push(x, "dth", "leaf without upper end");
                    continue;
                }
                if !self.is_root(d) {
                    let host = self.n(d).low;
                    if host.is_nil() || !(self.h(x) > self.h(host)) {
                        r.push(x, "A-II", "leaf not above the lower end of its host banana");
                    }
                }
            }
        }
        if r.out.iter().any(|v| v.tree == Some(pol) && matches!(v.invariant, "trail" | "birth consistency")) {
            return;
        }
        // String order equals positions; this also pins trail sides.
        let order = self.string_nodes(beta);
        if order.len() + 1 != nodes.len() {
            r.push(beta, "I.1 string", format!("string visits {} of {} nodes", order.len(), nodes.len() - 1));
        }
        for w in order.windows(2) {
            if !self.lt(w[0], w[1]) {
                r.push(w[1], "I.1 string", "string order differs from list order");
            }
        }
        // Spine: a node is on the left spine iff it is higher than all items to its left.
        let mut left_max = None;
        let mut want = std::collections::HashMap::new();
        for &x in &order {
            let hx = self.h(x);
            let f = if left_max.is_none_or(|m| hx > m) && !self.is_leaf(x) { LEFT } else { 0 };
            want.insert(x, f);
            left_max = Some(left_max.map_or(hx, |m: crate::value::Height| m.max(hx)));
        }
        let mut right_max = None;
        for &x in order.iter().rev() {
            let hx = self.h(x);
            if right_max.is_none_or(|m| hx > m) && !self.is_leaf(x) {
                *want.get_mut(&x).unwrap() |= RIGHT;
            }
            right_max = Some(right_max.map_or(hx, |m: crate::value::Height| m.max(hx)));
        }
        if self.n(beta).spine != LEFT | RIGHT {
            r.push(beta, "spine", "special root must be on both spines");
        }
        for (&x, &f) in &want {
            let f = if self.is_leaf(x) { 0 } else { f & self.trail_side(x) };
            if self.n(x).spine != f {
                r.push(x, "spine", format!("stored {} expected {f}", self.n(x).spine));
            }
        }
        // Hooks.
        let s = self.ls(list);
        for h in s.hooks {
            let x = self.it(h).node[pol.idx()];
            if x.is_nil() {
                continue;
            }
            let e = self.it(if h == s.hooks[0] { s.head } else { s.tail }).node[pol.idx()];
            let n = self.n(x);
            if n.dth != e || n.in_ != e || n.mid != e {
                r.push(x, "hook placement", "hook leaf must span an empty banana with its endpoint");
            }
        }
    }
}
