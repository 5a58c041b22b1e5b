//! Linear-time construction of both trees by the left-to-right stack scan.

use crate::dict::CritDict;
use crate::error::BananaError;
use crate::ids::{ItemId, ListId, NodeId};
use crate::value::{Height, Polarity};
use crate::workspace::{Crit, Role, Sample, Workspace, LEFT, RIGHT};

/// Scan-local state: the critical sequence with its own prev/next links.
/// Index 0 is the left sentinel, the last index is the special root.
struct Scan {
    seq: Vec<NodeId>,
    prv: Vec<usize>,
    nxt: Vec<usize>,
    is_min: Vec<bool>,
}

impl Workspace {
    /// Builds a list with both trees from at least two values.
    pub fn build(&mut self, values: &[f64]) -> Result<ListId, BananaError> {
        if values.len() < 2 {
            return Err(BananaError::Size { need: 2, got: values.len() });
        }
        self.create(values)
    }

    /// Creates a list of any size; trees exist once it holds two items.
    pub fn create(&mut self, values: &[f64]) -> Result<ListId, BananaError> {
        let samples = values
            .iter()
            .map(|&v| {
                crate::value::ExtValue::finite(v)?;
                Ok(Sample { value: v, key: self.fresh_key() })
            })
            .collect::<Result<Vec<_>, BananaError>>()?;
        self.create_samples(&samples)
    }

    /// Creates a list whose items carry the given keys. Keys must be
    /// distinct; they order equal values.
    pub fn create_samples(&mut self, samples: &[Sample]) -> Result<ListId, BananaError> {
        for s in samples {
            crate::value::ExtValue::finite(s.value)?;
        }
        let list = self.new_list();
        let mut prev = ItemId::NIL;
        for s in samples {
            self.next_key = self.next_key.max(s.key + 1);
            let it = self.new_item(Height::item(s.value, s.key as i64), s.key, list);
            self.link_after(list, prev, it);
            prev = it;
        }
        let st = self.lsm(list);
        st.len = samples.len();
        if let (Some(_), Some(_)) = (samples.first(), samples.last()) {
            let items = self.collect_chain(list, prev);
            let st = self.lsm(list);
            st.head = items[0];
            st.tail = *items.last().unwrap();
        }
        self.install(list);
        Ok(list)
    }

    fn collect_chain(&self, _list: ListId, last: ItemId) -> Vec<ItemId> {
        let mut out = vec![last];
        let mut i = self.it(last).prev;
        while !i.is_nil() {
            out.push(i);
            i = self.it(i).prev;
        }
        out.reverse();
        out
    }

    /// Rebuilds hooks, criticality, dictionaries and both trees of `list`
    /// from its current item values.
    pub(crate) fn install(&mut self, list: ListId) {
        for h in self.ls(list).hooks {
            if !h.is_nil() {
                self.unlink(h);
                self.itm(h).alive = false;
            }
        }
        self.lsm(list).hooks = [ItemId::NIL; 2];
        self.lsm(list).beta = [NodeId::NIL; 2];
        let items = self.real_items(list);
        for &i in &items {
            self.itm(i).node = [NodeId::NIL; 2];
            self.itm(i).crit = Crit::NonCritical;
        }
        {
            let st = self.lsm(list);
            st.len = items.len();
            st.minima = CritDict::new();
            st.maxima = CritDict::new();
            st.head = items.first().copied().unwrap_or(ItemId::NIL);
            st.tail = items.last().copied().unwrap_or(ItemId::NIL);
        }
        if items.len() < 2 {
            return;
        }
        let (head, tail) = (items[0], items[items.len() - 1]);
        let lh = self.make_hook(list, head);
        self.link_after(list, ItemId::NIL, lh);
        let rh = self.make_hook(list, tail);
        self.link_after(list, tail, rh);
        self.lsm(list).hooks = [lh, rh];
        for i in self.members(list) {
            let c = self.local_crit(i);
            self.set_crit(i, c);
        }
        for pol in Polarity::BOTH {
            let beta = self.build_tree(list, pol);
            self.lsm(list).beta[pol.idx()] = beta;
        }
    }

    pub(crate) fn make_hook(&mut self, list: ListId, endpoint: ItemId) -> ItemId {
        let key = self.fresh_key();
        let h = self.new_item(Height::TOP, key, list);
        self.itm(h).crit = Crit::UpHook;
        let hh = self.hook_height(endpoint);
        let he = self.it(endpoint).height;
        self.itm(h).height = hh;
        self.itm(h).crit = if hh < he { Crit::UpHook } else { Crit::DownHook };
        h
    }

    /// Runs the stack scan for one polarity and returns the special root.
    pub(crate) fn build_tree(&mut self, list: ListId, pol: Polarity) -> NodeId {
        let sentinel = self.new_node(ItemId::NIL, pol);
        self.nm(sentinel).root_val = Height { kind: 1, real: 0.0, tie: 0, eps: 1 };
        self.nm(sentinel).root_side = -1;
        let mut sc = Scan { seq: vec![sentinel], prv: vec![0], nxt: vec![], is_min: vec![false] };
        for i in self.members(list) {
            match self.it(i).crit.role(pol) {
                Role::None => {}
                r => {
                    let nd = self.new_node(i, pol);
                    sc.seq.push(nd);
                    sc.is_min.push(r == Role::Min);
                }
            }
        }
        let beta = self.new_node(ItemId::NIL, pol);
        sc.seq.push(beta);
        sc.is_min.push(false);
        let len = sc.seq.len();
        sc.prv = (0..len).map(|k| k.saturating_sub(1)).collect();
        sc.nxt = (0..len).map(|k| (k + 1).min(len - 1)).collect();
        self.scan(&mut sc);

        let nb = self.n(beta).in_;
        debug_assert!(!nb.is_nil());
        self.nm(beta).up = NodeId::NIL;
        self.nm(beta).dn = NodeId::NIL;
        self.nm(beta).low = NodeId::NIL;
        for k in 1..len - 1 {
            let x = sc.seq[k];
            if sc.is_min[k] {
                self.nm(x).up = NodeId::NIL;
                self.nm(x).dn = NodeId::NIL;
            }
        }
        self.touch(len as u64);
        self.compute_spine(beta);
        beta
    }

    fn scan(&mut self, sc: &mut Scan) {
        let last = sc.seq.len() - 1;
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        self.nm(sc.seq[0]).dn = sc.seq[1];
        let mut big_a = 0usize;
        let mut j = 0usize;
        loop {
            j = sc.nxt[j];
            self.touch(1);
            if sc.is_min[j] {
                big_a = j;
                continue;
            }
            loop {
                let (_, top_b) = *stack.last().unwrap();
                if self.h(sc.seq[j]) <= self.h(sc.seq[top_b]) {
                    break;
                }
                let (a, b) = stack.pop().unwrap();
                self.touch(1);
                if self.h(sc.seq[big_a]) < self.h(sc.seq[a]) {
                    self.fix_banana(sc.seq[a], sc.seq[b]);
                } else {
                    self.attach_right(sc, b, j);
                    self.fix_banana(sc.seq[big_a], sc.seq[b]);
                    big_a = a;
                }
            }
            let top_b = stack.last().unwrap().1;
            self.attach_left(sc, j, top_b);
            stack.push((big_a, j));
            if j == last {
                self.fix_banana(sc.seq[big_a], sc.seq[j]);
                break;
            }
        }
    }

    fn attach_left(&mut self, sc: &Scan, j: usize, b: usize) {
        let (nj, nb) = (sc.seq[j], sc.seq[b]);
        let in_j = self.n(nb).dn;
        let mid_j = sc.seq[sc.prv[j]];
        let dn_j = if j + 1 < sc.seq.len() { sc.seq[sc.nxt[j]] } else { NodeId::NIL };
        {
            let n = self.nm(nj);
            n.up = nb;
            n.in_ = in_j;
            n.mid = mid_j;
            n.dn = if dn_j == nj { NodeId::NIL } else { dn_j };
        }
        self.nm(nb).dn = nj;
        self.nm(in_j).up = nj;
        self.nm(mid_j).up = nj;
    }

    fn attach_right(&mut self, sc: &mut Scan, b: usize, j: usize) {
        let nb = sc.seq[b];
        let up_b = self.n(nb).up;
        let in_b = self.n(nb).in_;
        self.nm(up_b).dn = in_b;
        self.nm(in_b).up = up_b;
        self.nm(nb).up = sc.seq[j];
        let new_in = sc.seq[sc.prv[j]];
        self.nm(nb).in_ = new_in;
        let aux = self.n(nb).dn;
        let mid = self.n(nb).mid;
        self.nm(nb).dn = mid;
        self.nm(nb).mid = aux;
        sc.prv[j] = b;
        self.nm(new_in).up = nb;
    }

    pub(crate) fn fix_banana(&mut self, a: NodeId, b: NodeId) {
        for mid in [false, true] {
            let mut q = b;
            let mut p = if mid { self.n(b).mid } else { self.n(b).in_ };
            while p != a {
                self.nm(p).low = a;
                q = p;
                p = self.n(p).dn;
                self.touch(1);
            }
            if mid {
                self.nm(a).mid = q;
            } else {
                self.nm(a).in_ = q;
            }
        }
        self.nm(a).low = a;
        self.nm(a).dth = b;
    }

    /// Recomputes stored spine labels top-down from the special root.
    pub(crate) fn compute_spine(&mut self, beta: NodeId) {
        self.nm(beta).spine = LEFT | RIGHT;
        let mut stack = vec![beta];
        while let Some(u) = stack.pop() {
            let fu = self.n(u).spine;
            for v in self.interior_nodes(u) {
                let top = v == self.n(u).in_ || v == self.n(u).mid;
                let f = if top { fu & self.trail_side(v) } else { 0 };
                self.nm(v).spine = f;
                stack.push(v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_input() {
        let mut ws = Workspace::new();
        assert!(matches!(ws.build(&[1.0]), Err(BananaError::Size { need: 2, got: 1 })));
    }

    #[test]
    fn hooks_of_two_items() {
        let mut ws = Workspace::new();
        let l = ws.build(&[1.0, 2.0]).unwrap();
        let [lh, rh] = ws.ls(l).hooks;
        let (a, b) = (ws.value_of(lh), ws.value_of(rh));
        assert_eq!((a.real, a.eps), (1.0, 1));
        assert_eq!((b.real, b.eps), (2.0, -1));
        let l = ws.build(&[2.0, 1.0]).unwrap();
        let [lh, rh] = ws.ls(l).hooks;
        let (a, b) = (ws.value_of(lh), ws.value_of(rh));
        assert_eq!((a.real, a.eps), (2.0, -1));
        assert_eq!((b.real, b.eps), (1.0, 1));
    }
}
