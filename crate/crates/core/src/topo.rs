//! Cutting a list in two and concatenating two lists.
//!
//! A cut lies between two adjacent real items, `left` and `right`. Every
//! banana whose window the cut passes through is found by walking up from
//! the smallest such banana until the spine; the walk loads per-tree stacks
//! by the side of the cut each end lies on. Splitting then repairs those
//! bananas from the largest down while a dummy leaf tracks the seam.

use serde::Serialize;

use crate::diagram::diff;
use crate::dict::Direction;
use crate::error::BananaError;
use crate::ids::{ItemId, ListId, NodeId};
use crate::local::EditOutcome;
use crate::prim::Slot;
use crate::tree::NodeLabel;
use crate::value::{Height, Polarity};
use crate::workspace::{Crit, ListState, Workspace, LABEL_GAP, LEFT, RIGHT};

/// Where the ends of a stacked banana lie relative to the cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CutSide {
    Left,
    Middle,
    Right,
}

impl CutSide {
    pub const ALL: [CutSide; 3] = [CutSide::Left, CutSide::Middle, CutSide::Right];

    fn idx(self) -> usize {
        self as usize
    }
}

/// A banana as `(lower end, upper end)` with heights in its tree's
/// orientation; the special root has height [`Height::TOP`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StackedBanana {
    pub low: NodeLabel,
    pub high: NodeLabel,
    pub low_height: Height,
    pub high_height: Height,
}

/// Bananas a cut passes through, bottom of each stack first.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SplitStacks {
    /// Indexed by tree, then by [`CutSide`].
    pub stacks: [[Vec<StackedBanana>; 3]; 2],
    /// Per tree, the bananas whose pairing changes without any trail being
    /// cut, left then right of the cut, in the order they are handled.
    pub scares: [[Vec<StackedBanana>; 2]; 2],
}

impl SplitStacks {
    pub fn get(&self, pol: Polarity, side: CutSide) -> &[StackedBanana] {
        &self.stacks[pol.idx()][side.idx()]
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Cut {
    pub left: ItemId,
    pub right: ItemId,
}

/// Node pairs `(lower end, upper end)` per tree and side, plus the side of
/// the last push per tree.
#[derive(Default)]
pub(crate) struct RawStacks {
    pub s: [[Vec<(NodeId, NodeId)>; 3]; 2],
    pub last: [usize; 2],
}

/// The five stacks one tree's split pops from.
#[derive(Default)]
pub(crate) struct Work {
    pub injury: [Vec<(NodeId, NodeId)>; 2],
    pub fatality: Vec<(NodeId, NodeId)>,
    pub scare: [Vec<(NodeId, NodeId)>; 2],
}

/// One tree's split in progress. The dummy leaf `a` sits at the cut, at the
/// end of whichever part currently holds it, so its in-trail is empty.
struct Seam {
    pol: Polarity,
    a: NodeId,
    alpha_left: bool,
    left_root: NodeId,
    right_root: NodeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Repair {
    Injury,
    Fatality,
    Scare,
}

impl Work {
    /// The entry with the highest upper end, removed.
    pub(crate) fn pop_top(&mut self, ws: &Workspace) -> Option<(Repair, NodeId, NodeId)> {
        let mut best: Option<(Repair, &mut Vec<(NodeId, NodeId)>)> = None;
        let mut best_h = -Height::TOP;
        let [i0, i1] = &mut self.injury;
        let [s0, s1] = &mut self.scare;
        for (kind, st) in [
            (Repair::Injury, i0),
            (Repair::Injury, i1),
            (Repair::Fatality, &mut self.fatality),
            (Repair::Scare, s0),
            (Repair::Scare, s1),
        ] {
            if let Some(&(_, q)) = st.last() {
                let h = ws.h(q);
                if best.is_none() || h > best_h {
                    best_h = h;
                    best = Some((kind, st));
                }
            }
        }
        best.map(|(kind, st)| {
            let (p, q) = st.pop().expect("non-empty stack");
            (kind, p, q)
        })
    }
}

impl Workspace {
    pub(crate) fn right_of_cut(&self, x: NodeId, cut: Cut) -> bool {
        self.pos(x) >= (0, self.it(cut.right).label)
    }

    fn cut_side(&self, p: NodeId, q: NodeId, cut: Cut) -> usize {
        match (self.right_of_cut(p, cut), self.right_of_cut(q, cut)) {
            (false, false) => CutSide::Left.idx(),
            (true, true) => CutSide::Right.idx(),
            _ => CutSide::Middle.idx(),
        }
    }

    /// The cut after 1-based position `after`, which must leave at least two
    /// real items on each side.
    pub(crate) fn cut_at(&self, list: ListId, after: usize) -> Result<Cut, BananaError> {
        self.check_list(list)?;
        let len = self.ls(list).len;
        if len < 4 {
            return Err(BananaError::Size { need: 4, got: len });
        }
        if after < 2 || after + 2 > len {
            return Err(BananaError::Position { pos: after, len });
        }
        let mut i = self.ls(list).head;
        for _ in 1..after {
            i = self.it(i).next;
        }
        Ok(Cut { left: i, right: self.it(i).next })
    }

    /// The smallest banana of tree `pol` whose window the cut passes through
    /// an in- or mid-panel of.
    pub(crate) fn smallest_banana(&mut self, list: ListId, pol: Polarity, cut: Cut) -> (NodeId, NodeId) {
        let (ll, rl) = (self.it(cut.left).label, self.it(cut.right).label);
        let s = self.ls(list);
        let (mins, maxs) = match pol {
            Polarity::Up => (&s.minima, &s.maxima),
            Polarity::Down => (&s.maxima, &s.minima),
        };
        let lmin = mins.nearest(rl, Direction::Left);
        let lmax = maxs.nearest(rl, Direction::Left);
        let rmin = mins.nearest(ll, Direction::Right);
        let rmax = maxs.nearest(ll, Direction::Right);
        self.cost.dict_ops += 4;
        let label = |i: Option<ItemId>| i.map(|i| self.it(i).label);
        let left_is_min = label(lmin) > label(lmax);
        let (a, b, near) = if left_is_min {
            (lmin.expect("critical item left of the cut"), rmax.expect("maximum right of the cut"), cut.left)
        } else {
            (rmin.expect("minimum right of the cut"), lmax.expect("maximum left of the cut"), cut.right)
        };
        let t = self.hi(near, pol);
        let (na, nb) = (self.node_of(a, pol), self.node_of(b, pol));
        let u = self.n(nb).dn;
        let toward_a = self.lt(u, nb) == self.lt(na, nb);
        let (mut q, mut r) = if toward_a { (self.n(self.n(nb).low).dth, u) } else { (nb, self.n(nb).mid) };
        self.touch(2);
        while !self.is_leaf(r) && t < self.h(r) {
            self.touch(1);
            q = r;
            r = self.n(r).in_;
        }
        (self.birth(q), q)
    }

    /// Walks both trees up from the smallest cut banana to the spine.
    pub(crate) fn load_stacks(&mut self, list: ListId, cut: Cut) -> RawStacks {
        let mut raw = RawStacks::default();
        for pol in Polarity::BOTH {
            let (mut p, mut q) = self.smallest_banana(list, pol, cut);
            loop {
                self.touch(1);
                let side = self.cut_side(p, q, cut);
                raw.s[pol.idx()][side].push((p, q));
                raw.last[pol.idx()] = side;
                if self.n(q).spine != 0 {
                    break;
                }
                p = self.n(q).low;
                q = self.n(p).dth;
            }
        }
        raw
    }

    /// The stacks tree `pol` pops from during its split.
    pub(crate) fn work_stacks(&mut self, pol: Polarity, raw: &RawStacks, cut: Cut) -> Work {
        let own = &raw.s[pol.idx()];
        let other = pol.flip().idx();
        let mut w = Work {
            injury: [own[CutSide::Left.idx()].clone(), own[CutSide::Right.idx()].clone()],
            fatality: own[CutSide::Middle.idx()].clone(),
            scare: [Vec::new(), Vec::new()],
        };
        for (k, side) in [CutSide::Left, CutSide::Right].into_iter().enumerate() {
            let src = &raw.s[other][side.idx()];
            let keep = if raw.last[other] == side.idx() { src.len().saturating_sub(1) } else { src.len() };
            w.scare[k] = src[..keep]
                .iter()
                .map(|&(p, q)| (self.node_of(self.n(q).item, pol), self.node_of(self.n(p).item, pol)))
                .collect();
        }
        if let Some(extra) = self.missing_scare(pol, raw, cut) {
            let k = usize::from(self.right_of_cut(extra.1, cut));
            w.scare[k].push(extra);
        }
        w
    }

    /// A short-wave banana hanging off a trail of the top stacked banana
    /// when the cut passes only its out-panel. Such a banana sits on the
    /// spine, so only the other tree's stacks would otherwise miss it.
    fn missing_scare(&mut self, pol: Polarity, raw: &RawStacks, cut: Cut) -> Option<(NodeId, NodeId)> {
        let side = raw.last[pol.idx()];
        let &(_, top) = raw.s[pol.idx()][side].last()?;
        let tops = [self.n(top).in_, self.n(top).mid];
        self.touch(2);
        tops.into_iter().find_map(|q| self.out_panel_only(pol, q, cut))
    }

    /// `(birth(q), q)` when the cut lies in its out-panel, that is, when
    /// every item between `q` and the cut stays above `birth(q)`. The lowest
    /// such item is either critical or next to the cut.
    fn out_panel_only(&mut self, pol: Polarity, q: NodeId, cut: Cut) -> Option<(NodeId, NodeId)> {
        if self.is_leaf(q) || self.n(q).spine == 0 {
            return None;
        }
        let p = self.birth(q);
        let right = self.right_of_cut(q, cut);
        if self.right_of_cut(p, cut) != right || self.lt(p, q) == right {
            return None;
        }
        let near = if right { cut.right } else { cut.left };
        if self.hi(near, pol) < self.h(p) {
            return None;
        }
        self.clear_to_cut(self.n(q).dn, self.h(p), right, cut).then_some((p, q))
    }

    /// Whether every item from trail node `x` down its trail, up to the
    /// cut, lies above `floor`. Each trail node is preceded by the subtree
    /// holding its birth, whose lowest item is that birth.
    fn clear_to_cut(&mut self, mut x: NodeId, floor: Height, right: bool, cut: Cut) -> bool {
        loop {
            self.touch(1);
            let before_cut = self.right_of_cut(x, cut) == right;
            if self.is_leaf(x) {
                return !before_cut || self.h(x) > floor;
            }
            let b = self.birth(x);
            if before_cut || self.right_of_cut(b, cut) == right {
                if self.h(b) < floor {
                    return false;
                }
                if !before_cut {
                    return true;
                }
                x = self.n(x).dn;
            } else {
                x = self.n(x).in_;
            }
        }
    }

    fn stacked(&self, (p, q): (NodeId, NodeId)) -> StackedBanana {
        StackedBanana { low: self.label_of(p), high: self.label_of(q), low_height: self.h(p), high_height: self.h(q) }
    }

    /// The stacks a cut after 1-based position `after` would load, without
    /// changing the list.
    pub fn split_stacks(&mut self, list: ListId, after: usize) -> Result<SplitStacks, BananaError> {
        let cut = self.cut_at(list, after)?;
        let raw = self.load_stacks(list, cut);
        let mut out = SplitStacks::default();
        for pol in Polarity::BOTH {
            for side in CutSide::ALL {
                out.stacks[pol.idx()][side.idx()] =
                    raw.s[pol.idx()][side.idx()].iter().map(|&e| self.stacked(e)).collect();
            }
            let w = self.work_stacks(pol, &raw, cut);
            for k in 0..2 {
                out.scares[pol.idx()][k] = w.scare[k].iter().map(|&e| self.stacked(e)).collect();
            }
        }
        Ok(out)
    }

    /// Cuts `list` after 1-based position `after`. The part with more items
    /// keeps the list id; both parts need at least two items.
    pub fn cut(&mut self, list: ListId, after: usize) -> Result<(ListId, ListId, EditOutcome), BananaError> {
        let cut = self.cut_at(list, after)?;
        self.trace.clear();
        let before = self.diagram(list);
        let (cost0, kprime0) = (self.cost, self.kprime);

        let ends = Polarity::BOTH.map(|pol| self.seam_ends(list, pol, cut));
        let raw = self.load_stacks(list, cut);
        let works = Polarity::BOTH.map(|pol| self.work_stacks(pol, &raw, cut));
        let mut seams = Vec::with_capacity(2);
        for (pol, work) in Polarity::BOTH.into_iter().zip(works) {
            let key = self.fresh_key();
            let alpha = self.new_item(self.it(cut.left).height, key, list);
            self.itm(alpha).crit = Crit::UpHook;
            self.link_after(list, cut.left, alpha);
            seams.push(self.split_tree(list, pol, alpha, work, &raw, cut));
        }

        let (gl, hl) = self.split_list(list, after, cut);
        let hooks = [self.ls(gl).hooks[1], self.ls(hl).hooks[0]];
        for (seam, end) in seams.into_iter().zip(ends) {
            self.lsm(gl).beta[seam.pol.idx()] = seam.left_root;
            self.lsm(hl).beta[seam.pol.idx()] = seam.right_root;
            self.close_seam(seam, end, cut, hooks);
        }
        self.flush_spine();

        let after_d = self.diagram(gl).union(&self.diagram(hl));
        let outcome = EditOutcome {
            k: diff(&before, &after_d),
            kprime: self.kprime - kprime0,
            counters: self.cost.since(&cost0),
            primitives: std::mem::take(&mut self.trace),
        };
        Ok((gl, hl, outcome))
    }

    /// The critical items of tree `pol` nearest the cut on each side, as
    /// `(item, is_min)`.
    fn seam_ends(&mut self, list: ListId, pol: Polarity, cut: Cut) -> [(ItemId, bool); 2] {
        let (ll, rl) = (self.it(cut.left).label, self.it(cut.right).label);
        [self.nearest_crit(list, pol, rl, Direction::Left), self.nearest_crit(list, pol, ll, Direction::Right)]
    }

    /// The critical item of tree `pol` nearest to `label` in direction
    /// `dir`, as `(item, is_min)`.
    fn nearest_crit(&mut self, list: ListId, pol: Polarity, label: u64, dir: Direction) -> (ItemId, bool) {
        let s = self.ls(list);
        let (mins, maxs) = match pol {
            Polarity::Up => (&s.minima, &s.maxima),
            Polarity::Down => (&s.maxima, &s.minima),
        };
        let found = match (mins.nearest(label, dir), maxs.nearest(label, dir)) {
            (Some(a), Some(b)) => {
                let a_nearer = (self.it(a).label > self.it(b).label) == (dir == Direction::Left);
                if a_nearer {
                    (a, true)
                } else {
                    (b, false)
                }
            }
            (Some(a), None) => (a, true),
            (None, Some(b)) => (b, false),
            (None, None) => unreachable!("endpoints are critical"),
        };
        self.cost.dict_ops += 2;
        found
    }

    /// Separates tree `pol` at the cut. Returns with both roots in place
    /// and the dummy leaf in one of the parts.
    fn split_tree(
        &mut self,
        list: ListId,
        pol: Polarity,
        alpha: ItemId,
        mut work: Work,
        raw: &RawStacks,
        cut: Cut,
    ) -> Seam {
        let beta = self.ls(list).beta[pol.idx()];
        let side = raw.last[pol.idx()];
        let &(_, top) = raw.s[pol.idx()][side].last().expect("stacks reach the spine");
        let new_left = self.is_root(top) || self.n(top).spine & LEFT != 0;
        let nb = self.new_node(ItemId::NIL, pol);
        let a = self.new_node(alpha, pol);
        let rv = self.n(beta).root_val;
        {
            let n = self.nm(nb);
            n.root_val = rv;
            n.spine = LEFT | RIGHT;
            n.in_ = a;
            n.mid = a;
            n.root_side = if new_left { -1 } else { 1 };
        }
        {
            let n = self.nm(a);
            n.in_ = nb;
            n.mid = nb;
            n.dth = nb;
            n.low = a;
        }
        if !new_left {
            self.flip_root(beta);
        }
        let (left_root, right_root) = if new_left { (nb, beta) } else { (beta, nb) };
        let mut seam = Seam { pol, a, alpha_left: new_left, left_root, right_root };
        while let Some((kind, p, q)) = work.pop_top(self) {
            match kind {
                Repair::Injury => self.injure(&mut seam, p, q, cut),
                Repair::Fatality => self.kill(&mut seam, p, q, cut),
                Repair::Scare => {
                    debug_assert_eq!(self.n(self.n(p).dth).low, seam.a, "scared banana hangs off the dummy leaf");
                    let pi = self.n(p).item;
                    self.min_interchange(pol, pi, alpha);
                }
            }
        }
        seam
    }

    /// Moves a special root to the other end of its items; in- and
    /// mid-trail of the special banana trade places.
    fn flip_root(&mut self, beta: NodeId) {
        let g = self.birth(beta);
        self.nm(beta).root_side = -self.n(beta).root_side;
        self.swap_trails(beta);
        self.swap_trails(g);
    }

    /// Sets the lower end of trail nodes `top` down to `bot`.
    fn relow(&mut self, top: NodeId, bot: NodeId, a: NodeId) {
        let mut x = top;
        loop {
            self.touch(1);
            self.set_low(x, a);
            if x == bot {
                return;
            }
            x = self.n(x).dn;
        }
    }

    /// The top of `q`'s in-trail that lies across the cut from `p` moves to
    /// the bottom of the dummy leaf's mid-trail.
    fn injure(&mut self, seam: &mut Seam, p: NodeId, q: NodeId, cut: Cut) {
        let right = self.right_of_cut(p, cut);
        debug_assert_eq!(seam.alpha_left, right, "injury feeds the part holding the dummy leaf");
        let top = self.n(q).in_;
        let mut bot = NodeId::NIL;
        let mut x = top;
        while x != p && self.right_of_cut(x, cut) != right {
            self.touch(1);
            bot = x;
            x = self.n(x).dn;
        }
        self.touch(1);
        if bot.is_nil() {
            return;
        }
        let a = seam.a;
        self.relow(top, bot, a);
        if x == p {
            self.set(p, Slot::In, q);
        } else {
            self.set(x, Slot::Up, q);
        }
        self.set(q, Slot::In, x);
        let b = self.n(a).dth;
        let m0 = self.n(a).mid;
        if m0 == b {
            self.set(b, Slot::Mid, top);
        } else {
            self.set(m0, Slot::Dn, top);
        }
        self.set(top, Slot::Up, m0);
        self.set(bot, Slot::Dn, a);
        self.set(a, Slot::Mid, bot);
        self.flush_spine();
    }

    /// `p` and `q` end up in different parts: `p` takes the dummy leaf's
    /// place and the dummy leaf pairs with `q`. The two leaf nodes trade
    /// items so that only nodes moving with `p` need a new lower end.
    fn kill(&mut self, seam: &mut Seam, p: NodeId, q: NodeId, cut: Cut) {
        let a = seam.a;
        let b = self.n(a).dth;
        let p_right = self.right_of_cut(p, cut);
        debug_assert_eq!(seam.alpha_left, !p_right, "the dummy leaf waits on the lower end's side");
        let t_top = self.n(q).mid;
        let mut t_bot = NodeId::NIL;
        let mut x = t_top;
        while x != p && self.right_of_cut(x, cut) != p_right {
            self.touch(1);
            t_bot = x;
            x = self.n(x).dn;
        }
        let b_top = x;
        let b_bot = self.n(p).mid;
        let (in_top, in_bot) = (self.n(q).in_, self.n(p).in_);
        let ma_bot = self.n(a).mid;
        self.touch(4);
        self.swap_items(a, p);

        if in_top != p {
            if ma_bot == b {
                self.set(b, Slot::Mid, in_top);
            } else {
                self.set(ma_bot, Slot::Dn, in_top);
            }
            self.set(in_top, Slot::Up, ma_bot);
            self.set(in_bot, Slot::Dn, a);
            self.set(a, Slot::Mid, in_bot);
            self.relow(in_top, in_bot, a);
        }
        if b_top != p {
            self.set(b, Slot::In, b_top);
            self.set(b_top, Slot::Up, b);
            self.set(b_bot, Slot::Dn, a);
            self.set(a, Slot::In, b_bot);
            self.relow(b_top, b_bot, a);
        } else {
            self.set(b, Slot::In, a);
            self.set(a, Slot::In, b);
        }
        if t_bot.is_nil() {
            self.set(q, Slot::Mid, p);
            self.set(p, Slot::Mid, q);
        } else {
            self.set(t_bot, Slot::Dn, p);
            self.set(p, Slot::Mid, t_bot);
        }
        self.set(q, Slot::In, p);
        self.set(p, Slot::In, q);
        seam.a = p;
        seam.alpha_left = !seam.alpha_left;
        self.flush_spine();
    }

    /// Splits the item chain, the dictionaries and the list state at the
    /// cut, adding a hook on each side of it and dropping the dummy items.
    /// Items of the smaller part move to a new list id.
    fn split_list(&mut self, list: ListId, after: usize, cut: Cut) -> (ListId, ListId) {
        let len = self.ls(list).len;
        let big_left = after >= len - after;
        let fresh = self.new_list();
        let (gl, hl) = if big_left { (list, fresh) } else { (fresh, list) };
        let (l, r) = (cut.left, cut.right);

        let mut x = self.it(l).next;
        while x != r {
            let nx = self.it(x).next;
            self.unlink(x);
            self.itm(x).alive = false;
            x = nx;
        }
        let hg = self.seam_hook(list, l, self.it(l).prev);
        self.link_after(list, l, hg);
        let hh = self.seam_hook(list, r, self.it(r).next);
        self.link_after(list, hg, hh);
        self.itm(hg).next = ItemId::NIL;
        self.itm(hh).prev = ItemId::NIL;

        let ll = self.it(l).label;
        let old = self.lsm(list);
        let (rmin, rmax) = (old.minima.split_after(ll), old.maxima.split_after(ll));
        let g = ListState {
            head: old.head,
            tail: l,
            hooks: [old.hooks[0], hg],
            len: after,
            beta: [NodeId::NIL; 2],
            minima: std::mem::take(&mut old.minima),
            maxima: std::mem::take(&mut old.maxima),
        };
        let h = ListState {
            head: r,
            tail: old.tail,
            hooks: [hh, old.hooks[1]],
            len: len - after,
            beta: [NodeId::NIL; 2],
            minima: rmin,
            maxima: rmax,
        };
        self.cost.dict_ops += 2;
        self.lists[gl.ix()] = Some(g);
        self.lists[hl.ix()] = Some(h);
        let mut i = self.first_member(fresh);
        while !i.is_nil() {
            self.itm(i).list = fresh;
            i = self.it(i).next;
        }
        for e in [l, r] {
            let c = self.local_crit(e);
            self.set_crit(e, c);
        }
        (gl, hl)
    }

    /// A hook for new endpoint `e`, one step toward its neighbour `nb`.
    fn seam_hook(&mut self, list: ListId, e: ItemId, nb: ItemId) -> ItemId {
        let he = self.it(e).height;
        let hh = if self.it(nb).height > he { he.offset(1) } else { he.offset(-1) };
        let key = self.fresh_key();
        let h = self.new_item(hh, key, list);
        self.itm(h).crit = if hh < he { Crit::UpHook } else { Crit::DownHook };
        h
    }

    /// Final touches on one tree: the left root returns to the right of its
    /// items, the dummy leaf becomes the new leaf on the side next to a
    /// maximum, and the side next to a minimum grows an end maximum if its
    /// endpoint was not critical.
    fn close_seam(&mut self, seam: Seam, ends: [(ItemId, bool); 2], cut: Cut, hooks: [ItemId; 2]) {
        let pol = seam.pol;
        self.flip_root(seam.left_root);
        let [(cl, l_min), (cr, r_min)] = ends;
        debug_assert_ne!(l_min, r_min);
        debug_assert_eq!(seam.alpha_left, r_min, "dummy leaf ends beside the maximum");
        let leaf = if r_min {
            if cl == cut.left {
                hooks[0]
            } else {
                cut.left
            }
        } else if cr == cut.right {
            hooks[1]
        } else {
            cut.right
        };
        self.retag(seam.a, leaf);
        if l_min && cl != cut.left {
            self.grow_end(pol, cut.left, cl, hooks[0]);
        }
        if r_min && cr != cut.right {
            self.grow_end(pol, cut.right, cr, hooks[1]);
        }
    }

    /// Endpoint `e` becomes a maximum over its hook. Being outermost, it
    /// tops the trail facing it of the lowest minimum it now encloses,
    /// found by climbing from neighbouring minimum `c` past every upper
    /// end below `e`.
    fn grow_end(&mut self, pol: Polarity, e: ItemId, c: ItemId, hook: ItemId) {
        let he = self.hi(e, pol);
        let mut m = self.node_of(c, pol);
        loop {
            self.touch(1);
            let u = self.n(m).dth;
            if self.h(u) > he {
                break;
            }
            m = self.n(u).low;
        }
        let ne = self.new_node(e, pol);
        let u = self.n(m).dth;
        let k = self.side_trail(m, self.item_pos(e));
        self.link_top(ne, u, k);
        self.hook_banana(hook, ne, pol);
    }

    /// Concatenates `left` and `right` into one list, which keeps the id of
    /// the longer input; the other id is retired.
    pub fn concatenate(&mut self, left: ListId, right: ListId) -> Result<(ListId, EditOutcome), BananaError> {
        self.check_list(left)?;
        self.check_list(right)?;
        if left == right {
            return Err(BananaError::Ordering);
        }
        self.trace.clear();
        let before = self.diagram(left).union(&self.diagram(right));
        let (cost0, kprime0) = (self.cost, self.kprime);
        let (nl, nr) = (self.ls(left).len, self.ls(right).len);
        let keep = if nl >= nr { left } else { right };
        let gone = if keep == left { right } else { left };
        if nl < 2 || nr < 2 {
            for (l, side) in [(left, 1), (right, 0)] {
                let h = self.ls(l).hooks[side];
                if !h.is_nil() {
                    self.unlink(h);
                    self.itm(h).alive = false;
                    self.lsm(l).hooks[side] = ItemId::NIL;
                }
            }
            self.join_chains(left, right, keep, gone);
            self.install(keep);
        } else {
            self.glue(left, right, keep, gone);
        }
        let outcome = EditOutcome {
            k: diff(&before, &self.diagram(keep)),
            kprime: self.kprime - kprime0,
            counters: self.cost.since(&cost0),
            primitives: std::mem::take(&mut self.trace),
        };
        Ok((keep, outcome))
    }

    /// Moves the members of `gone` into `keep` behind or ahead of its own,
    /// relabelling only the moved members unless labels run out. Inner
    /// hooks stay linked; the caller removes them.
    fn join_chains(&mut self, left: ListId, right: ListId, keep: ListId, gone: ListId) {
        let last_left = {
            let s = self.ls(left);
            if s.hooks[1].is_nil() {
                s.tail
            } else {
                s.hooks[1]
            }
        };
        let first_right = self.first_member(right);
        let moved = self.members(gone);
        let mut g = self.lists[gone.ix()].take().expect("live list");
        let mut dense = false;
        if !moved.is_empty() {
            let count = moved.len() as u64;
            let room = (count + 1).saturating_mul(LABEL_GAP);
            let (lo, hi) = if gone == right {
                let lo = if last_left.is_nil() { 0 } else { self.it(last_left).label };
                (lo, lo.saturating_add(room))
            } else if first_right.is_nil() {
                (0, u64::MAX)
            } else {
                let hi = self.it(first_right).label;
                (hi.saturating_sub(room), hi)
            };
            let step = (hi - lo) / (count + 1);
            dense = step < 2;
            for (k, &i) in moved.iter().enumerate() {
                let it = self.itm(i);
                it.list = keep;
                if !dense {
                    it.label = lo + step * (k as u64 + 1);
                }
            }
        }
        if !last_left.is_nil() && !first_right.is_nil() {
            self.itm(last_left).next = first_right;
            self.itm(first_right).prev = last_left;
        }
        for i in g.minima.drain().into_iter().chain(g.maxima.drain()) {
            let (label, crit) = (self.it(i).label, self.it(i).crit);
            let k = self.lsm(keep);
            if crit == Crit::Minimum {
                k.minima.insert(label, i);
            } else {
                k.maxima.insert(label, i);
            }
            self.cost.dict_ops += 1;
        }
        let k = self.lsm(keep);
        let (l, r) = if gone == left { (&g, &*k) } else { (&*k, &g) };
        let head = if l.head.is_nil() { r.head } else { l.head };
        let tail = if r.tail.is_nil() { l.tail } else { r.tail };
        let hooks = [l.hooks[0], r.hooks[1]];
        k.head = head;
        k.tail = tail;
        k.hooks = hooks;
        k.len += g.len;
        if dense {
            let all = self.members(keep);
            let n = all.len() as u64;
            self.spread(all[0], all[all.len() - 1], n, 0, u64::MAX);
        }
    }

    /// Glues the trees of two lists with at least two items each.
    fn glue(&mut self, left: ListId, right: ListId, keep: ListId, gone: ListId) {
        let (l, r) = (self.ls(left).tail, self.ls(right).head);
        let hooks = [self.ls(left).hooks[1], self.ls(right).hooks[0]];
        let roots = [self.ls(left).beta, self.ls(right).beta];
        let ends = Polarity::BOTH.map(|pol| {
            [self.glued_end(left, pol, l, self.it(l).prev, r), self.glued_end(right, pol, r, self.it(r).next, l)]
        });
        self.join_chains(left, right, keep, gone);
        for (pol, end) in Polarity::BOTH.into_iter().zip(ends) {
            let key = self.fresh_key();
            let alpha = self.new_item(self.it(l).height, key, keep);
            self.itm(alpha).crit = Crit::UpHook;
            self.link_after(keep, hooks[0], alpha);
            let root = self.glue_tree(pol, alpha, [roots[0][pol.idx()], roots[1][pol.idx()]], end, [l, r], hooks);
            self.lsm(keep).beta[pol.idx()] = root;
        }
        let mut x = hooks[0];
        while x != r {
            let nx = self.it(x).next;
            self.unlink(x);
            self.itm(x).alive = false;
            x = nx;
        }
        for e in [l, r] {
            let c = self.local_crit(e);
            self.set_crit(e, c);
        }
        self.flush_spine();
    }

    /// The critical item of tree `pol` nearest the seam on the side of
    /// endpoint `e` once `e` gains neighbour `across`; `inner` is its
    /// neighbour inside its own list.
    fn glued_end(&mut self, list: ListId, pol: Polarity, e: ItemId, inner: ItemId, across: ItemId) -> (ItemId, bool) {
        let he = self.hi(e, pol);
        let (a, b) = (self.hi(inner, pol), self.hi(across, pol));
        if he < a && he < b {
            return (e, true);
        }
        if he > a && he > b {
            return (e, false);
        }
        let dir = if self.it(inner).label < self.it(e).label { Direction::Left } else { Direction::Right };
        self.nearest_crit(list, pol, self.it(e).label, dir)
    }

    /// Undoes, in tree `pol`, what closing and splitting at the seam did,
    /// from the lowest repaired banana up. Returns the surviving root.
    fn glue_tree(
        &mut self,
        pol: Polarity,
        alpha: ItemId,
        roots: [NodeId; 2],
        ends: [(ItemId, bool); 2],
        seam: [ItemId; 2],
        hooks: [ItemId; 2],
    ) -> NodeId {
        let [(cl, l_min), (cr, r_min)] = ends;
        debug_assert_ne!(l_min, r_min);
        if l_min && cl != seam[0] {
            self.cancel(pol, hooks[0], seam[0]);
        }
        if r_min && cr != seam[1] {
            self.cancel(pol, hooks[1], seam[1]);
        }
        let leaf = if r_min {
            if cl == seam[0] {
                hooks[0]
            } else {
                seam[0]
            }
        } else if cr == seam[1] {
            hooks[1]
        } else {
            seam[1]
        };
        let mut a = self.node_of(leaf, pol);
        self.retag(a, alpha);
        self.flip_root(roots[0]);
        let c_o = if r_min { cr } else { cl };
        let mut qo = self.n(self.node_of(c_o, pol)).dth;
        loop {
            self.touch(1);
            let qa = self.n(a).dth;
            if self.is_root(qa) && self.n(qa).in_ == a && self.n(qa).mid == a {
                self.release(a);
                let survivor = if qa == roots[0] { roots[1] } else { roots[0] };
                if self.n(survivor).root_side < 0 {
                    self.flip_root(survivor);
                }
                return survivor;
            }
            if self.max_below(qo, qa) {
                let p = self.birth(qo);
                self.undo_injury(a, p, qo);
                if !self.is_root(qo) {
                    qo = self.n(self.n(qo).low).dth;
                }
            } else {
                let pl = self.n(qa).low;
                let pb = self.birth(qo);
                if !pl.is_nil() && self.h(pl) > self.h(pb) {
                    let pi = self.n(pl).item;
                    self.min_interchange(pol, alpha, pi);
                } else {
                    let next = if self.is_root(qa) { qa } else { self.n(self.n(qa).low).dth };
                    a = self.undo_fatality(a, pb, qa, qo);
                    qo = next;
                }
            }
        }
    }

    /// Order of upper ends during glue; of two special roots the right one
    /// counts as lower.
    fn max_below(&self, x: NodeId, y: NodeId) -> bool {
        let (hx, hy) = (self.h(x), self.h(y));
        hx < hy || (hx == hy && self.is_root(x) && self.n(x).root_side > 0)
    }

    /// The bottom of the dummy leaf's mid-trail below `q` returns to the top
    /// of `q`'s in-trail.
    fn undo_injury(&mut self, a: NodeId, p: NodeId, q: NodeId) {
        let b = self.n(a).dth;
        let hq = self.h(q);
        let mut top = NodeId::NIL;
        let mut x = self.n(a).mid;
        while x != b && self.h(x) < hq {
            self.touch(1);
            top = x;
            x = self.n(x).up;
        }
        self.touch(1);
        if top.is_nil() {
            return;
        }
        let bot = self.n(a).mid;
        if x == b {
            self.set(b, Slot::Mid, a);
            self.set(a, Slot::Mid, b);
        } else {
            self.set(x, Slot::Dn, a);
            self.set(a, Slot::Mid, x);
        }
        let old = self.n(q).in_;
        self.set(q, Slot::In, top);
        self.set(top, Slot::Up, q);
        self.set(bot, Slot::Dn, old);
        if old == p {
            self.set(p, Slot::In, bot);
        } else {
            self.set(old, Slot::Up, bot);
        }
        self.relow(top, bot, p);
        self.flush_spine();
    }

    /// The dummy leaf `a`, paired with `q`, trades places with `p`, paired
    /// with `b`: the bottom of `p`'s mid-trail below `q` and all of its
    /// in-trail return to `q`'s banana. Returns the dummy leaf's new node.
    fn undo_fatality(&mut self, a: NodeId, p: NodeId, q: NodeId, b: NodeId) -> NodeId {
        let hq = self.h(q);
        let (t_top, t_bot) = (self.n(q).mid, self.n(a).mid);
        let mut i_top = NodeId::NIL;
        let mut x = self.n(p).mid;
        while x != b && self.h(x) < hq {
            self.touch(1);
            i_top = x;
            x = self.n(x).up;
        }
        let i_bot = self.n(p).mid;
        let ma_bot = x;
        let (b_top, b_bot) = (self.n(b).in_, self.n(p).in_);
        self.touch(4);
        self.swap_items(p, a);
        let (na, np) = (p, a);

        if ma_bot == b {
            self.set(b, Slot::Mid, na);
            self.set(na, Slot::Mid, b);
        } else {
            self.set(ma_bot, Slot::Dn, na);
            self.set(na, Slot::Mid, ma_bot);
        }
        self.set(b, Slot::In, na);
        self.set(na, Slot::In, b);

        if i_top.is_nil() {
            self.set(q, Slot::In, np);
            self.set(np, Slot::In, q);
        } else {
            self.set(q, Slot::In, i_top);
            self.set(i_top, Slot::Up, q);
            self.set(i_bot, Slot::Dn, np);
            self.set(np, Slot::In, i_bot);
            self.relow(i_top, i_bot, np);
        }
        let t_empty = t_top == a;
        if b_top != p {
            if t_empty {
                self.set(q, Slot::Mid, b_top);
                self.set(b_top, Slot::Up, q);
            } else {
                self.set(t_bot, Slot::Dn, b_top);
                self.set(b_top, Slot::Up, t_bot);
            }
            self.set(b_bot, Slot::Dn, np);
            self.set(np, Slot::Mid, b_bot);
            self.relow(b_top, b_bot, np);
        } else if t_empty {
            self.set(q, Slot::Mid, np);
            self.set(np, Slot::Mid, q);
        }
        self.flush_spine();
        na
    }
}
