//! Decorated rooted trees obtained by snipping a long-knot diagram.
//!
//! Snipping the strand just before every second passage turns the diagram
//! into a tree: crossings become 4-valent nodes, the 2n+1 strand intervals
//! and n stubs become arcs, and the snips leave paired leaves.  The tree
//! keeps the source diagram, so gluing back is exact and `glue(snip(d)) = d`
//! holds structurally.
//!
//! Each node carries a planar rotation (counterclockwise slot order) read
//! off the crossing sign and first-passage role; "right first" traversal and
//! the boundary walk are derived from it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::diagram::{ChordId, ChordKind, GaussDiagram, Role};
use crate::error::{Error, Result};
use crate::formal::FormalSum;

/// Attachment points of an arc on a node.  `Stub` is the short edge left at
/// the crossing by the snip; the matching strand end is the cut leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    FirstIn,
    FirstOut,
    SecondOut,
    Stub,
}

/// Degree-one vertices.  `Cut(i)` and `Stub(i)` form leaf pair `i`, numbered
/// by the order of second passages along the strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Leaf {
    Root,
    End,
    Cut(usize),
    Stub(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcEnd {
    Leaf(Leaf),
    Node(ChordId, Slot),
}

/// One tree arc.  Strand arcs point along the strand; stub arcs point from
/// the node to the stub leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeArc {
    pub tail: ArcEnd,
    pub head: ArcEnd,
}

/// A snipped diagram.  The underlying diagram is kept whole; nodes, arcs,
/// rotation and traversal order are all derived views.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    diagram: GaussDiagram,
    arcs: Vec<TreeArc>,
    /// pair index (1-based) -> chord id, in second-passage order
    pairs: Vec<ChordId>,
}

/// Snip the diagram before every second passage.
pub fn c(d: &GaussDiagram) -> Tree {
    Tree::from_diagram(d.clone())
}

/// Glue the leaf pairs back together.
pub fn k(t: &Tree) -> GaussDiagram {
    t.diagram().clone()
}

impl Tree {
    pub fn from_diagram(diagram: GaussDiagram) -> Tree {
        let mut seen: BTreeSet<ChordId> = BTreeSet::new();
        let mut pairs: Vec<ChordId> = Vec::new();
        let mut arcs: Vec<TreeArc> = Vec::new();
        let mut tail = ArcEnd::Leaf(Leaf::Root);
        for p in diagram.passages() {
            if seen.insert(p.chord) {
                arcs.push(TreeArc {
                    tail,
                    head: ArcEnd::Node(p.chord, Slot::FirstIn),
                });
                tail = ArcEnd::Node(p.chord, Slot::FirstOut);
            } else {
                pairs.push(p.chord);
                let pair = pairs.len();
                arcs.push(TreeArc {
                    tail,
                    head: ArcEnd::Leaf(Leaf::Cut(pair)),
                });
                tail = ArcEnd::Node(p.chord, Slot::SecondOut);
            }
        }
        arcs.push(TreeArc {
            tail,
            head: ArcEnd::Leaf(Leaf::End),
        });
        for (i, &chord) in pairs.iter().enumerate() {
            arcs.push(TreeArc {
                tail: ArcEnd::Node(chord, Slot::Stub),
                head: ArcEnd::Leaf(Leaf::Stub(i + 1)),
            });
        }
        Tree {
            diagram,
            arcs,
            pairs,
        }
    }

    pub fn diagram(&self) -> &GaussDiagram {
        &self.diagram
    }

    pub fn arcs(&self) -> &[TreeArc] {
        &self.arcs
    }

    pub fn node_count(&self) -> usize {
        self.diagram.chord_count()
    }

    /// Chord of leaf pair `i` (1-based).
    pub fn pair_chord(&self, pair: usize) -> Option<ChordId> {
        self.pairs.get(pair - 1).copied()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Pair index of a chord (1-based), by second-passage order.
    pub fn pair_of(&self, chord: ChordId) -> Option<usize> {
        self.pairs.iter().position(|&c| c == chord).map(|i| i + 1)
    }

    /// Node decoration: first-passage role and chord sign.
    pub fn decoration(&self, chord: ChordId) -> Option<(Role, i8)> {
        let role = self.diagram.first_role(chord)?;
        let sign = self.diagram.chord(chord)?.sign;
        Some((role, sign))
    }

    /// Counterclockwise slot order at a node.  A crossing whose sign agrees
    /// with its first passage being over-like turns one way, the other three
    /// decoration combinations reduce to the same two patterns.
    pub fn rotation(&self, chord: ChordId) -> Option<[Slot; 4]> {
        let (role, sign) = self.decoration(chord)?;
        Some(if role.is_over_like() == (sign > 0) {
            [Slot::FirstOut, Slot::SecondOut, Slot::FirstIn, Slot::Stub]
        } else {
            [Slot::FirstOut, Slot::Stub, Slot::FirstIn, Slot::SecondOut]
        })
    }

    fn arc_at(&self, chord: ChordId, slot: Slot) -> Option<(usize, bool)> {
        let target = ArcEnd::Node(chord, slot);
        self.arcs.iter().enumerate().find_map(|(i, a)| {
            if a.tail == target {
                Some((i, true))
            } else if a.head == target {
                Some((i, false))
            } else {
                None
            }
        })
    }

    /// Boundary walk of the single face, as darts `(arc, forward)` starting
    /// along the root arc.  At a node the walk takes the next slot clockwise
    /// from the one it entered on; at a leaf it turns around.
    pub fn boundary_walk(&self) -> Vec<(usize, bool)> {
        if self.arcs.len() == 1 {
            return vec![(0, true), (0, false)];
        }
        let start = (0usize, true);
        let mut walk = Vec::with_capacity(2 * self.arcs.len());
        let mut dart = start;
        loop {
            walk.push(dart);
            let reached = if dart.1 {
                self.arcs[dart.0].head
            } else {
                self.arcs[dart.0].tail
            };
            dart = match reached {
                ArcEnd::Leaf(_) => (dart.0, !dart.1),
                ArcEnd::Node(chord, slot) => {
                    let rot = self.rotation(chord).expect("node has decoration");
                    let idx = rot.iter().position(|&s| s == slot).expect("slot in rotation");
                    let next = rot[(idx + 3) % 4];
                    let (arc, at_tail) = self.arc_at(chord, next).expect("slot has arc");
                    (arc, at_tail)
                }
            };
            if dart == start {
                break;
            }
        }
        walk
    }

    /// Arcs in first-encounter order of the right-first traversal from the
    /// root; a permutation of all arc ids.
    pub fn arc_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.arcs.len()];
        let mut order = Vec::with_capacity(self.arcs.len());
        for (arc, _) in self.boundary_walk() {
            if !seen[arc] {
                seen[arc] = true;
                order.push(arc);
            }
        }
        order
    }

    /// Leaves in boundary-walk cyclic order, starting at the root.
    pub fn boundary_leaves(&self) -> Vec<Leaf> {
        let mut out = vec![Leaf::Root];
        for (arc, forward) in self.boundary_walk() {
            let reached = if forward {
                self.arcs[arc].head
            } else {
                self.arcs[arc].tail
            };
            if let ArcEnd::Leaf(l) = reached {
                if l != Leaf::Root {
                    out.push(l);
                }
            }
        }
        out
    }

    /// Node-to-node adjacency through single strand arcs.  Arcs through
    /// leaves do not connect nodes.
    fn node_adjacency(&self) -> BTreeMap<ChordId, Vec<ChordId>> {
        let mut adj: BTreeMap<ChordId, Vec<ChordId>> = BTreeMap::new();
        for id in self.diagram.chord_ids() {
            adj.entry(id).or_default();
        }
        for a in &self.arcs {
            if let (ArcEnd::Node(x, _), ArcEnd::Node(y, _)) = (a.tail, a.head) {
                adj.entry(x).or_default().push(y);
                adj.entry(y).or_default().push(x);
            }
        }
        adj
    }

    fn path_between(&self, from: ChordId, to: ChordId) -> Vec<ChordId> {
        let adj = self.node_adjacency();
        let mut prev: BTreeMap<ChordId, ChordId> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut visited = BTreeSet::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &w in &adj[&v] {
                if visited.insert(w) {
                    prev.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = prev[&v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Node whose outgoing strand arc was snipped to make cut leaf `pair`.
    fn cut_host(&self, pair: usize) -> Option<ChordId> {
        self.arcs.iter().find_map(|a| match (a.tail, a.head) {
            (ArcEnd::Node(x, _), ArcEnd::Leaf(Leaf::Cut(i))) if i == pair => Some(x),
            _ => None,
        })
    }

    /// Nodes of the minimal connected subtree spanning every double node
    /// together with the reattachment point of its second passage (the node
    /// hosting its cut leaf).  A double point occupies both of its passages,
    /// so the strand interval feeding its second passage belongs to its
    /// locus; real crossings sitting on such an interval keep the tree from
    /// being descending.
    pub fn minimal_double_subtree(&self) -> Result<BTreeSet<ChordId>> {
        let doubles = self.diagram.double_chords();
        if doubles.is_empty() {
            return Err(Error::NoDoubles);
        }
        let mut targets: Vec<ChordId> = doubles.clone();
        for (i, &chord) in self.pairs.iter().enumerate() {
            if self.diagram.chord(chord).map(|c| c.kind) == Some(ChordKind::Double) {
                if let Some(host) = self.cut_host(i + 1) {
                    targets.push(host);
                }
            }
        }
        let mut nodes: BTreeSet<ChordId> = BTreeSet::new();
        for &d in &targets {
            for v in self.path_between(doubles[0], d) {
                nodes.insert(v);
            }
        }
        Ok(nodes)
    }

    /// Every real node first met as an over crossing, and no real crossing
    /// entangled with the double-point locus: a real chord that opens
    /// before a double point and closes inside its span pins the strand
    /// interval feeding the double and cannot be undone by descending
    /// moves.  A real chord opening inside a double's span is harmless.
    pub fn is_descending(&self) -> bool {
        for id in self.diagram.real_chords() {
            if self.diagram.first_role(id) != Some(Role::Over) {
                return false;
            }
        }
        for r in self.diagram.real_chords() {
            let (a, c) = self.diagram.positions(r).expect("real chord present");
            for x in self.diagram.double_chords() {
                let (b, d) = self.diagram.positions(x).expect("double chord present");
                if a < b && b < c && c < d {
                    return false;
                }
            }
        }
        true
    }

    /// Parenthesized form: each node prints its decoration and the subtrees
    /// hanging off its other slots in right-first order from the entry slot.
    pub fn to_text(&self) -> String {
        let mut s = String::from("root-");
        self.render(0, true, &mut s);
        s
    }

    fn render(&self, arc: usize, forward: bool, out: &mut String) {
        let reached = if forward {
            self.arcs[arc].head
        } else {
            self.arcs[arc].tail
        };
        match reached {
            ArcEnd::Leaf(Leaf::Root) => out.push_str("root"),
            ArcEnd::Leaf(Leaf::End) => out.push_str("end"),
            ArcEnd::Leaf(Leaf::Cut(i)) => out.push_str(&format!("cut{}", i)),
            ArcEnd::Leaf(Leaf::Stub(i)) => out.push_str(&format!("stub{}", i)),
            ArcEnd::Node(chord, slot) => {
                let (role, sign) = self.decoration(chord).expect("node decorated");
                let letter = match role {
                    Role::Over => "O",
                    Role::Under => "U",
                    Role::DOver | Role::DUnder => "D",
                };
                out.push_str(letter);
                out.push(if sign > 0 { '+' } else { '-' });
                out.push('[');
                let rot = self.rotation(chord).expect("node decorated");
                let idx = rot.iter().position(|&s| s == slot).expect("slot");
                for step in 1..4 {
                    if step > 1 {
                        out.push(',');
                    }
                    let next = rot[(idx + 4 - step) % 4];
                    let (a, at_tail) = self.arc_at(chord, next).expect("slot has arc");
                    self.render(a, at_tail, out);
                }
                out.push(']');
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// A sum is descending when snipping every term gives a descending tree.
pub fn is_descending_sum(x: &FormalSum<String>) -> Result<bool> {
    for (key, _) in x.iter() {
        let d = GaussDiagram::parse(key)?;
        if !c(&d).is_descending() {
            return Ok(false);
        }
    }
    Ok(true)
}
