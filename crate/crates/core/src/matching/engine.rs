//! The streaming matching engine.
//!
//! Pass 0 builds a matching greedily: an arriving edge is taken when both
//! ends are exposed, or (weighted streams only) when it outweighs the matched
//! edges it would displace.
//!
//! Each later round searches for vertex-disjoint augmentations with at most
//! `k` non-matching edges (paths of length ≤ 2k−1). Labels live in layers:
//! a layer-`d` label at vertex `x` is a simple alternating path with `d`
//! non-matching edges that leaves `x` exposed. Layer 0 holds exposed
//! vertices and, on weighted streams, every matched edge opened at one end.
//! Pass `j` of a round
//!
//! * joins a layer-`p` label at `x` and a layer-`q` label at `y` with
//!   `p + q = j − 1` through an arriving edge `(x, y)`,
//! * closes alternating cycles back to a label's opened root (weighted),
//! * extends layer `j − 1` through `(x, y)` and `y`'s matched edge into a
//!   layer-`j` label at `mate(y)`.
//!
//! Augmentations are accepted in discovery order when their vertices are
//! still unclaimed in the round, so earlier stream positions win ties, and
//! the first candidates found in a round are the ones with fewest edges.
//! They are applied together when the round ends. Every vertex keeps at most
//! [`SLOTS`] labels per layer (the best gains, distinct roots), which keeps
//! resident memory at `O(n·k)` words.

use crate::error::Result;
use crate::graph::{Edge, Matching, VertexId};
use crate::matching::{ApproxParams, ContractionView};
use crate::stream::{MemoryMeter, PassVisitor, StreamSession};

const SLOTS: usize = 2;
/// gain, root, root flag, pred vertex, pred slot, entry, via edge (u, v, w, pos)
const LABEL_WORDS: u64 = 10;
/// partner, edge (u, v, w), position
const MATE_WORDS: u64 = 5;

#[derive(Clone, Debug)]
pub struct EngineRun {
    pub matching: Matching,
    pub passes: usize,
    pub rounds: usize,
    pub augmentations: usize,
}

/// Unweighted `(1−ε)`-approximate maximum matching of the (viewed) stream.
pub fn streaming_max_matching(
    session: &mut StreamSession<'_>,
    params: &ApproxParams,
    view: Option<&ContractionView>,
) -> Result<EngineRun> {
    Engine::new(session, params, view, false).run(session)
}

/// Weighted `(1−ε)`-approximate maximum weight matching of the (viewed)
/// stream. Parallel edges under a view compete on weight.
pub fn streaming_max_weight_matching(
    session: &mut StreamSession<'_>,
    params: &ApproxParams,
    view: Option<&ContractionView>,
) -> Result<EngineRun> {
    Engine::new(session, params, view, true).run(session)
}

#[derive(Clone, Copy, Debug)]
struct Mate {
    partner: VertexId,
    edge: Edge,
    pos: usize,
}

#[derive(Clone, Copy, Debug)]
struct Label {
    gain: i64,
    /// First vertex of the path: the exposed start, or the far end of the
    /// matched edge the path opens with.
    root: VertexId,
    root_opened: bool,
    /// (vertex, slot) in the previous layer.
    pred: Option<(VertexId, usize)>,
    /// Vertex entered by the non-matching edge; its mate is the label vertex.
    entry: VertexId,
    via: Option<(Edge, usize)>,
}

#[derive(Clone, Debug, Default)]
struct Augmentation {
    add: Vec<(VertexId, VertexId, Edge, usize)>,
    remove: Vec<VertexId>,
}

impl Augmentation {
    fn words(&self) -> u64 {
        6 * self.add.len() as u64 + self.remove.len() as u64 + 1
    }
}

struct Engine<'v> {
    view: Option<&'v ContractionView>,
    n_orig: usize,
    nv: usize,
    weighted: bool,
    k: usize,
    max_rounds: usize,
    mate: Vec<Option<Mate>>,
}

impl<'v> Engine<'v> {
    fn new(
        session: &StreamSession<'_>,
        params: &ApproxParams,
        view: Option<&'v ContractionView>,
        weighted: bool,
    ) -> Self {
        let n_orig = session.source().n();
        let nv = view.map_or(n_orig, |v| v.super_count());
        Engine {
            view,
            n_orig,
            nv,
            weighted,
            k: params.k(),
            max_rounds: 2 * params.k() - 1,
            mate: vec![None; nv],
        }
    }

    fn endpoints(&self, e: &Edge) -> Option<(VertexId, VertexId)> {
        match self.view {
            Some(view) => view.view_edge(e),
            None => Some((e.u, e.v)),
        }
    }

    fn weight(&self, e: &Edge) -> i64 {
        if self.weighted {
            e.weight as i64
        } else {
            1
        }
    }

    fn set_mate(&mut self, a: VertexId, b: VertexId, edge: Edge, pos: usize) {
        self.mate[a] = Some(Mate {
            partner: b,
            edge,
            pos,
        });
        self.mate[b] = Some(Mate {
            partner: a,
            edge,
            pos,
        });
    }

    fn unmatch(&mut self, a: VertexId) {
        if let Some(m) = self.mate[a].take() {
            self.mate[m.partner] = None;
        }
    }

    fn run(mut self, session: &mut StreamSession<'_>) -> Result<EngineRun> {
        let start_passes = session.passes_used();
        let mate_words = MATE_WORDS * self.nv as u64;
        session.charge_memory(mate_words)?;

        session.run_pass(&mut GreedyPass { engine: &mut self })?;

        let mut rounds = 0;
        let mut augmentations = 0;
        while rounds < self.max_rounds {
            rounds += 1;
            let found = self.round(session)?;
            augmentations += found;
            if found == 0 {
                break;
            }
        }

        let mut edges: Vec<(VertexId, Edge)> = (0..self.nv)
            .filter_map(|a| self.mate[a].filter(|m| a < m.partner).map(|m| (a, m.edge)))
            .collect();
        edges.sort_by_key(|&(a, _)| a);
        let matching = Matching::from_edges(self.n_orig, edges.into_iter().map(|(_, e)| e))?;
        session.release_memory(mate_words)?;
        Ok(EngineRun {
            matching,
            passes: session.passes_used() - start_passes,
            rounds,
            augmentations,
        })
    }

    /// One augmentation round; returns the number of augmentations applied.
    fn round(&mut self, session: &mut StreamSession<'_>) -> Result<usize> {
        let mut layer0: Vec<Vec<Label>> = vec![Vec::new(); self.nv];
        let mut label_count = 0u64;
        for (x, slots) in layer0.iter_mut().enumerate() {
            match self.mate[x] {
                None => slots.push(Label {
                    gain: 0,
                    root: x,
                    root_opened: false,
                    pred: None,
                    entry: x,
                    via: None,
                }),
                Some(m) if self.weighted => slots.push(Label {
                    gain: -(m.edge.weight as i64),
                    root: m.partner,
                    root_opened: true,
                    pred: None,
                    entry: x,
                    via: None,
                }),
                Some(_) => continue,
            }
            label_count += 1;
        }
        let claimed_words = self.nv as u64;
        session.charge_memory(LABEL_WORDS * label_count + claimed_words)?;

        let mut search = RoundSearch {
            engine: self,
            layers: vec![layer0],
            next: Vec::new(),
            claimed: vec![false; self.nv],
            accepted: Vec::new(),
            pass: 0,
            label_words: LABEL_WORDS * label_count,
            accepted_words: 0,
        };
        for j in 1..=self.k {
            if !search.pass_useful(j) {
                break;
            }
            search.pass = j;
            search.next = if j < self.k {
                vec![Vec::new(); self.nv]
            } else {
                Vec::new()
            };
            session.run_pass(&mut search)?;
            let next = std::mem::take(&mut search.next);
            if j < self.k {
                search.layers.push(next);
            }
        }

        let RoundSearch {
            accepted,
            label_words,
            accepted_words,
            ..
        } = search;
        let count = accepted.len();
        for aug in accepted {
            for x in aug.remove {
                self.unmatch(x);
            }
            for (a, b, edge, pos) in aug.add {
                self.set_mate(a, b, edge, pos);
            }
        }
        session.release_memory(label_words + accepted_words + claimed_words)?;
        Ok(count)
    }
}

struct GreedyPass<'e, 'v> {
    engine: &'e mut Engine<'v>,
}

impl PassVisitor for GreedyPass<'_, '_> {
    fn visit(&mut self, pos: usize, e: Edge, _meter: &mut MemoryMeter) -> Result<()> {
        let eng = &mut *self.engine;
        let Some((a, b)) = eng.endpoints(&e) else {
            return Ok(());
        };
        match (eng.mate[a], eng.mate[b]) {
            (None, None) => eng.set_mate(a, b, e, pos),
            (Some(ma), _) if ma.partner == b => {
                if eng.weighted && e.weight > ma.edge.weight {
                    eng.set_mate(a, b, e, pos);
                }
            }
            (ma, mb) if eng.weighted => {
                let displaced = ma.map_or(0, |m| m.edge.weight) + mb.map_or(0, |m| m.edge.weight);
                if e.weight > displaced {
                    eng.unmatch(a);
                    eng.unmatch(b);
                    eng.set_mate(a, b, e, pos);
                }
            }
            _ => {}
        }
        Ok(())
    }
}

struct RoundSearch<'e, 'v> {
    engine: &'e Engine<'v>,
    /// layers[d][x]: labels with d non-matching edges ending at x.
    layers: Vec<Vec<Vec<Label>>>,
    next: Vec<Vec<Label>>,
    claimed: Vec<bool>,
    accepted: Vec<Augmentation>,
    pass: usize,
    label_words: u64,
    accepted_words: u64,
}

impl RoundSearch<'_, '_> {
    fn label(&self, layer: usize, x: VertexId, slot: usize) -> &Label {
        &self.layers[layer][x][slot]
    }

    fn vertices(&self, layer: usize, x: VertexId, slot: usize, out: &mut Vec<VertexId>) {
        let (mut d, mut x, mut s) = (layer, x, slot);
        loop {
            let l = self.label(d, x, s);
            out.push(x);
            match l.pred {
                Some((p, ps)) => {
                    out.push(l.entry);
                    d -= 1;
                    x = p;
                    s = ps;
                }
                None => {
                    if l.root_opened {
                        out.push(l.root);
                    }
                    return;
                }
            }
        }
    }

    fn contains(&self, layer: usize, x: VertexId, slot: usize, v: VertexId) -> bool {
        let mut vs = Vec::with_capacity(2 * layer + 2);
        self.vertices(layer, x, slot, &mut vs);
        vs.contains(&v)
    }

    /// Non-matching edges added and exposed vertices whose matched edge is
    /// removed, along the label's path.
    fn collect(&self, layer: usize, x: VertexId, slot: usize, aug: &mut Augmentation) {
        let (mut d, mut x, mut s) = (layer, x, slot);
        loop {
            let l = self.label(d, x, s);
            match l.pred {
                Some((p, ps)) => {
                    let (edge, pos) = l.via.expect("layered label has an entering edge");
                    aug.remove.push(x);
                    aug.add.push((p, l.entry, edge, pos));
                    d -= 1;
                    x = p;
                    s = ps;
                }
                None => {
                    if l.root_opened {
                        aug.remove.push(x);
                    }
                    return;
                }
            }
        }
    }

    /// Whether pass `j` can produce a label or an augmentation.
    fn pass_useful(&self, j: usize) -> bool {
        let nonempty =
            |d: usize| d < self.layers.len() && self.layers[d].iter().any(|s| !s.is_empty());
        if nonempty(j - 1) {
            return true;
        }
        // Only joins among existing layers remain; no new layer can appear.
        (j..=self.engine.k).any(|jj| (0..jj).any(|p| nonempty(p) && nonempty(jj - 1 - p)))
    }

    fn try_accept(
        &mut self,
        aug: Augmentation,
        vertices: &[VertexId],
        meter: &mut MemoryMeter,
    ) -> Result<()> {
        if vertices.iter().any(|&v| self.claimed[v]) {
            return Ok(());
        }
        for &v in vertices {
            self.claimed[v] = true;
        }
        let words = aug.words();
        self.accepted_words += words;
        self.accepted.push(aug);
        meter.charge(words)
    }

    fn insert_label(&mut self, at: VertexId, label: Label, meter: &mut MemoryMeter) -> Result<()> {
        let slots = &mut self.next[at];
        if let Some(i) = slots
            .iter()
            .position(|l| l.root == label.root && l.root_opened == label.root_opened)
        {
            if label.gain > slots[i].gain {
                slots[i] = label;
            }
            return Ok(());
        }
        if slots.len() < SLOTS {
            slots.push(label);
            self.label_words += LABEL_WORDS;
            return meter.charge(LABEL_WORDS);
        }
        let worst = (0..slots.len())
            .min_by_key(|&i| (slots[i].gain, std::cmp::Reverse(i)))
            .unwrap();
        if label.gain > slots[worst].gain {
            slots[worst] = label;
        }
        Ok(())
    }
}

impl PassVisitor for RoundSearch<'_, '_> {
    fn visit(&mut self, pos: usize, e: Edge, meter: &mut MemoryMeter) -> Result<()> {
        let eng = self.engine;
        let Some((a, b)) = eng.endpoints(&e) else {
            return Ok(());
        };
        let j = self.pass;
        let w = eng.weight(&e);

        if let Some(ma) = eng.mate[a] {
            if ma.partner == b {
                // A heavier parallel copy of a matched edge.
                if eng.weighted && j == 1 && pos != ma.pos && e.weight > ma.edge.weight {
                    let aug = Augmentation {
                        add: vec![(a, b, e, pos)],
                        remove: vec![a],
                    };
                    self.try_accept(aug, &[a, b], meter)?;
                }
                return Ok(());
            }
        }

        // Joins: layer p at a, layer q at b, p + q = j - 1.
        let mut va = Vec::new();
        let mut vb = Vec::new();
        for p in 0..j {
            let q = j - 1 - p;
            if p >= self.layers.len() || q >= self.layers.len() {
                continue;
            }
            for sa in 0..self.layers[p][a].len() {
                for sb in 0..self.layers[q][b].len() {
                    let gain = self.label(p, a, sa).gain + w + self.label(q, b, sb).gain;
                    if gain < 1 {
                        continue;
                    }
                    va.clear();
                    vb.clear();
                    self.vertices(p, a, sa, &mut va);
                    self.vertices(q, b, sb, &mut vb);
                    if va.iter().any(|v| vb.contains(v)) {
                        continue;
                    }
                    let mut aug = Augmentation::default();
                    self.collect(p, a, sa, &mut aug);
                    self.collect(q, b, sb, &mut aug);
                    aug.add.push((a, b, e, pos));
                    va.extend_from_slice(&vb);
                    self.try_accept(aug, &va, meter)?;
                }
            }
        }

        for (x, y) in [(a, b), (b, a)] {
            let layer = j - 1;
            for sx in 0..self.layers[layer][x].len() {
                let lx = *self.label(layer, x, sx);

                // Close an alternating cycle through the opened root.
                if lx.root_opened && lx.root == y && layer >= 1 {
                    let gain = lx.gain + w;
                    if gain >= 1 {
                        va.clear();
                        self.vertices(layer, x, sx, &mut va);
                        let mut aug = Augmentation::default();
                        self.collect(layer, x, sx, &mut aug);
                        aug.add.push((x, y, e, pos));
                        self.try_accept(aug, &va, meter)?;
                    }
                    continue;
                }

                // Extend into layer j through y's matched edge.
                if j >= eng.k {
                    continue;
                }
                let Some(my) = eng.mate[y] else { continue };
                let z = my.partner;
                if self.claimed[y]
                    || self.claimed[z]
                    || self.contains(layer, x, sx, y)
                    || self.contains(layer, x, sx, z)
                {
                    continue;
                }
                let label = Label {
                    gain: lx.gain + w - eng.weight(&my.edge),
                    root: lx.root,
                    root_opened: lx.root_opened,
                    pred: Some((x, sx)),
                    entry: y,
                    via: Some((e, pos)),
                };
                self.insert_label(z, label, meter)?;
            }
        }
        Ok(())
    }
}
