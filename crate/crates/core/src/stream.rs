//! Multi-pass edge streams with pass counting and a cooperative word meter.
//!
//! A source yields the same edges in the same order on every pass. Algorithms
//! report their resident state in machine words (one vertex id, edge slot or
//! counter each) through [`MemoryMeter`]; the session records the peak.
//!
//! Edge-list file format:
//!
//! ```text
//! n m [weighted]
//! u v [w]        (m lines, 0-indexed, w present iff the header says weighted)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, Debug)]
enum Backing {
    Memory {
        graph: Arc<Graph>,
        order: Option<Vec<usize>>,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Debug)]
pub struct EdgeStreamSource {
    backing: Backing,
    n: usize,
    m: usize,
    weighted: bool,
    max_weight: u64,
}

impl EdgeStreamSource {
    pub fn from_graph(graph: Graph) -> Self {
        Self::from_shared(Arc::new(graph))
    }

    pub fn from_shared(graph: Arc<Graph>) -> Self {
        EdgeStreamSource {
            n: graph.n(),
            m: graph.edge_count(),
            weighted: graph.is_weighted(),
            max_weight: graph.max_weight(),
            backing: Backing::Memory { graph, order: None },
        }
    }

    /// In-memory source delivering `graph.edges()[order[i]]` at position `i`.
    pub fn with_order(graph: Graph, order: Vec<usize>) -> Result<Self> {
        graph.reordered(&order)?;
        let mut src = Self::from_graph(graph);
        if let Backing::Memory { order: o, .. } = &mut src.backing {
            *o = Some(order);
        }
        Ok(src)
    }

    /// Opens an edge-list file. The whole file is validated once here so that
    /// passes cannot fail on malformed input later.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut max_weight = 1;
        let mut count = 0;
        let header = scan_file(&path, |_, e| {
            max_weight = max_weight.max(e.weight);
            count += 1;
            Ok(())
        })?;
        debug_assert_eq!(count, header.m);
        Ok(EdgeStreamSource {
            backing: Backing::File { path },
            n: header.n,
            m: header.m,
            weighted: header.weighted,
            max_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    /// Reads the whole stream into memory. Meant for oracles and tests, not
    /// for the streaming algorithms.
    pub fn to_graph(&self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.m);
        self.for_each(|_, e| {
            edges.push(e);
            Ok(())
        })?;
        Graph::new(self.n, edges, self.weighted)
    }

    fn for_each(&self, mut f: impl FnMut(usize, Edge) -> Result<()>) -> Result<()> {
        match &self.backing {
            Backing::Memory { graph, order: None } => {
                for (i, e) in graph.edges().iter().enumerate() {
                    f(i, *e)?;
                }
                Ok(())
            }
            Backing::Memory {
                graph,
                order: Some(order),
            } => {
                for (i, &j) in order.iter().enumerate() {
                    f(i, graph.edges()[j])?;
                }
                Ok(())
            }
            Backing::File { path } => scan_file(path, f).map(|_| ()),
        }
    }
}

struct Header {
    n: usize,
    m: usize,
    weighted: bool,
}

fn parse_header(line: &str) -> Result<Header> {
    let bad = |message: String| Error::Parse { line: 1, message };
    let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
    let weighted = match tokens.as_slice() {
        [_, _] => false,
        [_, _, "weighted"] => true,
        _ => return Err(bad(format!("expected \"n m [weighted]\", found {line:?}"))),
    };
    let n = tokens[0]
        .parse()
        .map_err(|_| bad(format!("bad vertex count {:?}", tokens[0])))?;
    let m = tokens[1]
        .parse()
        .map_err(|_| bad(format!("bad edge count {:?}", tokens[1])))?;
    Ok(Header { n, m, weighted })
}

fn parse_edge(line: &str, lineno: usize, h: &Header) -> Result<Edge> {
    let bad = |message: String| Error::Parse {
        line: lineno,
        message,
    };
    let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
    let expected = if h.weighted { 3 } else { 2 };
    if tokens.len() != expected {
        return Err(bad(format!(
            "expected {expected} fields, found {}",
            tokens.len()
        )));
    }
    let num = |t: &str| {
        t.parse::<u64>()
            .map_err(|_| bad(format!("not a nonnegative integer: {t:?}")))
    };
    let (u, v) = (num(tokens[0])? as usize, num(tokens[1])? as usize);
    let weight = if h.weighted { num(tokens[2])? } else { 1 };
    if u >= h.n || v >= h.n {
        return Err(bad(format!("vertex out of range for n = {}", h.n)));
    }
    if u == v {
        return Err(bad(format!("loop at vertex {u}")));
    }
    if weight == 0 {
        return Err(bad("weight must be positive".into()));
    }
    Ok(Edge { u, v, weight })
}

fn scan_file(path: &Path, mut f: impl FnMut(usize, Edge) -> Result<()>) -> Result<Header> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => parse_header(&line?)?,
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
    };
    let mut seen = 0;
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if seen == header.m {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line: lineno,
                message: format!("more than {} edges", header.m),
            });
        }
        f(seen, parse_edge(&line, lineno, &header)?)?;
        seen += 1;
    }
    if seen != header.m {
        return Err(Error::Parse {
            line: seen + 2,
            message: format!("header promises {} edges, file has {seen}", header.m),
        });
    }
    Ok(header)
}

/// Writes `g` in the edge-list format. Weighted graphs always carry the
/// weight column.
pub fn write_edge_list(g: &Graph, out: &mut impl Write) -> std::io::Result<()> {
    if g.is_weighted() {
        writeln!(out, "{} {} weighted", g.n(), g.edge_count())?;
        for e in g.edges() {
            writeln!(out, "{} {} {}", e.u, e.v, e.weight)?;
        }
    } else {
        writeln!(out, "{} {}", g.n(), g.edge_count())?;
        for e in g.edges() {
            writeln!(out, "{} {}", e.u, e.v)?;
        }
    }
    Ok(())
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    EdgeStreamSource::from_file(path)?.to_graph()
}

/// Resident/peak word counter with an optional hard limit.
#[derive(Clone, Debug)]
pub struct MemoryMeter {
    resident: u64,
    peak: u64,
    budget: u64,
    strict: bool,
}

impl MemoryMeter {
    pub fn new(budget: u64, strict: bool) -> Self {
        MemoryMeter {
            resident: 0,
            peak: 0,
            budget,
            strict,
        }
    }

    pub fn charge(&mut self, words: u64) -> Result<()> {
        self.resident += words;
        self.peak = self.peak.max(self.resident);
        if self.strict && self.resident > self.budget {
            return Err(Error::BudgetExceeded {
                resident: self.resident,
                budget: self.budget,
            });
        }
        Ok(())
    }

    pub fn release(&mut self, words: u64) -> Result<()> {
        if words > self.resident {
            return Err(Error::Accounting {
                requested: words,
                resident: self.resident,
            });
        }
        self.resident -= words;
        Ok(())
    }

    pub fn resident(&self) -> u64 {
        self.resident
    }

    pub fn peak(&self) -> u64 {
        self.peak
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

/// Callback driven by [`StreamSession::run_pass`].
pub trait PassVisitor {
    fn visit(&mut self, position: usize, edge: Edge, meter: &mut MemoryMeter) -> Result<()>;

    fn end_pass(&mut self, _meter: &mut MemoryMeter) -> Result<()> {
        Ok(())
    }
}

impl<F> PassVisitor for F
where
    F: FnMut(usize, Edge, &mut MemoryMeter) -> Result<()>,
{
    fn visit(&mut self, position: usize, edge: Edge, meter: &mut MemoryMeter) -> Result<()> {
        self(position, edge, meter)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StreamReport {
    pub passes_used: usize,
    pub words_peak: u64,
    pub words_budget: u64,
    pub budget_exceeded: bool,
}

pub struct StreamSession<'a> {
    source: &'a EdgeStreamSource,
    passes_used: usize,
    meter: MemoryMeter,
}

impl<'a> StreamSession<'a> {
    pub fn open(source: &'a EdgeStreamSource, budget: u64) -> Self {
        Self::with_meter(source, MemoryMeter::new(budget, false))
    }

    pub fn open_strict(source: &'a EdgeStreamSource, budget: u64) -> Self {
        Self::with_meter(source, MemoryMeter::new(budget, true))
    }

    fn with_meter(source: &'a EdgeStreamSource, meter: MemoryMeter) -> Self {
        StreamSession {
            source,
            passes_used: 0,
            meter,
        }
    }

    pub fn source(&self) -> &'a EdgeStreamSource {
        self.source
    }

    /// Delivers every edge once, in arrival order. The pass is counted even
    /// when the visitor aborts.
    pub fn run_pass(&mut self, visitor: &mut impl PassVisitor) -> Result<()> {
        self.passes_used += 1;
        let meter = &mut self.meter;
        self.source
            .for_each(|pos, e| visitor.visit(pos, e, meter))?;
        visitor.end_pass(meter)
    }

    pub fn passes_used(&self) -> usize {
        self.passes_used
    }

    pub fn meter(&self) -> &MemoryMeter {
        &self.meter
    }

    pub fn meter_mut(&mut self) -> &mut MemoryMeter {
        &mut self.meter
    }

    pub fn charge_memory(&mut self, words: u64) -> Result<()> {
        self.meter.charge(words)
    }

    pub fn release_memory(&mut self, words: u64) -> Result<()> {
        self.meter.release(words)
    }

    pub fn report(&self) -> StreamReport {
        StreamReport {
            passes_used: self.passes_used,
            words_peak: self.meter.peak,
            words_budget: self.meter.budget,
            budget_exceeded: self.meter.peak > self.meter.budget,
        }
    }
}

/// Default word budget: `64·n·k`, times `⌈log2(W+1)⌉` for weighted streams
/// with maximum weight `W`.
pub fn default_budget(n: usize, k: usize, weighted: bool, max_weight: u64) -> u64 {
    let base = 64 * n.max(1) as u64 * k as u64;
    if weighted {
        base * ceil_log2_plus_one(max_weight)
    } else {
        base
    }
}

/// `⌈log2(w + 1)⌉`, at least 1.
pub fn ceil_log2_plus_one(w: u64) -> u64 {
    let x = w.saturating_add(1);
    let bits = 64 - (x - 1).leading_zeros() as u64;
    bits.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seven_edges() -> Graph {
        Graph::unweighted(8, &[(2, 3), (4, 5), (0, 1), (0, 2), (0, 4), (1, 6), (1, 7)]).unwrap()
    }

    #[test]
    fn counting_visitor_sees_every_edge() {
        let src = EdgeStreamSource::from_graph(seven_edges());
        let mut s = StreamSession::open(&src, 1000);
        assert_eq!(s.passes_used(), 0);
        let mut count = 0;
        s.run_pass(&mut |_: usize, _: Edge, _: &mut MemoryMeter| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!((count, s.passes_used()), (7, 1));
    }

    #[test]
    fn empty_source_yields_nothing() {
        let src = EdgeStreamSource::from_graph(Graph::empty(3));
        let mut s = StreamSession::open(&src, 10);
        let mut count = 0;
        s.run_pass(&mut |_: usize, _: Edge, _: &mut MemoryMeter| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 0);
    }

    #[test]
    fn aborted_pass_still_counts() {
        let src = EdgeStreamSource::from_graph(seven_edges());
        let mut s = StreamSession::open(&src, 10);
        let err = s
            .run_pass(&mut |pos: usize, _: Edge, _: &mut MemoryMeter| {
                if pos == 3 {
                    Err(Error::Aborted("stop".into()))
                } else {
                    Ok(())
                }
            })
            .unwrap_err();
        assert!(matches!(err, Error::Aborted(_)));
        assert_eq!(s.passes_used(), 1);
    }

    #[test]
    fn meter_tracks_peak_and_rejects_underflow() {
        let mut m = MemoryMeter::new(100, false);
        m.charge(10).unwrap();
        m.release(10).unwrap();
        assert_eq!((m.resident(), m.peak()), (0, 10));
        m.charge(5).unwrap();
        m.charge(7).unwrap();
        assert_eq!(m.peak(), 12);
        assert!(matches!(
            m.release(13),
            Err(Error::Accounting {
                requested: 13,
                resident: 12
            })
        ));
    }

    #[test]
    fn strict_meter_fails_on_overrun() {
        let mut m = MemoryMeter::new(4, true);
        m.charge(4).unwrap();
        assert!(matches!(
            m.charge(1),
            Err(Error::BudgetExceeded {
                resident: 5,
                budget: 4
            })
        ));
    }

    #[test]
    fn advisory_overrun_is_reported() {
        let src = EdgeStreamSource::from_graph(seven_edges());
        let mut s = StreamSession::open(&src, 3);
        s.charge_memory(5).unwrap();
        assert!(s.report().budget_exceeded);
    }

    #[test]
    fn log_factor() {
        assert_eq!(ceil_log2_plus_one(1), 1);
        assert_eq!(ceil_log2_plus_one(2), 2);
        assert_eq!(ceil_log2_plus_one(3), 2);
        assert_eq!(ceil_log2_plus_one(4), 3);
        assert_eq!(ceil_log2_plus_one(1_000_000), 20);
        assert_eq!(default_budget(100, 3, false, 1), 19_200);
        assert_eq!(default_budget(10, 2, true, 20), 64 * 10 * 2 * 5);
    }

    #[test]
    fn ordered_source_permutes() {
        let g = Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let src = EdgeStreamSource::with_order(g, vec![2, 0, 1]).unwrap();
        let seen = src.to_graph().unwrap();
        assert_eq!(seen.edges()[0], Edge::new(2, 3));
        assert!(EdgeStreamSource::with_order(Graph::empty(2), vec![0]).is_err());
    }
}
