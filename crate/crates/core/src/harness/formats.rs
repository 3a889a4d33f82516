//! Line-oriented text formats. `#` starts a comment; blank lines are ignored.
//! Saved files are canonical: edges sorted lexicographically, partition
//! labels in first-occurrence order.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::{BipartiteGraph, ThreeGraph, Triad, VertexClass};
use crate::partitions::{validate_two_partition, TaggedGraph, TwoPartition, VertexPartition, Violation};

fn fmt_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if !toks.is_empty() {
                items.push((i + 1, toks));
            }
        }
        Lines { items, pos: 0, last_line }
    }

    fn peek(&self) -> Option<&(usize, Vec<&'a str>)> {
        self.items.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let item = self
            .items
            .get(self.pos)
            .cloned()
            .ok_or_else(|| fmt_err(self.last_line + 1, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some((line, _)) => Err(fmt_err(*line, "trailing content")),
            None => Ok(()),
        }
    }
}

fn num(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| fmt_err(line, format!("expected a nonnegative integer, got `{tok}`")))
}

fn header<const K: usize>(lines: &mut Lines<'_>, tag: &str) -> Result<(usize, [usize; K])> {
    let (line, toks) = lines.next(&format!("`{tag}` header"))?;
    if toks[0] != tag {
        return Err(fmt_err(line, format!("expected `{tag}` header, got `{}`", toks[0])));
    }
    if toks.len() != K + 1 {
        return Err(fmt_err(line, format!("`{tag}` header takes {K} numbers")));
    }
    let mut out = [0; K];
    for (k, t) in toks[1..].iter().enumerate() {
        out[k] = num(line, t)?;
    }
    Ok((line, out))
}

fn edge_line<const K: usize>(lines: &mut Lines<'_>, bounds: [usize; K]) -> Result<(usize, [usize; K])> {
    let (line, toks) = lines.next("an edge line")?;
    if toks.len() != K {
        return Err(fmt_err(line, format!("expected {K} vertex indices")));
    }
    let mut out = [0; K];
    for k in 0..K {
        out[k] = num(line, toks[k])?;
        if out[k] >= bounds[k] {
            return Err(fmt_err(line, format!("vertex {} out of range 0..{}", out[k], bounds[k])));
        }
    }
    Ok((line, out))
}

fn wrap(line: usize, e: Error) -> Error {
    match e {
        Error::Format { .. } => e,
        other => fmt_err(line, other.to_string()),
    }
}

fn read_bg(lines: &mut Lines<'_>, left_id: u32, right_id: u32) -> Result<BipartiteGraph> {
    let (hline, [nl, nr, m]) = header::<3>(lines, "bg")?;
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, [x, y]) = edge_line(lines, [nl, nr])?;
        if !seen.insert((x, y)) {
            return Err(fmt_err(line, format!("duplicate edge ({x},{y})")));
        }
        edges.push((x, y));
    }
    BipartiteGraph::from_edges(VertexClass::new(left_id, nl), VertexClass::new(right_id, nr), edges)
        .map_err(|e| wrap(hline, e))
}

fn write_bg(out: &mut String, g: &BipartiteGraph) {
    let _ = writeln!(out, "bg {} {} {}", g.n_left(), g.n_right(), g.edge_count());
    for (x, y) in g.edges() {
        let _ = writeln!(out, "{x} {y}");
    }
}

fn read_vp(lines: &mut Lines<'_>) -> Result<VertexPartition> {
    let (hline, [n, k]) = header::<2>(lines, "vp")?;
    let (line, toks) = lines.next("the label line")?;
    if toks.len() != n {
        return Err(fmt_err(line, format!("expected {n} labels, got {}", toks.len())));
    }
    let mut used = vec![false; k];
    let mut labels = Vec::with_capacity(n);
    for t in toks {
        let l = num(line, t)?;
        if l >= k {
            return Err(fmt_err(line, format!("label {l} out of range 0..{k}")));
        }
        used[l] = true;
        labels.push(l);
    }
    if let Some(b) = used.iter().position(|u| !u) {
        return Err(fmt_err(hline, format!("block {b} is empty")));
    }
    VertexPartition::from_labels(&labels).map_err(|e| wrap(hline, e))
}

fn write_vp(out: &mut String, p: &VertexPartition) {
    let _ = writeln!(out, "vp {} {}", p.n(), p.order());
    let labels: Vec<String> = p.labels().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "{}", labels.join(" "));
}

pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let mut lines = Lines::new(text);
    let g = read_bg(&mut lines, 0, 1)?;
    lines.finish()?;
    Ok(g)
}

pub fn format_graph(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    write_bg(&mut out, g);
    out
}

pub fn parse_threegraph(text: &str) -> Result<ThreeGraph> {
    let mut lines = Lines::new(text);
    let (hline, [n1, n2, n3, m]) = header::<4>(&mut lines, "h3")?;
    let mut seen = HashSet::with_capacity(m);
    let mut triples = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, [a, b, c]) = edge_line(&mut lines, [n1, n2, n3])?;
        if !seen.insert((a, b, c)) {
            return Err(fmt_err(line, format!("duplicate edge ({a},{b},{c})")));
        }
        triples.push((a, b, c));
    }
    lines.finish()?;
    let classes = [VertexClass::new(0, n1), VertexClass::new(1, n2), VertexClass::new(2, n3)];
    ThreeGraph::from_triples(classes, triples).map_err(|e| wrap(hline, e))
}

pub fn format_threegraph(h: &ThreeGraph) -> String {
    let [n1, n2, n3] = h.sizes();
    let mut out = format!("h3 {n1} {n2} {n3} {}\n", h.edge_count());
    for (a, b, c) in h.triples() {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    out
}

pub fn parse_partition(text: &str) -> Result<VertexPartition> {
    let mut lines = Lines::new(text);
    let p = read_vp(&mut lines)?;
    lines.finish()?;
    Ok(p)
}

pub fn format_partition(p: &VertexPartition) -> String {
    let mut out = String::new();
    write_vp(&mut out, p);
    out
}

/// `tr nA nB nC` followed by the `(A,B)`, `(A,C)` and `(B,C)` graphs.
pub fn parse_triad(text: &str) -> Result<Triad> {
    let mut lines = Lines::new(text);
    let (hline, [na, nb, nc]) = header::<3>(&mut lines, "tr")?;
    let ab = read_bg(&mut lines, 0, 1)?;
    let ac = read_bg(&mut lines, 0, 2)?;
    let bc = read_bg(&mut lines, 1, 2)?;
    lines.finish()?;
    if [ab.n_left(), ab.n_right(), ac.n_left(), ac.n_right(), bc.n_left(), bc.n_right()] != [na, nb, na, nc, nb, nc] {
        return Err(fmt_err(hline, "section sizes disagree with the `tr` header"));
    }
    Triad::new(ab, ac, bc).map_err(|e| wrap(hline, e))
}

pub fn format_triad(t: &Triad) -> String {
    let [a, b, c] = t.sizes();
    let mut out = format!("tr {a} {b} {c}\n");
    for g in [t.ab(), t.ac(), t.bc()] {
        write_bg(&mut out, g);
    }
    out
}

fn describe(v: &Violation) -> String {
    let (pair, edges, what) = match v {
        Violation::Uncovered { pair, missing } => (pair, missing, "not covered"),
        Violation::NotDisjoint { pair, duplicated } => (pair, duplicated, "covered twice"),
    };
    let (x, y) = edges[0];
    format!("clusters ({}, {}): product edge ({x}, {y}) is {what}", pair.0, pair.1)
}

/// A `.vp` section, then `pair c1 c2` headers each followed by a `.bg`
/// section in cluster-local coordinates.
pub fn parse_twopartition(text: &str) -> Result<TwoPartition> {
    let mut lines = Lines::new(text);
    let z = read_vp(&mut lines)?;
    let mut graphs = Vec::new();
    while let Some((line, toks)) = lines.peek().cloned() {
        lines.pos += 1;
        if toks[0] != "pair" || toks.len() != 3 {
            return Err(fmt_err(line, "expected `pair <c1> <c2>`"));
        }
        let (c1, c2) = (num(line, toks[1])?, num(line, toks[2])?);
        if c1 >= z.order() || c2 >= z.order() || c1 == c2 {
            return Err(fmt_err(line, format!("invalid cluster pair ({c1}, {c2})")));
        }
        let g = read_bg(&mut lines, c1 as u32, c2 as u32)?;
        if g.n_left() != z.block(c1).len() || g.n_right() != z.block(c2).len() {
            return Err(fmt_err(line, format!("graph sizes do not match clusters ({c1}, {c2})")));
        }
        graphs.push(TaggedGraph { pair: (c1, c2), graph: g });
    }
    let end = lines.last_line;
    let tp = TwoPartition::assemble(z, graphs).map_err(|e| wrap(end, e))?;
    if let Some(v) = validate_two_partition(&tp).first() {
        return Err(fmt_err(end, describe(v)));
    }
    Ok(tp)
}

pub fn format_twopartition(tp: &TwoPartition) -> String {
    let mut out = String::new();
    write_vp(&mut out, tp.z());
    for tg in tp.graphs() {
        let _ = writeln!(out, "pair {} {}", tg.pair.0, tg.pair.1);
        write_bg(&mut out, &tg.graph);
    }
    out
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| fmt_err(0, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| fmt_err(0, format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<BipartiteGraph> {
    parse_graph(&read_file(path)?)
}

pub fn save_graph(path: &Path, g: &BipartiteGraph) -> Result<()> {
    write_file(path, &format_graph(g))
}

pub fn load_threegraph(path: &Path) -> Result<ThreeGraph> {
    parse_threegraph(&read_file(path)?)
}

pub fn save_threegraph(path: &Path, h: &ThreeGraph) -> Result<()> {
    write_file(path, &format_threegraph(h))
}

pub fn load_partition(path: &Path) -> Result<VertexPartition> {
    parse_partition(&read_file(path)?)
}

pub fn save_partition(path: &Path, p: &VertexPartition) -> Result<()> {
    write_file(path, &format_partition(p))
}

pub fn load_triad(path: &Path) -> Result<Triad> {
    parse_triad(&read_file(path)?)
}

pub fn save_triad(path: &Path, t: &Triad) -> Result<()> {
    write_file(path, &format_triad(t))
}

pub fn load_twopartition(path: &Path) -> Result<TwoPartition> {
    parse_twopartition(&read_file(path)?)
}

pub fn save_twopartition(path: &Path, tp: &TwoPartition) -> Result<()> {
    write_file(path, &format_twopartition(tp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "# comment\nbg 2 3 3\n1 2\n0 1 # trailing\n\n0 0\n";
        let g = parse_graph(text).unwrap();
        let canon = format_graph(&g);
        assert_eq!(canon, "bg 2 3 3\n0 0\n0 1\n1 2\n");
        assert_eq!(format_graph(&parse_graph(&canon).unwrap()), canon);
    }

    #[test]
    fn graph_errors_carry_lines() {
        let e = parse_graph("bg 2 2 2\n0 1\n0 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, ref message } if message.contains("duplicate")));
        let e = parse_graph("bg 2 2 1\n0 5\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }));
        let e = parse_graph("bx 2 2 0\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 1, .. }));
        let e = parse_graph("bg 2 2 2\n0 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, .. }));
    }

    #[test]
    fn threegraph_round_trip() {
        let h = parse_threegraph("h3 2 2 2 2\n1 1 1\n0 0 1\n").unwrap();
        assert_eq!(format_threegraph(&h), "h3 2 2 2 2\n0 0 1\n1 1 1\n");
        let e = parse_threegraph("h3 2 2 2 2\n1 1 1\n1 1 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, ref message } if message.contains("duplicate")));
    }

    #[test]
    fn partition_and_triad() {
        let p = parse_partition("vp 4 2\n1 0 1 0\n").unwrap();
        assert_eq!(format_partition(&p), "vp 4 2\n0 1 0 1\n");
        assert!(parse_partition("vp 3 3\n0 1 1\n").is_err());
        let t = parse_triad("tr 1 1 1\nbg 1 1 1\n0 0\nbg 1 1 0\nbg 1 1 1\n0 0\n").unwrap();
        assert_eq!(t.total_edges(), 2);
        assert_eq!(parse_triad(&format_triad(&t)).unwrap(), t);
    }

    #[test]
    fn twopartition_round_trip_and_validation() {
        let z = VertexPartition::from_labels(&[0, 0, 1, 1]).unwrap();
        let tp = TwoPartition::complete(z).unwrap();
        let text = format_twopartition(&tp);
        assert_eq!(format_twopartition(&parse_twopartition(&text).unwrap()), text);
        let broken = "vp 4 2\n0 0 1 1\npair 0 1\nbg 2 2 3\n0 0\n0 1\n1 0\n";
        let e = parse_twopartition(broken).unwrap_err();
        assert!(matches!(e, Error::Format { ref message, .. } if message.contains("clusters (0, 1)")), "{e}");
    }
}
