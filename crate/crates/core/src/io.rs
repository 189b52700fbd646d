//! Edge-list file format: first line "n m", then m lines "i j" with
//! 1 <= i < j <= n, ASCII decimal, newline-delimited.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sampler::GraphSample;

pub fn write_edge_list<W: Write>(mut w: W, g: &GraphSample) -> Result<()> {
    writeln!(w, "{} {}", g.vertex_count(), g.edge_count())?;
    for &(i, j) in g.edges() {
        writeln!(w, "{i} {j}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<GraphSample> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::EdgeListParse { line: 1, msg: "empty input".into() })?;
    let header = header?;
    let mut it = header.split_ascii_whitespace();
    let n: u64 = parse_field(it.next(), 1, "n")?;
    let m: u64 = parse_field(it.next(), 1, "m")?;
    if it.next().is_some() {
        return Err(Error::EdgeListParse { line: 1, msg: "trailing tokens after \"n m\"".into() });
    }

    let mut edges = Vec::with_capacity(m as usize);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_ascii_whitespace();
        let i: u64 = parse_field(it.next(), lineno, "i")?;
        let j: u64 = parse_field(it.next(), lineno, "j")?;
        if it.next().is_some() {
            return Err(Error::EdgeListParse { line: lineno, msg: "trailing tokens".into() });
        }
        if i >= j || i == 0 || j > n {
            return Err(Error::EdgeListParse {
                line: lineno,
                msg: format!("edge ({i}, {j}) violates 1 <= i < j <= {n}"),
            });
        }
        edges.push((i as u32, j as u32));
    }
    if edges.len() as u64 != m {
        return Err(Error::EdgeListParse {
            line: 1,
            msg: format!("header promises {m} edges, found {}", edges.len()),
        });
    }
    GraphSample::new(n, edges)
}

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::EdgeListParse {
        line,
        msg: format!("missing field {what}"),
    })?;
    tok.parse().map_err(|_| Error::EdgeListParse {
        line,
        msg: format!("bad {what}: {tok:?}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_gnp, SampleSpec};

    #[test]
    fn round_trip() {
        let g = sample_gnp(&SampleSpec::new(30, 0.2, 9).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        let back = read_edge_list(&buf[..]).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn empty_graph_format() {
        let g = GraphSample::new(5, vec![]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "5 0\n");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_edge_list(&b""[..]).is_err());
        assert!(read_edge_list(&b"3\n"[..]).is_err());
        assert!(read_edge_list(&b"3 1\n2 1\n"[..]).is_err()); // i >= j
        assert!(read_edge_list(&b"3 1\n1 4\n"[..]).is_err()); // out of range
        assert!(read_edge_list(&b"3 2\n1 2\n"[..]).is_err()); // count mismatch
        assert!(read_edge_list(&b"3 2\n1 2\n1 2\n"[..]).is_err()); // duplicate
        assert!(read_edge_list(&b"3 1\n1 2 9\n"[..]).is_err()); // trailing
    }
}
