//! graph6 encoding for graphs of order at most 62.
//!
//! The first byte is `n + 63`. The upper triangle of the adjacency matrix is
//! read column by column (`x01, x02, x12, x03, ...`), packed six bits per
//! byte with the most significant bit first, padded with zeros, and each
//! 6-bit group is stored as `value + 63`.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_ORDER};

pub const HEADER: &str = ">>graph6<<";

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        message: message.into(),
    }
}

/// Number of data bytes following the size byte.
fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let (skip, body) = match line.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest.as_bytes()),
        None => (0, line.as_bytes()),
    };
    let Some(&size_byte) = body.first() else {
        return Err(err(skip, "empty input"));
    };
    if !(63..=126).contains(&size_byte) {
        return Err(err(
            skip,
            format!("byte {size_byte:#04x} outside [63, 126]"),
        ));
    }
    if size_byte == 126 {
        return Err(err(
            skip,
            "extended size encoding (n > 62) is not supported",
        ));
    }
    let n = (size_byte - 63) as usize;
    if n == 0 || n > MAX_ORDER {
        return Err(err(skip, format!("order {n} outside 1..=62")));
    }
    let expected = data_len(n);
    let data = &body[1..];
    if data.len() < expected {
        return Err(err(
            skip + body.len(),
            format!(
                "truncated: expected {expected} data bytes, found {}",
                data.len()
            ),
        ));
    }
    if data.len() > expected {
        return Err(err(skip + 1 + expected, "trailing bytes after graph"));
    }
    for (i, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(
                skip + 1 + i,
                format!("byte {b:#04x} outside [63, 126]"),
            ));
        }
    }

    let bit = |k: usize| -> bool {
        let byte = data[k / 6] - 63;
        byte >> (5 - k % 6) & 1 == 1
    };
    let mut adj = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            k += 1;
        }
    }
    let total_bits = expected * 6;
    if (k..total_bits).any(bit) {
        return Err(err(skip + body.len() - 1, "nonzero padding bits"));
    }
    Graph::from_adjacency(adj)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + data_len(n));
    out.push((n + 63) as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    // Every byte is in [63, 126].
    String::from_utf8(out).expect("graph6 output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference encoder written from the format description, independent of
    /// `to_graph6`: build the full bit string, then chunk it.
    fn reference_encode(n: usize, edges: &[(usize, usize)]) -> String {
        let mut bits = Vec::new();
        for j in 1..n {
            for i in 0..j {
                bits.push(edges.contains(&(i, j)) || edges.contains(&(j, i)));
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(false);
        }
        let mut s = String::new();
        s.push((n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |a, &b| a << 1 | b as u8);
            s.push((v + 63) as char);
        }
        s
    }

    #[test]
    fn k1_is_at_sign() {
        let g = parse_graph6("@").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.size(), 0);
        assert_eq!(to_graph6(&Graph::empty(1).unwrap()), "@");
    }

    #[test]
    fn p5_matches_reference_encoder() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4)];
        let s = reference_encode(5, &edges);
        let g = parse_graph6(&s).unwrap();
        assert_eq!(g, Graph::from_edges(5, &edges).unwrap());
        assert_eq!(to_graph6(&g), s);
        // Column-major bits 1 0 1 0 0 1 | 0 0 0 1 -> 'h', 'C'.
        assert_eq!(s, "DhC");
    }

    #[test]
    fn known_strings() {
        // K_4 and the 4-cycle as printed by nauty.
        let k4 = parse_graph6("C~").unwrap();
        assert!(k4.is_complete());
        let c4 = parse_graph6("Cr").unwrap();
        assert_eq!(c4.size(), 4);
        assert!(c4.is_two_connected());
    }

    #[test]
    fn header_is_tolerated() {
        let g = parse_graph6(">>graph6<<Cr").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(to_graph6(&g), "Cr");
    }

    #[test]
    fn errors_name_offsets() {
        assert_eq!(
            parse_graph6("Cr~"),
            Err(Error::Graph6 {
                offset: 2,
                message: "trailing bytes after graph".into()
            })
        );
        assert!(matches!(
            parse_graph6("C"),
            Err(Error::Graph6 { offset: 1, .. })
        ));
        assert!(matches!(
            parse_graph6("D\x20C"),
            Err(Error::Graph6 { offset: 1, .. })
        ));
        assert!(matches!(
            parse_graph6(" "),
            Err(Error::Graph6 { offset: 0, .. })
        ));
        assert!(matches!(
            parse_graph6("?"),
            Err(Error::Graph6 { offset: 0, .. })
        ));
        assert!(matches!(
            parse_graph6("~"),
            Err(Error::Graph6 { offset: 0, .. })
        ));
        assert!(matches!(parse_graph6(""), Err(Error::Graph6 { .. })));
        // K_2 with a stray padding bit.
        assert!(parse_graph6("A_").unwrap().is_complete());
        assert!(parse_graph6("A`").is_err());
    }
}
