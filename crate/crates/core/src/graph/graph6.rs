//! Headerless graph6 codec for orders 1..=16.
//!
//! The order byte is `63 + n`; the upper triangle follows in column order
//! (`(0,1), (0,2), (1,2), (0,3), ...`), packed six bits per byte, most
//! significant bit first, offset by 63 and zero padded.

use thiserror::Error;

use super::{Graph, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("graph6 order {order} at offset 0 is unsupported (expected 1..=16)")]
    UnsupportedOrder { order: usize },
    #[error("graph6 body has {found} bytes after offset 0, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("nonzero padding bits in the final byte at offset {offset}")]
    TrailingBits { offset: usize },
}

pub(super) fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(63 + n as u8);
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
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

pub(super) fn decode(text: &str) -> Result<Graph, Graph6Error> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let (&first, body) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    for (offset, &byte) in bytes.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(Graph6Error::InvalidByte { offset, byte });
        }
    }
    let n = (first - 63) as usize;
    if n == 0 || n > MAX_ORDER {
        return Err(Graph6Error::UnsupportedOrder { order: n });
    }
    let expected = body_len(n);
    if body.len() != expected {
        return Err(Graph6Error::Length { expected, found: body.len() });
    }
    let total_bits = n * (n - 1) / 2;
    if !total_bits.is_multiple_of(6) {
        let last = body[expected - 1] - 63;
        let pad = 6 - total_bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::TrailingBits { offset: expected });
        }
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("decoded edges are in range"))
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_vertex() {
        let g = Graph::from_graph6("@").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.to_graph6(), "@");
    }

    #[test]
    fn reference_strings() {
        // Strings from the format description and nauty's geng output.
        let k2 = Graph::from_graph6("A_").unwrap();
        assert_eq!(k2, Graph::complete(2).unwrap());
        assert_eq!(Graph::from_graph6("A?").unwrap(), Graph::empty(2).unwrap());
        assert_eq!(Graph::complete(4).unwrap().to_graph6(), "C~");
        assert_eq!(Graph::path(4).unwrap().to_graph6(), "Ch");
        assert_eq!(Graph::cycle(5).unwrap().to_graph6(), "Dhc");
        // petgraph's test graph: edges a-c, a-e, b-d, d-e
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(g.to_graph6(), "DQc");
        // the format's worked example
        let ex = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(Graph::from_graph6("DQc").unwrap(), ex);
    }

    #[test]
    fn decode_errors_name_offsets() {
        assert_eq!(decode(""), Err(Graph6Error::Empty));
        assert_eq!(decode("C~ "), Err(Graph6Error::InvalidByte { offset: 2, byte: b' ' }));
        assert_eq!(decode("C~~"), Err(Graph6Error::Length { expected: 1, found: 2 }));
        assert_eq!(decode("R"), Err(Graph6Error::UnsupportedOrder { order: 19 }));
        assert_eq!(decode("?"), Err(Graph6Error::UnsupportedOrder { order: 0 }));
        // n=4 uses 6 bits exactly; n=3 uses 3 bits and 3 padding bits
        assert_eq!(decode("BA"), Err(Graph6Error::TrailingBits { offset: 1 }));
        assert!(decode("Bw").is_ok());
    }

    #[test]
    fn round_trip_all_graphs_up_to_six() {
        for n in 1..=6usize {
            let pairs: Vec<(usize, usize)> =
                (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<_> =
                    pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                let s = g.to_graph6();
                assert_eq!(Graph::from_graph6(&s).unwrap(), g);
                assert_eq!(Graph::from_graph6(&s).unwrap().to_graph6(), s);
            }
        }
    }
}
