use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::svd::{truncated_svd, SvdMethod};
use super::PpmiMatrix;
use crate::error::{Error, Result};

/// Word vectors of a fixed dimension, queryable by cosine similarity.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpace {
    words: Vec<String>,
    index: HashMap<String, usize>,
    dim: usize,
    eig_weight: f64,
    seed: u64,
    /// Row-major `words.len() × dim`.
    data: Vec<f64>,
}

/// Nearest neighbours of a query, most similar first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborList {
    pub query: String,
    pub neighbors: Vec<(String, f64)>,
}

impl NeighborList {
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.neighbors.iter().map(|(w, _)| w.as_str())
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }
}

/// Truncated SVD of `m` with word vectors `U_d · Σ_d^p`.
///
/// `d` may exceed the numerical rank of `m`; the extra components then carry
/// (near-)zero singular values. `d` above the smaller matrix dimension is an
/// error.
pub fn factorize(m: &PpmiMatrix, d: usize, p: f64, seed: u64) -> Result<EmbeddingSpace> {
    factorize_with(m, d, p, seed, SvdMethod::default())
}

pub fn factorize_with(
    m: &PpmiMatrix,
    d: usize,
    p: f64,
    seed: u64,
    method: SvdMethod,
) -> Result<EmbeddingSpace> {
    let (rows, cols) = m.shape();
    if d == 0 {
        return Err(Error::InvalidArgument(
            "embedding dimension must be positive".into(),
        ));
    }
    if d > rows.min(cols) {
        return Err(Error::Dimension { dim: d, rows, cols });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue weight {p} not in [0, 1]"
        )));
    }
    if m.is_empty() {
        return Err(Error::Empty("PPMI matrix"));
    }
    let svd = truncated_svd(m, d, method, seed);
    let weights: Vec<f64> = svd.singular_values.iter().map(|s| s.powf(p)).collect();
    let mut data = Vec::with_capacity(rows * d);
    for i in 0..rows {
        data.extend((0..d).map(|k| svd.u[(i, k)] * weights[k]));
    }
    EmbeddingSpace::from_parts(m.rows().to_vec(), d, p, seed, data)
}

impl EmbeddingSpace {
    fn from_parts(
        words: Vec<String>,
        dim: usize,
        eig_weight: f64,
        seed: u64,
        data: Vec<f64>,
    ) -> Result<Self> {
        debug_assert_eq!(data.len(), words.len() * dim);
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if w.is_empty() || w.contains(['\t', '\n']) {
                return Err(Error::InvalidArgument(format!(
                    "invalid vocabulary entry `{w}`"
                )));
            }
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate word `{w}`")));
            }
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite vector entry".into()));
        }
        Ok(EmbeddingSpace {
            words,
            index,
            dim,
            eig_weight,
            seed,
            data,
        })
    }

    /// Builds a space from explicit vectors, all of dimension `dim`.
    pub fn from_vectors<I, S>(dim: usize, eig_weight: f64, seed: u64, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut words = Vec::new();
        let mut data = Vec::new();
        for (w, v) in vectors {
            let w = w.into();
            if v.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "vector for `{w}` has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            words.push(w);
            data.extend(v);
        }
        Self::from_parts(words, dim, eig_weight, seed, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eig_weight(&self) -> f64 {
        self.eig_weight
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.index.get(word).map(|&i| self.row(i))
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Writes the text format: a `dim <d> <p> <seed>` header, then one
    /// `word \t v1 \t … \t vd` line per word with 9 significant digits.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "dim {} {} {}", self.dim, self.eig_weight, self.seed)?;
        for (i, w) in self.words.iter().enumerate() {
            out.write_all(w.as_bytes())?;
            for x in self.row(i) {
                write!(out, "\t{}", format_sig9(*x))?;
            }
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_text(BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn read_text<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, line)) => line.map_err(|e| Error::parse(source_name, 1, e.to_string()))?,
            None => return Err(Error::parse(source_name, 1, "missing header")),
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::parse(source_name, 1, format!("bad header `{header}`"));
        if fields.len() != 4 || fields[0] != "dim" {
            return Err(bad_header());
        }
        let dim: usize = fields[1].parse().map_err(|_| bad_header())?;
        let eig_weight: f64 = fields[2].parse().map_err(|_| bad_header())?;
        let seed: u64 = fields[3].parse().map_err(|_| bad_header())?;

        let mut words = Vec::new();
        let mut data = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(source_name, lineno, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let word = parts.next().unwrap_or_default();
            let before = data.len();
            for p in parts {
                data.push(
                    p.parse::<f64>().map_err(|_| {
                        Error::parse(source_name, lineno, format!("bad number `{p}`"))
                    })?,
                );
            }
            if data.len() - before != dim {
                return Err(Error::parse(
                    source_name,
                    lineno,
                    format!("expected {dim} values, found {}", data.len() - before),
                ));
            }
            words.push(word.to_owned());
        }
        Self::from_parts(words, dim, eig_weight, seed, data)
            .map_err(|e| Error::parse(source_name, 0, e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_text(BufReader::new(file), &path.display().to_string())
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cosine similarity; 0 when either vector is all zeros.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    (dot / (na * nb)).clamp(-1.0, 1.0)
}

/// The `n` words most cosine-similar to `query`, excluding the query
/// itself. Equal similarities are ordered by word.
pub fn nearest_neighbors(space: &EmbeddingSpace, query: &str, n: usize) -> Result<NeighborList> {
    let q = space
        .vector(query)
        .ok_or_else(|| Error::OutOfVocabulary(query.to_owned()))?;
    let mut scored: Vec<(String, f64)> = space
        .words
        .iter()
        .enumerate()
        .filter(|(_, w)| w.as_str() != query)
        .map(|(i, w)| (w.clone(), cosine(q, space.row(i))))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(n);
    Ok(NeighborList {
        query: query.to_owned(),
        neighbors: scored,
    })
}

/// Formats like C's `%.9g`: 9 significant digits, trailing zeros removed.
pub(crate) fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        format!("{}e{exp}", trim_fraction(mantissa))
    } else {
        let decimals = (8 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(vectors: &[(&str, [f64; 2])]) -> EmbeddingSpace {
        EmbeddingSpace::from_vectors(2, 0.5, 1, vectors.iter().map(|(w, v)| (*w, v.to_vec())))
            .unwrap()
    }

    fn at(deg: f64) -> [f64; 2] {
        let r = deg.to_radians();
        [r.cos(), r.sin()]
    }

    #[test]
    fn duplicate_vector_is_first() {
        let s = space(&[
            ("w", [0.3, 0.4]),
            ("dup", [0.3, 0.4]),
            ("other", [1.0, -2.0]),
        ]);
        let nn = nearest_neighbors(&s, "w", 5).unwrap();
        assert_eq!(nn.neighbors[0].0, "dup");
        assert!((nn.neighbors[0].1 - 1.0).abs() < 1e-12);
        assert!(nn.words().all(|w| w != "w"));
    }

    #[test]
    fn angles_order_neighbors() {
        let s = space(&[("q", at(0.0)), ("right", at(90.0)), ("near", at(10.0))]);
        let nn = nearest_neighbors(&s, "q", 10).unwrap();
        assert_eq!(nn.words().collect::<Vec<_>>(), ["near", "right"]);
        assert!((nn.neighbors[0].1 - 10f64.to_radians().cos()).abs() < 1e-12);
        assert!(nn.neighbors[1].1.abs() < 1e-12);
    }

    #[test]
    fn ties_are_lexicographic_and_n_truncates() {
        let s = space(&[
            ("q", [1.0, 0.0]),
            ("b", [2.0, 0.0]),
            ("a", [3.0, 0.0]),
            ("c", [0.0, 1.0]),
        ]);
        let nn = nearest_neighbors(&s, "q", 1).unwrap();
        assert_eq!(nn.words().collect::<Vec<_>>(), ["a"]);
        let all = nearest_neighbors(&s, "q", 100).unwrap();
        assert_eq!(all.words().collect::<Vec<_>>(), ["a", "b", "c"]);
    }

    #[test]
    fn oov_and_zero_vectors() {
        let s = space(&[("q", [1.0, 0.0]), ("z", [0.0, 0.0])]);
        assert!(matches!(
            nearest_neighbors(&s, "nope", 3),
            Err(Error::OutOfVocabulary(_))
        ));
        assert_eq!(nearest_neighbors(&s, "q", 3).unwrap().neighbors[0].1, 0.0);
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(-0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(-0.5), "-0.5");
        assert_eq!(format_sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1234567894.0), "1.23456789e9");
        assert_eq!(format_sig9(0.000123456789123), "0.000123456789");
        assert_eq!(format_sig9(1.5e-7), "1.5e-7");
        assert_eq!(format_sig9(9.9999999999), "10");
    }

    #[test]
    fn text_round_trip_is_stable() {
        let s = EmbeddingSpace::from_vectors(
            3,
            0.5,
            42,
            [
                ("time", vec![0.123456789123, -1.0, 3e-9]),
                ("no money", vec![2.0, 0.0, -7.25]),
            ],
        )
        .unwrap();
        let mut first = Vec::new();
        s.write_text(&mut first).unwrap();
        let text = String::from_utf8(first.clone()).unwrap();
        assert!(text.starts_with("dim 3 0.5 42\n"));
        assert!(text.contains("no money\t2\t0\t-7.25\n"));
        let back = EmbeddingSpace::read_text(first.as_slice(), "mem").unwrap();
        assert_eq!(back.words(), s.words());
        assert_eq!(back.dim(), 3);
        assert_eq!(back.seed(), 42);
        let mut second = Vec::new();
        back.write_text(&mut second).unwrap();
        assert_eq!(first, second);
        assert!((back.vector("time").unwrap()[0] - 0.123456789).abs() < 1e-15);
    }

    #[test]
    fn read_rejects_malformed() {
        assert!(EmbeddingSpace::read_text("".as_bytes(), "m").is_err());
        assert!(EmbeddingSpace::read_text("dims 2 0.5 1\n".as_bytes(), "m").is_err());
        assert!(EmbeddingSpace::read_text("dim 2 0.5 1\na\t1\n".as_bytes(), "m").is_err());
        assert!(EmbeddingSpace::read_text("dim 2 0.5 1\na\t1\tx\n".as_bytes(), "m").is_err());
        assert!(EmbeddingSpace::read_text("dim 1 0.5 1\na\t1\na\t2\n".as_bytes(), "m").is_err());
    }
}
