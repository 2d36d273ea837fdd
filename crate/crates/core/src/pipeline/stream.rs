//! Coefficient streams and their text format.
//!
//! ```text
//! # label=13/2(1)
//! # two_k=13
//! # ell=6
//! # bound=1000000
//! # count=3
//! 1	1.000000000e0
//! 5	-3.172834512e-1
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::arith::nt::is_prime;
use crate::error::{Error, Result};

/// Normalised coefficients `(n, b(n))` at recorded indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffStream {
    pub label: String,
    pub two_k: u32,
    pub ell: u32,
    pub bound: u64,
    pub entries: Vec<(u64, f64)>,
}

impl CoeffStream {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|&(_, b)| b).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn with_entries(&self, entries: Vec<(u64, f64)>) -> Self {
        CoeffStream { entries, ..self.clone() }
    }
}

/// Ten significant digits in scientific notation.
pub fn format_value(b: f64) -> String {
    format!("{b:.9e}")
}

/// `b` rounded to its printed form.
pub fn round_to_format(b: f64) -> f64 {
    format_value(b).parse().unwrap()
}

pub fn render_stream(s: &CoeffStream) -> String {
    let mut out = String::with_capacity(32 * s.entries.len() + 128);
    let _ = writeln!(out, "# label={}", s.label);
    let _ = writeln!(out, "# two_k={}", s.two_k);
    let _ = writeln!(out, "# ell={}", s.ell);
    let _ = writeln!(out, "# bound={}", s.bound);
    let _ = writeln!(out, "# count={}", s.entries.len());
    for &(n, b) in &s.entries {
        let _ = writeln!(out, "{n}\t{}", format_value(b));
    }
    out
}

pub fn write_stream(s: &CoeffStream, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_stream(s)).map_err(|e| Error::io(path, e))
}

pub fn read_stream(path: impl AsRef<Path>) -> Result<CoeffStream> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_stream(&text, path)
}

pub fn parse_stream(text: &str, path: &Path) -> Result<CoeffStream> {
    let err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut label = None;
    let mut two_k = None;
    let mut ell = None;
    let mut bound = None;
    let mut count = None;
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        if let Some(h) = line.strip_prefix("# ") {
            let (k, v) = h.split_once('=').ok_or_else(|| err(ln, format!("malformed header {line:?}")))?;
            let num = |v: &str| v.parse::<u64>().map_err(|e| err(ln, format!("{k}: {e}")));
            match k {
                "label" => label = Some(v.to_string()),
                "two_k" => two_k = Some(num(v)? as u32),
                "ell" => ell = Some(num(v)? as u32),
                "bound" => bound = Some(num(v)?),
                "count" => count = Some(num(v)? as usize),
                _ => return Err(err(ln, format!("unknown header key {k:?}"))),
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let (n, b) = line.split_once('\t').ok_or_else(|| err(ln, "expected index<TAB>value".into()))?;
        let n: u64 = n.parse().map_err(|e| err(ln, format!("index: {e}")))?;
        let b: f64 = b.parse().map_err(|e| err(ln, format!("value: {e}")))?;
        if let Some(&(prev, _)) = entries.last() {
            if n <= prev {
                return Err(err(ln, format!("index {n} does not increase")));
            }
        }
        entries.push((n, b));
    }
    let missing = |k: &str| err(0, format!("missing header {k}"));
    let count = count.ok_or_else(|| missing("count"))?;
    if count != entries.len() {
        return Err(err(0, format!("header count {count} but {} entries", entries.len())));
    }
    Ok(CoeffStream {
        label: label.ok_or_else(|| missing("label"))?,
        two_k: two_k.ok_or_else(|| missing("two_k"))?,
        ell: ell.ok_or_else(|| missing("ell"))?,
        bound: bound.ok_or_else(|| missing("bound"))?,
        entries,
    })
}

/// `parts` consecutive pieces, sizes differing by at most one, longer first.
pub fn subset_split(s: &CoeffStream, parts: usize) -> Vec<CoeffStream> {
    assert!(parts >= 1);
    let n = s.entries.len();
    let (q, r) = (n / parts, n % parts);
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let len = q + usize::from(i < r);
        out.push(s.with_entries(s.entries[start..start + len].to_vec()));
        start += len;
    }
    out
}

/// Entries at prime indices, values unchanged.
pub fn prime_filter(s: &CoeffStream) -> CoeffStream {
    s.with_entries(s.entries.iter().copied().filter(|&(n, _)| is_prime(n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stream(entries: Vec<(u64, f64)>) -> CoeffStream {
        CoeffStream { label: "13/2(1)".into(), two_k: 13, ell: 6, bound: 100, entries }
    }

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        for s in [stream(vec![]), stream(vec![(1, 1.0), (5, round_to_format(-0.31728345123)), (13, 2.5e-7)])] {
            let p = dir.path().join("s.txt");
            write_stream(&s, &p).unwrap();
            let text = fs::read_to_string(&p).unwrap();
            assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), s.len());
            let back = read_stream(&p).unwrap();
            assert_eq!(back, s);
            assert_eq!(render_stream(&back), text);
        }
    }

    #[test]
    fn format_contract() {
        assert_eq!(format_value(1.0), "1.000000000e0");
        assert_eq!(format_value(-0.00123456789012), "-1.234567890e-3");
    }

    #[test]
    fn malformed_input_names_the_line() {
        let p = Path::new("x");
        let bad = "# label=a\n# two_k=13\n# ell=6\n# bound=9\n# count=1\n1 1.0\n";
        match parse_stream(bad, p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let short = "# label=a\n# two_k=13\n# ell=6\n# bound=9\n# count=2\n1\t1.0\n";
        assert!(matches!(parse_stream(short, p), Err(Error::Parse { .. })));
    }

    #[test]
    fn splits_and_filters() {
        let s = stream((0..10).map(|i| (4 * i + 1, i as f64)).collect());
        let sizes = |k| subset_split(&s, k).iter().map(|x| x.len()).collect::<Vec<_>>();
        assert_eq!(sizes(2), vec![5, 5]);
        assert_eq!(sizes(3), vec![4, 3, 3]);
        let f = prime_filter(&stream(vec![(1, 1.0), (5, 0.5), (13, 0.2), (21, 0.1)]));
        assert_eq!(f.entries, vec![(5, 0.5), (13, 0.2)]);
        assert!(prime_filter(&stream(vec![])).is_empty());
    }

    proptest! {
        #[test]
        fn split_concatenates(n in 0usize..200, parts in 1usize..25) {
            let s = stream((0..n as u64).map(|i| (i + 1, i as f64)).collect());
            let pieces = subset_split(&s, parts);
            prop_assert_eq!(pieces.len(), parts);
            let lens: Vec<usize> = pieces.iter().map(|p| p.len()).collect();
            prop_assert!(lens.windows(2).all(|w| w[0] >= w[1] && w[0] - w[1] <= 1));
            let joined: Vec<_> = pieces.into_iter().flat_map(|p| p.entries).collect();
            prop_assert_eq!(joined, s.entries);
        }

        #[test]
        fn text_round_trip(vals in prop::collection::vec(-1e3f64..1e3, 0..50)) {
            let s = stream(vals.iter().enumerate().map(|(i, &v)| (i as u64 * 4 + 1, round_to_format(v))).collect());
            let text = render_stream(&s);
            let back = parse_stream(&text, Path::new("mem")).unwrap();
            prop_assert_eq!(render_stream(&back), text);
            prop_assert_eq!(back, s);
        }
    }
}
