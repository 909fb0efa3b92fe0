//! The `qcaseed v1` seed-file format: a line-oriented key/value text format
//! with a matrix block, hand-editable and round-trippable.
//!
//! ```text
//! qcaseed v1
//! rank 2
//! B
//! 0 -1
//! 1 0
//! d 2 1
//! r 1 2
//! z 1,1 symbolic
//! sequence 1 2 1 2 1 2
//! sigma 1 2
//! order 12
//! ```
//!
//! `r` is optional: when absent a valid weight vector is computed from the
//! matrix and the degrees, or loading fails. `z` entries default to symbolic.
//! `expect <t> <i> = <expression>` lines attach closed-form expectations for
//! the mutate command. `#` starts a comment line.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qgca_core::torus::{ExchangeData, IntMatrix, ZValue};

pub const HEADER: &str = "qcaseed v1";
pub const DEFAULT_ORDER: i64 = 12;

#[derive(Clone, Debug)]
pub struct SeedFile {
    pub ed: ExchangeData,
    /// 0-based mutation indices.
    pub sequence: Vec<usize>,
    /// 0-based permutation, sigma[i] = image of i.
    pub sigma: Vec<usize>,
    pub order: i64,
    /// (time t 1-based, variable index 0-based, expression source).
    pub expects: Vec<(usize, usize, String)>,
}

fn parse_ints(line: &str, what: &str) -> Result<Vec<i64>, String> {
    line.split_whitespace()
        .map(|w| {
            w.parse::<i64>()
                .map_err(|_| format!("{what}: '{w}' is not an integer"))
        })
        .collect()
}

/// Find positive integer weights with r_i d_i b_ij = -r_j d_j b_ji by
/// propagating the forced ratios across the nonzero entries of B.
fn compute_weights(b: &IntMatrix, d: &[i64]) -> Result<Vec<i64>, String> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let n = b.n();
    // ratios as positive fractions (num, den) relative to a component root
    let mut ratio: Vec<Option<(i64, i64)>> = vec![None; n];
    for root in 0..n {
        if ratio[root].is_some() {
            continue;
        }
        ratio[root] = Some((1, 1));
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let (pi, qi) = ratio[i].unwrap();
            for j in 0..n {
                if b.get(i, j) == 0 {
                    continue;
                }
                if b.get(j, i) == 0 {
                    return Err(format!(
                        "matrix is not skew-symmetrizable: b[{},{}] != 0 but b[{},{}] = 0",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    ));
                }
                // r_j / r_i = -d_i b_ij / (d_j b_ji)
                let num = -d[i] * b.get(i, j);
                let den = d[j] * b.get(j, i);
                if num.signum() * den.signum() <= 0 {
                    return Err(format!(
                        "matrix is not skew-symmetrizable: b[{},{}] and b[{},{}] have the same sign",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    ));
                }
                let (num, den) = (num.abs(), den.abs());
                let pj = pi * num;
                let qj = qi * den;
                let g = gcd(pj, qj).max(1);
                let rj = (pj / g, qj / g);
                match ratio[j] {
                    None => {
                        ratio[j] = Some(rj);
                        stack.push(j);
                    }
                    Some(prev) => {
                        if prev != rj {
                            return Err(format!(
                                "matrix is not skew-symmetrizable with these degrees: \
                                 inconsistent weight ratio at index {}",
                                j + 1
                            ));
                        }
                    }
                }
            }
        }
    }
    let mut lcm_den = 1i64;
    for r in ratio.iter().flatten() {
        lcm_den = lcm_den / gcd(lcm_den, r.1) * r.1;
    }
    let mut weights: Vec<i64> = ratio
        .iter()
        .map(|r| {
            let (p, q) = r.unwrap();
            p * (lcm_den / q)
        })
        .collect();
    let g = weights.iter().fold(0, |acc, &w| gcd(acc, w)).max(1);
    for w in weights.iter_mut() {
        *w /= g;
    }
    Ok(weights)
}

impl SeedFile {
    pub fn parse(text: &str) -> Result<SeedFile, String> {
        let mut lines = text.lines().enumerate().peekable();
        let mut header_seen = false;
        let mut rank: Option<usize> = None;
        let mut matrix: Option<IntMatrix> = None;
        let mut degrees: Option<Vec<i64>> = None;
        let mut weights: Option<Vec<i64>> = None;
        let mut zmap: BTreeMap<(usize, usize), ZValue> = BTreeMap::new();
        let mut sequence: Vec<usize> = Vec::new();
        let mut sigma: Option<Vec<usize>> = None;
        let mut order = DEFAULT_ORDER;
        let mut expects = Vec::new();

        while let Some((lineno, raw)) = lines.next() {
            let line = raw.trim();
            let loc = |msg: String| format!("line {}: {msg}", lineno + 1);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                if line != HEADER {
                    return Err(loc(format!("expected header '{HEADER}', found '{line}'")));
                }
                header_seen = true;
                continue;
            }
            let (key, rest) = match line.split_once(char::is_whitespace) {
                Some((k, r)) => (k, r.trim()),
                None => (line, ""),
            };
            match key {
                "rank" => {
                    let n: usize = rest
                        .parse()
                        .map_err(|_| loc(format!("rank: '{rest}' is not a positive integer")))?;
                    if n == 0 {
                        return Err(loc("rank must be at least 1".into()));
                    }
                    rank = Some(n);
                }
                "B" => {
                    let n = rank.ok_or_else(|| loc("rank must come before B".into()))?;
                    let mut entries = Vec::with_capacity(n * n);
                    for row in 0..n {
                        let (rowno, rowline) = lines
                            .next()
                            .ok_or_else(|| loc(format!("B: missing row {}", row + 1)))?;
                        let vals = parse_ints(rowline.trim(), "B")
                            .map_err(|m| format!("line {}: {m}", rowno + 1))?;
                        if vals.len() != n {
                            return Err(format!(
                                "line {}: B row {} has {} entries, expected {}",
                                rowno + 1,
                                row + 1,
                                vals.len(),
                                n
                            ));
                        }
                        entries.extend(vals);
                    }
                    matrix = Some(IntMatrix::new(n, entries));
                }
                "d" => degrees = Some(parse_ints(rest, "d").map_err(loc)?),
                "r" => weights = Some(parse_ints(rest, "r").map_err(loc)?),
                "z" => {
                    let (idx, val) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| loc("z: expected 'z i,s <value>'".into()))?;
                    let (i, s) = idx
                        .split_once(',')
                        .ok_or_else(|| loc(format!("z: bad index '{idx}', expected i,s")))?;
                    let i: usize = i
                        .trim()
                        .parse()
                        .map_err(|_| loc(format!("z: bad index '{idx}'")))?;
                    let s: usize = s
                        .trim()
                        .parse()
                        .map_err(|_| loc(format!("z: bad index '{idx}'")))?;
                    let val = val.trim();
                    let zv = if val == "symbolic" {
                        ZValue::Symbolic
                    } else if let Some((p, q)) = val.split_once('/') {
                        let p: i64 = p
                            .trim()
                            .parse()
                            .map_err(|_| loc(format!("z: bad rational '{val}'")))?;
                        let q: i64 = q
                            .trim()
                            .parse()
                            .map_err(|_| loc(format!("z: bad rational '{val}'")))?;
                        ZValue::rational(p, q).map_err(|e| loc(format!("z: {e}")))?
                    } else {
                        let p: i64 = val
                            .parse()
                            .map_err(|_| loc(format!("z: bad value '{val}'")))?;
                        ZValue::rational(p, 1).map_err(|e| loc(format!("z: {e}")))?
                    };
                    zmap.insert((i, s), zv);
                }
                "sequence" => {
                    let nums = parse_ints(rest, "sequence").map_err(loc)?;
                    sequence = nums
                        .into_iter()
                        .map(|k| {
                            if k >= 1 {
                                Ok((k - 1) as usize)
                            } else {
                                Err(loc(format!("sequence: index {k} is not 1-based positive")))
                            }
                        })
                        .collect::<Result<_, _>>()?;
                }
                "sigma" => {
                    let nums = parse_ints(rest, "sigma").map_err(loc)?;
                    sigma = Some(
                        nums.into_iter()
                            .map(|k| {
                                if k >= 1 {
                                    Ok((k - 1) as usize)
                                } else {
                                    Err(loc(format!("sigma: index {k} is not 1-based positive")))
                                }
                            })
                            .collect::<Result<_, _>>()?,
                    );
                }
                "order" => {
                    order = rest
                        .parse()
                        .map_err(|_| loc(format!("order: '{rest}' is not an integer")))?;
                    if order < 0 {
                        return Err(loc("order must be non-negative".into()));
                    }
                }
                "expect" => {
                    let mut parts = rest.splitn(3, char::is_whitespace);
                    let t: usize = parts
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| loc("expect: usage 'expect t i = <expr>'".into()))?;
                    let i: usize = parts
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| loc("expect: usage 'expect t i = <expr>'".into()))?;
                    let tail = parts.next().unwrap_or("").trim();
                    let expr = tail
                        .strip_prefix('=')
                        .ok_or_else(|| loc("expect: missing '='".into()))?
                        .trim();
                    if t == 0 || i == 0 {
                        return Err(loc("expect: t and i are 1-based".into()));
                    }
                    expects.push((t, i - 1, expr.to_string()));
                }
                other => return Err(loc(format!("unknown field '{other}'"))),
            }
        }
        if !header_seen {
            return Err(format!("missing header '{HEADER}'"));
        }
        let n = rank.ok_or("missing field 'rank'")?;
        let b = matrix.ok_or("missing matrix block 'B'")?;
        let d = degrees.ok_or("missing field 'd'")?;
        if d.len() != n {
            return Err(format!("d has {} entries, expected {n}", d.len()));
        }
        let r = match weights {
            Some(r) => {
                if r.len() != n {
                    return Err(format!("r has {} entries, expected {n}", r.len()));
                }
                r
            }
            None => compute_weights(&b, &d)?,
        };
        let ed = ExchangeData::new(b, d, r, zmap).map_err(|e| e.to_string())?;
        let sigma = sigma.unwrap_or_else(|| (0..n).collect());
        for &k in &sequence {
            if k >= n {
                return Err(format!("sequence index {} out of range 1..={n}", k + 1));
            }
        }
        for (t, i, _) in &expects {
            if *i >= n {
                return Err(format!("expect: variable index {} out of range", i + 1));
            }
            if *t > sequence.len() + 1 {
                return Err(format!(
                    "expect: time {t} beyond the sequence (max {})",
                    sequence.len() + 1
                ));
            }
        }
        Ok(SeedFile {
            ed,
            sequence,
            sigma,
            order,
            expects,
        })
    }

    pub fn to_text(&self) -> String {
        let n = self.ed.n();
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "rank {n}");
        let _ = writeln!(out, "B");
        for i in 0..n {
            let row: Vec<String> = self
                .ed
                .b()
                .row(i)
                .iter()
                .map(|x| x.to_string())
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        let ds: Vec<String> = self.ed.degrees().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "d {}", ds.join(" "));
        let rs: Vec<String> = self.ed.weights().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "r {}", rs.join(" "));
        for ((i, s), v) in self.ed.z_table() {
            match v {
                ZValue::Symbolic => {
                    let _ = writeln!(out, "z {i},{s} symbolic");
                }
                ZValue::Rational(c) => {
                    let _ = writeln!(out, "z {i},{s} {c}");
                }
            }
        }
        if !self.sequence.is_empty() {
            let ks: Vec<String> = self.sequence.iter().map(|k| (k + 1).to_string()).collect();
            let _ = writeln!(out, "sequence {}", ks.join(" "));
        }
        let sg: Vec<String> = self.sigma.iter().map(|s| (s + 1).to_string()).collect();
        let _ = writeln!(out, "sigma {}", sg.join(" "));
        let _ = writeln!(out, "order {}", self.order);
        for (t, i, expr) in &self.expects {
            let _ = writeln!(out, "expect {t} {} = {expr}", i + 1);
        }
        out
    }
}
