//! Periodicity utilities on finite words, all built on the failure function.
//!
//! Functions take slices so they work equally on [`crate::Word`] letters and
//! on vertex codings.

use crate::{Error, Result};

/// `pi[i]` is the length of the longest proper border of `w[..=i]`.
pub fn failure_function<T: PartialEq>(w: &[T]) -> Vec<usize> {
    let mut pi = vec![0; w.len()];
    let mut b = 0;
    for i in 1..w.len() {
        while b > 0 && w[i] != w[b] {
            b = pi[b - 1];
        }
        if w[i] == w[b] {
            b += 1;
        }
        pi[i] = b;
    }
    pi
}

/// Smallest `p >= 1` with `w[i] = w[i + p]` wherever both are defined.
pub fn least_period<T: PartialEq>(w: &[T]) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::contract("the empty word has no least period"));
    }
    Ok(w.len() - failure_function(w).last().copied().unwrap_or(0))
}

/// All border lengths of `w` (proper, nonzero), longest first.
pub fn borders<T: PartialEq>(w: &[T]) -> Vec<usize> {
    let pi = failure_function(w);
    let mut out = Vec::new();
    let mut b = pi.last().copied().unwrap_or(0);
    while b > 0 {
        out.push(b);
        b = pi[b - 1];
    }
    out
}

/// All periods of `w` in increasing order (`|w|` included).
pub fn periods<T: PartialEq>(w: &[T]) -> Vec<usize> {
    let mut p: Vec<usize> = borders(w).into_iter().map(|b| w.len() - b).collect();
    p.push(w.len());
    p
}

pub fn is_period<T: PartialEq>(w: &[T], p: usize) -> bool {
    p >= 1 && first_period_break(w, p).is_none()
}

/// First index `i` with `w[i] != w[i + p]`.
pub fn first_period_break<T: PartialEq>(w: &[T], p: usize) -> Option<usize> {
    (0..w.len().saturating_sub(p)).find(|&i| w[i] != w[i + p])
}

/// `z[i]` is the length of the longest common prefix of `w` and `w[i..]`
/// (`z[0] = |w|`).
pub fn z_function<T: PartialEq>(w: &[T]) -> Vec<usize> {
    let n = w.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = z[i - l].min(r - i);
        }
        while i + z[i] < n && w[z[i]] == w[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// For every `p` in `1..=max_p`, the first index where period `p` breaks
/// (`None` if `p` is a period). Linear in `|w|` via the Z-function.
pub fn period_breaks<T: PartialEq>(w: &[T], max_p: usize) -> Vec<Option<usize>> {
    let z = z_function(w);
    (1..=max_p)
        .map(|p| match z.get(p) {
            Some(&len) if p + len < w.len() => Some(len),
            _ => None,
        })
        .collect()
}

/// Least period `p` of a prefix, reported only when the prefix holds at
/// least two full copies of it. A shorter prefix cannot tell a genuine period
/// from a long border, so it certifies nothing.
pub fn certified_period<T: PartialEq>(w: &[T]) -> Option<usize> {
    let p = least_period(w).ok()?;
    (w.len() >= 2 * p).then_some(p)
}

/// Shortest `r` and largest `e` with `w = r^e`, as `(|r|, e)`.
pub fn primitive_root<T: PartialEq>(w: &[T]) -> Result<(usize, usize)> {
    let p = least_period(w)?;
    Ok(if w.len().is_multiple_of(p) { (p, w.len() / p) } else { (w.len(), 1) })
}

/// Whether `uv = vu`, decided directly and via primitive roots; the two
/// answers must agree for any pair of words.
pub fn commute<T: PartialEq>(u: &[T], v: &[T]) -> bool {
    let direct = u.len() + v.len() == 0 || {
        let uv = u.iter().chain(v);
        let vu = v.iter().chain(u);
        uv.zip(vu).all(|(a, b)| a == b)
    };
    let by_roots = match (primitive_root(u), primitive_root(v)) {
        (Ok((ru, _)), Ok((rv, _))) => ru == rv && u[..ru] == v[..rv],
        _ => true,
    };
    assert_eq!(direct, by_roots, "commutation criteria disagree");
    direct
}

/// Streaming matcher: feed the text one symbol at a time.
#[derive(Debug, Clone)]
pub struct KmpMatcher<T> {
    pattern: Vec<T>,
    pi: Vec<usize>,
    state: usize,
}

impl<T: PartialEq + Clone> KmpMatcher<T> {
    pub fn new(pattern: &[T]) -> Self {
        assert!(!pattern.is_empty(), "empty pattern");
        KmpMatcher {
            pi: failure_function(pattern),
            pattern: pattern.to_vec(),
            state: 0,
        }
    }

    /// Consumes one symbol; true when an occurrence ends at it.
    pub fn feed(&mut self, x: T) -> bool {
        if self.state == self.pattern.len() {
            self.state = self.pi[self.state - 1];
        }
        while self.state > 0 && self.pattern[self.state] != x {
            self.state = self.pi[self.state - 1];
        }
        if self.pattern[self.state] == x {
            self.state += 1;
        }
        self.state == self.pattern.len()
    }
}

/// Every start position of `pattern` in `text`.
pub fn occurrences<T: PartialEq + Clone>(text: &[T], pattern: &[T]) -> Vec<usize> {
    let mut m = KmpMatcher::new(pattern);
    text.iter()
        .enumerate()
        .filter(|&(_i, x)| m.feed(x.clone())).map(|(i, _x)| i + 1 - pattern.len())
        .collect()
}
