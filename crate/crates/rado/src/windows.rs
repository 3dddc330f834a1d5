//! Finite-window set arithmetic and verifiers for the density lemmas.
//!
//! Upper density is not computable from a finite window, so everything
//! here is an explicit window proxy: sets carry the interval they were
//! computed within, operations clip to a caller-supplied output window,
//! and clipping is recorded so the lemma checkers can answer
//! "window-inconclusive" instead of reporting a false counterexample.

use crate::coloring::Coloring;
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// Largest permitted window, in bits. Guards against runaway allocation
/// from iterated sumsets.
const MAX_WINDOW_BITS: i64 = 1 << 27;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error("window [{lo}, {hi}] exceeds the size cap")]
    WindowTooLarge { lo: i64, hi: i64 },
    #[error("member {member} outside window [{lo}, {hi}]")]
    MemberOutsideWindow { member: i64, lo: i64, hi: i64 },
    #[error("n = {n} outside window (hi = {hi})")]
    DensityIndexOutOfWindow { n: i64, hi: i64 },
    #[error("density must be in (0, 1], got {0}")]
    BadDensity(Rational64),
    #[error("progression length must be >= 1")]
    BadProgressionLength,
    #[error("malformed window set: {0}")]
    Malformed(String),
}

/// A closed integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self, WindowError> {
        if lo > hi {
            return Err(WindowError::InvalidWindow { lo, hi });
        }
        if hi - lo + 1 > MAX_WINDOW_BITS {
            return Err(WindowError::WindowTooLarge { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Finite set of integers inside an explicit window, bitset-backed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSet {
    window: Window,
    bits: Vec<u64>,
    /// True when some element of the exact (unclipped) result of the
    /// operation that produced this set fell outside `window`.
    clipped: bool,
}

impl WindowSet {
    pub fn empty(window: Window) -> Self {
        let words = window.len().div_ceil(64);
        Self {
            window,
            bits: vec![0; words],
            clipped: false,
        }
    }

    pub fn from_members<I: IntoIterator<Item = i64>>(
        window: Window,
        members: I,
    ) -> Result<Self, WindowError> {
        let mut s = Self::empty(window);
        for m in members {
            if !window.contains(m) {
                return Err(WindowError::MemberOutsideWindow {
                    member: m,
                    lo: window.lo,
                    hi: window.hi,
                });
            }
            s.insert(m);
        }
        Ok(s)
    }

    /// The residue class `r mod q` intersected with the window.
    pub fn residue_class(window: Window, r: i64, q: i64) -> Result<Self, WindowError> {
        if q < 1 {
            return Err(WindowError::Malformed(format!("modulus {q} must be >= 1")));
        }
        let mut s = Self::empty(window);
        let mut v = window.lo + (r - window.lo).rem_euclid(q);
        while v <= window.hi {
            s.insert(v);
            v += q;
        }
        Ok(s)
    }

    /// The full interval.
    pub fn full(window: Window) -> Self {
        let mut s = Self::empty(window);
        for v in window.lo..=window.hi {
            s.insert(v);
        }
        s
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn clipped(&self) -> bool {
        self.clipped
    }

    pub fn set_clipped(&mut self, clipped: bool) {
        self.clipped = clipped;
    }

    fn bit_index(&self, v: i64) -> usize {
        (v - self.window.lo) as usize
    }

    pub fn insert(&mut self, v: i64) {
        debug_assert!(self.window.contains(v));
        let i = self.bit_index(v);
        self.bits[i / 64] |= 1u64 << (i % 64);
    }

    pub fn contains(&self, v: i64) -> bool {
        if !self.window.contains(v) {
            return false;
        }
        let i = self.bit_index(v);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn min(&self) -> Option<i64> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<i64> {
        for (wi, w) in self.bits.iter().enumerate().rev() {
            if *w != 0 {
                let bit = 63 - w.leading_zeros() as usize;
                return Some(self.window.lo + (wi * 64 + bit) as i64);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.bits.iter().enumerate().flat_map(move |(wi, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(self.window.lo + (wi * 64 + bit) as i64)
            })
        })
    }

    pub fn members(&self) -> Vec<i64> {
        self.iter().collect()
    }

    /// Count of members in `[lo..hi]`.
    pub fn count_range(&self, lo: i64, hi: i64) -> usize {
        self.iter().filter(|v| lo <= *v && *v <= hi).count()
    }

    /// OR `other` shifted by `shift` into `self`, word-parallel; bits
    /// landing outside `self.window` are silently dropped (callers track
    /// clipping from element ranges).
    fn or_shifted_unchecked(&mut self, other: &WindowSet, shift: i64) {
        let offset = other.window.lo + shift - self.window.lo;
        let nbits = self.window.len() as i64;
        for (wi, &word) in other.bits.iter().enumerate() {
            if word == 0 {
                continue;
            }
            let base = offset + (wi as i64) * 64;
            if base + 63 < 0 || base >= nbits {
                continue;
            }
            // split the source word over up to two target words
            if base >= 0 {
                let t = (base / 64) as usize;
                let s = (base % 64) as u32;
                if t < self.bits.len() {
                    self.bits[t] |= mask_word(word << s, t, self.bits.len(), nbits);
                }
                if s > 0 && t + 1 < self.bits.len() {
                    self.bits[t + 1] |=
                        mask_word(word >> (64 - s), t + 1, self.bits.len(), nbits);
                }
            } else {
                // base in [-63, -1]: low bits fall off the left edge
                let s = (-base) as u32;
                let shifted = word >> s;
                if shifted != 0 {
                    self.bits[0] |= mask_word(shifted, 0, self.bits.len(), nbits);
                }
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lo": self.window.lo,
            "hi": self.window.hi,
            "members": self.members(),
        })
    }

    /// Parse `{"lo", "hi", "members": [...]}` or the arithmetic-progression
    /// shorthand `{"lo", "hi", "residue": r, "modulus": q}`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, WindowError> {
        let get_i64 = |k: &str| -> Result<i64, WindowError> {
            value
                .get(k)
                .and_then(|v| v.as_i64())
                .ok_or_else(|| WindowError::Malformed(format!("missing integer field {k:?}")))
        };
        let window = Window::new(get_i64("lo")?, get_i64("hi")?)?;
        if value.get("residue").is_some() || value.get("modulus").is_some() {
            return Self::residue_class(window, get_i64("residue")?, get_i64("modulus")?);
        }
        let members: Vec<i64> = serde_json::from_value(
            value
                .get("members")
                .cloned()
                .ok_or_else(|| WindowError::Malformed("missing \"members\"".into()))?,
        )
        .map_err(|e| WindowError::Malformed(e.to_string()))?;
        Self::from_members(window, members)
    }
}

// keep bits beyond the window's last valid position zeroed
fn mask_word(word: u64, word_index: usize, n_words: usize, nbits: i64) -> u64 {
    if word_index + 1 == n_words {
        let used = nbits as usize - (n_words - 1) * 64;
        if used < 64 {
            return word & ((1u64 << used) - 1);
        }
    }
    word
}

/// `A + B = {a + b}`, exact within `out`; clipping recorded.
///
/// ```
/// use rado::windows::{sumset, Window, WindowSet};
///
/// let w = Window::new(1, 10).unwrap();
/// let a = WindowSet::from_members(w, [1, 3]).unwrap();
/// let b = WindowSet::from_members(w, [2, 5]).unwrap();
/// let out = Window::new(0, 20).unwrap();
/// let s = sumset(&a, &b, out);
/// assert_eq!(s.members(), vec![3, 5, 6, 8]);
/// assert!(!s.clipped());
/// ```
pub fn sumset(a: &WindowSet, b: &WindowSet, out: Window) -> WindowSet {
    let mut result = WindowSet::empty(out);
    result.clipped = a.clipped || b.clipped;
    let (Some(amin), Some(amax), Some(bmin), Some(bmax)) = (a.min(), a.max(), b.min(), b.max())
    else {
        return result;
    };
    if amin + bmin < out.lo || amax + bmax > out.hi {
        result.clipped = true;
    }
    for va in a.iter() {
        result.or_shifted_unchecked(b, va);
    }
    result
}

/// `-A`, over the mirrored window.
pub fn negate(a: &WindowSet) -> WindowSet {
    let window = Window {
        lo: -a.window.hi,
        hi: -a.window.lo,
    };
    let mut result = WindowSet::empty(window);
    result.clipped = a.clipped;
    for v in a.iter() {
        result.insert(-v);
    }
    result
}

/// `A - B = {a - b}`, exact within `out`.
pub fn diffset(a: &WindowSet, b: &WindowSet, out: Window) -> WindowSet {
    sumset(a, &negate(b), out)
}

/// `kA`, the k-fold sumset, exact within `out`. `k = 0` gives `{0}`.
///
/// Intermediate results are kept on "contribution windows": values that
/// could still reach `out` after the remaining additions. This makes the
/// final clipped result exact, with no false negatives from intermediate
/// truncation.
pub fn iterate(k: usize, a: &WindowSet, out: Window) -> Result<WindowSet, WindowError> {
    if k == 0 {
        let mut result = WindowSet::empty(out);
        if out.contains(0) {
            result.insert(0);
        } else {
            result.clipped = true;
        }
        return Ok(result);
    }
    if a.is_empty() {
        return Ok(WindowSet::empty(out));
    }
    let amin = a.min().expect("nonempty");
    let amax = a.max().expect("nonempty");
    let mut cur = a.clone();
    for j in 2..=k {
        let remaining = (k - j) as i64;
        let lo = (j as i64 * amin).max(out.lo - remaining * amax);
        let hi = (j as i64 * amax).min(out.hi - remaining * amin);
        if lo > hi {
            let mut empty = WindowSet::empty(out);
            empty.clipped = true;
            return Ok(empty);
        }
        cur = sumset(&cur, a, Window::new(lo, hi)?);
    }
    let mut result = WindowSet::empty(out);
    result.clipped = a.clipped
        || (k as i64) * amin < out.lo
        || (k as i64) * amax > out.hi;
    result.or_shifted_unchecked(&cur, 0);
    Ok(result)
}

/// `m . S = {m s}`, exact within `out`.
pub fn scale(m: i64, s: &WindowSet, out: Window) -> WindowSet {
    let mut result = WindowSet::empty(out);
    result.clipped = s.clipped;
    for v in s.iter() {
        let w = m * v;
        if out.contains(w) {
            result.insert(w);
        } else {
            result.clipped = true;
        }
    }
    result
}

/// `A_{>t}`: the elements of `A` exceeding `t`, over the same window.
pub fn filter_above(a: &WindowSet, t: i64) -> WindowSet {
    let mut result = WindowSet::empty(a.window);
    result.clipped = a.clipped;
    for v in a.iter() {
        if v > t {
            result.insert(v);
        }
    }
    result
}

/// Exact finite-window density proxy `|S ∩ [1..n]| / n`.
pub fn window_density(s: &WindowSet, n: i64) -> Result<Rational64, WindowError> {
    if n < 1 || n > s.window.hi {
        return Err(WindowError::DensityIndexOutOfWindow {
            n,
            hi: s.window.hi,
        });
    }
    Ok(Rational64::new(s.count_range(1, n) as i64, n))
}

/// `lcm(1, 2, ..., floor(1/d))` for a density `d` in `(0, 1]`.
pub fn lcm_bound(d: Rational64) -> Result<i64, WindowError> {
    if d <= Rational64::new(0, 1) || d > Rational64::new(1, 1) {
        return Err(WindowError::BadDensity(d));
    }
    let k = d.denom() / d.numer(); // floor(1/d), both positive
    Ok((1..=k).fold(1i64, |acc, x| acc.lcm(&x)))
}

/// Outcome of a finite-window lemma check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LemmaVerdict {
    /// The lemma's conclusion holds everywhere it could be checked on the
    /// window. `m` reports a discovered modulus where relevant.
    HoldsOnWindow {
        #[serde(skip_serializing_if = "Option::is_none")]
        m: Option<i64>,
    },
    /// Genuine failure for the given finite set, with a checkable witness.
    Fails { counterexample: i64 },
    /// The only misses are at points where window truncation could explain
    /// them; no verdict about the underlying infinite statement.
    WindowInconclusive { reason: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub params: serde_json::Value,
    #[serde(flatten)]
    pub verdict: LemmaVerdict,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, LemmaVerdict::HoldsOnWindow { .. })
    }
}

/// Check, on `out`, that `nA - nA` equals `m . Z` for some least `m >= 1`.
pub fn check_symmetric_lemma(
    a: &WindowSet,
    n: usize,
    out: Window,
) -> Result<LemmaReport, WindowError> {
    let params = serde_json::json!({
        "n": n,
        "a_window": a.window(),
        "out": out,
    });
    let report = |verdict| LemmaReport {
        lemma: "symmetric".into(),
        params: params.clone(),
        verdict,
    };
    if a.is_empty() {
        return Ok(report(LemmaVerdict::WindowInconclusive {
            reason: "A is empty on its window".into(),
        }));
    }
    let amin = a.min().expect("nonempty");
    let amax = a.max().expect("nonempty");
    // nA - nA lives naturally in [n(amin - amax), n(amax - amin)]
    let natural_lo = n as i64 * (amin - amax);
    let natural_hi = n as i64 * (amax - amin);
    let safe_lo = out.lo.max(natural_lo);
    let safe_hi = out.hi.min(natural_hi);
    if safe_lo > safe_hi {
        return Ok(report(LemmaVerdict::WindowInconclusive {
            reason: "output window disjoint from the representable range".into(),
        }));
    }
    let work = Window::new(safe_lo, safe_hi)?;
    let na = iterate(n, a, Window::new(n as i64 * amin, n as i64 * amax)?)?;
    let diff = diffset(&na, &na, work);

    // candidate modulus: gcd of the nonzero differences seen
    let mut m: i64 = 0;
    for v in diff.iter() {
        if v != 0 {
            m = m.gcd(&v.abs());
        }
    }
    if m == 0 {
        // diff is {0} (or empty); equality with m.Z fails at the first
        // nonzero point of the window for every m
        let witness = (safe_lo..=safe_hi).find(|v| *v != 0);
        return Ok(match witness {
            Some(w) => report(LemmaVerdict::Fails { counterexample: w }),
            None => report(LemmaVerdict::WindowInconclusive {
                reason: "window contains no nonzero point".into(),
            }),
        });
    }
    for v in safe_lo..=safe_hi {
        let in_diff = diff.contains(v);
        let is_multiple = v % m == 0;
        if in_diff != is_multiple {
            return Ok(report(LemmaVerdict::Fails { counterexample: v }));
        }
    }
    Ok(report(LemmaVerdict::HoldsOnWindow { m: Some(m) }))
}

/// Check, on `out`, that `S - nS` is the same set for every `n` in
/// `[n_lo, n_hi]` (the stabilization claimed for large `n`).
pub fn check_translated_lemma(
    s: &WindowSet,
    n_lo: usize,
    n_hi: usize,
    out: Window,
) -> Result<LemmaReport, WindowError> {
    let params = serde_json::json!({
        "n_lo": n_lo,
        "n_hi": n_hi,
        "s_window": s.window(),
        "out": out,
    });
    let report = |verdict| LemmaReport {
        lemma: "translated".into(),
        params: params.clone(),
        verdict,
    };
    if !s.contains(0) {
        return Ok(report(LemmaVerdict::WindowInconclusive {
            reason: "S does not contain 0".into(),
        }));
    }
    if n_lo > n_hi || n_lo < 1 {
        return Err(WindowError::Malformed(format!(
            "bad n range [{n_lo}, {n_hi}]"
        )));
    }
    let mut prev: Option<WindowSet> = None;
    for n in n_lo..=n_hi {
        // contribution window for nS: only values v with some a - v in out
        // for a in the window of S can matter
        let n_i = n as i64;
        let ns_lo = (n_i * s.window().lo).max(s.window().lo - out.hi);
        let ns_hi = (n_i * s.window().hi).min(s.window().hi - out.lo);
        let cur = if ns_lo > ns_hi {
            WindowSet::empty(out)
        } else {
            let ns = iterate(n, s, Window::new(ns_lo, ns_hi)?)?;
            diffset(s, &ns, out)
        };
        if let Some(p) = &prev {
            if p.bits != cur.bits {
                return Ok(report(LemmaVerdict::Fails {
                    counterexample: n as i64,
                }));
            }
        }
        prev = Some(cur);
    }
    Ok(report(LemmaVerdict::HoldsOnWindow { m: None }))
}

/// Check, on `out`, that `A_{>t} - nA_{>t}` covers every multiple of `m`.
///
/// ```
/// use rado::windows::{check_new_lemma, LemmaVerdict, Window, WindowSet};
///
/// let w = Window::new(1, 3000).unwrap();
/// let a = WindowSet::residue_class(w, 0, 3).unwrap(); // multiples of 3
/// let out = Window::new(-600, 600).unwrap();
/// let report = check_new_lemma(&a, 0, 6, 6, out).unwrap();
/// assert!(matches!(report.verdict, LemmaVerdict::HoldsOnWindow { .. }));
///
/// // the class 1 mod 3 misses the subgroup 3Z, and the lemma genuinely
/// // fails for it: every element of A - 6A is 1 - 6 = -5 ≡ 1 (mod 3)
/// let shifted = WindowSet::residue_class(w, 1, 3).unwrap();
/// let report = check_new_lemma(&shifted, 0, 6, 6, out).unwrap();
/// assert!(matches!(report.verdict, LemmaVerdict::Fails { .. }));
/// ```
pub fn check_new_lemma(
    a: &WindowSet,
    t: i64,
    n: usize,
    m: i64,
    out: Window,
) -> Result<LemmaReport, WindowError> {
    let params = serde_json::json!({
        "t": t,
        "n": n,
        "m": m,
        "a_window": a.window(),
        "out": out,
    });
    let report = |verdict| LemmaReport {
        lemma: "large-elements".into(),
        params: params.clone(),
        verdict,
    };
    if m < 1 {
        return Err(WindowError::Malformed(format!("m = {m} must be >= 1")));
    }
    let at = filter_above(a, t);
    if at.is_empty() {
        return Ok(report(LemmaVerdict::WindowInconclusive {
            reason: "A_{>t} is empty on the window".into(),
        }));
    }
    let amin = at.min().expect("nonempty");
    let amax = at.max().expect("nonempty");
    let n_i = n as i64;
    let nat = iterate(
        n,
        &at,
        Window::new(n_i * amin, n_i * amax)?,
    )?;
    // a - s with a in [amin, amax] and s in [n*amin, n*amax]
    let safe_lo = amin - n_i * amax;
    let safe_hi = amax - n_i * amin;
    let diff = diffset(&at, &nat, out);

    let mut first_clipped_miss: Option<i64> = None;
    // least multiple of m that is >= out.lo
    let mut v = out.lo + (-out.lo).rem_euclid(m);
    while v <= out.hi {
        if !diff.contains(v) {
            if safe_lo <= v && v <= safe_hi {
                // fully representable on the window, so a genuine miss
                // for this finite set
                return Ok(report(LemmaVerdict::Fails { counterexample: v }));
            }
            if first_clipped_miss.is_none() {
                first_clipped_miss = Some(v);
            }
        }
        v += m;
    }
    match first_clipped_miss {
        Some(w) => Ok(report(LemmaVerdict::WindowInconclusive {
            reason: format!(
                "multiple {w} uncovered but outside the representable range [{safe_lo}, {safe_hi}]"
            ),
        })),
        None => Ok(report(LemmaVerdict::HoldsOnWindow { m: Some(m) })),
    }
}

/// Least `c >= 1` such that `c, 2c, ..., lc` all fit in the colored window
/// and carry colors from `dense_classes`.
pub fn find_progression(
    coloring: &Coloring,
    l: usize,
    dense_classes: &[usize],
) -> Result<Option<i64>, WindowError> {
    if l < 1 {
        return Err(WindowError::BadProgressionLength);
    }
    let n = coloring.n() as i64;
    let l_i = l as i64;
    for c in 1..=(n / l_i) {
        let ok = (1..=l_i).all(|j| {
            let color = coloring.color(c * j).expect("in window");
            dense_classes.contains(&color)
        });
        if ok {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    fn set(lo: i64, hi: i64, members: &[i64]) -> WindowSet {
        WindowSet::from_members(w(lo, hi), members.iter().copied()).unwrap()
    }

    #[test]
    fn singleton_sumset() {
        let a = set(1, 4, &[1]);
        let s = sumset(&a, &a, w(0, 10));
        assert_eq!(s.members(), vec![2]);
        assert!(!s.clipped());
    }

    #[test]
    fn evens_difference_set() {
        let evens = WindowSet::residue_class(w(2, 20), 0, 2).unwrap();
        let d = diffset(&evens, &evens, w(-18, 18));
        let expected: Vec<i64> = (-18..=18).filter(|v| v % 2 == 0).collect();
        assert_eq!(d.members(), expected);
    }

    #[test]
    fn filter_above_basic() {
        let a = set(1, 10, &[1, 5, 9]);
        assert_eq!(filter_above(&a, 4).members(), vec![5, 9]);
    }

    #[test]
    fn sumset_records_clipping() {
        let a = set(1, 10, &[9, 10]);
        let s = sumset(&a, &a, w(0, 18));
        assert!(s.clipped()); // 19 and 20 fall outside
        assert_eq!(s.members(), vec![18]);
    }

    #[test]
    fn iterate_matches_repeated_sumset() {
        let a = set(1, 20, &[1, 3, 7]);
        let out = w(0, 60);
        let k3 = iterate(3, &a, out).unwrap();
        let k3_naive = sumset(&sumset(&a, &a, w(2, 40)), &a, out);
        assert_eq!(k3.members(), k3_naive.members());
    }

    #[test]
    fn iterate_on_empty_is_empty() {
        let a = WindowSet::empty(w(1, 10));
        assert!(iterate(3, &a, w(0, 30)).unwrap().is_empty());
    }

    #[test]
    fn scale_basic() {
        let a = set(1, 5, &[1, 2, 3]);
        assert_eq!(scale(3, &a, w(0, 10)).members(), vec![3, 6, 9]);
    }

    #[test]
    fn density_multiples_of_three() {
        let s = WindowSet::residue_class(w(1, 30), 0, 3).unwrap();
        assert_eq!(window_density(&s, 30).unwrap(), Rational64::new(1, 3));
    }

    #[test]
    fn density_full_window() {
        let s = WindowSet::full(w(1, 17));
        assert_eq!(window_density(&s, 17).unwrap(), Rational64::new(1, 1));
    }

    #[test]
    fn density_powers_of_two() {
        let s = set(1, 16, &[1, 2, 4, 8, 16]);
        assert_eq!(window_density(&s, 16).unwrap(), Rational64::new(5, 16));
    }

    #[test]
    fn density_rejects_out_of_window_n() {
        let s = set(1, 10, &[1]);
        assert!(window_density(&s, 11).is_err());
        assert!(window_density(&s, 0).is_err());
    }

    #[test]
    fn lcm_bound_values() {
        assert_eq!(lcm_bound(Rational64::new(1, 1)).unwrap(), 1);
        assert_eq!(lcm_bound(Rational64::new(1, 3)).unwrap(), 6);
        assert_eq!(lcm_bound(Rational64::new(2, 7)).unwrap(), 6);
        assert_eq!(lcm_bound(Rational64::new(1, 10)).unwrap(), 2520);
        assert!(lcm_bound(Rational64::new(3, 2)).is_err());
    }

    #[test]
    fn symmetric_lemma_full_interval() {
        let a = WindowSet::full(w(1, 50));
        let rep = check_symmetric_lemma(&a, 2, w(-40, 40)).unwrap();
        assert_eq!(rep.verdict, LemmaVerdict::HoldsOnWindow { m: Some(1) });
    }

    #[test]
    fn symmetric_lemma_residue_class() {
        let a = WindowSet::residue_class(w(1, 100), 2, 4).unwrap();
        let rep = check_symmetric_lemma(&a, 4, w(-80, 80)).unwrap();
        assert_eq!(rep.verdict, LemmaVerdict::HoldsOnWindow { m: Some(4) });
    }

    #[test]
    fn symmetric_lemma_singleton_fails() {
        // nA - nA = {0}: no m fits; fails or inconclusive depending on
        // how much of the window is representable, never holds
        let a = set(1, 20, &[10]);
        let rep = check_symmetric_lemma(&a, 3, w(-5, 5)).unwrap();
        assert!(!rep.holds());
        let rep2 = check_symmetric_lemma(&a, 3, w(0, 0)).unwrap();
        assert!(!rep2.holds());
    }

    #[test]
    fn translated_lemma_evens_stabilize() {
        let mut members: Vec<i64> = (-100..=100).filter(|v| v % 2 == 0).collect();
        members.push(0);
        let s = WindowSet::from_members(w(-100, 100), members).unwrap();
        let rep = check_translated_lemma(&s, 2, 5, w(-20, 20)).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn translated_lemma_sparse_grows() {
        let s = set(-50, 50, &[0, 1]);
        let rep = check_translated_lemma(&s, 1, 3, w(-20, 20)).unwrap();
        assert!(matches!(rep.verdict, LemmaVerdict::Fails { .. }));
    }

    #[test]
    fn new_lemma_full_interval() {
        let a = WindowSet::full(w(1, 1000));
        let rep = check_new_lemma(&a, 0, 2, 1, w(-600, 600)).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn new_lemma_evens_miss_odds() {
        let a = WindowSet::residue_class(w(1, 1000), 0, 2).unwrap();
        let rep = check_new_lemma(&a, 0, 2, 1, w(-100, 100)).unwrap();
        assert!(matches!(rep.verdict, LemmaVerdict::Fails { .. }));
    }

    #[test]
    fn new_lemma_residue_class_mod_three() {
        // the class must be 0 mod 3: it is the only residue class mod 3
        // meeting every subgroup of Z (a class r mod q with r != 0 misses
        // q.Z entirely, violating the hypothesis)
        let a = WindowSet::residue_class(w(1, 3000), 0, 3).unwrap();
        let rep = check_new_lemma(&a, 50, 6, 6, w(-600, 600)).unwrap();
        assert!(rep.holds(), "verdict: {:?}", rep.verdict);
    }

    #[test]
    fn new_lemma_nonzero_residue_class_misses() {
        // 1 mod 3 misses the subgroup 3Z; every element of A - nA is
        // 1 - n mod 3, so multiples of 6 are uncovered
        let a = WindowSet::residue_class(w(1, 3000), 1, 3).unwrap();
        let rep = check_new_lemma(&a, 50, 6, 6, w(-600, 600)).unwrap();
        assert!(matches!(rep.verdict, LemmaVerdict::Fails { .. }));
    }

    #[test]
    fn find_progression_all_dense() {
        let c = Coloring::constant(10);
        assert_eq!(find_progression(&c, 3, &[0]).unwrap(), Some(1));
    }

    #[test]
    fn find_progression_parity_blocked() {
        // dense class = odds only; c and 2c cannot both be odd
        let c = Coloring::residue(100, 2); // point i has color i % 2
        assert_eq!(find_progression(&c, 2, &[1]).unwrap(), None);
    }

    #[test]
    fn find_progression_residue_classes() {
        let c = Coloring::residue(100, 3); // color 0 = multiples of 3
        assert_eq!(find_progression(&c, 3, &[0]).unwrap(), Some(3));
    }

    #[test]
    fn translation_shift_identity() {
        // |(S + k) ∩ [1+k .. n+k]| = |S ∩ [1..n]|
        let s = set(1, 40, &[1, 4, 9, 16, 25, 36]);
        let k = 7;
        let shifted = sumset(&s, &set(k, k, &[k]), w(1 + k, 40 + k));
        for n in 1..=40 {
            assert_eq!(
                shifted.count_range(1 + k, n + k),
                s.count_range(1, n)
            );
        }
    }

    #[test]
    fn json_round_trip_and_shorthand() {
        let s = set(-5, 10, &[-3, 0, 7]);
        let back = WindowSet::from_json(&s.to_json()).unwrap();
        assert_eq!(s.members(), back.members());

        let v = serde_json::json!({"lo": 1, "hi": 10, "residue": 2, "modulus": 3});
        let r = WindowSet::from_json(&v).unwrap();
        assert_eq!(r.members(), vec![2, 5, 8]);
    }

    #[test]
    fn member_outside_window_rejected() {
        assert!(WindowSet::from_members(w(1, 5), [7]).is_err());
    }
}
