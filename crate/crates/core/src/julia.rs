//! The gap intervals `B_l` of `[0, 5]` and the shrinking cover of the
//! exceptional Cantor set (the Julia set of `z(5 - z)`).
//!
//! `B_1 = (phi_minus(5), phi_plus(5))` is the gap between the two images
//! `phi_minus([0, 5])` and `phi_plus([0, 5])`. The gaps are indexed as a binary
//! heap: `B_{2l} = phi_minus(B_l)` and `B_{2l+1} = phi_plus(B_l)`. Removing
//! `B_1, ..., B_{2^m - 1}` leaves exactly the `2^m` intervals
//! `phi_delta([0, 5])` with `|delta| = m`.
//!
//! Lengths are never taken as differences of far-apart endpoint images. Since
//! `phi(a) (5 - phi(a)) = a`, both branches satisfy
//! `|phi(a) - phi(b)| = |a - b| / |5 - phi(a) - phi(b)|`, and the lengths are
//! propagated through that quotient, which keeps full relative precision at
//! any depth.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::decimation::{psi, Generator, Sign, SignWord};
use crate::error::{Error, Result};
use crate::export;

/// Deepest cover that is materialized as a list (`2^m` intervals).
pub const LIST_CAP: u32 = 24;
/// Deepest cover whose total length can be requested. The walk visits
/// `2^m` intervals, so depths past about 32 are impractical.
pub const MEASURE_CAP: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub length: f64,
}

impl Interval {
    fn from_images(a: f64, b: f64, length: f64) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
            length,
        }
    }

    pub fn contains_open(&self, t: f64) -> bool {
        self.lo < t && t < self.hi
    }

    pub fn contains_closed(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Images of two endpoints (in their original order) plus the length between
/// them.
#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    length: f64,
}

impl Segment {
    const UNIT: Segment = Segment {
        a: 0.0,
        b: 5.0,
        length: 5.0,
    };

    fn map(self, sign: Sign) -> Segment {
        let ma = lower(self.a);
        let mb = lower(self.b);
        let length = self.length / (5.0 - ma - mb);
        match sign {
            Sign::Minus => Segment {
                a: ma,
                b: mb,
                length,
            },
            Sign::Plus => Segment {
                a: 5.0 - ma,
                b: 5.0 - mb,
                length,
            },
        }
    }

    /// Applies `phi_word`, innermost sign first.
    fn map_word(self, word: SignWord) -> Segment {
        (0..word.len())
            .rev()
            .fold(self, |s, i| s.map(word.get(i).expect("index in range")))
    }

    fn interval(self) -> Interval {
        Interval::from_images(self.a, self.b, self.length)
    }
}

// Lower branch on [0, 5], in the cancellation-free form.
fn lower(x: f64) -> f64 {
    2.0 * x / (5.0 + (25.0 - 4.0 * x).sqrt())
}

fn first_gap() -> Segment {
    let a = lower(5.0);
    Segment {
        a,
        b: 5.0 - a,
        length: 5f64.sqrt(),
    }
}

/// The word `gamma` with `B_index = phi_gamma(B_1)`.
pub fn gap_word(index: u64) -> Result<SignWord> {
    if index == 0 {
        return Err(Error::InvalidArgument("gap indices start at 1".into()));
    }
    let depth = 63 - index.leading_zeros();
    // The lowest bit is the map applied last, so later bits are prepended.
    (0..depth).rev().try_fold(SignWord::empty(), |w, i| {
        let sign = if (index >> i) & 1 == 1 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        w.prepend(sign)
    })
}

/// Inverse of [`gap_word`].
pub fn gap_index(word: SignWord) -> Result<u64> {
    if word.len() >= 63 {
        return Err(Error::InvalidArgument(format!(
            "gap word of length {} overflows the index",
            word.len()
        )));
    }
    Ok((0..word.len()).rev().fold(1u64, |h, i| {
        2 * h + u64::from(word.get(i) == Some(Sign::Plus))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapInterval {
    pub index: u64,
    pub word: SignWord,
    pub interval: Interval,
}

/// `B_index` as an open interval.
pub fn b_interval(index: u64) -> Result<GapInterval> {
    let word = gap_word(index)?;
    Ok(GapInterval {
        index,
        word,
        interval: first_gap().map_word(word).interval(),
    })
}

fn check_list_depth(m: u32) -> Result<()> {
    if m > LIST_CAP {
        return Err(Error::LevelCap {
            level: m,
            cap: LIST_CAP,
        });
    }
    Ok(())
}

/// `B_1, ..., B_{2^m - 1}` in index order.
pub fn b_intervals(m: u32) -> Result<Vec<GapInterval>> {
    check_list_depth(m)?;
    let total = (1usize << m) - 1;
    let mut segs = Vec::with_capacity(total);
    let mut out = Vec::with_capacity(total);
    if total > 0 {
        segs.push(first_gap());
    }
    for idx in 2..=total {
        let parent = segs[idx / 2 - 1];
        let sign = if idx % 2 == 1 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        segs.push(Segment::map(parent, sign));
    }
    for (i, seg) in segs.into_iter().enumerate() {
        let index = i as u64 + 1;
        out.push(GapInterval {
            index,
            word: gap_word(index)?,
            interval: seg.interval(),
        });
    }
    Ok(out)
}

/// The same gaps sorted left to right.
pub fn b_intervals_by_position(m: u32) -> Result<Vec<GapInterval>> {
    let mut v = b_intervals(m)?;
    v.sort_by(|a, b| a.interval.lo.total_cmp(&b.interval.lo));
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverInterval {
    pub word: SignWord,
    pub interval: Interval,
}

/// The `2^m` intervals `phi_delta([0, 5])`, `|delta| = m`, left to right.
pub fn cover(m: u32) -> Result<Vec<CoverInterval>> {
    check_list_depth(m)?;
    let mut level = vec![(SignWord::empty(), Segment::UNIT)];
    for _ in 0..m {
        let mut next = Vec::with_capacity(2 * level.len());
        // phi_minus keeps the order; phi_plus reverses it onto the right half.
        for &(w, s) in &level {
            next.push((w.prepend(Sign::Minus)?, s.map(Sign::Minus)));
        }
        for &(w, s) in level.iter().rev() {
            next.push((w.prepend(Sign::Plus)?, s.map(Sign::Plus)));
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|(word, s)| CoverInterval {
            word,
            interval: s.interval(),
        })
        .collect())
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

fn walk(seg: Segment, depth: u32, max: u32, sums: &mut [Kahan]) {
    sums[depth as usize].add(seg.length);
    if depth == max {
        return;
    }
    let minus = seg.map(Sign::Minus);
    if depth + 1 == max {
        // Both children have the same length.
        sums[max as usize].add(2.0 * minus.length);
        return;
    }
    let plus = Segment {
        a: 5.0 - minus.a,
        b: 5.0 - minus.b,
        length: minus.length,
    };
    walk(minus, depth + 1, max, sums);
    walk(plus, depth + 1, max, sums);
}

/// Total lengths of `cover(0), ..., cover(m)`.
pub fn cover_measures(m: u32) -> Result<Vec<f64>> {
    if m > MEASURE_CAP {
        return Err(Error::LevelCap {
            level: m,
            cap: MEASURE_CAP,
        });
    }
    let mut sums = vec![Kahan::default(); m as usize + 1];
    walk(Segment::UNIT, 0, m, &mut sums);
    Ok(sums.into_iter().map(|k| k.sum).collect())
}

pub fn cover_measure(m: u32) -> Result<f64> {
    Ok(*cover_measures(m)?.last().expect("at least depth 0"))
}

/// `5 (2 / sqrt 5)^m`, from `|phi'| <= 1/sqrt(5)` on `[0, 5]`.
pub fn cover_measure_bound(m: u32) -> f64 {
    5.0 * (2.0 / 5f64.sqrt()).powi(m as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub depth: u32,
    pub cover_measure: f64,
    pub gap_measure: f64,
    /// `5 - cover_measure - gap_measure`.
    pub defect: f64,
}

/// Splits `[0, 5]` into the depth-`m` cover and the gaps `B_l`,
/// `l < 2^m`.
pub fn exhaustion(m: u32) -> Result<Exhaustion> {
    let mut gaps = Kahan::default();
    for g in b_intervals(m)? {
        gaps.add(g.interval.length);
    }
    let cover_measure = cover_measure(m)?;
    Ok(Exhaustion {
        depth: m,
        cover_measure,
        gap_measure: gaps.sum,
        defect: 5.0 - cover_measure - gaps.sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    Gap {
        index: u64,
        interval: Interval,
    },
    /// Not in any `B_l` with `l < 2^depth`; `interval` is the cover interval
    /// holding `t`.
    Residual {
        word: SignWord,
        interval: Interval,
    },
}

/// Locates `t` among the gaps `B_1, ..., B_{2^depth - 1}`, descending through
/// the nested cover.
pub fn classify(t: f64, depth: u32) -> Result<Classification> {
    if !(0.0..=5.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("{t} is outside [0, 5]")));
    }
    if depth > MEASURE_CAP {
        return Err(Error::LevelCap {
            level: depth,
            cap: MEASURE_CAP,
        });
    }
    let mut word = SignWord::empty();
    let mut current = Segment::UNIT;
    for _ in 0..depth {
        let gap = first_gap().map_word(word).interval();
        if gap.contains_open(t) {
            return Ok(Classification::Gap {
                index: gap_index(word)?,
                interval: gap,
            });
        }
        let minus_word = word.push_inner(Sign::Minus)?;
        let minus = Segment::UNIT.map_word(minus_word);
        if minus.interval().contains_closed(t) {
            word = minus_word;
            current = minus;
        } else {
            word = word.push_inner(Sign::Plus)?;
            current = Segment::UNIT.map_word(word);
        }
    }
    Ok(Classification::Residual {
        word,
        interval: current.interval(),
    })
}

/// The match between `(5 lambda^(5)_{2l-1}, 5 lambda^(5)_{2l})` and a gap
/// `B_h` pushed through `5^e psi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub ell: u64,
    /// Words of the two endpoints after lifting to a common length.
    pub lower_word: SignWord,
    pub upper_word: SignWord,
    /// The words share everything but the innermost sign.
    pub words_adjacent: bool,
    pub gap_index: u64,
    pub exponent: u32,
    pub lo: f64,
    pub hi: f64,
    pub image_lo: f64,
    pub image_hi: f64,
    /// `5^2 lambda^(3)_l` lies strictly between the endpoints.
    pub contains_middle: bool,
    pub max_relative_error: f64,
}

impl Correspondence {
    pub fn passed(&self, tol: f64) -> bool {
        self.words_adjacent && self.contains_middle && self.max_relative_error <= tol
    }
}

/// Builds the correspondence for the `l`-th interval pair.
///
/// With `lambda^(5)_n = 5^(|w|+1) psi(phi_w(5))`, the endpoints are
/// `5^(|w|+2) psi(phi_w(5))`. The shorter word is lifted by prepending minus
/// signs (which leaves the value unchanged, as `5 psi(phi_minus(x)) = psi(x)`);
/// the two words then differ only in their innermost sign, so the endpoints
/// are `5^(|w|+2) psi` of the endpoints of `B_h` where `h` indexes the common
/// prefix.
pub fn correspondence(catalog: &Catalog, ell: u64) -> Result<Correspondence> {
    if ell == 0 {
        return Err(Error::InvalidArgument("interval index starts at 1".into()));
    }
    let lo_member = catalog.primitive_member(Generator::Five, 2 * ell - 1)?;
    let hi_member = catalog.primitive_member(Generator::Five, 2 * ell)?;
    let (mut wa, mut wb) = (lo_member.word, hi_member.word);
    while wa.len() < wb.len() {
        wa = wa.prepend(Sign::Minus)?;
    }
    while wb.len() < wa.len() {
        wb = wb.prepend(Sign::Minus)?;
    }
    let lo = 5.0 * lo_member.value;
    let hi = 5.0 * hi_member.value;
    let middle = 25.0 * catalog.primitive(Generator::Three, ell)?;
    let words_adjacent =
        !wa.is_empty() && wa.without_last() == wb.without_last() && wa.last() != wb.last();
    let prefix = wa.without_last();
    let gap_index = gap_index(prefix)?;
    let exponent = wa.len() as u32 + 2;
    let gap = first_gap().map_word(prefix);
    let scale = 5f64.powi(exponent as i32);
    // The image of each endpoint is taken from the B-endpoint reached by the
    // matching innermost sign.
    let (from_lo, from_hi) = if wa.last() == Some(Sign::Minus) {
        (gap.a, gap.b)
    } else {
        (gap.b, gap.a)
    };
    let image_lo = scale * psi(from_lo)?;
    let image_hi = scale * psi(from_hi)?;
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
    Ok(Correspondence {
        ell,
        lower_word: wa,
        upper_word: wb,
        words_adjacent,
        gap_index,
        exponent,
        lo,
        hi,
        image_lo,
        image_hi,
        contains_middle: lo < middle && middle < hi,
        max_relative_error: rel(image_lo, lo).max(rel(image_hi, hi)),
    })
}

/// Writes `depth,word,lo,hi,length`.
pub fn write_cover_csv<W: Write>(
    out: &mut W,
    depth: u32,
    intervals: &[CoverInterval],
) -> std::io::Result<()> {
    export::record(out, &["depth", "word", "lo", "hi", "length"])?;
    for c in intervals {
        export::record(
            out,
            &[
                depth.to_string(),
                c.word.to_string(),
                export::float(c.interval.lo),
                export::float(c.interval.hi),
                export::float(c.interval.length),
            ],
        )?;
    }
    Ok(())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::decimation::{phi, phi_word};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn first_gaps() {
        let s5 = 5f64.sqrt();
        let b1 = b_interval(1).unwrap().interval;
        assert!(close(b1.lo, (5.0 - s5) / 2.0, 1e-15));
        assert!(close(b1.hi, (5.0 + s5) / 2.0, 1e-15));
        let frozen = [
            (2, 0.29363783826183810975, 0.87766649197826615568),
            (3, 4.1223335080217338443, 4.7063621617381618902),
            (4, 0.059434048885758569851, 0.18217051791514787361),
            (5, 4.8178294820848521264, 4.9405659511142414301),
            (6, 1.0413477138199569683, 1.2575677731715753222),
            (7, 3.7424322268284246778, 3.9586522861800430317),
        ];
        for (i, lo, hi) in frozen {
            let b = b_interval(i).unwrap().interval;
            assert!(close(b.lo, lo, 1e-15), "B_{i}");
            assert!(close(b.hi, hi, 1e-15), "B_{i}");
            assert!(close(b.length, hi - lo, 1e-13), "B_{i}");
        }
        let b2 = b_interval(2).unwrap().interval;
        assert!(close(b2.lo, phi(Sign::Minus, b1.lo).unwrap(), 1e-15));
        assert!(b_interval(0).is_err());
    }

    #[test]
    fn gap_words_round_trip() {
        for h in 1..2000u64 {
            let w = gap_word(h).unwrap();
            assert_eq!(gap_index(w).unwrap(), h);
        }
        assert_eq!(gap_word(5).unwrap().to_string(), "+-");
        assert_eq!(gap_word(1).unwrap(), SignWord::empty());
    }

    #[test]
    fn heap_list_matches_direct_evaluation() {
        let list = b_intervals(8).unwrap();
        assert_eq!(list.len(), 255);
        for g in &list {
            assert_eq!(*g, b_interval(g.index).unwrap());
        }
        let sorted = b_intervals_by_position(8).unwrap();
        for w in sorted.windows(2) {
            assert!(w[0].interval.hi < w[1].interval.lo);
        }
    }

    #[test]
    fn cover_layout() {
        let c0 = cover(0).unwrap();
        assert_eq!(c0.len(), 1);
        assert_eq!((c0[0].interval.lo, c0[0].interval.hi), (0.0, 5.0));
        let c1 = cover(1).unwrap();
        let s5 = 5f64.sqrt();
        assert!(close(c1[0].interval.hi, (5.0 - s5) / 2.0, 1e-15));
        assert!(close(c1[1].interval.lo, (5.0 + s5) / 2.0, 1e-15));
        assert!(close(
            c1[0].interval.length + c1[1].interval.length,
            5.0 - s5,
            1e-15
        ));

        let c6 = cover(6).unwrap();
        assert_eq!(c6.len(), 64);
        for w in c6.windows(2) {
            assert!(w[0].interval.hi < w[1].interval.lo);
        }
        for c in &c6 {
            let a = phi_word(c.word, 0.0).unwrap();
            let b = phi_word(c.word, 5.0).unwrap();
            assert!(close(c.interval.lo, a.min(b), 1e-14));
            assert!(close(c.interval.hi, a.max(b), 1e-14));
            assert!(c.interval.length <= 5.0 * 5f64.sqrt().powi(-6));
        }
        assert!(matches!(cover(LIST_CAP + 1), Err(Error::LevelCap { .. })));
    }

    #[test]
    fn nesting() {
        let parents = cover(5).unwrap();
        let children = cover(6).unwrap();
        for c in &children {
            let inside = parents
                .iter()
                .filter(|p| p.interval.lo <= c.interval.lo && c.interval.hi <= p.interval.hi)
                .count();
            assert_eq!(inside, 1);
        }
    }

    #[test]
    fn measures_match_frozen_values() {
        let frozen = [
            5.0,
            2.7639320225002103036,
            1.5958747150673542117,
            0.91796165830533889638,
            0.5281637528125434137,
            0.30388230713237067736,
            0.17484072165116673613,
            0.10059577842641377912,
            0.057878453780951669933,
            0.033300755412345948895,
            0.019159812305977009776,
            0.011023726130398868884,
            0.0063425745439118709824,
            0.0036492426761352880034,
            0.0020996161759123140948,
        ];
        let got = cover_measures(14).unwrap();
        for (m, (g, f)) in got.iter().zip(frozen).enumerate() {
            assert!((g - f).abs() <= 1e-14 * f, "depth {m}: {g} vs {f}");
        }
        assert!(cover_measures(MEASURE_CAP + 1).is_err());
    }

    #[test]
    fn exhaustion_small() {
        for m in 0..=12 {
            let e = exhaustion(m).unwrap();
            assert!(e.defect.abs() < 1e-13, "{e:?}");
        }
    }

    #[test]
    fn classify_examples() {
        assert!(matches!(
            classify(2.5, 1).unwrap(),
            Classification::Gap { index: 1, .. }
        ));
        for d in [1, 5, 20, 40] {
            match classify(0.0, d).unwrap() {
                Classification::Residual { word, interval } => {
                    assert_eq!(word.len(), d as usize);
                    assert!(word.signs().all(|s| s == Sign::Minus));
                    assert_eq!(interval.lo, 0.0);
                }
                other => panic!("{other:?}"),
            }
        }
        let edge = 4.8178294820848521264; // phi_{+-+}(5), left end of B_5
        assert!(matches!(
            classify(edge * (1.0 + 1e-9), 4).unwrap(),
            Classification::Gap { index: 5, .. }
        ));
        assert!(matches!(
            classify(edge * (1.0 - 1e-9), 4).unwrap(),
            Classification::Residual { .. }
        ));
        assert!(classify(5.5, 3).is_err());
    }

    #[test]
    fn classify_agrees_with_lists() {
        let gaps = b_intervals(7).unwrap();
        let leaves = cover(7).unwrap();
        for i in 0..=1000 {
            let t = 5.0 * i as f64 / 1000.0;
            match classify(t, 7).unwrap() {
                Classification::Gap { index, interval } => {
                    assert_eq!(gaps[index as usize - 1].interval, interval);
                    assert!(interval.contains_open(t));
                }
                Classification::Residual { word, interval } => {
                    assert!(interval.contains_closed(t));
                    assert!(leaves.iter().any(|c| c.word == word));
                    assert!(gaps.iter().all(|g| !g.interval.contains_open(t)));
                }
            }
        }
    }

    #[test]
    fn first_correspondences() {
        let catalog = Catalog::default();
        for ell in 1..=8 {
            let c = correspondence(&catalog, ell).unwrap();
            assert!(c.passed(1e-9), "{c:?}");
        }
        let c1 = correspondence(&catalog, 1).unwrap();
        assert_eq!((c1.gap_index, c1.exponent), (1, 3));
    }

    #[test]
    fn cover_csv() {
        let mut buf = Vec::new();
        write_cover_csv(&mut buf, 1, &cover(1).unwrap()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "depth,word,lo,hi,length");
        assert!(lines[1].starts_with("1,-,0.0000000000000000e0,"));
        assert!(lines[2].starts_with("1,+,"));
    }
}
