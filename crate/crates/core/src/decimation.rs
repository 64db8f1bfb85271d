//! Inverse decimation branches, the renormalized limit, and the three
//! primitive eigenvalue families.
//!
//! The graph Laplacians of the gasket approximations are related level to
//! level by `mu_{m-1} = mu_m (5 - mu_m)`. The two inverse branches
//!
//! ```text
//! phi_minus(t) = (5 - sqrt(25 - 4t)) / 2,    phi_plus(t) = (5 + sqrt(25 - 4t)) / 2
//! ```
//!
//! are contractions on `[0, 5]` with `|phi'| <= 1/sqrt(5)`, and the fractal
//! eigenvalue attached to a graph eigenvalue `t` that keeps continuing along
//! the lower branch is
//!
//! ```text
//! psi(t) = 3/2 * lim_k 5^k phi_minus^(k)(t).
//! ```
//!
//! `psi` satisfies `5 psi(phi_minus(x)) = psi(x)`, which is what lets words be
//! lifted between levels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest argument for which both inverse branches are real.
pub const MAX_ARG: f64 = 6.25;

/// Relative gap below which two members of one level block are treated as a
/// precision failure.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn bit(self) -> u64 {
        match self {
            Sign::Minus => 0,
            Sign::Plus => 1,
        }
    }

    fn from_bit(bit: u64) -> Self {
        if bit & 1 == 1 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// A finite word `(d_1, ..., d_m)` over `{+, -}`, naming the composition
/// `phi_{d_1} o phi_{d_2} o ... o phi_{d_m}`. Index 0 is the outermost map.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignWord {
    // d_1 lives in bit len-1, d_m in bit 0.
    bits: u64,
    len: u8,
}

impl SignWord {
    pub const MAX_LEN: usize = 64;

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_signs(signs: &[Sign]) -> Result<Self> {
        signs
            .iter()
            .try_fold(Self::empty(), |w, &s| w.push_inner(s))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sign at position `i`, where `i = 0` is the outermost map.
    pub fn get(&self, i: usize) -> Option<Sign> {
        (i < self.len()).then(|| Sign::from_bit(self.bits >> (self.len() - 1 - i)))
    }

    pub fn first(&self) -> Option<Sign> {
        self.get(0)
    }

    pub fn last(&self) -> Option<Sign> {
        self.len().checked_sub(1).and_then(|i| self.get(i))
    }

    /// Signs from outermost to innermost.
    pub fn signs(&self) -> impl Iterator<Item = Sign> + '_ {
        (0..self.len()).map(move |i| Sign::from_bit(self.bits >> (self.len() - 1 - i)))
    }

    /// `(s, d_1, ..., d_m)`: `s` becomes the map applied last.
    pub fn prepend(self, s: Sign) -> Result<Self> {
        if self.len() >= Self::MAX_LEN {
            return Err(Error::InvalidArgument(format!(
                "sign word longer than {}",
                Self::MAX_LEN
            )));
        }
        Ok(Self {
            bits: self.bits | (s.bit() << self.len),
            len: self.len + 1,
        })
    }

    /// `(d_1, ..., d_m, s)`: `s` becomes the map applied first.
    pub fn push_inner(self, s: Sign) -> Result<Self> {
        if self.len() >= Self::MAX_LEN {
            return Err(Error::InvalidArgument(format!(
                "sign word longer than {}",
                Self::MAX_LEN
            )));
        }
        Ok(Self {
            bits: (self.bits << 1) | s.bit(),
            len: self.len + 1,
        })
    }

    /// Drops the innermost sign.
    pub fn without_last(self) -> Self {
        match self.len {
            0 => self,
            n => Self {
                bits: self.bits >> 1,
                len: n - 1,
            },
        }
    }
}

impl fmt::Display for SignWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.signs().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl fmt::Debug for SignWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignWord({self})")
    }
}

impl FromStr for SignWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().try_fold(Self::empty(), |w, c| match c {
            '+' => w.push_inner(Sign::Plus),
            '-' => w.push_inner(Sign::Minus),
            other => Err(Error::InvalidArgument(format!(
                "unexpected character {other:?} in sign word"
            ))),
        })
    }
}

impl Serialize for SignWord {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignWord {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One inverse branch of `z -> z(5 - z)`.
///
/// The lower branch uses the rationalized form `2t / (5 + sqrt(25 - 4t))`,
/// which keeps full relative precision as `t -> 0`.
pub fn phi(sign: Sign, t: f64) -> Result<f64> {
    let disc = 25.0 - 4.0 * t;
    if !(disc >= 0.0) {
        return Err(Error::Domain { t });
    }
    let root = disc.sqrt();
    Ok(match sign {
        Sign::Minus => 2.0 * t / (5.0 + root),
        Sign::Plus => 0.5 * (5.0 + root),
    })
}

/// Applies `phi_word` with the innermost sign first; the empty word is the
/// identity.
pub fn phi_word(word: SignWord, t: f64) -> Result<f64> {
    if !(t <= MAX_ARG) {
        return Err(Error::Domain { t });
    }
    (0..word.len())
        .rev()
        .try_fold(t, |x, i| phi(word.get(i).expect("index in range"), x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiConfig {
    /// Relative change between successive renormalized iterates at which the
    /// limit is accepted.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for PsiConfig {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_iterations: 200,
        }
    }
}

/// `psi(t)` with the default tolerance.
pub fn psi(t: f64) -> Result<f64> {
    psi_with(t, &PsiConfig::default())
}

pub fn psi_with(t: f64, config: &PsiConfig) -> Result<f64> {
    if !(0.0..=MAX_ARG).contains(&t) {
        return Err(Error::Domain { t });
    }
    if !(config.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "psi tolerance must be positive, got {}",
            config.tol
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut x = t;
    let mut scale = 1.0_f64;
    let mut prev = t;
    for _ in 0..config.max_iterations {
        x = phi(Sign::Minus, x)?;
        scale *= 5.0;
        let cur = scale * x;
        if (cur - prev).abs() <= config.tol * cur.abs() {
            return Ok(1.5 * cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        t,
        iterations: config.max_iterations,
    })
}

/// The level-1 graph eigenvalue a primitive family descends from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Generator {
    Two,
    Three,
    Five,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::Two, Generator::Three, Generator::Five];

    pub fn value(self) -> f64 {
        self.as_u8() as f64
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Generator::Two => 2,
            Generator::Three => 3,
            Generator::Five => 5,
        }
    }

    fn index(self) -> usize {
        match self {
            Generator::Two => 0,
            Generator::Three => 1,
            Generator::Five => 2,
        }
    }
}

impl TryFrom<u8> for Generator {
    type Error = Error;

    fn try_from(p: u8) -> Result<Self> {
        match p {
            2 => Ok(Generator::Two),
            3 => Ok(Generator::Three),
            5 => Ok(Generator::Five),
            other => Err(Error::InvalidArgument(format!(
                "family generator must be 2, 3 or 5, got {other}"
            ))),
        }
    }
}

impl From<Generator> for u8 {
    fn from(g: Generator) -> u8 {
        g.as_u8()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// `lambda^(p)_n = 5^(|word|+1) psi(phi_word(p))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveEigenvalue {
    pub generator: Generator,
    /// 1-based rank within the family.
    pub rank: usize,
    pub word: SignWord,
    pub value: f64,
}

/// Lazily extended, increasing list `lambda^(p)_1 < lambda^(p)_2 < ...`.
///
/// Members are produced one word-length block at a time. Within a block the
/// values are sorted numerically (word order is not value order); blocks are
/// separated by the level bounds, and that separation is checked as each
/// block is appended.
#[derive(Debug, Clone)]
pub struct PrimitiveFamily {
    generator: Generator,
    config: PsiConfig,
    members: Vec<PrimitiveEigenvalue>,
    /// `phi_gamma(p)` for every unrestricted word `gamma` of length `next_level - 1`.
    frontier: Vec<(f64, SignWord)>,
    next_level: usize,
}

impl PrimitiveFamily {
    pub fn new(generator: Generator) -> Self {
        Self::with_config(generator, PsiConfig::default())
    }

    pub fn with_config(generator: Generator, config: PsiConfig) -> Self {
        Self {
            generator,
            config,
            members: Vec::new(),
            frontier: Vec::new(),
            next_level: 0,
        }
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn members(&self) -> &[PrimitiveEigenvalue] {
        &self.members
    }

    /// `lambda^(p)_rank`, 1-based.
    pub fn get(&self, rank: usize) -> Option<&PrimitiveEigenvalue> {
        rank.checked_sub(1).and_then(|i| self.members.get(i))
    }

    /// Generates members until at least `count` exist.
    pub fn ensure(&mut self, count: usize) -> Result<()> {
        while self.members.len() < count {
            self.push_level()?;
        }
        Ok(())
    }

    /// Value of `lambda^(p)_rank`, extending as needed.
    pub fn value(&mut self, rank: usize) -> Result<f64> {
        if rank == 0 {
            return Err(Error::InvalidArgument("family ranks start at 1".into()));
        }
        self.ensure(rank)?;
        Ok(self.members[rank - 1].value)
    }

    fn push_level(&mut self) -> Result<()> {
        let level = self.next_level;
        let p = self.generator.value();
        let mut block: Vec<(f64, SignWord)> = if level == 0 {
            self.frontier = vec![(p, SignWord::empty())];
            vec![(5.0 * psi_with(p, &self.config)?, SignWord::empty())]
        } else {
            let scale = 5f64.powi(level as i32 + 1);
            let mut block = Vec::with_capacity(self.frontier.len());
            let mut next = Vec::with_capacity(2 * self.frontier.len());
            for &(x, word) in &self.frontier {
                let lower = phi(Sign::Minus, x)?;
                let upper = phi(Sign::Plus, x)?;
                let upper_word = word.prepend(Sign::Plus)?;
                block.push((scale * psi_with(upper, &self.config)?, upper_word));
                next.push((lower, word.prepend(Sign::Minus)?));
                next.push((upper, upper_word));
            }
            self.frontier = next;
            block
        };
        block.sort_by(|a, b| a.0.total_cmp(&b.0));

        for pair in block.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if b - a <= TIE_TOLERANCE * b.abs() {
                return Err(Error::NumericTie {
                    a,
                    b,
                    tol: TIE_TOLERANCE,
                    context: format!("family {} level {level}", self.generator),
                });
            }
        }
        if let (Some(prev), Some(first)) = (self.members.last(), block.first()) {
            if !(prev.value < first.0) {
                return Err(Error::Ordering {
                    lower: prev.value,
                    upper: first.0,
                    context: format!("family {} levels {} and {level}", self.generator, level - 1),
                });
            }
        }

        let base = self.members.len();
        self.members
            .extend(
                block
                    .into_iter()
                    .enumerate()
                    .map(|(i, (value, word))| PrimitiveEigenvalue {
                        generator: self.generator,
                        rank: base + i + 1,
                        word,
                        value,
                    }),
            );
        self.next_level += 1;
        Ok(())
    }
}

/// The first `count` members of `{lambda^(p)_n}` in increasing order.
pub fn primitive_list(generator: Generator, count: usize) -> Result<Vec<PrimitiveEigenvalue>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut family = PrimitiveFamily::new(generator);
    family.ensure(count)?;
    family.members.truncate(count);
    Ok(family.members)
}

/// `[psi(3) 5^(m+1), psi(5) 5^(m+1))`, the range every family member with a
/// word of length `m >= 1` falls in.
pub fn level_bounds(m: usize) -> Result<(f64, f64)> {
    let scale = 5f64.powi(m as i32 + 1);
    Ok((psi(3.0)? * scale, psi(5.0)? * scale))
}

/// Family index used by the catalog's fixed-size family arrays.
pub(crate) fn family_slot(generator: Generator) -> usize {
    generator.index()
}
