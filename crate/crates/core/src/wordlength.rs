//! Minimal word lengths over a three-reflection generating set.
//!
//! Two independent engines produce a [`WordLengthTable`]:
//!
//! * [`bfs_lengths`] walks the Cayley graph of D_n from the identity. It is
//!   the brute-force oracle.
//! * [`sumset_lengths`] never touches group elements. It iterates the
//!   projected level sets `W'_l ⊆ Z_n` with
//!   `W'_{l+1} = W'_l + S'` for even `l` and `W'_{l+1} = W'_l - S'` for odd
//!   `l`. Since `0 ∈ S'` the levels are nested, and words of even length are
//!   exactly the rotations, so `l(r^i)` is the first even level containing
//!   `i` and `l(r^i f)` the first odd one.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::dihedral::{DihedralElement, GeneratingSet};
use crate::error::{Error, Result};
use crate::residue::ResidueSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Bfs,
    Sumset,
}

/// `l_S(g)` for every element of D_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordLengthTable {
    pub n: usize,
    pub set: GeneratingSet,
    /// Index `i` holds `l_S(r^i)`.
    pub rotation_lengths: Vec<u32>,
    /// Index `i` holds `l_S(r^i f)`.
    pub reflection_lengths: Vec<u32>,
    pub engine: Engine,
}

impl WordLengthTable {
    pub fn length(&self, g: &DihedralElement) -> u32 {
        if g.is_reflection() {
            self.reflection_lengths[g.rot()]
        } else {
            self.rotation_lengths[g.rot()]
        }
    }

    pub fn max_reflection_length(&self) -> u32 {
        self.reflection_lengths.iter().copied().max().unwrap_or(0)
    }

    /// Largest word length over all `2n` elements.
    pub fn max_length(&self) -> u32 {
        self.rotation_lengths
            .iter()
            .chain(&self.reflection_lengths)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Equal lengths everywhere, ignoring which engine built each table.
    pub fn same_lengths(&self, other: &WordLengthTable) -> bool {
        self.set == other.set
            && self.rotation_lengths == other.rotation_lengths
            && self.reflection_lengths == other.reflection_lengths
    }

    /// Elements in index order (rotations, then reflections) with lengths.
    pub fn entries(&self) -> impl Iterator<Item = (DihedralElement, u32)> + '_ {
        (0..2 * self.n).map(move |i| {
            let g = DihedralElement::from_index(self.n, i);
            (g, self.length(&g))
        })
    }

    /// CSV with header `element,rot,refl_flag,length`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("element,rot,refl_flag,length\n");
        for (g, len) in self.entries() {
            let _ = writeln!(out, "{g},{},{},{len}", g.rot(), g.is_reflection());
        }
        out
    }
}

/// Breadth-first search over the Cayley graph, right-multiplying by the
/// three reflections.
pub fn bfs_lengths(set: &GeneratingSet) -> Result<WordLengthTable> {
    set.require_generating()?;
    let n = set.modulus();
    let gens = set.reflections();
    let mut dist = vec![u32::MAX; 2 * n];
    let mut queue = VecDeque::from([DihedralElement::identity(n)]);
    dist[0] = 0;
    while let Some(x) = queue.pop_front() {
        let d = dist[x.index()];
        for s in &gens {
            let y = x.multiply(s)?;
            if dist[y.index()] == u32::MAX {
                dist[y.index()] = d + 1;
                queue.push_back(y);
            }
        }
    }
    if dist.contains(&u32::MAX) {
        return Err(Error::Internal(format!(
            "BFS did not reach all of D_{n} from {set}"
        )));
    }
    let reflection_lengths = dist.split_off(n);
    Ok(WordLengthTable {
        n,
        set: *set,
        rotation_lengths: dist,
        reflection_lengths,
        engine: Engine::Bfs,
    })
}

/// The projected level sets `W'_0, W'_1, …`, one per call to `next`.
///
/// The iterator is unbounded; levels stop changing once they saturate (or
/// stagnate, for a non-generating set).
#[derive(Debug, Clone)]
pub struct Levels {
    plus: ResidueSet,
    minus: ResidueSet,
    current: Option<ResidueSet>,
    l: usize,
}

impl Levels {
    pub fn new(set: &GeneratingSet) -> Self {
        let plus = set.offsets();
        Levels {
            minus: plus.negate(),
            current: None,
            plus,
            l: 0,
        }
    }
}

impl Iterator for Levels {
    type Item = ResidueSet;

    fn next(&mut self) -> Option<ResidueSet> {
        let next = match &self.current {
            None => ResidueSet::singleton(self.plus.modulus(), 0),
            Some(level) => {
                let step = if self.l.is_multiple_of(2) {
                    &self.plus
                } else {
                    &self.minus
                };
                self.l += 1;
                level.sumset(step).expect("levels share the modulus")
            }
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// Word lengths from the parity-alternating sumset recurrence.
pub fn sumset_lengths(set: &GeneratingSet) -> Result<WordLengthTable> {
    set.require_generating()?;
    let n = set.modulus();
    let cap = 2 * n + 2;
    let mut rotation_lengths = vec![u32::MAX; n];
    let mut reflection_lengths = vec![u32::MAX; n];
    let mut remaining = 2 * n;
    for (l, level) in Levels::new(set).enumerate() {
        if remaining == 0 {
            break;
        }
        if l > cap {
            return Err(Error::Internal(format!(
                "sumset iteration for {set} passed level {cap} without saturating"
            )));
        }
        let slots = if l % 2 == 0 {
            &mut rotation_lengths
        } else {
            &mut reflection_lengths
        };
        for i in level.iter() {
            if slots[i] == u32::MAX {
                slots[i] = l as u32;
                remaining -= 1;
            }
        }
    }
    Ok(WordLengthTable {
        n,
        set: *set,
        rotation_lengths,
        reflection_lengths,
        engine: Engine::Sumset,
    })
}

pub fn lengths(set: &GeneratingSet, engine: Engine) -> Result<WordLengthTable> {
    match engine {
        Engine::Bfs => bfs_lengths(set),
        Engine::Sumset => sumset_lengths(set),
    }
}

/// `W'_0 … W'_{l_max}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPrimeSequence {
    pub n: usize,
    pub set: GeneratingSet,
    pub levels: Vec<ResidueSet>,
}

impl Serialize for WPrimeSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let levels: Vec<Vec<usize>> = self.levels.iter().map(ResidueSet::members).collect();
        let mut s = serializer.serialize_struct("WPrimeSequence", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("set", &self.set)?;
        s.serialize_field("levels", &levels)?;
        s.end()
    }
}

/// Levels `0..=l_max` of the recurrence. Works for non-generating sets too.
pub fn w_prime_sequence(set: &GeneratingSet, l_max: usize) -> WPrimeSequence {
    WPrimeSequence {
        n: set.modulus(),
        set: *set,
        levels: Levels::new(set).take(l_max + 1).collect(),
    }
}

/// Levels `W'_0, W'_1, …` up to the first level at which both parities are
/// saturated, or until three consecutive levels agree (possible only for a
/// non-generating set).
pub fn levels_to_saturation(set: &GeneratingSet) -> Vec<ResidueSet> {
    let mut out: Vec<ResidueSet> = Vec::new();
    for level in Levels::new(set) {
        out.push(level);
        let k = out.len();
        if k >= 3 && out[k - 1] == out[k - 2] && out[k - 2] == out[k - 3] {
            break;
        }
        if k >= 2 && out[k - 1].is_full() && out[k - 2].is_full() {
            break;
        }
    }
    out
}

/// Default depth for [`w_prime_sequence`].
pub fn default_l_max(n: usize) -> usize {
    n + 1
}
