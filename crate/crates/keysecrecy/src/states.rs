//! Keys, classical-quantum joint states, and the constructors used
//! throughout the test bench.
//!
//! A [`CqState`] pairs a classical key distribution with one conditional
//! side-information operator per key. The induced joint operator is
//! block-diagonal in the key, which every computation downstream exploits.
//! Key length is capped at 20 so the full outcome space (at most ~10^6
//! entries) can always be enumerated exactly; larger scales are discussed
//! analytically in the README instead of materialized.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    statistical_distance, validate_state, ComplexMatrix, HermitianMatrix, ProbabilityVector,
};
use crate::rng::SeededRng;
use crate::tolerance;

/// Maximum supported key length.
pub const MAX_KEY_LEN: usize = 20;

/// Largest dimension for which the joint operator may be assembled densely.
pub const MAX_JOINT_DIM: usize = 64;

/// A key value: a bit string of length `l <= 20`, most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    len: usize,
    value: u32,
}

impl BitString {
    pub fn new(len: usize, value: u32) -> Result<Self> {
        if len == 0 || len > MAX_KEY_LEN {
            return Err(Error::KeyLengthOutOfRange {
                l: len,
                min: 1,
                max: MAX_KEY_LEN,
            });
        }
        if u64::from(value) >= (1u64 << len) {
            return Err(Error::InvalidState(format!(
                "bit string value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self { len, value })
    }

    /// The all-zero string `00...0`.
    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    /// The all-one string `11...1`.
    pub fn ones(len: usize) -> Result<Self> {
        let value = ((1u64 << len) - 1) as u32;
        Self::new(len, value)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of this key in the natural enumeration `0..2^l`.
    pub fn index(&self) -> usize {
        self.value as usize
    }

    /// Bit at position `i`, counting from the most significant bit.
    pub fn bit(&self, i: usize) -> u8 {
        ((self.value >> (self.len - 1 - i)) & 1) as u8
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(|i| self.bit(i))
    }

    /// Bitwise XOR of two equal-length strings.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Self::new(self.len, self.value ^ other.value)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.len();
        if len == 0 || len > MAX_KEY_LEN {
            return Err(Error::KeyLengthOutOfRange {
                l: len,
                min: 1,
                max: MAX_KEY_LEN,
            });
        }
        let mut value = 0u32;
        for ch in s.chars() {
            value <<= 1;
            match ch {
                '0' => {}
                '1' => value |= 1,
                other => {
                    return Err(Error::InvalidState(format!(
                        "invalid character {other:?} in bit string {s:?}"
                    )))
                }
            }
        }
        Self::new(len, value)
    }
}

/// One key with its weight and conditional side-information state.
/// `side = None` encodes trivial side information (dimension 1).
#[derive(Debug, Clone)]
pub struct CqEntry {
    pub key: BitString,
    pub weight: f64,
    pub side: Option<HermitianMatrix>,
}

/// A classical key paired with per-key side-information operators.
///
/// Invariants (checked by [`CqState::new`]): weights sum to 1, every
/// conditional state is a valid density operator of the shared dimension,
/// keys are distinct and match the declared length. Entries are kept sorted
/// by key. Keys absent from `entries` carry weight zero.
#[derive(Debug, Clone)]
pub struct CqState {
    l: usize,
    side_dim: usize,
    entries: Vec<CqEntry>,
}

impl CqState {
    pub fn new(l: usize, side_dim: usize, mut entries: Vec<CqEntry>) -> Result<Self> {
        if l == 0 || l > MAX_KEY_LEN {
            return Err(Error::KeyLengthOutOfRange {
                l,
                min: 1,
                max: MAX_KEY_LEN,
            });
        }
        if side_dim == 0 {
            return Err(Error::InvalidState("side_dim must be positive".into()));
        }
        entries.sort_by_key(|e| e.key);
        let mut seen = BTreeSet::new();
        let mut sum = 0.0;
        for e in &entries {
            if e.key.len() != l {
                return Err(Error::KeyLengthMismatch {
                    key: e.key.to_string(),
                    l,
                });
            }
            if !seen.insert(e.key) {
                return Err(Error::DuplicateKey {
                    key: e.key.to_string(),
                });
            }
            if e.weight < -tolerance::PROBABILITY {
                return Err(Error::NegativeProbability {
                    index: e.key.index(),
                    value: e.weight,
                });
            }
            sum += e.weight;
            match (&e.side, side_dim) {
                (None, 1) => {}
                (None, _) => {
                    return Err(Error::SideDimMismatch {
                        key: e.key.to_string(),
                        got: 1,
                        want: side_dim,
                    })
                }
                (Some(rho), d) => {
                    if rho.dim() != d {
                        return Err(Error::SideDimMismatch {
                            key: e.key.to_string(),
                            got: rho.dim(),
                            want: d,
                        });
                    }
                    validate_state(rho, tolerance::STATE)?;
                }
            }
        }
        if (sum - 1.0).abs() > tolerance::PROBABILITY {
            return Err(Error::NotNormalized {
                sum,
                tol: tolerance::PROBABILITY,
            });
        }
        Ok(Self {
            l,
            side_dim,
            entries,
        })
    }

    /// Construction path for internal constructors whose outputs satisfy the
    /// invariants by construction (still debug-asserted).
    fn new_unchecked(l: usize, side_dim: usize, entries: Vec<CqEntry>) -> Self {
        debug_assert!({
            let sum: f64 = entries.iter().map(|e| e.weight).sum();
            (sum - 1.0).abs() <= tolerance::PROBABILITY
        });
        Self {
            l,
            side_dim,
            entries,
        }
    }

    pub fn key_len(&self) -> usize {
        self.l
    }

    pub fn side_dim(&self) -> usize {
        self.side_dim
    }

    /// Number of possible keys, `2^l`.
    pub fn key_space(&self) -> usize {
        1usize << self.l
    }

    pub fn entries(&self) -> &[CqEntry] {
        &self.entries
    }

    pub fn has_trivial_side(&self) -> bool {
        self.side_dim == 1
    }

    /// Weight of a key (zero when absent).
    pub fn weight(&self, key: &BitString) -> f64 {
        self.entries
            .binary_search_by_key(key, |e| e.key)
            .map(|i| self.entries[i].weight)
            .unwrap_or(0.0)
    }

    /// Dense weight vector over the full key space `0..2^l`.
    pub fn weights_dense(&self) -> ProbabilityVector {
        let mut w = vec![0.0; self.key_space()];
        for e in &self.entries {
            w[e.key.index()] = e.weight;
        }
        ProbabilityVector::new(w).expect("state weights are normalized")
    }

    /// The conditional side state of an entry, materialized (1x1 `[1]` when trivial).
    pub fn side_of(&self, entry: &CqEntry) -> HermitianMatrix {
        entry
            .side
            .clone()
            .unwrap_or_else(|| HermitianMatrix::diagonal(&[1.0]))
    }

    /// Reduced side-information operator `rho_E = sum_s p_s rho_E^s`.
    pub fn side_marginal(&self) -> HermitianMatrix {
        let mut acc = HermitianMatrix::zeros(self.side_dim);
        for e in &self.entries {
            acc = acc.add(&self.side_of(e).scale(e.weight));
        }
        acc
    }

    pub fn max_key_prob(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).fold(0.0, f64::max)
    }

    /// `sum_s max(0, p_s - 2^-l)` over the key marginal.
    pub fn average_excess_prob(&self) -> f64 {
        let uniform = 0.5f64.powi(self.l as i32);
        self.entries
            .iter()
            .map(|e| (e.weight - uniform).max(0.0))
            .sum()
    }

    /// The idealization target of this state: a uniform key carrying the
    /// same reduced side information.
    pub fn idealization(&self) -> IdealKeyState {
        IdealKeyState {
            l: self.l,
            side: self.side_marginal(),
        }
    }

    /// Convex mixture `(1 - w) self + w other` of two states over the same
    /// key space and side dimension.
    pub fn mix(&self, other: &CqState, w: f64) -> Result<CqState> {
        if self.l != other.l || self.side_dim != other.side_dim {
            return Err(Error::UnsupportedConfiguration(
                "mixing requires matching key length and side dimension".into(),
            ));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::ParameterOutOfRange {
                name: "w",
                value: w,
                range: "[0, 1]".into(),
            });
        }
        let keys: BTreeSet<BitString> = self
            .entries
            .iter()
            .chain(other.entries.iter())
            .map(|e| e.key)
            .collect();
        let mut entries = Vec::with_capacity(keys.len());
        for key in keys {
            let block_a = self.weighted_block(&key);
            let block_b = other.weighted_block(&key);
            let block = block_a.scale(1.0 - w).add(&block_b.scale(w));
            let weight = block.trace();
            let side = if self.side_dim == 1 {
                None
            } else if weight > 0.0 {
                Some(block.scale(1.0 / weight))
            } else {
                Some(HermitianMatrix::identity(self.side_dim).scale(1.0 / self.side_dim as f64))
            };
            entries.push(CqEntry { key, weight, side });
        }
        CqState::new(self.l, self.side_dim, entries)
    }

    /// `p_s rho_E^s` for a key, the zero operator when absent.
    pub fn weighted_block(&self, key: &BitString) -> HermitianMatrix {
        match self.entries.binary_search_by_key(key, |e| e.key) {
            Ok(i) => self.side_of(&self.entries[i]).scale(self.entries[i].weight),
            Err(_) => HermitianMatrix::zeros(self.side_dim),
        }
    }

    /// Assemble the joint operator `rho_SE = sum_s p_s |s><s| (x) rho_E^s`
    /// densely (key-major block order). Only for `side_dim * 2^l <= 64`.
    pub fn joint_operator(&self) -> Result<HermitianMatrix> {
        let dim = self.side_dim * self.key_space();
        if dim > MAX_JOINT_DIM {
            return Err(Error::JointTooLarge {
                dim,
                max: MAX_JOINT_DIM,
            });
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for e in &self.entries {
            let block = self.side_of(e).scale(e.weight);
            let offset = e.key.index() * self.side_dim;
            for i in 0..self.side_dim {
                for j in 0..self.side_dim {
                    m.set(offset + i, offset + j, block.get(i, j));
                }
            }
        }
        Ok(m.hermitian_part())
    }

    /// Assemble the idealized joint operator `rho_S_uniform (x) rho_E` densely.
    pub fn ideal_joint_operator(&self) -> Result<HermitianMatrix> {
        let dim = self.side_dim * self.key_space();
        if dim > MAX_JOINT_DIM {
            return Err(Error::JointTooLarge {
                dim,
                max: MAX_JOINT_DIM,
            });
        }
        let uniform = 0.5f64.powi(self.l as i32);
        let side = self.side_marginal().scale(uniform);
        let mut m = ComplexMatrix::zeros(dim, dim);
        for s in 0..self.key_space() {
            let offset = s * self.side_dim;
            for i in 0..self.side_dim {
                for j in 0..self.side_dim {
                    m.set(offset + i, offset + j, side.get(i, j));
                }
            }
        }
        Ok(m.hermitian_part())
    }
}

/// The ideal key: uniformly distributed and independent of the side
/// information `rho_E`.
#[derive(Debug, Clone)]
pub struct IdealKeyState {
    pub l: usize,
    pub side: HermitianMatrix,
}

impl IdealKeyState {
    pub fn to_cq(&self) -> Result<CqState> {
        ideal_key_with_side(self.l, &self.side)
    }
}

/// Uniform key with trivial side information.
pub fn ideal_key(l: usize) -> Result<CqState> {
    check_key_len(l, 1)?;
    let weight = 0.5f64.powi(l as i32);
    let entries = (0..1u32 << l)
        .map(|v| CqEntry {
            key: BitString { len: l, value: v },
            weight,
            side: None,
        })
        .collect();
    Ok(CqState::new_unchecked(l, 1, entries))
}

/// Uniform key whose every conditional state equals `side`.
pub fn ideal_key_with_side(l: usize, side: &HermitianMatrix) -> Result<CqState> {
    check_key_len(l, 1)?;
    validate_state(side, tolerance::STATE)?;
    if side.dim() == 1 {
        return ideal_key(l);
    }
    let weight = 0.5f64.powi(l as i32);
    let entries = (0..1u32 << l)
        .map(|v| CqEntry {
            key: BitString { len: l, value: v },
            weight,
            side: Some(side.clone()),
        })
        .collect();
    Ok(CqState::new_unchecked(l, side.dim(), entries))
}

/// The counterexample key: an ideal key rerouted to output `11...1`
/// whenever it would have produced `00...0`.
///
/// The all-zero key keeps an explicit zero-weight entry so reports show
/// `P(00...0) = 0`. The all-one key has weight `2 * 2^-l`; every other key
/// stays at `2^-l`. Statistical distance to uniform is exactly `2^-l`,
/// while the best guess succeeds with probability `2 * 2^-l`.
pub fn flip_zero_key(l: usize) -> Result<CqState> {
    check_key_len(l, 2)?;
    let uniform = 0.5f64.powi(l as i32);
    let top = (1u32 << l) - 1;
    let entries = (0..=top)
        .map(|v| CqEntry {
            key: BitString { len: l, value: v },
            weight: if v == 0 {
                0.0
            } else if v == top {
                2.0 * uniform
            } else {
                uniform
            },
            side: None,
        })
        .collect();
    Ok(CqState::new_unchecked(l, 1, entries))
}

/// A key with one outcome (`00...0`, fixed for reproducibility) inflated by
/// `delta` above uniform and the remaining mass spread evenly. Statistical
/// distance to uniform is exactly `delta`.
pub fn spike_key(l: usize, delta: f64) -> Result<CqState> {
    check_key_len(l, 1)?;
    let uniform = 0.5f64.powi(l as i32);
    if delta <= 0.0 || delta > 1.0 - uniform {
        return Err(Error::ParameterOutOfRange {
            name: "delta",
            value: delta,
            range: format!("(0, {}]", 1.0 - uniform),
        });
    }
    let spike = uniform + delta;
    let rest = (1.0 - spike) / ((1u64 << l) - 1) as f64;
    let entries = (0..1u32 << l)
        .map(|v| CqEntry {
            key: BitString { len: l, value: v },
            weight: if v == 0 { spike } else { rest },
            side: None,
        })
        .collect();
    let state = CqState::new(l, 1, entries)?;
    let sd = statistical_distance(
        &state.weights_dense(),
        &ProbabilityVector::uniform(state.key_space()),
    )?;
    debug_assert!((sd - delta).abs() <= tolerance::EXACT_CLASSICAL);
    Ok(state)
}

/// Maximum parameters accepted by the random samplers.
pub const MAX_SAMPLE_KEY_LEN: usize = 3;
pub const MAX_SAMPLE_SIDE_DIM: usize = 4;

/// A random cq-state: weights from the flat simplex distribution,
/// conditional states `G G^dagger / tr` from seeded complex Gaussians.
/// Deterministic for a fixed seed.
pub fn sample_random_cq(l: usize, side_dim: usize, seed: u64) -> Result<CqState> {
    if l == 0 || l > MAX_SAMPLE_KEY_LEN {
        return Err(Error::KeyLengthOutOfRange {
            l,
            min: 1,
            max: MAX_SAMPLE_KEY_LEN,
        });
    }
    if side_dim == 0 || side_dim > MAX_SAMPLE_SIDE_DIM {
        return Err(Error::ParameterOutOfRange {
            name: "side_dim",
            value: side_dim as f64,
            range: format!("1..={MAX_SAMPLE_SIDE_DIM}"),
        });
    }
    let mut rng = SeededRng::new(seed);
    let n = 1usize << l;
    let raw: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
    let total: f64 = raw.iter().sum();
    let entries = (0..n)
        .map(|v| {
            let side = if side_dim == 1 {
                None
            } else {
                Some(random_density(&mut rng, side_dim))
            };
            CqEntry {
                key: BitString {
                    len: l,
                    value: v as u32,
                },
                weight: raw[v] / total,
                side,
            }
        })
        .collect();
    CqState::new(l, side_dim, entries)
}

fn random_density(rng: &mut SeededRng, dim: usize) -> HermitianMatrix {
    let mut g = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let (x, y) = rng.normal_pair();
            g.set(i, j, Complex64::new(x, y));
        }
    }
    let gg = g.matmul(&g.adjoint()).hermitian_part();
    gg.scale(1.0 / gg.trace())
}

/// Below this mixing weight the perturbation is numerically invisible and
/// the exact ideal state is returned instead.
const NEAR_IDEAL_FLOOR: f64 = 1e-9;

/// A state whose guessing probability stays within relative error `epsilon`
/// of `2^-l`: a random perturbation is mixed into the ideal key and the
/// mixing weight halved until the constraint holds (checked conservatively
/// across the certified bracket). Deterministic for a fixed seed; as
/// `epsilon` shrinks toward zero the output converges to the ideal state
/// itself.
pub fn sample_near_ideal(l: usize, side_dim: usize, epsilon: f64, seed: u64) -> Result<CqState> {
    if epsilon <= 0.0 || epsilon >= 1.0 {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1)".into(),
        });
    }
    let perturbation = sample_random_cq(l, side_dim, seed)?;
    let ideal = ideal_key_with_side(l, &perturbation.side_marginal())?;
    let scale = 2.0f64.powi(l as i32);
    // The conservative check inflates the bracket width by 2^l; a bracket a
    // quarter of epsilon wide after that inflation never blocks acceptance.
    let tol = (epsilon / (4.0 * scale)).max(1e-12);

    let start = crate::criteria::hy_relative_error_conservative(&perturbation, tol)?;
    if start <= epsilon {
        return Ok(perturbation);
    }
    let mut t = (0.5 * epsilon / start).min(0.5);
    while t >= NEAR_IDEAL_FLOOR {
        let mixed = ideal.mix(&perturbation, t)?;
        if crate::criteria::hy_relative_error_conservative(&mixed, tol)? <= epsilon {
            return Ok(mixed);
        }
        t *= 0.5;
    }
    Ok(ideal)
}

fn check_key_len(l: usize, min: usize) -> Result<()> {
    if l < min || l > MAX_KEY_LEN {
        return Err(Error::KeyLengthOutOfRange {
            l,
            min,
            max: MAX_KEY_LEN,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CqStateJson {
    l: usize,
    side_dim: usize,
    entries: Vec<CqEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct CqEntryJson {
    key: String,
    p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<Vec<Vec<[f64; 2]>>>,
}

impl Serialize for CqState {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let dto = CqStateJson {
            l: self.l,
            side_dim: self.side_dim,
            entries: self
                .entries
                .iter()
                .map(|e| CqEntryJson {
                    key: e.key.to_string(),
                    p: e.weight,
                    rho: e.side.as_ref().map(HermitianMatrix::to_nested),
                })
                .collect(),
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CqState {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let dto = CqStateJson::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(dto.entries.len());
        for e in &dto.entries {
            let key = BitString::from_str(&e.key).map_err(DeError::custom)?;
            let side = match &e.rho {
                None => None,
                Some(rows) => Some(HermitianMatrix::from_nested(rows).map_err(DeError::custom)?),
            };
            entries.push(CqEntry {
                key,
                weight: e.p,
                side,
            });
        }
        CqState::new(dto.l, dto.side_dim, entries).map_err(DeError::custom)
    }
}
