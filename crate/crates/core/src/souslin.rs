//! Souslin schemes over the real line: tree-indexed nested closed intervals
//! with shrinking diameters. Geometry is exact rational internally; branch
//! points are reported as doubles with their error radius.

use crate::combinatorics::TreeSeq;
use crate::error::{Error, Result};
use num::rational::Ratio;
use num::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

type Rat = Ratio<i128>;

fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

/// Exact conversion of a finite double into a rational.
fn f64_to_rat(x: f64) -> Result<Rat> {
    if !x.is_finite() {
        return Err(Error::WitnessInvalid(format!("non-finite endpoint {x}")));
    }
    let mut v = x;
    let mut den: i128 = 1;
    while v.fract() != 0.0 {
        if den > 1 << 60 || v.abs() > 1e15 {
            return Err(Error::WitnessInvalid(format!(
                "endpoint {x} beyond exact rational range"
            )));
        }
        v *= 2.0;
        den *= 2;
    }
    Ok(rat(v as i128, den))
}

const MAX_RESOLVE_DEPTH: usize = 64;

/// A closed interval `[center - radius, center + radius]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: f64,
    pub radius: f64,
}

/// A resolved branch: the collapsed prefix actually used, the center of its
/// interval, and the radius bounding the distance to the true branch point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub branch: TreeSeq,
    pub approx: f64,
    pub error: f64,
    /// Whether any entry was collapsed or the branch was clamped.
    pub collapsed: bool,
}

/// A violation found by [`Scheme::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeViolation {
    /// Child interval escapes its parent.
    NotNested { parent: TreeSeq, child: TreeSeq },
    /// Interval radius exceeds the shrink bound at its depth.
    RadiusTooLarge { node: TreeSeq },
    /// Shrink bounds fail to decrease strictly.
    ShrinkNotDecreasing { depth: u32 },
    /// A table scheme misses an admissible node.
    MissingEntry { node: TreeSeq },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub depth: u32,
    pub width: u32,
    pub nodes_checked: u64,
    pub violations: Vec<SchemeViolation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Canonical rational enumeration of `[0, 1]`: 0, 1, then reduced fractions
/// by increasing denominator and numerator.
pub fn rational_enumeration(n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(), Rat::one()];
    let mut den: i128 = 2;
    while out.len() < n {
        for num in 1..den {
            if num_integer_gcd(num, den) == 1 {
                out.push(rat(num, den));
                if out.len() == n {
                    break;
                }
            }
        }
        den += 1;
    }
    out.truncate(n);
    out
}

fn num_integer_gcd(a: i128, b: i128) -> i128 {
    num::integer::gcd(a, b)
}

/// A Souslin scheme generator: assigns a closed interval to every finite
/// sequence, with finite branching realized by collapsing out-of-range
/// entries to child 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "snake_case")]
pub enum Scheme {
    /// Constant center `c`, radius `2^{-n}`; projection `{c}`.
    Singleton { center: f64 },
    /// Root branches once into the listed points; projection is the set.
    Finite { points: Vec<f64> },
    /// Middle-thirds intervals; projection is the Cantor set.
    Cantor,
    /// Root branches into an enumeration of rationals in the unit interval;
    /// projection is that countable dense (non-closed) set.
    Rationals { width: u32 },
    /// Explicit table of intervals with declared depth and width. Entries
    /// map collapsed sequences to `[lo, hi]`.
    Table {
        #[serde(with = "table_entries")]
        entries: BTreeMap<TreeSeq, (f64, f64)>,
        depth: u32,
        width: u32,
    },
}

mod table_entries {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<TreeSeq, (f64, f64)>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<(&TreeSeq, [f64; 2])> =
            map.iter().map(|(k, &(lo, hi))| (k, [lo, hi])).collect();
        rows.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<BTreeMap<TreeSeq, (f64, f64)>, D::Error> {
        let rows: Vec<(TreeSeq, [f64; 2])> = Vec::deserialize(de)?;
        Ok(rows
            .into_iter()
            .map(|(k, [lo, hi])| (k, (lo, hi)))
            .collect())
    }
}

impl Scheme {
    pub fn singleton(center: f64) -> Scheme {
        Scheme::Singleton { center }
    }

    pub fn finite_set(points: Vec<f64>) -> Result<Scheme> {
        if points.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        Ok(Scheme::Finite { points })
    }

    pub fn cantor_middle_thirds() -> Scheme {
        Scheme::Cantor
    }

    pub fn rationals_in_unit_interval(width: u32) -> Result<Scheme> {
        if width == 0 {
            return Err(Error::EmptyGenerators);
        }
        Ok(Scheme::Rationals { width })
    }

    /// Number of admitted children below the (collapsed) node `s`.
    pub fn branching(&self, s: &TreeSeq) -> u64 {
        match self {
            Scheme::Singleton { .. } => 1,
            Scheme::Cantor => 2,
            Scheme::Finite { points } => {
                if s.is_empty() {
                    points.len() as u64
                } else {
                    1
                }
            }
            Scheme::Rationals { width } => {
                if s.is_empty() {
                    *width as u64
                } else {
                    1
                }
            }
            Scheme::Table { width, .. } => *width as u64,
        }
    }

    /// Map entries at or beyond the branching to child 0, prefix by prefix.
    /// Table schemes additionally clamp to their declared depth.
    pub fn collapse(&self, s: &TreeSeq) -> (TreeSeq, bool) {
        let mut out = TreeSeq::empty();
        let mut changed = false;
        for (pos, &e) in s.entries().iter().enumerate() {
            if let Scheme::Table { depth, .. } = self {
                if pos as u32 >= *depth {
                    changed = true;
                    break;
                }
            }
            let b = self.branching(&out);
            let kept = if e < b {
                e
            } else {
                changed = true;
                0
            };
            out = out.child(kept);
        }
        (out, changed)
    }

    /// Shrink bound at the given depth, exact.
    fn shrink_exact(&self, depth: u32) -> Rat {
        match self {
            Scheme::Singleton { .. } => rat(1, 1 << depth.min(100)),
            Scheme::Cantor => rat(1, pow3(depth)),
            Scheme::Finite { points } => {
                if depth == 0 {
                    finite_root_radius(points)
                } else {
                    rat(1, 1i128 << depth.min(100))
                }
            }
            Scheme::Rationals { .. } => {
                if depth == 0 {
                    rat(3, 2)
                } else {
                    rat(1, 1i128 << depth.min(100))
                }
            }
            Scheme::Table { .. } => rat(2, 1i128 << depth.min(100)),
        }
    }

    /// Shrink bound at the given depth as a double.
    pub fn shrink(&self, depth: u32) -> f64 {
        self.shrink_exact(depth).to_f64().expect("small rational")
    }

    /// Exact interval of a collapsed node, as (center, radius).
    fn ball_exact(&self, s: &TreeSeq) -> Result<(Rat, Rat)> {
        let depth = s.len() as u32;
        if depth as usize > MAX_RESOLVE_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        match self {
            Scheme::Singleton { center } => Ok((f64_to_rat(*center)?, rat(1, 1i128 << depth))),
            Scheme::Cantor => {
                // interval [a, a+1] / 3^depth, digit 0 → left, 1 → right third
                let mut a: i128 = 0;
                for &d in s.entries() {
                    a = a * 3 + if d == 0 { 0 } else { 2 };
                }
                let den = pow3(depth);
                Ok((rat(2 * a + 1, 2 * den), rat(1, 2 * den)))
            }
            Scheme::Finite { points } => {
                if s.is_empty() {
                    let (lo, hi) = finite_extent(points)?;
                    return Ok(((lo + hi) / rat(2, 1), finite_root_radius(points)));
                }
                let pick = points
                    .get(s.get(0).unwrap() as usize)
                    .copied()
                    .expect("collapsed entry below branching");
                Ok((f64_to_rat(pick)?, rat(1, 1i128 << depth)))
            }
            Scheme::Rationals { width } => {
                if s.is_empty() {
                    return Ok((rat(1, 2), rat(3, 2)));
                }
                let qs = rational_enumeration(*width as usize);
                let q = qs[s.get(0).unwrap() as usize];
                Ok((q, rat(1, 1i128 << depth)))
            }
            Scheme::Table { entries, .. } => {
                let (lo, hi) = entries
                    .get(s)
                    .ok_or_else(|| Error::WitnessInvalid(format!("missing table entry {s:?}")))?;
                let lo = f64_to_rat(*lo)?;
                let hi = f64_to_rat(*hi)?;
                Ok(((lo + hi) / rat(2, 1), (hi - lo) / rat(2, 1)))
            }
        }
    }

    /// The interval of a node, collapsing first. Table lookups fall back to
    /// the deepest defined prefix.
    pub fn ball(&self, s: &TreeSeq) -> Ball {
        let (collapsed, _) = self.collapse(s);
        let (c, r) = self.ball_with_fallback(&collapsed);
        Ball {
            center: c.to_f64().expect("small rational"),
            radius: r.to_f64().expect("small rational"),
        }
    }

    fn ball_with_fallback(&self, collapsed: &TreeSeq) -> (Rat, Rat) {
        let mut node = collapsed.clone();
        loop {
            match self.ball_exact(&node) {
                Ok(b) => return b,
                Err(_) if !node.is_empty() => node = node.prefix(node.len() - 1),
                Err(_) => return (Rat::zero(), Rat::one()),
            }
        }
    }

    /// Resolve a branch to its approximate limit point with error bound.
    pub fn resolve(&self, branch: &TreeSeq) -> BranchPoint {
        let (collapsed, mut changed) = self.collapse(branch);
        let mut node = collapsed;
        // retreat to the deepest defined prefix (table schemes only)
        loop {
            match self.ball_exact(&node) {
                Ok((c, r)) => {
                    return BranchPoint {
                        branch: node,
                        approx: c.to_f64().expect("small rational"),
                        error: r.to_f64().expect("small rational"),
                        collapsed: changed,
                    }
                }
                Err(_) if !node.is_empty() => {
                    changed = true;
                    node = node.prefix(node.len() - 1);
                }
                Err(_) => {
                    return BranchPoint {
                        branch: TreeSeq::empty(),
                        approx: 0.0,
                        error: 1.0,
                        collapsed: true,
                    }
                }
            }
        }
    }

    /// The branch-point value used by realized sequences: the prefix
    /// extended by zeros out to the resolution depth.
    pub fn branch_point_value(&self, prefix: &TreeSeq, resolution_depth: u32) -> f64 {
        self.resolve(&prefix.zero_extended(resolution_depth as usize))
            .approx
    }

    /// Exhaustive nesting and shrink checks over all admissible nodes with
    /// length ≤ depth and entries < width.
    pub fn validate(&self, depth: u32, width: u32) -> ValidationReport {
        let mut violations = Vec::new();
        let mut nodes_checked = 0u64;

        for d in 0..=depth {
            let lo = self.shrink_exact(d);
            let hi = self.shrink_exact(d + 1);
            if hi >= lo {
                violations.push(SchemeViolation::ShrinkNotDecreasing { depth: d });
            }
        }

        let mut frontier = vec![TreeSeq::empty()];
        while let Some(node) = frontier.pop() {
            nodes_checked += 1;
            let ball = match self.ball_exact(&node) {
                Ok(b) => Some(b),
                Err(_) => {
                    violations.push(SchemeViolation::MissingEntry { node: node.clone() });
                    None
                }
            };
            if let Some((c, r)) = &ball {
                let _ = c;
                if *r > self.shrink_exact(node.len() as u32) {
                    violations.push(SchemeViolation::RadiusTooLarge { node: node.clone() });
                }
            }
            if node.len() as u32 >= depth {
                continue;
            }
            let b = self.branching(&node).min(width as u64);
            for e in 0..b {
                let child = node.child(e);
                if let (Some((pc, pr)), Ok((cc, cr))) = (&ball, self.ball_exact(&child)) {
                    let (plo, phi) = (pc - pr, pc + pr);
                    let (clo, chi) = (cc - cr, cc + cr);
                    if clo < plo || chi > phi {
                        violations.push(SchemeViolation::NotNested {
                            parent: node.clone(),
                            child: child.clone(),
                        });
                    }
                }
                frontier.push(child);
            }
        }
        violations.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        ValidationReport {
            depth,
            width,
            nodes_checked,
            violations,
        }
    }
}

fn pow3(n: u32) -> i128 {
    3i128.checked_pow(n).expect("depth within exact range")
}

fn finite_extent(points: &[f64]) -> Result<(Rat, Rat)> {
    let mut lo = f64_to_rat(points[0])?;
    let mut hi = lo;
    for &p in &points[1..] {
        let r = f64_to_rat(p)?;
        if r < lo {
            lo = r;
        }
        if r > hi {
            hi = r;
        }
    }
    Ok((lo, hi))
}

fn finite_root_radius(points: &[f64]) -> Rat {
    match finite_extent(points) {
        Ok((lo, hi)) => (hi - lo) / rat(2, 1) + Rat::one(),
        Err(_) => Rat::one(),
    }
}

/// Exact distance from `x` to the depth-`d` interval cover of the Cantor
/// set; endpoints of cover intervals are themselves Cantor points, so this
/// overestimates the true distance by at most `3^{-d}`.
pub fn cantor_distance(x: f64, depth: u32) -> f64 {
    let mut best = f64::INFINITY;
    let mut stack = vec![(0i128, 0u32)];
    while let Some((a, d)) = stack.pop() {
        let den = pow3(d) as f64;
        let (lo, hi) = (a as f64 / den, (a + 1) as f64 / den);
        if x >= lo && x <= hi {
            if d == depth {
                return 0.0;
            }
            stack.push((3 * a, d + 1));
            stack.push((3 * a + 2, d + 1));
            continue;
        }
        let gap = if x < lo { lo - x } else { x - hi };
        if gap >= best {
            continue;
        }
        if d == depth {
            best = gap;
        } else {
            stack.push((3 * a, d + 1));
            stack.push((3 * a + 2, d + 1));
        }
    }
    best
}
