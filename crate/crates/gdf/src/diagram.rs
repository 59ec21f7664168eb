//! Virtual long-knot diagrams as decorated Gauss diagrams, and planar
//! diagram codes for realized outputs.
//!
//! A Gauss diagram records the ordered passages of the long knot through its
//! crossings.  Real chords carry over/under roles and a sign; double chords
//! stand for the formal difference of an over and an under crossing, and
//! store the roles and sign of their positive resolution (the resolution
//! carrying coefficient +1).  No planarity is ever checked: every diagram is
//! treated as virtual.

use crate::error::{Error, Result};
use crate::formal::FormalSum;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub type ChordId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Over,
    Under,
    DOver,
    DUnder,
}

impl Role {
    pub fn is_double(self) -> bool {
        matches!(self, Role::DOver | Role::DUnder)
    }

    /// Role of the chord's other passage.
    pub fn complement(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
            Role::DOver => Role::DUnder,
            Role::DUnder => Role::DOver,
        }
    }

    /// True when this passage runs along the strand that lies above, in the
    /// recorded (positive) resolution for double roles.
    pub fn is_over_like(self) -> bool {
        matches!(self, Role::Over | Role::DOver)
    }

    fn token(self) -> &'static str {
        match self {
            Role::Over => "O",
            Role::Under => "U",
            Role::DOver => "DO",
            Role::DUnder => "DU",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChordKind {
    Real,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Passage {
    pub chord: ChordId,
    pub role: Role,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChordInfo {
    pub kind: ChordKind,
    pub sign: i8,
}

/// A virtual long-knot diagram.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaussDiagram {
    passages: Vec<Passage>,
    chords: BTreeMap<ChordId, ChordInfo>,
}

impl GaussDiagram {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from a passage list, validating pairing and role complementarity.
    pub fn from_passages(passages: Vec<Passage>, signs: &BTreeMap<ChordId, i8>) -> Result<Self> {
        let mut seen: BTreeMap<ChordId, Vec<Role>> = BTreeMap::new();
        for p in &passages {
            seen.entry(p.chord).or_default().push(p.role);
        }
        let mut chords = BTreeMap::new();
        for (id, roles) in seen {
            if roles.len() != 2 {
                return Err(Error::Parse(format!(
                    "chord {} appears {} times, expected 2",
                    id,
                    roles.len()
                )));
            }
            if roles[1] != roles[0].complement() {
                return Err(Error::Parse(format!(
                    "chord {} passages do not have complementary roles",
                    id
                )));
            }
            let kind = if roles[0].is_double() {
                ChordKind::Double
            } else {
                ChordKind::Real
            };
            let sign = *signs
                .get(&id)
                .ok_or_else(|| Error::Parse(format!("no sign for chord {}", id)))?;
            chords.insert(id, ChordInfo { kind, sign });
        }
        Ok(GaussDiagram { passages, chords })
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn chord(&self, id: ChordId) -> Option<ChordInfo> {
        self.chords.get(&id).copied()
    }

    pub fn chord_count(&self) -> usize {
        self.chords.len()
    }

    pub fn chord_ids(&self) -> impl Iterator<Item = ChordId> + '_ {
        self.chords.keys().copied()
    }

    pub fn real_chords(&self) -> Vec<ChordId> {
        self.chords
            .iter()
            .filter(|(_, info)| info.kind == ChordKind::Real)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn double_chords(&self) -> Vec<ChordId> {
        self.chords
            .iter()
            .filter(|(_, info)| info.kind == ChordKind::Double)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn double_count(&self) -> usize {
        self.double_chords().len()
    }

    /// Role of the chord's first passage along the strand.
    pub fn first_role(&self, id: ChordId) -> Option<Role> {
        self.passages.iter().find(|p| p.chord == id).map(|p| p.role)
    }

    /// Positions (0-based) of the chord's two passages.
    pub fn positions(&self, id: ChordId) -> Option<(usize, usize)> {
        let mut it = self
            .passages
            .iter()
            .enumerate()
            .filter(|(_, p)| p.chord == id)
            .map(|(i, _)| i);
        Some((it.next()?, it.next()?))
    }

    /// Parse the whitespace-separated Gauss code grammar.
    pub fn parse(text: &str) -> Result<Self> {
        let mut passages = Vec::new();
        let mut signs: BTreeMap<ChordId, i8> = BTreeMap::new();
        for tok in text.split_whitespace() {
            let (role, rest) = if let Some(r) = tok.strip_prefix("DO") {
                (Role::DOver, r)
            } else if let Some(r) = tok.strip_prefix("DU") {
                (Role::DUnder, r)
            } else if let Some(r) = tok.strip_prefix('O') {
                (Role::Over, r)
            } else if let Some(r) = tok.strip_prefix('U') {
                (Role::Under, r)
            } else {
                return Err(Error::Parse(format!("malformed token '{}'", tok)));
            };
            let (id_str, sign) = if let Some(s) = rest.strip_suffix('+') {
                (s, 1i8)
            } else if let Some(s) = rest.strip_suffix('-') {
                (s, -1i8)
            } else {
                return Err(Error::Parse(format!("token '{}' missing sign", tok)));
            };
            let id: ChordId = id_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad chord id in '{}'", tok)))?;
            if let Some(&prev) = signs.get(&id) {
                if prev != sign {
                    return Err(Error::Parse(format!(
                        "chord {} has mismatched signs on its two tokens",
                        id
                    )));
                }
            } else {
                signs.insert(id, sign);
            }
            passages.push(Passage { chord: id, role });
        }
        Self::from_passages(passages, &signs)
    }

    /// Canonical text form: chord ids relabeled by order of first passage,
    /// tokens re-emitted in position order.
    pub fn canonical_key(&self) -> String {
        let mut relabel: BTreeMap<ChordId, u32> = BTreeMap::new();
        let mut next = 1u32;
        let mut toks = Vec::with_capacity(self.passages.len());
        for p in &self.passages {
            let id = *relabel.entry(p.chord).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            let sign = if self.chords[&p.chord].sign > 0 { '+' } else { '-' };
            toks.push(format!("{}{}{}", p.role.token(), id, sign));
        }
        toks.join(" ")
    }

    /// Relabel chords canonically in place (first passage order).
    pub fn canonicalize(&self) -> GaussDiagram {
        GaussDiagram::parse(&self.canonical_key()).expect("canonical key reparses")
    }

    /// Exchange the two roles of a real chord and negate its sign.
    pub fn switch(&self, id: ChordId) -> Result<GaussDiagram> {
        let info = self.chord(id).ok_or(Error::UnknownChord(id))?;
        if info.kind != ChordKind::Real {
            return Err(Error::NotReal(id));
        }
        let mut out = self.clone();
        for p in &mut out.passages {
            if p.chord == id {
                p.role = p.role.complement();
            }
        }
        out.chords.get_mut(&id).unwrap().sign = -info.sign;
        Ok(out)
    }

    /// Resolve a double chord: positive resolution minus switched resolution.
    pub fn resolve_double(&self, id: ChordId) -> Result<FormalSum<String>> {
        let (pos, neg) = self.resolutions(id)?;
        let mut out = FormalSum::new();
        out.add(pos.canonical_key(), 1);
        out.add(neg.canonical_key(), -1);
        Ok(out)
    }

    /// The two resolutions of a double chord as diagrams: (positive, switched).
    pub fn resolutions(&self, id: ChordId) -> Result<(GaussDiagram, GaussDiagram)> {
        let info = self.chord(id).ok_or(Error::UnknownChord(id))?;
        if info.kind != ChordKind::Double {
            return Err(Error::NotDouble(id));
        }
        let mut pos = self.clone();
        for p in &mut pos.passages {
            if p.chord == id {
                p.role = match p.role {
                    Role::DOver => Role::Over,
                    Role::DUnder => Role::Under,
                    r => r,
                };
            }
        }
        pos.chords.get_mut(&id).unwrap().kind = ChordKind::Real;
        let neg = pos.switch(id)?;
        Ok((pos, neg))
    }

    /// Diagram containing exactly the real chords in `keep` plus all double
    /// chords, passages re-indexed by preserved order.
    pub fn subdiagram(&self, keep: &[ChordId]) -> Result<GaussDiagram> {
        for &id in keep {
            let info = self.chord(id).ok_or(Error::UnknownChord(id))?;
            if info.kind != ChordKind::Real {
                return Err(Error::NotReal(id));
            }
        }
        let keep_set: std::collections::BTreeSet<ChordId> = keep.iter().copied().collect();
        let passages: Vec<Passage> = self
            .passages
            .iter()
            .filter(|p| {
                let info = self.chords[&p.chord];
                info.kind == ChordKind::Double || keep_set.contains(&p.chord)
            })
            .copied()
            .collect();
        let chords = self
            .chords
            .iter()
            .filter(|(id, info)| info.kind == ChordKind::Double || keep_set.contains(id))
            .map(|(&id, &info)| (id, info))
            .collect();
        Ok(GaussDiagram {
            passages,
            chords,
        })
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_key())
    }
}

pub const PD_CONVENTION: &str = "pd-ccw-under-in";

fn default_convention() -> String {
    PD_CONVENTION.to_string()
}

/// One crossing of a planar diagram.  `arcs` lists the four incident arc
/// labels counterclockwise starting from the incoming under-strand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCrossing {
    pub arcs: [u32; 4],
    pub sign: i8,
    #[serde(with = "kind_serde")]
    pub kind: ChordKind,
}

mod kind_serde {
    use super::ChordKind;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(kind: &ChordKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match kind {
            ChordKind::Real => "real",
            ChordKind::Double => "double",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ChordKind, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "real" => Ok(ChordKind::Real),
            "double" => Ok(ChordKind::Double),
            _ => Err(serde::de::Error::custom(format!("bad kind '{}'", s))),
        }
    }
}

/// A realizable diagram as a crossing list with arc labels, plus the arc
/// traversal order along the open strand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarDiagram {
    #[serde(default = "default_convention")]
    pub convention: String,
    pub crossings: Vec<PdCrossing>,
    pub strand: Vec<u32>,
}

impl PlanarDiagram {
    pub fn unknot() -> Self {
        PlanarDiagram {
            convention: default_convention(),
            crossings: Vec::new(),
            strand: vec![1],
        }
    }

    pub fn new(crossings: Vec<PdCrossing>, strand: Vec<u32>) -> Self {
        PlanarDiagram {
            convention: default_convention(),
            crossings,
            strand,
        }
    }

    /// Incoming/outgoing under arc and the over passage arcs (in, out).
    pub fn under_in(c: &PdCrossing) -> u32 {
        c.arcs[0]
    }
    pub fn under_out(c: &PdCrossing) -> u32 {
        c.arcs[2]
    }
    pub fn over_in(c: &PdCrossing) -> u32 {
        if c.sign > 0 {
            c.arcs[3]
        } else {
            c.arcs[1]
        }
    }
    pub fn over_out(c: &PdCrossing) -> u32 {
        if c.sign > 0 {
            c.arcs[1]
        } else {
            c.arcs[3]
        }
    }

    /// Switch a crossing: the under strand becomes the over strand at fixed
    /// geometry.  The arc list rotates so the new incoming under (the old
    /// incoming over, at index 3 for positive signs and 1 for negative)
    /// leads, and the sign negates.
    pub fn switch_crossing(&self, idx: usize) -> PlanarDiagram {
        let mut out = self.clone();
        let c = &mut out.crossings[idx];
        let [a, b, cc, d] = c.arcs;
        c.arcs = if c.sign > 0 { [d, a, b, cc] } else { [b, cc, d, a] };
        c.sign = -c.sign;
        c.kind = ChordKind::Real;
        out
    }

    /// Re-read the planar diagram as a Gauss diagram by strand traversal.
    pub fn to_gauss(&self) -> Result<GaussDiagram> {
        // passage lookup: for each crossing, its under passage (in, out)
        // and over passage (in, out) as directed arc pairs
        #[derive(Clone, Copy)]
        struct Pass {
            crossing: usize,
            over: bool,
        }
        let mut lookup: Vec<((u32, u32), Pass)> = Vec::new();
        for (i, c) in self.crossings.iter().enumerate() {
            lookup.push((
                (Self::under_in(c), Self::under_out(c)),
                Pass {
                    crossing: i,
                    over: false,
                },
            ));
            lookup.push((
                (Self::over_in(c), Self::over_out(c)),
                Pass {
                    crossing: i,
                    over: true,
                },
            ));
        }
        let mut used = vec![false; lookup.len()];
        let mut passages = Vec::new();
        let mut signs = BTreeMap::new();
        for w in self.strand.windows(2) {
            let pair = (w[0], w[1]);
            let li = lookup
                .iter()
                .enumerate()
                .position(|(j, (p, _))| !used[j] && *p == pair)
                .ok_or_else(|| {
                    Error::BadPlanar(format!("no crossing joins arcs {} -> {}", pair.0, pair.1))
                })?;
            used[li] = true;
            let pass = lookup[li].1;
            let c = &self.crossings[pass.crossing];
            let id = pass.crossing as ChordId + 1;
            let role = match (c.kind, pass.over) {
                (ChordKind::Real, true) => Role::Over,
                (ChordKind::Real, false) => Role::Under,
                (ChordKind::Double, true) => Role::DOver,
                (ChordKind::Double, false) => Role::DUnder,
            };
            signs.insert(id, c.sign);
            passages.push(Passage { chord: id, role });
        }
        if !used.iter().all(|&u| u) {
            return Err(Error::BadPlanar(
                "strand does not traverse every crossing twice".into(),
            ));
        }
        GaussDiagram::from_passages(passages, &signs)
    }

    /// Deterministic text form used as a formal-sum key: compact JSON.
    /// Constructors label arcs in traversal order, so structurally equal
    /// diagrams serialize identically.
    pub fn canonical_key(&self) -> String {
        serde_json::to_string(self).expect("planar diagram serializes")
    }

    pub fn from_key(key: &str) -> Result<Self> {
        Ok(serde_json::from_str(key)?)
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

    #[test]
    fn parse_kink() {
        let d = GaussDiagram::parse("O1+ U1+").unwrap();
        assert_eq!(d.chord_count(), 1);
        assert_eq!(d.chord(1).unwrap().kind, ChordKind::Real);
        assert_eq!(d.chord(1).unwrap().sign, 1);
    }

    #[test]
    fn parse_trefoil() {
        let d = GaussDiagram::parse(TREFOIL).unwrap();
        assert_eq!(d.chord_count(), 3);
        assert_eq!(d.real_chords().len(), 3);
    }

    #[test]
    fn parse_nonrealizable_virtual() {
        // no planarity requirement
        let d = GaussDiagram::parse("O1+ U2+ U1+ O2+").unwrap();
        assert_eq!(d.chord_count(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(GaussDiagram::parse("Q1+").is_err());
        assert!(GaussDiagram::parse("O1+").is_err());
        assert!(GaussDiagram::parse("O1+ O1+").is_err());
        assert!(GaussDiagram::parse("O1+ U1-").is_err());
        assert!(GaussDiagram::parse("O1+ U1+ O1+").is_err());
        assert!(GaussDiagram::parse("O1+ DU1+").is_err());
    }

    #[test]
    fn canonical_relabeling() {
        let d = GaussDiagram::parse("O7- U7-").unwrap();
        assert_eq!(d.canonical_key(), "O1- U1-");
        let a = GaussDiagram::parse("U2+ O1+ U1+ O2+").unwrap();
        let b = GaussDiagram::parse("U5+ O9+ U9+ O5+").unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_eq!(GaussDiagram::empty().canonical_key(), "");
    }

    #[test]
    fn switch_definition_and_involution() {
        let d = GaussDiagram::parse("O1+ U1+").unwrap();
        assert_eq!(d.switch(1).unwrap().canonical_key(), "U1- O1-");
        let t = GaussDiagram::parse(TREFOIL).unwrap();
        assert_eq!(t.switch(2).unwrap().switch(2).unwrap(), t);
        assert!(d.switch(9).is_err());
        let dd = GaussDiagram::parse("DO1+ DU1+").unwrap();
        assert!(dd.switch(1).is_err());
    }

    #[test]
    fn resolve_double_definition() {
        let d = GaussDiagram::parse("DO1+ DU1+").unwrap();
        let r = d.resolve_double(1).unwrap();
        assert_eq!(r.coeff(&"O1+ U1+".to_string()), 1);
        assert_eq!(r.coeff(&"U1- O1-".to_string()), -1);
        assert_eq!(r.len(), 2);
        let real = GaussDiagram::parse("O1+ U1+").unwrap();
        assert!(real.resolve_double(1).is_err());
    }

    #[test]
    fn resolve_two_doubles_signs() {
        // resolve both doubles: 4 signed real diagrams with signs +,-,-,+
        let d = GaussDiagram::parse("DO1+ DU2- DU1+ DO2-").unwrap();
        let mut total: FormalSum<String> = FormalSum::new();
        for (k1, c1) in d.resolve_double(1).unwrap().iter() {
            let d1 = GaussDiagram::parse(k1).unwrap();
            total.add_sum(&d1.resolve_double(2).unwrap(), c1);
        }
        assert_eq!(total.len(), 4);
        let coeffs: Vec<i64> = total.iter().map(|(_, c)| c).collect();
        assert_eq!(coeffs.iter().filter(|&&c| c == 1).count(), 2);
        assert_eq!(coeffs.iter().filter(|&&c| c == -1).count(), 2);
    }

    #[test]
    fn subdiagram_rules() {
        let t = GaussDiagram::parse(TREFOIL).unwrap();
        assert_eq!(t.subdiagram(&[1, 2, 3]).unwrap(), t);
        let s = t.subdiagram(&[2, 3]).unwrap();
        assert_eq!(s.canonical_key(), "U1+ O2+ O1+ U2+");
        // doubles always kept
        let d = GaussDiagram::parse("DO1+ O2+ DU1+ U2+").unwrap();
        let sub = d.subdiagram(&[]).unwrap();
        assert_eq!(sub.canonical_key(), "DO1+ DU1+");
        assert!(d.subdiagram(&[1]).is_err()); // 1 is double
        assert!(t.subdiagram(&[9]).is_err());
    }

    #[test]
    fn subdiagram_nesting() {
        let t = GaussDiagram::parse(TREFOIL).unwrap();
        let a = t.subdiagram(&[1, 2]).unwrap().subdiagram(&[2]).unwrap();
        let b = t.subdiagram(&[2]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn parse_serialize_roundtrip() {
        for code in [TREFOIL, "O1+ U2+ U1+ O2+", "DO1- DU1-", ""] {
            let d = GaussDiagram::parse(code).unwrap();
            let r = GaussDiagram::parse(&d.canonical_key()).unwrap();
            assert_eq!(r.canonical_key(), d.canonical_key());
        }
    }

    #[test]
    fn pd_json_roundtrip() {
        let pd = PlanarDiagram::new(
            vec![PdCrossing {
                arcs: [2, 2, 3, 1],
                sign: 1,
                kind: ChordKind::Real,
            }],
            vec![1, 2, 3],
        );
        let js = serde_json::to_string(&pd).unwrap();
        assert!(js.contains("pd-ccw-under-in"));
        let back: PlanarDiagram = serde_json::from_str(&js).unwrap();
        assert_eq!(back, pd);
    }

    #[test]
    fn pd_to_gauss_kink() {
        let pd = PlanarDiagram::new(
            vec![PdCrossing {
                arcs: [2, 2, 3, 1],
                sign: 1,
                kind: ChordKind::Real,
            }],
            vec![1, 2, 3],
        );
        let g = pd.to_gauss().unwrap();
        assert_eq!(g.canonical_key(), "O1+ U1+");
    }

    #[test]
    fn pd_switch_crossing() {
        let pd = PlanarDiagram::new(
            vec![PdCrossing {
                arcs: [2, 2, 3, 1],
                sign: 1,
                kind: ChordKind::Real,
            }],
            vec![1, 2, 3],
        );
        let sw = pd.switch_crossing(0);
        assert_eq!(sw.crossings[0].sign, -1);
        assert_eq!(sw.to_gauss().unwrap().canonical_key(), "U1- O1-");
    }
}
