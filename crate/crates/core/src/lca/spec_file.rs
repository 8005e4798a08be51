//! JSON algebra spec files.
//!
//! ```json
//! {"name": "hv", "parameters": [],
//!  "generators": [{"family": "L"}, {"family": "H", "grade-range": [-1, 4]}],
//!  "brackets": [{"lhs": "L", "rhs": "H_2", "value": [{"gen": "H_2", "poly": "d + l"}]}]}
//! ```
//!
//! A pair that is not listed takes its value from the reverse pair by skew-symmetry, and is
//! zero if neither is listed. With `"truncated": true` (a finite window of an infinite
//! algebra) an unlisted pair is instead reported as out of window.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConformalAlgebra, Element, Family, GenId, Rank};
use crate::error::{Error, Result};
use crate::poly::{parse_with, ParseContext, Poly};
use crate::sym::{Sym, Var};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub name: String,
    #[serde(default)]
    pub parameters: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: String,
    /// Inclusive index range; absent for a single unindexed generator.
    #[serde(rename = "grade-range", default, skip_serializing_if = "Option::is_none")]
    pub grade_range: Option<[i64; 2]>,
    /// Grade of an unindexed generator (default 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketSpec {
    pub lhs: String,
    pub rhs: String,
    pub value: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub gen: String,
    pub poly: String,
}

impl AlgebraSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SpecFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Clone, Debug)]
enum FamilyKind {
    Plain { grade: i64 },
    Indexed { lo: i64, hi: i64 },
}

/// An algebra loaded from a spec file.
#[derive(Clone, Debug)]
pub struct SpecAlgebra {
    name: String,
    params: Vec<Sym>,
    families: Vec<(Sym, FamilyKind)>,
    table: BTreeMap<(GenId, GenId), Element>,
    truncated: bool,
}

impl SpecAlgebra {
    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self> {
        let bad = |m: String| Error::SpecFile(m);
        let mut families: Vec<(Sym, FamilyKind)> = Vec::new();
        for g in &spec.generators {
            if g.family.is_empty() || !g.family.chars().all(|c| c.is_alphanumeric()) {
                return Err(bad(format!("bad family name `{}`", g.family)));
            }
            let sym = Sym::new(&g.family);
            if families.iter().any(|(s, _)| *s == sym) {
                return Err(bad(format!("family `{}` declared twice", g.family)));
            }
            let kind = match g.grade_range {
                None => FamilyKind::Plain { grade: g.grade.unwrap_or(0) },
                Some([lo, hi]) if lo <= hi => FamilyKind::Indexed { lo, hi },
                Some([lo, hi]) => return Err(bad(format!("empty grade range [{lo}, {hi}]"))),
            };
            families.push((sym, kind));
        }
        let ctx = ParseContext {
            params: spec.parameters.clone(),
            ..Default::default()
        };
        let mut alg = SpecAlgebra {
            name: spec.name.clone(),
            params: spec.parameters.iter().map(|p| Sym::new(p)).collect(),
            families,
            table: BTreeMap::new(),
            truncated: spec.truncated,
        };
        for b in &spec.brackets {
            let lhs: GenId = b.lhs.parse()?;
            let rhs: GenId = b.rhs.parse()?;
            alg.validate(lhs).map_err(|e| bad(format!("lhs {}: {e}", b.lhs)))?;
            alg.validate(rhs).map_err(|e| bad(format!("rhs {}: {e}", b.rhs)))?;
            let mut value = Element::zero();
            for t in &b.value {
                let g: GenId = t.gen.parse()?;
                alg.validate(g).map_err(|e| bad(format!("value {}: {e}", t.gen)))?;
                let p = parse_with(&t.poly, &ctx).map_err(|e| bad(format!("[{}_l {}]: {e}", b.lhs, b.rhs)))?;
                if p.vars().iter().any(|v| matches!(v, Var::Mu | Var::Nu)) {
                    return Err(bad(format!("[{}_l {}] may only use d, l and parameters", b.lhs, b.rhs)));
                }
                value.add_term(g, p);
            }
            if alg.table.insert((lhs, rhs), value).is_some() {
                return Err(bad(format!("pair ({}, {}) listed twice", b.lhs, b.rhs)));
            }
        }
        Ok(alg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&AlgebraSpec::from_json(text)?)
    }

    fn kind(&self, family: Sym) -> Option<&FamilyKind> {
        self.families.iter().find(|(s, _)| *s == family).map(|(_, k)| k)
    }
}

impl ConformalAlgebra for SpecAlgebra {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn parameters(&self) -> Vec<Sym> {
        self.params.clone()
    }

    fn families(&self) -> Vec<Family> {
        self.families
            .iter()
            .map(|(s, k)| Family {
                name: s.to_string(),
                range: match k {
                    FamilyKind::Plain { .. } => None,
                    FamilyKind::Indexed { lo, hi } => Some((*lo, Some(*hi))),
                },
            })
            .collect()
    }

    fn rank(&self) -> Rank {
        if self.truncated {
            Rank::Infinite
        } else {
            Rank::Finite
        }
    }

    fn validate(&self, g: GenId) -> Result<()> {
        match (self.kind(g.family), g.index) {
            (Some(FamilyKind::Plain { .. }), None) => Ok(()),
            (Some(FamilyKind::Indexed { lo, hi }), Some(i)) if (*lo..=*hi).contains(&i) => Ok(()),
            (Some(FamilyKind::Indexed { .. }), Some(_)) if self.truncated => Err(Error::OutOfWindow(g.to_string())),
            _ => Err(Error::InvalidGenerator(g.to_string())),
        }
    }

    fn grade(&self, g: GenId) -> i64 {
        match self.kind(g.family) {
            Some(FamilyKind::Plain { grade }) => *grade,
            _ => g.index.unwrap_or(0),
        }
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<GenId> {
        let mut out = Vec::new();
        for (s, k) in &self.families {
            match k {
                FamilyKind::Plain { grade } => {
                    if (lo..=hi).contains(grade) {
                        out.push(GenId { family: *s, index: None });
                    }
                }
                FamilyKind::Indexed { lo: a, hi: b } => {
                    for i in lo.max(*a)..=hi.min(*b) {
                        out.push(GenId { family: *s, index: Some(i) });
                    }
                }
            }
        }
        out
    }

    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element> {
        self.validate(g)?;
        self.validate(h)?;
        if let Some(v) = self.table.get(&(g, h)) {
            return Ok(v.clone());
        }
        if let Some(v) = self.table.get(&(h, g)) {
            let flip = -(&Poly::lambda() + &Poly::d());
            return Ok(v.substitute(Var::Lambda, &flip).neg());
        }
        if self.truncated {
            return Err(Error::OutOfWindow(format!("[{g}_l {h}]")));
        }
        Ok(Element::zero())
    }
}

/// Dumps an algebra as a spec file. Infinite algebras are cut to grades `[lo, hi]` and
/// marked truncated; only pairs whose bracket stays in the window are listed.
pub fn emit_spec(a: &dyn ConformalAlgebra, lo: i64, hi: i64) -> Result<AlgebraSpec> {
    let gens = a.window(lo, hi);
    let truncated = a.rank() == Rank::Infinite;
    let generators = a
        .families()
        .into_iter()
        .filter_map(|f| match f.range {
            None => {
                let g = GenId::plain(&f.name);
                gens.contains(&g).then(|| GeneratorSpec {
                    family: f.name,
                    grade_range: None,
                    grade: Some(a.grade(g)).filter(|x| *x != 0),
                })
            }
            Some((flo, fhi)) => {
                let l = flo.max(lo);
                let h = fhi.map_or(hi, |x| x.min(hi));
                (l <= h).then_some(GeneratorSpec { family: f.name, grade_range: Some([l, h]), grade: None })
            }
        })
        .collect();
    let mut brackets = Vec::new();
    for g in &gens {
        for h in &gens {
            let v = a.bracket_generators(*g, *h)?;
            if v.support().any(|k| !gens.contains(&k)) {
                continue;
            }
            if v.is_zero() && !truncated {
                continue;
            }
            brackets.push(BracketSpec {
                lhs: g.to_string(),
                rhs: h.to_string(),
                value: v.iter().map(|(k, p)| TermSpec { gen: k.to_string(), poly: p.to_string() }).collect(),
            });
        }
    }
    Ok(AlgebraSpec {
        name: a.name(),
        parameters: a.parameters().iter().map(|s| s.to_string()).collect(),
        generators,
        brackets,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::{bracket_gens, HvAb, Virasoro};

    #[test]
    fn unlisted_pairs_follow_skew_or_vanish() {
        let text = r#"{"name": "t", "generators": [{"family": "L"}, {"family": "H"}],
            "brackets": [{"lhs": "L", "rhs": "L", "value": [{"gen": "L", "poly": "d + 2*l"}]},
                         {"lhs": "L", "rhs": "H", "value": [{"gen": "H", "poly": "d + l"}]}]}"#;
        let a = SpecAlgebra::from_json(text).unwrap();
        let (l, h) = (GenId::plain("L"), GenId::plain("H"));
        assert_eq!(bracket_gens(&a, h, l).unwrap(), Element::term(h, Poly::lambda()));
        assert!(bracket_gens(&a, h, h).unwrap().is_zero());
    }

    #[test]
    fn malformed_specs_rejected() {
        assert!(SpecAlgebra::from_json("{").is_err());
        let unknown = r#"{"name": "t", "generators": [{"family": "L"}],
            "brackets": [{"lhs": "L", "rhs": "X", "value": []}]}"#;
        assert!(SpecAlgebra::from_json(unknown).is_err());
        let bad_poly = r#"{"name": "t", "generators": [{"family": "L"}],
            "brackets": [{"lhs": "L", "rhs": "L", "value": [{"gen": "L", "poly": "d + alpha"}]}]}"#;
        assert!(SpecAlgebra::from_json(bad_poly).is_err());
    }

    #[test]
    fn emitted_builtins_reload() {
        let spec = emit_spec(&Virasoro, -1, 8).unwrap();
        let back = SpecAlgebra::from_json(&spec.to_json()).unwrap();
        let l = GenId::plain("L");
        assert_eq!(bracket_gens(&back, l, l).unwrap(), bracket_gens(&Virasoro, l, l).unwrap());
        let hv = HvAb::symbolic();
        let spec = emit_spec(&hv, -1, 3).unwrap();
        assert!(spec.truncated);
        let back = SpecAlgebra::from_json(&spec.to_json()).unwrap();
        assert_eq!(
            bracket_gens(&back, HvAb::h(1), HvAb::h(2)).unwrap(),
            bracket_gens(&hv, HvAb::h(1), HvAb::h(2)).unwrap()
        );
        assert!(matches!(bracket_gens(&back, HvAb::h(2), HvAb::h(3)), Err(Error::OutOfWindow(_))));
    }
}
