//! Versioned JSON documents for every input kind, and their conversion to the core types.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::beckmod::AbGroup;
use crate::error::{invalid, Error, Result};
use crate::fincat::{Edge, FinCat, FinGraph, Morphism};
use crate::multifold::{all_corners, corner_code, NFoldCat};
use crate::trackcat::TrackCatN;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub version: u32,
    #[serde(flatten)]
    pub doc: Document,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "schema", rename_all = "lowercase")]
pub enum Document {
    Graph(GraphDoc),
    Category(CategoryDoc),
    Groupoid(CategoryDoc),
    Nfold(NFoldFile),
    Track(TrackDoc),
    Module(ModuleDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub objects: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<EdgeDoc>,
    /// Identity morphism of each object, in object order.
    pub identities: Vec<String>,
    /// Triples `[g, f, g∘f]` for every composable pair.
    pub composition: Vec<[String; 3]>,
}

/// One corner of an n-fold category: its elements and the structure maps leaving it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerDoc {
    pub corner: Vec<u8>,
    pub elements: Vec<String>,
    /// `faces[dir][i]`, present when `corner[dir] ≥ 1`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[dir][i]`, present when `corner[dir] ≤ 1`.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NFoldDoc {
    pub dim: usize,
    pub corners: Vec<CornerDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    WeaklyGlobular,
    HomotopicallyDiscrete,
    Groupoid,
    Segal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NFoldFile {
    #[serde(flatten)]
    pub nfold: NFoldDoc,
    #[serde(default = "default_claims")]
    pub claims: Vec<Claim>,
}

fn default_claims() -> Vec<Claim> {
    vec![Claim::WeaklyGlobular]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDoc {
    pub src: String,
    pub tgt: String,
    pub nfold: NFoldDoc,
}

/// `g∘f` at corner `corner` of the hom-objects, `f ∈ hom(a,b)`, `g ∈ hom(b,c)`,
/// all elements by their index in the corner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionDoc {
    pub corner: Vec<u8>,
    pub objects: [String; 3],
    pub first: usize,
    pub second: usize,
    pub result: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackDoc {
    pub objects: Vec<String>,
    pub homs: Vec<HomDoc>,
    /// Index of the identity 1-cell of each object in its endo-hom at corner `0…0`.
    pub units: Vec<usize>,
    pub composition: Vec<CompositionDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModuleDoc {
    /// The same group over every cell; `group` lists invariant factors, `0` for `ℤ`.
    Constant {
        group: AbGroup,
    },
    Zero,
}

impl ModuleDoc {
    pub fn group(&self) -> AbGroup {
        match self {
            ModuleDoc::Constant { group } => group.clone(),
            ModuleDoc::Zero => AbGroup::trivial(),
        }
    }
}

pub fn parse(text: &str) -> Result<Document> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if env.version != VERSION {
        return Err(Error::Parse(format!("unsupported schema version {} (expected {VERSION})", env.version)));
    }
    Ok(env.doc)
}

pub fn read(path: &std::path::Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn to_json(doc: &Document) -> String {
    let env = Envelope { version: VERSION, doc: doc.clone() };
    serde_json::to_string_pretty(&env).expect("documents serialize") + "\n"
}

fn position(names: &[String], name: &str, what: &str) -> Result<usize> {
    names.iter().position(|n| n == name).ok_or_else(|| Error::Validation(format!("unknown {what} `{name}`")))
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<FinGraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    id: e.id.clone(),
                    src: position(&self.objects, &e.src, "object")?,
                    tgt: position(&self.objects, &e.tgt, "object")?,
                })
            })
            .collect::<Result<_>>()?;
        FinGraph::new(self.objects.clone(), edges)
    }
}

impl CategoryDoc {
    pub fn to_fincat(&self) -> Result<FinCat> {
        let names: Vec<String> = self.morphisms.iter().map(|m| m.id.clone()).collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| {
                Ok(Morphism {
                    name: m.id.clone(),
                    src: position(&self.objects, &m.src, "object")?,
                    tgt: position(&self.objects, &m.tgt, "object")?,
                })
            })
            .collect::<Result<_>>()?;
        let identity = self.identities.iter().map(|i| position(&names, i, "morphism")).collect::<Result<_>>()?;
        let table = self
            .composition
            .iter()
            .map(|[g, f, h]| {
                Ok((
                    position(&names, g, "morphism")?,
                    position(&names, f, "morphism")?,
                    position(&names, h, "morphism")?,
                ))
            })
            .collect::<Result<_>>()?;
        FinCat::new(self.objects.clone(), morphisms, identity, table)
    }

    pub fn from_fincat(c: &FinCat) -> Self {
        let name = |m: usize| c.morphisms[m].name.clone();
        CategoryDoc {
            objects: c.objects.clone(),
            morphisms: c
                .morphisms
                .iter()
                .map(|m| EdgeDoc { id: m.name.clone(), src: c.objects[m.src].clone(), tgt: c.objects[m.tgt].clone() })
                .collect(),
            identities: c.identity.iter().map(|&i| name(i)).collect(),
            composition: c.table().into_iter().map(|(g, f, h)| [name(g), name(f), name(h)]).collect(),
        }
    }
}

impl NFoldDoc {
    pub fn from_nfold(x: &NFoldCat) -> Self {
        let n = x.dim();
        let corners = all_corners(n)
            .map(|k| {
                let faces = (0..n)
                    .map(|d| {
                        if k[d] >= 1 {
                            (0..=k[d] as usize).map(|i| x.face_map(d, i, &k).to_vec()).collect()
                        } else {
                            vec![]
                        }
                    })
                    .collect();
                let degeneracies = (0..n)
                    .map(|d| {
                        if k[d] <= 1 {
                            (0..=k[d] as usize).map(|i| x.degen_map(d, i, &k).to_vec()).collect()
                        } else {
                            vec![]
                        }
                    })
                    .collect();
                CornerDoc { corner: k.clone(), elements: x.labels(&k).to_vec(), faces, degeneracies }
            })
            .collect();
        NFoldDoc { dim: n, corners }
    }

    pub fn to_nfold(&self) -> Result<NFoldCat> {
        let n = self.dim;
        if n > 4 {
            return invalid(format!("dimension {n} is beyond the supported range 0..=4"));
        }
        let nc = 3usize.pow(n as u32);
        let mut slots: Vec<Option<&CornerDoc>> = vec![None; nc];
        for c in &self.corners {
            if c.corner.len() != n || c.corner.iter().any(|&v| v > 2) {
                return invalid(format!("corner {:?} is not a corner of a {n}-fold category", c.corner));
            }
            let code = corner_code(&c.corner);
            if slots[code].replace(c).is_some() {
                return invalid(format!("corner {:?} listed twice", c.corner));
            }
        }
        let mut labels = Vec::with_capacity(nc);
        let mut faces = vec![Vec::with_capacity(nc); n];
        let mut degens = vec![Vec::with_capacity(nc); n];
        for (code, slot) in slots.into_iter().enumerate() {
            let Some(c) = slot else {
                return invalid(format!("corner {:?} is missing", crate::multifold::corner_of(code, n)));
            };
            if c.faces.len() != n || c.degeneracies.len() != n {
                return invalid(format!(
                    "corner {:?} needs one face and one degeneracy family per direction",
                    c.corner
                ));
            }
            labels.push(c.elements.clone());
            for d in 0..n {
                faces[d].push(c.faces[d].clone());
                degens[d].push(c.degeneracies[d].clone());
            }
        }
        NFoldCat::from_tables(n, labels, faces, degens)
    }
}

impl TrackDoc {
    pub fn from_track(x: &TrackCatN) -> Result<Self> {
        let n = x.dim();
        let no = x.objects().len();
        let xn = x.nfold();
        let mut homs = Vec::new();
        let mut nonempty = BTreeMap::new();
        for a in 0..no {
            for b in 0..no {
                let h = x.hom(a, b)?;
                if h.size(&vec![0; n]) > 0 {
                    nonempty.insert((a, b), ());
                    homs.push(HomDoc {
                        src: x.objects()[a].clone(),
                        tgt: x.objects()[b].clone(),
                        nfold: NFoldDoc::from_nfold(&h),
                    });
                }
            }
        }
        let local = |k1: &[u8], e: usize| {
            let ends = |f: usize| (xn.face(0, 1, k1, f), xn.face(0, 0, k1, f));
            (0..e).filter(|&f| ends(f) == ends(e)).count()
        };
        let mut composition = Vec::new();
        for kp in all_corners(n) {
            let mut k1 = vec![1u8];
            k1.extend_from_slice(&kp);
            let mut k2 = vec![2u8];
            k2.extend_from_slice(&kp);
            for p in 0..xn.size(&k2) {
                let (f, g, h) = (xn.face(0, 2, &k2, p), xn.face(0, 0, &k2, p), xn.face(0, 1, &k2, p));
                let (a, b, c) = (xn.face(0, 1, &k1, f), xn.face(0, 0, &k1, f), xn.face(0, 0, &k1, g));
                composition.push(CompositionDoc {
                    corner: kp.clone(),
                    objects: [x.objects()[a].clone(), x.objects()[b].clone(), x.objects()[c].clone()],
                    first: local(&k1, f),
                    second: local(&k1, g),
                    result: local(&k1, h),
                });
            }
        }
        let k0 = vec![0u8; n + 1];
        let units = (0..no)
            .map(|a| {
                local(
                    &{
                        let mut k = k0.clone();
                        k[0] = 1;
                        k
                    },
                    xn.degen(0, 0, &k0, a),
                )
            })
            .collect();
        Ok(TrackDoc { objects: x.objects().to_vec(), homs, units, composition })
    }

    pub fn to_track(&self) -> Result<TrackCatN> {
        let pos = |s: &str| position(&self.objects, s, "object");
        let mut homs = BTreeMap::new();
        for h in &self.homs {
            let key = (pos(&h.src)?, pos(&h.tgt)?);
            if homs.insert(key, h.nfold.to_nfold()?).is_some() {
                return invalid(format!("hom({},{}) listed twice", h.src, h.tgt));
            }
        }
        let n = match homs.values().next() {
            Some(h) => h.dim(),
            None => return invalid("a track category needs at least one hom-object"),
        };
        let mut table: HashMap<(Vec<u8>, usize, usize, usize, usize, usize), usize> = HashMap::new();
        for c in &self.composition {
            let key =
                (c.corner.clone(), pos(&c.objects[0])?, pos(&c.objects[1])?, pos(&c.objects[2])?, c.first, c.second);
            if table.insert(key, c.result).is_some_and(|r| r != c.result) {
                return invalid(format!("two composites listed at {:?} over {:?}", c.corner, c.objects));
            }
        }
        let no = self.objects.len();
        for kp in all_corners(n) {
            for a in 0..no {
                for b in 0..no {
                    for c in 0..no {
                        let (Some(hab), Some(hbc)) = (homs.get(&(a, b)), homs.get(&(b, c))) else { continue };
                        for f in 0..hab.size(&kp) {
                            for g in 0..hbc.size(&kp) {
                                match (table.get(&(kp.clone(), a, b, c, f, g)), homs.get(&(a, c))) {
                                    (Some(&r), Some(hac)) if r < hac.size(&kp) => {}
                                    _ => {
                                        return invalid(format!(
                                            "composite of {f} in hom({},{}) and {g} in hom({},{}) at {kp:?} is missing or out of range",
                                            self.objects[a], self.objects[b], self.objects[b], self.objects[c]
                                        ))
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        if self.units.len() != no {
            return invalid("every object needs a unit");
        }
        TrackCatN::from_enriched(self.objects.clone(), homs, self.units.clone(), |kp, a, b, c, f, g| {
            table[&(kp.to_vec(), a, b, c, f, g)]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn wrong_version_is_a_parse_error() {
        let e = parse(r#"{"schema":"module","version":7,"kind":"zero"}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_schema_is_a_parse_error() {
        assert_eq!(parse(r#"{"schema":"sheaf","version":1}"#).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn missing_corner_is_rejected() {
        let mut d = NFoldDoc::from_nfold(&fixtures::eq2());
        d.corners.pop();
        assert!(matches!(d.to_nfold(), Err(Error::Validation(_))));
    }

    #[test]
    fn duplicate_corner_is_rejected() {
        let mut d = NFoldDoc::from_nfold(&fixtures::eq2());
        let c = d.corners[0].clone();
        d.corners[1] = c;
        assert!(d.to_nfold().is_err());
    }

    #[test]
    fn missing_composite_is_rejected() {
        let mut d = TrackDoc::from_track(&fixtures::t1()).unwrap();
        d.composition.pop();
        assert!(matches!(d.to_track(), Err(Error::Validation(_))));
    }

    #[test]
    fn unknown_object_name_is_rejected() {
        let mut d = CategoryDoc::from_fincat(&fixtures::arrow());
        d.morphisms[0].src = "nowhere".into();
        assert!(d.to_fincat().is_err());
    }

    #[test]
    fn non_canonical_group_is_rejected() {
        assert!(parse(r#"{"schema":"module","version":1,"kind":"constant","group":[0,2]}"#).is_err());
    }
}
