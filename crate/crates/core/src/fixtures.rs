//! Built-in fixtures shared by tests, the CLI and the acceptance run.

use std::collections::BTreeMap;

use crate::beckmod::AbGroup;
use crate::comonad::ell;
use crate::fincat::{EqRelGroupoid, FinCat, Morphism};
use crate::io::{CategoryDoc, Claim, Document, EdgeDoc, GraphDoc, ModuleDoc, NFoldDoc, NFoldFile, TrackDoc};
use crate::multifold::{nerve_of, NFoldCat};
use crate::trackcat::TrackCatN;

/// The n-fold category with one element at every corner.
pub fn point(n: usize, label: &str) -> NFoldCat {
    NFoldCat::build(n, |_| vec![()], |_, _, _, _| (), |_, _, _, _| (), |_, _| label.to_string())
        .expect("terminal object")
}

pub fn empty(n: usize) -> NFoldCat {
    NFoldCat::build(n, |_| Vec::<()>::new(), |_, _, _, _| (), |_, _, _, _| (), |_, _| String::new())
        .expect("initial object")
}

/// Compose when every non-empty endo-hom is a point: one side is always an identity.
fn unit_compose(_: &[u8], a: usize, b: usize, c: usize, f: usize, g: usize) -> usize {
    if a == b {
        g
    } else if b == c {
        f
    } else {
        unreachable!("no composable pair of non-identity 1-cells")
    }
}

/// Objects `a, b` with point endo-homs, `hom(b,a)` empty and the given `hom(a,b)`.
fn one_arrow_track(hab: NFoldCat) -> TrackCatN {
    let n = hab.dim();
    let mut homs = BTreeMap::new();
    homs.insert((0, 0), point(n, "1a"));
    homs.insert((1, 1), point(n, "1b"));
    homs.insert((0, 1), hab);
    homs.insert((1, 0), empty(n));
    TrackCatN::from_enriched(vec!["a".into(), "b".into()], homs, vec![0, 0], unit_compose)
        .expect("fixture is a valid track category")
}

/// One object whose only cells are identities.
pub fn unit_track(n: usize) -> TrackCatN {
    let mut homs = BTreeMap::new();
    homs.insert((0, 0), point(n, "1o"));
    TrackCatN::from_enriched(vec!["o".into()], homs, vec![0], |_, _, _, _, _, g| g).expect("terminal track category")
}

/// Two parallel 1-cells `u, v: a → b` joined by an invertible 2-cell.
pub fn t1() -> TrackCatN {
    one_arrow_track(nerve_of(&EqRelGroupoid::indiscrete(&["u", "v"]).to_groupoid().cat))
}

/// A single 1-cell `u: a → b` whose hom-object is the fattened point.
pub fn fattened_arrow() -> TrackCatN {
    one_arrow_track(ell(&point(1, "u")).expect("points are weakly globular"))
}

/// Parallel 1-cells `f, g: a → b` with only identity 2-cells; its nerve is a circle.
pub fn parallel_pair_track() -> TrackCatN {
    let g = EqRelGroupoid::new(vec!["f".into(), "g".into()], vec![(0, 0), (1, 1)]).expect("discrete relation");
    one_arrow_track(nerve_of(&g.to_groupoid().cat))
}

/// A single 1-cell `u: a → b` with no non-identity 2-cells.
pub fn arrow_track() -> TrackCatN {
    one_arrow_track(point(1, "u"))
}

/// A single 1-cell `u: a → b` carrying an involutive 2-cell `t: u ⇒ u`.
pub fn involution_track() -> TrackCatN {
    one_arrow_track(nerve_of(&z2_group()))
}

/// A commutative square `a → b → d`, `a → c → d` with diagonal `a → d`, all hom-objects points.
/// Its category of 1-cells is not free.
pub fn square_track() -> TrackCatN {
    let mut homs = BTreeMap::new();
    for a in 0..4 {
        homs.insert((a, a), point(1, &format!("1{a}")));
    }
    for (a, b) in [(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)] {
        homs.insert((a, b), point(1, &format!("h{a}{b}")));
    }
    let objects = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    TrackCatN::from_enriched(objects, homs, vec![0; 4], |_, _, _, _, _, _| 0).expect("commutative square")
}

/// Objects `a, b` with only identity cells.
pub fn discrete_track(n: usize) -> TrackCatN {
    one_arrow_track(empty(n))
}

/// Equivalence relation on `{x, y, z}` with `x ~ y`.
pub fn eq2() -> NFoldCat {
    let g = EqRelGroupoid::new(vec!["x".into(), "y".into(), "z".into()], vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)])
        .expect("equivalence relation");
    nerve_of(&g.to_groupoid().cat)
}

fn plain(objects: &[&str], arrows: &[(&str, usize, usize)], compose: impl Fn(usize, usize) -> usize) -> FinCat {
    let no = objects.len();
    let mut morphisms: Vec<Morphism> =
        objects.iter().enumerate().map(|(i, o)| Morphism { name: format!("1{o}"), src: i, tgt: i }).collect();
    morphisms.extend(arrows.iter().map(|&(nm, s, t)| Morphism { name: nm.into(), src: s, tgt: t }));
    FinCat::from_fn(objects.iter().map(|s| s.to_string()).collect(), morphisms, (0..no).collect(), |g, f| {
        if g < no {
            f
        } else if f < no {
            g
        } else {
            compose(g, f)
        }
    })
    .expect("fixture category")
}

/// `a → b`.
pub fn arrow() -> FinCat {
    plain(&["a", "b"], &[("f", 0, 1)], |_, _| unreachable!())
}

/// `a ⇉ b`.
pub fn pair() -> FinCat {
    plain(&["a", "b"], &[("f", 0, 1), ("g", 0, 1)], |_, _| unreachable!())
}

/// `a → b → c` with its composite `h`.
pub fn chain() -> FinCat {
    plain(&["a", "b", "c"], &[("f", 0, 1), ("g", 1, 2), ("h", 0, 2)], |g, f| {
        assert_eq!((g, f), (4, 3));
        5
    })
}

/// One object with an idempotent `e`.
pub fn loop_idempotent() -> FinCat {
    plain(&["a"], &[("e", 0, 0)], |_, _| 1)
}

pub fn plain_categories() -> Vec<(&'static str, FinCat)> {
    vec![("ARROW", arrow()), ("PAIR", pair()), ("CHAIN", chain())]
}

pub const TRACK_NAMES: [&str; 9] = ["T1", "FAT2", "DISC", "DISC2", "PT", "PAIRT", "ARR", "AUT2", "SQ"];

pub fn track_by_name(name: &str) -> Option<TrackCatN> {
    match name {
        "T1" => Some(t1()),
        "FAT2" => Some(fattened_arrow()),
        "DISC" => Some(discrete_track(1)),
        "DISC2" => Some(discrete_track(2)),
        "PT" => Some(unit_track(1)),
        "PAIRT" => Some(parallel_pair_track()),
        "ARR" => Some(arrow_track()),
        "AUT2" => Some(involution_track()),
        "SQ" => Some(square_track()),
        _ => None,
    }
}

/// The cyclic group of order two as a one-object category.
pub fn z2_group() -> FinCat {
    FinCat::from_fn(
        vec!["u".into()],
        vec![Morphism { name: "1u".into(), src: 0, tgt: 0 }, Morphism { name: "t".into(), src: 0, tgt: 0 }],
        vec![0],
        |g, f| g ^ f,
    )
    .expect("cyclic group of order two")
}

/// `X ⊠ Y`: the (n+m)-fold category with `(X ⊠ Y)_{k,l} = X_k × Y_l`.
pub fn external_product(x: &NFoldCat, y: &NFoldCat) -> NFoldCat {
    let n = x.dim();
    NFoldCat::build(
        n + y.dim(),
        |k| {
            let (kx, ky) = k.split_at(n);
            (0..x.size(kx)).flat_map(|a| (0..y.size(ky)).map(move |b| (a, b))).collect()
        },
        |d, i, k, &(a, b)| {
            let (kx, ky) = k.split_at(n);
            if d < n {
                (x.face(d, i, kx, a), b)
            } else {
                (a, y.face(d - n, i, ky, b))
            }
        },
        |d, i, k, &(a, b)| {
            let (kx, ky) = k.split_at(n);
            if d < n {
                (x.degen(d, i, kx, a), b)
            } else {
                (a, y.degen(d - n, i, ky, b))
            }
        },
        |k, &(a, b)| {
            let (kx, ky) = k.split_at(n);
            format!("{}|{}", x.labels(kx)[a], y.labels(ky)[b])
        },
    )
    .expect("products of n-fold categories")
}

fn indiscrete2() -> NFoldCat {
    nerve_of(&EqRelGroupoid::indiscrete(&["x", "y"]).to_groupoid().cat)
}

/// Well-formed n-fold categories that violate the property they claim.
pub fn corruption_corpus() -> Vec<(&'static str, NFoldCat, Claim)> {
    use Claim::*;
    let arrow = nerve_of(&arrow());
    let z2 = nerve_of(&z2_group());
    vec![
        ("arrow_not_groupoid", arrow.clone(), WeaklyGlobular),
        ("idempotent_not_groupoid", nerve_of(&loop_idempotent()), WeaklyGlobular),
        ("pair_not_groupoid", nerve_of(&pair()), WeaklyGlobular),
        ("z2_not_discrete", z2.clone(), HomotopicallyDiscrete),
        ("chain_not_discrete", nerve_of(&chain()), HomotopicallyDiscrete),
        ("arrow_truncation_not_groupoid", arrow.discrete_last(), WeaklyGlobular),
        ("arrow_times_indiscrete", external_product(&arrow, &indiscrete2()), WeaklyGlobular),
        ("indiscrete_times_z2", external_product(&indiscrete2(), &z2), WeaklyGlobular),
        ("z2_times_indiscrete_not_discrete", external_product(&z2, &indiscrete2()), HomotopicallyDiscrete),
        ("z2_constant_not_discrete", z2.discrete_last(), HomotopicallyDiscrete),
        ("point_times_arrow", external_product(&point(2, "p"), &arrow), WeaklyGlobular),
        ("arrow_vertical", external_product(&point(1, "p"), &arrow).discrete_last(), WeaklyGlobular),
    ]
}

/// Serialized n-fold categories that are not n-fold categories at all.
pub fn structural_corruptions() -> Vec<(&'static str, NFoldDoc)> {
    let base = NFoldDoc::from_nfold(&eq2());
    let edit = |f: &dyn Fn(&mut NFoldDoc)| {
        let mut d = base.clone();
        f(&mut d);
        d
    };
    vec![
        ("face_out_of_range", edit(&|d| d.corners[1].faces[0][0][0] = 99)),
        ("face_identity_broken", edit(&|d| d.corners[0].degeneracies[0][0][0] = 2)),
        (
            "composite_removed",
            edit(&|d| {
                d.corners[2].elements.pop();
                for m in d.corners[2].faces[0].iter_mut() {
                    m.pop();
                }
            }),
        ),
    ]
}

fn track_doc(x: &TrackCatN) -> Document {
    Document::Track(TrackDoc::from_track(x).expect("fixture serializes"))
}

fn nfold_doc(x: &NFoldCat, claims: Vec<Claim>) -> Document {
    Document::Nfold(NFoldFile { nfold: NFoldDoc::from_nfold(x), claims })
}

/// Every shipped input file, by path relative to the fixture directory.
pub fn fixture_documents() -> Vec<(String, Document)> {
    let graph = |objects: &[&str], edges: &[(&str, &str, &str)], bound| GraphDoc {
        objects: objects.iter().map(|s| s.to_string()).collect(),
        edges: edges.iter().map(|&(id, s, t)| EdgeDoc { id: id.into(), src: s.into(), tgt: t.into() }).collect(),
        bound,
    };
    let module = |g: AbGroup| Document::Module(ModuleDoc::Constant { group: g });
    let mut out: Vec<(String, Document)> = vec![
        ("disc.json".into(), Document::Category(CategoryDoc::from_fincat(&FinCat::discrete(&["a", "b"])))),
        ("arrow.json".into(), Document::Category(CategoryDoc::from_fincat(&arrow()))),
        ("chain.json".into(), Document::Category(CategoryDoc::from_fincat(&chain()))),
        ("pair.json".into(), Document::Graph(graph(&["a", "b"], &[("u", "a", "b"), ("v", "a", "b")], 2))),
        ("loope.json".into(), Document::Graph(graph(&["a"], &[("e", "a", "a")], 3))),
        (
            "eq2.json".into(),
            Document::Groupoid(CategoryDoc::from_fincat(
                &EqRelGroupoid::new(
                    vec!["x".into(), "y".into(), "z".into()],
                    vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)],
                )
                .expect("equivalence relation")
                .to_groupoid()
                .cat,
            )),
        ),
        ("eq2_nerve.json".into(), nfold_doc(&eq2(), vec![Claim::WeaklyGlobular, Claim::HomotopicallyDiscrete])),
        ("t1.json".into(), track_doc(&t1())),
        ("fat2.json".into(), track_doc(&fattened_arrow())),
        ("disc_track.json".into(), track_doc(&discrete_track(1))),
        ("arr.json".into(), track_doc(&arrow_track())),
        ("aut2.json".into(), track_doc(&involution_track())),
        ("square.json".into(), track_doc(&square_track())),
        ("z2.json".into(), module(AbGroup::new(&[2]))),
        ("z.json".into(), module(AbGroup::new(&[0]))),
        ("zero.json".into(), Document::Module(ModuleDoc::Zero)),
    ];
    for (name, x, claim) in corruption_corpus() {
        out.push((format!("corrupt/{name}.json"), nfold_doc(&x, vec![claim])));
    }
    for (name, d) in structural_corruptions() {
        out.push((
            format!("corrupt/{name}.json"),
            Document::Nfold(NFoldFile { nfold: d, claims: vec![Claim::WeaklyGlobular] }),
        ));
    }
    out
}
