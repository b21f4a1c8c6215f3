//! One line per acceptance criterion. Wall-clock budgets are part of each criterion:
//! a run that is correct but over budget is reported as a failure.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trackcoh::beckmod::{build_emn, check_module_axioms, verify_em, AbGroup, BeckModule};
use trackcoh::cohomology::{
    column_cohomology, h0_oracle, les, replacement_iso, ses_levelwise, smith_normal_form, Column, Fault, Mat, TowerData,
};
use trackcoh::comonad::{
    comonad_law_audit, ell, ell_n_audit, ell_n_of_category, freeness_audit, k_hom, simplicial_identity_audit, Tower,
};
use trackcoh::fixtures::*;
use trackcoh::multifold::{all_corners, is_homotopically_discrete, is_weakly_globular, NFoldCat};
use trackcoh::trackcat::TrackCatN;
use trackcoh::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn e2s(e: Error) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Smallest bound in `1..=3` the truncation guard accepts.
fn tower_data(x: &TrackCatN, depth: usize) -> Result<(usize, TowerData), String> {
    let mut last = String::new();
    for bound in 1..=3 {
        match TowerData::new(x, bound, depth) {
            Ok(d) => return Ok((bound, d)),
            Err(e @ Error::Truncation { .. }) => last = e.to_string(),
            Err(e) => return Err(e.to_string()),
        }
    }
    Err(last)
}

fn c1_comonad_laws() -> Outcome {
    let mut checked = 0;
    for (name, x) in
        [("T1", t1()), ("DISC", discrete_track(1)), ("DISC2", discrete_track(2)), ("FAT2", fattened_arrow())]
    {
        let mut t = Tower::new(&x, 4).map_err(e2s)?;
        let r = comonad_law_audit(&mut t).map_err(e2s)?;
        ensure(r.ok(), || format!("{name}: {:?}", r.witness))?;
        checked += r.checked;
    }
    Ok(format!("{checked} instances, L=4"))
}

fn c2_simplicial() -> Outcome {
    let mut checked = 0;
    // FAT2 at S=3 is 184M instances; it runs at S=2
    for (name, x, depth) in [("T1", t1(), 3), ("FAT2", fattened_arrow(), 2)] {
        let mut t = Tower::new(&x, 1).map_err(e2s)?;
        let corners: Vec<Vec<u8>> = all_corners(x.dim()).collect();
        let r = simplicial_identity_audit(&mut t, depth, &corners).map_err(e2s)?;
        ensure(r.ok(), || format!("{name}: {:?}", r.witness))?;
        checked += r.checked;
    }
    Ok(format!("{checked} identities, T1 at S=3, FAT2 at S=2"))
}

fn c3_freeness() -> Outcome {
    for (name, x) in [("T1", t1()), ("FAT2", fattened_arrow())] {
        let mut t = Tower::new(&x, 1).map_err(e2s)?;
        for j in 1..=3 {
            let r = freeness_audit(&mut t, j).map_err(e2s)?;
            ensure(r.ok(), || format!("{name} level {j}: {:?}", r.witness))?;
        }
    }
    let cats = plain_categories();
    for (name, a) in &cats {
        for n in 1..=2 {
            ell_n_audit(a, n, 8).map_err(|e| format!("L_{n}({name}): {e}"))?;
        }
    }
    Ok(format!("levels 1-3 of T1, FAT2; L_n(A) for {} categories, n=1,2", cats.len()))
}

fn em_modules() -> Result<Vec<(&'static str, BeckModule)>, String> {
    Ok(vec![
        ("OFF(T1,Z/2)", BeckModule::off_diagonal(&t1(), &AbGroup::cyclic(2)).map_err(e2s)?),
        ("OFF(ARR,Z/2)", BeckModule::off_diagonal(&arrow_track(), &AbGroup::cyclic(2)).map_err(e2s)?),
        ("ZERO(T1)", BeckModule::zero(&t1()).map_err(e2s)?),
    ])
}

fn c4_em_table() -> Outcome {
    let mut rows = 0;
    for (name, m) in em_modules()? {
        for n in 2..=3 {
            let em = build_emn(&m, n).map_err(e2s)?;
            let r = verify_em(&em);
            for key in ["(c) multinerve table", "p along module direction = dQ"] {
                let c = r.get(key).ok_or_else(|| format!("{name} n={n}: {key} not run"))?;
                ensure(c.ok, || format!("{name} n={n}: {key}: {:?}", c.witness))?;
            }
            rows += 1;
        }
    }
    Ok(format!("{rows} (module, n) pairs"))
}

fn c5_module_axioms() -> Outcome {
    let mut mods = em_modules()?;
    mods.push(("CONST(T1,Z/2)", BeckModule::constant(&t1(), &AbGroup::cyclic(2)).map_err(e2s)?));
    for (name, m) in &mods {
        let r = check_module_axioms(m);
        ensure(r.ok(), || format!("{name}: {:?}", r.failures()))?;
        let g = m.group_object().check();
        for key in ["(a) associativity", "(b) commutativity", "(c) inverse", "(d) zero", "mu Delta phi = phi"] {
            let c = g.get(key).ok_or_else(|| format!("{name}: {key} not run"))?;
            ensure(c.ok, || format!("{name}: {key}: {:?}", c.witness))?;
        }
        for n in 2..=3 {
            if *name == "CONST(T1,Z/2)" && n == 3 {
                continue;
            }
            let r = verify_em(&build_emn(m, n).map_err(e2s)?);
            ensure(r.ok(), || format!("{name} E^({n}): {:?}", r.failures()))?;
        }
    }
    // a corrupted addition must be caught
    let mut g = BeckModule::constant(&t1(), &AbGroup::cyclic(3)).map_err(e2s)?.group_object();
    let one = g.labels.iter().position(|l| l.ends_with("|1")).ok_or("no element 1")?;
    g.mu.insert((one, one), g.sigma[g.rho[one]]);
    ensure(!g.check().ok(), || "corrupted addition accepted".into())?;
    Ok(format!("{} modules, corrupted addition rejected", mods.len()))
}

fn c6_dd_and_h0() -> Outcome {
    let mut n = 0;
    for name in TRACK_NAMES {
        let x = track_by_name(name).ok_or(name)?;
        let (bound, data) = tower_data(&x, 2)?;
        for a in [AbGroup::cyclic(2), AbGroup::integers()] {
            for col in [Column::Alg, Column::Aq] {
                let cc = data.chain_complex(col, 2, true).map_err(e2s)?;
                let c = cc.dd_zero();
                ensure(c.ok, || format!("{name} {col:?}: {:?}", c.witness))?;
                let (h, _) = column_cohomology(&data, col, &a, 0).map_err(e2s)?;
                let oracle = h0_oracle(&x, col, bound, &a).map_err(e2s)?;
                ensure(h[0] == oracle, || format!("{name} {col:?} {a}: H^0 = {} but oracle {}", h[0], oracle))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} (fixture, column, coefficients) cases over {} fixtures", TRACK_NAMES.len()))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    // fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let (mut sign, mut prev) = (1, 1i128);
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors `D_k / D_{k-1}` from gcds of `k×k` minors.
fn invariant_factors(a: &[Vec<i128>]) -> Vec<i128> {
    let (m, n) = (a.len(), a[0].len());
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=m.min(n) {
        let mut g = 0;
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let minor: Vec<Vec<i128>> = rows.iter().map(|&r| cols.iter().map(|&c| a[r][c]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn to_i128(m: &Mat) -> Result<Vec<Vec<i128>>, String> {
    m.e.iter()
        .map(|row| row.iter().map(|x| i128::try_from(x).map_err(|_| format!("entry {x} overflows"))).collect())
        .collect()
}

fn mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

fn c7_snf() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..200 {
        let (m, n) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let snf = smith_normal_form(&Mat::from_i64(m, n, &a));
        let a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let (d, u, v) = (to_i128(&snf.d)?, to_i128(&snf.u)?, to_i128(&snf.v)?);
        ensure(mul(&mul(&u, &a), &v) == d, || format!("trial {trial}: U A V != D for {a:?}"))?;
        ensure(det(&u).abs() == 1 && det(&v).abs() == 1, || format!("trial {trial}: transform not unimodular"))?;
        for i in 0..m {
            for j in 0..n {
                ensure(i == j || d[i][j] == 0, || format!("trial {trial}: off-diagonal entry"))?;
            }
        }
        let diag: Vec<i128> = snf.diagonal().iter().map(|x| i128::try_from(x).unwrap()).collect();
        ensure(diag == invariant_factors(&a), || {
            format!("trial {trial}: {diag:?} vs oracle {:?} for {a:?}", invariant_factors(&a))
        })?;
    }
    Ok("200 matrices up to 6x6, entries in [-9,9]".into())
}

fn c8_ses() -> Outcome {
    let data = TowerData::new(&t1(), 1, 2).map_err(e2s)?;
    let a = AbGroup::cyclic(2);
    for s in 0..=2 {
        let r = ses_levelwise(&data, s, &a).map_err(e2s)?;
        ensure(r.ok(), || format!("s={s}: {:?}", r.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>()))?;
        ensure(r.orders.is_some(), || format!("s={s}: orders not computed"))?;
    }
    Ok("T1, Z/2, s=0,1,2".into())
}

fn c9_les() -> Outcome {
    let mut slots = 0;
    for (name, x) in [("T1", t1()), ("FAT2", fattened_arrow())] {
        let data = TowerData::new(&x, 1, 3).map_err(e2s)?;
        for a in [AbGroup::cyclic(2), AbGroup::integers()] {
            let r = les(&data, &a, 2, Fault::None).map_err(e2s)?;
            ensure(r.ok(), || format!("{name} {a}: {:?}", r.slots.iter().filter(|s| !s.exact).collect::<Vec<_>>()))?;
            slots += r.slots.len();
        }
    }
    // on a fixture with nonzero connecting maps a corrupted δ must be caught
    let data = TowerData::new(&involution_track(), 1, 3).map_err(e2s)?;
    for fault in [Fault::ZeroConnecting, Fault::DoubleConnecting] {
        let r = les(&data, &AbGroup::integers(), 2, fault).map_err(e2s)?;
        ensure(!r.exact(), || format!("AUT2: {fault:?} not detected"))?;
    }
    Ok(format!("{slots} slots exact; corrupted connecting maps detected"))
}

fn c10_replacement() -> Outcome {
    let mut seen = Vec::new();
    // AUT2 is the fixture with nonzero groups
    for (name, x) in [("T1", t1()), ("FAT2", fattened_arrow()), ("AUT2", involution_track())] {
        for a in [AbGroup::cyclic(2), AbGroup::integers()] {
            let r = replacement_iso(&x, &a, 2, 1).map_err(e2s)?;
            ensure(r.ok(), || format!("{name} {a}: {:?}", r.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>()))?;
            seen.push(format!("{name}/{a}: {} = {}", r.aq, r.alg));
        }
    }
    Ok(seen.join("; "))
}

fn c11_checkers() -> Outcome {
    let mut wg: Vec<(String, NFoldCat)> = vec![("eq2".into(), eq2()), ("ell(eq2)".into(), ell(&eq2()).map_err(e2s)?)];
    let mut hd: Vec<(String, NFoldCat)> = vec![("eq2".into(), eq2())];
    for name in TRACK_NAMES {
        let x = track_by_name(name).ok_or(name)?;
        let k = x.objects().len();
        for a in 0..k {
            for b in 0..k {
                wg.push((format!("{name} hom({a},{b})"), x.hom(a, b).map_err(e2s)?));
            }
        }
    }
    let mut t = Tower::new(&t1(), 2).map_err(e2s)?;
    t.enumerate(1).map_err(e2s)?;
    let kh = k_hom(&t, 0, 1).map_err(e2s)?;
    wg.push(("K(T1) hom".into(), kh.clone()));
    hd.push(("K(T1) hom".into(), kh));
    for (name, a) in plain_categories() {
        let l = ell_n_of_category(&a, 2, 8).map_err(e2s)?;
        let k = l.objects().len();
        for x in 0..k {
            for y in 0..k {
                hd.push((format!("L_2({name}) hom({x},{y})"), l.hom(x, y).map_err(e2s)?));
            }
        }
    }
    for (name, x) in &wg {
        ensure(is_weakly_globular(x).ok, || format!("wg rejects {name}"))?;
    }
    for (name, x) in &hd {
        is_homotopically_discrete(x).map_err(|r| format!("hd rejects {name}: {r}"))?;
    }
    let corpus = corruption_corpus();
    ensure(corpus.len() >= 10, || format!("corpus has {} cases", corpus.len()))?;
    for (name, x, claim) in &corpus {
        let rejected = match claim {
            trackcoh::io::Claim::WeaklyGlobular => !is_weakly_globular(x).ok,
            trackcoh::io::Claim::HomotopicallyDiscrete => is_homotopically_discrete(x).is_err(),
            other => return Err(format!("{name}: unexpected claim {other:?}")),
        };
        ensure(rejected, || format!("corruption {name} accepted"))?;
    }
    Ok(format!("accepted {} wg and {} hd objects, rejected {} corruptions", wg.len(), hd.len(), corpus.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 comonad laws", 10, c1_comonad_laws),
        ("2 simplicial identities", 30, c2_simplicial),
        ("3 freeness of the tower and of L_n(A)", 5, c3_freeness),
        ("4 EM multinerve table and truncation", 5, c4_em_table),
        ("5 module and EM axioms", 5, c5_module_axioms),
        ("6 d∘d = 0 and degree 0 against the equalizer", 10, c6_dd_and_h0),
        ("7 Smith normal form against determinantal divisors", 10, c7_snf),
        ("8 levelwise short exact sequence", 60, c8_ses),
        ("9 long exact sequence", 300, c9_les),
        ("10 free-base replacement isomorphism", 600, c10_replacement),
        ("11 wg/hd checkers and corruption corpus", 10, c11_checkers),
    ];
    let only: Option<String> = std::env::args().nth(1).filter(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, budget, run) in criteria {
        if only.as_deref().is_some_and(|o| !name.starts_with(&format!("{o} "))) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > Duration::from_secs(budget) => Err(format!("over budget ({d})")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failed += 1;
                ("FAIL", e.clone())
            }
        };
        println!("{tag} criterion {name}: {detail} [{:.2}s / {budget}s]", took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
