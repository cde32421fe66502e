//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. All randomness is seeded.
//!
//! Pinned tolerances: every comparison is exact (matrix identities over the
//! ring, groups compared with torsion); the time budgets are the ones printed
//! next to each criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gysin::cli::{self, Document};
use gysin::complexes::ChainComplex;
use gysin::cones::{cone_ses, grid_lemma57, induced_on_homology};
use gysin::corpus::{
    self, morse_bott_hopf, prng, random_complex_with_basis, random_filtered_complex, random_homotopy_instance,
    random_map_between, random_mb_datum, random_ses_morphism, random_two_line, ComplexParams,
};
use gysin::equivariant::{
    borel_trivial_action, bv_delta, corollary_certificate, gysin_theorem11, phi_e1, sawc_datum, sawc_model, MapStatus,
};
use gysin::exactlin::span::maps_equal;
use gysin::exactlin::{IntMatrix, Ring};
use gysin::spectra::{check_cone_equals_gysin, filtered_order, homotopy_page_agreement};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::Value;

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_cli(args: &[&str], stdin: &[u8]) -> (i32, Vec<u8>, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut input = stdin;
    let mut argv = vec!["gysin"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut input, &mut out, &mut err);
    (code, out, String::from_utf8_lossy(&err).into_owned())
}

fn bounded(m: &IntMatrix, b: i64) -> bool {
    m.entries().iter().all(|x| x.abs() <= BigInt::from(b))
}

fn slot_group(doc: &Value, name: &str, degree: i64) -> Option<(usize, Vec<i128>)> {
    doc["slots"].as_array()?.iter().find_map(|s| {
        if s["name"] == name && s["degree"] == degree {
            let g = &s["group"];
            let torsion = g["torsion"]
                .as_array()
                .map(|t| t.iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect())
                .unwrap_or_default();
            Some((g["free_rank"].as_u64()? as usize, torsion))
        } else {
            None
        }
    })
}

/// 1. `example hopf | gysin` against a direct Smith-form computation of the
/// four-generator total complex.
fn criterion_1() -> Outcome {
    let (code, hopf, err) = run_cli(&["example", "hopf"], b"");
    ensure(code == 0, || format!("example hopf failed: {err}"))?;
    let (code, out, err) = run_cli(&["gysin", "--format", "json"], &hopf);
    ensure(code == 0, || format!("gysin failed: {err}"))?;
    let doc: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;

    // total complex of S^2 -> S^2 (shift -2): A'_{k-1} + A_k, so one
    // generator in each degree 0..3 and d_2 = f = [1] from A_2 to A'_0
    let ranks = (0..4).map(|k| (k, 1usize)).collect();
    let diffs = [(2i64, vec![vec![1i128]])].into_iter().collect();
    let oracle = homology_z(&ranks, &diffs);
    for k in 0..4 {
        let got = slot_group(&doc, "tot", k).ok_or(format!("no H{k}(tot) in the sequence"))?;
        ensure(got == oracle[&k], || format!("H{k}(tot) = {got:?}, oracle {:?}", oracle[&k]))?;
    }
    let dmaps: Vec<&Value> = doc["maps"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|m| m["name"].as_str().unwrap().starts_with("d2"))
        .filter(|m| m["matrix"].as_array().is_some_and(|r| !r.is_empty() && !r[0].as_array().unwrap().is_empty()))
        .collect();
    ensure(dmaps.len() == 1, || format!("expected one nonzero d2 map, found {}", dmaps.len()))?;
    let entry = dmaps[0]["matrix"][0][0].as_str().unwrap();
    ensure(entry == "1" || entry == "-1", || format!("d2 = [{entry}], expected +-1"))?;
    Ok(format!("H(tot) = Z,0,0,Z matches the Smith-form oracle, d2 = [{entry}]"))
}

/// 2. Cone sequence equals Gysin sequence on random two-line complexes.
fn criterion_2() -> Outcome {
    let mut identities = 0;
    let mut nonzero_f = 0;
    for seed in 0..100u64 {
        for ring in [Ring::Integers, Ring::Rationals] {
            let t = random_two_line(&mut prng(seed), 10, ring);
            ensure(t.a().total_rank() <= 10 && t.aprime().total_rank() <= 10, || format!("seed {seed}: line too long"))?;
            for c in [t.a(), t.aprime()] {
                for k in c.degrees() {
                    ensure(bounded(&c.diff(k), 3), || format!("seed {seed}: entry outside [-3, 3]"))?;
                }
            }
            for k in t.a().degrees() {
                ensure(bounded(&t.f().mat(k), 3), || format!("seed {seed}: entry of f outside [-3, 3]"))?;
            }
            if !t.f().is_zero() {
                nonzero_f += 1;
            }
            let r = check_cone_equals_gysin(&t).map_err(|e| format!("seed {seed} over {ring}: {e}"))?;
            identities += r.identities;
        }
    }
    Ok(format!("200 instances ({nonzero_f} with f != 0), {identities} matrix identities"))
}

/// 3. The connecting map of the cone sequence is the induced map.
fn criterion_3() -> Outcome {
    let mut nonzero = 0;
    for seed in 0..200u64 {
        let mut rng = prng(seed);
        let shift = (seed % 4) as i64 - 2;
        let ring = if seed % 5 == 0 { Ring::Rationals } else { Ring::Integers };
        let f = random_map_between(&mut rng, 6, shift, ring);
        ensure(f.source().total_rank() + f.target().total_rank() <= 12, || format!("seed {seed}: too large"))?;
        let ses = cone_ses(&f).map_err(|e| e.to_string())?;
        for k in f.source().degrees() {
            let conn = ses.connecting(k).map_err(|e| format!("seed {seed}: {e}"))?;
            let ind = induced_on_homology(&f, k).map_err(|e| format!("seed {seed}: {e}"))?;
            let tgt = f.target().homology_sq(k + shift);
            ensure(maps_equal(&tgt, &conn, &ind), || format!("seed {seed}, degree {k}: delta = {conn}, f_* = {ind}"))?;
            if !tgt.reduce_matrix(&ind).is_zero() {
                nonzero += 1;
            }
        }
    }
    Ok(format!("200 maps, {nonzero} nonzero connecting maps all equal to f_*"))
}

/// 4. The grid lemma on random morphisms of short exact sequences.
fn criterion_4() -> Outcome {
    let mut squares = 0;
    let mut marked = 0;
    for seed in 0..50u64 {
        let m = random_ses_morphism(&mut prng(seed), 9, Ring::Integers);
        let r = grid_lemma57(&m).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(r.passed(), || format!("seed {seed}: {}", r.failures.join("; ")))?;
        squares += r.squares_checked;
        marked += r.marked_degrees.len();
    }
    Ok(format!("50 morphisms, {squares} squares, marked square checked {marked} times"))
}

/// 5. Page recursion and convergence.
fn criterion_5() -> Outcome {
    let mut positions = 0;
    for seed in 0..100u64 {
        let mut rng = prng(seed);
        let ring = if seed % 2 == 0 { Ring::Integers } else { Ring::Rationals };
        let levels = 1 + (seed % 4) as usize;
        let fc = random_filtered_complex(&mut rng, 10, levels, ring);
        let sp = fc.spectral_pages(fc.r_infinity()).map_err(|e| e.to_string())?;
        sp.check_recursion().map_err(|e| format!("seed {seed}: {e}"))?;
        sp.check_convergence().map_err(|e| format!("seed {seed}: {e}"))?;
        // independent rank count over Q
        let cq = fc.complex().change_ring(Ring::Rationals).map_err(|e| e.to_string())?;
        let betti = oracle_betti(&cq);
        for (n, b) in betti {
            let total: usize = sp
                .e_infinity
                .iter()
                .filter(|(&(p, q), _)| p + q == n)
                .map(|(_, e)| e.group().free_rank)
                .sum();
            ensure(total == b, || format!("seed {seed}: E^inf ranks {total} in degree {n}, oracle {b}"))?;
        }
        positions += sp.entries.len();
    }
    let mut two_line = 0;
    for seed in 0..50u64 {
        let t = random_two_line(&mut prng(1000 + seed), 8, Ring::Integers);
        let fc = t.filtered();
        let sp = fc.spectral_pages(fc.r_infinity().max(4)).map_err(|e| e.to_string())?;
        sp.check_recursion().map_err(|e| format!("two-line seed {seed}: {e}"))?;
        ensure(sp.degenerates_from(3), || format!("two-line seed {seed}: nonzero d^r for r >= 3"))?;
        two_line += 1;
    }
    Ok(format!("100 filtered complexes ({positions} page entries), {two_line} two-line complexes degenerate at page 3"))
}

/// 6. Homotopies of order k give equal page maps from page k + 1 on.
fn criterion_6() -> Outcome {
    let mut differ_below = 0;
    for order in [1usize, 0] {
        for seed in 0..50u64 {
            let h = random_homotopy_instance(&mut prng(seed), 9, order, Ring::Integers);
            let found = filtered_order(&h.k, &h.f.source, &h.f.target);
            ensure(found <= order, || format!("seed {seed}: K has order {found}"))?;
            let r_inf = h.f.source.r_infinity();
            for r in order + 1..=r_inf + 1 {
                let same = homotopy_page_agreement(&h.f, &h.g, &h.k, r).map_err(|e| format!("seed {seed}: {e}"))?;
                ensure(same, || format!("order {order}, seed {seed}: page maps differ at r = {r}"))?;
            }
            if order == 1 && !homotopy_page_agreement(&h.f, &h.g, &h.k, 1).map_err(|e| e.to_string())? {
                differ_below += 1;
            }
        }
    }
    Ok(format!("100 instances agree from page order + 1; {differ_below} order-1 instances already differ on page 1"))
}

/// 7. Borel model of a trivial action.
fn criterion_7() -> Outcome {
    let mut torsion_seen = 0;
    for seed in 0..20u64 {
        let mut rng = prng(seed);
        let mut params = ComplexParams::new(6);
        params.degrees = 3;
        let c = random_complex_with_basis(&mut rng, params, Ring::Integers).complex;
        let n = 1 + (seed % 4) as usize;
        let (model, report) = borel_trivial_action(&c, n).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(!report.d_map_degrees.is_empty(), || format!("seed {seed}: D map not checked"))?;
        let hc = oracle_homology_z(&c);
        let hm = oracle_homology_z(&model);
        for (&k, got) in &hm {
            let mut free = 0;
            let mut torsion = Vec::new();
            for m in 0..=n as i64 {
                if let Some((f, t)) = hc.get(&(k - 2 * m)) {
                    free += f;
                    torsion.extend(t.iter().copied());
                }
            }
            torsion.sort();
            let mut got_t = got.1.clone();
            got_t.sort();
            ensure(got.0 == free && got_t == torsion, || format!("seed {seed}: H{k} = {got:?}, sum of shifts gives ({free}, {torsion:?})"))?;
            let lib = group_parts(&model.homology(k));
            ensure(lib == *got, || format!("seed {seed}: library H{k} = {lib:?}, oracle {got:?}"))?;
            if !torsion.is_empty() {
                torsion_seen += 1;
            }
        }
        let (bigger, _) = borel_trivial_action(&c, n + 1).map_err(|e| e.to_string())?;
        let hb = oracle_homology_z(&bigger);
        for k in 0..=2 * n as i64 {
            ensure(hm.get(&k) == hb.get(&k), || format!("seed {seed}: H{k} changes from N = {n} to {}", n + 1))?;
        }
    }
    Ok(format!("20 complexes, N in 1..4, {torsion_seen} groups with torsion, stable for k <= 2N"))
}

/// 8. The Morse-Bott pipeline.
fn criterion_8() -> Outcome {
    let d = morse_bott_hopf(Ring::Integers);
    let g = gysin_theorem11(&d).map_err(|e| e.to_string())?;
    let hopf = corpus::hopf(Ring::Integers).gysin().map_err(|e| e.to_string())?;
    for k in 0..4 {
        let a = g.les.find("tot", k).map(|i| g.les.slots[i].group.clone());
        let b = hopf.les.find("tot", k).map(|i| hopf.les.slots[i].group.clone());
        ensure(a.is_some() && a == b, || format!("H{k}(tot): Morse-Bott {a:?}, Hopf {b:?}"))?;
    }
    let groups = |les: &gysin::cones::LongExactSequence| les.slots.iter().map(|s| (s.degree, s.group.clone())).collect::<Vec<_>>();
    ensure(groups(&g.les) == groups(&hopf.les), || "the two sequences have different groups".into())?;
    let nonzero_d: Vec<_> = g.d_maps.values().filter(|m| !m.is_zero()).collect();
    ensure(
        nonzero_d.len() == 1 && nonzero_d[0].get(0, 0).abs() == num_rational::BigRational::from_integer(1.into()),
        || "D is not +-1".into(),
    )?;

    let mut phi_ok = 0;
    for seed in 0..50u64 {
        let d = random_mb_datum(&mut prng(seed), 10, Ring::Integers);
        phi_e1(&d).map_err(|e| format!("phi, seed {seed}: {e}"))?;
        phi_ok += 1;
    }

    let mut corpus_data = vec![morse_bott_hopf(Ring::Integers)];
    corpus_data.extend((0..50u64).map(|s| random_mb_datum(&mut prng(s), 10, Ring::Integers)));
    corpus_data.extend((1..=3).map(sawc_datum));
    let mut bv_degrees = 0;
    for (i, d) in corpus_data.iter().enumerate() {
        let r = bv_delta(d).map_err(|e| format!("bv, datum {i}: {e}"))?;
        bv_degrees += r.degrees.len();
    }
    Ok(format!(
        "Morse-Bott Hopf reproduces criterion 1, phi certified on {phi_ok} data, BV checked on {} data ({bv_degrees} degrees)",
        corpus_data.len()
    ))
}

/// 9. Kunneth over fields.
fn criterion_9() -> Outcome {
    let mut checked = 0;
    for seed in 0..100u64 {
        let ring = if seed % 2 == 0 { Ring::Rationals } else { Ring::PrimeField(2) };
        let mut rng = prng(seed);
        let c = corpus::random_complex(&mut rng, 5, ring);
        let d = corpus::random_complex(&mut rng, 5, ring);
        let cd = c.tensor(&d).map_err(|e| e.to_string())?;
        let bc = oracle_betti(&c);
        let bd = oracle_betti(&d);
        if cd.is_empty_range() {
            continue;
        }
        for k in cd.degrees() {
            let want: usize = bc
                .iter()
                .map(|(i, x)| x * bd.get(&(k - i)).copied().unwrap_or(0))
                .sum();
            let got = cd.homology(k).dim();
            ensure(got == want, || format!("seed {seed} over {ring}: dim H{k} = {got}, expected {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("100 pairs over Q and F2, {checked} degrees"))
}

/// 10. The corollary mechanization on the synthetic vanishing model.
fn criterion_10() -> Outcome {
    let mut isos = 0;
    let mut chains = 0;
    for n in 1..=3 {
        let inst = sawc_model(n).map_err(|e| e.to_string())?;
        let cert = corollary_certificate(&inst).map_err(|e| format!("n = {n}: {e}"))?;
        isos += cert.gysin_column.statuses.iter().filter(|s| **s == MapStatus::Iso).count();
        ensure(cert.vanishing.len() == inst.classes.len(), || format!("n = {n}: not every class certified"))?;
        chains += cert.vanishing.len();
    }
    Ok(format!("solver forced {isos} shift isomorphisms, {chains} vanishing chains certified"))
}

/// 11. Reproducibility of the seeded generators (the time budget is checked
/// by the driver).
fn criterion_11() -> Outcome {
    let a = corpus::generate(&"random_complex(7,10)".parse().unwrap(), Ring::Integers).unwrap();
    let b = corpus::generate(&"random_complex(7,10)".parse().unwrap(), Ring::Integers).unwrap();
    let (ja, jb) = (Document::from(a).to_json(), Document::from(b).to_json());
    ensure(ja == jb, || "random_complex(7,10) differs between runs".into())?;
    for name in ["random_two_line", "random_ses_morphism", "random_mb_datum"] {
        let (_, x, _) = run_cli(&["example", name, "--seed", "11", "--size", "8"], b"");
        let (_, y, _) = run_cli(&["example", name, "--seed", "11", "--size", "8"], b"");
        ensure(!x.is_empty() && x == y, || format!("{name} is not reproducible"))?;
    }
    let _: ChainComplex = corpus::sphere(Ring::Integers, 1);
    Ok("seeded generators give identical bytes".into())
}

fn main() {
    let criteria: Vec<(u32, &str, Duration, fn() -> Outcome)> = vec![
        (1, "Hopf/Gysin oracle", Duration::from_secs(1), criterion_1),
        (2, "cone sequence = Gysin sequence", Duration::from_secs(60), criterion_2),
        (3, "cone connecting map = f_*", Duration::from_secs(60), criterion_3),
        (4, "grid lemma", Duration::from_secs(60), criterion_4),
        (5, "page recursion and convergence", Duration::from_secs(120), criterion_5),
        (6, "order-k homotopy page theorem", Duration::from_secs(120), criterion_6),
        (7, "trivial-action Borel model", Duration::from_secs(60), criterion_7),
        (8, "Morse-Bott pipeline", Duration::from_secs(120), criterion_8),
        (9, "Kunneth", Duration::from_secs(60), criterion_9),
        (10, "corollary mechanization", Duration::from_secs(1), criterion_10),
        (11, "reproducibility", Duration::from_secs(10), criterion_11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let dt = t0.elapsed();
        let outcome = match outcome {
            Ok(msg) if dt > budget => Err(format!("{msg}; took {:.2} s, budget {} s", dt.as_secs_f64(), budget.as_secs())),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg} ({:.2} s)", dt.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg} ({:.2} s)", dt.as_secs_f64());
            }
        }
    }
    let total = start.elapsed();
    if total > Duration::from_secs(300) {
        failed += 1;
        println!("suite FAIL  total time {:.1} s exceeds 300 s", total.as_secs_f64());
    } else {
        println!("suite PASS  total time {:.1} s (budget 300 s)", total.as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
