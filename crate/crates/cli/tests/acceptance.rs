//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use aimloop::conjecture::{
    check_conjecture, check_goals, is_aim, lc_profile, quotient_oracle, AimMethod, GoalId,
};
use aimloop::enumerate::{all_loops, EnumOutput, EnumSpec, Mode};
use aimloop::group::DEFAULT_CLOSURE_CAP;
use aimloop::structure::{
    all_subloops, center, commutant, inn, mlt, nilpotency_class, nuclei, upper_central_series,
};
use aimloop::{Fixture, LoopTable, SubsetMask};

const CAP: usize = DEFAULT_CLOSURE_CAP;
const COUNTS: [u64; 6] = [1, 1, 1, 4, 56, 9408];
const HINT: &str = "x * (y * x) = (x * y) * x.";

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("aimloop").chain(args.iter().copied());
    let code = aimloop_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf8 stdout"),
        String::from_utf8(err).expect("utf8 stderr"),
    )
}

/// Everything the exhaustive criteria need about one loop.
struct Facts {
    table: LoopTable,
    aim_group: bool,
    aim_identities: bool,
    n_normal: bool,
    q_mod_n_abelian_group: bool,
    q_mod_z_group: bool,
    goals_n: bool,
    goals_z: bool,
    goals_standard: bool,
    class_at_most_2: bool,
    lc: [bool; 4],
}

fn facts(q: LoopTable) -> Facts {
    let oracle = quotient_oracle(&q);
    let goals = check_goals(&q);
    Facts {
        aim_group: is_aim(&q, AimMethod::ViaGroup, CAP).expect("Inn within cap"),
        aim_identities: is_aim(&q, AimMethod::ViaIdentities, CAP).expect("identities"),
        n_normal: oracle.n_normal,
        q_mod_n_abelian_group: oracle.q_mod_n_abelian_group,
        q_mod_z_group: oracle.q_mod_z_group,
        goals_n: goals.quotient_by_nucleus_abelian_group(),
        goals_z: goals.quotient_by_center_group(),
        goals_standard: goals.all_hold(&GoalId::STANDARD),
        class_at_most_2: nilpotency_class(&q).expect("series").at_most(2),
        lc: lc_profile(&q),
        table: q,
    }
}

fn mask(q: &LoopTable, labels: &str) -> SubsetMask {
    SubsetMask::from_labels(q.order(), labels).expect("valid labels")
}

fn criterion_1() -> Check {
    let started = Instant::now();
    let (code, text, _) = cli(&["analyze", "--fixture", "example1"]);
    ensure(code == 0, || format!("analyze exited {code}"))?;
    for line in [
        "Mlt order: 24",
        "Inn: (), (3,4), (5,6), (3,4)(5,6)",
        "left nucleus: {1,2}",
        "right nucleus: {1,2}",
        "middle nucleus: {1,2}",
        "nucleus: {1,2}",
        "commutant: {1,2}",
        "center: {1,2}",
        "subloops: {1}, {1,2}, {1,2,3,4,5,6}",
        "upper central series: {1} < {1,2} < {1,2,3,4,5,6}",
        "class: 2",
        "AIM (inner mapping group): true",
        "AIM (commutation identities): true",
    ] {
        ensure(text.lines().any(|l| l == line), || {
            format!("report lacks `{line}`")
        })?;
    }

    let q = Fixture::Example1.table();
    let m = mlt(&q, CAP).map_err(|e| e.to_string())?;
    ensure(m.order() == 24, || format!("|Mlt| = {}", m.order()))?;
    let i = inn(&q, CAP).map_err(|e| e.to_string())?;
    let listed: Vec<String> = i
        .sorted_for_display()
        .iter()
        .map(|p| p.to_string())
        .collect();
    ensure(listed == ["()", "(3,4)", "(5,6)", "(3,4)(5,6)"], || {
        format!("Inn = {listed:?}")
    })?;
    ensure(i.same_elements(&m.stabilizer(0)), || {
        "Inn differs from the stabilizer of 1".into()
    })?;
    let z = mask(&q, "{1,2}");
    let nc = nuclei(&q);
    for (name, got) in [
        ("left nucleus", nc.left),
        ("right nucleus", nc.right),
        ("middle nucleus", nc.middle),
        ("nucleus", nc.nucleus),
        ("commutant", commutant(&q)),
        ("center", center(&q)),
    ] {
        ensure(got == z, || format!("{name} = {got}"))?;
    }
    let subs = all_subloops(&q).map_err(|e| e.to_string())?;
    ensure(subs == [mask(&q, "{1}"), z, SubsetMask::full(6)], || {
        format!("subloops {subs:?}")
    })?;
    let series = upper_central_series(&q).map_err(|e| e.to_string())?;
    ensure(
        series.terms == [mask(&q, "{1}"), z, SubsetMask::full(6)],
        || format!("series {:?}", series.terms),
    )?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("|Mlt| = 24, |Inn| = 4, class 2, {elapsed:.2?}"))
}

fn criterion_2(all: &[Facts], scan: Duration) -> Check {
    let bad: Vec<_> = all
        .iter()
        .filter(|f| f.aim_group != f.aim_identities)
        .collect();
    ensure(bad.is_empty(), || {
        format!(
            "{} mismatches, first:\n{}",
            bad.len(),
            bad[0].table.render()
        )
    })?;
    let aim = all.iter().filter(|f| f.aim_group).count();
    Ok(format!(
        "{} loops, {aim} AIM, 0 mismatches, scan {scan:.1?}",
        all.len()
    ))
}

fn criterion_3(all: &[Facts]) -> Check {
    let normal: Vec<_> = all.iter().filter(|f| f.n_normal).collect();
    let bad_n = normal
        .iter()
        .filter(|f| f.goals_n != f.q_mod_n_abelian_group)
        .count();
    let bad_z = all.iter().filter(|f| f.goals_z != f.q_mod_z_group).count();
    ensure(bad_n == 0 && bad_z == 0, || {
        format!("{bad_n} Q/N mismatches, {bad_z} Q/Z mismatches")
    })?;
    Ok(format!(
        "{} loops with N normal, Q/N and Q/Z routes agree on all {}",
        normal.len(),
        all.len()
    ))
}

fn criterion_4(all: &[Facts]) -> Check {
    let small: Vec<_> = all.iter().filter(|f| f.class_at_most_2).collect();
    let bad = small.iter().filter(|f| !f.aim_group).count();
    ensure(bad == 0, || {
        format!("{bad} loops of class <= 2 are not AIM")
    })?;
    Ok(format!("{} loops of class <= 2, all AIM", small.len()))
}

fn criterion_5() -> Check {
    let mut groups: Vec<Fixture> = (2..=12).map(Fixture::Cyclic).collect();
    groups.push(Fixture::Klein4);
    groups.extend((3..=6).map(Fixture::Dihedral));
    groups.push(Fixture::Quaternion8);
    for g in &groups {
        let q = g.table();
        ensure(q.is_associative(), || format!("{g} is not a group"))?;
        let i = inn(&q, CAP).map_err(|e| e.to_string())?;
        let z = center(&q).len();
        ensure(i.order() * z == q.order(), || {
            format!("{g}: |Inn| = {}, n/|Z| = {}/{z}", i.order(), q.order())
        })?;
        let class2 = nilpotency_class(&q).map_err(|e| e.to_string())?.at_most(2);
        ensure(i.is_abelian() == class2, || {
            format!(
                "{g}: Inn abelian = {}, class <= 2 = {class2}",
                i.is_abelian()
            )
        })?;
    }
    Ok(format!("{} groups", groups.len()))
}

fn criterion_6(all: &[Facts]) -> Check {
    let lc_aim: Vec<_> = all.iter().filter(|f| f.lc[0] && f.aim_group).collect();
    let bad = lc_aim.iter().filter(|f| !f.goals_standard).count();
    ensure(bad == 0, || format!("{bad} AIM LC loops fail a goal"))?;
    let split = all
        .iter()
        .filter(|f| f.lc.iter().any(|&b| b != f.lc[0]))
        .count();
    ensure(split == 0, || {
        format!("LC identities disagree on {split} loops")
    })?;
    let lc = all.iter().filter(|f| f.lc[0]).count();
    Ok(format!(
        "{lc} LC loops, {} of them AIM, all seven goals hold; identities agree everywhere",
        lc_aim.len()
    ))
}

fn criterion_7(all: &[Facts]) -> Check {
    let mut checked = 0;
    for f in all.iter().filter(|f| f.aim_group) {
        let r =
            check_conjecture(&f.table, CAP).map_err(|e| format!("{e}\n{}", f.table.render()))?;
        ensure(r.consistent_with_conjecture, || {
            format!("inconsistent with conjecture:\n{}", f.table.render())
        })?;
        checked += 1;
    }
    Ok(format!("{checked} AIM loops, all consistent"))
}

fn added_lines(base: &str, text: &str) -> Option<Vec<String>> {
    // `base` must survive as a subsequence; return what was inserted
    let mut base_lines = base.lines().peekable();
    let mut added = Vec::new();
    for line in text.lines() {
        if base_lines.peek() == Some(&line) {
            base_lines.next();
        } else {
            added.push(line.to_string());
        }
    }
    base_lines.peek().is_none().then_some(added)
}

fn criterion_8(dir: &Path) -> Check {
    let golden = include_str!("../../core/data/aim_problem.in");
    let export = |extra: &[&str], name: &str| -> Result<String, String> {
        let path = dir.join(name);
        let path_str = path.to_str().expect("utf8 path");
        let mut args = vec!["export", "-o", path_str];
        args.extend_from_slice(extra);
        let (code, _, err) = cli(&args);
        ensure(code == 0, || {
            format!("export {extra:?} exited {code}: {err}")
        })?;
        fs::read_to_string(&path).map_err(|e| e.to_string())
    };
    let default = export(&[], "default.in")?;
    ensure(default == golden, || {
        "default export differs from the golden file".into()
    })?;

    let lc = export(&["--variety", "LC"], "lc.in")?;
    let added = added_lines(golden, &lc).ok_or("LC export drops golden lines")?;
    ensure(added.len() == 4, || format!("LC adds {added:?}"))?;
    ensure(
        added[0].trim() == "x * (x * (y * z)) = (x * (x * y)) * z.",
        || format!("first LC line `{}`", added[0]),
    )?;
    let end = lc.find("end_of_list.").expect("assumption block");
    ensure(added.iter().all(|l| lc[..end].contains(l.as_str())), || {
        "LC lines outside the assumptions block".into()
    })?;

    let aux = export(&["--aux", "left-inner-inverse"], "aux.in")?;
    let added = added_lines(golden, &aux).ok_or("aux export drops golden lines")?;
    ensure(
        added.len() == 1 && added[0].trim() == "L(x,y,z) \\ 1 = L(x \\ 1,y,z).",
        || format!("aux adds {added:?}"),
    )?;
    Ok("default byte-identical; LC +4 lines; aux +1 line".into())
}

fn criterion_9(dir: &Path) -> Check {
    let problem = dir.join("p9.in");
    let orderings = dir.join("orderings.txt");
    let script = dir.join("mock.txt");
    let p = |x: &Path| x.to_str().expect("utf8 path").to_string();
    let (code, _, err) = cli(&["export", "-o", &p(&problem)]);
    ensure(code == 0, || format!("export failed: {err}"))?;
    fs::write(
        &orderings,
        "# three opaque directives\nlex([1,*,\\,/]).\nlex([*,1,\\,/]).\nlex([/,\\,*,1]).\n",
    )
    .map_err(|e| e.to_string())?;
    fs::write(
        &script,
        format!(
            "1 | proved:no | requires: | emits-hints:\n\
             2 | proved:no | requires: | emits-hints: {HINT}\n\
             3 | proved:yes | requires: {HINT} | emits-hints:\n\
             1 | proved:yes | requires: | emits-hints: | goal: {HINT}\n"
        ),
    )
    .map_err(|e| e.to_string())?;
    let adapter = format!("mock:{}", p(&script));
    let args = [
        "p9loop",
        "--input",
        &p(&problem),
        "--orderings",
        &p(&orderings),
        "--adapter",
        &adapter,
        "--eliminate",
        "--json",
    ];
    let (code, first, err) = cli(&args);
    ensure(code == 0, || format!("p9loop exited {code}: {err}"))?;
    let v: serde_json::Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    ensure(v["proved"] == true && v["iteration"] == 3, || {
        format!("verdict {} at {}", v["proved"], v["iteration"])
    })?;
    ensure(
        v["injected_assumptions"] == serde_json::json!([HINT]),
        || format!("injected {}", v["injected_assumptions"]),
    )?;
    ensure(
        v["iterations"][2]["injected"] == serde_json::json!([HINT]),
        || "iteration 3 did not receive the hint".into(),
    )?;
    let elim = &v["eliminated"];
    ensure(
        elim.as_array().map(Vec::len) == Some(1)
            && elim[0]["assumption"] == HINT
            && elim[0]["proved"] == true
            && v["underived"] == serde_json::json!([]),
        || format!("elimination {elim}, underived {}", v["underived"]),
    )?;
    for _ in 0..3 {
        let (_, again, _) = cli(&args);
        ensure(again == first, || "output differs between runs".into())?;
    }
    Ok("Proved(3) with the hint injected; hint derived; 4 identical runs".into())
}

/// Normalized Latin squares by brute force over all fillings of the inner cells.
fn naive_count(n: usize) -> u64 {
    if n <= 1 {
        return 1;
    }
    let cells = (n - 1) * (n - 1);
    let mut count = 0;
    let total = n.pow(cells as u32);
    for code in 0..total {
        let mut t = vec![0usize; n * n];
        for i in 0..n {
            t[i] = i;
            t[i * n] = i;
        }
        let mut c = code;
        for r in 1..n {
            for s in 1..n {
                t[r * n + s] = c % n;
                c /= n;
            }
        }
        let latin = (0..n).all(|r| {
            let mut row = 0u64;
            let mut col = 0u64;
            for s in 0..n {
                row |= 1 << t[r * n + s];
                col |= 1 << t[s * n + r];
            }
            row.count_ones() as usize == n && col.count_ones() as usize == n
        });
        count += u64::from(latin);
    }
    count
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Pairwise isomorphism classes by trying every identity-fixing bijection.
fn brute_force_classes(loops: &[LoopTable]) -> usize {
    let n = loops[0].order();
    let rest: Vec<usize> = (1..n).collect();
    let maps: Vec<Vec<usize>> = permutations(&rest)
        .into_iter()
        .map(|p| std::iter::once(0).chain(p).collect())
        .collect();
    let iso = |a: &LoopTable, b: &LoopTable| {
        maps.iter()
            .any(|f| (0..n).all(|x| (0..n).all(|y| f[a.mul(x, y)] == b.mul(f[x], f[y]))))
    };
    let mut reps: Vec<&LoopTable> = Vec::new();
    for q in loops {
        if !reps.iter().any(|r| iso(r, q)) {
            reps.push(q);
        }
    }
    reps.len()
}

fn criterion_10() -> Check {
    for (i, &expected) in COUNTS.iter().enumerate() {
        let n = i + 1;
        let mut seen = BTreeMap::new();
        for threads in [1, 2, 4] {
            match EnumSpec::new(n, Mode::Count)
                .run(threads)
                .map_err(|e| e.to_string())?
            {
                EnumOutput::Count(c) => {
                    seen.insert(threads, c);
                }
                other => return Err(format!("unexpected output {other:?}")),
            }
        }
        ensure(seen.values().all(|&c| c == expected), || {
            format!("order {n}: counts by thread count {seen:?}, expected {expected}")
        })?;
        if n <= 4 {
            let naive = naive_count(n);
            ensure(naive == expected, || {
                format!("order {n}: naive generator gives {naive}")
            })?;
        }
    }
    let (code, out, _) = cli(&["enumerate", "--order", "5", "--count"]);
    ensure(code == 0 && out.trim() == "56", || {
        format!("CLI count `{}`", out.trim())
    })?;
    for (n, expected) in [(4, 2), (5, 6)] {
        let loops = all_loops(n).map_err(|e| e.to_string())?;
        let classes = brute_force_classes(&loops);
        ensure(classes == expected, || {
            format!("order {n}: {classes} classes")
        })?;
    }
    Ok("counts 1,1,1,4,56,9408 at 1/2/4 threads; naive agrees to order 4; classes 2 and 6".into())
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let started = Instant::now();
    let all: Vec<Facts> = (1..=6)
        .flat_map(|n| all_loops(n).expect("enumeration"))
        .map(facts)
        .collect();
    let scan = started.elapsed();
    assert_eq!(all.len() as u64, COUNTS.iter().sum::<u64>());

    let criteria: Vec<Criterion> = vec![
        ("worked example", Box::new(criterion_1)),
        (
            "AIM by group = AIM by identities",
            Box::new(|| criterion_2(&all, scan)),
        ),
        ("quotient routes agree", Box::new(|| criterion_3(&all))),
        ("class <= 2 implies AIM", Box::new(|| criterion_4(&all))),
        ("group facts", Box::new(criterion_5)),
        (
            "AIM LC loops satisfy the goals",
            Box::new(|| criterion_6(&all)),
        ),
        (
            "AIM loops consistent with conjecture",
            Box::new(|| criterion_7(&all)),
        ),
        (
            "prover input golden file",
            Box::new(|| criterion_8(dir.path())),
        ),
        ("p9loop mechanism", Box::new(|| criterion_9(dir.path()))),
        ("enumeration oracle", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
