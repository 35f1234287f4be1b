//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fiet::keane::{
    aux_dependent_entries, build_variant_path, displayed_theta, expected_column_sums, example_datum, shifted_datum,
    theta_gamma_p, BlockComposition, Construction, ParameterSchedule, ParameterTriple, PathVariant,
};
use fiet::rational::{ratio, to_f64, Rational};
use fiet::rauzy::{apply_path_comb, induced_subpermutation};
use fiet::verify::{birkhoff_frequencies, midpoints, oracle_crosscheck, verify_construction, OrbitStatus};
use fiet::{Fiet, FietCombinatorics};
use num_traits::Zero;

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into(), notes: Vec::new() }
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if elapsed > budget {
        out.pass = false;
    }
    out.detail = format!("{} ({:.2?}, budget {:?})", out.detail, elapsed, budget);
    out
}

fn triples() -> Vec<ParameterTriple> {
    let schedule = ParameterSchedule::relaxed();
    vec![
        ParameterTriple::small([2, 3, 4, 3, 2]).unwrap(),
        ParameterTriple::small([7, 11, 13, 11, 7]).unwrap(),
        schedule.triple(1).unwrap(),
        schedule.triple(2).unwrap(),
    ]
}

fn restricted_cycle(datum: &FietCombinatorics, t: &ParameterTriple, variant: PathVariant) -> (bool, Vec<String>) {
    let path = build_variant_path(t, variant);
    let mut state = datum.clone();
    let mut seen = Vec::new();
    for _ in 0..3 {
        let next = apply_path_comb(&state, &path).expect("path applies");
        seen.push(induced_subpermutation(&state, &next, &[2, 3, 4]).expect("labels present").to_string());
        state = next;
    }
    (&state == datum, seen)
}

fn ac1() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut ok = 0;
        let ts = triples();
        for t in &ts {
            let all = [PathVariant::ThreeLoop, PathVariant::Listed]
                .iter()
                .all(|&v| apply_path_comb(&example_datum(), &build_variant_path(t, v)).ok() == Some(shifted_datum()));
            if all {
                ok += 1;
            }
        }
        Outcome::new(ok == ts.len() && ok >= 3, format!("{ok} of {} triples reach the shifted datum", ts.len()))
    })
}

fn ac2() -> Outcome {
    let expected = ["{4 2 3 / 3 4 2}", "{3 4 2 / 2 3 4}", "{2 3 4 / 4 2 3}"];
    let mut pass = true;
    let mut shown = String::new();
    for t in triples() {
        for variant in [PathVariant::ThreeLoop, PathVariant::Listed] {
            let (closed, seen) = restricted_cycle(&example_datum(), &t, variant);
            pass &= closed && seen == expected;
            shown = seen.join(" -> ");
        }
    }
    Outcome::new(pass, format!("three passes return to the datum; restrictions {shown}"))
}

fn ac3() -> Outcome {
    let ts = triples();
    let mut entry_ok = 0;
    let mut sums_ok = 0;
    for t in &ts {
        let (_, theta) = theta_gamma_p(t, PathVariant::ThreeLoop).expect("path applies");
        if theta == displayed_theta(&t.p1, &t.p2, &t.p3) {
            entry_ok += 1;
        }
        if theta.column_sums() == expected_column_sums(t) {
            sums_ok += 1;
        }
    }
    let pass = entry_ok == ts.len() && sums_ok == ts.len();
    let mut out = Outcome::new(
        pass,
        format!("three-loop word: {entry_ok}/{} entrywise matches, {sums_ok}/{} column-sum matches", ts.len(), ts.len()),
    );
    let t = &ts[1];
    let entries = aux_dependent_entries(&t.p1, &t.p2, &t.p3).expect("path applies");
    let shown: Vec<String> = entries.iter().map(|(i, j)| format!("({i},{j})")).collect();
    out = out.note(format!("five-loop word: {} entries depend on p4/p5: {}", entries.len(), shown.join(" ")));
    let (_, listed) = theta_gamma_p(t, PathVariant::Listed).expect("path applies");
    let listed_sums: Vec<String> = listed.column_sums().iter().map(|s| s.to_string()).collect();
    let expected: Vec<String> = expected_column_sums(t).iter().map(|s| s.to_string()).collect();
    out.note(format!(
        "five-loop word at {t:?}: column sums [{}], expected [{}]",
        listed_sums.join(", "),
        expected.join(", ")
    ))
}

fn lemma_run(c: &Construction, m: usize, budget: Duration, label: &str) -> Outcome {
    timed(budget, || {
        let report = verify_construction(c, m).expect("construction runs");
        let total = report.records.iter().filter(|r| r.lemma.starts_with("lemma")).count();
        let positive = report
            .records
            .iter()
            .filter(|r| r.lemma.starts_with("lemma") && r.margin > Rational::zero())
            .count();
        let min = report
            .records
            .iter()
            .filter(|r| r.lemma.starts_with("lemma"))
            .min_by(|a, b| a.margin.cmp(&b.margin))
            .map(|r| format!("{} {} margin {:.3e}", r.lemma, r.item, to_f64(&r.margin)))
            .unwrap_or_default();
        let mut out = Outcome::new(
            positive == total && total > 0,
            format!("{label}: {positive} of {total} records with positive margin up to depth {m}; smallest {min}"),
        );
        for c in &report.unsupported {
            out = out.note(format!("{label}: schedule does not meet {} (used by {})", c.name, c.used_by));
        }
        out
    })
}

fn ac4() -> Vec<Outcome> {
    vec![
        lemma_run(&Construction::new(ParameterSchedule::relaxed()), 3, Duration::from_secs(30), "relaxed"),
        lemma_run(&Construction::new(ParameterSchedule::strict()), 1, Duration::from_secs(600), "strict"),
    ]
}

fn ac5() -> Outcome {
    let c = Construction::new(ParameterSchedule::relaxed());
    let report = verify_construction(&c, 3).expect("construction runs");
    let sep: Vec<_> = report.records.iter().filter(|r| r.lemma == "separation").collect();
    let holding = sep.iter().filter(|r| r.holds).count();
    let failing: Vec<String> = sep.iter().filter(|r| !r.holds).map(|r| r.item.clone()).collect();
    let detail = if failing.is_empty() {
        format!("{holding} of {} separation records hold exactly", sep.len())
    } else {
        format!("{holding} of {} separation records hold; failing: {}", sep.len(), failing.join(", "))
    };
    Outcome::new(failing.is_empty() && !sep.is_empty(), detail)
}

fn ac6() -> Outcome {
    let s = oracle_crosscheck(1000, 20260101);
    let mut out = Outcome::new(
        s.all_pass() && s.trials == 1000,
        format!(
            "{} of {} random steps match the first-return map; {} of {} two-interval runs match Euclid",
            s.passes,
            s.trials,
            s.euclid_checks as usize - s.euclid_failures.len(),
            s.euclid_checks
        ),
    );
    for f in s.failures.iter().chain(&s.euclid_failures).take(3) {
        out = out.note(format!("trial {} seed {}: {}", f.trial, f.seed, f.description));
    }
    out
}

fn ac7() -> Outcome {
    const HORIZON: u64 = 100_000;
    timed(Duration::from_secs(300), || {
        let alpha = Construction::new(ParameterSchedule::relaxed()).limit_vectors(1).expect("construction runs").alpha;
        let f = Fiet::from_parts(example_datum(), alpha.coords().to_vec()).expect("positive lengths");
        let report = birkhoff_frequencies(&f, &midpoints(&f), &[HORIZON]).expect("valid starts");
        let terminated = report.rows.iter().filter(|r| r.status != OrbitStatus::Ok).count();
        let Some((i, j, spread)) = report.max_l1_spread(HORIZON) else {
            return Outcome::new(false, "fewer than two complete orbits");
        };
        let best = |label: usize| {
            report
                .rows
                .iter()
                .filter(|r| r.status == OrbitStatus::Ok)
                .map(|r| (r.start_index, r.frequencies_f64()[label - 1]))
                .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
        };
        let (s7, f7) = best(7);
        let (s5, f5) = best(5);
        Outcome::new(
            spread > ratio(1, 10),
            format!("largest L1 spread {:.4} between starts {i} and {j} at horizon {HORIZON}", to_f64(&spread)),
        )
        .note(format!("largest frequency of 7 is {f7:.4} from start {s7}; of 5 is {f5:.4} from start {s5}"))
        .note(format!("{terminated} orbits hit an excluded endpoint"))
    })
}

fn ac8() -> Outcome {
    let series = Construction::new(ParameterSchedule::relaxed()).limit_series(4, None).expect("construction runs");
    let decreasing = series.windows(2).all(|w| w[1].contraction_diameter < w[0].contraction_diameter);
    let shown: Vec<String> = series
        .windows(2)
        .map(|w| format!("m={}: -{:.2e}", w[0].m, to_f64(&(&w[0].contraction_diameter - &w[1].contraction_diameter))))
        .collect();
    Outcome::new(decreasing && series.len() == 4, format!("diameter decreases exactly: {}", shown.join(", ")))
}

fn threaded_note() -> String {
    let c = Construction::new(ParameterSchedule::relaxed()).with_composition(BlockComposition::Threaded);
    match verify_construction(&c, 3) {
        Ok(r) => format!(
            "threaded blocks: {} of {} records fail at depth 3",
            r.failures().count(),
            r.records.len()
        ),
        Err(e) => format!("threaded blocks: {e}"),
    }
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = vec![("AC1 combinatorial fidelity", ac1()), ("AC2 period three", ac2())];
    results.push(("AC3 matrix fidelity", ac3()));
    let mut four = ac4().into_iter();
    results.push(("AC4 lemma suite (relaxed)", four.next().unwrap()));
    results.push(("AC4 lemma suite (strict)", four.next().unwrap()));
    results.push(("AC5 measure separation", ac5()));
    results.push(("AC6 oracle equivalence", ac6()));
    results.push(("AC7 birkhoff evidence", ac7()));
    results.push(("AC8 contraction", ac8()));
    let mut failed = 0;
    for (name, out) in &results {
        println!("{} {name}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        for n in &out.notes {
            println!("     note: {n}");
        }
        if !out.pass {
            failed += 1;
        }
    }
    println!("     note: {}", threaded_note());
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
