//! Verification suites. Each check prints one `pass`/`FAIL` line.

use std::time::Instant;

use anyhow::{bail, Result};
use qmut::catalog::{classify, closure_graph, e82_closure, e82_mutation_graph, Family};
use qmut::cycle::{
    build_exchange_matrix, congruence_mutate, mutate_cycle, verify_block_identities, CycleBlocks,
};
use qmut::fixtures::{self, Fixture};
use qmut::triangulation::{
    diagonal_name, enumerate_triangulations, flip, g_invariant_triangulations, quotient_quiver,
    triangulation_to_quiver,
};
use qmut::{fz_mutate_quiver, is_isomorphic, mutate_at_vertex_via_cover, skew_matrix};

#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
    failures: usize,
}

impl Report {
    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        let name = name.into();
        if !passed {
            self.failures += 1;
        }
        self.lines
            .push(format!("{} {name}", if passed { "pass" } else { "FAIL" }));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.lines.push(format!("     {}", text.into()));
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push_str(&format!(
            "\n{} check(s), {} failure(s)\n",
            self.lines.iter().filter(|l| !l.starts_with(' ')).count(),
            self.failures
        ));
        s
    }

    pub fn failed(&self) -> bool {
        self.failures > 0
    }
}

fn cycle_fixtures(name: &str) -> Result<Vec<Fixture>> {
    if name == "all" {
        return Ok(fixtures::cycle_fixtures());
    }
    match fixtures::named(name) {
        Some(f) if f.spec.is_some() => Ok(vec![f]),
        Some(_) => bail!("fixture `{name}` has no cycle annotation"),
        None => bail!(
            "unknown fixture `{name}`; known: {}",
            fixtures::NAMES.join(", ")
        ),
    }
}

pub fn blocks(fixture: &str, report: &mut Report) -> Result<()> {
    for f in cycle_fixtures(fixture)? {
        let blocks = CycleBlocks::new(&f.qp.quiver, f.spec.as_ref().unwrap())?;
        for c in verify_block_identities(&blocks).checks {
            report.check(format!("{}: {}", f.name, c.name), c.passed);
        }
    }
    Ok(())
}

pub fn congruence(fixture: &str, report: &mut Report) -> Result<()> {
    for f in cycle_fixtures(fixture)? {
        let spec = f.spec.as_ref().unwrap();
        let blocks = CycleBlocks::new(&f.qp.quiver, spec)?;
        let s = build_exchange_matrix(&blocks);
        let by_matrix = congruence_mutate(&blocks.m, &s.twisted)?;
        let by_rule = skew_matrix(&mutate_cycle(&f.qp.quiver, spec)?, &blocks.order)?;
        report.check(
            format!("{}: S M S^t equals the cycle rule", f.name),
            by_matrix == by_rule,
        );
    }
    Ok(())
}

pub fn examples(report: &mut Report) -> Result<()> {
    for f in fixtures::cycle_fixtures() {
        let out = mutate_cycle(&f.qp.quiver, f.spec.as_ref().unwrap())?;
        report.check(
            format!("{}: cycle mutation matches the expected quiver", f.name),
            is_isomorphic(&out, &f.expected).is_some(),
        );
    }
    for f in [fixtures::a9_base(), fixtures::d6_base()] {
        let out =
            mutate_at_vertex_via_cover(&f.qp, f.vertex.unwrap(), f.preset.as_ref().unwrap(), None)?;
        report.check(
            format!("{}: covered mutation matches the expected quiver", f.name),
            is_isomorphic(&out.quiver, &f.expected).is_some(),
        );
    }
    Ok(())
}

pub fn e82(report: &mut Report) -> Result<()> {
    let start = Instant::now();
    let steps = e82_closure()?;
    let escaped: Vec<_> = steps.iter().filter(|s| s.to.is_none()).collect();
    for s in &escaped {
        report.note(format!(
            "{} variant {} at vertex {} left the catalog",
            s.from, s.variant, s.vertex
        ));
    }
    report.check(
        format!("{} mutations stay among the seven letters", steps.len()),
        escaped.is_empty(),
    );
    let found = closure_graph(&steps);
    let edges: Vec<String> = found.iter().map(|(x, y)| format!("{x}-{y}")).collect();
    report.note(format!("edges: {}", edges.join(" ")));
    report.check(
        "mutation graph equals the reference graph",
        found == e82_mutation_graph(),
    );
    report.note(format!("elapsed {:.2?}", start.elapsed()));
    Ok(())
}

pub fn flips(max_ngon: usize, report: &mut Report) -> Result<()> {
    for ngon in 4..=max_ngon {
        let (mut total, mut bad) = (0usize, 0usize);
        for t in enumerate_triangulations(ngon) {
            let q = triangulation_to_quiver(&t);
            for &d in t.diagonals() {
                total += 1;
                let by_flip = triangulation_to_quiver(&flip(&t, d)?);
                let by_mutation = fz_mutate_quiver(&q, &diagonal_name(d))?;
                if is_isomorphic(&by_flip, &by_mutation).is_none() {
                    bad += 1;
                }
            }
        }
        report.check(
            format!("{ngon}-gon: {total} flips agree with mutation"),
            bad == 0,
        );
    }
    Ok(())
}

pub fn invariant(max_n: usize, report: &mut Report) -> Result<()> {
    for n in 1..=max_n {
        let ts = g_invariant_triangulations(n);
        let mut ok = true;
        for t in &ts {
            let qp = quotient_quiver(t)?;
            ok &= classify(&qp).is_some_and(|d| d.family == Family::A3n3 && d.n == n);
        }
        report.check(
            format!(
                "n={n}: {} invariant triangulations, all quotients in A3n3",
                ts.len()
            ),
            ok,
        );
    }
    Ok(())
}
